//! Frozen outputs. Regenerate with `UPDATE_GOLDEN=1 cargo test --test golden`.

use std::path::PathBuf;

use cubology::counting::{gods_number_lower_bound, tuned_lower_bound};
use cubology::decomposition::cached_atlas;
use cubology::group_oracle::{bfs_states, random_word};
use cubology::{decompose, CubeSpec, CubeState};
use serde_json::{json, Value};

fn check(name: &str, actual: Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let text = serde_json::to_string_pretty(&actual).unwrap() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, text).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(text, expected, "{name} changed");
}

#[test]
fn atlases() {
    for n in 2..=5 {
        let atlas = cached_atlas(CubeSpec::new(n).unwrap());
        let orbits: Vec<Value> = atlas
            .orbits
            .iter()
            .map(|o| json!({ "kind": o.kind.to_string(), "slots": o.slots }))
            .collect();
        check(&format!("atlas_{n}.json"), json!(orbits));
    }
}

#[test]
fn scramble_decompositions() {
    for n in 2..=5 {
        let spec = CubeSpec::new(n).unwrap();
        let moves = random_word(spec, 40, 2024);
        let state = CubeState::solved(spec).apply_sequence(&moves).unwrap();
        let tuple = decompose(&state, &cached_atlas(spec)).unwrap();
        check(
            &format!("scramble_{n}.json"),
            json!({ "moves": moves.to_notation(n), "tuple": tuple }),
        );
    }
}

#[test]
fn bound_ceilings() {
    let plain: Vec<u64> = (2..=7).map(|n| gods_number_lower_bound(n, 64).unwrap().ceiling).collect();
    let tuned: Vec<u64> = (2..=7).map(|n| tuned_lower_bound(n, 64).unwrap().ceiling).collect();
    assert_eq!(plain, [7, 15, 34, 50, 75, 98]);
    assert_eq!(tuned, [8, 16, 35, 51, 77, 100]);
}

#[test]
fn move_balls() {
    let two = bfs_states(CubeSpec::new(2).unwrap(), 3, 1_000_000).unwrap();
    assert_eq!(two.per_depth, [1, 12, 114, 924]);
    let three = bfs_states(CubeSpec::new(3).unwrap(), 3, 1_000_000).unwrap();
    assert_eq!(three.per_depth, [1, 18, 261, 3732]);
}
