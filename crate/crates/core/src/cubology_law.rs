//! Solvability conditions on configuration tuples, plus random sampling of
//! reassemblies and of move-reachable states.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cube_model::{Color, CubeSpec, CubeState, Face, Move, MoveSequence};
use crate::decomposition::{cached_atlas, compose, decompose, ConfigTuple, OrbitAtlas, OrbitKind};
use crate::error::CubeError;
use crate::perm::Permutation;

pub const PARITY_CORNERS_EDGES: &str = "parity_corners_edges";
pub const CENTER_EDGE_SIGN: &str = "center_edge_sign";
pub const CORNER_TWIST_SUM: &str = "corner_twist_sum";
pub const EDGE_FLIP_SUM: &str = "edge_flip_sum";
pub const COUPLED_ORIENTATION: &str = "coupled_orientation";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub id: String,
    pub holds: bool,
    /// Components that break the condition, e.g. `rho_c[2]`.
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub n: usize,
    pub valid: bool,
    pub conditions: Vec<ConditionVerdict>,
}

impl ValidityReport {
    pub fn violated(&self) -> Vec<String> {
        self.conditions
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.id.clone())
            .collect()
    }

    pub fn holds(&self, id: &str) -> bool {
        self.conditions.iter().any(|c| c.id == id && c.holds)
    }
}

fn verdict(id: &str, witnesses: Vec<String>) -> ConditionVerdict {
    ConditionVerdict {
        id: id.to_string(),
        holds: witnesses.is_empty(),
        witnesses,
    }
}

/// Sign that the center-edge orbit `(i, j)` must carry.
fn center_edge_target(t: &ConfigTuple, i: usize, j: usize) -> i8 {
    t.sigma.sign() * t.coupled_sign(i) * t.coupled_sign(j)
}

/// Evaluates every condition of the law (all verdicts, not just the first failure).
pub fn check_validity(tuple: &ConfigTuple) -> Result<ValidityReport, CubeError> {
    let n = tuple.n;
    tuple.check_shape(n)?;
    let sigma = tuple.sigma.sign();

    let mut parity = Vec::new();
    if let Some(tau) = &tuple.tau_s {
        if tau.sign() != sigma {
            parity.push("tau_s".to_string());
        }
    }
    for r in &tuple.rho_c {
        if r.perm.sign() != sigma {
            parity.push(format!("rho_c[{}]", r.i));
        }
    }

    let center_edges = tuple
        .rho_e
        .iter()
        .filter(|r| r.perm.sign() != center_edge_target(tuple, r.i, r.j))
        .map(|r| format!("rho_e[{},{}]", r.i, r.j))
        .collect();

    let twist: u32 = tuple.x.iter().map(|&v| v as u32).sum();
    let twist = if twist.is_multiple_of(3) { vec![] } else { vec![format!("sum x = {} mod 3", twist % 3)] };

    let mut conditions = vec![
        verdict(PARITY_CORNERS_EDGES, parity),
        verdict(CENTER_EDGE_SIGN, center_edges),
        verdict(CORNER_TWIST_SUM, twist),
    ];
    if let Some(z) = &tuple.z {
        let flips: u32 = z.iter().map(|&v| v as u32).sum();
        let w = if flips.is_multiple_of(2) { vec![] } else { vec!["sum z = 1 mod 2".to_string()] };
        conditions.push(verdict(EDGE_FLIP_SUM, w));
    }
    let coupled = tuple
        .y
        .iter()
        .filter(|o| o.values.iter().any(|&v| v != 0))
        .map(|o| format!("y[{}]", o.i))
        .collect();
    conditions.push(verdict(COUPLED_ORIENTATION, coupled));

    Ok(ValidityReport {
        n,
        valid: conditions.iter().all(|c| c.holds),
        conditions,
    })
}

/// Quarter turns of the central slices, which carry the fixed centers around.
fn central_turns(spec: CubeSpec) -> Vec<Move> {
    let Some(m) = spec.central_depth() else {
        return vec![];
    };
    [Face::L, Face::D, Face::F]
        .into_iter()
        .map(|f| Move::new(f, m, 1))
        .collect()
}

fn centers_home(state: &CubeState, atlas: &OrbitAtlas) -> bool {
    atlas
        .orbit(OrbitKind::FixedCenter)
        .is_none_or(|o| o.slots.iter().all(|f| state.label(f[0]) == f[0]))
}

/// Central-slice turns that bring the fixed centers of an odd cube back
/// home. Empty when they already are (always, for even cubes).
pub fn restore_frame(state: &CubeState) -> Result<MoveSequence, CubeError> {
    let atlas = cached_atlas(state.spec());
    if centers_home(state, &atlas) {
        return Ok(MoveSequence::empty());
    }
    let centers = &atlas.orbit(OrbitKind::FixedCenter).expect("odd cube").slots;
    let key = |s: &CubeState| centers.iter().map(|f| s.label(f[0])).collect::<Vec<_>>();
    let turns = central_turns(state.spec());
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    seen.insert(key(state));
    queue.push_back((state.clone(), MoveSequence::empty()));
    while let Some((s, path)) = queue.pop_front() {
        for &mv in &turns {
            let next = s.apply_move(mv)?;
            let mut p = path.clone();
            p.push(mv);
            if centers_home(&next, &atlas) {
                return Ok(p);
            }
            if seen.insert(key(&next)) {
                queue.push_back((next, p));
            }
        }
    }
    Err(CubeError::NotAConfiguration(
        "fixed centers are not a rotation of the solved frame".into(),
    ))
}

/// Solvability of a state; odd cubes with turned central slices are first
/// brought back to the home frame.
pub fn is_solvable(state: &CubeState) -> Result<bool, CubeError> {
    Ok(validity_of_state(state)?.valid)
}

pub fn validity_of_state(state: &CubeState) -> Result<ValidityReport, CubeError> {
    let frame = restore_frame(state)?;
    let state = state.apply_sequence(&frame)?;
    let tuple = decompose(&state, &cached_atlas(state.spec()))?;
    check_validity(&tuple)
}

/// Uniform element of the reassembly space, as a tuple.
pub fn random_tuple<R: Rng>(atlas: &OrbitAtlas, rng: &mut R) -> ConfigTuple {
    let mut t = ConfigTuple::identity(atlas);
    let shuffle = |p: &mut Permutation, rng: &mut R| {
        let mut images: Vec<usize> = (0..p.len()).collect();
        images.shuffle(rng);
        *p = Permutation::from_images(images).expect("shuffled identity");
    };
    shuffle(&mut t.sigma, rng);
    if let Some(p) = t.tau_s.as_mut() {
        shuffle(p, rng);
    }
    for p in &mut t.tau_c {
        shuffle(&mut p.perm, rng);
    }
    for p in &mut t.rho_c {
        shuffle(&mut p.perm, rng);
    }
    for p in &mut t.rho_e {
        shuffle(&mut p.perm, rng);
    }
    for v in &mut t.x {
        *v = rng.gen_range(0..3);
    }
    for v in t.z.iter_mut().flatten() {
        *v = rng.gen_range(0..2);
    }
    for o in &mut t.y {
        for v in &mut o.values {
            *v = rng.gen_range(0..2);
        }
    }
    t
}

fn flip_sign(p: &mut Permutation) {
    *p = p.then(&Permutation::transposition(p.len(), 0, 1));
}

/// Makes a tuple satisfy the law with the minimal canonical adjustment:
/// the last twist and flip absorb the sums, y is cleared, and each dependent
/// sign is fixed by composing the transposition (0 1) into its component.
pub fn enforce_law(t: &mut ConfigTuple) {
    let twist: u32 = t.x[..7].iter().map(|&v| v as u32).sum();
    t.x[7] = ((3 - twist % 3) % 3) as u8;
    if let Some(z) = t.z.as_mut() {
        let flips: u32 = z[..11].iter().map(|&v| v as u32).sum();
        z[11] = (flips % 2) as u8;
    }
    for o in &mut t.y {
        o.values.iter_mut().for_each(|v| *v = 0);
    }
    let sigma = t.sigma.sign();
    if let Some(tau) = t.tau_s.as_mut() {
        if tau.sign() != sigma {
            flip_sign(tau);
        }
    }
    for r in &mut t.rho_c {
        if r.perm.sign() != sigma {
            flip_sign(&mut r.perm);
        }
    }
    for k in 0..t.rho_e.len() {
        let (i, j) = (t.rho_e[k].i, t.rho_e[k].j);
        let target = center_edge_target(t, i, j);
        if t.rho_e[k].perm.sign() != target {
            flip_sign(&mut t.rho_e[k].perm);
        }
    }
}

pub fn random_valid_tuple<R: Rng>(atlas: &OrbitAtlas, rng: &mut R) -> ConfigTuple {
    let mut t = random_tuple(atlas, rng);
    enforce_law(&mut t);
    t
}

/// Uniform reassembly (element of the configuration space), deterministic per seed.
pub fn random_configuration(spec: CubeSpec, seed: u64) -> CubeState {
    let atlas = cached_atlas(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    compose(&random_tuple(&atlas, &mut rng), &atlas).expect("tuple has atlas shape")
}

/// Uniform move-reachable state, deterministic per seed.
pub fn random_valid_configuration(spec: CubeSpec, seed: u64) -> CubeState {
    let atlas = cached_atlas(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    compose(&random_valid_tuple(&atlas, &mut rng), &atlas).expect("tuple has atlas shape")
}

/// Per-orbit "defect" coordinates: two tuples lie in the same move orbit
/// exactly when their signatures agree.
pub fn law_signature(t: &ConfigTuple) -> Vec<u8> {
    let sigma = t.sigma.sign();
    let bit = |same: bool| u8::from(!same);
    let mut sig = Vec::new();
    if let Some(tau) = &t.tau_s {
        sig.push(bit(tau.sign() == sigma));
    }
    sig.extend(t.rho_c.iter().map(|r| bit(r.perm.sign() == sigma)));
    sig.extend(
        t.rho_e
            .iter()
            .map(|r| bit(r.perm.sign() == center_edge_target(t, r.i, r.j))),
    );
    sig.push((t.x.iter().map(|&v| v as u32).sum::<u32>() % 3) as u8);
    if let Some(z) = &t.z {
        sig.push((z.iter().map(|&v| v as u32).sum::<u32>() % 2) as u8);
    }
    // a coupled cubie carries its orientation, so read it per home slot
    for o in &t.y {
        let tau = t.perm(OrbitKind::CoupledEdge(o.i)).expect("coupled orbit");
        sig.extend((0..o.values.len()).map(|h| o.values[tau.apply(h)]));
    }
    sig
}

/// Number of distinct law signatures: `3 * 2^bits` with one bit per sign
/// condition, flip sum and coupled orientation entry.
pub fn signature_space_size(spec: CubeSpec) -> num_bigint::BigUint {
    let t = ConfigTuple::identity_for(spec.n());
    let binary = law_signature(&t).len() - 1;
    num_bigint::BigUint::from(3u8) << binary
}

/// Turns a colors-only sticker array into a labelled state.
///
/// Colors fix corners and single edges uniquely. Coupled twins are matched
/// so that as many as possible sit with orientation 0, and the labelling of
/// identical center pieces is chosen so the center sign conditions hold,
/// since swapping two same-colored centers is invisible.
pub fn lift_colors(spec: CubeSpec, colors: &[Color]) -> Result<CubeState, CubeError> {
    let n = spec.n();
    if colors.len() != spec.sticker_count() {
        return Err(CubeError::InvalidState(format!(
            "expected {} stickers, got {}",
            spec.sticker_count(),
            colors.len()
        )));
    }
    for c in Color::ALL {
        let count = colors.iter().filter(|&&x| x == c).count();
        if count != n * n {
            return Err(CubeError::NotAConfiguration(format!(
                "color {} appears {count} times, expected {}",
                c.letter(),
                n * n
            )));
        }
    }
    let atlas = cached_atlas(spec);
    let home_color = |sticker: usize| Face::from_ordinal(sticker / (n * n)).home_color();
    let mut labels = vec![u32::MAX; spec.sticker_count()];

    for orbit in &atlas.orbits {
        let kind = orbit.kind;
        let arity = kind.arity();
        let bad = |s: usize| {
            CubeError::NotAConfiguration(format!(
                "{kind} slot {s} (sticker {}) has colors matching no cubie of its orbit",
                orbit.slots[s][0]
            ))
        };
        // For each slot, the candidate (home, orientation) pairs.
        let candidates: Vec<Vec<(usize, usize)>> = orbit
            .slots
            .iter()
            .map(|f| {
                let mut out = Vec::new();
                for (h, hf) in orbit.slots.iter().enumerate() {
                    for t in 0..arity {
                        if (0..arity).all(|k| colors[f[(t + k) % arity]] == home_color(hf[k])) {
                            out.push((h, t));
                        }
                    }
                }
                out
            })
            .collect();

        let mut assigned: Vec<Option<(usize, usize)>> = vec![None; orbit.len()];
        let mut used = vec![false; orbit.len()];
        match kind {
            OrbitKind::CoupledEdge(_) => {
                // Twins share colors; of the two ways to seat a pair of
                // twins, take the one with more zero orientations.
                for s in 0..orbit.len() {
                    if assigned[s].is_some() {
                        continue;
                    }
                    let homes: Vec<usize> = candidates[s].iter().map(|&(h, _)| h).collect();
                    let partner = (s + 1..orbit.len())
                        .find(|&q| assigned[q].is_none() && candidates[q].iter().any(|&(h, _)| homes.contains(&h)))
                        .ok_or_else(|| bad(s))?;
                    let orient = |slot: usize, h: usize| candidates[slot].iter().find(|c| c.0 == h).map(|c| c.1);
                    let mut best: Option<(usize, [(usize, usize); 2])> = None;
                    for &a in &homes {
                        for &b in &homes {
                            if a == b || used[a] || used[b] {
                                continue;
                            }
                            if let (Some(ta), Some(tb)) = (orient(s, a), orient(partner, b)) {
                                let ones = ta + tb;
                                if best.is_none_or(|(w, _)| ones < w) {
                                    best = Some((ones, [(a, ta), (b, tb)]));
                                }
                            }
                        }
                    }
                    let (_, [(a, ta), (b, tb)]) = best.ok_or_else(|| bad(s))?;
                    assigned[s] = Some((a, ta));
                    assigned[partner] = Some((b, tb));
                    used[a] = true;
                    used[b] = true;
                }
            }
            _ => {
                for s in 0..orbit.len() {
                    let &(h, t) = candidates[s].iter().find(|&&(h, _)| !used[h]).ok_or_else(|| bad(s))?;
                    assigned[s] = Some((h, t));
                    used[h] = true;
                }
            }
        }
        for (s, a) in assigned.iter().enumerate() {
            let (h, t) = a.ok_or_else(|| bad(s))?;
            for k in 0..arity {
                labels[orbit.slots[s][(t + k) % arity]] = orbit.slots[h][k] as u32;
            }
        }
    }

    // Sign repairs are done in the home frame, then the frame turns are undone.
    let raw = CubeState::from_labels(spec, labels)?;
    let frame = restore_frame(&raw)?;
    let mut state = raw.apply_sequence(&frame)?;
    let mut tuple = decompose(&state, &atlas)?;
    let sigma = tuple.sigma.sign();
    let mut changed = false;
    for k in 0..tuple.rho_c.len() {
        if tuple.rho_c[k].perm.sign() != sigma {
            swap_same_colored(&mut tuple.rho_c[k].perm);
            changed = true;
        }
    }
    for k in 0..tuple.rho_e.len() {
        let (i, j) = (tuple.rho_e[k].i, tuple.rho_e[k].j);
        if tuple.rho_e[k].perm.sign() != center_edge_target(&tuple, i, j) {
            swap_same_colored(&mut tuple.rho_e[k].perm);
            changed = true;
        }
    }
    if changed {
        state = compose(&tuple, &atlas)?;
    }
    state.apply_sequence(&frame.inverse())
}

/// Exchanges which home pieces sit in two slots that hold same-colored
/// centers. Home slots are numbered by sticker index, so slots 4k..4k+4 of
/// a center orbit all belong to face k.
fn swap_same_colored(p: &mut Permutation) {
    // perm[home] = slot: swapping the slots of homes 0 and 1 (both on U)
    // keeps every color in place.
    *p = Permutation::transposition(p.len(), 0, 1).then(p);
}
