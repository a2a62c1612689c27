use cubology::cubology_law::{enforce_law, law_signature, random_tuple, validity_of_state};
use cubology::decomposition::cached_atlas;
use cubology::group_oracle::random_word;
use cubology::solver::{solve, Stage};
use cubology::{check_validity, compose, decompose, CubeSpec, CubeState, MoveSequence, Permutation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec_and_seed(max_n: usize) -> impl Strategy<Value = (CubeSpec, u64)> {
    (2..=max_n, any::<u64>()).prop_map(|(n, s)| (CubeSpec::new(n).unwrap(), s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tuple_round_trip((spec, seed) in spec_and_seed(6)) {
        let atlas = cached_atlas(spec);
        let t = random_tuple(&atlas, &mut ChaCha8Rng::seed_from_u64(seed));
        let state = compose(&t, &atlas).unwrap();
        prop_assert_eq!(decompose(&state, &atlas).unwrap(), t);
    }

    #[test]
    fn word_then_inverse_is_identity((spec, seed) in spec_and_seed(7), len in 0usize..30) {
        let w = random_word(spec, len, seed);
        let s = CubeState::solved(spec).apply_sequence(&w.concat(&w.inverse())).unwrap();
        prop_assert!(s.is_solved());
    }

    #[test]
    fn notation_round_trip((spec, seed) in spec_and_seed(7), len in 0usize..30) {
        let w = random_word(spec, len, seed);
        let text = w.to_notation(spec.n());
        let back = MoveSequence::parse(&text, spec).unwrap();
        let a = CubeState::solved(spec).apply_sequence(&w).unwrap();
        let b = CubeState::solved(spec).apply_sequence(&back).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reachable_states_satisfy_the_law((spec, seed) in spec_and_seed(7), len in 0usize..60) {
        let s = CubeState::solved(spec).apply_sequence(&random_word(spec, len, seed)).unwrap();
        prop_assert!(validity_of_state(&s).unwrap().valid);
    }

    #[test]
    fn moves_preserve_the_signature((spec, seed) in spec_and_seed(6), mv in 0usize..100) {
        let atlas = cached_atlas(spec);
        let t = random_tuple(&atlas, &mut ChaCha8Rng::seed_from_u64(seed));
        let moves = spec.setup_moves();
        let m = moves[mv % moves.len()];
        let after = compose(&t, &atlas).unwrap().apply_move(m).unwrap();
        let u = decompose(&after, &atlas).unwrap();
        prop_assert_eq!(law_signature(&t), law_signature(&u));
        prop_assert_eq!(check_validity(&t).unwrap().valid, check_validity(&u).unwrap().valid);
    }

    #[test]
    fn enforced_tuples_are_valid_and_solve((spec, seed) in spec_and_seed(5)) {
        let atlas = cached_atlas(spec);
        let mut t = random_tuple(&atlas, &mut ChaCha8Rng::seed_from_u64(seed));
        enforce_law(&mut t);
        prop_assert!(check_validity(&t).unwrap().valid);
        let state = compose(&t, &atlas).unwrap();
        let trace = solve(&state).unwrap();
        prop_assert!(state.apply_sequence(&trace.total).unwrap().is_solved());
        for (k, r) in trace.stages.iter().enumerate() {
            prop_assert!(Stage::ALL[..=k].iter().all(|s| s.done(&r.tuple)));
        }
    }

    #[test]
    fn permutation_sign_is_multiplicative(sa in any::<u64>(), sb in any::<u64>()) {
        let (a, b) = (shuffled(sa), shuffled(sb));
        prop_assert_eq!(a.then(&b).sign(), a.sign() * b.sign());
        prop_assert!(a.then(&a.inverse()).is_identity());
    }
}

fn shuffled(seed: u64) -> Permutation {
    use rand::seq::SliceRandom;
    let mut images: Vec<usize> = (0..12).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    images.shuffle(&mut rng);
    Permutation::from_images(images).unwrap()
}
