//! Named commutator moves with known effects, setup conjugation and a
//! checker that compares a sequence's decomposed effect with a descriptor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cube_model::{CubeSpec, CubeState, Face, Move, MoveSequence};
use crate::decomposition::{cached_atlas, decompose, ConfigTuple, OrbitKind};
use crate::error::CubeError;

/// Expected effect of a move on the configuration tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Effect {
    /// A 3-cycle on one orbit; every other permutation is the identity and
    /// orientations change only on the cycled slots.
    ThreeCycle(OrbitKind),
    /// An odd permutation of one orbit with corners and single edges untouched.
    OddPermutation(OrbitKind),
    /// All permutations identity; two corners twisted in opposite directions.
    TwistPair,
    /// All permutations identity; two single edges flipped.
    FlipPair,
    /// Two disjoint swaps on one orbit; every other permutation is the identity.
    PairSwaps(OrbitKind),
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Effect::ThreeCycle(k) => write!(f, "{k} 3-cycle, rest id"),
            Effect::OddPermutation(k) => write!(f, "odd permutation on {k}, corners and single edges id"),
            Effect::TwistPair => write!(f, "two corners twisted +1/-1, permutations id"),
            Effect::FlipPair => write!(f, "two single edges flipped, permutations id"),
            Effect::PairSwaps(k) => write!(f, "two swaps on {k}, rest id"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub n: usize,
    pub descriptor: String,
    pub pass: bool,
    /// Every nontrivial component of the decomposed effect, e.g. `corner: [3]`.
    pub observed: Vec<String>,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedMove {
    pub name: String,
    pub params: Vec<usize>,
    pub sequence: MoveSequence,
    pub expected: Effect,
    /// Result of checking `expected` on the cube it was built for.
    pub report: CycleReport,
}

impl NamedMove {
    fn build(spec: CubeSpec, name: &str, params: Vec<usize>, sequence: MoveSequence, expected: Effect) -> Result<NamedMove, CubeError> {
        let report = verify_cycle_structure(spec, &sequence, expected)?;
        Ok(NamedMove {
            name: name.to_string(),
            params,
            sequence,
            expected,
            report,
        })
    }

    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let p: Vec<String> = self.params.iter().map(usize::to_string).collect();
            format!("{}({})", self.name, p.join(","))
        }
    }
}

fn parse(text: &str, spec: CubeSpec) -> MoveSequence {
    MoveSequence::parse(text, spec).expect("library words are well formed")
}

fn single(face: Face, depth: usize, turns: u8) -> MoveSequence {
    MoveSequence::new(vec![Move::new(face, depth, turns)])
}

fn require_odd(spec: CubeSpec) -> Result<(), CubeError> {
    if spec.is_odd() {
        Ok(())
    } else {
        Err(CubeError::EvenCube(spec.n()))
    }
}

fn require_slice(spec: CubeSpec, what: &str, i: usize) -> Result<(), CubeError> {
    if (2..=spec.max_outer_depth()).contains(&i) {
        Ok(())
    } else {
        Err(CubeError::IndexOutOfRange(format!(
            "{what} index {i} not in 2..={} for n = {}",
            spec.max_outer_depth(),
            spec.n()
        )))
    }
}

/// `[[R:U],D]`
pub fn corner_three_cycle(spec: CubeSpec) -> Result<NamedMove, CubeError> {
    NamedMove::build(spec, "m_c", vec![], parse("[[R:U],D]", spec), Effect::ThreeCycle(OrbitKind::Corner))
}

/// `[F,[R:S]]`
pub fn single_edge_three_cycle(spec: CubeSpec) -> Result<NamedMove, CubeError> {
    require_odd(spec)?;
    NamedMove::build(
        spec,
        "m_es",
        vec![],
        parse("[F,[R:S]]", spec),
        Effect::ThreeCycle(OrbitKind::SingleEdge),
    )
}

/// `[[R_j', D_i], F']`; on odd cubes `j` may be the central slice, where
/// `M` stands in for `R_j`.
pub fn center_three_cycle(spec: CubeSpec, i: usize, j: usize) -> Result<NamedMove, CubeError> {
    require_slice(spec, "center row", i)?;
    let central = spec.central_depth() == Some(j);
    if !central {
        require_slice(spec, "center column", j)?;
    }
    let column = if central {
        single(Face::L, j, 3)
    } else {
        single(Face::R, j, 3)
    };
    let inner = MoveSequence::commutator(&column, &single(Face::D, i, 1));
    let seq = MoveSequence::commutator(&inner, &single(Face::F, 1, 3));
    let kind = if i == j {
        OrbitKind::CenterCorner(i)
    } else {
        OrbitKind::CenterEdge(i, j)
    };
    NamedMove::build(spec, "m_z", vec![i, j], seq, Effect::ThreeCycle(kind))
}

/// `[[F',U],D_i]`
pub fn coupled_edge_three_cycle(spec: CubeSpec, i: usize) -> Result<NamedMove, CubeError> {
    require_slice(spec, "coupled edge", i)?;
    let inner = parse("[F',U]", spec);
    let seq = MoveSequence::commutator(&inner, &single(Face::D, i, 1));
    NamedMove::build(spec, "m_ec", vec![i], seq, Effect::ThreeCycle(OrbitKind::CoupledEdge(i)))
}

/// Odd permutation of coupled orbit `i` on an even cube.
///
/// Built from the setup `A = R2 2R2 .. iR2 B2` and the body
/// `B = U2 iL U2 iR' U2 iR U2 F2 iR F2 iL'` as the conjugate `A B A'`.
/// Read as the plain concatenation `A B`, the word also moves corners.
pub fn coupled_edge_parity_move(spec: CubeSpec, i: usize) -> Result<NamedMove, CubeError> {
    if spec.is_odd() {
        return Err(CubeError::OddCube(spec.n()));
    }
    require_slice(spec, "coupled edge", i)?;
    let mut setup = MoveSequence::empty();
    for d in 1..=i {
        setup.push(Move::new(Face::R, d, 2));
    }
    setup.push(Move::new(Face::B, 1, 2));
    let body = MoveSequence::new(vec![
        Move::new(Face::U, 1, 2),
        Move::new(Face::L, i, 1),
        Move::new(Face::U, 1, 2),
        Move::new(Face::R, i, 3),
        Move::new(Face::U, 1, 2),
        Move::new(Face::R, i, 1),
        Move::new(Face::U, 1, 2),
        Move::new(Face::F, 1, 2),
        Move::new(Face::R, i, 1),
        Move::new(Face::F, 1, 2),
        Move::new(Face::L, i, 3),
    ]);
    let seq = MoveSequence::conjugate(&setup, &body);
    NamedMove::build(
        spec,
        "parity",
        vec![i],
        seq,
        Effect::OddPermutation(OrbitKind::CoupledEdge(i)),
    )
}

/// `[[F,L']2,U]`
pub fn corner_twist_pair(spec: CubeSpec) -> Result<NamedMove, CubeError> {
    NamedMove::build(spec, "m_oc", vec![], parse("[[F,L']2,U]", spec), Effect::TwistPair)
}

/// `[F E F2 E2 F, U]`
pub fn single_edge_flip_pair(spec: CubeSpec) -> Result<NamedMove, CubeError> {
    require_odd(spec)?;
    NamedMove::build(spec, "m_oe", vec![], parse("[F E F2 E2 F,U]", spec), Effect::FlipPair)
}

/// `U2 D2 F2 U2 D2 B2`, two swaps of single edges. Only pure on the 3x3x3;
/// larger odd cubes see the same swaps in their center and coupled orbits.
pub fn single_edge_dual_pair(spec: CubeSpec) -> Result<NamedMove, CubeError> {
    require_odd(spec)?;
    NamedMove::build(
        spec,
        "m_es_dual",
        vec![],
        parse("U2 D2 F2 U2 D2 B2", spec),
        Effect::PairSwaps(OrbitKind::SingleEdge),
    )
}

/// `setup core setup'`.
pub fn conjugate_setup(setup: &MoveSequence, core: &NamedMove) -> MoveSequence {
    MoveSequence::conjugate(setup, &core.sequence)
}

/// Every library move that applies to this cube size.
pub fn library(spec: CubeSpec) -> Result<Vec<NamedMove>, CubeError> {
    let mut out = vec![corner_three_cycle(spec)?, corner_twist_pair(spec)?];
    if spec.is_odd() {
        out.push(single_edge_three_cycle(spec)?);
        out.push(single_edge_flip_pair(spec)?);
        if spec.n() == 3 {
            out.push(single_edge_dual_pair(spec)?);
        }
    }
    let slices = 2..=spec.max_outer_depth();
    for i in slices.clone() {
        out.push(coupled_edge_three_cycle(spec, i)?);
        if !spec.is_odd() {
            out.push(coupled_edge_parity_move(spec, i)?);
        }
    }
    for i in slices.clone() {
        for j in slices.clone().chain(spec.central_depth()) {
            out.push(center_three_cycle(spec, i, j)?);
        }
    }
    Ok(out)
}

fn changed_slots(t: &ConfigTuple, kind: OrbitKind) -> Vec<usize> {
    let moved = t.perm(kind).map(|p| (0..p.len()).filter(|&s| p.apply(s) != s).collect::<Vec<_>>());
    let turned = t
        .orientation(kind)
        .map(|o| (0..o.len()).filter(|&s| o[s] != 0).collect::<Vec<_>>());
    let mut all: Vec<usize> = moved.into_iter().flatten().chain(turned.into_iter().flatten()).collect();
    all.sort_unstable();
    all.dedup();
    all
}

fn all_kinds(t: &ConfigTuple) -> Vec<OrbitKind> {
    let mut kinds = vec![OrbitKind::Corner];
    if t.tau_s.is_some() {
        kinds.push(OrbitKind::SingleEdge);
    }
    kinds.extend(t.tau_c.iter().map(|p| OrbitKind::CoupledEdge(p.i)));
    kinds.extend(t.rho_c.iter().map(|p| OrbitKind::CenterCorner(p.i)));
    kinds.extend(t.rho_e.iter().map(|p| OrbitKind::CenterEdge(p.i, p.j)));
    kinds
}

/// Decomposes the effect of `seq` on the solved cube and checks it against `expected`.
pub fn verify_cycle_structure(spec: CubeSpec, seq: &MoveSequence, expected: Effect) -> Result<CycleReport, CubeError> {
    let atlas = cached_atlas(spec);
    let state = CubeState::solved(spec).apply_sequence(seq)?;
    let t = decompose(&state, &atlas)?;
    Ok(check_effect(&t, expected))
}

/// Checks a decomposed effect against a descriptor.
pub fn check_effect(t: &ConfigTuple, expected: Effect) -> CycleReport {
    let mut observed = Vec::new();
    for kind in all_kinds(t) {
        let p = t.perm(kind).expect("listed kinds have permutations");
        if !p.is_identity() {
            observed.push(format!("{kind}: cycles {:?}", p.cycle_type()));
        }
        if let Some(o) = t.orientation(kind) {
            let nz: Vec<(usize, u8)> = o.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect();
            if !nz.is_empty() {
                observed.push(format!("{kind}: orientation {nz:?}"));
            }
        }
    }

    let mut problems = Vec::new();
    let target = match expected {
        Effect::ThreeCycle(k) | Effect::OddPermutation(k) | Effect::PairSwaps(k) => Some(k),
        Effect::TwistPair | Effect::FlipPair => None,
    };
    if let Some(k) = target {
        if t.perm(k).is_none() {
            problems.push(format!("cube has no {k} orbit"));
        }
    }
    for kind in all_kinds(t) {
        let p = t.perm(kind).expect("listed kinds have permutations");
        let orient_nz: Vec<usize> = t
            .orientation(kind)
            .map(|o| (0..o.len()).filter(|&s| o[s] != 0).collect())
            .unwrap_or_default();
        let is_target = Some(kind) == target;
        match expected {
            Effect::ThreeCycle(_) | Effect::PairSwaps(_) if is_target => {
                let want: &[usize] = if matches!(expected, Effect::ThreeCycle(_)) { &[3] } else { &[2, 2] };
                if p.cycle_type() != want {
                    problems.push(format!("{kind}: cycle type {:?}, expected {want:?}", p.cycle_type()));
                }
                let moved = changed_slots(t, kind);
                if orient_nz.iter().any(|s| p.apply(*s) == *s) {
                    problems.push(format!("{kind}: orientation changed off the cycle ({moved:?})"));
                }
            }
            Effect::OddPermutation(_) if is_target => {
                if p.sign() != -1 {
                    problems.push(format!("{kind}: permutation is even"));
                }
            }
            Effect::OddPermutation(_) => {
                if matches!(kind, OrbitKind::Corner | OrbitKind::SingleEdge) && !changed_slots(t, kind).is_empty() {
                    problems.push(format!("{kind}: disturbed"));
                }
            }
            Effect::TwistPair if kind == OrbitKind::Corner => {
                if !p.is_identity() {
                    problems.push("corner: permuted".into());
                }
                let o = &t.x;
                let nz: Vec<u8> = o.iter().copied().filter(|&v| v != 0).collect();
                if nz.len() != 2 || !(nz[0] + nz[1]).is_multiple_of(3) {
                    problems.push(format!("corner: twists {o:?}, expected one +1 and one -1"));
                }
            }
            Effect::FlipPair if kind == OrbitKind::SingleEdge => {
                if !p.is_identity() {
                    problems.push("single_edge: permuted".into());
                }
                if orient_nz.len() != 2 {
                    problems.push(format!("single_edge: {} flips, expected 2", orient_nz.len()));
                }
            }
            _ => {
                if !changed_slots(t, kind).is_empty() {
                    problems.push(format!("{kind}: disturbed"));
                }
            }
        }
    }
    if expected == Effect::FlipPair && t.tau_s.is_none() {
        problems.push("cube has no single edges".into());
    }
    CycleReport {
        n: t.n,
        descriptor: expected.to_string(),
        pass: problems.is_empty(),
        observed,
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> CubeSpec {
        CubeSpec::new(n).unwrap()
    }

    #[test]
    fn library_contracts_hold() {
        for n in 2..=7 {
            for m in library(spec(n)).unwrap() {
                assert!(m.report.pass, "{} at n = {n}: {:?} / {:?}", m.label(), m.report.problems, m.report.observed);
            }
        }
    }

    #[test]
    fn parity_rules() {
        assert!(matches!(single_edge_three_cycle(spec(4)), Err(CubeError::EvenCube(4))));
        assert!(matches!(single_edge_flip_pair(spec(2)), Err(CubeError::EvenCube(2))));
        assert!(matches!(coupled_edge_parity_move(spec(5), 2), Err(CubeError::OddCube(5))));
        assert!(matches!(coupled_edge_three_cycle(spec(4), 3), Err(CubeError::IndexOutOfRange(_))));
        assert!(matches!(center_three_cycle(spec(6), 1, 2), Err(CubeError::IndexOutOfRange(_))));
        assert!(matches!(center_three_cycle(spec(6), 2, 4), Err(CubeError::IndexOutOfRange(_))));
    }

    #[test]
    fn center_cycles_hit_the_named_orbit() {
        let m = center_three_cycle(spec(7), 2, 2).unwrap();
        assert_eq!(m.expected, Effect::ThreeCycle(OrbitKind::CenterCorner(2)));
        assert!(m.report.pass);
        let m = center_three_cycle(spec(7), 2, 3).unwrap();
        assert!(m.report.pass, "{:?}", m.report.observed);
        let m = center_three_cycle(spec(5), 2, 3).unwrap();
        assert!(m.report.pass, "{:?}", m.report.observed);
    }

    #[test]
    fn wrong_descriptor_fails() {
        let r = verify_cycle_structure(spec(3), &MoveSequence::parse("F", spec(3)).unwrap(), Effect::ThreeCycle(OrbitKind::Corner)).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn powers() {
        let sp = spec(4);
        let mc = corner_three_cycle(sp).unwrap();
        let r = verify_cycle_structure(sp, &mc.sequence.repeat(3), Effect::ThreeCycle(OrbitKind::Corner)).unwrap();
        assert!(r.observed.iter().all(|o| !o.contains("cycles")), "{:?}", r.observed);
        let p = coupled_edge_parity_move(sp, 2).unwrap();
        let t = decompose(&CubeState::solved(sp).apply_sequence(&p.sequence.repeat(2)).unwrap(), &cached_atlas(sp)).unwrap();
        assert_eq!(t.coupled_sign(2), 1);
        let oc = corner_twist_pair(spec(3)).unwrap();
        assert!(CubeState::solved(spec(3)).apply_sequence(&oc.sequence.repeat(3)).unwrap().is_solved());
        let oe = single_edge_flip_pair(spec(5)).unwrap();
        assert!(CubeState::solved(spec(5)).apply_sequence(&oe.sequence.repeat(2)).unwrap().is_solved());
    }

    #[test]
    fn parity_word_needs_the_conjugate_reading() {
        let sp = spec(4);
        let p = coupled_edge_parity_move(sp, 2).unwrap();
        let setup_len = 3;
        let concatenated = MoveSequence::new(p.sequence.moves()[..p.sequence.len() - setup_len].to_vec());
        let r = verify_cycle_structure(sp, &concatenated, p.expected).unwrap();
        assert!(!r.pass);
        assert!(r.problems.iter().any(|q| q.starts_with("corner")), "{:?}", r.problems);
    }

    #[test]
    fn dual_pair_on_larger_cubes() {
        let m = single_edge_dual_pair(spec(3)).unwrap();
        assert!(m.report.pass);
        let m = single_edge_dual_pair(spec(5)).unwrap();
        assert!(!m.report.pass);
        assert!(m.report.observed[0].starts_with("single_edge: cycles [2, 2]"));
    }

    #[test]
    fn conjugates_keep_cycle_type() {
        let sp = spec(4);
        let mc = corner_three_cycle(sp).unwrap();
        assert_eq!(conjugate_setup(&MoveSequence::empty(), &mc), mc.sequence);
        for setup in ["R", "F2 U'", "2R D"] {
            let s = MoveSequence::parse(setup, sp).unwrap();
            let r = verify_cycle_structure(sp, &conjugate_setup(&s, &mc), mc.expected).unwrap();
            assert!(r.pass, "{setup}: {:?}", r.problems);
        }
    }

    #[test]
    fn twist_pair_on_u_corners() {
        let sp = spec(3);
        let t = decompose(
            &CubeState::solved(sp).apply_sequence(&corner_twist_pair(sp).unwrap().sequence).unwrap(),
            &cached_atlas(sp),
        )
        .unwrap();
        let twisted: Vec<usize> = (0..8).filter(|&s| t.x[s] != 0).collect();
        // Slots 0..4 have their reference facelet on U.
        assert!(twisted.iter().all(|&s| s < 4), "{twisted:?}");
    }
}
