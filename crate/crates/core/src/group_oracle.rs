//! Independent checks on the closed forms: Schreier-Sims group orders from
//! raw generator permutations, bounded breadth-first search of the move
//! ball, and Monte Carlo sampling of the solvable fraction.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cube_model::{sequence_permutation, sticker_permutation, CubeSpec, CubeState, Move, MoveSequence};
use crate::cubology_law::{is_solvable, random_tuple};
use crate::decomposition::{cached_atlas, compose, OrbitKind};
use crate::error::CubeError;
use crate::perm::Permutation;

/// Sticker permutations of a set of moves, over `0..6n^2`.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub n: usize,
    pub moves: Vec<Move>,
    pub perms: Vec<Permutation>,
}

impl GeneratorSet {
    pub fn degree(&self) -> usize {
        self.perms.first().map_or(0, Permutation::len)
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }
}

fn generator_set(spec: CubeSpec, moves: Vec<Move>) -> GeneratorSet {
    let perms = moves
        .iter()
        .map(|&m| sticker_permutation(spec, m).expect("legal move"))
        .collect();
    GeneratorSet { n: spec.n(), moves, perms }
}

/// Clockwise quarter turn of every slice that leaves the frame fixed
/// (central slices excluded). This is the generating set of the cube group.
pub fn generators(spec: CubeSpec) -> GeneratorSet {
    generator_set(spec, spec.generator_moves())
}

/// All `6n` signed quarter turns, central slices included.
pub fn basic_generators(spec: CubeSpec) -> GeneratorSet {
    generator_set(spec, spec.basic_moves())
}

type Perm = Vec<u16>;

fn to_perm(p: &Permutation) -> Perm {
    p.images().iter().map(|&v| v as u16).collect()
}

fn then(a: &[u16], b: &[u16]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn inverse(a: &[u16]) -> Perm {
    let mut out = vec![0u16; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u16;
    }
    out
}

fn is_id(a: &[u16]) -> bool {
    a.iter().enumerate().all(|(i, &x)| x as usize == i)
}

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    // transversal[pt] maps the base point to pt; inv is its inverse
    transversal: Vec<Option<(Perm, Perm)>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Level {
        let id: Perm = (0..degree as u16).collect();
        let mut transversal = vec![None; degree];
        transversal[base] = Some((id.clone(), id));
        Level { base, gens: Vec::new(), orbit: vec![base], transversal }
    }

    fn add_gen(&mut self, g: Perm) {
        self.gens.push(g);
        let mut i = 0;
        // rescan every orbit point against every generator; cheap at these degrees
        let mut frontier: Vec<usize> = self.orbit.clone();
        while i < frontier.len() {
            let pt = frontier[i];
            i += 1;
            let u = self.transversal[pt].as_ref().expect("orbit point").0.clone();
            for s in &self.gens {
                let img = s[pt] as usize;
                if self.transversal[img].is_none() {
                    let w = then(&u, s);
                    let winv = inverse(&w);
                    self.transversal[img] = Some((w, winv));
                    self.orbit.push(img);
                    frontier.push(img);
                }
            }
        }
    }
}

/// Base and strong generating set of a permutation group.
#[derive(Debug, Clone)]
pub struct Bsgs {
    degree: usize,
    levels: Vec<Level>,
    priority: Vec<usize>,
}

impl Bsgs {
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generator_count(&self) -> usize {
        self.levels.first().map_or(0, |l| l.gens.len())
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Strips `g` through the chain; returns the residue and the level at
    /// which it left the chain (`levels.len()` when it got through).
    fn sift_from(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (k, level) in self.levels.iter().enumerate().skip(start) {
            let img = g[level.base] as usize;
            match &level.transversal[img] {
                Some((_, uinv)) => g = then(&g, uinv),
                None => return (g, k),
            }
        }
        let k = self.levels.len();
        (g, k)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.len() != self.degree {
            return false;
        }
        let (residue, _) = self.sift_from(to_perm(p), 0);
        is_id(&residue)
    }

    // adds a residue that fixes the first `level` base points; returns the
    // deepest level that gained a generator
    fn insert(&mut self, residue: Perm, level: usize) -> usize {
        let mut level = level;
        if level == self.levels.len() {
            let pt = self
                .priority
                .iter()
                .copied()
                .find(|&p| residue[p] as usize != p)
                .expect("non-identity residue moves a point");
            self.levels.push(Level::new(pt, self.degree));
            level = self.levels.len() - 1;
        }
        for l in &mut self.levels[..=level] {
            l.add_gen(residue.clone());
        }
        level
    }

    fn add_element(&mut self, g: Perm) -> Option<usize> {
        let (residue, level) = self.sift_from(g, 0);
        if is_id(&residue) {
            None
        } else {
            Some(self.insert(residue, level))
        }
    }

    fn random_phase(&mut self, gens: &[Perm], seed: u64, quiet_rounds: usize) {
        if gens.is_empty() {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<Perm> = gens.to_vec();
        while pool.len() < 10 {
            pool.push(gens[pool.len() % gens.len()].clone());
        }
        let mut acc: Perm = (0..self.degree as u16).collect();
        let step = |rng: &mut ChaCha8Rng, pool: &mut Vec<Perm>, acc: &mut Perm| {
            let i = rng.gen_range(0..pool.len());
            let mut j = rng.gen_range(0..pool.len() - 1);
            if j >= i {
                j += 1;
            }
            pool[i] = if rng.gen() { then(&pool[i], &pool[j]) } else { then(&pool[j], &pool[i]) };
            *acc = then(acc, &pool[i]);
        };
        for _ in 0..60 {
            step(&mut rng, &mut pool, &mut acc);
        }
        let mut quiet = 0;
        while quiet < quiet_rounds {
            step(&mut rng, &mut pool, &mut acc);
            if self.add_element(acc.clone()).is_some() {
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
    }

    /// Checks every Schreier generator, deepest level first, adding any that
    /// fail to sift. On return the chain is a genuine BSGS.
    fn verify(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let k = i - 1;
            let mut restart = None;
            'scan: for oi in 0..self.levels[k].orbit.len() {
                let pt = self.levels[k].orbit[oi];
                for si in 0..self.levels[k].gens.len() {
                    let level = &self.levels[k];
                    let s = &level.gens[si];
                    let u = &level.transversal[pt].as_ref().expect("orbit point").0;
                    let img = s[pt] as usize;
                    let vinv = &level.transversal[img].as_ref().expect("orbit closed").1;
                    let h = then(&then(u, s), vinv);
                    let (residue, at) = self.sift_from(h, k + 1);
                    if !is_id(&residue) {
                        restart = Some(self.insert(residue, at));
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(deepest) => i = deepest + 1,
                None => i -= 1,
            }
        }
    }
}

/// Point order used for base selection: corner facelets first, then single
/// edges, coupled edges and centers. Points outside any atlas fall last.
fn base_priority(n: Option<usize>, degree: usize) -> Vec<usize> {
    let mut points: Vec<usize> = (0..degree).collect();
    if let Some(n) = n {
        if let Ok(spec) = CubeSpec::new(n) {
            if spec.sticker_count() == degree {
                let atlas = cached_atlas(spec);
                let rank = |p: usize| match atlas.orbits[atlas.locate(p).orbit].kind {
                    OrbitKind::Corner => 0,
                    OrbitKind::SingleEdge => 1,
                    OrbitKind::CoupledEdge(_) => 2,
                    OrbitKind::CenterCorner(_) => 3,
                    OrbitKind::CenterEdge(..) => 4,
                    OrbitKind::FixedCenter => 5,
                };
                points.sort_by_key(|&p| (rank(p), p));
            }
        }
    }
    points
}

/// Builds a verified BSGS. `cube_size` enables the corners-first base order
/// when the permutations act on the stickers of that cube.
pub fn build_bsgs(gens: &[Permutation], cube_size: Option<usize>, seed: u64) -> Result<Bsgs, CubeError> {
    let degree = gens.first().map_or(0, Permutation::len);
    if gens.iter().any(|g| g.len() != degree) {
        return Err(CubeError::ShapeMismatch("generators of different degree".into()));
    }
    let mut bsgs = Bsgs { degree, levels: Vec::new(), priority: base_priority(cube_size, degree) };
    let raw: Vec<Perm> = gens.iter().map(to_perm).filter(|g| !is_id(g)).collect();
    for g in &raw {
        bsgs.add_element(g.clone());
    }
    bsgs.random_phase(&raw, seed, 40);
    bsgs.verify();
    Ok(bsgs)
}

/// Exact order of the group generated by `gens`.
pub fn schreier_sims_order(gens: &GeneratorSet) -> BigUint {
    build_bsgs(&gens.perms, Some(gens.n), 0x5eed)
        .expect("generator set has one degree")
        .order()
}

/// Exact order of the group generated by arbitrary permutations of one degree.
pub fn permutation_group_order(gens: &[Permutation]) -> Result<BigUint, CubeError> {
    Ok(build_bsgs(gens, None, 0x5eed)?.order())
}

/// Which action of a subgroup is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// The action on all stickers.
    Stickers,
    /// The induced permutation of the cubie slots of one orbit.
    Slots(OrbitKind),
}

/// Order of the group generated by move words, under the given action.
pub fn subgroup_order(spec: CubeSpec, words: &[MoveSequence], restriction: Restriction) -> Result<BigUint, CubeError> {
    let atlas = cached_atlas(spec);
    let mut perms = Vec::with_capacity(words.len());
    for w in words {
        let p = sequence_permutation(spec, w)?;
        perms.push(match restriction {
            Restriction::Stickers => p,
            Restriction::Slots(kind) => {
                let orbit = atlas
                    .orbit_index(kind)
                    .ok_or_else(|| CubeError::ShapeMismatch(format!("no {kind} orbit for n={}", spec.n())))?;
                atlas.slot_permutation(orbit, &p)
            }
        });
    }
    if perms.is_empty() {
        return Ok(BigUint::one());
    }
    let n = matches!(restriction, Restriction::Stickers).then_some(spec.n());
    Ok(build_bsgs(&perms, n, 0x5eed)?.order())
}

/// Every setup word of at most `max_len` moves over the fixed-frame setup
/// alphabet, without consecutive turns of one slice.
pub fn setup_words(spec: CubeSpec, max_len: usize) -> Vec<MoveSequence> {
    let alphabet = spec.setup_moves();
    let mut out = vec![MoveSequence::empty()];
    let mut layer = vec![MoveSequence::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &m in &alphabet {
                if w.moves().last().is_some_and(|&l| l.same_slice(m)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(m);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Conjugates `s core s^-1` of a word by every setup of at most `max_len` moves.
pub fn conjugates(spec: CubeSpec, core: &MoveSequence, max_len: usize) -> Vec<MoveSequence> {
    setup_words(spec, max_len)
        .iter()
        .map(|s| MoveSequence::conjugate(s, core))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BfsReport {
    pub n: usize,
    pub depth: usize,
    /// Number of distinct states first reached at each distance.
    pub per_depth: Vec<usize>,
    pub count: usize,
    pub invalid: usize,
    #[serde(skip)]
    pub sample: Vec<CubeState>,
}

/// Distinct states within `depth` signed quarter turns of solved (all `6n`
/// basic moves). Fails with `DepthTooLarge` rather than report a partial
/// ball once more than `budget` states are seen.
pub fn bfs_states(spec: CubeSpec, depth: usize, budget: usize) -> Result<BfsReport, CubeError> {
    let moves: Vec<Perm> = basic_generators(spec).perms.iter().map(to_perm).collect();
    let solved: Vec<u16> = (0..spec.sticker_count() as u16).collect();
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    seen.insert(solved.clone());
    let mut layer = vec![solved];
    let mut per_depth = vec![1];
    let mut invalid = 0;
    let mut sample = Vec::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for labels in &layer {
            for mv in &moves {
                // the label at position mv[pos] is the one previously at pos
                let mut out = vec![0u16; labels.len()];
                for (pos, &l) in labels.iter().enumerate() {
                    out[mv[pos] as usize] = l;
                }
                if seen.insert(out.clone()) {
                    if seen.len() > budget {
                        return Err(CubeError::DepthTooLarge(depth));
                    }
                    next.push(out);
                }
            }
        }
        per_depth.push(next.len());
        layer = next;
        for labels in &layer {
            let state = CubeState::from_labels(spec, labels.iter().map(|&l| l as u32).collect())?;
            if !is_solvable(&state)? {
                invalid += 1;
            }
            if sample.len() < 32 {
                sample.push(state);
            }
        }
    }
    Ok(BfsReport { n: spec.n(), depth, count: seen.len(), per_depth, invalid, sample })
}

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FractionEstimate {
    pub trials: usize,
    pub successes: usize,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl FractionEstimate {
    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> FractionEstimate {
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = z * z;
    let center = (p + z2 / (2.0 * t)) / (1.0 + z2 / t);
    let half = z * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / (1.0 + z2 / t);
    FractionEstimate { trials, successes, estimate: p, lower: center - half, upper: center + half }
}

/// Fraction of uniformly reassembled cubes that are solvable, with a 99%
/// Wilson interval.
pub fn estimate_valid_fraction(spec: CubeSpec, trials: usize, seed: u64) -> Result<FractionEstimate, CubeError> {
    if trials == 0 {
        return Err(CubeError::InvalidState("at least one trial is needed".into()));
    }
    let atlas = cached_atlas(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0;
    for _ in 0..trials {
        let state = compose(&random_tuple(&atlas, &mut rng), &atlas)?;
        if is_solvable(&state)? {
            successes += 1;
        }
    }
    Ok(wilson_interval(successes, trials, Z_99))
}

/// A uniformly random product of generators; handy for membership tests.
pub fn random_word(spec: CubeSpec, len: usize, seed: u64) -> MoveSequence {
    let alphabet = spec.setup_moves();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MoveSequence::new((0..len).map(|_| *alphabet.choose(&mut rng).expect("nonempty")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{group_order, orbit_count, reduced_sequence_count};
    use crate::decomposition::{decompose, ConfigTuple};
    use crate::move_library::{corner_three_cycle, corner_twist_pair};

    #[test]
    fn generators_have_order_four() {
        for n in 2..=5 {
            let spec = CubeSpec::new(n).unwrap();
            let g = generators(spec);
            assert_eq!(g.len(), 6 * (n / 2));
            assert!(g.perms.iter().all(|p| p.order() == 4));
            assert_eq!(basic_generators(spec).len(), 6 * n);
        }
    }

    #[test]
    fn single_three_cycle() {
        let p = Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        assert_eq!(permutation_group_order(&[p]).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn symmetric_groups() {
        let c = Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
        let t = Permutation::transposition(6, 0, 1);
        assert_eq!(permutation_group_order(&[c, t]).unwrap(), BigUint::from(720u32));
    }

    #[test]
    fn oracle_matches_formula_small() {
        for n in 2..=4 {
            let spec = CubeSpec::new(n).unwrap();
            assert_eq!(schreier_sims_order(&generators(spec)), group_order(n), "n={n}");
        }
    }

    #[test]
    fn membership() {
        let spec = CubeSpec::new(3).unwrap();
        let g = generators(spec);
        let bsgs = build_bsgs(&g.perms, Some(3), 1).unwrap();
        assert!(g.perms.iter().all(|p| bsgs.contains(p)));
        let w = random_word(spec, 40, 9);
        assert!(bsgs.contains(&sequence_permutation(spec, &w).unwrap()));
        let atlas = cached_atlas(spec);
        let mut t = ConfigTuple::identity(&atlas);
        t.x[0] = 1;
        let twisted = compose(&t, &atlas).unwrap();
        assert!(!bsgs.contains(&twisted.as_permutation()));
    }

    #[test]
    fn corner_families() {
        let spec = CubeSpec::new(3).unwrap();
        let cyc = conjugates(spec, &corner_three_cycle(spec).unwrap().sequence, 2);
        let order = subgroup_order(spec, &cyc, Restriction::Slots(OrbitKind::Corner)).unwrap();
        assert_eq!(order, BigUint::from(20160u32));
        let tw = conjugates(spec, &corner_twist_pair(spec).unwrap().sequence, 2);
        assert_eq!(subgroup_order(spec, &tw, Restriction::Stickers).unwrap(), BigUint::from(2187u32));
    }

    #[test]
    fn ball_counts() {
        let spec = CubeSpec::new(2).unwrap();
        assert_eq!(bfs_states(spec, 0, 10).unwrap().count, 1);
        let r = bfs_states(spec, 1, 100).unwrap();
        assert_eq!(r.count, 13);
        assert_eq!(r.invalid, 0);
        let bound: BigUint = (0..=2).map(|k| reduced_sequence_count(2, k)).sum();
        assert!(BigUint::from(bfs_states(spec, 2, 10_000).unwrap().count) <= bound);
        assert!(matches!(bfs_states(spec, 3, 50), Err(CubeError::DepthTooLarge(3))));
    }

    #[test]
    fn odd_ball_includes_central_slices() {
        let spec = CubeSpec::new(3).unwrap();
        let r = bfs_states(spec, 2, 100_000).unwrap();
        assert_eq!(r.per_depth[1], 18);
        assert_eq!(r.invalid, 0);
        assert!(r.sample.iter().any(|s| decompose(s, &cached_atlas(spec)).is_err()));
    }

    #[test]
    fn wilson_basics() {
        let w = wilson_interval(50, 100, Z_99);
        assert!(w.contains(0.5) && w.lower > 0.36 && w.upper < 0.64);
        let spec = CubeSpec::new(2).unwrap();
        let e = estimate_valid_fraction(spec, 3000, 4).unwrap();
        let p = 1.0 / orbit_count(2).to_string().parse::<f64>().unwrap();
        assert!(e.contains(p), "{e:?}");
    }
}
