//! Constructive solver. Stages, in order:
//!
//! * `e`: restore the frame (odd cubes), then make every tracked sign +1
//!   with `F` and the inner turns `F_i`;
//! * `p_c`, `p_es`, `p_zc`, `p_ec`, `p_ze`: solve the permutation of each
//!   orbit family with conjugated library 3-cycles;
//! * `o_c`, `o_e`: clear corner twists and single-edge flips with
//!   conjugated twist and flip pairs.
//!
//! Every conjugate is pure on its own orbit, so a stage never disturbs what
//! earlier stages fixed.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::cube_model::{sticker_permutation, CubeSpec, CubeState, Face, Move, MoveSequence};
use crate::cubology_law::{restore_frame, validity_of_state};
use crate::decomposition::{cached_atlas, decompose, ConfigTuple, OrbitAtlas, OrbitKind};
use crate::error::CubeError;
use crate::move_library::{
    center_three_cycle, corner_three_cycle, corner_twist_pair, coupled_edge_three_cycle, single_edge_flip_pair,
    single_edge_three_cycle, NamedMove,
};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Stage {
    #[serde(rename = "e")]
    Signs,
    #[serde(rename = "p_c")]
    Corners,
    #[serde(rename = "p_es")]
    SingleEdges,
    #[serde(rename = "p_zc")]
    CenterCorners,
    #[serde(rename = "p_ec")]
    CoupledEdges,
    #[serde(rename = "p_ze")]
    CenterEdges,
    #[serde(rename = "o_c")]
    CornerTwists,
    #[serde(rename = "o_e")]
    EdgeFlips,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Signs,
        Stage::Corners,
        Stage::SingleEdges,
        Stage::CenterCorners,
        Stage::CoupledEdges,
        Stage::CenterEdges,
        Stage::CornerTwists,
        Stage::EdgeFlips,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Signs => "e",
            Stage::Corners => "p_c",
            Stage::SingleEdges => "p_es",
            Stage::CenterCorners => "p_zc",
            Stage::CoupledEdges => "p_ec",
            Stage::CenterEdges => "p_ze",
            Stage::CornerTwists => "o_c",
            Stage::EdgeFlips => "o_e",
        }
    }

    pub fn from_name(name: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.name() == name)
    }

    /// What holds once this stage has run.
    pub fn achieves(self) -> &'static str {
        match self {
            Stage::Signs => "all tracked signs +1",
            Stage::Corners => "corners placed",
            Stage::SingleEdges => "single edges placed",
            Stage::CenterCorners => "center corners placed",
            Stage::CoupledEdges => "coupled edges placed",
            Stage::CenterEdges => "center edges placed",
            Stage::CornerTwists => "corners twisted home",
            Stage::EdgeFlips => "single edges flipped home",
        }
    }

    /// Whether this stage's postcondition holds on a tuple.
    pub fn done(self, t: &ConfigTuple) -> bool {
        let id = |p: &Permutation| p.is_identity();
        match self {
            Stage::Signs => {
                t.sigma.sign() == 1
                    && t.tau_s.as_ref().is_none_or(|p| p.sign() == 1)
                    && t.tau_c.iter().all(|p| p.perm.sign() == 1)
                    && t.rho_c.iter().all(|p| p.perm.sign() == 1)
                    && t.rho_e.iter().all(|p| p.perm.sign() == 1)
            }
            Stage::Corners => id(&t.sigma),
            Stage::SingleEdges => t.tau_s.as_ref().is_none_or(id),
            Stage::CenterCorners => t.rho_c.iter().all(|p| id(&p.perm)),
            Stage::CoupledEdges => t.tau_c.iter().all(|p| id(&p.perm)),
            Stage::CenterEdges => t.rho_e.iter().all(|p| id(&p.perm)),
            Stage::CornerTwists => t.x.iter().all(|&v| v == 0),
            Stage::EdgeFlips => t.z.iter().flatten().all(|&v| v == 0),
        }
    }

    fn index(self) -> usize {
        Stage::ALL.iter().position(|&s| s == self).expect("listed")
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub sequence: MoveSequence,
    /// Tuple after the stage.
    pub tuple: ConfigTuple,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveTrace {
    pub n: usize,
    pub stages: Vec<StageRecord>,
    pub total: MoveSequence,
}

// Shortest setup words moving a fixed anchor tuple of slots to every other
// ordered tuple of distinct slots in one orbit.
#[derive(Debug)]
struct SetupTable {
    size: usize,
    alphabet: Vec<Move>,
    // parent[code] = (previous code, move index); the anchor has u32::MAX
    parent: Vec<Option<(u32, u16)>>,
}

impl SetupTable {
    fn encode(size: usize, t: &[usize]) -> usize {
        t.iter().rev().fold(0, |acc, &v| acc * size + v)
    }

    fn build(spec: CubeSpec, atlas: &OrbitAtlas, orbit: usize, anchor: &[usize]) -> SetupTable {
        let size = atlas.orbits[orbit].len();
        let alphabet = spec.setup_moves();
        let maps: Vec<Permutation> = alphabet
            .iter()
            .map(|&m| atlas.slot_permutation(orbit, &sticker_permutation(spec, m).expect("legal move")))
            .collect();
        let mut parent = vec![None; size.pow(anchor.len() as u32)];
        let start = Self::encode(size, anchor);
        parent[start] = Some((u32::MAX, 0));
        let mut queue = VecDeque::from([anchor.to_vec()]);
        while let Some(t) = queue.pop_front() {
            let code = Self::encode(size, &t) as u32;
            for (mi, map) in maps.iter().enumerate() {
                let next: Vec<usize> = t.iter().map(|&s| map.apply(s)).collect();
                let c = Self::encode(size, &next);
                if parent[c].is_none() {
                    parent[c] = Some((code, mi as u16));
                    queue.push_back(next);
                }
            }
        }
        SetupTable { size, alphabet, parent }
    }

    /// Word whose slot map sends the anchor to `target`.
    fn word(&self, target: &[usize]) -> Option<MoveSequence> {
        let mut code = Self::encode(self.size, target);
        let mut moves = Vec::new();
        loop {
            let (prev, mi) = self.parent[code]?;
            if prev == u32::MAX {
                break;
            }
            moves.push(self.alphabet[mi as usize]);
            code = prev as usize;
        }
        moves.reverse();
        Some(MoveSequence::new(moves))
    }
}

/// A library move with a pure effect on one orbit, plus its setup table.
#[derive(Debug)]
struct OrbitTool {
    orbit: usize,
    core: MoveSequence,
    // orientation change at anchor[0], for twist/flip tools
    delta: u8,
    table: SetupTable,
}

fn core_move(spec: CubeSpec, kind: OrbitKind, orientation: bool) -> Result<NamedMove, CubeError> {
    match (kind, orientation) {
        (OrbitKind::Corner, false) => corner_three_cycle(spec),
        (OrbitKind::Corner, true) => corner_twist_pair(spec),
        (OrbitKind::SingleEdge, false) => single_edge_three_cycle(spec),
        (OrbitKind::SingleEdge, true) => single_edge_flip_pair(spec),
        (OrbitKind::CoupledEdge(i), false) => coupled_edge_three_cycle(spec, i),
        (OrbitKind::CenterCorner(i), false) => center_three_cycle(spec, i, i),
        (OrbitKind::CenterEdge(i, j), false) => center_three_cycle(spec, i, j),
        _ => Err(CubeError::InvalidState(format!("no library move for {kind}"))),
    }
}

impl OrbitTool {
    fn build(spec: CubeSpec, kind: OrbitKind, orientation: bool) -> Result<OrbitTool, CubeError> {
        let atlas = cached_atlas(spec);
        let orbit = atlas
            .orbit_index(kind)
            .ok_or_else(|| CubeError::InvalidState(format!("no {kind} orbit for n={}", spec.n())))?;
        let named = core_move(spec, kind, orientation)?;
        if !named.report.pass {
            return Err(CubeError::InvalidState(format!("{} fails its contract", named.label())));
        }
        let effect = decompose(&CubeState::solved(spec).apply_sequence(&named.sequence)?, &atlas)?;
        let (anchor, delta) = if orientation {
            let o = effect.orientation(kind).expect("oriented orbit");
            let turned: Vec<usize> = (0..o.len()).filter(|&s| o[s] != 0).collect();
            (turned.clone(), o[turned[0]])
        } else {
            let cycles = effect.perm(kind).expect("permuted orbit").cycles();
            (cycles[0].clone(), 0)
        };
        let table = SetupTable::build(spec, &atlas, orbit, &anchor);
        Ok(OrbitTool { orbit, core: named.sequence, delta, table })
    }

    /// `v' core v` with `v` sending the anchor to `target`.
    fn conjugate(&self, target: &[usize], inverse: bool) -> Option<MoveSequence> {
        let v = self.table.word(target)?;
        let core = if inverse { self.core.inverse() } else { self.core.clone() };
        Some(v.inverse().concat(&core).concat(&v))
    }

    /// Conjugated 3-cycle moving the cubie in `x` to `y`, `y` to `z`, `z` to `x`.
    fn three_cycle(&self, x: usize, y: usize, z: usize) -> Option<MoveSequence> {
        let forward = [[x, y, z], [y, z, x], [z, x, y]];
        let backward = [[x, z, y], [z, y, x], [y, x, z]];
        let best = |targets: &[[usize; 3]]| {
            targets
                .iter()
                .filter_map(|t| self.table.word(t))
                .min_by_key(MoveSequence::len)
        };
        let f = best(&forward).map(|v| (v, false));
        let b = best(&backward).map(|v| (v, true));
        let (v, inverse) = match (f, b) {
            (Some(f), Some(b)) => {
                if b.0.len() < f.0.len() {
                    b
                } else {
                    f
                }
            }
            (f, b) => f.or(b)?,
        };
        let core = if inverse { self.core.inverse() } else { self.core.clone() };
        Some(v.inverse().concat(&core).concat(&v))
    }
}

type ToolKey = (usize, OrbitKind, bool);

fn tool(spec: CubeSpec, kind: OrbitKind, orientation: bool) -> Result<Arc<OrbitTool>, CubeError> {
    static CACHE: OnceLock<Mutex<HashMap<ToolKey, Arc<OrbitTool>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (spec.n(), kind, orientation);
    if let Some(t) = cache.lock().expect("tool cache").get(&key) {
        return Ok(t.clone());
    }
    let built = Arc::new(OrbitTool::build(spec, kind, orientation)?);
    Ok(cache.lock().expect("tool cache").entry(key).or_insert(built).clone())
}

/// Writes an even permutation (`perm.apply(home) == slot`) as slot 3-cycles
/// `(from, to, third)`, lowest misplaced cubie first.
pub fn three_cycle_factorization(perm: &Permutation) -> Result<Vec<[usize; 3]>, CubeError> {
    if perm.sign() != 1 {
        return Err(CubeError::InvalidState("odd permutation has no 3-cycle factorization".into()));
    }
    let mut p = perm.clone();
    let mut out = Vec::new();
    while let Some(h) = (0..p.len()).find(|&h| p.apply(h) != h) {
        let t = p.apply(h);
        let u = (0..p.len())
            .find(|&s| s != h && s != t && p.apply(s) != s)
            .expect("an even permutation never leaves a lone transposition");
        // slot t -> h, h -> u, u -> t
        let mut images: Vec<usize> = (0..p.len()).collect();
        images[t] = h;
        images[h] = u;
        images[u] = t;
        p = p.then(&Permutation::from_images(images).expect("3-cycle"));
        out.push([t, h, u]);
    }
    Ok(out)
}

fn tuple_of(state: &CubeState, stage: Stage) -> Result<ConfigTuple, CubeError> {
    decompose(state, &cached_atlas(state.spec())).map_err(|_| CubeError::StageOrderViolation {
        stage: stage.name(),
        requirement: "fixed centers home",
    })
}

fn permutation_kinds(stage: Stage, t: &ConfigTuple) -> Vec<OrbitKind> {
    match stage {
        Stage::Corners => vec![OrbitKind::Corner],
        Stage::SingleEdges => t.tau_s.iter().map(|_| OrbitKind::SingleEdge).collect(),
        Stage::CenterCorners => t.rho_c.iter().map(|p| OrbitKind::CenterCorner(p.i)).collect(),
        Stage::CoupledEdges => t.tau_c.iter().map(|p| OrbitKind::CoupledEdge(p.i)).collect(),
        Stage::CenterEdges => t.rho_e.iter().map(|p| OrbitKind::CenterEdge(p.i, p.j)).collect(),
        _ => vec![],
    }
}

fn signs_stage(state: &CubeState) -> Result<MoveSequence, CubeError> {
    let mut seq = restore_frame(state)?;
    let framed = state.apply_sequence(&seq)?;
    let t = decompose(&framed, &cached_atlas(state.spec()))?;
    if t.sigma.sign() == -1 {
        seq.push(Move::new(Face::F, 1, 1));
    }
    // an inner F turn is a 4-cycle on its coupled orbit and fixes corners
    for p in &t.tau_c {
        if p.perm.sign() == -1 {
            seq.push(Move::new(Face::F, p.i, 1));
        }
    }
    Ok(seq)
}

fn orientation_stage(spec: CubeSpec, kind: OrbitKind, t: &ConfigTuple) -> Result<MoveSequence, CubeError> {
    let Some(values) = t.orientation(kind) else {
        return Ok(MoveSequence::empty());
    };
    let modulus = kind.arity() as u8;
    let tool = tool(spec, kind, true)?;
    let last = values.len() - 1;
    let mut seq = MoveSequence::empty();
    for (s, &v) in values.iter().enumerate().take(last) {
        if v == 0 {
            continue;
        }
        // the forward conjugate adds `delta` at s, the inverse subtracts it
        let inverse = (v + tool.delta) % modulus != 0;
        let word = tool
            .conjugate(&[s, last], inverse)
            .ok_or_else(|| CubeError::InvalidState(format!("no setup reaches {kind} slots ({s}, {last})")))?;
        seq.extend(&word);
    }
    Ok(seq)
}

fn stage_sequence(state: &CubeState, stage: Stage, t: &ConfigTuple) -> Result<MoveSequence, CubeError> {
    let spec = state.spec();
    match stage {
        Stage::Signs => signs_stage(state),
        Stage::CornerTwists => orientation_stage(spec, OrbitKind::Corner, t),
        Stage::EdgeFlips => orientation_stage(spec, OrbitKind::SingleEdge, t),
        _ => {
            let mut seq = MoveSequence::empty();
            for kind in permutation_kinds(stage, t) {
                let perm = t.perm(kind).expect("listed kinds have permutations");
                if perm.is_identity() {
                    continue;
                }
                let tool = tool(spec, kind, false)?;
                debug_assert_eq!(cached_atlas(spec).orbits[tool.orbit].kind, kind);
                for [x, y, z] in three_cycle_factorization(perm)? {
                    let word = tool
                        .three_cycle(x, y, z)
                        .ok_or_else(|| CubeError::InvalidState(format!("no setup reaches {kind} slots")))?;
                    seq.extend(&word);
                }
            }
            Ok(seq)
        }
    }
}

fn ensure_solvable(state: &CubeState) -> Result<(), CubeError> {
    let report = validity_of_state(state)?;
    if report.valid {
        Ok(())
    } else {
        Err(CubeError::NotSolvable(Box::new(report)))
    }
}

fn run_stage(state: &CubeState, stage: Stage) -> Result<(MoveSequence, CubeState, ConfigTuple), CubeError> {
    let before = if stage == Stage::Signs {
        None
    } else {
        let t = tuple_of(state, stage)?;
        if let Some(prior) = Stage::ALL[..stage.index()].iter().find(|s| !s.done(&t)) {
            return Err(CubeError::StageOrderViolation {
                stage: stage.name(),
                requirement: prior.achieves(),
            });
        }
        Some(t)
    };
    let t = match before {
        Some(t) => t,
        None => decompose(
            &state.apply_sequence(&restore_frame(state)?)?,
            &cached_atlas(state.spec()),
        )?,
    };
    let seq = stage_sequence(state, stage, &t)?.cancel_adjacent();
    let after = state.apply_sequence(&seq)?;
    let tuple = decompose(&after, &cached_atlas(state.spec()))?;
    if !Stage::ALL[..=stage.index()].iter().all(|s| s.done(&tuple)) {
        return Err(CubeError::InvalidState(format!("stage {stage} missed its postcondition")));
    }
    Ok((seq, after, tuple))
}

/// Runs one stage on a state whose earlier stages are complete.
pub fn solve_stage(state: &CubeState, stage: Stage) -> Result<(MoveSequence, CubeState), CubeError> {
    ensure_solvable(state)?;
    let (seq, after, _) = run_stage(state, stage)?;
    Ok((seq, after))
}

/// Solves a valid state, recording each stage.
pub fn solve(state: &CubeState) -> Result<SolveTrace, CubeError> {
    ensure_solvable(state)?;
    let mut current = state.clone();
    let mut stages = Vec::with_capacity(Stage::ALL.len());
    let mut total = MoveSequence::empty();
    for stage in Stage::ALL {
        let (seq, after, tuple) = run_stage(&current, stage)?;
        total.extend(&seq);
        stages.push(StageRecord { stage, sequence: seq, tuple });
        current = after;
    }
    let total = total.cancel_adjacent();
    if !state.apply_sequence(&total)?.is_solved() {
        return Err(CubeError::InvalidState("solution does not solve the cube".into()));
    }
    Ok(SolveTrace { n: state.n(), stages, total })
}
