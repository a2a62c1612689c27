//! Orbit classification of cubie positions and conversion between sticker
//! states and configuration tuples.
//!
//! Orientation references, one per slot (`facelets[0]`):
//!
//! * corner: the U or D facelet, followed by the other two clockwise as seen
//!   from outside the corner;
//! * single edge: U/D on the UF, UB, DF, DB edges, R/L on UR, UL, DR, DL and
//!   F/B on FR, FL, BR, BL, so that every face quarter turn flips its four
//!   single edges;
//! * coupled edge: the facelet lying in the sticker orbit (under all moves)
//!   that contains the orbit's smallest facelet index.
//!
//! Orientation of a slot is the index `t` with the cubie's home reference
//! facelet sitting at `facelets[t]`. Permutations map home slots to current
//! slots: `perm.apply(home) == current`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::cube_model::{cubie_of_point, sticker_permutation, sticker_point, CubeSpec, CubeState, StickerIndex};
use crate::error::CubeError;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Corner,
    SingleEdge,
    CoupledEdge(usize),
    CenterCorner(usize),
    CenterEdge(usize, usize),
    FixedCenter,
}

impl OrbitKind {
    /// Stickers per cubie.
    pub fn arity(self) -> usize {
        match self {
            OrbitKind::Corner => 3,
            OrbitKind::SingleEdge | OrbitKind::CoupledEdge(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitKind::Corner => write!(f, "corner"),
            OrbitKind::SingleEdge => write!(f, "single_edge"),
            OrbitKind::CoupledEdge(i) => write!(f, "coupled_edge[{i}]"),
            OrbitKind::CenterCorner(i) => write!(f, "center_corner[{i}]"),
            OrbitKind::CenterEdge(i, j) => write!(f, "center_edge[{i},{j}]"),
            OrbitKind::FixedCenter => write!(f, "fixed_center"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub kind: OrbitKind,
    /// Sticker positions of each slot, reference facelet first.
    pub slots: Vec<Vec<usize>>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub orbit: usize,
    pub slot: usize,
    pub facelet: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitAtlas {
    pub n: usize,
    pub orbits: Vec<Orbit>,
    #[serde(skip)]
    locations: Vec<Location>,
}

impl OrbitAtlas {
    pub fn spec(&self) -> CubeSpec {
        CubeSpec::new(self.n).expect("atlas built from a valid spec")
    }

    pub fn orbit_index(&self, kind: OrbitKind) -> Option<usize> {
        self.orbits.iter().position(|o| o.kind == kind)
    }

    pub fn orbit(&self, kind: OrbitKind) -> Option<&Orbit> {
        self.orbit_index(kind).map(|k| &self.orbits[k])
    }

    pub fn locate(&self, sticker: usize) -> Location {
        self.locations[sticker]
    }

    pub fn kinds(&self) -> impl Iterator<Item = OrbitKind> + '_ {
        self.orbits.iter().map(|o| o.kind)
    }

    pub fn coupled_indices(&self) -> Vec<usize> {
        self.kinds()
            .filter_map(|k| match k {
                OrbitKind::CoupledEdge(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    pub fn center_corner_indices(&self) -> Vec<usize> {
        self.kinds()
            .filter_map(|k| match k {
                OrbitKind::CenterCorner(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    pub fn center_edge_pairs(&self) -> Vec<(usize, usize)> {
        self.kinds()
            .filter_map(|k| match k {
                OrbitKind::CenterEdge(i, j) => Some((i, j)),
                _ => None,
            })
            .collect()
    }

    /// Cubie-level permutation of one orbit induced by a sticker permutation
    /// that maps cubies to cubies (`perm.apply(home) == new slot`).
    pub fn slot_permutation(&self, orbit: usize, p: &Permutation) -> Permutation {
        let o = &self.orbits[orbit];
        let images = o
            .slots
            .iter()
            .map(|f| self.locate(p.apply(f[0])).slot)
            .collect();
        Permutation::from_images(images).expect("moves permute cubies within an orbit")
    }
}

fn classify(n: usize, sticker: usize) -> OrbitKind {
    let c = cubie_of_point(n, sticker_point(n, sticker));
    let extreme = n as i32 - 1;
    let outer = c.iter().filter(|v| v.abs() == extreme).count();
    match outer {
        3 => OrbitKind::Corner,
        2 => {
            let free = c.iter().position(|v| v.abs() != extreme).unwrap();
            let k = ((c[free] + extreme) / 2) as usize;
            if n % 2 == 1 && k == (n - 1) / 2 {
                OrbitKind::SingleEdge
            } else {
                OrbitKind::CoupledEdge(k.min(n - 1 - k) + 1)
            }
        }
        1 => {
            let s = StickerIndex::from_linear(n, sticker);
            let (mut r, mut col) = (s.row, s.col);
            let dr = r.min(n - 1 - r);
            let dc = col.min(n - 1 - col);
            if n % 2 == 1 && dr == (n - 1) / 2 && dc == dr {
                return OrbitKind::FixedCenter;
            }
            if dr == dc {
                return OrbitKind::CenterCorner(dr + 1);
            }
            // Quarter-rotate within the face until the position lies in the
            // top-left quadrant; its 1-based (row, col) names the orbit.
            for _ in 0..4 {
                if r < n / 2 && col < n.div_ceil(2) {
                    return OrbitKind::CenterEdge(r + 1, col + 1);
                }
                (r, col) = (col, n - 1 - r);
            }
            unreachable!("every center has a rotation in the top-left quadrant")
        }
        _ => unreachable!("stickers sit on corners, edges or centers"),
    }
}

fn det(a: [i32; 3], b: [i32; 3], c: [i32; 3]) -> i32 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn normal_of(n: usize, sticker: usize) -> [i32; 3] {
    let (axis, sign) = StickerIndex::from_linear(n, sticker).face.normal();
    let mut v = [0; 3];
    v[axis] = sign;
    v
}

fn face_axis(n: usize, sticker: usize) -> usize {
    StickerIndex::from_linear(n, sticker).face.normal().0
}

/// Union-find over the stickers, joined along every generator.
fn sticker_orbits(spec: CubeSpec) -> Vec<usize> {
    let total = spec.sticker_count();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for mv in spec.generator_moves() {
        let p = sticker_permutation(spec, mv).expect("generator moves are legal");
        for i in 0..total {
            let (a, b) = (find(&mut parent, i), find(&mut parent, p.apply(i)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..total).map(|i| find(&mut parent, i)).collect()
}

pub fn build_atlas(spec: CubeSpec) -> OrbitAtlas {
    let n = spec.n();
    let total = spec.sticker_count();

    // Group stickers into cubies by their cubie center.
    let mut cubies: std::collections::BTreeMap<[i32; 3], Vec<usize>> = Default::default();
    for s in 0..total {
        cubies
            .entry(cubie_of_point(n, sticker_point(n, s)))
            .or_default()
            .push(s);
    }

    let root = sticker_orbits(spec);
    let mut by_kind: std::collections::BTreeMap<OrbitKind, Vec<Vec<usize>>> = Default::default();
    for (_, mut facelets) in cubies {
        let kind = classify(n, facelets[0]);
        match kind {
            OrbitKind::Corner => {
                let a = facelets.iter().position(|&f| face_axis(n, f) == 1).unwrap();
                facelets.swap(0, a);
                let [x, y, z] = [facelets[0], facelets[1], facelets[2]].map(|f| normal_of(n, f));
                if det(x, y, z) > 0 {
                    facelets.swap(1, 2);
                }
            }
            OrbitKind::SingleEdge => {
                let c = cubie_of_point(n, sticker_point(n, facelets[0]));
                let free = c.iter().position(|v| v.abs() != n as i32 - 1).unwrap();
                let reference_axis = (free + 1) % 3;
                if face_axis(n, facelets[0]) != reference_axis {
                    facelets.swap(0, 1);
                }
            }
            _ => {}
        }
        by_kind.entry(kind).or_default().push(facelets);
    }

    let mut orbits = Vec::new();
    for (kind, mut slots) in by_kind {
        if let OrbitKind::CoupledEdge(_) = kind {
            let half_a = slots.iter().flatten().map(|&f| root[f]).min().unwrap();
            for f in &mut slots {
                if root[f[0]] != half_a {
                    f.swap(0, 1);
                }
                debug_assert_eq!(root[f[0]], half_a);
            }
        }
        slots.sort_by_key(|f| f[0]);
        orbits.push(Orbit { kind, slots });
    }

    let mut locations = vec![
        Location {
            orbit: usize::MAX,
            slot: 0,
            facelet: 0
        };
        total
    ];
    for (oi, o) in orbits.iter().enumerate() {
        for (si, f) in o.slots.iter().enumerate() {
            for (k, &s) in f.iter().enumerate() {
                locations[s] = Location {
                    orbit: oi,
                    slot: si,
                    facelet: k,
                };
            }
        }
    }
    OrbitAtlas { n, orbits, locations }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicePerm {
    pub i: usize,
    pub perm: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPerm {
    pub i: usize,
    pub j: usize,
    pub perm: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceOrientation {
    pub i: usize,
    pub values: Vec<u8>,
}

/// `(sigma, tau_s, tau_c, rho_c, rho_e, x, y, z)`; single-edge parts are
/// `None` on even cubes. Orientation vectors are indexed by slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigTuple {
    pub n: usize,
    pub sigma: Permutation,
    pub tau_s: Option<Permutation>,
    pub tau_c: Vec<SlicePerm>,
    pub rho_c: Vec<SlicePerm>,
    pub rho_e: Vec<PairPerm>,
    pub x: Vec<u8>,
    pub y: Vec<SliceOrientation>,
    pub z: Option<Vec<u8>>,
}

impl ConfigTuple {
    pub fn identity(atlas: &OrbitAtlas) -> ConfigTuple {
        ConfigTuple::identity_for(atlas.n)
    }

    /// The solved tuple for an n-cube, laid out in atlas order.
    pub fn identity_for(n: usize) -> ConfigTuple {
        let id = |k| Permutation::identity(k);
        let odd = n % 2 == 1;
        let slices = 2..=n / 2;
        ConfigTuple {
            n,
            sigma: id(8),
            tau_s: odd.then(|| id(12)),
            tau_c: slices.clone().map(|i| SlicePerm { i, perm: id(24) }).collect(),
            rho_c: slices.clone().map(|i| SlicePerm { i, perm: id(24) }).collect(),
            rho_e: slices
                .clone()
                .flat_map(|i| (2..=n.div_ceil(2)).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| PairPerm { i, j, perm: id(24) })
                .collect(),
            x: vec![0; 8],
            y: slices.map(|i| SliceOrientation { i, values: vec![0; 24] }).collect(),
            z: odd.then(|| vec![0; 12]),
        }
    }

    pub fn is_identity(&self) -> bool {
        let id = |p: &Permutation| p.is_identity();
        id(&self.sigma)
            && self.tau_s.as_ref().is_none_or(id)
            && self.tau_c.iter().all(|t| id(&t.perm))
            && self.rho_c.iter().all(|t| id(&t.perm))
            && self.rho_e.iter().all(|t| id(&t.perm))
            && self.x.iter().all(|&v| v == 0)
            && self.z.iter().flatten().all(|&v| v == 0)
            && self.y.iter().all(|o| o.values.iter().all(|&v| v == 0))
    }

    /// Permutation component for an orbit, if the tuple has one.
    pub fn perm(&self, kind: OrbitKind) -> Option<&Permutation> {
        match kind {
            OrbitKind::Corner => Some(&self.sigma),
            OrbitKind::SingleEdge => self.tau_s.as_ref(),
            OrbitKind::CoupledEdge(i) => self.tau_c.iter().find(|t| t.i == i).map(|t| &t.perm),
            OrbitKind::CenterCorner(i) => self.rho_c.iter().find(|t| t.i == i).map(|t| &t.perm),
            OrbitKind::CenterEdge(i, j) => self
                .rho_e
                .iter()
                .find(|t| t.i == i && t.j == j)
                .map(|t| &t.perm),
            OrbitKind::FixedCenter => None,
        }
    }

    pub fn perm_mut(&mut self, kind: OrbitKind) -> Option<&mut Permutation> {
        match kind {
            OrbitKind::Corner => Some(&mut self.sigma),
            OrbitKind::SingleEdge => self.tau_s.as_mut(),
            OrbitKind::CoupledEdge(i) => self.tau_c.iter_mut().find(|t| t.i == i).map(|t| &mut t.perm),
            OrbitKind::CenterCorner(i) => self.rho_c.iter_mut().find(|t| t.i == i).map(|t| &mut t.perm),
            OrbitKind::CenterEdge(i, j) => self
                .rho_e
                .iter_mut()
                .find(|t| t.i == i && t.j == j)
                .map(|t| &mut t.perm),
            OrbitKind::FixedCenter => None,
        }
    }

    /// Orientation vector for corners, single edges or a coupled orbit.
    pub fn orientation(&self, kind: OrbitKind) -> Option<&[u8]> {
        match kind {
            OrbitKind::Corner => Some(&self.x),
            OrbitKind::SingleEdge => self.z.as_deref(),
            OrbitKind::CoupledEdge(i) => self.y.iter().find(|o| o.i == i).map(|o| o.values.as_slice()),
            _ => None,
        }
    }

    pub fn orientation_mut(&mut self, kind: OrbitKind) -> Option<&mut Vec<u8>> {
        match kind {
            OrbitKind::Corner => Some(&mut self.x),
            OrbitKind::SingleEdge => self.z.as_mut(),
            OrbitKind::CoupledEdge(i) => self.y.iter_mut().find(|o| o.i == i).map(|o| &mut o.values),
            _ => None,
        }
    }

    /// Sign of the coupled-edge permutation of slice `i`; +1 if the slice has
    /// no coupled orbit (the central slice of an odd cube).
    pub fn coupled_sign(&self, i: usize) -> i8 {
        self.perm(OrbitKind::CoupledEdge(i)).map_or(1, Permutation::sign)
    }

    /// Checks that every component has the size and index set an n-cube needs.
    pub fn check_shape(&self, n: usize) -> Result<(), CubeError> {
        let expected = ConfigTuple::identity_for(n);
        let mismatch = |what: &str| CubeError::ShapeMismatch(format!("{what} does not fit n = {n}"));
        if self.n != n {
            return Err(mismatch("n"));
        }
        if self.sigma.len() != 8 || self.x.len() != 8 {
            return Err(mismatch("corner part"));
        }
        if self.tau_s.as_ref().map(Permutation::len) != expected.tau_s.as_ref().map(Permutation::len)
            || self.z.as_ref().map(Vec::len) != expected.z.as_ref().map(Vec::len)
        {
            return Err(mismatch("single-edge part"));
        }
        let keys = |t: &ConfigTuple| {
            (
                t.tau_c.iter().map(|p| (p.i, p.perm.len())).collect::<Vec<_>>(),
                t.rho_c.iter().map(|p| (p.i, p.perm.len())).collect::<Vec<_>>(),
                t.rho_e.iter().map(|p| (p.i, p.j, p.perm.len())).collect::<Vec<_>>(),
                t.y.iter().map(|p| (p.i, p.values.len())).collect::<Vec<_>>(),
            )
        };
        if keys(self) != keys(&expected) {
            return Err(mismatch("orbit components"));
        }
        let bad_x = self.x.iter().any(|&v| v > 2);
        let bad_z = self.z.iter().flatten().any(|&v| v > 1);
        let bad_y = self.y.iter().any(|o| o.values.iter().any(|&v| v > 1));
        if bad_x || bad_z || bad_y {
            return Err(mismatch("orientation values"));
        }
        Ok(())
    }
}

/// Reads the configuration tuple off a state.
pub fn decompose(state: &CubeState, atlas: &OrbitAtlas) -> Result<ConfigTuple, CubeError> {
    if state.n() != atlas.n {
        return Err(CubeError::ShapeMismatch(format!(
            "state has n = {}, atlas has n = {}",
            state.n(),
            atlas.n
        )));
    }
    let mut tuple = ConfigTuple::identity(atlas);
    for (oi, orbit) in atlas.orbits.iter().enumerate() {
        let arity = orbit.kind.arity();
        let mut images = vec![usize::MAX; orbit.len()];
        let mut orient = vec![0u8; orbit.len()];
        for (s, facelets) in orbit.slots.iter().enumerate() {
            let bad = || {
                CubeError::NotAConfiguration(format!(
                    "{} slot {} (sticker {}) holds no cubie of its orbit",
                    orbit.kind, s, facelets[0]
                ))
            };
            let t = facelets
                .iter()
                .position(|&f| atlas.locate(state.label(f)).facelet == 0)
                .ok_or_else(bad)?;
            let home = atlas.locate(state.label(facelets[t]));
            if home.orbit != oi {
                return Err(bad());
            }
            let home_facelets = &orbit.slots[home.slot];
            for k in 0..arity {
                if state.label(facelets[(t + k) % arity]) != home_facelets[k] {
                    return Err(bad());
                }
            }
            images[home.slot] = s;
            orient[s] = t as u8;
        }
        let kind = orbit.kind;
        if kind == OrbitKind::FixedCenter {
            if images.iter().enumerate().any(|(h, &s)| h != s) {
                return Err(CubeError::NotAConfiguration(
                    "fixed centers are not in their home positions".into(),
                ));
            }
            continue;
        }
        let perm = Permutation::from_images(images)
            .map_err(|_| CubeError::NotAConfiguration(format!("{kind} cubies are duplicated")))?;
        *tuple.perm_mut(kind).expect("tuple has every non-fixed orbit") = perm;
        if let Some(o) = tuple.orientation_mut(kind) {
            *o = orient;
        }
    }
    Ok(tuple)
}

/// Builds the state a tuple describes.
pub fn compose(tuple: &ConfigTuple, atlas: &OrbitAtlas) -> Result<CubeState, CubeError> {
    tuple.check_shape(atlas.n)?;
    let spec = atlas.spec();
    let mut labels = vec![0u32; spec.sticker_count()];
    for orbit in &atlas.orbits {
        let arity = orbit.kind.arity();
        let perm = tuple.perm(orbit.kind);
        let orient = tuple.orientation(orbit.kind);
        for (h, home_facelets) in orbit.slots.iter().enumerate() {
            let s = perm.map_or(h, |p| p.apply(h));
            let t = orient.map_or(0, |o| o[s] as usize);
            for k in 0..arity {
                labels[orbit.slots[s][(t + k) % arity]] = home_facelets[k] as u32;
            }
        }
    }
    CubeState::from_labels(spec, labels)
}

/// Shared atlas per cube size.
pub fn cached_atlas(spec: CubeSpec) -> Arc<OrbitAtlas> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<OrbitAtlas>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(a) = cache.lock().unwrap().get(&spec.n()) {
        return a.clone();
    }
    let atlas = Arc::new(build_atlas(spec));
    cache.lock().unwrap().entry(spec.n()).or_insert(atlas).clone()
}
