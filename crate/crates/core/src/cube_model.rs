//! Geometry, sticker states and the slice-move engine for an n x n x n cube.
//!
//! Faces are numbered U=0, L=1, F=2, R=3, B=4, D=5 and every face stores its
//! n x n stickers row-major, so sticker `(face, row, col)` has linear index
//! `face * n^2 + row * n + col`. Each face's frame is the one it has in the
//! unfolded cross net, seen from outside the cube:
//!
//! ```text
//!            U                 row 0 of U touches B, col 0 touches L
//!        L   F   R   B         row 0 of L/F/R/B touches U;
//!            D                 col 0 of L, F, R, B touches B, L, F, R
//!                              row 0 of D touches F, col 0 touches L
//! ```
//!
//! Internally a sticker is located by an integer point in doubled
//! coordinates: cubie layer `k` sits at `2k - (n - 1)`, x grows towards R,
//! y towards U and z towards F, and the sticker point is pushed one unit out
//! of its cubie along the face normal (so its face coordinate is `±n`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CubeError;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Face {
    U,
    L,
    F,
    R,
    B,
    D,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::U, Face::L, Face::F, Face::R, Face::B, Face::D];

    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn from_ordinal(i: usize) -> Face {
        Face::ALL[i]
    }

    pub fn letter(self) -> char {
        match self {
            Face::U => 'U',
            Face::L => 'L',
            Face::F => 'F',
            Face::R => 'R',
            Face::B => 'B',
            Face::D => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Face> {
        Some(match c {
            'U' => Face::U,
            'L' => Face::L,
            'F' => Face::F,
            'R' => Face::R,
            'B' => Face::B,
            'D' => Face::D,
            _ => return None,
        })
    }

    /// Color of this face in the solved state.
    pub fn home_color(self) -> Color {
        match self {
            Face::U => Color::W,
            Face::L => Color::O,
            Face::F => Color::G,
            Face::R => Color::R,
            Face::B => Color::B,
            Face::D => Color::Y,
        }
    }

    /// Outward normal as (axis, sign) with axes x=0, y=1, z=2.
    pub fn normal(self) -> (usize, i32) {
        match self {
            Face::U => (1, 1),
            Face::D => (1, -1),
            Face::R => (0, 1),
            Face::L => (0, -1),
            Face::F => (2, 1),
            Face::B => (2, -1),
        }
    }

    pub fn opposite(self) -> Face {
        match self {
            Face::U => Face::D,
            Face::D => Face::U,
            Face::L => Face::R,
            Face::R => Face::L,
            Face::F => Face::B,
            Face::B => Face::F,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    W,
    O,
    G,
    R,
    B,
    Y,
}

impl Color {
    pub const ALL: [Color; 6] = [Color::W, Color::O, Color::G, Color::R, Color::B, Color::Y];

    pub fn letter(self) -> char {
        match self {
            Color::W => 'W',
            Color::O => 'O',
            Color::G => 'G',
            Color::R => 'R',
            Color::B => 'B',
            Color::Y => 'Y',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        Some(match c {
            'W' => Color::W,
            'O' => Color::O,
            'G' => Color::G,
            'R' => Color::R,
            'B' => Color::B,
            'Y' => Color::Y,
            _ => return None,
        })
    }

    /// The face whose solved color this is.
    pub fn home_face(self) -> Face {
        Face::from_ordinal(self as usize)
    }

    fn ansi_background(self) -> &'static str {
        match self {
            Color::W => "\x1b[30;107m",
            Color::O => "\x1b[30;48;5;208m",
            Color::G => "\x1b[30;42m",
            Color::R => "\x1b[30;41m",
            Color::B => "\x1b[30;44m",
            Color::Y => "\x1b[30;103m",
        }
    }
}

/// Edge length of the cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeSpec {
    n: usize,
}

impl CubeSpec {
    pub fn new(n: usize) -> Result<Self, CubeError> {
        if n < 2 {
            return Err(CubeError::InvalidSize(n));
        }
        Ok(Self { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn sticker_count(self) -> usize {
        6 * self.n * self.n
    }

    pub fn is_odd(self) -> bool {
        self.n % 2 == 1
    }

    /// Depth of the central slice, if there is one.
    pub fn central_depth(self) -> Option<usize> {
        self.is_odd().then_some(self.n.div_ceil(2))
    }

    /// Largest depth that is not a central slice.
    pub fn max_outer_depth(self) -> usize {
        self.n / 2
    }

    pub fn check_depth(self, depth: usize) -> Result<(), CubeError> {
        if (1..=self.max_outer_depth()).contains(&depth) || Some(depth) == self.central_depth() {
            Ok(())
        } else {
            Err(CubeError::IllegalDepth { n: self.n, depth })
        }
    }

    /// Every quarter turn that keeps the fixed centers fixed: faces at depths
    /// `1..=n/2`, clockwise only. These generate the cube group.
    pub fn generator_moves(self) -> Vec<Move> {
        let mut out = Vec::new();
        for face in Face::ALL {
            for depth in 1..=self.max_outer_depth() {
                out.push(Move::new(face, depth, 1));
            }
        }
        out
    }

    /// Quarter turns in both directions on every slice, central slices
    /// included: `6n` moves in total.
    pub fn basic_moves(self) -> Vec<Move> {
        let mut out = Vec::new();
        for face in Face::ALL {
            for depth in 1..=self.max_outer_depth() {
                out.push(Move::new(face, depth, 1));
                out.push(Move::new(face, depth, 3));
            }
        }
        if let Some(m) = self.central_depth() {
            for face in [Face::L, Face::D, Face::F] {
                out.push(Move::new(face, m, 1));
                out.push(Move::new(face, m, 3));
            }
        }
        out
    }

    /// Setup alphabet used by searches: every fixed-frame slice turn with 1, 2 or 3 quarter turns.
    pub fn setup_moves(self) -> Vec<Move> {
        let mut out = Vec::new();
        for face in Face::ALL {
            for depth in 1..=self.max_outer_depth() {
                for turns in 1..=3 {
                    out.push(Move::new(face, depth, turns));
                }
            }
        }
        out
    }
}

/// A sticker position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StickerIndex {
    pub face: Face,
    pub row: usize,
    pub col: usize,
}

impl StickerIndex {
    pub fn linear(self, n: usize) -> usize {
        self.face.ordinal() * n * n + self.row * n + self.col
    }

    pub fn from_linear(n: usize, idx: usize) -> StickerIndex {
        let face = Face::from_ordinal(idx / (n * n));
        let rem = idx % (n * n);
        StickerIndex {
            face,
            row: rem / n,
            col: rem % n,
        }
    }
}

pub(crate) type Point = [i32; 3];

#[inline]
fn layer_coord(n: usize, k: usize) -> i32 {
    2 * k as i32 - (n as i32 - 1)
}

#[inline]
fn layer_index(n: usize, v: i32) -> usize {
    ((v + n as i32 - 1) / 2) as usize
}

pub(crate) fn sticker_point(n: usize, idx: usize) -> Point {
    let s = StickerIndex::from_linear(n, idx);
    let e = n as i32;
    let r = layer_coord(n, s.row);
    let c = layer_coord(n, s.col);
    match s.face {
        Face::U => [c, e, r],
        Face::D => [c, -e, -r],
        Face::F => [c, -r, e],
        Face::B => [-c, -r, -e],
        Face::R => [e, -r, -c],
        Face::L => [-e, -r, c],
    }
}

pub(crate) fn point_sticker(n: usize, p: Point) -> usize {
    let e = n as i32;
    let (face, row, col) = if p[1] == e {
        (Face::U, p[2], p[0])
    } else if p[1] == -e {
        (Face::D, -p[2], p[0])
    } else if p[2] == e {
        (Face::F, -p[1], p[0])
    } else if p[2] == -e {
        (Face::B, -p[1], -p[0])
    } else if p[0] == e {
        (Face::R, -p[1], -p[2])
    } else if p[0] == -e {
        (Face::L, -p[1], p[2])
    } else {
        unreachable!("point {p:?} is not on the surface")
    };
    StickerIndex {
        face,
        row: layer_index(n, row),
        col: layer_index(n, col),
    }
    .linear(n)
}

/// Center of the cubie carrying the sticker at `p` (doubled coordinates).
pub(crate) fn cubie_of_point(n: usize, p: Point) -> Point {
    let e = n as i32;
    p.map(|v| if v == e { e - 1 } else if v == -e { -(e - 1) } else { v })
}

/// Rotates by a quarter turn clockwise as seen from the tip of `(axis, sign)`.
pub(crate) fn rotate_cw(p: Point, axis: usize, sign: i32) -> Point {
    let [x, y, z] = p;
    // A clockwise turn seen from +axis is -90 degrees about +axis.
    match (axis, sign > 0) {
        (0, true) => [x, z, -y],
        (0, false) => [x, -z, y],
        (1, true) => [-z, y, x],
        (1, false) => [z, y, -x],
        (2, true) => [y, -x, z],
        (2, false) => [-y, x, z],
        _ => unreachable!(),
    }
}

/// A slice rotation: the `depth`-th layer counted from `face`, turned
/// clockwise (seen from `face`) `turns` quarter turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub face: Face,
    pub depth: usize,
    pub turns: u8,
}

impl Move {
    pub fn new(face: Face, depth: usize, turns: u8) -> Self {
        debug_assert!((1..=3).contains(&turns));
        Self { face, depth, turns }
    }

    pub fn inverse(self) -> Move {
        Move {
            turns: 4 - self.turns,
            ..self
        }
    }

    pub fn same_slice(self, other: Move) -> bool {
        self.face == other.face && self.depth == other.depth
    }

    /// Sticker indices in the turned layer.
    fn layer(self, n: usize) -> impl Iterator<Item = usize> {
        let (axis, sign) = self.face.normal();
        let target = n as i32 + 1 - 2 * self.depth as i32;
        (0..6 * n * n).filter(move |&idx| {
            let c = cubie_of_point(n, sticker_point(n, idx));
            sign * c[axis] == target
        })
    }

    /// Destination of each moved sticker as `(from, to)` pairs.
    pub(crate) fn sticker_map(self, n: usize) -> Vec<(usize, usize)> {
        let (axis, sign) = self.face.normal();
        self.layer(n)
            .map(|idx| {
                let mut p = sticker_point(n, idx);
                for _ in 0..self.turns {
                    p = rotate_cw(p, axis, sign);
                }
                (idx, point_sticker(n, p))
            })
            .collect()
    }

    /// Notation label, e.g. `R`, `3F'`, `M2` (M/E/S only for central slices).
    pub fn notation(self, n: usize) -> String {
        let central = n % 2 == 1 && self.depth == n.div_ceil(2);
        let mut s = String::new();
        match (central, self.face) {
            (true, Face::L) => s.push('M'),
            (true, Face::D) => s.push('E'),
            (true, Face::F) => s.push('S'),
            _ => {
                if self.depth > 1 {
                    s.push_str(&self.depth.to_string());
                }
                s.push(self.face.letter());
            }
        }
        s.push_str(turn_suffix(self.turns));
        s
    }
}

fn turn_suffix(turns: u8) -> &'static str {
    match turns {
        1 => "",
        2 => "2",
        3 => "'",
        _ => unreachable!(),
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth > 1 {
            write!(f, "{}", self.depth)?;
        }
        write!(f, "{}{}", self.face.letter(), turn_suffix(self.turns))
    }
}

/// Sticker permutation of a single move: the sticker at `i` ends at `p(i)`.
pub fn sticker_permutation(spec: CubeSpec, mv: Move) -> Result<Permutation, CubeError> {
    spec.check_depth(mv.depth)?;
    let n = spec.n();
    let mut images: Vec<usize> = (0..spec.sticker_count()).collect();
    for (from, to) in mv.sticker_map(n) {
        images[from] = to;
    }
    Permutation::from_images(images)
}

/// Sticker permutation of a whole sequence.
pub fn sequence_permutation(spec: CubeSpec, seq: &MoveSequence) -> Result<Permutation, CubeError> {
    let mut p = Permutation::identity(spec.sticker_count());
    for &mv in seq.moves() {
        p = p.then(&sticker_permutation(spec, mv)?);
    }
    Ok(p)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveSequence {
    moves: Vec<Move>,
}

impl MoveSequence {
    pub fn new(moves: Vec<Move>) -> Self {
        Self { moves }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, mv: Move) {
        self.moves.push(mv);
    }

    pub fn extend(&mut self, other: &MoveSequence) {
        self.moves.extend_from_slice(&other.moves);
    }

    pub fn concat(&self, other: &MoveSequence) -> MoveSequence {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    /// Reversed order with every move inverted.
    pub fn inverse(&self) -> MoveSequence {
        MoveSequence {
            moves: self.moves.iter().rev().map(|m| m.inverse()).collect(),
        }
    }

    pub fn repeat(&self, times: usize) -> MoveSequence {
        MoveSequence {
            moves: self.moves.repeat(times),
        }
    }

    /// `[a, b] = a b a' b'`.
    pub fn commutator(a: &MoveSequence, b: &MoveSequence) -> MoveSequence {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// `[a : b] = a b a'`.
    pub fn conjugate(a: &MoveSequence, b: &MoveSequence) -> MoveSequence {
        a.concat(b).concat(&a.inverse())
    }

    /// Merges adjacent turns of the same slice and drops full rotations.
    pub fn cancel_adjacent(&self) -> MoveSequence {
        let mut out: Vec<Move> = Vec::with_capacity(self.moves.len());
        for &mv in &self.moves {
            match out.last_mut() {
                Some(last) if last.same_slice(mv) => {
                    let t = (last.turns + mv.turns) % 4;
                    if t == 0 {
                        out.pop();
                    } else {
                        last.turns = t;
                    }
                }
                _ => out.push(mv),
            }
        }
        MoveSequence { moves: out }
    }

    pub fn parse(text: &str, spec: CubeSpec) -> Result<MoveSequence, CubeError> {
        parse_move_sequence(text, spec)
    }

    /// Text in the move grammar, using M/E/S for central slices.
    pub fn to_notation(&self, n: usize) -> String {
        format_move_sequence(self, n)
    }
}

impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.moves.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

pub fn invert_sequence(seq: &MoveSequence) -> MoveSequence {
    seq.inverse()
}

pub fn format_move_sequence(seq: &MoveSequence, n: usize) -> String {
    seq.moves
        .iter()
        .map(|m| m.notation(n))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses the move grammar:
///
/// ```text
/// sequence := token (WS token)*
/// token    := slice | group
/// slice    := [depth] FACE [suffix]      depth is a decimal >= 2
/// group    := "[" sequence "," sequence "]" [suffix]   commutator
///           | "[" sequence ":" sequence "]" [suffix]   conjugate
/// FACE     := U | D | L | R | F | B | M | E | S
/// suffix   := ' | 2 | 2' | 3
/// ```
///
/// `M`, `E` and `S` are the central slices of odd cubes and turn like `L`,
/// `D` and `F`. Whitespace is optional where tokens cannot run together.
pub fn parse_move_sequence(text: &str, spec: CubeSpec) -> Result<MoveSequence, CubeError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        spec,
    };
    let seq = p.sequence()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(seq)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    spec: CubeSpec,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> CubeError {
        CubeError::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn sequence(&mut self) -> Result<MoveSequence, CubeError> {
        let mut seq = MoveSequence::empty();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b',') | Some(b':') | Some(b']') => return Ok(seq),
                Some(b'[') => {
                    let g = self.group()?;
                    seq.extend(&g);
                }
                Some(_) => {
                    let m = self.slice()?;
                    seq.push(m);
                }
            }
        }
    }

    fn group(&mut self) -> Result<MoveSequence, CubeError> {
        self.pos += 1;
        let a = self.sequence()?;
        let sep = self.peek();
        if !matches!(sep, Some(b',') | Some(b':')) {
            return Err(self.error("expected ',' or ':' inside brackets"));
        }
        self.pos += 1;
        let b = self.sequence()?;
        if self.peek() != Some(b']') {
            return Err(self.error("expected ']'"));
        }
        self.pos += 1;
        let body = if sep == Some(b',') {
            MoveSequence::commutator(&a, &b)
        } else {
            MoveSequence::conjugate(&a, &b)
        };
        Ok(match self.suffix() {
            1 => body,
            2 => body.repeat(2),
            3 => body.inverse(),
            _ => unreachable!(),
        })
    }

    /// Reads an optional exponent suffix and returns the net quarter turns (1, 2 or 3).
    fn suffix(&mut self) -> u8 {
        match self.peek() {
            Some(b'\'') => {
                self.pos += 1;
                3
            }
            Some(b'2') => {
                self.pos += 1;
                if self.peek() == Some(b'\'') {
                    self.pos += 1;
                }
                2
            }
            Some(b'3') => {
                self.pos += 1;
                3
            }
            _ => 1,
        }
    }

    fn slice(&mut self) -> Result<Move, CubeError> {
        let start = self.pos;
        let mut depth: Option<usize> = None;
        while let Some(c) = self.peek().filter(u8::is_ascii_digit) {
            let d = depth.unwrap_or(0);
            depth = Some(
                d.checked_mul(10)
                    .and_then(|d| d.checked_add((c - b'0') as usize))
                    .ok_or_else(|| self.error("depth too large"))?,
            );
            self.pos += 1;
        }
        if let Some(d) = depth {
            if d < 2 {
                self.pos = start;
                return Err(self.error("explicit depth must be at least 2"));
            }
        }
        let face_pos = self.pos;
        let c = self
            .peek()
            .ok_or_else(|| self.error("expected a face letter"))? as char;
        let (face, depth) = match c {
            'M' | 'E' | 'S' => {
                if depth.is_some() {
                    return Err(self.error("central slices take no depth"));
                }
                let Some(m) = self.spec.central_depth() else {
                    return Err(self.error("central slice requires odd n"));
                };
                let face = match c {
                    'M' => Face::L,
                    'E' => Face::D,
                    _ => Face::F,
                };
                (face, m)
            }
            _ => {
                let face = Face::from_letter(c).ok_or_else(|| self.error("expected a face letter"))?;
                (face, depth.unwrap_or(1))
            }
        };
        self.pos += 1;
        self.spec.check_depth(depth).map_err(|e| match e {
            CubeError::IllegalDepth { .. } => e,
            _ => CubeError::Parse {
                position: face_pos,
                message: e.to_string(),
            },
        })?;
        let turns = self.suffix();
        Ok(Move::new(face, depth, turns))
    }
}

/// A cube configuration as an element of S_{6n^2} applied to the solved
/// cube: `labels[i]` is the solved-state position of the sticker now at `i`.
/// The displayed color of position `i` is the home color of that label's face.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeState {
    n: usize,
    labels: Vec<u32>,
}

impl CubeState {
    pub fn solved(spec: CubeSpec) -> CubeState {
        CubeState {
            n: spec.n(),
            labels: (0..spec.sticker_count() as u32).collect(),
        }
    }

    pub fn from_labels(spec: CubeSpec, labels: Vec<u32>) -> Result<CubeState, CubeError> {
        if labels.len() != spec.sticker_count() {
            return Err(CubeError::InvalidState(format!(
                "expected {} stickers, got {}",
                spec.sticker_count(),
                labels.len()
            )));
        }
        let mut seen = vec![false; labels.len()];
        for &l in &labels {
            let l = l as usize;
            if l >= labels.len() || seen[l] {
                return Err(CubeError::InvalidState("labels are not a permutation".into()));
            }
            seen[l] = true;
        }
        Ok(CubeState { n: spec.n(), labels })
    }

    pub fn spec(&self) -> CubeSpec {
        CubeSpec { n: self.n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, pos: usize) -> usize {
        self.labels[pos] as usize
    }

    pub fn color(&self, pos: usize) -> Color {
        Face::from_ordinal(self.label(pos) / (self.n * self.n)).home_color()
    }

    pub fn colors(&self) -> Vec<Color> {
        (0..self.labels.len()).map(|i| self.color(i)).collect()
    }

    pub fn is_solved(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, &l)| i == l as usize)
    }

    /// The permutation that carries the solved cube to this state.
    pub fn as_permutation(&self) -> Permutation {
        let mut images = vec![0; self.labels.len()];
        for (pos, &l) in self.labels.iter().enumerate() {
            images[l as usize] = pos;
        }
        Permutation::from_images(images).expect("labels are a permutation")
    }

    /// Moves the sticker at `i` to `p(i)` for every `i`.
    pub fn permuted(&self, p: &Permutation) -> CubeState {
        assert_eq!(p.len(), self.labels.len());
        let mut labels = vec![0; self.labels.len()];
        for (i, &l) in self.labels.iter().enumerate() {
            labels[p.apply(i)] = l;
        }
        CubeState { n: self.n, labels }
    }

    pub fn apply_move(&self, mv: Move) -> Result<CubeState, CubeError> {
        self.spec().check_depth(mv.depth)?;
        let mut labels = self.labels.clone();
        for (from, to) in mv.sticker_map(self.n) {
            labels[to] = self.labels[from];
        }
        Ok(CubeState { n: self.n, labels })
    }

    pub fn apply_sequence(&self, seq: &MoveSequence) -> Result<CubeState, CubeError> {
        let mut s = self.clone();
        for &mv in seq.moves() {
            s = s.apply_move(mv)?;
        }
        Ok(s)
    }
}

pub fn solved_state(spec: CubeSpec) -> CubeState {
    CubeState::solved(spec)
}

pub fn apply_move(state: &CubeState, mv: Move) -> Result<CubeState, CubeError> {
    state.apply_move(mv)
}

pub fn apply_sequence(state: &CubeState, seq: &MoveSequence) -> Result<CubeState, CubeError> {
    state.apply_sequence(seq)
}

/// Unfolded cross net: U on top, L F R B in a row, D below, with a blank
/// separator line between the bands (`3n + 2` lines).
pub fn render_net(state: &CubeState) -> String {
    render_net_with(state, false)
}

pub fn render_net_with(state: &CubeState, ansi: bool) -> String {
    let n = state.n();
    let cell = |face: Face, row: usize, col: usize| -> String {
        let c = state.color(StickerIndex { face, row, col }.linear(n));
        if ansi {
            format!("{} {} \x1b[0m", c.ansi_background(), c.letter())
        } else {
            c.letter().to_string()
        }
    };
    let width = if ansi { 3 } else { 1 };
    let indent = " ".repeat(n * width + 1);
    let mut out = String::new();
    for row in 0..n {
        out.push_str(&indent);
        for col in 0..n {
            out.push_str(&cell(Face::U, row, col));
        }
        out.push('\n');
    }
    out.push('\n');
    for row in 0..n {
        for (k, face) in [Face::L, Face::F, Face::R, Face::B].into_iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            for col in 0..n {
                out.push_str(&cell(face, row, col));
            }
        }
        out.push('\n');
    }
    out.push('\n');
    for row in 0..n {
        out.push_str(&indent);
        for col in 0..n {
            out.push_str(&cell(Face::D, row, col));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> CubeSpec {
        CubeSpec::new(n).unwrap()
    }

    fn seq(text: &str, n: usize) -> MoveSequence {
        MoveSequence::parse(text, spec(n)).unwrap()
    }

    #[test]
    fn solved_coloring() {
        let s = solved_state(spec(3));
        let center = StickerIndex { face: Face::U, row: 1, col: 1 }.linear(3);
        assert_eq!(s.color(center), Color::W);
        let s2 = solved_state(spec(2));
        assert_eq!(s2.labels().len(), 24);
        for face in Face::ALL {
            for k in 0..4 {
                assert_eq!(s2.color(face.ordinal() * 4 + k), face.home_color());
            }
        }
        let s7 = solved_state(spec(7));
        for c in Color::ALL {
            assert_eq!(s7.colors().iter().filter(|&&x| x == c).count(), 49);
        }
    }

    #[test]
    fn point_round_trip() {
        for n in 2..=6 {
            for idx in 0..6 * n * n {
                assert_eq!(point_sticker(n, sticker_point(n, idx)), idx);
            }
        }
    }

    #[test]
    fn r_turn_on_solved_3x3() {
        let s = solved_state(spec(3)).apply_move(Move::new(Face::R, 1, 1)).unwrap();
        for row in 0..3 {
            let u = StickerIndex { face: Face::U, row, col: 2 }.linear(3);
            let f = StickerIndex { face: Face::F, row, col: 2 }.linear(3);
            assert_eq!(s.color(u), Color::G);
            assert_eq!(s.color(f), Color::Y);
        }
    }

    #[test]
    fn four_quarter_turns_are_identity() {
        for n in 2..=5 {
            let sp = spec(n);
            let solved = solved_state(sp);
            for mv in sp.basic_moves() {
                let mut s = solved.clone();
                for k in 0..4 {
                    if k > 0 {
                        assert_ne!(s, solved);
                    }
                    s = s.apply_move(Move::new(mv.face, mv.depth, 1)).unwrap();
                }
                assert_eq!(s, solved);
            }
        }
    }

    #[test]
    fn face_turn_cycle_structure() {
        let p = sticker_permutation(spec(3), Move::new(Face::F, 1, 1)).unwrap();
        assert!(!p.is_identity());
        assert!(p.cycle_type().iter().all(|&l| l == 4));
        assert_eq!(p.cycle_type().len(), 5);
        assert_eq!(p.order(), 4);
    }

    #[test]
    fn illegal_depths() {
        assert!(solved_state(spec(4)).apply_move(Move::new(Face::R, 3, 1)).is_err());
        assert!(solved_state(spec(5)).apply_move(Move::new(Face::R, 3, 1)).is_ok());
        assert!(matches!(
            sticker_permutation(spec(2), Move::new(Face::U, 2, 1)),
            Err(CubeError::IllegalDepth { .. })
        ));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(seq("R U R' D", 3).len(), 4);
        assert_eq!(seq("2R", 4).moves(), &[Move::new(Face::R, 2, 1)]);
        assert!(matches!(
            MoveSequence::parse("M", spec(4)),
            Err(CubeError::Parse { .. })
        ));
        assert_eq!(seq("M", 5).moves(), &[Move::new(Face::L, 3, 1)]);
        assert_eq!(seq("R2'", 3).moves(), &[Move::new(Face::R, 1, 2)]);
        assert_eq!(seq("R3", 3).moves(), &[Move::new(Face::R, 1, 3)]);
        assert_eq!(seq("", 3).len(), 0);
        assert!(matches!(
            MoveSequence::parse("3R", spec(4)),
            Err(CubeError::IllegalDepth { .. })
        ));
        assert!(MoveSequence::parse("1R", spec(4)).is_err());
        assert!(MoveSequence::parse("R X", spec(4)).is_err());
        assert!(MoveSequence::parse("[R, U", spec(4)).is_err());
    }

    #[test]
    fn parse_groups() {
        assert_eq!(seq("[R:U]", 3), seq("R U R'", 3));
        assert_eq!(seq("[R,U]", 3), seq("R U R' U'", 3));
        assert_eq!(seq("[[R:U],D]", 3), seq("R U R' D R U' R' D'", 3));
        assert_eq!(seq("[R,U]2", 3), seq("R U R' U' R U R' U'", 3));
        assert_eq!(seq("[R,U]'", 3), seq("U R U' R'", 3));
        assert_eq!(seq("FEF2E2F", 3), seq("F E F2 E2 F", 3));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(seq("F", 3).inverse(), seq("F'", 3));
        assert_eq!(seq("R U2", 3).inverse(), seq("U2 R'", 3));
        let s = seq("R 2U' F2 M", 5);
        assert_eq!(s.inverse().inverse(), s);
    }

    #[test]
    fn notation_round_trip() {
        let s = seq("R 2U' M2 3R S' E 2F 3F", 5);
        assert_eq!(s.to_notation(5), "R 2U' M2 3R S' E 2F S");
        assert_eq!(MoveSequence::parse(&s.to_notation(5), spec(5)).unwrap(), s);
    }

    #[test]
    fn m_is_central_l() {
        let sp = spec(5);
        let a = solved_state(sp).apply_sequence(&seq("M", 5)).unwrap();
        let b = solved_state(sp).apply_sequence(&seq("3R'", 5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn opposite_faces_do_not_cancel() {
        // RL and FB both leave the cube "looking" different from solved in a fixed frame.
        let sp = spec(3);
        let s = solved_state(sp);
        let f = sticker_permutation(sp, Move::new(Face::F, 1, 1)).unwrap();
        let b = sticker_permutation(sp, Move::new(Face::B, 1, 1)).unwrap();
        assert!(!f.then(&b).is_identity());
        let mut counts = [0; 6];
        for c in s.permuted(&f.then(&b)).colors() {
            counts[c as usize] += 1;
        }
        assert_eq!(counts, [9; 6]);
    }

    #[test]
    fn net_layout() {
        let sp = spec(2);
        let net = render_net(&solved_state(sp));
        assert_eq!(net.lines().count(), 3 * 2 + 2);
        assert_eq!(net.lines().nth(3).unwrap(), "OO GG RR BB");
        let turned = render_net(&solved_state(sp).apply_move(Move::new(Face::F, 1, 1)).unwrap());
        assert_ne!(net, turned);
        assert_eq!(render_net(&solved_state(spec(5))).lines().count(), 17);
    }

    #[test]
    fn cancel_adjacent_merges_turns() {
        let s = seq("R R R' U2 U2 F", 3);
        assert_eq!(s.cancel_adjacent(), seq("R F", 3));
    }
}
