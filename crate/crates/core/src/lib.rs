//! Exact n x n x n cube group toolkit: sticker-level move engine, orbit
//! decomposition into configuration tuples, the solvability law, a
//! constructive commutator solver, exact counting and a Schreier-Sims oracle.

pub mod counting;
pub mod cube_model;
pub mod cubology_law;
pub mod decomposition;
pub mod error;
pub mod group_oracle;
pub mod move_library;
pub mod perm;
pub mod solver;

pub use cube_model::{
    apply_move, apply_sequence, format_move_sequence, invert_sequence, parse_move_sequence, render_net,
    solved_state, sticker_permutation, Color, CubeSpec, CubeState, Face, Move, MoveSequence, StickerIndex,
};
pub use cubology_law::{check_validity, is_solvable, random_configuration, random_valid_configuration, ValidityReport};
pub use decomposition::{build_atlas, compose, decompose, ConfigTuple, OrbitAtlas, OrbitKind};
pub use error::CubeError;
pub use perm::{permutation_sign, Permutation};
