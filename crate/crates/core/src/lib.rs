//! Hat guessing games on graphs.
//!
//! Each sage sits at a vertex of a visibility graph, sees the hats of its
//! neighbors and guesses its own color from `0..h(v)`. The sages win an
//! assignment when at least one guess is right, and a game is winning when a
//! fixed strategy wins every assignment.
//!
//! The crate builds winning games by composing small ones ([`constructors`]),
//! checks strategies by exhaustive or sampled sweeps ([`verify`]), decides tiny
//! games exactly ([`solver`]), certifies plane embeddings ([`embedding`]) and
//! parses a small composition language ([`dsl`]).

pub mod constructors;
pub mod document;
pub mod dsl;
pub mod embedding;
pub mod game;
pub mod solver;
pub mod strategy;
pub mod verdict;
pub mod verify;

pub use constructors::{ComposedGame, ConstructError, PetalSpec};
pub use embedding::RotationSystem;
pub use game::{hg_lower_bound, majorizes, Assignment, Color, Game, GameError, Graph};
pub use strategy::{Strategy, StrategyError};
pub use verdict::{Justification, Provenance, Status, Verdict};
pub use verify::{VerifyOptions, VerifyReport};
