//! Exact voting power and structural equivalence for weighted scoring
//! committees, plus simplex maps of three-player power distributions.

pub mod arrangement;
pub mod cache;
pub mod cli;
pub mod equivalence;
pub mod error;
pub mod grid;
pub mod model;
pub mod power;
pub mod rational;
pub mod render;
pub mod scoring;

pub use error::{Error, Result};
pub use model::{PowerVector, Profile, Ranking, RuleMapping, ScoringCommittee, ScoringVector};
pub use rational::Rational;
