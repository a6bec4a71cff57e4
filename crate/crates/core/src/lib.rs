//! Model checking for a modal logic of social choice functions.
//!
//! States are reported preference profiles; a model adds an outcome
//! function and the agents' true preferences. Formulas can be evaluated,
//! decided over all models of a small space, and compared against direct
//! game-theoretic computations in [`game`].

pub mod axioms;
pub mod catalog;
pub mod cli;
pub mod decision;
pub mod domain;
pub mod encodings;
pub mod files;
pub mod game;
pub mod logic;
pub mod parser;
pub mod stateset;

pub use domain::*;
pub use logic::{eval, eval_at, truth_set, valid_in_model, Formula, LogicError};
pub use parser::{parse, print, ParseContext, ParseError};
pub use stateset::StateSet;
