//! Formulas of the SCF logic and their truth definition.
//!
//! Three evaluators are provided: [`eval_direct`] follows the truth clauses
//! state by state, [`Program`] computes whole truth sets as bitsets, and
//! [`eval_kripke`] works on the explicit relational structure. [`eval`]
//! picks the first for small spaces and the second above that.

mod compiled;
mod direct;
mod formula;
mod kripke;

use thiserror::Error;

use crate::domain::{DomainError, Profile, ScfModel};
use crate::stateset::StateSet;

pub use compiled::{ModelTables, Program, Registers};
pub use formula::{Formula, Node};
pub use kripke::{eval_kripke, kripke_view, KripkeScf, Valuation};

/// Spaces up to this many states are evaluated pointwise.
pub const BITSET_THRESHOLD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("formula does not fit the model: {0}")]
    FormulaDomainMismatch(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Truth of `phi` at state `state` of `model`.
pub fn eval(model: &ScfModel, state: &Profile, phi: &Formula) -> Result<bool, LogicError> {
    let s = model.space().index_of(state)?;
    eval_at(model, s, phi)
}

/// As [`eval`], with the state given by its canonical index.
pub fn eval_at(model: &ScfModel, state: usize, phi: &Formula) -> Result<bool, LogicError> {
    let space = model.space();
    if state >= space.num_states() {
        return Err(DomainError::StateIndex(state).into());
    }
    phi.check_domain(space)?;
    if space.num_states() <= BITSET_THRESHOLD {
        Ok(direct::Pointwise::new(model).eval(state, phi))
    } else {
        Ok(truth_set_unchecked(model, phi).contains(state))
    }
}

/// Pointwise evaluation regardless of the size of the space.
pub fn eval_direct(model: &ScfModel, state: usize, phi: &Formula) -> Result<bool, LogicError> {
    phi.check_domain(model.space())?;
    Ok(direct::Pointwise::new(model).eval(state, phi))
}

/// The set of states of `model` satisfying `phi`.
pub fn truth_set(model: &ScfModel, phi: &Formula) -> Result<StateSet, LogicError> {
    phi.check_domain(model.space())?;
    Ok(truth_set_unchecked(model, phi))
}

fn truth_set_unchecked(model: &ScfModel, phi: &Formula) -> StateSet {
    let space = model.space();
    if space.num_states() <= BITSET_THRESHOLD {
        let pw = direct::Pointwise::new(model);
        StateSet::from_states(space.num_states(), (0..space.num_states()).filter(|&s| pw.eval(s, phi)))
    } else {
        let program = Program::compile(space, std::slice::from_ref(phi)).expect("checked");
        program.run_model(model).root(0)
    }
}

/// Result of checking a formula at every state of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelValidity {
    pub valid: bool,
    /// Falsifying states in canonical order.
    pub falsifying: Vec<usize>,
}

pub fn valid_in_model(model: &ScfModel, phi: &Formula) -> Result<ModelValidity, LogicError> {
    let set = truth_set(model, phi)?;
    let falsifying = set.missing();
    Ok(ModelValidity {
        valid: falsifying.is_empty(),
        falsifying,
    })
}
