//! Decision by exhaustive enumeration of models.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::domain::{Profile, ScfModel, ScfTable, StateSpace};
use crate::encodings::{Encoder, PropertyId, RhoForm};
use crate::logic::{Formula, LogicError, ModelTables, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_models: u128,
    pub max_states: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_models: 1_000_000,
            max_states: 10_000,
        }
    }
}

impl EnumerationBudget {
    pub fn new(max_models: u128, max_states: usize) -> Result<Self, DecisionError> {
        if max_models == 0 || max_states == 0 {
            return Err(DecisionError::InvalidBudget);
        }
        Ok(EnumerationBudget { max_models, max_states })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecisionError {
    #[error("enumeration needs {} models but the budget allows {limit}", fmt_count(*.models))]
    BudgetExceeded { models: Option<u128>, limit: u128 },
    #[error("each model has {states} states but the budget allows {limit}")]
    TooManyStates { states: usize, limit: usize },
    #[error("budget limits must be positive")]
    InvalidBudget,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

fn fmt_count(models: Option<u128>) -> String {
    match models {
        Some(m) => m.to_string(),
        None => "more than 2^128".to_string(),
    }
}

/// `|K|^{|L(K)^N|} · |L(K)^N|`, or `None` on overflow.
pub fn model_count(space: &StateSpace) -> Option<u128> {
    let states = space.num_states();
    let k = space.outcomes().len() as u128;
    let outs = k.checked_pow(u32::try_from(states).ok()?)?;
    outs.checked_mul(states as u128)
}

/// All models over a space: out functions in mixed-radix order (state 0
/// most significant), and for each, every true profile in canonical order.
#[derive(Clone, Debug)]
pub struct ModelEnumeration {
    space: Arc<StateSpace>,
    outs: u128,
}

pub fn enumerate_models(space: &Arc<StateSpace>, budget: EnumerationBudget) -> Result<ModelEnumeration, DecisionError> {
    if space.num_states() > budget.max_states {
        return Err(DecisionError::TooManyStates {
            states: space.num_states(),
            limit: budget.max_states,
        });
    }
    let count = model_count(space);
    match count {
        Some(c) if c <= budget.max_models => {}
        _ => {
            return Err(DecisionError::BudgetExceeded {
                models: count,
                limit: budget.max_models,
            })
        }
    }
    let outs = count.expect("checked") / space.num_states() as u128;
    Ok(ModelEnumeration {
        space: space.clone(),
        outs,
    })
}

impl ModelEnumeration {
    pub fn len(&self) -> u128 {
        self.outs * self.space.num_states() as u128
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_out_functions(&self) -> u128 {
        self.outs
    }

    /// The `index`-th out function.
    pub fn out_function(&self, index: u128) -> ScfTable {
        let states = self.space.num_states();
        let k = self.space.outcomes().len() as u128;
        let mut map = vec![0usize; states];
        let mut rest = index;
        for s in (0..states).rev() {
            map[s] = (rest % k) as usize;
            rest /= k;
        }
        ScfTable::new(self.space.clone(), map).expect("digits are outcome indices")
    }

    pub fn model(&self, index: u128) -> ScfModel {
        let truths = self.space.num_states() as u128;
        let out = Arc::new(self.out_function(index / truths));
        let truth = self.space.profile((index % truths) as usize);
        ScfModel::new(out, truth).expect("truth is a state")
    }

    pub fn iter(&self) -> impl Iterator<Item = ScfModel> + '_ {
        let truths: Vec<Profile> = self.space.profiles().collect();
        (0..self.outs).flat_map(move |o| {
            let out = Arc::new(self.out_function(o));
            truths
                .clone()
                .into_iter()
                .map(move |t| ScfModel::new(out.clone(), t).expect("truth is a state"))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Valid,
    Satisfiable,
    Unsatisfiable,
    Invalid,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Valid => "VALID",
            Status::Satisfiable => "SAT",
            Status::Unsatisfiable => "UNSAT",
            Status::Invalid => "INVALID",
        })
    }
}

/// A model and one of its states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pointed {
    pub model: ScfModel,
    pub state: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Pointed>,
    pub counterexample: Option<Pointed>,
    pub models_checked: u128,
}

impl Verdict {
    /// True for `Valid` and `Satisfiable`.
    pub fn holds(&self) -> bool {
        matches!(self.status, Status::Valid | Status::Satisfiable)
    }
}

/// Runs `program` (one root) over the models and returns the first model
/// and state where the root's truth equals `target`.
fn search<I: Iterator<Item = ScfModel>>(program: &Program, models: I, target: bool) -> (Option<Pointed>, u128) {
    let mut regs = Vec::new();
    let mut checked = 0u128;
    for model in models {
        checked += 1;
        program.run_into(&ModelTables::new(&model), &mut regs);
        let hit = if target {
            first_set(program.root_in(&regs, 0), model.space().num_states())
        } else {
            program.root_first_missing_in(&regs, 0)
        };
        if let Some(state) = hit {
            return (Some(Pointed { model, state }), checked);
        }
    }
    (None, checked)
}

fn first_set(words: &[u64], states: usize) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
        .filter(|&s| s < states)
}

/// A model used when the formula's truth cannot depend on the model:
/// constant first outcome, canonical first truth.
pub fn representative_model(space: &Arc<StateSpace>) -> ScfModel {
    let out = Arc::new(ScfTable::constant(space.clone(), 0).expect("outcome 0 exists"));
    ScfModel::new(out, space.profile(0)).expect("state 0 exists")
}

/// Satisfiability over the class of models on `space`.
///
/// Formulas without outcome atoms and preference modalities are decided
/// on [`representative_model`] alone, since their truth depends only on
/// the state; the budget then does not apply.
pub fn satisfiable(space: &Arc<StateSpace>, phi: &Formula, budget: EnumerationBudget) -> Result<Verdict, DecisionError> {
    let program = Program::compile(space, std::slice::from_ref(phi))?;
    let (witness, checked) = if phi.is_outcome_free() {
        search(&program, std::iter::once(representative_model(space)), true)
    } else {
        let models = enumerate_models(space, budget)?;
        search(&program, models.iter(), true)
    };
    Ok(Verdict {
        status: if witness.is_some() {
            Status::Satisfiable
        } else {
            Status::Unsatisfiable
        },
        witness,
        counterexample: None,
        models_checked: checked,
    })
}

/// Validity over the class of models on `space`; see [`satisfiable`] for
/// the outcome-free shortcut.
pub fn valid(space: &Arc<StateSpace>, phi: &Formula, budget: EnumerationBudget) -> Result<Verdict, DecisionError> {
    let program = Program::compile(space, std::slice::from_ref(phi))?;
    let (counterexample, checked) = if phi.is_outcome_free() {
        search(&program, std::iter::once(representative_model(space)), false)
    } else {
        let models = enumerate_models(space, budget)?;
        search(&program, models.iter(), false)
    };
    Ok(valid_verdict(counterexample, checked))
}

fn valid_verdict(counterexample: Option<Pointed>, checked: u128) -> Verdict {
    Verdict {
        status: if counterexample.is_some() {
            Status::Invalid
        } else {
            Status::Valid
        },
        witness: None,
        counterexample,
        models_checked: checked,
    }
}

/// Validity of an outcome-free formula, decided on one model.
pub fn valid_outcome_free(space: &Arc<StateSpace>, phi: &Formula) -> Result<Verdict, DecisionError> {
    if !phi.is_outcome_free() {
        return Err(LogicError::FormulaDomainMismatch(
            "formula mentions outcomes or preferences, so one model does not decide it".into(),
        )
        .into());
    }
    valid(space, phi, EnumerationBudget::default())
}

/// Validity of `phi` over the models with `out = F`, one per true profile.
pub fn valid_for_scf(scf: &Arc<ScfTable>, phi: &Formula) -> Result<Verdict, DecisionError> {
    let space = scf.space();
    let program = Program::compile(space, std::slice::from_ref(phi))?;
    let models = space
        .profiles()
        .map(|t| ScfModel::new(scf.clone(), t).expect("truth is a state"));
    let (counterexample, checked) = search(&program, models, false);
    Ok(valid_verdict(counterexample, checked))
}

/// Decides `⊨ ρ^F → prop` over only the models whose out function is `F`;
/// in every other model `ρ^F` is false throughout, so they cannot falsify it.
pub fn check_scf_property(scf: &Arc<ScfTable>, prop: PropertyId) -> Result<Verdict, DecisionError> {
    let enc = Encoder::new(scf.space());
    check_scf_property_with(&enc, scf, prop)
}

/// As [`check_scf_property`], reusing an encoder over the same space.
pub fn check_scf_property_with(enc: &Encoder, scf: &Arc<ScfTable>, prop: PropertyId) -> Result<Verdict, DecisionError> {
    if enc.space() != scf.space() {
        return Err(LogicError::Domain(crate::domain::DomainError::SpaceMismatch).into());
    }
    if let PropertyId::Br(i) = prop {
        scf.space().check_agent(i).map_err(LogicError::from)?;
    }
    let phi = enc.rho(scf, RhoForm::Diamond).implies(enc.property(prop));
    valid_for_scf(scf, &phi)
}

/// `count` out functions drawn with `seed`, each paired with every true
/// profile. Every fourth function draws from a random proper subset of
/// the outcomes so that infeasible outcomes are exercised.
pub fn sample_models(space: &Arc<StateSpace>, count: usize, seed: u64) -> Vec<ScfModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = space.outcomes().len();
    let states = space.num_states();
    let mut models = Vec::with_capacity(count * states);
    for j in 0..count {
        let mut pool: Vec<usize> = (0..k).collect();
        if j % 4 == 3 && k > 1 {
            pool.shuffle(&mut rng);
            pool.truncate(rng.gen_range(1..k));
        }
        let map = (0..states).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
        let out = Arc::new(ScfTable::new(space.clone(), map).expect("valid indices"));
        for t in space.profiles() {
            models.push(ScfModel::new(out.clone(), t).expect("truth is a state"));
        }
    }
    models
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let s = StateSpace::with_names(2, ["a", "b"]).unwrap();
        assert_eq!(model_count(&s), Some(64));
        let s3 = StateSpace::with_names(3, ["a", "b"]).unwrap();
        assert_eq!(model_count(&s3), Some(2048));
        let big = StateSpace::with_names(2, ["a", "b", "c"]).unwrap();
        assert!(matches!(
            enumerate_models(&big, EnumerationBudget::default()),
            Err(DecisionError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_is_canonical_and_complete() {
        let s = StateSpace::with_names(2, ["a", "b"]).unwrap();
        let e = enumerate_models(&s, EnumerationBudget::default()).unwrap();
        let all: Vec<ScfModel> = e.iter().collect();
        assert_eq!(all.len(), 64);
        for (i, m) in all.iter().enumerate() {
            assert_eq!(&e.model(i as u128), m);
        }
        assert_eq!(all[0].out().map(), &[0, 0, 0, 0]);
        assert_eq!(all[4].out().map(), &[0, 0, 0, 1]);
        let distinct: std::collections::HashSet<_> = all.iter().map(|m| (m.out().map().to_vec(), m.truth().clone())).collect();
        assert_eq!(distinct.len(), 64);
    }
}
