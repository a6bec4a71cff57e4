//! Game-theoretic oracles computed directly from tables, independent of
//! the logic.

mod audit;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::domain::{scf_as_game_form, AgentId, GameForm, Profile, ScfTable};

pub use audit::{equivalence_audit, equivalence_audit_with, AuditReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolutionConcept {
    Nash,
    Dominant,
}

impl fmt::Display for SolutionConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionConcept::Nash => "ne",
            SolutionConcept::Dominant => "dom",
        })
    }
}

impl FromStr for SolutionConcept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ne" | "nash" => Ok(SolutionConcept::Nash),
            "dom" | "domeq" | "dominant" => Ok(SolutionConcept::Dominant),
            other => Err(format!("unknown solution concept `{other}` (expected ne or dom)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("the game form is not a direct mechanism: every action set must be exactly the linear orders of the outcomes")]
    NonDirectMechanism,
    #[error("the game form and the social choice function have different agents or outcomes")]
    SpaceMismatch,
}

fn truth_prefers(truth: &Profile, agent: usize, x: usize, y: usize) -> bool {
    truth.order(AgentId::from_index(agent)).weakly_prefers(x, y)
}

/// Action profiles (by index, canonical order) from which no agent gains
/// by deviating alone.
pub fn nash_equilibria(g: &GameForm, truth: &Profile) -> Vec<usize> {
    (0..g.num_profiles())
        .filter(|&a| {
            let here = g.outcome(a);
            (0..g.agents()).all(|i| {
                (0..g.actions(i).len()).all(|b| truth_prefers(truth, i, here, g.outcome(g.deviate(a, i, b))))
            })
        })
        .collect()
}

/// Actions of agent `i` that are weakly best against every choice of the others.
pub fn dominant_actions(g: &GameForm, truth: &Profile, agent: usize) -> Vec<usize> {
    (0..g.actions(agent).len())
        .filter(|&a| {
            (0..g.num_profiles()).all(|p| {
                let mine = g.outcome(g.deviate(p, agent, a));
                truth_prefers(truth, agent, mine, g.outcome(p))
            })
        })
        .collect()
}

/// Profiles in which every agent plays a dominant action.
pub fn dom_equilibria(g: &GameForm, truth: &Profile) -> Vec<usize> {
    let dominant: Vec<Vec<bool>> = (0..g.agents())
        .map(|i| {
            let mut mask = vec![false; g.actions(i).len()];
            for a in dominant_actions(g, truth, i) {
                mask[a] = true;
            }
            mask
        })
        .collect();
    (0..g.num_profiles())
        .filter(|&p| g.action_profile(p).iter().enumerate().all(|(i, &a)| dominant[i][a]))
        .collect()
}

pub fn solution_set(g: &GameForm, truth: &Profile, sc: SolutionConcept) -> Vec<usize> {
    match sc {
        SolutionConcept::Nash => nash_equilibria(g, truth),
        SolutionConcept::Dominant => dom_equilibria(g, truth),
    }
}

/// Why an implementation check failed. `truth` is the canonically first
/// true profile at which it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImplementationFailure {
    /// No equilibrium at all.
    EmptySolutionSet { truth: Profile },
    /// An equilibrium whose outcome differs from the target.
    WrongOutcome { truth: Profile, actions: usize, outcome: usize, expected: usize },
    /// Truthful reporting is not an equilibrium.
    TruthNotEquilibrium { truth: Profile, actions: usize },
}

impl ImplementationFailure {
    pub fn truth(&self) -> &Profile {
        match self {
            ImplementationFailure::EmptySolutionSet { truth }
            | ImplementationFailure::WrongOutcome { truth, .. }
            | ImplementationFailure::TruthNotEquilibrium { truth, .. } => truth,
        }
    }

    /// The offending action profile, when there is one.
    pub fn actions(&self) -> Option<usize> {
        match self {
            ImplementationFailure::EmptySolutionSet { .. } => None,
            ImplementationFailure::WrongOutcome { actions, .. }
            | ImplementationFailure::TruthNotEquilibrium { actions, .. } => Some(*actions),
        }
    }

    pub fn describe(&self, g: &GameForm) -> String {
        let k = g.outcomes();
        match self {
            ImplementationFailure::EmptySolutionSet { truth } => {
                format!("no equilibrium at true profile {}", truth.display(k))
            }
            ImplementationFailure::WrongOutcome {
                truth,
                actions,
                outcome,
                expected,
            } => format!(
                "at true profile {} the equilibrium {} yields {} instead of {}",
                truth.display(k),
                g.format_actions(*actions),
                k.get(*outcome),
                k.get(*expected)
            ),
            ImplementationFailure::TruthNotEquilibrium { truth, actions } => format!(
                "at true profile {} truthful reporting {} is not an equilibrium",
                truth.display(k),
                g.format_actions(*actions)
            ),
        }
    }
}

/// `Ok(None)` when `g` implements `scf`, `Ok(Some(failure))` otherwise.
pub type Implementation = Result<Option<ImplementationFailure>, GameError>;

fn check_same_space(g: &GameForm, scf: &ScfTable) -> Result<(), GameError> {
    let space = scf.space();
    if g.outcomes() != space.outcomes() || g.agents() != space.agents() {
        return Err(GameError::SpaceMismatch);
    }
    Ok(())
}

/// Every equilibrium yields `F(<)`, and there is at least one, for every true `<`.
pub fn implements(g: &GameForm, scf: &ScfTable, sc: SolutionConcept) -> Implementation {
    check_same_space(g, scf)?;
    for (s, truth) in scf.space().profiles().enumerate() {
        let expected = scf.outcome_at(s);
        let set = solution_set(g, &truth, sc);
        if set.is_empty() {
            return Ok(Some(ImplementationFailure::EmptySolutionSet { truth }));
        }
        if let Some(&a) = set.iter().find(|&&a| g.outcome(a) != expected) {
            return Ok(Some(ImplementationFailure::WrongOutcome {
                truth,
                actions: a,
                outcome: g.outcome(a),
                expected,
            }));
        }
    }
    Ok(None)
}

/// Truthful reporting is an equilibrium with outcome `F(<)`, for every true `<`.
pub fn truthfully_implements(g: &GameForm, scf: &ScfTable, sc: SolutionConcept) -> Implementation {
    check_same_space(g, scf)?;
    let direct = g.direct_actions().ok_or(GameError::NonDirectMechanism)?;
    let space = scf.space();
    for (s, truth) in space.profiles().enumerate() {
        let actions: Vec<usize> = truth
            .orders()
            .iter()
            .enumerate()
            .map(|(i, o)| direct[i][space.order_index(o)])
            .collect();
        let a = g.profile_index(&actions);
        if !solution_set(g, &truth, sc).contains(&a) {
            return Ok(Some(ImplementationFailure::TruthNotEquilibrium { truth, actions: a }));
        }
        let expected = scf.outcome_at(s);
        if g.outcome(a) != expected {
            return Ok(Some(ImplementationFailure::WrongOutcome {
                truth,
                actions: a,
                outcome: g.outcome(a),
                expected,
            }));
        }
    }
    Ok(None)
}

/// Truthful reporting is a dominant strategy in `g^F`; `None` if so,
/// otherwise the first failure.
pub fn strategy_proofness_failure(scf: &ScfTable) -> Option<ImplementationFailure> {
    truthfully_implements(&scf_as_game_form(scf), scf, SolutionConcept::Dominant)
        .expect("g^F is a direct mechanism over F's space")
}

pub fn is_strategy_proof(scf: &ScfTable) -> bool {
    strategy_proofness_failure(scf).is_none()
}

/// A pair of profiles violating monotonicity: `x = F(before)` keeps or
/// improves its standing for everyone in `after`, yet `F(after) ≠ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub before: usize,
    pub after: usize,
    pub outcome: usize,
}

/// For all agents `i` and outcomes `y`: `x ≥_i y` under `before` implies
/// `x ≥_i y` under `after`.
fn standing_kept(before: &Profile, after: &Profile, x: usize, k: usize) -> bool {
    before.orders().iter().zip(after.orders()).all(|(b, a)| {
        (0..k).all(|y| !b.weakly_prefers(x, y) || a.weakly_prefers(x, y))
    })
}

pub fn monotonicity_violation(scf: &ScfTable) -> Option<MonotonicityViolation> {
    let space = scf.space();
    let k = space.outcomes().len();
    let profiles: Vec<Profile> = space.profiles().collect();
    for (s, before) in profiles.iter().enumerate() {
        let x = scf.outcome_at(s);
        for (t, after) in profiles.iter().enumerate() {
            if scf.outcome_at(t) != x && standing_kept(before, after, x, k) {
                return Some(MonotonicityViolation {
                    before: s,
                    after: t,
                    outcome: x,
                });
            }
        }
    }
    None
}

pub fn is_monotonic(scf: &ScfTable) -> bool {
    monotonicity_violation(scf).is_none()
}

/// Outcomes that `scf` never selects, in outcome order.
pub fn unreachable_outcomes(scf: &ScfTable) -> Vec<usize> {
    scf.feasible()
        .iter()
        .enumerate()
        .filter(|(_, &f)| !f)
        .map(|(x, _)| x)
        .collect()
}

pub fn has_citsov(scf: &ScfTable) -> bool {
    unreachable_outcomes(scf).is_empty()
}

/// The first agent whose top outcome is always chosen, if any.
pub fn dictator(scf: &ScfTable) -> Option<AgentId> {
    let space = scf.space();
    space.agent_ids().find(|&i| {
        (0..space.num_states()).all(|s| space.order_of(s, i.index()).top() == scf.outcome_at(s))
    })
}

pub fn is_dictatorial(scf: &ScfTable) -> (bool, Option<AgentId>) {
    let d = dictator(scf);
    (d.is_some(), d)
}
