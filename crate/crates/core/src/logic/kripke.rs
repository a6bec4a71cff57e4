//! Relational view of an SCF model.
//!
//! States carry their valuation explicitly and the relations are derived
//! from valuations only, so this evaluator shares no code with the
//! mixed-radix machinery used by the other two.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::domain::{AgentId, Coalition, Outcome, Profile, RepAtom, ScfModel, StateSpace};
use crate::logic::formula::{Formula, Node};
use crate::logic::LogicError;
use crate::stateset::StateSet;

/// Valuation of one state: the true rep atoms and the single true outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub atoms: BTreeSet<RepAtom>,
    pub outcome: Outcome,
}

pub struct KripkeScf {
    space: Arc<StateSpace>,
    profiles: Vec<Profile>,
    valuation: Vec<Valuation>,
    /// `access[i][s]`: states `R_i`-related to `s`.
    access: Vec<Vec<StateSet>>,
    /// `pref[i][s]`: states `t` with `out(s) ≤_i out(t)`.
    pref: Vec<Vec<StateSet>>,
    coalitions: Mutex<HashMap<Coalition, Arc<Vec<StateSet>>>>,
}

/// Builds the relational structure for `model`.
pub fn kripke_view(model: &ScfModel) -> KripkeScf {
    let space = model.space().clone();
    let states = space.num_states();
    let n = space.agents();
    let profiles: Vec<Profile> = space.profiles().collect();
    let valuation: Vec<Valuation> = (0..states)
        .map(|s| Valuation {
            atoms: space.state_atoms(s),
            outcome: space.outcomes().get(model.outcome_at(s)).clone(),
        })
        .collect();

    // Atoms controlled by each agent; R_i compares everybody else's.
    let restricted: Vec<Vec<BTreeSet<&RepAtom>>> = (0..n)
        .map(|j| {
            valuation
                .iter()
                .map(|v| v.atoms.iter().filter(|a| a.agent.index() == j).collect())
                .collect()
        })
        .collect();
    let access = (0..n)
        .map(|i| {
            (0..states)
                .map(|s| {
                    StateSet::from_states(
                        states,
                        (0..states).filter(|&t| (0..n).filter(|&j| j != i).all(|j| restricted[j][s] == restricted[j][t])),
                    )
                })
                .collect()
        })
        .collect();

    let outcomes = space.outcomes();
    let pref = (0..n)
        .map(|i| {
            let order = model.truth().order(AgentId::from_index(i));
            (0..states)
                .map(|s| {
                    let x = outcomes.index_of(valuation[s].outcome.as_str()).expect("own outcome");
                    StateSet::from_states(
                        states,
                        (0..states).filter(|&t| {
                            let y = outcomes.index_of(valuation[t].outcome.as_str()).expect("own outcome");
                            order.weakly_prefers(y, x)
                        }),
                    )
                })
                .collect()
        })
        .collect();

    KripkeScf {
        space,
        profiles,
        valuation,
        access,
        pref,
        coalitions: Mutex::new(HashMap::new()),
    }
}

impl KripkeScf {
    pub fn num_states(&self) -> usize {
        self.profiles.len()
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn valuation(&self, state: usize) -> &Valuation {
        &self.valuation[state]
    }

    pub fn access(&self, agent: AgentId, state: usize) -> &StateSet {
        &self.access[agent.index()][state]
    }

    pub fn pref(&self, agent: AgentId, state: usize) -> &StateSet {
        &self.pref[agent.index()][state]
    }

    /// Equivalence classes of `R_i`, each listed once.
    pub fn access_classes(&self, agent: AgentId) -> Vec<StateSet> {
        let mut seen = StateSet::empty(self.num_states());
        let mut classes = Vec::new();
        for s in 0..self.num_states() {
            if !seen.contains(s) {
                let class = self.access(agent, s).clone();
                seen = seen.union(&class);
                classes.push(class);
            }
        }
        classes
    }

    /// `R_C` as the relational composition of `R_i` for `i ∈ C`
    /// (the identity for the empty coalition).
    pub fn coalition_relation(&self, coalition: Coalition) -> Arc<Vec<StateSet>> {
        if let Some(rel) = self.coalitions.lock().expect("poisoned").get(&coalition) {
            return rel.clone();
        }
        let states = self.num_states();
        let mut rel: Vec<StateSet> = (0..states).map(|s| StateSet::from_states(states, [s])).collect();
        for agent in coalition.agents() {
            let step = &self.access[agent.index()];
            rel = rel
                .iter()
                .map(|row| {
                    row.iter()
                        .fold(StateSet::empty(states), |acc, mid| acc.union(&step[mid]))
                })
                .collect();
        }
        let rel = Arc::new(rel);
        self.coalitions
            .lock()
            .expect("poisoned")
            .insert(coalition, rel.clone());
        rel
    }

    /// The "agree on every agent outside `C`" relation, read off the valuations.
    pub fn agree_outside(&self, coalition: Coalition) -> Vec<StateSet> {
        let states = self.num_states();
        let outside = |a: &RepAtom| !coalition.contains(a.agent);
        (0..states)
            .map(|s| {
                let mine: BTreeSet<_> = self.valuation[s].atoms.iter().filter(|a| outside(a)).collect();
                StateSet::from_states(
                    states,
                    (0..states).filter(|&t| {
                        let theirs: BTreeSet<_> = self.valuation[t].atoms.iter().filter(|a| outside(a)).collect();
                        mine == theirs
                    }),
                )
            })
            .collect()
    }

    /// Satisfaction set of `phi`, one memoized pass over the formula DAG.
    pub fn truth_set(&self, phi: &Formula) -> Result<StateSet, LogicError> {
        phi.check_domain(&self.space)?;
        let mut memo = HashMap::new();
        Ok(self.sat(phi, &mut memo))
    }

    fn sat(&self, phi: &Formula, memo: &mut HashMap<usize, StateSet>) -> StateSet {
        if let Some(set) = memo.get(&phi.id()) {
            return set.clone();
        }
        let states = self.num_states();
        let set = match phi.node() {
            Node::Top => StateSet::full(states),
            Node::Rep(atom) => StateSet::from_states(states, (0..states).filter(|&s| self.valuation[s].atoms.contains(atom))),
            Node::Out(x) => StateSet::from_states(states, (0..states).filter(|&s| &self.valuation[s].outcome == x)),
            Node::Not(a) => self.sat(a, memo).complement(),
            Node::Or(a, b) => self.sat(a, memo).union(&self.sat(b, memo)),
            Node::Diamond(c, a) => {
                let inner = self.sat(a, memo);
                let rel = self.coalition_relation(*c);
                StateSet::from_states(states, (0..states).filter(|&s| !rel[s].intersection(&inner).is_empty()))
            }
            Node::PrefDiamond(i, a) => {
                let inner = self.sat(a, memo);
                let rel = &self.pref[i.index()];
                StateSet::from_states(states, (0..states).filter(|&s| !rel[s].intersection(&inner).is_empty()))
            }
        };
        memo.insert(phi.id(), set.clone());
        set
    }
}

/// Relational satisfaction of `phi` at `state`.
pub fn eval_kripke(km: &KripkeScf, state: &Profile, phi: &Formula) -> Result<bool, LogicError> {
    let s = km.space.index_of(state)?;
    Ok(km.truth_set(phi)?.contains(s))
}
