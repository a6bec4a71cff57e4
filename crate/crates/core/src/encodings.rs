//! Formula schemes: ballots, the global preference operator, characteristic
//! formulas of SCFs and the property formulas.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::domain::{AgentId, Coalition, LinearOrder, OutcomeSet, Profile, ScfModel, ScfTable, StateSpace};
use crate::logic::Formula;
use crate::stateset::StateSet;

/// `ballot_i(<)`: the adjacent-pair atoms of agent `i`'s order.
pub fn ballot_agent(agent: AgentId, order: &LinearOrder, outcomes: &OutcomeSet) -> Formula {
    Formula::conj(ballot_atoms(agent, order, outcomes))
}

fn ballot_atoms(agent: AgentId, order: &LinearOrder, outcomes: &OutcomeSet) -> Vec<Formula> {
    order
        .ranking()
        .windows(2)
        .map(|w| Formula::rep(agent, outcomes.get(w[0]).clone(), outcomes.get(w[1]).clone()))
        .collect()
}

/// `ballot(<)`: every agent's adjacent-pair atoms in one left-nested conjunction.
pub fn ballot_profile(profile: &Profile, outcomes: &OutcomeSet) -> Formula {
    Formula::conj(
        profile
            .orders()
            .iter()
            .enumerate()
            .flat_map(|(i, order)| ballot_atoms(AgentId::from_index(i), order, outcomes)),
    )
}

/// Which of the two characteristic-formula shapes to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RhoForm {
    /// `⋀ ◇_N(ballot(<) ∧ F(<))`
    Diamond,
    /// `⋀ (ballot(<) → F(<))`
    Implication,
}

impl FromStr for RhoForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "diamond" => Ok(RhoForm::Diamond),
            "implication" => Ok(RhoForm::Implication),
            other => Err(format!("unknown form `{other}` (expected diamond or implication)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyId {
    Citsov,
    Nodict,
    Br(AgentId),
    Dom,
    Mon,
    Strproof,
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyId::Citsov => f.write_str("citsov"),
            PropertyId::Nodict => f.write_str("nodict"),
            PropertyId::Br(i) => write!(f, "br({i})"),
            PropertyId::Dom => f.write_str("dom"),
            PropertyId::Mon => f.write_str("mon"),
            PropertyId::Strproof => f.write_str("strproof"),
        }
    }
}

impl FromStr for PropertyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "citsov" => return Ok(PropertyId::Citsov),
            "nodict" => return Ok(PropertyId::Nodict),
            "dom" => return Ok(PropertyId::Dom),
            "mon" => return Ok(PropertyId::Mon),
            "strproof" => return Ok(PropertyId::Strproof),
            _ => {}
        }
        let agent = lower
            .strip_prefix("br(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| lower.strip_prefix("br"))
            .and_then(|d| d.trim().parse::<usize>().ok())
            .filter(|&i| i >= 1);
        match agent {
            Some(i) => Ok(PropertyId::Br(AgentId::new(i))),
            None => Err(format!(
                "unknown property `{s}` (expected citsov, nodict, br(i), dom, mon or strproof)"
            )),
        }
    }
}

/// Builds formulas over one state space, sharing ballots and `◂` links
/// between the schemes that reuse them.
pub struct Encoder {
    space: Arc<StateSpace>,
    ballots: Vec<Formula>,
    links: Mutex<HashMap<(usize, usize, usize), Formula>>,
    dom: Mutex<Option<Formula>>,
}

impl Encoder {
    pub fn new(space: &Arc<StateSpace>) -> Self {
        let outcomes = space.outcomes();
        let ballots = space.profiles().map(|p| ballot_profile(&p, outcomes)).collect();
        Encoder {
            space: space.clone(),
            ballots,
            links: Mutex::new(HashMap::new()),
            dom: Mutex::new(None),
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    /// `ballot(<)` for the state with canonical index `state`.
    pub fn ballot(&self, state: usize) -> Formula {
        self.ballots[state].clone()
    }

    fn outcome(&self, x: usize) -> Formula {
        Formula::out(self.space.outcomes().get(x).clone())
    }

    fn grand(&self) -> Coalition {
        self.space.grand_coalition()
    }

    /// `ψ ◂_i φ`, "every φ-state is at least as good for `i` as every ψ-state":
    /// `□_N ⋁_< (ballot(<) ∧ (φ → □_N(ψ → ⟨pref_i⟩ballot(<))))`.
    pub fn better(&self, agent: AgentId, psi: &Formula, phi: &Formula) -> Formula {
        let n = self.grand();
        let disjuncts = self
            .ballots
            .iter()
            .map(|b| {
                let inner = Formula::boxed(n, psi.clone().implies(Formula::pref(agent, b.clone())));
                b.clone().and(phi.clone().implies(inner))
            })
            .collect();
        Formula::boxed(n, Formula::big_or(disjuncts))
    }

    /// `x ◂_i y` for outcome atoms, cached.
    pub fn better_outcomes(&self, agent: AgentId, x: usize, y: usize) -> Formula {
        let key = (agent.index(), x, y);
        if let Some(f) = self.links.lock().expect("poisoned").get(&key) {
            return f.clone();
        }
        let f = self.better(agent, &self.outcome(x), &self.outcome(y));
        self.links.lock().expect("poisoned").insert(key, f.clone());
        f
    }

    /// `trueprofile_i(<)`: `(x_K ◂_i x_{K-1}) ∧ … ∧ (x_2 ◂_i x_1)`.
    pub fn trueprofile_agent(&self, agent: AgentId, order: &LinearOrder) -> Formula {
        let r = order.ranking();
        Formula::conj((1..r.len()).rev().map(|k| self.better_outcomes(agent, r[k], r[k - 1])))
    }

    pub fn trueprofile(&self, profile: &Profile) -> Formula {
        Formula::conj(
            profile
                .orders()
                .iter()
                .enumerate()
                .map(|(i, o)| self.trueprofile_agent(AgentId::from_index(i), o)),
        )
    }

    /// The characteristic formula of `scf`.
    pub fn rho(&self, scf: &ScfTable, form: RhoForm) -> Formula {
        let n = self.grand();
        let parts = (0..self.space.num_states())
            .map(|s| {
                let b = self.ballot(s);
                let x = self.outcome(scf.outcome_at(s));
                match form {
                    RhoForm::Diamond => Formula::diamond(n, b.and(x)),
                    RhoForm::Implication => b.implies(x),
                }
            })
            .collect();
        Formula::big_and(parts)
    }

    pub fn citsov(&self) -> Formula {
        let n = self.grand();
        let k = self.space.outcomes().len();
        Formula::conj((0..k).map(|x| Formula::diamond(n, self.outcome(x))))
    }

    pub fn nodict(&self) -> Formula {
        let n = self.grand();
        let outcomes = self.space.outcomes();
        let k = outcomes.len();
        Formula::conj(self.space.agent_ids().map(|i| {
            let inner = Formula::disj((0..k).map(|x| {
                let others = Formula::disj(
                    (0..k)
                        .filter(|&y| y != x)
                        .map(|y| Formula::rep(i, outcomes.get(y).clone(), outcomes.get(x).clone())),
                );
                self.outcome(x).and(others)
            }));
            Formula::diamond(n, inner)
        }))
    }

    /// `BR_i = ⋁_x (x ∧ □_i⟨pref_i⟩x)`.
    pub fn br(&self, agent: AgentId) -> Formula {
        let k = self.space.outcomes().len();
        let me = Coalition::singleton(agent);
        Formula::disj((0..k).map(|x| {
            let x = self.outcome(x);
            x.clone().and(Formula::boxed(me, Formula::pref(agent, x)))
        }))
    }

    /// `DOM = ⋀_i □_{N∖{i}} BR_i`.
    pub fn dom(&self) -> Formula {
        let mut cached = self.dom.lock().expect("poisoned");
        if let Some(f) = cached.as_ref() {
            return f.clone();
        }
        let n = self.grand();
        let f = Formula::conj(self.space.agent_ids().map(|i| Formula::boxed(n.without(i), self.br(i))));
        *cached = Some(f.clone());
        f
    }

    /// The outer conjuncts of MON, one per `(<, <′, x)` in canonical order.
    pub fn mon_instances(&self) -> Vec<Formula> {
        let n = self.grand();
        let outcomes = self.space.outcomes();
        let k = outcomes.len();
        let states = self.space.num_states();
        let agents: Vec<AgentId> = self.space.agent_ids().collect();
        // ◇_N(ballot(<) ∧ p^i_{x>y}), shared across the instances.
        let mut reach: HashMap<(usize, usize, usize, usize), Formula> = HashMap::new();
        let mut reach_rep = |s: usize, i: AgentId, x: usize, y: usize| {
            reach
                .entry((s, i.index(), x, y))
                .or_insert_with(|| {
                    Formula::diamond(
                        n,
                        self.ballot(s)
                            .and(Formula::rep(i, outcomes.get(x).clone(), outcomes.get(y).clone())),
                    )
                })
                .clone()
        };
        let reach_out: Vec<Vec<Formula>> = (0..states)
            .map(|s| (0..k).map(|x| Formula::diamond(n, self.ballot(s).and(self.outcome(x)))).collect())
            .collect();
        let mut out = Vec::with_capacity(states * states * k);
        for s in 0..states {
            for t in 0..states {
                for x in 0..k {
                    let mut links = Vec::with_capacity(agents.len() * k);
                    for &i in &agents {
                        for y in 0..k {
                            links.push(reach_rep(s, i, x, y).implies(reach_rep(t, i, x, y)));
                        }
                    }
                    let premise = reach_out[s][x].clone().and(Formula::conj(links));
                    out.push(premise.implies(reach_out[t][x].clone()));
                }
            }
        }
        out
    }

    pub fn mon(&self) -> Formula {
        Formula::big_and(self.mon_instances())
    }

    /// `STRPROOF = ⋀_< [trueprofile(<) → (ballot(<) → DOM)]`.
    pub fn strproof(&self) -> Formula {
        let dom = self.dom();
        let parts = self
            .space
            .profiles()
            .enumerate()
            .map(|(s, p)| self.trueprofile(&p).implies(self.ballot(s).implies(dom.clone())))
            .collect();
        Formula::big_and(parts)
    }

    pub fn property(&self, id: PropertyId) -> Formula {
        match id {
            PropertyId::Citsov => self.citsov(),
            PropertyId::Nodict => self.nodict(),
            PropertyId::Br(i) => self.br(i),
            PropertyId::Dom => self.dom(),
            PropertyId::Mon => self.mon(),
            PropertyId::Strproof => self.strproof(),
        }
    }
}

/// Whether `x ◂_i y` holds in `model`, decided semantically: it does iff
/// one of the two outcomes is never chosen or `y` is weakly preferred to
/// `x` in the true order. The formula is global, so the answer is the same
/// at every state.
pub fn better_outcomes_holds(model: &ScfModel, agent: AgentId, x: usize, y: usize) -> bool {
    let feasible = model.out().feasible();
    !feasible[x] || !feasible[y] || model.truth().order(agent).weakly_prefers(y, x)
}

/// Whether `trueprofile(<)` holds in `model`, via [`better_outcomes_holds`].
pub fn trueprofile_holds(model: &ScfModel, profile: &Profile) -> bool {
    profile.orders().iter().enumerate().all(|(i, order)| {
        order
            .ranking()
            .windows(2)
            .all(|w| better_outcomes_holds(model, AgentId::from_index(i), w[1], w[0]))
    })
}

/// Truth set of STRPROOF, deciding each `trueprofile(<)` antecedent first so
/// only profiles whose antecedent holds consult DOM.
pub fn strproof_truth_set(model: &ScfModel, dom: &StateSet) -> StateSet {
    let space = model.space();
    let states = space.num_states();
    let mut set = StateSet::full(states);
    for (s, p) in space.profiles().enumerate() {
        if trueprofile_holds(model, &p) && !dom.contains(s) {
            // ballot(<) holds only at s, so only s is falsified.
            set = set.intersection(&StateSet::from_states(states, [s]).complement());
        }
    }
    set
}
