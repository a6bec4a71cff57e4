//! Reference implementations used as oracles. Everything here is written
//! from the definitions, on plain vectors, without the library's indexing,
//! bitsets or caches.

#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scf_logic::logic::Node;
use scf_logic::{AgentId, Coalition, Formula, OutcomeSet, ScfModel, ScfTable, StateSpace};

/// All permutations of `0..k`, lexicographic.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for x in 0..k {
            if !prefix.contains(&x) {
                prefix.push(x);
                go(prefix, k, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), k, &mut out);
    out
}

/// All profiles as `state -> agent -> ranking`, agent 1 varying slowest.
pub fn profiles(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = permutations(k);
    let mut all: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for _ in 0..n {
        all = all
            .into_iter()
            .flat_map(|p| {
                perms.iter().map(move |r| {
                    let mut q = p.clone();
                    q.push(r.clone());
                    q
                })
            })
            .collect();
    }
    all
}

fn pos(ranking: &[usize], x: usize) -> usize {
    ranking.iter().position(|&y| y == x).expect("outcome in ranking")
}

/// `x` at least as good as `y` in `ranking`.
pub fn geq(ranking: &[usize], x: usize, y: usize) -> bool {
    pos(ranking, x) <= pos(ranking, y)
}

/// A model as plain data.
#[derive(Clone, Debug)]
pub struct Naive {
    pub n: usize,
    pub names: Vec<String>,
    pub states: Vec<Vec<Vec<usize>>>,
    pub out: Vec<usize>,
    pub truth: Vec<Vec<usize>>,
}

impl Naive {
    /// Rebuilds `model` from scratch; panics if the library's state order
    /// differs from the reference order.
    pub fn of(model: &ScfModel) -> Self {
        let space = model.space();
        let k = space.outcomes().len();
        let states = profiles(space.agents(), k);
        assert_eq!(states.len(), space.num_states());
        for (s, p) in states.iter().enumerate() {
            let lib: Vec<Vec<usize>> = space.profile(s).orders().iter().map(|o| o.ranking().to_vec()).collect();
            assert_eq!(&lib, p, "state {s} is indexed differently");
        }
        Naive {
            n: space.agents(),
            names: space.outcomes().iter().map(|o| o.to_string()).collect(),
            states,
            out: model.out().map().to_vec(),
            truth: model.truth().orders().iter().map(|o| o.ranking().to_vec()).collect(),
        }
    }

    fn idx(&self, name: &str) -> usize {
        self.names.iter().position(|n| n == name).expect("known outcome")
    }

    fn agree_outside(&self, s: usize, u: usize, c: Coalition) -> bool {
        (0..self.n).all(|i| c.contains(AgentId::from_index(i)) || self.states[s][i] == self.states[u][i])
    }

    /// Truth value at every state, straight from the clauses.
    pub fn truth_set(&self, phi: &Formula) -> Vec<bool> {
        let m = self.states.len();
        match phi.node() {
            Node::Top => vec![true; m],
            Node::Rep(a) => {
                let (x, y) = (self.idx(a.left.as_str()), self.idx(a.right.as_str()));
                (0..m).map(|s| geq(&self.states[s][a.agent.index()], x, y)).collect()
            }
            Node::Out(x) => {
                let x = self.idx(x.as_str());
                (0..m).map(|s| self.out[s] == x).collect()
            }
            Node::Not(a) => self.truth_set(a).into_iter().map(|b| !b).collect(),
            Node::Or(a, b) => self.truth_set(a).into_iter().zip(self.truth_set(b)).map(|(a, b)| a || b).collect(),
            Node::Diamond(c, a) => {
                let inner = self.truth_set(a);
                (0..m).map(|s| (0..m).any(|u| inner[u] && self.agree_outside(s, u, *c))).collect()
            }
            Node::PrefDiamond(i, a) => {
                let inner = self.truth_set(a);
                let t = &self.truth[i.index()];
                (0..m).map(|s| (0..m).any(|u| inner[u] && geq(t, self.out[u], self.out[s]))).collect()
            }
        }
    }

    pub fn valid(&self, phi: &Formula) -> bool {
        self.truth_set(phi).into_iter().all(|b| b)
    }

    /// Whether reported profile `v` is a dominant-strategy equilibrium of
    /// the direct mechanism under the true preferences.
    pub fn dominant_at(&self, v: usize) -> bool {
        (0..self.n).all(|i| {
            (0..self.states.len()).all(|w| {
                let mut with_vi = self.states[w].clone();
                with_vi[i] = self.states[v][i].clone();
                let s = self.states.iter().position(|p| *p == with_vi).unwrap();
                geq(&self.truth[i], self.out[s], self.out[w])
            })
        })
    }
}

fn rankings(scf: &ScfTable) -> (usize, Vec<Vec<Vec<usize>>>) {
    let space = scf.space();
    (space.outcomes().len(), profiles(space.agents(), space.outcomes().len()))
}

/// Truth-telling is weakly dominant for every agent at every true profile.
pub fn naive_strategy_proof(scf: &ScfTable) -> bool {
    let (_, ps) = rankings(scf);
    let f = scf.map();
    let find = |p: &Vec<Vec<usize>>| ps.iter().position(|q| q == p).unwrap();
    ps.iter().all(|truth| {
        (0..truth.len()).all(|i| {
            ps.iter().enumerate().all(|(w, others)| {
                let mut honest = others.clone();
                honest[i] = truth[i].clone();
                geq(&truth[i], f[find(&honest)], f[w])
            })
        })
    })
}

/// Whenever `x = F(<)` does not fall relative to any outcome for anyone in
/// `<'`, `F(<') = x`.
pub fn naive_monotonic(scf: &ScfTable) -> bool {
    let (k, ps) = rankings(scf);
    let f = scf.map();
    ps.iter().enumerate().all(|(s, p)| {
        let x = f[s];
        ps.iter().enumerate().all(|(t, q)| {
            let kept = (0..p.len()).all(|i| (0..k).all(|y| !geq(&p[i], x, y) || geq(&q[i], x, y)));
            !kept || f[t] == x
        })
    })
}

pub fn naive_citsov(scf: &ScfTable) -> bool {
    let k = scf.space().outcomes().len();
    (0..k).all(|x| scf.map().contains(&x))
}

pub fn naive_dictatorial(scf: &ScfTable) -> bool {
    let (_, ps) = rankings(scf);
    (0..scf.space().agents()).any(|i| ps.iter().enumerate().all(|(s, p)| scf.map()[s] == p[i][0]))
}

/// Every model over `space`: out functions in mixed radix (state 0 most
/// significant), then truths.
pub fn all_models(space: &Arc<StateSpace>) -> Vec<ScfModel> {
    all_tables(space)
        .into_iter()
        .flat_map(|out| space.profiles().map(move |t| ScfModel::new(out.clone(), t).unwrap()).collect::<Vec<_>>())
        .collect()
}

pub fn all_tables(space: &Arc<StateSpace>) -> Vec<Arc<ScfTable>> {
    let m = space.num_states();
    let k = space.outcomes().len();
    let mut tables = Vec::new();
    let mut digits = vec![0usize; m];
    loop {
        tables.push(Arc::new(ScfTable::new(space.clone(), digits.clone()).unwrap()));
        let mut pos = m;
        loop {
            if pos == 0 {
                return tables;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
}

pub fn space(n: usize, names: &[&str]) -> Arc<StateSpace> {
    StateSpace::new(n, OutcomeSet::new(names).unwrap()).unwrap()
}

/// Random formulas over a space, for pools that must not depend on proptest.
pub struct FormulaGen {
    rng: ChaCha8Rng,
    space: Arc<StateSpace>,
}

impl FormulaGen {
    pub fn new(space: &Arc<StateSpace>, seed: u64) -> Self {
        FormulaGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            space: space.clone(),
        }
    }

    fn agent(&mut self) -> AgentId {
        AgentId::new(self.rng.gen_range(1..=self.space.agents()))
    }

    fn outcome(&mut self) -> String {
        let k = self.space.outcomes();
        k.get(self.rng.gen_range(0..k.len())).to_string()
    }

    fn coalition(&mut self) -> Coalition {
        Coalition::from_bits(self.rng.gen_range(0..(1u64 << self.space.agents())))
    }

    pub fn formula(&mut self, depth: usize) -> Formula {
        let leaf = depth == 0 || self.rng.gen_bool(0.25);
        if leaf {
            return match self.rng.gen_range(0..5) {
                0 => Formula::top(),
                1 | 2 => {
                    let (i, x, y) = (self.agent(), self.outcome(), self.outcome());
                    Formula::rep(i, x.as_str(), y.as_str())
                }
                _ => Formula::out(self.outcome().as_str()),
            };
        }
        match self.rng.gen_range(0..9) {
            0 | 1 => self.formula(depth - 1).not(),
            2 => self.formula(depth - 1).or(self.formula(depth - 1)),
            3 => self.formula(depth - 1).and(self.formula(depth - 1)),
            4 => self.formula(depth - 1).implies(self.formula(depth - 1)),
            5 => {
                let c = self.coalition();
                Formula::diamond(c, self.formula(depth - 1))
            }
            6 => {
                let c = self.coalition();
                Formula::boxed(c, self.formula(depth - 1))
            }
            7 => {
                let i = self.agent();
                Formula::pref(i, self.formula(depth - 1))
            }
            _ => {
                let i = self.agent();
                Formula::pref_box(i, self.formula(depth - 1))
            }
        }
    }

    pub fn pool(&mut self, count: usize, depth: usize) -> Vec<Formula> {
        (0..count).map(|_| self.formula(depth)).collect()
    }
}

/// A proptest strategy for formulas over `n` agents and the given outcomes.
pub fn arb_formula(n: usize, names: Vec<&'static str>, depth: u32) -> impl proptest::strategy::Strategy<Value = Formula> {
    use proptest::prelude::*;
    let k = names.len();
    let names = Arc::new(names);
    let n1 = names.clone();
    let n2 = names.clone();
    let leaf = prop_oneof![
        Just(Formula::top()),
        (1..=n, 0..k, 0..k).prop_map(move |(i, x, y)| Formula::rep(AgentId::new(i), n1[x], n1[y])),
        (0..k).prop_map(move |x| Formula::out(n2[x])),
    ];
    leaf.prop_recursive(depth, 64, 2, move |inner| {
        let masks = 0..(1u64 << n);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.iff(b)),
            (masks.clone(), inner.clone()).prop_map(|(c, a)| Formula::diamond(Coalition::from_bits(c), a)),
            (masks, inner.clone()).prop_map(|(c, a)| Formula::boxed(Coalition::from_bits(c), a)),
            (1..=n, inner.clone()).prop_map(|(i, a)| Formula::pref(AgentId::new(i), a)),
            (1..=n, inner).prop_map(|(i, a)| Formula::pref_box(AgentId::new(i), a)),
        ]
    })
}
