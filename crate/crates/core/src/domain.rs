//! Agents, outcomes, linear orders, profiles and the finite spaces they live in.
//!
//! A profile doubles as a *state*: the reported profile of a model. Every
//! state of an `(n, K)` space has a canonical index, the mixed-radix number
//! whose digits are the per-agent permutation indices (agent 1 most
//! significant). All iteration in the crate follows this order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::stateset::StateSet;

/// Words that cannot be used as outcome names because the formula syntax
/// claims them.
pub const RESERVED_WORDS: &[&str] = &[
    "true",
    "false",
    "N",
    "rep",
    "pref",
    "Pref",
    "ballot",
    "ballotAll",
    "better",
    "trueprofile",
    "citsov",
    "nodict",
    "br",
    "dom",
    "mon",
    "strproof",
    "scf",
];

/// Hard ceiling on the number of states a space may have.
pub const MAX_SPACE_STATES: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("outcome name `{0}` must be a non-empty token of letters, digits or `_`")]
    BadOutcomeName(String),
    #[error("outcome `{0}` is listed more than once")]
    DuplicateOutcome(String),
    #[error("outcome name `{0}` collides with a reserved keyword")]
    ReservedOutcomeName(String),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("ranking {0} is not a permutation of the outcomes")]
    NotAPermutation(String),
    #[error("expected {expected} rankings (one per agent), found {found}")]
    WrongAgentCount { expected: usize, found: usize },
    #[error("agent {agent} is out of range 1..={agents}")]
    AgentOutOfRange { agent: usize, agents: usize },
    #[error("table has {found} entries but the space has {expected} profiles")]
    TableSize { expected: usize, found: usize },
    #[error("outcome index {0} is out of range")]
    OutcomeIndex(usize),
    #[error("state index {0} is out of range")]
    StateIndex(usize),
    #[error("objects belong to different (n, K) spaces")]
    SpaceMismatch,
}

/// A social outcome, identified by its name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome(Arc<str>);

impl Outcome {
    pub fn new(name: &str) -> Self {
        Outcome(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Outcome {
    fn from(s: &str) -> Self {
        Outcome::new(s)
    }
}

fn valid_token(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The finite outcome set `K`, in a fixed order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OutcomeSet {
    names: Vec<Outcome>,
}

impl OutcomeSet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self, DomainError> {
        let mut out: Vec<Outcome> = Vec::new();
        for name in names {
            let name = name.as_ref();
            if !valid_token(name) {
                return Err(DomainError::BadOutcomeName(name.to_string()));
            }
            if RESERVED_WORDS.contains(&name) {
                return Err(DomainError::ReservedOutcomeName(name.to_string()));
            }
            if out.iter().any(|o| o.as_str() == name) {
                return Err(DomainError::DuplicateOutcome(name.to_string()));
            }
            out.push(Outcome::new(name));
        }
        if out.is_empty() {
            return Err(DomainError::InvalidDomain("the outcome set is empty".into()));
        }
        Ok(OutcomeSet { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, index: usize) -> &Outcome {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|o| o.as_str() == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, DomainError> {
        self.index_of(name)
            .ok_or_else(|| DomainError::UnknownOutcome(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Outcome> {
        self.names.iter()
    }
}

/// An agent of `N = {1, ..., n}`, numbered from 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AgentId(usize);

impl AgentId {
    /// Panics on 0; agent numbers start at 1.
    pub fn new(number: usize) -> Self {
        assert!(number >= 1, "agents are numbered from 1");
        AgentId(number)
    }

    pub fn from_index(index: usize) -> Self {
        AgentId(index + 1)
    }

    pub fn number(self) -> usize {
        self.0
    }

    /// Zero-based position of the agent in a profile.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A coalition `C ⊆ N`, as a bitmask over agent indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn all(agents: usize) -> Self {
        assert!(agents <= 64);
        if agents == 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << agents) - 1)
        }
    }

    pub fn singleton(agent: AgentId) -> Self {
        Coalition(1 << agent.index())
    }

    pub fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, agent: AgentId) -> bool {
        agent.index() < 64 && self.0 & (1 << agent.index()) != 0
    }

    pub fn with(self, agent: AgentId) -> Self {
        Coalition(self.0 | (1 << agent.index()))
    }

    pub fn without(self, agent: AgentId) -> Self {
        Coalition(self.0 & !(1 << agent.index()))
    }

    pub fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn agents(self) -> impl Iterator<Item = AgentId> {
        (0..64)
            .filter(move |i| self.0 & (1 << i) != 0)
            .map(AgentId::from_index)
    }

    /// All `2^n` coalitions of `n` agents, by increasing bitmask.
    pub fn all_subsets(agents: usize) -> impl Iterator<Item = Coalition> {
        assert!(agents < 64);
        (0..(1u64 << agents)).map(Coalition)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, a) in self.agents().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<AgentId> for Coalition {
    fn from_iter<T: IntoIterator<Item = AgentId>>(iter: T) -> Self {
        iter.into_iter().fold(Coalition::EMPTY, Coalition::with)
    }
}

/// A strict ranking of the outcomes, most preferred first.
///
/// The relational view "x is at least as good as y" is derived by comparing
/// positions, so it is reflexive, transitive, antisymmetric and total by
/// construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LinearOrder {
    ranking: Box<[usize]>,
    position: Box<[usize]>,
}

impl LinearOrder {
    /// Builds an order from outcome indices, most preferred first.
    pub fn from_ranking(ranking: Vec<usize>, outcomes: usize) -> Result<Self, DomainError> {
        let mut position = vec![usize::MAX; outcomes];
        if ranking.len() != outcomes {
            return Err(DomainError::NotAPermutation(format!("{ranking:?}")));
        }
        for (p, &x) in ranking.iter().enumerate() {
            if x >= outcomes || position[x] != usize::MAX {
                return Err(DomainError::NotAPermutation(format!("{ranking:?}")));
            }
            position[x] = p;
        }
        Ok(LinearOrder {
            ranking: ranking.into_boxed_slice(),
            position: position.into_boxed_slice(),
        })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S], outcomes: &OutcomeSet) -> Result<Self, DomainError> {
        let ranking = names
            .iter()
            .map(|n| outcomes.require(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        LinearOrder::from_ranking(ranking, outcomes.len()).map_err(|_| {
            let shown: Vec<&str> = names.iter().map(|n| n.as_ref()).collect();
            DomainError::NotAPermutation(format!("[{}]", shown.join(",")))
        })
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    /// Position of outcome `x`; 0 is the most preferred.
    pub fn position(&self, x: usize) -> usize {
        self.position[x]
    }

    /// `x` is at least as good as `y`.
    pub fn weakly_prefers(&self, x: usize, y: usize) -> bool {
        self.position[x] <= self.position[y]
    }

    pub fn top(&self) -> usize {
        self.ranking[0]
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn display<'a>(&'a self, outcomes: &'a OutcomeSet) -> impl fmt::Display + 'a {
        DisplayOrder(self, outcomes)
    }
}

struct DisplayOrder<'a>(&'a LinearOrder, &'a OutcomeSet);

impl fmt::Display for DisplayOrder<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, &x) in self.0.ranking.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.1.get(x))?;
        }
        f.write_str("]")
    }
}

/// Every linear order over `K`, lexicographic in the index order of `K`.
pub fn all_linear_orders(outcomes: &OutcomeSet) -> Result<Vec<LinearOrder>, DomainError> {
    let k = outcomes.len();
    if k == 0 {
        return Err(DomainError::InvalidDomain("the outcome set is empty".into()));
    }
    let mut result = Vec::new();
    let mut current = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn extend(k: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<LinearOrder>) {
        if current.len() == k {
            out.push(LinearOrder::from_ranking(current.clone(), k).expect("permutation"));
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                current.push(x);
                extend(k, current, used, out);
                current.pop();
                used[x] = false;
            }
        }
    }
    extend(k, &mut current, &mut used, &mut result);
    Ok(result)
}

/// One linear order per agent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Profile {
    orders: Vec<LinearOrder>,
}

impl Profile {
    pub fn new(orders: Vec<LinearOrder>) -> Self {
        Profile { orders }
    }

    pub fn from_names<S: AsRef<str>>(rankings: &[Vec<S>], outcomes: &OutcomeSet) -> Result<Self, DomainError> {
        let orders = rankings
            .iter()
            .map(|r| LinearOrder::from_names(r, outcomes))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Profile { orders })
    }

    pub fn agents(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self, agent: AgentId) -> &LinearOrder {
        &self.orders[agent.index()]
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    pub fn display<'a>(&'a self, outcomes: &'a OutcomeSet) -> impl fmt::Display + 'a {
        DisplayProfile(self, outcomes)
    }
}

struct DisplayProfile<'a>(&'a Profile, &'a OutcomeSet);

impl fmt::Display for DisplayProfile<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, o) in self.0.orders.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", o.display(self.1))?;
        }
        f.write_str(")")
    }
}

/// The reported-preference atom `rep(i, x, y)`: agent `i` reports `x` at
/// least as good as `y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RepAtom {
    pub agent: AgentId,
    pub left: Outcome,
    pub right: Outcome,
}

impl RepAtom {
    pub fn new(agent: AgentId, left: impl Into<Outcome>, right: impl Into<Outcome>) -> Self {
        RepAtom {
            agent,
            left: left.into(),
            right: right.into(),
        }
    }
}

impl fmt::Display for RepAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rep({},{},{})", self.agent, self.left, self.right)
    }
}

/// Partition of the states into classes that agree outside a coalition.
#[derive(Debug)]
pub struct CoalitionClasses {
    pub(crate) class_of: Vec<u32>,
    pub(crate) members: Vec<StateSet>,
    /// Per-state class mask, present when the space fits in one word.
    pub(crate) single_word: Option<Vec<u64>>,
}

/// The set of states `L(K)^N` for given `n` and `K`.
pub struct StateSpace {
    agents: usize,
    outcomes: OutcomeSet,
    orders: Vec<LinearOrder>,
    order_index: HashMap<Box<[usize]>, usize>,
    weights: Vec<usize>,
    states: usize,
    classes: Mutex<HashMap<Coalition, Arc<CoalitionClasses>>>,
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateSpace")
            .field("agents", &self.agents)
            .field("outcomes", &self.outcomes)
            .field("states", &self.states)
            .finish()
    }
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.agents == other.agents && self.outcomes == other.outcomes
    }
}

impl Eq for StateSpace {}

impl StateSpace {
    pub fn new(agents: usize, outcomes: OutcomeSet) -> Result<Arc<Self>, DomainError> {
        if agents == 0 {
            return Err(DomainError::InvalidDomain("there must be at least one agent".into()));
        }
        if agents > 63 {
            return Err(DomainError::InvalidDomain(format!("{agents} agents is more than supported (63)")));
        }
        let orders = all_linear_orders(&outcomes)?;
        let radix = orders.len();
        let states = (0..agents)
            .try_fold(1usize, |acc, _| acc.checked_mul(radix))
            .filter(|&s| s <= MAX_SPACE_STATES)
            .ok_or_else(|| {
                DomainError::InvalidDomain(format!(
                    "{radix}^{agents} states exceeds the supported maximum of {MAX_SPACE_STATES}"
                ))
            })?;
        let mut weights = vec![1usize; agents];
        for i in (0..agents.saturating_sub(1)).rev() {
            weights[i] = weights[i + 1] * radix;
        }
        let order_index = orders
            .iter()
            .enumerate()
            .map(|(k, o)| (o.ranking().to_vec().into_boxed_slice(), k))
            .collect();
        Ok(Arc::new(StateSpace {
            agents,
            outcomes,
            orders,
            order_index,
            weights,
            states,
            classes: Mutex::new(HashMap::new()),
        }))
    }

    /// Convenience constructor from outcome names.
    pub fn with_names<S: AsRef<str>>(agents: usize, names: impl IntoIterator<Item = S>) -> Result<Arc<Self>, DomainError> {
        StateSpace::new(agents, OutcomeSet::new(names)?)
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn agent_ids(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agents).map(AgentId::from_index)
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::all(self.agents)
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    /// `L(K)` in canonical order.
    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    pub fn order_index(&self, order: &LinearOrder) -> usize {
        self.order_index[order.ranking()]
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn check_agent(&self, agent: AgentId) -> Result<(), DomainError> {
        if agent.number() > self.agents {
            Err(DomainError::AgentOutOfRange {
                agent: agent.number(),
                agents: self.agents,
            })
        } else {
            Ok(())
        }
    }

    /// Permutation index of agent `agent_index`'s report in `state`.
    pub fn digit(&self, state: usize, agent_index: usize) -> usize {
        (state / self.weights[agent_index]) % self.orders.len()
    }

    pub fn with_digit(&self, state: usize, agent_index: usize, digit: usize) -> usize {
        let w = self.weights[agent_index];
        state - self.digit(state, agent_index) * w + digit * w
    }

    pub fn order_of(&self, state: usize, agent_index: usize) -> &LinearOrder {
        &self.orders[self.digit(state, agent_index)]
    }

    pub fn profile(&self, state: usize) -> Profile {
        Profile::new(
            (0..self.agents)
                .map(|i| self.order_of(state, i).clone())
                .collect(),
        )
    }

    pub fn index_of(&self, profile: &Profile) -> Result<usize, DomainError> {
        if profile.agents() != self.agents {
            return Err(DomainError::WrongAgentCount {
                expected: self.agents,
                found: profile.agents(),
            });
        }
        let mut state = 0;
        for (i, order) in profile.orders().iter().enumerate() {
            let digit = *self
                .order_index
                .get(order.ranking())
                .ok_or_else(|| DomainError::NotAPermutation(format!("{:?}", order.ranking())))?;
            state += digit * self.weights[i];
        }
        Ok(state)
    }

    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.states).map(|s| self.profile(s))
    }

    /// Whether agent `agent_index` reports `x` at least as good as `y` in `state`.
    pub fn reports(&self, state: usize, agent_index: usize, x: usize, y: usize) -> bool {
        self.order_of(state, agent_index).weakly_prefers(x, y)
    }

    /// The valuation of `At[N,K]` encoding `state`.
    pub fn state_atoms(&self, state: usize) -> BTreeSet<RepAtom> {
        let k = self.outcomes.len();
        let mut atoms = BTreeSet::new();
        for i in 0..self.agents {
            let order = self.order_of(state, i);
            for x in 0..k {
                for y in 0..k {
                    if order.weakly_prefers(x, y) {
                        atoms.insert(RepAtom::new(
                            AgentId::from_index(i),
                            self.outcomes.get(x).clone(),
                            self.outcomes.get(y).clone(),
                        ));
                    }
                }
            }
        }
        atoms
    }

    /// States agreeing with `state` on every agent outside `coalition`,
    /// built directly from the mixed-radix digits.
    pub fn neighbors(&self, state: usize, coalition: Coalition) -> Vec<usize> {
        let members: Vec<usize> = coalition
            .agents()
            .map(AgentId::index)
            .filter(|&i| i < self.agents)
            .collect();
        let mut base = state;
        for &i in &members {
            base = self.with_digit(base, i, 0);
        }
        let radix = self.orders.len();
        let mut out = Vec::new();
        let mut digits = vec![0usize; members.len()];
        loop {
            let s = members
                .iter()
                .zip(&digits)
                .fold(base, |acc, (&i, &d)| acc + d * self.weights[i]);
            out.push(s);
            let mut pos = members.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < radix {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// Cached partition of states by agreement outside `coalition`.
    pub fn coalition_classes(&self, coalition: Coalition) -> Arc<CoalitionClasses> {
        let mut cache = self.classes.lock().expect("class cache poisoned");
        cache
            .entry(coalition)
            .or_insert_with(|| Arc::new(self.build_classes(coalition)))
            .clone()
    }

    fn build_classes(&self, coalition: Coalition) -> CoalitionClasses {
        let mut rep_to_class: HashMap<usize, u32> = HashMap::new();
        let mut class_of = Vec::with_capacity(self.states);
        let mut members: Vec<StateSet> = Vec::new();
        for s in 0..self.states {
            let mut base = s;
            for a in coalition.agents().filter(|a| a.index() < self.agents) {
                base = self.with_digit(base, a.index(), 0);
            }
            let next = rep_to_class.len() as u32;
            let c = *rep_to_class.entry(base).or_insert(next);
            if c as usize == members.len() {
                members.push(StateSet::empty(self.states));
            }
            members[c as usize].insert(s);
            class_of.push(c);
        }
        let single_word = (self.states <= 64).then(|| {
            class_of
                .iter()
                .map(|&c| members[c as usize].words()[0])
                .collect()
        });
        CoalitionClasses {
            class_of,
            members,
            single_word,
        }
    }

    pub fn format_state(&self, state: usize) -> String {
        self.profile(state).display(&self.outcomes).to_string()
    }
}

/// `L(K)^N` in canonical order.
pub fn all_profiles(agents: usize, outcomes: &OutcomeSet) -> Result<Vec<Profile>, DomainError> {
    let space = StateSpace::new(agents, outcomes.clone())?;
    Ok(space.profiles().collect())
}

/// A social choice function: a total map from profiles to outcomes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScfTable {
    space: Arc<StateSpace>,
    map: Vec<usize>,
}

impl ScfTable {
    /// `map[s]` is the outcome index chosen at the profile with canonical index `s`.
    pub fn new(space: Arc<StateSpace>, map: Vec<usize>) -> Result<Self, DomainError> {
        if map.len() != space.num_states() {
            return Err(DomainError::TableSize {
                expected: space.num_states(),
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&x| x >= space.outcomes().len()) {
            return Err(DomainError::OutcomeIndex(bad));
        }
        Ok(ScfTable { space, map })
    }

    pub fn from_fn(space: Arc<StateSpace>, mut f: impl FnMut(&Profile) -> usize) -> Result<Self, DomainError> {
        let map = (0..space.num_states()).map(|s| f(&space.profile(s))).collect();
        ScfTable::new(space, map)
    }

    pub fn constant(space: Arc<StateSpace>, outcome: usize) -> Result<Self, DomainError> {
        let states = space.num_states();
        ScfTable::new(space, vec![outcome; states])
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn outcome_at(&self, state: usize) -> usize {
        self.map[state]
    }

    pub fn apply(&self, profile: &Profile) -> Result<&Outcome, DomainError> {
        let s = self.space.index_of(profile)?;
        Ok(self.space.outcomes().get(self.map[s]))
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Outcome indices chosen at some profile.
    pub fn feasible(&self) -> Vec<bool> {
        let mut seen = vec![false; self.space.outcomes().len()];
        for &x in &self.map {
            seen[x] = true;
        }
        seen
    }
}

/// A model of social choice functions: an outcome function over states plus
/// the agents' true preferences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScfModel {
    out: Arc<ScfTable>,
    truth: Profile,
}

impl ScfModel {
    pub fn new(out: Arc<ScfTable>, truth: Profile) -> Result<Self, DomainError> {
        out.space().index_of(&truth)?;
        Ok(ScfModel { out, truth })
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        self.out.space()
    }

    pub fn out(&self) -> &ScfTable {
        &self.out
    }

    pub fn out_arc(&self) -> &Arc<ScfTable> {
        &self.out
    }

    pub fn truth(&self) -> &Profile {
        &self.truth
    }

    pub fn outcome_at(&self, state: usize) -> usize {
        self.out.outcome_at(state)
    }
}

/// An action of a game form: either a reported linear order or an opaque label.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Action {
    Report(LinearOrder),
    Label(String),
}

/// A strategic game form `⟨N, (A_i), K, o⟩`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GameForm {
    outcomes: OutcomeSet,
    action_sets: Vec<Vec<Action>>,
    weights: Vec<usize>,
    table: Vec<usize>,
}

impl GameForm {
    /// `table` lists outcome indices over action profiles in mixed-radix
    /// order with agent 1 most significant.
    pub fn new(outcomes: OutcomeSet, action_sets: Vec<Vec<Action>>, table: Vec<usize>) -> Result<Self, DomainError> {
        if action_sets.is_empty() {
            return Err(DomainError::InvalidDomain("a game form needs at least one agent".into()));
        }
        if action_sets.iter().any(Vec::is_empty) {
            return Err(DomainError::InvalidDomain("every action set must be nonempty".into()));
        }
        let n = action_sets.len();
        let mut weights = vec![1usize; n];
        for i in (0..n - 1).rev() {
            weights[i] = weights[i + 1] * action_sets[i + 1].len();
        }
        let size = weights[0] * action_sets[0].len();
        if table.len() != size {
            return Err(DomainError::TableSize {
                expected: size,
                found: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= outcomes.len()) {
            return Err(DomainError::OutcomeIndex(bad));
        }
        Ok(GameForm {
            outcomes,
            action_sets,
            weights,
            table,
        })
    }

    pub fn agents(&self) -> usize {
        self.action_sets.len()
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    pub fn actions(&self, agent_index: usize) -> &[Action] {
        &self.action_sets[agent_index]
    }

    pub fn num_profiles(&self) -> usize {
        self.table.len()
    }

    pub fn action_profile(&self, index: usize) -> Vec<usize> {
        (0..self.agents())
            .map(|i| (index / self.weights[i]) % self.action_sets[i].len())
            .collect()
    }

    pub fn profile_index(&self, actions: &[usize]) -> usize {
        actions
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| a * w)
            .sum()
    }

    /// Index of the profile where agent `agent_index` switches to `action`.
    pub fn deviate(&self, index: usize, agent_index: usize, action: usize) -> usize {
        let w = self.weights[agent_index];
        let current = (index / w) % self.action_sets[agent_index].len();
        index - current * w + action * w
    }

    pub fn outcome(&self, index: usize) -> usize {
        self.table[index]
    }

    /// For a direct mechanism, maps each agent's order index (in `L(K)`) to
    /// its action index. `None` if some action set is not exactly `L(K)`.
    pub fn direct_actions(&self) -> Option<Vec<Vec<usize>>> {
        let orders = all_linear_orders(&self.outcomes).ok()?;
        let mut mapping = Vec::with_capacity(self.agents());
        for set in &self.action_sets {
            if set.len() != orders.len() {
                return None;
            }
            let mut per_order = vec![usize::MAX; orders.len()];
            for (a, action) in set.iter().enumerate() {
                let Action::Report(order) = action else {
                    return None;
                };
                let k = orders.iter().position(|o| o == order)?;
                if per_order[k] != usize::MAX {
                    return None;
                }
                per_order[k] = a;
            }
            mapping.push(per_order);
        }
        Some(mapping)
    }

    pub fn format_actions(&self, index: usize) -> String {
        let parts: Vec<String> = self
            .action_profile(index)
            .iter()
            .enumerate()
            .map(|(i, &a)| match &self.action_sets[i][a] {
                Action::Report(order) => order.display(&self.outcomes).to_string(),
                Action::Label(label) => label.clone(),
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

/// The direct mechanism `g^F` induced by a social choice function.
pub fn scf_as_game_form(scf: &ScfTable) -> GameForm {
    let space = scf.space();
    let actions: Vec<Action> = space.orders().iter().cloned().map(Action::Report).collect();
    GameForm::new(
        space.outcomes().clone(),
        vec![actions; space.agents()],
        scf.map().to_vec(),
    )
    .expect("a social choice function table is a valid game form")
}
