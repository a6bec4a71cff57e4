use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::domain::{AgentId, Coalition, Outcome, RepAtom, StateSpace};
use crate::logic::LogicError;

/// Core grammar. Derived connectives are expanded by the builders on
/// [`Formula`] and never appear here.
#[derive(PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Top,
    Rep(RepAtom),
    Out(Outcome),
    Not(Formula),
    Or(Formula, Formula),
    Diamond(Coalition, Formula),
    PrefDiamond(AgentId, Formula),
}

/// A shared, immutable formula. Cloning is cheap; equality is structural.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self))
    }
}

impl Formula {
    fn wrap(node: Node) -> Self {
        Formula(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Address of the shared node, stable while any clone is alive.
    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn top() -> Self {
        Formula::wrap(Node::Top)
    }

    pub fn bottom() -> Self {
        Formula::top().not()
    }

    pub fn rep(agent: AgentId, left: impl Into<Outcome>, right: impl Into<Outcome>) -> Self {
        Formula::wrap(Node::Rep(RepAtom::new(agent, left, right)))
    }

    pub fn atom(atom: RepAtom) -> Self {
        Formula::wrap(Node::Rep(atom))
    }

    pub fn out(outcome: impl Into<Outcome>) -> Self {
        Formula::wrap(Node::Out(outcome.into()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::wrap(Node::Not(self))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::wrap(Node::Or(self, other))
    }

    pub fn and(self, other: Formula) -> Self {
        self.not().or(other.not()).not()
    }

    pub fn implies(self, other: Formula) -> Self {
        self.not().or(other)
    }

    pub fn iff(self, other: Formula) -> Self {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    pub fn diamond(coalition: Coalition, inner: Formula) -> Self {
        Formula::wrap(Node::Diamond(coalition, inner))
    }

    pub fn boxed(coalition: Coalition, inner: Formula) -> Self {
        Formula::diamond(coalition, inner.not()).not()
    }

    pub fn pref(agent: AgentId, inner: Formula) -> Self {
        Formula::wrap(Node::PrefDiamond(agent, inner))
    }

    pub fn pref_box(agent: AgentId, inner: Formula) -> Self {
        Formula::pref(agent, inner.not()).not()
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::bottom)
    }

    /// Balanced conjunction, for the large expansions whose left-nested
    /// form would be thousands of levels deep.
    pub fn big_and(items: Vec<Formula>) -> Self {
        balanced(items, Formula::and).unwrap_or_else(Formula::top)
    }

    pub fn big_or(items: Vec<Formula>) -> Self {
        balanced(items, Formula::or).unwrap_or_else(Formula::bottom)
    }

    /// Applies `f` once to every distinct shared node.
    pub(crate) fn visit_unique(&self, mut f: impl FnMut(&Formula)) {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(phi) = stack.pop() {
            if !seen.insert(phi.id()) {
                continue;
            }
            f(&phi);
            match phi.node() {
                Node::Top | Node::Rep(_) | Node::Out(_) => {}
                Node::Not(a) | Node::Diamond(_, a) | Node::PrefDiamond(_, a) => stack.push(a.clone()),
                Node::Or(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
            }
        }
    }

    /// Checks every agent, coalition and outcome against the space.
    pub fn check_domain(&self, space: &StateSpace) -> Result<(), LogicError> {
        let mut err = None;
        let n = space.agents();
        let outcomes = space.outcomes();
        let grand = space.grand_coalition().bits();
        self.visit_unique(|phi| {
            if err.is_some() {
                return;
            }
            let problem = match phi.node() {
                Node::Rep(atom) => {
                    if atom.agent.number() > n {
                        Some(format!("agent {} in {atom} is not among 1..={n}", atom.agent))
                    } else if outcomes.index_of(atom.left.as_str()).is_none() {
                        Some(format!("unknown outcome `{}` in {atom}", atom.left))
                    } else if outcomes.index_of(atom.right.as_str()).is_none() {
                        Some(format!("unknown outcome `{}` in {atom}", atom.right))
                    } else {
                        None
                    }
                }
                Node::Out(x) if outcomes.index_of(x.as_str()).is_none() => Some(format!("unknown outcome `{x}`")),
                Node::Diamond(c, _) if c.bits() & !grand != 0 => Some(format!("coalition {c} is not a subset of 1..={n}")),
                Node::PrefDiamond(i, _) if i.number() > n => Some(format!("agent {i} is not among 1..={n}")),
                _ => None,
            };
            err = problem;
        });
        match err {
            Some(detail) => Err(LogicError::FormulaDomainMismatch(detail)),
            None => Ok(()),
        }
    }

    /// True when the formula mentions no outcome atom and no preference
    /// modality, so its truth depends on the state alone.
    pub fn is_outcome_free(&self) -> bool {
        let mut free = true;
        self.visit_unique(|phi| {
            if matches!(phi.node(), Node::Out(_) | Node::PrefDiamond(..)) {
                free = false;
            }
        });
        free
    }

    /// True for Boolean combinations of rep atoms.
    pub fn is_propositional_rep(&self) -> bool {
        let mut ok = true;
        self.visit_unique(|phi| {
            if matches!(phi.node(), Node::Out(_) | Node::PrefDiamond(..) | Node::Diamond(..)) {
                ok = false;
            }
        });
        ok
    }

    /// Agents whose rep atoms occur in the formula.
    pub fn controllers(&self) -> Coalition {
        let mut c = Coalition::EMPTY;
        self.visit_unique(|phi| {
            if let Node::Rep(atom) = phi.node() {
                c = c.with(atom.agent);
            }
        });
        c
    }

    /// Number of distinct shared nodes.
    pub fn dag_size(&self) -> usize {
        let mut count = 0;
        self.visit_unique(|_| count += 1);
        count
    }
}

fn balanced(mut items: Vec<Formula>, join: fn(Formula, Formula) -> Formula) -> Option<Formula> {
    if items.is_empty() {
        return None;
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut iter = items.into_iter();
        while let Some(a) = iter.next() {
            match iter.next() {
                Some(b) => next.push(join(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop()
}
