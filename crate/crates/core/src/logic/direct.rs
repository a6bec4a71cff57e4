//! Pointwise evaluation, one clause per connective of the truth definition.

use crate::domain::{ScfModel, StateSpace};
use crate::logic::formula::{Formula, Node};

pub(crate) struct Pointwise<'m> {
    model: &'m ScfModel,
    space: &'m StateSpace,
    feasible: Vec<bool>,
}

impl<'m> Pointwise<'m> {
    pub(crate) fn new(model: &'m ScfModel) -> Self {
        Pointwise {
            model,
            space: model.space(),
            feasible: model.out().feasible(),
        }
    }

    fn index(&self, name: &str) -> usize {
        self.space
            .outcomes()
            .index_of(name)
            .expect("formula checked against the space")
    }

    pub(crate) fn eval(&self, state: usize, phi: &Formula) -> bool {
        match phi.node() {
            Node::Top => true,
            Node::Rep(atom) => {
                let x = self.index(atom.left.as_str());
                let y = self.index(atom.right.as_str());
                self.space.reports(state, atom.agent.index(), x, y)
            }
            Node::Out(x) => self.model.outcome_at(state) == self.index(x.as_str()),
            Node::Not(a) => !self.eval(state, a),
            Node::Or(a, b) => self.eval(state, a) || self.eval(state, b),
            Node::Diamond(c, a) => self
                .space
                .neighbors(state, *c)
                .into_iter()
                .any(|u| self.eval(u, a)),
            Node::PrefDiamond(agent, a) => {
                let order = self.model.truth().order(*agent);
                let here = self.model.outcome_at(state);
                if let Node::Out(x) = a.node() {
                    // Some state realizes x exactly when x is feasible.
                    let x = self.index(x.as_str());
                    return self.feasible[x] && order.weakly_prefers(x, here);
                }
                (0..self.space.num_states())
                    .any(|u| order.weakly_prefers(self.model.outcome_at(u), here) && self.eval(u, a))
            }
        }
    }
}
