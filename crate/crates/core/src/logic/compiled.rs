//! Bitset evaluation of formula DAGs.
//!
//! A [`Program`] flattens one or more formulas into a post-order list of
//! operations, one per distinct shared node, so each subformula's truth set
//! is computed once per model. Programs depend only on the state space and
//! can be run against any number of models.

use std::collections::HashMap;
use std::sync::Arc;

use crate::domain::{CoalitionClasses, ScfModel, StateSpace};
use crate::logic::formula::{Formula, Node};
use crate::logic::LogicError;
use crate::stateset::{tail_mask, words_for, StateSet};

/// Per-model lookup tables used by [`Program::run`].
#[derive(Clone, Debug)]
pub struct ModelTables {
    pub(crate) states: usize,
    pub(crate) outcome_masks: Vec<StateSet>,
    /// `positions[i][s]`: rank of `out(s)` in agent `i`'s true order.
    pub(crate) positions: Vec<Vec<u32>>,
    /// `worse_or_equal[i][p]`: states whose outcome agent `i` ranks at `p` or lower.
    pub(crate) worse_or_equal: Vec<Vec<StateSet>>,
}

impl ModelTables {
    pub fn new(model: &ScfModel) -> Self {
        let space = model.space();
        let states = space.num_states();
        let k = space.outcomes().len();
        let mut outcome_masks = vec![StateSet::empty(states); k];
        for s in 0..states {
            outcome_masks[model.outcome_at(s)].insert(s);
        }
        let mut positions = Vec::with_capacity(space.agents());
        let mut worse_or_equal = Vec::with_capacity(space.agents());
        for order in model.truth().orders() {
            let pos: Vec<u32> = (0..states)
                .map(|s| order.position(model.outcome_at(s)) as u32)
                .collect();
            let mut layers = vec![StateSet::empty(states); k + 1];
            for p in (0..k).rev() {
                let mut layer = layers[p + 1].clone();
                for x in 0..k {
                    if order.position(x) == p {
                        layer = layer.union(&outcome_masks[x]);
                    }
                }
                layers[p] = layer;
            }
            positions.push(pos);
            worse_or_equal.push(layers);
        }
        ModelTables {
            states,
            outcome_masks,
            positions,
            worse_or_equal,
        }
    }

    /// Makes outcome atom `outcome` true at `state` as well, so that out is no
    /// longer a function. Meant for negative controls of soundness checks.
    pub fn add_outcome(&mut self, state: usize, outcome: usize) {
        self.outcome_masks[outcome].insert(state);
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Const(u32),
    Out(u32),
    Not(u32),
    Or(u32, u32),
    Diamond(u32, u32),
    Pref(u32, u32),
}

/// A compiled set of formulas over one state space.
pub struct Program {
    space: Arc<StateSpace>,
    words: usize,
    ops: Vec<Op>,
    consts: Vec<StateSet>,
    classes: Vec<Arc<CoalitionClasses>>,
    roots: Vec<u32>,
}

impl Program {
    pub fn compile(space: &Arc<StateSpace>, formulas: &[Formula]) -> Result<Program, LogicError> {
        for phi in formulas {
            phi.check_domain(space)?;
        }
        let mut builder = Builder {
            space,
            ops: Vec::new(),
            consts: Vec::new(),
            classes: Vec::new(),
            memo: HashMap::new(),
            atom_memo: HashMap::new(),
            class_memo: HashMap::new(),
            out_memo: HashMap::new(),
            top: None,
        };
        let roots = formulas.iter().map(|phi| builder.lower(phi)).collect();
        Ok(Program {
            space: space.clone(),
            words: words_for(space.num_states()),
            ops: builder.ops,
            consts: builder.consts,
            classes: builder.classes,
            roots,
        })
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_ops(&self) -> usize {
        self.ops.len()
    }

    pub fn run(&self, tables: &ModelTables) -> Registers {
        let mut regs = Vec::new();
        self.run_into(tables, &mut regs);
        Registers {
            states: self.space.num_states(),
            words: self.words,
            regs,
            roots: self.roots.clone(),
        }
    }

    pub fn run_model(&self, model: &ScfModel) -> Registers {
        self.run(&ModelTables::new(model))
    }

    /// Runs into a caller-owned buffer; returns nothing, read roots with
    /// [`Program::root_in`].
    pub fn run_into(&self, tables: &ModelTables, regs: &mut Vec<u64>) {
        assert_eq!(tables.states, self.space.num_states(), "tables from a different space");
        regs.clear();
        regs.resize(self.ops.len() * self.words, 0);
        if self.words == 1 {
            self.run_single(tables, regs);
        } else {
            self.run_wide(tables, regs);
        }
    }

    pub fn root_in<'r>(&self, regs: &'r [u64], root: usize) -> &'r [u64] {
        let r = self.roots[root] as usize * self.words;
        &regs[r..r + self.words]
    }

    pub fn root_full_in(&self, regs: &[u64], root: usize) -> bool {
        words_full(self.root_in(regs, root), self.space.num_states())
    }

    /// First state (canonical order) where root `root` is false.
    pub fn root_first_missing_in(&self, regs: &[u64], root: usize) -> Option<usize> {
        first_zero(self.root_in(regs, root), self.space.num_states())
    }

    fn run_single(&self, t: &ModelTables, regs: &mut [u64]) {
        let mask = tail_mask(self.space.num_states());
        for i in 0..self.ops.len() {
            let value = match self.ops[i] {
                Op::Const(c) => self.consts[c as usize].words()[0],
                Op::Out(x) => t.outcome_masks[x as usize].words()[0],
                Op::Not(a) => !regs[a as usize] & mask,
                Op::Or(a, b) => regs[a as usize] | regs[b as usize],
                Op::Diamond(c, a) => {
                    let masks = self.classes[c as usize]
                        .single_word
                        .as_ref()
                        .expect("single-word class masks");
                    let mut bits = regs[a as usize];
                    let mut acc = 0u64;
                    while bits != 0 {
                        let s = bits.trailing_zeros() as usize;
                        acc |= masks[s];
                        bits &= !masks[s];
                    }
                    acc
                }
                Op::Pref(agent, a) => {
                    let pos = &t.positions[agent as usize];
                    let mut bits = regs[a as usize];
                    let mut best = u32::MAX;
                    while bits != 0 {
                        let s = bits.trailing_zeros() as usize;
                        best = best.min(pos[s]);
                        bits &= bits - 1;
                    }
                    if best == u32::MAX {
                        0
                    } else {
                        t.worse_or_equal[agent as usize][best as usize].words()[0]
                    }
                }
            };
            regs[i] = value;
        }
    }

    fn run_wide(&self, t: &ModelTables, regs: &mut [u64]) {
        let w = self.words;
        let states = self.space.num_states();
        let mask = tail_mask(states);
        let mut hit: Vec<bool> = Vec::new();
        for i in 0..self.ops.len() {
            let (done, rest) = regs.split_at_mut(i * w);
            let dst = &mut rest[..w];
            let reg = |r: u32| &done[r as usize * w..(r as usize + 1) * w];
            match self.ops[i] {
                Op::Const(c) => dst.copy_from_slice(self.consts[c as usize].words()),
                Op::Out(x) => dst.copy_from_slice(t.outcome_masks[x as usize].words()),
                Op::Not(a) => {
                    for (d, s) in dst.iter_mut().zip(reg(a)) {
                        *d = !s;
                    }
                    dst[w - 1] &= mask;
                }
                Op::Or(a, b) => {
                    for ((d, x), y) in dst.iter_mut().zip(reg(a)).zip(reg(b)) {
                        *d = x | y;
                    }
                }
                Op::Diamond(c, a) => {
                    let classes = &self.classes[c as usize];
                    hit.clear();
                    hit.resize(classes.members.len(), false);
                    for s in iter_bits(reg(a)) {
                        let class = classes.class_of[s] as usize;
                        if !hit[class] {
                            hit[class] = true;
                            for (d, m) in dst.iter_mut().zip(classes.members[class].words()) {
                                *d |= m;
                            }
                        }
                    }
                }
                Op::Pref(agent, a) => {
                    let pos = &t.positions[agent as usize];
                    let best = iter_bits(reg(a)).map(|s| pos[s]).min();
                    if let Some(best) = best {
                        dst.copy_from_slice(t.worse_or_equal[agent as usize][best as usize].words());
                    }
                }
            }
        }
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let tz = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(wi * 64 + tz)
        })
    })
}

fn words_full(words: &[u64], states: usize) -> bool {
    let last = words.len() - 1;
    words[..last].iter().all(|&w| w == u64::MAX) && words[last] == tail_mask(states)
}

fn first_zero(words: &[u64], states: usize) -> Option<usize> {
    for (wi, &w) in words.iter().enumerate() {
        let inv = !w;
        if inv != 0 {
            let s = wi * 64 + inv.trailing_zeros() as usize;
            return (s < states).then_some(s);
        }
    }
    None
}

/// Truth sets produced by one run of a [`Program`].
pub struct Registers {
    states: usize,
    words: usize,
    regs: Vec<u64>,
    roots: Vec<u32>,
}

impl Registers {
    fn slice(&self, root: usize) -> &[u64] {
        let r = self.roots[root] as usize * self.words;
        &self.regs[r..r + self.words]
    }

    pub fn root(&self, root: usize) -> StateSet {
        StateSet::from_words(self.states, self.slice(root).to_vec())
    }

    pub fn is_full(&self, root: usize) -> bool {
        words_full(self.slice(root), self.states)
    }

    pub fn first_missing(&self, root: usize) -> Option<usize> {
        first_zero(self.slice(root), self.states)
    }
}

struct Builder<'s> {
    space: &'s Arc<StateSpace>,
    ops: Vec<Op>,
    consts: Vec<StateSet>,
    classes: Vec<Arc<CoalitionClasses>>,
    memo: HashMap<usize, u32>,
    atom_memo: HashMap<(usize, usize, usize), u32>,
    class_memo: HashMap<u64, u32>,
    out_memo: HashMap<usize, u32>,
    top: Option<u32>,
}

impl Builder<'_> {
    fn push(&mut self, op: Op) -> u32 {
        self.ops.push(op);
        (self.ops.len() - 1) as u32
    }

    fn outcome(&self, name: &str) -> usize {
        self.space.outcomes().index_of(name).expect("checked")
    }

    fn leaf(&mut self, phi: &Formula) -> u32 {
        match phi.node() {
            Node::Top => {
                if let Some(r) = self.top {
                    return r;
                }
                self.consts.push(StateSet::full(self.space.num_states()));
                let r = self.push(Op::Const((self.consts.len() - 1) as u32));
                self.top = Some(r);
                r
            }
            Node::Rep(atom) => {
                let key = (atom.agent.index(), self.outcome(atom.left.as_str()), self.outcome(atom.right.as_str()));
                if let Some(&r) = self.atom_memo.get(&key) {
                    return r;
                }
                let space = self.space;
                let set = StateSet::from_states(
                    space.num_states(),
                    (0..space.num_states()).filter(|&s| space.reports(s, key.0, key.1, key.2)),
                );
                self.consts.push(set);
                let r = self.push(Op::Const((self.consts.len() - 1) as u32));
                self.atom_memo.insert(key, r);
                r
            }
            Node::Out(x) => {
                let x = self.outcome(x.as_str());
                if let Some(&r) = self.out_memo.get(&x) {
                    return r;
                }
                let r = self.push(Op::Out(x as u32));
                self.out_memo.insert(x, r);
                r
            }
            _ => unreachable!("not a leaf"),
        }
    }

    fn class_table(&mut self, bits: u64) -> u32 {
        if let Some(&c) = self.class_memo.get(&bits) {
            return c;
        }
        let classes = self.space.coalition_classes(crate::domain::Coalition::from_bits(bits));
        self.classes.push(classes);
        let c = (self.classes.len() - 1) as u32;
        self.class_memo.insert(bits, c);
        c
    }

    /// Post-order lowering without recursion.
    fn lower(&mut self, root: &Formula) -> u32 {
        let mut stack: Vec<(Formula, bool)> = vec![(root.clone(), false)];
        while let Some((phi, expanded)) = stack.pop() {
            if self.memo.contains_key(&phi.id()) {
                continue;
            }
            let children: Vec<&Formula> = match phi.node() {
                Node::Top | Node::Rep(_) | Node::Out(_) => Vec::new(),
                Node::Not(a) | Node::Diamond(_, a) | Node::PrefDiamond(_, a) => vec![a],
                Node::Or(a, b) => vec![a, b],
            };
            if !expanded && children.iter().any(|c| !self.memo.contains_key(&c.id())) {
                let pending: Vec<Formula> = children.iter().map(|c| (*c).clone()).collect();
                stack.push((phi, true));
                for c in pending.into_iter().rev() {
                    stack.push((c, false));
                }
                continue;
            }
            let reg = match phi.node() {
                Node::Top | Node::Rep(_) | Node::Out(_) => self.leaf(&phi),
                Node::Not(a) => {
                    let a = self.memo[&a.id()];
                    self.push(Op::Not(a))
                }
                Node::Or(a, b) => {
                    let (a, b) = (self.memo[&a.id()], self.memo[&b.id()]);
                    self.push(Op::Or(a, b))
                }
                Node::Diamond(c, a) => {
                    let a = self.memo[&a.id()];
                    if c.is_empty() {
                        a
                    } else {
                        let table = self.class_table(c.bits());
                        self.push(Op::Diamond(table, a))
                    }
                }
                Node::PrefDiamond(agent, a) => {
                    let a = self.memo[&a.id()];
                    self.push(Op::Pref(agent.index() as u32, a))
                }
            };
            self.memo.insert(phi.id(), reg);
        }
        self.memo[&root.id()]
    }
}
