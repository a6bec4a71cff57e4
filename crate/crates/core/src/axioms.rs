//! Instances of the axiom schemas of the SCF logic, and soundness checking
//! by model checking every instance in every given model.
//!
//! Three schemas are checked in a corrected form because their printed
//! readings are not valid (see [`literal_variants`] for those readings):
//!
//! * `antisym'`: the premise also fixes distinct outcomes `x ≠ y` at the
//!   two ballots. Preference over states is only a preorder: two ballots
//!   with the same outcome are mutually weakly preferred.
//! * `total'`: `ballot(<) → (⟨pref_i⟩ballot(<′) ∨ □_N(ballot(<′) → ⟨pref_i⟩ballot(<)))`.
//! * `comp-At`: `δ₁, δ₂` are Boolean combinations of rep atoms whose sets
//!   of controlling agents are disjoint.

use std::fmt;
use std::str::FromStr;

use crate::domain::{AgentId, Coalition, ScfModel, StateSpace};
use crate::encodings::{ballot_agent, Encoder};
use crate::logic::{Formula, ModelTables, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    Refl,
    AntisymTotal,
    Trans,
    KBox,
    TBox,
    BBox,
    CompUnion,
    Confl,
    Empty,
    Exclu,
    Ballot,
    CompAt,
    Func1,
    Func2,
    Incl,
    KPref,
    FourPref,
    AntisymPrime,
    TotalPrime,
    UnifPref,
}

impl Schema {
    pub const ALL: [Schema; 20] = [
        Schema::Refl,
        Schema::AntisymTotal,
        Schema::Trans,
        Schema::KBox,
        Schema::TBox,
        Schema::BBox,
        Schema::CompUnion,
        Schema::Confl,
        Schema::Empty,
        Schema::Exclu,
        Schema::Ballot,
        Schema::CompAt,
        Schema::Func1,
        Schema::Func2,
        Schema::Incl,
        Schema::KPref,
        Schema::FourPref,
        Schema::AntisymPrime,
        Schema::TotalPrime,
        Schema::UnifPref,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::Refl => "refl",
            Schema::AntisymTotal => "antisym-total",
            Schema::Trans => "trans",
            Schema::KBox => "K(i)",
            Schema::TBox => "T(i)",
            Schema::BBox => "B(i)",
            Schema::CompUnion => "comp-union",
            Schema::Confl => "confl",
            Schema::Empty => "empty",
            Schema::Exclu => "exclu",
            Schema::Ballot => "ballot",
            Schema::CompAt => "comp-At",
            Schema::Func1 => "func1",
            Schema::Func2 => "func2",
            Schema::Incl => "incl",
            Schema::KPref => "K(<i)",
            Schema::FourPref => "4(<i)",
            Schema::AntisymPrime => "antisym'",
            Schema::TotalPrime => "total'",
            Schema::UnifPref => "unifPref",
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Schema {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Schema::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| format!("unknown schema `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct AxiomInstance {
    pub schema: Schema,
    /// Human-readable values of the schema's parameters.
    pub bindings: String,
    pub formula: Formula,
}

/// Metavariable substitutions for the schemas.
#[derive(Clone, Debug)]
pub struct Pool {
    /// For `φ`, `ψ`.
    pub formulas: Vec<Formula>,
    /// For `δ₁`, `δ₂` of comp-At; must be Boolean combinations of rep atoms.
    pub deltas: Vec<Formula>,
}

pub const DEFAULT_POOL_CAP: usize = 200;

/// Outcome atoms, non-trivial rep atoms, their negations and the
/// `ballot_i` formulas, then pairwise disjunctions of those, up to `cap`.
pub fn default_pool(space: &StateSpace, cap: usize) -> Pool {
    let outcomes = space.outcomes();
    let k = outcomes.len();
    let mut atoms = Vec::new();
    let mut rep_literals = Vec::new();
    for x in outcomes.iter() {
        atoms.push(Formula::out(x.clone()));
    }
    for i in space.agent_ids() {
        for x in 0..k {
            for y in 0..k {
                if x != y {
                    let p = Formula::rep(i, outcomes.get(x).clone(), outcomes.get(y).clone());
                    atoms.push(p.clone());
                    rep_literals.push(p);
                }
            }
        }
    }
    let mut base: Vec<Formula> = atoms.clone();
    base.extend(atoms.iter().map(|a| a.clone().not()));
    rep_literals.extend(rep_literals.clone().into_iter().map(Formula::not));
    for i in space.agent_ids() {
        for order in space.orders() {
            let b = ballot_agent(i, order, outcomes);
            base.push(b.clone());
            rep_literals.push(b);
        }
    }
    let mut formulas: Vec<Formula> = base.iter().take(cap).cloned().collect();
    'outer: for a in 0..base.len() {
        for b in a + 1..base.len() {
            if formulas.len() >= cap {
                break 'outer;
            }
            formulas.push(base[a].clone().or(base[b].clone()));
        }
    }
    Pool {
        formulas,
        deltas: rep_literals,
    }
}

fn single(i: AgentId) -> Coalition {
    Coalition::singleton(i)
}

fn inst(schema: Schema, bindings: String, formula: Formula) -> AxiomInstance {
    AxiomInstance {
        schema,
        bindings,
        formula,
    }
}

/// Every instance of `schema` over the space, metavariables from `pool`.
pub fn instantiate(schema: Schema, enc: &Encoder, pool: &Pool) -> Vec<AxiomInstance> {
    let space = enc.space();
    let outcomes = space.outcomes();
    let k = outcomes.len();
    let agents: Vec<AgentId> = space.agent_ids().collect();
    let grand = space.grand_coalition();
    let phis = &pool.formulas;
    let name = |x: usize| outcomes.get(x).clone();
    let out = |x: usize| Formula::out(outcomes.get(x).clone());
    let mut v = Vec::new();
    match schema {
        Schema::Refl => {
            for &i in &agents {
                for x in 0..k {
                    v.push(inst(schema, format!("i={i} x={}", name(x)), Formula::rep(i, name(x), name(x))));
                }
            }
        }
        Schema::AntisymTotal => {
            for &i in &agents {
                for x in 0..k {
                    for y in (0..k).filter(|&y| y != x) {
                        let f = Formula::rep(i, name(x), name(y)).iff(Formula::rep(i, name(y), name(x)).not());
                        v.push(inst(schema, format!("i={i} x={} y={}", name(x), name(y)), f));
                    }
                }
            }
        }
        Schema::Trans => {
            for &i in &agents {
                for x in 0..k {
                    for y in 0..k {
                        for z in 0..k {
                            let f = Formula::rep(i, name(x), name(y))
                                .and(Formula::rep(i, name(y), name(z)))
                                .implies(Formula::rep(i, name(x), name(z)));
                            v.push(inst(schema, format!("i={i} x={} y={} z={}", name(x), name(y), name(z)), f));
                        }
                    }
                }
            }
        }
        Schema::KBox => {
            for &i in &agents {
                let c = single(i);
                for (a, phi) in phis.iter().enumerate() {
                    for (b, psi) in phis.iter().enumerate() {
                        let f = Formula::boxed(c, phi.clone().implies(psi.clone()))
                            .implies(Formula::boxed(c, phi.clone()).implies(Formula::boxed(c, psi.clone())));
                        v.push(inst(schema, format!("i={i} phi=#{a} psi=#{b}"), f));
                    }
                }
            }
        }
        Schema::TBox => {
            for &i in &agents {
                for (a, phi) in phis.iter().enumerate() {
                    let f = Formula::boxed(single(i), phi.clone()).implies(phi.clone());
                    v.push(inst(schema, format!("i={i} phi=#{a}"), f));
                }
            }
        }
        Schema::BBox => {
            for &i in &agents {
                let c = single(i);
                for (a, phi) in phis.iter().enumerate() {
                    let f = phi.clone().implies(Formula::boxed(c, Formula::diamond(c, phi.clone())));
                    v.push(inst(schema, format!("i={i} phi=#{a}"), f));
                }
            }
        }
        Schema::CompUnion => {
            let coalitions: Vec<Coalition> = Coalition::all_subsets(space.agents()).collect();
            for &c1 in &coalitions {
                for &c2 in &coalitions {
                    for (a, phi) in phis.iter().enumerate() {
                        let f = Formula::boxed(c1, Formula::boxed(c2, phi.clone()))
                            .iff(Formula::boxed(c1.union(c2), phi.clone()));
                        v.push(inst(schema, format!("C1={c1} C2={c2} phi=#{a}"), f));
                    }
                }
            }
        }
        Schema::Confl => {
            for &i in &agents {
                for &j in agents.iter().filter(|&&j| j != i) {
                    for (a, phi) in phis.iter().enumerate() {
                        let f = Formula::diamond(single(i), Formula::boxed(single(j), phi.clone()))
                            .implies(Formula::boxed(single(j), Formula::diamond(single(i), phi.clone())));
                        v.push(inst(schema, format!("i={i} j={j} phi=#{a}"), f));
                    }
                }
            }
        }
        Schema::Empty => {
            for (a, phi) in phis.iter().enumerate() {
                let f = Formula::boxed(Coalition::EMPTY, phi.clone()).iff(phi.clone());
                v.push(inst(schema, format!("phi=#{a}"), f));
            }
        }
        Schema::Exclu => {
            for &i in &agents {
                for &j in agents.iter().filter(|&&j| j != i) {
                    for &owner in &agents {
                        for x in 0..k {
                            for y in 0..k {
                                let p = Formula::rep(owner, name(x), name(y));
                                let f = Formula::diamond(single(i), p.clone())
                                    .and(Formula::diamond(single(i), p.clone().not()))
                                    .implies(Formula::boxed(single(j), p.clone()).or(Formula::boxed(single(j), p.clone().not())));
                                v.push(inst(schema, format!("i={i} j={j} p=rep({owner},{},{})", name(x), name(y)), f));
                            }
                        }
                    }
                }
            }
        }
        Schema::Ballot => {
            for &i in &agents {
                for order in space.orders() {
                    let f = Formula::diamond(single(i), ballot_agent(i, order, outcomes));
                    v.push(inst(schema, format!("i={i} order={}", order.display(outcomes)), f));
                }
            }
        }
        Schema::CompAt => {
            let coalitions: Vec<Coalition> = Coalition::all_subsets(space.agents()).collect();
            for (a, d1) in pool.deltas.iter().enumerate() {
                for (b, d2) in pool.deltas.iter().enumerate() {
                    if !d1.is_propositional_rep()
                        || !d2.is_propositional_rep()
                        || d1.controllers().bits() & d2.controllers().bits() != 0
                    {
                        continue;
                    }
                    for &c1 in &coalitions {
                        for &c2 in &coalitions {
                            let f = Formula::diamond(c1, d1.clone())
                                .and(Formula::diamond(c2, d2.clone()))
                                .implies(Formula::diamond(c1.union(c2), d1.clone().and(d2.clone())));
                            v.push(inst(schema, format!("C1={c1} C2={c2} d1=#{a} d2=#{b}"), f));
                        }
                    }
                }
            }
        }
        Schema::Func1 => {
            let f = Formula::disj((0..k).map(|x| out(x).and(Formula::conj((0..k).filter(|&y| y != x).map(|y| out(y).not())))));
            v.push(inst(schema, String::new(), f));
        }
        Schema::Func2 => {
            for s in 0..space.num_states() {
                let b = enc.ballot(s);
                for (a, phi) in phis.iter().enumerate() {
                    let f = b
                        .clone()
                        .and(phi.clone())
                        .implies(Formula::boxed(grand, b.clone().implies(phi.clone())));
                    v.push(inst(schema, format!("ballot={} phi=#{a}", space.format_state(s)), f));
                }
            }
        }
        Schema::Incl => {
            for &i in &agents {
                for (a, phi) in phis.iter().enumerate() {
                    let f = Formula::boxed(grand, phi.clone()).implies(Formula::pref_box(i, phi.clone()));
                    v.push(inst(schema, format!("i={i} phi=#{a}"), f));
                }
            }
        }
        Schema::KPref => {
            for &i in &agents {
                for (a, phi) in phis.iter().enumerate() {
                    for (b, psi) in phis.iter().enumerate() {
                        let f = Formula::pref_box(i, phi.clone().implies(psi.clone()))
                            .implies(Formula::pref_box(i, phi.clone()).implies(Formula::pref_box(i, psi.clone())));
                        v.push(inst(schema, format!("i={i} phi=#{a} psi=#{b}"), f));
                    }
                }
            }
        }
        Schema::FourPref => {
            for &i in &agents {
                for (a, phi) in phis.iter().enumerate() {
                    let f = Formula::pref(i, Formula::pref(i, phi.clone())).implies(Formula::pref(i, phi.clone()));
                    v.push(inst(schema, format!("i={i} phi=#{a}"), f));
                }
            }
        }
        Schema::AntisymPrime => {
            for &i in &agents {
                for s in 0..space.num_states() {
                    for t in 0..space.num_states() {
                        for x in 0..k {
                            for y in (0..k).filter(|&y| y != x) {
                                let f = enc
                                    .ballot(s)
                                    .and(out(x))
                                    .and(Formula::pref(i, enc.ballot(t).and(out(y))))
                                    .implies(Formula::boxed(
                                        grand,
                                        enc.ballot(t).implies(Formula::pref_box(i, enc.ballot(s).not())),
                                    ));
                                v.push(inst(
                                    schema,
                                    format!("i={i} <={} <'={} x={} y={}", space.format_state(s), space.format_state(t), name(x), name(y)),
                                    f,
                                ));
                            }
                        }
                    }
                }
            }
        }
        Schema::TotalPrime => {
            for &i in &agents {
                for s in 0..space.num_states() {
                    for t in 0..space.num_states() {
                        let f = enc.ballot(s).implies(
                            Formula::pref(i, enc.ballot(t))
                                .or(Formula::boxed(grand, enc.ballot(t).implies(Formula::pref(i, enc.ballot(s))))),
                        );
                        v.push(inst(schema, format!("i={i} <={} <'={}", space.format_state(s), space.format_state(t)), f));
                    }
                }
            }
        }
        Schema::UnifPref => {
            for &i in &agents {
                for x in 0..k {
                    for y in 0..k {
                        let f = out(x)
                            .and(Formula::pref(i, out(y)))
                            .implies(enc.better_outcomes(i, x, y));
                        v.push(inst(schema, format!("i={i} x={} y={}", name(x), name(y)), f));
                    }
                }
            }
        }
    }
    v
}

/// The printed readings of the three corrected schemas, named
/// `antisym'-literal`, `total'-literal` and `comp-At-literal`.
/// They are not valid; see the module documentation.
pub fn literal_variants(enc: &Encoder) -> Vec<(&'static str, Vec<Formula>)> {
    let space = enc.space();
    let grand = space.grand_coalition();
    let states = space.num_states();
    let mut antisym = Vec::new();
    let mut total = Vec::new();
    for i in space.agent_ids() {
        for s in 0..states {
            for t in 0..states {
                let (b, b2) = (enc.ballot(s), enc.ballot(t));
                antisym.push(
                    b.clone()
                        .and(Formula::pref(i, b2.clone()))
                        .implies(Formula::boxed(grand, b2.clone().implies(Formula::pref_box(i, b.clone().not())))),
                );
                total.push(
                    b.clone()
                        .and(Formula::pref(i, b2.clone()))
                        .or(Formula::boxed(grand, b2.implies(Formula::pref(i, b)))),
                );
            }
        }
    }
    // δ without a common rep atom, but sharing an agent or using outcome atoms.
    let outcomes = space.outcomes();
    let one = AgentId::new(1);
    let mut comp = Vec::new();
    if outcomes.len() >= 2 {
        let (a, b) = (outcomes.get(0).clone(), outcomes.get(1).clone());
        let c1 = Coalition::singleton(one);
        let pairs = [
            (Formula::rep(one, a.clone(), b.clone()), Formula::rep(one, b.clone(), a.clone())),
            (Formula::out(a.clone()), Formula::out(b.clone())),
        ];
        for (d1, d2) in pairs {
            for c2 in Coalition::all_subsets(space.agents()) {
                comp.push(
                    Formula::diamond(c1, d1.clone())
                        .and(Formula::diamond(c2, d2.clone()))
                        .implies(Formula::diamond(c1.union(c2), d1.clone().and(d2.clone()))),
                );
            }
        }
    }
    vec![("antisym'-literal", antisym), ("total'-literal", total), ("comp-At-literal", comp)]
}

/// First failure of one schema.
#[derive(Clone, Debug)]
pub struct Counterexample {
    /// Position of the model in the checked sequence.
    pub model_index: usize,
    pub model: Option<ScfModel>,
    pub state: usize,
    pub bindings: String,
    pub formula: Formula,
}

#[derive(Clone, Debug)]
pub struct SchemaReport {
    pub schema: String,
    pub instances: usize,
    pub models: usize,
    /// Number of (instance, model) pairs with a falsifying state.
    pub failures: usize,
    pub first: Option<Counterexample>,
}

impl SchemaReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SchemaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<14} instances={:<7} models={:<5} {}",
            self.schema,
            self.instances,
            self.models,
            if self.passed() { "PASS".to_string() } else { format!("FAIL ({} failing instance-model pairs)", self.failures) }
        )?;
        if let Some(c) = &self.first {
            write!(f, "\n    first counterexample: model #{} state {} [{}]", c.model_index, c.state, c.bindings)?;
            if let Some(m) = &c.model {
                let k = m.space().outcomes();
                write!(
                    f,
                    "\n    out = {:?}, truth = {}, state = {}",
                    m.out().map().iter().map(|&x| k.get(x).as_str()).collect::<Vec<_>>(),
                    m.truth().display(k),
                    m.space().format_state(c.state)
                )?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub schemas: Vec<SchemaReport>,
    pub models: usize,
}

impl SoundnessReport {
    pub fn all_passed(&self) -> bool {
        self.schemas.iter().all(SchemaReport::passed)
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.schemas {
            writeln!(f, "{line}")?;
        }
        write!(f, "overall: {}", if self.all_passed() { "PASS" } else { "FAIL" })
    }
}

/// A model to check in, with lookup tables that may have been altered.
pub struct CheckModel {
    pub model: Option<ScfModel>,
    pub tables: ModelTables,
}

impl From<ScfModel> for CheckModel {
    fn from(model: ScfModel) -> Self {
        let tables = ModelTables::new(&model);
        CheckModel {
            model: Some(model),
            tables,
        }
    }
}

impl From<&ScfModel> for CheckModel {
    fn from(model: &ScfModel) -> Self {
        CheckModel::from(model.clone())
    }
}

/// Checks named groups of formulas in every model.
pub fn check_groups<M: Into<CheckModel>>(
    space: &std::sync::Arc<StateSpace>,
    groups: &[(String, Vec<(String, Formula)>)],
    models: impl IntoIterator<Item = M>,
) -> SoundnessReport {
    let programs: Vec<Program> = groups
        .iter()
        .map(|(_, items)| {
            let formulas: Vec<Formula> = items.iter().map(|(_, f)| f.clone()).collect();
            Program::compile(space, &formulas).expect("instances are built over the space")
        })
        .collect();
    let mut reports: Vec<SchemaReport> = groups
        .iter()
        .map(|(name, items)| SchemaReport {
            schema: name.clone(),
            instances: items.len(),
            models: 0,
            failures: 0,
            first: None,
        })
        .collect();
    let mut regs = Vec::new();
    let mut count = 0;
    for (m, model) in models.into_iter().enumerate() {
        let model: CheckModel = model.into();
        count += 1;
        for (g, program) in programs.iter().enumerate() {
            program.run_into(&model.tables, &mut regs);
            let report = &mut reports[g];
            report.models += 1;
            for r in 0..program.num_roots() {
                if let Some(state) = program.root_first_missing_in(&regs, r) {
                    report.failures += 1;
                    if report.first.is_none() {
                        let (bindings, formula) = &groups[g].1[r];
                        report.first = Some(Counterexample {
                            model_index: m,
                            model: model.model.clone(),
                            state,
                            bindings: bindings.clone(),
                            formula: formula.clone(),
                        });
                    }
                }
            }
        }
    }
    SoundnessReport {
        schemas: reports,
        models: count,
    }
}

/// Checks every instance in every model, one report line per schema.
pub fn soundness_check<M: Into<CheckModel>>(
    space: &std::sync::Arc<StateSpace>,
    instances: &[AxiomInstance],
    models: impl IntoIterator<Item = M>,
) -> SoundnessReport {
    let mut groups: Vec<(String, Vec<(String, Formula)>)> = Vec::new();
    for schema in Schema::ALL {
        let items: Vec<(String, Formula)> = instances
            .iter()
            .filter(|i| i.schema == schema)
            .map(|i| (i.bindings.clone(), i.formula.clone()))
            .collect();
        if !items.is_empty() {
            groups.push((schema.name().to_string(), items));
        }
    }
    check_groups(space, &groups, models)
}

/// All instances of all schemas.
pub fn instantiate_all(enc: &Encoder, pool: &Pool) -> Vec<AxiomInstance> {
    Schema::ALL.iter().flat_map(|&s| instantiate(s, enc, pool)).collect()
}

/// Necessitation for `[pref_i]`: whenever a pool formula is valid in a
/// model, so is `[pref_i]φ`. Returns `(checked pairs, first violation)`.
pub fn necessitation_check<'a>(
    space: &std::sync::Arc<StateSpace>,
    pool: &[Formula],
    models: impl IntoIterator<Item = &'a ScfModel>,
) -> (usize, Option<(usize, AgentId, usize)>) {
    let mut formulas = pool.to_vec();
    for i in space.agent_ids() {
        formulas.extend(pool.iter().map(|phi| Formula::pref_box(i, phi.clone())));
    }
    let program = Program::compile(space, &formulas).expect("pool is over the space");
    let mut regs = Vec::new();
    let mut checked = 0;
    for (m, model) in models.into_iter().enumerate() {
        program.run_into(&ModelTables::new(model), &mut regs);
        for (p, _) in pool.iter().enumerate() {
            if !program.root_full_in(&regs, p) {
                continue;
            }
            for (a, i) in space.agent_ids().enumerate() {
                checked += 1;
                if !program.root_full_in(&regs, pool.len() * (a + 1) + p) {
                    return (checked, Some((m, i, p)));
                }
            }
        }
    }
    (checked, None)
}
