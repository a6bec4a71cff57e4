//! Command-line front end. Each command returns its output and exit code:
//! 0 when the property holds (valid, satisfiable, passes), 1 when it does
//! not, 2 on usage or input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::axioms::{default_pool, instantiate_all, soundness_check, DEFAULT_POOL_CAP};
use crate::decision::{self, model_count, EnumerationBudget, Pointed, Status, Verdict};
use crate::domain::{scf_as_game_form, ScfModel, StateSpace};
use crate::encodings::{Encoder, PropertyId, RhoForm};
use crate::files::{self, FileError};
use crate::game::{self, SolutionConcept};
use crate::logic::{self, Formula};
use crate::parser::{ParseContext, ParseError};

#[derive(Parser, Debug)]
#[command(name = "scfl", version, about = "Model checker for a modal logic of social choice functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a formula at every state of a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        json: bool,
    },
    /// Check a property (citsov, nodict, br(i), dom, mon, strproof) of an SCF.
    Property {
        #[arg(long)]
        scf: PathBuf,
        /// Property name.
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide satisfiability over all models of a space.
    Sat {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        json: bool,
    },
    /// Decide validity over all models of a space.
    Valid {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        json: bool,
    },
    /// Print the characteristic formula of an SCF.
    Encode {
        #[arg(long)]
        scf: PathBuf,
        #[arg(long, default_value = "diamond")]
        form: String,
        #[arg(long)]
        json: bool,
    },
    /// List the equilibria of the direct mechanism of a model's SCF.
    Equilibria {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "ne")]
        concept: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare four characterizations of strategy-proofness.
    Audit {
        #[arg(long)]
        scf: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Model-check every axiom instance over a space.
    Axioms {
        #[command(flatten)]
        space: SpaceArgs,
        /// Seed for sampling models when the space is too large to enumerate.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
pub struct SpaceArgs {
    #[arg(long)]
    pub agents: usize,
    /// Comma-separated outcome names.
    #[arg(long, value_delimiter = ',')]
    pub outcomes: Vec<String>,
}

#[derive(Args, Debug)]
pub struct FormulaArg {
    /// Formula text (alternatively give it positionally).
    #[arg(long = "formula")]
    pub flag: Option<String>,
    #[arg(value_name = "FORMULA")]
    pub positional: Option<String>,
}

impl FormulaArg {
    fn text(&self) -> Result<&str, Failure> {
        match (&self.flag, &self.positional) {
            (Some(f), None) | (None, Some(f)) => Ok(f),
            (Some(_), Some(_)) => Err(Failure::usage("give the formula either with --formula or positionally, not both")),
            (None, None) => Err(Failure::usage("a formula is required")),
        }
    }
}

/// Text output and exit code of a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, holds: bool) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: if holds { 0 } else { 1 },
        }
    }
}

struct Failure(String);

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure(msg.into())
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure(format!("error: {e}"))
    }
}

impl From<decision::DecisionError> for Failure {
    fn from(e: decision::DecisionError) -> Self {
        Failure(format!("error: {e}"))
    }
}

impl From<logic::LogicError> for Failure {
    fn from(e: logic::LogicError) -> Self {
        Failure(format!("error: {e}"))
    }
}

impl From<crate::domain::DomainError> for Failure {
    fn from(e: crate::domain::DomainError) -> Self {
        Failure(format!("error: {e}"))
    }
}

fn parse_failure(e: ParseError, text: &str) -> Failure {
    Failure(e.render(text))
}

/// Parses arguments (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

pub fn run(command: Command) -> Outcome {
    let result = match command {
        Command::Check { model, formula, json } => cmd_check(&model, &formula, json),
        Command::Property { scf, name, json } => cmd_property(&scf, &name, json),
        Command::Sat {
            space,
            formula,
            budget,
            json,
        } => cmd_decide(&space, &formula, budget, json, true),
        Command::Valid {
            space,
            formula,
            budget,
            json,
        } => cmd_decide(&space, &formula, budget, json, false),
        Command::Encode { scf, form, json } => cmd_encode(&scf, &form, json),
        Command::Equilibria { model, concept, json } => cmd_equilibria(&model, &concept, json),
        Command::Audit { scf, json } => cmd_audit(&scf, json),
        Command::Axioms {
            space,
            seed,
            budget,
            json,
        } => cmd_axioms(&space, seed, budget, json),
    };
    result.unwrap_or_else(|Failure(msg)| Outcome {
        stdout: String::new(),
        stderr: if msg.ends_with('\n') { msg } else { msg + "\n" },
        code: 2,
    })
}

fn json_out(v: Value, holds: bool) -> Result<Outcome, Failure> {
    Ok(Outcome::ok(serde_json::to_string_pretty(&v).expect("serializable") + "\n", holds))
}

fn loader_context(space: &Arc<StateSpace>, base: Option<&Path>) -> ParseContext {
    let base = base.map(Path::to_path_buf);
    ParseContext::new(space).with_loader(Box::new(move |path: &str, space: &Arc<StateSpace>| {
        let p = Path::new(path);
        let resolved = match (&base, p.is_relative()) {
            (Some(b), true) if !p.exists() => b.join(p),
            _ => p.to_path_buf(),
        };
        files::load_scf_for(resolved, space).map_err(|e| e.to_string())
    }))
}

fn parse_formula(ctx: &ParseContext, text: &str) -> Result<Formula, Failure> {
    ctx.parse(text).map_err(|e| parse_failure(e, text))
}

fn outcome_name(space: &StateSpace, x: usize) -> &str {
    space.outcomes().get(x).as_str()
}

fn describe_model(model: &ScfModel) -> String {
    let space = model.space();
    let mut s = String::new();
    let _ = writeln!(s, "  truth: {}", model.truth().display(space.outcomes()));
    for st in 0..space.num_states() {
        let _ = writeln!(s, "  out{} = {}", space.format_state(st), outcome_name(space, model.outcome_at(st)));
    }
    s
}

fn model_json(model: &ScfModel) -> Value {
    serde_json::to_value(files::ModelFile::from_model(model)).expect("serializable")
}

fn pointed_json(p: &Pointed) -> Value {
    json!({
        "model": model_json(&p.model),
        "state": p.model.space().format_state(p.state),
    })
}

fn cmd_check(model_path: &Path, formula: &FormulaArg, json: bool) -> Result<Outcome, Failure> {
    let text = formula.text()?;
    let model = files::load_model(model_path)?;
    let space = model.space().clone();
    let ctx = loader_context(&space, model_path.parent());
    let phi = parse_formula(&ctx, text)?;
    let set = logic::truth_set(&model, &phi)?;
    let valid = set.is_full();
    if json {
        let rows: Vec<Value> = (0..space.num_states())
            .map(|s| {
                json!({
                    "state": space.format_state(s),
                    "outcome": outcome_name(&space, model.outcome_at(s)),
                    "value": set.contains(s),
                })
            })
            .collect();
        return json_out(json!({"valid": valid, "states": rows, "true_count": set.count()}), valid);
    }
    let width = (0..space.num_states())
        .map(|s| space.format_state(s).len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  outcome  value", "state");
    for s in 0..space.num_states() {
        let _ = writeln!(
            out,
            "{:<width$}  {:<7}  {}",
            space.format_state(s),
            outcome_name(&space, model.outcome_at(s)),
            if set.contains(s) { "T" } else { "F" }
        );
    }
    if valid {
        let _ = writeln!(out, "VALID in model ({} states)", space.num_states());
    } else {
        let _ = writeln!(
            out,
            "INVALID in model: false at {} of {} states",
            space.num_states() - set.count(),
            space.num_states()
        );
    }
    Ok(Outcome::ok(out, valid))
}

fn cmd_property(scf_path: &Path, name: &str, json: bool) -> Result<Outcome, Failure> {
    let prop: PropertyId = name.parse().map_err(Failure::usage)?;
    let scf = Arc::new(files::load_scf(scf_path)?);
    let space = scf.space().clone();
    if let PropertyId::Br(i) = prop {
        space.check_agent(i)?;
    }
    let verdict = decision::check_scf_property(&scf, prop)?;
    let holds = verdict.holds();
    let mut notes: Vec<String> = Vec::new();
    match prop {
        PropertyId::Citsov => {
            for x in game::unreachable_outcomes(&scf) {
                notes.push(format!("outcome {} is unreachable", outcome_name(&space, x)));
            }
        }
        PropertyId::Nodict => {
            if let Some(d) = game::dictator(&scf) {
                notes.push(format!("dictator {d}"));
            }
        }
        PropertyId::Mon => {
            if let Some(v) = game::monotonicity_violation(&scf) {
                notes.push(format!(
                    "{} = {} but {} = {}",
                    space.format_state(v.before),
                    outcome_name(&space, v.outcome),
                    space.format_state(v.after),
                    outcome_name(&space, scf.outcome_at(v.after))
                ));
            }
        }
        PropertyId::Strproof => {
            if let Some(f) = game::strategy_proofness_failure(&scf) {
                notes.push(f.describe(&scf_as_game_form(&scf)));
            }
        }
        PropertyId::Br(_) | PropertyId::Dom => {}
    }
    if json {
        return json_out(
            json!({
                "property": prop.to_string(),
                "holds": holds,
                "counterexample": verdict.counterexample.as_ref().map(pointed_json),
                "notes": notes,
            }),
            holds,
        );
    }
    let mut out = format!("{}: {}\n", prop, if holds { "PASS" } else { "FAIL" });
    for n in &notes {
        let _ = writeln!(out, "  {n}");
    }
    if let Some(c) = &verdict.counterexample {
        let _ = writeln!(
            out,
            "  counterexample: true preferences {} at profile {}",
            c.model.truth().display(space.outcomes()),
            space.format_state(c.state)
        );
    }
    Ok(Outcome::ok(out, holds))
}

fn make_space(args: &SpaceArgs) -> Result<Arc<StateSpace>, Failure> {
    Ok(StateSpace::with_names(args.agents, &args.outcomes)?)
}

fn budget(limit: Option<u128>) -> Result<EnumerationBudget, Failure> {
    let d = EnumerationBudget::default();
    match limit {
        Some(m) => Ok(EnumerationBudget::new(m, d.max_states)?),
        None => Ok(d),
    }
}

fn render_verdict(v: &Verdict, out: &mut String) {
    let _ = writeln!(out, "{} ({} models checked)", v.status, v.models_checked);
    let (label, p) = match (&v.witness, &v.counterexample) {
        (Some(w), _) => ("witness", w),
        (_, Some(c)) => ("counterexample", c),
        _ => return,
    };
    let _ = writeln!(out, "{label} state: {}", p.model.space().format_state(p.state));
    out.push_str(&describe_model(&p.model));
}

fn cmd_decide(args: &SpaceArgs, formula: &FormulaArg, limit: Option<u128>, json: bool, sat: bool) -> Result<Outcome, Failure> {
    let text = formula.text()?;
    let space = make_space(args)?;
    let ctx = loader_context(&space, None);
    let phi = parse_formula(&ctx, text)?;
    let budget = budget(limit)?;
    let v = if sat {
        decision::satisfiable(&space, &phi, budget)?
    } else {
        decision::valid(&space, &phi, budget)?
    };
    let holds = matches!(v.status, Status::Satisfiable | Status::Valid);
    if json {
        return json_out(
            json!({
                "status": v.status.to_string(),
                "models_checked": v.models_checked.to_string(),
                "witness": v.witness.as_ref().map(pointed_json),
                "counterexample": v.counterexample.as_ref().map(pointed_json),
            }),
            holds,
        );
    }
    let mut out = String::new();
    render_verdict(&v, &mut out);
    Ok(Outcome::ok(out, holds))
}

fn cmd_encode(scf_path: &Path, form: &str, json: bool) -> Result<Outcome, Failure> {
    let form: RhoForm = form.parse().map_err(Failure::usage)?;
    let scf = files::load_scf(scf_path)?;
    let enc = Encoder::new(scf.space());
    let text = crate::parser::print(&enc.rho(&scf, form));
    if json {
        return json_out(json!({"form": format!("{form:?}").to_lowercase(), "formula": text}), true);
    }
    Ok(Outcome::ok(text + "\n", true))
}

fn cmd_equilibria(model_path: &Path, concept: &str, json: bool) -> Result<Outcome, Failure> {
    let sc: SolutionConcept = concept.parse().map_err(Failure::usage)?;
    let model = files::load_model(model_path)?;
    let g = scf_as_game_form(model.out());
    let eqs = game::solution_set(&g, model.truth(), sc);
    let space = model.space();
    if json {
        let list: Vec<Value> = eqs
            .iter()
            .map(|&a| json!({"actions": g.format_actions(a), "outcome": outcome_name(space, g.outcome(a))}))
            .collect();
        return json_out(json!({"concept": sc.to_string(), "count": eqs.len(), "equilibria": list}), true);
    }
    let mut out = format!(
        "{} equilibria under true preferences {}: {}\n",
        sc,
        model.truth().display(space.outcomes()),
        eqs.len()
    );
    for &a in &eqs {
        let _ = writeln!(out, "  {} -> {}", g.format_actions(a), outcome_name(space, g.outcome(a)));
    }
    Ok(Outcome::ok(out, true))
}

fn cmd_audit(scf_path: &Path, json: bool) -> Result<Outcome, Failure> {
    let scf = Arc::new(files::load_scf(scf_path)?);
    let report = game::equivalence_audit(&scf)?;
    let agree = report.all_agree();
    if json {
        return json_out(
            json!({
                "truthful_dom_implementation": report.truthful_dom,
                "dom_implementation": report.dom_implements,
                "monotonic": report.monotonic,
                "strproof_encoding": report.strproof_encoding,
                "agreement": agree,
            }),
            agree,
        );
    }
    Ok(Outcome::ok(format!("{report}\n"), agree))
}

/// Number of random out functions sampled when a space cannot be enumerated.
pub const SAMPLED_OUT_FUNCTIONS: usize = 28;

fn cmd_axioms(args: &SpaceArgs, seed: u64, limit: Option<u128>, json: bool) -> Result<Outcome, Failure> {
    let space = make_space(args)?;
    let budget = budget(limit)?;
    let enc = Encoder::new(&space);
    let pool = default_pool(&space, DEFAULT_POOL_CAP);
    let instances = instantiate_all(&enc, &pool);
    let enumerable = model_count(&space).is_some_and(|c| c <= budget.max_models);
    let (report, how) = if enumerable {
        let models = decision::enumerate_models(&space, budget)?;
        (soundness_check(&space, &instances, models.iter()), "all models".to_string())
    } else {
        let models = decision::sample_models(&space, SAMPLED_OUT_FUNCTIONS, seed);
        (
            soundness_check(&space, &instances, models.iter()),
            format!("{SAMPLED_OUT_FUNCTIONS} sampled out functions x all truths, seed {seed}"),
        )
    };
    let pass = report.all_passed();
    if json {
        let lines: Vec<Value> = report
            .schemas
            .iter()
            .map(|r| json!({"schema": r.schema, "instances": r.instances, "models": r.models, "pass": r.passed(), "failures": r.failures}))
            .collect();
        return json_out(json!({"models": report.models, "selection": how, "schemas": lines, "pass": pass}), pass);
    }
    Ok(Outcome::ok(format!("models: {} ({how}), pool: {} formulas\n{report}\n", report.models, pool.formulas.len()), pass))
}
