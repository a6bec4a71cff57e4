//! JSON files for SCFs and models. Rankings are arrays, most preferred first.
//!
//! ```json
//! { "agents": 2, "outcomes": ["a", "b"],
//!   "map": [ { "profile": [["a","b"], ["a","b"]], "outcome": "a" }, ... ],
//!   "true_preferences": [["a","b"], ["b","a"]] }
//! ```
//! `true_preferences` is present only in model files.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{DomainError, LinearOrder, OutcomeSet, Profile, ScfModel, ScfTable, StateSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub profile: Vec<Vec<String>>,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScfFile {
    pub agents: usize,
    pub outcomes: Vec<String>,
    pub map: Vec<MapEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub agents: usize,
    pub outcomes: Vec<String>,
    pub map: Vec<MapEntry>,
    pub true_preferences: Vec<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("no entry for profile {0}")]
    MissingProfile(String),
    #[error("profile {0} is listed more than once")]
    DuplicateProfile(String),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("ranking {0} is not a permutation of the outcomes")]
    NotAPermutation(String),
    #[error("profile {profile} has {found} rankings; expected {expected}")]
    WrongAgentCount { profile: String, expected: usize, found: usize },
    #[error("file is over {found} but {expected} was expected")]
    SpaceMismatch { expected: String, found: String },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

fn show(rankings: &[Vec<String>]) -> String {
    let parts: Vec<String> = rankings.iter().map(|r| format!("[{}]", r.join(","))).collect();
    format!("({})", parts.join(","))
}

fn order(ranking: &[String], outcomes: &OutcomeSet) -> Result<LinearOrder, FileError> {
    if let Some(bad) = ranking.iter().find(|x| outcomes.index_of(x).is_none()) {
        return Err(FileError::UnknownOutcome(bad.clone()));
    }
    LinearOrder::from_names(ranking, outcomes).map_err(|_| FileError::NotAPermutation(format!("[{}]", ranking.join(","))))
}

fn profile(rankings: &[Vec<String>], space: &StateSpace) -> Result<Profile, FileError> {
    if rankings.len() != space.agents() {
        return Err(FileError::WrongAgentCount {
            profile: show(rankings),
            expected: space.agents(),
            found: rankings.len(),
        });
    }
    let orders = rankings
        .iter()
        .map(|r| order(r, space.outcomes()))
        .collect::<Result<_, _>>()?;
    Ok(Profile::new(orders))
}

fn build_table(agents: usize, outcomes: &[String], map: &[MapEntry]) -> Result<ScfTable, FileError> {
    let space = StateSpace::new(agents, OutcomeSet::new(outcomes)?)?;
    let mut table: Vec<Option<usize>> = vec![None; space.num_states()];
    for entry in map {
        let p = profile(&entry.profile, &space)?;
        let x = space
            .outcomes()
            .index_of(&entry.outcome)
            .ok_or_else(|| FileError::UnknownOutcome(entry.outcome.clone()))?;
        let s = space.index_of(&p)?;
        if table[s].replace(x).is_some() {
            return Err(FileError::DuplicateProfile(show(&entry.profile)));
        }
    }
    if let Some(s) = table.iter().position(Option::is_none) {
        return Err(FileError::MissingProfile(space.format_state(s)));
    }
    Ok(ScfTable::new(space, table.into_iter().map(|x| x.expect("checked")).collect())?)
}

impl ScfFile {
    pub fn to_table(&self) -> Result<ScfTable, FileError> {
        build_table(self.agents, &self.outcomes, &self.map)
    }

    pub fn from_table(scf: &ScfTable) -> Self {
        let space = scf.space();
        let k = space.outcomes();
        ScfFile {
            agents: space.agents(),
            outcomes: k.iter().map(|o| o.to_string()).collect(),
            map: (0..space.num_states())
                .map(|s| MapEntry {
                    profile: space
                        .profile(s)
                        .orders()
                        .iter()
                        .map(|o| o.ranking().iter().map(|&x| k.get(x).to_string()).collect())
                        .collect(),
                    outcome: k.get(scf.outcome_at(s)).to_string(),
                })
                .collect(),
        }
    }
}

impl ModelFile {
    pub fn to_model(&self) -> Result<ScfModel, FileError> {
        let table = build_table(self.agents, &self.outcomes, &self.map)?;
        let truth = profile(&self.true_preferences, table.space())?;
        Ok(ScfModel::new(Arc::new(table), truth)?)
    }

    pub fn from_model(model: &ScfModel) -> Self {
        let f = ScfFile::from_table(model.out());
        let k = model.space().outcomes();
        ModelFile {
            agents: f.agents,
            outcomes: f.outcomes,
            map: f.map,
            true_preferences: model
                .truth()
                .orders()
                .iter()
                .map(|o| o.ranking().iter().map(|&x| k.get(x).to_string()).collect())
                .collect(),
        }
    }
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_scf(json: &str) -> Result<ScfTable, FileError> {
    serde_json::from_str::<ScfFile>(json)?.to_table()
}

pub fn parse_model(json: &str) -> Result<ScfModel, FileError> {
    serde_json::from_str::<ModelFile>(json)?.to_model()
}

/// Loads an SCF; model files are accepted too, their truth is ignored.
pub fn load_scf(path: impl AsRef<Path>) -> Result<ScfTable, FileError> {
    parse_scf(&read(path.as_ref())?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ScfModel, FileError> {
    parse_model(&read(path.as_ref())?)
}

/// Loads an SCF and checks it is over `space`.
pub fn load_scf_for(path: impl AsRef<Path>, space: &Arc<StateSpace>) -> Result<ScfTable, FileError> {
    let scf = load_scf(path)?;
    if **scf.space() != **space {
        return Err(FileError::SpaceMismatch {
            expected: describe_space(space),
            found: describe_space(scf.space()),
        });
    }
    // Rebuild over the caller's space so formulas and tables share it.
    Ok(ScfTable::new(space.clone(), scf.map().to_vec())?)
}

pub fn describe_space(space: &StateSpace) -> String {
    let names: Vec<&str> = space.outcomes().iter().map(|o| o.as_str()).collect();
    format!("n={} K={{{}}}", space.agents(), names.join(","))
}

pub fn scf_to_json(scf: &ScfTable) -> String {
    serde_json::to_string_pretty(&ScfFile::from_table(scf)).expect("serializable")
}

pub fn model_to_json(model: &ScfModel) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(model)).expect("serializable")
}
