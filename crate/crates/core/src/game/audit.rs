use std::fmt;
use std::sync::Arc;

use crate::decision::{check_scf_property_with, DecisionError};
use crate::domain::{scf_as_game_form, ScfTable};
use crate::encodings::{Encoder, PropertyId};
use crate::game::{implements, is_monotonic, is_strategy_proof, SolutionConcept};

/// Four routes to "truth-telling is dominant" for one SCF.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditReport {
    /// `g^F` truthfully DOM-implements `F`.
    pub truthful_dom: bool,
    /// `g^F` DOM-implements `F`.
    pub dom_implements: bool,
    pub monotonic: bool,
    /// `⊨ ρ^F → STRPROOF`, decided by model checking.
    pub strproof_encoding: bool,
}

impl AuditReport {
    pub fn all_agree(&self) -> bool {
        let v = self.truthful_dom;
        self.dom_implements == v && self.monotonic == v && self.strproof_encoding == v
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "truthful-dom-implementation: {}", self.truthful_dom)?;
        writeln!(f, "dom-implementation: {}", self.dom_implements)?;
        writeln!(f, "monotonic: {}", self.monotonic)?;
        writeln!(f, "strproof-encoding: {}", self.strproof_encoding)?;
        write!(f, "agreement: {}", if self.all_agree() { "yes" } else { "NO" })
    }
}

pub fn equivalence_audit(scf: &Arc<ScfTable>) -> Result<AuditReport, DecisionError> {
    equivalence_audit_with(&Encoder::new(scf.space()), scf)
}

pub fn equivalence_audit_with(enc: &Encoder, scf: &Arc<ScfTable>) -> Result<AuditReport, DecisionError> {
    let g = scf_as_game_form(scf);
    let dom_implements = implements(&g, scf, SolutionConcept::Dominant)
        .expect("g^F shares F's space")
        .is_none();
    Ok(AuditReport {
        truthful_dom: is_strategy_proof(scf),
        dom_implements,
        monotonic: is_monotonic(scf),
        strproof_encoding: check_scf_property_with(enc, scf, PropertyId::Strproof)?.holds(),
    })
}
