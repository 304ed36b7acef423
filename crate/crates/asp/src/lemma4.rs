//! Cross-validation of the ASP encoding against the legal-model axioms:
//! every answer set must project to a legal model. The converse fails in
//! general, so legal models missed by every answer set are reported rather
//! than treated as errors.

use serde::Serialize;

use crate::config::Config;
use crate::error::AspError;
use crate::legal::{check_legal_model, legal_models, LegalModel, Violation};
use crate::program::emit_asp;
use crate::solve::answer_sets;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnswerSetCheck {
    pub projection: LegalModel,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma4Report {
    pub answer_sets: Vec<AnswerSetCheck>,
    pub legal_models: Vec<LegalModel>,
    /// Legal models that are not the projection of any answer set.
    pub uncovered: Vec<LegalModel>,
}

impl Lemma4Report {
    pub fn holds(&self) -> bool {
        self.answer_sets.iter().all(|a| a.violations.is_empty())
    }
}

/// Projections of the answer sets of the encoding of `c`, sorted like legal
/// models.
pub fn answer_set_models(c: &Config) -> Result<Vec<LegalModel>, AspError> {
    c.require_ground()?;
    let mut out: Vec<LegalModel> = answer_sets(&emit_asp(c))?.iter().map(LegalModel::project).collect();
    out.sort();
    Ok(out)
}

pub fn verify_lemma4(c: &Config) -> Result<Lemma4Report, AspError> {
    let projections = answer_set_models(c)?;
    let models = legal_models(c)?;
    let uncovered = models.iter().filter(|m| !projections.contains(m)).cloned().collect();
    let answer_sets = projections
        .into_iter()
        .map(|p| AnswerSetCheck { violations: check_legal_model(c, &p), projection: p })
        .collect();
    Ok(Lemma4Report { answer_sets, legal_models: models, uncovered })
}
