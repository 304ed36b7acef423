//! Assertion checking by bounded model search.

use std::fmt;

use crate::enumerate::{enumerate_models, SearchOptions};
use crate::error::LogicError;
use crate::logic::FormulaSet;
use crate::model::Interpretation;
use crate::syntax::*;

/// Result of checking an assertion. Validity and unsatisfiability hold only
/// at the search bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Valid,
    CounterModel(Interpretation),
    Satisfiable(Interpretation),
    Unsatisfiable,
}

impl CheckOutcome {
    /// Whether the proof obligation holds.
    pub fn holds(&self) -> bool {
        matches!(self, CheckOutcome::Valid | CheckOutcome::Satisfiable(_))
    }

    pub fn witness(&self) -> Option<&Interpretation> {
        match self {
            CheckOutcome::CounterModel(m) | CheckOutcome::Satisfiable(m) => Some(m),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CheckOutcome::Valid => "valid at bounds",
            CheckOutcome::CounterModel(_) => "countermodel",
            CheckOutcome::Satisfiable(_) => "satisfiable",
            CheckOutcome::Unsatisfiable => "unsatisfiable at bounds",
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.label())?;
        if let Some(m) = self.witness() {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// The search problem of an assertion: the rules with the negated assertion
/// in validity mode, or with the assertion itself in satisfiability mode.
pub fn assertion_formulas(fs: &FormulaSet, a: &Assertion) -> FormulaSet {
    let goal = match a.mode {
        AssertMode::Valid => Expr::not(a.formula.clone()),
        AssertMode::Satisfiable => a.formula.clone(),
    };
    fs.with_formula(format!("assertion:{}", a.name), goal)
}

/// Checks `a` against the rule formulas `fs` (already restricted to the
/// assertion's active rule set).
pub fn check_assertion(fs: &FormulaSet, a: &Assertion, opts: &SearchOptions) -> Result<CheckOutcome, LogicError> {
    let problem = assertion_formulas(fs, a);
    let mut opts = opts.clone();
    opts.limit = Some(1);
    let found = enumerate_models(&problem, &opts)?.into_iter().next();
    Ok(match (a.mode, found) {
        (AssertMode::Valid, None) => CheckOutcome::Valid,
        (AssertMode::Valid, Some(m)) => CheckOutcome::CounterModel(m),
        (AssertMode::Satisfiable, Some(m)) => CheckOutcome::Satisfiable(m),
        (AssertMode::Satisfiable, None) => CheckOutcome::Unsatisfiable,
    })
}
