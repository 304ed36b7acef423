//! Commands over rule configurations and logic programs.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use l4_asp::ground::{ground, herbrand_constants};
use l4_asp::{
    answer_sets as solve, emit_asp, legal_models, minimal_only, parse_config, parse_program, verify_lemma4, AspError,
    Config, LegalModel, Term,
};
use serde_json::json;

use crate::output::{self, report, verdict, Failure, Status};

fn asp_failure(e: AspError) -> Failure {
    if e.is_cap() {
        Failure::Cap(e.to_string())
    } else {
        Failure::input(e)
    }
}

/// Reads a configuration, grounding schematic rules over the constants it
/// mentions.
fn load(path: &Path) -> Result<Config, Failure> {
    let src = output::read(path)?;
    let c = parse_config(&src).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if c.is_ground() {
        return Ok(c);
    }
    ground(&c, &herbrand_constants(&c)).map_err(|e| asp_failure(e.into()))
}

pub fn emit(path: &Path, out: Option<&Path>) -> Result<Status, Failure> {
    let c = load(path)?;
    output::emit(&emit_asp(&c).to_string(), out)?;
    Ok(Status::Ok)
}

fn numbered(label: &str, items: &[String]) -> String {
    let mut s = String::new();
    for (i, m) in items.iter().enumerate() {
        writeln!(s, "{label} {}: {m}", i + 1).unwrap();
    }
    s
}

fn plural(n: usize, what: &str) -> String {
    format!("{n} {what}{}", if n == 1 { "" } else { "s" })
}

pub fn legal(path: &Path, minimal: bool, json: bool) -> Result<Status, Failure> {
    let c = load(path)?;
    let mut models = legal_models(&c).map_err(asp_failure)?;
    if minimal {
        models = minimal_only(&models);
    }
    if json {
        output::print(&report(
            "legal-models",
            json!({ "minimal_only": minimal, "count": models.len(), "models": models }),
        ));
    } else {
        let shown: Vec<String> = models.iter().map(LegalModel::to_string).collect();
        let mut s = numbered("legal model", &shown);
        writeln!(s, "{}", plural(models.len(), "legal model")).unwrap();
        output::print(&s);
    }
    Ok(Status::Ok)
}

fn braces(atoms: &BTreeSet<Term>) -> String {
    let items: Vec<String> = atoms.iter().map(Term::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn answer_sets(path: &Path, project: bool, json: bool) -> Result<Status, Failure> {
    let program = if path.extension().is_some_and(|e| e == "lp") {
        let src = output::read(path)?;
        parse_program(&src).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    } else {
        emit_asp(&load(path)?)
    };
    let mut sets = solve(&program).map_err(|e| asp_failure(e.into()))?;
    if project {
        sets = sets.iter().map(|s| LegalModel::project(s).atoms()).collect();
        sets.sort_by_key(|s| LegalModel::project(s));
    }
    if json {
        let shown: Vec<Vec<String>> = sets.iter().map(|s| s.iter().map(Term::to_string).collect()).collect();
        output::print(&report(
            "answer-sets",
            json!({ "projected": project, "count": sets.len(), "answer_sets": shown }),
        ));
    } else {
        let shown: Vec<String> = sets.iter().map(braces).collect();
        let mut s = numbered("answer set", &shown);
        writeln!(s, "{}", plural(sets.len(), "answer set")).unwrap();
        output::print(&s);
    }
    Ok(Status::Ok)
}

pub fn lemma4(path: &Path, json: bool) -> Result<Status, Failure> {
    let c = load(path)?;
    let rep = verify_lemma4(&c).map_err(asp_failure)?;
    if json {
        output::print(&report("verify-lemma4", json!({ "holds": rep.holds(), "report": rep })));
    } else {
        let mut s = String::new();
        for (i, a) in rep.answer_sets.iter().enumerate() {
            let status = if a.violations.is_empty() { "legal model" } else { "NOT a legal model" };
            writeln!(s, "answer set {}: {} {status}", i + 1, a.projection).unwrap();
            for v in &a.violations {
                writeln!(s, "  {v}").unwrap();
            }
        }
        writeln!(s, "{}", plural(rep.legal_models.len(), "legal model")).unwrap();
        writeln!(s, "uncovered legal models: {}", rep.uncovered.len()).unwrap();
        for m in &rep.uncovered {
            writeln!(s, "  {m}").unwrap();
        }
        let text =
            if rep.holds() { "every answer set is a legal model" } else { "some answer set is not a legal model" };
        writeln!(s, "{}", verdict(text, rep.holds())).unwrap();
        output::print(&s);
    }
    Ok(Status::from_holds(rep.holds()))
}
