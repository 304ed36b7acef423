//! Commands over rule modules: parsing, modifier elimination, inversion,
//! SMT-LIB emission and bounded checking.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use l4_core::check::{check_assertion, CheckOutcome};
use l4_core::correspond::check_model_correspondence;
use l4_core::enumerate::SearchOptions;
use l4_core::inversion::{check_syntactic_monotonicity, inversion_formula};
use l4_core::logic::{assertion_problem, prepare, Inversions};
use l4_core::printer::{print_annotation, print_expr, print_rule, print_type};
use l4_core::simplify::simplify;
use l4_core::smtlib::emit_smtlib;
use l4_core::transform::{Elimination, RestrictionVariant};
use l4_core::typecheck::{inclusion_pairs, TypeEnv};
use l4_core::wellformed::{check_well_formed, Severity};
use l4_core::{parse_module, print_module, LogicError, Name, RuleModule};
use serde_json::{json, Value};

use crate::output::{self, report, verdict, Failure, Status};
use crate::{Bounds, Variant};

impl From<Variant> for RestrictionVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Precond => RestrictionVariant::ViaPrecondition,
            Variant::Deriv => RestrictionVariant::ViaDerivability,
        }
    }
}

fn logic_failure(e: LogicError) -> Failure {
    match e {
        LogicError::ResourceCap(_) => Failure::Cap(e.to_string()),
        e => Failure::input(e),
    }
}

/// Parses `path` and rejects modules with well-formedness errors. Warnings
/// go to stderr.
fn load(path: &Path) -> Result<RuleModule, Failure> {
    let src = output::read(path)?;
    let m = parse_module(&src).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))?;
    let diags = check_well_formed(&m);
    let mut errors = Vec::new();
    for d in &diags {
        match d.severity {
            Severity::Warning => eprintln!("{}:{d}", path.display()),
            Severity::Error => errors.push(format!("{}:{d}", path.display())),
        }
    }
    if errors.is_empty() {
        Ok(m)
    } else {
        Err(Failure::Input(errors.join("\n")))
    }
}

fn eliminate(m: &RuleModule, variant: Variant) -> Result<Elimination, Failure> {
    prepare(m, variant.into()).map_err(Failure::input)
}

fn options(b: &Bounds) -> SearchOptions {
    let mut o = SearchOptions::with_sizes(b.sizes.iter().map(|(s, n)| (s.as_str(), *n)));
    o.ints = b.ints.as_ref().map(|v| v.iter().copied().collect::<BTreeSet<i64>>());
    if let Some(n) = b.budget {
        o.budget = n;
    }
    o
}

fn module_json(m: &RuleModule) -> Value {
    let params = |ps: &[l4_core::Param]| -> Vec<Value> {
        ps.iter().map(|p| json!({ "name": p.name.as_str(), "type": print_type(&p.ty) })).collect()
    };
    json!({
        "classes": m.classes.iter().map(|c| json!({
            "name": c.name.as_str(),
            "parent": c.parent.as_str(),
            "attributes": params(&c.attributes),
        })).collect::<Vec<_>>(),
        "decls": m.decls.iter().chain(&m.globals).map(|d| json!({
            "name": d.name.as_str(),
            "type": print_type(&d.ty),
        })).collect::<Vec<_>>(),
        "rules": m.rules.iter().map(|r| json!({
            "name": r.name.as_str(),
            "annotation": r.annotation.as_ref().map(print_annotation),
            "params": params(&r.params),
            "precondition": print_expr(&r.precond),
            "postcondition": print_expr(&r.postcond),
        })).collect::<Vec<_>>(),
        "assertions": m.assertions.iter().map(|a| json!({
            "name": a.name.as_str(),
            "mode": a.mode,
            "formula": print_expr(&a.formula),
        })).collect::<Vec<_>>(),
    })
}

pub fn parse(path: &Path, json: bool) -> Result<Status, Failure> {
    let m = load(path)?;
    if json {
        output::print(&report("parse", json!({ "module": module_json(&m) })));
    } else {
        output::print(&print_module(&m));
    }
    Ok(Status::Ok)
}

fn names(ns: &[Name]) -> Vec<&str> {
    ns.iter().map(Name::as_str).collect()
}

pub fn transform(path: &Path, variant: Variant, emit_l4: bool, json: bool, simp: bool) -> Result<Status, Failure> {
    let m = load(path)?;
    let mut e = eliminate(&m, variant)?;
    if simp {
        let inclusions = inclusion_pairs(&e.module);
        for r in &mut e.module.rules {
            r.precond = simplify(&r.precond, &inclusions);
        }
    }
    let user: Vec<&l4_core::Rule> = e.module.rules.iter().filter(|r| !r.is_system()).collect();
    // class inclusion rules carry no modifiers and only clutter the order
    let system: BTreeSet<&Name> = e.module.rules.iter().filter(|r| r.is_system()).map(|r| &r.name).collect();
    let order: Vec<&str> = e.order.sequence.iter().filter(|n| !system.contains(n)).map(Name::as_str).collect();
    if json {
        let v = json!({
            "variant": RestrictionVariant::from(variant),
            "order": order,
            "edges": e.order.edges.iter().map(|(a, b)| [a.as_str(), b.as_str()]).collect::<Vec<_>>(),
            "trace": e.trace,
            "rules": user.iter().map(|r| json!({
                "name": r.name.as_str(),
                "precondition": print_expr(&r.precond),
                "postcondition": print_expr(&r.postcond),
            })).collect::<Vec<_>>(),
        });
        output::print(&report("transform", v));
    } else if emit_l4 {
        output::print(&print_module(&e.module));
    } else {
        let mut s = String::new();
        writeln!(s, "order: {}", order.join(" < ")).unwrap();
        for r in user {
            writeln!(s, "{}", print_rule(r)).unwrap();
        }
        output::print(&s);
    }
    Ok(Status::Ok)
}

pub fn invert(path: &Path, predicate: &str) -> Result<Status, Failure> {
    let m = load(path)?;
    let e = eliminate(&m, Variant::Precond)?;
    let env = TypeEnv::new(&e.module);
    if env.symbol(predicate).is_none() {
        return Err(Failure::Input(format!("unknown predicate `{predicate}`")));
    }
    let f = inversion_formula(&env, &e.module.rules, predicate).map_err(Failure::input)?;
    let mono = check_syntactic_monotonicity(&e.module.rules, predicate);
    let mut s = format!("{}\n", print_expr(&f));
    if mono.monotone {
        s.push_str("monotone: yes\n");
    } else {
        s.push_str("monotone: no\n");
        for o in &mono.offending {
            writeln!(s, "  rule {}: {} ({:?})", o.rule, o.occurrence, o.polarity).unwrap();
        }
    }
    output::print(&s);
    Ok(Status::Ok)
}

fn problem(
    path: &Path,
    assertion: &str,
    variant: Variant,
    no_inversions: bool,
) -> Result<(l4_core::logic::FormulaSet, l4_core::Assertion), Failure> {
    let m = load(path)?;
    let e = eliminate(&m, variant)?;
    let inv = if no_inversions { Inversions::Off } else { Inversions::All };
    assertion_problem(&e.module, assertion, inv).map_err(logic_failure)
}

pub fn emit_smt(
    path: &Path,
    assertion: &str,
    out: Option<&Path>,
    variant: Variant,
    no_inversions: bool,
) -> Result<Status, Failure> {
    let (fs, a) = problem(path, assertion, variant, no_inversions)?;
    let text = emit_smtlib(&fs, &a).map_err(logic_failure)?;
    output::emit(&text, out)?;
    Ok(Status::Ok)
}

pub fn check(
    path: &Path,
    assertion: &str,
    bounds: &Bounds,
    variant: Variant,
    no_inversions: bool,
    json: bool,
) -> Result<Status, Failure> {
    let (fs, a) = problem(path, assertion, variant, no_inversions)?;
    let outcome = check_assertion(&fs, &a, &options(bounds)).map_err(logic_failure)?;
    if json {
        output::print(&report(
            "check",
            json!({
                "assertion": assertion,
                "outcome": outcome.label(),
                "holds": outcome.holds(),
                "model": outcome.witness(),
            }),
        ));
    } else {
        let mut s = verdict(outcome.label(), outcome.holds());
        s.push('\n');
        if let Some(m) = outcome.witness() {
            s.push_str(&m.to_string());
        }
        output::print(&s);
    }
    Ok(Status::from_holds(matches!(outcome, CheckOutcome::Valid | CheckOutcome::Satisfiable(_))))
}

pub fn correspond(path: &Path, bounds: &Bounds, json: bool) -> Result<Status, Failure> {
    let m = load(path)?;
    let rep = check_model_correspondence(&m, &options(bounds)).map_err(logic_failure)?;
    if json {
        output::print(&report("correspond", json!({ "holds": rep.holds(), "report": rep })));
    } else {
        let mut s = String::new();
        writeln!(s, "precondition-variant models: {}", rep.precondition_models).unwrap();
        writeln!(s, "derivability-variant models: {}", rep.derivability_models).unwrap();
        writeln!(s, "violations precondition -> derivability: {}", rep.to_derivability.len()).unwrap();
        writeln!(s, "violations derivability -> precondition: {}", rep.to_precondition.len()).unwrap();
        writeln!(s, "projections needing search: {}", rep.projection_fallbacks).unwrap();
        for v in rep.to_derivability.iter().chain(&rep.to_precondition) {
            writeln!(s, "failed formulas: {}", names(&v.failed).join(", ")).unwrap();
            write!(s, "{}", v.model).unwrap();
        }
        let text = if rep.holds() { "correspondence holds at bounds" } else { "correspondence fails" };
        writeln!(s, "{}", verdict(text, rep.holds())).unwrap();
        output::print(&s);
    }
    Ok(Status::from_holds(rep.holds()))
}
