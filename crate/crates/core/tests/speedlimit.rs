use std::collections::BTreeSet;

use l4_core::check::{check_assertion, CheckOutcome};
use l4_core::enumerate::SearchOptions;
use l4_core::error::TransformError;
use l4_core::logic::{assertion_problem, prepare, Inversions};
use l4_core::model::Value;
use l4_core::parser::parse_expr;
use l4_core::printer::print_expr;
use l4_core::transform::RestrictionVariant;
use l4_core::{parse_module, Name, RuleModule};

fn load(name: &str) -> RuleModule {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_module(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn opts() -> SearchOptions {
    let mut o = SearchOptions::with_sizes([("Vehicle", 1), ("Day", 1), ("Road", 1)]);
    o.ints = Some(BTreeSet::from([90, 130, 320]));
    o
}

fn check(m: &RuleModule, variant: RestrictionVariant, inversions: Inversions) -> CheckOutcome {
    let e = prepare(m, variant).unwrap();
    let (fs, a) = assertion_problem(&e.module, "maxSpFunctional", inversions).unwrap();
    check_assertion(&fs, &a, &opts()).unwrap()
}

#[test]
fn original_annotations_cycle() {
    let err = prepare(&load("speedlimit_original.l4"), RestrictionVariant::ViaPrecondition).unwrap_err();
    let TransformError::Cycle(c) = err else { panic!("{err:?}") };
    let c: Vec<&str> = c.iter().map(Name::as_str).collect();
    assert_eq!(c, ["maxSpCarHighway", "maxSpCarWorkday", "maxSpSportsCar"]);
}

#[test]
fn repaired_order() {
    let e = prepare(&load("speedlimit_repaired.l4"), RestrictionVariant::ViaPrecondition).unwrap();
    let user: Vec<&str> = e.order.sequence.iter().map(Name::as_str).filter(|n| n.starts_with("maxSp")).collect();
    assert_eq!(
        user,
        ["maxSpCarHighway'Orig", "maxSpCarWorkday", "maxSpSportsCar'Orig", "maxSpSportsCar", "maxSpCarHighway"]
    );
}

#[test]
fn precondition_expansion_strings() {
    let e = prepare(&load("speedlimit_repaired.l4"), RestrictionVariant::ViaPrecondition).unwrap();
    let pre = |n: &str| print_expr(&e.module.rule(n).unwrap().precond);
    assert_eq!(pre("maxSpSportsCar"), "isSportsCar v && isHighway r && not (isCar v && isWorkday d)");
    assert_eq!(
        pre("maxSpCarHighway"),
        "isCar v && isHighway r && not (isSportsCar v && isHighway r && not (isCar v && isWorkday d)) && not (isCar v && isWorkday d)"
    );
    assert_eq!(pre("maxSpCarWorkday"), "isCar v && isWorkday d");
}

#[test]
fn derivability_expansion() {
    let e = prepare(&load("speedlimit_repaired.l4"), RestrictionVariant::ViaDerivability).unwrap();
    let hw = e.module.rule("maxSpCarHighway").unwrap();
    let conj: Vec<String> = hw.precond.conjuncts().into_iter().map(print_expr).collect();
    assert!(conj.contains(&"not maxSp⁺ maxSpCarWorkday v d r 90".to_string()), "{conj:?}");
    assert!(conj.contains(&"not maxSp⁺ maxSpSportsCar v d r 320".to_string()), "{conj:?}");
    assert_eq!(hw.postcond, parse_expr("maxSp⁺ maxSpCarHighway v d r 130").unwrap());
    let decl = e.module.decl("maxSp⁺").unwrap();
    assert_eq!(decl.ty.uncurry().0.len(), 5);
}

#[test]
fn functionality_outcomes() {
    assert_eq!(
        check(&load("speedlimit_repaired.l4"), RestrictionVariant::ViaPrecondition, Inversions::All),
        CheckOutcome::Valid
    );
    assert!(matches!(
        check(&load("speedlimit_repaired.l4"), RestrictionVariant::ViaPrecondition, Inversions::Off),
        CheckOutcome::CounterModel(_)
    ));
    let out = check(&load("speedlimit_unannotated.l4"), RestrictionVariant::ViaPrecondition, Inversions::All);
    let m = out.witness().expect("countermodel");
    let speeds: BTreeSet<&Value> =
        [m.value("instSpeed1", &[]).unwrap(), m.value("instSpeed2", &[]).unwrap()].into_iter().collect();
    assert_eq!(speeds, BTreeSet::from([&Value::Int(90), &Value::Int(130)]));
}
