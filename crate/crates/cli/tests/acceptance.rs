//! Acceptance suite: one pass/fail line per criterion A1 to A10.
//!
//! Run with `cargo test -p l4-cli --test acceptance -- --nocapture` to see
//! the report.

mod support;

#[path = "../../core/tests/support/annotated.rs"]
mod annotated;
#[path = "../../asp/tests/support/gen.rs"]
mod gen;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use l4_asp::{
    answer_set_models, answer_sets, emit_asp, legal_models, parse_config, parse_term, verify_lemma4, Config,
    LegalModel, ModKind, Modifier,
};
use l4_core::check::{check_assertion, CheckOutcome};
use l4_core::correspond::check_model_correspondence;
use l4_core::enumerate::{enumerate_models, SearchOptions};
use l4_core::error::{LogicError, TransformError};
use l4_core::inversion::inversion_formula;
use l4_core::logic::{assertion_problem, prepare, rules_to_formulas, Inversions};
use l4_core::model::Value;
use l4_core::parser::parse_expr;
use l4_core::printer::print_expr;
use l4_core::transform::RestrictionVariant;
use l4_core::typecheck::TypeEnv;
use l4_core::{parse_module, Expr, ExprKind, Name, RuleModule};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;

/// Wall-clock budget of the random correspondence suite.
const A6_BUDGET: Duration = Duration::from_secs(60);
/// Wall-clock budget of the random soundness suite.
const A9_BUDGET: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(support::goldens::fixtures().join(name)).unwrap()
}

fn module(name: &str) -> RuleModule {
    parse_module(&fixture(name)).unwrap()
}

fn config(name: &str) -> Config {
    parse_config(&fixture(name)).unwrap()
}

fn a1() -> Outcome {
    let err = prepare(&module("speedlimit_original.l4"), RestrictionVariant::ViaPrecondition).unwrap_err();
    let TransformError::Cycle(cycle) = err else { return Err(format!("expected a cycle, got {err}")) };
    let cycle: Vec<&str> = cycle.iter().map(Name::as_str).collect();
    ensure(cycle == ["maxSpCarHighway", "maxSpCarWorkday", "maxSpSportsCar"], || format!("cycle {cycle:?}"))?;

    let e = prepare(&module("speedlimit_repaired.l4"), RestrictionVariant::ViaPrecondition).unwrap();
    let seq: Vec<&str> = e.order.sequence.iter().map(Name::as_str).filter(|n| n.starts_with("maxSp")).collect();
    // three incomparable rules first, then the two restricted ones
    let first: BTreeSet<&str> = seq.iter().take(3).copied().collect();
    ensure(
        first == BTreeSet::from(["maxSpSportsCar'Orig", "maxSpCarHighway'Orig", "maxSpCarWorkday"])
            && seq[3..] == ["maxSpSportsCar", "maxSpCarHighway"],
        || format!("order {seq:?}"),
    )?;
    Ok(format!("cycle {}; order {}", cycle.join(" -> "), seq.join(" < ")))
}

/// Truth of a propositional precondition over class-membership atoms.
fn truth(e: &Expr, atoms: &BTreeMap<&str, bool>) -> bool {
    match &e.kind {
        ExprKind::Bool(b) => *b,
        ExprKind::Not(a) => !truth(a, atoms),
        ExprKind::And(a, b) => truth(a, atoms) && truth(b, atoms),
        ExprKind::Or(a, b) => truth(a, atoms) || truth(b, atoms),
        ExprKind::App(f, _) => match &f.kind {
            ExprKind::Var(p) => atoms[p.as_str()],
            _ => panic!("unexpected atom {e:?}"),
        },
        _ => panic!("unexpected precondition {e:?}"),
    }
}

fn a2() -> Outcome {
    let e = prepare(&module("speedlimit_repaired.l4"), RestrictionVariant::ViaPrecondition).unwrap();
    let pre = |n: &str| e.module.rule(n).unwrap().precond.clone();
    let goldens = [
        ("maxSpCarWorkday", "isCar v && isWorkday d"),
        ("maxSpSportsCar", "isSportsCar v && isHighway r && not (isCar v && isWorkday d)"),
        (
            "maxSpCarHighway",
            "isCar v && isHighway r && not (isSportsCar v && isHighway r && not (isCar v && isWorkday d)) && not (isCar v && isWorkday d)",
        ),
    ];
    for (rule, golden) in goldens {
        let shown = print_expr(&pre(rule));
        ensure(shown == golden, || format!("{rule}: {shown}"))?;
    }
    let mut rows = 0;
    for bits in 0..16u32 {
        let bit = |i: u32| bits >> i & 1 == 1;
        let (car, sports, highway, workday) = (bit(0), bit(1), bit(2), bit(3));
        if sports && !car {
            continue;
        }
        let atoms =
            BTreeMap::from([("isCar", car), ("isSportsCar", sports), ("isHighway", highway), ("isWorkday", workday)]);
        let workday_rule = car && workday;
        let sports_rule = sports && highway && !workday_rule;
        let highway_rule = car && highway && !workday_rule && !sports_rule;
        for (rule, expected) in
            [("maxSpCarWorkday", workday_rule), ("maxSpSportsCar", sports_rule), ("maxSpCarHighway", highway_rule)]
        {
            ensure(truth(&pre(rule), &atoms) == expected, || format!("{rule} at {atoms:?}"))?;
        }
        rows += 1;
    }
    Ok(format!("3 string goldens; truth table agrees on {rows} rows"))
}

fn a3() -> Outcome {
    let e = prepare(&module("speedlimit_repaired.l4"), RestrictionVariant::ViaDerivability).unwrap();
    let decl = e.module.decl("maxSp⁺").ok_or("no maxSp⁺ declaration")?;
    let arity = decl.ty.uncurry().0.len();
    ensure(arity == 5, || format!("maxSp⁺ arity {arity}"))?;
    let hw = e.module.rule("maxSpCarHighway").unwrap();
    let conj: Vec<String> = hw.precond.conjuncts().into_iter().map(print_expr).collect();
    for c in ["not maxSp⁺ maxSpCarWorkday v d r 90", "not maxSp⁺ maxSpSportsCar v d r 320"] {
        ensure(conj.iter().any(|x| x == c), || format!("missing `{c}` in {conj:?}"))?;
    }
    ensure(hw.postcond == parse_expr("maxSp⁺ maxSpCarHighway v d r 130").unwrap(), || "postcondition".into())?;
    Ok("maxSp⁺ arity 5; both negated conjuncts present".into())
}

fn speed_check(file: &str, inversions: Inversions) -> CheckOutcome {
    let mut opts = SearchOptions::with_sizes([("Vehicle", 1), ("Day", 1), ("Road", 1)]);
    opts.ints = Some(BTreeSet::from([90, 130, 320]));
    let e = prepare(&module(file), RestrictionVariant::ViaPrecondition).unwrap();
    let (fs, a) = assertion_problem(&e.module, "maxSpFunctional", inversions).unwrap();
    check_assertion(&fs, &a, &opts).unwrap()
}

fn a4() -> Outcome {
    let valid = speed_check("speedlimit_repaired.l4", Inversions::All);
    ensure(valid == CheckOutcome::Valid, || format!("repaired: {}", valid.label()))?;
    let open = speed_check("speedlimit_repaired.l4", Inversions::Off);
    ensure(matches!(open, CheckOutcome::CounterModel(_)), || format!("no inversions: {}", open.label()))?;
    let orig = speed_check("speedlimit_unannotated.l4", Inversions::All);
    let m = orig.witness().ok_or("unrepaired rules: no countermodel")?;
    let speeds: BTreeSet<&Value> =
        [m.value("instSpeed1", &[]).unwrap(), m.value("instSpeed2", &[]).unwrap()].into_iter().collect();
    ensure(speeds == BTreeSet::from([&Value::Int(90), &Value::Int(130)]), || format!("speeds {speeds:?}"))?;
    Ok("valid at bounds / countermodel / countermodel with speeds 90 and 130".into())
}

fn a5() -> Outcome {
    let m = parse_module("decl P : Boolean").unwrap();
    let inv = inversion_formula(&TypeEnv::new(&m), &m.rules, "P").unwrap();
    ensure(inv == parse_expr("not P").unwrap(), || format!("empty rule set: {}", print_expr(&inv)))?;
    let m = parse_module("decl P : Boolean\nrule <r> if not P then P").unwrap();
    let inv = inversion_formula(&TypeEnv::new(&m), &m.rules, "P").unwrap();
    ensure(inv == parse_expr("P --> not P").unwrap(), || format!("self-negating rule: {}", print_expr(&inv)))?;
    let fs = rules_to_formulas(&m, Inversions::All).unwrap();
    let models = enumerate_models(&fs, &SearchOptions::default()).unwrap();
    ensure(models.is_empty(), || format!("{} models of rule and inversion", models.len()))?;
    Ok("not P; P --> not P; jointly unsatisfiable".into())
}

fn a6() -> Outcome {
    let start = Instant::now();
    let results: Vec<(u64, Result<bool, String>)> = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let src = annotated::random_module(&mut StdRng::seed_from_u64(seed));
            let m = parse_module(&src).unwrap();
            let mut opts = SearchOptions::with_sizes([("A", 1 + seed as usize % 2)]);
            opts.ints = Some(BTreeSet::from([0, 1]));
            let r = match check_model_correspondence(&m, &opts) {
                Ok(rep) if rep.holds() => Ok(true),
                Ok(rep) => {
                    Err(format!("{} + {} violations\n{src}", rep.to_derivability.len(), rep.to_precondition.len()))
                }
                Err(LogicError::Transform(TransformError::Cycle(_))) => Ok(false),
                Err(e) => Err(format!("{e}\n{src}")),
            };
            (seed, r)
        })
        .collect();
    let elapsed = start.elapsed();
    if let Some((seed, Err(e))) = results.iter().find(|(_, r)| r.is_err()) {
        return Err(format!("seed {seed}: {e}"));
    }
    let checked = results.iter().filter(|(_, r)| *r == Ok(true)).count();
    ensure(checked >= 100, || format!("only {checked} of 200 modules are acyclic"))?;
    ensure(elapsed <= A6_BUDGET, || format!("took {elapsed:.1?}"))?;
    Ok(format!("200 modules ({checked} acyclic), 0 violations, {elapsed:.1?}"))
}

fn valid_sets(ms: &[LegalModel]) -> Vec<BTreeSet<u32>> {
    ms.iter().map(LegalModel::valid_ids).collect()
}

fn ids(v: &[u32]) -> BTreeSet<u32> {
    v.iter().copied().collect()
}

fn a7() -> Outcome {
    let bob = config("bob.cfg");
    let expect = |c: &Config, want: Vec<BTreeSet<u32>>, what: &str| -> Result<(), String> {
        let legal = valid_sets(&legal_models(c).unwrap());
        let answers = valid_sets(&answer_set_models(c).unwrap());
        ensure(legal == want && answers == want, || format!("{what}: legal {legal:?}, answer sets {answers:?}"))
    };
    expect(&bob, vec![ids(&[1, 3]), ids(&[2, 3])], "bob")?;
    let n = answer_sets(&emit_asp(&bob)).unwrap().len();
    ensure(n == 2, || format!("{n} answer sets"))?;
    expect(&bob.with_modifier(Modifier::new(ModKind::StrongSubjectTo, 3, 1)).unwrap(), vec![ids(&[2, 3])], "strong")?;
    expect(
        &bob.with_fact(parse_term("extremely_wealthy(bob)").unwrap()).unwrap(),
        vec![ids(&[1, 2, 4])],
        "extremely wealthy",
    )?;
    Ok("{1,3} {2,3}; strong_subject_to(3,1): {2,3}; extremely_wealthy: {1,2,4}".into())
}

fn a8() -> Outcome {
    for f in ["self_strong.cfg", "chain_subject_to.cfg"] {
        let n = legal_models(&config(f)).unwrap().len();
        ensure(n == 0, || format!("{f}: {n} legal models"))?;
    }
    let ms: Vec<String> = legal_models(&config("non_minimal.cfg")).unwrap().iter().map(LegalModel::to_string).collect();
    ensure(
        ms == [
            "{is_legal(a), is_legal(c), legally_valid(1,c), legally_valid(3,a)}",
            "{is_legal(a), legally_valid(3,a)}",
        ],
        || format!("three-rule config: {ms:?}"),
    )?;
    Ok("0 / 0 legal models; three-rule config gives the 2 listed models".into())
}

fn a9() -> Outcome {
    let start = Instant::now();
    let failures: Vec<u64> = (0..500u64)
        .into_par_iter()
        .filter(|seed| {
            let c = gen::random_config(&mut StdRng::seed_from_u64(*seed));
            !verify_lemma4(&c).unwrap().holds()
        })
        .collect();
    let elapsed = start.elapsed();
    ensure(failures.is_empty(), || format!("failing seeds {failures:?}"))?;
    let gap = verify_lemma4(&config("converse_gap.cfg")).unwrap();
    let uncovered: Vec<String> = gap.uncovered.iter().map(LegalModel::to_string).collect();
    ensure(uncovered == ["{is_legal(a), legally_valid(1,a)}"], || format!("uncovered {uncovered:?}"))?;
    ensure(elapsed <= A9_BUDGET, || format!("took {elapsed:.1?}"))?;
    Ok(format!("500 configs, 0 failures, {elapsed:.1?}; converse gap {}", uncovered[0]))
}

fn a10() -> Outcome {
    let cases = support::goldens::cases();
    for (name, args) in &cases {
        support::goldens::check_case(name, args)?;
    }
    Ok(format!("{} goldens identical across runs and thread counts", cases.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
    ];
    let mut failed = Vec::new();
    for (id, f) in criteria {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match r {
            Ok(detail) => println!("{id} PASS {detail}"),
            Err(detail) => {
                println!("{id} FAIL {detail}");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
