//! Normalized rules, inversion formulas and the syntactic monotonicity check.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::TransformError;
use crate::expr::{all_names, close_exists, close_forall, free_vars, substitute, visit, FreshNames};
use crate::printer::print_expr;
use crate::syntax::*;
use crate::typecheck::{characteristic_predicate, TypeEnv};

/// A rule `forall x1..xn. Pre(x1..xn) --> P x1 .. xn` over distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedRule {
    pub name: Name,
    pub params: Vec<Param>,
    pub precond: Expr,
    pub predicate: Name,
}

impl NormalizedRule {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn conclusion(&self) -> Expr {
        Expr::call(&self.predicate, self.params.iter().map(|p| Expr::var(p.name.clone())))
    }

    pub fn to_rule(&self) -> Rule {
        Rule::new(self.name.clone(), self.params.clone(), self.precond.clone(), self.conclusion())
    }
}

/// Domain types of the first `n` arguments of `p`.
fn domain(env: &TypeEnv, p: &str, n: usize) -> Option<Vec<LType>> {
    let ty = env.symbol(p)?;
    let (args, _) = ty.uncurry();
    (args.len() >= n).then(|| args[..n].iter().map(|t| (*t).clone()).collect())
}

/// Brings a rule concluding an atom into normalized form: expressions and
/// repeated variables in the conclusion become fresh variables constrained by
/// equations, parameters typed below the predicate's domain get a
/// characteristic-predicate guard, and parameters missing from the conclusion
/// are existentially quantified in the precondition.
pub fn normalize_rule(env: &TypeEnv, r: &Rule) -> Result<NormalizedRule, TransformError> {
    let non_atomic = || TransformError::NonAtomicConclusion(r.name.clone());
    let (head, args) = r.postcond.as_application().ok_or_else(non_atomic)?;
    if r.params.iter().any(|p| &p.name == head) {
        return Err(non_atomic());
    }
    let dom = domain(env, head, args.len()).ok_or_else(non_atomic)?;

    let mut fresh = FreshNames::new(all_names(&r.precond).into_iter().chain(all_names(&r.postcond)));
    fresh.reserve_all(r.params.iter().map(|p| &p.name));
    let mut params = Vec::new();
    let mut eqs = Vec::new();
    let mut guards = Vec::new();
    for (i, a) in args.iter().enumerate() {
        let param = a
            .as_var()
            .and_then(|v| r.params.iter().find(|p| &p.name == v))
            .filter(|p| !params.iter().any(|q: &Param| q.name == p.name));
        match param {
            Some(p) => {
                if let (LType::Class(c), LType::Class(d)) = (&p.ty, &dom[i]) {
                    if c != d && env.is_class(c) {
                        guards.push(Expr::call(&characteristic_predicate(c), [Expr::var(p.name.clone())]));
                    }
                }
                params.push(Param::new(p.name.clone(), dom[i].clone()));
            }
            None => {
                let x = fresh.fresh(&format!("x{}", i + 1));
                eqs.push(Expr::eq(Expr::var(x.clone()), (*a).clone()));
                params.push(Param::new(x, dom[i].clone()));
            }
        }
    }
    let hidden: Vec<(Name, LType)> = r
        .params
        .iter()
        .filter(|p| !params.iter().any(|q| q.name == p.name))
        .map(|p| (p.name.clone(), p.ty.clone()))
        .collect();
    let mut parts = Vec::new();
    if !r.precond.is_true() {
        parts.push(r.precond.clone());
    }
    parts.extend(eqs);
    let body = Expr::conj(parts);
    let body = close_exists(&hidden, body);
    let precond = if guards.is_empty() {
        body
    } else if body.is_true() {
        Expr::conj(guards)
    } else {
        Expr::conj(std::iter::once(body).chain(guards))
    };
    Ok(NormalizedRule { name: r.name.clone(), params, precond, predicate: head.clone() })
}

fn mentions(e: &Expr, p: &str) -> bool {
    free_vars(e).iter().any(|v| v.as_str() == p)
}

/// The rules concluding `p`, normalized. A rule mentioning `p` in its
/// conclusion other than as the head of an atom is an error.
pub fn defining_rules(env: &TypeEnv, rules: &[Rule], p: &str) -> Result<Vec<NormalizedRule>, TransformError> {
    let mut out = Vec::new();
    for r in rules {
        match r.postcond.as_application() {
            Some((h, args)) if h.as_str() == p => {
                if args.iter().any(|a| mentions(a, p)) {
                    return Err(TransformError::NonAtomicConclusion(r.name.clone()));
                }
                out.push(normalize_rule(env, r)?);
            }
            _ if mentions(&r.postcond, p) => return Err(TransformError::NonAtomicConclusion(r.name.clone())),
            _ => {}
        }
    }
    Ok(out)
}

/// `forall x1..xn. P x1..xn --> Pre_1 || .. || Pre_k` over the normalized
/// preconditions of the rules concluding `p`; `forall x. not P x` if there
/// are none.
pub fn inversion_formula(env: &TypeEnv, rules: &[Rule], p: &str) -> Result<Expr, TransformError> {
    let defs = defining_rules(env, rules, p)?;
    let params: Vec<(Name, LType)> = match defs.first() {
        Some(d) => d.params.iter().map(|q| (q.name.clone(), q.ty.clone())).collect(),
        None => {
            let ty = env.symbol(p).cloned().unwrap_or(LType::Boolean);
            let (args, _) = ty.uncurry();
            args.iter().enumerate().map(|(i, t)| (Name::from(format!("x{}", i + 1)), (*t).clone())).collect()
        }
    };
    let atom = Expr::call(p, params.iter().map(|(n, _)| Expr::var(n.clone())));
    if defs.is_empty() {
        return Ok(close_forall(&params, Expr::not(atom)));
    }
    let disjuncts = defs.iter().map(|d| {
        let renaming: BTreeMap<Name, Expr> = d
            .params
            .iter()
            .zip(&params)
            .filter(|(a, (b, _))| &a.name != b)
            .map(|(a, (b, _))| (a.name.clone(), Expr::var(b.clone())))
            .collect();
        substitute(&d.precond, &renaming)
    });
    Ok(close_forall(&params, Expr::implies(atom, Expr::disj(disjuncts))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Mixed,
}

impl Polarity {
    fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            Polarity::Mixed => Polarity::Mixed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub rule: Name,
    pub occurrence: String,
    pub polarity: Polarity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub predicate: Name,
    pub monotone: bool,
    pub offending: Vec<Occurrence>,
}

/// Occurrences of `p` in `e` with their polarity. Negation and implication
/// antecedents flip polarity; equations, conditions and arguments of other
/// symbols make it mixed.
pub fn occurrences(e: &Expr, p: &str) -> Vec<(Expr, Polarity)> {
    let mut out = Vec::new();
    walk(e, p, Polarity::Positive, &mut Vec::new(), &mut out);
    out
}

fn walk(e: &Expr, p: &str, pol: Polarity, bound: &mut Vec<Name>, out: &mut Vec<(Expr, Polarity)>) {
    if let Some((head, args)) = e.as_application() {
        if head.as_str() == p && !bound.contains(head) {
            out.push((e.clone(), pol));
            for a in args {
                walk(a, p, Polarity::Mixed, bound, out);
            }
            return;
        }
    }
    match &e.kind {
        ExprKind::Not(a) => walk(a, p, pol.flip(), bound, out),
        ExprKind::And(a, b) | ExprKind::Or(a, b) => {
            walk(a, p, pol, bound, out);
            walk(b, p, pol, bound, out);
        }
        ExprKind::Implies(a, b) => {
            walk(a, p, pol.flip(), bound, out);
            walk(b, p, pol, bound, out);
        }
        ExprKind::Eq(a, b) | ExprKind::Cmp(_, a, b) | ExprKind::App(a, b) => {
            walk(a, p, Polarity::Mixed, bound, out);
            walk(b, p, Polarity::Mixed, bound, out);
        }
        ExprKind::Field(a, _) => walk(a, p, Polarity::Mixed, bound, out),
        ExprKind::Ite(c, t, f) => {
            walk(c, p, Polarity::Mixed, bound, out);
            walk(t, p, pol, bound, out);
            walk(f, p, pol, bound, out);
        }
        ExprKind::Forall(v, _, b) | ExprKind::Exists(v, _, b) | ExprKind::Lambda(v, _, b) => {
            bound.push(v.clone());
            let inner = if matches!(e.kind, ExprKind::Lambda(..)) { Polarity::Mixed } else { pol };
            walk(b, p, inner, bound, out);
            bound.pop();
        }
        _ => {}
    }
}

/// Checks that `p` occurs only positively in the preconditions of the rules
/// concluding it.
pub fn check_syntactic_monotonicity(rules: &[Rule], p: &str) -> MonotonicityReport {
    let mut offending = Vec::new();
    for r in rules {
        let concludes = r.postcond.as_application().is_some_and(|(h, _)| h.as_str() == p);
        if !concludes {
            continue;
        }
        for (occ, pol) in occurrences(&r.precond, p) {
            if pol != Polarity::Positive {
                offending.push(Occurrence { rule: r.name.clone(), occurrence: print_expr(&occ), polarity: pol });
            }
        }
    }
    MonotonicityReport { predicate: Name::from(p), monotone: offending.is_empty(), offending }
}

/// Counts the atoms of `e` for diagnostics.
pub fn atom_count(e: &Expr) -> usize {
    let mut n = 0;
    visit(e, &mut |x| {
        if x.as_application().is_some() {
            n += 1;
        }
    });
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_expr, parse_module};

    const SPEED: &str = "class Vehicle\nclass Car extends Vehicle\nclass Day\nclass Workday extends Day\nclass Road
decl maxSp : Vehicle -> Day -> Road -> Integer -> Boolean
decl P : Vehicle -> Boolean
decl Q : Vehicle -> Day -> Boolean
rule <w> for v: Vehicle, d: Day, r: Road if isCar v && isWorkday d then maxSp v d r 90
rule <e> for x: Vehicle, y: Day if Q x y then P x
rule <g> for c: Car if true then P c";

    fn setup() -> (TypeEnv, RuleModule) {
        let m = parse_module(SPEED).unwrap();
        (TypeEnv::new(&m), m)
    }

    #[test]
    fn expression_in_conclusion_becomes_equation() {
        let (env, m) = setup();
        let n = normalize_rule(&env, m.rule("w").unwrap()).unwrap();
        let names: Vec<&str> = n.params.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["v", "d", "r", "x4"]);
        assert_eq!(n.precond, parse_expr("isCar v && isWorkday d && x4 == 90").unwrap());
    }

    #[test]
    fn hidden_parameter_becomes_existential() {
        let (env, m) = setup();
        let n = normalize_rule(&env, m.rule("e").unwrap()).unwrap();
        assert_eq!(n.params, vec![Param::new("x", LType::class("Vehicle"))]);
        assert_eq!(n.precond, parse_expr("exists y: Day. Q x y").unwrap());
    }

    #[test]
    fn subclass_parameter_gets_guard() {
        let (env, m) = setup();
        let n = normalize_rule(&env, m.rule("g").unwrap()).unwrap();
        assert_eq!(n.params, vec![Param::new("c", LType::class("Vehicle"))]);
        assert_eq!(n.precond, parse_expr("isCar c").unwrap());
    }

    #[test]
    fn normalized_rule_is_fixed_point() {
        let (env, m) = setup();
        let n = normalize_rule(&env, m.rule("w").unwrap()).unwrap();
        assert_eq!(normalize_rule(&env, &n.to_rule()).unwrap(), n);
    }

    #[test]
    fn closed_world_inversion() {
        let m = parse_module("decl P : Boolean").unwrap();
        let env = TypeEnv::new(&m);
        assert_eq!(inversion_formula(&env, &[], "P").unwrap(), parse_expr("not P").unwrap());
    }

    #[test]
    fn self_negating_rule_inverts_to_negation() {
        let m = parse_module("decl P : Boolean\nrule <r> if not P then P").unwrap();
        let env = TypeEnv::new(&m);
        assert_eq!(inversion_formula(&env, &m.rules, "P").unwrap(), parse_expr("P --> not P").unwrap());
        let rep = check_syntactic_monotonicity(&m.rules, "P");
        assert!(!rep.monotone);
        assert_eq!(rep.offending.len(), 1);
    }

    #[test]
    fn even_negations_are_positive() {
        let m = parse_module("decl P : Boolean\ndecl Q : Boolean\nrule <r> if not (not P && Q) then P\nrule <s> if not (not P && Q) then Q").unwrap();
        assert!(check_syntactic_monotonicity(&m.rules, "P").monotone);
        assert!(!check_syntactic_monotonicity(&m.rules, "Q").monotone);
        let m = parse_module("decl P : Boolean\nrule <r> if P then P").unwrap();
        assert!(check_syntactic_monotonicity(&m.rules, "P").monotone);
    }
}
