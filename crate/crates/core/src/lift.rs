//! Predicate lifting for restriction via derivability: every predicate `P`
//! concluded by some rule becomes `P⁺` with an extra first argument naming the
//! rule that derived it.

use std::collections::BTreeMap;

use crate::error::TransformError;
use crate::expr::{all_names, replace_applications, FreshNames};
use crate::syntax::*;
use crate::typecheck::TypeEnv;

pub const RULENAME_PREFIX: &str = "Rulename_";

pub fn lifted_name(p: &str) -> Name {
    Name::from(format!("{p}⁺"))
}

pub fn rulename_type(p: &str) -> Name {
    Name::from(format!("{RULENAME_PREFIX}{p}"))
}

pub fn is_rulename_type(t: &LType) -> bool {
    matches!(t, LType::Class(n) if n.starts_with(RULENAME_PREFIX))
}

/// Rules whose conclusions take part in lifting: user rules with a body.
fn concluding_rules(m: &RuleModule) -> impl Iterator<Item = &Rule> {
    m.rules.iter().filter(|r| !r.is_system() && !(r.derivation().is_some() && r.has_trivial_body()))
}

/// Predicates concluded by user rules, excluding characteristic predicates,
/// in order of first conclusion, each with the rules concluding it.
pub fn transformable_predicates(m: &RuleModule) -> Result<Vec<(Name, Vec<Name>)>, TransformError> {
    let env = TypeEnv::new(m);
    let mut out: Vec<(Name, Vec<Name>)> = Vec::new();
    for r in concluding_rules(m) {
        let head = r
            .postcond
            .as_application()
            .map(|(h, _)| h.clone())
            .filter(|h| env.symbol(h).is_some() && !r.params.iter().any(|p| &p.name == h))
            .ok_or_else(|| TransformError::NonAtomicConclusion(r.name.clone()))?;
        if env.is_generated(&head) {
            continue;
        }
        match out.iter_mut().find(|(p, _)| *p == head) {
            Some((_, rs)) => rs.push(r.name.clone()),
            None => out.push((head, vec![r.name.clone()])),
        }
    }
    Ok(out)
}

/// Wraps an occurrence as `exists rn: Rulename_P. P⁺ rn args`.
fn existential_occurrence(p: &str, args: Vec<Expr>, avoid: &mut FreshNames) -> Expr {
    let rn = avoid.fresh("rn");
    Expr::exists(
        rn.clone(),
        LType::Class(rulename_type(p)),
        Expr::call(&lifted_name(p), std::iter::once(Expr::var(rn)).chain(args)),
    )
}

/// Rewrites precondition occurrences of lifted predicates. Positive
/// occurrences outside quantifiers, conditionals and equations receive a
/// fresh rule-name variable bound in the rule's `for` list; any other
/// occurrence is wrapped in an existential over the rule names, which keeps
/// the rewrite equivalent regardless of polarity.
fn lift_precondition(
    e: &Expr,
    preds: &BTreeMap<Name, ()>,
    positive: bool,
    top: bool,
    fresh: &mut FreshNames,
    new_params: &mut Vec<Param>,
) -> Expr {
    if let Some((head, args)) = e.as_application() {
        if preds.contains_key(head) {
            let args: Vec<Expr> =
                args.into_iter().map(|a| lift_precondition(a, preds, positive, false, fresh, new_params)).collect();
            if positive && top {
                let rn = fresh.fresh("rn");
                new_params.push(Param::new(rn.clone(), LType::Class(rulename_type(head))));
                return Expr::call(&lifted_name(head), std::iter::once(Expr::var(rn)).chain(args));
            }
            return existential_occurrence(head, args, fresh);
        }
    }
    let mut go = |x: &Expr, pos: bool, t: bool| Box::new(lift_precondition(x, preds, pos, t, fresh, new_params));
    let kind = match &e.kind {
        ExprKind::Not(a) => ExprKind::Not(go(a, !positive, top)),
        ExprKind::And(a, b) => ExprKind::And(go(a, positive, top), go(b, positive, top)),
        ExprKind::Or(a, b) => ExprKind::Or(go(a, positive, top), go(b, positive, top)),
        ExprKind::Implies(a, b) => ExprKind::Implies(go(a, !positive, top), go(b, positive, top)),
        ExprKind::Eq(a, b) => ExprKind::Eq(go(a, positive, false), go(b, positive, false)),
        ExprKind::Cmp(op, a, b) => ExprKind::Cmp(*op, go(a, positive, false), go(b, positive, false)),
        ExprKind::App(a, b) => ExprKind::App(go(a, positive, false), go(b, positive, false)),
        ExprKind::Field(a, f) => ExprKind::Field(go(a, positive, false), f.clone()),
        ExprKind::Ite(c, t, f) => ExprKind::Ite(go(c, positive, false), go(t, positive, false), go(f, positive, false)),
        ExprKind::Lambda(v, t, b) => ExprKind::Lambda(v.clone(), t.clone(), go(b, positive, false)),
        ExprKind::Forall(v, t, b) => ExprKind::Forall(v.clone(), t.clone(), go(b, positive, false)),
        // an occurrence under an existential may use a variable bound there,
        // so it cannot move to the rule's parameter list
        ExprKind::Exists(v, t, b) => ExprKind::Exists(v.clone(), t.clone(), go(b, positive, false)),
        k => k.clone(),
    };
    Expr::new(kind, e.span)
}

/// Rewrites every occurrence of the lifted predicates in a closed formula
/// (assertions) with an existential over the rule names.
pub fn lift_formula(e: &Expr, preds: &[Name]) -> Expr {
    let mut fresh = FreshNames::new(all_names(e));
    let mut out = e.clone();
    for p in preds {
        out = replace_applications(&out, p, &mut |args| existential_occurrence(p, args, &mut fresh));
    }
    out
}

/// Lifts all transformable predicates of the module: declarations become
/// `P⁺ : Rulename_P -> ...`, rule-name enumerations are added, conclusions
/// name their rule and preconditions and assertions refer to `P⁺`.
pub fn lift_predicates(m: &RuleModule) -> Result<RuleModule, TransformError> {
    let preds = transformable_predicates(m)?;
    let mut out = m.clone();
    if preds.is_empty() {
        return Ok(out);
    }
    let set: BTreeMap<Name, ()> = preds.iter().map(|(p, _)| (p.clone(), ())).collect();

    let lift_decl = |d: &FunDecl| {
        let mut d = d.clone();
        let rt = LType::Class(rulename_type(&d.name));
        d.ty = LType::func(rt, d.ty);
        d.name = lifted_name(&d.name);
        d
    };
    for d in out.decls.iter_mut() {
        if set.contains_key(&d.name) {
            *d = lift_decl(d);
        }
    }
    // propositional constants become unary predicates
    let (props, globals): (Vec<FunDecl>, Vec<FunDecl>) = out.globals.drain(..).partition(|g| set.contains_key(&g.name));
    out.globals = globals;
    out.decls.extend(props.iter().map(lift_decl));

    for (p, rules) in &preds {
        out.enums.push(EnumDecl { name: rulename_type(p), elements: rules.clone(), span: Span::default() });
    }

    for r in out.rules.iter_mut() {
        if r.is_system() || (r.derivation().is_some() && r.has_trivial_body()) {
            continue;
        }
        let mut fresh = FreshNames::new(all_names(&r.precond));
        fresh.reserve_all(all_names(&r.postcond).iter());
        fresh.reserve_all(r.params.iter().map(|p| &p.name));
        let mut new_params = Vec::new();
        r.precond = lift_precondition(&r.precond, &set, true, true, &mut fresh, &mut new_params);
        r.params.extend(new_params);
        if let Some((head, args)) = r.postcond.as_application() {
            if set.contains_key(head) {
                let args: Vec<Expr> = args.into_iter().cloned().collect();
                r.postcond = Expr::call(&lifted_name(head), std::iter::once(Expr::var(r.name.clone())).chain(args))
                    .with_span(r.postcond.span);
            }
        }
    }
    let names: Vec<Name> = preds.iter().map(|(p, _)| p.clone()).collect();
    for a in out.assertions.iter_mut() {
        a.formula = lift_formula(&a.formula, &names);
    }
    Ok(out)
}
