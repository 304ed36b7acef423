//! Modifier elimination: `despite` becomes `subjectTo` on the other rule,
//! `subjectTo` splits a rule into its source and a derived rule, and derived
//! rules are evaluated in dependency order under one of two restriction
//! semantics.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{TransformError, TypeError};
use crate::expr::substitute;
use crate::lift::{is_rulename_type, lift_predicates};
use crate::printer::{print_expr, print_transform, print_type};
use crate::syntax::*;
use crate::typecheck::TypeEnv;

/// Suffix of the source half of a split rule.
pub const ORIG_SUFFIX: &str = "'Orig";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RestrictionVariant {
    /// Overridden when the overriding rule's precondition holds.
    #[serde(rename = "precond")]
    ViaPrecondition,
    /// Overridden when the overriding rule's conclusion is derivable.
    #[serde(rename = "deriv")]
    ViaDerivability,
}

fn rule_map(rules: &[Rule]) -> BTreeMap<&Name, &Rule> {
    rules.iter().map(|r| (&r.name, r)).collect()
}

/// Replaces every `r1 despite r2` by `r2 subjectTo r1`. New subjectTo entries
/// go in front of the rule's existing ones, in rule order.
pub fn despite_elim(rules: &[Rule]) -> Result<Vec<Rule>, TransformError> {
    let names = rule_map(rules);
    let mut gained: BTreeMap<Name, Vec<Name>> = BTreeMap::new();
    for r in rules {
        for d in r.despite() {
            if !names.contains_key(d) {
                return Err(TransformError::UnresolvedRule { name: d.clone(), referenced_by: r.name.clone() });
            }
            let list = gained.entry(d.clone()).or_default();
            if !list.contains(&r.name) {
                list.push(r.name.clone());
            }
        }
    }
    let mut out = Vec::with_capacity(rules.len());
    for r in rules {
        let mut r = r.clone();
        let added = gained.remove(&r.name).unwrap_or_default();
        let existing: Vec<Name> = r.subject_to().to_vec();
        match &r.annotation {
            None | Some(RuleAnnotation::Restrict { .. }) => {}
            Some(_) if added.is_empty() => {
                out.push(r);
                continue;
            }
            Some(_) => {
                return Err(TransformError::InvalidAnnotation {
                    rule: r.name.clone(),
                    msg: format!("cannot add `subjectTo: {}` to a rule with another annotation kind", added[0]),
                })
            }
        }
        let mut subject_to = added;
        for s in existing {
            if !subject_to.contains(&s) {
                subject_to.push(s);
            }
        }
        r.annotation = if subject_to.is_empty() {
            None
        } else {
            Some(RuleAnnotation::Restrict { subject_to, despite: Vec::new() })
        };
        out.push(r);
    }
    Ok(out)
}

/// Splits each rule `r` with `subjectTo [r2..rn]` into `r'Orig {source}` and
/// a header-only `r` derived by `restrictSubjectTo r'Orig [r2..rn]`.
pub fn subject_to_elim(rules: &[Rule]) -> Result<Vec<Rule>, TransformError> {
    let names = rule_map(rules);
    let mut out = Vec::with_capacity(rules.len());
    for r in rules {
        if let Some(n) = r.despite().first() {
            return Err(TransformError::InvalidAnnotation {
                rule: r.name.clone(),
                msg: format!("`despite: {n}` must be eliminated before subjectTo elimination"),
            });
        }
        let subject_to = r.subject_to();
        if subject_to.is_empty() {
            let mut r = r.clone();
            if matches!(r.annotation, Some(RuleAnnotation::Restrict { .. })) {
                r.annotation = None;
            }
            out.push(r);
            continue;
        }
        for s in subject_to {
            if !names.contains_key(s) {
                return Err(TransformError::UnresolvedRule { name: s.clone(), referenced_by: r.name.clone() });
            }
        }
        let orig_name = Name::from(format!("{}{ORIG_SUFFIX}", r.name));
        if names.contains_key(&orig_name) {
            return Err(TransformError::NameCollision(orig_name));
        }
        let mut source = r.clone();
        source.name = orig_name.clone();
        source.annotation = Some(RuleAnnotation::Source);
        let mut derived = Rule::derived(
            r.name.clone(),
            TransformExpr::RestrictSubjectTo { target: orig_name, overriders: subject_to.to_vec() },
        );
        derived.span = r.span;
        out.push(source);
        out.push(derived);
    }
    Ok(out)
}

/// The dependency relation between rules and a deterministic linearization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleOrder {
    /// `(r, r')` means `r` appears in the defining expression of `r'`.
    pub edges: BTreeSet<(Name, Name)>,
    pub sequence: Vec<Name>,
}

/// Topologically orders rules by their transformer dependencies, breaking
/// ties lexicographically. A cycle is reported starting at its smallest name.
pub fn rule_order(rules: &[Rule]) -> Result<RuleOrder, TransformError> {
    let names: BTreeSet<&Name> = rules.iter().map(|r| &r.name).collect();
    let mut edges = BTreeSet::new();
    for r in rules {
        if let Some(t) = r.derivation() {
            for dep in t.referenced_rules() {
                if !names.contains(dep) {
                    return Err(TransformError::UnresolvedRule { name: dep.clone(), referenced_by: r.name.clone() });
                }
                edges.insert((dep.clone(), r.name.clone()));
            }
        }
    }
    let mut indegree: BTreeMap<&Name, usize> = names.iter().map(|n| (*n, 0)).collect();
    let mut succ: BTreeMap<&Name, Vec<&Name>> = BTreeMap::new();
    for (a, b) in &edges {
        *indegree.get_mut(b).unwrap() += 1;
        succ.entry(a).or_default().push(b);
    }
    let mut ready: BTreeSet<&Name> = indegree.iter().filter(|(_, d)| **d == 0).map(|(n, _)| *n).collect();
    let mut sequence = Vec::new();
    while let Some(n) = ready.pop_first() {
        sequence.push(n.clone());
        for s in succ.get(n).into_iter().flatten() {
            let d = indegree.get_mut(s).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.insert(s);
            }
        }
    }
    if sequence.len() < names.len() {
        let done: BTreeSet<&Name> = sequence.iter().collect();
        let remaining: BTreeSet<&Name> = names.iter().copied().filter(|n| !done.contains(n)).collect();
        return Err(TransformError::Cycle(find_cycle(&remaining, &edges)));
    }
    Ok(RuleOrder { edges, sequence })
}

fn find_cycle(nodes: &BTreeSet<&Name>, edges: &BTreeSet<(Name, Name)>) -> Vec<Name> {
    // Kahn leaves exactly the nodes with a remaining predecessor, so walking
    // predecessors from any of them must revisit a node.
    let pred = |n: &Name| {
        edges
            .iter()
            .filter(|(a, b)| b == n && nodes.contains(a))
            .map(|(a, _)| a)
            .min()
            .expect("remaining node has a remaining predecessor")
    };
    let mut path: Vec<&Name> = vec![nodes.iter().next().unwrap()];
    loop {
        let prev = pred(path.last().unwrap());
        if let Some(pos) = path.iter().position(|p| *p == prev) {
            let mut cycle: Vec<Name> = path[pos..].iter().rev().map(|n| (*n).clone()).collect();
            let min = cycle.iter().enumerate().min_by_key(|(_, n)| *n).map(|(i, _)| i).unwrap();
            cycle.rotate_left(min);
            return cycle;
        }
        path.push(prev);
    }
}

/// Parameters that make up the interface: all of them, except the rule-name
/// variables introduced by predicate lifting.
fn interface_params(r: &Rule, variant: RestrictionVariant) -> Vec<&Param> {
    r.params.iter().filter(|p| variant == RestrictionVariant::ViaPrecondition || !is_rulename_type(&p.ty)).collect()
}

/// Renames `o`'s interface parameters to `r1`'s, positionally, after checking
/// that both interfaces agree.
fn align(r1: &Rule, o: &Rule, variant: RestrictionVariant) -> Result<BTreeMap<Name, Expr>, TransformError> {
    let pr = interface_params(r1, variant);
    let po = interface_params(o, variant);
    let same = pr.len() == po.len() && pr.iter().zip(&po).all(|(a, b)| a.ty == b.ty);
    if !same {
        return Err(TransformError::InterfaceMismatch {
            rule: o.name.clone(),
            target: r1.name.clone(),
            expected: pr.iter().map(|p| print_type(&p.ty)).collect(),
            actual: po.iter().map(|p| print_type(&p.ty)).collect(),
        });
    }
    Ok(po
        .iter()
        .zip(&pr)
        .filter(|(a, b)| a.name != b.name)
        .map(|(a, b)| (a.name.clone(), Expr::var(b.name.clone())))
        .collect())
}

fn restrict(r1: &Rule, overriders: &[&Rule], variant: RestrictionVariant) -> Result<Rule, TransformError> {
    let mut out = r1.clone();
    for o in overriders {
        let renaming = align(r1, o, variant)?;
        // A lifted conclusion carries a rule-name constant, never a rule-name
        // variable, so the interface renaming covers all its variables.
        let blocked = match variant {
            RestrictionVariant::ViaPrecondition => &o.precond,
            RestrictionVariant::ViaDerivability => &o.postcond,
        };
        let blocked = substitute(blocked, &renaming);
        out.precond = Expr::and(out.precond, Expr::not(blocked));
    }
    Ok(out)
}

/// `restrictSubjectTo r1 [o1..ok]` adding the negated preconditions of the
/// overriders, folded left.
pub fn restrict_subject_to_precond(r1: &Rule, overriders: &[&Rule]) -> Result<Rule, TransformError> {
    restrict(r1, overriders, RestrictionVariant::ViaPrecondition)
}

/// `restrictSubjectTo r1 [o1..ok]` adding the negated (lifted) conclusions of
/// the overriders, folded left.
pub fn restrict_subject_to_deriv(r1: &Rule, overriders: &[&Rule]) -> Result<Rule, TransformError> {
    restrict(r1, overriders, RestrictionVariant::ViaDerivability)
}

/// `remap r [y: S ..] [x := e ..]`: new parameters, simultaneous substitution.
pub fn remap(env: &TypeEnv, r: &Rule, params: &[Param], subst: &[(Name, Expr)]) -> Result<Rule, TransformError> {
    let err = |msg: String| TransformError::Remap { rule: r.name.clone(), msg };
    let mut map = BTreeMap::new();
    for (v, e) in subst {
        let Some(p) = r.params.iter().find(|p| &p.name == v) else {
            return Err(err(format!("`{v}` is not a parameter of the rule")));
        };
        if map.insert(v.clone(), e.clone()).is_some() {
            return Err(err(format!("parameter `{v}` substituted twice")));
        }
        let mut scope = params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect();
        let t = env.type_of(&mut scope, e)?;
        if !env.subtype(&t, &p.ty)? {
            return Err(TransformError::Type(TypeError::Mismatch {
                span: e.span,
                context: format!("substitution for `{v}`"),
                expected: print_type(&p.ty),
                actual: print_type(&t),
            }));
        }
    }
    if let Some(p) = r.params.iter().find(|p| !map.contains_key(&p.name)) {
        return Err(err(format!("missing substitution for parameter `{}`", p.name)));
    }
    let mut out = r.clone();
    out.annotation = None;
    out.params = params.to_vec();
    out.precond = substitute(&r.precond, &map);
    out.postcond = substitute(&r.postcond, &map);
    Ok(out)
}

/// One evaluated derived rule, for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: Name,
    pub definition: String,
    pub precondition: String,
}

/// Evaluates all derived rules in dependency order. Source rules are dropped
/// and transformer annotations removed; system rules keep their marker.
pub fn eval_derived(
    env: &TypeEnv,
    rules: &[Rule],
    variant: RestrictionVariant,
) -> Result<(Vec<Rule>, RuleOrder, Vec<TraceStep>), TransformError> {
    let order = rule_order(rules)?;
    let by_name = rule_map(rules);
    let mut resolved: BTreeMap<Name, Rule> = BTreeMap::new();
    let mut trace = Vec::new();
    for n in &order.sequence {
        let r = by_name[n];
        let value = match r.derivation() {
            None => r.clone(),
            Some(t) => {
                let mut v = match t {
                    TransformExpr::RestrictSubjectTo { target, overriders } => {
                        let os: Vec<&Rule> = overriders.iter().map(|o| &resolved[o]).collect();
                        restrict(&resolved[target], &os, variant)?
                    }
                    TransformExpr::Remap { target, params, subst } => remap(env, &resolved[target], params, subst)?,
                };
                v.name = r.name.clone();
                v.span = r.span;
                trace.push(TraceStep {
                    rule: r.name.clone(),
                    definition: print_transform(t),
                    precondition: print_expr(&v.precond),
                });
                v
            }
        };
        resolved.insert(n.clone(), value);
    }
    let out = rules
        .iter()
        .filter(|r| !r.is_source())
        .map(|r| {
            let mut v = resolved.remove(&r.name).unwrap();
            if !v.is_system() {
                v.annotation = None;
            }
            v
        })
        .collect();
    Ok((out, order, trace))
}

/// Result of the full elimination pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct Elimination {
    pub module: RuleModule,
    pub order: RuleOrder,
    pub trace: Vec<TraceStep>,
}

/// despite elimination, (lifting for the derivability variant), subjectTo
/// elimination, ordering and evaluation of derived rules.
pub fn eliminate_modifiers(m: &RuleModule, variant: RestrictionVariant) -> Result<Elimination, TransformError> {
    let mut module = m.clone();
    module.rules = despite_elim(&m.rules)?;
    if variant == RestrictionVariant::ViaDerivability {
        module = lift_predicates(&module)?;
    }
    let split = subject_to_elim(&module.rules)?;
    let env = TypeEnv::new(&module);
    let (rules, order, trace) = eval_derived(&env, &split, variant)?;
    module.rules = rules;
    Ok(Elimination { module, order, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_expr, parse_module};

    fn names(v: &[Name]) -> Vec<&str> {
        v.iter().map(|n| n.as_str()).collect()
    }

    #[test]
    fn despite_cycle_surfaces_in_order() {
        let m = parse_module("rule <r1> {despite: r2} if a then b\nrule <r2> {despite: r1} if c then d").unwrap();
        let d = despite_elim(&m.rules).unwrap();
        assert_eq!(names(d[0].subject_to()), ["r2"]);
        assert_eq!(names(d[1].subject_to()), ["r1"]);
        let split = subject_to_elim(&d).unwrap();
        match rule_order(&split) {
            Err(TransformError::Cycle(c)) => assert_eq!(names(&c), ["r1", "r2"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orig_name_collision() {
        let m = parse_module("rule <r> {subjectTo: q} if a then b\nrule <r'Orig> if a then b\nrule <q> if c then d")
            .unwrap();
        assert_eq!(subject_to_elim(&m.rules), Err(TransformError::NameCollision("r'Orig".into())));
    }

    #[test]
    fn empty_overrider_list_is_identity() {
        let m = parse_module("rule <r> for x: A if P x then Q x").unwrap();
        assert_eq!(restrict_subject_to_precond(&m.rules[0], &[]).unwrap(), m.rules[0]);
        assert_eq!(restrict_subject_to_deriv(&m.rules[0], &[]).unwrap(), m.rules[0]);
    }

    #[test]
    fn overrider_params_renamed_positionally() {
        let m = parse_module("rule <r> for x: A if P x then Q x\nrule <o> for y: A if R y then S y").unwrap();
        let out = restrict_subject_to_precond(&m.rules[0], &[&m.rules[1]]).unwrap();
        assert_eq!(out.precond, parse_expr("P x && not R x").unwrap());
        let out = restrict_subject_to_deriv(&m.rules[0], &[&m.rules[1]]).unwrap();
        assert_eq!(out.precond, parse_expr("P x && not S x").unwrap());
    }

    #[test]
    fn interface_mismatch_names_rule() {
        let m = parse_module("rule <r> for x: A if P x then Q x\nrule <o> for y: B if R y then S y").unwrap();
        match restrict_subject_to_precond(&m.rules[0], &[&m.rules[1]]) {
            Err(TransformError::InterfaceMismatch { rule, expected, actual, .. }) => {
                assert_eq!(rule.as_str(), "o");
                assert_eq!(expected, vec!["A".to_string()]);
                assert_eq!(actual, vec!["B".to_string()]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn remap_with_subtype_parameter() {
        let m = parse_module(
            "class Vehicle\nclass Car extends Vehicle\nclass SportsCar extends Car\ndecl P : Car -> Boolean\ndecl Q : Car -> Boolean\nrule <r> for x: Car if P x then Q x",
        )
        .unwrap();
        let env = TypeEnv::new(&m);
        let out =
            remap(&env, &m.rules[0], &[Param::new("y", LType::class("SportsCar"))], &[("x".into(), Expr::var("y"))])
                .unwrap();
        assert_eq!(out.precond, parse_expr("P y").unwrap());
        assert_eq!(out.params, vec![Param::new("y", LType::class("SportsCar"))]);
        let bad = remap(&env, &m.rules[0], &[], &[("x".into(), Expr::int(3))]);
        assert!(matches!(bad, Err(TransformError::Type(TypeError::Mismatch { .. }))));
        let missing = remap(&env, &m.rules[0], &[], &[]);
        assert!(matches!(missing, Err(TransformError::Remap { .. })));
    }

    #[test]
    fn no_derived_rules_is_fixed_point() {
        let m = parse_module("rule <a> if p then q\nrule <b> if q then r").unwrap();
        let env = TypeEnv::new(&m);
        let (out, order, _) = eval_derived(&env, &m.rules, RestrictionVariant::ViaPrecondition).unwrap();
        assert_eq!(out, m.rules);
        assert!(order.edges.is_empty());
    }
}
