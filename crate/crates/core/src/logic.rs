//! Translation of transformer-free rule modules into sorted first-order
//! formula sets. Classes below a sort are relativized through their
//! characteristic predicates.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{LogicError, TransformError};
use crate::expr::{close_forall, visit};
use crate::inversion::inversion_formula;
use crate::syntax::*;
use crate::transform::{eliminate_modifiers, Elimination, RestrictionVariant};
use crate::typecheck::{characteristic_predicate, elaborate, TypeEnv};

/// A sort of the logic: an uninterpreted carrier for top-level classes, or a
/// fixed set of constants for enumerations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SortKind {
    Carrier,
    Enum(Vec<Name>),
}

/// Origin tag of inversion formulas.
pub fn inversion_origin(p: &str) -> Name {
    Name::from(format!("inversion:{p}"))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FormulaSet {
    pub sorts: BTreeMap<Name, SortKind>,
    /// Symbols with argument and result types expressed over sorts.
    pub decls: BTreeMap<Name, LType>,
    pub formulas: Vec<(Name, Expr)>,
}

impl FormulaSet {
    pub fn with_formula(&self, origin: impl Into<Name>, f: Expr) -> FormulaSet {
        let mut out = self.clone();
        out.formulas.push((origin.into(), f));
        out
    }

    /// Integer literals occurring in the formulas.
    pub fn int_literals(&self) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        for (_, f) in &self.formulas {
            out.extend(int_literals(f));
        }
        out
    }
}

pub fn int_literals(e: &Expr) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    visit(e, &mut |x| {
        if let ExprKind::Int(i) = x.kind {
            out.insert(i);
        }
    });
    out
}

/// Maps class types to their sorts, keeping builtins and enumerations.
fn sorted_type(env: &TypeEnv, t: &LType) -> Result<LType, LogicError> {
    match t {
        LType::Class(n) if env.is_enum(n) => Ok(t.clone()),
        LType::Class(n) => {
            env.sort_of(n).map(LType::Class).ok_or_else(|| LogicError::Unsupported(format!("type `{n}` has no sort")))
        }
        LType::Function(a, b) => Ok(LType::func(sorted_type(env, a)?, sorted_type(env, b)?)),
        LType::Tuple(ts) => Ok(LType::Tuple(ts.iter().map(|t| sorted_type(env, t)).collect::<Result<_, _>>()?)),
        _ => Ok(t.clone()),
    }
}

/// Membership guard `isC x` when `t` is a class strictly below its sort.
fn guard(env: &TypeEnv, t: &LType, x: Expr) -> Option<Expr> {
    match t {
        LType::Class(c) if env.is_class(c) && !env.is_sort(c) => Some(Expr::call(&characteristic_predicate(c), [x])),
        _ => None,
    }
}

/// Replaces quantification over subclasses by guarded quantification over
/// the sort.
pub fn relativize(env: &TypeEnv, e: &Expr) -> Result<Expr, LogicError> {
    let r = |x: &Expr| relativize(env, x).map(Box::new);
    let kind = match &e.kind {
        ExprKind::Forall(v, t, b) | ExprKind::Exists(v, t, b) => {
            let universal = matches!(e.kind, ExprKind::Forall(..));
            let body = relativize(env, b)?;
            let body = match guard(env, t, Expr::var(v.clone())) {
                Some(g) if universal => Expr::implies(g, body),
                Some(g) => Expr::and(g, body),
                None => body,
            };
            let st = sorted_type(env, t)?;
            if universal {
                ExprKind::Forall(v.clone(), st, Box::new(body))
            } else {
                ExprKind::Exists(v.clone(), st, Box::new(body))
            }
        }
        ExprKind::Lambda(..) => return Err(LogicError::Unsupported("lambda abstraction".into())),
        ExprKind::Not(a) => ExprKind::Not(r(a)?),
        ExprKind::Field(a, f) => ExprKind::App(Box::new(Expr::var(f.clone())), r(a)?),
        ExprKind::And(a, b) => ExprKind::And(r(a)?, r(b)?),
        ExprKind::Or(a, b) => ExprKind::Or(r(a)?, r(b)?),
        ExprKind::Implies(a, b) => ExprKind::Implies(r(a)?, r(b)?),
        ExprKind::Eq(a, b) => ExprKind::Eq(r(a)?, r(b)?),
        ExprKind::Cmp(op, a, b) => ExprKind::Cmp(*op, r(a)?, r(b)?),
        ExprKind::App(a, b) => ExprKind::App(r(a)?, r(b)?),
        ExprKind::Ite(c, t, f) => ExprKind::Ite(r(c)?, r(t)?, r(f)?),
        k => k.clone(),
    };
    Ok(Expr::new(kind, e.span))
}

/// `forall v̄. guards ∧ Pre --> Post` over the sorts of the parameters.
pub fn rule_formula(env: &TypeEnv, r: &Rule) -> Result<Expr, LogicError> {
    let mut ante: Vec<Expr> = r.params.iter().filter_map(|p| guard(env, &p.ty, Expr::var(p.name.clone()))).collect();
    if !r.precond.is_true() {
        ante.push(relativize(env, &r.precond)?);
    }
    let post = relativize(env, &r.postcond)?;
    let body = if ante.is_empty() { post } else { Expr::implies(Expr::conj(ante), post) };
    let params = r
        .params
        .iter()
        .map(|p| Ok((p.name.clone(), sorted_type(env, &p.ty)?)))
        .collect::<Result<Vec<_>, LogicError>>()?;
    Ok(close_forall(&params, body))
}

/// Which predicates receive inversion formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Inversions {
    Off,
    /// Predicates concluded by some non-system rule.
    Concluded,
    /// Every user-declared predicate; those without rules become empty.
    All,
}

/// User-declared, non-generated Boolean-valued symbols selected by `scope`,
/// in declaration order.
pub fn inversion_targets(m: &RuleModule, scope: Inversions) -> Vec<Name> {
    let env = TypeEnv::new(m);
    let concluded: BTreeSet<&Name> =
        m.rules.iter().filter(|r| !r.is_system()).filter_map(|r| r.postcond.as_application().map(|(h, _)| h)).collect();
    let mut out: Vec<Name> = Vec::new();
    for d in m.decls.iter().chain(m.globals.iter()) {
        if env.is_generated(&d.name) || out.contains(&d.name) || *d.ty.uncurry().1 != LType::Boolean {
            continue;
        }
        let selected = match scope {
            Inversions::Off => false,
            Inversions::Concluded => concluded.contains(&d.name),
            Inversions::All => true,
        };
        if selected {
            out.push(d.name.clone());
        }
    }
    out
}

/// Translates an elaborated, transformer-free module into a formula set.
/// Each rule becomes a universally closed implication; sort predicates hold
/// everywhere; constants and function values of a subclass type belong to
/// it; inversion formulas are appended for the predicates selected by
/// `inversions`.
pub fn rules_to_formulas(m: &RuleModule, inversions: Inversions) -> Result<FormulaSet, LogicError> {
    let env = TypeEnv::new(m);
    let mut fs = FormulaSet::default();
    for c in env.classes() {
        if env.is_sort(c) {
            fs.sorts.insert(c.clone(), SortKind::Carrier);
        }
    }
    for e in &m.enums {
        fs.sorts.insert(e.name.clone(), SortKind::Enum(e.elements.clone()));
    }
    for (n, t) in env.symbols() {
        fs.decls.insert(n.clone(), sorted_type(&env, t)?);
    }

    for c in env.classes() {
        if env.is_sort(c) {
            let x = Expr::var("x");
            let f = Expr::forall("x", LType::Class(c.clone()), Expr::call(&characteristic_predicate(c), [x]));
            fs.formulas.push((Name::from(format!("sort:{c}")), f));
        }
    }
    for (n, t) in env.symbols() {
        if env.is_generated(n) {
            continue;
        }
        let (args, res) = t.uncurry();
        let params: Vec<(Name, LType)> = args
            .iter()
            .enumerate()
            .map(|(i, a)| Ok((Name::from(format!("x{}", i + 1)), sorted_type(&env, a)?)))
            .collect::<Result<_, LogicError>>()?;
        let value = Expr::call(n, params.iter().map(|(p, _)| Expr::var(p.clone())));
        if let Some(g) = guard(&env, res, value) {
            let guards: Vec<Expr> =
                args.iter().zip(&params).filter_map(|(a, (p, _))| guard(&env, a, Expr::var(p.clone()))).collect();
            let body = if guards.is_empty() { g } else { Expr::implies(Expr::conj(guards), g) };
            fs.formulas.push((Name::from(format!("type:{n}")), close_forall(&params, body)));
        }
    }
    for r in &m.rules {
        if r.derivation().is_some() {
            return Err(LogicError::Unsupported(format!("rule `{}` still has a transformer", r.name)));
        }
        fs.formulas.push((r.name.clone(), rule_formula(&env, r)?));
    }
    for p in inversion_targets(m, inversions) {
        let inv = inversion_formula(&env, &m.rules, &p)?;
        fs.formulas.push((inversion_origin(&p), relativize(&env, &inv)?));
    }
    Ok(fs)
}

/// Elaborates and eliminates rule modifiers.
pub fn prepare(m: &RuleModule, variant: RestrictionVariant) -> Result<Elimination, TransformError> {
    let elaborated = elaborate(m)?;
    eliminate_modifiers(&elaborated, variant)
}

/// The active rule set of an assertion: all rules, minus `delete`, plus `add`
/// (names resolved against the full module, so `add` restores deleted rules).
pub fn active_rules(m: &RuleModule, a: &Assertion) -> Result<RuleModule, LogicError> {
    for n in a.adjust.add.iter().chain(a.adjust.delete.iter()) {
        if m.rule(n).is_none() {
            return Err(LogicError::UnknownRule(n.clone()));
        }
    }
    let mut out = m.clone();
    out.rules.retain(|r| !a.adjust.delete.contains(&r.name) || a.adjust.add.contains(&r.name));
    Ok(out)
}

/// Formula set and relativized assertion formula for checking `name`.
pub fn assertion_problem(
    m: &RuleModule,
    name: &str,
    inversions: Inversions,
) -> Result<(FormulaSet, Assertion), LogicError> {
    let a = m.assertion(name).ok_or_else(|| LogicError::UnknownAssertion(Name::from(name)))?.clone();
    let active = active_rules(m, &a)?;
    let fs = rules_to_formulas(&active, inversions)?;
    let env = TypeEnv::new(m);
    let mut a = a;
    a.formula = relativize(&env, &a.formula)?;
    Ok((fs, a))
}
