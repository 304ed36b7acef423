//! Structural operations on expressions.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Expr, ExprKind, LType, Name};

/// Names occurring free in `e`. Declared symbols count as free names too;
/// callers filter them against the signature.
pub fn free_vars(e: &Expr) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_free(e, &mut Vec::new(), &mut out);
    out
}

fn collect_free(e: &Expr, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match &e.kind {
        ExprKind::Var(n) => {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        }
        ExprKind::Bool(_) | ExprKind::Int(_) | ExprKind::Float(_) | ExprKind::Str(_) => {}
        ExprKind::Not(a) | ExprKind::Field(a, _) => collect_free(a, bound, out),
        ExprKind::And(a, b)
        | ExprKind::Or(a, b)
        | ExprKind::Implies(a, b)
        | ExprKind::Eq(a, b)
        | ExprKind::Cmp(_, a, b)
        | ExprKind::App(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        ExprKind::Ite(c, t, f) => {
            collect_free(c, bound, out);
            collect_free(t, bound, out);
            collect_free(f, bound, out);
        }
        ExprKind::Lambda(v, _, body) | ExprKind::Forall(v, _, body) | ExprKind::Exists(v, _, body) => {
            bound.push(v.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

/// Every name in `e`, free or bound.
pub fn all_names(e: &Expr) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    visit(e, &mut |x| match &x.kind {
        ExprKind::Var(n) => {
            out.insert(n.clone());
        }
        ExprKind::Lambda(v, _, _) | ExprKind::Forall(v, _, _) | ExprKind::Exists(v, _, _) => {
            out.insert(v.clone());
        }
        _ => {}
    });
    out
}

/// Pre-order traversal.
pub fn visit<'a>(e: &'a Expr, f: &mut impl FnMut(&'a Expr)) {
    f(e);
    match &e.kind {
        ExprKind::Var(_) | ExprKind::Bool(_) | ExprKind::Int(_) | ExprKind::Float(_) | ExprKind::Str(_) => {}
        ExprKind::Not(a) | ExprKind::Field(a, _) => visit(a, f),
        ExprKind::And(a, b)
        | ExprKind::Or(a, b)
        | ExprKind::Implies(a, b)
        | ExprKind::Eq(a, b)
        | ExprKind::Cmp(_, a, b)
        | ExprKind::App(a, b) => {
            visit(a, f);
            visit(b, f);
        }
        ExprKind::Ite(c, t, e2) => {
            visit(c, f);
            visit(t, f);
            visit(e2, f);
        }
        ExprKind::Lambda(_, _, b) | ExprKind::Forall(_, _, b) | ExprKind::Exists(_, _, b) => visit(b, f),
    }
}

/// Rebuilds `e` bottom-up, letting `f` replace each node after its children
/// have been rewritten.
pub fn map_bottom_up(e: &Expr, f: &mut impl FnMut(Expr) -> Expr) -> Expr {
    let b = |x: &Expr, f: &mut dyn FnMut(Expr) -> Expr| Box::new(map_dyn(x, f));
    let kind = match &e.kind {
        ExprKind::Not(a) => ExprKind::Not(b(a, f)),
        ExprKind::Field(a, n) => ExprKind::Field(b(a, f), n.clone()),
        ExprKind::And(x, y) => ExprKind::And(b(x, f), b(y, f)),
        ExprKind::Or(x, y) => ExprKind::Or(b(x, f), b(y, f)),
        ExprKind::Implies(x, y) => ExprKind::Implies(b(x, f), b(y, f)),
        ExprKind::Eq(x, y) => ExprKind::Eq(b(x, f), b(y, f)),
        ExprKind::Cmp(op, x, y) => ExprKind::Cmp(*op, b(x, f), b(y, f)),
        ExprKind::App(x, y) => ExprKind::App(b(x, f), b(y, f)),
        ExprKind::Ite(c, t, e2) => ExprKind::Ite(b(c, f), b(t, f), b(e2, f)),
        ExprKind::Lambda(v, t, body) => ExprKind::Lambda(v.clone(), t.clone(), b(body, f)),
        ExprKind::Forall(v, t, body) => ExprKind::Forall(v.clone(), t.clone(), b(body, f)),
        ExprKind::Exists(v, t, body) => ExprKind::Exists(v.clone(), t.clone(), b(body, f)),
        k => k.clone(),
    };
    f(Expr::new(kind, e.span))
}

fn map_dyn(e: &Expr, f: &mut dyn FnMut(Expr) -> Expr) -> Expr {
    map_bottom_up(e, &mut |x| f(x))
}

/// Generates names not clashing with a set of reserved ones.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    used: BTreeSet<Name>,
}

impl FreshNames {
    pub fn new(used: impl IntoIterator<Item = Name>) -> Self {
        FreshNames { used: used.into_iter().collect() }
    }

    pub fn reserve(&mut self, n: &Name) {
        self.used.insert(n.clone());
    }

    pub fn reserve_all<'a>(&mut self, names: impl IntoIterator<Item = &'a Name>) {
        for n in names {
            self.reserve(n);
        }
    }

    /// Returns `base` if unused, otherwise `base1`, `base2`, ...
    pub fn fresh(&mut self, base: &str) -> Name {
        let mut candidate = Name::from(base);
        let mut i = 1;
        while self.used.contains(&candidate) {
            candidate = Name::from(format!("{base}{i}"));
            i += 1;
        }
        self.used.insert(candidate.clone());
        candidate
    }
}

/// Simultaneous capture-avoiding substitution of free occurrences.
pub fn substitute(e: &Expr, map: &BTreeMap<Name, Expr>) -> Expr {
    if map.is_empty() {
        return e.clone();
    }
    let mut avoid: BTreeSet<Name> = BTreeSet::new();
    for r in map.values() {
        avoid.extend(free_vars(r));
    }
    subst_rec(e, map, &avoid)
}

/// Substitutes a single variable.
pub fn substitute_one(e: &Expr, var: &Name, by: &Expr) -> Expr {
    let mut m = BTreeMap::new();
    m.insert(var.clone(), by.clone());
    substitute(e, &m)
}

fn subst_rec(e: &Expr, map: &BTreeMap<Name, Expr>, avoid: &BTreeSet<Name>) -> Expr {
    let s = |x: &Expr| Box::new(subst_rec(x, map, avoid));
    let kind = match &e.kind {
        ExprKind::Var(n) => {
            if let Some(r) = map.get(n) {
                return r.clone();
            }
            ExprKind::Var(n.clone())
        }
        ExprKind::Not(a) => ExprKind::Not(s(a)),
        ExprKind::Field(a, n) => ExprKind::Field(s(a), n.clone()),
        ExprKind::And(a, b) => ExprKind::And(s(a), s(b)),
        ExprKind::Or(a, b) => ExprKind::Or(s(a), s(b)),
        ExprKind::Implies(a, b) => ExprKind::Implies(s(a), s(b)),
        ExprKind::Eq(a, b) => ExprKind::Eq(s(a), s(b)),
        ExprKind::Cmp(op, a, b) => ExprKind::Cmp(*op, s(a), s(b)),
        ExprKind::App(a, b) => ExprKind::App(s(a), s(b)),
        ExprKind::Ite(c, t, f) => ExprKind::Ite(s(c), s(t), s(f)),
        ExprKind::Lambda(v, t, body) => {
            let (v, body) = subst_binder(v, body, map, avoid);
            ExprKind::Lambda(v, t.clone(), Box::new(body))
        }
        ExprKind::Forall(v, t, body) => {
            let (v, body) = subst_binder(v, body, map, avoid);
            ExprKind::Forall(v, t.clone(), Box::new(body))
        }
        ExprKind::Exists(v, t, body) => {
            let (v, body) = subst_binder(v, body, map, avoid);
            ExprKind::Exists(v, t.clone(), Box::new(body))
        }
        k => k.clone(),
    };
    Expr::new(kind, e.span)
}

fn subst_binder(v: &Name, body: &Expr, map: &BTreeMap<Name, Expr>, avoid: &BTreeSet<Name>) -> (Name, Expr) {
    let mut inner: BTreeMap<Name, Expr> = map.clone();
    inner.remove(v);
    if inner.is_empty() {
        return (v.clone(), body.clone());
    }
    if avoid.contains(v) {
        let mut fresh = FreshNames::new(avoid.iter().cloned().chain(all_names(body)));
        for r in inner.values() {
            fresh.reserve_all(all_names(r).iter());
        }
        let nv = fresh.fresh(v);
        inner.insert(v.clone(), Expr::var(nv.clone()));
        let mut avoid2 = avoid.clone();
        avoid2.insert(nv.clone());
        (nv, subst_rec(body, &inner, &avoid2))
    } else {
        (v.clone(), subst_rec(body, &inner, avoid))
    }
}

/// Replaces every application of `f` to arguments by the result of
/// `rewrite(args)`. Binders are respected: a bound variable named `f` shadows.
pub fn replace_applications(e: &Expr, f: &str, rewrite: &mut dyn FnMut(Vec<Expr>) -> Expr) -> Expr {
    if let Some((head, args)) = e.as_application() {
        if head.as_str() == f {
            let args = args.into_iter().map(|a| replace_applications(a, f, rewrite)).collect();
            return rewrite(args);
        }
    }
    let r = |x: &Expr, rw: &mut dyn FnMut(Vec<Expr>) -> Expr| Box::new(replace_applications(x, f, rw));
    let kind = match &e.kind {
        ExprKind::Not(a) => ExprKind::Not(r(a, rewrite)),
        ExprKind::Field(a, n) => ExprKind::Field(r(a, rewrite), n.clone()),
        ExprKind::And(a, b) => ExprKind::And(r(a, rewrite), r(b, rewrite)),
        ExprKind::Or(a, b) => ExprKind::Or(r(a, rewrite), r(b, rewrite)),
        ExprKind::Implies(a, b) => ExprKind::Implies(r(a, rewrite), r(b, rewrite)),
        ExprKind::Eq(a, b) => ExprKind::Eq(r(a, rewrite), r(b, rewrite)),
        ExprKind::Cmp(op, a, b) => ExprKind::Cmp(*op, r(a, rewrite), r(b, rewrite)),
        ExprKind::App(a, b) => ExprKind::App(r(a, rewrite), r(b, rewrite)),
        ExprKind::Ite(c, t, x) => ExprKind::Ite(r(c, rewrite), r(t, rewrite), r(x, rewrite)),
        ExprKind::Lambda(v, t, b) | ExprKind::Forall(v, t, b) | ExprKind::Exists(v, t, b) if v.as_str() == f => {
            let _ = (t, b);
            return e.clone();
        }
        ExprKind::Lambda(v, t, b) => ExprKind::Lambda(v.clone(), t.clone(), r(b, rewrite)),
        ExprKind::Forall(v, t, b) => ExprKind::Forall(v.clone(), t.clone(), r(b, rewrite)),
        ExprKind::Exists(v, t, b) => ExprKind::Exists(v.clone(), t.clone(), r(b, rewrite)),
        k => k.clone(),
    };
    Expr::new(kind, e.span)
}

/// Wraps `body` in nested quantifiers over `params`, outermost first.
pub fn close_forall(params: &[(Name, LType)], body: Expr) -> Expr {
    params.iter().rev().fold(body, |acc, (n, t)| Expr::forall(n.clone(), t.clone(), acc))
}

pub fn close_exists(params: &[(Name, LType)], body: Expr) -> Expr {
    params.iter().rev().fold(body, |acc, (n, t)| Expr::exists(n.clone(), t.clone(), acc))
}
