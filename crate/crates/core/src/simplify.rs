//! Context-based simplification of Boolean formulas, aware of class
//! inclusions between characteristic predicates.

use std::collections::{BTreeMap, BTreeSet};

use crate::expr::free_vars;
use crate::syntax::*;

/// Known literal facts at a position: atom and its truth value.
#[derive(Clone, Default)]
struct Context {
    facts: Vec<(Expr, bool)>,
}

/// Transitive closure of the `(isC, isB)` inclusions.
struct Inclusions {
    up: BTreeMap<Name, BTreeSet<Name>>,
}

impl Inclusions {
    fn new(pairs: &BTreeSet<(Name, Name)>) -> Self {
        let mut up: BTreeMap<Name, BTreeSet<Name>> = BTreeMap::new();
        for (a, b) in pairs {
            up.entry(a.clone()).or_default().insert(b.clone());
        }
        loop {
            let mut changed = false;
            let snapshot = up.clone();
            for sups in up.values_mut() {
                let extra: Vec<Name> = sups
                    .iter()
                    .filter_map(|s| snapshot.get(s))
                    .flatten()
                    .filter(|s| !sups.contains(*s))
                    .cloned()
                    .collect();
                changed |= !extra.is_empty();
                sups.extend(extra);
            }
            if !changed {
                return Inclusions { up };
            }
        }
    }

    fn implies(&self, sub: &Name, sup: &Name) -> bool {
        self.up.get(sub).is_some_and(|s| s.contains(sup))
    }
}

fn unary(e: &Expr) -> Option<(&Name, &Expr)> {
    match e.as_application() {
        Some((h, args)) if args.len() == 1 => Some((h, args[0])),
        _ => None,
    }
}

impl Context {
    /// Truth value of `atom` if the context decides it.
    fn lookup(&self, atom: &Expr, inc: &Inclusions) -> Option<bool> {
        for (f, v) in self.facts.iter().rev() {
            if f == atom {
                return Some(*v);
            }
        }
        let (p, arg) = unary(atom)?;
        for (f, v) in &self.facts {
            let Some((q, farg)) = unary(f) else { continue };
            if farg != arg {
                continue;
            }
            if *v && inc.implies(q, p) {
                return Some(true);
            }
            if !*v && inc.implies(p, q) {
                return Some(false);
            }
        }
        None
    }

    fn with(&self, lits: Vec<(Expr, bool)>) -> Context {
        let mut c = self.clone();
        c.facts.extend(lits);
        c
    }

    fn without_var(&self, v: &Name) -> Context {
        Context { facts: self.facts.iter().filter(|(f, _)| !free_vars(f).contains(v)).cloned().collect() }
    }
}

fn is_atom(e: &Expr) -> bool {
    matches!(e.kind, ExprKind::Var(_) | ExprKind::App(..) | ExprKind::Field(..))
}

/// Literals entailed by `e` being `value`.
fn literals(e: &Expr, value: bool) -> Vec<(Expr, bool)> {
    match (&e.kind, value) {
        _ if is_atom(e) => vec![(e.clone(), value)],
        (ExprKind::Not(a), _) => literals(a, !value),
        (ExprKind::And(a, b), true) | (ExprKind::Or(a, b), false) => {
            let mut l = literals(a, value);
            l.extend(literals(b, value));
            l
        }
        (ExprKind::Implies(a, b), false) => {
            let mut l = literals(a, true);
            l.extend(literals(b, false));
            l
        }
        _ => Vec::new(),
    }
}

fn not(e: Expr) -> Expr {
    match e.kind {
        ExprKind::Bool(b) => Expr::bool(!b),
        ExprKind::Not(a) => *a,
        _ => Expr::not(e),
    }
}

/// Simplifies each item under the context extended by the literals of the
/// other items, forward then backward. `value` is the truth value an item
/// takes when it is relevant: true for conjunctions, false for disjunctions.
fn simplify_items(items: Vec<&Expr>, ctx: &Context, inc: &Inclusions, value: bool) -> Vec<Expr> {
    let mut cur: Vec<Expr> = items.into_iter().cloned().collect();
    for pass in 0..2 {
        let order: Vec<usize> = if pass == 0 { (0..cur.len()).collect() } else { (0..cur.len()).rev().collect() };
        for i in order {
            let lits = cur.iter().enumerate().filter(|(j, _)| *j != i).flat_map(|(_, e)| literals(e, value)).collect();
            cur[i] = go(&cur[i], &ctx.with(lits), inc);
        }
    }
    cur
}

fn go(e: &Expr, ctx: &Context, inc: &Inclusions) -> Expr {
    if is_atom(e) {
        return match ctx.lookup(e, inc) {
            Some(b) => Expr::bool(b),
            None => e.clone(),
        };
    }
    match &e.kind {
        ExprKind::Not(a) => not(go(a, ctx, inc)),
        ExprKind::And(..) => {
            let items = simplify_items(e.conjuncts(), ctx, inc, true);
            if items.iter().any(|x| x.is_false()) {
                return Expr::bool(false);
            }
            let mut out: Vec<Expr> = Vec::new();
            for x in items.into_iter().filter(|x| !x.is_true()) {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
            Expr::conj(out)
        }
        ExprKind::Or(..) => {
            let items = simplify_items(e.disjuncts(), ctx, inc, false);
            if items.iter().any(|x| x.is_true()) {
                return Expr::bool(true);
            }
            let mut out: Vec<Expr> = Vec::new();
            for x in items.into_iter().filter(|x| !x.is_false()) {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
            Expr::disj(out)
        }
        ExprKind::Implies(a, b) => {
            let a2 = go(a, ctx, inc);
            let b2 = go(b, &ctx.with(literals(&a2, true)), inc);
            let a3 = go(&a2, &ctx.with(literals(&b2, false)), inc);
            match (&a3.kind, &b2.kind) {
                (ExprKind::Bool(false), _) | (_, ExprKind::Bool(true)) => Expr::bool(true),
                (ExprKind::Bool(true), _) => b2,
                (_, ExprKind::Bool(false)) => not(a3),
                _ => Expr::implies(a3, b2),
            }
        }
        ExprKind::Ite(c, t, f) => {
            let c2 = go(c, ctx, inc);
            match c2.kind {
                ExprKind::Bool(true) => go(t, ctx, inc),
                ExprKind::Bool(false) => go(f, ctx, inc),
                _ => {
                    let t2 = go(t, &ctx.with(literals(&c2, true)), inc);
                    let f2 = go(f, &ctx.with(literals(&c2, false)), inc);
                    if t2 == f2 {
                        t2
                    } else {
                        Expr::new(ExprKind::Ite(Box::new(c2), Box::new(t2), Box::new(f2)), e.span)
                    }
                }
            }
        }
        ExprKind::Forall(v, t, b) | ExprKind::Exists(v, t, b) => {
            let b2 = go(b, &ctx.without_var(v), inc);
            if !free_vars(&b2).contains(v) && matches!(b2.kind, ExprKind::Bool(_)) {
                return b2;
            }
            let kind = match e.kind {
                ExprKind::Forall(..) => ExprKind::Forall(v.clone(), t.clone(), Box::new(b2)),
                _ => ExprKind::Exists(v.clone(), t.clone(), Box::new(b2)),
            };
            Expr::new(kind, e.span)
        }
        ExprKind::Eq(a, b) if a == b => Expr::bool(true),
        ExprKind::Eq(a, b) => match (&a.kind, &b.kind) {
            (ExprKind::Int(x), ExprKind::Int(y)) => Expr::bool(x == y),
            (ExprKind::Bool(x), ExprKind::Bool(y)) => Expr::bool(x == y),
            (ExprKind::Str(x), ExprKind::Str(y)) => Expr::bool(x == y),
            _ => e.clone(),
        },
        ExprKind::Cmp(op, a, b) => match (&a.kind, &b.kind) {
            (ExprKind::Int(x), ExprKind::Int(y)) => Expr::bool(op.holds(x, y)),
            _ => e.clone(),
        },
        _ => e.clone(),
    }
}

/// Simplifies a formula using propositional reasoning with the literals in
/// context and the inclusions `isC ⇒ isB`. The result is equivalent to the
/// input in every interpretation satisfying the inclusions.
pub fn simplify(f: &Expr, inclusions: &BTreeSet<(Name, Name)>) -> Expr {
    let inc = Inclusions::new(inclusions);
    let mut cur = go(f, &Context::default(), &inc);
    // a second round can use facts exposed by the first
    for _ in 0..3 {
        let next = go(&cur, &Context::default(), &inc);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expr;

    fn simp(src: &str, inc: &[(&str, &str)]) -> Expr {
        let pairs = inc.iter().map(|(a, b)| (Name::from(*a), Name::from(*b))).collect();
        simplify(&parse_expr(src).unwrap(), &pairs)
    }

    #[test]
    fn contradiction() {
        assert_eq!(simp("P && not P", &[]), Expr::bool(false));
        assert_eq!(simp("P || not P", &[]), Expr::bool(true));
    }

    #[test]
    fn no_redundancy_is_fixed_point() {
        let e = parse_expr("isCar v && isHighway r").unwrap();
        assert_eq!(simp("isCar v && isHighway r", &[]), e);
    }

    #[test]
    fn inclusion_removes_redundant_literal() {
        let got = simp("isSportsCar v && isHighway r && not (isCar v && isWorkday d)", &[("isSportsCar", "isCar")]);
        assert_eq!(got, parse_expr("isSportsCar v && isHighway r && not isWorkday d").unwrap());
    }

    #[test]
    fn nested_expansion() {
        let got = simp(
            "isCar v && isHighway r && not (isSportsCar v && isHighway r && not (isCar v && isWorkday d)) && not (isCar v && isWorkday d)",
            &[("isSportsCar", "isCar")],
        );
        assert_eq!(got, parse_expr("isCar v && isHighway r && not isSportsCar v && not isWorkday d").unwrap());
    }

    #[test]
    fn bound_variable_blocks_context() {
        let got = simp("P x && (forall x: A. P x)", &[]);
        assert_eq!(got, parse_expr("P x && (forall x: A. P x)").unwrap());
    }
}
