//! A fixed first-order vocabulary over one sort `A` with two elements,
//! random formulas over it and a direct evaluator used as an oracle.
//!
//! Symbols: propositions `B0`, `B1`; predicates `P`, `Q : A -> Boolean`;
//! constant `c : A`; variables `x`, `y`.

use std::collections::BTreeMap;

use l4_core::logic::{FormulaSet, SortKind};
use l4_core::model::{carrier_element, Interpretation, Value};
use l4_core::{Expr, ExprKind, LType, Name};
use proptest::prelude::*;

pub const DOMAIN: usize = 2;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct World {
    pub b: [bool; 2],
    pub p: [bool; DOMAIN],
    pub q: [bool; DOMAIN],
    pub c: usize,
}

impl World {
    /// Every interpretation of the vocabulary.
    pub fn all() -> Vec<World> {
        let mut out = Vec::new();
        for bits in 0..64u32 {
            for c in 0..DOMAIN {
                let bit = |i: u32| bits >> i & 1 == 1;
                out.push(World { b: [bit(0), bit(1)], p: [bit(2), bit(3)], q: [bit(4), bit(5)], c });
            }
        }
        out
    }

    pub fn from_model(m: &Interpretation) -> World {
        let elem = |i: usize| Value::Elem(carrier_element("A", i + 1));
        let truth = |sym: &str, args: &[Value]| m.value(sym, args) == Some(&Value::Bool(true));
        let c = (0..DOMAIN).find(|i| m.value("c", &[]) == Some(&elem(*i))).expect("c is interpreted");
        World {
            b: [truth("B0", &[]), truth("B1", &[])],
            p: [truth("P", &[elem(0)]), truth("P", &[elem(1)])],
            q: [truth("Q", &[elem(0)]), truth("Q", &[elem(1)])],
            c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum V {
    B(bool),
    E(usize),
}

fn eval_v(e: &Expr, w: &World, env: &BTreeMap<Name, usize>) -> V {
    let b = |x: &Expr| match eval_v(x, w, env) {
        V::B(b) => b,
        V::E(_) => panic!("expected a formula: {x:?}"),
    };
    match &e.kind {
        ExprKind::Bool(v) => V::B(*v),
        ExprKind::Var(n) => match n.as_str() {
            "B0" => V::B(w.b[0]),
            "B1" => V::B(w.b[1]),
            "c" => V::E(w.c),
            v => V::E(*env.get(&Name::from(v)).unwrap_or_else(|| panic!("unbound `{v}`"))),
        },
        ExprKind::App(f, a) => {
            let V::E(i) = eval_v(a, w, env) else { panic!("bad argument") };
            match f.as_var().map(Name::as_str) {
                Some("P") => V::B(w.p[i]),
                Some("Q") => V::B(w.q[i]),
                other => panic!("unknown predicate {other:?}"),
            }
        }
        ExprKind::Not(a) => V::B(!b(a)),
        ExprKind::And(x, y) => V::B(b(x) && b(y)),
        ExprKind::Or(x, y) => V::B(b(x) || b(y)),
        ExprKind::Implies(x, y) => V::B(!b(x) || b(y)),
        ExprKind::Eq(x, y) => V::B(eval_v(x, w, env) == eval_v(y, w, env)),
        ExprKind::Ite(c, t, f) => {
            if b(c) {
                eval_v(t, w, env)
            } else {
                eval_v(f, w, env)
            }
        }
        ExprKind::Forall(v, _, body) | ExprKind::Exists(v, _, body) => {
            let universal = matches!(e.kind, ExprKind::Forall(..));
            let mut vals = (0..DOMAIN).map(|i| {
                let mut env = env.clone();
                env.insert(v.clone(), i);
                matches!(eval_v(body, w, &env), V::B(true))
            });
            V::B(if universal { vals.all(|t| t) } else { vals.any(|t| t) })
        }
        k => panic!("outside the vocabulary: {k:?}"),
    }
}

pub fn eval(e: &Expr, w: &World, env: &BTreeMap<Name, usize>) -> bool {
    match eval_v(e, w, env) {
        V::B(b) => b,
        V::E(_) => panic!("not a formula"),
    }
}

pub fn formula_set(formulas: &[Expr]) -> FormulaSet {
    let a = LType::class("A");
    let mut fs = FormulaSet::default();
    fs.sorts.insert("A".into(), SortKind::Carrier);
    for (n, t) in [
        ("B0", LType::Boolean),
        ("B1", LType::Boolean),
        ("P", LType::func(a.clone(), LType::Boolean)),
        ("Q", LType::func(a.clone(), LType::Boolean)),
        ("c", a),
    ] {
        fs.decls.insert(n.into(), t);
    }
    fs.formulas = formulas.iter().enumerate().map(|(i, f)| (Name::from(format!("f{i}")), f.clone())).collect();
    fs
}

fn term() -> impl Strategy<Value = Expr> {
    prop_oneof![Just(Expr::var("c")), Just(Expr::var("x")), Just(Expr::var("y"))]
}

/// Formulas that may mention the variables `x` and `y` free.
pub fn open_formula() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::var("B0")),
        Just(Expr::var("B1")),
        any::<bool>().prop_map(Expr::bool),
        term().prop_map(|t| Expr::call("P", [t])),
        term().prop_map(|t| Expr::call("Q", [t])),
        (term(), term()).prop_map(|(a, b)| Expr::eq(a, b)),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let var = prop_oneof![Just("x"), Just("y")];
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::implies(a, b)),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(c, t, f)| Expr::from(ExprKind::Ite(
                Box::new(c),
                Box::new(t),
                Box::new(f)
            ))),
            (var.clone(), inner.clone()).prop_map(|(v, b)| Expr::forall(v, LType::class("A"), b)),
            (var, inner).prop_map(|(v, b)| Expr::exists(v, LType::class("A"), b)),
        ]
    })
}

/// Closed formulas: free variables are bound universally.
pub fn formula() -> impl Strategy<Value = Expr> {
    open_formula().prop_map(|f| {
        let free = l4_core::expr::free_vars(&f);
        let mut out = f;
        for v in ["x", "y"] {
            if free.contains(&Name::from(v)) {
                out = Expr::forall(v, LType::class("A"), out);
            }
        }
        out
    })
}
