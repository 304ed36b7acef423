//! Subtyping, expression typing and elaboration of class declarations into
//! characteristic predicates, attribute accessors and inclusion rules.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::TypeError;
use crate::printer::print_type;
use crate::syntax::*;

/// Name of the characteristic predicate of a class.
pub fn characteristic_predicate(class: &str) -> Name {
    Name::from(format!("is{class}"))
}

/// Name of the generated inclusion rule for `sub extends sup`.
pub fn inclusion_rule_name(sub: &str, sup: &str) -> Name {
    Name::from(format!("{sub}'extends'{sup}"))
}

/// Typing environment derived from a module's declarations. Generated
/// characteristic predicates and attribute accessors are always present,
/// whether or not the module has been elaborated.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    parents: BTreeMap<Name, Name>,
    attributes: BTreeMap<Name, Vec<Param>>,
    enums: BTreeMap<Name, Vec<Name>>,
    enum_of: BTreeMap<Name, Name>,
    symbols: BTreeMap<Name, LType>,
    generated: BTreeSet<Name>,
}

/// Variables in scope, innermost last.
pub type Scope = Vec<(Name, LType)>;

impl TypeEnv {
    pub fn new(m: &RuleModule) -> Self {
        let mut env = TypeEnv::default();
        for c in &m.classes {
            env.parents.entry(c.name.clone()).or_insert_with(|| c.parent.clone());
            env.attributes.entry(c.name.clone()).or_insert_with(|| c.attributes.clone());
        }
        for e in &m.enums {
            env.enums.insert(e.name.clone(), e.elements.clone());
            for el in &e.elements {
                env.enum_of.entry(el.clone()).or_insert_with(|| e.name.clone());
            }
        }
        for d in m.decls.iter().chain(m.globals.iter()) {
            env.symbols.entry(d.name.clone()).or_insert_with(|| d.ty.clone());
        }
        for (name, ty) in env.generated_decls() {
            if !env.symbols.contains_key(&name) {
                env.symbols.insert(name.clone(), ty);
            }
            env.generated.insert(name);
        }
        env
    }

    /// Declarations implied by the class hierarchy: `isC : S -> Boolean` for
    /// every class and `f : C -> T` for every attribute.
    pub fn generated_decls(&self) -> Vec<(Name, LType)> {
        let mut out = Vec::new();
        for c in self.parents.keys() {
            if let Some(s) = self.sort_of(c) {
                out.push((characteristic_predicate(c), LType::func(LType::Class(s), LType::Boolean)));
            }
        }
        for (c, attrs) in &self.attributes {
            for a in attrs {
                out.push((a.name.clone(), LType::func(LType::Class(c.clone()), a.ty.clone())));
            }
        }
        out
    }

    pub fn is_class(&self, n: &str) -> bool {
        self.parents.contains_key(n)
    }

    pub fn is_enum(&self, n: &str) -> bool {
        self.enums.contains_key(n)
    }

    pub fn enum_elements(&self, n: &str) -> Option<&[Name]> {
        self.enums.get(n).map(|v| v.as_slice())
    }

    pub fn enum_of_element(&self, el: &str) -> Option<&Name> {
        self.enum_of.get(el)
    }

    pub fn parent(&self, c: &str) -> Option<&Name> {
        self.parents.get(c)
    }

    pub fn classes(&self) -> impl Iterator<Item = &Name> {
        self.parents.keys()
    }

    pub fn symbol(&self, n: &str) -> Option<&LType> {
        self.symbols.get(n)
    }

    pub fn symbols(&self) -> &BTreeMap<Name, LType> {
        &self.symbols
    }

    /// True for characteristic predicates and attribute accessors.
    pub fn is_generated(&self, n: &str) -> bool {
        self.generated.contains(n)
    }

    pub fn is_characteristic(&self, n: &str) -> bool {
        n.strip_prefix("is").is_some_and(|c| self.is_class(c)) && self.is_generated(n)
    }

    /// Strict ancestors of `c` up to (excluding) `Class`, nearest first.
    /// Stops on cycles or unknown parents.
    pub fn ancestors(&self, c: &str) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        let mut cur = c;
        while let Some(p) = self.parents.get(cur) {
            if p.as_str() == TOP_CLASS || p.as_str() == c || out.contains(p) {
                break;
            }
            out.push(p.clone());
            cur = p;
        }
        out
    }

    /// The sort of a class: its ancestor directly below `Class`.
    pub fn sort_of(&self, c: &str) -> Option<Name> {
        if !self.is_class(c) {
            return None;
        }
        let mut cur = Name::from(c);
        let mut seen = BTreeSet::new();
        loop {
            let p = self.parents.get(&cur)?;
            if p.as_str() == TOP_CLASS {
                return Some(cur);
            }
            if !seen.insert(cur.clone()) || !self.is_class(p) {
                return None;
            }
            cur = p.clone();
        }
    }

    pub fn is_sort(&self, c: &str) -> bool {
        self.parents.get(c).is_some_and(|p| p.as_str() == TOP_CLASS)
    }

    fn type_resolves(&self, t: &LType) -> bool {
        match t {
            LType::Class(n) => n.as_str() == TOP_CLASS || self.is_class(n) || self.is_enum(n),
            LType::Function(d, c) => self.type_resolves(d) && self.type_resolves(c),
            LType::Tuple(ts) => ts.iter().all(|t| self.type_resolves(t)),
            _ => true,
        }
    }

    pub fn resolve(&self, t: &LType) -> Result<(), TypeError> {
        match t {
            LType::Class(n) if !self.type_resolves(t) => Err(TypeError::UnknownClass(n.clone())),
            LType::Function(d, c) => {
                self.resolve(d)?;
                self.resolve(c)
            }
            LType::Tuple(ts) => ts.iter().try_for_each(|t| self.resolve(t)),
            _ => Ok(()),
        }
    }

    /// The subtype relation `t1 ⪯ t2`.
    pub fn subtype(&self, t1: &LType, t2: &LType) -> Result<bool, TypeError> {
        self.resolve(t1)?;
        self.resolve(t2)?;
        Ok(self.subtype_unchecked(t1, t2))
    }

    fn subtype_unchecked(&self, t1: &LType, t2: &LType) -> bool {
        match (t1, t2) {
            (LType::Class(a), LType::Class(b)) => {
                a == b || (b.as_str() == TOP_CLASS && self.is_class(a)) || self.ancestors(a).contains(b)
            }
            (LType::Function(d1, c1), LType::Function(d2, c2)) => {
                self.subtype_unchecked(d2, d1) && self.subtype_unchecked(c1, c2)
            }
            (LType::Tuple(a), LType::Tuple(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.subtype_unchecked(x, y))
            }
            _ => t1 == t2,
        }
    }

    /// Least common supertype, if any.
    pub fn lub(&self, t1: &LType, t2: &LType) -> Option<LType> {
        if self.subtype_unchecked(t1, t2) {
            return Some(t2.clone());
        }
        if self.subtype_unchecked(t2, t1) {
            return Some(t1.clone());
        }
        if let (LType::Class(a), LType::Class(b)) = (t1, t2) {
            let bs = self.ancestors(b);
            return self
                .ancestors(a)
                .into_iter()
                .find(|x| bs.contains(x))
                .map(LType::Class)
                .or_else(|| (self.is_class(a) && self.is_class(b)).then(|| LType::class(TOP_CLASS)));
        }
        None
    }

    fn lookup(&self, scope: &Scope, n: &Name) -> Option<LType> {
        if let Some((_, t)) = scope.iter().rev().find(|(v, _)| v == n) {
            return Some(t.clone());
        }
        if let Some(t) = self.symbols.get(n) {
            return Some(t.clone());
        }
        self.enum_of.get(n).map(|e| LType::Class(e.clone()))
    }

    fn expect(&self, scope: &mut Scope, e: &Expr, want: &LType, context: &str) -> Result<(), TypeError> {
        let t = self.type_of(scope, e)?;
        if self.subtype_unchecked(&t, want) {
            Ok(())
        } else {
            Err(TypeError::Mismatch {
                span: e.span,
                context: context.to_string(),
                expected: print_type(want),
                actual: print_type(&t),
            })
        }
    }

    /// The least type of `e` in `scope`.
    pub fn type_of(&self, scope: &mut Scope, e: &Expr) -> Result<LType, TypeError> {
        let b = LType::Boolean;
        match &e.kind {
            ExprKind::Var(n) => {
                self.lookup(scope, n).ok_or_else(|| TypeError::UnknownIdentifier { span: e.span, name: n.clone() })
            }
            ExprKind::Bool(_) => Ok(LType::Boolean),
            ExprKind::Int(_) => Ok(LType::Integer),
            ExprKind::Float(_) => Ok(LType::Float),
            ExprKind::Str(_) => Ok(LType::String),
            ExprKind::Not(a) => {
                self.expect(scope, a, &b, "operand of `not`")?;
                Ok(b)
            }
            ExprKind::And(x, y) | ExprKind::Or(x, y) | ExprKind::Implies(x, y) => {
                let op = match e.kind {
                    ExprKind::And(..) => "`&&`",
                    ExprKind::Or(..) => "`||`",
                    _ => "`-->`",
                };
                self.expect(scope, x, &b, &format!("left operand of {op}"))?;
                self.expect(scope, y, &b, &format!("right operand of {op}"))?;
                Ok(b)
            }
            ExprKind::Eq(x, y) => {
                let tx = self.type_of(scope, x)?;
                let ty = self.type_of(scope, y)?;
                if self.lub(&tx, &ty).is_none() {
                    return Err(TypeError::Mismatch {
                        span: y.span,
                        context: "right operand of `==`".into(),
                        expected: print_type(&tx),
                        actual: print_type(&ty),
                    });
                }
                Ok(b)
            }
            ExprKind::Cmp(op, x, y) => {
                let tx = self.type_of(scope, x)?;
                if tx != LType::Integer && tx != LType::Float {
                    return Err(TypeError::Mismatch {
                        span: x.span,
                        context: format!("left operand of `{}`", op.symbol()),
                        expected: "Integer or Float".into(),
                        actual: print_type(&tx),
                    });
                }
                self.expect(scope, y, &tx, &format!("right operand of `{}`", op.symbol()))?;
                Ok(b)
            }
            ExprKind::App(f, a) => {
                let tf = self.type_of(scope, f)?;
                match tf {
                    LType::Function(d, c) => {
                        self.expect(scope, a, &d, "function argument")?;
                        Ok(*c)
                    }
                    other => Err(TypeError::NotAFunction { span: f.span, ty: print_type(&other) }),
                }
            }
            ExprKind::Lambda(v, t, body) => {
                self.resolve(t)?;
                scope.push((v.clone(), t.clone()));
                let r = self.type_of(scope, body);
                scope.pop();
                Ok(LType::func(t.clone(), r?))
            }
            ExprKind::Ite(c, t, f) => {
                self.expect(scope, c, &b, "condition of `if`")?;
                let tt = self.type_of(scope, t)?;
                let tf = self.type_of(scope, f)?;
                self.lub(&tt, &tf).ok_or_else(|| TypeError::Mismatch {
                    span: f.span,
                    context: "`else` branch".into(),
                    expected: print_type(&tt),
                    actual: print_type(&tf),
                })
            }
            ExprKind::Forall(v, t, body) | ExprKind::Exists(v, t, body) => {
                self.resolve(t)?;
                scope.push((v.clone(), t.clone()));
                let r = self.expect(scope, body, &b, "quantifier body");
                scope.pop();
                r?;
                Ok(b)
            }
            ExprKind::Field(x, field) => {
                let tx = self.type_of(scope, x)?;
                let class = match &tx {
                    LType::Class(c) if self.is_class(c) => c.clone(),
                    other => {
                        return Err(TypeError::FieldNotFound {
                            span: e.span,
                            class: print_type(other),
                            field: field.clone(),
                        })
                    }
                };
                std::iter::once(class.clone())
                    .chain(self.ancestors(&class))
                    .find_map(|c| {
                        self.attributes
                            .get(&c)
                            .and_then(|attrs| attrs.iter().find(|a| &a.name == field))
                            .map(|a| a.ty.clone())
                    })
                    .ok_or_else(|| TypeError::FieldNotFound {
                        span: e.span,
                        class: class.to_string(),
                        field: field.clone(),
                    })
            }
        }
    }

    /// Checks that `e` is a formula in the given variable context.
    pub fn check_formula(&self, params: &[Param], e: &Expr, context: &str) -> Result<(), TypeError> {
        let mut scope: Scope = params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect();
        self.expect(&mut scope, e, &LType::Boolean, context)
    }

    pub fn check_rule(&self, r: &Rule) -> Result<(), TypeError> {
        for p in &r.params {
            self.resolve(&p.ty)?;
        }
        if r.derivation().is_some() && r.has_trivial_body() {
            return Ok(());
        }
        self.check_formula(&r.params, &r.precond, &format!("precondition of rule `{}`", r.name))?;
        self.check_formula(&r.params, &r.postcond, &format!("postcondition of rule `{}`", r.name))
    }
}

/// Pairs `(isC, isB)` for every `C extends B` with `B` not the root.
pub fn inclusion_pairs(m: &RuleModule) -> BTreeSet<(Name, Name)> {
    m.classes
        .iter()
        .filter(|c| c.parent.as_str() != TOP_CLASS)
        .map(|c| (characteristic_predicate(&c.name), characteristic_predicate(&c.parent)))
        .collect()
}

/// Adds characteristic predicates, attribute accessors and class inclusion
/// rules. Already present identical items are kept, so elaboration is
/// idempotent; a differing item under a generated name is a collision.
pub fn elaborate(m: &RuleModule) -> Result<RuleModule, TypeError> {
    let env = TypeEnv::new(m);
    let mut out = m.clone();
    let mut generated: Vec<FunDecl> = Vec::new();
    for c in &m.classes {
        if let Some(s) = env.sort_of(&c.name) {
            generated
                .push(FunDecl::new(characteristic_predicate(&c.name), LType::func(LType::Class(s), LType::Boolean)));
        }
        for a in &c.attributes {
            generated.push(FunDecl::new(a.name.clone(), LType::func(LType::Class(c.name.clone()), a.ty.clone())));
        }
    }
    for g in generated {
        let existing = out.decls.iter().chain(out.globals.iter()).find(|d| d.name == g.name);
        match existing {
            Some(d) if d.ty == g.ty => {}
            Some(d) => {
                return Err(TypeError::Collision {
                    name: g.name,
                    existing: format!("declaration of type {}", print_type(&d.ty)),
                })
            }
            None => out.decls.push(g),
        }
    }
    for c in &m.classes {
        if c.parent.as_str() == TOP_CLASS {
            continue;
        }
        let Some(s) = env.sort_of(&c.name) else { continue };
        let x = Expr::var("x");
        let rule = Rule::new(
            inclusion_rule_name(&c.name, &c.parent),
            vec![Param::new("x", LType::Class(s))],
            Expr::call(&characteristic_predicate(&c.name), [x.clone()]),
            Expr::call(&characteristic_predicate(&c.parent), [x]),
        )
        .with_annotation(RuleAnnotation::System);
        match out.rules.iter().find(|r| r.name == rule.name) {
            Some(r) if *r == rule => {}
            Some(_) => return Err(TypeError::Collision { name: rule.name, existing: "rule".into() }),
            None => out.rules.push(rule),
        }
    }
    Ok(out)
}
