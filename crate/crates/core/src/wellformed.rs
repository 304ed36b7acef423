//! Module-level well-formedness diagnostics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::expr::free_vars;
use crate::syntax::*;
use crate::typecheck::TypeEnv;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl Diagnostic {
    fn error(span: Span, message: String) -> Self {
        Diagnostic { severity: Severity::Error, line: span.line, col: span.col, message }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.col, self.message)
    }
}

const BUILTIN_TYPES: &[&str] = &["Boolean", "Integer", "Float", "String"];

/// Checks every module invariant and reports violations ordered by source
/// position. An empty result means the module is well formed.
pub fn check_well_formed(m: &RuleModule) -> Vec<Diagnostic> {
    let env = TypeEnv::new(m);
    let mut out = Vec::new();
    check_classes(m, &env, &mut out);
    check_decls(m, &env, &mut out);
    check_rules(m, &env, &mut out);
    check_assertions(m, &env, &mut out);
    // stable sort keeps emission order for diagnostics at the same position
    out.sort_by_key(|d| (d.line, d.col));
    out
}

fn check_classes(m: &RuleModule, env: &TypeEnv, out: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    for c in &m.classes {
        if !seen.insert(&c.name) {
            out.push(Diagnostic::error(c.span, format!("duplicate class `{}`", c.name)));
            continue;
        }
        if BUILTIN_TYPES.contains(&c.name.as_str()) || c.name.as_str() == TOP_CLASS {
            out.push(Diagnostic::error(c.span, format!("class name `{}` is reserved", c.name)));
        }
        if BUILTIN_TYPES.contains(&c.parent.as_str()) {
            out.push(Diagnostic::error(
                c.span,
                format!("class `{}` cannot extend builtin type `{}`", c.name, c.parent),
            ));
        } else if c.parent.as_str() != TOP_CLASS && !env.is_class(&c.parent) {
            out.push(Diagnostic::error(c.span, format!("class `{}` extends unknown class `{}`", c.name, c.parent)));
        } else if env.is_class(&c.name) && env.sort_of(&c.name).is_none() {
            out.push(Diagnostic::error(c.span, format!("class `{}` is part of an inheritance cycle", c.name)));
        }
        let mut attrs = BTreeSet::new();
        for a in &c.attributes {
            if !attrs.insert(&a.name) {
                out.push(Diagnostic::error(c.span, format!("duplicate attribute `{}` in class `{}`", a.name, c.name)));
            }
            if let Err(e) = env.resolve(&a.ty) {
                out.push(Diagnostic::error(c.span, e.to_string()));
            }
        }
    }
    let mut enums = BTreeSet::new();
    for e in &m.enums {
        if !enums.insert(&e.name) || env.is_class(&e.name) {
            out.push(Diagnostic::error(e.span, format!("duplicate type name `{}`", e.name)));
        }
        let mut els = BTreeSet::new();
        for el in &e.elements {
            if !els.insert(el) {
                out.push(Diagnostic::error(e.span, format!("duplicate element `{el}` in `{}`", e.name)));
            }
        }
    }
}

fn check_decls(m: &RuleModule, env: &TypeEnv, out: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    for d in m.decls.iter().chain(m.globals.iter()) {
        if !seen.insert(&d.name) {
            out.push(Diagnostic::error(d.span, format!("duplicate declaration `{}`", d.name)));
        }
        if let Err(e) = env.resolve(&d.ty) {
            out.push(Diagnostic::error(d.span, e.to_string()));
        }
    }
}

fn undeclared(env: &TypeEnv, bound: &[Param], e: &Expr) -> BTreeSet<Name> {
    free_vars(e)
        .into_iter()
        .filter(|v| !bound.iter().any(|p| &p.name == v) && env.symbol(v).is_none() && env.enum_of_element(v).is_none())
        .collect()
}

fn check_rules(m: &RuleModule, env: &TypeEnv, out: &mut Vec<Diagnostic>) {
    let names: BTreeMap<&Name, &Rule> = m.rules.iter().map(|r| (&r.name, r)).collect();
    let mut seen = BTreeSet::new();
    for r in &m.rules {
        if !seen.insert(&r.name) {
            out.push(Diagnostic::error(r.span, format!("duplicate rule name `{}`", r.name)));
        }
        let mut params = BTreeSet::new();
        let mut types_ok = true;
        for p in &r.params {
            if !params.insert(&p.name) {
                out.push(Diagnostic::error(r.span, format!("duplicate parameter `{}` in rule `{}`", p.name, r.name)));
            }
            if let Err(e) = env.resolve(&p.ty) {
                types_ok = false;
                out.push(Diagnostic::error(r.span, e.to_string()));
            }
        }
        let refs: Vec<&Name> = match &r.annotation {
            Some(RuleAnnotation::Restrict { subject_to, despite }) => subject_to.iter().chain(despite.iter()).collect(),
            Some(RuleAnnotation::Derived(t)) => t.referenced_rules(),
            _ => Vec::new(),
        };
        for n in refs {
            if !names.contains_key(n) {
                out.push(Diagnostic::error(r.span, format!("rule `{}` refers to unknown rule `{n}`", r.name)));
            }
        }
        let mut free = undeclared(env, &r.params, &r.precond);
        free.extend(undeclared(env, &r.params, &r.postcond));
        if let Some(TransformExpr::Remap { params, subst, .. }) = r.derivation() {
            for (_, e) in subst {
                free.extend(undeclared(env, params, e));
            }
        }
        for v in &free {
            out.push(Diagnostic::error(r.span, format!("free variable `{v}` in rule `{}`", r.name)));
        }
        if free.is_empty() && types_ok {
            if let Err(e) = env.check_rule(r) {
                out.push(Diagnostic::error(r.span, e.to_string()));
            }
        }
    }
}

fn check_assertions(m: &RuleModule, env: &TypeEnv, out: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    for a in &m.assertions {
        if !seen.insert(&a.name) {
            out.push(Diagnostic::error(a.span, format!("duplicate assertion `{}`", a.name)));
        }
        for n in a.adjust.add.iter().chain(a.adjust.delete.iter()) {
            if m.rule(n).is_none() {
                out.push(Diagnostic::error(a.span, format!("assertion `{}` refers to unknown rule `{n}`", a.name)));
            }
        }
        let free = undeclared(env, &[], &a.formula);
        for v in &free {
            out.push(Diagnostic::error(a.span, format!("free variable `{v}` in assertion `{}`", a.name)));
        }
        if free.is_empty() {
            if let Err(e) = env.check_formula(&[], &a.formula, &format!("assertion `{}`", a.name)) {
                out.push(Diagnostic::error(a.span, e.to_string()));
            }
        }
    }
}
