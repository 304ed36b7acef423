//! Pretty-printer emitting source text that re-parses to an equal module.

use std::fmt::Write;

use crate::lexer::is_plain_ident;
use crate::syntax::*;

pub fn print_type(t: &LType) -> String {
    match t {
        LType::Class(n) => n.to_string(),
        LType::Boolean => "Boolean".into(),
        LType::Integer => "Integer".into(),
        LType::Float => "Float".into(),
        LType::String => "String".into(),
        LType::Function(d, c) => {
            let ds = print_type(d);
            if d.is_function() {
                format!("({ds}) -> {}", print_type(c))
            } else {
                format!("{ds} -> {}", print_type(c))
            }
        }
        LType::Tuple(ts) => {
            let parts: Vec<String> = ts.iter().map(print_type).collect();
            format!("({})", parts.join(", "))
        }
    }
}

// Binding strength of each expression form; higher binds tighter.
const P_BINDER: u8 = 0;
const P_IMPLIES: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_CMP: u8 = 4;
const P_NOT: u8 = 5;
const P_APP: u8 = 6;
const P_ATOM: u8 = 7;

fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Lambda(..) | ExprKind::Forall(..) | ExprKind::Exists(..) | ExprKind::Ite(..) => P_BINDER,
        ExprKind::Implies(..) => P_IMPLIES,
        ExprKind::Or(..) => P_OR,
        ExprKind::And(..) => P_AND,
        ExprKind::Eq(..) | ExprKind::Cmp(..) => P_CMP,
        ExprKind::Not(_) => P_NOT,
        ExprKind::App(..) => P_APP,
        ExprKind::Int(i) if *i < 0 => P_APP,
        _ => P_ATOM,
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, P_BINDER);
    s
}

/// Writes `e` in a context requiring binding strength at least `min`.
fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let p = prec(e);
    // Binders extend to the right, so they need parentheses anywhere but the top.
    let paren = p < min || (p == P_BINDER && min > P_BINDER);
    if paren {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Var(n) => out.push_str(n),
        ExprKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        ExprKind::Int(i) => {
            let _ = write!(out, "{i}");
        }
        ExprKind::Float(FloatLit(x)) => {
            let _ = write!(out, "{x:?}");
        }
        ExprKind::Str(s) => {
            out.push('"');
            for c in s.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push('"');
        }
        ExprKind::Not(a) => {
            out.push_str("not ");
            write_expr(out, a, P_NOT);
        }
        ExprKind::And(a, b) => binary(out, a, "&&", b, P_AND, P_AND, P_AND + 1),
        ExprKind::Or(a, b) => binary(out, a, "||", b, P_OR, P_OR, P_OR + 1),
        ExprKind::Implies(a, b) => binary(out, a, "-->", b, P_IMPLIES, P_IMPLIES + 1, P_IMPLIES),
        ExprKind::Eq(a, b) => binary(out, a, "==", b, P_CMP, P_CMP + 1, P_CMP + 1),
        ExprKind::Cmp(op, a, b) => binary(out, a, op.symbol(), b, P_CMP, P_CMP + 1, P_CMP + 1),
        ExprKind::App(f, a) => {
            write_expr(out, f, P_APP);
            out.push(' ');
            write_expr(out, a, P_ATOM);
        }
        ExprKind::Field(a, f) => {
            write_expr(out, a, P_ATOM);
            out.push('.');
            out.push_str(f);
        }
        ExprKind::Lambda(v, t, body) => {
            let ts = print_type(t);
            let ts = if matches!(t, LType::Function(..)) { format!("({ts})") } else { ts };
            let _ = write!(out, "\\{v} : {ts} -> ");
            write_expr(out, body, P_BINDER);
        }
        ExprKind::Forall(v, t, body) | ExprKind::Exists(v, t, body) => {
            let q = if matches!(e.kind, ExprKind::Forall(..)) { "forall" } else { "exists" };
            let _ = write!(out, "{q} {v}: {}. ", print_type(t));
            write_expr(out, body, P_BINDER);
        }
        ExprKind::Ite(c, t, f) => {
            out.push_str("if ");
            write_expr(out, c, P_BINDER);
            out.push_str(" then ");
            write_expr(out, t, P_BINDER);
            out.push_str(" else ");
            write_expr(out, f, P_BINDER);
        }
    }
    if paren {
        out.push(')');
    }
}

fn binary(out: &mut String, a: &Expr, op: &str, b: &Expr, _p: u8, lmin: u8, rmin: u8) {
    write_expr(out, a, lmin);
    let _ = write!(out, " {op} ");
    write_expr(out, b, rmin);
}

fn name_list(ns: &[Name]) -> String {
    if ns.len() == 1 {
        ns[0].to_string()
    } else {
        let parts: Vec<&str> = ns.iter().map(|n| n.as_str()).collect();
        format!("[{}]", parts.join(", "))
    }
}

fn print_params(ps: &[Param]) -> String {
    let parts: Vec<String> = ps.iter().map(|p| format!("{}: {}", p.name, print_type(&p.ty))).collect();
    parts.join(", ")
}

pub fn print_transform(t: &TransformExpr) -> String {
    match t {
        TransformExpr::RestrictSubjectTo { target, overriders } => {
            format!("restrictSubjectTo {target} {}", name_list(overriders))
        }
        TransformExpr::Remap { target, params, subst } => {
            let s: Vec<String> = subst.iter().map(|(v, e)| format!("{v} := {}", print_expr(e))).collect();
            format!("remap {target} [{}] [{}]", print_params(params), s.join(", "))
        }
    }
}

pub fn print_annotation(a: &RuleAnnotation) -> String {
    match a {
        RuleAnnotation::Restrict { subject_to, despite } => {
            let mut parts = Vec::new();
            if !subject_to.is_empty() {
                parts.push(format!("subjectTo: {}", name_list(subject_to)));
            }
            if !despite.is_empty() {
                parts.push(format!("despite: {}", name_list(despite)));
            }
            format!("{{restrict: {{{}}}}}", parts.join(", "))
        }
        RuleAnnotation::Source => "{source}".into(),
        RuleAnnotation::System => "{system}".into(),
        RuleAnnotation::Derived(t) => format!("{{derived: {{apply: {{{}}}}}}}", print_transform(t)),
    }
}

pub fn print_rule(r: &Rule) -> String {
    let mut s = String::new();
    let is_fact = r.precond.is_true() && r.derivation().is_none();
    let _ = write!(s, "{} <{}>", if is_fact { "fact" } else { "rule" }, r.name);
    if let Some(a) = &r.annotation {
        let _ = write!(s, "\n   {}", print_annotation(a));
    }
    if r.derivation().is_some() && r.has_trivial_body() {
        s.push('\n');
        return s;
    }
    if !r.params.is_empty() {
        let _ = write!(s, "\n   for {}", print_params(&r.params));
    }
    if is_fact {
        let _ = write!(s, "\n   {}", print_expr(&r.postcond));
    } else {
        let _ = write!(s, "\n   if {}\n   then {}", print_expr(&r.precond), print_expr(&r.postcond));
    }
    s.push('\n');
    s
}

pub fn print_class(c: &ClassDecl) -> String {
    let mut s = format!("class {}", c.name);
    if c.parent.as_str() != TOP_CLASS {
        let _ = write!(s, " extends {}", c.parent);
    }
    if !c.attributes.is_empty() {
        s.push_str(" {\n");
        for a in &c.attributes {
            let _ = writeln!(s, "   {}: {}", a.name, print_type(&a.ty));
        }
        s.push('}');
    }
    s.push('\n');
    s
}

pub fn print_assertion(a: &Assertion) -> String {
    let mode = match a.mode {
        AssertMode::Valid => "valid",
        AssertMode::Satisfiable => "satisfiable",
    };
    let mut ann = format!("SMT: {{{mode}}}");
    if !a.adjust.is_empty() {
        let mut parts = Vec::new();
        if !a.adjust.add.is_empty() {
            parts.push(format!("add: {}", name_list(&a.adjust.add)));
        }
        if !a.adjust.delete.is_empty() {
            parts.push(format!("delete: {}", name_list(&a.adjust.delete)));
        }
        let _ = write!(ann, ", rules: {{{}}}", parts.join(", "));
    }
    format!("assert <{}> {{{ann}}}\n   {}\n", a.name, print_expr(&a.formula))
}

pub fn print_module(m: &RuleModule) -> String {
    let mut sections: Vec<String> = Vec::new();
    let classes: String = m.classes.iter().map(print_class).collect();
    if !classes.is_empty() {
        sections.push(classes);
    }
    let enums: String = m
        .enums
        .iter()
        .map(|e| {
            let els: Vec<&str> = e.elements.iter().map(|n| n.as_str()).collect();
            format!("enum {} {{{}}}\n", e.name, els.join(", "))
        })
        .collect();
    if !enums.is_empty() {
        sections.push(enums);
    }
    let decls: String =
        m.decls.iter().chain(m.globals.iter()).map(|d| format!("decl {} : {}\n", d.name, print_type(&d.ty))).collect();
    if !decls.is_empty() {
        sections.push(decls);
    }
    if !m.rules.is_empty() {
        let rules: Vec<String> = m.rules.iter().map(print_rule).collect();
        sections.push(rules.join("\n"));
    }
    if !m.assertions.is_empty() {
        let a: Vec<String> = m.assertions.iter().map(print_assertion).collect();
        sections.push(a.join("\n"));
    }
    sections.join("\n")
}

/// Whether a name can be printed without escaping in any position.
pub fn is_printable_name(n: &str) -> bool {
    is_plain_ident(n)
}
