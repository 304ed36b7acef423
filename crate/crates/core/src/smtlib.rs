//! SMT-LIB 2.6 emission and a reader for the emitted subset.

use std::fmt::Write;

use thiserror::Error;

use crate::check::assertion_formulas;
use crate::error::LogicError;
use crate::logic::{FormulaSet, SortKind};
use crate::syntax::*;

fn is_simple_symbol(s: &str) -> bool {
    const EXTRA: &str = "~!@$%^&*_-+=<>.?/";
    const RESERVED: &[&str] = &["forall", "exists", "let", "match", "par", "_", "!", "as"];
    let mut chars = s.chars();
    let Some(first) = chars.next() else { return false };
    (first.is_ascii_alphabetic() || EXTRA.contains(first))
        && s.chars().all(|c| c.is_ascii_alphanumeric() || EXTRA.contains(c))
        && !RESERVED.contains(&s)
}

pub fn symbol(s: &str) -> String {
    if is_simple_symbol(s) {
        s.to_string()
    } else {
        format!("|{s}|")
    }
}

pub fn sort_name(t: &LType) -> Result<String, LogicError> {
    Ok(match t {
        LType::Class(n) => symbol(n),
        LType::Boolean => "Bool".into(),
        LType::Integer => "Int".into(),
        LType::Float => "Real".into(),
        LType::String => "String".into(),
        other => return Err(LogicError::Unsupported(format!("type {} in SMT-LIB", crate::printer::print_type(other)))),
    })
}

pub fn term(e: &Expr) -> Result<String, LogicError> {
    if let Some((head, args)) = e.as_application() {
        if !args.is_empty() {
            let args = args.into_iter().map(term).collect::<Result<Vec<_>, _>>()?;
            return Ok(format!("({} {})", symbol(head), args.join(" ")));
        }
    }
    let bin = |op: &str, a: &Expr, b: &Expr| -> Result<String, LogicError> {
        Ok(format!("({op} {} {})", term(a)?, term(b)?))
    };
    Ok(match &e.kind {
        ExprKind::Var(v) => symbol(v),
        ExprKind::Bool(b) => b.to_string(),
        ExprKind::Int(i) if *i < 0 => format!("(- {})", i.unsigned_abs()),
        ExprKind::Int(i) => i.to_string(),
        ExprKind::Float(x) => {
            let s = format!("{:?}", x.0);
            match s.strip_prefix('-') {
                Some(abs) => format!("(- {abs})"),
                None => s,
            }
        }
        ExprKind::Str(s) => format!("\"{}\"", s.replace('"', "\"\"")),
        ExprKind::Not(a) => format!("(not {})", term(a)?),
        ExprKind::And(a, b) => bin("and", a, b)?,
        ExprKind::Or(a, b) => bin("or", a, b)?,
        ExprKind::Implies(a, b) => bin("=>", a, b)?,
        ExprKind::Eq(a, b) => bin("=", a, b)?,
        ExprKind::Cmp(op, a, b) => bin(op.symbol(), a, b)?,
        ExprKind::Ite(c, t, f) => format!("(ite {} {} {})", term(c)?, term(t)?, term(f)?),
        ExprKind::Forall(v, t, b) => format!("(forall (({} {})) {})", symbol(v), sort_name(t)?, term(b)?),
        ExprKind::Exists(v, t, b) => format!("(exists (({} {})) {})", symbol(v), sort_name(t)?, term(b)?),
        ExprKind::App(..) | ExprKind::Field(..) | ExprKind::Lambda(..) => {
            return Err(LogicError::Unsupported(format!("expression `{}` in SMT-LIB", crate::printer::print_expr(e))))
        }
    })
}

/// Script declaring the sorts and symbols of `fs`, asserting its formulas
/// and the assertion (negated in validity mode), then asking for a model.
pub fn emit_smtlib(fs: &FormulaSet, a: &Assertion) -> Result<String, LogicError> {
    let problem = assertion_formulas(fs, a);
    let mut out = String::new();
    let mode = match a.mode {
        AssertMode::Valid => "valid",
        AssertMode::Satisfiable => "satisfiable",
    };
    writeln!(out, "; assertion {} ({mode})", a.name).unwrap();
    out.push_str("(set-option :produce-models true)\n(set-logic ALL)\n");
    for (s, kind) in &fs.sorts {
        match kind {
            SortKind::Carrier => writeln!(out, "(declare-sort {} 0)", symbol(s)).unwrap(),
            SortKind::Enum(els) => {
                let cons: Vec<String> = els.iter().map(|e| format!("({})", symbol(e))).collect();
                writeln!(out, "(declare-datatypes (({} 0)) (({})))", symbol(s), cons.join(" ")).unwrap();
            }
        }
    }
    for (n, t) in &fs.decls {
        let (args, res) = t.uncurry();
        let args = args.into_iter().map(sort_name).collect::<Result<Vec<_>, _>>()?;
        writeln!(out, "(declare-fun {} ({}) {})", symbol(n), args.join(" "), sort_name(res)?).unwrap();
    }
    for (origin, f) in &problem.formulas {
        writeln!(out, "; {origin}").unwrap();
        writeln!(out, "(assert {})", term(f)?).unwrap();
    }
    out.push_str("(check-sat)\n(get-model)\n");
    Ok(out)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmtError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("unsupported construct: {0}")]
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SExpr {
    Atom(String),
    Str(String),
    List(Vec<SExpr>),
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, msg: &str) -> SmtError {
        SmtError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|c| *c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<SExpr>, SmtError> {
        self.skip_ws();
        let Some(&c) = self.chars.peek() else { return Ok(None) };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        Some(')') => {
                            self.bump();
                            return Ok(Some(SExpr::List(items)));
                        }
                        None => return Err(self.err("unclosed parenthesis")),
                        _ => items.push(self.read()?.expect("non-empty input")),
                    }
                }
            }
            ')' => Err(self.err("unexpected `)`")),
            '|' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('|') => return Ok(Some(SExpr::Atom(s))),
                        Some(c) => s.push(c),
                        None => return Err(self.err("unterminated quoted symbol")),
                    }
                }
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') if self.chars.peek() == Some(&'"') => {
                            self.bump();
                            s.push('"');
                        }
                        Some('"') => return Ok(Some(SExpr::Str(s))),
                        Some(c) => s.push(c),
                        None => return Err(self.err("unterminated string")),
                    }
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Some(SExpr::Atom(s)))
            }
        }
    }
}

pub fn read_sexprs(text: &str) -> Result<Vec<SExpr>, SmtError> {
    let mut r = Reader { chars: text.chars().peekable(), line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(e) = r.read()? {
        out.push(e);
    }
    Ok(out)
}

/// Declarations and assertions of a script in the emitted subset.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Script {
    pub sorts: Vec<(Name, SortKind)>,
    pub decls: Vec<(Name, LType)>,
    pub assertions: Vec<Expr>,
    pub check_sat: bool,
}

fn unsupported(e: &SExpr) -> SmtError {
    SmtError::Unsupported(format!("{e:?}"))
}

fn atom(e: &SExpr) -> Result<&str, SmtError> {
    match e {
        SExpr::Atom(a) => Ok(a),
        _ => Err(unsupported(e)),
    }
}

fn read_sort(e: &SExpr) -> Result<LType, SmtError> {
    Ok(match atom(e)? {
        "Bool" => LType::Boolean,
        "Int" => LType::Integer,
        "Real" => LType::Float,
        "String" => LType::String,
        s => LType::class(s),
    })
}

fn read_term(e: &SExpr) -> Result<Expr, SmtError> {
    match e {
        SExpr::Str(s) => Ok(ExprKind::Str(s.clone()).into()),
        SExpr::Atom(a) => Ok(match a.as_str() {
            "true" => Expr::bool(true),
            "false" => Expr::bool(false),
            s if s.chars().all(|c| c.is_ascii_digit()) => Expr::int(s.parse().map_err(|_| unsupported(e))?),
            s if s.contains('.') && s.parse::<f64>().is_ok() => ExprKind::Float(FloatLit(s.parse().unwrap())).into(),
            s => Expr::var(s),
        }),
        SExpr::List(items) => {
            let (head, rest) = items.split_first().ok_or_else(|| unsupported(e))?;
            let args = || rest.iter().map(read_term).collect::<Result<Vec<_>, _>>();
            let two = |f: fn(Box<Expr>, Box<Expr>) -> ExprKind| -> Result<Expr, SmtError> {
                match args()?.as_slice() {
                    [a, b] => Ok(f(Box::new(a.clone()), Box::new(b.clone())).into()),
                    _ => Err(unsupported(e)),
                }
            };
            let cmp = |op| two_cmp(op, rest, e);
            match atom(head)? {
                "not" => match args()?.as_slice() {
                    [a] => Ok(Expr::not(a.clone())),
                    _ => Err(unsupported(e)),
                },
                "-" => match args()?.as_slice() {
                    [x] => match &x.kind {
                        ExprKind::Int(i) => Ok(Expr::int(-i)),
                        ExprKind::Float(f) => Ok(ExprKind::Float(FloatLit(-f.0)).into()),
                        _ => Err(unsupported(e)),
                    },
                    _ => Err(unsupported(e)),
                },
                "and" => two(ExprKind::And),
                "or" => two(ExprKind::Or),
                "=>" => two(ExprKind::Implies),
                "=" => two(ExprKind::Eq),
                "<" => cmp(CmpOp::Lt),
                "<=" => cmp(CmpOp::Le),
                ">" => cmp(CmpOp::Gt),
                ">=" => cmp(CmpOp::Ge),
                "ite" => match args()?.as_slice() {
                    [c, t, f] => {
                        Ok(ExprKind::Ite(Box::new(c.clone()), Box::new(t.clone()), Box::new(f.clone())).into())
                    }
                    _ => Err(unsupported(e)),
                },
                q @ ("forall" | "exists") => {
                    let [SExpr::List(binders), body] = rest else { return Err(unsupported(e)) };
                    let [SExpr::List(b)] = binders.as_slice() else { return Err(unsupported(e)) };
                    let [v, s] = b.as_slice() else { return Err(unsupported(e)) };
                    let (v, s, body) = (atom(v)?, read_sort(s)?, read_term(body)?);
                    Ok(if q == "forall" { Expr::forall(v, s, body) } else { Expr::exists(v, s, body) })
                }
                f => Ok(Expr::call(f, args()?)),
            }
        }
    }
}

fn two_cmp(op: CmpOp, rest: &[SExpr], e: &SExpr) -> Result<Expr, SmtError> {
    match rest {
        [a, b] => Ok(ExprKind::Cmp(op, Box::new(read_term(a)?), Box::new(read_term(b)?)).into()),
        _ => Err(unsupported(e)),
    }
}

pub fn read_smtlib(text: &str) -> Result<Script, SmtError> {
    let mut s = Script::default();
    for cmd in read_sexprs(text)? {
        let SExpr::List(items) = &cmd else { return Err(unsupported(&cmd)) };
        let (head, rest) = items.split_first().ok_or_else(|| unsupported(&cmd))?;
        match (atom(head)?, rest) {
            ("set-option" | "set-logic" | "get-model", _) => {}
            ("check-sat", _) => s.check_sat = true,
            ("declare-sort", [n, _]) => s.sorts.push((Name::from(atom(n)?), SortKind::Carrier)),
            ("declare-datatypes", [SExpr::List(names), SExpr::List(defs)]) => {
                for (n, d) in names.iter().zip(defs) {
                    let SExpr::List(nl) = n else { return Err(unsupported(n)) };
                    let SExpr::List(cons) = d else { return Err(unsupported(d)) };
                    let els = cons
                        .iter()
                        .map(|c| match c {
                            SExpr::List(x) if x.len() == 1 => atom(&x[0]).map(Name::from),
                            _ => Err(unsupported(c)),
                        })
                        .collect::<Result<_, _>>()?;
                    s.sorts.push((Name::from(atom(&nl[0])?), SortKind::Enum(els)));
                }
            }
            ("declare-fun", [n, SExpr::List(args), res]) => {
                let args = args.iter().map(read_sort).collect::<Result<Vec<_>, _>>()?;
                s.decls.push((Name::from(atom(n)?), LType::curried(args, read_sort(res)?)));
            }
            ("declare-const", [n, res]) => s.decls.push((Name::from(atom(n)?), read_sort(res)?)),
            ("assert", [t]) => s.assertions.push(read_term(t)?),
            _ => return Err(unsupported(&cmd)),
        }
    }
    Ok(s)
}
