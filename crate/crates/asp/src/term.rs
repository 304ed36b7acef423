//! First-order terms and the tokenizer shared by the config and program
//! readers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::SyntaxError;

/// A term. Atoms are terms too: a predicate applied to arguments, or a bare
/// constant for propositional atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Int(i64),
    /// Identifier starting with an uppercase letter or underscore.
    Var(String),
    /// A constant (no arguments) or compound term.
    Fn(String, Vec<Term>),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Term {
        Term::Fn(name.into(), Vec::new())
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(name: impl Into<String>, args: impl IntoIterator<Item = Term>) -> Term {
        Term::Fn(name.into(), args.into_iter().collect())
    }

    pub fn int(i: i64) -> Term {
        Term::Int(i)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Int(_) => true,
            Term::Var(_) => false,
            Term::Fn(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) if !out.contains(v) => out.push(v.clone()),
            Term::Fn(_, args) => args.iter().for_each(|a| a.vars(out)),
            _ => {}
        }
    }

    /// Ground subterms that are arguments of some compound term, plus the
    /// term itself when it is a bare constant.
    pub fn constants(&self, out: &mut Vec<Term>) {
        if let Term::Fn(_, args) = self {
            for a in args {
                if a.is_ground() {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                } else {
                    a.constants(out);
                }
            }
        }
    }

    pub fn substitute(&self, b: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => b.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Fn(f, args) => Term::Fn(f.clone(), args.iter().map(|a| a.substitute(b)).collect()),
            Term::Int(_) => self.clone(),
        }
    }

    /// Extends `b` so that `self` instantiated by `b` equals the ground term
    /// `g`.
    pub fn matches(&self, g: &Term, b: &mut BTreeMap<String, Term>) -> bool {
        match (self, g) {
            (Term::Var(v), _) => match b.get(v) {
                Some(t) => t == g,
                None => {
                    b.insert(v.clone(), g.clone());
                    true
                }
            },
            (Term::Int(i), Term::Int(j)) => i == j,
            (Term::Fn(f, xs), Term::Fn(h, ys)) => {
                f == h && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.matches(y, b))
            }
            _ => false,
        }
    }

    /// Name and arguments of a compound term or constant.
    pub fn as_fn(&self) -> Option<(&str, &[Term])> {
        match self {
            Term::Fn(f, args) => Some((f, args)),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(i) => write!(f, "{i}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Fn(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::Fn(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    /// `<-` or `:-`
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Arrow => write!(f, "`:-`"),
        }
    }
}

/// Tokens with their line numbers. `comment` starts a line comment.
pub(crate) fn tokenize(src: &str, comment: &[char]) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line_no = ln + 1;
        let cs: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            let c = cs[i];
            if comment.contains(&c) {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                ',' => Some(Tok::Comma),
                '.' => Some(Tok::Dot),
                _ => None,
            };
            if let Some(t) = single {
                out.push((t, line_no));
                i += 1;
            } else if c == ':' && cs.get(i + 1) == Some(&'-') || c == '<' && cs.get(i + 1) == Some(&'-') {
                out.push((Tok::Arrow, line_no));
                i += 2;
            } else if c == ':' {
                out.push((Tok::Colon, line_no));
                i += 1;
            } else if c.is_ascii_digit() || c == '-' && cs.get(i + 1).is_some_and(char::is_ascii_digit) {
                let start = i;
                i += 1;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = cs[start..i].iter().collect();
                let n = s.parse().map_err(|_| SyntaxError::new(line_no, format!("integer `{s}` out of range")))?;
                out.push((Tok::Int(n), line_no));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                    i += 1;
                }
                out.push((Tok::Ident(cs[start..i].iter().collect()), line_no));
            } else {
                return Err(SyntaxError::new(line_no, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<(Tok, usize)>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub fn line(&self) -> usize {
        self.toks.get(self.pos).or_else(|| self.toks.last()).map_or(1, |(_, l)| *l)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    pub fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.line(), msg.into())
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), SyntaxError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("{t}")))
        }
    }

    pub fn unexpected(&self, wanted: &str) -> SyntaxError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.next() {
            Some(Tok::Int(i)) => Ok(Term::Int(i)),
            Some(Tok::Ident(s)) => {
                if s.starts_with(|c: char| c.is_uppercase() || c == '_') {
                    return Ok(Term::Var(s));
                }
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.term()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(&Tok::RParen)?;
                }
                Ok(Term::Fn(s, args))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("term"))
            }
        }
    }
}

/// Parses a single term.
pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut c = Cursor::new(tokenize(src, &['%', '#'])?);
    let t = c.term()?;
    if !c.at_end() {
        return Err(c.unexpected("end of input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let t = parse_term("must_buy(rolls, bob)").unwrap();
        assert_eq!(t, Term::app("must_buy", [Term::constant("rolls"), Term::constant("bob")]));
        assert_eq!(t.to_string(), "must_buy(rolls,bob)");
        assert_eq!(parse_term("p(X, -3)").unwrap(), Term::app("p", [Term::var("X"), Term::int(-3)]));
        assert!(parse_term("p(").is_err());
    }

    #[test]
    fn matching_binds_consistently() {
        let pat = parse_term("p(X, X)").unwrap();
        let mut b = BTreeMap::new();
        assert!(!pat.matches(&parse_term("p(a, b)").unwrap(), &mut b));
        let mut b = BTreeMap::new();
        assert!(pat.matches(&parse_term("p(a, a)").unwrap(), &mut b));
        assert_eq!(b["X"], Term::constant("a"));
    }
}
