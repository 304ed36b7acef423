//! Rule configurations: ground defeasible rules, facts, modifiers and
//! minimal inconsistent sets, with a plain-text reader and printer.
//!
//! Modifier arguments are stored exactly as the axioms write them:
//! `despite(i, j)` has `i` subordinate and `j` dominating, while
//! `subject_to(i, j)` and `strong_subject_to(i, j)` have `i` dominating and
//! `j` subordinate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{ConfigError, SyntaxError};
use crate::term::{tokenize, Cursor, Term, Tok};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Literal {
    pub atom: Term,
    /// False for a negation-as-failure literal `not atom`.
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Term) -> Self {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: Term) -> Self {
        Literal { atom, positive: false }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "not {}", self.atom)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefRule {
    pub id: u32,
    pub body: Vec<Literal>,
    pub head: Term,
}

impl DefRule {
    pub fn new(id: u32, body: impl IntoIterator<Item = Literal>, head: Term) -> Self {
        DefRule { id, body: body.into_iter().collect(), head }
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(|l| l.atom.is_ground())
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.head.vars(&mut out);
        for l in &self.body {
            l.atom.vars(&mut out);
        }
        out
    }
}

impl fmt::Display for DefRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}: {}", self.id, self.head)?;
        for (i, l) in self.body.iter().enumerate() {
            write!(f, "{}{l}", if i == 0 { " <- " } else { ", " })?;
        }
        write!(f, ".")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModKind {
    Despite,
    SubjectTo,
    StrongSubjectTo,
}

impl ModKind {
    pub const ALL: [ModKind; 3] = [ModKind::Despite, ModKind::SubjectTo, ModKind::StrongSubjectTo];

    pub fn predicate(self) -> &'static str {
        match self {
            ModKind::Despite => "despite",
            ModKind::SubjectTo => "subject_to",
            ModKind::StrongSubjectTo => "strong_subject_to",
        }
    }
}

impl FromStr for ModKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ModKind::ALL.into_iter().find(|k| k.predicate() == s).ok_or_else(|| format!("unknown modifier `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Modifier {
    pub kind: ModKind,
    pub a: u32,
    pub b: u32,
}

impl Modifier {
    pub fn new(kind: ModKind, a: u32, b: u32) -> Self {
        Modifier { kind, a, b }
    }
}

impl fmt::Display for Modifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind.predicate(), self.a, self.b)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Config {
    /// Sorted by id.
    pub rules: Vec<DefRule>,
    pub facts: BTreeSet<Term>,
    pub modifiers: BTreeSet<Modifier>,
    pub inconsistent: BTreeSet<BTreeSet<Term>>,
    /// Extra constants for grounding schematic rules.
    pub constants: BTreeSet<Term>,
}

impl Config {
    pub fn new(
        rules: impl IntoIterator<Item = DefRule>,
        facts: impl IntoIterator<Item = Term>,
        modifiers: impl IntoIterator<Item = Modifier>,
        inconsistent: impl IntoIterator<Item = BTreeSet<Term>>,
    ) -> Result<Config, ConfigError> {
        let mut rules: Vec<DefRule> = rules.into_iter().collect();
        rules.sort_by_key(|r| r.id);
        let c = Config {
            rules,
            facts: facts.into_iter().collect(),
            modifiers: modifiers.into_iter().collect(),
            inconsistent: inconsistent.into_iter().collect(),
            constants: BTreeSet::new(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut ids = BTreeSet::new();
        for r in &self.rules {
            if !ids.insert(r.id) {
                return Err(ConfigError::DuplicateId(r.id));
            }
        }
        for m in &self.modifiers {
            for id in [m.a, m.b] {
                if !ids.contains(&id) {
                    return Err(ConfigError::UnknownRule(id));
                }
            }
        }
        for k in &self.inconsistent {
            if k.len() < 2 {
                return Err(ConfigError::SmallInconsistentSet(join(k)));
            }
        }
        if let Some(f) = self.facts.iter().find(|f| !f.is_ground()) {
            return Err(ConfigError::NonGroundFact(f.to_string()));
        }
        Ok(())
    }

    pub fn rule(&self, id: u32) -> Option<&DefRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn head(&self, id: u32) -> Option<&Term> {
        self.rule(id).map(|r| &r.head)
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(DefRule::is_ground) && self.inconsistent.iter().flatten().all(Term::is_ground)
    }

    pub fn require_ground(&self) -> Result<(), ConfigError> {
        match self.rules.iter().find(|r| !r.is_ground()) {
            Some(r) => Err(ConfigError::NonGroundRule(r.id)),
            None => Ok(()),
        }
    }

    /// Every atom occurring in facts, rules and inconsistent sets.
    pub fn atoms(&self) -> BTreeSet<Term> {
        let mut out: BTreeSet<Term> = self.facts.clone();
        for r in &self.rules {
            out.insert(r.head.clone());
            out.extend(r.body.iter().map(|l| l.atom.clone()));
        }
        out.extend(self.inconsistent.iter().flatten().cloned());
        out
    }

    pub fn with_modifier(&self, m: Modifier) -> Result<Config, ConfigError> {
        let mut c = self.clone();
        c.modifiers.insert(m);
        c.validate()?;
        Ok(c)
    }

    pub fn with_fact(&self, f: Term) -> Result<Config, ConfigError> {
        let mut c = self.clone();
        c.facts.insert(f);
        c.validate()?;
        Ok(c)
    }
}

fn join<'a>(ts: impl IntoIterator<Item = &'a Term>) -> String {
    ts.into_iter().map(Term::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        for a in &self.facts {
            writeln!(f, "fact: {a}.")?;
        }
        for m in &self.modifiers {
            writeln!(f, "modifier: {m}.")?;
        }
        for k in &self.inconsistent {
            writeln!(f, "inconsistent: {{{}}}.", join(k))?;
        }
        if !self.constants.is_empty() {
            writeln!(f, "constants: {{{}}}.", join(&self.constants))?;
        }
        Ok(())
    }
}

fn term_set(c: &mut Cursor) -> Result<BTreeSet<Term>, SyntaxError> {
    c.expect(&Tok::LBrace)?;
    let mut out = BTreeSet::new();
    if !c.eat(&Tok::RBrace) {
        loop {
            out.insert(c.term()?);
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
        c.expect(&Tok::RBrace)?;
    }
    Ok(out)
}

fn literal(c: &mut Cursor) -> Result<Literal, SyntaxError> {
    if c.peek() == Some(&Tok::Ident("not".into())) {
        c.next();
        return Ok(Literal::neg(c.term()?));
    }
    Ok(Literal::pos(c.term()?))
}

fn rule_id(c: &mut Cursor) -> Result<u32, SyntaxError> {
    match c.next() {
        Some(Tok::Int(i)) if i > 0 && i <= i64::from(u32::MAX) => Ok(i as u32),
        _ => Err(c.error("expected a positive rule id")),
    }
}

/// Reads the section format: `rule <id>: head <- lit, ...`, `fact: atom.`,
/// `modifier: kind(i,j).`, `inconsistent: {a, b}.` and
/// `constants: {c, ...}.`, one item per statement. `#` and `%` start
/// comments.
pub fn parse_config(src: &str) -> Result<Config, ConfigError> {
    let mut c = Cursor::new(tokenize(src, &['#', '%'])?);
    let mut cfg = Config::default();
    while !c.at_end() {
        let line = c.line();
        let kw = c.ident()?;
        match kw.as_str() {
            "rule" => {
                let id = rule_id(&mut c)?;
                c.expect(&Tok::Colon)?;
                let head = c.term()?;
                let mut body = Vec::new();
                if c.eat(&Tok::Arrow) && c.peek() != Some(&Tok::Dot) {
                    loop {
                        body.push(literal(&mut c)?);
                        if !c.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                cfg.rules.push(DefRule { id, body, head });
            }
            "fact" => {
                c.expect(&Tok::Colon)?;
                cfg.facts.insert(c.term()?);
            }
            "modifier" => {
                c.expect(&Tok::Colon)?;
                let name = c.ident()?;
                let kind = name.parse::<ModKind>().map_err(|e| SyntaxError::new(line, e))?;
                c.expect(&Tok::LParen)?;
                let a = rule_id(&mut c)?;
                c.expect(&Tok::Comma)?;
                let b = rule_id(&mut c)?;
                c.expect(&Tok::RParen)?;
                cfg.modifiers.insert(Modifier { kind, a, b });
            }
            "inconsistent" => {
                c.expect(&Tok::Colon)?;
                cfg.inconsistent.insert(term_set(&mut c)?);
            }
            "constants" => {
                c.expect(&Tok::Colon)?;
                cfg.constants.extend(term_set(&mut c)?);
            }
            other => return Err(SyntaxError::new(line, format!("unknown statement `{other}`")).into()),
        }
        c.expect(&Tok::Dot)?;
    }
    cfg.rules.sort_by_key(|r| r.id);
    cfg.validate()?;
    Ok(cfg)
}

/// Variable bindings of `vars` over `constants`, in lexicographic order.
pub(crate) fn bindings(vars: &[String], constants: &[Term]) -> Vec<BTreeMap<String, Term>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|b| {
                constants.iter().map(move |t| {
                    let mut b = b.clone();
                    b.insert(v.clone(), t.clone());
                    b
                })
            })
            .collect();
    }
    out
}
