//! Normal logic programs and the encoding of configurations into them.

use std::fmt;

use serde::Serialize;

use crate::config::{Config, Literal};
use crate::error::SyntaxError;
use crate::term::{tokenize, Cursor, Term, Tok};

/// `head :- body.` with a possibly empty body of positive and
/// negation-as-failure literals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AspRule {
    pub head: Term,
    pub body: Vec<Literal>,
}

impl AspRule {
    pub fn fact(head: Term) -> Self {
        AspRule { head, body: Vec::new() }
    }

    pub fn new(head: Term, body: impl IntoIterator<Item = Literal>) -> Self {
        AspRule { head, body: body.into_iter().collect() }
    }

    pub fn positive(&self) -> impl Iterator<Item = &Term> {
        self.body.iter().filter(|l| l.positive).map(|l| &l.atom)
    }

    pub fn negative(&self) -> impl Iterator<Item = &Term> {
        self.body.iter().filter(|l| !l.positive).map(|l| &l.atom)
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(|l| l.atom.is_ground())
    }
}

impl fmt::Display for AspRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for (i, l) in self.body.iter().enumerate() {
            write!(f, "{}{l}", if i == 0 { " :- " } else { ", " })?;
        }
        write!(f, ".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AspProgram {
    pub rules: Vec<AspRule>,
}

impl AspProgram {
    pub fn push(&mut self, r: AspRule) {
        self.rules.push(r);
    }

    pub fn has_negation(&self) -> bool {
        self.rules.iter().any(|r| r.negative().next().is_some())
    }
}

/// One rule per line, in clingo syntax.
impl fmt::Display for AspProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn is_legal(a: &Term) -> Term {
    Term::app("is_legal", [a.clone()])
}

fn lit(pred: &str, args: &[&str]) -> Literal {
    Literal::pos(Term::app(pred, args.iter().map(|a| Term::var(*a))))
}

/// The rules shared by every configuration.
pub fn scheme() -> Vec<AspRule> {
    let v = |p: &str, args: &[&str]| Term::app(p, args.iter().map(|a| Term::var(*a)));
    let defeated = v("defeated", &["R", "C", "R1"]);
    vec![
        AspRule::new(v("opposes", &["X", "Y"]), [lit("opposes", &["Y", "X"])]),
        AspRule::new(
            defeated.clone(),
            [lit("according_to", &["R", "C"]), lit("according_to", &["R1", "C1"]), lit("despite", &["R", "R1"])],
        ),
        AspRule::new(
            defeated.clone(),
            [
                lit("according_to", &["R", "C"]),
                lit("legally_valid", &["R1", "C1"]),
                lit("opposes", &["C", "C1"]),
                lit("subject_to", &["R1", "R"]),
            ],
        ),
        AspRule::new(
            defeated,
            [
                lit("according_to", &["R", "C"]),
                lit("legally_valid", &["R1", "C1"]),
                lit("strong_subject_to", &["R1", "R"]),
            ],
        ),
        AspRule::new(v("not_legally_valid", &["R"]), [lit("defeated", &["R", "C", "R1"])]),
        AspRule::new(
            v("legally_valid", &["R", "C"]),
            [lit("according_to", &["R", "C"]), Literal::neg(v("not_legally_valid", &["R"]))],
        ),
        AspRule::new(v("is_legal", &["C"]), [lit("legally_valid", &["R", "C"])]),
    ]
}

/// Encodes a configuration: legal facts, modifier facts, one
/// `according_to` rule per defeasible rule, the `opposes` rules of each
/// inconsistent set, then the shared scheme.
pub fn emit_asp(c: &Config) -> AspProgram {
    let mut p = AspProgram::default();
    for f in &c.facts {
        p.push(AspRule::fact(is_legal(f)));
    }
    for m in &c.modifiers {
        let args = [Term::int(i64::from(m.a)), Term::int(i64::from(m.b))];
        p.push(AspRule::fact(Term::app(m.kind.predicate(), args)));
    }
    for r in &c.rules {
        let head = Term::app("according_to", [Term::int(i64::from(r.id)), r.head.clone()]);
        let body = r.body.iter().map(|l| Literal { atom: is_legal(&l.atom), positive: l.positive });
        p.push(AspRule::new(head, body));
    }
    for k in &c.inconsistent {
        let k: Vec<&Term> = k.iter().collect();
        for i in 0..k.len() {
            for j in i + 1..k.len() {
                let head = Term::app("opposes", [k[i].clone(), k[j].clone()]);
                let rest =
                    k.iter().enumerate().filter(|(n, _)| *n != i && *n != j).map(|(_, a)| Literal::pos(is_legal(a)));
                p.push(AspRule::new(head, rest));
            }
        }
    }
    p.rules.extend(scheme());
    p
}

/// Reads a normal logic program in clingo syntax. `%` starts a comment.
pub fn parse_program(src: &str) -> Result<AspProgram, SyntaxError> {
    let mut c = Cursor::new(tokenize(src, &['%'])?);
    let mut p = AspProgram::default();
    while !c.at_end() {
        let head = c.term()?;
        let mut body = Vec::new();
        if c.eat(&Tok::Arrow) {
            loop {
                if c.peek() == Some(&Tok::Ident("not".into())) {
                    c.next();
                    body.push(Literal::neg(c.term()?));
                } else {
                    body.push(Literal::pos(c.term()?));
                }
                if !c.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        c.expect(&Tok::Dot)?;
        p.push(AspRule { head, body });
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn empty_config_has_only_the_scheme() {
        let p = emit_asp(&Config::default());
        assert_eq!(p.rules, scheme());
        assert_eq!(
            p.to_string(),
            "opposes(X,Y) :- opposes(Y,X).
defeated(R,C,R1) :- according_to(R,C), according_to(R1,C1), despite(R,R1).
defeated(R,C,R1) :- according_to(R,C), legally_valid(R1,C1), opposes(C,C1), subject_to(R1,R).
defeated(R,C,R1) :- according_to(R,C), legally_valid(R1,C1), strong_subject_to(R1,R).
not_legally_valid(R) :- defeated(R,C,R1).
legally_valid(R,C) :- according_to(R,C), not not_legally_valid(R).
is_legal(C) :- legally_valid(R,C).
"
        );
    }

    #[test]
    fn pair_sets_oppose_unconditionally() {
        let c = parse_config("inconsistent: {j, k}.").unwrap();
        assert_eq!(emit_asp(&c).rules[0].to_string(), "opposes(j,k).");
    }

    #[test]
    fn triple_sets_give_three_conditional_rules() {
        let c = parse_config("inconsistent: {a, b, c}.").unwrap();
        let lines: Vec<String> = emit_asp(&c).rules[..3].iter().map(AspRule::to_string).collect();
        assert_eq!(
            lines,
            ["opposes(a,b) :- is_legal(c).", "opposes(a,c) :- is_legal(b).", "opposes(b,c) :- is_legal(a)."]
        );
    }

    #[test]
    fn rule_bodies_go_through_is_legal() {
        let c = parse_config("rule 2: e <- a, not c.\nfact: a.\nmodifier: despite(2,2).").unwrap();
        let lines: Vec<String> = emit_asp(&c).rules[..3].iter().map(AspRule::to_string).collect();
        assert_eq!(lines, ["is_legal(a).", "despite(2,2).", "according_to(2,e) :- is_legal(a), not is_legal(c)."]);
    }

    #[test]
    fn text_parses_back() {
        let c = parse_config(
            "rule 1: b <- a, not d.\nrule 2: c <- b.\nfact: a.\nmodifier: subject_to(2,1).\ninconsistent: {b, c}.",
        )
        .unwrap();
        let p = emit_asp(&c);
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
        assert!(parse_program("a :- b").is_err());
    }
}
