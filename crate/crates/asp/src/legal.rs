//! Legal models: sets of `is_legal` and `legally_valid` atoms satisfying the
//! axioms A1–A7 of a configuration.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, DefRule, Literal, ModKind, Modifier};
use crate::error::{AspError, SolveError};
use crate::term::Term;

/// Enumeration refuses configurations with more rules than this.
pub const MAX_RULE_BITS: usize = 20;

/// Ordered by valid rules first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LegalModel {
    pub legally_valid: BTreeSet<(u32, Term)>,
    pub is_legal: BTreeSet<Term>,
}

impl LegalModel {
    pub fn valid_ids(&self) -> BTreeSet<u32> {
        self.legally_valid.iter().map(|(r, _)| *r).collect()
    }

    /// The model as ground `is_legal/1` and `legally_valid/2` atoms.
    pub fn atoms(&self) -> BTreeSet<Term> {
        let mut out: BTreeSet<Term> = self.is_legal.iter().map(|a| Term::app("is_legal", [a.clone()])).collect();
        for (r, c) in &self.legally_valid {
            out.insert(Term::app("legally_valid", [Term::int(i64::from(*r)), c.clone()]));
        }
        out
    }

    /// Projects an atom set onto its `is_legal/1` and `legally_valid/2`
    /// atoms.
    pub fn project<'a>(atoms: impl IntoIterator<Item = &'a Term>) -> LegalModel {
        let mut m = LegalModel::default();
        for a in atoms {
            match a.as_fn() {
                Some(("is_legal", [x])) => {
                    m.is_legal.insert(x.clone());
                }
                Some(("legally_valid", [Term::Int(r), c])) => {
                    if let Ok(r) = u32::try_from(*r) {
                        m.legally_valid.insert((r, c.clone()));
                    }
                }
                _ => {}
            }
        }
        m
    }

    pub fn is_subset(&self, other: &LegalModel) -> bool {
        self.is_legal.is_subset(&other.is_legal) && self.legally_valid.is_subset(&other.legally_valid)
    }
}

impl fmt::Display for LegalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.atoms().iter().map(Term::to_string).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// A failed axiom instance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "axiom")]
pub enum Violation {
    /// A fact without legal status.
    A1 {
        fact: Term,
    },
    /// A valid rule whose precondition or conclusion lacks legal status.
    A2 {
        rule: u32,
    },
    /// An atom with legal status that is neither a fact nor concluded by a
    /// valid rule.
    A3 {
        atom: Term,
    },
    A4 {
        subordinate: u32,
        dominating: u32,
    },
    A5 {
        dominating: u32,
        subordinate: u32,
    },
    A6 {
        dominating: u32,
        subordinate: u32,
    },
    /// An applicable rule that is not valid and not excluded by a modifier.
    A7 {
        rule: u32,
    },
    /// A `legally_valid` atom for an unknown rule or with a wrong conclusion.
    Malformed {
        rule: u32,
        atom: Term,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::A1 { fact } => write!(f, "A1: fact {fact} is not legal"),
            Violation::A2 { rule } => write!(f, "A2: rule {rule} is valid without legal precondition and conclusion"),
            Violation::A3 { atom } => write!(f, "A3: {atom} is legal without support"),
            Violation::A4 { subordinate, dominating } => {
                write!(f, "A4: rule {subordinate} is valid despite rule {dominating}")
            }
            Violation::A5 { dominating, subordinate } => {
                write!(f, "A5: rule {subordinate} is valid although strongly subject to valid rule {dominating}")
            }
            Violation::A6 { dominating, subordinate } => {
                write!(f, "A6: rule {subordinate} is valid although subject to opposing rule {dominating}")
            }
            Violation::A7 { rule } => write!(f, "A7: rule {rule} is applicable but neither valid nor excluded"),
            Violation::Malformed { rule, atom } => write!(f, "malformed legally_valid({rule},{atom})"),
        }
    }
}

/// Axiom checks against a fixed configuration and candidate set.
struct Ctx<'a> {
    c: &'a Config,
    s: &'a LegalModel,
}

impl Ctx<'_> {
    fn legal(&self, a: &Term) -> bool {
        self.s.is_legal.contains(a)
    }

    fn valid(&self, r: u32) -> bool {
        self.c.head(r).is_some_and(|h| self.s.legally_valid.contains(&(r, h.clone())))
    }

    /// Positive body atoms are legal and negated ones are not.
    fn applicable(&self, r: &DefRule) -> bool {
        r.body.iter().all(|Literal { atom, positive }| self.legal(atom) == *positive)
    }

    fn applicable_id(&self, r: u32) -> bool {
        self.c.rule(r).is_some_and(|r| self.applicable(r))
    }

    fn mods(&self, kind: ModKind) -> impl Iterator<Item = &Modifier> {
        self.c.modifiers.iter().filter(move |m| m.kind == kind)
    }

    fn despite_excludes(&self, sub: u32) -> Option<u32> {
        self.mods(ModKind::Despite).find(|m| m.a == sub && self.applicable_id(m.b)).map(|m| m.b)
    }

    fn strong_excludes(&self, sub: u32) -> Option<u32> {
        self.mods(ModKind::StrongSubjectTo).find(|m| m.b == sub && self.valid(m.a)).map(|m| m.a)
    }

    /// Whether some inconsistent set holds both (distinct) conclusions and
    /// everything in it except the subordinate conclusion is legal.
    fn opposed(&self, dom: u32, sub: u32) -> bool {
        let (Some(cd), Some(cs)) = (self.c.head(dom), self.c.head(sub)) else { return false };
        cd != cs
            && self
                .c
                .inconsistent
                .iter()
                .any(|k| k.contains(cd) && k.contains(cs) && k.iter().all(|a| a == cs || self.legal(a)))
    }

    fn subject_excludes(&self, sub: u32) -> Option<u32> {
        self.mods(ModKind::SubjectTo).find(|m| m.b == sub && self.valid(m.a) && self.opposed(m.a, sub)).map(|m| m.a)
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for f in &self.c.facts {
            if !self.legal(f) {
                out.push(Violation::A1 { fact: f.clone() });
            }
        }
        for (r, atom) in &self.s.legally_valid {
            if self.c.head(*r) != Some(atom) {
                out.push(Violation::Malformed { rule: *r, atom: atom.clone() });
            }
        }
        for r in &self.c.rules {
            if self.valid(r.id) && !(self.applicable(r) && self.legal(&r.head)) {
                out.push(Violation::A2 { rule: r.id });
            }
        }
        for a in &self.s.is_legal {
            let supported =
                self.c.facts.contains(a) || self.s.legally_valid.iter().any(|(r, c)| c == a && self.valid(*r));
            if !supported {
                out.push(Violation::A3 { atom: a.clone() });
            }
        }
        for m in &self.c.modifiers {
            let v = match m.kind {
                ModKind::Despite if self.valid(m.a) && self.applicable_id(m.b) => {
                    Some(Violation::A4 { subordinate: m.a, dominating: m.b })
                }
                ModKind::StrongSubjectTo if self.valid(m.a) && self.valid(m.b) => {
                    Some(Violation::A5 { dominating: m.a, subordinate: m.b })
                }
                ModKind::SubjectTo if self.valid(m.a) && self.valid(m.b) && self.opposed(m.a, m.b) => {
                    Some(Violation::A6 { dominating: m.a, subordinate: m.b })
                }
                _ => None,
            };
            out.extend(v);
        }
        for r in &self.c.rules {
            let excluded = self.despite_excludes(r.id).is_some()
                || self.strong_excludes(r.id).is_some()
                || self.subject_excludes(r.id).is_some();
            if self.applicable(r) && !self.valid(r.id) && !excluded {
                out.push(Violation::A7 { rule: r.id });
            }
        }
        out.sort();
        out
    }
}

/// The axiom instances that `s` violates; empty exactly for legal models.
pub fn check_legal_model(c: &Config, s: &LegalModel) -> Vec<Violation> {
    Ctx { c, s }.violations()
}

pub fn is_legal_model(c: &Config, s: &LegalModel) -> bool {
    check_legal_model(c, s).is_empty()
}

/// The candidate determined by a set of valid rules: A1–A3 force the legal
/// atoms to be the facts plus the conclusions of the valid rules.
fn candidate(c: &Config, mask: u64) -> LegalModel {
    let mut s = LegalModel { is_legal: c.facts.clone(), legally_valid: BTreeSet::new() };
    for (i, r) in c.rules.iter().enumerate() {
        if mask >> i & 1 == 1 {
            s.is_legal.insert(r.head.clone());
            s.legally_valid.insert((r.id, r.head.clone()));
        }
    }
    s
}

/// All legal models of a ground configuration, sorted. Only candidates whose
/// legal atoms are the facts plus the conclusions of the valid rules are
/// inspected, since every other set violates A1, A2 or A3.
pub fn legal_models(c: &Config) -> Result<Vec<LegalModel>, AspError> {
    c.require_ground()?;
    let n = c.rules.len();
    if n > MAX_RULE_BITS {
        return Err(SolveError::CandidateCap { what: "legal-model enumeration", bits: n, cap: MAX_RULE_BITS }.into());
    }
    let mut out: Vec<LegalModel> = (0..1u64 << n)
        .into_par_iter()
        .filter_map(|mask| {
            let s = candidate(c, mask);
            is_legal_model(c, &s).then_some(s)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Keeps the models with no proper sub-model in `models`.
pub fn minimal_only(models: &[LegalModel]) -> Vec<LegalModel> {
    models.iter().filter(|m| !models.iter().any(|o| o != *m && o.is_subset(m))).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::term::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn model(legal: &[&str], valid: &[(u32, &str)]) -> LegalModel {
        LegalModel {
            is_legal: legal.iter().map(|s| t(s)).collect(),
            legally_valid: valid.iter().map(|(r, s)| (*r, t(s))).collect(),
        }
    }

    /// Every subset of the full candidate universe: legal status for each
    /// atom of the configuration, validity for each rule.
    fn brute_force(c: &Config) -> Vec<LegalModel> {
        let atoms: Vec<Term> = c.atoms().into_iter().collect();
        let n = atoms.len() + c.rules.len();
        let mut out = Vec::new();
        for mask in 0..1u64 << n {
            let mut s = LegalModel::default();
            for (i, a) in atoms.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.is_legal.insert(a.clone());
                }
            }
            for (j, r) in c.rules.iter().enumerate() {
                if mask >> (atoms.len() + j) & 1 == 1 {
                    s.legally_valid.insert((r.id, r.head.clone()));
                }
            }
            if is_legal_model(c, &s) {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn self_strong_subject_to_has_no_models() {
        let c = parse_config("rule 1: b <- a.\nfact: a.\nmodifier: strong_subject_to(1,1).").unwrap();
        assert!(legal_models(&c).unwrap().is_empty());
        assert!(brute_force(&c).is_empty());
    }

    #[test]
    fn converse_gap_models() {
        let c = parse_config("rule 1: a <- a.\nrule 2: b <- not a.").unwrap();
        let ms = legal_models(&c).unwrap();
        assert_eq!(ms, vec![model(&["a"], &[(1, "a")]), model(&["b"], &[(2, "b")])]);
        assert_eq!(brute_force(&c), ms);
    }

    #[test]
    fn reports_axiom_instances() {
        let c = parse_config("rule 1: b <- a.\nrule 2: c <- a.\nfact: a.\nmodifier: despite(1,2).").unwrap();
        assert_eq!(check_legal_model(&c, &model(&[], &[])), vec![Violation::A1 { fact: t("a") }]);
        assert_eq!(check_legal_model(&c, &model(&["a"], &[])), vec![Violation::A7 { rule: 2 }]);
        assert_eq!(
            check_legal_model(&c, &model(&["a", "b", "c"], &[(1, "b"), (2, "c")])),
            vec![Violation::A4 { subordinate: 1, dominating: 2 }]
        );
        assert_eq!(
            check_legal_model(&c, &model(&["a", "d"], &[(2, "c")])),
            vec![Violation::A2 { rule: 2 }, Violation::A3 { atom: t("d") }]
        );
        assert_eq!(legal_models(&c).unwrap(), vec![model(&["a", "c"], &[(2, "c")])]);
    }

    #[test]
    fn subject_to_needs_distinct_conclusions() {
        let c = parse_config("rule 1: c.\nrule 2: c.\nfact: d.\nmodifier: subject_to(1,2).\ninconsistent: {c, d}.")
            .unwrap();
        assert_eq!(legal_models(&c).unwrap(), vec![model(&["c", "d"], &[(1, "c"), (2, "c")])]);
    }

    #[test]
    fn minimal_filter() {
        let a = model(&["a"], &[]);
        let b = model(&["a", "c"], &[(1, "c")]);
        assert_eq!(minimal_only(&[a.clone(), b]), vec![a]);
    }

    #[test]
    fn projection_round_trips() {
        let m = model(&["a", "c"], &[(1, "c")]);
        let mut atoms = m.atoms();
        atoms.insert(t("according_to(1,c)"));
        assert_eq!(LegalModel::project(&atoms), m);
        assert_eq!(m.to_string(), "{is_legal(a), is_legal(c), legally_valid(1,c)}");
    }

    #[test]
    fn matches_full_universe_enumeration() {
        for src in [
            "rule 1: b <- a.\nrule 2: c <- b.\nfact: a.\nmodifier: subject_to(2,1).\ninconsistent: {b, c}.",
            "rule 1: c <- a.\nrule 2: e <- not c.\nrule 3: a <- a.\nfact: a.\nmodifier: despite(1,2).\nmodifier: strong_subject_to(3,2).",
            "rule 1: b <- not c.\nrule 2: c <- not b.",
        ] {
            let c = parse_config(src).unwrap();
            assert_eq!(legal_models(&c).unwrap(), brute_force(&c), "{src}");
        }
    }
}
