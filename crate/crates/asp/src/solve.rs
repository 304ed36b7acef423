//! Grounding and stable models of normal logic programs.
//!
//! Grounding instantiates rules only against atoms that may become true,
//! treating every negative literal as satisfiable, until no new atom
//! appears. Negative literals over atoms that can never hold are dropped.
//! Stable models are found by guessing which atoms under negation as failure
//! are true, computing the least model of the reduct and keeping the guesses
//! it reproduces.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::config::Literal;
use crate::error::SolveError;
use crate::program::{AspProgram, AspRule};
use crate::term::Term;

/// Grounding refuses to produce more rules than this.
pub const GROUND_CAP: usize = 200_000;
/// At most `2^GUESS_BITS` guesses are inspected.
pub const GUESS_BITS: usize = 20;

fn check_safe(r: &AspRule) -> Result<(), SolveError> {
    let mut bound = Vec::new();
    for a in r.positive() {
        a.vars(&mut bound);
    }
    let mut used = Vec::new();
    r.head.vars(&mut used);
    for a in r.negative() {
        a.vars(&mut used);
    }
    if used.iter().any(|v| !bound.contains(v)) {
        return Err(SolveError::Unsafe(r.to_string()));
    }
    Ok(())
}

fn key(t: &Term) -> Option<(&str, usize)> {
    t.as_fn().map(|(f, args)| (f, args.len()))
}

/// Instantiates `r` against the atoms in `index`, calling `emit` per ground
/// instance.
fn instances(r: &AspRule, index: &HashMap<(&str, usize), Vec<&Term>>, emit: &mut impl FnMut(AspRule)) {
    let pos: Vec<&Term> = r.positive().collect();
    fn go(
        r: &AspRule,
        pos: &[&Term],
        i: usize,
        b: &BTreeMap<String, Term>,
        index: &HashMap<(&str, usize), Vec<&Term>>,
        emit: &mut impl FnMut(AspRule),
    ) {
        if i == pos.len() {
            emit(AspRule {
                head: r.head.substitute(b),
                body: r.body.iter().map(|l| Literal { atom: l.atom.substitute(b), positive: l.positive }).collect(),
            });
            return;
        }
        let Some(k) = key(pos[i]) else { return };
        for g in index.get(&k).into_iter().flatten() {
            let mut b2 = b.clone();
            if pos[i].matches(g, &mut b2) {
                go(r, pos, i + 1, &b2, index, emit);
            }
        }
    }
    go(r, &pos, 0, &BTreeMap::new(), index, emit);
}

/// A ground program with the same stable models as `p`. Rules appear in
/// first-derivation order.
pub fn ground_program(p: &AspProgram) -> Result<AspProgram, SolveError> {
    for r in &p.rules {
        check_safe(r)?;
    }
    let mut possible: BTreeSet<Term> = BTreeSet::new();
    let mut seen: HashSet<AspRule> = HashSet::new();
    let mut out: Vec<AspRule> = Vec::new();
    loop {
        let before = possible.len();
        let mut index: HashMap<(&str, usize), Vec<&Term>> = HashMap::new();
        for a in &possible {
            if let Some(k) = key(a) {
                index.entry(k).or_default().push(a);
            }
        }
        let mut fresh = Vec::new();
        for r in &p.rules {
            instances(r, &index, &mut |g| {
                if !seen.contains(&g) {
                    seen.insert(g.clone());
                    fresh.push(g);
                }
            });
            if seen.len() > GROUND_CAP {
                return Err(SolveError::GroundingCap(GROUND_CAP));
            }
        }
        drop(index);
        for g in fresh {
            possible.insert(g.head.clone());
            out.push(g);
        }
        if possible.len() == before {
            break;
        }
    }
    for r in &mut out {
        r.body.retain(|l| l.positive || possible.contains(&l.atom));
    }
    Ok(AspProgram { rules: out })
}

/// Ground rules over interned atoms.
struct Indexed {
    atoms: Vec<Term>,
    heads: Vec<usize>,
    pos: Vec<Vec<usize>>,
    neg: Vec<Vec<usize>>,
    /// Rules per positive body atom.
    watch: Vec<Vec<usize>>,
}

impl Indexed {
    fn new(g: &AspProgram) -> Indexed {
        let mut set: BTreeSet<&Term> = BTreeSet::new();
        for r in &g.rules {
            set.insert(&r.head);
            set.extend(r.body.iter().map(|l| &l.atom));
        }
        let atoms: Vec<Term> = set.into_iter().cloned().collect();
        let id: HashMap<&Term, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let heads = g.rules.iter().map(|r| id[&r.head]).collect();
        let pos: Vec<Vec<usize>> = g.rules.iter().map(|r| r.positive().map(|a| id[a]).collect()).collect();
        let neg = g.rules.iter().map(|r| r.negative().map(|a| id[a]).collect()).collect();
        let mut watch = vec![Vec::new(); atoms.len()];
        for (ri, ps) in pos.iter().enumerate() {
            for &a in ps {
                watch[a].push(ri);
            }
        }
        Indexed { atoms, heads, pos, neg, watch }
    }

    /// Least model of the rules whose negative literals are all satisfied
    /// by `assumed`.
    fn least_model(&self, assumed: &[bool]) -> Vec<bool> {
        let n = self.heads.len();
        let active: Vec<bool> = (0..n).map(|r| self.neg[r].iter().all(|&a| !assumed[a])).collect();
        let mut missing: Vec<usize> = self.pos.iter().map(Vec::len).collect();
        let mut truth = vec![false; self.atoms.len()];
        let mut queue: Vec<usize> = Vec::new();
        for r in 0..n {
            if active[r] && missing[r] == 0 && !truth[self.heads[r]] {
                truth[self.heads[r]] = true;
                queue.push(self.heads[r]);
            }
        }
        while let Some(a) = queue.pop() {
            for &r in &self.watch[a] {
                missing[r] -= 1;
                if active[r] && missing[r] == 0 && !truth[self.heads[r]] {
                    truth[self.heads[r]] = true;
                    queue.push(self.heads[r]);
                }
            }
        }
        truth
    }
}

/// All stable models of `p`, sorted.
pub fn answer_sets(p: &AspProgram) -> Result<Vec<BTreeSet<Term>>, SolveError> {
    let g = ground_program(p)?;
    let ix = Indexed::new(&g);
    let naf: Vec<usize> = ix.neg.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if naf.len() > GUESS_BITS {
        return Err(SolveError::CandidateCap { what: "stable-model search", bits: naf.len(), cap: GUESS_BITS });
    }
    let mut out: Vec<BTreeSet<Term>> = (0..1u64 << naf.len())
        .into_par_iter()
        .filter_map(|mask| {
            let mut assumed = vec![false; ix.atoms.len()];
            for (i, &a) in naf.iter().enumerate() {
                assumed[a] = mask >> i & 1 == 1;
            }
            let lm = ix.least_model(&assumed);
            naf.iter()
                .all(|&a| lm[a] == assumed[a])
                .then(|| lm.iter().enumerate().filter(|(_, t)| **t).map(|(i, _)| ix.atoms[i].clone()).collect())
        })
        .collect();
    out.sort();
    Ok(out)
}
