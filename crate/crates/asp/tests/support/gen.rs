//! Random ground configurations: at most 4 rules, 6 atoms, 3 modifiers and
//! 2 inconsistent sets.

use std::collections::BTreeSet;

use l4_asp::{Config, DefRule, Literal, ModKind, Modifier, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_config(rng: &mut impl Rng) -> Config {
    let n_atoms = rng.gen_range(1..=6);
    let atoms: Vec<Term> = (0..n_atoms).map(|i| Term::constant(((b'a' + i as u8) as char).to_string())).collect();
    let atom = |rng: &mut _| atoms.choose(rng).unwrap().clone();

    let n_rules = rng.gen_range(0..=4u32);
    let rules: Vec<DefRule> = (1..=n_rules)
        .map(|id| {
            let body = (0..rng.gen_range(0..=2))
                .map(|_| Literal { atom: atom(rng), positive: rng.gen_bool(0.6) })
                .collect::<Vec<_>>();
            DefRule::new(id, body, atom(rng))
        })
        .collect();
    let facts: Vec<Term> = atoms.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
    let mut modifiers = Vec::new();
    if n_rules > 0 {
        for _ in 0..rng.gen_range(0..=3) {
            let kind = *ModKind::ALL.choose(rng).unwrap();
            modifiers.push(Modifier::new(kind, rng.gen_range(1..=n_rules), rng.gen_range(1..=n_rules)));
        }
    }
    let mut inconsistent = Vec::new();
    if n_atoms >= 2 {
        for _ in 0..rng.gen_range(0..=2) {
            let size = rng.gen_range(2..=n_atoms.min(3));
            let k: BTreeSet<Term> = atoms.choose_multiple(rng, size).cloned().collect();
            inconsistent.push(k);
        }
    }
    Config::new(rules, facts, modifiers, inconsistent).expect("generated configs are valid")
}
