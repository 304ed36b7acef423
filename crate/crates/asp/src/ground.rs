//! Instantiation of schematic configurations over a constant set.
//!
//! A schematic rule `s` with `n` instances yields rules `s*1000+1` to
//! `s*1000+n`, numbered in lexicographic order of the variable bindings.
//! Ground rules keep their ids. A modifier between two rules relates every
//! pair of instances whose bindings agree on shared variable names.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::{bindings, Config, DefRule, Literal, Modifier};
use crate::error::ConfigError;
use crate::term::Term;

/// Largest number of instances of one schematic rule.
pub const MAX_INSTANCES: usize = 999;

type Binding = BTreeMap<String, Term>;

/// Arguments of the atoms in `c`, the candidates for grounding when no
/// constant set is given, together with the declared constants.
pub fn herbrand_constants(c: &Config) -> BTreeSet<Term> {
    let mut out = Vec::new();
    for a in c.atoms() {
        a.constants(&mut out);
    }
    let mut set: BTreeSet<Term> = out.into_iter().collect();
    set.extend(c.constants.iter().cloned());
    set
}

pub fn ground(c: &Config, constants: &BTreeSet<Term>) -> Result<Config, ConfigError> {
    let consts: Vec<Term> = constants.iter().cloned().collect();
    let ground_ids: BTreeSet<u32> = c.rules.iter().filter(|r| r.is_ground()).map(|r| r.id).collect();
    let mut rules = Vec::new();
    let mut instances: BTreeMap<u32, Vec<(u32, Binding)>> = BTreeMap::new();
    for r in &c.rules {
        if r.is_ground() {
            instances.insert(r.id, vec![(r.id, Binding::new())]);
            rules.push(r.clone());
            continue;
        }
        let bs = bindings(&r.vars(), &consts);
        if bs.len() > MAX_INSTANCES {
            return Err(ConfigError::InstanceCap { id: r.id, cap: MAX_INSTANCES });
        }
        let mut inst = Vec::new();
        for (k, b) in bs.into_iter().enumerate() {
            let id =
                r.id.checked_mul(1000)
                    .and_then(|x| x.checked_add(k as u32 + 1))
                    .ok_or(ConfigError::InstanceCap { id: r.id, cap: MAX_INSTANCES })?;
            if ground_ids.contains(&id) {
                return Err(ConfigError::IdCollision(id));
            }
            let body = r.body.iter().map(|l| Literal { atom: l.atom.substitute(&b), positive: l.positive });
            rules.push(DefRule::new(id, body, r.head.substitute(&b)));
            inst.push((id, b));
        }
        instances.insert(r.id, inst);
    }

    let agree = |x: &Binding, y: &Binding| x.iter().all(|(v, t)| y.get(v).is_none_or(|u| u == t));
    let mut modifiers = BTreeSet::new();
    for m in &c.modifiers {
        let (Some(ia), Some(ib)) = (instances.get(&m.a), instances.get(&m.b)) else {
            return Err(ConfigError::UnknownRule(if instances.contains_key(&m.a) { m.b } else { m.a }));
        };
        for (a, ba) in ia {
            for (b, bb) in ib {
                if agree(ba, bb) {
                    modifiers.insert(Modifier::new(m.kind, *a, *b));
                }
            }
        }
    }

    let mut inconsistent = BTreeSet::new();
    for k in &c.inconsistent {
        let mut vars = Vec::new();
        for a in k {
            a.vars(&mut vars);
        }
        for b in bindings(&vars, &consts) {
            let gk: BTreeSet<Term> = k.iter().map(|a| a.substitute(&b)).collect();
            // bindings that merge atoms do not give an inconsistent set
            if gk.len() == k.len() {
                inconsistent.insert(gk);
            }
        }
    }

    let mut out = Config::new(rules, c.facts.iter().cloned(), modifiers, inconsistent)?;
    out.constants = c.constants.clone();
    Ok(out)
}
