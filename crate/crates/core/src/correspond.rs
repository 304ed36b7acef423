//! Model correspondence between the two ways of eliminating rule modifiers.
//! Every model of the precondition variant is transformed into a model of
//! the derivability variant and conversely, and the transformed
//! interpretations are checked against the other formula set.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::enumerate::{Problem, SearchOptions, Universe};
use crate::error::LogicError;
use crate::expr::substitute;
use crate::inversion::normalize_rule;
use crate::lift::{lifted_name, RULENAME_PREFIX};
use crate::logic::{prepare, relativize, rules_to_formulas, FormulaSet, Inversions, SortKind};
use crate::model::{Interpretation, Value};
use crate::syntax::*;
use crate::transform::RestrictionVariant;
use crate::typecheck::TypeEnv;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The source model.
    pub model: Interpretation,
    /// The transformed interpretation.
    pub transformed: Interpretation,
    /// Formulas false in the transformed interpretation.
    pub failed: Vec<Name>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub precondition_models: usize,
    pub derivability_models: usize,
    /// Precondition-variant models whose transformation is not a model.
    pub to_derivability: Vec<Violation>,
    /// Derivability-variant models with no corresponding model.
    pub to_precondition: Vec<Violation>,
    /// Derivability-variant models whose projection failed but for which a
    /// model agreeing on all shared symbols was found by search.
    pub projection_fallbacks: usize,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.to_derivability.is_empty() && self.to_precondition.is_empty()
    }
}

pub fn value_expr(v: &Value) -> Expr {
    match v {
        Value::Bool(b) => Expr::bool(*b),
        Value::Int(i) => Expr::int(*i),
        Value::Elem(n) => Expr::var(n.clone()),
    }
}

/// The lifted predicates of `fd` with the rules concluding them.
fn lifted(fd: &FormulaSet) -> Vec<(Name, Vec<Name>)> {
    fd.sorts
        .iter()
        .filter_map(|(s, k)| match k {
            SortKind::Enum(els) => s.strip_prefix(RULENAME_PREFIX).map(|p| (Name::from(p), els.clone())),
            SortKind::Carrier => None,
        })
        .collect()
}

fn domain(u: &Universe, t: &LType) -> Result<Vec<Value>, LogicError> {
    Ok(match t {
        LType::Boolean => vec![Value::Bool(false), Value::Bool(true)],
        LType::Integer => u.ints.iter().map(|i| Value::Int(*i)).collect(),
        LType::Class(s) => {
            u.sorts.get(s).cloned().ok_or_else(|| LogicError::Unsupported(format!("unknown sort `{s}`")))?
        }
        _ => return Err(LogicError::Unsupported("higher-order argument".into())),
    })
}

/// All argument tuples of a symbol of type `t`.
fn tuples(u: &Universe, t: &LType) -> Result<Vec<Vec<Value>>, LogicError> {
    let mut out = vec![Vec::new()];
    for a in t.uncurry().0 {
        let d = domain(u, a)?;
        out = out
            .into_iter()
            .flat_map(|p| {
                d.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    Ok(out)
}

fn restrict_tables(m: &Interpretation, fs: &FormulaSet, u: &Universe) -> Interpretation {
    Interpretation {
        sorts: u.sorts.clone(),
        tables: m
            .tables
            .iter()
            .filter(|(n, _)| fs.decls.contains_key(*n))
            .map(|(n, t)| (n.clone(), t.clone()))
            .collect(),
    }
}

/// Checks both directions of the model correspondence for an annotated
/// module at the given bounds. Both formula sets include inversion formulas.
pub fn check_model_correspondence(m: &RuleModule, opts: &SearchOptions) -> Result<CorrespondenceReport, LogicError> {
    let ep = prepare(m, RestrictionVariant::ViaPrecondition)?;
    let ed = prepare(m, RestrictionVariant::ViaDerivability)?;
    let fp = rules_to_formulas(&ep.module, Inversions::Concluded)?;
    let fd = rules_to_formulas(&ed.module, Inversions::Concluded)?;
    let ints = opts.ints.clone().unwrap_or_else(|| {
        let mut i = fp.int_literals();
        i.extend(fd.int_literals());
        if i.is_empty() {
            i.insert(0);
        }
        i
    });
    let up = Universe::new(&fp, &opts.sizes, &ints)?;
    let ud = Universe::new(&fd, &opts.sizes, &ints)?;
    let pp = Problem::new(&fp, &up)?;
    let pd = Problem::new(&fd, &ud)?;
    let lifted = lifted(&fd);

    // normalized, relativized preconditions of the precondition-variant rules
    let env_p = TypeEnv::new(&ep.module);
    let mut pre: BTreeMap<Name, (Vec<Name>, Expr)> = BTreeMap::new();
    for (_, rules) in &lifted {
        for rn in rules {
            let r = ep.module.rule(rn).ok_or_else(|| LogicError::UnknownRule(rn.clone()))?;
            let n = normalize_rule(&env_p, r)?;
            let params = n.params.iter().map(|p| p.name.clone()).collect();
            pre.insert(rn.clone(), (params, relativize(&env_p, &n.precond)?));
        }
    }

    let models_p = pp.search(&pp.unpinned(), opts.budget, None)?;
    let mut to_derivability = Vec::new();
    for mp in &models_p {
        let asg = pp.assignment(mp)?;
        let mut md = restrict_tables(mp, &fd, &ud);
        for (c, rules) in &lifted {
            let base_ty = &fp.decls[c];
            let mut rows = Vec::new();
            for rn in rules {
                let (params, f) = &pre[rn];
                for args in tuples(&up, base_ty)? {
                    let map = params.iter().cloned().zip(args.iter().map(value_expr)).collect();
                    let holds = pp.eval_closed(&substitute(f, &map), &asg)?.unwrap_or(false);
                    let mut full = vec![Value::Elem(rn.clone())];
                    full.extend(args);
                    rows.push((full, Value::Bool(holds)));
                }
            }
            md.tables.insert(lifted_name(c), rows);
        }
        let failed = pd.violated(&md)?;
        if !failed.is_empty() {
            to_derivability.push(Violation { model: mp.clone(), transformed: md, failed });
        }
    }

    let models_d = pd.search(&pd.unpinned(), opts.budget, None)?;
    let mut to_precondition = Vec::new();
    let mut projection_fallbacks = 0;
    for md in &models_d {
        let mut mp = restrict_tables(md, &fp, &up);
        for (c, _) in &lifted {
            let ext = md.extension(&lifted_name(c));
            let rows = tuples(&up, &fp.decls[c])?
                .into_iter()
                .map(|args| {
                    let holds = ext.iter().any(|t| t[1..] == args[..]);
                    (args, Value::Bool(holds))
                })
                .collect();
            mp.tables.insert(c.clone(), rows);
        }
        let failed = pp.violated(&mp)?;
        if failed.is_empty() {
            continue;
        }
        let mut shared = mp.clone();
        for (c, _) in &lifted {
            shared.tables.remove(c);
        }
        let pins = pp.assignment(&shared)?;
        if pp.search(&pins, opts.budget, Some(1))?.is_empty() {
            to_precondition.push(Violation { model: md.clone(), transformed: mp, failed });
        } else {
            projection_fallbacks += 1;
        }
    }
    Ok(CorrespondenceReport {
        precondition_models: models_p.len(),
        derivability_models: models_d.len(),
        to_derivability,
        to_precondition,
        projection_fallbacks,
    })
}
