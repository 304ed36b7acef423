//! Finite interpretations.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, Serializer};
use serde_json::json;

use crate::syntax::Name;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bool(bool),
    Int(i64),
    /// A carrier element or enumeration constant.
    Elem(Name),
}

impl Value {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Bool(b) => json!(b),
            Value::Int(i) => json!(i),
            Value::Elem(n) => json!(n.as_str()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Elem(n) => write!(f, "{n}"),
        }
    }
}

/// Name of the `i`-th element (from 1) of a carrier.
pub fn carrier_element(sort: &str, i: usize) -> Name {
    Name::from(format!("{sort}#{i}"))
}

/// Carriers and complete function tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub sorts: BTreeMap<Name, Vec<Value>>,
    /// Rows `(arguments, value)` in argument order.
    pub tables: BTreeMap<Name, Vec<(Vec<Value>, Value)>>,
}

impl Interpretation {
    pub fn value(&self, symbol: &str, args: &[Value]) -> Option<&Value> {
        self.tables.get(symbol)?.iter().find(|(a, _)| a == args).map(|(_, v)| v)
    }

    /// Argument tuples on which a predicate holds.
    pub fn extension(&self, symbol: &str) -> Vec<&[Value]> {
        self.tables
            .get(symbol)
            .map(|rows| rows.iter().filter(|(_, v)| *v == Value::Bool(true)).map(|(a, _)| a.as_slice()).collect())
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let sorts: serde_json::Map<String, serde_json::Value> =
            self.sorts.iter().map(|(s, els)| (s.to_string(), els.iter().map(Value::to_json).collect())).collect();
        let tables: serde_json::Map<String, serde_json::Value> = self
            .tables
            .iter()
            .map(|(s, rows)| {
                let rows: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|(args, v)| args.iter().chain(std::iter::once(v)).map(Value::to_json).collect())
                    .collect();
                (s.to_string(), rows.into())
            })
            .collect();
        json!({ "sorts": sorts, "tables": tables })
    }
}

impl Serialize for Interpretation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn tuple(args: &[Value]) -> String {
    args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, els) in &self.sorts {
            writeln!(f, "sort {s} = {{{}}}", tuple(els))?;
        }
        for (sym, rows) in &self.tables {
            let boolean = rows.iter().all(|(_, v)| matches!(v, Value::Bool(_)));
            match rows.as_slice() {
                [(args, v)] if args.is_empty() => writeln!(f, "{sym} = {v}")?,
                _ if boolean => {
                    let holds: Vec<String> = self.extension(sym).iter().map(|a| format!("({})", tuple(a))).collect();
                    writeln!(f, "{sym} = {{{}}}", holds.join(", "))?;
                }
                _ => {
                    for (args, v) in rows {
                        writeln!(f, "{sym}({}) = {v}", tuple(args))?;
                    }
                }
            }
        }
        Ok(())
    }
}
