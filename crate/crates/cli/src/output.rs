//! Exit statuses, diagnostics and output plumbing shared by the commands.

use std::fmt;
use std::io::{IsTerminal, Write};
use std::path::Path;

use serde_json::{Map, Value};

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "l4-cli/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A countermodel, violation or failed check.
    PropertyFails,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::PropertyFails => 1,
        }
    }

    pub fn from_holds(holds: bool) -> Status {
        if holds {
            Status::Ok
        } else {
            Status::PropertyFails
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Unreadable, malformed or ill-typed input.
    Input(String),
    /// A search or grounding limit was hit.
    Cap(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    pub fn input(e: impl fmt::Display) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "{m}"),
            Failure::Cap(m) => write!(f, "resource cap: {m}"),
        }
    }
}

pub fn parse_size(s: &str) -> Result<(String, usize), String> {
    let (sort, n) = s.split_once('=').ok_or_else(|| format!("expected SORT=N, found `{s}`"))?;
    let n = n.trim().parse().map_err(|_| format!("carrier size `{n}` is not a number"))?;
    Ok((sort.trim().to_string(), n))
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out` if given, otherwise to stdout.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print(text);
            Ok(())
        }
    }
}

pub fn print(text: &str) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

/// A JSON report with the schema tag and command name in front.
pub fn report(command: &str, fields: Value) -> String {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(SCHEMA));
    m.insert("command".into(), Value::from(command));
    if let Value::Object(rest) = fields {
        m.extend(rest);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Colors a verdict line when stdout is a terminal and `NO_COLOR` is unset.
pub fn verdict(text: &str, good: bool) -> String {
    let color = std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stdout().is_terminal();
    if color {
        format!("\x1b[{}m{text}\x1b[0m", if good { 32 } else { 31 })
    } else {
        text.to_string()
    }
}
