//! The differential state language.
//!
//! A diff is a list of edit operations, one per line, applied in order to a
//! state record:
//!
//! ```text
//! #diff v1
//! call shuffle seed=5120935
//! set stacks/2 95
//! append community H5
//! remove deck/0
//! move deck 3 community
//! ```
//!
//! Paths are slash-separated record keys and list indices. Values use the
//! same one-line syntax as the state codec. `call` runs a registered core
//! function (see [`registry`]) with `key=value` arguments. The header line is
//! written on output and optional on input; blank lines are ignored.

mod compute;
mod merge;
pub mod registry;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::state::STATE_KEYS;
use crate::value::Value;

pub use compute::compute_diff;
pub use merge::{apply_ops, equivalent, merge, Equivalence, MergeError, Mismatch};
pub(crate) use merge::first_difference;
pub use registry::{invoke_core, CoreError, CoreFn, Param, REGISTRY};

pub const DIFF_HEADER: &str = "#diff v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("line {line}: {reason}")]
    MalformedOp { line: usize, reason: String },
    #[error("line {line}: unknown core function `{name}`")]
    UnknownCoreFn { name: String, line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Seg {
    Key(String),
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Path(pub Vec<Seg>);

impl Path {
    pub fn key(k: &str) -> Self {
        Path(vec![Seg::Key(k.to_string())])
    }

    pub fn child(&self, seg: Seg) -> Self {
        let mut p = self.0.clone();
        p.push(seg);
        Path(p)
    }

    /// Parses `a/b/3`. The first segment must name a state key.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut segs = Vec::new();
        for (i, part) in s.split('/').enumerate() {
            if part.is_empty() {
                return Err(format!("empty segment in path `{s}`"));
            }
            if i == 0 {
                if !STATE_KEYS.contains(&part) {
                    return Err(format!("unknown state key `{part}`"));
                }
                segs.push(Seg::Key(part.to_string()));
            } else if part.bytes().all(|b| b.is_ascii_digit()) {
                segs.push(Seg::Index(part.parse().map_err(|_| format!("bad index `{part}`"))?));
            } else if crate::card::is_token_text(part) {
                segs.push(Seg::Key(part.to_string()));
            } else {
                return Err(format!("bad path segment `{part}`"));
            }
        }
        Ok(Path(segs))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            match seg {
                Seg::Key(k) => f.write_str(k)?,
                Seg::Index(n) => write!(f, "{n}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOp {
    Set { path: Path, value: Value },
    /// Removes one list element.
    Remove { path: Path },
    /// Appends one element to a list.
    Append { path: Path, value: Value },
    /// Moves the first `count` elements of one list to the end of another.
    Move { src: Path, count: usize, dst: Path },
    Call { name: String, args: Vec<(String, Value)> },
}

impl EditOp {
    pub fn call(name: &str, args: &[(&str, Value)]) -> Self {
        EditOp::Call { name: name.to_string(), args: args.iter().map(|(k, v)| (k.to_string(), v.clone())).collect() }
    }

    pub fn render(&self) -> String {
        match self {
            EditOp::Set { path, value } => format!("set {path} {value}"),
            EditOp::Remove { path } => format!("remove {path}"),
            EditOp::Append { path, value } => format!("append {path} {value}"),
            EditOp::Move { src, count, dst } => format!("move {src} {count} {dst}"),
            EditOp::Call { name, args } => {
                let mut s = format!("call {name}");
                for (k, v) in args {
                    s.push(' ');
                    s.push_str(k);
                    s.push('=');
                    s.push_str(&v.render());
                }
                s
            }
        }
    }

    /// Rendered length in bytes, without building the string for the common ops.
    pub(crate) fn rendered_len(&self) -> usize {
        self.render().len()
    }
}

/// An ordered list of edit operations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffScript {
    pub ops: Vec<EditOp>,
}

impl DiffScript {
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Text form with header, one op per line.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(16 + self.ops.len() * 24);
        out.push_str(DIFF_HEADER);
        out.push('\n');
        for op in &self.ops {
            out.push_str(&op.render());
            out.push('\n');
        }
        out
    }

    /// Core-function calls in the script.
    pub fn calls(&self) -> impl Iterator<Item = (&str, &[(String, Value)])> {
        self.ops.iter().filter_map(|op| match op {
            EditOp::Call { name, args } => Some((name.as_str(), args.as_slice())),
            _ => None,
        })
    }
}

impl fmt::Display for DiffScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn render_diff(script: &DiffScript) -> String {
    script.render()
}

pub fn parse_diff(text: &str) -> Result<DiffScript, DiffError> {
    let mut ops = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('#') {
            if !seen_content && t == DIFF_HEADER {
                seen_content = true;
                continue;
            }
            return Err(DiffError::MalformedOp { line, reason: format!("unexpected `{t}`") });
        }
        seen_content = true;
        ops.push(parse_op(t, line)?);
    }
    Ok(DiffScript { ops })
}

fn parse_op(t: &str, line: usize) -> Result<EditOp, DiffError> {
    let bad = |reason: String| DiffError::MalformedOp { line, reason };
    let (verb, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
    let rest = rest.trim_start();
    let path_and_rest = |rest: &str| -> Result<(Path, String), DiffError> {
        let (p, r) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        if p.is_empty() {
            return Err(bad("missing path".into()));
        }
        Ok((Path::parse(p).map_err(bad)?, r.trim().to_string()))
    };
    let value = |s: &str| Value::parse(s).map_err(|e| bad(format!("bad value: {e}")));
    match verb {
        "set" | "append" => {
            let (path, v) = path_and_rest(rest)?;
            if v.is_empty() {
                return Err(bad(format!("`{verb}` needs a value")));
            }
            let value = value(&v)?;
            Ok(if verb == "set" { EditOp::Set { path, value } } else { EditOp::Append { path, value } })
        }
        "remove" => {
            let (path, r) = path_and_rest(rest)?;
            if !r.is_empty() {
                return Err(bad("`remove` takes only a path".into()));
            }
            if !matches!(path.0.last(), Some(Seg::Index(_))) {
                return Err(bad("`remove` needs a list index".into()));
            }
            Ok(EditOp::Remove { path })
        }
        "move" => {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let [src, count, dst] = parts[..] else {
                return Err(bad("`move` takes source, count and destination".into()));
            };
            Ok(EditOp::Move {
                src: Path::parse(src).map_err(bad)?,
                count: count.parse().map_err(|_| bad(format!("bad count `{count}`")))?,
                dst: Path::parse(dst).map_err(bad)?,
            })
        }
        "call" => {
            let mut parts = rest.split_whitespace();
            let name = parts.next().ok_or_else(|| bad("`call` needs a function name".into()))?;
            if registry::lookup(name).is_none() {
                return Err(DiffError::UnknownCoreFn { name: name.to_string(), line });
            }
            let mut args = Vec::new();
            for a in parts {
                let (k, v) = a.split_once('=').ok_or_else(|| bad(format!("argument `{a}` is not key=value")))?;
                if k.is_empty() || args.iter().any(|(x, _): &(String, Value)| x == k) {
                    return Err(bad(format!("bad argument name in `{a}`")));
                }
                args.push((k.to_string(), value(v)?));
            }
            Ok(EditOp::Call { name: name.to_string(), args })
        }
        _ => Err(bad(format!("unknown operation `{verb}`"))),
    }
}

impl Serialize for DiffScript {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for DiffScript {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_diff(&s).map_err(serde::de::Error::custom)
    }
}
