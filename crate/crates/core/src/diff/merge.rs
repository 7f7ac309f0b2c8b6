use serde::Serialize;
use thiserror::Error;

use super::{parse_diff, registry, DiffError, DiffScript, EditOp, Path, Seg};
use crate::script::GameSpec;
use crate::state::{GameState, STATE_KEYS};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("op {op}: {reason}")]
    BadPath { op: usize, reason: String },
    #[error("op {op}: core function `{name}` failed: {reason}")]
    CoreFnFailure { op: usize, name: String, reason: String },
    #[error("result is not a state record: {0}")]
    NotAState(String),
}

/// Applies `diff` to `prev`. Core-function calls need the game's spec.
pub fn merge(spec: &GameSpec, prev: &GameState, diff: &DiffScript) -> Result<GameState, MergeError> {
    let v = apply_ops(prev.to_value(), &diff.ops, Some(spec))?;
    GameState::from_value(&v).map_err(MergeError::NotAState)
}

/// Applies ops to a state value. Without a spec, calls fail.
pub fn apply_ops(mut v: Value, ops: &[EditOp], spec: Option<&GameSpec>) -> Result<Value, MergeError> {
    for (i, op) in ops.iter().enumerate() {
        let bad = |reason: String| MergeError::BadPath { op: i, reason };
        match op {
            EditOp::Set { path, value } => *resolve(&mut v, path).map_err(bad)? = value.clone(),
            EditOp::Append { path, value } => list_at(&mut v, path).map_err(bad)?.push(value.clone()),
            EditOp::Remove { path } => {
                let (parent, last) = path.0.split_at(path.0.len() - 1);
                let Seg::Index(idx) = last[0] else { return Err(bad(format!("`{path}` is not a list element"))) };
                let list = list_at(&mut v, &Path(parent.to_vec())).map_err(bad)?;
                if idx >= list.len() {
                    return Err(bad(format!("`{path}` is out of range")));
                }
                list.remove(idx);
            }
            EditOp::Move { src, count, dst } => {
                let taken: Vec<Value> = {
                    let list = list_at(&mut v, src).map_err(bad)?;
                    if *count > list.len() {
                        return Err(bad(format!("`{src}` holds fewer than {count} elements")));
                    }
                    list.drain(..*count).collect()
                };
                list_at(&mut v, dst).map_err(bad)?.extend(taken);
            }
            EditOp::Call { name, args } => {
                let fail = |reason: String| MergeError::CoreFnFailure { op: i, name: name.clone(), reason };
                let spec = spec.ok_or_else(|| fail("no game spec available".into()))?;
                let state = GameState::from_value(&v).map_err(&fail)?;
                let out = registry::invoke_core(spec, name, args, &state).map_err(|e| fail(e.to_string()))?;
                v = out.to_value();
            }
        }
    }
    Ok(v)
}

fn resolve<'a>(v: &'a mut Value, path: &Path) -> Result<&'a mut Value, String> {
    let mut cur = v;
    for seg in &path.0 {
        cur = match (seg, cur) {
            (Seg::Key(k), m @ Value::Map(_)) => m.get_mut(k).ok_or_else(|| format!("no key `{k}` in `{path}`"))?,
            (Seg::Index(i), Value::List(items)) => {
                let len = items.len();
                items.get_mut(*i).ok_or_else(|| format!("index {i} out of range ({len}) in `{path}`"))?
            }
            _ => return Err(format!("`{path}` does not resolve")),
        };
    }
    Ok(cur)
}

fn list_at<'a>(v: &'a mut Value, path: &Path) -> Result<&'a mut Vec<Value>, String> {
    match resolve(v, path)? {
        Value::List(items) => Ok(items),
        _ => Err(format!("`{path}` is not a list")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Mismatch {
    ParseError(String),
    MergeError(String),
    /// The first record key whose value differs.
    StateMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Equivalence {
    Equivalent,
    NotEquivalent(Mismatch),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Whether a predicted diff has the same effect on `prev` as the gold diff.
/// Identical texts match without running anything; otherwise both are applied
/// and the resulting records compared. Only a broken gold diff is an error.
pub fn equivalent(spec: &GameSpec, prev: &GameState, pred: &str, gold: &str) -> Result<Equivalence, DiffError> {
    if pred == gold {
        return Ok(Equivalence::Equivalent);
    }
    let gold = parse_diff(gold)?;
    let pred = match parse_diff(pred) {
        Ok(p) => p,
        Err(e) => return Ok(Equivalence::NotEquivalent(Mismatch::ParseError(e.to_string()))),
    };
    let base = prev.to_value();
    let want = apply_ops(base.clone(), &gold.ops, Some(spec))
        .map_err(|e| DiffError::MalformedOp { line: 0, reason: format!("gold diff does not apply: {e}") })?;
    let got = match apply_ops(base, &pred.ops, Some(spec)) {
        Ok(v) => v,
        Err(e) => return Ok(Equivalence::NotEquivalent(Mismatch::MergeError(e.to_string()))),
    };
    Ok(match first_difference(&got, &want) {
        None => Equivalence::Equivalent,
        Some(k) => Equivalence::NotEquivalent(Mismatch::StateMismatch(k)),
    })
}

/// First state key whose values differ, or a structural note.
pub(crate) fn first_difference(a: &Value, b: &Value) -> Option<String> {
    if a == b {
        return None;
    }
    for k in STATE_KEYS {
        if a.get(k) != b.get(k) {
            return Some(k.to_string());
        }
    }
    Some("record".to_string())
}
