//! Canonical state text.
//!
//! ```text
//! #state v1
//! flow_cache: [start, blind]
//! seed: 7
//! ...
//! message: [{from: engine, to: 3, text: "your turn to bet"}]
//! ```
//!
//! The header line is written on output and optional on input. Every key of
//! [`STATE_KEYS`] appears exactly once, in that order on output and in any
//! order on input.

use thiserror::Error;

use super::{GameState, STATE_KEYS};
use crate::value::Value;

pub const STATE_HEADER: &str = "#state v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("line {line}: {reason}")]
    MalformedState { line: usize, reason: String },
    #[error("line {line}: unknown key `{name}`")]
    UnknownKey { name: String, line: usize },
    #[error("missing key `{0}`")]
    MissingKey(String),
}

pub fn serialize_state(state: &GameState) -> String {
    let Value::Map(entries) = state.to_value() else { unreachable!("state value is a map") };
    let mut out = String::with_capacity(1024);
    out.push_str(STATE_HEADER);
    out.push('\n');
    for (k, v) in entries {
        out.push_str(&k);
        out.push_str(": ");
        v.write_to(&mut out);
        out.push('\n');
    }
    out
}

pub fn parse_state(text: &str) -> Result<GameState, StateError> {
    let mut entries: Vec<(String, Value)> = Vec::with_capacity(STATE_KEYS.len());
    let mut lines: Vec<usize> = Vec::with_capacity(STATE_KEYS.len());
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if entries.is_empty() && lines.is_empty() && trimmed.starts_with("#state") {
                if trimmed != STATE_HEADER {
                    return Err(StateError::MalformedState { line, reason: format!("unsupported header `{trimmed}`") });
                }
                continue;
            }
            return Err(StateError::MalformedState { line, reason: "unexpected comment".into() });
        }
        let (key, rest) = trimmed
            .split_once(':')
            .ok_or_else(|| StateError::MalformedState { line, reason: "expected `key: value`".into() })?;
        let key = key.trim();
        if !STATE_KEYS.contains(&key) {
            return Err(StateError::UnknownKey { name: key.to_string(), line });
        }
        if entries.iter().any(|(k, _)| k == key) {
            return Err(StateError::MalformedState { line, reason: format!("duplicate key `{key}`") });
        }
        let value = Value::parse(rest).map_err(|e| StateError::MalformedState { line, reason: e.to_string() })?;
        entries.push((key.to_string(), value));
        lines.push(line);
    }
    if let Some(missing) = STATE_KEYS.iter().find(|k| !entries.iter().any(|(e, _)| e == *k)) {
        return Err(StateError::MissingKey(missing.to_string()));
    }
    let ordered: Vec<(String, Value)> = STATE_KEYS
        .iter()
        .map(|k| {
            let i = entries.iter().position(|(e, _)| e == k).expect("checked above");
            (k.to_string(), entries[i].1.clone())
        })
        .collect();
    GameState::from_value(&Value::Map(ordered)).map_err(|reason| {
        let line = STATE_KEYS
            .iter()
            .position(|k| reason.contains(&format!("`{k}`")))
            .and_then(|ki| entries.iter().position(|(e, _)| e == STATE_KEYS[ki]))
            .map_or(0, |i| lines[i]);
        StateError::MalformedState { line, reason }
    })
}
