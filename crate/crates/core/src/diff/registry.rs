//! Core functions callable from diffs.

use serde::Serialize;
use thiserror::Error;

use crate::engine::core as fns;
use crate::script::GameSpec;
use crate::state::{GameState, Party};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("unknown core function `{0}`")]
    UnknownCoreFn(String),
    #[error("`{name}`: {reason}")]
    ArityMismatch { name: String, reason: String },
    #[error("`{name}`: {reason}")]
    IllegalState { name: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    /// Non-negative integer.
    Int,
    /// Seat number.
    Seat,
    /// `all` or a seat number.
    Target,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreFn {
    pub name: &'static str,
    /// Parameter name, type, and whether it may be omitted.
    pub params: &'static [(&'static str, Param, bool)],
    pub doc: &'static str,
}

pub const REGISTRY: &[CoreFn] = &[
    CoreFn {
        name: "shuffle",
        params: &[("seed", Param::Int, false)],
        doc: "Shuffle the deck with the given seed; the same seed always gives the same order.",
    },
    CoreFn {
        name: "deal",
        params: &[("n", Param::Int, false), ("to", Param::Target, true)],
        doc: "Deal n cards from the deck top to each player still in, one at a time starting left of the button.",
    },
    CoreFn { name: "flop", params: &[("n", Param::Int, false)], doc: "Move n cards from the deck top to the community cards." },
    CoreFn {
        name: "sort_hand",
        params: &[("player", Param::Seat, false)],
        doc: "Sort a player's hole cards into deck order.",
    },
    CoreFn {
        name: "rank_hands",
        params: &[("strategy", Param::Int, true)],
        doc: "Announce the best hand of every player still in, under every ranking strategy or just the given one.",
    },
    CoreFn {
        name: "collect_bets",
        params: &[],
        doc: "Move the street bets into the pots, splitting side pots for players who are all in.",
    },
    CoreFn {
        name: "award_pots",
        params: &[],
        doc: "Collect outstanding bets, compare hands and pay every pot to its winners.",
    },
    CoreFn {
        name: "next_actor",
        params: &[],
        doc: "Pass the turn to the next player who still owes a decision.",
    },
];

pub fn lookup(name: &str) -> Option<&'static CoreFn> {
    REGISTRY.iter().find(|f| f.name == name)
}

/// Runs a core function on a copy of `state`.
pub fn invoke_core(spec: &GameSpec, name: &str, args: &[(String, Value)], state: &GameState) -> Result<GameState, CoreError> {
    let def = lookup(name).ok_or_else(|| CoreError::UnknownCoreFn(name.to_string()))?;
    let arity = |reason: String| CoreError::ArityMismatch { name: name.to_string(), reason };
    let illegal = |reason: String| CoreError::IllegalState { name: name.to_string(), reason };

    for (k, _) in args {
        if !def.params.iter().any(|(p, _, _)| p == k) {
            return Err(arity(format!("unexpected argument `{k}`")));
        }
    }
    let arg = |key: &str| args.iter().find(|(k, _)| k == key).map(|(_, v)| v);
    let int = |key: &str| -> Result<Option<u64>, CoreError> {
        match arg(key) {
            None => Ok(None),
            Some(Value::Int(n)) if *n >= 0 => Ok(Some(*n as u64)),
            Some(v) => Err(arity(format!("`{key}` must be a non-negative integer, got `{v}`"))),
        }
    };
    let required = |key: &str| -> Result<u64, CoreError> { int(key)?.ok_or_else(|| arity(format!("missing `{key}`"))) };

    let mut s = state.clone();
    match name {
        "shuffle" => fns::shuffle(&mut s, required("seed")?),
        "deal" => {
            let to = match arg("to") {
                None => Party::All,
                Some(Value::Str(t)) if t == "all" => Party::All,
                Some(Value::Int(p)) if *p >= 0 => Party::Player(*p as usize),
                Some(v) => return Err(arity(format!("`to` must be `all` or a seat, got `{v}`"))),
            };
            fns::deal(&mut s, required("n")? as usize, to).map_err(illegal)?;
        }
        "flop" => fns::flop(&mut s, required("n")? as usize).map_err(illegal)?,
        "sort_hand" => fns::sort_hand(spec, &mut s, required("player")? as usize).map_err(illegal)?,
        "rank_hands" => fns::rank_hands(spec, &mut s, int("strategy")?.map(|x| x as usize)).map_err(illegal)?,
        "collect_bets" => {
            if s.stacks.len() != spec.num_players {
                return Err(illegal("no table to collect from".into()));
            }
            fns::collect_bets(spec, &mut s)
        }
        "award_pots" => {
            if s.stacks.len() != spec.num_players {
                return Err(illegal("no table to settle".into()));
            }
            fns::award_pots(spec, &mut s).map_err(illegal)?
        }
        "next_actor" => fns::next_actor(&mut s),
        _ => unreachable!("registry and dispatch agree"),
    }
    Ok(s)
}
