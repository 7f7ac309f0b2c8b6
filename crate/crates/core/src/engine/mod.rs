//! The round engine: advances a state one flow step at a time.
//!
//! [`step`] takes the current record plus the acting player's input (or
//! `None` for automatic steps) and returns the next record together with the
//! diff that produces it. Randomness comes only from seeds derived from the
//! round seed, so a round replays exactly from any intermediate state.

pub mod core;
mod pots;
mod round;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::card::Card;
use crate::diff::{compute_diff, invoke_core, CoreError, DiffScript, EditOp};
use crate::script::{validate_spec, Chips, FlowKind, FlowStep, GameSpec};
use crate::state::{GameState, Message};
use crate::value::Value;

pub use pots::{build_side_pots, distribute_prize, settle, Settlement};
pub use round::{outcome_label, run_round, Policy, RandomPolicy, RoundLog, TransitionRecord};

/// Raises allowed per betting street.
pub const MAX_RAISES: u32 = 4;

/// Seeds stay below 2^63 so they fit the record's integer syntax.
pub const SEED_MASK: u64 = u64::MAX >> 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Check,
    Call,
    /// Raise by `amount` on top of calling.
    Raise(Chips),
    Fold,
    AllIn,
    /// Cards to exchange; empty to stand pat.
    Discard(Vec<Card>),
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Check => f.write_str("check"),
            Action::Call => f.write_str("call"),
            Action::Raise(a) => write!(f, "raise {a}"),
            Action::Fold => f.write_str("fold"),
            Action::AllIn => f.write_str("all_in"),
            Action::Discard(cards) => {
                f.write_str("discard")?;
                for c in cards {
                    write!(f, " {c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Action {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split_whitespace();
        let verb = parts.next().ok_or("empty action")?;
        let rest: Vec<&str> = parts.collect();
        let bare = |a: Action| if rest.is_empty() { Ok(a) } else { Err(format!("`{verb}` takes no arguments")) };
        match verb {
            "check" => bare(Action::Check),
            "call" => bare(Action::Call),
            "fold" => bare(Action::Fold),
            "all_in" => bare(Action::AllIn),
            "raise" => match rest[..] {
                [n] => n.parse().map(Action::Raise).map_err(|_| format!("bad raise amount `{n}`")),
                _ => Err("`raise` takes one amount".into()),
            },
            "discard" => rest
                .iter()
                .map(|t| Card::new(t).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()
                .map(Action::Discard),
            _ => Err(format!("unknown action `{verb}`")),
        }
    }
}

/// One player's decision, written `seat 2 raise 4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlayerInput {
    pub player: usize,
    pub action: Action,
}

impl fmt::Display for PlayerInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seat {} {}", self.player, self.action)
    }
}

impl FromStr for PlayerInput {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let rest = s.strip_prefix("seat ").ok_or_else(|| format!("expected `seat N ACTION`, got `{s}`"))?;
        let (seat, action) = rest.trim_start().split_once(char::is_whitespace).ok_or("missing action")?;
        Ok(PlayerInput {
            player: seat.parse().map_err(|_| format!("bad seat `{seat}`"))?,
            action: action.parse()?,
        })
    }
}

impl Serialize for PlayerInput {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PlayerInput {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Text of an optional input: the input itself or `none`.
pub fn render_input(input: Option<&PlayerInput>) -> String {
    input.map_or_else(|| "none".to_string(), ToString::to_string)
}

pub fn parse_input(text: &str) -> Result<Option<PlayerInput>, String> {
    match text.trim() {
        "none" => Ok(None),
        t => t.parse().map(Some),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),
    #[error("the round is over")]
    RoundOver,
    #[error("step `{0}` needs a player input")]
    InputRequired(FlowStep),
    #[error("step `{0}` takes no player input")]
    UnexpectedInput(FlowStep),
    #[error("it is not seat {got}'s turn")]
    NotYourTurn { expected: Option<usize>, got: usize },
    #[error("illegal action: {reason}")]
    IllegalAction { reason: String, legal: Vec<Action> },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("round did not finish within {0} steps")]
    NonTermination(usize),
}

/// One engine transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub category: FlowKind,
    pub next: GameState,
    pub diff: DiffScript,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A seed derived from the round seed, a purpose tag and a position.
pub fn derive_seed(seed: u64, tag: &str, n: usize) -> u64 {
    let tag_hash = tag.bytes().fold(0xCBF2_9CE4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01B3));
    splitmix64(seed ^ splitmix64(tag_hash ^ (n as u64).wrapping_mul(0x9E37_79B9))) & SEED_MASK
}

/// The state right after the start step: canonical unshuffled deck, full
/// stacks, empty pots, button at `seed mod players`.
pub fn init_round(spec: &GameSpec, seed: u64) -> Result<GameState, EngineError> {
    validate_spec(spec).map_err(|v| {
        EngineError::InvalidSpec(v.iter().map(|x| x.detail.clone()).collect::<Vec<_>>().join("; "))
    })?;
    let n = spec.num_players;
    let seed = seed & SEED_MASK;
    Ok(GameState {
        flow_cache: vec![FlowStep::Start],
        seed,
        button: (seed % n as u64) as usize,
        deck: spec.deck(),
        hole: vec![Vec::new(); n],
        community: Vec::new(),
        discards: vec![Vec::new(); n],
        stacks: vec![spec.starting_stack; n],
        street_bets: vec![0; n],
        messages: vec![Message::to_all("round started")],
        ..GameState::default()
    })
}

/// The step the next transition performs, `None` once the round is over.
/// Once a single player remains, the round skips straight to the prize.
pub fn pending_step(spec: &GameSpec, state: &GameState) -> Option<FlowStep> {
    if state.is_blank() {
        return Some(FlowStep::Start);
    }
    if state.is_finished() {
        return None;
    }
    if state.live_players().len() <= 1 {
        return Some(FlowStep::Prize);
    }
    spec.flow.get(state.flow_cache.len()).copied()
}

fn high_bet(state: &GameState) -> Chips {
    state.street_bets.iter().copied().max().unwrap_or(0)
}

/// Everything the current actor may do; empty when nobody is to act.
pub fn legal_actions(spec: &GameSpec, state: &GameState) -> Vec<Action> {
    let Some(p) = state.current_actor else { return Vec::new() };
    if p >= state.num_players() {
        return Vec::new();
    }
    match pending_step(spec, state) {
        Some(FlowStep::Bet) => {
            let to_call = high_bet(state) - state.street_bets[p];
            let stack = state.stacks[p];
            let mut out = Vec::new();
            if to_call == 0 {
                out.push(Action::Check);
            }
            if to_call > 0 && stack > to_call {
                out.push(Action::Call);
            }
            if state.betting.raises < MAX_RAISES {
                out.extend((spec.min_bet..=spec.max_bet).filter(|a| stack > to_call + a).map(Action::Raise));
            }
            if to_call > 0 {
                out.push(Action::Fold);
            }
            if stack > 0 {
                out.push(Action::AllIn);
            }
            out
        }
        Some(FlowStep::Switch(max)) => {
            let hole = &state.hole[p];
            let mut seen: Vec<Vec<Card>> = Vec::new();
            let mut out = Vec::new();
            for k in 0..=max.min(hole.len()) {
                crate::hand::for_each_combination(hole.len(), k, |idx| {
                    let cards: Vec<Card> = idx.iter().map(|&i| hole[i]).collect();
                    let mut key = cards.clone();
                    key.sort();
                    if !seen.contains(&key) {
                        seen.push(key);
                        out.push(Action::Discard(cards));
                    }
                });
            }
            out
        }
        _ => Vec::new(),
    }
}

fn is_legal(legal: &[Action], action: &Action) -> bool {
    match action {
        Action::Discard(cards) => {
            let mut want = cards.clone();
            want.sort();
            legal.iter().any(|a| match a {
                Action::Discard(c) => {
                    let mut c = c.clone();
                    c.sort();
                    c == want
                }
                _ => false,
            })
        }
        other => legal.contains(other),
    }
}

/// Tracks explicit edits and core calls so the emitted diff interleaves them
/// in the order they happened.
struct Builder<'a> {
    spec: &'a GameSpec,
    base: GameState,
    cur: GameState,
    ops: Vec<EditOp>,
}

impl<'a> Builder<'a> {
    fn new(spec: &'a GameSpec, s: &GameState) -> Self {
        Self { spec, base: s.clone(), cur: s.clone(), ops: Vec::new() }
    }

    fn call(&mut self, name: &str, args: &[(&str, Value)]) -> Result<(), EngineError> {
        self.ops.extend(compute_diff(&self.base, &self.cur).ops);
        let op = EditOp::call(name, args);
        let EditOp::Call { name, args } = &op else { unreachable!() };
        self.cur = invoke_core(self.spec, name, args, &self.cur)?;
        self.ops.push(op);
        self.base = self.cur.clone();
        Ok(())
    }

    fn finish(mut self) -> (GameState, DiffScript) {
        self.ops.extend(compute_diff(&self.base, &self.cur).ops);
        (self.cur, DiffScript { ops: self.ops })
    }
}

/// Advances the round by one transition.
pub fn step(spec: &GameSpec, state: &GameState, input: Option<&PlayerInput>) -> Result<Transition, EngineError> {
    let pending = pending_step(spec, state).ok_or(EngineError::RoundOver)?;
    let needs_input = matches!(pending, FlowStep::Bet | FlowStep::Switch(_)) && state.current_actor.is_some();
    match (needs_input, input) {
        (true, None) => return Err(EngineError::InputRequired(pending)),
        (false, Some(_)) => return Err(EngineError::UnexpectedInput(pending)),
        _ => {}
    }

    let mut b = Builder::new(spec, state);
    if state.is_blank() {
        b.cur = init_round(spec, state.seed)?;
        prepare(spec, &mut b.cur);
        let (next, diff) = b.finish();
        return Ok(Transition { category: FlowKind::Start, next, diff });
    }
    let stale = state.messages.len();

    match pending {
        FlowStep::Start => b.cur.flow_cache.push(FlowStep::Start),
        FlowStep::Blind => {
            let s = &mut b.cur;
            let n = s.num_players();
            let (small, big) = spec.blinds;
            for (offset, amount, name) in [(1, small, "small"), (2, big, "big")] {
                let p = (s.button + offset) % n;
                let put = amount.min(s.stacks[p]);
                s.stacks[p] -= put;
                s.street_bets[p] += put;
                if s.stacks[p] == 0 {
                    s.mark_all_in(p);
                }
                s.messages.push(Message::to_all(format!("seat {p} posts {name} blind {put}")));
            }
            s.flow_cache.push(FlowStep::Blind);
        }
        FlowStep::Shuffle => {
            let seed = derive_seed(state.seed, "shuffle", state.flow_cache.len());
            b.call("shuffle", &[("seed", Value::Int(seed as i64))])?;
            b.cur.flow_cache.push(FlowStep::Shuffle);
            b.cur.messages.push(Message::to_all("deck shuffled"));
        }
        FlowStep::Deal(n) => {
            b.call("deal", &[("n", Value::from(n)), ("to", Value::str("all"))])?;
            b.cur.flow_cache.push(pending);
            b.cur.messages.push(Message::to_all(format!("dealt {n} cards to each player")));
        }
        FlowStep::Flop(n) => {
            b.call("flop", &[("n", Value::from(n))])?;
            b.cur.flow_cache.push(pending);
            b.cur.messages.push(Message::to_all(format!("{n} community cards revealed")));
        }
        FlowStep::Bet => match input {
            None => close_bet(&mut b)?,
            Some(input) => bet(spec, state, input, &mut b)?,
        },
        FlowStep::Switch(max) => match input {
            None => close_switch(&mut b, max),
            Some(input) => switch(spec, state, input, max, &mut b)?,
        },
        FlowStep::Show => {
            b.call("rank_hands", &[])?;
            b.cur.flow_cache.push(FlowStep::Show);
            b.cur.messages.push(Message::to_all("showdown"));
        }
        FlowStep::Prize => {
            let before = b.cur.stacks.clone();
            b.cur.betting = Default::default();
            b.cur.current_actor = None;
            b.call("award_pots", &[])?;
            b.cur.flow_cache.push(FlowStep::Prize);
            let won: Vec<(usize, Chips)> =
                b.cur.stacks.iter().zip(&before).map(|(a, z)| a - z).enumerate().filter(|(_, w)| *w > 0).collect();
            for (p, w) in won {
                b.cur.messages.push(Message::to_all(format!("seat {p} wins {w}")));
            }
        }
    }
    // Messages only describe the latest step.
    b.cur.messages.drain(..stale);
    prepare(spec, &mut b.cur);
    let (next, diff) = b.finish();
    Ok(Transition { category: pending.kind(), next, diff })
}

fn check_turn(spec: &GameSpec, state: &GameState, input: &PlayerInput) -> Result<(), EngineError> {
    if state.current_actor != Some(input.player) {
        return Err(EngineError::NotYourTurn { expected: state.current_actor, got: input.player });
    }
    let legal = legal_actions(spec, state);
    if !is_legal(&legal, &input.action) {
        return Err(EngineError::IllegalAction { reason: format!("`{}` is not allowed now", input.action), legal });
    }
    Ok(())
}

fn bet(spec: &GameSpec, state: &GameState, input: &PlayerInput, b: &mut Builder) -> Result<(), EngineError> {
    check_turn(spec, state, input)?;
    let s = &mut b.cur;
    let p = input.player;
    let high = high_bet(s);
    let to_call = high - s.street_bets[p];
    let put = |s: &mut GameState, chips: Chips| {
        s.stacks[p] -= chips;
        s.street_bets[p] += chips;
    };
    let text = match &input.action {
        Action::Check => format!("seat {p} checks"),
        Action::Call => {
            put(s, to_call);
            format!("seat {p} calls {to_call}")
        }
        Action::Raise(a) => {
            put(s, to_call + a);
            s.betting.raises += 1;
            requeue(s, p);
            format!("seat {p} raises {a}")
        }
        Action::Fold => {
            s.mark_folded(p);
            format!("seat {p} folds")
        }
        Action::AllIn => {
            let all = s.stacks[p];
            put(s, all);
            s.mark_all_in(p);
            if s.street_bets[p] > high {
                requeue(s, p);
            }
            format!("seat {p} goes all in")
        }
        Action::Discard(_) => unreachable!("not a betting action"),
    };
    s.betting.to_act.retain(|&q| q != p);
    s.messages.push(Message::to_all(text));
    if s.live_players().len() <= 1 || s.betting.to_act.is_empty() {
        close_bet(b)?;
    } else {
        s.current_actor = s.betting.to_act.first().copied();
    }
    Ok(())
}

/// Everyone still able to act, clockwise after `p`, owes a new decision.
fn requeue(s: &mut GameState, p: usize) {
    let n = s.num_players();
    s.betting.to_act = (1..n).map(|i| (p + i) % n).filter(|&q| !s.is_folded(q) && !s.is_all_in(q)).collect();
}

fn close_bet(b: &mut Builder) -> Result<(), EngineError> {
    b.cur.betting = Default::default();
    b.cur.current_actor = None;
    b.call("collect_bets", &[])?;
    b.cur.flow_cache.push(FlowStep::Bet);
    Ok(())
}

fn close_switch(b: &mut Builder, max: usize) {
    b.cur.betting = Default::default();
    b.cur.current_actor = None;
    b.cur.flow_cache.push(FlowStep::Switch(max));
}

fn switch(spec: &GameSpec, state: &GameState, input: &PlayerInput, max: usize, b: &mut Builder) -> Result<(), EngineError> {
    check_turn(spec, state, input)?;
    let Action::Discard(cards) = &input.action else { unreachable!("legal switch actions are discards") };
    let p = input.player;
    let k = cards.len();
    {
        let s = &mut b.cur;
        for c in cards {
            let i = s.hole[p].iter().position(|h| h == c).expect("checked legal");
            s.hole[p].remove(i);
        }
    }
    let mut pending_discards = cards.clone();
    if b.cur.deck.len() < k {
        // Recycle the discard piles, and this player's cards if still short.
        let s = &mut b.cur;
        let mut recycled: Vec<Card> = s.discards.iter_mut().flat_map(std::mem::take).collect();
        if s.deck.len() + recycled.len() < k {
            recycled.append(&mut pending_discards);
        }
        s.deck.extend(recycled);
        let seed = derive_seed(state.seed, &format!("reshuffle/{p}"), state.flow_cache.len());
        b.call("shuffle", &[("seed", Value::Int(seed as i64))])?;
    }
    let s = &mut b.cur;
    let drawn: Vec<Card> = s.deck.drain(..k.min(s.deck.len())).collect();
    s.hole[p].extend(drawn);
    s.discards[p].extend(pending_discards);
    s.messages.push(Message::to_all(format!("seat {p} switches {k} cards")));
    s.betting.to_act.retain(|&q| q != p);
    if s.betting.to_act.is_empty() {
        close_switch(b, max);
    } else {
        s.current_actor = s.betting.to_act.first().copied();
    }
    Ok(())
}

/// Opens a pending betting or drawing street: queues the seats owed a
/// decision and tells the first one it is their turn.
fn prepare(spec: &GameSpec, s: &mut GameState) {
    if s.current_actor.is_some() {
        if let Some(a) = s.current_actor {
            let verb = if matches!(pending_step(spec, s), Some(FlowStep::Switch(_))) { "switch" } else { "bet" };
            s.messages.push(Message::to_player(a, format!("your turn to {verb}")));
        }
        return;
    }
    let (queue, verb) = match pending_step(spec, s) {
        Some(FlowStep::Bet) => {
            let offset = if s.street_bets.iter().any(|&x| x > 0) { 3 } else { 1 };
            let cands: Vec<usize> = s.seats_from_button(offset).filter(|&p| !s.is_folded(p) && !s.is_all_in(p)).collect();
            let high = high_bet(s);
            let owed = cands.iter().any(|&p| s.street_bets[p] < high);
            (if cands.len() <= 1 && !owed { Vec::new() } else { cands }, "bet")
        }
        Some(FlowStep::Switch(_)) => {
            (s.seats_from_button(1).filter(|&p| !s.is_folded(p) && !s.is_all_in(p)).collect(), "switch")
        }
        _ => return,
    };
    s.betting.raises = 0;
    s.current_actor = queue.first().copied();
    s.betting.to_act = queue;
    if let Some(a) = s.current_actor {
        s.messages.push(Message::to_player(a, format!("your turn to {verb}")));
    }
}
