use std::collections::HashMap;

use serde::Serialize;

use super::GameState;
use crate::card::Card;
use crate::script::{FlowStep, GameSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateViolationCode {
    PlayerCount,
    CardConservation,
    NegativeChips,
    ChipConservation,
    BadActor,
    BadSeat,
    BadPot,
    FlowMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateViolation {
    pub code: StateViolationCode,
    pub detail: String,
}

/// Checks a state against its spec: table shape, card multiset, chip total,
/// actor and pot sanity, and that the flow cache follows the game's flow.
///
/// A blank pre-start state (empty flow cache) holds no cards or chips yet and
/// is only checked for emptiness.
pub fn validate_state(spec: &GameSpec, state: &GameState) -> Result<(), Vec<StateViolation>> {
    use StateViolationCode::*;
    let mut out = Vec::new();
    let mut push = |code, detail: String| out.push(StateViolation { code, detail });
    let n = spec.num_players;

    if state.is_blank() {
        if state.all_cards().next().is_some() || !state.stacks.is_empty() || !state.pots.is_empty() {
            push(FlowMismatch, "blank state holds cards or chips".into());
        }
        return finish(out);
    }

    let lens = [
        ("hole", state.hole.len()),
        ("discards", state.discards.len()),
        ("stacks", state.stacks.len()),
        ("street_bets", state.street_bets.len()),
    ];
    for (name, len) in lens {
        if len != n {
            push(PlayerCount, format!("{name} has {len} entries for {n} players"));
        }
    }

    let mut want: HashMap<Card, i64> = HashMap::new();
    for c in spec.deck() {
        *want.entry(c).or_default() += 1;
    }
    let mut have: HashMap<Card, i64> = HashMap::new();
    for c in state.all_cards() {
        *have.entry(c).or_default() += 1;
    }
    if want != have {
        let mut diffs: Vec<String> = want
            .keys()
            .chain(have.keys())
            .filter(|c| want.get(c) != have.get(c))
            .map(|c| format!("{c}: {} vs {}", have.get(c).unwrap_or(&0), want.get(c).unwrap_or(&0)))
            .collect();
        diffs.sort();
        diffs.dedup();
        push(CardConservation, format!("card counts differ ({})", diffs.join(", ")));
    }

    for (p, &s) in state.stacks.iter().enumerate() {
        if s < 0 {
            push(NegativeChips, format!("stack of seat {p} is {s}"));
        }
    }
    for (p, &b) in state.street_bets.iter().enumerate() {
        if b < 0 {
            push(NegativeChips, format!("street bet of seat {p} is {b}"));
        }
    }
    if state.chips_in_play() != spec.total_chips() {
        push(ChipConservation, format!("{} chips in play, expected {}", state.chips_in_play(), spec.total_chips()));
    }

    let seat_lists = [
        ("folded", &state.folded),
        ("all_in", &state.all_in),
        ("to_act", &state.betting.to_act),
    ];
    for (name, seats) in seat_lists {
        if seats.iter().any(|&p| p >= n) {
            push(BadSeat, format!("{name} names a seat outside the table"));
        }
    }
    if !state.folded.windows(2).all(|w| w[0] < w[1]) || !state.all_in.windows(2).all(|w| w[0] < w[1]) {
        push(BadSeat, "folded and all_in must be sorted and distinct".into());
    }
    if state.button >= n {
        push(BadSeat, format!("button at seat {}", state.button));
    }
    if let Some(a) = state.current_actor {
        if a >= n || state.is_folded(a) || state.is_all_in(a) {
            push(BadActor, format!("seat {a} cannot act"));
        } else if state.betting.to_act.first() != Some(&a) {
            push(BadActor, format!("seat {a} is not first in to_act"));
        }
    }

    for (i, pot) in state.pots.iter().enumerate() {
        if pot.amount < 0 {
            push(BadPot, format!("pot {i} holds {}", pot.amount));
        }
        if pot.eligible.is_empty() || pot.eligible.iter().any(|&p| p >= n) {
            push(BadPot, format!("pot {i} has bad eligibility"));
        }
    }

    if !flow_cache_fits(&spec.flow, &state.flow_cache) {
        push(FlowMismatch, "flow cache does not follow the game flow".into());
    }

    finish(out)
}

/// The cache must replay the flow in order, except that a round may jump
/// straight to prize when every player but one has folded.
fn flow_cache_fits(flow: &[FlowStep], cache: &[FlowStep]) -> bool {
    match cache.split_last() {
        None => true,
        Some((FlowStep::Prize, head)) => flow.starts_with(head),
        Some(_) => flow.starts_with(cache) && cache.len() < flow.len(),
    }
}

fn finish(out: Vec<StateViolation>) -> Result<(), Vec<StateViolation>> {
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::presets;

    fn fresh(spec: &GameSpec) -> GameState {
        let n = spec.num_players;
        GameState {
            flow_cache: vec![FlowStep::Start],
            deck: spec.deck(),
            hole: vec![vec![]; n],
            discards: vec![vec![]; n],
            stacks: vec![spec.starting_stack; n],
            street_bets: vec![0; n],
            ..GameState::default()
        }
    }

    fn codes(spec: &GameSpec, s: &GameState) -> Vec<StateViolationCode> {
        validate_state(spec, s).err().unwrap_or_default().into_iter().map(|v| v.code).collect()
    }

    #[test]
    fn fresh_state_is_valid() {
        let spec = presets::texas();
        assert_eq!(validate_state(&spec, &fresh(&spec)), Ok(()));
        assert_eq!(validate_state(&spec, &GameState::blank(3)), Ok(()));
    }

    #[test]
    fn duplicated_card_breaks_conservation() {
        let spec = presets::texas();
        let mut s = fresh(&spec);
        let top = s.deck[0];
        s.hole[0].push(top);
        assert_eq!(codes(&spec, &s), vec![StateViolationCode::CardConservation]);
    }

    #[test]
    fn negative_stack() {
        let spec = presets::texas();
        let mut s = fresh(&spec);
        s.stacks[0] = -5;
        s.street_bets[0] = 105;
        assert_eq!(codes(&spec, &s), vec![StateViolationCode::NegativeChips]);
    }

    #[test]
    fn moving_a_card_keeps_the_multiset() {
        let spec = presets::texas();
        let mut s = fresh(&spec);
        let c = s.deck.remove(7);
        s.community.push(c);
        assert_eq!(validate_state(&spec, &s), Ok(()));
    }

    #[test]
    fn actor_must_be_live() {
        let spec = presets::texas();
        let mut s = fresh(&spec);
        s.folded = vec![2];
        s.current_actor = Some(2);
        s.betting.to_act = vec![2];
        assert!(codes(&spec, &s).contains(&StateViolationCode::BadActor));
    }
}
