//! State transformers behind the core functions. The engine performs these
//! effects through the same functions so its diffs replay exactly.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pots::{build_side_pots, settle};
use crate::hand::Evaluator;
use crate::script::GameSpec;
use crate::state::{GameState, Party, ShowdownEntry};

/// Seeded permutation of the deck.
pub fn shuffle(state: &mut GameState, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    state.deck.shuffle(&mut rng);
}

/// Deals `n` cards to each recipient one at a time, round-robin from the
/// seat left of the button. `Party::All` means every player still in.
pub fn deal(state: &mut GameState, n: usize, to: Party) -> Result<(), String> {
    let recipients: Vec<usize> = match to {
        Party::All => state.seats_from_button(1).filter(|&p| !state.is_folded(p)).collect(),
        Party::Player(p) if p < state.num_players() => vec![p],
        other => return Err(format!("cannot deal to {other:?}")),
    };
    let need = n * recipients.len();
    if need > state.deck.len() {
        return Err(format!("deck holds {} cards, {need} needed", state.deck.len()));
    }
    for _ in 0..n {
        for &p in &recipients {
            let c = state.deck.remove(0);
            state.hole[p].push(c);
        }
    }
    Ok(())
}

/// Reveals `n` community cards from the deck top.
pub fn flop(state: &mut GameState, n: usize) -> Result<(), String> {
    if n > state.deck.len() {
        return Err(format!("deck holds {} cards, {n} needed", state.deck.len()));
    }
    state.community.extend(state.deck.drain(..n));
    Ok(())
}

/// Sorts a player's hole cards into canonical deck order.
pub fn sort_hand(spec: &GameSpec, state: &mut GameState, player: usize) -> Result<(), String> {
    let order = spec.deck();
    let hole = state.hole.get_mut(player).ok_or_else(|| format!("no seat {player}"))?;
    hole.sort_by_key(|c| order.iter().position(|d| d == c).unwrap_or(usize::MAX));
    Ok(())
}

/// Announces each remaining player's best combination under every strategy
/// (or just `only`), in seat order.
pub fn rank_hands(spec: &GameSpec, state: &mut GameState, only: Option<usize>) -> Result<(), String> {
    let strategies: Vec<usize> = match only {
        Some(s) if s < spec.strategies.len() => vec![s],
        Some(s) => return Err(format!("no strategy {s}")),
        None => (0..spec.strategies.len()).collect(),
    };
    let mut entries = Vec::new();
    for s in strategies {
        let ev = Evaluator::new(spec, s);
        for p in state.live_players() {
            let hand = ev.best_hand(&state.hole[p], &state.community).map_err(|e| e.to_string())?;
            entries.push(ShowdownEntry { player: p, strategy: s, hand: hand.name });
        }
    }
    entries.sort_by_key(|e| (e.player, e.strategy));
    state.showdown = entries;
    Ok(())
}

/// Moves street bets into the pots. Pots are rebuilt from each player's
/// total contribution this round, so side pots appear as players go all in.
pub fn collect_bets(spec: &GameSpec, state: &mut GameState) {
    state.street_bets.iter_mut().for_each(|b| *b = 0);
    let contributions: Vec<_> = state.stacks.iter().map(|s| spec.starting_stack - s).collect();
    state.pots = build_side_pots(&contributions, &state.folded);
}

/// Settles every pot: bets are collected, hands ranked and chips paid out.
pub fn award_pots(spec: &GameSpec, state: &mut GameState) -> Result<(), String> {
    collect_bets(spec, state);
    let s = settle(spec, state)?;
    for (stack, won) in state.stacks.iter_mut().zip(&s.payouts) {
        *stack += won;
    }
    state.pots.clear();
    Ok(())
}

/// Passes the turn to the next seat owed a decision.
pub fn next_actor(state: &mut GameState) {
    if !state.betting.to_act.is_empty() {
        state.betting.to_act.remove(0);
    }
    state.current_actor = state.betting.to_act.first().copied();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::presets;

    fn table(spec: &GameSpec) -> GameState {
        let n = spec.num_players;
        GameState {
            deck: spec.deck(),
            hole: vec![vec![]; n],
            discards: vec![vec![]; n],
            stacks: vec![spec.starting_stack; n],
            street_bets: vec![0; n],
            button: 2,
            ..GameState::default()
        }
    }

    #[test]
    fn deal_is_round_robin_from_the_button() {
        let spec = presets::texas();
        let mut s = table(&spec);
        let deck = s.deck.clone();
        deal(&mut s, 2, Party::All).unwrap();
        assert_eq!(s.deck.len(), 52 - 12);
        assert_eq!(s.hole[3], vec![deck[0], deck[6]]);
        assert_eq!(s.hole[2], vec![deck[5], deck[11]]);
        let mut short = table(&spec);
        short.deck.truncate(3);
        assert!(deal(&mut short, 1, Party::All).is_err());
    }

    #[test]
    fn shuffle_only_permutes() {
        let spec = presets::texas();
        let mut a = table(&spec);
        let mut b = table(&spec);
        shuffle(&mut a, 77);
        shuffle(&mut b, 77);
        assert_eq!(a, b);
        assert_ne!(a.deck, spec.deck());
        let mut sorted = a.deck.clone();
        sorted.sort();
        let mut want = spec.deck();
        want.sort();
        assert_eq!(sorted, want);
    }

    #[test]
    fn sort_hand_uses_deck_order() {
        let spec = presets::texas();
        let mut s = table(&spec);
        s.hole[0] = crate::card::parse_cards("S2 H1 D5").unwrap();
        sort_hand(&spec, &mut s, 0).unwrap();
        assert_eq!(s.hole[0], crate::card::parse_cards("H1 D5 S2").unwrap());
    }
}
