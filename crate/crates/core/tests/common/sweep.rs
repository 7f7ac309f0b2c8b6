//! Small-deck sweeps comparing the evaluator with the brute-force oracle.

use deckforge_core::hand::{Evaluator, Oracle};
use deckforge_core::script::{GameSpec, SpecialKind};
use deckforge_core::Card;

pub const SWEEP_DECK: usize = 20;

#[derive(Debug, Clone, Copy)]
pub enum Window {
    /// Lowest values plus the top value, so wheel runs are possible.
    Bottom,
    /// Highest values.
    Top,
}

/// A 20-card deck for one game: a window of values in every suit, plus a
/// single wild card or up to three valueless specials when the game has them.
pub fn sweep_deck(spec: &GameSpec, window: Window) -> Vec<Card> {
    let mut specials = Vec::new();
    if let Some(w) = spec.specials.iter().find(|s| s.kind == SpecialKind::Wild) {
        specials.push(Card::new(&w.symbol).unwrap());
    } else if let Some(n) = spec.specials.iter().find(|s| s.kind == SpecialKind::Null) {
        specials.extend(std::iter::repeat_n(Card::new(&n.symbol).unwrap(), n.count.min(3) as usize));
    }
    let regular = SWEEP_DECK - specials.len();
    let suits = &spec.suit_spec.suits;
    let values = &spec.value_spec.ordered;
    let m = regular.div_ceil(suits.len()).min(values.len());
    let picked: Vec<&String> = match window {
        Window::Bottom => values[..m - 1].iter().chain(values.last()).collect(),
        Window::Top => values[values.len() - m..].iter().collect(),
    };
    let mut deck: Vec<Card> = picked
        .iter()
        .flat_map(|v| suits.iter().map(move |s| Card::regular(s, v).unwrap()))
        .take(regular)
        .collect();
    deck.extend(specials);
    deck
}

pub struct SweepResult {
    pub hands: usize,
    pub mismatches: Vec<String>,
}

/// Ranks every hand-sized subset of the sweep deck with both rankers and
/// checks that they agree on combination and tiebreak.
pub fn sweep_strategy(spec: &GameSpec, strategy: usize, window: Window) -> SweepResult {
    let deck = sweep_deck(spec, window);
    let size = spec.strategies[strategy].hand_size;
    // Hole-use rules are exercised separately; here every card is hole.
    let mut any = spec.clone();
    any.strategies[strategy].hole_use = deckforge_core::script::HoleUse::Any;
    let ev_any = Evaluator::new(&any, strategy);
    let mut oracle_any = Oracle::new(&any, strategy);

    let mut out = SweepResult { hands: 0, mismatches: Vec::new() };
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let hand: Vec<Card> = idx.iter().map(|&i| deck[i]).collect();
        let fast = ev_any.best_hand(&hand, &[]).unwrap();
        let slow = oracle_any.best_hand(&hand, &[]).unwrap();
        out.hands += 1;
        if (fast.combination, &fast.tiebreak) != (slow.combination, &slow.tiebreak) && out.mismatches.len() < 10 {
            out.mismatches.push(format!(
                "{hand:?}: {} {:?} vs oracle {} {:?}",
                fast.name, fast.tiebreak, slow.name, slow.tiebreak
            ));
        }
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < deck.len() - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
