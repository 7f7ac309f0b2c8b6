use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::script::{presets::Preset, validate_spec, FlowStep, GameSpec};

const MAX_TRIES: usize = 64;

/// A randomly configured variant of a bundled game. Player count, bet
/// limits, suit and value sets and deal/flop counts are perturbed; the
/// combinations and flow shape are kept. Falls back to the unmodified game
/// if no valid perturbation turns up.
pub fn sample_variant(base: &Preset, seed: u64) -> GameSpec {
    let spec = base.spec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_TRIES {
        let v = perturb(&spec, &mut rng);
        if validate_spec(&v).is_ok() {
            return v;
        }
    }
    spec
}

fn perturb(base: &GameSpec, rng: &mut ChaCha8Rng) -> GameSpec {
    let mut v = base.clone();
    v.num_players = rng.random_range(2..=base.num_players + 2);
    v.min_bet = rng.random_range(1..=3);
    v.max_bet = v.min_bet * rng.random_range(4..=10);
    v.blinds = (v.min_bet / 2, v.min_bet);

    if v.suit_spec.suits.len() > 3 && rng.random_bool(0.25) {
        let gone = v.suit_spec.suits.remove(rng.random_range(0..v.suit_spec.suits.len()));
        for class in &mut v.suit_spec.rank_classes {
            class.retain(|s| *s != gone);
        }
        v.suit_spec.rank_classes.retain(|c| !c.is_empty());
    }
    if rng.random_bool(0.3) {
        let drop = rng.random_range(1..=4).min(v.value_spec.ordered.len().saturating_sub(6));
        v.value_spec.ordered.drain(..drop);
    }
    for step in &mut v.flow {
        if let FlowStep::Deal(n) | FlowStep::Flop(n) = step {
            if rng.random_bool(0.3) {
                *n = (*n as i64 + rng.random_range(-1..=1)).max(1) as usize;
            }
        }
    }
    // Draw limits can't exceed the hand after a deal change.
    let hole = v.hole_cards_per_player();
    for step in &mut v.flow {
        if let FlowStep::Switch(n) = step {
            *n = (*n).min(hole);
        }
    }
    if v != *base {
        v.name = format!("{} (variant)", base.name);
    }
    v
}
