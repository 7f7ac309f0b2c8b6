//! Playing whole rounds with scripted or random players.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{derive_seed, pending_step, settle, step, Action, EngineError, PlayerInput, legal_actions};
use crate::diff::DiffScript;
use crate::script::{FlowKind, FlowStep, GameSpec};
use crate::state::{view_for_player, GameState};

/// Chooses actions for one seat. Policies only ever see that seat's view.
pub trait Policy {
    fn act(&mut self, spec: &GameSpec, view: &GameState, seat: usize, legal: &[Action]) -> Action;
}

/// Plays uniformly-ish at random: folds sometimes when facing a bet, shoves
/// rarely, raises a quarter of the time and otherwise calls or checks.
#[derive(Debug, Clone)]
pub struct RandomPolicy {
    rng: ChaCha8Rng,
}

impl RandomPolicy {
    pub const FOLD: f64 = 0.10;
    pub const ALL_IN: f64 = 0.05;
    pub const RAISE: f64 = 0.25;

    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// One independent policy per seat, all derived from `seed`.
    pub fn table(seed: u64, players: usize) -> Vec<Box<dyn Policy>> {
        (0..players).map(|p| Box::new(Self::new(derive_seed(seed, "policy", p))) as Box<dyn Policy>).collect()
    }
}

impl Policy for RandomPolicy {
    fn act(&mut self, _spec: &GameSpec, _view: &GameState, _seat: usize, legal: &[Action]) -> Action {
        if legal.iter().all(|a| matches!(a, Action::Discard(_))) {
            let max = legal.iter().map(|a| if let Action::Discard(c) = a { c.len() } else { 0 }).max().unwrap_or(0);
            let k = self.rng.random_range(0..=max);
            let sized: Vec<&Action> = legal.iter().filter(|a| matches!(a, Action::Discard(c) if c.len() == k)).collect();
            return (*sized.choose(&mut self.rng).expect("every size up to max is offered")).clone();
        }
        let raises: Vec<&Action> = legal.iter().filter(|a| matches!(a, Action::Raise(_))).collect();
        let r: f64 = self.rng.random();
        let want = if r < Self::FOLD {
            Some(Action::Fold)
        } else if r < Self::FOLD + Self::ALL_IN {
            Some(Action::AllIn)
        } else if r < Self::FOLD + Self::ALL_IN + Self::RAISE {
            raises.choose(&mut self.rng).map(|a| (*a).clone())
        } else {
            None
        };
        if let Some(a) = want.filter(|a| legal.contains(a)) {
            return a;
        }
        [Action::Check, Action::Call]
            .into_iter()
            .find(|a| legal.contains(a))
            .unwrap_or_else(|| legal.iter().find(|a| **a != Action::Fold).unwrap_or(&legal[0]).clone())
    }
}

/// One transition of a played round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub prev: GameState,
    pub input: Option<PlayerInput>,
    pub next: GameState,
    pub diff: DiffScript,
    pub category: FlowKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundLog {
    pub spec: GameSpec,
    pub seed: u64,
    pub transitions: Vec<TransitionRecord>,
    /// First-strategy combination that took the main pot, `none` if nobody
    /// had to show.
    pub outcome_label: String,
}

impl RoundLog {
    pub fn final_state(&self) -> Option<&GameState> {
        self.transitions.last().map(|t| &t.next)
    }
}

/// Outcome label of a round about to be settled.
pub fn outcome_label(spec: &GameSpec, state: &GameState) -> String {
    let mut s = state.clone();
    super::core::collect_bets(spec, &mut s);
    settle(spec, &s).map(|x| x.label).unwrap_or_else(|_| "none".to_string())
}

/// Plays a round from the blank state until the prize is paid.
pub fn run_round(spec: &GameSpec, seed: u64, policies: &mut [Box<dyn Policy>]) -> Result<RoundLog, EngineError> {
    assert_eq!(policies.len(), spec.num_players, "one policy per seat");
    let limit = 10 * spec.flow.len() * spec.num_players + 10;
    let mut state = GameState::blank(seed & super::SEED_MASK);
    let mut transitions = Vec::new();
    let mut label = "none".to_string();
    while let Some(pending) = pending_step(spec, &state) {
        if transitions.len() >= limit {
            return Err(EngineError::NonTermination(limit));
        }
        if pending == FlowStep::Prize {
            label = outcome_label(spec, &state);
        }
        let input = match state.current_actor {
            Some(p) if matches!(pending, FlowStep::Bet | FlowStep::Switch(_)) => {
                let legal = legal_actions(spec, &state);
                let view = view_for_player(&state, p).expect("actor is seated");
                Some(PlayerInput { player: p, action: policies[p].act(spec, &view, p, &legal) })
            }
            _ => None,
        };
        let t = step(spec, &state, input.as_ref())?;
        transitions.push(TransitionRecord {
            prev: state,
            input,
            next: t.next.clone(),
            diff: t.diff,
            category: t.category,
        });
        state = t.next;
    }
    Ok(RoundLog { spec: spec.clone(), seed: seed & super::SEED_MASK, transitions, outcome_label: label })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::presets;

    #[test]
    fn random_rounds_finish() {
        for p in presets::base() {
            let spec = p.spec();
            for seed in 0..3 {
                let log = run_round(&spec, seed, &mut RandomPolicy::table(seed, spec.num_players)).unwrap();
                let last = log.final_state().unwrap();
                assert!(last.is_finished(), "{}", p.name);
                assert_eq!(last.stacks.iter().sum::<i64>(), spec.total_chips(), "{}", p.name);
            }
        }
    }

    #[test]
    fn policies_only_pick_legal_actions() {
        let spec = presets::find("badugi").unwrap().spec();
        let log = run_round(&spec, 5, &mut RandomPolicy::table(5, spec.num_players)).unwrap();
        for t in &log.transitions {
            if let Some(i) = &t.input {
                let legal = legal_actions(&spec, &t.prev);
                assert!(legal.contains(&i.action) || matches!(i.action, Action::Discard(_)));
            }
        }
    }
}
