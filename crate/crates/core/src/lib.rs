//! Rule-configurable poker engine.

pub mod card;
pub mod datagen;
pub mod diff;
pub mod engine;
pub mod eval;
pub mod hand;
pub mod play;
pub mod script;
pub mod state;
pub mod value;

pub use card::{parse_cards, Card, CardError};
pub use hand::{best_hand, compare_hands, oracle_best_hand, Evaluator, HandError, RankedHand};
pub use script::{parse_script, render_script, validate_spec, GameSpec, ScriptError};
pub use state::{parse_state, serialize_state, validate_state, view_for_player, GameState, StateError};
pub use value::Value;
pub use diff::{compute_diff, equivalent, merge, parse_diff, render_diff, DiffError, DiffScript, EditOp, Equivalence};
pub use engine::{init_round, legal_actions, pending_step, run_round, step, Action, EngineError, PlayerInput, Transition};
