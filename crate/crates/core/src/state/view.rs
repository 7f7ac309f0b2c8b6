use thiserror::Error;

use super::{GameState, Party};
use crate::card::Card;

/// Placeholder token standing in for a face-down card.
pub const HIDDEN_CARD: &str = "?";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ViewError {
    #[error("no seat {0} at this table")]
    UnknownPlayer(usize),
}

/// What `player` may see of `state`.
///
/// The deck and the seed (which determines the deck order) are cleared;
/// other players' hole cards and discards become [`HIDDEN_CARD`] placeholders
/// of the same count; only messages addressed to everyone or to `player`
/// are kept.
pub fn view_for_player(state: &GameState, player: usize) -> Result<GameState, ViewError> {
    if player >= state.num_players() {
        return Err(ViewError::UnknownPlayer(player));
    }
    let hidden = Card::new(HIDDEN_CARD).expect("placeholder is a valid token");
    let mut view = state.clone();
    view.deck.clear();
    view.seed = 0;
    for piles in [&mut view.hole, &mut view.discards] {
        for (p, pile) in piles.iter_mut().enumerate() {
            if p != player {
                pile.iter_mut().for_each(|c| *c = hidden);
            }
        }
    }
    view.messages.retain(|m| matches!(m.to, Party::All) || m.to == Party::Player(player));
    Ok(view)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Message;

    #[test]
    fn hides_opponents() {
        let c = |s: &str| Card::new(s).unwrap();
        let state = GameState {
            deck: vec![c("H2")],
            seed: 5,
            hole: vec![vec![c("S1"), c("SK")], vec![c("D3"), c("D4"), c("D5"), c("D6")]],
            discards: vec![vec![], vec![c("C9")]],
            stacks: vec![100, 100],
            messages: vec![Message::to_player(1, "your turn to bet"), Message::to_all("hi")],
            ..GameState::default()
        };
        let v = view_for_player(&state, 0).unwrap();
        assert_eq!(v.hole[0], state.hole[0]);
        assert_eq!(v.hole[1].len(), 4);
        assert!(v.hole[1].iter().all(|c| c.as_str() == HIDDEN_CARD));
        assert_eq!(v.discards[1][0].as_str(), HIDDEN_CARD);
        assert!(v.deck.is_empty());
        assert_eq!(v.seed, 0);
        assert_eq!(v.messages, vec![Message::to_all("hi")]);
        assert_eq!(view_for_player(&state, 2), Err(ViewError::UnknownPlayer(2)));
    }
}
