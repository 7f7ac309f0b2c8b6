//! Card tokens.
//!
//! A [`Card`] is the textual token that names one physical card, e.g. `H10`,
//! `DQ`, `*` or `J1`. Tokens are stored inline so cards are `Copy` and cheap to
//! move between piles. Splitting a token into suit and value needs the game's
//! symbol tables, see [`crate::script::GameSpec::card_symbol`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Longest token a card may have, in bytes.
pub const MAX_CARD_LEN: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardError {
    #[error("empty card token")]
    Empty,
    #[error("card token `{0}` is longer than {MAX_CARD_LEN} bytes")]
    TooLong(String),
    #[error("card token `{0}` contains a reserved character")]
    Reserved(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card {
    len: u8,
    bytes: [u8; MAX_CARD_LEN],
}

impl Card {
    pub fn new(token: &str) -> Result<Self, CardError> {
        if token.is_empty() {
            return Err(CardError::Empty);
        }
        if token.len() > MAX_CARD_LEN {
            return Err(CardError::TooLong(token.to_string()));
        }
        if !is_token_text(token) {
            return Err(CardError::Reserved(token.to_string()));
        }
        let mut bytes = [0u8; MAX_CARD_LEN];
        bytes[..token.len()].copy_from_slice(token.as_bytes());
        Ok(Self { len: token.len() as u8, bytes })
    }

    /// Builds the token for a regular card: suit symbol followed by value symbol.
    pub fn regular(suit: &str, value: &str) -> Result<Self, CardError> {
        let mut s = String::with_capacity(suit.len() + value.len());
        s.push_str(suit);
        s.push_str(value);
        Self::new(&s)
    }

    pub fn as_str(&self) -> &str {
        // Constructed from a &str, so always valid UTF-8.
        std::str::from_utf8(&self.bytes[..self.len as usize]).expect("card token is utf-8")
    }
}

/// Characters that may appear in a bare token of the state and diff text formats.
pub(crate) fn is_token_text(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '[' | ']' | '{' | '}' | ',' | ':' | '"' | '=' | '#'))
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Card({})", self.as_str())
    }
}

impl FromStr for Card {
    type Err = CardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl Serialize for Card {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Card {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Card::new(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a whitespace- or comma-separated card list such as `D8, H8, C10`.
pub fn parse_cards(text: &str) -> Result<Vec<Card>, CardError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(Card::new)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_roundtrip() {
        for t in ["H10", "*", "J1", "DQ", "L13"] {
            assert_eq!(Card::new(t).unwrap().as_str(), t);
        }
    }

    #[test]
    fn rejects_bad_tokens() {
        assert_eq!(Card::new(""), Err(CardError::Empty));
        assert!(matches!(Card::new("ABCDEFGH"), Err(CardError::TooLong(_))));
        assert!(matches!(Card::new("H,1"), Err(CardError::Reserved(_))));
        assert!(matches!(Card::new("H 1"), Err(CardError::Reserved(_))));
    }

    #[test]
    fn parses_lists() {
        let cards = parse_cards("D8, H8,C10  H10").unwrap();
        assert_eq!(cards.len(), 4);
        assert_eq!(cards[2].as_str(), "C10");
    }
}
