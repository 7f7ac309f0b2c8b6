//! The game-state record.
//!
//! A [`GameState`] is one frame of a round. Its canonical text form (see
//! [`serialize_state`]) lists one key per line in a fixed order, from
//! `flow_cache` to `message`. The same record is exposed as a [`Value`] map so
//! diff scripts can address any field by path.

mod codec;
mod validate;
mod view;

use serde::{Deserialize, Serialize};

use crate::card::Card;
use crate::script::{Chips, FlowStep};
use crate::value::Value;

pub use codec::{parse_state, serialize_state, StateError};
pub use validate::{validate_state, StateViolation, StateViolationCode};
pub use view::{view_for_player, ViewError, HIDDEN_CARD};

/// Keys of the canonical record, in order.
pub const STATE_KEYS: [&str; 16] = [
    "flow_cache",
    "seed",
    "button",
    "deck",
    "hole",
    "community",
    "discards",
    "stacks",
    "street_bets",
    "pots",
    "betting",
    "current_actor",
    "folded",
    "all_in",
    "showdown",
    "message",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pot {
    pub amount: Chips,
    pub eligible: Vec<usize>,
}

/// Sender or addressee of a [`Message`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Engine,
    All,
    Player(usize),
}

impl Party {
    fn to_value(self) -> Value {
        match self {
            Party::Engine => Value::str("engine"),
            Party::All => Value::str("all"),
            Party::Player(p) => Value::from(p),
        }
    }

    fn from_value(v: &Value) -> Option<Self> {
        match v {
            Value::Str(s) if s == "engine" => Some(Party::Engine),
            Value::Str(s) if s == "all" => Some(Party::All),
            Value::Int(n) if *n >= 0 => Some(Party::Player(*n as usize)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub from: Party,
    pub to: Party,
    pub text: String,
}

impl Message {
    pub fn to_all(text: impl Into<String>) -> Self {
        Self { from: Party::Engine, to: Party::All, text: text.into() }
    }

    pub fn to_player(p: usize, text: impl Into<String>) -> Self {
        Self { from: Party::Engine, to: Party::Player(p), text: text.into() }
    }
}

/// Progress of the betting or drawing street in play.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Betting {
    /// Raises made this street.
    pub raises: u32,
    /// Seats still owed a decision, next actor first.
    pub to_act: Vec<usize>,
}

/// A hand announced at showdown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShowdownEntry {
    pub player: usize,
    pub strategy: usize,
    pub hand: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GameState {
    pub flow_cache: Vec<FlowStep>,
    pub seed: u64,
    pub button: usize,
    /// Remaining cards; index 0 is the top.
    pub deck: Vec<Card>,
    pub hole: Vec<Vec<Card>>,
    pub community: Vec<Card>,
    pub discards: Vec<Vec<Card>>,
    pub stacks: Vec<Chips>,
    pub street_bets: Vec<Chips>,
    pub pots: Vec<Pot>,
    pub betting: Betting,
    pub current_actor: Option<usize>,
    /// Sorted seat ids.
    pub folded: Vec<usize>,
    /// Sorted seat ids.
    pub all_in: Vec<usize>,
    pub showdown: Vec<ShowdownEntry>,
    pub messages: Vec<Message>,
}

impl GameState {
    /// The frame before a round starts: only the seed is known.
    pub fn blank(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn is_blank(&self) -> bool {
        self.flow_cache.is_empty()
    }

    pub fn is_finished(&self) -> bool {
        self.flow_cache.last() == Some(&FlowStep::Prize)
    }

    pub fn num_players(&self) -> usize {
        self.stacks.len()
    }

    pub fn is_folded(&self, p: usize) -> bool {
        self.folded.binary_search(&p).is_ok()
    }

    pub fn is_all_in(&self, p: usize) -> bool {
        self.all_in.binary_search(&p).is_ok()
    }

    pub fn mark_folded(&mut self, p: usize) {
        if let Err(i) = self.folded.binary_search(&p) {
            self.folded.insert(i, p);
        }
    }

    pub fn mark_all_in(&mut self, p: usize) {
        if let Err(i) = self.all_in.binary_search(&p) {
            self.all_in.insert(i, p);
        }
    }

    /// Seats still holding cards.
    pub fn live_players(&self) -> Vec<usize> {
        (0..self.num_players()).filter(|&p| !self.is_folded(p)).collect()
    }

    /// Seats that can still make betting decisions.
    pub fn active_players(&self) -> Vec<usize> {
        (0..self.num_players()).filter(|&p| !self.is_folded(p) && !self.is_all_in(p)).collect()
    }

    /// Seats in clockwise order starting `offset` seats left of the button.
    pub fn seats_from_button(&self, offset: usize) -> impl Iterator<Item = usize> {
        let n = self.num_players().max(1);
        let start = self.button + offset;
        (0..self.num_players()).map(move |i| (start + i) % n)
    }

    pub fn pot_total(&self) -> Chips {
        self.pots.iter().map(|p| p.amount).sum()
    }

    pub fn chips_in_play(&self) -> Chips {
        self.stacks.iter().sum::<Chips>() + self.street_bets.iter().sum::<Chips>() + self.pot_total()
    }

    /// Every card in the record, in key order.
    pub fn all_cards(&self) -> impl Iterator<Item = Card> + '_ {
        self.deck
            .iter()
            .chain(self.hole.iter().flatten())
            .chain(self.community.iter())
            .chain(self.discards.iter().flatten())
            .copied()
    }

    pub fn to_value(&self) -> Value {
        let cards = |cs: &[Card]| Value::List(cs.iter().map(|c| Value::str(c.as_str())).collect());
        let piles = |ps: &[Vec<Card>]| Value::List(ps.iter().map(|p| cards(p)).collect());
        let ints = |xs: &[Chips]| Value::List(xs.iter().map(|&x| Value::Int(x)).collect());
        let seats = |xs: &[usize]| Value::list(xs.iter().copied());
        let opt = |x: Option<usize>| x.map_or(Value::None, Value::from);
        Value::Map(vec![
            (
                "flow_cache".into(),
                Value::List(self.flow_cache.iter().map(|s| Value::str(s.token())).collect()),
            ),
            ("seed".into(), Value::Int(self.seed as i64)),
            ("button".into(), Value::from(self.button)),
            ("deck".into(), cards(&self.deck)),
            ("hole".into(), piles(&self.hole)),
            ("community".into(), cards(&self.community)),
            ("discards".into(), piles(&self.discards)),
            ("stacks".into(), ints(&self.stacks)),
            ("street_bets".into(), ints(&self.street_bets)),
            (
                "pots".into(),
                Value::List(
                    self.pots
                        .iter()
                        .map(|p| {
                            Value::Map(vec![
                                ("amount".into(), Value::Int(p.amount)),
                                ("eligible".into(), seats(&p.eligible)),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "betting".into(),
                Value::Map(vec![
                    ("raises".into(), Value::Int(self.betting.raises as i64)),
                    ("to_act".into(), seats(&self.betting.to_act)),
                ]),
            ),
            ("current_actor".into(), opt(self.current_actor)),
            ("folded".into(), seats(&self.folded)),
            ("all_in".into(), seats(&self.all_in)),
            (
                "showdown".into(),
                Value::List(
                    self.showdown
                        .iter()
                        .map(|e| {
                            Value::Map(vec![
                                ("player".into(), Value::from(e.player)),
                                ("strategy".into(), Value::from(e.strategy)),
                                ("hand".into(), Value::str(e.hand.clone())),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "message".into(),
                Value::List(
                    self.messages
                        .iter()
                        .map(|m| {
                            Value::Map(vec![
                                ("from".into(), m.from.to_value()),
                                ("to".into(), m.to.to_value()),
                                ("text".into(), Value::str(m.text.clone())),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])
    }

    /// Inverse of [`GameState::to_value`]. The error names the offending key.
    pub fn from_value(v: &Value) -> Result<Self, String> {
        let Value::Map(entries) = v else {
            return Err("state must be a map".into());
        };
        for (k, _) in entries {
            if !STATE_KEYS.contains(&k.as_str()) {
                return Err(format!("unknown key `{k}`"));
            }
        }
        let field = |k: &str| v.get(k).ok_or_else(|| format!("missing key `{k}`"));
        let bad = |k: &str| format!("bad value for `{k}`");

        let list = |k: &str| -> Result<&[Value], String> { field(k)?.as_list().ok_or_else(|| bad(k)) };
        let card = |x: &Value, k: &str| -> Result<Card, String> {
            x.as_str().and_then(|s| Card::new(s).ok()).ok_or_else(|| bad(k))
        };
        let cards_of = |xs: &[Value], k: &str| -> Result<Vec<Card>, String> { xs.iter().map(|x| card(x, k)).collect() };
        let cards = |k: &str| cards_of(list(k)?, k);
        let piles = |k: &str| -> Result<Vec<Vec<Card>>, String> {
            list(k)?.iter().map(|p| cards_of(p.as_list().ok_or_else(|| bad(k))?, k)).collect()
        };
        let seat = |x: &Value, k: &str| -> Result<usize, String> {
            x.as_int().filter(|n| *n >= 0).map(|n| n as usize).ok_or_else(|| bad(k))
        };
        let seats_of = |xs: &[Value], k: &str| -> Result<Vec<usize>, String> { xs.iter().map(|x| seat(x, k)).collect() };
        let ints = |k: &str| -> Result<Vec<Chips>, String> {
            list(k)?.iter().map(|x| x.as_int().ok_or_else(|| bad(k))).collect()
        };
        let sub = |m: &Value, key: &str, k: &str| -> Result<Value, String> { m.get(key).cloned().ok_or_else(|| bad(k)) };
        let map_keys = |m: &Value, keys: &[&str], k: &str| -> Result<(), String> {
            match m {
                Value::Map(es) if es.len() == keys.len() && es.iter().zip(keys).all(|((a, _), b)| a == b) => Ok(()),
                _ => Err(bad(k)),
            }
        };

        let flow_cache = list("flow_cache")?
            .iter()
            .map(|x| x.as_str().and_then(FlowStep::from_token).ok_or_else(|| bad("flow_cache")))
            .collect::<Result<_, _>>()?;
        let seed = field("seed")?.as_int().ok_or_else(|| bad("seed"))? as u64;
        let button = seat(field("button")?, "button")?;

        let mut pots = Vec::new();
        for p in list("pots")? {
            map_keys(p, &["amount", "eligible"], "pots")?;
            let amount = sub(p, "amount", "pots")?.as_int().ok_or_else(|| bad("pots"))?;
            let eligible = seats_of(sub(p, "eligible", "pots")?.as_list().ok_or_else(|| bad("pots"))?, "pots")?;
            pots.push(Pot { amount, eligible });
        }

        let b = field("betting")?;
        map_keys(b, &["raises", "to_act"], "betting")?;
        let raises = sub(b, "raises", "betting")?.as_int().filter(|n| *n >= 0).ok_or_else(|| bad("betting"))? as u32;
        let to_act = seats_of(sub(b, "to_act", "betting")?.as_list().ok_or_else(|| bad("betting"))?, "betting")?;

        let current_actor = match field("current_actor")? {
            Value::None => None,
            x => Some(seat(x, "current_actor")?),
        };

        let mut showdown = Vec::new();
        for e in list("showdown")? {
            map_keys(e, &["player", "strategy", "hand"], "showdown")?;
            showdown.push(ShowdownEntry {
                player: seat(&sub(e, "player", "showdown")?, "showdown")?,
                strategy: seat(&sub(e, "strategy", "showdown")?, "showdown")?,
                hand: sub(e, "hand", "showdown")?.as_str().ok_or_else(|| bad("showdown"))?.to_string(),
            });
        }

        let mut messages = Vec::new();
        for m in list("message")? {
            map_keys(m, &["from", "to", "text"], "message")?;
            messages.push(Message {
                from: Party::from_value(&sub(m, "from", "message")?).ok_or_else(|| bad("message"))?,
                to: Party::from_value(&sub(m, "to", "message")?).ok_or_else(|| bad("message"))?,
                text: sub(m, "text", "message")?.as_str().ok_or_else(|| bad("message"))?.to_string(),
            });
        }

        Ok(GameState {
            flow_cache,
            seed,
            button,
            deck: cards("deck")?,
            hole: piles("hole")?,
            community: cards("community")?,
            discards: piles("discards")?,
            stacks: ints("stacks")?,
            street_bets: ints("street_bets")?,
            pots,
            betting: Betting { raises, to_act },
            current_actor,
            folded: seats_of(list("folded")?, "folded")?,
            all_in: seats_of(list("all_in")?, "all_in")?,
            showdown,
            messages,
        })
    }
}
