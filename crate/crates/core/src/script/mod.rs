//! Game scripts: the rule set of one poker variant.
//!
//! A script is a small line-oriented text (see [`parse_script`]) that declares
//! the table (players, bet limits, blinds), the cards (suits, values, special
//! cards), one or two ranking strategies built from declarative combination
//! patterns, and the ordered game flow.

mod parse;
pub mod presets;
mod render;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::card::Card;

pub use parse::{parse_script, ScriptError};
pub use render::render_script;
pub use validate::{validate_spec, Violation, ViolationCode};

pub type Chips = i64;

/// Ascending value order, e.g. `2 < 3 < ... < K < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSpec {
    pub ordered: Vec<String>,
}

impl ValueSpec {
    pub fn new<S: Into<String>>(values: impl IntoIterator<Item = S>) -> Self {
        Self { ordered: values.into_iter().map(Into::into).collect() }
    }

    pub fn position(&self, value: &str) -> Option<usize> {
        self.ordered.iter().position(|v| v == value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuitSpec {
    pub suits: Vec<String>,
    /// Ordered partition of `suits`; a later class outranks an earlier one.
    pub rank_classes: Vec<Vec<String>>,
}

impl SuitSpec {
    /// All suits equal.
    pub fn flat<S: Into<String>>(suits: impl IntoIterator<Item = S>) -> Self {
        let suits: Vec<String> = suits.into_iter().map(Into::into).collect();
        Self { rank_classes: vec![suits.clone()], suits }
    }

    pub fn class_of(&self, suit: &str) -> Option<usize> {
        self.rank_classes.iter().position(|c| c.iter().any(|s| s == suit))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    /// Stands for any suit and value of the owner's choosing.
    Wild,
    /// Has neither suit nor value.
    Null,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialCardSpec {
    pub symbol: String,
    pub count: u32,
    pub kind: SpecialKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountCmp {
    Exactly,
    AtMost,
}

/// One matcher atom.
///
/// Sized atoms (`SameValue` .. `DistinctValues`) constrain a group of exactly
/// `k` cards; `ValueIn` further restricts the values of a group; `Special`
/// counts special cards over the whole hand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Atom {
    SameValue(usize),
    ConsecutiveValues(usize),
    SameSuit(usize),
    DistinctSuits(usize),
    DistinctValues(usize),
    ValueIn(Vec<String>),
    Special { symbol: String, cmp: CountCmp, count: usize },
}

impl Atom {
    pub fn size(&self) -> Option<usize> {
        match *self {
            Atom::SameValue(k)
            | Atom::ConsecutiveValues(k)
            | Atom::SameSuit(k)
            | Atom::DistinctSuits(k)
            | Atom::DistinctValues(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_hand_atom(&self) -> bool {
        matches!(self, Atom::Special { .. })
    }
}

/// Disjoint groups of atoms. Each term is a conjunction of atoms over one
/// group of cards; distinct terms must use disjoint cards, and same-value
/// groups in different terms must have different values.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Pattern {
    pub terms: Vec<Vec<Atom>>,
}

impl Pattern {
    pub fn any() -> Self {
        Self::default()
    }

    /// True for the catch-all pattern that every hand satisfies.
    pub fn is_catch_all(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    /// Group terms: those carrying at least one sized atom.
    pub fn groups(&self) -> impl Iterator<Item = &Vec<Atom>> {
        self.terms.iter().filter(|t| t.iter().any(|a| a.size().is_some()))
    }

    pub fn hand_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.terms.iter().flatten().filter(|a| a.is_hand_atom())
    }

    pub fn uses(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        self.terms.iter().flatten().any(pred)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiebreakKey {
    /// Values of each group's cards, descending, groups in pattern order.
    Groups,
    /// Values of cards outside every group, descending.
    Kickers,
    /// Values of all cards in the hand, descending.
    All,
    /// The single lowest value in the hand.
    Lowest,
    /// Suit rank classes of the group cards, descending.
    Suits,
}

impl TiebreakKey {
    pub fn name(self) -> &'static str {
        match self {
            TiebreakKey::Groups => "groups",
            TiebreakKey::Kickers => "kickers",
            TiebreakKey::All => "all",
            TiebreakKey::Lowest => "lowest",
            TiebreakKey::Suits => "suits",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "groups" => TiebreakKey::Groups,
            "kickers" => TiebreakKey::Kickers,
            "all" => TiebreakKey::All,
            "lowest" => TiebreakKey::Lowest,
            "suits" => TiebreakKey::Suits,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationDef {
    pub name: String,
    pub rank_index: u32,
    pub pattern: Pattern,
    pub tiebreak: Vec<TiebreakKey>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    High,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HoleUse {
    Any,
    Exactly(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowConvention {
    None,
    /// Straights and flushes are ignored.
    AceToFive,
    /// Straights and flushes count against the hand.
    DeuceToSeven,
    /// More valid cards is better; equal counts prefer lower values.
    BadugiStyle,
}

impl LowConvention {
    pub fn name(self) -> &'static str {
        match self {
            LowConvention::None => "none",
            LowConvention::AceToFive => "a5",
            LowConvention::DeuceToSeven => "27",
            LowConvention::BadugiStyle => "badugi",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "none" => LowConvention::None,
            "a5" => LowConvention::AceToFive,
            "27" => LowConvention::DeuceToSeven,
            "badugi" => LowConvention::BadugiStyle,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingStrategy {
    pub direction: Direction,
    pub hand_size: usize,
    pub hole_use: HoleUse,
    pub combinations: Vec<CombinationDef>,
    pub low_convention: LowConvention,
    /// The top value of the base order plays below the bottom value.
    pub ace_low: bool,
    /// The top value may also precede the bottom value in a run (A-2-3-4-5).
    pub wheel: bool,
    /// Low hands qualify only as the catch-all with no card above this value.
    pub qualifier: Option<String>,
}

impl RankingStrategy {
    pub fn catch_all(&self) -> Option<&CombinationDef> {
        self.combinations.iter().find(|c| c.pattern.is_catch_all())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlowStep {
    Start,
    Blind,
    Shuffle,
    Deal(usize),
    Bet,
    Flop(usize),
    Switch(usize),
    Show,
    Prize,
}

/// The nine step categories, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowKind {
    Start,
    Blind,
    Shuffle,
    Deal,
    Flop,
    Switch,
    Bet,
    Show,
    Prize,
}

impl FlowKind {
    pub const ALL: [FlowKind; 9] = [
        FlowKind::Start,
        FlowKind::Blind,
        FlowKind::Shuffle,
        FlowKind::Deal,
        FlowKind::Flop,
        FlowKind::Switch,
        FlowKind::Bet,
        FlowKind::Show,
        FlowKind::Prize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FlowKind::Start => "start",
            FlowKind::Blind => "blind",
            FlowKind::Shuffle => "shuffle",
            FlowKind::Deal => "deal",
            FlowKind::Flop => "flop",
            FlowKind::Switch => "switch",
            FlowKind::Bet => "bet",
            FlowKind::Show => "show",
            FlowKind::Prize => "prize",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        FlowKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for FlowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FlowStep {
    pub fn kind(self) -> FlowKind {
        match self {
            FlowStep::Start => FlowKind::Start,
            FlowStep::Blind => FlowKind::Blind,
            FlowStep::Shuffle => FlowKind::Shuffle,
            FlowStep::Deal(_) => FlowKind::Deal,
            FlowStep::Bet => FlowKind::Bet,
            FlowStep::Flop(_) => FlowKind::Flop,
            FlowStep::Switch(_) => FlowKind::Switch,
            FlowStep::Show => FlowKind::Show,
            FlowStep::Prize => FlowKind::Prize,
        }
    }

    /// Compact token used in state text, e.g. `deal(2)`.
    pub fn token(self) -> String {
        match self {
            FlowStep::Deal(n) => format!("deal({n})"),
            FlowStep::Flop(n) => format!("flop({n})"),
            FlowStep::Switch(n) => format!("switch({n})"),
            other => other.kind().name().to_string(),
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        if let Some((name, rest)) = s.split_once('(') {
            let n: usize = rest.strip_suffix(')')?.parse().ok()?;
            return match name {
                "deal" => Some(FlowStep::Deal(n)),
                "flop" => Some(FlowStep::Flop(n)),
                "switch" => Some(FlowStep::Switch(n)),
                _ => None,
            };
        }
        Some(match FlowKind::from_name(s)? {
            FlowKind::Start => FlowStep::Start,
            FlowKind::Blind => FlowStep::Blind,
            FlowKind::Shuffle => FlowStep::Shuffle,
            FlowKind::Bet => FlowStep::Bet,
            FlowKind::Show => FlowStep::Show,
            FlowKind::Prize => FlowStep::Prize,
            _ => return None,
        })
    }
}

impl fmt::Display for FlowStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// A card split into its declared suit and value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardSymbol {
    pub suit: String,
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSpec {
    pub name: String,
    pub num_players: usize,
    pub min_bet: Chips,
    pub max_bet: Chips,
    pub value_spec: ValueSpec,
    pub suit_spec: SuitSpec,
    pub specials: Vec<SpecialCardSpec>,
    pub strategies: Vec<RankingStrategy>,
    pub flow: Vec<FlowStep>,
    pub starting_stack: Chips,
    pub blinds: (Chips, Chips),
}

pub const DEFAULT_BLINDS: (Chips, Chips) = (1, 2);
pub const DEFAULT_STACK: Chips = 100;

impl GameSpec {
    /// Full deck in canonical order: suits by declaration, values ascending,
    /// then the special cards.
    pub fn deck(&self) -> Vec<Card> {
        let mut deck = Vec::with_capacity(self.deck_size());
        for suit in &self.suit_spec.suits {
            for value in &self.value_spec.ordered {
                if let Ok(c) = Card::regular(suit, value) {
                    deck.push(c);
                }
            }
        }
        for sp in &self.specials {
            if let Ok(c) = Card::new(&sp.symbol) {
                deck.extend(std::iter::repeat_n(c, sp.count as usize));
            }
        }
        deck
    }

    pub fn deck_size(&self) -> usize {
        self.suit_spec.suits.len() * self.value_spec.ordered.len()
            + self.specials.iter().map(|s| s.count as usize).sum::<usize>()
    }

    pub fn special(&self, symbol: &str) -> Option<&SpecialCardSpec> {
        self.specials.iter().find(|s| s.symbol == symbol)
    }

    /// Splits a card token into suit and value. Special cards report their
    /// symbol as the suit and no value.
    pub fn card_symbol(&self, card: Card) -> Option<CardSymbol> {
        let token = card.as_str();
        if self.special(token).is_some() {
            return Some(CardSymbol { suit: token.to_string(), value: None });
        }
        self.suit_spec.suits.iter().find_map(|suit| {
            let value = token.strip_prefix(suit.as_str())?;
            self.value_spec
                .position(value)
                .map(|_| CardSymbol { suit: suit.clone(), value: Some(value.to_string()) })
        })
    }

    /// Hole cards each player ends up with after every deal step.
    pub fn hole_cards_per_player(&self) -> usize {
        self.flow.iter().map(|s| if let FlowStep::Deal(n) = s { *n } else { 0 }).sum()
    }

    pub fn community_cards(&self) -> usize {
        self.flow.iter().map(|s| if let FlowStep::Flop(n) = s { *n } else { 0 }).sum()
    }

    /// Cards removed from the deck by deal and flop steps.
    pub fn cards_dealt(&self) -> usize {
        self.hole_cards_per_player() * self.num_players + self.community_cards()
    }

    pub fn total_chips(&self) -> Chips {
        self.starting_stack * self.num_players as Chips
    }

    pub fn is_split_pot(&self) -> bool {
        self.strategies.len() > 1
    }
}
