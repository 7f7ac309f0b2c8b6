use std::collections::HashSet;

use serde::Serialize;

use super::*;
use crate::card::Card;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    TooFewPlayers,
    BetLimits,
    Blinds,
    StartingStack,
    ValueSpec,
    SuitSpec,
    CardSymbols,
    StrategyCount,
    CatchAll,
    DuplicateRank,
    HandSize,
    HoleUse,
    BadGroup,
    UnknownSymbol,
    MalformedFlow,
    DeckExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

impl Violation {
    fn new(code: ViolationCode, detail: impl Into<String>) -> Self {
        Self { code, detail: detail.into() }
    }
}

/// Checks every structural invariant of a spec and returns all violations.
pub fn validate_spec(spec: &GameSpec) -> Result<(), Vec<Violation>> {
    use ViolationCode::*;
    let mut out = Vec::new();
    let mut push = |code, detail: String| out.push(Violation::new(code, detail));

    if spec.num_players < 2 {
        push(TooFewPlayers, format!("{} players", spec.num_players));
    }
    if spec.min_bet < 1 || spec.min_bet > spec.max_bet {
        push(BetLimits, format!("bet limits {}..{}", spec.min_bet, spec.max_bet));
    }
    if spec.blinds.0 < 0 || spec.blinds.1 < 0 || spec.blinds.0 > spec.blinds.1 {
        push(Blinds, format!("blinds {}/{}", spec.blinds.0, spec.blinds.1));
    }
    if spec.starting_stack < 1 {
        push(StartingStack, format!("starting stack {}", spec.starting_stack));
    }

    let values = &spec.value_spec.ordered;
    if values.len() < 2 {
        push(ValueSpec, "fewer than two values".to_string());
    }
    if values.iter().collect::<HashSet<_>>().len() != values.len() {
        push(ValueSpec, "duplicate value symbol".to_string());
    }

    let suits = &spec.suit_spec.suits;
    if suits.is_empty() || suits.iter().collect::<HashSet<_>>().len() != suits.len() {
        push(SuitSpec, "suits must be non-empty and distinct".to_string());
    }
    let mut in_classes: Vec<&String> = spec.suit_spec.rank_classes.iter().flatten().collect();
    in_classes.sort();
    let mut sorted_suits: Vec<&String> = suits.iter().collect();
    sorted_suits.sort();
    if in_classes != sorted_suits || spec.suit_spec.rank_classes.iter().any(|c| c.is_empty()) {
        push(SuitSpec, "suit rank classes must partition the suits".to_string());
    }

    // Every card token must be well formed and unambiguous.
    let mut tokens = HashSet::new();
    for suit in suits {
        for value in values {
            match Card::regular(suit, value) {
                Ok(c) => {
                    if !tokens.insert(c) {
                        push(CardSymbols, format!("card token `{c}` is ambiguous"));
                    }
                }
                Err(e) => push(CardSymbols, e.to_string()),
            }
        }
    }
    let mut special_syms = HashSet::new();
    for sp in &spec.specials {
        match Card::new(&sp.symbol) {
            Ok(c) => {
                if tokens.contains(&c) || !special_syms.insert(c) {
                    push(CardSymbols, format!("special `{}` clashes with another card", sp.symbol));
                }
                if sp.symbol == "none" || sp.symbol.parse::<i64>().is_ok() {
                    push(CardSymbols, format!("special `{}` is a reserved word", sp.symbol));
                }
            }
            Err(e) => push(CardSymbols, e.to_string()),
        }
    }

    if spec.strategies.is_empty() || spec.strategies.len() > 2 {
        push(StrategyCount, format!("{} strategies", spec.strategies.len()));
    }
    let hole = spec.hole_cards_per_player();
    let community = spec.community_cards();
    for (i, s) in spec.strategies.iter().enumerate() {
        let catch_alls = s.combinations.iter().filter(|c| c.pattern.is_catch_all()).count();
        if catch_alls != 1 {
            push(CatchAll, format!("strategy {i} has {catch_alls} catch-all combinations"));
        }
        let ranks: HashSet<u32> = s.combinations.iter().map(|c| c.rank_index).collect();
        if ranks.len() != s.combinations.len() {
            push(DuplicateRank, format!("strategy {i} repeats a rank index"));
        }
        if s.hand_size < 1 || s.hand_size > hole + community {
            push(HandSize, format!("strategy {i} hand size {} with {hole}+{community} cards", s.hand_size));
        }
        if let super::HoleUse::Exactly(k) = s.hole_use {
            if k > hole || k > s.hand_size || s.hand_size - k > community {
                push(HoleUse, format!("strategy {i} needs exactly {k} of {hole} hole cards"));
            }
        }
        if let Some(q) = &s.qualifier {
            if spec.value_spec.position(q).is_none() {
                push(UnknownSymbol, format!("qualifier `{q}`"));
            }
        }
        for combo in &s.combinations {
            check_pattern(spec, s, combo, &mut push);
        }
    }

    let flow = &spec.flow;
    if flow.first() != Some(&FlowStep::Start) {
        push(MalformedFlow, "flow must begin with start".to_string());
    }
    if flow.last() != Some(&FlowStep::Prize) {
        push(MalformedFlow, "flow must end with prize".to_string());
    }
    let inner = flow.get(1..flow.len().saturating_sub(1)).unwrap_or(&[]);
    if inner.iter().any(|s| matches!(s, FlowStep::Start | FlowStep::Prize)) {
        push(MalformedFlow, "start and prize may only open and close the flow".to_string());
    }
    if flow.iter().any(|s| matches!(s, FlowStep::Deal(0) | FlowStep::Flop(0))) {
        push(MalformedFlow, "deal and flop need at least one card".to_string());
    }
    if spec.cards_dealt() > spec.deck_size() {
        push(DeckExhausted, format!("flow deals {} cards from a {}-card deck", spec.cards_dealt(), spec.deck_size()));
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn check_pattern(
    spec: &GameSpec,
    strategy: &RankingStrategy,
    combo: &CombinationDef,
    push: &mut impl FnMut(ViolationCode, String),
) {
    let mut total = 0;
    for term in &combo.pattern.terms {
        let sizes: HashSet<usize> = term.iter().filter_map(Atom::size).collect();
        let has_value_in = term.iter().any(|a| matches!(a, Atom::ValueIn(_)));
        if sizes.len() > 1 || sizes.contains(&0) || (sizes.is_empty() && has_value_in) {
            push(ViolationCode::BadGroup, format!("`{}` has an inconsistent group", combo.name));
        }
        total += sizes.into_iter().next().unwrap_or(0);
        for atom in term {
            match atom {
                Atom::ValueIn(vs) => {
                    for v in vs {
                        if spec.value_spec.position(v).is_none() {
                            push(ViolationCode::UnknownSymbol, format!("value `{v}` in `{}`", combo.name));
                        }
                    }
                }
                Atom::Special { symbol, .. } => {
                    if spec.special(symbol).is_none() {
                        push(ViolationCode::UnknownSymbol, format!("special `{symbol}` in `{}`", combo.name));
                    }
                }
                _ => {}
            }
        }
    }
    if total > strategy.hand_size {
        push(ViolationCode::BadGroup, format!("`{}` needs {total} cards in a {}-card hand", combo.name, strategy.hand_size));
    }
}
