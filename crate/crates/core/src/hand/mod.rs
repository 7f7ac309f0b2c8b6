//! Hand evaluation under a [`RankingStrategy`].
//!
//! A hand is classified as the highest-ranked combination whose pattern it
//! satisfies. Among the ways the hand can realize that pattern, the one with
//! the strategy's preferred tiebreak vector is kept. Wild cards are resolved
//! by trying assignments and keeping the preferred result.
//!
//! Ranks inside tiebreak vectors are 1-based positions in the strategy's value
//! order (the top value moves to the bottom for ace-low strategies). A top
//! value played low in a wheel run counts as 0 and valueless special cards
//! count as -1.

mod oracle;

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::card::Card;
use crate::script::{
    Atom, CountCmp, Direction, GameSpec, HoleUse, LowConvention, RankingStrategy, SpecialKind, TiebreakKey,
};

pub use oracle::{oracle_best_hand, Oracle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HandError {
    #[error("no legal hand can be formed from {hole} hole and {community} community cards")]
    NoLegalHand { hole: usize, community: usize },
    #[error("hands were ranked under different strategies")]
    StrategyMismatch,
    #[error("expected {expected} cards, got {got}")]
    WrongHandSize { expected: usize, got: usize },
    #[error("card `{0}` is not part of this game")]
    UnknownCard(Card),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankedHand {
    pub strategy: usize,
    /// Index into the strategy's combination list.
    pub combination: usize,
    pub name: String,
    pub rank: u32,
    pub cards: Vec<Card>,
    pub tiebreak: Vec<i8>,
    /// Each wild card in `cards` with the regular card it stands for.
    pub wild_assignment: Vec<(Card, Card)>,
}

/// Which way a strategy's comparison points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pref {
    /// Higher combination, then higher tiebreak.
    High,
    /// Lower combination, then lower tiebreak.
    Low,
    /// Higher combination, then lower tiebreak.
    Badugi,
}

impl Pref {
    pub(crate) fn of(s: &RankingStrategy) -> Self {
        match (s.direction, s.low_convention) {
            (Direction::High, _) => Pref::High,
            (Direction::Low, LowConvention::BadugiStyle) => Pref::Badugi,
            (Direction::Low, _) => Pref::Low,
        }
    }

    /// `Greater` when `a` is the better hand.
    pub(crate) fn cmp(self, a: (u32, &[i8]), b: (u32, &[i8])) -> Ordering {
        match self {
            Pref::High => a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)),
            Pref::Low => b.0.cmp(&a.0).then_with(|| b.1.cmp(a.1)),
            Pref::Badugi => a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)),
        }
    }

    /// `Greater` when tiebreak `a` is preferred within one combination.
    pub(crate) fn cmp_tiebreak(self, a: &[i8], b: &[i8]) -> Ordering {
        match self {
            Pref::High => a.cmp(b),
            Pref::Low | Pref::Badugi => b.cmp(a),
        }
    }
}

/// Combinations ignored by a strategy: ace-to-five lows disregard straights
/// and flushes.
pub(crate) fn combination_ignored(s: &RankingStrategy, pattern: &crate::script::Pattern) -> bool {
    s.low_convention == LowConvention::AceToFive
        && pattern.uses(|a| matches!(a, Atom::ConsecutiveValues(_) | Atom::SameSuit(_)))
}

/// Position-to-rank table for a strategy: 1-based, top value first when ace-low.
pub(crate) fn value_ranks(num_values: usize, ace_low: bool) -> Vec<i8> {
    (0..num_values)
        .map(|pos| {
            if !ace_low {
                pos as i8 + 1
            } else if pos + 1 == num_values {
                1
            } else {
                pos as i8 + 2
            }
        })
        .collect()
}

/// Compares two ranked hands; `Greater` means `a` wins.
pub fn compare_hands(a: &RankedHand, b: &RankedHand, strategy: &RankingStrategy) -> Result<Ordering, HandError> {
    let fits = |h: &RankedHand| {
        strategy.combinations.get(h.combination).is_some_and(|c| c.rank_index == h.rank && c.name == h.name)
    };
    if a.strategy != b.strategy || !fits(a) || !fits(b) {
        return Err(HandError::StrategyMismatch);
    }
    Ok(Pref::of(strategy).cmp((a.rank, &a.tiebreak), (b.rank, &b.tiebreak)))
}

/// Best hand for one strategy of `spec`. Builds an [`Evaluator`] each call;
/// reuse one when ranking many hands.
pub fn best_hand(spec: &GameSpec, strategy: usize, hole: &[Card], community: &[Card]) -> Result<RankedHand, HandError> {
    Evaluator::new(spec, strategy).best_hand(hole, community)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Info {
    rank: i8,
    suit: i8,
    value: i8,
    /// Index into the game's specials, or -1 for regular cards.
    special: i8,
    wild: bool,
}

impl Info {
    /// Has a suit and value, including a wild that has been assigned one.
    fn regular(&self) -> bool {
        self.value >= 0
    }
}

#[derive(Debug, Clone)]
struct Term {
    size: usize,
    same_value: bool,
    consecutive: bool,
    same_suit: bool,
    distinct_suits: bool,
    distinct_values: bool,
    value_mask: u64,
}

#[derive(Debug, Clone)]
struct Compiled {
    index: usize,
    rank: u32,
    terms: Vec<Term>,
    /// Terms with equal atoms share a class; their groups are ordered
    /// canonically in the tiebreak.
    class: Vec<usize>,
    hand_atoms: Vec<(i8, CountCmp, usize)>,
    tiebreak: Vec<TiebreakKey>,
}

#[derive(Debug, Clone)]
struct Scored {
    combo: usize,
    rank: u32,
    tiebreak: Vec<i8>,
}

/// Precomputed tables for ranking hands under one strategy of a spec.
#[derive(Debug, Clone)]
pub struct Evaluator {
    strategy_idx: usize,
    strategy: RankingStrategy,
    pref: Pref,
    cards: HashMap<Card, Info>,
    /// Every regular card a wild may stand for.
    regular: Vec<(Card, Info)>,
    suits: Vec<String>,
    suit_class: Vec<i8>,
    top_rank: i8,
    wheel: bool,
    combos: Vec<Compiled>,
    qualifier_rank: Option<i8>,
    /// Absent suits are interchangeable for wild assignment.
    suit_symmetric: bool,
}

impl Evaluator {
    /// # Panics
    /// When `strategy` is out of range for the game.
    pub fn new(spec: &GameSpec, strategy: usize) -> Self {
        let s = spec.strategies[strategy].clone();
        let nv = spec.value_spec.ordered.len();
        let ranks = value_ranks(nv, s.ace_low);
        let suit_class: Vec<i8> = spec
            .suit_spec
            .suits
            .iter()
            .map(|x| spec.suit_spec.class_of(x).map_or(0, |c| c as i8))
            .collect();

        let mut cards = HashMap::new();
        let mut regular = Vec::new();
        for (si, suit) in spec.suit_spec.suits.iter().enumerate() {
            for (vi, value) in spec.value_spec.ordered.iter().enumerate() {
                if let Ok(c) = Card::regular(suit, value) {
                    let info = Info { rank: ranks[vi], suit: si as i8, value: vi as i8, special: -1, wild: false };
                    cards.insert(c, info);
                    regular.push((c, info));
                }
            }
        }
        for (i, sp) in spec.specials.iter().enumerate() {
            if let Ok(c) = Card::new(&sp.symbol) {
                let wild = sp.kind == SpecialKind::Wild;
                cards.insert(c, Info { rank: -1, suit: -1, value: -1, special: i as i8, wild });
            }
        }

        let value_pos = |v: &str| spec.value_spec.position(v);
        let mut combos: Vec<Compiled> = s
            .combinations
            .iter()
            .enumerate()
            .filter(|(_, c)| !combination_ignored(&s, &c.pattern))
            .map(|(index, c)| {
                let mut terms = Vec::new();
                let mut raw_terms: Vec<&Vec<Atom>> = Vec::new();
                let mut hand_atoms = Vec::new();
                for term in &c.pattern.terms {
                    let mut t = Term {
                        size: 0,
                        same_value: false,
                        consecutive: false,
                        same_suit: false,
                        distinct_suits: false,
                        distinct_values: false,
                        value_mask: u64::MAX,
                    };
                    for atom in term {
                        match atom {
                            Atom::SameValue(k) => (t.size, t.same_value) = (*k, true),
                            Atom::ConsecutiveValues(k) => (t.size, t.consecutive) = (*k, true),
                            Atom::SameSuit(k) => (t.size, t.same_suit) = (*k, true),
                            Atom::DistinctSuits(k) => (t.size, t.distinct_suits) = (*k, true),
                            Atom::DistinctValues(k) => (t.size, t.distinct_values) = (*k, true),
                            Atom::ValueIn(vs) => {
                                t.value_mask = vs.iter().filter_map(|v| value_pos(v)).fold(0, |m, p| m | 1 << p);
                            }
                            Atom::Special { symbol, cmp, count } => {
                                let idx = spec.specials.iter().position(|x| &x.symbol == symbol).map_or(-1, |i| i as i8);
                                hand_atoms.push((idx, *cmp, *count));
                            }
                        }
                    }
                    if t.size > 0 {
                        terms.push(t);
                        raw_terms.push(term);
                    }
                }
                let class = raw_terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| raw_terms[..i].iter().position(|u| u == t).unwrap_or(i))
                    .collect();
                Compiled { index, rank: c.rank_index, terms, class, hand_atoms, tiebreak: c.tiebreak.clone() }
            })
            .collect();
        combos.sort_by(|a, b| b.rank.cmp(&a.rank));

        let qualifier_rank = s.qualifier.as_deref().and_then(value_pos).map(|p| ranks[p]);
        let uses_suit_order = spec.suit_spec.rank_classes.len() > 1
            && s.combinations.iter().any(|c| c.tiebreak.contains(&TiebreakKey::Suits));

        Evaluator {
            strategy_idx: strategy,
            pref: Pref::of(&s),
            wheel: s.wheel,
            strategy: s,
            cards,
            regular,
            suits: spec.suit_spec.suits.clone(),
            suit_class,
            top_rank: nv as i8,
            combos,
            qualifier_rank,
            suit_symmetric: !uses_suit_order,
        }
    }

    pub fn strategy(&self) -> &RankingStrategy {
        &self.strategy
    }

    fn info(&self, c: Card) -> Result<Info, HandError> {
        self.cards.get(&c).copied().ok_or(HandError::UnknownCard(c))
    }

    /// `Greater` when `a` wins.
    pub fn compare(&self, a: &RankedHand, b: &RankedHand) -> Result<Ordering, HandError> {
        compare_hands(a, b, &self.strategy)
    }

    /// Whether a hand may win the share of this strategy. Only strategies with
    /// a qualifier impose anything: the hand must be the catch-all
    /// combination with no card above the qualifier value.
    pub fn qualifies(&self, hand: &RankedHand) -> bool {
        let Some(q) = self.qualifier_rank else { return true };
        if !self.strategy.combinations[hand.combination].pattern.is_catch_all() {
            return false;
        }
        hand.cards.iter().all(|c| {
            let card = hand.wild_assignment.iter().find(|(w, _)| w == c).map_or(*c, |(_, r)| *r);
            self.cards.get(&card).is_some_and(|i| i.rank <= q)
        })
    }

    /// Ranks exactly `hand_size` cards.
    pub fn evaluate(&self, cards: &[Card]) -> Result<RankedHand, HandError> {
        if cards.len() != self.strategy.hand_size {
            return Err(HandError::WrongHandSize { expected: self.strategy.hand_size, got: cards.len() });
        }
        let infos: Vec<Info> = cards.iter().map(|&c| self.info(c)).collect::<Result<_, _>>()?;
        let (scored, assignment) = self.eval_infos(&infos, None).expect("the catch-all always matches");
        Ok(self.finish(cards.to_vec(), scored, assignment))
    }

    /// Best realization of one combination (index into the strategy's list),
    /// or `None` when the cards cannot form it.
    pub fn match_combination(&self, cards: &[Card], combination: usize) -> Result<Option<RankedHand>, HandError> {
        if cards.len() != self.strategy.hand_size {
            return Err(HandError::WrongHandSize { expected: self.strategy.hand_size, got: cards.len() });
        }
        let infos: Vec<Info> = cards.iter().map(|&c| self.info(c)).collect::<Result<_, _>>()?;
        let Some(pos) = self.combos.iter().position(|c| c.index == combination) else {
            return Ok(None);
        };
        Ok(self.eval_infos(&infos, Some(pos)).map(|(s, a)| self.finish(cards.to_vec(), s, a)))
    }

    /// Best hand over every `hand_size` subset of hole plus community cards
    /// that obeys the strategy's hole-card rule.
    pub fn best_hand(&self, hole: &[Card], community: &[Card]) -> Result<RankedHand, HandError> {
        let size = self.strategy.hand_size;
        let no_hand = HandError::NoLegalHand { hole: hole.len(), community: community.len() };
        let hole_i: Vec<Info> = hole.iter().map(|&c| self.info(c)).collect::<Result<_, _>>()?;
        let comm_i: Vec<Info> = community.iter().map(|&c| self.info(c)).collect::<Result<_, _>>()?;

        let mut best: Option<(Vec<usize>, Scored, Vec<(usize, Info)>)> = None;
        let mut consider = |picked: &[usize], pool: &[Info]| {
            let infos: Vec<Info> = picked.iter().map(|&i| pool[i]).collect();
            let (scored, assign) = self.eval_infos(&infos, None).expect("the catch-all always matches");
            let better = match &best {
                None => true,
                Some((_, b, _)) => {
                    self.pref.cmp((scored.rank, &scored.tiebreak), (b.rank, &b.tiebreak)) == Ordering::Greater
                }
            };
            if better {
                best = Some((picked.to_vec(), scored, assign));
            }
        };

        let pool: Vec<Info> = hole_i.iter().chain(comm_i.iter()).copied().collect();
        match self.strategy.hole_use {
            HoleUse::Any => {
                if pool.len() < size {
                    return Err(no_hand);
                }
                for_each_combination(pool.len(), size, |idx| consider(idx, &pool));
            }
            HoleUse::Exactly(k) => {
                if hole.len() < k || community.len() < size.saturating_sub(k) || k > size {
                    return Err(no_hand);
                }
                let h = hole.len();
                for_each_combination(h, k, |hi| {
                    for_each_combination(community.len(), size - k, |ci| {
                        let picked: Vec<usize> = hi.iter().copied().chain(ci.iter().map(|&c| c + h)).collect();
                        consider(&picked, &pool);
                    });
                });
            }
        }

        let (picked, scored, assign) = best.ok_or(no_hand)?;
        let all: Vec<Card> = hole.iter().chain(community).copied().collect();
        let cards: Vec<Card> = picked.iter().map(|&i| all[i]).collect();
        Ok(self.finish(cards, scored, assign))
    }

    fn finish(&self, cards: Vec<Card>, s: Scored, assign: Vec<(usize, Info)>) -> RankedHand {
        let wild_assignment = assign
            .into_iter()
            .map(|(pos, info)| {
                let stand_in = self.regular.iter().find(|(_, r)| *r == info).map(|(c, _)| *c).expect("assigned a real card");
                (cards[pos], stand_in)
            })
            .collect();
        let def = &self.strategy.combinations[s.combo];
        RankedHand {
            strategy: self.strategy_idx,
            combination: s.combo,
            name: def.name.clone(),
            rank: s.rank,
            cards,
            tiebreak: s.tiebreak,
            wild_assignment,
        }
    }

    /// Scores concrete or wild-bearing cards. With `only`, just that compiled
    /// combination is tried. Returns the wild assignment as (position, card).
    fn eval_infos(&self, infos: &[Info], only: Option<usize>) -> Option<(Scored, Vec<(usize, Info)>)> {
        let wild_pos: Vec<usize> = (0..infos.len()).filter(|&i| infos[i].wild).collect();
        if wild_pos.is_empty() {
            return self.eval_concrete(infos, only).map(|s| (s, Vec::new()));
        }

        let candidates = self.wild_candidates(infos, wild_pos.len());
        let mut hand = infos.to_vec();
        let mut best: Option<(Scored, Vec<usize>)> = None;
        // Wild cards are interchangeable, so assignments are multisets of
        // candidates: non-decreasing index sequences.
        let mut choice = vec![0usize; wild_pos.len()];
        loop {
            for (slot, &pos) in wild_pos.iter().enumerate() {
                let mut c = candidates[choice[slot]];
                c.special = infos[pos].special;
                c.wild = false;
                hand[pos] = c;
            }
            if let Some(s) = self.eval_concrete(&hand, only) {
                let better = match &best {
                    None => true,
                    Some((b, _)) => self.pref.cmp((s.rank, &s.tiebreak), (b.rank, &b.tiebreak)) == Ordering::Greater,
                };
                if better {
                    best = Some((s, choice.clone()));
                }
            }
            // Advance to the next non-decreasing sequence.
            let mut i = choice.len();
            loop {
                if i == 0 {
                    let (s, ch) = best?;
                    let assign = wild_pos
                        .iter()
                        .zip(ch)
                        .map(|(&pos, ci)| {
                            let mut c = candidates[ci];
                            c.special = -1;
                            (pos, c)
                        })
                        .collect();
                    return Some((s, assign));
                }
                i -= 1;
                if choice[i] + 1 < candidates.len() {
                    choice[i] += 1;
                    let v = choice[i];
                    for c in &mut choice[i + 1..] {
                        *c = v;
                    }
                    break;
                }
            }
        }
    }

    /// Regular cards a wild may become. When suits are symmetric only the
    /// suits already present plus `wilds` fresh suits need trying.
    fn wild_candidates(&self, infos: &[Info], wilds: usize) -> Vec<Info> {
        if !self.suit_symmetric {
            return self.regular.iter().map(|(_, i)| *i).collect();
        }
        let mut allowed = vec![false; self.suits.len()];
        for i in infos.iter().filter(|i| i.regular()) {
            allowed[i.suit as usize] = true;
        }
        let mut fresh = wilds;
        for a in allowed.iter_mut() {
            if !*a && fresh > 0 {
                *a = true;
                fresh -= 1;
            }
        }
        self.regular.iter().map(|(_, i)| *i).filter(|i| allowed[i.suit as usize]).collect()
    }

    fn eval_concrete(&self, hand: &[Info], only: Option<usize>) -> Option<Scored> {
        let combos: &[Compiled] = match only {
            Some(i) => std::slice::from_ref(&self.combos[i]),
            None => &self.combos,
        };
        for combo in combos {
            if let Some(tiebreak) = self.best_realization(hand, combo) {
                return Some(Scored { combo: combo.index, rank: combo.rank, tiebreak });
            }
        }
        None
    }

    fn best_realization(&self, hand: &[Info], combo: &Compiled) -> Option<Vec<i8>> {
        for &(sp, cmp, k) in &combo.hand_atoms {
            let n = hand.iter().filter(|c| c.special == sp && sp >= 0).count();
            let ok = match cmp {
                CountCmp::Exactly => n == k,
                CountCmp::AtMost => n <= k,
            };
            if !ok {
                return None;
            }
        }
        let mut search = Search {
            ev: self,
            hand,
            combo,
            groups: Vec::with_capacity(combo.terms.len()),
            used: 0,
            best: None,
        };
        search.run(0);
        search.best
    }

    fn tiebreak(&self, hand: &[Info], combo: &Compiled, groups: &[Group], used: u32) -> Vec<i8> {
        let mut out = Vec::with_capacity(hand.len() * 2);
        for key in &combo.tiebreak {
            match key {
                TiebreakKey::Groups => {
                    let mut ordered: Vec<&Vec<i8>> = groups.iter().map(|g| &g.played).collect();
                    canonical_order(&mut ordered, &combo.class);
                    for g in ordered {
                        out.extend_from_slice(g);
                    }
                }
                TiebreakKey::Kickers => {
                    let mut k: Vec<i8> =
                        (0..hand.len()).filter(|i| used & (1 << i) == 0).map(|i| hand[i].rank).collect();
                    k.sort_unstable_by(|a, b| b.cmp(a));
                    out.extend(k);
                }
                TiebreakKey::All => {
                    let mut k: Vec<i8> = hand.iter().map(|c| c.rank).collect();
                    k.sort_unstable_by(|a, b| b.cmp(a));
                    out.extend(k);
                }
                TiebreakKey::Lowest => out.push(hand.iter().map(|c| c.rank).min().unwrap_or(-1)),
                TiebreakKey::Suits => {
                    let mut k: Vec<i8> = (0..hand.len())
                        .filter(|i| used & (1 << i) != 0)
                        .map(|i| if hand[i].suit < 0 { -1 } else { self.suit_class[hand[i].suit as usize] })
                        .collect();
                    k.sort_unstable_by(|a, b| b.cmp(a));
                    out.extend(k);
                }
            }
        }
        out
    }
}

/// Sorts the groups of each class of identical terms descending, leaving
/// every class in the positions its terms occupy.
pub(crate) fn canonical_order<T: Ord + Clone>(groups: &mut [T], class: &[usize]) {
    for c in 0..class.len() {
        let pos: Vec<usize> = (0..class.len()).filter(|&i| class[i] == c).collect();
        if pos.len() < 2 {
            continue;
        }
        let mut items: Vec<T> = pos.iter().map(|&i| groups[i].clone()).collect();
        items.sort_by(|a, b| b.cmp(a));
        for (&i, item) in pos.iter().zip(items) {
            groups[i] = item;
        }
    }
}

struct Group {
    /// Ranks as played, descending.
    played: Vec<i8>,
    first: usize,
    value: i8,
}

struct Search<'a> {
    ev: &'a Evaluator,
    hand: &'a [Info],
    combo: &'a Compiled,
    groups: Vec<Group>,
    used: u32,
    best: Option<Vec<i8>>,
}

impl Search<'_> {
    fn run(&mut self, t: usize) {
        if t == self.combo.terms.len() {
            let tb = self.ev.tiebreak(self.hand, self.combo, &self.groups, self.used);
            let better = match &self.best {
                None => true,
                Some(b) => self.ev.pref.cmp_tiebreak(&tb, b) == Ordering::Greater,
            };
            if better {
                self.best = Some(tb);
            }
            return;
        }
        // Identical terms take their groups in increasing first-card order.
        let min_first = (0..t)
            .rev()
            .find(|&u| self.combo.class[u] == self.combo.class[t])
            .map_or(0, |u| self.groups[u].first + 1);
        let mut picked = Vec::with_capacity(self.combo.terms[t].size);
        self.pick(t, min_first, &mut picked);
    }

    fn pick(&mut self, t: usize, from: usize, picked: &mut Vec<usize>) {
        let term = &self.combo.terms[t];
        if picked.len() == term.size {
            if let Some(group) = self.complete(t, picked) {
                let mask: u32 = picked.iter().fold(0, |m, &i| m | 1 << i);
                self.used |= mask;
                self.groups.push(group);
                self.run(t + 1);
                self.groups.pop();
                self.used &= !mask;
            }
            return;
        }
        let need = term.size - picked.len();
        let n = self.hand.len();
        for i in from..n {
            if n - i < need {
                break;
            }
            if self.used & (1 << i) != 0 {
                continue;
            }
            let c = self.hand[i];
            if !c.regular() || term.value_mask & (1 << c.value) == 0 {
                continue;
            }
            if !self.compatible(term, picked, c) {
                continue;
            }
            picked.push(i);
            self.pick(t, i + 1, picked);
            picked.pop();
        }
    }

    fn compatible(&self, term: &Term, picked: &[usize], c: Info) -> bool {
        let mut lo = c.rank;
        let mut hi = c.rank;
        let mut lo_w = wheel_rank(c.rank, self.ev.top_rank);
        let mut hi_w = lo_w;
        for &p in picked {
            let o = self.hand[p];
            if term.same_value && o.value != c.value {
                return false;
            }
            if term.same_suit && o.suit != c.suit {
                return false;
            }
            if term.distinct_suits && o.suit == c.suit {
                return false;
            }
            if (term.distinct_values || term.consecutive) && o.value == c.value {
                return false;
            }
            lo = lo.min(o.rank);
            hi = hi.max(o.rank);
            let w = wheel_rank(o.rank, self.ev.top_rank);
            lo_w = lo_w.min(w);
            hi_w = hi_w.max(w);
        }
        if term.consecutive {
            let span = term.size as i8 - 1;
            let normal = hi - lo <= span;
            let wheel = self.ev.wheel && hi_w - lo_w <= span;
            if !normal && !wheel {
                return false;
            }
        }
        true
    }

    fn complete(&self, t: usize, picked: &[usize]) -> Option<Group> {
        let term = &self.combo.terms[t];
        let mut played: Vec<i8> = picked.iter().map(|&i| self.hand[i].rank).collect();
        if term.consecutive {
            let (lo, hi) = (*played.iter().min()?, *played.iter().max()?);
            if hi - lo != term.size as i8 - 1 {
                // Only the wheel reading fits.
                played.iter_mut().for_each(|r| *r = wheel_rank(*r, self.ev.top_rank));
            }
        }
        played.sort_unstable_by(|a, b| b.cmp(a));
        let value = self.hand[picked[0]].value;
        if term.same_value {
            // Same-value groups of different terms need different values.
            for (u, g) in self.groups.iter().enumerate() {
                if self.combo.terms[u].same_value && g.value == value {
                    return None;
                }
            }
        }
        Some(Group { played, first: picked[0], value })
    }
}

fn wheel_rank(rank: i8, top: i8) -> i8 {
    if rank == top {
        0
    } else {
        rank
    }
}

/// Calls `f` with every `k`-subset of `0..n`, in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::parse_cards;
    use crate::script::presets;

    fn cards(s: &str) -> Vec<Card> {
        parse_cards(s).unwrap()
    }

    fn combo_index(spec: &GameSpec, strategy: usize, name: &str) -> usize {
        spec.strategies[strategy].combinations.iter().position(|c| c.name == name).unwrap()
    }

    #[test]
    fn combinations_visit_every_subset() {
        let mut n = 0;
        for_each_combination(7, 5, |_| n += 1);
        assert_eq!(n, 21);
        for_each_combination(3, 0, |s| assert!(s.is_empty()));
    }

    #[test]
    fn three_pair_and_big_house() {
        let spec = parse_six_card();
        let ev = Evaluator::new(&spec, 0);
        let tp = combo_index(&spec, 0, "Three Pair");
        let bh = combo_index(&spec, 0, "Big House");
        assert!(ev.match_combination(&cards("D8 H8 C10 H10 HQ DQ"), tp).unwrap().is_some());
        assert!(ev.match_combination(&cards("H8 C8 S8 CQ HQ DQ"), bh).unwrap().is_some());
        // Four of a kind is not two pairs of distinct values.
        assert!(ev.match_combination(&cards("H8 C8 S8 D8 HQ DQ"), tp).unwrap().is_none());
        assert_eq!(ev.evaluate(&cards("D8 H8 C10 H10 HQ DQ")).unwrap().name, "Three Pair");
    }

    fn parse_six_card() -> GameSpec {
        presets::find("6-card-draw").unwrap().spec()
    }

    #[test]
    fn single_card_is_not_a_pair() {
        let spec = presets::texas();
        let mut strategy_spec = spec.clone();
        strategy_spec.strategies[0].hand_size = 1;
        let ev = Evaluator::new(&strategy_spec, 0);
        let pair = combo_index(&spec, 0, "Pair");
        assert_eq!(ev.match_combination(&cards("H2"), pair).unwrap(), None);
    }

    #[test]
    fn wheel_is_the_lowest_straight() {
        let spec = presets::texas();
        let ev = Evaluator::new(&spec, 0);
        let wheel = ev.evaluate(&cards("H1 D2 C3 S4 H5")).unwrap();
        let six = ev.evaluate(&cards("H6 D2 C3 S4 H5")).unwrap();
        assert_eq!(wheel.name, "Straight");
        assert_eq!(ev.compare(&six, &wheel).unwrap(), Ordering::Greater);
        let broadway = ev.evaluate(&cards("H1 DK CQ SJ H10")).unwrap();
        assert_eq!(ev.compare(&broadway, &six).unwrap(), Ordering::Greater);
    }

    #[test]
    fn two_pair_orders_high_pair_first() {
        let spec = presets::texas();
        let ev = Evaluator::new(&spec, 0);
        let a = ev.evaluate(&cards("HK DK C2 S2 H5")).unwrap();
        let b = ev.evaluate(&cards("HQ DQ CJ SJ H5")).unwrap();
        assert_eq!(a.name, "Two Pair");
        assert_eq!(a.tiebreak[..4], [12, 12, 1, 1]);
        assert_eq!(ev.compare(&a, &b).unwrap(), Ordering::Greater);
    }

    #[test]
    fn omaha_uses_exactly_two_hole_cards() {
        let spec = presets::omaha();
        // Four hearts in hand and one on board: no flush with exactly two.
        let hand = best_hand(&spec, 0, &cards("H2 H3 H4 H9"), &cards("HK S7 D8 CJ C5")).unwrap();
        assert_ne!(hand.name, "Flush");
        let hole_used = hand.cards.iter().filter(|c| cards("H2 H3 H4 H9").contains(c)).count();
        assert_eq!(hole_used, 2);
        let texas_like = Evaluator::new(&presets::texas(), 0);
        let any = texas_like.best_hand(&cards("H2 H3 H4 H9"), &cards("HK S7 D8")).unwrap();
        assert_eq!(any.name, "Flush");
    }

    #[test]
    fn joker_makes_five_of_a_kind() {
        let spec = presets::find("joker-holdem").unwrap().spec();
        let ev = Evaluator::new(&spec, 0);
        let h = ev.evaluate(&cards("H9 D9 C9 S9 J1")).unwrap();
        assert_eq!(h.name, "Five of a Kind");
        assert_eq!(h.wild_assignment.len(), 1);
        let best = ev.best_hand(&cards("J1 J2"), &cards("HQ DQ CQ S2 H4")).unwrap();
        assert_eq!(best.name, "Five of a Kind");
    }

    #[test]
    fn stardust_needs_exactly_one_star() {
        let spec = presets::find("stardust").unwrap().spec();
        let ev = Evaluator::new(&spec, 0);
        assert_eq!(ev.evaluate(&cards("H5 H6 H7 H8 *")).unwrap().name, "Stardust Straight Flush");
        assert_eq!(ev.evaluate(&cards("H5 H6 H7 * *")).unwrap().name, "High Card");
        assert_eq!(ev.evaluate(&cards("H5 D5 C7 * *")).unwrap().name, "High Card");
        assert_eq!(ev.evaluate(&cards("H2 H6 H9 HK *")).unwrap().name, "Stardust Flush");
    }

    #[test]
    fn deuce_seven_best_is_seven_five() {
        let spec = presets::find("27-triple-draw").unwrap().spec();
        let ev = Evaluator::new(&spec, 0);
        let nut = ev.evaluate(&cards("H7 D5 C4 S3 H2")).unwrap();
        let straight = ev.evaluate(&cards("H6 D5 C4 S3 H2")).unwrap();
        let flush = ev.evaluate(&cards("H7 H5 H4 H3 H2")).unwrap();
        assert_eq!(ev.compare(&nut, &straight).unwrap(), Ordering::Greater);
        assert_eq!(ev.compare(&nut, &flush).unwrap(), Ordering::Greater);
    }

    #[test]
    fn ace_five_ignores_straights_and_plays_ace_low() {
        let spec = presets::find("a5-triple-draw").unwrap().spec();
        let ev = Evaluator::new(&spec, 0);
        let wheel = ev.evaluate(&cards("H1 H2 H3 H4 H5")).unwrap();
        assert_eq!(wheel.name, "High Card");
        let six = ev.evaluate(&cards("H6 D4 C3 S2 H1")).unwrap();
        assert_eq!(ev.compare(&wheel, &six).unwrap(), Ordering::Greater);
    }

    #[test]
    fn badugi_prefers_more_cards_then_lower() {
        let spec = presets::find("badugi").unwrap().spec();
        let ev = Evaluator::new(&spec, 0);
        let four = ev.evaluate(&cards("HK D2 C3 S4")).unwrap();
        let three = ev.evaluate(&cards("H1 D2 C3 H4")).unwrap();
        assert_eq!(four.name, "Badugi");
        assert_eq!(three.name, "Three-card Badugi");
        assert_eq!(ev.compare(&four, &three).unwrap(), Ordering::Greater);
        let low = ev.evaluate(&cards("H1 D2 C3 S4")).unwrap();
        assert_eq!(ev.compare(&low, &four).unwrap(), Ordering::Greater);
        // The three-card hand keeps its lowest valid cards.
        assert_eq!(three.tiebreak, vec![3, 2, 1]);
    }

    #[test]
    fn low_qualifier() {
        let spec = presets::find("omaha-hl").unwrap().spec();
        let ev = Evaluator::new(&spec, 1);
        let low = ev.best_hand(&cards("H1 D2 SK SQ"), &cards("C3 S7 H8 DK CK")).unwrap();
        assert!(ev.qualifies(&low));
        let high = ev.best_hand(&cards("H9 D10 SK SQ"), &cards("C3 S7 H8 DK C2")).unwrap();
        assert!(!ev.qualifies(&high));
    }

    #[test]
    fn mismatched_strategies_are_rejected() {
        let spec = presets::find("omaha-hl").unwrap().spec();
        let hi = Evaluator::new(&spec, 0).evaluate(&cards("H1 D2 C3 S4 H6")).unwrap();
        let lo = Evaluator::new(&spec, 1).evaluate(&cards("H1 D2 C3 S4 H6")).unwrap();
        assert_eq!(compare_hands(&hi, &lo, &spec.strategies[0]), Err(HandError::StrategyMismatch));
    }
}
