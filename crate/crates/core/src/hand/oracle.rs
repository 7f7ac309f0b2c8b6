//! Brute-force reference ranking, kept independent of the fast evaluator.
//!
//! Subsets come from bitmasks, each wild card tries every regular card in
//! turn (ordered, with repeats), and every combination is checked by labeling
//! each card with a term or "unused" in all possible ways. Slow by design;
//! tests use it to cross-check [`super::Evaluator`].

use std::collections::HashMap;

use super::{HandError, RankedHand};
use crate::card::Card;
use crate::script::{Atom, CountCmp, Direction, GameSpec, HoleUse, LowConvention, RankingStrategy, SpecialKind, TiebreakKey};

#[derive(Debug, Clone)]
struct OCard {
    rank: i8,
    suit: Option<usize>,
    value: Option<usize>,
    special: Option<String>,
    wild: bool,
}

#[derive(Debug, Clone)]
struct Best {
    combo: usize,
    rank: u32,
    tiebreak: Vec<i8>,
    assignment: Vec<(usize, Card)>,
}

/// Reference ranker for one strategy, memoizing per card subset.
pub struct Oracle {
    spec: GameSpec,
    idx: usize,
    memo: HashMap<Vec<Card>, Best>,
}

/// One-off reference ranking. See [`Oracle`] for repeated use.
pub fn oracle_best_hand(spec: &GameSpec, strategy: usize, hole: &[Card], community: &[Card]) -> Result<RankedHand, HandError> {
    Oracle::new(spec, strategy).best_hand(hole, community)
}

impl Oracle {
    pub fn new(spec: &GameSpec, strategy: usize) -> Self {
        Self { spec: spec.clone(), idx: strategy, memo: HashMap::new() }
    }

    fn strategy(&self) -> &RankingStrategy {
        &self.spec.strategies[self.idx]
    }

    fn rank_of(&self, pos: usize) -> i8 {
        let n = self.spec.value_spec.ordered.len();
        if self.strategy().ace_low {
            ((pos + 1) % n + 1) as i8
        } else {
            (pos + 1) as i8
        }
    }

    fn decode(&self, c: Card) -> Result<OCard, HandError> {
        let sym = self.spec.card_symbol(c).ok_or(HandError::UnknownCard(c))?;
        match sym.value {
            Some(v) => {
                let pos = self.spec.value_spec.position(&v).ok_or(HandError::UnknownCard(c))?;
                let suit = self.spec.suit_spec.suits.iter().position(|s| *s == sym.suit);
                Ok(OCard { rank: self.rank_of(pos), suit, value: Some(pos), special: None, wild: false })
            }
            None => {
                let sp = self.spec.special(&sym.suit).ok_or(HandError::UnknownCard(c))?;
                Ok(OCard { rank: -1, suit: None, value: None, special: Some(sp.symbol.clone()), wild: sp.kind == SpecialKind::Wild })
            }
        }
    }

    fn better(&self, a: (u32, &[i8]), b: (u32, &[i8])) -> bool {
        let s = self.strategy();
        match (s.direction, s.low_convention) {
            (Direction::High, _) => a.0 > b.0 || (a.0 == b.0 && a.1 > b.1),
            (Direction::Low, LowConvention::BadugiStyle) => a.0 > b.0 || (a.0 == b.0 && a.1 < b.1),
            (Direction::Low, _) => a.0 < b.0 || (a.0 == b.0 && a.1 < b.1),
        }
    }

    pub fn best_hand(&mut self, hole: &[Card], community: &[Card]) -> Result<RankedHand, HandError> {
        let size = self.strategy().hand_size;
        let hole_use = self.strategy().hole_use;
        let pool: Vec<Card> = hole.iter().chain(community).copied().collect();
        let hole_mask: u64 = (1u64 << hole.len()) - 1;
        let mut best: Option<(Vec<Card>, Best)> = None;
        for mask in 0u64..(1u64 << pool.len()) {
            if mask.count_ones() as usize != size {
                continue;
            }
            if let HoleUse::Exactly(k) = hole_use {
                if (mask & hole_mask).count_ones() as usize != k {
                    continue;
                }
            }
            let subset: Vec<Card> = (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect();
            let scored = self.rank_subset(&subset)?;
            let replace = match &best {
                None => true,
                Some((_, b)) => self.better((scored.rank, &scored.tiebreak), (b.rank, &b.tiebreak)),
            };
            if replace {
                best = Some((subset, scored));
            }
        }
        let (cards, b) = best.ok_or(HandError::NoLegalHand { hole: hole.len(), community: community.len() })?;
        let def = &self.strategy().combinations[b.combo];
        Ok(RankedHand {
            strategy: self.idx,
            combination: b.combo,
            name: def.name.clone(),
            rank: b.rank,
            wild_assignment: b.assignment.iter().map(|&(i, c)| (cards[i], c)).collect(),
            cards,
            tiebreak: b.tiebreak,
        })
    }

    fn rank_subset(&mut self, subset: &[Card]) -> Result<Best, HandError> {
        let mut key = subset.to_vec();
        key.sort();
        if let Some(b) = self.memo.get(&key) {
            // Memo entries index into the sorted key; remap to this order.
            let mut b = b.clone();
            for (i, _) in b.assignment.iter_mut() {
                let wild = key[*i];
                *i = subset.iter().position(|c| *c == wild).expect("same cards");
            }
            return Ok(b);
        }
        let cards: Vec<OCard> = key.iter().map(|&c| self.decode(c)).collect::<Result<_, _>>()?;
        let wilds: Vec<usize> = (0..cards.len()).filter(|&i| cards[i].wild).collect();
        let regular: Vec<(Card, OCard)> = self
            .spec
            .deck()
            .into_iter()
            .filter_map(|c| self.decode(c).ok().filter(|o| o.value.is_some()).map(|o| (c, o)))
            .collect();

        let mut best: Option<Best> = None;
        let mut choice = vec![0usize; wilds.len()];
        loop {
            let mut concrete = cards.clone();
            for (w, &pos) in wilds.iter().enumerate() {
                let stand = &regular[choice[w]].1;
                concrete[pos].rank = stand.rank;
                concrete[pos].suit = stand.suit;
                concrete[pos].value = stand.value;
            }
            if let Some((combo, rank, tb)) = self.classify(&concrete) {
                let replace = match &best {
                    None => true,
                    Some(b) => self.better((rank, &tb), (b.rank, &b.tiebreak)),
                };
                if replace {
                    let assignment = wilds.iter().enumerate().map(|(w, &pos)| (pos, regular[choice[w]].0)).collect();
                    best = Some(Best { combo, rank, tiebreak: tb, assignment });
                }
            }
            // Odometer over every ordered assignment.
            let mut w = 0;
            while w < choice.len() {
                choice[w] += 1;
                if choice[w] < regular.len() {
                    break;
                }
                choice[w] = 0;
                w += 1;
            }
            if w == choice.len() {
                break;
            }
        }
        let best = best.expect("the catch-all always matches");
        self.memo.insert(key.clone(), best.clone());
        let mut out = best;
        for (i, _) in out.assignment.iter_mut() {
            let wild = key[*i];
            *i = subset.iter().position(|c| *c == wild).expect("same cards");
        }
        Ok(out)
    }

    /// Highest combination the concrete cards satisfy, with its preferred
    /// tiebreak over all labelings.
    fn classify(&self, cards: &[OCard]) -> Option<(usize, u32, Vec<i8>)> {
        let s = self.strategy();
        let mut order: Vec<usize> = (0..s.combinations.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(s.combinations[i].rank_index));
        for ci in order {
            let def = &s.combinations[ci];
            let ignored = s.low_convention == LowConvention::AceToFive
                && def.pattern.terms.iter().flatten().any(|a| matches!(a, Atom::ConsecutiveValues(_) | Atom::SameSuit(_)));
            if ignored {
                continue;
            }
            let mut best: Option<Vec<i8>> = None;
            let terms: Vec<&Vec<Atom>> = def.pattern.terms.iter().filter(|t| t.iter().any(|a| a.size().is_some())).collect();
            let hand_ok = def.pattern.terms.iter().flatten().all(|a| match a {
                Atom::Special { symbol, cmp, count } => {
                    let n = cards.iter().filter(|c| c.special.as_deref() == Some(symbol.as_str())).count();
                    match cmp {
                        CountCmp::Exactly => n == *count,
                        CountCmp::AtMost => n <= *count,
                    }
                }
                _ => true,
            });
            if !hand_ok {
                continue;
            }
            let t = terms.len();
            let sizes: Vec<usize> = terms.iter().map(|term| term.iter().find_map(|a| a.size()).unwrap_or(0)).collect();
            let total = (t + 1).pow(cards.len() as u32);
            let mut labels = vec![0usize; cards.len()];
            let mut counts = vec![0usize; t + 1];
            for code in 0..total {
                let mut x = code;
                counts.iter_mut().for_each(|c| *c = 0);
                for l in labels.iter_mut() {
                    *l = x % (t + 1);
                    counts[*l] += 1;
                    x /= t + 1;
                }
                if counts[..t] != sizes[..] {
                    continue;
                }
                if let Some(tb) = self.check_labeling(cards, &terms, &labels, &def.tiebreak) {
                    let replace = match &best {
                        None => true,
                        Some(b) => self.better((def.rank_index, &tb), (def.rank_index, b)),
                    };
                    if replace {
                        best = Some(tb);
                    }
                }
            }
            if let Some(tb) = best {
                return Some((ci, def.rank_index, tb));
            }
        }
        None
    }

    fn check_labeling(&self, cards: &[OCard], terms: &[&Vec<Atom>], labels: &[usize], keys: &[TiebreakKey]) -> Option<Vec<i8>> {
        let t = terms.len();
        let top = self.spec.value_spec.ordered.len() as i8;
        let mut groups: Vec<Vec<i8>> = Vec::with_capacity(t);
        let mut group_values: Vec<Option<usize>> = Vec::with_capacity(t);
        for (ti, term) in terms.iter().enumerate() {
            let size = term.iter().find_map(|a| a.size())?;
            let members: Vec<&OCard> = (0..cards.len()).filter(|&i| labels[i] == ti).map(|i| &cards[i]).collect();
            if members.len() != size || members.iter().any(|c| c.value.is_none()) {
                return None;
            }
            let values: Vec<usize> = members.iter().map(|c| c.value.unwrap()).collect();
            let suits: Vec<usize> = members.iter().map(|c| c.suit.unwrap()).collect();
            let all_distinct = |v: &[usize]| (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j]));
            let mut ranks: Vec<i8> = members.iter().map(|c| c.rank).collect();
            let mut same_value = false;
            for atom in term.iter() {
                let ok = match atom {
                    Atom::SameValue(_) => {
                        same_value = true;
                        values.iter().all(|v| *v == values[0])
                    }
                    Atom::SameSuit(_) => suits.iter().all(|s| *s == suits[0]),
                    Atom::DistinctSuits(_) => all_distinct(&suits),
                    Atom::DistinctValues(_) => all_distinct(&values),
                    Atom::ValueIn(vs) => members.iter().all(|c| {
                        vs.iter().any(|v| self.spec.value_spec.position(v) == c.value)
                    }),
                    Atom::ConsecutiveValues(_) => {
                        let run = |r: &[i8]| {
                            let mut r = r.to_vec();
                            r.sort();
                            r.windows(2).all(|w| w[1] == w[0] + 1)
                        };
                        if run(&ranks) {
                            true
                        } else if self.strategy().wheel {
                            let low: Vec<i8> = ranks.iter().map(|&r| if r == top { 0 } else { r }).collect();
                            if run(&low) {
                                ranks = low;
                                true
                            } else {
                                false
                            }
                        } else {
                            false
                        }
                    }
                    Atom::Special { .. } => true,
                };
                if !ok {
                    return None;
                }
            }
            if same_value {
                if group_values.iter().any(|v| *v == Some(values[0])) {
                    return None;
                }
                group_values.push(Some(values[0]));
            } else {
                group_values.push(None);
            }
            ranks.sort_by(|a, b| b.cmp(a));
            groups.push(ranks);
        }

        // Groups of identical terms are listed in descending order.
        let mut swapped = true;
        while swapped {
            swapped = false;
            for i in 0..t {
                for j in i + 1..t {
                    if terms[i] == terms[j] && groups[i] < groups[j] {
                        groups.swap(i, j);
                        swapped = true;
                    }
                }
            }
        }

        let desc = |mut v: Vec<i8>| {
            v.sort_by(|a, b| b.cmp(a));
            v
        };
        let mut tb = Vec::new();
        for key in keys {
            match key {
                TiebreakKey::Groups => groups.iter().for_each(|g| tb.extend(g)),
                TiebreakKey::Kickers => {
                    tb.extend(desc((0..cards.len()).filter(|&i| labels[i] == t).map(|i| cards[i].rank).collect()))
                }
                TiebreakKey::All => tb.extend(desc(cards.iter().map(|c| c.rank).collect())),
                TiebreakKey::Lowest => tb.push(cards.iter().map(|c| c.rank).min().unwrap_or(-1)),
                TiebreakKey::Suits => tb.extend(desc(
                    (0..cards.len())
                        .filter(|&i| labels[i] < t)
                        .map(|i| match cards[i].suit {
                            Some(s) => self.spec.suit_spec.class_of(&self.spec.suit_spec.suits[s]).unwrap_or(0) as i8,
                            None => -1,
                        })
                        .collect(),
                )),
            }
        }
        Some(tb)
    }
}
