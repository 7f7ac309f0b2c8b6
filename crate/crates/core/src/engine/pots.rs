use std::cmp::Ordering;

use crate::hand::{Evaluator, RankedHand};
use crate::script::{Chips, GameSpec};
use crate::state::{GameState, Pot};

/// Layers pots from per-player round contributions. Each distinct
/// contribution level forms a layer that the non-folded players who reached
/// it are eligible for. Adjacent layers with the same eligible set merge, and
/// a layer nobody can win merges into the one below it.
pub fn build_side_pots(contributions: &[Chips], folded: &[usize]) -> Vec<Pot> {
    let mut levels: Vec<Chips> = contributions.iter().copied().filter(|&c| c > 0).collect();
    levels.sort_unstable();
    levels.dedup();
    let mut pots: Vec<Pot> = Vec::new();
    let mut prev = 0;
    for level in levels {
        let amount: Chips = contributions.iter().map(|&c| c.min(level) - c.min(prev)).sum();
        let eligible: Vec<usize> =
            (0..contributions.len()).filter(|&p| contributions[p] >= level && !folded.contains(&p)).collect();
        prev = level;
        match pots.last_mut() {
            Some(last) if last.eligible == eligible || eligible.is_empty() => last.amount += amount,
            _ if eligible.is_empty() => {
                // Nobody left to win the bottom layer: it stays with its contributors.
                let all: Vec<usize> = (0..contributions.len()).filter(|&p| !folded.contains(&p)).collect();
                pots.push(Pot { amount, eligible: all });
            }
            _ => pots.push(Pot { amount, eligible }),
        }
    }
    pots
}

/// Payout of a round: chips won per seat, and the main pot winner's
/// first-strategy combination name (`none` when no showdown happened).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settlement {
    pub payouts: Vec<Chips>,
    pub label: String,
}

/// Splits `amount` evenly among `winners` (given in payout order); odd chips
/// go one each to the earliest winners.
fn split(amount: Chips, winners: &[usize], payouts: &mut [Chips]) {
    let w = winners.len() as Chips;
    for (i, &p) in winners.iter().enumerate() {
        payouts[p] += amount / w + Chips::from((i as Chips) < amount % w);
    }
}

/// Payouts for every pot. `rankings[s][p]` is seat `p`'s hand under strategy
/// `s`, `None` for folded seats. Each pot is shared equally between the
/// strategies that have a qualifying contender, earlier strategies taking the
/// odd chip; within a share, tied best hands split it. Odd chips go to the
/// earliest winner clockwise from the button.
pub fn distribute_prize(
    spec: &GameSpec,
    button: usize,
    pots: &[Pot],
    rankings: &[Vec<Option<RankedHand>>],
) -> Vec<Chips> {
    let n = spec.num_players;
    let mut payouts = vec![0; n];
    let evs: Vec<Evaluator> = (0..rankings.len()).map(|s| Evaluator::new(spec, s)).collect();
    let order = |p: usize| (p + n - button - 1) % n;
    for pot in pots {
        let mut contenders: Vec<usize> =
            pot.eligible.iter().copied().filter(|&p| rankings.iter().any(|r| r[p].is_some())).collect();
        contenders.sort_by_key(|&p| order(p));
        if contenders.is_empty() {
            continue;
        }
        if contenders.len() == 1 {
            payouts[contenders[0]] += pot.amount;
            continue;
        }
        let winners: Vec<Vec<usize>> = evs
            .iter()
            .enumerate()
            .map(|(s, ev)| {
                let hands: Vec<(usize, &RankedHand)> = contenders
                    .iter()
                    .filter_map(|&p| rankings[s][p].as_ref().map(|h| (p, h)))
                    .filter(|(_, h)| ev.qualifies(h))
                    .collect();
                let mut best: Vec<(usize, &RankedHand)> = Vec::new();
                for (p, h) in hands {
                    match best.first().map(|(_, b)| ev.compare(h, b).unwrap_or(Ordering::Equal)) {
                        None | Some(Ordering::Equal) => best.push((p, h)),
                        Some(Ordering::Greater) => best = vec![(p, h)],
                        Some(Ordering::Less) => {}
                    }
                }
                best.into_iter().map(|(p, _)| p).collect()
            })
            .collect();
        let sharing: Vec<&Vec<usize>> = winners.iter().filter(|w| !w.is_empty()).collect();
        if sharing.is_empty() {
            split(pot.amount, &contenders, &mut payouts);
            continue;
        }
        let k = sharing.len() as Chips;
        for (i, w) in sharing.iter().enumerate() {
            let share = pot.amount / k + Chips::from((i as Chips) < pot.amount % k);
            split(share, w, &mut payouts);
        }
    }
    payouts
}

/// Ranks the remaining players and computes payouts for the current pots.
pub fn settle(spec: &GameSpec, state: &GameState) -> Result<Settlement, String> {
    let live = state.live_players();
    let n = state.num_players();
    let contested = live.len() > 1;
    let mut rankings: Vec<Vec<Option<RankedHand>>> = vec![vec![None; n]; spec.strategies.len()];
    if contested {
        for (s, row) in rankings.iter_mut().enumerate() {
            let ev = Evaluator::new(spec, s);
            for &p in &live {
                row[p] = Some(ev.best_hand(&state.hole[p], &state.community).map_err(|e| e.to_string())?);
            }
        }
    } else {
        for &p in &live {
            rankings[0][p] = Some(RankedHand {
                strategy: 0,
                combination: 0,
                name: String::new(),
                rank: 0,
                cards: Vec::new(),
                tiebreak: Vec::new(),
                wild_assignment: Vec::new(),
            });
        }
    }
    let payouts = distribute_prize(spec, state.button, &state.pots, &rankings);

    let label = match (contested, state.pots.first()) {
        (true, Some(main)) => {
            let ev = Evaluator::new(spec, 0);
            let mut best: Option<&RankedHand> = None;
            for p in state.seats_from_button(1).filter(|p| main.eligible.contains(p)) {
                if let Some(h) = &rankings[0][p] {
                    if best.is_none_or(|b| ev.compare(h, b) == Ok(Ordering::Greater)) {
                        best = Some(h);
                    }
                }
            }
            best.map_or_else(|| "none".to_string(), |h| h.name.clone())
        }
        _ => "none".to_string(),
    };
    Ok(Settlement { payouts, label })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::parse_cards;
    use crate::script::presets;

    /// Reference layering: walk contribution levels upward and give each
    /// slice to everyone still in who paid at least that much.
    fn layered(contrib: &[Chips], folded: &[usize]) -> Vec<(Chips, Vec<usize>)> {
        let top = contrib.iter().copied().max().unwrap_or(0);
        let mut out: Vec<(Chips, Vec<usize>)> = Vec::new();
        for chip in 1..=top {
            let payers = contrib.iter().filter(|&&c| c >= chip).count() as Chips;
            let elig: Vec<usize> = (0..contrib.len()).filter(|&p| contrib[p] >= chip && !folded.contains(&p)).collect();
            match out.last_mut() {
                Some((a, e)) if *e == elig || elig.is_empty() => *a += payers,
                _ => out.push((payers, elig)),
            }
        }
        out
    }

    #[test]
    fn all_in_layers() {
        let pots = build_side_pots(&[10, 20, 30], &[]);
        let got: Vec<(Chips, Vec<usize>)> = pots.into_iter().map(|p| (p.amount, p.eligible)).collect();
        assert_eq!(got, vec![(30, vec![0, 1, 2]), (20, vec![1, 2]), (10, vec![2])]);
        assert_eq!(got, layered(&[10, 20, 30], &[]));
    }

    #[test]
    fn simple_cases() {
        let pots = build_side_pots(&[5, 5, 5, 0], &[3]);
        assert_eq!(pots, vec![Pot { amount: 15, eligible: vec![0, 1, 2] }]);
        let pots = build_side_pots(&[10, 10, 4], &[2]);
        assert_eq!(pots, vec![Pot { amount: 24, eligible: vec![0, 1] }]);
    }

    #[test]
    fn layers_match_the_reference() {
        let cases: [(&[Chips], &[usize]); 4] = [
            (&[3, 50, 50, 100, 7], &[4]),
            (&[100, 100, 2, 0], &[2, 3]),
            (&[40, 10, 40, 25, 25, 0], &[1]),
            (&[20, 50], &[0]),
        ];
        for (c, f) in cases {
            let got: Vec<(Chips, Vec<usize>)> = build_side_pots(c, f).into_iter().map(|p| (p.amount, p.eligible)).collect();
            assert_eq!(got, layered(c, f), "{c:?} {f:?}");
            assert_eq!(got.iter().map(|p| p.0).sum::<Chips>(), c.iter().sum::<Chips>());
        }
    }

    fn ranked(spec: &GameSpec, s: usize, cards: &str) -> Option<RankedHand> {
        Some(Evaluator::new(spec, s).evaluate(&parse_cards(cards).unwrap()).unwrap())
    }

    #[test]
    fn tie_splits_with_odd_chip_left_of_button() {
        let spec = presets::texas();
        let mut r = vec![vec![None; 6]];
        r[0][1] = ranked(&spec, 0, "H1 HK HQ HJ H9");
        r[0][4] = ranked(&spec, 0, "D1 DK DQ DJ D9");
        let pots = [Pot { amount: 101, eligible: vec![1, 4] }];
        // Button 2: clockwise order is 3, 4, 5, 0, 1, 2.
        let pay = distribute_prize(&spec, 2, &pots, &r);
        assert_eq!((pay[4], pay[1]), (51, 50));
        let pay = distribute_prize(&spec, 0, &pots, &r);
        assert_eq!((pay[1], pay[4]), (51, 50));
    }

    #[test]
    fn hi_lo_without_a_low_scoops() {
        let spec = presets::find("omaha-hl").unwrap().spec();
        let mut r = vec![vec![None; 5], vec![None; 5]];
        r[0][0] = ranked(&spec, 0, "HK DK CK S9 H9");
        r[0][1] = ranked(&spec, 0, "H1 D1 C2 S9 HQ");
        r[1][0] = ranked(&spec, 1, "HK DK CK S9 H9");
        r[1][1] = ranked(&spec, 1, "H1 D1 C2 S9 HQ");
        let pots = [Pot { amount: 40, eligible: vec![0, 1] }];
        assert_eq!(distribute_prize(&spec, 4, &pots, &r), vec![40, 0, 0, 0, 0]);

        // Seat 1 now holds a qualifying low and takes half.
        r[0][1] = ranked(&spec, 0, "H1 D2 C3 S4 H6");
        r[1][1] = ranked(&spec, 1, "H1 D2 C3 S4 H6");
        assert_eq!(distribute_prize(&spec, 4, &[Pot { amount: 41, eligible: vec![0, 1] }], &r), vec![21, 20, 0, 0, 0]);
    }
}
