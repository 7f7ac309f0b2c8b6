use std::cmp::Ordering;

use deckforge_core::hand::{best_hand, oracle_best_hand, Evaluator, Oracle};
use deckforge_core::script::presets;
use deckforge_core::{parse_cards, Card};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cards(s: &str) -> Vec<Card> {
    parse_cards(s).unwrap()
}

#[test]
fn omaha_two_hole_rule_beats_a_better_one_hole_hand() {
    let spec = presets::omaha();
    let hole = cards("S1 D2 D7 C9");
    let board = cards("S5 S8 SJ SK H3");
    // One spade from hand would make a flush; exactly two cannot.
    let fast = best_hand(&spec, 0, &hole, &board).unwrap();
    let slow = oracle_best_hand(&spec, 0, &hole, &board).unwrap();
    assert_ne!(fast.name, "Flush");
    assert_eq!((fast.combination, &fast.tiebreak), (slow.combination, &slow.tiebreak));
    let mut loose = spec.clone();
    loose.strategies[0].hole_use = deckforge_core::script::HoleUse::Any;
    assert_eq!(best_hand(&loose, 0, &hole, &board).unwrap().name, "Flush");
}

#[test]
fn badugi_pools_from_a_sixteen_card_deck() {
    let spec = presets::find("badugi").unwrap().spec();
    let deck = cards("H1 H2 H3 H4 D1 D2 D3 D4 C1 C2 C3 C4 S1 S2 S3 S4");
    let ev = Evaluator::new(&spec, 0);
    let mut oracle = Oracle::new(&spec, 0);
    let mut n = 0;
    for a in 0..16 {
        for b in a + 1..16 {
            for c in b + 1..16 {
                for d in c + 1..16 {
                    for e in d + 1..16 {
                        let pool = [deck[a], deck[b], deck[c], deck[d], deck[e]];
                        let fast = ev.best_hand(&pool, &[]).unwrap();
                        let slow = oracle.best_hand(&pool, &[]).unwrap();
                        assert_eq!((fast.combination, &fast.tiebreak), (slow.combination, &slow.tiebreak), "{pool:?}");
                        n += 1;
                    }
                }
            }
        }
    }
    assert_eq!(n, 4368);
    let nut = ev.evaluate(&cards("H1 D2 C3 S4")).unwrap();
    assert_eq!(nut.name, "Badugi");
    assert_eq!(nut.tiebreak, vec![4, 3, 2, 1]);
}

#[test]
fn seven_five_is_the_deuce_to_seven_nut() {
    let spec = presets::find("27-triple-draw").unwrap().spec();
    let ev = Evaluator::new(&spec, 0);
    let mut deck = Vec::new();
    for v in ["2", "3", "4", "5", "7"] {
        for s in ["H", "D", "C", "S"] {
            deck.push(Card::regular(s, v).unwrap());
        }
    }
    let nut = ev.evaluate(&cards("H7 D5 C4 S3 H2")).unwrap();
    let nut_hands = |h: &[Card]| {
        let mut values: Vec<&str> = h.iter().map(|c| &c.as_str()[1..]).collect();
        values.sort();
        let suits = h.iter().map(|c| &c.as_str()[..1]).collect::<std::collections::HashSet<_>>();
        values == ["2", "3", "4", "5", "7"] && suits.len() > 1
    };
    let mut beaten = 0;
    let mut idx = [0usize, 1, 2, 3, 4];
    loop {
        let hand: Vec<Card> = idx.iter().map(|&i| deck[i]).collect();
        let r = ev.evaluate(&hand).unwrap();
        let ord = ev.compare(&nut, &r).unwrap();
        if nut_hands(&hand) {
            assert_eq!(ord, Ordering::Equal, "{hand:?}");
        } else {
            assert_eq!(ord, Ordering::Greater, "{hand:?}");
            beaten += 1;
        }
        let mut i = 5;
        loop {
            if i == 0 {
                // 4^5 offsuit-or-suited 7-5 hands, minus the four flushes.
                assert_eq!(beaten, 15504 - (1024 - 4));
                return;
            }
            i -= 1;
            if idx[i] < 20 - 5 + i {
                idx[i] += 1;
                for j in i + 1..5 {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[test]
fn random_pools_agree_with_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, hole_n, board_n, rounds) in [
        ("texas", 2, 5, 300),
        ("omaha", 4, 5, 200),
        ("omaha-hl", 4, 5, 200),
        ("short-deck", 2, 5, 200),
        ("stardust", 2, 5, 200),
        ("odd-lover", 2, 5, 200),
        ("joker-holdem", 2, 5, 60),
    ] {
        let spec = presets::find(name).unwrap().spec();
        for strategy in 0..spec.strategies.len() {
            let ev = Evaluator::new(&spec, strategy);
            let mut oracle = Oracle::new(&spec, strategy);
            for _ in 0..rounds {
                let mut deck = spec.deck();
                deck.shuffle(&mut rng);
                let (hole, board) = (&deck[..hole_n], &deck[hole_n..hole_n + board_n]);
                let fast = ev.best_hand(hole, board).unwrap();
                let slow = oracle.best_hand(hole, board).unwrap();
                assert_eq!(
                    (fast.combination, &fast.tiebreak),
                    (slow.combination, &slow.tiebreak),
                    "{name}/{strategy}: {hole:?} {board:?}"
                );
            }
        }
    }
}

#[test]
fn two_jokers_agree_with_the_oracle() {
    let spec = presets::find("joker-holdem").unwrap().spec();
    let ev = Evaluator::new(&spec, 0);
    let mut oracle = Oracle::new(&spec, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let regular: Vec<Card> = spec.deck().into_iter().filter(|c| !matches!(c.as_str(), "J1" | "J2")).collect();
    for _ in 0..40 {
        let mut deck = regular.clone();
        deck.shuffle(&mut rng);
        let hand = [cards("J1 J2"), deck[..3].to_vec()].concat();
        let fast = ev.best_hand(&hand, &[]).unwrap();
        let slow = oracle.best_hand(&hand, &[]).unwrap();
        assert_eq!((fast.combination, &fast.tiebreak), (slow.combination, &slow.tiebreak), "{hand:?}");
    }
}

#[test]
fn literal_examples() {
    let six = presets::find("6-card-draw").unwrap().spec();
    let ev = Evaluator::new(&six, 0);
    assert_eq!(ev.evaluate(&cards("D8 H8 C10 H10 HQ DQ")).unwrap().name, "Three Pair");
    assert_eq!(ev.evaluate(&cards("H8 C8 S8 CQ HQ DQ")).unwrap().name, "Big House");
    let fh = ev.evaluate(&cards("H8 C8 S8 CQ HQ D2")).unwrap();
    let tp = ev.evaluate(&cards("D8 H8 C10 H10 HQ DQ")).unwrap();
    let bh = ev.evaluate(&cards("H8 C8 S8 CQ HQ DQ")).unwrap();
    assert_eq!(ev.compare(&fh, &tp).unwrap(), Ordering::Less);
    assert_eq!(ev.compare(&tp, &bh).unwrap(), Ordering::Less);
    assert_eq!(ev.compare(&tp, &tp.clone()).unwrap(), Ordering::Equal);

    let odd = presets::find("odd-lover").unwrap().spec();
    assert_eq!(odd.value_spec.ordered, ["2", "4", "6", "8", "10", "1", "3", "5", "7", "9"]);

    let stardust = presets::find("stardust").unwrap().spec();
    let h = Evaluator::new(&stardust, 0).evaluate(&cards("S9 S10 SJ SQ *")).unwrap();
    assert_eq!(h.name, "Stardust Straight Flush");
}

#[test]
fn every_hand_is_at_least_the_catch_all() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in presets::all() {
        let spec = p.spec();
        for s in 0..spec.strategies.len() {
            let ev = Evaluator::new(&spec, s);
            let size = spec.strategies[s].hand_size;
            for _ in 0..50 {
                let mut deck = spec.deck();
                deck.shuffle(&mut rng);
                let r = ev.evaluate(&deck[..size]).unwrap();
                assert!(spec.strategies[s].combinations.iter().any(|c| c.name == r.name));
            }
        }
    }
}

fn texas_hand() -> impl Strategy<Value = Vec<Card>> {
    Just(presets::texas().deck()).prop_shuffle().prop_map(|d| d[..5].to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn comparison_is_a_total_order(a in texas_hand(), b in texas_hand(), c in texas_hand()) {
        let spec = presets::texas();
        let ev = Evaluator::new(&spec, 0);
        let (a, b, c) = (ev.evaluate(&a).unwrap(), ev.evaluate(&b).unwrap(), ev.evaluate(&c).unwrap());
        prop_assert_eq!(ev.compare(&a, &b).unwrap(), ev.compare(&b, &a).unwrap().reverse());
        if ev.compare(&a, &b).unwrap() != Ordering::Less && ev.compare(&b, &c).unwrap() != Ordering::Less {
            prop_assert_ne!(ev.compare(&a, &c).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn low_comparison_is_a_total_order(seed in any::<u64>()) {
        let spec = presets::find("badugi").unwrap().spec();
        let ev = Evaluator::new(&spec, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hands = Vec::new();
        for _ in 0..3 {
            let mut d = spec.deck();
            d.shuffle(&mut rng);
            hands.push(ev.evaluate(&d[..4]).unwrap());
        }
        let mut sorted = hands.clone();
        sorted.sort_by(|x, y| ev.compare(x, y).unwrap());
        for w in sorted.windows(2) {
            prop_assert_ne!(ev.compare(&w[0], &w[1]).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn adding_a_wild_never_hurts(seed in any::<u64>()) {
        let spec = presets::find("joker-holdem").unwrap().spec();
        let ev = Evaluator::new(&spec, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d: Vec<Card> = spec.deck().into_iter().filter(|c| c.as_str() != "J1" && c.as_str() != "J2").collect();
        d.shuffle(&mut rng);
        let hole = &d[..2];
        let board = &d[2..7];
        let without = ev.best_hand(hole, board).unwrap();
        let with = ev.best_hand(&[hole, &cards("J1")].concat(), board).unwrap();
        prop_assert_ne!(ev.compare(&with, &without).unwrap(), Ordering::Less);
    }
}
