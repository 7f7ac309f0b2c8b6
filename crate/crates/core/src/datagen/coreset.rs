use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diff::{CoreFn, EditOp, Param};
use crate::value::Value;

/// A warm-up pair: a plain-language request to implement one core function
/// and a description of what a correct implementation does in one concrete
/// scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreSetPair {
    pub function: String,
    /// The diff line that invokes the function in this scenario.
    pub call: String,
    pub instruction: String,
    pub behavior: String,
}

/// `n` pairs cycling through `registry` in order, each with randomized
/// table size, button and arguments.
pub fn emit_core_set(registry: &[CoreFn], n: usize, seed: u64) -> Vec<CoreSetPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if registry.is_empty() {
        return Vec::new();
    }
    (0..n).map(|i| pair(&registry[i % registry.len()], &mut rng)).collect()
}

fn pair(f: &CoreFn, rng: &mut ChaCha8Rng) -> CoreSetPair {
    let players: usize = rng.random_range(2..=9);
    let button = rng.random_range(0..players);
    let mut args: Vec<(String, Value)> = Vec::new();
    for (name, kind, optional) in f.params {
        if *optional && rng.random_bool(0.5) {
            continue;
        }
        let v = match (kind, *name) {
            (Param::Int, "seed") => Value::Int(rng.random_range(0..1_000_000)),
            (Param::Int, "strategy") => Value::Int(rng.random_range(0..2)),
            (Param::Int, _) => Value::Int(rng.random_range(1..=5)),
            (Param::Seat, _) => Value::from(rng.random_range(0..players)),
            (Param::Target, _) if rng.random_bool(0.7) => Value::str("all"),
            (Param::Target, _) => Value::from(rng.random_range(0..players)),
        };
        args.push((name.to_string(), v));
    }
    let arg = |k: &str| args.iter().find(|(n, _)| n == k).map(|(_, v)| v.clone());
    let int = |k: &str| arg(k).and_then(|v| v.as_int()).unwrap_or(0);

    let behavior = match f.name {
        "shuffle" => format!(
            "The deck is reordered by a seeded permutation of seed {}; it keeps the same cards and every other field is unchanged. Calling it again with the same seed on the same deck gives the same order.",
            int("seed")
        ),
        "deal" => {
            let n = int("n");
            match arg("to") {
                Some(Value::Int(p)) => format!("Seat {p} receives the top {n} cards of the deck in order; the deck loses those {n} cards."),
                _ => {
                    let first = (button + 1) % players;
                    format!(
                        "With {players} players still in and the button on seat {button}, deck card j goes to seat ({first} + j) mod {players} for j below {}; each player gains {n} cards and the deck shrinks by {} cards.",
                        n as usize * players,
                        n as usize * players
                    )
                }
            }
        }
        "flop" => format!("The top {} deck cards move, in order, to the end of the community cards.", int("n")),
        "sort_hand" => format!("Seat {}'s hole cards are reordered into deck order; no card changes owner.", int("player")),
        "rank_hands" => match arg("strategy") {
            Some(s) => format!("The showdown lists, for each of the {players} seats still in, the best combination name under strategy {s}."),
            None => format!("The showdown lists, for each of the {players} seats still in and each ranking strategy, the best combination name, ordered by seat."),
        },
        "collect_bets" => format!("All {players} street bets drop to zero and the pots are rebuilt from each seat's total contribution, with a side pot for every all-in level."),
        "award_pots" => "Outstanding bets are collected, every pot is paid to its best qualifying hands with ties split and odd chips going left of the button, and the pots are emptied.".to_string(),
        "next_actor" => "The acting seat leaves the betting queue and the next queued seat becomes the current actor, or nobody if the queue is empty.".to_string(),
        other => format!("Implements `{other}`."),
    };
    let params: Vec<String> = f
        .params
        .iter()
        .map(|(n, k, opt)| format!("{n}: {k:?}{}", if *opt { " (optional)" } else { "" }).to_lowercase())
        .collect();
    let call = EditOp::call(f.name, &args.iter().map(|(k, v)| (k.as_str(), v.clone())).collect::<Vec<_>>()).render();
    let instruction = format!(
        "Implement the core function `{}`({}) for a table of {players} players with the button on seat {button}. {}",
        f.name,
        params.join(", "),
        f.doc
    );
    CoreSetPair { function: f.name.to_string(), call, instruction, behavior }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::REGISTRY;

    #[test]
    fn one_pair_names_its_function() {
        let pairs = emit_core_set(&REGISTRY[1..2], 1, 3);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].function, "deal");
        assert!(pairs[0].call.starts_with("call deal n="));
        assert!(pairs[0].instruction.contains("one at a time"));
    }

    #[test]
    fn shipped_registry_is_covered() {
        let pairs = emit_core_set(REGISTRY, 1000, 0);
        for f in REGISTRY {
            let n = pairs.iter().filter(|p| p.function == f.name).count();
            assert!(n >= 50, "{} {n}", f.name);
            // Exactly one function named per instruction.
            for p in pairs.iter().filter(|p| p.function == f.name) {
                let named = REGISTRY.iter().filter(|g| p.instruction.contains(&format!("`{}`", g.name))).count();
                assert_eq!(named, 1);
            }
        }
        assert_eq!(pairs, emit_core_set(REGISTRY, 1000, 0));
    }
}
