use std::collections::BTreeMap;

use deckforge_core::datagen::{
    balance, build_corpus, corpus_stats, emit_samples, sample_variant, simulate_round, BalanceTarget, CorpusConfig,
    DatagenError, Mode, Source,
};
use deckforge_core::diff::{merge, parse_diff};
use deckforge_core::engine::{derive_seed, RoundLog};
use deckforge_core::script::{presets, validate_spec, FlowKind};
use deckforge_core::state::{parse_state, serialize_state};

fn texas_logs(n: usize, seed: u64) -> Vec<RoundLog> {
    let spec = presets::texas();
    (0..n).map(|r| simulate_round(&spec, derive_seed(seed, "round", r)).unwrap()).collect()
}

fn label_counts(logs: &[RoundLog]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for l in logs {
        *m.entry(l.outcome_label.clone()).or_insert(0) += 1;
    }
    m
}

#[test]
fn sampled_variants_always_validate() {
    let base = presets::base();
    for i in 0..10_000u64 {
        let v = sample_variant(&base[i as usize % base.len()], i);
        assert_eq!(validate_spec(&v), Ok(()), "variant {i}");
    }
}

#[test]
fn sampled_variants_play_to_the_end() {
    let base = presets::base();
    let mut changed = 0;
    for i in 0..300u64 {
        let p = &base[i as usize % base.len()];
        let v = sample_variant(p, i);
        changed += usize::from(v != p.spec());
        let log = simulate_round(&v, i).unwrap_or_else(|e| panic!("variant {i} of {}: {e}", p.name));
        let last = log.final_state().unwrap();
        assert!(last.is_finished());
        assert_eq!(last.stacks.iter().sum::<i64>(), v.total_chips());
        for t in &log.transitions {
            assert_eq!(merge(&v, &t.prev, &t.diff).unwrap(), t.next);
        }
    }
    assert!(changed > 250, "{changed}");
}

#[test]
fn pooled_logs_cover_every_category() {
    let mut seen = std::collections::BTreeSet::new();
    for (i, p) in presets::base().iter().enumerate() {
        for r in 0..20 {
            let log = simulate_round(&p.spec(), (i * 100 + r) as u64).unwrap();
            seen.extend(log.transitions.iter().map(|t| t.category));
        }
    }
    assert_eq!(seen.into_iter().collect::<Vec<_>>(), FlowKind::ALL.to_vec());
}

#[test]
fn uniform_input_is_left_alone() {
    let logs = texas_logs(60, 1);
    let counts = label_counts(&logs);
    // Keep only labels with exactly the smallest count so the input is uniform.
    let min = counts.values().copied().filter(|&c| c >= 3).min().unwrap();
    let labels: Vec<&String> = counts.iter().filter(|(_, &c)| c == min).map(|(l, _)| l).collect();
    let uniform: Vec<RoundLog> = logs.iter().filter(|l| labels.contains(&&l.outcome_label)).cloned().collect();
    let targets: Vec<BalanceTarget> =
        labels.iter().map(|l| BalanceTarget { label: l.to_string(), target_weight: 1.0 }).collect();
    assert_eq!(balance(&uniform, &targets, 5).unwrap(), uniform);
}

#[test]
fn skew_is_corrected_toward_targets() {
    let logs = texas_logs(400, 2);
    let counts = label_counts(&logs);
    let mut by_count: Vec<(&String, &usize)> = counts.iter().collect();
    by_count.sort_by_key(|(l, c)| (std::cmp::Reverse(**c), (*l).clone()));
    let (common, rare) = (by_count[0].0.clone(), by_count[by_count.len() - 1].0.clone());

    // Build a 90/10 skew between the two labels.
    let pick = |label: &str, n: usize| -> Vec<RoundLog> {
        logs.iter().filter(|l| l.outcome_label == label).cycle().take(n).cloned().collect()
    };
    let skewed: Vec<RoundLog> = [pick(&common, 90), pick(&rare, 10)].concat();
    let targets = vec![
        BalanceTarget { label: common.clone(), target_weight: 1.0 },
        BalanceTarget { label: rare.clone(), target_weight: 1.0 },
    ];
    let out = balance(&skewed, &targets, 3).unwrap();
    let after = label_counts(&out);
    let ratio = after[&common] as f64 / after[&rare] as f64;
    assert!((0.5..=2.0).contains(&ratio), "{after:?}");
    assert_eq!(out.len(), skewed.len());
    // Every output round is one of the inputs.
    assert!(out.iter().all(|o| skewed.contains(o)));
    assert_eq!(out, balance(&skewed, &targets, 3).unwrap());
}

#[test]
fn rare_hands_catch_up_with_pairs() {
    let logs = texas_logs(1500, 4);
    let counts = label_counts(&logs);
    let rare = ["Straight", "Flush", "Full House"]
        .into_iter()
        .filter(|l| counts.contains_key(*l))
        .max_by_key(|l| std::cmp::Reverse(counts[*l]))
        .unwrap();
    assert!(counts[rare] * 2 < counts["Pair"], "{counts:?}");
    let targets: Vec<BalanceTarget> =
        counts.keys().map(|l| BalanceTarget { label: l.clone(), target_weight: 1.0 }).collect();
    let after = label_counts(&balance(&logs, &targets, 9).unwrap());
    assert!(after[rare] * 2 >= after["Pair"], "{after:?}");
}

#[test]
fn missing_target_category_is_an_error() {
    let logs = texas_logs(5, 6);
    let t = vec![BalanceTarget { label: "Royal Something".into(), target_weight: 1.0 }];
    assert!(matches!(balance(&logs, &t, 0), Err(DatagenError::EmptyCategory(l)) if l == "Royal Something"));
    assert!(matches!(balance(&[], &t, 0), Err(DatagenError::NoRounds)));
}

#[test]
fn corpus_records_are_consistent_across_modes() {
    let config = CorpusConfig {
        source: Source::Variants(20),
        rounds: 40,
        modes: vec![Mode::Nsp, Mode::Dsp],
        balance: None,
        seed: 8,
        max_samples: None,
    };
    let corpus = build_corpus(&config).unwrap();
    let specs = deckforge_core::datagen::source_specs(&config.source, config.seed).unwrap();
    let nsp: Vec<_> = corpus.iter().filter(|r| r.mode == Mode::Nsp).collect();
    let dsp: Vec<_> = corpus.iter().filter(|r| r.mode == Mode::Dsp).collect();
    assert_eq!(nsp.len(), dsp.len());
    for (n, d) in nsp.iter().zip(&dsp) {
        assert_eq!((n.round_id, n.step_idx), (d.round_id, d.step_idx));
        let spec = &specs[n.round_id % specs.len()];
        let prev = parse_state(&d.prev_state).unwrap();
        let merged = merge(spec, &prev, &parse_diff(&d.target).unwrap()).unwrap();
        assert_eq!(serialize_state(&merged), n.target);
    }
}

#[test]
fn sample_cap_is_exact() {
    let config = CorpusConfig {
        source: Source::AllBase,
        rounds: 50,
        modes: vec![Mode::Dsp],
        balance: None,
        seed: 1,
        max_samples: Some(500),
    };
    let corpus = build_corpus(&config).unwrap();
    assert_eq!(corpus.len(), 500);
    let stats = corpus_stats(&corpus);
    assert!(stats.mean_states_per_round > 10.0);
    let log = simulate_round(&presets::texas(), 0).unwrap();
    assert_eq!(emit_samples(&log, Mode::Nsp, 0).len(), log.transitions.len());
}
