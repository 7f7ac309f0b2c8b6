use deckforge_core::datagen::{build_corpus, CorpusConfig, Mode, SampleRecord, Source};
use deckforge_core::eval::{gold_predictions, render_report, score_states, EvalError, PredictionRecord, Tally};
use deckforge_core::script::FlowKind;

fn corpus(rounds: usize, modes: Vec<Mode>) -> Vec<SampleRecord> {
    build_corpus(&CorpusConfig {
        source: Source::AllBase,
        rounds,
        modes,
        balance: None,
        seed: 12,
        max_samples: None,
    })
    .unwrap()
}

/// A wrong prediction that still parses: the right edit plus a moved button.
fn corrupt(gold: &SampleRecord) -> String {
    match gold.mode {
        Mode::Dsp => format!("{}set button 99\n", gold.target),
        Mode::Nsp => gold.target.replacen("button: ", "button: 9", 1),
    }
}

fn mutate_deals(gold: &[SampleRecord], mode: Mode, every: usize) -> Vec<PredictionRecord> {
    let mut preds = gold_predictions(gold, mode);
    let deal_idx: Vec<usize> = gold
        .iter()
        .filter(|g| g.mode == mode)
        .enumerate()
        .filter(|(_, g)| g.category == FlowKind::Deal)
        .map(|(i, _)| i)
        .collect();
    let golds: Vec<&SampleRecord> = gold.iter().filter(|g| g.mode == mode).collect();
    for (n, &i) in deal_idx.iter().enumerate() {
        if n % every == 0 {
            preds[i].predicted = corrupt(golds[i]);
        }
    }
    preds
}

#[test]
fn gold_scores_perfectly_in_both_modes() {
    let gold = corpus(20, vec![Mode::Nsp, Mode::Dsp]);
    for mode in [Mode::Nsp, Mode::Dsp] {
        let r = score_states(&gold, &gold_predictions(&gold, mode), mode).unwrap();
        for (k, t) in &r.categories {
            assert_eq!(t.correct, t.total, "{k}");
            assert!(t.total > 0, "{k}");
        }
        assert_eq!(r.rounds.overall, Tally { correct: 20, total: 20 });
        assert_eq!(r.rounds.by_game.len(), 10);
        assert!(r.failures.is_empty());
    }
}

#[test]
fn one_in_ten_deal_mutations() {
    // Every bundled game deals once per round, so twenty rounds give twenty deals.
    let gold = corpus(20, vec![Mode::Dsp, Mode::Nsp]);
    for mode in [Mode::Dsp, Mode::Nsp] {
        let deals = gold.iter().filter(|g| g.mode == mode && g.category == FlowKind::Deal).count();
        assert_eq!(deals % 10, 0, "{deals}");
        let r = score_states(&gold, &mutate_deals(&gold, mode, 10), mode).unwrap();
        let deal = r.categories[&FlowKind::Deal];
        assert_eq!(deal.correct * 10, deal.total * 9);
        for (k, t) in r.categories.iter().filter(|(k, _)| **k != FlowKind::Deal) {
            assert_eq!(t.correct, t.total, "{k}");
        }
        assert_eq!(r.rounds.overall.total - r.rounds.overall.correct, deals / 10);
    }
}

#[test]
fn more_corruption_never_helps() {
    let gold = corpus(20, vec![Mode::Dsp]);
    let mut last = f64::INFINITY;
    for every in [10, 5, 2, 1] {
        let r = score_states(&gold, &mutate_deals(&gold, Mode::Dsp, every), Mode::Dsp).unwrap();
        let acc = r.categories[&FlowKind::Deal].rate().unwrap();
        assert!(acc <= last);
        // Round success never beats the weakest category.
        let worst = r.categories.values().filter_map(Tally::rate).fold(1.0, f64::min);
        assert!(r.rounds.overall.rate().unwrap() <= worst);
        last = acc;
    }
}

#[test]
fn missing_and_stray_predictions() {
    let gold = corpus(2, vec![Mode::Dsp]);
    let mut preds = gold_predictions(&gold, Mode::Dsp);
    let dropped = preds.remove(3);
    let r = score_states(&gold, &preds, Mode::Dsp).unwrap();
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].reason.as_deref(), Some("no prediction"));
    assert_eq!(r.rounds.overall.correct, 1);

    preds.push(dropped.clone());
    preds.push(dropped);
    assert_eq!(score_states(&gold, &preds, Mode::Dsp), Err(EvalError::CorpusMismatch(0)));
    let stray = PredictionRecord { round_id: 99, step_idx: 0, predicted: String::new() };
    assert_eq!(score_states(&gold, &[stray], Mode::Dsp), Err(EvalError::CorpusMismatch(99)));
}

#[test]
fn equivalent_but_different_diffs_count_as_correct() {
    let gold = corpus(3, vec![Mode::Dsp]);
    let mut preds = gold_predictions(&gold, Mode::Dsp);
    let mut rewritten = 0;
    for (p, g) in preds.iter_mut().zip(&gold) {
        // Reverse the order of plain edits when no call is involved.
        let lines: Vec<&str> = g.target.lines().skip(1).collect();
        if lines.len() > 1 && lines.iter().all(|l| l.starts_with("set ")) {
            let mut keys: Vec<&str> = lines.iter().map(|l| l.split(' ').nth(1).unwrap()).collect();
            keys.sort();
            keys.dedup();
            if keys.len() == lines.len() {
                p.predicted = lines.iter().rev().map(|l| format!("{l}\n")).collect();
                rewritten += 1;
            }
        }
    }
    assert!(rewritten > 0);
    let r = score_states(&gold, &preds, Mode::Dsp).unwrap();
    assert!(r.failures.is_empty(), "{:?}", r.failures);
}

#[test]
fn unparsable_predictions_are_wrong() {
    let gold = corpus(1, vec![Mode::Nsp, Mode::Dsp]);
    for mode in [Mode::Nsp, Mode::Dsp] {
        let mut preds = gold_predictions(&gold, mode);
        preds[2].predicted = "{{{ nonsense".into();
        let r = score_states(&gold, &preds, mode).unwrap();
        assert_eq!(r.failures.len(), 1);
        assert!(r.failures[0].reason.as_deref().unwrap().starts_with("unparsable"));
    }
}

#[test]
fn report_is_stable_text() {
    let gold = corpus(4, vec![Mode::Dsp]);
    let r = score_states(&gold, &mutate_deals(&gold, Mode::Dsp, 2), Mode::Dsp).unwrap();
    let a = render_report(&r);
    assert_eq!(a, render_report(&r));
    let header: Vec<&str> = a.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(header, ["start", "blind", "shuffle", "deal", "flop", "switch", "bet", "show", "prize"]);
    assert!(a.contains("failures"));
}
