//! Scoring predicted transitions against a gold corpus.
//!
//! Each prediction is judged against the gold record for the same
//! `(round_id, step_idx)`, always starting from the gold previous state.
//! A round succeeds only if every one of its transitions is judged correct.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datagen::{Mode, SampleRecord};
use crate::diff::{equivalent, Equivalence, Mismatch};
use crate::script::{parse_script, FlowKind, GameSpec};
use crate::state::parse_state;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub round_id: usize,
    pub step_idx: usize,
    pub predicted: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    /// A prediction with no gold transition, or two for the same one.
    #[error("prediction does not match the gold corpus in round {0}")]
    CorpusMismatch(usize),
    #[error("gold round {round_id} has a broken record: {reason}")]
    BadGold { round_id: usize, reason: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
}

impl Tally {
    pub fn add(&mut self, ok: bool) {
        self.total += 1;
        self.correct += usize::from(ok);
    }

    pub fn rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }
}

/// Judgement of one gold transition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub round_id: usize,
    pub step_idx: usize,
    pub category: FlowKind,
    /// Game name of the round's script.
    pub game: String,
    pub correct: bool,
    /// Why the prediction was judged wrong.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RoundScores {
    pub overall: Tally,
    pub by_game: BTreeMap<String, Tally>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    /// Every step category, including ones with no transitions.
    pub categories: BTreeMap<FlowKind, Tally>,
    pub rounds: RoundScores,
    /// The first few wrong transitions.
    pub failures: Vec<Verdict>,
}

/// Failure exemplars kept in a report.
pub const MAX_FAILURES: usize = 20;

/// Judges every gold record of `mode`. Missing predictions count as wrong.
pub fn score_states(gold: &[SampleRecord], preds: &[PredictionRecord], mode: Mode) -> Result<ScoreReport, EvalError> {
    let gold: Vec<&SampleRecord> = gold.iter().filter(|g| g.mode == mode).collect();
    let index: HashMap<(usize, usize), usize> = gold.iter().enumerate().map(|(i, g)| ((g.round_id, g.step_idx), i)).collect();
    let mut predicted: Vec<Option<&str>> = vec![None; gold.len()];
    for p in preds {
        let i = *index.get(&(p.round_id, p.step_idx)).ok_or(EvalError::CorpusMismatch(p.round_id))?;
        if predicted[i].replace(&p.predicted).is_some() {
            return Err(EvalError::CorpusMismatch(p.round_id));
        }
    }

    let mut specs: HashMap<&str, GameSpec> = HashMap::new();
    let mut verdicts = Vec::with_capacity(gold.len());
    for (g, pred) in gold.iter().zip(predicted) {
        if !specs.contains_key(g.script.as_str()) {
            let spec = parse_script(&g.script).map_err(|e| EvalError::BadGold { round_id: g.round_id, reason: e.to_string() })?;
            specs.insert(&g.script, spec);
        }
        let spec = &specs[g.script.as_str()];
        let reason = match pred {
            None => Some("no prediction".to_string()),
            Some(p) => judge(spec, g, p)?,
        };
        verdicts.push(Verdict {
            round_id: g.round_id,
            step_idx: g.step_idx,
            category: g.category,
            game: spec.name.clone(),
            correct: reason.is_none(),
            reason,
        });
    }
    Ok(report(&verdicts))
}

fn judge(spec: &GameSpec, gold: &SampleRecord, pred: &str) -> Result<Option<String>, EvalError> {
    let bad = |reason: String| EvalError::BadGold { round_id: gold.round_id, reason };
    match gold.mode {
        Mode::Dsp => {
            let prev = parse_state(&gold.prev_state).map_err(|e| bad(e.to_string()))?;
            Ok(match equivalent(spec, &prev, pred, &gold.target).map_err(|e| bad(e.to_string()))? {
                Equivalence::Equivalent => None,
                Equivalence::NotEquivalent(Mismatch::ParseError(e)) => Some(format!("unparsable diff: {e}")),
                Equivalence::NotEquivalent(Mismatch::MergeError(e)) => Some(format!("diff does not apply: {e}")),
                Equivalence::NotEquivalent(Mismatch::StateMismatch(k)) => Some(format!("wrong `{k}`")),
            })
        }
        Mode::Nsp => {
            let want = parse_state(&gold.target).map_err(|e| bad(e.to_string()))?;
            Ok(match parse_state(pred) {
                Err(e) => Some(format!("unparsable state: {e}")),
                Ok(got) if got == want => None,
                Ok(got) => {
                    let k = crate::diff::first_difference(&got.to_value(), &want.to_value()).unwrap_or_default();
                    Some(format!("wrong `{k}`"))
                }
            })
        }
    }
}

/// Aggregates verdicts into per-category and round-level scores.
pub fn report(verdicts: &[Verdict]) -> ScoreReport {
    let mut categories: BTreeMap<FlowKind, Tally> = FlowKind::ALL.iter().map(|k| (*k, Tally::default())).collect();
    for v in verdicts {
        categories.get_mut(&v.category).expect("all kinds present").add(v.correct);
    }
    ScoreReport {
        categories,
        rounds: score_rounds(verdicts),
        failures: verdicts.iter().filter(|v| !v.correct).take(MAX_FAILURES).cloned().collect(),
    }
}

/// A round succeeds when all of its transitions are correct.
pub fn score_rounds(verdicts: &[Verdict]) -> RoundScores {
    let mut rounds: BTreeMap<usize, (&str, bool)> = BTreeMap::new();
    for v in verdicts {
        let e = rounds.entry(v.round_id).or_insert((&v.game, true));
        e.1 &= v.correct;
    }
    let mut out = RoundScores::default();
    for (game, ok) in rounds.into_values() {
        out.overall.add(ok);
        out.by_game.entry(game.to_string()).or_default().add(ok);
    }
    out
}

fn pct(t: &Tally) -> String {
    t.rate().map_or_else(|| "-".to_string(), |r| format!("{:.1}%", r * 100.0))
}

/// Fixed-width text rendering. A report with no transitions renders as the
/// header alone.
pub fn render_report(report: &ScoreReport) -> String {
    let mut out = String::new();
    let header: Vec<String> = FlowKind::ALL.iter().map(|k| format!("{:>8}", k.name())).collect();
    writeln!(out, "{:<10}{}", "", header.concat()).unwrap();
    if report.categories.values().all(|t| t.total == 0) {
        return out;
    }
    let row = |f: &dyn Fn(&Tally) -> String| -> String {
        FlowKind::ALL.iter().map(|k| format!("{:>8}", f(&report.categories.get(k).copied().unwrap_or_default()))).collect()
    };
    writeln!(out, "{:<10}{}", "accuracy", row(&pct)).unwrap();
    writeln!(out, "{:<10}{}", "states", row(&|t: &Tally| t.total.to_string())).unwrap();
    writeln!(out).unwrap();
    let r = &report.rounds.overall;
    writeln!(out, "rounds    {}/{} ({})", r.correct, r.total, pct(r)).unwrap();
    for (game, t) in &report.rounds.by_game {
        writeln!(out, "  {:<30}{:>5}/{:<5} {}", game, t.correct, t.total, pct(t)).unwrap();
    }
    if !report.failures.is_empty() {
        writeln!(out).unwrap();
        writeln!(out, "failures").unwrap();
        for v in &report.failures {
            let reason = v.reason.as_deref().unwrap_or("");
            writeln!(out, "  round {} step {} ({}): {reason}", v.round_id, v.step_idx, v.category).unwrap();
        }
    }
    out
}

/// Machine-readable rendering of the same report.
pub fn render_report_json(report: &ScoreReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
}

/// Predictions equal to the gold targets.
pub fn gold_predictions(gold: &[SampleRecord], mode: Mode) -> Vec<PredictionRecord> {
    gold.iter()
        .filter(|g| g.mode == mode)
        .map(|g| PredictionRecord { round_id: g.round_id, step_idx: g.step_idx, predicted: g.target.clone() })
        .collect()
}
