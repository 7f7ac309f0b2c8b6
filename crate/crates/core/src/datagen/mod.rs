//! Training corpora from simulated rounds.
//!
//! Rounds are played by random policies, optionally rebalanced by outcome,
//! and flattened into one [`SampleRecord`] per transition. Every function
//! here is a pure function of its inputs and seed.

mod balance;
mod coreset;
mod segment;
mod variant;

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{derive_seed, render_input, run_round, EngineError, RandomPolicy, RoundLog};
use crate::script::{presets, render_script, FlowKind, GameSpec};
use crate::state::serialize_state;

pub use balance::{balance, parse_targets, BalanceTarget};
pub use coreset::{emit_core_set, CoreSetPair};
pub use segment::{segment_script, SegmentPolicy, Segmentation};
pub use variant::sample_variant;

#[derive(Debug, Error)]
pub enum DatagenError {
    #[error("no rounds to balance")]
    NoRounds,
    #[error("no round ended with outcome `{0}`")]
    EmptyCategory(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("corpus line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Next-state prediction targets full states; diff-state prediction targets
/// the edit from the previous state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Mode {
    Nsp,
    Dsp,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nsp" => Ok(Mode::Nsp),
            "dsp" => Ok(Mode::Dsp),
            _ => Err(format!("unknown mode `{s}`, expected nsp or dsp")),
        }
    }
}

/// One corpus line. All texts are in their canonical rendered forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub script: String,
    pub prev_state: String,
    pub input: String,
    pub target: String,
    pub mode: Mode,
    pub round_id: usize,
    pub step_idx: usize,
    pub category: FlowKind,
    pub outcome_label: String,
}

/// One round with a random policy per seat, all seeded from `seed`.
pub fn simulate_round(spec: &GameSpec, seed: u64) -> Result<RoundLog, EngineError> {
    run_round(spec, seed, &mut RandomPolicy::table(seed, spec.num_players))
}

/// One record per transition of `log`.
pub fn emit_samples(log: &RoundLog, mode: Mode, round_id: usize) -> Vec<SampleRecord> {
    let script = render_script(&log.spec);
    log.transitions
        .iter()
        .enumerate()
        .map(|(i, t)| SampleRecord {
            script: script.clone(),
            prev_state: serialize_state(&t.prev),
            input: render_input(t.input.as_ref()),
            target: match mode {
                Mode::Nsp => serialize_state(&t.next),
                Mode::Dsp => t.diff.render(),
            },
            mode,
            round_id,
            step_idx: i,
            category: t.category,
            outcome_label: log.outcome_label.clone(),
        })
        .collect()
}

/// Which games the rounds are played on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// One bundled game.
    Preset(String),
    /// The ten base games in turn.
    AllBase,
    /// This many sampled variants of the base games, used in turn.
    Variants(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusConfig {
    pub source: Source,
    pub rounds: usize,
    pub modes: Vec<Mode>,
    pub balance: Option<Vec<BalanceTarget>>,
    pub seed: u64,
    /// Cut the corpus at this many records.
    pub max_samples: Option<usize>,
}

/// The games rounds cycle through for a source.
pub fn source_specs(source: &Source, seed: u64) -> Result<Vec<GameSpec>, DatagenError> {
    Ok(match source {
        Source::Preset(name) => vec![presets::find(name).ok_or_else(|| DatagenError::UnknownPreset(name.clone()))?.spec()],
        Source::AllBase => presets::base().iter().map(|p| p.spec()).collect(),
        Source::Variants(n) => {
            let base = presets::base();
            (0..(*n).max(1)).map(|i| sample_variant(&base[i % base.len()], derive_seed(seed, "variant", i))).collect()
        }
    })
}

/// Plays `config.rounds` rounds, cycling through the source games.
pub fn generate_rounds(config: &CorpusConfig) -> Result<Vec<RoundLog>, DatagenError> {
    let specs = source_specs(&config.source, config.seed)?;
    (0..config.rounds)
        .map(|r| Ok(simulate_round(&specs[r % specs.len()], derive_seed(config.seed, "round", r))?))
        .collect()
}

/// Plays, balances and flattens rounds into a corpus. Round ids number the
/// balanced rounds, so duplicated rounds get distinct ids.
pub fn build_corpus(config: &CorpusConfig) -> Result<Vec<SampleRecord>, DatagenError> {
    let mut logs = generate_rounds(config)?;
    if let Some(targets) = &config.balance {
        logs = balance(&logs, targets, derive_seed(config.seed, "balance", 0))?;
    }
    let mut out = Vec::new();
    for (id, log) in logs.iter().enumerate() {
        for &mode in &config.modes {
            out.extend(emit_samples(log, mode, id));
        }
        if config.max_samples.is_some_and(|m| out.len() >= m) {
            break;
        }
    }
    if let Some(m) = config.max_samples {
        out.truncate(m);
    }
    Ok(out)
}

/// Writes one JSON record per line.
pub fn write_ndjson<T: Serialize>(mut w: impl Write, records: &[T]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn read_ndjson<T: for<'de> Deserialize<'de>>(r: impl BufRead) -> Result<Vec<T>, DatagenError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| DatagenError::BadRecord { line: i + 1, reason: e.to_string() })?);
    }
    Ok(out)
}

/// Mean character lengths for records of one mode.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ModeStats {
    pub samples: usize,
    pub mean_script_len: f64,
    pub mean_prev_len: f64,
    pub mean_input_len: f64,
    pub mean_target_len: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CorpusStats {
    pub samples: usize,
    pub rounds: usize,
    /// Distinct transitions per round.
    pub mean_states_per_round: f64,
    pub by_mode: BTreeMap<Mode, ModeStats>,
    /// Distinct transitions per step category.
    pub categories: BTreeMap<FlowKind, usize>,
    /// Rounds per outcome label.
    pub outcomes: BTreeMap<String, usize>,
}

pub fn corpus_stats(samples: &[SampleRecord]) -> CorpusStats {
    let mut stats = CorpusStats { samples: samples.len(), ..CorpusStats::default() };
    let mut steps = BTreeSet::new();
    let mut rounds = BTreeMap::new();
    let mut sums: BTreeMap<Mode, [usize; 4]> = BTreeMap::new();
    for s in samples {
        if steps.insert((s.round_id, s.step_idx)) {
            *stats.categories.entry(s.category).or_default() += 1;
        }
        rounds.entry(s.round_id).or_insert(&s.outcome_label);
        stats.by_mode.entry(s.mode).or_default().samples += 1;
        let acc = sums.entry(s.mode).or_default();
        for (a, t) in acc.iter_mut().zip([&s.script, &s.prev_state, &s.input, &s.target]) {
            *a += t.chars().count();
        }
    }
    for (mode, m) in &mut stats.by_mode {
        let n = m.samples as f64;
        let [script, prev, input, target] = sums[mode].map(|x| x as f64 / n);
        (m.mean_script_len, m.mean_prev_len, m.mean_input_len, m.mean_target_len) = (script, prev, input, target);
    }
    for label in rounds.values() {
        *stats.outcomes.entry(label.to_string()).or_default() += 1;
    }
    stats.rounds = rounds.len();
    if stats.rounds > 0 {
        stats.mean_states_per_round = steps.len() as f64 / stats.rounds as f64;
    }
    stats
}
