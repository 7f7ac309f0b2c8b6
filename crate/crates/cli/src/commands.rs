//! File-to-file commands. Each one is a pure function of its arguments, so
//! rerunning a command reproduces its output byte for byte.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use deckforge_core::datagen::{
    build_corpus, corpus_stats, parse_targets, read_ndjson, simulate_round, write_ndjson, CorpusConfig, CorpusStats,
    Mode, SampleRecord, Source,
};
use deckforge_core::engine::{derive_seed, parse_input, step, TransitionRecord};
use deckforge_core::eval::{render_report, render_report_json, score_states, PredictionRecord, ScoreReport};
use deckforge_core::script::{parse_script, presets, GameSpec};
use deckforge_core::state::{parse_state, serialize_state};
use serde::Serialize;

/// One line of a `simulate` log.
#[derive(Debug, Serialize)]
pub struct RoundLine<'a> {
    pub round: usize,
    pub game: &'a str,
    pub seed: u64,
    pub outcome_label: &'a str,
    pub transitions: &'a [TransitionRecord],
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn read_records<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_ndjson(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

pub fn preset_spec(name: &str) -> Result<GameSpec> {
    match presets::find(name) {
        Some(p) => Ok(p.spec()),
        None => {
            let names: Vec<&str> = presets::all().map(|p| p.name).collect();
            bail!("unknown preset `{name}`; known: {}", names.join(", "))
        }
    }
}

/// Plays `rounds` rounds of one game and writes one log line per round.
pub fn simulate(preset: &str, rounds: usize, seed: u64, out: &Path) -> Result<()> {
    let spec = preset_spec(preset)?;
    let mut w = create(out)?;
    for r in 0..rounds {
        let s = derive_seed(seed, "round", r);
        let log = simulate_round(&spec, s)?;
        let line = RoundLine {
            round: r,
            game: &spec.name,
            seed: s,
            outcome_label: &log.outcome_label,
            transitions: &log.transitions,
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub struct DatagenArgs<'a> {
    pub source: Source,
    pub rounds: usize,
    pub modes: Vec<Mode>,
    pub balance: Option<&'a Path>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub out: &'a Path,
}

pub fn datagen(args: &DatagenArgs) -> Result<CorpusStats> {
    let balance = match args.balance {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(parse_targets(&text).map_err(anyhow::Error::msg)?)
        }
        None => None,
    };
    let config = CorpusConfig {
        source: args.source.clone(),
        rounds: args.rounds,
        modes: args.modes.clone(),
        balance,
        seed: args.seed,
        max_samples: args.samples,
    };
    let corpus = build_corpus(&config)?;
    write_ndjson(create(args.out)?, &corpus)?;
    Ok(corpus_stats(&corpus))
}

/// Predicts every gold record of `mode` by stepping the engine from the
/// record's previous state and input.
pub fn oracle_predictions(gold: &[SampleRecord], mode: Mode) -> Result<Vec<PredictionRecord>> {
    let mut specs: std::collections::HashMap<&str, GameSpec> = std::collections::HashMap::new();
    let mut out = Vec::new();
    for g in gold.iter().filter(|g| g.mode == mode) {
        if !specs.contains_key(g.script.as_str()) {
            specs.insert(&g.script, parse_script(&g.script)?);
        }
        let spec = &specs[g.script.as_str()];
        let ctx = || format!("round {} step {}", g.round_id, g.step_idx);
        let prev = parse_state(&g.prev_state).with_context(ctx)?;
        let input = parse_input(&g.input).map_err(anyhow::Error::msg).with_context(ctx)?;
        let t = step(spec, &prev, input.as_ref()).with_context(ctx)?;
        let predicted = match mode {
            Mode::Nsp => serialize_state(&t.next),
            Mode::Dsp => t.diff.render(),
        };
        out.push(PredictionRecord { round_id: g.round_id, step_idx: g.step_idx, predicted });
    }
    Ok(out)
}

pub fn oracle(gold: &Path, mode: Mode, out: &Path) -> Result<()> {
    let gold: Vec<SampleRecord> = read_records(gold)?;
    write_ndjson(create(out)?, &oracle_predictions(&gold, mode)?)?;
    Ok(())
}

pub fn eval(gold: &Path, pred: &Path, mode: Mode, report: &Path, json: Option<&Path>) -> Result<ScoreReport> {
    let gold: Vec<SampleRecord> = read_records(gold)?;
    let preds: Vec<PredictionRecord> = read_records(pred)?;
    let r = score_states(&gold, &preds, mode)?;
    std::fs::write(report, render_report(&r)).with_context(|| format!("writing {}", report.display()))?;
    if let Some(p) = json {
        std::fs::write(p, render_report_json(&r)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(r)
}
