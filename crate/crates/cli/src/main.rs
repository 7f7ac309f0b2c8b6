use std::net::SocketAddr;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use deckforge_cli::commands::{self, DatagenArgs};
use deckforge_cli::server::{router, AppState};
use deckforge_core::datagen::{Mode, Source};
use deckforge_core::play::Service;
use deckforge_core::script::presets;

#[derive(Parser)]
#[command(name = "deckforge", version, about = "Rule-configurable poker engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the bundled game scripts.
    Presets,
    /// Play seeded rounds with random players and write their logs.
    Simulate {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 20)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a training corpus.
    Datagen(DatagenCmd),
    /// Predict a corpus by stepping the engine, in prediction-file format.
    Oracle {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score predictions against a gold corpus.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        report: PathBuf,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the play service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

#[derive(Args)]
struct DatagenCmd {
    /// One bundled game. Without this or --variants, the ten base games.
    #[arg(long, conflicts_with = "variants")]
    preset: Option<String>,
    /// Sample this many variants of the base games.
    #[arg(long)]
    variants: Option<usize>,
    #[arg(long)]
    rounds: usize,
    /// nsp, dsp, or both separated by a comma.
    #[arg(long, value_delimiter = ',', default_value = "dsp")]
    mode: Vec<Mode>,
    /// Outcome targets, one `WEIGHT LABEL` per line.
    #[arg(long)]
    balance: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop after this many records.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Write corpus statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Presets => {
            for p in presets::all() {
                println!("{}", p.name);
            }
        }
        Command::Simulate { preset, rounds, seed, out } => commands::simulate(&preset, rounds, seed, &out)?,
        Command::Datagen(d) => {
            let source = match (d.preset, d.variants) {
                (Some(p), _) => Source::Preset(p),
                (None, Some(n)) => Source::Variants(n),
                (None, None) => Source::AllBase,
            };
            if d.mode.is_empty() {
                bail!("--mode needs nsp or dsp");
            }
            let stats = commands::datagen(&DatagenArgs {
                source,
                rounds: d.rounds,
                modes: d.mode,
                balance: d.balance.as_deref(),
                seed: d.seed,
                samples: d.samples,
                out: &d.out,
            })?;
            eprintln!(
                "{} samples from {} rounds, {:.1} states per round",
                stats.samples, stats.rounds, stats.mean_states_per_round
            );
            for (mode, m) in &stats.by_mode {
                eprintln!("  {mode:?}: mean target {:.1} chars", m.mean_target_len);
            }
            if let Some(p) = d.stats {
                std::fs::write(p, serde_json::to_string_pretty(&stats)? + "\n")?;
            }
        }
        Command::Oracle { gold, mode, out } => commands::oracle(&gold, mode, &out)?,
        Command::Eval { gold, pred, mode, report, json } => {
            let r = commands::eval(&gold, &pred, mode, &report, json.as_deref())?;
            let o = r.rounds.overall;
            eprintln!("{}/{} rounds correct", o.correct, o.total);
        }
        Command::Serve { port, data_dir, host } => {
            let service = Service::open(&data_dir)?;
            let app = router(AppState::new(service));
            let addr = SocketAddr::new(host, port);
            tokio::runtime::Runtime::new()?.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr).await?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                axum::serve(listener, app).await?;
                anyhow::Ok(())
            })?;
        }
    }
    Ok(())
}
