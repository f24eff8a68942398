//! `gfra-sim`: runs HARQ, hybrid-access and NOMA scenarios and writes CSV
//! tables plus a `manifest.json` describing the run.

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gfra_core::config::{RawConfig, ScenarioConfig};
use gfra_core::Error;

#[derive(Parser, Debug)]
#[command(name = "gfra-sim", version, about = "Grant-free random access simulator")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Scenario file (`key = value` lines under [scenario], [timing], [phy], [output]).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true, env = "GFRA_SIM_THREADS")]
    workers: Option<usize>,
    /// Output directory; overrides the file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print gnuplot commands for the written tables.
    #[arg(long, global = true)]
    gnuplot_hints: bool,
    /// Set any config key, e.g. `--set phy.avg_snr_db=6`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Latency distribution of one HARQ scheme.
    Harq(HarqArgs),
    /// Dedicated plus shared-pool repetition with SIC.
    Hybrid(HybridArgs),
    /// Sparse NOMA frames; packet loss rate at one load or a supported-load search.
    Noma(NomaArgs),
    /// Runs the scenario of `--config` (or `--kind`) over a grid of one or two keys.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct HarqArgs {
    /// reactive | grant_based | krep | proactive | reactive_boost
    #[arg(long)]
    scheme: Option<String>,
    /// Repetitions for krep.
    #[arg(long = "K", alias = "k")]
    k: Option<u32>,
    #[arg(long)]
    max_tx: Option<u32>,
    #[arg(long)]
    max_attempts: Option<u32>,
    /// Per-attempt success probabilities, comma separated.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    deadline_ms: Option<String>,
    /// Number of packets (accepts 1e6 style).
    #[arg(long, alias = "packets")]
    frames: Option<String>,
}

#[derive(Args, Debug)]
struct HybridArgs {
    #[arg(long = "N", alias = "n-users")]
    n_users: Option<u32>,
    #[arg(long = "R", alias = "pool-size")]
    pool_size: Option<u32>,
    #[arg(long = "d", alias = "attempts")]
    attempts: Option<u32>,
    #[arg(long)]
    eps1: Option<String>,
    #[arg(long)]
    eps_shared: Option<String>,
    /// Only undecoded users retransmit.
    #[arg(long)]
    non_blind: bool,
    /// Number of cycles (accepts 1e6 style).
    #[arg(long)]
    frames: Option<String>,
}

#[derive(Args, Debug)]
struct NomaArgs {
    /// selection | chase | lowrate
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    load: Option<String>,
    /// deterministic_users | poisson_users | fixed_users:K
    #[arg(long)]
    arrival: Option<String>,
    /// Number of frames (accepts 1e6 style).
    #[arg(long)]
    frames: Option<String>,
    /// Search the largest load meeting this loss rate.
    #[arg(long)]
    supported_load: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Scenario kind when no config file is given.
    #[arg(long)]
    kind: Option<String>,
    /// Grid axis as `section.key=v1,v2,...`.
    #[arg(long, required = true, value_name = "KEY=V1,V2,...")]
    param: String,
    /// Optional second axis.
    #[arg(long, value_name = "KEY=V1,V2,...")]
    param2: Option<String>,
    #[arg(long)]
    frames: Option<String>,
}

/// Accepts plain integers and integral scientific notation such as `2e6`.
fn parse_count(s: &str) -> Result<String, Error> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n.to_string());
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 1.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok((x as u64).to_string()),
        _ => Err(Error::Config(format!("'{s}' is not a positive whole count"))),
    }
}

fn build_raw(cli: &Cli) -> Result<(RawConfig, Option<run::Grid>), Error> {
    let (mut raw, mut problems) = match &cli.global.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::Io(format!("reading {}: {e}", path.display())))?;
            RawConfig::parse_lenient(&text)?
        }
        None => (RawConfig::default(), Vec::new()),
    };
    let mut set = |key: &str, value: Option<String>| -> Result<(), Error> {
        match value {
            Some(v) => raw.set(key, v),
            None => Ok(()),
        }
    };
    let kind = match &cli.command {
        Command::Harq(_) => Some("harq"),
        Command::Hybrid(_) => Some("hybrid"),
        Command::Noma(_) => Some("noma"),
        Command::Sweep(_) => None,
    };
    let mut grid = None;
    match &cli.command {
        Command::Harq(a) => {
            set("scenario.scheme", a.scheme.clone())?;
            set("scenario.k", a.k.map(|x| x.to_string()))?;
            set("scenario.max_tx", a.max_tx.map(|x| x.to_string()))?;
            set("scenario.max_attempts", a.max_attempts.map(|x| x.to_string()))?;
            set("scenario.success_probs", a.p.clone())?;
            set("scenario.deadline_ms", a.deadline_ms.clone())?;
            set(
                "scenario.replications",
                a.frames.as_deref().map(parse_count).transpose()?,
            )?;
        }
        Command::Hybrid(a) => {
            set("scenario.n_users", a.n_users.map(|x| x.to_string()))?;
            set("scenario.pool_size", a.pool_size.map(|x| x.to_string()))?;
            set("scenario.attempts", a.attempts.map(|x| x.to_string()))?;
            set("scenario.initial_bler", a.eps1.clone())?;
            set("scenario.eps_shared", a.eps_shared.clone())?;
            set("scenario.blind", a.non_blind.then(|| "false".to_string()))?;
            set(
                "scenario.replications",
                a.frames.as_deref().map(parse_count).transpose()?,
            )?;
        }
        Command::Noma(a) => {
            set("scenario.strategy", a.strategy.clone())?;
            set("scenario.d", a.d.map(|x| x.to_string()))?;
            set("scenario.load", a.load.clone())?;
            set("scenario.arrival", a.arrival.clone())?;
            set("scenario.target_plr", a.supported_load.clone())?;
            set(
                "scenario.replications",
                a.frames.as_deref().map(parse_count).transpose()?,
            )?;
        }
        Command::Sweep(a) => {
            set("scenario.kind", a.kind.clone())?;
            set(
                "scenario.replications",
                a.frames.as_deref().map(parse_count).transpose()?,
            )?;
            let mut axes = vec![run::Axis::parse(&a.param)?];
            if let Some(p2) = &a.param2 {
                axes.push(run::Axis::parse(p2)?);
            }
            grid = Some(run::Grid { axes });
        }
    }
    if let Some(kind) = kind {
        match raw.get("scenario.kind") {
            Some(k) if k != kind => {
                return Err(Error::Config(format!(
                    "config file describes a '{k}' scenario, not '{kind}'"
                )));
            }
            _ => raw.set("scenario.kind", kind)?,
        }
    }
    for kv in &cli.global.sets {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        raw.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = cli.global.seed {
        raw.set("scenario.seed", seed.to_string())?;
    }
    if let Some(out) = &cli.global.out {
        raw.set("output.dir", out.display().to_string())?;
    }
    if !problems.is_empty() {
        // report the typed problems of the remaining keys as well
        if let Err(Error::Config(typed)) = ScenarioConfig::from_raw(&raw) {
            problems.push(typed);
        }
        return Err(Error::Config(problems.join("\n")));
    }
    Ok((raw, grid))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::Io(_) => 4,
        Error::Domain(_) | Error::Infeasible { .. } | Error::LoadNotFound { .. } => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_raw(&cli).and_then(|(raw, grid)| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.global.workers {
            if n == 0 {
                return Err(Error::Config("--workers must be at least 1".into()));
            }
            pool = pool.num_threads(n);
        }
        let pool = pool.build().map_err(|e| Error::Io(format!("thread pool: {e}")))?;
        pool.install(|| run::execute(&raw, grid.as_ref(), cli.global.gnuplot_hints))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gfra-sim: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
