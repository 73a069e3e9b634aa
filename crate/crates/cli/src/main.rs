mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fuzzdyn::{Error, Rational};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "fuzzdyn", version, about = "Hyperspace and fuzzy dynamics experiments")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "FUZZDYN_SEED")]
    seed: Option<u64>,
    /// TOML file whose keys override the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the JSON report and CSV tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fuzzy metric suites.
    Metrics {
        #[command(subcommand)]
        cmd: MetricsCmd,
    },
    /// Pair traces and their classification.
    Pair {
        #[command(subcommand)]
        cmd: PairCmd,
    },
    /// Fuzzy distances of a u^α pair against the set distance.
    Transfer(TransferArgs),
    /// Gallery examples.
    Example {
        #[command(subcommand)]
        cmd: ExampleCmd,
    },
    /// The weighted backward shift.
    Shift {
        #[command(subcommand)]
        cmd: ShiftCmd,
    },
    /// Proximal pairs near a random mesh.
    Prox {
        #[command(subcommand)]
        cmd: ProxCmd,
    },
    /// Sensitivity witnesses.
    Sens {
        #[command(subcommand)]
        cmd: SensCmd,
    },
}

#[derive(Subcommand)]
enum MetricsCmd {
    Check {
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Subcommand)]
enum PairCmd {
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// base, hyper or a fuzzy metric (sup, skorokhod, sendograph, endograph).
    #[arg(long)]
    level: Option<String>,
    /// 1, 2, 3 or shift; a `[universe]` table in the config replaces it.
    #[arg(long)]
    example: Option<String>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, value_parser = parse_rational)]
    eps: Option<Rational>,
    #[arg(long)]
    left: Option<String>,
    #[arg(long)]
    right: Option<String>,
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<usize>>,
    /// Flags that must hold; each becomes a claim.
    #[arg(long, value_delimiter = ',')]
    expect: Option<Vec<String>>,
    /// Also write the full trace.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct TransferArgs {
    #[arg(long)]
    example: Option<String>,
    /// β,α with β < α.
    #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
    alphas: Option<Vec<Rational>>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Points of K, separated by `;`.
    #[arg(long)]
    left: Option<String>,
    /// Points of L, separated by `;`.
    #[arg(long)]
    right: Option<String>,
}

#[derive(Subcommand)]
enum ExampleCmd {
    Verify {
        #[arg(long)]
        which: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        horizon: Option<usize>,
        /// Size of the u^α family.
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<usize>>,
    },
}

#[derive(Subcommand)]
enum ShiftCmd {
    Demo {
        #[arg(long, value_parser = parse_rational)]
        weight: Option<Rational>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ProxCmd {
    Sample {
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long, value_parser = parse_rational)]
        eps: Option<Rational>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        min_fraction: Option<f64>,
    },
}

#[derive(Subcommand)]
enum SensCmd {
    Search {
        #[arg(long, value_parser = parse_rational)]
        weight: Option<Rational>,
        #[arg(long, value_parser = parse_rational)]
        eps: Option<Rational>,
        #[arg(long, value_parser = parse_rational)]
        delta: Option<Rational>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        level: Option<String>,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    fuzzdyn::scalar::parse_rational(s).map_err(|e| e.to_string())
}

/// What to run, with the flag values collected into one config.
fn collect(cmd: Cmd, mut c: ExperimentConfig) -> (commands::Command, ExperimentConfig) {
    use commands::Command as C;
    let cmd = match cmd {
        Cmd::Metrics { cmd: MetricsCmd::Check { trials } } => {
            c.trials = trials;
            C::Metrics
        }
        Cmd::Pair { cmd: PairCmd::Classify(a) } => {
            c.level = a.level;
            c.example = a.example;
            c.horizon = a.horizon;
            c.eps = a.eps;
            c.left = a.left;
            c.right = a.right;
            c.checkpoints = a.checkpoints;
            c.expect = a.expect;
            c.trace = Some(a.trace);
            C::Classify
        }
        Cmd::Transfer(a) => {
            c.example = a.example;
            c.alphas = a.alphas.map(|v| v.into_iter().map(fuzzdyn::spaces::config::RationalText).collect());
            c.horizon = a.horizon;
            c.left = a.left;
            c.right = a.right;
            C::Transfer
        }
        Cmd::Example { cmd: ExampleCmd::Verify { which, trials, horizon, levels, checkpoints } } => {
            c.which = Some(which);
            c.trials = trials;
            c.horizon = horizon;
            c.levels = levels;
            c.checkpoints = checkpoints;
            C::Example
        }
        Cmd::Shift { cmd: ShiftCmd::Demo { weight, horizon, trials } } => {
            c.weight = weight;
            c.horizon = horizon;
            c.trials = trials;
            C::Shift
        }
        Cmd::Prox { cmd: ProxCmd::Sample { example, cells, eps, horizon, min_fraction } } => {
            c.example = example;
            c.cells = cells;
            c.eps = eps;
            c.horizon = horizon;
            c.min_fraction = min_fraction;
            C::Prox
        }
        Cmd::Sens { cmd: SensCmd::Search { weight, eps, delta, horizon, level } } => {
            c.weight = weight;
            c.eps = eps;
            c.delta = delta;
            c.horizon = horizon;
            c.level = level;
            C::Sens
        }
    };
    (cmd, c)
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::Parse(_) | Error::Domain(_) | Error::Precondition(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = ExperimentConfig { seed: cli.seed, out: cli.out, ..Default::default() };
    let (cmd, flags) = collect(cli.cmd, flags);
    let cfg = match cli.config.as_deref().map(ExperimentConfig::load).transpose() {
        Ok(file) => file.map_or(flags.clone(), |f| flags.overridden_by(f)),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let run = cfg.validate().and_then(|()| commands::run(cmd, &cfg));
    let report = match run {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if usage_error(&e) { 2 } else { 1 });
        }
    };
    if let Err(e) = commands::emit(&report, cfg.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let failing = report.failing();
    if failing.is_empty() {
        ExitCode::SUCCESS
    } else {
        for id in failing {
            eprintln!("claim failed: {id}");
        }
        ExitCode::from(1)
    }
}
