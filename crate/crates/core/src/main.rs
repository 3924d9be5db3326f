use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use tf_figa::config::{RunConfig, SignalSpec, Suite};
use tf_figa::frames::{canonical_dual, frame_bounds, reconstruction_residual};
use tf_figa::lattice::adjoint_lattice;
use tf_figa::norms::{empirical_constants, GOLDEN_CORPUS_SEED};
use tf_figa::report::{emit_table, write_atomic, Format};
use tf_figa::runner::{config_dir, run, RunOptions};
use tf_figa::tfrepr::stft;
use tf_figa::{Error, GroupParams, Lattice, Signal};

#[derive(Parser)]
#[command(
    name = "tf-figa",
    version,
    about = "Verify the identities of Gabor analysis on finite groups and sampled lines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct OutputArgs {
    /// Write the report here instead of stdout (or the config's `output`).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Report format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Multiply every tolerance and inequality constant by this factor.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites of a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run only the FIGA suite of a config file.
    Figa {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lattice utilities.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Frame utilities.
    Frame {
        #[command(subcommand)]
        action: FrameAction,
    },
    /// STFT of a signal as CSV `x,omega,re,im`.
    Stft {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value = "random:0")]
        signal: String,
        #[arg(long, default_value = "gaussian")]
        window: String,
    },
    /// Recompute the empirical norm constants as JSON.
    Goldens {
        #[arg(long, default_value_t = GOLDEN_CORPUS_SEED)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LatticeAction {
    /// Print the adjoint lattice of a literal such as "N=12;d=1;gens=(3,0),(0,4)".
    Adjoint { literal: String },
}

#[derive(Subcommand)]
enum FrameAction {
    /// Canonical dual window on a lattice.
    Dual {
        literal: String,
        /// gaussian | delta[:K] | random:SEED | file:PATH
        #[arg(long, default_value = "gaussian")]
        window: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("tf-figa: {e}");
        return ExitCode::from(2);
    }
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tf-figa: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("TF_FIGA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("TF_FIGA_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(Error::from)
        }
    }
}

fn pretty(value: &serde_json::Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("JSON values serialize");
    out.push(b'\n');
    out
}

fn run_config(path: &Path, out: &OutputArgs, only: Option<Suite>) -> Result<bool, Error> {
    let start = Instant::now();
    let format: Format = out.format.parse()?;
    let mut config = RunConfig::load(path)?;
    if let Some(s) = only {
        config.suites = vec![s];
    }
    let base_dir = config_dir(path);
    let opts = RunOptions { tolerance_scale: out.tolerance_scale, base_dir: base_dir.clone() };
    let report = run(&config, &opts)?;
    let bytes = emit_table(&report, format)?;
    let target = out.report.clone().or_else(|| config.output.as_ref().map(|o| base_dir.join(o)));
    emit(&bytes, target.as_deref())?;
    eprintln!(
        "tf-figa: {} checks, {} failed, wall time {:.3}s",
        report.summary.total,
        report.summary.failed,
        start.elapsed().as_secs_f64()
    );
    Ok(report.all_pass)
}

fn dispatch(command: Command) -> Result<bool, Error> {
    match command {
        Command::Run { config, out } => run_config(&config, &out, None),
        Command::Figa { config, out } => run_config(&config, &out, Some(Suite::Figa)),
        Command::Lattice { action: LatticeAction::Adjoint { literal } } => {
            let l: Lattice = literal.parse()?;
            let adj = adjoint_lattice(&l);
            let value = json!({
                "lattice": l.literal(),
                "cardinality": l.cardinality(),
                "covolume": tf_figa::figa::format_ratio(&l.covolume()),
                "adjoint": adj.literal(),
                "adjoint_cardinality": adj.cardinality(),
            });
            emit(&pretty(&value), None)?;
            Ok(true)
        }
        Command::Frame { action: FrameAction::Dual { literal, window } } => {
            let l: Lattice = literal.parse()?;
            let p = *l.params();
            let spec: SignalSpec = window.parse()?;
            let g = spec.finite(p, None, 0, 0, Path::new("."))?;
            let bounds = frame_bounds(&g, &l)?;
            let gamma = canonical_dual(&g, &l)?;
            let probe = Signal::random(p, 0);
            let value = json!({
                "lattice": l.literal(),
                "window": spec.to_string(),
                "lower_bound": bounds.lower,
                "upper_bound": bounds.upper,
                "reconstruction_residual": reconstruction_residual(&g, &gamma, &l, &probe)?,
                "dual": gamma.values(),
            });
            emit(&pretty(&value), None)?;
            Ok(true)
        }
        Command::Stft { n, d, signal, window } => {
            let p = GroupParams::new(n, d)?;
            let dir = Path::new(".");
            let f = signal.parse::<SignalSpec>()?.finite(p, None, 0, 0, dir)?;
            let g = window.parse::<SignalSpec>()?.finite(p, None, 1, 0, dir)?;
            emit(stft(&f, &g)?.to_csv().as_bytes(), None)?;
            Ok(true)
        }
        Command::Goldens { seed, output } => {
            let constants = empirical_constants(seed)?;
            let mut bytes = serde_json::to_vec_pretty(&constants).map_err(|e| Error::Io(e.to_string()))?;
            bytes.push(b'\n');
            emit(&bytes, output.as_deref())?;
            Ok(true)
        }
    }
}
