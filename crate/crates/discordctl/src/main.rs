use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discordctl::{
    cmd_discord, cmd_sample_qudit, format_csv, parse_state_file, run_sweep, CtlError, Measures, Range, Result,
    SweepSpec, SweepTarget,
};
use qdiscord::densmat::DEFAULT_TOL;
use qdiscord::{MeasuredSide, SearchConfig};

#[derive(Parser)]
#[command(name = "discordctl", version, about = "Quantum discord and damping-protection sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord and concurrence of a state file.
    Discord {
        state: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Validation tolerance for the state file.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Measures of the damped state as the damping strength varies.
    SweepDecoherence {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        protocol: Protocol,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Measures of the protected state as the weak-measurement strength varies.
    SweepWeak {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        protocol: Protocol,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Positivity-filtered Bloch sampling diagnostics.
    SampleQudit {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Grid,
    Mc,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Measure {
    Entropic,
    Geometric,
    Concurrence,
}

#[derive(Args)]
struct Common {
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Polar grid points; the azimuthal grid gets 2N-1.
    #[arg(long, default_value_t = 181)]
    grid: usize,
    #[arg(long, default_value_t = 2)]
    refine: usize,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Method::Grid)]
    method: Method,
    /// Measured subsystem; defaults to B for entropic and A for geometric.
    #[arg(long, value_enum, ignore_case = true)]
    side: Option<Side>,
    /// Comma-separated subset of entropic, geometric, concurrence.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Measure::Entropic, Measure::Geometric, Measure::Concurrence])]
    measures: Vec<Measure>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn search(&self) -> Result<SearchConfig> {
        let cfg = match self.method {
            Method::Grid => SearchConfig::grid(self.grid, self.refine),
            Method::Mc => SearchConfig::monte_carlo(self.samples, self.seed),
        };
        cfg.validate().map_err(|e| CtlError::Usage(e.to_string()))?;
        Ok(cfg)
    }

    fn measures(&self) -> Measures {
        Measures {
            entropic: self.measures.contains(&Measure::Entropic),
            geometric: self.measures.contains(&Measure::Geometric),
            concurrence: self.measures.contains(&Measure::Concurrence),
        }
    }

    fn side(&self) -> Option<MeasuredSide> {
        self.side.map(|s| match s {
            Side::A => MeasuredSide::A,
            Side::B => MeasuredSide::B,
        })
    }
}

#[derive(Args)]
struct Protocol {
    /// Amplitude of |00>; the |11> amplitude is sqrt(1 - alpha^2).
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    alpha: f64,
    #[arg(long)]
    d1: Option<f64>,
    #[arg(long)]
    d2: Option<f64>,
    /// Sets both D1 and D2.
    #[arg(long, conflicts_with_all = ["d1", "d2"])]
    d: Option<f64>,
    /// Weak-measurement strength applied during a decoherence sweep.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long)]
    min: Option<f64>,
    #[arg(long)]
    max: Option<f64>,
    #[arg(long, default_value_t = 21)]
    steps: usize,
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CtlError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CtlError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn sweep(target: SweepTarget, common: &Common, protocol: &Protocol, range: &RangeArgs) -> Result<()> {
    let (d1, d2) = match protocol.d {
        Some(d) => (Some(d), Some(d)),
        None => (protocol.d1, protocol.d2),
    };
    let default_max = match target {
        SweepTarget::Decoherence => 1.0,
        SweepTarget::WeakMeasurement => 0.999,
    };
    let spec = SweepSpec {
        target,
        alpha: protocol.alpha,
        d1,
        d2,
        p: protocol.p,
        range: Range {
            min: range.min.unwrap_or(0.0),
            max: range.max.unwrap_or(default_max),
            steps: range.steps,
        },
        measures: common.measures(),
        side: common.side(),
        search: common.search()?,
    };
    let rows = run_sweep(&spec)?;
    emit(&format_csv(&rows), common.out.as_deref())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Discord { state, common, tol } => {
            let rho = parse_state_file(&state, tol)?;
            let report = cmd_discord(&rho, common.measures(), common.side(), &common.search()?)?;
            emit(&report, common.out.as_deref())
        }
        Command::SweepDecoherence { common, protocol, range } => {
            sweep(SweepTarget::Decoherence, &common, &protocol, &range)
        }
        Command::SweepWeak { common, protocol, range } => {
            sweep(SweepTarget::WeakMeasurement, &common, &protocol, &range)
        }
        Command::SampleQudit { dim, samples, seed, out } => {
            let report = cmd_sample_qudit(dim, samples, seed)?;
            emit(&report.render(), out.as_deref())?;
            if report.violations > 0 {
                return Err(CtlError::Core(qdiscord::Error::Sampling(format!(
                    "{} samples violated state invariants",
                    report.violations
                ))));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("discordctl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
