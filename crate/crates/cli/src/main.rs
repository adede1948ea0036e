use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use subdiv_core::benchmark::{format_table, run_bench, BenchError, BenchSpec};
use subdiv_core::bigfloat::{BigFloat, Round};
use subdiv_core::generate::random_system;
use subdiv_core::interval::parse_bound;
use subdiv_core::report::{to_json, to_text};
use subdiv_core::solver::DEFAULT_EPS_REL;
use subdiv_core::{parse_box, parse_system, refine_solutions, solve_adaptive, C2Form, Precision, SolverConfig, Strategy};

const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_IO: u8 = 74;

const EPS_ENV: &str = "SUBDIV_EPS_REL";

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    NoInput { path: String, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::NoInput { .. } => EXIT_NO_INPUT,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "subdiv", version, about = "Certified isolation of the real roots of square polynomial systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum C2Arg {
    Width,
    Subset,
}

#[derive(clap::Args, Debug)]
struct SolverArgs {
    /// Boxes at most this wide are not bisected (decimal or a/b)
    #[arg(long, default_value = "1e-6")]
    min_width: String,
    /// Initial precision in bits
    #[arg(long, default_value_t = 53)]
    precision: u32,
    /// Maximal precision in bits
    #[arg(long, default_value_t = 113)]
    max_precision: u32,
    /// Form of the enclosure stagnation test
    #[arg(long, value_enum, default_value = "width")]
    c2_form: C2Arg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a system over a box
    Solve {
        /// System file
        #[arg(long)]
        system: PathBuf,
        /// Domain, e.g. "[-2,2];[-2,2]"
        #[arg(long)]
        domain: String,
        #[command(flatten)]
        solver: SolverArgs,
        /// Certification strategy, 1 to 4
        #[arg(long, default_value_t = 1)]
        strategy: u8,
        /// Include search statistics
        #[arg(long)]
        stats: bool,
        /// Contract solution boxes below this width
        #[arg(long)]
        refine: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        output: OutputFormat,
    },
    /// Compare strategies on dense random systems over [-1,1]^m
    Bench {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 8)]
        coeff_bits: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        strategies: Vec<u8>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value = "text")]
        output: OutputFormat,
    },
    /// Print a dense random system in the system file format
    Random {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 8)]
        coeff_bits: u32,
        #[arg(long)]
        seed: u64,
    },
}

fn precision(bits: u32) -> Result<Precision, CliError> {
    Precision::new(bits).map_err(|e| CliError::Usage(format!("precision {bits}: {e}")))
}

fn positive_real(flag: &str, text: &str) -> Result<BigFloat, CliError> {
    let r = parse_bound(text).map_err(|e| CliError::Usage(format!("--{flag} {text}: {e}")))?;
    let v = BigFloat::from_rational(&r, 128, Round::Down);
    if v.is_negative() {
        return Err(CliError::Usage(format!("--{flag} must be non-negative")));
    }
    Ok(v)
}

fn eps_rel() -> Result<f64, CliError> {
    let Some(raw) = std::env::var_os(EPS_ENV) else {
        return Ok(DEFAULT_EPS_REL);
    };
    let text = raw.to_string_lossy();
    let v = positive_real(EPS_ENV, &text)?.to_f64(Round::Up);
    if !v.is_finite() {
        return Err(CliError::Usage(format!("{EPS_ENV} is out of range")));
    }
    Ok(v)
}

fn config(args: &SolverArgs, strategy: Strategy) -> Result<SolverConfig, CliError> {
    let cfg = SolverConfig {
        omega: positive_real("min-width", &args.min_width)?,
        p0: precision(args.precision)?,
        p_max: precision(args.max_precision)?,
        eps_rel: eps_rel()?,
        strategy,
        c2_form: match args.c2_form {
            C2Arg::Width => C2Form::Width,
            C2Arg::Subset => C2Form::Subset,
        },
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn strategy(id: u8) -> Result<Strategy, CliError> {
    Strategy::new(id).map_err(|e| CliError::Usage(e.to_string()))
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::NoInput {
        path: path.display().to_string(),
        source,
    })
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve {
            system,
            domain,
            solver,
            strategy: id,
            stats,
            refine,
            output,
        } => {
            let cfg = config(&solver, strategy(id)?)?;
            let text = read_input(&system)?;
            let sys = parse_system(&text).map_err(|e| CliError::Parse {
                path: system.display().to_string(),
                message: e.to_string(),
            })?;
            let x0 = parse_box(&domain, cfg.p0).map_err(|e| CliError::Usage(format!("--domain {domain}: {e}")))?;
            let target = refine.map(|r| positive_real("refine", &r)).transpose()?;
            let mut report = solve_adaptive(&sys, &x0, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(r) = target {
                report.solutions = refine_solutions(&sys, &report.solutions, &r, cfg.p_max);
            }
            match output {
                OutputFormat::Json => writeln!(out, "{}", to_json(&report))?,
                OutputFormat::Text => write!(out, "{}", to_text(&report, sys.vars(), stats))?,
            }
            Ok(report.status.code())
        }
        Command::Bench {
            m,
            d,
            coeff_bits,
            strategies,
            seeds,
            solver,
            output,
        } => {
            let strategies = strategies.into_iter().map(strategy).collect::<Result<Vec<_>, _>>()?;
            let cfg = config(&solver, Strategy::default())?;
            let spec = BenchSpec {
                m,
                d,
                coeff_bits,
                strategies,
                seeds,
            };
            let rows = run_bench(&spec, &cfg).map_err(|e| match e {
                BenchError::Generate(g) => CliError::Usage(g.to_string()),
                BenchError::Solve(s) => CliError::Usage(s.to_string()),
            })?;
            match output {
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("rows serialize"))?,
                OutputFormat::Text => write!(out, "{}", format_table(&spec, &rows))?,
            }
            Ok(0)
        }
        Command::Random {
            m,
            d,
            coeff_bits,
            seed,
        } => {
            let sys = random_system(m, d, coeff_bits, seed).map_err(|e| CliError::Usage(e.to_string()))?;
            write!(out, "{}", sys.to_file_string())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("subdiv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
