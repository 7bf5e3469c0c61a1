//! Binary entry point: argument parsing and exit-code policy.
//!
//! Exit codes: 0 on success (including --help/--version), 1 on invalid
//! input or operational errors, 2 when the verify command finds a
//! counterexample to one of its invariants.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use padic_paircorr::cli::{run, Command, Outcome, OutputFormat, RunConfig};
use padic_paircorr::rational::ExactRational;
use padic_paircorr::sequences::SequenceKind;

#[derive(Parser)]
#[command(
    name = "padic-paircorr",
    version,
    about = "Truncated p-adic arithmetic and pair correlation statistics",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a sequence and write it in the digit file format
    Gen(CommonArgs),
    /// Pair correlation at a single N, one row per threshold
    Stats(CommonArgs),
    /// Pair correlation for every N up to --n-max in one streaming pass
    Sweep(CommonArgs),
    /// Run self-checks against independent oracles
    Verify(CommonArgs),
    /// Sweep the square-root sequence with plot-ready defaults
    Figure1(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeqArg {
    /// Fractional parts of square roots of non-squares, as base-p digits
    Sqrt,
    /// Base-p van der Corput points (real-valued)
    Vdc,
    /// The integers 1..=N truncated to m digits
    Naturals,
    /// Seeded uniform random digits
    Random,
    /// Read elements from --in
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    /// CSV plus a gnuplot script next to it (needs --out)
    Gnuplot,
}

#[derive(Args)]
struct CommonArgs {
    /// Prime base
    #[arg(long, default_value_t = 3)]
    p: u64,

    /// Exponent alpha in (0, 1], a rational like 1 or 1/2
    #[arg(long, default_value = "1")]
    alpha: String,

    /// Thresholds s, comma-separated nonnegative rationals
    #[arg(long, value_delimiter = ',', default_value = "1/10,1/4,1/2,1,2")]
    s: Vec<String>,

    /// Sequence length N (defaults to 5000 for figure1)
    #[arg(long, visible_alias = "count")]
    n_max: Option<u64>,

    /// Digits kept per element (for --seq file the file header decides)
    #[arg(long, visible_alias = "m", default_value_t = 32)]
    precision: usize,

    /// Which sequence to use
    #[arg(long, value_enum, default_value_t = SeqArg::Sqrt)]
    seq: SeqArg,

    /// RNG seed; required for --seq random, rejected otherwise
    #[arg(long)]
    seed: Option<u64>,

    /// Input digit file for --seq file
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,

    /// Output path; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Worker threads for sweeps; never affects the output bytes
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn parse_rational(text: &str, what: &str) -> Result<ExactRational, String> {
    text.parse()
        .map_err(|e| format!("invalid {what} {text:?}: {e}"))
}

fn build_config(command: Command, args: &CommonArgs) -> Result<RunConfig, String> {
    let alpha = parse_rational(&args.alpha, "--alpha")?;
    let s_list = args
        .s
        .iter()
        .map(|s| parse_rational(s, "--s"))
        .collect::<Result<Vec<_>, _>>()?;
    let n_max = match (args.n_max, command) {
        (Some(n), _) => n,
        (None, Command::Figure1) => 5000,
        (None, Command::Verify) => 1000,
        (None, _) => return Err("--n-max is required for this command".into()),
    };
    Ok(RunConfig {
        command,
        p: args.p,
        alpha,
        s_list,
        n_max,
        m: args.precision,
        seq: match args.seq {
            SeqArg::Sqrt => SequenceKind::SqrtFrac,
            SeqArg::Vdc => SequenceKind::VanDerCorput,
            SeqArg::Naturals => SequenceKind::Naturals,
            SeqArg::Random => SequenceKind::UniformRandom,
            SeqArg::File => SequenceKind::File,
        },
        seed: args.seed,
        input: args.input.clone(),
        out: args.out.clone(),
        format: match args.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Gnuplot => OutputFormat::Gnuplot,
        },
        threads: args.threads,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, args) = match &cli.cmd {
        Cmd::Gen(a) => (Command::Gen, a),
        Cmd::Stats(a) => (Command::Stats, a),
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Figure1(a) => (Command::Figure1, a),
    };
    let cfg = match build_config(command, args) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let (mut out, mut err) = (std::io::stdout(), std::io::stderr());
    match run(&cfg, &mut out, &mut err) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::CounterexampleFound) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
