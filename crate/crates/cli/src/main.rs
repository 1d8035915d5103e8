use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use palinruler::maskcalc::DEFAULT_MAX_LEN;
use palinruler::pallen::ORACLE_BOUND_ENV;
use palinruler_cli::commands::{self, CliError, FactorSeq, Format, LevelsetArgs, Seq};
use palinruler_cli::report::Report;
use palinruler_cli::suites::Suite;

/// Palindromic length of the ruler and period-doubling sequences.
#[derive(Debug, Parser)]
#[command(name = "palinruler", version)]
struct Cli {
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Size limit for brute-force oracles (overrides the environment).
    #[arg(long, global = true)]
    oracle_bound: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print `seq(1..=n)`.
    Gen {
        #[arg(value_enum)]
        seq: Seq,
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run an invariant sweep and print a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Prefix bound, or the maximum word length for lemma1 and prop1.
        n: u64,
        /// Longest word searched exhaustively by mixed-min.
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: u32,
    },
    /// Compare a b-file with a sequence.
    OeisCheck {
        path: PathBuf,
        #[arg(long, value_enum)]
        seq: Seq,
        /// Added to every b-file index to obtain the sequence index.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
    },
    /// Level set `{ i <= n : seq(i) = epsilon }`, optionally with an automaton.
    Levelset {
        #[arg(value_enum)]
        seq: Seq,
        epsilon: u32,
        n: u64,
        /// Learn an automaton with at most this many states.
        #[arg(long, value_name = "MAX_STATES")]
        learn: Option<usize>,
        /// Check an automaton read from a file.
        #[arg(long)]
        dfa: Option<PathBuf>,
        /// Write the learned automaton to a file.
        #[arg(long, requires = "learn")]
        emit_dfa: Option<PathBuf>,
    },
    /// Mask solutions for the binary expansion of an index or a word.
    Masks {
        #[arg(conflicts_with = "word", required_unless_present = "word")]
        n: Option<u64>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: u32,
    },
    /// List palindromic factors within a prefix.
    Factors {
        #[arg(value_enum)]
        seq: FactorSeq,
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(bound) = cli.oracle_bound {
        std::env::set_var(ORACLE_BOUND_ENV, bound.to_string());
    }
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let start = Instant::now();
    let report = match cli.command {
        Command::Gen { seq, n, format } => {
            commands::gen(seq, n, format, &mut out)?;
            out.flush()?;
            return Ok(0);
        }
        Command::Factors { seq, n, format } => {
            commands::factors(seq, n, format, &mut out)?;
            out.flush()?;
            return Ok(0);
        }
        Command::Verify { suite, n, max_len } => commands::verify(suite, n, max_len)?,
        Command::OeisCheck { path, seq, offset } => commands::oeis_check(&path, seq, offset)?,
        Command::Levelset {
            seq,
            epsilon,
            n,
            learn,
            dfa,
            emit_dfa,
        } => commands::levelset(&LevelsetArgs {
            seq,
            epsilon,
            n,
            learn,
            dfa: dfa.as_deref(),
            emit_dfa: emit_dfa.as_deref(),
        })?,
        Command::Masks { n, word, max_len } => commands::masks(n, word.as_deref(), max_len)?,
    };
    emit(report, start, &mut out)
}

fn emit(mut report: Report, start: Instant, out: &mut dyn Write) -> Result<i32, CliError> {
    report.timing_ms = start.elapsed().as_millis() as u64;
    writeln!(out, "{}", report.to_json())?;
    out.flush()?;
    Ok(report.status.exit_code())
}
