//! The `artin` command line: argument parsing, report emission, exit codes.
//!
//! Report lines go to standard output (or `--out`); progress lines and
//! human-readable notes go to the diagnostic stream.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, OnceLock};

use clap::{Args, Parser, Subcommand};

use crate::artin::{
    artin_run_observed, is_primitive_root, verify_record, ArtinError, Base, CheckOutcome,
    Polynomial, RecordInstance, ScanOptions,
};
use crate::factor::factorize;
use crate::primality::is_prime;
use crate::report::{
    run_fingerprint, LeaderboardLine, ProgressLine, ReportLine, Summary, SummaryBody, TOOL_VERSION,
};
use crate::search::{
    enumerate_candidates, run_search, Checkpoint, SearchConfig, SearchControl, SearchError,
    DEFAULT_CHECKPOINT_EVERY,
};
use crate::sieve::{DEFAULT_SEGMENT_LEN, DEFAULT_SIEVE_BOUND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_PERSISTENCE: i32 = 4;

/// Environment variable giving the default worker count.
pub const THREADS_ENV: &str = "ARTIN_THREADS";

/// Largest accepted argument of `factor`, `is-prime` and `pr-test`.
const INPUT_BITS: u32 = 72;

#[derive(Debug, Parser)]
#[command(
    name = "artin",
    version,
    about = "Consecutive Artin primes in polynomial sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Re-verify a claimed run (a built-in record or a user instance).
    Verify(VerifyArgs),
    /// Scan f(n) over a range and stream every prime met.
    Run(RunArgs),
    /// Search coefficient and base ranges for long runs.
    Search(SearchArgs),
    /// Factor a positive integer below 2^72.
    Factor { n: String },
    /// Primality verdict for an integer below 2^72.
    IsPrime { n: String },
    /// Whether g is a primitive root modulo the prime p.
    PrTest {
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long)]
        p: String,
    },
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = DEFAULT_SIEVE_BOUND)]
    sieve_bound: u64,
    #[arg(long, default_value_t = DEFAULT_SEGMENT_LEN)]
    segment_len: u64,
    /// Worker threads [default: available cores].
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    /// Write report lines here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress progress lines.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Built-in record name (gallot2004).
    name: Option<String>,
    /// Coefficients, constant term first: "c0,c1,...".
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long)]
    expect_c: Option<u64>,
    /// Half-open window a:b of depressed-form arguments.
    #[arg(long)]
    n_range: Option<String>,
    /// The window ends exactly where the run ends.
    #[arg(long)]
    tight: bool,
    #[command(flatten)]
    scan: ScanArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    /// Half-open range a:b of arguments.
    #[arg(long)]
    n_range: String,
    /// Keep scanning after the first failing prime.
    #[arg(long)]
    no_stop: bool,
    /// Count |f(n)| where f(n) is negative.
    #[arg(long)]
    allow_negative: bool,
    #[command(flatten)]
    scan: ScanArgs,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Search config (TOML, or JSON with a .json extension).
    #[arg(long)]
    config: PathBuf,
    /// Continue from this checkpoint.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Checkpoint file [default: the resumed file, else <config>.ckpt.json].
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_EVERY)]
    checkpoint_every: u128,
    /// Stop after this many enumeration positions (a checkpoint is kept).
    #[arg(long)]
    stop_after: Option<u128>,
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    /// Write the leaderboard here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, short)]
    quiet: bool,
}

/// A failure that ends the command with a specific exit code.
#[derive(Debug)]
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl ToString) -> Self {
        Exit {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn persistence(message: impl ToString) -> Self {
        Exit {
            code: EXIT_PERSISTENCE,
            message: message.to_string(),
        }
    }
}

impl From<ArtinError> for Exit {
    fn from(e: ArtinError) -> Self {
        Exit::usage(e)
    }
}

impl From<SearchError> for Exit {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Persist { .. } => Exit::persistence(e),
            _ => Exit::usage(e),
        }
    }
}

type CmdResult = Result<i32, Exit>;

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
        Command::Run(a) => cmd_run(a, stdout, stderr),
        Command::Search(a) => cmd_search(a, stdout, stderr),
        Command::Factor { n } => cmd_factor(&n, stdout),
        Command::IsPrime { n } => cmd_is_prime(&n, stdout),
        Command::PrTest { g, p } => cmd_pr_test(&g, &p, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn parse_poly(s: &str) -> Result<Polynomial, Exit> {
    s.parse::<Polynomial>().map_err(Exit::usage)
}

fn parse_base(s: &str) -> Result<Base, Exit> {
    let g: i128 = s
        .trim()
        .parse()
        .map_err(|e| Exit::usage(format!("bad base {s:?}: {e}")))?;
    Ok(Base::new(g)?)
}

fn parse_range(s: &str) -> Result<(u64, u64), Exit> {
    let bad = || Exit::usage(format!("bad range {s:?}, expected a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(Exit::usage(format!("range {s:?} is empty")));
    }
    Ok((a, b))
}

fn parse_input(s: &str) -> Result<u128, Exit> {
    let n: u128 = s
        .trim()
        .parse()
        .map_err(|e| Exit::usage(format!("bad integer {s:?}: {e}")))?;
    if n >> INPUT_BITS != 0 {
        return Err(Exit::usage(format!("{n} is not below 2^{INPUT_BITS}")));
    }
    Ok(n)
}

fn default_threads(requested: Option<usize>) -> usize {
    requested
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn scan_options(a: &ScanArgs) -> ScanOptions {
    ScanOptions {
        sieve_bound: a.sieve_bound,
        segment_len: a.segment_len,
        threads: default_threads(a.threads),
        ..ScanOptions::default()
    }
}

/// Report sink: the `--out` file or standard output.
fn with_sink(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> CmdResult,
) -> CmdResult {
    match out {
        None => body(stdout),
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Exit::persistence(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            let code = body(&mut w)?;
            w.flush()
                .map_err(|e| Exit::persistence(format!("{}: {e}", path.display())))?;
            Ok(code)
        }
    }
}

fn emit(out: &mut dyn Write, line: &ReportLine) -> Result<(), Exit> {
    line.write_to(out)
        .map_err(|e| Exit::persistence(format!("writing report: {e}")))
}

fn progress(stderr: &mut dyn Write, quiet: bool, line: ProgressLine) {
    if !quiet {
        let _ = ReportLine::Progress(line).write_to(stderr);
    }
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let mut instance = match (&a.name, &a.poly) {
        (Some(name), None) => RecordInstance::builtin(name).ok_or_else(|| {
            Exit::usage(format!(
                "unknown record {name:?}; built-in records: {}",
                RecordInstance::builtin_names().join(", ")
            ))
        })?,
        (None, Some(poly)) => {
            let (g, c, range) = match (&a.g, a.expect_c, &a.n_range) {
                (Some(g), Some(c), Some(r)) => (g, c, r),
                _ => {
                    return Err(Exit::usage(
                        "a user instance needs --poly, --g, --expect-c and --n-range",
                    ))
                }
            };
            let (lo, hi) = parse_range(range)?;
            RecordInstance {
                name: "user".into(),
                f: parse_poly(poly)?,
                g: parse_base(g)?,
                expected_c: c,
                expected_n_range: (lo, hi - 1),
                tight: a.tight,
            }
        }
        (Some(_), Some(_)) => return Err(Exit::usage("give a record name or --poly, not both")),
        (None, None) => return Err(Exit::usage("give a record name or --poly")),
    };
    if a.name.is_some() {
        if a.g.is_some() {
            return Err(Exit::usage("--g cannot override a built-in record"));
        }
        if let Some(c) = a.expect_c {
            instance.expected_c = c;
        }
        if let Some(r) = &a.n_range {
            let (lo, hi) = parse_range(r)?;
            instance.expected_n_range = (lo, hi - 1);
        }
    }
    let opts = scan_options(&a.scan);
    let report = verify_record(&instance, &opts)?;

    for check in &report.checks {
        let mark = match check.outcome {
            CheckOutcome::Pass => "pass",
            CheckOutcome::Fail => "FAIL",
            CheckOutcome::Inconclusive => "inconclusive",
        };
        let _ = writeln!(stderr, "{mark:>12}  {}: {}", check.name, check.detail);
    }
    let code = if report.failed() {
        EXIT_VERIFY_FAILED
    } else if report.inconclusive() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let (lo, hi) = instance.expected_n_range;
    let summary = ReportLine::Summary(Summary {
        version: TOOL_VERSION.into(),
        fingerprint: run_fingerprint(&instance.f, &instance.g, (lo, hi + 1), &opts),
        body: SummaryBody::Verify {
            instance: instance.name.clone(),
            c: report.f_form.c,
            passed: report.passed(),
            inconclusive: report.inconclusive(),
        },
    });
    with_sink(&a.scan.out, stdout, |out| {
        emit(out, &ReportLine::Verification(report))?;
        emit(out, &summary)?;
        Ok(code)
    })
}

fn cmd_run(a: RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let f = parse_poly(&a.poly)?;
    let g = parse_base(&a.g)?;
    let (lo, hi) = parse_range(&a.n_range)?;
    let opts = ScanOptions {
        stop_on_failure: !a.no_stop,
        allow_negative: a.allow_negative,
        ..scan_options(&a.scan)
    };
    let quiet = a.scan.quiet;
    with_sink(&a.scan.out, stdout, |out| {
        let mut write_err = None;
        let report = artin_run_observed(
            &g,
            &f,
            lo..hi,
            &opts,
            |e| {
                if write_err.is_none() {
                    write_err = ReportLine::Event(e.clone()).write_to(out).err();
                }
            },
            |p| {
                progress(
                    stderr,
                    quiet,
                    ProgressLine {
                        done: p.n_done as u128,
                        total: hi as u128,
                        c: Some(p.c),
                    },
                )
            },
        )?;
        if let Some(e) = write_err {
            return Err(Exit::persistence(format!("writing report: {e}")));
        }
        emit(
            out,
            &ReportLine::Summary(Summary {
                version: TOOL_VERSION.into(),
                fingerprint: run_fingerprint(&f, &g, (lo, hi), &opts),
                body: SummaryBody::Run {
                    f: f.clone(),
                    g,
                    n_range: (lo, hi),
                    report,
                },
            }),
        )?;
        Ok(EXIT_OK)
    })
}

/// Process-wide flag raised by Ctrl-C; the handler is installed once.
fn interrupt_flag() -> Arc<AtomicBool> {
    static FLAG: OnceLock<Arc<AtomicBool>> = OnceLock::new();
    FLAG.get_or_init(|| {
        let flag = Arc::new(AtomicBool::new(false));
        let handler_flag = flag.clone();
        let _ = ctrlc::set_handler(move || handler_flag.store(true, Ordering::SeqCst));
        flag
    })
    .clone()
}

fn default_checkpoint_path(config: &Path) -> PathBuf {
    let mut name = config.file_stem().unwrap_or_default().to_os_string();
    name.push(".ckpt.json");
    config.with_file_name(name)
}

fn cmd_search(a: SearchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let cfg = SearchConfig::load(&a.config)?;
    let resume = match &a.resume {
        Some(path) => Some(Checkpoint::load(path).map_err(Exit::usage)?),
        None => None,
    };
    let checkpoint_path = a
        .checkpoint
        .clone()
        .or_else(|| a.resume.clone())
        .unwrap_or_else(|| default_checkpoint_path(&a.config));
    let ctl = SearchControl {
        threads: default_threads(a.threads),
        checkpoint_path: Some(checkpoint_path.clone()),
        checkpoint_every: a.checkpoint_every,
        stop_after: a.stop_after,
        interrupt: Some(interrupt_flag()),
    };
    let quiet = a.quiet;
    let outcome = run_search(&cfg, resume, &ctl, |p| {
        progress(
            stderr,
            quiet,
            ProgressLine {
                done: p.cursor,
                total: p.total,
                c: p.best_c,
            },
        )
    })?;
    let cp = &outcome.checkpoint;
    let total = enumerate_candidates(&cfg, 0)?.total();
    let _ = writeln!(
        stderr,
        "{} at position {} of {total}; checkpoint {}",
        if outcome.completed {
            "completed"
        } else {
            "stopped"
        },
        cp.cursor,
        checkpoint_path.display()
    );
    with_sink(&a.out, stdout, |out| {
        for (i, entry) in cp.leaderboard.iter().enumerate() {
            emit(
                out,
                &ReportLine::Leaderboard(LeaderboardLine {
                    rank: i + 1,
                    entry: entry.clone(),
                }),
            )?;
        }
        emit(
            out,
            &ReportLine::Summary(Summary {
                version: TOOL_VERSION.into(),
                fingerprint: cp.config_fingerprint.clone(),
                body: SummaryBody::Search {
                    cursor: cp.cursor,
                    total,
                    completed: outcome.completed,
                    stats: cp.stats,
                    best_c: cp.leaderboard.first().map(|e| e.c),
                },
            }),
        )?;
        Ok(EXIT_OK)
    })
}

fn write_out(stdout: &mut dyn Write, text: std::fmt::Arguments) -> Result<(), Exit> {
    stdout
        .write_fmt(text)
        .map_err(|e| Exit::persistence(format!("writing output: {e}")))
}

fn cmd_factor(n: &str, stdout: &mut dyn Write) -> CmdResult {
    let n = parse_input(n)?;
    let fac = factorize(n).map_err(Exit::usage)?;
    write_out(stdout, format_args!("{fac}\n"))?;
    Ok(EXIT_OK)
}

fn cmd_is_prime(n: &str, stdout: &mut dyn Write) -> CmdResult {
    let n = parse_input(n)?;
    let v = is_prime(n);
    write_out(stdout, format_args!("{:?} ({:?})\n", v.value, v.method))?;
    Ok(EXIT_OK)
}

fn cmd_pr_test(g: &str, p: &str, stdout: &mut dyn Write) -> CmdResult {
    let g = parse_base(g)?;
    let p = parse_input(p)?;
    if p < 2 {
        return Err(Exit::usage(format!("{p} is not prime")));
    }
    let fac = factorize(p - 1).map_err(Exit::usage)?;
    let pr = is_primitive_root(&g, p, &fac)?;
    write_out(stdout, format_args!("{pr}\np - 1 = {fac}\n"))?;
    Ok(EXIT_OK)
}
