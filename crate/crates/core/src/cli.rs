//! Command-line front end. Each subcommand maps onto one library operation.
//!
//! Exit status: 0 on success, 1 for invalid input, 2 when a numerically
//! checked mathematical property fails (which indicates a bug).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::expsums::ExpSums;
use crate::format::fmt_exact;
use crate::numtheory::{primes_in, PrimeContext};
use crate::reference::{published_max, published_primes};
use crate::scan::{
    figure_rows, scan_primes, scan_range, write_csv, write_figure_csv, write_jsonl, ClassFilter,
    Precision, ScanOptions, DEFAULT_SCAN_CAP,
};
use crate::sequences::{
    bjorck_with, chirp, verify_biunimodular, verify_cazac, UnimodularSequence,
    DEFAULT_VERIFY_TOLERANCE,
};
use crate::transform::{ambiguity_table_with_cap, AmbiguityEngine, DEFAULT_TABLE_CAP};

#[derive(Debug, Parser)]
#[command(name = "bjorck", version, about = "Björck CAZAC sequences and their ambiguity functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a sequence, one "re,im" sample per line.
    Gen(GenArgs),
    /// Check constant amplitude, zero autocorrelation and bi-unimodularity.
    Verify(VerifyArgs),
    /// Ambiguity function: one row, the full table, or the off-origin maximum.
    Ambiguity(AmbiguityArgs),
    /// Kloosterman, Gauss and Salié sums; Weil-bound audits.
    Sums(SumsArgs),
    /// Per-prime maxima over a range of primes.
    Scan(ScanArgs),
    /// Maxima for a list of primes next to the published values.
    Table(TableArgs),
    /// Data for the max-ambiguity versus p plot.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SequenceKind {
    Bjorck,
    Chirp,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_enum, default_value = "bjorck")]
    pub kind: SequenceKind,
    /// Chirp quadratic coefficient.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub r: i64,
    /// Chirp linear coefficient.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub s: i64,
}

impl SequenceArgs {
    fn build(&self) -> Result<UnimodularSequence> {
        let ctx = PrimeContext::new(self.p)?;
        match self.kind {
            SequenceKind::Bjorck => Ok(bjorck_with(&ctx)),
            SequenceKind::Chirp => chirp(self.p, self.r, self.s),
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, required_unless_present = "input")]
    pub p: Option<u64>,
    #[arg(long, value_enum, default_value = "bjorck")]
    pub kind: SequenceKind,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub r: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub s: i64,
    /// Read a custom sequence ("re,im" per line) instead of constructing one.
    #[arg(long, conflicts_with = "p")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOLERANCE)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AmbiguityArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// Print a single row A[m, ·].
    #[arg(long, conflicts_with = "table")]
    pub row: Option<usize>,
    /// Print the full p×p table as CSV.
    #[arg(long)]
    pub table: bool,
    /// Largest p for which --table is allowed.
    #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
    pub cap: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SumsArgs {
    #[command(subcommand)]
    pub which: SumsCommand,
}

#[derive(Debug, Subcommand)]
pub enum SumsCommand {
    /// K[a,b;p].
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        p: u64,
    },
    /// τ[a;p] by direct summation, with the closed form alongside.
    Gauss {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        p: u64,
    },
    /// Σ χ[x²−4a] ζ^x next to K[1,a;p].
    Salie {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        p: u64,
    },
    /// max_a |K[1,a;p]| / 2√p for one prime or every prime in a range.
    WeilAudit {
        #[arg(long, required_unless_present = "range")]
        p: Option<u64>,
        #[arg(long, value_parser = parse_range, conflicts_with = "p")]
        range: Option<(u64, u64)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    #[value(name = "1mod4")]
    OneMod4,
    #[value(name = "3mod4")]
    ThreeMod4,
    All,
}

impl From<ClassArg> for ClassFilter {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::OneMod4 => ClassFilter::OneMod4,
            ClassArg::ThreeMod4 => ClassFilter::ThreeMod4,
            ClassArg::All => ClassFilter::All,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Inclusive range LO:HI.
    #[arg(long, value_parser = parse_range)]
    pub range: (u64, u64),
    #[arg(long, value_enum, default_value = "all")]
    pub class: ClassArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Worker threads (default: one per core).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Print reals with 17 significant digits instead of 6 decimals.
    #[arg(long)]
    pub full_precision: bool,
    /// Largest prime the scan may touch.
    #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
    pub max_p: u64,
    /// Only print the primes whose maximum exceeds 2/sqrt(p).
    #[arg(long)]
    pub exceedances: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated primes (default: every prime with a published value).
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub full_precision: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, value_parser = parse_range)]
    pub range: (u64, u64),
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub full_precision: bool,
    #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
    pub max_p: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: u64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if hi < lo {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn precision(full: bool) -> Precision {
    if full {
        Precision::Full
    } else {
        Precision::Table
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Invariant(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Gen(args) => {
            let u = args.seq.build()?;
            emit(args.out.as_deref(), stdout, |w| u.write_samples(w))
        }
        Command::Verify(args) => verify(args, stdout),
        Command::Ambiguity(args) => ambiguity(args, stdout),
        Command::Sums(args) => sums(args.which, stdout),
        Command::Scan(args) => scan(args, stdout),
        Command::Table(args) => table(args, stdout),
        Command::Figure(args) => {
            let opts = ScanOptions { jobs: args.jobs, max_p: args.max_p, ..Default::default() };
            let records = scan_range(args.range.0, args.range.1, &opts)?;
            let rows = figure_rows(&records);
            emit(args.out.as_deref(), stdout, |w| {
                write_figure_csv(&rows, precision(args.full_precision), w)
            })
        }
    }
}

fn verify(args: VerifyArgs, stdout: &mut dyn Write) -> Result<()> {
    if !(args.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", args.tol)));
    }
    let constructed = args.input.is_none();
    let u = match &args.input {
        Some(path) => {
            let file = std::fs::File::open(path)?;
            UnimodularSequence::read_samples(std::io::BufReader::new(file), "custom")?
        }
        None => SequenceArgs { p: args.p.expect("clap requires p"), kind: args.kind, r: args.r, s: args.s }
            .build()?,
    };
    let report = verify_cazac(&u, args.tol);
    let biunimodular = verify_biunimodular(&u, args.tol);
    emit(args.out.as_deref(), stdout, |w| {
        writeln!(w, "p={}", u.p())?;
        writeln!(w, "label={}", u.label())?;
        writeln!(w, "ca_ok={}", report.ca_ok)?;
        writeln!(w, "zac_ok={}", report.zac_ok)?;
        writeln!(w, "max_violation={}", fmt_exact(report.max_violation))?;
        writeln!(w, "biunimodular={biunimodular}")?;
        Ok(())
    })?;
    if constructed && !(report.ca_ok && report.zac_ok && biunimodular) {
        return Err(Error::Invariant(format!(
            "{} of length {} failed CAZAC verification at tol {}",
            u.label(),
            u.p(),
            args.tol
        )));
    }
    Ok(())
}

fn ambiguity(args: AmbiguityArgs, stdout: &mut dyn Write) -> Result<()> {
    let u = args.seq.build()?;
    if args.table {
        let table = ambiguity_table_with_cap(&u, args.cap)?;
        return emit(args.out.as_deref(), stdout, |w| table.write_csv(w));
    }
    let engine = AmbiguityEngine::new(u.values());
    if let Some(m) = args.row {
        let row = engine.row(m)?;
        return emit(args.out.as_deref(), stdout, |w| {
            writeln!(w, "n,re,im,abs")?;
            for (n, z) in row.values.iter().enumerate() {
                writeln!(w, "{n},{},{},{}", fmt_exact(z.re), fmt_exact(z.im), fmt_exact(z.norm()))?;
            }
            Ok(())
        });
    }
    let max = engine.max_off_origin().expect("prime length has off-origin entries");
    emit(args.out.as_deref(), stdout, |w| {
        writeln!(w, "max_abs={}", fmt_exact(max.max_abs))?;
        writeln!(w, "argmax_m={}", max.argmax.0)?;
        writeln!(w, "argmax_n={}", max.argmax.1)?;
        Ok(())
    })
}

fn sums(which: SumsCommand, stdout: &mut dyn Write) -> Result<()> {
    match which {
        SumsCommand::Kloosterman { a, b, p } => {
            let k = ExpSums::new(p)?.kloosterman(a, b)?;
            writeln!(stdout, "{}", serde_json::to_string(&k).expect("serializable"))?;
        }
        SumsCommand::Gauss { a, p } => {
            let s = ExpSums::new(p)?;
            let (t, c) = (s.gauss_sum(a), s.gauss_closed_form(a));
            let v = json!({"a": a, "p": p, "re": t.re, "im": t.im, "closed_re": c.re, "closed_im": c.im});
            writeln!(stdout, "{v}")?;
        }
        SumsCommand::Salie { a, p } => {
            let s = ExpSums::new(p)?;
            let salie = s.salie_form(a)?;
            let k = s.kloosterman(1, a)?.value;
            writeln!(stdout, "{}", json!({"a": a, "p": p, "value": salie, "kloosterman": k}))?;
        }
        SumsCommand::WeilAudit { p, range } => {
            let primes = match (p, range) {
                (Some(p), _) => {
                    PrimeContext::new(p)?;
                    vec![p]
                }
                (None, Some((lo, hi))) => primes_in(lo.max(3), hi),
                (None, None) => unreachable!("clap requires one of p or range"),
            };
            for p in primes {
                let audit = ExpSums::new(p)?.weil_audit()?;
                writeln!(stdout, "{}", audit.to_json())?;
                if audit.max_ratio > 1.0 {
                    return Err(Error::Invariant(format!(
                        "|K[1,{};{p}]| exceeds 2 sqrt(p) (ratio {})",
                        audit.worst_a, audit.max_ratio
                    )));
                }
            }
        }
    }
    Ok(())
}

fn scan(args: ScanArgs, stdout: &mut dyn Write) -> Result<()> {
    let opts = ScanOptions { jobs: args.jobs, class_filter: args.class.into(), max_p: args.max_p };
    let records = scan_range(args.range.0, args.range.1, &opts)?;
    let records: Vec<_> = if args.exceedances {
        records.into_iter().filter(|r| r.exceeds_two_over_sqrt_p).collect()
    } else {
        records
    };
    let prec = precision(args.full_precision);
    emit(args.out.as_deref(), stdout, |w| match args.format {
        OutputFormat::Csv => write_csv(&records, prec, w),
        OutputFormat::Jsonl => write_jsonl(&records, w),
    })
}

fn table(args: TableArgs, stdout: &mut dyn Write) -> Result<()> {
    let primes: Vec<u64> = if args.primes.is_empty() {
        published_primes().collect()
    } else {
        args.primes.clone()
    };
    let max_p = primes.iter().copied().max().unwrap_or(3);
    let opts = ScanOptions { jobs: args.jobs, max_p, ..Default::default() };
    let records = scan_primes(&primes, &opts)?;
    let prec = precision(args.full_precision);
    let fmt = |x: f64| match prec {
        Precision::Table => format!("{x:.6}"),
        Precision::Full => fmt_exact(x),
    };
    emit(args.out.as_deref(), stdout, |w| {
        writeln!(w, "p,max_ambiguity,two_over_sqrt_p,published")?;
        for r in &records {
            let published = published_max(r.p).map(|v| format!("{v:.6}")).unwrap_or_default();
            writeln!(w, "{},{},{},{published}", r.p, fmt(r.max_ambiguity), fmt(r.two_over_sqrt_p))?;
        }
        Ok(())
    })
}

/// Writes to `path` atomically (temp file + rename) or to `stdout`.
fn emit<F>(path: Option<&Path>, stdout: &mut dyn Write, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        None => {
            body(stdout)?;
            stdout.flush()?;
            Ok(())
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            {
                let mut w = std::io::BufWriter::new(tmp.as_file_mut());
                body(&mut w)?;
                w.flush()?;
            }
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
            Ok(())
        }
    }
}
