//! Sweeps over ranges of primes: one summary record per prime, merged into
//! ascending order independently of how the work was scheduled.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{cazac_lower_bound, envelope, mbound_for};
use crate::error::{Error, Result};
use crate::format::{fmt_exact, fmt_fixed};
use crate::numtheory::{is_prime, PrimeContext, ResidueClass};
use crate::sequences::bjorck_with;
use crate::transform::AmbiguityEngine;

/// Scans above this p need [`ScanOptions::max_p`] raised explicitly.
pub const DEFAULT_SCAN_CAP: u64 = 5000;

/// Distance from `2/√p` below which an exceedance decision is logged for
/// manual review.
pub const NEAR_TIE_WARNING: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassFilter {
    #[default]
    All,
    OneMod4,
    ThreeMod4,
}

impl ClassFilter {
    pub fn accepts(self, p: u64) -> bool {
        match self {
            ClassFilter::All => true,
            ClassFilter::OneMod4 => p % 4 == 1,
            ClassFilter::ThreeMod4 => p % 4 == 3,
        }
    }

    pub fn class(self) -> Option<ResidueClass> {
        match self {
            ClassFilter::All => None,
            ClassFilter::OneMod4 => Some(ResidueClass::OneMod4),
            ClassFilter::ThreeMod4 => Some(ResidueClass::ThreeMod4),
        }
    }
}

impl FromStr for ClassFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ClassFilter::All),
            "1mod4" => Ok(ClassFilter::OneMod4),
            "3mod4" => Ok(ClassFilter::ThreeMod4),
            other => Err(Error::InvalidArgument(format!(
                "unknown class {other:?}; expected 1mod4, 3mod4 or all"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    pub class_filter: ClassFilter,
    pub max_p: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { jobs: None, class_filter: ClassFilter::All, max_p: DEFAULT_SCAN_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub p: u64,
    pub residue_class: ResidueClass,
    pub max_ambiguity: f64,
    pub argmax_m: usize,
    pub argmax_n: usize,
    pub two_over_sqrt_p: f64,
    pub mbound: f64,
    pub exceeds_two_over_sqrt_p: bool,
    pub elapsed_ms: f64,
}

/// Output precision for real-valued CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Six decimals.
    #[default]
    Table,
    /// Seventeen significant digits.
    Full,
}

impl Precision {
    fn fmt(self, x: f64) -> String {
        match self {
            Precision::Table => fmt_fixed(x, 6),
            Precision::Full => fmt_exact(x),
        }
    }
}

/// Computes the record for one prime and checks it against the proven
/// upper bound and the CAZAC lower bound.
pub fn scan_prime(p: u64) -> Result<ScanRecord> {
    let start = Instant::now();
    let ctx = PrimeContext::new(p)?;
    let u = bjorck_with(&ctx);
    let max = AmbiguityEngine::new(u.values())
        .max_off_origin()
        .expect("prime length has off-origin entries");
    let class = ctx.residue_class();
    let two_over_sqrt_p = 2.0 / (p as f64).sqrt();
    let bound = mbound_for(p, class);

    if !(max.max_abs < bound) {
        return Err(Error::Invariant(format!(
            "p = {p}: max |A| = {} is not below the bound {bound}",
            max.max_abs
        )));
    }
    let lower = cazac_lower_bound(p);
    if !(max.max_abs >= lower) {
        return Err(Error::Invariant(format!(
            "p = {p}: max |A| = {} is below 1/sqrt(p-1) = {lower}",
            max.max_abs
        )));
    }
    if (max.max_abs - two_over_sqrt_p).abs() < NEAR_TIE_WARNING {
        log::warn!(
            "p = {p}: max |A| = {} is within {NEAR_TIE_WARNING:e} of 2/sqrt(p) = {two_over_sqrt_p}",
            max.max_abs
        );
    }

    Ok(ScanRecord {
        p,
        residue_class: class,
        max_ambiguity: max.max_abs,
        argmax_m: max.argmax.0,
        argmax_n: max.argmax.1,
        two_over_sqrt_p,
        mbound: bound,
        exceeds_two_over_sqrt_p: max.max_abs > two_over_sqrt_p,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Scans an explicit list of primes; records come back sorted by p.
pub fn scan_primes(primes: &[u64], opts: &ScanOptions) -> Result<Vec<ScanRecord>> {
    if let Some(&bad) = primes.iter().find(|&&p| p == 2 || !is_prime(p)) {
        return Err(Error::InvalidPrime(bad));
    }
    if let Some(&big) = primes.iter().find(|&&p| p > opts.max_p) {
        return Err(Error::InvalidArgument(format!(
            "p = {big} exceeds the scan cap {}; raise the cap to scan it",
            opts.max_p
        )));
    }
    // Largest first so the expensive primes start early.
    let mut work: Vec<u64> = primes.to_vec();
    work.sort_unstable_by(|a, b| b.cmp(a));
    work.dedup();

    let run = || -> Result<Vec<ScanRecord>> {
        work.par_iter().with_max_len(1).map(|&p| scan_prime(p)).collect()
    };
    let mut records = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    records.sort_by_key(|r| r.p);
    Ok(records)
}

/// One record per prime in `[lo, hi]` accepted by the class filter.
pub fn scan_range(lo: u64, hi: u64, opts: &ScanOptions) -> Result<Vec<ScanRecord>> {
    if lo < 3 || hi < lo {
        return Err(Error::InvalidRange { lo, hi });
    }
    let primes: Vec<u64> = (lo..=hi)
        .filter(|&n| opts.class_filter.accepts(n) && n != 2 && is_prime(n))
        .collect();
    scan_primes(&primes, opts)
}

/// Primes whose maximum strictly exceeds `2/√p`.
pub fn find_exceedances(records: &[ScanRecord], class: Option<ResidueClass>) -> Vec<u64> {
    records
        .iter()
        .filter(|r| r.exceeds_two_over_sqrt_p)
        .filter(|r| class.is_none_or(|c| r.residue_class == c))
        .map(|r| r.p)
        .collect()
}

pub const SCAN_CSV_HEADER: &str = "p,class,max_ambiguity,argmax_m,argmax_n,two_over_sqrt_p,mbound,exceeds";

pub fn write_csv<W: Write>(records: &[ScanRecord], precision: Precision, mut w: W) -> Result<()> {
    writeln!(w, "{SCAN_CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.p,
            r.residue_class,
            precision.fmt(r.max_ambiguity),
            r.argmax_m,
            r.argmax_n,
            precision.fmt(r.two_over_sqrt_p),
            precision.fmt(r.mbound),
            r.exceeds_two_over_sqrt_p
        )?;
    }
    Ok(())
}

/// One JSON object per record, full double precision.
pub fn write_jsonl<W: Write>(records: &[ScanRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(std::io::Error::from)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Data needed to redraw the max-ambiguity-versus-p plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub p: u64,
    pub max_ambiguity: f64,
    pub two_over_sqrt_p: f64,
    pub two_over_sqrt_p_plus_4_over_p: f64,
}

pub fn figure_rows(records: &[ScanRecord]) -> Vec<FigureRow> {
    records
        .iter()
        .map(|r| FigureRow {
            p: r.p,
            max_ambiguity: r.max_ambiguity,
            two_over_sqrt_p: r.two_over_sqrt_p,
            two_over_sqrt_p_plus_4_over_p: envelope(r.p),
        })
        .collect()
}

pub fn figure_data(lo: u64, hi: u64, opts: &ScanOptions) -> Result<Vec<FigureRow>> {
    Ok(figure_rows(&scan_range(lo, hi, opts)?))
}

pub const FIGURE_CSV_HEADER: &str = "p,max_ambiguity,two_over_sqrt_p,two_over_sqrt_p_plus_4_over_p";

pub fn write_figure_csv<W: Write>(rows: &[FigureRow], precision: Precision, mut w: W) -> Result<()> {
    writeln!(w, "{FIGURE_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            r.p,
            precision.fmt(r.max_ambiguity),
            precision.fmt(r.two_over_sqrt_p),
            precision.fmt(r.two_over_sqrt_p_plus_4_over_p)
        )?;
    }
    Ok(())
}
