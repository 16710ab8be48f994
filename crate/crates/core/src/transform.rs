//! Prime-length DFTs and the discrete periodic ambiguity function.
//!
//! Lengths below [`NAIVE_CUTOFF`] use a direct O(N²) sum with compensated
//! accumulation; longer inputs go through Bluestein's chirp-z transform,
//! which turns a length-N DFT into a cyclic convolution of power-of-two
//! length M ≥ 2N − 1. The power-of-two FFTs themselves are delegated to
//! `rustfft`.
//!
//! The ambiguity function of a length-p sequence u is
//!
//! ```text
//! A(u)[m, n] = (1/p) Σ_k u[m + k] conj(u[k]) exp(-2πi kn / p)
//! ```
//!
//! so each row m is a scaled DFT of the lag product `k ↦ u[m+k]·conj(u[k])`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::format::fmt_exact;
use crate::sequences::UnimodularSequence;

/// Inputs shorter than this are transformed by direct summation.
pub const NAIVE_CUTOFF: usize = 64;

/// Default limit on p for materializing a full p×p ambiguity table.
pub const DEFAULT_TABLE_CAP: u64 = 2048;

/// `exp(-2πi j / n)` for `j` in `0..n`.
pub fn forward_roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64))
        .collect()
}

/// Kahan-compensated complex accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    #[inline]
    pub(crate) fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub(crate) fn total(&self) -> Complex64 {
        self.sum
    }
}

/// Direct O(N²) DFT with compensated summation. Twiddles are looked up by
/// `k·n mod N` so no phase error accumulates with k.
pub fn naive_dft(input: &[Complex64]) -> Vec<Complex64> {
    let roots = forward_roots(input.len());
    let mut out = vec![Complex64::default(); input.len()];
    naive_dft_into(input, &roots, &mut out);
    out
}

fn naive_dft_into(input: &[Complex64], roots: &[Complex64], out: &mut [Complex64]) {
    let len = input.len();
    for (n, slot) in out.iter_mut().enumerate() {
        let mut acc = KahanSum::default();
        let mut idx = 0usize;
        for &x in input {
            acc.add(x * roots[idx]);
            idx += n;
            if idx >= len {
                idx -= len;
            }
        }
        *slot = acc.total();
    }
}

/// Precomputed Bluestein plan for one transform length.
pub struct Bluestein {
    len: usize,
    conv_len: usize,
    /// `exp(-πi k² / N)`, with k² reduced mod 2N before scaling.
    chirp: Vec<Complex64>,
    /// FFT of the conjugate chirp filter, pre-divided by `conv_len`.
    filter_spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Bluestein {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bluestein")
            .field("len", &self.len)
            .field("conv_len", &self.conv_len)
            .finish()
    }
}

impl Bluestein {
    pub fn new(len: usize) -> Self {
        assert!(len >= 1, "transform length must be positive");
        let conv_len = (2 * len - 1).next_power_of_two();
        let two_n = 2 * len as u128;
        let chirp: Vec<Complex64> = (0..len)
            .map(|k| {
                let sq = (k as u128 * k as u128) % two_n;
                Complex64::from_polar(1.0, -PI * sq as f64 / len as f64)
            })
            .collect();

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(conv_len);
        let inverse = planner.plan_fft_inverse(conv_len);

        let mut filter = vec![Complex64::default(); conv_len];
        filter[0] = chirp[0].conj();
        for k in 1..len {
            filter[k] = chirp[k].conj();
            filter[conv_len - k] = chirp[k].conj();
        }
        forward.process(&mut filter);
        let scale = 1.0 / conv_len as f64;
        for z in &mut filter {
            *z *= scale;
        }

        Self { len, conv_len, chirp, filter_spectrum: filter, forward, inverse }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn conv_len(&self) -> usize {
        self.conv_len
    }

    pub fn workspace(&self) -> BluesteinWorkspace {
        let scratch_len = self
            .forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len());
        BluesteinWorkspace {
            buffer: vec![Complex64::default(); self.conv_len],
            scratch: vec![Complex64::default(); scratch_len],
        }
    }

    /// Forward DFT of `input` into `output`; both must have length `len()`.
    pub fn process(&self, input: &[Complex64], output: &mut [Complex64], ws: &mut BluesteinWorkspace) {
        assert_eq!(input.len(), self.len);
        assert_eq!(output.len(), self.len);
        let buf = &mut ws.buffer;
        for ((slot, &x), &w) in buf.iter_mut().zip(input).zip(&self.chirp) {
            *slot = x * w;
        }
        buf[self.len..].fill(Complex64::default());
        self.forward.process_with_scratch(buf, &mut ws.scratch);
        for (z, &h) in buf.iter_mut().zip(&self.filter_spectrum) {
            *z *= h;
        }
        self.inverse.process_with_scratch(buf, &mut ws.scratch);
        for ((out, &z), &w) in output.iter_mut().zip(buf.iter()).zip(&self.chirp) {
            *out = z * w;
        }
    }

    pub fn transform(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut ws = self.workspace();
        let mut out = vec![Complex64::default(); self.len];
        self.process(input, &mut out, &mut ws);
        out
    }
}

pub struct BluesteinWorkspace {
    buffer: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

/// A DFT of fixed length, dispatching on size.
#[derive(Debug)]
pub enum DftPlan {
    Naive { roots: Vec<Complex64> },
    Bluestein(Bluestein),
}

pub enum DftWorkspace {
    Naive,
    Bluestein(BluesteinWorkspace),
}

impl DftPlan {
    pub fn new(len: usize) -> Self {
        if len < NAIVE_CUTOFF {
            DftPlan::Naive { roots: forward_roots(len) }
        } else {
            DftPlan::Bluestein(Bluestein::new(len))
        }
    }

    pub fn len(&self) -> usize {
        match self {
            DftPlan::Naive { roots } => roots.len(),
            DftPlan::Bluestein(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn workspace(&self) -> DftWorkspace {
        match self {
            DftPlan::Naive { .. } => DftWorkspace::Naive,
            DftPlan::Bluestein(b) => DftWorkspace::Bluestein(b.workspace()),
        }
    }

    pub fn process(&self, input: &[Complex64], output: &mut [Complex64], ws: &mut DftWorkspace) {
        match (self, ws) {
            (DftPlan::Naive { roots }, _) => naive_dft_into(input, roots, output),
            (DftPlan::Bluestein(b), DftWorkspace::Bluestein(w)) => b.process(input, output, w),
            (DftPlan::Bluestein(b), ws) => {
                let mut w = b.workspace();
                b.process(input, output, &mut w);
                *ws = DftWorkspace::Bluestein(w);
            }
        }
    }
}

/// `out[n] = Σ_k v[k] exp(-2πi kn / N)`.
pub fn dft(v: &[Complex64]) -> Vec<Complex64> {
    if v.is_empty() {
        return Vec::new();
    }
    let plan = DftPlan::new(v.len());
    let mut ws = plan.workspace();
    let mut out = vec![Complex64::default(); v.len()];
    plan.process(v, &mut out, &mut ws);
    out
}

/// One row of the ambiguity function: entry `n` holds `A(u)[m, n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityRow {
    pub m: usize,
    pub values: Vec<Complex64>,
}

/// Largest off-origin ambiguity magnitude and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbiguityMax {
    pub max_abs: f64,
    pub argmax: (usize, usize),
}

impl AmbiguityMax {
    /// Deterministic merge: larger magnitude wins, then smaller m, then
    /// smaller n.
    pub fn combine(self, other: Self) -> Self {
        match self.rank(&other) {
            Ordering::Less => other,
            _ => self,
        }
    }

    fn rank(&self, other: &Self) -> Ordering {
        self.max_abs
            .total_cmp(&other.max_abs)
            .then_with(|| other.argmax.cmp(&self.argmax))
    }
}

/// Evaluates ambiguity rows of a fixed sequence, reusing one DFT plan.
pub struct AmbiguityEngine<'a> {
    values: &'a [Complex64],
    plan: DftPlan,
}

pub struct RowWorkspace {
    lag: Vec<Complex64>,
    dft: DftWorkspace,
}

impl<'a> AmbiguityEngine<'a> {
    /// Works on any complex sequence, unimodular or not.
    pub fn new(values: &'a [Complex64]) -> Self {
        assert!(!values.is_empty(), "sequence must be nonempty");
        Self { values, plan: DftPlan::new(values.len()) }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn workspace(&self) -> RowWorkspace {
        RowWorkspace {
            lag: vec![Complex64::default(); self.values.len()],
            dft: self.plan.workspace(),
        }
    }

    /// Writes row `m` (0 ≤ m < len) into `out`.
    pub fn row_into(&self, m: usize, out: &mut [Complex64], ws: &mut RowWorkspace) {
        let len = self.values.len();
        debug_assert!(m < len);
        let (tail, head) = self.values.split_at(m);
        // u[(m + k) mod p] walks head then wraps into tail.
        for ((slot, shifted), &base) in ws
            .lag
            .iter_mut()
            .zip(head.iter().chain(tail.iter()))
            .zip(self.values)
        {
            *slot = shifted * base.conj();
        }
        self.plan.process(&ws.lag, out, &mut ws.dft);
        let scale = 1.0 / len as f64;
        for z in out.iter_mut() {
            *z *= scale;
        }
    }

    pub fn row(&self, m: usize) -> Result<AmbiguityRow> {
        let len = self.values.len();
        if m >= len {
            return Err(Error::ShiftOutOfRange { m, len });
        }
        let mut ws = self.workspace();
        let mut values = vec![Complex64::default(); len];
        self.row_into(m, &mut values, &mut ws);
        Ok(AmbiguityRow { m, values })
    }

    fn row_max(&self, m: usize, out: &mut [Complex64], ws: &mut RowWorkspace) -> Option<AmbiguityMax> {
        self.row_into(m, out, ws);
        let start = usize::from(m == 0);
        let mut best: Option<AmbiguityMax> = None;
        for (n, z) in out.iter().enumerate().skip(start) {
            let a = z.norm();
            if best.is_none_or(|b| a > b.max_abs) {
                best = Some(AmbiguityMax { max_abs: a, argmax: (m, n) });
            }
        }
        best
    }

    /// Streams every row, never holding more than one row per worker.
    pub fn max_off_origin(&self) -> Option<AmbiguityMax> {
        let len = self.values.len();
        (0..len)
            .into_par_iter()
            .map_init(
                || (self.workspace(), vec![Complex64::default(); len]),
                |(ws, out), m| self.row_max(m, out, ws),
            )
            .reduce(|| None, |a, b| match (a, b) {
                (Some(a), Some(b)) => Some(a.combine(b)),
                (a, None) => a,
                (None, b) => b,
            })
    }
}

pub fn ambiguity_row(u: &UnimodularSequence, m: usize) -> Result<AmbiguityRow> {
    AmbiguityEngine::new(u.values()).row(m)
}

pub fn ambiguity_max(u: &UnimodularSequence) -> AmbiguityMax {
    AmbiguityEngine::new(u.values())
        .max_off_origin()
        .expect("prime-length sequences have off-origin entries")
}

/// Full p×p ambiguity surface, row-major.
#[derive(Debug, Clone)]
pub struct AmbiguityTable {
    p: usize,
    data: Vec<Complex64>,
}

impl AmbiguityTable {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.data[m * self.p + n]
    }

    pub fn row(&self, m: usize) -> &[Complex64] {
        &self.data[m * self.p..(m + 1) * self.p]
    }

    pub fn max_off_origin(&self) -> AmbiguityMax {
        let mut best = AmbiguityMax { max_abs: f64::NEG_INFINITY, argmax: (0, 0) };
        for m in 0..self.p {
            for n in 0..self.p {
                if (m, n) == (0, 0) {
                    continue;
                }
                let a = self.get(m, n).norm();
                if a > best.max_abs {
                    best = AmbiguityMax { max_abs: a, argmax: (m, n) };
                }
            }
        }
        best
    }

    /// CSV with header `m,n,re,im,abs`, row-major, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "m,n,re,im,abs")?;
        for m in 0..self.p {
            for n in 0..self.p {
                let z = self.get(m, n);
                writeln!(
                    w,
                    "{m},{n},{},{},{}",
                    fmt_exact(z.re),
                    fmt_exact(z.im),
                    fmt_exact(z.norm())
                )?;
            }
        }
        Ok(())
    }
}

pub fn ambiguity_table(u: &UnimodularSequence) -> Result<AmbiguityTable> {
    ambiguity_table_with_cap(u, DEFAULT_TABLE_CAP)
}

pub fn ambiguity_table_with_cap(u: &UnimodularSequence, cap: u64) -> Result<AmbiguityTable> {
    let p = u.len();
    if p as u64 > cap {
        return Err(Error::TableTooLarge { p: p as u64, cap });
    }
    let engine = AmbiguityEngine::new(u.values());
    let mut data = vec![Complex64::default(); p * p];
    data.par_chunks_mut(p).enumerate().for_each_init(
        || engine.workspace(),
        |ws, (m, row)| engine.row_into(m, row, ws),
    );
    Ok(AmbiguityTable { p, data })
}
