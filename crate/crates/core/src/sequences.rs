//! Unimodular sequences of odd prime length: Björck and chirp constructions
//! plus CAZAC and bi-unimodularity checks.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::fmt_exact;
use crate::numtheory::{is_prime, PrimeContext, ResidueClass};
use crate::transform::{dft, KahanSum};

/// Tolerance on `|u[k]| − 1` accepted by [`UnimodularSequence::new`].
pub const CA_TOLERANCE: f64 = 1e-12;

/// Default tolerance for CAZAC and bi-unimodularity verification.
pub const DEFAULT_VERIFY_TOLERANCE: f64 = 1e-9;

/// A length-p vector of unit-modulus samples with a provenance label.
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularSequence {
    values: Vec<Complex64>,
    label: String,
}

impl UnimodularSequence {
    /// Validates odd prime length and constant amplitude.
    pub fn new(values: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        let len = values.len() as u64;
        if len == 2 || !is_prime(len) {
            return Err(Error::InvalidPrime(len));
        }
        if let Some((index, z)) = values
            .iter()
            .enumerate()
            .find(|(_, z)| !((z.norm() - 1.0).abs() <= CA_TOLERANCE))
        {
            return Err(Error::NotUnimodular { index, modulus: z.norm() });
        }
        Ok(Self { values, label: label.into() })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn p(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// One `re,im` line per sample, 17 significant digits.
    pub fn write_samples<W: Write>(&self, mut w: W) -> Result<()> {
        for z in &self.values {
            writeln!(w, "{},{}", fmt_exact(z.re), fmt_exact(z.im))?;
        }
        Ok(())
    }

    /// Inverse of [`write_samples`](Self::write_samples). Blank lines are
    /// skipped.
    pub fn read_samples<R: BufRead>(r: R, label: impl Into<String>) -> Result<Self> {
        let mut values = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let (re, im) = line.split_once(',').ok_or_else(|| parse_err("expected \"re,im\""))?;
            let re: f64 = re.trim().parse().map_err(|_| parse_err("bad real part"))?;
            let im: f64 = im.trim().parse().map_err(|_| parse_err("bad imaginary part"))?;
            values.push(Complex64::new(re, im));
        }
        Self::new(values, label)
    }
}

/// The phase constants of the Björck construction for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BjorckAngles {
    /// `arccos(1/(1+√p))`, used when p ≡ 1 mod 4.
    pub theta: f64,
    /// `arccos((1−p)/(1+p))`, used when p ≡ 3 mod 4.
    pub phi: f64,
    pub eta: Complex64,
    pub xi: Complex64,
}

impl BjorckAngles {
    pub fn new(p: u64) -> Self {
        let pf = p as f64;
        let theta = (1.0 / (1.0 + pf.sqrt())).acos();
        let phi = ((1.0 - pf) / (1.0 + pf)).acos();
        Self {
            theta,
            phi,
            eta: Complex64::from_polar(1.0, theta),
            xi: Complex64::from_polar(1.0, phi),
        }
    }

    /// `η` written algebraically: `1/(√p+1) + i·√(p+2√p)/(√p+1)`.
    pub fn eta_algebraic(p: u64) -> Complex64 {
        let s = (p as f64).sqrt();
        Complex64::new(1.0 / (s + 1.0), (p as f64 + 2.0 * s).sqrt() / (s + 1.0))
    }

    /// `ξ` written algebraically: `(1−p)/(1+p) + i·2√p/(1+p)`.
    pub fn xi_algebraic(p: u64) -> Complex64 {
        let pf = p as f64;
        Complex64::new((1.0 - pf) / (1.0 + pf), 2.0 * pf.sqrt() / (1.0 + pf))
    }
}

/// Björck sequence of prime length `p`.
///
/// For p ≡ 1 mod 4, `u[k] = exp(iθ·χ(k))`, so `u[0] = 1`, residues map to
/// η and nonresidues to conj(η). For p ≡ 3 mod 4, nonresidues map to ξ and
/// everything else to 1.
pub fn bjorck(p: u64) -> Result<UnimodularSequence> {
    let ctx = PrimeContext::new(p)?;
    Ok(bjorck_with(&ctx))
}

pub fn bjorck_with(ctx: &PrimeContext) -> UnimodularSequence {
    let angles = BjorckAngles::new(ctx.p());
    let one = Complex64::new(1.0, 0.0);
    let values = match ctx.residue_class() {
        ResidueClass::OneMod4 => {
            let (pos, neg) = (angles.eta, angles.eta.conj());
            ctx.legendre_table()
                .iter()
                .map(|&c| match c {
                    1 => pos,
                    -1 => neg,
                    _ => one,
                })
                .collect()
        }
        ResidueClass::ThreeMod4 => ctx
            .legendre_table()
            .iter()
            .map(|&c| if c == -1 { angles.xi } else { one })
            .collect(),
    };
    UnimodularSequence { values, label: "bjorck".into() }
}

/// Gaussian (chirp) sequence `u[k] = ζ_p^{rk² + sk}`.
pub fn chirp(p: u64, r: i64, s: i64) -> Result<UnimodularSequence> {
    let ctx = PrimeContext::new(p)?;
    let r_mod = ctx.reduce(r);
    if r_mod == 0 {
        return Err(Error::DegenerateChirp { p, r });
    }
    let s_mod = ctx.reduce(s);
    let pp = p as u128;
    let values = (0..p as u128)
        .map(|k| {
            let e = (r_mod as u128 * (k * k % pp) + s_mod as u128 * k) % pp;
            Complex64::from_polar(1.0, 2.0 * PI * e as f64 / p as f64)
        })
        .collect();
    Ok(UnimodularSequence { values, label: format!("chirp({r},{s})") })
}

/// Periodic autocorrelation `C(u)[m] = (1/p) Σ_k u[m+k] conj(u[k])`.
pub fn autocorrelation(u: &UnimodularSequence) -> Vec<Complex64> {
    let v = u.values();
    let p = v.len();
    (0..p)
        .map(|m| {
            let mut acc = KahanSum::default();
            for (k, &base) in v.iter().enumerate() {
                let j = if m + k >= p { m + k - p } else { m + k };
                acc.add(v[j] * base.conj());
            }
            acc.total() / p as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CazacReport {
    pub ca_ok: bool,
    pub zac_ok: bool,
    /// Largest of `||u[k]| − 1|` and `|C(u)[m]|` over m ≠ 0.
    pub max_violation: f64,
}

pub fn verify_cazac(u: &UnimodularSequence, tol: f64) -> CazacReport {
    let ca = u.values().iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let zac = autocorrelation(u)[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    CazacReport { ca_ok: ca <= tol, zac_ok: zac <= tol, max_violation: ca.max(zac) }
}

/// True iff every DFT coefficient has modulus √p within `tol`.
pub fn verify_biunimodular(u: &UnimodularSequence, tol: f64) -> bool {
    let target = (u.len() as f64).sqrt();
    dft(u.values()).iter().all(|z| (z.norm() - target).abs() <= tol)
}
