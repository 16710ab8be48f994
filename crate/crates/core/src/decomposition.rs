//! Splitting the Björck ambiguity function into a Legendre-symbol part and
//! two small error terms, and the bounds that follow from it.
//!
//! Any sequence that depends only on χ(k) can be written as
//! `U[k] = r, s, t` on residues, nonresidues and 0. With `R = (r+s)/2`,
//! `S = (r−s)/2` and `T = t − R`, for m, n ≠ 0
//!
//! ```text
//! A(U)[m,n] = |S|² A(χ)[m,n] + (E1[m,n] + E2[m,n]) / p
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expsums::{CharAmbiguityMethod, ExpSums};
use crate::numtheory::{PrimeContext, ResidueClass};
use crate::sequences::{bjorck_with, UnimodularSequence};

/// Slack allowed on `|z| = 1` in [`realbound`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixCoefficients {
    /// Value on quadratic residues.
    pub r: Complex64,
    /// Value on nonresidues.
    pub s: Complex64,
    /// Value at 0.
    pub t: Complex64,
    /// `R = (r + s)/2`.
    pub mean: Complex64,
    /// `S = (r − s)/2`.
    pub half_diff: Complex64,
    /// `T = t − R`.
    pub center: Complex64,
}

impl MixCoefficients {
    pub fn from_values(r: Complex64, s: Complex64, t: Complex64) -> Self {
        let mean = (r + s) / 2.0;
        Self { r, s, t, mean, half_diff: (r - s) / 2.0, center: t - mean }
    }

    /// Reads r, s, t off a sequence already known to be a function of χ.
    pub fn from_sequence(ctx: &PrimeContext, u: &UnimodularSequence) -> Self {
        let v = u.values();
        let residue = ctx.residues().next().expect("1 is always a residue") as usize;
        let nonresidue = ctx.nonresidues().next().expect("odd primes have nonresidues") as usize;
        Self::from_values(v[residue], v[nonresidue], v[0])
    }
}

/// r, s, t of the Björck sequence, read from the constructed samples.
pub fn mix_coefficients(p: u64) -> Result<MixCoefficients> {
    let ctx = PrimeContext::new(p)?;
    Ok(MixCoefficients::from_sequence(&ctx, &bjorck_with(&ctx)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTerms {
    pub e1: Complex64,
    pub e2: Complex64,
    pub m: i64,
    pub n: i64,
}

/// Per-prime state for evaluating the decomposition at many (m, n).
#[derive(Debug, Clone)]
pub struct Decomposition {
    sums: ExpSums,
    coeffs: MixCoefficients,
}

impl Decomposition {
    /// Decomposition of the Björck sequence for `p`.
    pub fn bjorck(p: u64) -> Result<Self> {
        let ctx = PrimeContext::new(p)?;
        let coeffs = MixCoefficients::from_sequence(&ctx, &bjorck_with(&ctx));
        Ok(Self { sums: ExpSums::with_context(ctx), coeffs })
    }

    pub fn with_coefficients(p: u64, coeffs: MixCoefficients) -> Result<Self> {
        Ok(Self { sums: ExpSums::new(p)?, coeffs })
    }

    pub fn coefficients(&self) -> &MixCoefficients {
        &self.coeffs
    }

    pub fn sums(&self) -> &ExpSums {
        &self.sums
    }

    fn check_domain(&self, m: i64, n: i64) -> Result<()> {
        let ctx = self.sums.context();
        if ctx.reduce(m) == 0 || ctx.reduce(n) == 0 {
            return Err(Error::OutOfDomain { m, n, p: ctx.p() });
        }
        Ok(())
    }

    pub fn error_terms(&self, m: i64, n: i64) -> Result<ErrorTerms> {
        self.check_domain(m, n)?;
        let ctx = self.sums.context();
        let MixCoefficients { mean: r, half_diff: s, center: t, .. } = self.coeffs;
        let zeta = self.sums.zeta(m * n);
        let chi_m = ctx.chi(m) as f64;
        let chi_n = ctx.chi(n) as f64;
        let sqrt_p = (ctx.p() as f64).sqrt();

        let e1 = r * t.conj() + r.conj() * t * zeta;
        let rs = r * s.conj() + r.conj() * s * zeta;
        let e2 = match ctx.residue_class() {
            ResidueClass::OneMod4 => {
                (s * t.conj() + s.conj() * t * zeta) * chi_m + rs * (chi_n * sqrt_p)
            }
            ResidueClass::ThreeMod4 => {
                (s * t.conj() - s.conj() * t * zeta) * chi_m
                    - rs * Complex64::new(0.0, chi_n * sqrt_p)
            }
        };
        Ok(ErrorTerms { e1, e2, m, n })
    }

    /// `|S|² A(χ)[m,n] + (E1 + E2)/p`, using the direct character sum.
    pub fn reconstruct(&self, m: i64, n: i64) -> Result<Complex64> {
        self.reconstruct_with(m, n, CharAmbiguityMethod::Direct)
    }

    pub fn reconstruct_with(&self, m: i64, n: i64, method: CharAmbiguityMethod) -> Result<Complex64> {
        let terms = self.error_terms(m, n)?;
        let char_amb = self.sums.char_ambiguity(m, n, method)?;
        let p = self.sums.p() as f64;
        Ok(char_amb * self.coeffs.half_diff.norm_sqr() + (terms.e1 + terms.e2) / p)
    }
}

pub fn error_terms(coeffs: &MixCoefficients, p: u64, m: i64, n: i64) -> Result<ErrorTerms> {
    Decomposition::with_coefficients(p, *coeffs)?.error_terms(m, n)
}

pub fn reconstruct_ambiguity(p: u64, m: i64, n: i64) -> Result<Complex64> {
    Decomposition::bjorck(p)?.reconstruct(m, n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealBound {
    /// `|zX + (1 − z²)Y|`
    pub lhs: f64,
    /// `√(X² + 4Y²)`
    pub rhs: f64,
}

impl RealBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-12
    }
}

/// Evaluates both sides of `|zX + (1 − z²)Y| ≤ √(X² + 4Y²)` for `|z| = 1`.
pub fn realbound(z: Complex64, x: f64, y: f64) -> Result<RealBound> {
    if (z.norm() - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::InvalidArgument(format!("|z| = {} is not 1", z.norm())));
    }
    let one = Complex64::new(1.0, 0.0);
    let lhs = (z * x + (one - z * z) * y).norm();
    let rhs = (x * x + 4.0 * y * y).sqrt();
    Ok(RealBound { lhs, rhs })
}

/// `2/√p + 4/p` for p ≡ 1 mod 4 and `2/√p + 4/p^{3/2}` for p ≡ 3 mod 4.
pub fn mbound(p: u64) -> Result<f64> {
    let ctx = PrimeContext::new(p)?;
    Ok(mbound_for(ctx.p(), ctx.residue_class()))
}

pub(crate) fn mbound_for(p: u64, class: ResidueClass) -> f64 {
    let pf = p as f64;
    let base = 2.0 / pf.sqrt();
    match class {
        ResidueClass::OneMod4 => base + 4.0 / pf,
        ResidueClass::ThreeMod4 => base + 4.0 / pf.powf(1.5),
    }
}

/// `2/√p + 4/p`, the class-independent envelope.
pub fn envelope(p: u64) -> f64 {
    let pf = p as f64;
    2.0 / pf.sqrt() + 4.0 / pf
}

/// `2(p+3)/(√p(p+1))`, the intermediate bound reached for p ≡ 3 mod 4
/// before rounding up to `2/√p + 4/p^{3/2}`.
pub fn intermediate_bound_three_mod_four(p: u64) -> f64 {
    let pf = p as f64;
    2.0 * (pf + 3.0) / (pf.sqrt() * (pf + 1.0))
}

/// `1/√(p−1)`, below which no CAZAC's off-origin maximum can fall.
pub fn cazac_lower_bound(p: u64) -> f64 {
    1.0 / ((p - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::primes_in;
    use crate::transform::AmbiguityEngine;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coefficients_one_mod_four() {
        for p in [5u64, 13, 17, 101, 1009] {
            let k = mix_coefficients(p).unwrap();
            let s = (p as f64).sqrt();
            assert!((k.mean - c(1.0 / (1.0 + s), 0.0)).norm() < 1e-12);
            assert!((k.half_diff - c(0.0, (2.0 * s + p as f64).sqrt() / (1.0 + s))).norm() < 1e-12);
            assert!((k.center - c(s / (1.0 + s), 0.0)).norm() < 1e-12);
            assert!((k.mean + k.center - k.t).norm() < 1e-15);
            assert_eq!(k.t, c(1.0, 0.0));
        }
        let k13 = mix_coefficients(13).unwrap();
        assert!((k13.mean.re - 0.2171293).abs() < 1e-7);
    }

    #[test]
    fn coefficients_three_mod_four() {
        for p in [3u64, 7, 11, 139, 1259] {
            let k = mix_coefficients(p).unwrap();
            let denom = c(1.0, -(p as f64).sqrt());
            let minus_i_sqrt = c(0.0, -(p as f64).sqrt());
            assert!((k.mean - c(1.0, 0.0) / denom).norm() < 1e-12);
            assert!((k.half_diff - minus_i_sqrt / denom).norm() < 1e-12);
            assert!((k.center - minus_i_sqrt / denom).norm() < 1e-12);
            let expect = p as f64 / (p as f64 + 1.0);
            assert!((k.half_diff.norm_sqr() - expect).abs() < 1e-12);
        }
        assert!((mix_coefficients(7).unwrap().half_diff.norm_sqr() - 7.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn e1_closed_forms() {
        let z13 = Complex64::from_polar(1.0, 2.0 * PI / 13.0);
        let s13 = 13f64.sqrt();
        let t = error_terms(&mix_coefficients(13).unwrap(), 13, 1, 1).unwrap();
        let expected = (c(1.0, 0.0) + z13) * s13 / (1.0 + s13).powi(2);
        assert!((t.e1 - expected).norm() < 1e-12);

        let z7 = Complex64::from_polar(1.0, 2.0 * PI / 7.0);
        let s7 = 7f64.sqrt();
        let t = error_terms(&mix_coefficients(7).unwrap(), 7, 1, 1).unwrap();
        let expected = c(0.0, s7) * (c(1.0, 0.0) - z7) / 8.0;
        assert!((t.e1 - expected).norm() < 1e-12);

        // With ζ-power 1 the p ≡ 1 E1 collapses to 2√p/(1+√p)².
        let k = mix_coefficients(13).unwrap();
        let e1 = k.mean * k.center.conj() + k.mean.conj() * k.center;
        assert!((e1 - c(2.0 * s13 / (1.0 + s13).powi(2), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn e2_closed_forms() {
        for p in [13u64, 29, 7, 19] {
            let d = Decomposition::bjorck(p).unwrap();
            let ctx = d.sums().context();
            let sp = (p as f64).sqrt();
            for m in 1..p as i64 {
                for n in [1i64, 2, 3] {
                    let e2 = d.error_terms(m, n).unwrap().e2;
                    let zeta = d.sums().zeta(m * n);
                    let one = c(1.0, 0.0);
                    let diff = (ctx.chi(m) - ctx.chi(n)) as f64;
                    let sum = (ctx.chi(m) + ctx.chi(n)) as f64;
                    let expected = if p % 4 == 1 {
                        c(0.0, 1.0) * (one - zeta) * diff * (2.0 * sp + p as f64).sqrt() * sp
                            / (1.0 + sp).powi(2)
                    } else {
                        (one - zeta) * sum * p as f64 / (p as f64 + 1.0)
                    };
                    assert!((e2 - expected).norm() < 1e-10, "p={p} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn reconstruction_matches_direct_ambiguity() {
        for p in [7u64, 13, 139] {
            let u = crate::sequences::bjorck(p).unwrap();
            let engine = AmbiguityEngine::new(u.values());
            let d = Decomposition::bjorck(p).unwrap();
            let ms: Vec<usize> = if p == 139 { vec![1] } else { (1..p as usize).collect() };
            for m in ms {
                let row = engine.row(m).unwrap();
                for n in 1..p as usize {
                    if p == 139 && n != 1 {
                        continue;
                    }
                    let rec = d.reconstruct(m as i64, n as i64).unwrap();
                    assert!((rec - row.values[n]).norm() < 1e-10, "p={p} m={m} n={n}");
                }
            }
        }
        assert!(matches!(reconstruct_ambiguity(13, 0, 1), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn realbound_examples() {
        let r = realbound(c(1.0, 0.0), 5.0, 9.0).unwrap();
        assert!((r.lhs - 5.0).abs() < 1e-12);
        assert!((r.rhs - 349f64.sqrt()).abs() < 1e-12);
        let r = realbound(c(0.0, 1.0), 3.0, 1.0).unwrap();
        assert!((r.lhs - 13f64.sqrt()).abs() < 1e-12);
        assert!((r.rhs - 13f64.sqrt()).abs() < 1e-12);
        assert!(r.holds());
        let r = realbound(Complex64::from_polar(1.0, PI / 3.0), 1.0, 1.0).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert!((r.rhs - 5f64.sqrt()).abs() < 1e-12);
        assert!(matches!(realbound(c(2.0, 0.0), 1.0, 1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn mbound_examples() {
        assert!((mbound(13).unwrap() - 0.862392).abs() < 1e-6);
        assert!((mbound(7).unwrap() - 0.971909).abs() < 1e-6);
        assert!((mbound(1009).unwrap() - 0.066928).abs() < 1e-6);
        assert!(matches!(mbound(2), Err(Error::InvalidPrime(2))));
    }

    #[test]
    fn intermediate_bound_sits_between() {
        for p in primes_in(3, 5000).into_iter().filter(|p| p % 4 == 3) {
            let mid = intermediate_bound_three_mod_four(p);
            assert!(mid > 2.0 / (p as f64).sqrt());
            assert!(mid <= mbound(p).unwrap());
        }
    }
}
