//! Exponential sums over Z/pZ: Kloosterman and Gauss sums, the
//! Salié/Jacobsthal identities, and the Legendre-symbol ambiguity function.
//!
//! Everything is a direct sum over a precomputed table of p-th roots of
//! unity indexed by an exponent reduced mod p, so phases are exact integers
//! until the final table lookup.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::{PrimeContext, ResidueClass};
use crate::transform::KahanSum;

/// Bound on the imaginary part of a Kloosterman sum before we call it real.
pub const REALNESS_TOLERANCE: f64 = 1e-10;

/// A Kloosterman sum `K[a,b;p]` with its (reduced) arguments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KloostermanValue {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub value: f64,
}

impl KloostermanValue {
    /// `2√p`, the Weil bound for `a, b ≢ 0`.
    pub fn weil_bound(&self) -> f64 {
        2.0 * (self.p as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharAmbiguityMethod {
    /// `(1/p) Σ_k χ[k+m] χ[k] ζ^{-kn}`.
    Direct,
    /// `(ζ^{bn}/p) K[1,a;p]` with `a = (mn)²/16`, `b = m/2`.
    Kloosterman,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeilAudit {
    pub p: u64,
    /// `max_a |K[1,a;p]| / (2√p)` over units a.
    pub max_ratio: f64,
    pub worst_a: u64,
}

impl WeilAudit {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

/// Per-prime tables shared by all the sums.
#[derive(Debug, Clone)]
pub struct ExpSums {
    ctx: PrimeContext,
    /// `ζ_p^j = exp(2πi j/p)`.
    roots: Vec<Complex64>,
    inverses: Vec<u64>,
}

impl ExpSums {
    pub fn new(p: u64) -> Result<Self> {
        Ok(Self::with_context(PrimeContext::new(p)?))
    }

    pub fn with_context(ctx: PrimeContext) -> Self {
        let p = ctx.p();
        let roots = (0..p)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / p as f64))
            .collect();
        let inverses = ctx.inverse_table();
        Self { ctx, roots, inverses }
    }

    pub fn context(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// `ζ_p^e` for any integer exponent.
    #[inline]
    pub fn zeta(&self, e: i64) -> Complex64 {
        self.roots[self.ctx.reduce(e) as usize]
    }

    #[inline]
    fn zeta_at(&self, e: u64) -> Complex64 {
        self.roots[e as usize]
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p() as u128) as u64
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p() { s - self.p() } else { s }
    }

    /// The complex value of `K[a,b;p]` before the realness check.
    pub fn kloosterman_complex(&self, a: i64, b: i64) -> Complex64 {
        let (a, b) = (self.ctx.reduce(a), self.ctx.reduce(b));
        let mut acc = KahanSum::default();
        for x in 1..self.p() {
            let e = self.add(self.mul(a, x), self.mul(b, self.inverses[x as usize]));
            acc.add(self.zeta_at(e));
        }
        acc.total()
    }

    pub fn kloosterman(&self, a: i64, b: i64) -> Result<KloostermanValue> {
        let z = self.kloosterman_complex(a, b);
        if z.im.abs() >= REALNESS_TOLERANCE {
            return Err(Error::Invariant(format!(
                "K[{a},{b};{}] has imaginary part {}",
                self.p(),
                z.im
            )));
        }
        Ok(KloostermanValue {
            a: self.ctx.reduce(a),
            b: self.ctx.reduce(b),
            p: self.p(),
            value: z.re,
        })
    }

    /// `τ[a;p] = Σ_k χ[k] ζ^{ak}`.
    pub fn gauss_sum(&self, a: i64) -> Complex64 {
        let a = self.ctx.reduce(a);
        let mut acc = KahanSum::default();
        for k in 1..self.p() {
            let c = self.ctx.chi_at(k as usize) as f64;
            acc.add(self.zeta_at(self.mul(a, k)) * c);
        }
        acc.total()
    }

    /// `ε χ[a] √p` with ε = 1 for p ≡ 1 mod 4 and ε = i for p ≡ 3 mod 4.
    pub fn gauss_closed_form(&self, a: i64) -> Complex64 {
        let mag = self.ctx.chi(a) as f64 * (self.p() as f64).sqrt();
        match self.ctx.residue_class() {
            ResidueClass::OneMod4 => Complex64::new(mag, 0.0),
            ResidueClass::ThreeMod4 => Complex64::new(0.0, mag),
        }
    }

    fn require_unit(&self, a: i64, what: &str) -> Result<u64> {
        let r = self.ctx.reduce(a);
        if r == 0 {
            return Err(Error::InvalidArgument(format!(
                "{what} = {a} must not be divisible by {}",
                self.p()
            )));
        }
        Ok(r)
    }

    /// `Σ_x χ[x² − 4a] ζ^x`, which equals `K[1,a;p]` for `p ∤ a`.
    pub fn salie_form(&self, a: i64) -> Result<f64> {
        let a = self.require_unit(a, "a")?;
        let four_a = self.mul(4, a);
        let p = self.p();
        let mut acc = KahanSum::default();
        for x in 0..p {
            let d = (self.mul(x, x) + p - four_a) % p;
            acc.add(self.zeta_at(x) * self.ctx.chi_at(d as usize) as f64);
        }
        let z = acc.total();
        if z.im.abs() >= REALNESS_TOLERANCE {
            return Err(Error::Invariant(format!(
                "Salié sum for a = {a}, p = {p} has imaginary part {}",
                z.im
            )));
        }
        Ok(z.re)
    }

    /// Number of units x with `x + a·x⁻¹ ≡ t`, by enumeration.
    pub fn jacobsthal_count(&self, t: i64, a: i64) -> Result<u64> {
        let a = self.require_unit(a, "a")?;
        let t = self.ctx.reduce(t);
        Ok((1..self.p())
            .filter(|&x| self.add(x, self.mul(a, self.inverses[x as usize])) == t)
            .count() as u64)
    }

    /// `A_p(χ)[m,n]` for `m, n ≢ 0`.
    pub fn char_ambiguity(&self, m: i64, n: i64, method: CharAmbiguityMethod) -> Result<Complex64> {
        let (mr, nr) = (self.ctx.reduce(m), self.ctx.reduce(n));
        if mr == 0 || nr == 0 {
            return Err(Error::OutOfDomain { m, n, p: self.p() });
        }
        let p = self.p();
        let pf = p as f64;
        Ok(match method {
            CharAmbiguityMethod::Direct => {
                let mut acc = KahanSum::default();
                let neg_n = p - nr;
                for k in 0..p {
                    let c = self.ctx.chi_at(self.add(k, mr) as usize) * self.ctx.chi_at(k as usize);
                    if c != 0 {
                        acc.add(self.zeta_at(self.mul(k, neg_n)) * c as f64);
                    }
                }
                acc.total() / pf
            }
            CharAmbiguityMethod::Kloosterman => {
                let mn = self.mul(mr, nr);
                let a = self.mul(self.mul(mn, mn), self.inverses[16 % p as usize]);
                let b = self.mul(mr, self.inverses[2]);
                let k = self.kloosterman(1, a as i64)?;
                self.zeta_at(self.mul(b, nr)) * (k.value / pf)
            }
        })
    }

    pub fn weil_audit(&self) -> Result<WeilAudit> {
        let p = self.p();
        let bound = 2.0 * (p as f64).sqrt();
        let ratios: Vec<(u64, f64)> = (1..p)
            .into_par_iter()
            .map(|a| Ok((a, self.kloosterman(1, a as i64)?.value.abs() / bound)))
            .collect::<Result<_>>()?;
        let (worst_a, max_ratio) = ratios
            .into_iter()
            .fold((0, f64::NEG_INFINITY), |best, (a, r)| if r > best.1 { (a, r) } else { best });
        Ok(WeilAudit { p, max_ratio, worst_a })
    }
}

// Free-function forms for one-off evaluations.

pub fn kloosterman(a: i64, b: i64, p: u64) -> Result<KloostermanValue> {
    ExpSums::new(p)?.kloosterman(a, b)
}

pub fn gauss_sum(a: i64, p: u64) -> Result<Complex64> {
    Ok(ExpSums::new(p)?.gauss_sum(a))
}

pub fn salie_form(a: i64, p: u64) -> Result<f64> {
    ExpSums::new(p)?.salie_form(a)
}

pub fn jacobsthal_count(t: i64, a: i64, p: u64) -> Result<u64> {
    ExpSums::new(p)?.jacobsthal_count(t, a)
}

pub fn char_ambiguity(p: u64, m: i64, n: i64, method: CharAmbiguityMethod) -> Result<Complex64> {
    ExpSums::new(p)?.char_ambiguity(m, n, method)
}

pub fn weil_audit(p: u64) -> Result<WeilAudit> {
    ExpSums::new(p)?.weil_audit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{legendre, primes_in};

    #[test]
    fn kloosterman_examples() {
        assert!((kloosterman(0, 0, 5).unwrap().value - 4.0).abs() < 1e-12);
        assert!((kloosterman(1, 0, 7).unwrap().value + 1.0).abs() < 1e-12);
        let golden = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((kloosterman(1, 1, 5).unwrap().value - golden).abs() < 1e-12);
        assert!(matches!(kloosterman(1, 1, 9), Err(Error::InvalidPrime(9))));
    }

    #[test]
    fn kloosterman_is_real_and_symmetric() {
        for p in primes_in(3, 101) {
            let s = ExpSums::new(p).unwrap();
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    let z = s.kloosterman_complex(a, b);
                    assert!(z.im.abs() < 1e-10);
                    assert!((z - s.kloosterman_complex(-a, -b)).norm() < 1e-10);
                    // x ↦ x⁻¹ swaps the arguments.
                    assert!((z - s.kloosterman_complex(b, a)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn gauss_examples() {
        let t = gauss_sum(1, 5).unwrap();
        assert!((t - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-12);
        let t = gauss_sum(1, 3).unwrap();
        assert!((t - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
        let t = gauss_sum(2, 5).unwrap();
        assert!((t - Complex64::new(-(5f64.sqrt()), 0.0)).norm() < 1e-12);
        assert!(gauss_sum(0, 7).unwrap().norm() < 1e-12);
    }

    #[test]
    fn salie_examples() {
        let s7 = salie_form(1, 7).unwrap();
        let expected = 2.0 * (4.0 * PI / 7.0).cos() + 4.0 * (2.0 * PI / 7.0).cos();
        assert!((s7 - expected).abs() < 1e-9);
        assert!((s7 - 2.048917).abs() < 1e-6);
        assert!((s7 - kloosterman(1, 1, 7).unwrap().value).abs() < 1e-9);
        let s5 = salie_form(1, 5).unwrap();
        assert!((s5 - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!((salie_form(3, 11).unwrap() - kloosterman(1, 3, 11).unwrap().value).abs() < 1e-9);
        assert!(matches!(salie_form(7, 7), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn jacobsthal_examples() {
        assert_eq!(jacobsthal_count(2, 1, 7).unwrap(), 1);
        assert_eq!(jacobsthal_count(0, 1, 7).unwrap(), 0);
        assert_eq!(jacobsthal_count(3, 1, 7).unwrap(), 0);
        assert!(matches!(jacobsthal_count(1, 14, 7), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn jacobsthal_count_matches_discriminant_character() {
        for p in primes_in(3, 31) {
            let s = ExpSums::new(p).unwrap();
            for a in 1..p as i64 {
                for t in 0..p as i64 {
                    let expected = 1 + legendre(t * t - 4 * a, p).unwrap() as i64;
                    assert_eq!(s.jacobsthal_count(t, a).unwrap() as i64, expected);
                }
            }
        }
    }

    #[test]
    fn char_ambiguity_methods_agree() {
        for p in primes_in(3, 61) {
            let s = ExpSums::new(p).unwrap();
            for m in 1..p as i64 {
                for n in 1..p as i64 {
                    let d = s.char_ambiguity(m, n, CharAmbiguityMethod::Direct).unwrap();
                    let k = s.char_ambiguity(m, n, CharAmbiguityMethod::Kloosterman).unwrap();
                    assert!((d - k).norm() < 1e-10, "p={p} m={m} n={n}");
                }
            }
        }
        assert!(matches!(
            char_ambiguity(7, 0, 3, CharAmbiguityMethod::Direct),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            char_ambiguity(7, 2, 7, CharAmbiguityMethod::Kloosterman),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn weil_audit_examples() {
        let a5 = weil_audit(5).unwrap();
        assert!(a5.max_ratio <= 1.0);
        assert!((1..5).contains(&a5.worst_a));
        let k = kloosterman(1, 1, 7).unwrap();
        assert!((k.value.abs() - 2.0489).abs() < 1e-4);
        assert!(k.value.abs() <= k.weil_bound());
        assert!(weil_audit(101).unwrap().max_ratio <= 1.0);
    }

    #[test]
    fn weil_audit_json_shape() {
        let json = weil_audit(7).unwrap().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["p"], 7);
        assert!(v["max_ratio"].as_f64().unwrap() <= 1.0);
        assert!(v["worst_a"].as_u64().unwrap() >= 1);
    }
}
