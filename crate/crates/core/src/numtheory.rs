//! Exact arithmetic in Z/pZ for odd primes p.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Largest prime for which a [`PrimeContext`] will materialize its
/// Legendre table.
pub const MAX_TABLE_PRIME: u64 = 1 << 28;

/// Witnesses making Miller-Rabin deterministic below 2^64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square-and-multiply with 128-bit intermediates.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, p)`.
#[inline]
pub fn reduce(k: i64, p: u64) -> u64 {
    k.rem_euclid(p as i64) as u64
}

/// Deterministic primality test, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

/// Legendre symbol by Euler's criterion.
pub fn legendre(k: i64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    Ok(euler_criterion(reduce(k, p), p))
}

fn euler_criterion(k: u64, p: u64) -> i8 {
    if k == 0 {
        return 0;
    }
    match mod_pow(k, (p - 1) / 2, p) {
        1 => 1,
        r if r == p - 1 => -1,
        r => unreachable!("Euler's criterion gave {r} mod {p}"),
    }
}

/// Multiplicative inverse in `[1, p)` via Fermat's little theorem.
pub fn mod_inverse(x: i64, p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let x = reduce(x, p);
    if x == 0 {
        return Err(Error::DivisionByZero { x: x as i64, p });
    }
    Ok(mod_pow(x, p - 2, p))
}

/// Sorted nonzero quadratic residues mod `p`, by squaring every unit.
pub fn quadratic_residues(p: u64) -> Result<Vec<u64>> {
    check_odd_prime(p)?;
    let mut squares: Vec<u64> = (1..=(p - 1) / 2).map(|x| mul_mod(x, x, p)).collect();
    squares.sort_unstable();
    Ok(squares)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ResidueClass {
    #[serde(rename = "1mod4")]
    OneMod4,
    #[serde(rename = "3mod4")]
    ThreeMod4,
}

impl ResidueClass {
    pub fn of(p: u64) -> Self {
        if p % 4 == 1 {
            ResidueClass::OneMod4
        } else {
            ResidueClass::ThreeMod4
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ResidueClass::OneMod4 => "1mod4",
            ResidueClass::ThreeMod4 => "3mod4",
        }
    }
}

impl std::fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A validated odd prime together with its Legendre table.
///
/// Immutable after construction; share freely between threads.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    class: ResidueClass,
    legendre: Vec<i8>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if p > MAX_TABLE_PRIME {
            return Err(Error::PrimeTooLarge { p, limit: MAX_TABLE_PRIME });
        }
        // Squaring the units marks the residues in O(p) instead of p
        // modular exponentiations.
        let mut legendre = vec![-1i8; p as usize];
        legendre[0] = 0;
        for x in 1..=(p - 1) / 2 {
            legendre[mul_mod(x, x, p) as usize] = 1;
        }
        Ok(Self { p, class: ResidueClass::of(p), legendre })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.p as usize
    }

    /// Always false; present for symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn residue_class(&self) -> ResidueClass {
        self.class
    }

    pub fn legendre_table(&self) -> &[i8] {
        &self.legendre
    }

    /// χ(k) for any integer k.
    #[inline]
    pub fn chi(&self, k: i64) -> i8 {
        self.legendre[reduce(k, self.p) as usize]
    }

    /// χ(k) for an already reduced index.
    #[inline]
    pub fn chi_at(&self, k: usize) -> i8 {
        self.legendre[k]
    }

    #[inline]
    pub fn reduce(&self, k: i64) -> u64 {
        reduce(k, self.p)
    }

    pub fn inverse(&self, x: i64) -> Result<u64> {
        let r = self.reduce(x);
        if r == 0 {
            return Err(Error::DivisionByZero { x, p: self.p });
        }
        Ok(mod_pow(r, self.p - 2, self.p))
    }

    /// Table of inverses indexed by residue; entry 0 is unused and set to 0.
    pub fn inverse_table(&self) -> Vec<u64> {
        let p = self.p;
        let mut inv = vec![0u64; p as usize];
        if p > 1 {
            inv[1] = 1;
        }
        // inv[i] = -(p / i) * inv[p mod i]
        for i in 2..p {
            let q = p / i;
            let r = (p % i) as usize;
            inv[i as usize] = mul_mod(p - q, inv[r], p);
        }
        inv
    }

    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.p).filter(move |&k| self.legendre[k as usize] == 1)
    }

    pub fn nonresidues(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.p).filter(move |&k| self.legendre[k as usize] == -1)
    }
}

/// All primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < lo {
        return Vec::new();
    }
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

impl PartialEq for PrimeContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeContext {}

impl PartialOrd for PrimeContext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeContext {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p.cmp(&other.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primality_small_values() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(1259));
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn primality_large_values() {
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(u64::MAX));
        // strong pseudoprime to bases 2..=37 would be > 3.3e24; check known
        // Carmichael numbers and a semiprime of two 32-bit primes instead.
        assert!(!is_prime(561));
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(4_294_967_291 * 4_294_967_279));
        assert!(is_prime(4_294_967_291));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(0, 7).unwrap(), 0);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(3, 7).unwrap(), -1);
        assert_eq!(legendre(-1, 7).unwrap(), -1);
        assert_eq!(legendre(-1, 13).unwrap(), 1);
        assert!(matches!(legendre(3, 2), Err(Error::InvalidPrime(2))));
        assert!(matches!(legendre(3, 9), Err(Error::InvalidPrime(9))));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 7).unwrap(), 1);
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(4, 5).unwrap(), 4);
        assert_eq!(mod_inverse(-2, 7).unwrap(), 3);
        assert!(matches!(mod_inverse(14, 7), Err(Error::DivisionByZero { .. })));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(quadratic_residues(5).unwrap(), vec![1, 4]);
        assert_eq!(quadratic_residues(7).unwrap(), vec![1, 2, 4]);
        assert_eq!(quadratic_residues(13).unwrap(), vec![1, 3, 4, 9, 10, 12]);
    }

    #[test]
    fn context_rejects_two_and_composites() {
        assert!(matches!(PrimeContext::new(2), Err(Error::InvalidPrime(2))));
        assert!(matches!(PrimeContext::new(15), Err(Error::InvalidPrime(15))));
        assert!(matches!(PrimeContext::new(1), Err(Error::InvalidPrime(1))));
    }

    #[test]
    fn euler_criterion_matches_square_enumeration() {
        for p in primes_in(3, 10_000) {
            let ctx = PrimeContext::new(p).unwrap();
            let mut squares = vec![false; p as usize];
            for r in quadratic_residues(p).unwrap() {
                squares[r as usize] = true;
            }
            for k in 0..p {
                let expected = if k == 0 { 0 } else if squares[k as usize] { 1 } else { -1 };
                assert_eq!(euler_criterion(k, p), expected, "k = {k}, p = {p}");
                assert_eq!(ctx.chi_at(k as usize), expected);
            }
        }
    }

    #[test]
    fn legendre_is_multiplicative() {
        for p in primes_in(3, 101) {
            let ctx = PrimeContext::new(p).unwrap();
            for j in 1..p as i64 {
                for k in 1..p as i64 {
                    assert_eq!(ctx.chi(j * k), ctx.chi(j) * ctx.chi(k));
                }
            }
        }
    }

    #[test]
    fn legendre_table_is_balanced() {
        for p in primes_in(3, 3000) {
            let ctx = PrimeContext::new(p).unwrap();
            let table = ctx.legendre_table();
            assert_eq!(table[0], 0);
            assert_eq!(table.iter().map(|&c| c as i64).sum::<i64>(), 0);
            let plus = table.iter().filter(|&&c| c == 1).count() as u64;
            assert_eq!(plus, (p - 1) / 2);
            assert_eq!(ctx.residues().count() as u64, (p - 1) / 2);
            assert_eq!(ctx.nonresidues().count() as u64, (p - 1) / 2);
        }
    }

    #[test]
    fn inverse_table_agrees_with_fermat() {
        for p in primes_in(3, 500) {
            let ctx = PrimeContext::new(p).unwrap();
            let inv = ctx.inverse_table();
            for x in 1..p {
                assert_eq!(inv[x as usize], ctx.inverse(x as i64).unwrap());
                assert_eq!(x * inv[x as usize] % p, 1);
            }
        }
    }
}
