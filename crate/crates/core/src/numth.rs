//! Integer and modular arithmetic primitives.
//!
//! Everything here works on machine integers. Residues modulo a general
//! modulus use `u128` so that ECM can run on moduli just above 2^64; the
//! prime-field side of the crate (point counting, the census) stays well
//! below 2^32 and hits the single-word fast path in [`mul_mod`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Default sieve limit. p_10050 is 105_137, so this covers the census range
/// with room to spare.
pub const DEFAULT_SIEVE_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumthError {
    #[error("prime index {requested} exceeds sieve capacity ({available} primes up to {limit})")]
    CapacityExceeded {
        requested: usize,
        available: usize,
        limit: u64,
    },
    #[error("invalid modulus {0}: expected an odd prime")]
    InvalidModulus(u64),
    #[error("invalid prime index range {lo}..={hi}")]
    InvalidRange { lo: usize, hi: usize },
    #[error("smooth bound must be at least 2, got {0}")]
    InvalidBound(u64),
}

/// 1-based inclusive range of prime indices, p_1 = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeIndexRange {
    lo: usize,
    hi: usize,
}

impl PrimeIndexRange {
    pub fn new(lo: usize, hi: usize) -> Result<Self, NumthError> {
        if lo == 0 || lo > hi {
            return Err(NumthError::InvalidRange { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for PrimeIndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for PrimeIndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
        let lo = lo.trim().parse().map_err(|e| format!("bad index {lo:?}: {e}"))?;
        let hi = hi.trim().parse().map_err(|e| format!("bad index {hi:?}: {e}"))?;
        Self::new(lo, hi).map_err(|e| e.to_string())
    }
}

/// The `n` of "n-smooth".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmoothBound(u64);

impl SmoothBound {
    pub fn new(bound: u64) -> Result<Self, NumthError> {
        if bound < 2 {
            return Err(NumthError::InvalidBound(bound));
        }
        Ok(Self(bound))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Default for SmoothBound {
    fn default() -> Self {
        Self(100)
    }
}

/// Sieve of Eratosthenes up to a fixed limit.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        Self { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes in `[lo, hi]`.
    pub fn primes_between(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p < lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        &self.primes[start..end.max(start)]
    }

    /// p_lo ..= p_hi.
    pub fn nth_primes(&self, range: PrimeIndexRange) -> Result<&[u64], NumthError> {
        if range.hi > self.primes.len() {
            return Err(NumthError::CapacityExceeded {
                requested: range.hi,
                available: self.primes.len(),
                limit: self.limit,
            });
        }
        Ok(&self.primes[range.lo - 1..range.hi])
    }
}

impl Default for Sieve {
    fn default() -> Self {
        Self::new(DEFAULT_SIEVE_LIMIT)
    }
}

/// Jacobi symbol (a/n) for odd n >= 1, by the reciprocity recursion.
pub fn jacobi(a: i128, n: u128) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i128) as u128;
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol (a/p) for an odd prime p. Primality of `p` is assumed.
pub fn legendre(a: i64, p: u64) -> Result<i8, NumthError> {
    if p <= 2 || p % 2 == 0 {
        return Err(NumthError::InvalidModulus(p));
    }
    Ok(jacobi(a as i128, p as u128))
}

/// Euler's criterion a^((p-1)/2) mod p. Slower; kept as a cross-check for
/// [`legendre`].
pub fn legendre_euler(a: i64, p: u64) -> Result<i8, NumthError> {
    if p <= 2 || p % 2 == 0 {
        return Err(NumthError::InvalidModulus(p));
    }
    let r = a.rem_euclid(p as i64) as u128;
    let e = pow_mod(r, (p as u128 - 1) / 2, p as u128);
    Ok(match e {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// True iff every prime divisor of `m` is at most `bound`.
pub fn is_smooth(m: u64, bound: SmoothBound) -> bool {
    let b = bound.get();
    let mut m = m;
    if m == 0 {
        return false;
    }
    let mut d = 2u64;
    while d <= b && d.saturating_mul(d) <= m {
        while m % d == 0 {
            m /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // Whatever is left is 1, a prime (if we ran past sqrt), or a product of
    // primes above `b` (if we ran past `b`).
    m == 1 || (m <= b && d.saturating_mul(d) > m)
}

/// Largest prime factor of `m` (1 for m = 1).
pub fn largest_prime_factor(m: u64) -> u64 {
    factor_u64(m).last().map(|&(p, _)| p).unwrap_or(1)
}

/// Trial-division factorization, primes ascending.
pub fn factor_u64(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular inverse failed; `0` is gcd(a mod n, n) > 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("not invertible: gcd = {0}")]
pub struct NotInvertible(pub u128);

/// Inverse of `a` modulo `n` (n >= 2), or the offending gcd.
pub fn mod_inv(a: u128, n: u128) -> Result<u128, NotInvertible> {
    debug_assert!(n >= 2);
    let a = a % n;
    if a == 0 {
        return Err(NotInvertible(n));
    }
    if n < 1 << 62 {
        return mod_inv_small(a as i64, n as i64).map(|u| u as u128);
    }
    // Bezout cofactors stay below n in absolute value, so i128 suffices for
    // n < 2^126.
    assert!(n < 1 << 126, "modulus too large");
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(NotInvertible(r0 as u128));
    }
    Ok(t0.rem_euclid(n as i128) as u128)
}

fn mod_inv_small(a: i64, n: i64) -> Result<i64, NotInvertible> {
    let (mut r0, mut r1) = (n, a);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(NotInvertible(r0 as u128));
    }
    Ok(t0.rem_euclid(n))
}

#[inline]
pub fn add_mod(a: u128, b: u128, n: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= n {
        s.wrapping_sub(n)
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u128, b: u128, n: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        n - (b - a)
    }
}

/// a·b mod n for a, b < n.
#[inline]
pub fn mul_mod(a: u128, b: u128, n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        return (a * b) % n;
    }
    mul_mod_wide(a, b, n)
}

fn mul_mod_wide(a: u128, b: u128, n: u128) -> u128 {
    // Left-to-right binary method; every intermediate stays below n.
    let mut acc = 0u128;
    for bit in (0..128 - b.leading_zeros()).rev() {
        acc = add_mod(acc, acc, n);
        if (b >> bit) & 1 == 1 {
            acc = add_mod(acc, a, n);
        }
    }
    acc
}

pub fn pow_mod(base: u128, mut exp: u128, n: u128) -> u128 {
    if n == 1 {
        return 0;
    }
    let mut result = 1u128;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    result
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli–Shanks).
/// Returns `None` for non-residues.
pub fn sqrt_mod(a: u128, p: u128) -> Option<u128> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2u128;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u128 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Miller–Rabin. Deterministic below 3.3·10^24 with the fixed base set.
pub fn is_prime(n: u128) -> bool {
    const BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// One clause of a prime predicate: a Legendre-symbol value or a congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// (a/p) = expected
    Legendre { a: i64, expected: i8 },
    /// p ≡ residue (mod modulus)
    Congruence { modulus: u64, residue: u64 },
}

impl Condition {
    pub fn holds(&self, p: u64) -> bool {
        match *self {
            Condition::Legendre { a, expected } => {
                matches!(legendre(a, p), Ok(v) if v == expected)
            }
            Condition::Congruence { modulus, residue } => p % modulus == residue % modulus,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Legendre { a, expected } => write!(f, "({a}/p)={expected}"),
            Condition::Congruence { modulus, residue } => write!(f, "p={residue} mod {modulus}"),
        }
    }
}

impl FromStr for Condition {
    type Err = String;

    /// Accepts `(a/p)=e` and `p=r mod m`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let (a, tail) = rest
                .split_once("/p)=")
                .ok_or_else(|| format!("bad Legendre condition {s:?}"))?;
            let a: i64 = a.trim().parse().map_err(|_| format!("bad integer in {s:?}"))?;
            let expected: i8 = tail
                .trim()
                .parse()
                .map_err(|_| format!("bad symbol value in {s:?}"))?;
            if !matches!(expected, -1 | 0 | 1) {
                return Err(format!("symbol value must be -1, 0 or 1 in {s:?}"));
            }
            return Ok(Condition::Legendre { a, expected });
        }
        if let Some(rest) = s.strip_prefix("p=") {
            let (r, m) = rest
                .split_once(" mod ")
                .ok_or_else(|| format!("bad congruence {s:?}"))?;
            let residue: u64 = r.trim().parse().map_err(|_| format!("bad residue in {s:?}"))?;
            let modulus: u64 = m.trim().parse().map_err(|_| format!("bad modulus in {s:?}"))?;
            if modulus < 2 {
                return Err(format!("modulus must be at least 2 in {s:?}"));
            }
            return Ok(Condition::Congruence { modulus, residue });
        }
        Err(format!("unrecognized condition {s:?}"))
    }
}

/// Largest prime tried by the big-integer trial division helpers.
const BIG_TRIAL_LIMIT: u64 = 1_000_000;

/// Trial division of |n| by primes up to `BIG_TRIAL_LIMIT`. Returns the
/// prime-power factors found and the unfactored cofactor (1 when complete).
pub fn trial_factor_big(n: &BigInt) -> (Vec<(BigInt, u32)>, BigInt) {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return (out, m);
    }
    let mut d = 2u64;
    while d <= BIG_TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > m {
            break;
        }
        if (&m % &bd).is_zero() {
            let mut e = 0;
            while (&m % &bd).is_zero() {
                m /= &bd;
                e += 1;
            }
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() && BigInt::from(d) * BigInt::from(d) > m {
        out.push((m, 1));
        m = BigInt::one();
    }
    (out, m)
}

/// Squarefree kernel of a nonzero integer, keeping its sign: the unique
/// squarefree `k` with `n = k·m²`. `None` when `n` is zero or too large to
/// split by trial division.
pub fn squarefree_kernel(n: &BigInt) -> Option<BigInt> {
    if n.is_zero() {
        return None;
    }
    let (factors, rest) = trial_factor_big(n);
    let mut k = BigInt::one();
    for (p, e) in factors {
        if e % 2 == 1 {
            k *= p;
        }
    }
    if !rest.is_one() {
        // Every prime factor of `rest` exceeds the trial limit, so if it is
        // below the cube of the limit it has at most two prime factors.
        let limit = BigInt::from(BIG_TRIAL_LIMIT);
        if rest >= &limit * &limit * &limit {
            return None;
        }
        let r = rest.sqrt();
        if &r * &r != rest {
            k *= rest;
        }
    }
    if n.is_negative() {
        k = -k;
    }
    Some(k)
}

pub fn is_squarefree(n: &BigInt) -> Option<bool> {
    squarefree_kernel(n).map(|k| &k == n)
}
