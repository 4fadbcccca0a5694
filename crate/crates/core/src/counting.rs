//! Group orders of curves over prime fields.
//!
//! [`count_naive`] sums Legendre symbols and serves as the oracle;
//! [`count_bsgs`] is the baby-step/giant-step method over the Hasse window
//! with Mestre's twist trick for disambiguation.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ec_core::{FactorFound, ModCurve, ModPoint};
use crate::numth::{self, jacobi};

/// Largest p accepted by [`count_naive`].
pub const NAIVE_LIMIT: u128 = 1_000_000;

/// Random points drawn on the curve before switching to its twist.
const POINTS_BEFORE_TWIST: usize = 8;
/// Total points (curve and twist together) before giving up on BSGS.
const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("singular reduction modulo {0}")]
    BadCurve(u128),
    #[error("modulus {0} out of range for this method")]
    OutOfRange(u128),
    #[error("modulus is not prime (found divisor {0})")]
    CompositeModulus(u128),
    #[error("{multiple} is not a multiple of the point order")]
    InvalidMultiple { multiple: u64 },
    #[error("group order modulo {0} stayed ambiguous")]
    Ambiguous(u128),
}

impl From<FactorFound> for CountError {
    fn from(FactorFound(g): FactorFound) -> Self {
        CountError::CompositeModulus(g)
    }
}

/// Integer points of the open Hasse interval (p+1-2√p, p+1+2√p).
pub fn hasse_window(p: u64) -> (u64, u64) {
    let center = p + 1;
    let mut r = (4 * p as u128).isqrt() as u64;
    // need (N - p - 1)^2 < 4p strictly
    if (r as u128) * (r as u128) == 4 * p as u128 {
        r -= 1;
    }
    (center - r, center + r)
}

pub fn in_hasse_interval(p: u64, n: u64) -> bool {
    let d = n as i128 - p as i128 - 1;
    d * d < 4 * p as i128
}

/// 1 + Σ_x (1 + (x³+Ax+B / p)).
pub fn count_naive(c: &ModCurve) -> Result<u64, CountError> {
    let p = c.modulus();
    if !c.is_nonsingular() {
        return Err(CountError::BadCurve(p));
    }
    if p > NAIVE_LIMIT {
        return Err(CountError::OutOfRange(p));
    }
    let pu = p as usize;
    if p == 2 {
        let pts = (0..2u128)
            .flat_map(|x| (0..2u128).map(move |y| (x, y)))
            .filter(|&(x, y)| (y * y) % 2 == c.rhs(x))
            .count();
        return Ok(pts as u64 + 1);
    }
    // number of square roots of each residue
    let mut roots = vec![0u8; pu];
    for y in 0..pu {
        roots[(y * y) % pu] += 1;
    }
    let affine: u64 = (0..p).map(|x| roots[c.rhs(x) as usize] as u64).sum();
    Ok(affine + 1)
}

fn seed_for(c: &ModCurve) -> u64 {
    let mut h = 0x9e37_79b9_7f4a_7c15u64;
    for v in [c.modulus(), c.a(), c.b()] {
        h ^= v as u64;
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9).rotate_left(31);
    }
    h
}

/// A uniformly chosen x with its lift, on a curve over a prime field.
pub fn random_point(c: &ModCurve, rng: &mut impl Rng) -> ModPoint {
    let p = c.modulus();
    loop {
        let x = rng.gen_range(0..p);
        let r = c.rhs(x);
        if r == 0 {
            return ModPoint::Affine { x, y: 0 };
        }
        if jacobi(r as i128, p) != 1 {
            continue;
        }
        let y = numth::sqrt_mod(r, p).expect("residue has a root");
        let y = if rng.gen_bool(0.5) { y } else { p - y };
        return ModPoint::Affine { x, y };
    }
}

/// All m in [lo, hi] with m·P = O, by baby steps j·P (0 ≤ j < s) and
/// giant steps (lo + i·s)·P.
fn annihilators_in_window(
    c: &ModCurve,
    pt: &ModPoint,
    lo: u64,
    hi: u64,
) -> Result<Vec<u64>, CountError> {
    let width = hi - lo + 1;
    let s = (width as f64).sqrt().ceil() as u64;
    let mut baby: HashMap<u128, Vec<(u64, u128)>> = HashMap::with_capacity(s as usize);
    let mut cur = ModPoint::Infinity;
    let mut baby_inf = vec![];
    for j in 0..s {
        match cur {
            ModPoint::Infinity => baby_inf.push(j),
            ModPoint::Affine { x, y } => baby.entry(x).or_default().push((j, y)),
        }
        cur = c.add(&cur, pt)?;
    }
    let step = c.scalar_mul(s as u128, pt)?;
    let mut giant = c.scalar_mul(lo as u128, pt)?;
    let mut out = Vec::new();
    let mut base = lo;
    while base <= hi {
        match giant {
            // G + j·P = O iff j·P = O
            ModPoint::Infinity => out.extend(baby_inf.iter().map(|&j| base + j)),
            ModPoint::Affine { x, y } => {
                if let Some(list) = baby.get(&x) {
                    let neg_y = if y == 0 { 0 } else { c.modulus() - y };
                    out.extend(list.iter().filter(|&&(_, by)| by == neg_y).map(|&(j, _)| base + j));
                }
            }
        }
        giant = c.add(&giant, &step)?;
        base += s;
    }
    out.retain(|&m| m <= hi);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn refine(
    c: &ModCurve,
    pt: &ModPoint,
    lo: u64,
    hi: u64,
    current: Option<Vec<u64>>,
) -> Result<Vec<u64>, CountError> {
    match current {
        Some(cands) if cands.len() <= 16 => {
            let mut kept = Vec::with_capacity(cands.len());
            for m in cands {
                if c.scalar_mul(m as u128, pt)?.is_infinity() {
                    kept.push(m);
                }
            }
            Ok(kept)
        }
        Some(cands) => {
            let fresh = annihilators_in_window(c, pt, lo, hi)?;
            Ok(cands.into_iter().filter(|m| fresh.binary_search(m).is_ok()).collect())
        }
        None => annihilators_in_window(c, pt, lo, hi),
    }
}

/// Exact |E(F_p)| for p > 3 prime. Falls back to [`count_naive`] in the
/// rare small-p cases where neither the curve nor its twist pins down a
/// unique candidate.
pub fn count_bsgs(c: &ModCurve) -> Result<u64, CountError> {
    match bsgs_unique(c)? {
        Some(n) => Ok(n),
        None if c.modulus() <= NAIVE_LIMIT => count_naive(c),
        None => Err(CountError::Ambiguous(c.modulus())),
    }
}

fn bsgs_unique(c: &ModCurve) -> Result<Option<u64>, CountError> {
    let p128 = c.modulus();
    if !c.is_nonsingular() {
        return Err(CountError::BadCurve(p128));
    }
    if p128 <= 3 || p128 > u32::MAX as u128 {
        return Err(CountError::OutOfRange(p128));
    }
    let p = p128 as u64;
    let (lo, hi) = hasse_window(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(c));

    let nonresidue = (2..p128).find(|&g| jacobi(g as i128, p128) == -1).expect("p odd");
    let twist = c.twist(nonresidue);
    // Candidates are group orders of `c`; a twist point Q constrains N
    // through (2p + 2 - N)·Q = O.
    let (tlo, thi) = (2 * p + 2 - hi, 2 * p + 2 - lo);

    let mut cands: Option<Vec<u64>> = None;
    for round in 0..MAX_POINTS {
        let on_twist = round >= POINTS_BEFORE_TWIST && round % 2 == 0;
        let next = if on_twist {
            let q = random_point(&twist, &mut rng);
            let twist_cands = cands.as_ref().map(|v| v.iter().map(|&n| 2 * p + 2 - n).collect());
            let kept = refine(&twist, &q, tlo, thi, twist_cands)?;
            let mut v: Vec<u64> = kept.into_iter().map(|m| 2 * p + 2 - m).collect();
            v.sort_unstable();
            v
        } else {
            let pt = random_point(c, &mut rng);
            refine(c, &pt, lo, hi, cands.take())?
        };
        match next.len() {
            0 => return Err(CountError::CompositeModulus(p128)),
            1 => return Ok(Some(next[0])),
            _ => cands = Some(next),
        }
    }
    Ok(None)
}

/// Least n > 0 with n·P = O, given a multiple `m` of that order.
pub fn point_order(c: &ModCurve, pt: &ModPoint, m: u64) -> Result<u64, CountError> {
    if m == 0 || !c.scalar_mul(m as u128, pt)?.is_infinity() {
        return Err(CountError::InvalidMultiple { multiple: m });
    }
    let mut order = m;
    for (q, _) in numth::factor_u64(m) {
        while order % q == 0 && c.scalar_mul((order / q) as u128, pt)?.is_infinity() {
            order /= q;
        }
    }
    Ok(order)
}
