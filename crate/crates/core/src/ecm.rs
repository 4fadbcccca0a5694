//! Lenstra's elliptic curve method with affine arithmetic modulo N.
//!
//! Stage 1 multiplies the point by q^⌊log_q B1⌋ for each prime q ≤ B1 in
//! ascending order, one prime power at a time. Stage 2 walks the primes in
//! (B1, B2] using cached multiples for the gaps between them. A slope
//! denominator that is not invertible modulo N yields the factor.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use thiserror::Error;

use crate::ec_core::{fmt_rational, int, FactorFound, IntegralModel, ModCurve, ModPoint, Rational, RationalPoint, RationalWeierstrass};
use crate::families::{catalog, cond_3x6, rational_sqrt, CatalogEntry, Family};
use crate::numth::{self, Sieve};
use crate::verify::rank_witness_search;

/// Height bound used when a curve has no known point.
pub const SEARCH_BOUND: i64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcmError {
    #[error("N = {0} must be at least 4 and coprime to 6")]
    BadInput(u128),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown catalog label {0:?}")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveSource {
    /// Catalog labels, in order.
    Catalog(Vec<String>),
    /// One family member per parameter.
    Family { family: Family, params: Vec<Rational> },
    /// y² = x³ + a·x + (3 − a) through (1, 2), for a = 1, 2, ..
    Simple { count: usize },
}

impl CurveSource {
    pub fn full_catalog() -> Self {
        CurveSource::Catalog(catalog().into_iter().map(|e| e.label).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcmConfig {
    pub b1: u64,
    pub b2: Option<u64>,
    pub max_curves: usize,
    pub source: CurveSource,
}

impl EcmConfig {
    pub fn validate(&self) -> Result<(), EcmError> {
        if self.b1 < 2 {
            return Err(EcmError::InvalidConfig(format!("B1 = {} must be at least 2", self.b1)));
        }
        if let Some(b2) = self.b2 {
            if b2 <= self.b1 {
                return Err(EcmError::InvalidConfig(format!("B2 = {b2} must exceed B1 = {}", self.b1)));
            }
        }
        if self.max_curves == 0 {
            return Err(EcmError::InvalidConfig("max_curves must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EcmOutcome {
    Factor { g: u128, curve: String, stage: u8 },
    FullCollapse { curve: String },
    Exhausted { curves_tried: usize },
}

impl fmt::Display for EcmOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EcmOutcome::Factor { g, curve, stage } => write!(f, "factor={g} curve={curve} stage={stage}"),
            EcmOutcome::FullCollapse { curve } => write!(f, "collapse curve={curve}"),
            EcmOutcome::Exhausted { .. } => write!(f, "exhausted"),
        }
    }
}

/// Result of one stage on one curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageResult {
    Factor(u128),
    FullCollapse,
    Survived(ModPoint),
}

fn classify(g: u128, n: u128) -> StageResult {
    if g == n {
        StageResult::FullCollapse
    } else {
        StageResult::Factor(g)
    }
}

fn check_n(n: u128) -> Result<(), EcmError> {
    if n < 4 || numth::gcd(n, 6) != 1 {
        return Err(EcmError::BadInput(n));
    }
    Ok(())
}

/// Reduces E and P modulo N. A nontrivial gcd met along the way is itself
/// the answer.
pub fn reduce_for_ecm(n: u128, e: &RationalWeierstrass, p: &RationalPoint) -> Result<(ModCurve, Result<ModPoint, StageResult>), EcmError> {
    check_n(n)?;
    let model = IntegralModel::new(e);
    let den_gcd = |q: &Rational| numth::gcd(crate::ec_core::reduce_int(q.denom(), n), n);
    let c = match model.reduce(n) {
        Ok(c) => c,
        Err(_) => {
            let dummy = ModCurve::new(n, 0, 1);
            return Ok((dummy, Err(StageResult::FullCollapse)));
        }
    };
    if c.disc_gcd() != 1 {
        return Ok((c, Err(classify(c.disc_gcd(), n))));
    }
    // a coefficient denominator sharing a factor with N
    for a in e.coeffs() {
        let g = den_gcd(a);
        if g != 1 {
            return Ok((c, Err(classify(g, n))));
        }
    }
    match model.reduce_point(p, n) {
        Ok(pt) => Ok((c, Ok(pt))),
        Err(numth::NotInvertible(g)) => Ok((c, Err(classify(g, n)))),
    }
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    Sieve::new(limit).primes().to_vec()
}

/// Stage 1 on a reduced curve.
pub fn stage1_mod(c: &ModCurve, p: &ModPoint, primes: &[u64], b1: u64) -> StageResult {
    let n = c.modulus();
    let mut q_pt = *p;
    for &q in primes.iter().take_while(|&&q| q <= b1) {
        let mut qe = q;
        while qe <= b1 / q {
            qe *= q;
        }
        match c.scalar_mul(qe as u128, &q_pt) {
            Ok(ModPoint::Infinity) => return StageResult::FullCollapse,
            Ok(r) => q_pt = r,
            Err(FactorFound(g)) => return classify(g, n),
        }
    }
    StageResult::Survived(q_pt)
}

/// Stage 1: k·P mod N with k = ∏ q^⌊log_q B1⌋.
pub fn stage1(n: u128, e: &RationalWeierstrass, p: &RationalPoint, b1: u64) -> Result<StageResult, EcmError> {
    let (c, pt) = reduce_for_ecm(n, e, p)?;
    Ok(match pt {
        Err(r) => r,
        Ok(pt) => stage1_mod(&c, &pt, &primes_up_to(b1), b1),
    })
}

/// Stage 2: q·Q for each prime q in (B1, B2], stepping between consecutive
/// primes with cached multiples of Q.
pub fn stage2(c: &ModCurve, q_pt: &ModPoint, primes: &[u64], b1: u64, b2: u64) -> StageResult {
    let n = c.modulus();
    let mut it = primes.iter().copied().skip_while(|&q| q <= b1).take_while(|&q| q <= b2);
    let Some(first) = it.next() else {
        return StageResult::Survived(*q_pt);
    };
    let run = || -> Result<StageResult, FactorFound> {
        let mut r = c.scalar_mul(first as u128, q_pt)?;
        if r.is_infinity() {
            return Ok(StageResult::FullCollapse);
        }
        let mut gaps: HashMap<u64, ModPoint> = HashMap::new();
        let mut prev = first;
        for q in it {
            let d = q - prev;
            let step = match gaps.get(&d) {
                Some(s) => *s,
                None => {
                    let s = c.scalar_mul(d as u128, q_pt)?;
                    gaps.insert(d, s);
                    s
                }
            };
            r = c.add(&r, &step)?;
            if r.is_infinity() {
                return Ok(StageResult::FullCollapse);
            }
            prev = q;
        }
        Ok(StageResult::Survived(*q_pt))
    };
    match run() {
        Ok(s) => s,
        Err(FactorFound(g)) => classify(g, n),
    }
}

/// A curve with a point, ready for ECM.
#[derive(Debug, Clone)]
pub struct PreparedCurve {
    pub label: String,
    pub curve: RationalWeierstrass,
    pub point: RationalPoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub label: String,
    pub reason: String,
}

fn entry_point(e: &CatalogEntry, twists: &[BigInt]) -> Result<PreparedCurve, String> {
    if let Some(p) = e.known_points.iter().find(|p| !p.is_infinity() && e.curve.is_on_curve(p)) {
        return Ok(PreparedCurve { label: e.label.clone(), curve: e.curve.clone(), point: p.clone() });
    }
    match rank_witness_search(&e.curve, twists, SEARCH_BOUND) {
        Ok(Some(w)) => {
            let one = BigInt::from(1);
            if w.twist == one {
                Ok(PreparedCurve { label: e.label.clone(), curve: w.curve, point: w.point })
            } else {
                Ok(PreparedCurve { label: format!("{}^({})", e.label, w.twist), curve: w.curve, point: w.point })
            }
        }
        Ok(None) => Err(format!("no known point on the curve and none of height <= {SEARCH_BOUND}")),
        Err(err) => Err(err.to_string()),
    }
}

/// Curves and points from a source, in order, with the ones lacking a usable
/// point recorded. At most `max_curves` curves are returned.
pub fn prepare_curves(source: &CurveSource, max_curves: usize) -> Result<(Vec<PreparedCurve>, Vec<Skipped>), EcmError> {
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    let mut push = |r: Result<PreparedCurve, Skipped>, out: &mut Vec<PreparedCurve>| match r {
        Ok(p) => out.push(p),
        Err(s) => skipped.push(s),
    };
    match source {
        CurveSource::Catalog(labels) => {
            let all = catalog();
            for l in labels {
                if out.len() >= max_curves {
                    break;
                }
                let e = all.iter().find(|e| &e.label == l).ok_or_else(|| EcmError::UnknownLabel(l.clone()))?;
                push(entry_point(e, &[]).map_err(|reason| Skipped { label: l.clone(), reason }), &mut out);
            }
        }
        CurveSource::Family { family, params } => {
            for t in params {
                if out.len() >= max_curves {
                    break;
                }
                let label = format!("{family}[{}]", fmt_rational(t).trim_end_matches("/1"));
                let z = match family {
                    Family::F3x6(v) | Family::F6x6(v) => match rational_sqrt(&cond_3x6(t, *v)) {
                        Some(z) => Some(z),
                        None => {
                            push(Err(Skipped { label, reason: "condition value is not a square".into() }), &mut out);
                            continue;
                        }
                    },
                    _ => None,
                };
                let r = family
                    .generate(t, z.as_ref())
                    .map_err(|e| e.to_string())
                    .and_then(|e| {
                        let twists: Vec<BigInt> = match family {
                            Family::F4x8 => crate::families::gen_4x8(t)
                                .map(|g| vec![BigInt::from(-1), g.kernel.clone(), -g.kernel])
                                .unwrap_or_default(),
                            _ => vec![],
                        };
                        entry_point(&e, &twists)
                    })
                    .map_err(|reason| Skipped { label, reason });
                push(r, &mut out);
            }
        }
        CurveSource::Simple { count } => {
            for a in 1..=(*count as i64) {
                if out.len() >= max_curves {
                    break;
                }
                let label = format!("simple[{a}]");
                let r = RationalWeierstrass::short(int(a), int(3 - a))
                    .map(|curve| PreparedCurve { label: label.clone(), curve, point: RationalPoint::new(int(1), int(2)) })
                    .map_err(|e| Skipped { label, reason: e.to_string() });
                push(r, &mut out);
            }
        }
    }
    Ok((out, skipped))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcmReport {
    pub outcome: EcmOutcome,
    pub skipped: Vec<Skipped>,
    /// (curve, stage 1/2 result) per curve tried, in order.
    pub log: Vec<(String, String)>,
}

fn run_one(n: u128, pc: &PreparedCurve, primes: &[u64], config: &EcmConfig) -> Result<(StageResult, u8), EcmError> {
    let (c, pt) = reduce_for_ecm(n, &pc.curve, &pc.point)?;
    Ok(match pt {
        Err(r) => (r, 1),
        Ok(pt) => match stage1_mod(&c, &pt, primes, config.b1) {
            StageResult::Survived(q) => match config.b2 {
                Some(b2) => (stage2(&c, &q, primes, config.b1, b2), 2),
                None => (StageResult::Survived(q), 1),
            },
            other => (other, 1),
        },
    })
}

/// Runs stage 1 (and stage 2 when B2 is set) on each prepared curve in
/// order; the first factor wins.
pub fn ecm_run_prepared(n: u128, curves: &[PreparedCurve], config: &EcmConfig) -> Result<EcmReport, EcmError> {
    config.validate()?;
    check_n(n)?;
    let primes = primes_up_to(config.b2.unwrap_or(config.b1).max(config.b1));
    let mut results = Vec::new();
    for pc in curves.iter().take(config.max_curves) {
        let r = run_one(n, pc, &primes, config)?;
        let done = matches!(r.0, StageResult::Factor(_));
        results.push((pc.label.clone(), r));
        if done {
            break;
        }
    }
    Ok(summarize(results))
}

/// As [`ecm_run_prepared`], with the curves run concurrently on `workers`
/// threads. The outcome is the same: the factor from the earliest curve in
/// configuration order.
pub fn ecm_run_prepared_parallel(
    n: u128,
    curves: &[PreparedCurve],
    config: &EcmConfig,
    workers: usize,
) -> Result<EcmReport, EcmError> {
    use rayon::prelude::*;
    config.validate()?;
    check_n(n)?;
    let primes = primes_up_to(config.b2.unwrap_or(config.b1).max(config.b1));
    let chosen: Vec<&PreparedCurve> = curves.iter().take(config.max_curves).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| EcmError::InvalidConfig(e.to_string()))?;
    let all: Vec<Result<(StageResult, u8), EcmError>> =
        pool.install(|| chosen.par_iter().map(|pc| run_one(n, pc, &primes, config)).collect());
    let mut results = Vec::new();
    for (pc, r) in chosen.iter().zip(all) {
        let r = r?;
        let done = matches!(r.0, StageResult::Factor(_));
        results.push((pc.label.clone(), r));
        if done {
            break;
        }
    }
    Ok(summarize(results))
}

fn summarize(results: Vec<(String, (StageResult, u8))>) -> EcmReport {
    let tried = results.len();
    let log = results.iter().map(|(l, (r, _))| (l.clone(), format!("{r:?}"))).collect();
    let outcome = match results.last() {
        Some((curve, (StageResult::Factor(g), stage))) => {
            EcmOutcome::Factor { g: *g, curve: curve.clone(), stage: *stage }
        }
        Some((curve, (StageResult::FullCollapse, _))) if tried == 1 => EcmOutcome::FullCollapse { curve: curve.clone() },
        _ => EcmOutcome::Exhausted { curves_tried: tried },
    };
    EcmReport { outcome, skipped: vec![], log }
}

/// Prepares the configured curves and runs ECM on N.
pub fn ecm_run(n: u128, config: &EcmConfig) -> Result<EcmReport, EcmError> {
    config.validate()?;
    check_n(n)?;
    let (curves, skipped) = prepare_curves(&config.source, config.max_curves)?;
    let mut report = ecm_run_prepared(n, &curves, config)?;
    report.skipped = skipped;
    Ok(report)
}

fn perfect_power(n: u128) -> Option<(u128, u32)> {
    for k in (2..=(128 - n.leading_zeros())).rev() {
        let r = n.nth_root(k);
        for c in [r, r + 1] {
            if c > 1 && c.checked_pow(k) == Some(n) {
                return Some((c, k));
            }
        }
    }
    None
}

/// Prime factorization with multiplicity, ascending. Small primes go by
/// trial division; the cofactor is split by ECM with growing B1 over the
/// catalog curves and then the simple curves.
pub fn factorize(n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut m = n;
    for p in [2u128, 3] {
        while m % p == 0 && m > 1 {
            out.push(p);
            m /= p;
        }
    }
    let mut d = 5u128;
    while d < 1 << 16 && d * d <= m {
        while m % d == 0 {
            out.push(d);
            m /= d;
        }
        d += 2;
    }
    let mut stack = vec![m];
    let (catalog_curves, _) = prepare_curves(&CurveSource::full_catalog(), usize::MAX).expect("catalog labels");
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if numth::is_prime(m) {
            out.push(m);
            continue;
        }
        if let Some((r, k)) = perfect_power(m) {
            stack.extend(std::iter::repeat(r).take(k as usize));
            continue;
        }
        stack.extend(split(m, &catalog_curves));
    }
    out.sort_unstable();
    out
}

fn split(m: u128, catalog_curves: &[PreparedCurve]) -> [u128; 2] {
    let mut b1 = 1000;
    let mut simple = 0;
    loop {
        let config = EcmConfig { b1, b2: Some(b1 * 10), max_curves: usize::MAX, source: CurveSource::Catalog(vec![]) };
        let found = |curves: &[PreparedCurve]| match ecm_run_prepared(m, curves, &config) {
            Ok(EcmReport { outcome: EcmOutcome::Factor { g, .. }, .. }) => Some(g),
            _ => None,
        };
        if let Some(g) = found(catalog_curves) {
            return [g, m / g];
        }
        simple += 20;
        let (extra, _) = prepare_curves(&CurveSource::Simple { count: simple }, usize::MAX).expect("simple curves");
        if let Some(g) = found(&extra[simple - 20..]) {
            return [g, m / g];
        }
        b1 = (b1 * 2).min(1 << 20);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_naive, point_order};
    use crate::families::catalog_entry;

    fn e0() -> (RationalWeierstrass, RationalPoint) {
        let e = catalog_entry("E0").unwrap();
        (e.curve, e.known_points[0].clone())
    }

    #[test]
    fn ninety_one() {
        let (e, p) = e0();
        assert_eq!(stage1(91, &e, &p, 13).unwrap(), StageResult::Factor(13));
        let config = EcmConfig { b1: 13, b2: None, max_curves: 1, source: CurveSource::Catalog(vec!["E0".into()]) };
        let r = ecm_run(91, &config).unwrap();
        assert_eq!(r.outcome, EcmOutcome::Factor { g: 13, curve: "E0".into(), stage: 1 });
        assert_eq!(r.outcome.to_string(), "factor=13 curve=E0 stage=1");
    }

    #[test]
    fn counts_behind_ninety_one() {
        // y² = x³ + 3 has 13 points mod 7 and 9 points mod 13
        assert_eq!(count_naive(&ModCurve::new(7, 0, 3)), Ok(13));
        assert_eq!(count_naive(&ModCurve::new(13, 0, 3)), Ok(9));
    }

    #[test]
    fn bad_inputs() {
        let (e, p) = e0();
        assert_eq!(stage1(90, &e, &p, 13), Err(EcmError::BadInput(90)));
        assert_eq!(stage1(3, &e, &p, 13), Err(EcmError::BadInput(3)));
        let c = EcmConfig { b1: 100, b2: None, max_curves: 0, source: CurveSource::full_catalog() };
        assert!(matches!(c.validate(), Err(EcmError::InvalidConfig(_))));
        let c = EcmConfig { b1: 100, b2: Some(100), max_curves: 1, source: CurveSource::full_catalog() };
        assert!(c.validate().is_err());
        let c = EcmConfig { b1: 1, b2: None, max_curves: 1, source: CurveSource::full_catalog() };
        assert!(c.validate().is_err());
    }

    /// Order of the reduced point of `e` modulo prime p.
    fn order_at(e: &RationalWeierstrass, pt: &RationalPoint, p: u64) -> Option<u64> {
        let m = IntegralModel::new(e);
        let c = m.reduce(p as u128).ok()?;
        let r = m.reduce_point(pt, p as u128).ok()?;
        let n = crate::counting::count_bsgs(&c).ok()?;
        point_order(&c, &r, n).ok()
    }

    fn smooth(n: u64, b: u64) -> bool {
        numth::factor_u64(n).iter().all(|&(q, e)| q.pow(e) <= b)
    }

    #[test]
    fn constructed_stage1_instances() {
        let (e, pt) = e0();
        let b1 = 50;
        let primes: Vec<u64> = Sieve::new(10_000).primes_between(100, 10_000).to_vec();
        let good: Vec<u64> = primes.iter().copied().filter(|&p| order_at(&e, &pt, p).is_some_and(|o| o > 1 && smooth(o, b1))).collect();
        let bad: Vec<u64> = primes.iter().copied().filter(|&p| order_at(&e, &pt, p).is_some_and(|o| !smooth(o, 1 << 40) || numth::largest_prime_factor(o) > 1000)).collect();
        assert!(good.len() >= 5 && bad.len() >= 5);
        for (&p, &q) in good.iter().zip(&bad).take(10) {
            let n = p as u128 * q as u128;
            assert_eq!(stage1(n, &e, &pt, b1).unwrap(), StageResult::Factor(p as u128), "p={p} q={q}");
        }
    }

    #[test]
    fn stage1_survives_with_tiny_bound() {
        // odd point orders on both sides: B1 = 2 multiplies by 2 only
        let (e, pt) = e0();
        let n = 7 * 13;
        let r = stage1(n, &e, &pt, 2).unwrap();
        assert!(matches!(r, StageResult::Survived(_)));
    }

    #[test]
    fn stage2_instances() {
        let (e, pt) = e0();
        let (b1, b2) = (30u64, 2000u64);
        let primes: Vec<u64> = Sieve::new(20_000).primes_between(500, 20_000).to_vec();
        let needs_stage2 = |o: u64| {
            let f = numth::factor_u64(o);
            let big: Vec<_> = f.iter().filter(|&&(q, e)| q.pow(e) > b1).collect();
            big.len() == 1 && big[0].1 == 1 && big[0].0 <= b2
        };
        let good: Vec<u64> = primes.iter().copied().filter(|&p| order_at(&e, &pt, p).is_some_and(needs_stage2)).collect();
        let bad: Vec<u64> = primes.iter().copied().filter(|&p| order_at(&e, &pt, p).is_some_and(|o| numth::largest_prime_factor(o) > b2)).collect();
        assert!(good.len() >= 5 && bad.len() >= 5);
        let sieve = primes_up_to(b2);
        for (&p, &q) in good.iter().zip(&bad).take(8) {
            let n = p as u128 * q as u128;
            let (c, rp) = reduce_for_ecm(n, &e, &pt).unwrap();
            let StageResult::Survived(s) = stage1_mod(&c, &rp.unwrap(), &sieve, b1) else {
                panic!("stage 1 should survive for p={p}");
            };
            assert_eq!(stage2(&c, &s, &sieve, b1, b2), StageResult::Factor(p as u128), "p={p} q={q}");
            assert_eq!(stage2(&c, &s, &sieve, b1, b1), StageResult::Survived(s));
        }
    }

    #[test]
    fn stage1_is_deterministic() {
        let (e, pt) = e0();
        let n = 1_000_003u128 * 998_244_353;
        assert_eq!(stage1(n, &e, &pt, 500).unwrap(), stage1(n, &e, &pt, 500).unwrap());
    }

    #[test]
    fn prepared_catalog_has_points() {
        let (curves, skipped) = prepare_curves(&CurveSource::full_catalog(), 100).unwrap();
        for c in &curves {
            assert!(c.curve.is_on_curve(&c.point), "{}", c.label);
        }
        assert_eq!(curves.len() + skipped.len(), catalog().len());
    }

    #[test]
    fn family_source() {
        let params = vec![int(2), int(3), int(4)];
        let (curves, _) = prepare_curves(&CurveSource::Family { family: Family::F4x8, params }, 10).unwrap();
        assert!(!curves.is_empty());
        for c in &curves {
            assert!(c.curve.is_on_curve(&c.point));
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let (curves, _) = prepare_curves(&CurveSource::full_catalog(), 20).unwrap();
        let config = EcmConfig { b1: 2000, b2: Some(20_000), max_curves: 20, source: CurveSource::full_catalog() };
        for n in [1_000_003u128 * 998_244_353, 10_007 * 10_009, 4_294_967_291 * 4_294_967_279] {
            let seq = ecm_run_prepared(n, &curves, &config).unwrap();
            for w in [1, 3] {
                assert_eq!(ecm_run_prepared_parallel(n, &curves, &config, w).unwrap(), seq);
            }
            if let EcmOutcome::Factor { g, .. } = seq.outcome {
                assert!(g > 1 && g < n && n % g == 0);
            }
        }
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(1u128 << 40), Some((2, 40)));
        assert_eq!(perfect_power(65537u128 * 65537), Some((65537, 2)));
        assert_eq!(perfect_power(91), None);
    }

    #[test]
    fn factorize_small_and_mixed() {
        assert_eq!(factorize(91), vec![7, 13]);
        assert_eq!(factorize(1), Vec::<u128>::new());
        assert_eq!(factorize(2 * 2 * 3 * 1_000_003), vec![2, 2, 3, 1_000_003]);
        let n = 4_294_967_291u128 * 4_294_967_279;
        assert_eq!(factorize(n), vec![4_294_967_279, 4_294_967_291]);
        let n = 65_537u128 * 65_537 * 1_000_003;
        assert_eq!(factorize(n), vec![65_537, 65_537, 1_000_003]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn factorization_is_complete(n in 2u64..u64::MAX) {
                let f = factorize(n as u128);
                prop_assert_eq!(f.iter().product::<u128>(), n as u128);
                prop_assert!(f.iter().all(|&p| numth::is_prime(p)));
            }
        }
    }
}
