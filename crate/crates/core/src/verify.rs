//! Empirical certificates computed from reductions modulo primes: torsion
//! divisibility at split primes, nontorsion and independence checks, and a
//! bounded search for points of infinite order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::census::standard_range;
use crate::counting::{count_bsgs, point_order, CountError};
use crate::ec_core::{int, rat, IntegralModel, ModCurve, ModPoint, Rational, RationalPoint, RationalWeierstrass};
use crate::families::rational_sqrt;
use crate::numth::{Condition, Sieve};

/// Largest order of a rational torsion point over ℚ.
pub const MAX_RATIONAL_TORSION_ORDER: u64 = 12;
/// Prime pairs tried by [`nontorsion_certificate`].
pub const CERTIFICATE_PAIRS: usize = 20;
/// Size of the prime panel of [`independence_heuristic`].
pub const PANEL_SIZE: usize = 10;
/// Panel primes start here.
pub const PANEL_START: u64 = 1009;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("only {found} primes satisfy the predicate, {wanted} requested")]
    InsufficientPrimes { found: usize, wanted: usize },
    #[error("sample must be at least 1")]
    EmptySample,
    #[error("split predicate must have at least one condition with modulus >= 2")]
    EmptyPredicate,
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("point at infinity has finite order")]
    Infinity,
    #[error("height bound must be at least 1")]
    BadBound,
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Conjunction of conditions under which a prime splits completely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPredicate {
    conditions: Vec<Condition>,
}

impl SplitPredicate {
    pub fn new(conditions: Vec<Condition>) -> Result<Self, VerifyError> {
        let ok = !conditions.is_empty()
            && conditions.iter().all(|c| match c {
                Condition::Congruence { modulus, .. } => *modulus >= 2,
                Condition::Legendre { .. } => true,
            });
        if ok {
            Ok(Self { conditions })
        } else {
            Err(VerifyError::EmptyPredicate)
        }
    }

    /// Holds for every odd prime.
    pub fn trivial() -> Self {
        Self { conditions: vec![Condition::Congruence { modulus: 2, residue: 1 }] }
    }

    /// The trivial predicate for an empty list (a field equal to ℚ).
    pub fn from_split(conditions: &[Condition]) -> Self {
        if conditions.is_empty() {
            Self::trivial()
        } else {
            Self::new(conditions.to_vec()).expect("catalog predicates are valid")
        }
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn holds(&self, p: u64) -> bool {
        self.conditions.iter().all(|c| c.holds(p))
    }
}

impl fmt::Display for SplitPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.conditions.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectionReport {
    pub torsion_order: u64,
    pub primes_tested: usize,
    /// (p, |E(F_p)|) for every p where the claimed order does not divide.
    pub failures: Vec<(u64, u64)>,
    pub verdict: Verdict,
}

/// Checks claimed_order | |E(F_p)| over the first `sample` good primes of
/// set A satisfying `split`.
pub fn torsion_injection_check(
    e: &RationalWeierstrass,
    claimed_order: u64,
    split: &SplitPredicate,
    sample: usize,
    sieve: &Sieve,
) -> Result<InjectionReport, VerifyError> {
    if sample == 0 {
        return Err(VerifyError::EmptySample);
    }
    let model = IntegralModel::new(e);
    let primes = sieve
        .nth_primes(standard_range())
        .map_err(|_| VerifyError::InsufficientPrimes { found: 0, wanted: sample })?;
    let chosen: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| split.holds(p) && model.has_good_reduction(p as u128))
        .take(sample)
        .collect();
    if chosen.len() < sample {
        return Err(VerifyError::InsufficientPrimes { found: chosen.len(), wanted: sample });
    }
    let mut failures = Vec::new();
    for &p in &chosen {
        let c = model.reduce(p as u128).expect("good reduction");
        let n = count_bsgs(&c)?;
        if n % claimed_order != 0 {
            failures.push((p, n));
        }
    }
    let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(InjectionReport { torsion_order: claimed_order, primes_tested: chosen.len(), failures, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NontorsionCertificate {
    pub verdict: Verdict,
    /// (p, order of P mod p) for the primes examined, in order.
    pub orders: Vec<(u64, u64)>,
    /// The passing pair, if any.
    pub witness: Option<(u64, u64)>,
}

/// Good primes p ≥ `start` at which `pt` reduces to a point of the short
/// model, with that point and the curve.
fn reductions<'a>(
    model: &'a IntegralModel,
    pts: &'a [&'a RationalPoint],
    start: u64,
) -> impl Iterator<Item = (u64, ModCurve, Vec<ModPoint>)> + 'a {
    (start.max(5)..)
        .filter(|&p| crate::numth::is_prime(p as u128))
        .filter(move |&p| model.has_good_reduction(p as u128))
        .filter_map(move |p| {
            let c = model.reduce(p as u128).ok()?;
            let reduced: Option<Vec<ModPoint>> =
                pts.iter().map(|q| model.reduce_point(q, p as u128).ok()).collect();
            Some((p, c, reduced?))
        })
}

/// Passes when two good primes p, q give lcm(ord_p P, ord_q P) > 12, which
/// no rational torsion point can reach. Consecutive good primes from 5 up
/// are paired; after 20 failing pairs the result is inconclusive.
pub fn nontorsion_certificate(e: &RationalWeierstrass, pt: &RationalPoint) -> Result<NontorsionCertificate, VerifyError> {
    if pt.is_infinity() {
        return Err(VerifyError::Infinity);
    }
    if !e.is_on_curve(pt) {
        return Err(VerifyError::NotOnCurve(pt.to_string()));
    }
    let model = IntegralModel::new(e);
    let pts = [pt];
    let mut orders: Vec<(u64, u64)> = Vec::new();
    for (p, c, reduced) in reductions(&model, &pts, 5) {
        let n = count_bsgs(&c)?;
        let ord = point_order(&c, &reduced[0], n)?;
        orders.push((p, ord));
        if orders.len() >= 2 {
            let (p0, o0) = orders[orders.len() - 2];
            if o0.lcm(&ord) > MAX_RATIONAL_TORSION_ORDER {
                return Ok(NontorsionCertificate { verdict: Verdict::Pass, orders, witness: Some((p0, p)) });
            }
            if orders.len() > CERTIFICATE_PAIRS {
                break;
            }
        }
    }
    Ok(NontorsionCertificate { verdict: Verdict::Inconclusive, orders, witness: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub verdict: Verdict,
    pub panel: Vec<u64>,
    /// First (a, b) with aP₁ + bP₂ vanishing at every panel prime.
    pub violation: Option<(i64, i64)>,
}

impl IndependenceReport {
    pub fn describe(&self) -> String {
        match self.violation {
            None => format!("heuristic independence: pass (panel {:?})", self.panel),
            Some((a, b)) => format!("heuristic independence: fail at (a, b) = ({a}, {b})"),
        }
    }
}

fn signed_mul(c: &ModCurve, k: i64, p: &ModPoint) -> ModPoint {
    let q = c.scalar_mul(k.unsigned_abs() as u128, p).expect("prime modulus");
    if k < 0 {
        c.neg(&q)
    } else {
        q
    }
}

/// Heuristic: for every (a, b) ≠ (0, 0) with |a|, |b| ≤ bound, some prime
/// of a fixed 10-prime panel sees aP₁ + bP₂ ≠ O. Pairs are taken up to
/// sign (a > 0, or a = 0 and b > 0) in lexicographic order.
pub fn independence_heuristic(
    e: &RationalWeierstrass,
    p1: &RationalPoint,
    p2: &RationalPoint,
    bound: i64,
) -> Result<IndependenceReport, VerifyError> {
    for p in [p1, p2] {
        if !e.is_on_curve(p) {
            return Err(VerifyError::NotOnCurve(p.to_string()));
        }
    }
    let model = IntegralModel::new(e);
    let pts = [p1, p2];
    let panel: Vec<_> = reductions(&model, &pts, PANEL_START).take(PANEL_SIZE).collect();
    for a in 0..=bound {
        let b_start = if a == 0 { 1 } else { -bound };
        for b in b_start..=bound {
            let vanishes = panel.iter().all(|(_, c, r)| {
                let s = c
                    .add(&signed_mul(c, a, &r[0]), &signed_mul(c, b, &r[1]))
                    .expect("prime modulus");
                s.is_infinity()
            });
            if vanishes {
                return Ok(IndependenceReport {
                    verdict: Verdict::Fail,
                    panel: panel.iter().map(|t| t.0).collect(),
                    violation: Some((a, b)),
                });
            }
        }
    }
    Ok(IndependenceReport { verdict: Verdict::Pass, panel: panel.iter().map(|t| t.0).collect(), violation: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankWitness {
    /// 1 for the curve itself.
    pub twist: BigInt,
    /// The model searched: y² = x³ + a2x² + a4x + a6 (twisted when d ≠ 1).
    pub curve: RationalWeierstrass,
    pub point: RationalPoint,
    /// The point on the input curve's own model, when d = 1.
    pub original: Option<RationalPoint>,
    pub certificate: NontorsionCertificate,
}

/// Searches x = a/b², 1 ≤ b ≤ H, |a| ≤ H², gcd(a, b) = 1, on the
/// square-completed model of E (same x-coordinates as E) and then on each
/// listed quadratic twist of it. Returns the first point that passes
/// [`nontorsion_certificate`]; y is taken nonnegative.
pub fn rank_witness_search(
    e: &RationalWeierstrass,
    twists: &[BigInt],
    height_bound: i64,
) -> Result<Option<RankWitness>, VerifyError> {
    if height_bound < 1 {
        return Err(VerifyError::BadBound);
    }
    let base = e.square_completed();
    let mut models = vec![(BigInt::one(), base.clone())];
    for d in twists {
        if let Ok(t) = base.quadratic_twist(d) {
            models.push((d.clone(), t));
        }
    }
    let h2 = height_bound * height_bound;
    for (d, curve) in models {
        let (a2, a4, a6) = (curve.a2().clone(), curve.a4().clone(), curve.a6().clone());
        for b in 1..=height_bound {
            let b2 = int(b * b);
            for a in -h2..=h2 {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let x: Rational = rat(a, 1) / &b2;
                let rhs = ((&x + &a2) * &x + &a4) * &x + &a6;
                let Some(y) = rational_sqrt(&rhs) else { continue };
                let point = RationalPoint::new(x.clone(), y.clone());
                let cert = nontorsion_certificate(&curve, &point)?;
                if cert.verdict != Verdict::Pass {
                    continue;
                }
                let original = (d == BigInt::one()).then(|| {
                    RationalPoint::new(x.clone(), y - (e.a1() * &x + e.a3()) / int(2))
                });
                return Ok(Some(RankWitness { twist: d, curve, point, original, certificate: cert }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{catalog_entry, rabarison_3x3};

    fn sieve() -> Sieve {
        Sieve::default()
    }

    fn curve(label: &str) -> RationalWeierstrass {
        catalog_entry(label).unwrap().curve
    }

    #[test]
    fn predicate_rules() {
        assert_eq!(SplitPredicate::new(vec![]), Err(VerifyError::EmptyPredicate));
        assert!(SplitPredicate::new(vec![Condition::Congruence { modulus: 1, residue: 0 }]).is_err());
        assert!(SplitPredicate::trivial().holds(229));
        assert_eq!(SplitPredicate::from_split(&[]), SplitPredicate::trivial());
    }

    #[test]
    fn injection_examples() {
        let s = sieve();
        let r = torsion_injection_check(&curve("E7"), 7, &SplitPredicate::trivial(), 200, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.primes_tested, 200);
        let b = SplitPredicate::new(vec![Condition::Legendre { a: -143, expected: 1 }]).unwrap();
        let r = torsion_injection_check(&curve("E12"), 24, &b, 200, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let c = SplitPredicate::new(vec![Condition::Legendre { a: -143, expected: -1 }]).unwrap();
        let r = torsion_injection_check(&curve("E12"), 24, &c, 200, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.failures.is_empty());
        assert!(r.failures.iter().all(|(_, n)| n % 12 == 0));
    }

    #[test]
    fn injection_order_one_and_divisors() {
        let s = sieve();
        let e = curve("E6x6");
        let split = SplitPredicate::new(vec![
            Condition::Legendre { a: -3, expected: 1 },
            Condition::Legendre { a: 217, expected: 1 },
        ])
        .unwrap();
        for k in [1, 2, 3, 4, 6, 9, 12, 18, 36] {
            let r = torsion_injection_check(&e, k, &split, 50, &s).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "k={k}");
        }
        assert!(matches!(
            torsion_injection_check(&e, 1, &split, 0, &s),
            Err(VerifyError::EmptySample)
        ));
        assert!(matches!(
            torsion_injection_check(&e, 1, &split, 100_000, &s),
            Err(VerifyError::InsufficientPrimes { .. })
        ));
    }

    #[test]
    fn nontorsion_examples() {
        let t3 = catalog_entry("5x5-T3").unwrap();
        let c = nontorsion_certificate(&t3.curve, &t3.known_points[0]).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        let (p, q) = c.witness.unwrap();
        let op = c.orders.iter().find(|o| o.0 == p).unwrap().1;
        let oq = c.orders.iter().find(|o| o.0 == q).unwrap().1;
        assert!(op.lcm(&oq) > 12);

        let t4 = catalog_entry("4x8-t4").unwrap();
        assert_eq!(nontorsion_certificate(&t4.curve, &t4.known_points[0]).unwrap().verdict, Verdict::Pass);

        // (0, 0) is 4-torsion on the t=4 curve
        let z = RationalPoint::new(int(0), int(0));
        assert_eq!(nontorsion_certificate(&t4.curve, &z).unwrap().verdict, Verdict::Inconclusive);
        // a 2-torsion point on y² = x³ - x
        let e = RationalWeierstrass::from_ints([0, 0, 0, -1, 0]).unwrap();
        let c = nontorsion_certificate(&e, &RationalPoint::new(int(1), int(0))).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.orders.iter().all(|o| o.1 == 2));
    }

    #[test]
    fn rabarison_torsion_never_certified() {
        for t in [int(1), int(2), rat(1, 2), int(-3)] {
            let r = rabarison_3x3(&t).unwrap();
            for p in &r.torsion {
                assert_eq!(nontorsion_certificate(&r.curve, p).unwrap().verdict, Verdict::Inconclusive);
            }
            // at T = 1 the free point specializes to a point of order 6
            let expected = if t == int(1) { Verdict::Inconclusive } else { Verdict::Pass };
            assert_eq!(nontorsion_certificate(&r.curve, &r.free_point).unwrap().verdict, expected, "T={t}");
        }
        let r = rabarison_3x3(&int(1)).unwrap();
        assert!(r.curve.mul(6, &r.free_point).is_infinity());
    }

    #[test]
    fn torsion_reduces_to_exact_order() {
        let r = rabarison_3x3(&int(2)).unwrap();
        let model = IntegralModel::new(&r.curve);
        let pts = [&r.torsion[0]];
        for (_, c, red) in reductions(&model, &pts, 5).take(30) {
            let n = count_bsgs(&c).unwrap();
            assert_eq!(point_order(&c, &red[0], n).unwrap(), 3);
        }
    }

    #[test]
    fn independence_examples() {
        let u1 = catalog_entry("3x3-u1").unwrap();
        let (p1, p2) = (&u1.known_points[0], &u1.known_points[1]);
        let r = independence_heuristic(&u1.curve, p1, p2, 10).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.panel.len(), PANEL_SIZE);
        let r = independence_heuristic(&u1.curve, p1, p1, 3).unwrap();
        assert_eq!(r.violation, Some((1, -1)));
        let r = independence_heuristic(&u1.curve, p1, &u1.curve.neg(p1), 3).unwrap();
        assert_eq!(r.violation, Some((1, 1)));
        assert!(r.describe().contains("heuristic"));
    }

    #[test]
    fn search_examples() {
        let e0 = curve("E0");
        let w = rank_witness_search(&e0, &[], 5).unwrap().unwrap();
        assert_eq!(w.point, RationalPoint::from_ratios((1, 1), (2, 1)));
        assert_eq!(w.original, Some(w.point.clone()));

        // y² = x³ + 1 has only torsion points
        let e = RationalWeierstrass::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(rank_witness_search(&e, &[], 1).unwrap(), None);
        assert_eq!(rank_witness_search(&e, &[], 0), Err(VerifyError::BadBound));

        let t4 = curve("4x8-t4");
        let twists: Vec<BigInt> = [-1, 161, -161].iter().map(|&d| BigInt::from(d)).collect();
        let w = rank_witness_search(&t4, &twists, 30).unwrap().expect("a point on some twist");
        assert!(w.curve.is_on_curve(&w.point));
        if let Some(o) = &w.original {
            assert!(t4.is_on_curve(o));
        }
    }
}
