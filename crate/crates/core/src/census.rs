//! The smoothness census: for each curve and each prime set, how many
//! primes p give a group order |E(F_p)| that is B-smooth.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::counting::{count_bsgs, CountError};
use crate::ec_core::{CurveError, IntegralModel, RationalWeierstrass};
use crate::numth::{self, Condition, NumthError, PrimeIndexRange, Sieve, SmoothBound};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    Numth(#[from] NumthError),
    #[error("counting failed for {curve} at p = {p}: {source}")]
    Count { curve: String, p: u64, source: CountError },
    #[error("unknown prime set {0:?}")]
    UnknownSet(String),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetLabel {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl SetLabel {
    pub const ALL: [SetLabel; 6] = [SetLabel::A, SetLabel::B, SetLabel::C, SetLabel::D, SetLabel::E, SetLabel::F];

    /// Defining conditions of the standard sets.
    pub fn conditions(self) -> Vec<Condition> {
        let leg = |a, expected| Condition::Legendre { a, expected };
        match self {
            SetLabel::A => vec![],
            SetLabel::B => vec![leg(-143, 1)],
            SetLabel::C => vec![leg(-143, -1)],
            SetLabel::D => vec![Condition::Congruence { modulus: 5, residue: 1 }],
            SetLabel::E => vec![leg(-3, 1), leg(217, 1)],
            SetLabel::F => vec![leg(-1, 1), leg(-7, 1)],
        }
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for SetLabel {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" => Ok(SetLabel::A),
            "B" => Ok(SetLabel::B),
            "C" => Ok(SetLabel::C),
            "D" => Ok(SetLabel::D),
            "E" => Ok(SetLabel::E),
            "F" => Ok(SetLabel::F),
            other => Err(CensusError::UnknownSet(other.to_string())),
        }
    }
}

/// Index range of the standard sets: p_50 through p_10050.
pub fn standard_range() -> PrimeIndexRange {
    PrimeIndexRange::new(50, 10050).expect("valid range")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSetSpec {
    pub label: SetLabel,
    pub range: PrimeIndexRange,
    pub conditions: Vec<Condition>,
}

impl PrimeSetSpec {
    pub fn standard(label: SetLabel) -> Self {
        Self::with_range(label, standard_range())
    }

    pub fn with_range(label: SetLabel, range: PrimeIndexRange) -> Self {
        Self { label, range, conditions: label.conditions() }
    }
}

/// Primes p_lo..=p_hi satisfying every condition, ascending.
pub fn build_set(spec: &PrimeSetSpec, sieve: &Sieve) -> Result<Vec<u64>, CensusError> {
    Ok(sieve
        .nth_primes(spec.range)?
        .iter()
        .copied()
        .filter(|&p| spec.conditions.iter().all(|c| c.holds(p)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeOutcome {
    Order(u64),
    BadReduction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skip {
    pub curve: String,
    pub p: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub curve: String,
    pub set: SetLabel,
    pub count: usize,
    pub set_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CensusReport {
    pub curves: Vec<String>,
    pub sets: Vec<SetLabel>,
    pub bound: u64,
    /// Curve-major, in the order of `curves` then `sets`.
    pub cells: Vec<Cell>,
    pub skipped: Vec<Skip>,
    /// Per curve, the outcome at every prime of every requested set.
    pub orders: BTreeMap<String, BTreeMap<u64, PrimeOutcome>>,
    pub set_primes: BTreeMap<SetLabel, Vec<u64>>,
}

impl CensusReport {
    pub fn cell(&self, curve: &str, set: SetLabel) -> Option<&Cell> {
        self.cells.iter().find(|c| c.curve == curve && c.set == set)
    }

    pub fn count(&self, curve: &str, set: SetLabel) -> Option<usize> {
        self.cell(curve, set).map(|c| c.count)
    }
}

fn outcome_at(model: &IntegralModel, label: &str, p: u64) -> Result<PrimeOutcome, CensusError> {
    match model.reduce(p as u128) {
        Ok(c) => count_bsgs(&c)
            .map(PrimeOutcome::Order)
            .map_err(|source| CensusError::Count { curve: label.to_string(), p, source }),
        Err(CurveError::BadReduction(_)) => Ok(PrimeOutcome::BadReduction),
        Err(e) => Err(CensusError::Count {
            curve: label.to_string(),
            p,
            source: CountError::BadCurve(match e {
                CurveError::ModulusTooSmall(n) => n,
                _ => p as u128,
            }),
        }),
    }
}

/// Runs the census. `workers = None` uses rayon's global pool; results do
/// not depend on the worker count.
pub fn run_census(
    curves: &[(String, RationalWeierstrass)],
    sets: &[PrimeSetSpec],
    bound: SmoothBound,
    sieve: &Sieve,
    workers: Option<usize>,
) -> Result<CensusReport, CensusError> {
    let mut set_primes = BTreeMap::new();
    for spec in sets {
        set_primes.insert(spec.label, build_set(spec, sieve)?);
    }
    let all_primes: Vec<u64> = set_primes
        .values()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let work = || -> Result<Vec<BTreeMap<u64, PrimeOutcome>>, CensusError> {
        curves
            .iter()
            .map(|(label, curve)| {
                let model = IntegralModel::new(curve);
                let outcomes: Result<Vec<_>, _> = all_primes
                    .par_iter()
                    .map(|&p| outcome_at(&model, label, p).map(|o| (p, o)))
                    .collect();
                outcomes.map(|v| v.into_iter().collect())
            })
            .collect()
    };
    let per_curve = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CensusError::Pool(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let mut report = CensusReport {
        curves: curves.iter().map(|(l, _)| l.clone()).collect(),
        sets: sets.iter().map(|s| s.label).collect(),
        bound: bound.get(),
        set_primes,
        ..Default::default()
    };
    for ((label, _), outcomes) in curves.iter().zip(per_curve) {
        for (&p, o) in &outcomes {
            if *o == PrimeOutcome::BadReduction {
                report.skipped.push(Skip {
                    curve: label.clone(),
                    p,
                    reason: "bad reduction".into(),
                });
            }
        }
        for spec in sets {
            let primes = &report.set_primes[&spec.label];
            let count = primes
                .iter()
                .filter(|p| matches!(outcomes[p], PrimeOutcome::Order(n) if numth::is_smooth(n, bound)))
                .count();
            report.cells.push(Cell {
                curve: label.clone(),
                set: spec.label,
                count,
                set_size: primes.len(),
            });
        }
        report.orders.insert(label.clone(), outcomes);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected table or csv)")),
        }
    }
}

pub const CSV_HEADER: &str = "curve,set,count,set_size";

pub fn emit_report(r: &CensusReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for c in &r.cells {
                let _ = writeln!(out, "{},{},{},{}", c.curve, c.set, c.count, c.set_size);
            }
        }
        ReportFormat::Table => {
            let width = r.curves.iter().map(|c| c.len()).max().unwrap_or(5).max(5);
            let _ = write!(out, "{:width$}", "curve");
            for s in &r.sets {
                let _ = write!(out, " {:>6}", s.to_string());
            }
            out.push('\n');
            for curve in &r.curves {
                let _ = write!(out, "{curve:width$}");
                for s in &r.sets {
                    let n = r.count(curve, *s).unwrap_or(0);
                    let _ = write!(out, " {n:>6}");
                }
                out.push('\n');
            }
            let _ = write!(out, "{:width$}", "|set|");
            for s in &r.sets {
                let _ = write!(out, " {:>6}", r.set_primes.get(s).map_or(0, |v| v.len()));
            }
            out.push('\n');
            for s in &r.skipped {
                let _ = writeln!(out, "skipped {} p={} ({})", s.curve, s.p, s.reason);
            }
        }
    }
    out
}

/// Published counts of 100-smooth orders over p_50..p_10050, rows in
/// [`crate::families::CENSUS_LABELS`] order and columns A..F.
pub const REFERENCE_TABLE: [[usize; 6]; 8] = [
    [2822, 1453, 1369, 643, 522, 633],
    [4275, 2115, 2160, 1020, 1014, 1066],
    [4635, 2306, 2329, 1110, 1226, 1125],
    [5133, 2852, 2281, 1290, 1302, 1288],
    [5110, 2587, 2523, 1245, 1206, 1295],
    [4317, 2141, 2176, 1059, 1098, 1440],
    [4376, 2137, 2239, 1448, 1047, 1074],
    [4817, 2396, 2421, 1201, 1505, 1138],
];

pub fn reference_count(curve: &str, set: SetLabel) -> Option<usize> {
    let row = crate::families::CENSUS_LABELS.iter().position(|l| *l == curve)?;
    Some(REFERENCE_TABLE[row][set as usize])
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellComparison {
    pub curve: String,
    pub set: SetLabel,
    pub expected: usize,
    pub actual: usize,
    pub relative: f64,
}

/// Compares every cell with a reference value.
pub fn compare(r: &CensusReport, expected: impl Fn(&str, SetLabel) -> Option<usize>) -> Vec<CellComparison> {
    r.cells
        .iter()
        .filter_map(|c| {
            let e = expected(&c.curve, c.set)?;
            Some(CellComparison {
                curve: c.curve.clone(),
                set: c.set,
                expected: e,
                actual: c.count,
                relative: (c.count as f64 - e as f64).abs() / e as f64,
            })
        })
        .collect()
}

/// Per-prime detail for every mismatched cell: skipped primes, and the
/// primes whose order sits nearest the smoothness threshold (largest prime
/// factor within `margin` of the bound), which are the ones a different
/// model or an off-by-one bound would flip.
pub fn discrepancy_report(r: &CensusReport, cmp: &[CellComparison], margin: u64) -> String {
    let mut out = String::new();
    for c in cmp.iter().filter(|c| c.actual != c.expected) {
        let _ = writeln!(
            out,
            "{}/{}: expected {} got {} ({:+}, {:.2}%)",
            c.curve,
            c.set,
            c.expected,
            c.actual,
            c.actual as i64 - c.expected as i64,
            100.0 * c.relative
        );
        let Some(orders) = r.orders.get(&c.curve) else { continue };
        let primes = &r.set_primes[&c.set];
        for &p in primes {
            match orders[&p] {
                PrimeOutcome::BadReduction => {
                    let _ = writeln!(out, "  p={p} skipped (bad reduction)");
                }
                PrimeOutcome::Order(n) => {
                    let q = numth::largest_prime_factor(n);
                    if q.abs_diff(r.bound) <= margin {
                        let mark = if q <= r.bound { "smooth" } else { "not smooth" };
                        let _ = writeln!(out, "  p={p} order={n} largest factor {q} ({mark})");
                    }
                }
            }
        }
    }
    out
}
