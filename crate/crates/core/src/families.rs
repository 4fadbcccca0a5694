//! The curve catalog and the parameterized families.
//!
//! Catalog curves carry their torsion over ℚ and over the number field where
//! the large torsion appears, the splitting predicate of that field (the
//! Legendre/congruence conditions under which a rational prime splits
//! completely), and any points known on them. Number fields are only ever
//! handled through those predicates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::ec_core::{fmt_rational, int, rat, CurveError, Rational, RationalPoint, RationalWeierstrass};
use crate::numth::{self, Condition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("degenerate parameter {param}: {factor} vanishes")]
    Degenerate { param: String, factor: &'static str },
    #[error("z^2 = {expected} is required, got z = {z}")]
    ConditionNotSatisfied { expected: String, z: String },
    #[error("cannot compute the squarefree part of {0}")]
    KernelTooLarge(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("catalog parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// ℤ/m ⊕ ℤ/n over a named field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsionLabel {
    pub m: u32,
    pub n: u32,
    pub field: String,
}

/// Torsion groups possible over ℚ.
pub fn is_mazur_group(m: u32, n: u32) -> bool {
    match m {
        1 => (1..=10).contains(&n) || n == 12,
        2 => n % 2 == 0 && (1..=4).contains(&(n / 2)),
        _ => false,
    }
}

impl TorsionLabel {
    pub fn new(m: u32, n: u32, field: impl Into<String>) -> Result<Self, String> {
        let field = field.into();
        if m == 0 || n == 0 || n % m != 0 {
            return Err(format!("{m} does not divide {n}"));
        }
        if field == "Q" && !is_mazur_group(m, n) {
            return Err(format!("Z/{m} x Z/{n} is not a torsion group over Q"));
        }
        Ok(Self { m, n, field })
    }

    pub fn over_q(m: u32, n: u32) -> Self {
        Self::new(m, n, "Q").expect("valid rational torsion")
    }

    pub fn order(&self) -> u64 {
        self.m as u64 * self.n as u64
    }
}

impl fmt::Display for TorsionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {}", self.m, self.n, self.field)
    }
}

impl FromStr for TorsionLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (group, field) = s
            .split_once(" over ")
            .ok_or_else(|| format!("expected 'MxN over FIELD', got {s:?}"))?;
        let (m, n) = group
            .trim()
            .split_once('x')
            .ok_or_else(|| format!("expected MxN, got {group:?}"))?;
        let m = m.parse().map_err(|_| format!("bad group {group:?}"))?;
        let n = n.parse().map_err(|_| format!("bad group {group:?}"))?;
        Self::new(m, n, field.trim())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub curve: RationalWeierstrass,
    pub torsion_q: TorsionLabel,
    pub torsion_ext: TorsionLabel,
    /// Conditions for a rational prime to split completely in the field of
    /// `torsion_ext`; empty when that field is ℚ.
    pub split: Vec<Condition>,
    pub known_points: Vec<RationalPoint>,
    pub source: String,
}

impl CatalogEntry {
    /// The text record used by catalog files and the CLI.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("label: {}\n", self.label));
        out.push_str(&format!("curve: {}\n", self.curve));
        out.push_str(&format!("torsion_q: {}\n", self.torsion_q));
        out.push_str(&format!("torsion_ext: {}\n", self.torsion_ext));
        let split = if self.split.is_empty() {
            "all".to_string()
        } else {
            self.split.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
        };
        out.push_str(&format!("split: {split}\n"));
        for p in &self.known_points {
            out.push_str(&format!("point: {p}\n"));
        }
        out.push_str(&format!("source: {}\n", self.source));
        out
    }
}

/// Renders entries as blank-line separated records.
pub fn write_catalog(entries: &[CatalogEntry]) -> String {
    entries.iter().map(|e| e.to_record()).collect::<Vec<_>>().join("\n")
}

/// Parses the output of [`write_catalog`]. Points are taken as written;
/// checking them is left to the verifier.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, FamilyError> {
    #[derive(Default)]
    struct Partial {
        label: Option<String>,
        curve: Option<RationalWeierstrass>,
        torsion_q: Option<TorsionLabel>,
        torsion_ext: Option<TorsionLabel>,
        split: Vec<Condition>,
        points: Vec<RationalPoint>,
        source: String,
        start: usize,
    }
    fn finish(p: Partial) -> Result<CatalogEntry, FamilyError> {
        let missing = |what: &str| FamilyError::Parse {
            line: p.start,
            msg: format!("record is missing {what}"),
        };
        let curve = p.curve.clone().ok_or_else(|| missing("curve"))?;
        Ok(CatalogEntry {
            label: p.label.clone().ok_or_else(|| missing("label"))?,
            curve,
            torsion_q: p.torsion_q.clone().ok_or_else(|| missing("torsion_q"))?,
            torsion_ext: p.torsion_ext.clone().ok_or_else(|| missing("torsion_ext"))?,
            split: p.split,
            known_points: p.points,
            source: p.source,
        })
    }

    let mut out = Vec::new();
    let mut cur: Option<Partial> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            if line.is_empty() {
                if let Some(p) = cur.take() {
                    out.push(finish(p)?);
                }
            }
            continue;
        }
        let err = |msg: String| FamilyError::Parse { line: line_no, msg };
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(format!("expected 'key: value', got {line:?}")))?;
        let value = value.trim();
        let p = cur.get_or_insert_with(|| Partial { start: line_no, ..Default::default() });
        match key.trim() {
            "label" => p.label = Some(value.to_string()),
            "curve" => p.curve = Some(value.parse().map_err(|e: CurveError| err(e.to_string()))?),
            "torsion_q" => p.torsion_q = Some(value.parse().map_err(err)?),
            "torsion_ext" => p.torsion_ext = Some(value.parse().map_err(err)?),
            "split" => {
                if value != "all" {
                    p.split = value
                        .split(';')
                        .map(|c| c.parse::<Condition>())
                        .collect::<Result<_, _>>()
                        .map_err(err)?;
                }
            }
            "point" => p.points.push(value.parse().map_err(|e: CurveError| err(e.to_string()))?),
            "source" => p.source = value.to_string(),
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    if let Some(p) = cur.take() {
        out.push(finish(p)?);
    }
    Ok(out)
}

fn leg(a: i64) -> Condition {
    Condition::Legendre { a, expected: 1 }
}

fn long(a: [(i64, i64); 5]) -> RationalWeierstrass {
    let c = a.map(|(n, d)| rat(n, d));
    let [a1, a2, a3, a4, a6] = c;
    RationalWeierstrass::new(a1, a2, a3, a4, a6).expect("catalog curves are nonsingular")
}

fn short_big(a: (&str, &str), b: (&str, &str)) -> RationalWeierstrass {
    let q = |(n, d): (&str, &str)| {
        Rational::new(n.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap())
    };
    RationalWeierstrass::short(q(a), q(b)).expect("catalog curves are nonsingular")
}

fn pt(x: (i64, i64), y: (i64, i64)) -> RationalPoint {
    RationalPoint::from_ratios(x, y)
}

/// Labels of the eight curves used in the smoothness census, in table order.
pub const CENSUS_LABELS: [&str; 8] = ["E0", "E7", "E9", "E12", "E2x8", "E4x8", "E5x5", "E6x6"];

/// Every explicit curve with its metadata.
pub fn catalog() -> Vec<CatalogEntry> {
    let q = TorsionLabel::over_q;
    let ext = |m, n, f: &str| TorsionLabel::new(m, n, f).expect("valid label");
    let census = "smoothness census curve".to_string();
    vec![
        CatalogEntry {
            label: "E0".into(),
            curve: long([(0, 1), (0, 1), (0, 1), (0, 1), (3, 1)]),
            torsion_q: q(1, 1),
            torsion_ext: q(1, 1),
            split: vec![],
            known_points: vec![pt((1, 1), (2, 1))],
            source: census.clone(),
        },
        CatalogEntry {
            label: "E7".into(),
            curve: long([(-55, 1), (-448, 1), (-448, 1), (0, 1), (0, 1)]),
            torsion_q: q(1, 7),
            torsion_ext: q(1, 7),
            split: vec![],
            known_points: vec![],
            source: census.clone(),
        },
        CatalogEntry {
            label: "E9".into(),
            curve: long([(-47, 1), (-624, 1), (-624, 1), (0, 1), (0, 1)]),
            torsion_q: q(1, 9),
            torsion_ext: q(1, 9),
            split: vec![],
            known_points: vec![],
            source: census.clone(),
        },
        CatalogEntry {
            label: "E12".into(),
            curve: long([(19, 40), (-273, 400), (-273, 400), (0, 1), (0, 1)]),
            torsion_q: q(1, 12),
            torsion_ext: ext(2, 12, "Q(sqrt(-143))"),
            split: vec![leg(-143)],
            known_points: vec![],
            source: census.clone(),
        },
        CatalogEntry {
            label: "E2x8".into(),
            curve: long([(0, 1), (54721, 225), (0, 1), (4096, 1), (0, 1)]),
            torsion_q: q(2, 8),
            torsion_ext: q(2, 8),
            split: vec![],
            known_points: vec![],
            source: census.clone(),
        },
        CatalogEntry {
            label: "E4x8".into(),
            curve: long([(1, 1), (1, 1), (1, 1), (-52431, 1), (-2731947, 1)]),
            torsion_q: q(2, 2),
            torsion_ext: ext(4, 8, "Q(i,sqrt(-7))"),
            split: vec![leg(-1), leg(-7)],
            known_points: vec![],
            source: census.clone(),
        },
        CatalogEntry {
            label: "E5x5".into(),
            curve: long([(0, 1), (1, 1), (1, 1), (-5092900, 1), (709824595630, 1)]),
            torsion_q: q(1, 5),
            torsion_ext: ext(5, 5, "Q(zeta5)"),
            split: vec![Condition::Congruence { modulus: 5, residue: 1 }],
            known_points: vec![],
            source: census.clone(),
        },
        CatalogEntry {
            label: "E6x6".into(),
            curve: long([(1, 1), (0, 1), (1, 1), (-371066, 1), (-47384980, 1)]),
            torsion_q: q(1, 6),
            torsion_ext: ext(6, 6, "Q(sqrt(-3),sqrt(217))"),
            split: vec![leg(-3), leg(217)],
            known_points: vec![],
            source: census,
        },
        CatalogEntry {
            label: "3x3-u1".into(),
            curve: long([
                (0, 1),
                (1850293, 729),
                (0, 1),
                (28659904, 81),
                (205347524322304, 531441),
            ]),
            torsion_q: q(1, 3),
            torsion_ext: ext(3, 3, "Q(sqrt(-3))"),
            split: vec![leg(-3)],
            known_points: vec![pt((0, 1), (14329952, 729)), pt((7904, 9), (42080896, 729))],
            source: "Z/3xZ/3 rank-2 family at u=1 (Rabarison curve at T=11/3)".into(),
        },
        CatalogEntry {
            label: "5x5-T3".into(),
            curve: long([(0, 1), (1, 1), (1, 1), (-226248, 1), (-20170186, 1)]),
            torsion_q: q(1, 5),
            torsion_ext: ext(5, 5, "Q(zeta5)"),
            split: vec![Condition::Congruence { modulus: 5, residue: 1 }],
            known_points: vec![pt((-132, 1), (2722, 1))],
            source: "Z/5xZ/5 family at T=3, minimal model".into(),
        },
        CatalogEntry {
            label: "4x8-t4".into(),
            curve: long([(1, 1), (3600, 83521), (3600, 83521), (0, 1), (0, 1)]),
            torsion_q: q(2, 8),
            torsion_ext: ext(4, 8, "Q(i,sqrt(161))"),
            split: vec![leg(-1), leg(161)],
            known_points: vec![pt((-30, 289), (3900, 83521))],
            source: "Z/4xZ/8 generator at t=4".into(),
        },
        CatalogEntry {
            label: "4x8-t3".into(),
            curve: short_big(("-67950603", "390625"), ("-126442451898", "244140625")),
            torsion_q: q(2, 2),
            torsion_ext: ext(4, 8, "Q(i,sqrt(-7))"),
            split: vec![leg(-1), leg(-7)],
            known_points: vec![pt((-3549, 625), (10584, 625))],
            source: "Z/4xZ/8 generator at t=3, twisted by -7".into(),
        },
        CatalogEntry {
            label: "5x5-t1/3".into(),
            curve: short_big(
                ("-10605390625", "10460353203"),
                ("-4238740478515625", "22236242266222092"),
            ),
            torsion_q: q(1, 1),
            torsion_ext: ext(5, 5, "Q(zeta5)"),
            split: vec![Condition::Congruence { modulus: 5, residue: 1 }],
            known_points: vec![pt((-9875, 177147), (75625, 3188646))],
            source: "Z/5xZ/5 construction at t=1/3, as printed".into(),
        },
        CatalogEntry {
            label: "5x5-t-1/2".into(),
            curve: short_big(("147734375", "50331648"), ("1010986328125", "927712935936")),
            torsion_q: q(1, 1),
            torsion_ext: ext(5, 5, "Q(zeta5)"),
            split: vec![Condition::Congruence { modulus: 5, residue: 1 }],
            known_points: vec![pt((15625, 12288), (171875, 65536))],
            source: "Z/5xZ/5 construction at t=-1/2".into(),
        },
    ]
}

pub fn catalog_entry(label: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.label == label)
}

/// The eight census curves in table order.
pub fn census_curves() -> Vec<CatalogEntry> {
    let all = catalog();
    CENSUS_LABELS
        .iter()
        .map(|l| all.iter().find(|e| e.label == *l).expect("census label").clone())
        .collect()
}

/// Role of a family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamRole {
    /// t of the Z/4 x Z/8 generator
    SmallT,
    /// u of the rank-2 Z/3 x Z/3 family
    U,
    /// T of the Rabarison, Z/3 x Z/6 and Z/5 x Z/5 families
    BigT,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParam {
    pub value: Rational,
    pub role: ParamRole,
}

/// Σ c_i x^i, coefficients ascending.
fn poly(coeffs: &[i64], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, &c| acc * x + int(c))
}

fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

fn degenerate(param: &Rational, factor: &'static str) -> FamilyError {
    FamilyError::Degenerate { param: fmt_rational(param), factor }
}

/// Squarefree kernel of a nonzero rational a/b, i.e. of a·b.
pub fn rational_kernel(q: &Rational) -> Result<BigInt, FamilyError> {
    let n = q.numer() * q.denom();
    numth::squarefree_kernel(&n).ok_or_else(|| FamilyError::KernelTooLarge(fmt_rational(q)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated4x8 {
    pub curve: RationalWeierstrass,
    /// Squarefree kernel d of t⁴ − 6t² + 1; the field is ℚ(i, √d).
    pub kernel: BigInt,
    pub field: String,
    pub split: Vec<Condition>,
}

/// y² + xy − ay = x³ − ax² with v = (t⁴−6t²+1)/(4(t²+1)²), a = v² − 1/16.
/// Its torsion grows to ℤ/4 ⊕ ℤ/8 over ℚ(i, √(t⁴−6t²+1)).
pub fn gen_4x8(t: &Rational) -> Result<Generated4x8, FamilyError> {
    let w = poly(&[1, 0, -6, 0, 1], t);
    if w.is_zero() {
        return Err(degenerate(t, "t^4-6t^2+1"));
    }
    let s = poly(&[1, 0, 1], t);
    let v = &w / (int(4) * &s * &s);
    let a = &v * &v - rat(1, 16);
    if a.is_zero() {
        let factor = if t.is_zero() { "t" } else { "t^2-1" };
        return Err(degenerate(t, factor));
    }
    let curve = RationalWeierstrass::new(int(1), -a.clone(), -a.clone(), int(0), int(0))
        .map_err(|_| degenerate(t, "discriminant"))?;
    let kernel = rational_kernel(&w)?;
    let field = format!("Q(i,sqrt({kernel}))");
    let split = vec![leg(-1), Condition::Legendre { a: kernel_i64(&kernel)?, expected: 1 }];
    Ok(Generated4x8 { curve, kernel, field, split })
}

fn kernel_i64(k: &BigInt) -> Result<i64, FamilyError> {
    i64::try_from(k).map_err(|_| FamilyError::KernelTooLarge(k.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rabarison {
    pub curve: RationalWeierstrass,
    /// The two rational points of order 3.
    pub torsion: [RationalPoint; 2],
    /// (0, 8T⁶ + 216)
    pub free_point: RationalPoint,
}

/// Y² = X³ + (108+T⁶)X² + (144T⁶+3888)X + 64T¹² + 3456T⁶ + 46656, with
/// ℤ/3 ⊕ ℤ/3 torsion over ℚ(√−3)(T) and a point of infinite order.
pub fn rabarison_3x3(t: &Rational) -> Result<Rabarison, FamilyError> {
    if t.is_zero() {
        return Err(degenerate(t, "T"));
    }
    let t6 = pow(t, 6);
    let a2 = int(108) + &t6;
    let a4 = int(144) * &t6 + int(3888);
    let a6 = int(64) * &t6 * &t6 + int(3456) * &t6 + int(46656);
    let curve = RationalWeierstrass::new(int(0), a2, int(0), a4, a6)
        .map_err(|_| degenerate(t, "discriminant"))?;
    let tx = poly(&[-36, 0, 12, 0, -4], t);
    let ty = poly(&[0, 0, 0, 36, 0, -12, 0, 4], t);
    let torsion = [
        RationalPoint::new(tx.clone(), -ty.clone()),
        RationalPoint::new(tx, ty),
    ];
    let free_point = RationalPoint::new(int(0), int(8) * &t6 + int(216));
    Ok(Rabarison { curve, torsion, free_point })
}

/// T = (u²−16u−29)/(u²−13) parameterizes 13T² − 42T + 93 = z²; returns
/// (T, z) with z = 8(u²+2u+13)/(u²−13).
pub fn param_t(u: &Rational) -> (Rational, Rational) {
    let d = poly(&[-13, 0, 1], u);
    let t = poly(&[-29, -16, 1], u) / &d;
    let z = int(8) * poly(&[13, 2, 1], u) / d;
    (t, z)
}

pub fn conic_3x3(t: &Rational) -> Rational {
    poly(&[93, -42, 13], t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTwo3x3 {
    pub curve: RationalWeierstrass,
    pub p1: RationalPoint,
    pub p2: RationalPoint,
}

// The family over ℚ(u): the Rabarison curve at T = T(u), scaled by
// (x, y) ↦ (s²x, s³y) with s = (u²−13)³.
const RANK2_A2: [i64; 13] = [
    1116118693, 1969070304, 2352294282, 1658452000, 508999635, -818496, -26095764, 28224,
    823995, -68000, -4758, -96, 109,
];
const F1: [i64; 3] = [37, 32, 7];
const F2: [i64; 3] = [67, -16, 1];
const F3: [i64; 5] = [337, 232, 30, -8, 1];
const F4: [i64; 5] = [217, 304, 246, 16, 1];
const F5: [i64; 3] = [-13, 0, 1];

/// The explicit rank-2 family with ℤ/3 ⊕ ℤ/3 torsion over ℚ(√−3)(u) and
/// its two independent points.
pub fn gen_3x3_rank2(u: &Rational) -> Result<RankTwo3x3, FamilyError> {
    let (f1, f2, f3, f4, f5) = (poly(&F1, u), poly(&F2, u), poly(&F3, u), poly(&F4, u), poly(&F5, u));
    let f1234 = &f1 * &f2 * &f3 * &f4;
    let f5_3 = pow(&f5, 3);
    let f5_6 = &f5_3 * &f5_3;
    let a2 = poly(&RANK2_A2, u);
    let a4 = int(576) * &f1234 * &f5_6;
    let a6 = int(1024) * &f1234 * &f1234 * &f5_6;
    let curve = RationalWeierstrass::new(int(0), a2, int(0), a4, a6)
        .map_err(|_| degenerate(u, "discriminant"))?;
    let p1 = RationalPoint::new(int(0), int(32) * &f1234 * &f5_3);
    let x2 = int(-192) * (u + int(1)) * &f1 * &f2 * &f5_3;
    let y2 = int(32) * &f1 * &f2 * poly(&[13, 2, 1], u) * pow(&poly(&[-29, -16, 1], u), 3) * &f5_3;
    let p2 = RationalPoint::new(x2, y2);
    Ok(RankTwo3x3 { curve, p1, p2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant3x6 {
    I,
    II,
    III,
}

impl FromStr for Variant3x6 {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "i" => Ok(Variant3x6::I),
            "ii" => Ok(Variant3x6::II),
            "iii" => Ok(Variant3x6::III),
            other => Err(FamilyError::UnknownFamily(format!("3x6:{other}"))),
        }
    }
}

impl fmt::Display for Variant3x6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant3x6::I => "i",
            Variant3x6::II => "ii",
            Variant3x6::III => "iii",
        })
    }
}

/// The quartic/cubic whose rational points give the extra point of each
/// ℤ/3 ⊕ ℤ/6 variant.
pub fn cond_3x6(t: &Rational, variant: Variant3x6) -> Rational {
    match variant {
        Variant3x6::I => poly(&[0, 96, -144, 72, -27], t),
        Variant3x6::II => poly(&[-1200, 216, -324, 162], t),
        Variant3x6::III => poly(&[4, -8, 12, -6], t),
    }
}

/// A = −24(3T²−4)(9T⁴−36T³+72T²−48T+16), B = 144(T−2)³(3T−2)³(3T²+4)³.
fn coeffs_3x6(t: &Rational) -> (Rational, Rational) {
    let a = int(-24) * poly(&[-4, 0, 3], t) * poly(&[16, -48, 72, -36, 9], t);
    let b = int(144)
        * pow(&poly(&[-2, 1], t), 3)
        * pow(&poly(&[-2, 3], t), 3)
        * pow(&poly(&[4, 0, 3], t), 3);
    (a, b)
}

fn check_3x6_degenerate(t: &Rational) -> Result<(), FamilyError> {
    if t.is_zero() {
        return Err(degenerate(t, "T"));
    }
    if poly(&[-2, 1], t).is_zero() {
        return Err(degenerate(t, "T-2"));
    }
    if poly(&[-2, 3], t).is_zero() {
        return Err(degenerate(t, "3T-2"));
    }
    Ok(())
}

/// (b1, w) with b1 + A + B/b1 = w² · cond_3x6(T).
fn b1_and_weight(t: &Rational, variant: Variant3x6) -> (Rational, Rational) {
    let (tm2, t3m2, q) = (poly(&[-2, 1], t), poly(&[-2, 3], t), poly(&[4, 0, 3], t));
    match variant {
        Variant3x6::I => (int(-12) * pow(&tm2, 3) * &q * &t3m2, int(8) * t),
        Variant3x6::II => (
            rat(3, 2) * pow(&tm2, 2) * pow(&q, 2) * pow(&t3m2, 3),
            t * poly(&[4, -6, 3], t) / int(2),
        ),
        Variant3x6::III => (int(4) * &tm2 * &q * pow(&t3m2, 3), int(32)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated3x6 {
    pub curve: RationalWeierstrass,
    pub point: RationalPoint,
}

/// y² = x³ + Ax² + Bx with torsion ℤ/3 ⊕ ℤ/6 over ℚ(√−3), plus the point
/// with x = b1 coming from a rational point (T, z) on the variant's curve.
pub fn gen_3x6(t: &Rational, variant: Variant3x6, z: &Rational) -> Result<Generated3x6, FamilyError> {
    check_3x6_degenerate(t)?;
    let cond = cond_3x6(t, variant);
    if &(z * z) != &cond {
        return Err(FamilyError::ConditionNotSatisfied {
            expected: fmt_rational(&cond),
            z: fmt_rational(z),
        });
    }
    let (a, b) = coeffs_3x6(t);
    let curve = RationalWeierstrass::new(int(0), a, int(0), b, int(0))
        .map_err(|_| degenerate(t, "discriminant"))?;
    let (b1, w) = b1_and_weight(t, variant);
    let y = &b1 * w * z;
    let point = RationalPoint::new(b1, y);
    debug_assert!(curve.is_on_curve(&point));
    Ok(Generated3x6 { curve, point })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated6x6 {
    pub curve: RationalWeierstrass,
    pub point: RationalPoint,
    /// Squarefree kernel of the discriminant.
    pub kernel: BigInt,
    pub field: String,
    pub split: Vec<Condition>,
}

/// The ℤ/3 ⊕ ℤ/6 curve viewed over ℚ(√−3, √Δ), where its torsion becomes
/// ℤ/6 ⊕ ℤ/6.
pub fn gen_6x6(t: &Rational, variant: Variant3x6, z: &Rational) -> Result<Generated6x6, FamilyError> {
    let g = gen_3x6(t, variant, z)?;
    // Δ = 2^27·3^6·T³(3T²−6T+4)³·(square), so its kernel is that of
    // 2T(3T²−6T+4).
    let kernel = rational_kernel(&(int(2) * t * poly(&[4, -6, 3], t)))?;
    let field = format!("Q(sqrt(-3),sqrt({kernel}))");
    let split = vec![leg(-3), Condition::Legendre { a: kernel_i64(&kernel)?, expected: 1 }];
    Ok(Generated6x6 { curve: g.curve, point: g.point, kernel, field, split })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiveFive {
    pub curve: RationalWeierstrass,
    /// T⁵ − 18; a rational square exactly when the extra point exists.
    pub condition: Rational,
}

/// y² = x³ + Ax + B with A = −27(T²⁰+228T¹⁵+494T¹⁰−228T⁵+1),
/// B = 54(T³⁰−522T²⁵−10005T²⁰−10005T¹⁰+522T⁵+1).
pub fn fivefive_family(t: &Rational) -> Result<FiveFive, FamilyError> {
    if t.is_zero() {
        return Err(degenerate(t, "T"));
    }
    let t5 = pow(t, 5);
    let a = int(-27) * poly(&[1, -228, 494, 228, 1], &t5);
    let b = int(54) * poly(&[1, 522, -10005, 0, -10005, -522, 1], &t5);
    let curve = RationalWeierstrass::short(a, b).map_err(|_| degenerate(t, "discriminant"))?;
    Ok(FiveFive { curve, condition: t5 - int(18) })
}

/// Family selector for the CLI and ECM curve sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    F4x8,
    F3x3,
    F3x6(Variant3x6),
    F5x5,
    F6x6(Variant3x6),
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "4x8" => Ok(Family::F4x8),
            "3x3" => Ok(Family::F3x3),
            "5x5" => Ok(Family::F5x5),
            "6x6" => Ok(Family::F6x6(Variant3x6::II)),
            _ => {
                if let Some(v) = s.strip_prefix("3x6:") {
                    return Ok(Family::F3x6(v.parse()?));
                }
                if let Some(v) = s.strip_prefix("6x6:") {
                    return Ok(Family::F6x6(v.parse()?));
                }
                Err(FamilyError::UnknownFamily(s.to_string()))
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::F4x8 => write!(f, "4x8"),
            Family::F3x3 => write!(f, "3x3"),
            Family::F3x6(v) => write!(f, "3x6:{v}"),
            Family::F5x5 => write!(f, "5x5"),
            Family::F6x6(v) => write!(f, "6x6:{v}"),
        }
    }
}

impl Family {
    pub fn param_role(&self) -> ParamRole {
        match self {
            Family::F4x8 => ParamRole::SmallT,
            Family::F3x3 => ParamRole::U,
            _ => ParamRole::BigT,
        }
    }

    /// Builds a catalog-style record for one member of the family.
    pub fn generate(&self, param: &Rational, z: Option<&Rational>) -> Result<CatalogEntry, FamilyError> {
        let label = format!("{self}[{}]", fmt_rational(param).trim_end_matches("/1"));
        let need_z = || {
            z.ok_or_else(|| FamilyError::ConditionNotSatisfied {
                expected: "a z value (--z)".into(),
                z: "none".into(),
            })
        };
        let q = TorsionLabel::over_q;
        let ext = |m, n, f: &str| TorsionLabel::new(m, n, f).expect("valid label");
        Ok(match *self {
            Family::F4x8 => {
                let g = gen_4x8(param)?;
                CatalogEntry {
                    label,
                    curve: g.curve,
                    torsion_q: q(2, 8),
                    torsion_ext: ext(4, 8, &g.field),
                    split: g.split,
                    known_points: vec![],
                    source: "Z/4xZ/8 generator".into(),
                }
            }
            Family::F3x3 => {
                let g = gen_3x3_rank2(param)?;
                CatalogEntry {
                    label,
                    curve: g.curve,
                    torsion_q: q(1, 3),
                    torsion_ext: ext(3, 3, "Q(sqrt(-3))"),
                    split: vec![leg(-3)],
                    known_points: vec![g.p1, g.p2],
                    source: "Z/3xZ/3 rank-2 family".into(),
                }
            }
            Family::F3x6(v) => {
                let g = gen_3x6(param, v, need_z()?)?;
                CatalogEntry {
                    label,
                    curve: g.curve,
                    torsion_q: q(1, 6),
                    torsion_ext: ext(3, 6, "Q(sqrt(-3))"),
                    split: vec![leg(-3)],
                    known_points: vec![g.point],
                    source: format!("Z/3xZ/6 family, variant {v}"),
                }
            }
            Family::F6x6(v) => {
                let g = gen_6x6(param, v, need_z()?)?;
                CatalogEntry {
                    label,
                    curve: g.curve,
                    torsion_q: q(1, 6),
                    torsion_ext: ext(6, 6, &g.field),
                    split: g.split,
                    known_points: vec![g.point],
                    source: format!("Z/3xZ/6 family, variant {v}, over the discriminant field"),
                }
            }
            Family::F5x5 => {
                let g = fivefive_family(param)?;
                CatalogEntry {
                    label,
                    curve: g.curve,
                    torsion_q: q(1, 5),
                    torsion_ext: ext(5, 5, "Q(zeta5)"),
                    split: vec![Condition::Congruence { modulus: 5, residue: 1 }],
                    known_points: vec![],
                    source: format!("Z/5xZ/5 family, T^5-18 = {}", fmt_rational(&g.condition)),
                }
            }
        })
    }
}

/// True iff q is the square of a rational.
pub fn is_rational_square(q: &Rational) -> bool {
    if q.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(q.numer()) && sq(q.denom())
}

/// Rational square root of a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if !is_rational_square(q) {
        return None;
    }
    Some(Rational::new(q.numer().sqrt(), q.denom().sqrt()))
}

/// Rational points (T, z), z ≥ 0, on z² = cond_3x6(T) with T = a/b,
/// |a|, |b| ≤ bound, in order of increasing b then a.
pub fn search_3x6(variant: Variant3x6, bound: i64) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for b in 1..=bound {
        for a in -bound..=bound {
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            let t = rat(a, b);
            if let Some(z) = rational_sqrt(&cond_3x6(&t, variant)) {
                out.push((t, z));
            }
        }
    }
    out
}
