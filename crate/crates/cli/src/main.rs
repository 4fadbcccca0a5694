//! `tecm`: census, curve generation, verification, point counting and ECM.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use torsion_ecm::census::{self, PrimeSetSpec, ReportFormat, SetLabel};
use torsion_ecm::counting::count_bsgs;
use torsion_ecm::ec_core::{parse_rational, IntegralModel, Rational, RationalWeierstrass};
use torsion_ecm::ecm::{self, CurveSource, EcmConfig, EcmOutcome};
use torsion_ecm::families::{self, CatalogEntry, Family};
use torsion_ecm::numth::{self, Condition, PrimeIndexRange, Sieve, SmoothBound, DEFAULT_SIEVE_LIMIT};
use torsion_ecm::verify::{self, SplitPredicate, Verdict};

/// Overrides the sieve limit used for prime sets.
const SIEVE_ENV: &str = "TECM_SIEVE_LIMIT";

#[derive(Parser, Debug)]
#[command(name = "tecm", version, about = "Elliptic curves with large torsion: smoothness census, generators, certificates and ECM")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count primes p in each set with |E(F_p)| B-smooth.
    Census {
        /// Comma separated set labels among A,B,C,D,E,F.
        #[arg(long, default_value = "A,B,C,D,E,F", value_delimiter = ',', value_parser = parse_sets)]
        sets: Vec<SetLabel>,
        /// "all" or comma separated catalog labels or curve files.
        #[arg(long, default_value = "all")]
        curves: String,
        /// Prime index range lo:hi (1-based, inclusive).
        #[arg(long, default_value = "50:10050")]
        range: PrimeIndexRange,
        /// Smoothness bound.
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Compare with the published table and print a discrepancy report on stderr.
        #[arg(long)]
        compare: bool,
    },
    /// Print the curve record of one family member.
    Gen {
        /// 4x8, 3x3, 3x6:i, 3x6:ii, 3x6:iii, 5x5, 6x6 or 6x6:<variant>.
        #[arg(long)]
        family: String,
        /// Family parameter (integer or a/b).
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        param: Rational,
        /// z with z² equal to the family condition (3x6 and 6x6).
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        z: Option<Rational>,
    },
    /// Run a certificate on a curve. Exit code 0 pass, 1 fail, 2 inconclusive.
    Verify {
        /// Catalog label or path to a curve record.
        #[arg(long)]
        curve: String,
        #[arg(long, value_enum)]
        check: Check,
        /// Claimed torsion order (injection).
        #[arg(long)]
        order: Option<u64>,
        /// Conditions separated by ';', e.g. "(-1/p)=1; p=1 mod 5". Defaults
        /// to the catalog predicate of the curve, or all primes.
        #[arg(long)]
        split: Option<String>,
        /// Number of primes to test (injection).
        #[arg(long, default_value_t = 200)]
        sample: usize,
        /// Coefficient bound (independence).
        #[arg(long, default_value_t = 10)]
        bound: i64,
    },
    /// Factor N with the elliptic curve method.
    Ecm {
        /// Number to factor.
        #[arg(value_parser = parse_u128)]
        n: u128,
        #[arg(long, default_value_t = 10_000)]
        b1: u64,
        /// Stage 2 bound; 0 disables stage 2.
        #[arg(long, default_value_t = 100_000)]
        b2: u64,
        /// catalog:all, catalog:<label>,<label>.., family:<name>:t=<p>,<p>.. or simple:<count>.
        #[arg(long, default_value = "catalog:all")]
        curves: String,
        #[arg(long, default_value_t = 20)]
        max_curves: usize,
        /// Worker threads; the outcome does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print |E(F_p)|.
    Count {
        /// Catalog label or path to a curve record.
        #[arg(long)]
        curve: String,
        #[arg(long)]
        p: u64,
    },
    /// Print the catalog as records.
    Catalog,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Check {
    Injection,
    Nontorsion,
    Independence,
}

fn parse_sets(s: &str) -> Result<SetLabel, String> {
    s.parse::<SetLabel>().map_err(|e| e.to_string())
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_u128(s: &str) -> Result<u128, String> {
    s.trim().parse::<u128>().map_err(|_| format!("{s:?} is not a nonnegative integer"))
}

/// A failure rendered as "module: cause".
struct Failure(String);

impl<E: std::fmt::Display> From<(&str, E)> for Failure {
    fn from((module, e): (&str, E)) -> Self {
        Failure(format!("{module}: {e}"))
    }
}

fn sieve() -> Result<Sieve, Failure> {
    let limit = match std::env::var(SIEVE_ENV) {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| Failure(format!("numth: {SIEVE_ENV}={v:?} is not an integer")))?,
        Err(_) => DEFAULT_SIEVE_LIMIT,
    };
    Ok(Sieve::new(limit))
}

/// Catalog label, or a file holding a catalog record or "a1,a2,a3,a4,a6".
fn load_curve(spec: &str) -> Result<CatalogEntry, Failure> {
    if let Some(e) = families::catalog_entry(spec) {
        return Ok(e);
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| Failure(format!("families: {spec:?} is neither a catalog label nor a readable file ({e})")))?;
    if let Ok(mut entries) = families::parse_catalog(&text) {
        if !entries.is_empty() {
            return Ok(entries.remove(0));
        }
    }
    let curve: RationalWeierstrass = text.trim().parse().map_err(|e| ("ec_core", e))?;
    let q = families::TorsionLabel::over_q(1, 1);
    Ok(CatalogEntry {
        label: spec.to_string(),
        curve,
        torsion_q: q.clone(),
        torsion_ext: q,
        split: vec![],
        known_points: vec![],
        source: format!("file {spec}"),
    })
}

fn parse_conditions(s: &str) -> Result<Vec<Condition>, Failure> {
    s.split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| c.trim().parse::<Condition>().map_err(|e| Failure(format!("verify: {e}"))))
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Census { sets, curves, range, bound, format, out, workers, compare } => {
            let entries: Vec<CatalogEntry> = if curves == "all" {
                families::census_curves()
            } else {
                curves.split(',').map(|c| load_curve(c.trim())).collect::<Result<_, _>>()?
            };
            let named: Vec<_> = entries.into_iter().map(|e| (e.label, e.curve)).collect();
            let specs: Vec<_> = sets.iter().map(|&l| PrimeSetSpec::with_range(l, range)).collect();
            let bound = SmoothBound::new(bound).map_err(|e| ("numth", e))?;
            let sieve = sieve()?;
            let report = census::run_census(&named, &specs, bound, &sieve, workers).map_err(|e| ("census", e))?;
            let fmt = match format {
                Format::Table => ReportFormat::Table,
                Format::Csv => ReportFormat::Csv,
            };
            let text = census::emit_report(&report, fmt);
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| Failure(format!("census: writing {}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            for s in &report.skipped {
                eprintln!("census: skipped {} at p={} ({})", s.curve, s.p, s.reason);
            }
            if compare {
                let cmp = census::compare(&report, census::reference_count);
                let worst = cmp.iter().map(|c| c.relative).fold(0.0, f64::max);
                let exact = cmp.iter().filter(|c| c.actual == c.expected).count();
                eprintln!("census: {exact}/{} cells exact, worst deviation {:.3}%", cmp.len(), 100.0 * worst);
                eprint!("{}", census::discrepancy_report(&report, &cmp, 10));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { family, param, z } => {
            let fam: Family = family.parse().map_err(|e| ("families", e))?;
            let entry = fam.generate(&param, z.as_ref()).map_err(|e| ("families", e))?;
            print!("{}", entry.to_record());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { curve, check, order, split, sample, bound } => {
            let entry = load_curve(&curve)?;
            let verdict = match check {
                Check::Injection => {
                    let order = order.ok_or_else(|| Failure("verify: --order is required for the injection check".into()))?;
                    let pred = match split {
                        Some(s) => SplitPredicate::new(parse_conditions(&s)?).map_err(|e| ("verify", e))?,
                        None => SplitPredicate::from_split(&entry.split),
                    };
                    let r = verify::torsion_injection_check(&entry.curve, order, &pred, sample, &sieve()?)
                        .map_err(|e| ("verify", e))?;
                    println!(
                        "injection {} order={} split={} primes={} failures={}",
                        entry.label,
                        r.torsion_order,
                        pred,
                        r.primes_tested,
                        r.failures.len()
                    );
                    for (p, n) in r.failures.iter().take(20) {
                        println!("  p={p} order={n}");
                    }
                    println!("verdict={} (evidence from split primes, not a proof)", r.verdict);
                    r.verdict
                }
                Check::Nontorsion => {
                    if entry.known_points.is_empty() {
                        return Err(Failure(format!("verify: {} has no known points", entry.label)));
                    }
                    let mut worst = Verdict::Pass;
                    for p in &entry.known_points {
                        let v = match verify::nontorsion_certificate(&entry.curve, p) {
                            Ok(c) => {
                                match c.witness {
                                    Some((a, b)) => {
                                        let o = |q| c.orders.iter().find(|x| x.0 == q).map_or(0, |x| x.1);
                                        println!("nontorsion {p}: pass (order {} mod {a}, {} mod {b})", o(a), o(b));
                                    }
                                    None => println!("nontorsion {p}: inconclusive after {} primes", c.orders.len()),
                                }
                                c.verdict
                            }
                            Err(e) => {
                                println!("nontorsion {p}: fail ({e})");
                                Verdict::Fail
                            }
                        };
                        worst = match (worst, v) {
                            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                            _ => Verdict::Pass,
                        };
                    }
                    println!("verdict={worst}");
                    worst
                }
                Check::Independence => {
                    let [p1, p2] = match entry.known_points.as_slice() {
                        [a, b, ..] => [a, b],
                        _ => return Err(Failure(format!("verify: {} needs two known points", entry.label))),
                    };
                    let r = verify::independence_heuristic(&entry.curve, p1, p2, bound).map_err(|e| ("verify", e))?;
                    println!("{}", r.describe());
                    println!("verdict={}", r.verdict);
                    r.verdict
                }
            };
            Ok(ExitCode::from(verdict.exit_code() as u8))
        }
        Command::Ecm { n, b1, b2, curves, max_curves, workers } => {
            let source = parse_source(&curves)?;
            let config = EcmConfig { b1, b2: (b2 > 0).then_some(b2), max_curves, source };
            config.validate().map_err(|e| ("ecm", e))?;
            if n < 2 {
                return Err(Failure(format!("ecm: N = {n} has no prime factor")));
            }
            if numth::is_prime(n) {
                println!("prime={n}");
                return Ok(ExitCode::SUCCESS);
            }
            if let Some(p) = [2u128, 3].into_iter().find(|p| n % p == 0) {
                println!("factor={p} curve=none stage=0");
                return Ok(ExitCode::SUCCESS);
            }
            let (prepared, skipped) = ecm::prepare_curves(&config.source, config.max_curves).map_err(|e| ("ecm", e))?;
            for s in &skipped {
                eprintln!("ecm: skipped {} ({})", s.label, s.reason);
            }
            let report = match workers {
                Some(w) if w > 1 => ecm::ecm_run_prepared_parallel(n, &prepared, &config, w),
                _ => ecm::ecm_run_prepared(n, &prepared, &config),
            }
            .map_err(|e| ("ecm", e))?;
            for (label, result) in &report.log {
                eprintln!("ecm: {label}: {result}");
            }
            println!("{}", report.outcome);
            Ok(match report.outcome {
                EcmOutcome::Factor { .. } => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            })
        }
        Command::Count { curve, p } => {
            let entry = load_curve(&curve)?;
            if p <= 3 || !numth::is_prime(p as u128) {
                return Err(Failure(format!("counting: p = {p} must be a prime above 3")));
            }
            let c = IntegralModel::new(&entry.curve).reduce(p as u128).map_err(|e| ("ec_core", e))?;
            let order = count_bsgs(&c).map_err(|e| ("counting", e))?;
            println!("{order}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog => {
            print!("{}", families::write_catalog(&families::catalog()));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_source(s: &str) -> Result<CurveSource, Failure> {
    let bad = || Failure(format!("ecm: bad --curves value {s:?}"));
    if s == "catalog:all" {
        return Ok(CurveSource::full_catalog());
    }
    if let Some(labels) = s.strip_prefix("catalog:") {
        return Ok(CurveSource::Catalog(labels.split(',').map(|l| l.trim().to_string()).collect()));
    }
    if let Some(count) = s.strip_prefix("simple:") {
        return Ok(CurveSource::Simple { count: count.parse().map_err(|_| bad())? });
    }
    if let Some(rest) = s.strip_prefix("family:") {
        let (name, params) = rest.rsplit_once(':').ok_or_else(bad)?;
        let params = params.split_once('=').map_or(params, |(_, v)| v);
        let family: Family = name.parse().map_err(|e| ("families", e))?;
        let params = params
            .split(',')
            .map(|p| parse_rational(p.trim()).map_err(|e| Failure(format!("ecm: {e}"))))
            .collect::<Result<_, _>>()?;
        return Ok(CurveSource::Family { family, params });
    }
    Err(bad())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn usage_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_census_sets() {
        let cli = Cli::try_parse_from(["tecm", "census", "--sets", "A,B", "--bound", "100"]).unwrap();
        match cli.command {
            Command::Census { sets, bound, .. } => {
                assert_eq!(sets, vec![SetLabel::A, SetLabel::B]);
                assert_eq!(bound, 100);
            }
            _ => panic!("wrong command"),
        }
    }

    #[test]
    fn rejects_non_integer_n() {
        let err = Cli::try_parse_from(["tecm", "ecm", "abc"]).unwrap_err();
        assert!(err.to_string().contains("abc"));
    }

    #[test]
    fn family_sources() {
        match parse_source("family:4x8:t=2,3,4").ok().unwrap() {
            CurveSource::Family { family, params } => {
                assert_eq!(family, Family::F4x8);
                assert_eq!(params.len(), 3);
            }
            _ => panic!(),
        }
        assert!(parse_source("family:3x6:ii:t=1/2").is_ok());
        assert!(parse_source("bogus").is_err());
    }
}
