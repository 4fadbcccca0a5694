use num_bigint::BigInt;

use torsion_ecm::census::{run_census, PrimeSetSpec, SetLabel};
use torsion_ecm::ec_core::{int, rat, IntegralModel, RationalPoint};
use torsion_ecm::ecm::{ecm_run, CurveSource, EcmConfig, EcmOutcome};
use torsion_ecm::families::{self, catalog, gen_4x8, parse_catalog, search_3x6, write_catalog, Family, Variant3x6};
use torsion_ecm::numth::{PrimeIndexRange, Sieve, SmoothBound};
use torsion_ecm::verify::{nontorsion_certificate, rank_witness_search, torsion_injection_check, SplitPredicate, Verdict};

#[test]
fn catalog_file_round_trip_through_disk() {
    let dir = std::env::temp_dir().join(format!("tecm-catalog-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.txt");
    std::fs::write(&path, write_catalog(&catalog())).unwrap();
    let back = parse_catalog(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, catalog());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn generated_4x8_member_to_factor() {
    // generate, find a point of infinite order, then use the curve in ECM
    let g = gen_4x8(&int(2)).unwrap();
    let twists = vec![BigInt::from(-1), g.kernel.clone(), -g.kernel.clone()];
    let w = rank_witness_search(&g.curve, &twists, 30).unwrap().expect("a point");
    assert!(w.curve.is_on_curve(&w.point));
    assert_eq!(w.certificate.verdict, Verdict::Pass);

    let config = EcmConfig {
        b1: 3000,
        b2: Some(30_000),
        max_curves: 5,
        source: CurveSource::Family { family: Family::F4x8, params: vec![int(2), int(3), int(4), int(5), rat(1, 2)] },
    };
    let n = 1_000_000_007u128 * 998_244_353;
    match ecm_run(n, &config).unwrap().outcome {
        EcmOutcome::Factor { g, .. } => assert!(g == 1_000_000_007 || g == 998_244_353),
        other => panic!("expected a factor, got {other}"),
    }
}

#[test]
fn sixsix_instance_from_search_has_36_at_split_primes() {
    let (t, z) = search_3x6(Variant3x6::II, 100)
        .into_iter()
        .find(|(t, z)| families::gen_3x6(t, Variant3x6::II, z).is_ok())
        .expect("a rational point on the variant (ii) curve");
    let g = families::gen_6x6(&t, Variant3x6::II, &z).unwrap();
    let split = SplitPredicate::new(g.split.clone()).unwrap();
    let r = torsion_injection_check(&g.curve, 36, &split, 50, &Sieve::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "T={t} field {}", g.field);
}

#[test]
fn rank2_family_points_are_nontorsion() {
    for u in [int(1), int(2)] {
        let g = families::gen_3x3_rank2(&u).unwrap();
        for p in [&g.p1, &g.p2] {
            assert_eq!(nontorsion_certificate(&g.curve, p).unwrap().verdict, Verdict::Pass);
        }
    }
}

#[test]
fn census_does_not_depend_on_model() {
    // the census counts of a curve and of its integral model agree
    let e = families::catalog_entry("E12").unwrap().curve;
    let integral = IntegralModel::new(&e).curve().clone();
    let sets = [PrimeSetSpec::with_range(SetLabel::A, PrimeIndexRange::new(50, 1050).unwrap())];
    let r = run_census(
        &[("E12".into(), e), ("E12-int".into(), integral)],
        &sets,
        SmoothBound::default(),
        &Sieve::default(),
        Some(2),
    )
    .unwrap();
    assert_eq!(r.orders["E12"], r.orders["E12-int"]);
}

#[test]
fn rabarison_torsion_reduces_with_order_three() {
    use torsion_ecm::counting::{count_bsgs, point_order};
    let r = families::rabarison_3x3(&rat(5, 2)).unwrap();
    let m = IntegralModel::new(&r.curve);
    let mut seen = 0;
    for &p in Sieve::new(2000).primes_between(5, 2000) {
        let Ok(c) = m.reduce(p as u128) else { continue };
        let pt = m.reduce_point(&r.torsion[1], p as u128).unwrap();
        let n = count_bsgs(&c).unwrap();
        assert_eq!(point_order(&c, &pt, n).unwrap(), 3, "p={p}");
        seen += 1;
    }
    assert!(seen > 200);
    assert!(!matches!(r.torsion[0], RationalPoint::Infinity));
}
