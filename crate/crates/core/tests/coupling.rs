use std::sync::Arc;

use hexperc::arms::{estimate_alpha, ArmPattern};
use hexperc::coupling::{
    circuit_frequency, coupling_tv_experiment, fingerprint_sample, outermost_open_circuit,
    relative_quality, reverse_fingerprint, sample_conditioned, separation_statistic,
    ConditionalSampler, OuterGeometry,
};
use hexperc::stats::Estimate;
use hexperc::{Coloring, Configuration, Error, Hex, Point, RandomField, Region, SiteSet, Square};
use proptest::prelude::*;

#[test]
fn trivial_condition_accepts_the_first_sample() {
    let s = ConditionalSampler::new(4, 10).unwrap();
    let region = Arc::new(Square::axis(Point::default(), 3.0).sites(1.0));
    let (c, attempts) = sample_conditioned(&s, region.clone(), |_| true).unwrap();
    assert_eq!(attempts, 1);
    assert_eq!(c, Configuration::sample(region, 4, 0).unwrap());
    assert!(ConditionalSampler::new(4, 0).is_err());
}

#[test]
fn budget_exhaustion_is_reported() {
    let s = ConditionalSampler::new(4, 100).unwrap();
    let err = s.collect(1, false, |_| None::<()>).unwrap_err();
    assert!(matches!(
        err,
        Error::BudgetExhausted {
            attempts: 100,
            accepted: 0
        }
    ));
    assert_eq!(err.exit_code(), 3);
    let part = s.collect(5, true, |i| (i % 50 == 0).then_some(i)).unwrap();
    assert_eq!(part.samples.len(), 2);
}

#[test]
fn conditioning_on_one_site_leaves_the_others_fair() {
    let s = ConditionalSampler::new(8, 1 << 20).unwrap();
    let n = 20_000;
    let acc = s
        .collect(n, false, |i| {
            let f = RandomField::new(8, i);
            f.is_open(Hex::ORIGIN)
                .then(|| (f.is_open(Hex::ORIGIN), f.is_open(Hex::new(3, -1))))
        })
        .unwrap();
    assert!(acc.samples.iter().all(|(_, (x, _))| *x));
    let k = acc.samples.iter().filter(|(_, (_, y))| *y).count() as u64;
    let e = Estimate::frequency(k, n as u64);
    assert!((e.mean - 0.5).abs() < 4.0 * e.stderr, "{e:?}");
    assert!((acc.acceptance_rate() - 0.5).abs() < 0.02);
}

#[test]
fn acceptance_rate_is_the_arm_probability() {
    let (r, big_r) = (4.0, 16.0);
    let fp =
        fingerprint_sample(r, big_r, OuterGeometry::Centered, None, 8, 1500, 3, 1 << 24).unwrap();
    let acc = Estimate::frequency(fp.accepted, fp.attempts);
    let direct = estimate_alpha(&ArmPattern::four_arm(), r, big_r, 1.0, 20_000, 77)
        .unwrap()
        .estimate();
    assert!(acc.z_distance(&direct) < 4.0, "{acc:?} vs {direct:?}");
}

#[test]
fn identical_conditions_show_no_excess_tv() {
    let row = coupling_tv_experiment(
        4.0,
        16.0,
        OuterGeometry::Centered,
        OuterGeometry::Centered,
        8,
        1500,
        5,
        1 << 24,
    )
    .unwrap();
    assert!(
        row.tv.excess().abs() < 3.0 * row.tv.excess_stderr(),
        "{:?}",
        row.tv
    );
}

#[test]
fn outer_geometries_contain_the_centered_square() {
    for g in ["centered", "offset", "rotated"] {
        let g: OuterGeometry = g.parse().unwrap();
        let sq = g.square(10.0);
        for c in OuterGeometry::Centered.square(10.0).corners() {
            assert!(sq.depth(c) >= -1e-9, "{g:?}");
        }
    }
    assert!("round".parse::<OuterGeometry>().is_err());
}

#[test]
fn separation_at_the_smallest_ratio_is_nondegenerate() {
    let s = separation_statistic(4.0, 8.0, 400, 2, 1 << 22).unwrap();
    assert!(
        s.estimate.mean > 0.0 && s.estimate.mean < 1.0,
        "{:?}",
        s.estimate
    );
    assert!(s.best_four.mean >= s.estimate.mean);
}

#[test]
fn circuits_persist_in_wider_annuli() {
    for i in 0..500 {
        let c = RandomField::new(6, i);
        if outermost_open_circuit(&c, 3.0, 8.0).is_some() {
            assert!(outermost_open_circuit(&c, 3.0, 14.0).is_some());
        }
    }
    let a = circuit_frequency(3.0, 8.0, 2000, 1).unwrap();
    let b = circuit_frequency(3.0, 14.0, 2000, 1).unwrap();
    assert!(a.mean <= b.mean && b.mean > 0.0);
    let none = hexperc::config::FnColoring(|_| false);
    assert!(outermost_open_circuit(&none, 3.0, 8.0).is_none());
}

#[test]
fn circuits_are_open_and_surround_the_hole() {
    let all = hexperc::config::FnColoring(|_| true);
    let ring = outermost_open_circuit(&all, 2.0, 5.0).unwrap();
    assert!(ring.iter().all(|h| all.is_open(*h)));
    let set = SiteSet::from_sites(ring.iter().copied());
    // every ray from the center meets the circuit
    for k in 0..12 {
        let dir = Point::new(1.0, 0.0).rotate(k as f64 * std::f64::consts::FRAC_PI_6);
        assert!((0..60).any(|t| set.contains(Hex::nearest(dir * (t as f64 * 0.1)))));
    }
}

#[test]
fn relative_quality_examples() {
    assert_eq!(
        relative_quality(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0)]),
        1.0
    );
    let square = [
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ];
    let q = relative_quality(&square);
    assert!((q - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12, "{q}");
    let scaled: Vec<Point> = square.iter().map(|p| *p * 7.5).collect();
    assert!((relative_quality(&scaled) - q).abs() < 1e-12);
    // a point near one side but off the corners lowers the quality
    let mut more = square.to_vec();
    more.push(Point::new(0.5, 0.1));
    assert!(relative_quality(&more) < q);
    more.push(Point::new(0.5, 0.1));
    assert_eq!(relative_quality(&more), 0.0);
}

proptest! {
    #[test]
    fn reversing_a_fingerprint_twice_is_identity(code in 0u64..1 << 40) {
        prop_assert_eq!(reverse_fingerprint(reverse_fingerprint(code)), code);
        prop_assert_eq!(reverse_fingerprint(code) % 3 == 2, code % 3 == 2);
    }
}
