use hexperc::arms::ArmPattern;
use hexperc::stats::{
    fit_exponent, fit_exponent_trimmed, interface_boundary_decay, midpoint_quad, quasi_mult_check,
    ratio_limit_experiment, tv_distance, tv_with_ci, two_point_isotropy, wls, Estimate, Histogram,
    Tally,
};
use hexperc::{Point, Square};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact(mean: f64) -> Estimate {
    Estimate {
        mean,
        stderr: mean * 1e-3,
        n: 1,
    }
}

#[test]
fn exact_power_law_gives_exact_slope() {
    let pts: Vec<(f64, Estimate)> = [64.0, 128.0, 256.0, 512.0]
        .iter()
        .map(|&s: &f64| (s, exact(s.powf(-1.25))))
        .collect();
    let f = fit_exponent(&pts).unwrap();
    assert!((f.slope + 1.25).abs() < 1e-12, "{}", f.slope);
    assert!(f.chi2 < 1e-18);
    assert!(f.contains(-1.25, 1e-9));
}

#[test]
fn fit_needs_three_positive_points() {
    assert!(fit_exponent(&[(1.0, exact(1.0)), (2.0, exact(0.5))]).is_err());
    assert!(fit_exponent(&[
        (1.0, exact(1.0)),
        (2.0, exact(0.5)),
        (
            4.0,
            Estimate {
                mean: 0.0,
                stderr: 0.0,
                n: 1
            }
        )
    ])
    .is_err());
}

#[test]
fn trimmed_fit_drops_a_curved_coarse_end() {
    let mut pts: Vec<(f64, Estimate)> = [4.0, 8.0, 16.0, 32.0, 64.0]
        .iter()
        .map(|&s: &f64| (s, exact(s.powf(-0.5))))
        .collect();
    pts[0].1.mean *= 3.0;
    let f = fit_exponent_trimmed(&pts, 2.0).unwrap();
    assert_eq!(f.dropped, vec![4.0]);
    assert!((f.slope + 0.5).abs() < 1e-9);
}

#[test]
fn wls_on_a_line() {
    let (slope, _, intercept, chi2) = wls(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0], &[1.0, 2.0, 1.0]);
    assert!((slope - 2.0).abs() < 1e-12 && (intercept - 1.0).abs() < 1e-12 && chi2 < 1e-20);
}

#[test]
fn fitted_interval_covers_the_truth() {
    // binomial counts at a power-law probability; the 95% interval should
    // cover the true slope in at least 90 of 100 replications
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let scales = [8.0f64, 16.0, 32.0, 64.0];
    let n = 20_000u64;
    let mut covered = 0;
    for _ in 0..100 {
        let pts: Vec<(f64, Estimate)> = scales
            .iter()
            .map(|&s| {
                let p = 0.9 * s.powf(-0.8);
                let k = (0..n).filter(|_| rng.gen_bool(p)).count() as u64;
                (s, Estimate::frequency(k, n))
            })
            .collect();
        let f = fit_exponent(&pts).unwrap();
        covered += ((f.slope + 0.8).abs() <= 1.96 * f.slope_stderr) as u32;
    }
    assert!(covered >= 90, "coverage {covered}/100");
}

#[test]
fn estimate_arithmetic() {
    let e = Estimate::frequency(25, 100);
    assert_eq!(e.mean, 0.25);
    assert!((e.stderr - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-12);
    let (lo, hi) = e.ci(2.0);
    assert!(lo < 0.25 && hi > 0.25);
    let r = Estimate {
        mean: 2.0,
        stderr: 0.2,
        n: 10,
    }
    .ratio(Estimate {
        mean: 4.0,
        stderr: 0.4,
        n: 10,
    });
    assert!((r.mean - 0.5).abs() < 1e-12 && (r.stderr - 0.5 * 0.02f64.sqrt()).abs() < 1e-12);
    assert_eq!(e.z_distance(&e), 0.0);
    let fixed = Estimate {
        mean: 1.0,
        stderr: 0.0,
        n: 1,
    };
    assert_eq!(
        fixed.z_distance(&Estimate {
            mean: 2.0,
            stderr: 0.0,
            n: 1
        }),
        f64::INFINITY
    );
}

proptest! {
    #[test]
    fn merged_tallies_equal_one_pass(xs in prop::collection::vec(-50i64..50, 1..200), cut in any::<prop::sample::Index>()) {
        let k = cut.index(xs.len());
        let mut whole = Tally::default();
        let mut a = Tally::default();
        let mut b = Tally::default();
        for (i, &x) in xs.iter().enumerate() {
            whole.push(x);
            if i < k { a.push(x) } else { b.push(x) }
        }
        prop_assert_eq!(a.merge(b), whole);
        prop_assert_eq!(b.merge(a), whole);
        let m = a.estimate().merge(b.estimate());
        let w = whole.estimate();
        prop_assert!((m.mean - w.mean).abs() < 1e-9 && (m.stderr - w.stderr).abs() < 1e-9);
    }

    #[test]
    fn tv_is_a_distance(a in prop::collection::btree_map(0u64..8, 1u64..20, 1..8), b in prop::collection::btree_map(0u64..8, 1u64..20, 1..8)) {
        let (a, b): (Histogram, Histogram) = (a, b);
        let d = tv_distance(&a, &b);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
        prop_assert!((d - tv_distance(&b, &a)).abs() < 1e-12);
        prop_assert!(tv_distance(&a, &a) < 1e-12);
    }
}

#[test]
fn tv_of_disjoint_and_equal_laws() {
    let a: Histogram = [(0, 10), (1, 10)].into();
    let b: Histogram = [(2, 5)].into();
    assert_eq!(tv_distance(&a, &b), 1.0);
    let t = tv_with_ci(&a, &a, 100, 1).unwrap();
    assert_eq!(t.tv, 0.0);
    assert!(t.null_mean > 0.0 && t.excess() < 0.0);
    assert!(tv_with_ci(&a, &Histogram::new(), 10, 1).is_err());
}

#[test]
fn same_law_shows_no_excess_tv() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut draw = || {
        let mut h = Histogram::new();
        for _ in 0..2000 {
            *h.entry(rng.gen_range(0..12)).or_default() += 1;
        }
        h
    };
    let (a, b) = (draw(), draw());
    let t = tv_with_ci(&a, &b, 200, 3).unwrap();
    assert!(t.excess().abs() <= 3.0 * t.excess_stderr(), "{t:?}");
}

#[test]
fn ratio_at_unit_radius_is_one() {
    let tab = ratio_limit_experiment(&ArmPattern::four_arm(), 1.0, &[8, 16, 32], 500, 1).unwrap();
    for r in &tab.rows {
        assert_eq!(r.ratio.mean, 1.0);
    }
}

#[test]
fn quasi_multiplicativity_with_a_degenerate_factor() {
    let p = ArmPattern::four_arm();
    let rep = quasi_mult_check(&p, 4.0, 4.0, 16.0, 1.0, 2000, 5).unwrap();
    assert_eq!(rep.inner.mean, 1.0);
    assert!(rep.upper_holds(3.0));
    assert!(quasi_mult_check(&p, 8.0, 4.0, 16.0, 1.0, 10, 5).is_err());
}

#[test]
fn neighbors_connect_with_probability_one_quarter() {
    let n = 100_000;
    let rows = two_point_isotropy(1.0, &[0.0, std::f64::consts::FRAC_PI_3], 1.0, n, 9).unwrap();
    for r in rows {
        assert!((r.lattice_distance - 1.0).abs() < 1e-12);
        assert!(
            (r.estimate.mean - 0.25).abs() < 4.0 * (0.25f64 * 0.75 / n as f64).sqrt(),
            "{r:?}"
        );
    }
    assert!(two_point_isotropy(0.5, &[0.0], 1.0, 10, 1).is_err());
}

#[test]
fn boundary_mass_grows_with_delta_up_to_the_total() {
    let radius = 24.0;
    let q = midpoint_quad(radius).unwrap();
    let d = interface_boundary_decay(
        &q,
        &Square::axis(Point::default(), radius),
        &[1.0, 2.0, 4.0, 2.0 * radius],
        200,
        3,
    )
    .unwrap();
    for w in d.rows.windows(2) {
        assert!(w[0].mass.mean <= w[1].mass.mean);
    }
    assert_eq!(d.rows.last().unwrap().mass.mean, d.total.mean);
}
