use std::sync::Arc as Shared;

use hexperc::arms::{is_a_important, pivotal_by_flip};
use hexperc::measures::*;
use hexperc::{Annulus, Configuration, Point, Quad, RandomField, Square};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pivotal_measure_matches_flip(seed in any::<u64>(), r in 2.5f64..6.0, angle in 0.0f64..1.6) {
        let sq = Square::new(Point::new(0.2, 0.1), r, angle).unwrap();
        let q = Quad::from_square(&sq).unwrap();
        let region = Shared::new(q.sites().union(q.ring()));
        let c = Configuration::sample(region, seed, 0).unwrap();
        let m = pivotal_measure(&c, &q, 1.0);
        for x in q.sites().iter() {
            let expected = pivotal_by_flip(&c, x, &q).unwrap();
            prop_assert_eq!(m.sites().any(|s| s == x), expected, "site {:?}", x);
        }
    }

    #[test]
    fn important_measure_matches_site_test(seed in any::<u64>(), r in 1.5f64..4.0, k in 2.0f64..4.0) {
        let a = Annulus::new(Point::new(0.3, -0.2), r, r * k).unwrap();
        let c = RandomField::new(seed, 1);
        let m = a_important_measure(&c, &a, 1.0);
        let inner = a.inner();
        for x in inner.candidates().filter(|h| hexperc::lattice::Region::contains(&inner, *h)) {
            let expected = is_a_important(&c, x, &a, 1.0).unwrap();
            prop_assert_eq!(m.sites().any(|s| s == x), expected);
        }
    }
}

#[test]
fn square_family_is_a_tiling_and_ordered() {
    let domain = site_set(&Square::axis(Point::default(), 40.0));
    for rho in [8.0, 16.0] {
        let coarse = square_tiling(rho, &domain).unwrap();
        let balls = EnhancedTiling::site_balls(&domain, rho).unwrap();
        let coarser = square_tiling(2.0 * rho, &domain).unwrap();
        coarse.owners(&domain).unwrap();
        coarser.owners(&domain).unwrap();
        assert!(
            refines(&coarse, &balls, &domain).unwrap(),
            "H({rho}) vs balls"
        );
        assert!(
            refines(&balls, &coarser, &domain).unwrap(),
            "balls vs H({})",
            2.0 * rho
        );
        assert!(refines(&coarse, &coarser, &domain).unwrap());
    }
}

#[test]
fn overlapping_faces_are_rejected() {
    let domain = site_set(&Square::axis(Point::default(), 4.0));
    let a = Annulus::new(Point::default(), 3.0, 5.0).unwrap();
    let b = Annulus::new(Point::new(1.0, 0.0), 3.0, 5.0).unwrap();
    let t = EnhancedTiling { annuli: vec![a, b] };
    assert!(t.owners(&domain).is_err());
}

#[test]
fn filtering_dominations_on_samples() {
    let domain = site_set(&Square::axis(Point::default(), 12.0));
    let rho = 8.0;
    let fine = square_tiling(rho, &domain).unwrap();
    let coarse = square_tiling(2.0 * rho, &domain).unwrap();
    for i in 0..20 {
        let c = RandomField::new(5, i);
        let m_fine = tiling_measure(&c, &fine, &domain, 1.0).unwrap();
        let m_rho = rho_measure(&c, &domain, rho, 1.0);
        let m_coarse = tiling_measure(&c, &coarse, &domain, 1.0).unwrap();
        assert!(m_fine.dominates(&m_rho), "sample {i}");
        assert!(m_rho.dominates(&m_coarse), "sample {i}");
    }
}

#[test]
fn grid_rejects_fine_spacing() {
    let grid = hexperc::lattice::EpsGrid::new(0.01, Point::default(), 0.0).unwrap();
    let b = Square::axis(Point::default(), 0.25);
    assert!(doubled_squares(&b, &grid, 0.01).is_err());
}

#[test]
fn unit_dilation_gives_unit_ratio() {
    let outer = Square::axis(Point::default(), 16.0);
    let b = Square::axis(Point::default(), 4.0);
    let row = scaling_covariance_experiment(&outer, &b, 1.0, 200, 3).unwrap();
    assert_eq!(row.ratio.mean, 1.0);
    assert_eq!(row.ratio.stderr, 0.0);
}

#[test]
fn normalization_weights() {
    let n = Normalization {
        kind: MeasureKind::Pivotal4,
        mesh: 0.1,
        alpha: Some(0.01),
    };
    assert!((n.weight() - 1.0).abs() < 1e-12);
    assert_eq!(Normalization::raw(MeasureKind::Cluster1, 0.1).weight(), 1.0);
}
