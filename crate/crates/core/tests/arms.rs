use std::sync::Arc;

use hexperc::arms::{
    arm_annulus, arm_event, arm_sample, estimate_alpha, is_a_important, is_quad_pivotal,
    is_rho_important, pivotal_by_flip, robust_arm_quality, ArmPattern,
};
use hexperc::config::FnColoring;
use hexperc::explore::{crossing_interfaces, Annular};
use hexperc::lattice::Arc as Side;
use hexperc::measures::pivotal_measure;
use hexperc::{Annulus, Coloring, Configuration, Hex, Point, Quad, RandomField, SiteSet, Square};
use proptest::prelude::*;

fn annulus(r: f64, big_r: f64) -> Annular<Square> {
    Annular::from_annulus(&Annulus::new(Point::new(0.1, 0.2), r, big_r).unwrap()).unwrap()
}

fn pattern(s: &str) -> ArmPattern {
    s.parse().unwrap()
}

/// `len` sites in a row; `ab` and `cd` are the two end caps.
fn single_file(len: i32) -> Quad {
    let sites = SiteSet::from_sites((0..len).map(|q| Hex::new(q, 0)));
    let mut arcs: [Vec<Hex>; 4] = Default::default();
    for h in sites.exterior().iter() {
        let k = match (h.r, h.q) {
            (0, q) if q < 0 => 0,
            (0, _) => 2,
            (r, _) if r < 0 => 1,
            _ => 3,
        };
        arcs[k].push(h);
    }
    Quad::new(sites, arcs).unwrap()
}

#[test]
fn patterns_parse_and_validate() {
    assert_eq!(pattern("OCOC"), ArmPattern::four_arm());
    assert_eq!(pattern("O"), ArmPattern::one_arm());
    assert_eq!(ArmPattern::four_arm().to_string(), "OCOC");
    assert!("OO".parse::<ArmPattern>().is_err());
    assert!("".parse::<ArmPattern>().is_err());
    assert!("OXC".parse::<ArmPattern>().is_err());
    assert!(pattern("OCOCC").len() == 5 && !pattern("OCOCC").is_alternating());
}

#[test]
fn all_open_annulus() {
    let a = annulus(2.0, 8.0);
    let open = FnColoring(|_| true);
    assert!(arm_event(&open, &a, &pattern("O")).unwrap());
    assert!(!arm_event(&open, &a, &pattern("OC")).unwrap());
    assert!(!arm_event(&open, &a, &pattern("OCOC")).unwrap());
    assert_eq!(robust_arm_quality(&open, &a), (0.0, 0.0));
    assert!(crossing_interfaces(&open, &a).is_empty());
}

#[test]
fn four_quadrant_arms_are_well_separated() {
    // open where |x| > |y|, closed elsewhere: four arms along the axes
    let a = Annular::from_annulus(&Annulus::new(Point::default(), 4.0, 20.0).unwrap()).unwrap();
    let c = FnColoring(|h: Hex| {
        let p = h.point();
        p.x.abs() > p.y.abs()
    });
    assert!(arm_event(&c, &a, &ArmPattern::four_arm()).unwrap());
    let (qi, qo) = robust_arm_quality(&c, &a);
    assert!(qi >= 1.0 && qo >= 1.0, "{qi} {qo}");
}

#[test]
fn five_arms_imply_four() {
    let a = annulus(2.0, 12.0);
    for i in 0..400 {
        let c = RandomField::new(31, i);
        if arm_event(&c, &a, &pattern("OCOCC")).unwrap() {
            assert!(arm_event(&c, &a, &ArmPattern::four_arm()).unwrap());
        }
        if arm_event(&c, &a, &ArmPattern::four_arm()).unwrap() {
            assert!(arm_event(&c, &a, &pattern("OC")).unwrap());
        }
    }
}

#[test]
fn arm_events_shrink_with_the_outer_radius() {
    let p = ArmPattern::four_arm();
    let near = arm_annulus(1.0, 16.0, 1.0).unwrap();
    let far = arm_annulus(1.0, 32.0, 1.0).unwrap();
    for i in 0..2000 {
        if arm_sample(&far, &p, 8, i) {
            assert!(arm_sample(&near, &p, 8, i));
        }
    }
    let a = estimate_alpha(&p, 1.0, 16.0, 1.0, 2000, 8).unwrap();
    let b = estimate_alpha(&p, 1.0, 32.0, 1.0, 2000, 8).unwrap();
    assert!(b.value <= a.value && a.hits > 0);
}

#[test]
fn estimates_reject_bad_input() {
    let p = ArmPattern::one_arm();
    assert!(estimate_alpha(&p, 1.0, 0.5, 0.1, 10, 0).is_err());
    assert!(estimate_alpha(&p, 0.1, 1.0, 0.1, 0, 0).is_err());
}

#[test]
fn all_open_or_closed_has_no_important_sites() {
    let a = Annulus::new(Point::default(), 3.0, 9.0).unwrap();
    for all in [true, false] {
        let c = FnColoring(move |_| all);
        for x in a.inner().sites(1.0).iter() {
            assert!(!is_a_important(&c, x, &a, 1.0).unwrap());
            assert!(!is_rho_important(&c, x, 4.0, 1.0));
        }
    }
    assert!(is_a_important(&FnColoring(|_| true), Hex::new(40, 0), &a, 1.0).is_err());
}

#[test]
fn importance_restricts_to_smaller_scales() {
    let big = Annulus::new(Point::default(), 2.0, 12.0).unwrap();
    let small = Annulus::new(Point::default(), 2.0, 6.0).unwrap();
    for i in 0..300 {
        let c = RandomField::new(4, i);
        for x in big.inner().sites(1.0).iter() {
            if is_a_important(&c, x, &big, 1.0).unwrap() {
                assert!(is_a_important(&c, x, &small, 1.0).unwrap());
            }
            if is_rho_important(&c, x, 6.0, 1.0) {
                assert!(is_rho_important(&c, x, 3.0, 1.0));
            }
        }
    }
}

#[test]
fn wide_all_open_quad_has_no_pivotal_site() {
    let q = Quad::from_square(&Square::axis(Point::default(), 6.0)).unwrap();
    let c = FnColoring(|_| true);
    for x in q.sites().iter() {
        assert!(!is_quad_pivotal(&c, x, &q).unwrap());
    }
    assert!(pivotal_measure(&c, &q, 1.0).is_empty());
}

#[test]
fn every_site_of_an_open_single_file_path_is_pivotal() {
    let q = single_file(7);
    assert_eq!(q.arc(Side::AB), vec![Hex::new(-1, 0)]);
    let c = Configuration::from_fn(Arc::new(q.sites().clone()), |_| true);
    for x in q.sites().iter() {
        assert!(is_quad_pivotal(&c, x, &q).unwrap());
        assert!(pivotal_by_flip(&c, x, &q).unwrap());
    }
    let m = pivotal_measure(&c, &q, 0.5);
    assert_eq!(m.count(), 7);
    assert!((m.mass() - 7.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interface_count_is_even(seed in any::<u64>(), r in 1.0f64..5.0, w in 1.0f64..12.0) {
        let a = annulus(r, r + w);
        prop_assert_eq!(crossing_interfaces(&RandomField::new(seed, 0), &a).len() % 2, 0);
    }

    #[test]
    fn four_arms_iff_four_interfaces(seed in any::<u64>(), r in 1.0f64..4.0, w in 1.0f64..8.0) {
        let a = annulus(r, r + w);
        let c = RandomField::new(seed, 1);
        prop_assert_eq!(
            arm_event(&c, &a, &ArmPattern::four_arm()).unwrap(),
            crossing_interfaces(&c, &a).len() >= 4
        );
    }

    #[test]
    fn opening_sites_keeps_the_open_arm(seed in any::<u64>(), extra in any::<u64>(), r in 1.0f64..4.0, w in 1.0f64..10.0) {
        let a = annulus(r, r + w);
        let c = RandomField::new(seed, 2);
        let more = RandomField::new(extra, 3);
        let up = FnColoring(|h| c.is_open(h) || more.is_open(h));
        if arm_event(&c, &a, &ArmPattern::one_arm()).unwrap() {
            prop_assert!(arm_event(&up, &a, &ArmPattern::one_arm()).unwrap());
        }
    }

    #[test]
    fn quad_pivotality_matches_flipping(seed in any::<u64>(), radius in 2.0f64..5.0) {
        let q = Quad::from_square(&Square::axis(Point::new(0.3, 0.1), radius)).unwrap();
        let c = Configuration::sample(Arc::new(q.sites().clone()), seed, 0).unwrap();
        for x in q.sites().iter() {
            prop_assert_eq!(is_quad_pivotal(&c, x, &q).unwrap(), pivotal_by_flip(&c, x, &q).unwrap());
        }
    }
}
