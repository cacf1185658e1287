use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use hexperc::connectivity::{connected, has_crossing, ClusterIndex};
use hexperc::oracle::{self, enumerate};
use hexperc::{Coloring, Configuration, Hex, Point, Quad, RandomField, Region, SiteSet, Square};
use proptest::prelude::*;

/// Sites of `region` reachable from `x` through sites of color `open`.
fn bfs(c: &impl Coloring, region: &SiteSet, x: Hex, open: bool) -> HashSet<Hex> {
    let mut seen = HashSet::new();
    if c.is_open(x) != open {
        return seen;
    }
    seen.insert(x);
    let mut q = VecDeque::from([x]);
    while let Some(h) = q.pop_front() {
        for n in h.neighbors() {
            if region.contains(n) && c.is_open(n) == open && seen.insert(n) {
                q.push_back(n);
            }
        }
    }
    seen
}

fn patch(n: usize) -> Arc<SiteSet> {
    // a compact blob of n sites grown in spiral order around the origin
    let mut sites: Vec<Hex> = Square::axis(Point::default(), 4.0)
        .sites(1.0)
        .iter()
        .collect();
    sites.sort_by(|a, b| {
        a.point()
            .norm()
            .partial_cmp(&b.point().norm())
            .unwrap()
            .then(a.cmp(b))
    });
    Arc::new(SiteSet::from_sites(sites.into_iter().take(n)))
}

#[test]
fn all_open_region_is_one_cluster() {
    let r = Square::axis(Point::default(), 6.0).sites(1.0);
    let c = Configuration::from_fn(Arc::new(r.clone()), |_| true);
    let idx = ClusterIndex::build(&c, &r, true).unwrap();
    assert_eq!(idx.sizes(), &[r.len()]);
    assert_eq!(
        ClusterIndex::build(&c, &r, false).unwrap().cluster_count(),
        0
    );
}

#[test]
fn isolated_open_site_is_its_own_cluster() {
    let r = Square::axis(Point::default(), 4.0).sites(1.0);
    let c = Configuration::from_fn(Arc::new(r.clone()), |h| h == Hex::ORIGIN);
    let idx = ClusterIndex::build(&c, &r, true).unwrap();
    assert_eq!(idx.sizes(), &[1]);
    assert_eq!(idx.members(0), vec![Hex::ORIGIN]);
}

#[test]
fn clusters_equal_bfs_components_on_every_patch_configuration() {
    let r = patch(12);
    for pattern in 0..1u64 << 12 {
        let c = Configuration::from_pattern(r.clone(), pattern).unwrap();
        let idx = ClusterIndex::build(&c, &r, true).unwrap();
        for x in r.iter() {
            let comp = bfs(&c, &r, x, true);
            for y in r.iter() {
                assert_eq!(
                    idx.same_cluster(x, y),
                    comp.contains(&y),
                    "pattern {pattern:b}"
                );
            }
        }
    }
}

#[test]
fn connected_agrees_with_bfs_on_all_pairs() {
    let r = patch(10);
    for pattern in 0..1u64 << 10 {
        let c = Configuration::from_pattern(r.clone(), pattern).unwrap();
        for x in r.iter() {
            let comp = bfs(&c, &r, x, true);
            for y in r.iter() {
                assert_eq!(connected(&c, &r, x, y).unwrap(), comp.contains(&y));
            }
        }
    }
}

#[test]
fn connection_conventions() {
    let r = Square::axis(Point::default(), 3.0).sites(1.0);
    let open = Configuration::from_fn(Arc::new(r.clone()), |_| true);
    let closed = Configuration::from_fn(Arc::new(r.clone()), |_| false);
    assert!(connected(&open, &r, Hex::ORIGIN, Hex::ORIGIN).unwrap());
    assert!(!connected(&closed, &r, Hex::ORIGIN, Hex::ORIGIN).unwrap());
    let far = r.sites()[0];
    assert!(connected(&open, &r, Hex::ORIGIN, far).unwrap());
    assert!(connected(&open, &r, Hex::ORIGIN, Hex::new(50, 0)).is_err());
}

#[test]
fn all_open_square_is_crossed() {
    let q = Quad::from_square(&Square::axis(Point::default(), 5.0)).unwrap();
    let c = Configuration::from_fn(Arc::new(q.sites().clone()), |_| true);
    assert!(has_crossing(&c, &q, true).unwrap());
    assert!(!has_crossing(&c, &q, false).unwrap());
}

#[test]
fn crossing_probability_matches_enumeration() {
    for q in [
        Quad::rhombus(4).unwrap(),
        Quad::from_square(&Square::axis(Point::new(0.2, 0.1), 2.0)).unwrap(),
    ] {
        let r = Arc::new(q.sites().clone());
        assert!(r.len() <= 20, "{} sites", r.len());
        let fast = enumerate(&r, |c| has_crossing(c, &q, true).unwrap()).unwrap();
        let slow = enumerate(&r, |c| oracle::crossing(c, &q, true)).unwrap();
        assert_eq!(fast, slow);
    }
    // the rhombus is symmetric under swapping colors and axes
    let q = Quad::rhombus(4).unwrap();
    let r = Arc::new(q.sites().clone());
    let p = enumerate(&r, |c| has_crossing(c, &q, true).unwrap()).unwrap();
    assert_eq!((p.num, p.den), (1, 2));
}

proptest! {
    #[test]
    fn exactly_one_of_the_dual_crossings(seed in any::<u64>(), side in 2i32..30) {
        let q = Quad::rhombus(side).unwrap();
        let c = RandomField::new(seed, 0);
        prop_assert!(has_crossing(&c, &q, true).unwrap() ^ has_crossing(&c, &q, false).unwrap());
    }

    #[test]
    fn opening_a_site_keeps_open_crossings(seed in any::<u64>(), radius in 2.0f64..8.0, pick in any::<prop::sample::Index>()) {
        let q = Quad::from_square(&Square::axis(Point::default(), radius)).unwrap();
        let c = Configuration::sample(Arc::new(q.sites().clone()), seed, 0).unwrap();
        let x = q.sites().sites()[pick.index(q.sites().len())];
        let mut up = c.clone();
        up.set(x, true).unwrap();
        if has_crossing(&c, &q, true).unwrap() {
            prop_assert!(has_crossing(&up, &q, true).unwrap());
        }
    }
}
