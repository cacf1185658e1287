use std::collections::{HashSet, VecDeque};

use hexperc::connectivity::has_crossing;
use hexperc::explore::{
    crossing_by_interface, crossing_count, radial_exploration, Annular, ChordMap,
};
use hexperc::{Annulus, Coloring, Hex, Point, Quad, RandomField, Region, SiteSet, Square};
use proptest::prelude::*;

fn square_quad(radius: f64) -> Quad {
    Quad::from_square(&Square::axis(Point::new(0.3, 0.2), radius)).unwrap()
}

/// Open path from the hole (wired open) to a site next to the outside.
fn hole_reaches_outside(c: &impl Coloring, ann: &Annular<Square>) -> bool {
    let mut seen: HashSet<Hex> = ann.hole.iter().collect();
    let mut queue: VecDeque<Hex> = ann.hole.iter().collect();
    while let Some(h) = queue.pop_front() {
        for n in h.neighbors() {
            if !ann.outer.contains(n) {
                return true;
            }
            if seen.contains(&n) || !c.is_open(n) {
                continue;
            }
            seen.insert(n);
            queue.push_back(n);
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn duality_on_squares(seed in any::<u64>(), radius in 2.0f64..9.0) {
        let q = square_quad(radius);
        let c = RandomField::new(seed, 0);
        prop_assert!(has_crossing(&c, &q, true).unwrap() ^ has_crossing(&c, &q, false).unwrap());
    }

    #[test]
    fn interface_reads_crossing(seed in any::<u64>(), radius in 2.0f64..9.0) {
        let q = square_quad(radius);
        let c = RandomField::new(seed, 1);
        prop_assert_eq!(crossing_by_interface(&c, &q).unwrap(), has_crossing(&c, &q, true).unwrap());
    }

    #[test]
    fn radial_matches_flood(seed in any::<u64>(), inner in 0.6f64..3.0, extra in 1.0f64..8.0) {
        let a = Annulus::new(Point::new(0.1, 0.05), inner, inner + extra).unwrap();
        let ann = Annular::from_annulus(&a).unwrap();
        let c = RandomField::new(seed, 2);
        prop_assert_eq!(radial_exploration(&c, &ann).reached_outer(), hole_reaches_outside(&c, &ann));
    }

    #[test]
    fn chord_map_matches_site_scan(seed in any::<u64>()) {
        let sq = Square::axis(Point::new(0.0, 0.0), 6.0);
        let dom = SiteSet::from_sites(sq.candidates().filter(|h| sq.contains(*h)));
        let c = RandomField::new(seed, 3);
        let mut map = ChordMap::new(dom.clone());
        map.compute(&c);
        for h in dom.iter() {
            if h.neighbors().iter().all(|n| dom.contains(*n)) {
                let ann = Annular::new(&dom, SiteSet::from_sites([h]), h.point(), 0.5, 6.0).unwrap();
                prop_assert_eq!(map.is_important(h), crossing_count(&c, &ann, 4) >= 4, "{:?}", h);
            }
        }
    }
}
