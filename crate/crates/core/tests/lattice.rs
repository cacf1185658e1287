use std::collections::HashSet;
use std::f64::consts::FRAC_PI_3;

use hexperc::lattice::{EpsGrid, Geometry, DIRECTIONS};
use hexperc::{Annulus, Hex, Point, Region, SiteSet, Square};
use proptest::prelude::*;

#[test]
fn origin_neighbors() {
    let got: HashSet<Hex> = Hex::ORIGIN.neighbors().into_iter().collect();
    let want: HashSet<Hex> = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]
        .into_iter()
        .map(|(q, r)| Hex::new(q, r))
        .collect();
    assert_eq!(got, want);
    assert_eq!(DIRECTIONS.len(), 6);
}

#[test]
fn embedding_of_unit_steps() {
    let p = Hex::new(1, 0).embed(0.5);
    assert!((p.x - 0.5).abs() < 1e-12 && p.y.abs() < 1e-12);
    let p = Hex::new(0, 1).embed(2.0);
    assert!((p.x - 1.0).abs() < 1e-12 && (p.y - 3f64.sqrt()).abs() < 1e-12);
    // neighbors sit at unit distance
    for n in Hex::ORIGIN.neighbors() {
        assert!((n.point().norm() - 1.0).abs() < 1e-12);
    }
}

fn brute_box(sq: &Square, mesh: f64) -> HashSet<Hex> {
    let reach = (sq.center.norm() + 2.0 * sq.radius) / mesh + 4.0;
    let k = reach as i32;
    let mut out = HashSet::new();
    for q in -2 * k..=2 * k {
        for r in -2 * k..=2 * k {
            let h = Hex::new(q, r);
            if sq.contains_point(h.embed(mesh)) {
                out.insert(h);
            }
        }
    }
    out
}

#[test]
fn box_sites_match_exhaustive_scan() {
    for (sq, mesh) in [
        (Square::axis(Point::default(), 10.0), 1.0),
        (Square::axis(Point::new(0.3, -0.7), 1.0), 0.1),
        (Square::new(Point::new(1.0, 2.0), 6.5, 0.4).unwrap(), 0.5),
        (Square::new(Point::default(), 3.0, 2.0).unwrap(), 0.25),
    ] {
        let got: HashSet<Hex> = sq.sites(mesh).iter().collect();
        assert_eq!(got, brute_box(&sq, mesh), "{sq:?} mesh {mesh}");
    }
}

#[test]
fn box_count_follows_area() {
    let mesh = 1.0;
    let s = 60.0;
    let n = Square::axis(Point::default(), s).sites(mesh).len() as f64;
    let area = (2.0 * s / mesh).powi(2) * 2.0 / 3f64.sqrt();
    assert!((n / area - 1.0).abs() < 0.02, "{n} vs {area}");
}

#[test]
fn rotation_by_sixty_degrees_is_congruent() {
    for angle in [0.0, 0.3, 1.0] {
        let a = Square::new(Point::default(), 9.3, angle)
            .unwrap()
            .sites(1.0);
        let b = Square::new(Point::default(), 9.3, angle + FRAC_PI_3)
            .unwrap()
            .sites(1.0);
        assert_eq!(a.len(), b.len());
        let rotated: HashSet<Hex> = a.iter().map(Hex::rot_ccw).collect();
        assert_eq!(rotated, b.iter().collect::<HashSet<_>>());
    }
}

#[test]
fn grid_cells_are_disjoint_and_cover() {
    let grid = EpsGrid::new(2.5, Point::new(0.4, -1.1), 0.3).unwrap();
    let region = Square::axis(Point::default(), 20.0).sites(1.0);
    for h in region.iter() {
        let p = h.point();
        let (i, j) = grid.cell_of(p);
        let mut owners = 0;
        for di in -1..=1 {
            for dj in -1..=1 {
                owners += grid.cell(i + di, j + dj).contains_point(p) as u32;
            }
        }
        assert_eq!(owners, 1, "site {h:?}");
        assert!(grid.cell(i, j).contains_point(p));
    }
    let a = grid.cell(0, 0).sites(1.0);
    let b = grid.cell(1, 0).sites(1.0);
    assert!(a.iter().all(|h| !b.contains(h)));
}

#[test]
fn grid_cells_inside_a_region() {
    let region = Square::axis(Point::default(), 8.0);
    let g = EpsGrid::new(4.0, Point::default(), 0.0).unwrap();
    assert_eq!(g.cells_inside(&region), vec![(0, 0)]);
    let g = EpsGrid::new(9.0, Point::default(), 0.0).unwrap();
    assert!(g.cells_inside(&region).is_empty());
    // count grows like the area ratio
    let g = EpsGrid::new(0.1, Point::default(), 0.0).unwrap();
    let n = g.cells_inside(&region).len() as f64;
    assert!((n / (8.0f64 / 0.1).powi(2) - 1.0).abs() < 0.05, "{n}");
    assert!(EpsGrid::new(0.0, Point::default(), 0.0).is_err());
}

#[test]
fn annulus_partitions_the_outer_box() {
    let a = Annulus::new(Point::new(0.2, 0.1), 3.0, 9.0).unwrap();
    let ring = a.sites(1.0).unwrap();
    let inner = a.inner().sites(1.0);
    let outer = a.outer().sites(1.0);
    assert_eq!(ring.len() + inner.len(), outer.len());
    assert!(inner.iter().all(|h| !ring.contains(h)));
    assert_eq!(ring.union(&inner), outer);

    // inner and outer boundary layers are nonempty and disjoint
    let d1: HashSet<Hex> = ring
        .iter()
        .filter(|h| h.neighbors().iter().any(|n| inner.contains(*n)))
        .collect();
    let d2: HashSet<Hex> = ring
        .iter()
        .filter(|h| h.neighbors().iter().any(|n| !outer.contains(*n)))
        .collect();
    assert!(!d1.is_empty() && !d2.is_empty());
    assert!(d1.is_disjoint(&d2));

    assert!(Annulus::new(Point::default(), 3.0, 3.0).is_err());
    assert!(Annulus::new(Point::default(), 0.0, 3.0).is_err());
}

#[test]
fn geometry_round_trips_through_json() {
    let sq = Square::new(Point::new(0.5, -1.0), 4.0, 0.2).unwrap();
    let back: Square = serde_json::from_str(&serde_json::to_string(&sq).unwrap()).unwrap();
    assert_eq!(sq, back);
    let g = Geometry::Annulus {
        center: [0.0, 0.5],
        r_inner: 1.0,
        r_outer: 3.0,
        mesh: 0.1,
    };
    let back: Geometry = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
    assert_eq!(g, back);
    assert_eq!(g.digest(), back.digest());
    let set = SiteSet::from_sites([Hex::new(0, 0), Hex::new(2, -1)]);
    let back: SiteSet = serde_json::from_str(&serde_json::to_string(&set).unwrap()).unwrap();
    assert_eq!(set, back);
}

proptest! {
    #[test]
    fn neighbor_relation_is_symmetric(q in -10_000i32..10_000, r in -10_000i32..10_000) {
        let x = Hex::new(q, r);
        let ns = x.neighbors();
        prop_assert_eq!(ns.iter().collect::<HashSet<_>>().len(), 6);
        for y in ns {
            prop_assert!(y.neighbors().contains(&x));
            prop_assert!(x.is_adjacent(y));
            prop_assert_eq!(x.distance(y), 1);
        }
    }

    #[test]
    fn box_sites_commute_with_lattice_translation(
        q in -50i32..50, r in -50i32..50, cx in -3.0f64..3.0, cy in -3.0f64..3.0,
        radius in 1.0f64..7.0, angle in 0.0f64..3.2,
    ) {
        let t = Hex::new(q, r);
        let a = Square::new(Point::new(cx, cy), radius, angle).unwrap();
        let b = Square::new(Point::new(cx, cy) + t.point(), radius, angle).unwrap();
        let moved: HashSet<Hex> = a.sites(1.0).iter().map(|h| h + t).collect();
        prop_assert_eq!(moved, b.sites(1.0).iter().collect::<HashSet<_>>());
    }

    #[test]
    fn nearest_site_is_nearest(x in -50.0f64..50.0, y in -50.0f64..50.0) {
        let p = Point::new(x, y);
        let h = Hex::nearest(p);
        let d = h.point().dist(p);
        for n in h.neighbors() {
            prop_assert!(d <= n.point().dist(p) + 1e-9);
        }
    }
}
