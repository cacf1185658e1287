use std::sync::Arc;

use hexperc::arms::is_quad_pivotal;
use hexperc::connectivity::has_crossing;
use hexperc::lattice::Geometry;
use hexperc::oracle::{
    self, disagreements, enumerate, exact_expectation, quad_cases, Exact, Golden, GoldenStore,
};
use hexperc::{Coloring, Error, Hex, Quad, SiteSet};

fn set(sites: &[(i32, i32)]) -> Arc<SiteSet> {
    Arc::new(SiteSet::from_sites(
        sites.iter().map(|&(q, r)| Hex::new(q, r)),
    ))
}

#[test]
fn enumeration_basics() {
    let one = set(&[(0, 0)]);
    assert_eq!(enumerate(&one, |_| true).unwrap(), Exact::new(1, 1));
    assert_eq!(
        enumerate(&one, |c| c.is_open(Hex::ORIGIN)).unwrap(),
        Exact::new(1, 2)
    );
    let path = set(&[(0, 0), (1, 0), (2, 0)]);
    assert_eq!(
        enumerate(&path, |c| path.iter().all(|h| c.is_open(h))).unwrap(),
        Exact::new(1, 8)
    );
    assert_eq!(
        exact_expectation(&path, |c| c.open_count() as u64).unwrap(),
        Exact::new(3, 2)
    );
    let big = Arc::new(SiteSet::from_sites((0..30).map(|q| Hex::new(q, 0))));
    assert!(matches!(
        enumerate(&big, |_| true),
        Err(Error::RegionTooLarge { .. })
    ));
    let (n, first) = disagreements(
        &path,
        |c| c.is_open(Hex::ORIGIN),
        |c| c.is_open(Hex::new(1, 0)),
    )
    .unwrap();
    assert_eq!(n, 4);
    assert!(first.is_some());
}

/// Exact crossing probabilities and expected pivotal counts, frozen under
/// `tests/golden`. Set `HEXPERC_FREEZE=1` to write missing files.
#[test]
fn golden_values_of_small_quads() {
    let store = GoldenStore::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden"));
    let freeze = std::env::var("HEXPERC_FREEZE").is_ok();
    let mut checked = 0;
    for (name, q) in quad_cases()
        .into_iter()
        .filter(|(_, q)| q.sites().len() <= 16)
    {
        let region = Arc::new(q.sites().clone());
        let crossing = enumerate(&region, |c| has_crossing(c, &q, true).unwrap()).unwrap();
        let pivotals = exact_expectation(&region, |c| {
            region
                .iter()
                .filter(|&x| is_quad_pivotal(c, x, &q).unwrap())
                .count() as u64
        })
        .unwrap();
        let slow = exact_expectation(&region, |c| {
            region.iter().filter(|&x| oracle::pivotal(c, x, &q)).count() as u64
        })
        .unwrap();
        assert_eq!(pivotals, slow, "{name}");
        let mut values = std::collections::BTreeMap::new();
        values.insert(format!("{name}/crossing"), crossing);
        values.insert(format!("{name}/pivotals"), pivotals);
        let g = Golden {
            geometry: Geometry::from_sites(&region).digest(),
            values,
        };
        match store.load(&g.geometry).unwrap() {
            Some(frozen) => assert_eq!(frozen, g, "{name}"),
            None if freeze => store.save(&g).unwrap(),
            None => panic!("no golden file for {name}; rerun with HEXPERC_FREEZE=1"),
        }
        checked += 1;
    }
    assert!(checked >= 3);
}

#[test]
fn single_file_quad_has_every_site_pivotal() {
    let sites = SiteSet::from_sites((0..7).map(|q| Hex::new(q, 0)));
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
    let q = Quad::new(sites, arcs).unwrap();
    let region = Arc::new(q.sites().clone());
    let e = exact_expectation(&region, |c| {
        region.iter().filter(|&x| oracle::pivotal(c, x, &q)).count() as u64
    })
    .unwrap();
    // x is pivotal exactly when the other six sites are open
    assert_eq!(e, Exact::new(7, 64));
}
