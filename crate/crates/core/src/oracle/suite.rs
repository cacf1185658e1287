//! Fast paths checked against the brute-force predicates on every
//! configuration of a handful of tiny geometries.

use std::sync::Arc;

use serde::Serialize;

use super::{
    closed_faces_joined, crossing, four_arms_from, hole_reaches_outer, pivotal, TinyAnnulus,
};
use crate::arms::{arm_event, four_arms_from_site, is_quad_pivotal, ArmPattern};
use crate::config::Configuration;
use crate::connectivity::has_crossing;
use crate::explore::{
    crossing_by_interface, extract_faces, radial_exploration, u_theta, Annular, ChordMap,
};
use crate::lattice::{Hex, Point, Quad, Region, SiteSet, Square};
use crate::stats::par_sums;

/// Outcome of comparing one fast path with the oracle on one geometry.
#[derive(Clone, Debug, Serialize)]
pub struct Agreement {
    pub predicate: String,
    pub geometry: String,
    pub sites: usize,
    pub configs: u64,
    /// Configurations where the compared quantity was nontrivial.
    pub informative: u64,
    pub disagreements: u64,
}

fn square_sites(radius: f64, angle: f64) -> SiteSet {
    let sq = Square::new(Point::new(0.1, 0.05), radius, angle).expect("valid square");
    SiteSet::from_sites(sq.candidates().filter(|h| sq.contains(*h)))
}

/// Small quads on tilted squares, 11 to 21 sites.
pub fn quad_cases() -> Vec<(String, Quad)> {
    [
        (1.6, 0.0),
        (1.6, 0.3),
        (1.8, 0.0),
        (1.8, 0.785),
        (2.0, 0.0),
        (2.2, 0.3),
    ]
    .into_iter()
    .map(|(r, a)| {
        let sq = Square::new(Point::new(0.1, 0.05), r, a).expect("valid square");
        (
            format!("quad r={r} angle={a}"),
            Quad::from_square(&sq).expect("square quad"),
        )
    })
    .collect()
}

/// Small annuli `(name, outer, hole)` with 14 to 20 sites in the outer set.
pub fn annulus_cases() -> Vec<(String, SiteSet, SiteSet)> {
    let origin = SiteSet::from_sites([Hex::ORIGIN]);
    let pair = SiteSet::from_sites([Hex::ORIGIN, Hex::new(1, 0)]);
    let tri = SiteSet::from_sites([Hex::ORIGIN, Hex::new(1, 0), Hex::new(0, 1)]);
    vec![
        (
            "annulus 1.8/site".into(),
            square_sites(1.8, 0.0),
            origin.clone(),
        ),
        (
            "annulus 1.8 tilted/site".into(),
            square_sites(1.8, 0.785),
            origin.clone(),
        ),
        (
            "annulus 2.0 tilted/site".into(),
            square_sites(2.0, 0.3),
            origin.clone(),
        ),
        ("annulus 2.0/site".into(), square_sites(2.0, 0.0), origin),
        ("annulus 2.0/pair".into(), square_sites(2.0, 0.0), pair),
        (
            "annulus 2.0 tilted/triangle".into(),
            square_sites(2.0, 0.785),
            tri,
        ),
    ]
}

/// Runs `check` on every configuration of `region`; it returns whether the
/// fast path disagreed and whether the configuration was informative.
fn tally<F>(predicate: &str, geometry: &str, region: SiteSet, check: F) -> Agreement
where
    F: Fn(&Configuration) -> (bool, bool) + Send + Sync,
{
    let n = region.len();
    let region = Arc::new(region);
    let total = 1u64 << n;
    let [bad, hits] = par_sums(0..total, |p| {
        let c = Configuration::from_pattern(region.clone(), p).expect("tiny region");
        let (mismatch, informative) = check(&c);
        [mismatch as i64, informative as i64]
    });
    Agreement {
        predicate: predicate.into(),
        geometry: geometry.into(),
        sites: n,
        configs: total,
        informative: hits as u64,
        disagreements: bad as u64,
    }
}

fn compare<F, G>(predicate: &str, geometry: &str, region: SiteSet, fast: F, slow: G) -> Agreement
where
    F: Fn(&Configuration) -> bool + Send + Sync,
    G: Fn(&Configuration) -> bool + Send + Sync,
{
    tally(predicate, geometry, region, |c| {
        let s = slow(c);
        (fast(c) != s, s)
    })
}

fn annular(outer: &SiteSet, hole: &SiteSet) -> Annular<SiteSet> {
    let center = hole
        .iter()
        .map(|h| h.point())
        .fold(Point::default(), |a, b| a + b)
        * (1.0 / hole.len() as f64);
    Annular::new(outer.clone(), hole.clone(), center, 1.0, 2.0).expect("tiny annulus")
}

/// Crossing by union-find and by the interface from `b`, against search.
pub fn check_crossings() -> Vec<Agreement> {
    let mut out = Vec::new();
    for (name, q) in quad_cases() {
        out.push(compare(
            "crossing open",
            &name,
            q.sites().clone(),
            |c| has_crossing(c, &q, true).unwrap(),
            |c| crossing(c, &q, true),
        ));
        out.push(compare(
            "crossing closed",
            &name,
            q.sites().clone(),
            |c| has_crossing(c, &q, false).unwrap(),
            |c| crossing(c, &q, false),
        ));
        out.push(compare(
            "crossing by interface",
            &name,
            q.sites().clone(),
            |c| crossing_by_interface(c, &q).unwrap(),
            |c| crossing(c, &q, true),
        ));
    }
    out
}

/// Arm events on annuli for one, two, four and the mixed patterns.
pub fn check_arm_events(patterns: &[&str]) -> Vec<Agreement> {
    let mut out = Vec::new();
    for (name, outer, hole) in annulus_cases() {
        let ann = annular(&outer, &hole);
        let tiny = TinyAnnulus::new(&outer, &hole);
        for &p in patterns {
            let pat: ArmPattern = p.parse().expect("valid pattern");
            out.push(compare(
                &format!("arm event {p}"),
                &name,
                tiny.sites.clone(),
                |c| arm_event(c, &ann, &pat).unwrap(),
                |c| tiny.arm_event(c, p).unwrap(),
            ));
        }
    }
    out
}

/// Fast quad pivotality against flip-and-search, every site.
pub fn check_pivotality(max_sites: usize) -> Vec<Agreement> {
    quad_cases()
        .into_iter()
        .filter(|(_, q)| q.sites().len() <= max_sites)
        .map(|(name, q)| {
            let sites: Vec<Hex> = q.sites().iter().collect();
            tally("pivotal set", &name, q.sites().clone(), |c| {
                let slow: Vec<bool> = sites.iter().map(|&x| pivotal(c, x, &q)).collect();
                let fast: Vec<bool> = sites
                    .iter()
                    .map(|&x| is_quad_pivotal(c, x, &q).unwrap())
                    .collect();
                (fast != slow, slow.contains(&true))
            })
        })
        .collect()
}

/// Importance of every interior site, by per-site scan and by the chord
/// map, against counting crossing clusters with the site removed.
pub fn check_importance() -> Vec<Agreement> {
    let mut out = Vec::new();
    let mut seen: Vec<SiteSet> = Vec::new();
    for (name, outer, _) in annulus_cases() {
        // importance only depends on the outer set
        if seen.contains(&outer) {
            continue;
        }
        seen.push(outer.clone());
        let inner: Vec<Hex> = outer
            .iter()
            .filter(|h| h.neighbors().iter().all(|n| outer.contains(*n)))
            .collect();
        let slow = |c: &Configuration| -> Vec<bool> {
            inner
                .iter()
                .map(|&x| four_arms_from(c, x, &outer))
                .collect()
        };
        out.push(tally("A-important (scan)", &name, outer.clone(), |c| {
            let s = slow(c);
            let fast: Vec<bool> = inner
                .iter()
                .map(|&x| four_arms_from_site(c, x, &outer, 2.0))
                .collect();
            (fast != s, s.contains(&true))
        }));
        out.push(tally("A-important (chords)", &name, outer.clone(), |c| {
            let s = slow(c);
            let mut map = ChordMap::new(outer.clone());
            map.compute(c);
            let fast: Vec<bool> = inner.iter().map(|&x| map.is_important(x)).collect();
            (fast != s, s.contains(&true))
        }));
    }
    out
}

/// Radial exploration outcome against flooding from the wired hole.
pub fn check_radial() -> Vec<Agreement> {
    annulus_cases()
        .into_iter()
        .map(|(name, outer, hole)| {
            let ann = annular(&outer, &hole);
            let region = outer.difference(&hole);
            compare(
                "radial outcome",
                &name,
                region,
                |c| radial_exploration(c, &ann).reached_outer(),
                |c| hole_reaches_outer(c, &outer, &hole),
            )
        })
        .collect()
}

/// Open connection of the faces against the dual closed connection.
pub fn check_u_theta() -> Vec<Agreement> {
    let origin = SiteSet::from_sites([Hex::ORIGIN]);
    let pair = SiteSet::from_sites([Hex::ORIGIN, Hex::new(1, 0)]);
    let cases: Vec<(String, SiteSet, SiteSet)> = vec![
        (
            "faces 1.8/site".into(),
            square_sites(1.8, 0.0),
            origin.clone(),
        ),
        (
            "faces 2.0 tilted/site".into(),
            square_sites(2.0, 0.3),
            origin.clone(),
        ),
        (
            "faces 2.0/site".into(),
            square_sites(2.0, 0.0),
            origin.clone(),
        ),
        ("faces 2.0/pair".into(), square_sites(2.0, 0.0), pair),
        (
            "faces 2.2 tilted/site".into(),
            square_sites(2.2, 0.785),
            origin.clone(),
        ),
        (
            "faces 2.2 slanted/site".into(),
            square_sites(2.2, 0.3),
            origin,
        ),
    ];
    cases
        .into_iter()
        .map(|(name, outer, hole)| {
            let ann = annular(&outer, &hole);
            tally("U_theta", &name, outer.clone(), |c| {
                match extract_faces(c, &ann) {
                    Some(theta) => {
                        let u = u_theta(c, &theta).expect("interior covered");
                        (
                            u == closed_faces_joined(c, &theta.faces, &theta.open, &theta.interior),
                            true,
                        )
                    }
                    None => (false, false),
                }
            })
        })
        .collect()
}

/// Every check, in a fixed order.
pub fn full_suite() -> Vec<Agreement> {
    let mut out = check_crossings();
    out.extend(check_arm_events(&["O", "OC", "OCOC", "OOC", "OCOCC"]));
    out.extend(check_pivotality(20));
    out.extend(check_importance());
    out.extend(check_radial());
    out.extend(check_u_theta());
    out
}
