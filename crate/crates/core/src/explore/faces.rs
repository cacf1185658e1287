//! Faces induced by exactly four crossing interfaces.

use std::collections::{HashSet, VecDeque};

use crate::config::Coloring;
use crate::error::{Error, Result};
use crate::lattice::{Hex, Point, Region, SiteSet};

use super::{crossing_interfaces, quality, Annular, Crossing};

/// Alternating faces around the center, with their enclosed domain.
#[derive(Clone, Debug)]
pub struct FaceConfig {
    /// Face site paths, counterclockwise, starting with an open face.
    pub faces: Vec<Vec<Hex>>,
    pub open: Vec<bool>,
    /// Inner endpoints of the crossing interfaces, counterclockwise.
    pub endpoints: Vec<Point>,
    /// Sites of the bounded domain enclosed by the faces.
    pub interior: SiteSet,
    pub radius: f64,
}

impl FaceConfig {
    pub fn quality(&self) -> f64 {
        quality(&self.endpoints, self.radius)
    }
}

/// Do cyclically consecutive crossing interfaces share a hexagon? Without
/// such a pinch the sector between them holds two disjoint crossings.
pub fn pinched(crossings: &[Crossing]) -> bool {
    let sets: Vec<HashSet<Hex>> = crossings
        .iter()
        .map(|c| {
            c.trace
                .as_ref()
                .expect("recorded traces")
                .edges
                .iter()
                .flat_map(|&(l, r)| [l, r])
                .collect()
        })
        .collect();
    let n = sets.len();
    n > 0 && (0..n).all(|i| !sets[i].is_disjoint(&sets[(i + 1) % n]))
}

/// Exactly four alternating arms and no extra disjoint arm.
pub fn exactly_four_arms<C: Coloring + ?Sized, O: Region>(c: &C, ann: &Annular<O>) -> bool {
    let cr = crossing_interfaces(c, ann);
    cr.len() == 4 && pinched(&cr)
}

/// Faces bounding the component of the center in the complement of the
/// hexagons touching the four interfaces. `None` off the event.
pub fn extract_faces<C: Coloring + ?Sized, O: Region>(
    c: &C,
    ann: &Annular<O>,
) -> Option<FaceConfig> {
    let cr = crossing_interfaces(c, ann);
    if cr.len() != 4 || !pinched(&cr) {
        return None;
    }
    let hull: HashSet<Hex> = cr
        .iter()
        .flat_map(|x| {
            x.trace
                .as_ref()
                .expect("recorded")
                .edges
                .iter()
                .flat_map(|&(l, r)| [l, r])
        })
        .collect();
    let start = Hex::nearest(ann.center);
    if hull.contains(&start) {
        return None;
    }
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(h) = queue.pop_front() {
        for n in h.neighbors() {
            if hull.contains(&n) || seen.contains(&n) {
                continue;
            }
            if !ann.outer.contains(n) {
                return None;
            }
            seen.insert(n);
            queue.push_back(n);
        }
    }
    let interior = SiteSet::from_sites(seen);
    let walk = interior.ring_walk();
    if walk.iter().any(|h| !hull.contains(h)) {
        return None;
    }
    let mut runs: Vec<(bool, Vec<Hex>)> = Vec::new();
    for h in walk {
        let open = c.is_open(h);
        match runs.last_mut() {
            Some((o, v)) if *o == open => {
                if !v.contains(&h) {
                    v.push(h)
                }
            }
            _ => runs.push((open, vec![h])),
        }
    }
    if runs.len() > 1 && runs[0].0 == runs[runs.len() - 1].0 {
        let (_, tail) = runs.pop().expect("nonempty");
        let head = &mut runs[0].1;
        let mut merged = tail;
        merged.extend(
            head.iter()
                .copied()
                .filter(|h| !merged.contains(h))
                .collect::<Vec<_>>(),
        );
        *head = merged;
    }
    if runs.len() != 4 {
        return None;
    }
    if !runs[0].0 {
        runs.rotate_left(1);
    }
    Some(FaceConfig {
        open: runs.iter().map(|r| r.0).collect(),
        faces: runs.into_iter().map(|r| r.1).collect(),
        endpoints: cr.iter().map(|x| x.inner_end.point()).collect(),
        interior,
        radius: ann.inner_radius,
    })
}

/// Open crossing from the first open face to the other one inside the
/// enclosed domain.
pub fn u_theta<C: Coloring + ?Sized>(c: &C, theta: &FaceConfig) -> Result<bool> {
    let mut colors = Vec::with_capacity(theta.interior.len());
    for h in theta.interior.iter() {
        colors.push(c.try_open(h).ok_or(Error::InteriorMissing)?);
    }
    let open_faces: Vec<&Vec<Hex>> = theta
        .faces
        .iter()
        .zip(&theta.open)
        .filter(|(_, o)| **o)
        .map(|(f, _)| f)
        .collect();
    let [from, to] = open_faces[..] else {
        return Err(Error::FacesUndefined("expected two open faces".into()));
    };
    let target: HashSet<Hex> = to.iter().copied().collect();
    let touches_target = |h: Hex| h.neighbors().iter().any(|n| target.contains(n));
    if from.iter().any(|h| touches_target(*h)) {
        return Ok(true);
    }
    let mut seen = vec![false; theta.interior.len()];
    let mut queue = VecDeque::new();
    for h in from {
        for n in h.neighbors() {
            if let Some(i) = theta.interior.index_of(n) {
                if colors[i] && !seen[i] {
                    seen[i] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    while let Some(h) = queue.pop_front() {
        if touches_target(h) {
            return Ok(true);
        }
        for n in h.neighbors() {
            if let Some(i) = theta.interior.index_of(n) {
                if colors[i] && !seen[i] {
                    seen[i] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    Ok(false)
}
