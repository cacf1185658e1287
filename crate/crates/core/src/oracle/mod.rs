//! Exhaustive enumeration over tiny regions, with brute-force predicates that
//! share no code with the fast paths.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::{Coloring, Configuration};
use crate::error::{Error, Result};
use crate::lattice::{Hex, Quad, Region, SiteSet};
use crate::stats::par_sums;

/// Largest region the enumerator accepts.
pub const MAX_SITES: usize = 22;

/// Exact nonnegative rational in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exact {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Exact {
    pub fn new(num: u64, den: u64) -> Self {
        let g = gcd(num, den).max(1);
        Exact {
            num: num / g,
            den: den / g,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn check_size(region: &SiteSet) -> Result<()> {
    if region.len() > MAX_SITES {
        return Err(Error::RegionTooLarge {
            sites: region.len(),
            limit: MAX_SITES,
        });
    }
    Ok(())
}

/// Exact probability of a predicate under the uniform law on `region`.
pub fn enumerate<F>(region: &Arc<SiteSet>, pred: F) -> Result<Exact>
where
    F: Fn(&Configuration) -> bool + Send + Sync,
{
    exact_expectation(region, |c| pred(c) as u64)
}

/// Exact mean of a nonnegative integer statistic.
pub fn exact_expectation<F>(region: &Arc<SiteSet>, stat: F) -> Result<Exact>
where
    F: Fn(&Configuration) -> u64 + Send + Sync,
{
    check_size(region)?;
    let total = 1u64 << region.len();
    let [sum] = par_sums(0..total, |p| {
        let c = Configuration::from_pattern(region.clone(), p).expect("size checked");
        [stat(&c) as i64]
    });
    Ok(Exact::new(sum as u64, total))
}

/// Number of configurations on which two predicates disagree, with the
/// first disagreeing pattern.
pub fn disagreements<F, G>(region: &Arc<SiteSet>, f: F, g: G) -> Result<(u64, Option<u64>)>
where
    F: Fn(&Configuration) -> bool + Send + Sync,
    G: Fn(&Configuration) -> bool + Send + Sync,
{
    check_size(region)?;
    let total = 1u64 << region.len();
    let [count] = par_sums(0..total, |p| {
        let c = Configuration::from_pattern(region.clone(), p).expect("size checked");
        [(f(&c) != g(&c)) as i64]
    });
    let first = (count > 0)
        .then(|| {
            (0..total).find(|&p| {
                let c = Configuration::from_pattern(region.clone(), p).expect("size checked");
                f(&c) != g(&c)
            })
        })
        .flatten();
    Ok((count as u64, first))
}

/// Sites of `sites` with `color`, reachable from `from` by a path of that
/// color inside `sites`.
fn reach(
    c: &impl Coloring,
    sites: &SiteSet,
    color: bool,
    from: impl IntoIterator<Item = Hex>,
) -> HashSet<Hex> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for h in from {
        if sites.contains(h) && c.is_open(h) == color && seen.insert(h) {
            queue.push_back(h);
        }
    }
    while let Some(h) = queue.pop_front() {
        for n in h.neighbors() {
            if sites.contains(n) && c.is_open(n) == color && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen
}

/// A small annulus given by its sites and the two boundary pieces.
#[derive(Clone, Debug)]
pub struct TinyAnnulus {
    pub sites: SiteSet,
    /// Sites touching the inner boundary.
    pub inner: Vec<Hex>,
    /// Sites touching the outer boundary.
    pub outer: Vec<Hex>,
}

impl TinyAnnulus {
    /// Sites of `outer` minus `hole`, with the hole and the outside as the
    /// two boundaries.
    pub fn new(outer: &SiteSet, hole: &SiteSet) -> Self {
        let sites = outer.difference(hole);
        let inner = sites
            .iter()
            .filter(|h| h.neighbors().iter().any(|n| hole.contains(*n)))
            .collect();
        let outer_b = sites
            .iter()
            .filter(|h| h.neighbors().iter().any(|n| !outer.contains(*n)))
            .collect();
        TinyAnnulus {
            sites,
            inner,
            outer: outer_b,
        }
    }

    /// Crossing clusters of one color, as their site sets.
    pub fn crossing_clusters(&self, c: &impl Coloring, color: bool) -> Vec<HashSet<Hex>> {
        let target: HashSet<Hex> = self.outer.iter().copied().collect();
        let mut done: HashSet<Hex> = HashSet::new();
        let mut out = Vec::new();
        for &h in &self.inner {
            if done.contains(&h) || c.is_open(h) != color {
                continue;
            }
            let cl = reach(c, &self.sites, color, [h]);
            done.extend(cl.iter().copied());
            if cl.iter().any(|x| target.contains(x)) {
                out.push(cl);
            }
        }
        out
    }

    pub fn crosses(&self, c: &impl Coloring, color: bool) -> bool {
        let r = reach(c, &self.sites, color, self.inner.iter().copied());
        self.outer.iter().any(|h| r.contains(h))
    }

    /// Maximum number of vertex-disjoint crossings of one color, by
    /// depth-first augmenting paths on the split-vertex graph.
    pub fn max_disjoint(&self, c: &impl Coloring, color: bool) -> usize {
        let v: Vec<Hex> = self
            .sites
            .iter()
            .filter(|h| c.is_open(*h) == color)
            .collect();
        let id: BTreeMap<Hex, usize> = v.iter().enumerate().map(|(i, h)| (*h, i)).collect();
        let n = v.len();
        // residual capacities as a dense matrix: nodes in(i)=i, out(i)=n+i, s=2n, t=2n+1
        let size = 2 * n + 2;
        let (s, t) = (2 * n, 2 * n + 1);
        let mut cap = vec![vec![0u8; size]; size];
        let inner: HashSet<Hex> = self.inner.iter().copied().collect();
        let outer: HashSet<Hex> = self.outer.iter().copied().collect();
        for (i, h) in v.iter().enumerate() {
            cap[i][n + i] = 1;
            if inner.contains(h) {
                cap[s][i] = 1;
            }
            if outer.contains(h) {
                cap[n + i][t] = 1;
            }
            for nb in h.neighbors() {
                if let Some(&j) = id.get(&nb) {
                    cap[n + i][j] = 1;
                }
            }
        }
        fn dfs(u: usize, t: usize, cap: &mut [Vec<u8>], seen: &mut [bool]) -> bool {
            if u == t {
                return true;
            }
            seen[u] = true;
            for w in 0..cap.len() {
                if cap[u][w] > 0 && !seen[w] && dfs(w, t, cap, seen) {
                    cap[u][w] -= 1;
                    cap[w][u] += 1;
                    return true;
                }
            }
            false
        }
        let mut flow = 0;
        loop {
            let mut seen = vec![false; size];
            if !dfs(s, t, &mut cap, &mut seen) {
                return flow;
            }
            flow += 1;
        }
    }

    /// Arm events by brute force for the patterns the oracle knows.
    pub fn arm_event(&self, c: &impl Coloring, pattern: &str) -> Result<bool> {
        Ok(match pattern {
            "O" => self.crosses(c, true),
            "C" => self.crosses(c, false),
            "OC" => self.crosses(c, true) && self.crosses(c, false),
            "OCOC" => self.crossing_clusters(c, true).len() >= 2,
            "OCOCOC" => self.crossing_clusters(c, true).len() >= 3,
            "OOC" => self.crosses(c, false) && self.max_disjoint(c, true) >= 2,
            "OCC" => self.crosses(c, true) && self.max_disjoint(c, false) >= 2,
            "OCOCC" => {
                self.crossing_clusters(c, true).len() >= 2 && self.max_disjoint(c, false) >= 3
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "oracle has no rule for pattern {pattern}"
                )))
            }
        })
    }
}

/// Open crossing of a quad from `ab` to `cd` by breadth-first search.
pub fn crossing(c: &impl Coloring, q: &Quad, open: bool) -> bool {
    use crate::lattice::Arc as Side;
    let (from, to) = if open {
        (Side::AB, Side::CD)
    } else {
        (Side::BC, Side::DA)
    };
    let starts: Vec<Hex> = q
        .sites()
        .iter()
        .filter(|h| h.neighbors().iter().any(|n| q.arc_of(*n) == Some(from)))
        .collect();
    let r = reach(c, q.sites(), open, starts);
    r.iter()
        .any(|h| h.neighbors().iter().any(|n| q.arc_of(*n) == Some(to)))
}

/// Pivotality by flipping and searching again.
pub fn pivotal(c: &Configuration, x: Hex, q: &Quad) -> bool {
    let flipped = c.flip(x).expect("x in quad");
    crossing(c, q, true) != crossing(&flipped, q, true)
}

/// Four alternating arms from the site `x` (color ignored) to the outside
/// of `outer`.
pub fn four_arms_from(c: &impl Coloring, x: Hex, outer: &SiteSet) -> bool {
    let ann = TinyAnnulus::new(outer, &SiteSet::from_sites([x]));
    ann.crossing_clusters(c, true).len() >= 2
}

/// Open cluster of the hole (wired open) reaches the outer boundary.
pub fn hole_reaches_outer(c: &impl Coloring, outer: &SiteSet, hole: &SiteSet) -> bool {
    TinyAnnulus::new(outer, hole).crosses(c, true)
}

/// Closed connection between the two closed faces inside the enclosed
/// domain; by duality the complement of the open face connection.
pub fn closed_faces_joined(
    c: &impl Coloring,
    faces: &[Vec<Hex>],
    open: &[bool],
    interior: &SiteSet,
) -> bool {
    let closed: Vec<&Vec<Hex>> = faces
        .iter()
        .zip(open)
        .filter(|(_, o)| !**o)
        .map(|(f, _)| f)
        .collect();
    if closed.len() != 2 {
        return false;
    }
    let target: HashSet<Hex> = closed[1].iter().copied().collect();
    if closed[0]
        .iter()
        .any(|h| h.neighbors().iter().any(|n| target.contains(n)))
    {
        return true;
    }
    let starts = closed[0].iter().flat_map(|h| h.neighbors());
    let r = reach(c, interior, false, starts);
    r.iter()
        .any(|h| h.neighbors().iter().any(|n| target.contains(n)))
}

/// Frozen exact values keyed by geometry digest.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Golden {
    pub geometry: String,
    pub values: BTreeMap<String, Exact>,
}

/// Directory of golden files, one per geometry.
#[derive(Clone, Debug)]
pub struct GoldenStore {
    dir: PathBuf,
}

impl GoldenStore {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        GoldenStore {
            dir: dir.as_ref().to_path_buf(),
        }
    }

    fn path(&self, digest: &str) -> PathBuf {
        self.dir
            .join(format!("{}.json", &digest[..16.min(digest.len())]))
    }

    pub fn load(&self, digest: &str) -> Result<Option<Golden>> {
        let p = self.path(digest);
        if !p.exists() {
            return Ok(None);
        }
        let g: Golden = crate::io::read_json(&p)?;
        if g.geometry != digest {
            return Err(Error::Parse(format!(
                "golden file {} is for another geometry",
                p.display()
            )));
        }
        Ok(Some(g))
    }

    pub fn save(&self, g: &Golden) -> Result<()> {
        crate::io::write_json(&self.path(&g.geometry), g)
    }
}

mod suite;

pub use suite::{
    annulus_cases, check_arm_events, check_crossings, check_importance, check_pivotality,
    check_radial, check_u_theta, full_suite, quad_cases, Agreement,
};
