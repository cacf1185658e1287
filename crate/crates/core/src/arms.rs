//! Arm events in annuli, importance and pivotality, and arm probabilities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{Coloring, Configuration, RandomField, Reversed};
use crate::connectivity::{has_crossing, ClusterIndex};
use crate::error::{Error, Result};
use crate::explore::quality;
use crate::explore::{
    crossing_count, radial_exploration, scan, Annular, Crossing, Framed, ScanOptions,
};
use crate::lattice::{Annulus, Hex, Point, Quad, Region, SiteSet, Square};
use crate::stats::Tally;

/// Cyclic color word of an arm event, `true` for open.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArmPattern(Vec<bool>);

impl ArmPattern {
    pub fn new(colors: Vec<bool>) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::InvalidParameter("empty arm pattern".into()));
        }
        if colors.len() > 1 && colors.iter().all(|&c| c == colors[0]) {
            return Err(Error::InvalidParameter(
                "multi-arm patterns must use both colors".into(),
            ));
        }
        Ok(ArmPattern(colors))
    }

    pub fn one_arm() -> Self {
        ArmPattern(vec![true])
    }

    /// `OC` repeated `pairs` times.
    pub fn alternating(pairs: usize) -> Self {
        ArmPattern((0..2 * pairs.max(1)).map(|i| i % 2 == 0).collect())
    }

    pub fn four_arm() -> Self {
        Self::alternating(2)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[bool] {
        &self.0
    }

    /// Strictly alternating around the cycle (even length, no two equal
    /// neighbours).
    pub fn is_alternating(&self) -> bool {
        let n = self.0.len();
        n.is_multiple_of(2) && (0..n).all(|i| self.0[i] != self.0[(i + 1) % n])
    }

    fn count(&self, open: bool) -> usize {
        self.0.iter().filter(|&&c| c == open).count()
    }
}

impl FromStr for ArmPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let colors = s
            .chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'O' => Ok(true),
                'C' => Ok(false),
                _ => Err(Error::Parse(format!(
                    "arm pattern {s:?}: expected only O and C"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        ArmPattern::new(colors)
    }
}

impl fmt::Display for ArmPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.0 {
            f.write_str(if c { "O" } else { "C" })?;
        }
        Ok(())
    }
}

impl Serialize for ArmPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ArmPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

fn check_covered<C: Coloring + ?Sized, O: Region>(c: &C, ann: &Annular<O>) -> Result<SiteSet> {
    let sites = ann.sites();
    if sites.is_empty() {
        return Err(Error::DegenerateAnnulus(
            "no sites between the boundaries".into(),
        ));
    }
    if let Some(h) = sites.iter().find(|h| c.try_open(*h).is_none()) {
        return Err(Error::OutsideRegion(h));
    }
    Ok(sites)
}

/// Disjoint crossings of the annulus in the pattern's cyclic color order.
///
/// Monochromatic one-arm patterns use the radial exploration, alternating
/// patterns count crossing interfaces, and mixed patterns count disjoint
/// crossings inside each sector between consecutive interfaces.
pub fn arm_event<C: Coloring + ?Sized, O: Region>(
    c: &C,
    ann: &Annular<O>,
    p: &ArmPattern,
) -> Result<bool> {
    let sites = check_covered(c, ann)?;
    Ok(match p.colors() {
        [true] => radial_exploration(c, ann).reached_outer(),
        [false] => radial_exploration(&Reversed(c), ann).reached_outer(),
        _ if p.is_alternating() => crossing_count(c, ann, p.len()) >= p.len(),
        _ => mixed_arm_event(c, ann, &sites, p)?,
    })
}

fn mixed_arm_event<C: Coloring + ?Sized, O: Region>(
    c: &C,
    ann: &Annular<O>,
    sites: &SiteSet,
    p: &ArmPattern,
) -> Result<bool> {
    let crossings = scan(
        c,
        ann,
        ScanOptions {
            record: true,
            ..Default::default()
        },
    )
    .crossings;
    if crossings.len() < 2 {
        return Ok(false);
    }
    let caps = [p.count(false), p.count(true)];
    let word: Vec<bool> = sector_capacities(c, ann, sites, &crossings, caps)?
        .into_iter()
        .flat_map(|(open, cap)| std::iter::repeat_n(open, cap))
        .collect();
    Ok(cyclic_subsequence(p.colors(), &word))
}

/// Colors and disjoint-crossing capacities of the sectors between
/// consecutive crossing interfaces, counterclockwise. Capacities are capped
/// per color at `caps[open as usize]`.
fn sector_capacities<C: Coloring + ?Sized, O: Region>(
    c: &C,
    ann: &Annular<O>,
    sites: &SiteSet,
    crossings: &[Crossing],
    caps: [usize; 2],
) -> Result<Vec<(bool, usize)>> {
    let clusters = [
        ClusterIndex::build(c, sites, false)?,
        ClusterIndex::build(c, sites, true)?,
    ];
    // each interface has a crossing cluster of each color on its two sides
    let sides: Vec<[usize; 2]> = crossings
        .iter()
        .map(|x| {
            let &(l, r) = &x.trace.as_ref().expect("recorded").edges[0];
            let (open, closed) = if x.left_open { (l, r) } else { (r, l) };
            [
                clusters[0].cluster_of(closed).expect("closed side"),
                clusters[1].cluster_of(open).expect("open side"),
            ]
        })
        .collect();
    let m = crossings.len();
    let mut sectors = Vec::with_capacity(m);
    if m == 2 {
        sectors.push((true, sides[0][1]));
        sectors.push((false, sides[0][0]));
    } else {
        for i in 0..m {
            let (a, b) = (sides[i], sides[(i + 1) % m]);
            let open = a[1] == b[1];
            debug_assert!(
                open != (a[0] == b[0]),
                "consecutive interfaces share exactly one side"
            );
            sectors.push((open, a[open as usize]));
        }
    }
    let inner: Vec<bool> = sites
        .iter()
        .map(|h| h.neighbors().iter().any(|n| ann.hole.contains(*n)))
        .collect();
    let outer: Vec<bool> = sites
        .iter()
        .map(|h| h.neighbors().iter().any(|n| !ann.outer.contains(*n)))
        .collect();
    Ok(sectors
        .into_iter()
        .map(|(open, id)| {
            let members = clusters[open as usize].members(id);
            (
                open,
                disjoint_crossings(
                    &members,
                    |h| inner[sites.index_of(h).expect("in annulus")],
                    |h| outer[sites.index_of(h).expect("in annulus")],
                    caps[open as usize],
                ),
            )
        })
        .collect())
}

/// Is some rotation of `pattern` a subsequence of some rotation of `word`?
fn cyclic_subsequence(pattern: &[bool], word: &[bool]) -> bool {
    let (p, w) = (pattern.len(), word.len());
    if p > w {
        return false;
    }
    (0..p).any(|sp| {
        (0..w).any(|sw| {
            let mut k = 0;
            for j in 0..w {
                if k < p && word[(sw + j) % w] == pattern[(sp + k) % p] {
                    k += 1;
                }
            }
            k == p
        })
    })
}

/// Maximum number of vertex-disjoint paths through `members` from a site
/// with `is_source` to a site with `is_sink`, capped at `cap`.
pub fn disjoint_crossings(
    members: &[Hex],
    is_source: impl Fn(Hex) -> bool,
    is_sink: impl Fn(Hex) -> bool,
    cap: usize,
) -> usize {
    let set = SiteSet::from_sites(members.iter().copied());
    let n = set.len();
    // node 2i = in(i), 2i+1 = out(i), then source and sink
    let (s, t) = (2 * n, 2 * n + 1);
    let mut head: Vec<usize> = Vec::new();
    let mut capy: Vec<u8> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n + 2];
    let mut add = |a: usize, b: usize, head: &mut Vec<usize>, capy: &mut Vec<u8>| {
        adj[a].push(head.len());
        head.push(b);
        capy.push(1);
        adj[b].push(head.len());
        head.push(a);
        capy.push(0);
    };
    for (i, h) in set.iter().enumerate() {
        add(2 * i, 2 * i + 1, &mut head, &mut capy);
        if is_source(h) {
            add(s, 2 * i, &mut head, &mut capy);
        }
        if is_sink(h) {
            add(2 * i + 1, t, &mut head, &mut capy);
        }
        for nb in h.neighbors() {
            if let Some(j) = set.index_of(nb) {
                add(2 * i + 1, 2 * j, &mut head, &mut capy);
            }
        }
    }
    let mut flow = 0;
    while flow < cap {
        let mut prev = vec![usize::MAX; 2 * n + 2];
        let mut queue = std::collections::VecDeque::from([s]);
        prev[s] = usize::MAX - 1;
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &e in &adj[u] {
                let v = head[e];
                if capy[e] > 0 && prev[v] == usize::MAX {
                    prev[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            break;
        }
        let mut v = t;
        while v != s {
            let e = prev[v];
            capy[e] -= 1;
            capy[e ^ 1] += 1;
            v = head[e ^ 1];
        }
        flow += 1;
    }
    flow
}

/// Interior and exterior qualities of the best alternating four of the
/// crossing interfaces; `(0, 0)` without four alternating arms.
pub fn robust_arm_quality<C: Coloring + ?Sized, O: Region>(c: &C, ann: &Annular<O>) -> (f64, f64) {
    let cr = scan(c, ann, ScanOptions::default()).crossings;
    let m = cr.len();
    if m < 4 {
        return (0.0, 0.0);
    }
    let mut best = (0.0, 0.0);
    for a in 0..m {
        for b in a + 1..m {
            for d in b + 1..m {
                for e in d + 1..m {
                    let pick = [&cr[a], &cr[b], &cr[d], &cr[e]];
                    if (0..4).any(|i| pick[i].left_open == pick[(i + 1) % 4].left_open) {
                        continue;
                    }
                    let qi = quality(&pick.map(|x| x.inner_end.point()), ann.inner_radius);
                    let qo = quality(&pick.map(|x| x.outer_end.point()), ann.outer_radius);
                    if qi.min(qo) > f64::min(best.0, best.1) {
                        best = (qi, qo);
                    }
                }
            }
        }
    }
    best
}

/// Four alternating arms from the single site `x` (its own color ignored)
/// to the outside of `outer`.
pub fn four_arms_from_site<C: Coloring + ?Sized, O: Region>(
    c: &C,
    x: Hex,
    outer: O,
    outer_radius: f64,
) -> bool {
    match Annular::new(
        outer,
        SiteSet::from_sites([x]),
        x.point(),
        0.5,
        outer_radius,
    ) {
        Ok(ann) => crossing_count(c, &ann, 4) >= 4,
        Err(_) => false,
    }
}

/// `x` in the inner face of `a` (mesh `mesh`) with four alternating arms to
/// the outer boundary.
pub fn is_a_important<C: Coloring + ?Sized>(c: &C, x: Hex, a: &Annulus, mesh: f64) -> Result<bool> {
    let a = a.in_lattice_units(mesh);
    if !a.inner().contains(x) {
        return Err(Error::OutsideRegion(x));
    }
    Ok(four_arms_from_site(c, x, a.outer(), a.r_outer))
}

/// Box of physical radius `rho` around `x`; below one mesh it is the site and
/// its six neighbours.
pub fn rho_box(x: Hex, rho: f64, mesh: f64) -> Square {
    Square::around(x, (rho / mesh).max(1.01))
}

/// Four alternating arms from `x` to distance `rho`.
pub fn is_rho_important<C: Coloring + ?Sized>(c: &C, x: Hex, rho: f64, mesh: f64) -> bool {
    let b = rho_box(x, rho, mesh);
    four_arms_from_site(c, x, b, b.radius)
}

/// Open arm from `x` itself: `x` open and joined to the outside of `outer`.
pub fn one_arm_from_site<C: Coloring + ?Sized, O: Region>(
    c: &C,
    x: Hex,
    outer: O,
    outer_radius: f64,
) -> bool {
    if !c.is_open(x) {
        return false;
    }
    match Annular::new(
        outer,
        SiteSet::from_sites([x]),
        x.point(),
        0.5,
        outer_radius,
    ) {
        Ok(ann) => radial_exploration(c, &ann).reached_outer(),
        Err(_) => true,
    }
}

/// Four arms from the hole to the four arcs of `quad`, open to `ab` and `cd`
/// and closed to `bc` and `da`. The hole must lie inside the quad.
pub fn four_sided_arms<C: Coloring + ?Sized>(c: &C, quad: &Quad, hole: SiteSet) -> Result<bool> {
    if !hole.is_subset(quad) {
        return Err(Error::InvalidParameter(
            "hole must lie inside the quad".into(),
        ));
    }
    let frame = Framed::crossing(quad);
    let fc = frame.over(c);
    let center = hole
        .iter()
        .map(|h| h.point())
        .fold(Point::default(), |a, b| a + b)
        * (1.0 / hole.len() as f64);
    let ann = Annular::new(frame, hole, center, 1.0, 1.0)?;
    Ok(crossing_count(&fc, &ann, 4) >= 4)
}

/// Flipping `x` changes whether `q` has an open left-right crossing.
///
/// Uses the four-arms-to-prescribed-arcs characterization.
pub fn is_quad_pivotal<C: Coloring + ?Sized>(c: &C, x: Hex, q: &Quad) -> Result<bool> {
    if !q.contains(x) {
        return Err(Error::OutsideRegion(x));
    }
    four_sided_arms(c, q, SiteSet::from_sites([x]))
}

/// The definitional flip test.
pub fn pivotal_by_flip(c: &Configuration, x: Hex, q: &Quad) -> Result<bool> {
    if !q.contains(x) {
        return Err(Error::OutsideRegion(x));
    }
    Ok(has_crossing(c, q, true)? != has_crossing(&c.flip(x)?, q, true)?)
}

/// Monte Carlo arm probability with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmEstimate {
    pub pattern: ArmPattern,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub mesh: f64,
    pub value: f64,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
    pub hits: u64,
}

impl ArmEstimate {
    pub fn estimate(&self) -> crate::stats::Estimate {
        crate::stats::Estimate {
            mean: self.value,
            stderr: self.stderr,
            n: self.n,
        }
    }

    pub const CSV_HEADER: [&'static str; 8] =
        ["pattern", "r", "R", "mesh", "n", "value", "stderr", "seed"];

    pub fn csv_row(&self) -> Vec<String> {
        use crate::io::cell;
        vec![
            self.pattern.to_string(),
            cell(self.r),
            cell(self.big_r),
            cell(self.mesh),
            self.n.to_string(),
            cell(self.value),
            cell(self.stderr),
            self.seed.to_string(),
        ]
    }
}

/// Centered square annulus `A(r, R)` in lattice units; the hole is the
/// origin site when `r` is at most one mesh.
pub fn arm_annulus(r: f64, big_r: f64, mesh: f64) -> Result<Annular<Square>> {
    if !(r > 0.0 && r < big_r && mesh > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r < R and mesh > 0, got r={r} R={big_r} mesh={mesh}"
        )));
    }
    if r <= mesh * (1.0 + 1e-9) {
        Annular::around_site(Hex::ORIGIN, big_r / mesh)
    } else {
        Annular::from_annulus(&Annulus::new(Point::default(), r, big_r)?.in_lattice_units(mesh))
    }
}

/// Arm event for the `index`-th sample of the unbounded field; from a single
/// site the one-arm event also requires the site to be open.
pub fn arm_sample(ann: &Annular<Square>, p: &ArmPattern, seed: u64, index: u64) -> bool {
    let c = RandomField::new(seed, index);
    let single = ann.hole.len() == 1;
    match p.colors() {
        [open] => {
            let x = ann.hole.sites()[0];
            if single && c.is_open(x) != *open {
                return false;
            }
            if *open {
                radial_exploration(&c, ann).reached_outer()
            } else {
                radial_exploration(&Reversed(c), ann).reached_outer()
            }
        }
        _ if p.is_alternating() => crossing_count(&c, ann, p.len()) >= p.len(),
        _ => {
            let sites = ann.sites();
            mixed_arm_event(&c, ann, &sites, p).unwrap_or(false)
        }
    }
}

/// Frequency of the arm event over `n` samples with indices `0..n`.
pub fn estimate_alpha(
    p: &ArmPattern,
    r: f64,
    big_r: f64,
    mesh: f64,
    n: u64,
    seed: u64,
) -> Result<ArmEstimate> {
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let ann = arm_annulus(r, big_r, mesh)?;
    let t = Tally::over(0, n, |i| arm_sample(&ann, p, seed, i) as i64);
    let e = t.estimate();
    Ok(ArmEstimate {
        pattern: p.clone(),
        r,
        big_r,
        mesh,
        value: e.mean,
        stderr: e.stderr,
        n,
        seed,
        hits: t.sum as u64,
    })
}
