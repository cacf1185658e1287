//! Interface tracing on the hexagonal dual.
//!
//! An interface step is a pair `(left, right)` of adjacent sites of opposite
//! colors. The walker looks at the third site `t` of the triangle ahead and
//! replaces whichever of `left`/`right` has the same color as `t`, so the
//! left-hand color never changes along a trace. Stepping is reversible, which
//! makes every trace started on a boundary end on a boundary.

mod chords;
mod faces;

pub use chords::ChordMap;
pub use faces::{exactly_four_arms, extract_faces, pinched, u_theta, FaceConfig};

use std::collections::HashMap;

use serde::Serialize;

use crate::config::{Coloring, Wired};
use crate::error::{Error, Result};
use crate::lattice::{
    Annulus, Arc, Hex, Nowhere, Point, Quad, Region, SiteSet, Square, DIRECTIONS,
};

/// Classification of a site relative to a domain with an optional hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Inside,
    Hole,
    Outside,
}

pub trait Domain {
    fn cell(&self, h: Hex) -> Cell;
}

/// Outer region minus a hole.
#[derive(Clone, Copy, Debug)]
pub struct Holed<O, H> {
    pub outer: O,
    pub hole: H,
}

impl<O: Region, H: Region> Domain for Holed<O, H> {
    #[inline]
    fn cell(&self, h: Hex) -> Cell {
        if self.hole.contains(h) {
            Cell::Hole
        } else if self.outer.contains(h) {
            Cell::Inside
        } else {
            Cell::Outside
        }
    }
}

/// A dual vertex: three mutually adjacent sites, stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex([Hex; 3]);

impl Vertex {
    pub fn new(a: Hex, b: Hex, c: Hex) -> Self {
        let mut s = [a, b, c];
        s.sort_unstable();
        Vertex(s)
    }

    pub fn sites(&self) -> [Hex; 3] {
        self.0
    }

    /// Position in lattice units.
    pub fn point(&self) -> Point {
        let [a, b, c] = self.0.map(Hex::point);
        Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    /// Position in fractional axial coordinates.
    pub fn axial(&self) -> [f64; 2] {
        let q: i32 = self.0.iter().map(|h| h.q).sum();
        let r: i32 = self.0.iter().map(|h| h.r).sum();
        [q as f64 / 3.0, r as f64 / 3.0]
    }
}

#[inline]
fn ahead(l: Hex, r: Hex) -> Hex {
    l + (r - l).rot_ccw()
}

#[inline]
fn behind(l: Hex, r: Hex) -> Hex {
    l + (r - l).rot_cw()
}

/// How a trace ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    Outer(Vertex),
    Hole(Vertex),
    Loop,
}

/// Follows an interface from `start` until the site ahead leaves the domain
/// or the walk closes. `visit(left, right, ahead)` sees every edge.
#[inline]
pub fn follow<C, D, F>(c: &C, d: &D, start: (Hex, Hex), mut visit: F) -> Stop
where
    C: Coloring + ?Sized,
    D: Domain + ?Sized,
    F: FnMut(Hex, Hex, Hex),
{
    let left_open = c.is_open(start.0);
    let (mut l, mut r) = start;
    loop {
        let t = ahead(l, r);
        visit(l, r, t);
        match d.cell(t) {
            Cell::Outside => return Stop::Outer(Vertex::new(l, r, t)),
            Cell::Hole => return Stop::Hole(Vertex::new(l, r, t)),
            Cell::Inside => {}
        }
        if c.is_open(t) == left_open {
            l = t;
        } else {
            r = t;
        }
        if (l, r) == start {
            return Stop::Loop;
        }
    }
}

/// Orients the edge `{a, b}` so that `toward` is the site ahead.
pub fn orient(a: Hex, b: Hex, toward: Hex) -> Option<(Hex, Hex)> {
    if ahead(a, b) == toward {
        Some((a, b))
    } else if ahead(b, a) == toward {
        Some((b, a))
    } else {
        None
    }
}

/// An explored interface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterfaceTrace {
    /// Color of the left-hand sites.
    pub left_open: bool,
    /// `(left, right)` sites of every edge, in order.
    pub edges: Vec<(Hex, Hex)>,
    pub start: Vertex,
    pub end: Option<Vertex>,
}

impl InterfaceTrace {
    fn new(left_open: bool, start: (Hex, Hex)) -> Self {
        InterfaceTrace {
            left_open,
            edges: Vec::new(),
            start: Vertex::new(start.0, start.1, behind(start.0, start.1)),
            end: None,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Sites on the open side, in order, with repeats.
    pub fn open_side(&self) -> impl Iterator<Item = Hex> + '_ {
        self.edges
            .iter()
            .map(move |&(l, r)| if self.left_open { l } else { r })
    }

    pub fn closed_side(&self) -> impl Iterator<Item = Hex> + '_ {
        self.edges
            .iter()
            .map(move |&(l, r)| if self.left_open { r } else { l })
    }

    /// Dual vertices visited, from start to end.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = vec![self.start];
        out.extend(
            self.edges
                .iter()
                .map(|&(l, r)| Vertex::new(l, r, ahead(l, r))),
        );
        out
    }

    /// One JSON line with the vertex list in fractional axial coordinates.
    pub fn to_json_line(&self) -> String {
        let verts: Vec<[f64; 2]> = self.vertices().iter().map(Vertex::axial).collect();
        serde_json::json!({ "left_open": self.left_open, "vertices": verts }).to_string()
    }
}

/// Trace start on the hole boundary.
#[derive(Clone, Copy, Debug)]
pub struct Port {
    pub vertex: Vertex,
    /// Oriented so that the hole site lies behind.
    pub start: (Hex, Hex),
    pub angle: f64,
}

/// An annular domain: an outer region with a finite hole, and the ports
/// where interfaces can leave the hole, sorted counterclockwise.
#[derive(Clone, Debug)]
pub struct Annular<O> {
    pub outer: O,
    pub hole: SiteSet,
    pub center: Point,
    /// Inner radius used to normalize qualities.
    pub inner_radius: f64,
    /// Outer radius used to normalize exterior qualities.
    pub outer_radius: f64,
    ports: Vec<Port>,
    port_at: HashMap<Vertex, usize>,
}

impl<O: Region> Annular<O> {
    pub fn new(
        outer: O,
        hole: SiteSet,
        center: Point,
        inner_radius: f64,
        outer_radius: f64,
    ) -> Result<Self> {
        if hole.is_empty() {
            return Err(Error::DegenerateAnnulus("empty hole".into()));
        }
        let inside = |h: Hex| !hole.contains(h) && outer.contains(h);
        let mut ports = Vec::new();
        for h in hole.boundary() {
            for k in 0..6 {
                let (a, b) = (h + DIRECTIONS[k], h + DIRECTIONS[(k + 1) % 6]);
                if inside(a) && inside(b) {
                    let start = orient(a, b, h).map(|(l, r)| (r, l)).expect("triangle");
                    debug_assert_eq!(behind(start.0, start.1), h);
                    let vertex = Vertex::new(h, a, b);
                    ports.push(Port {
                        vertex,
                        start,
                        angle: (vertex.point() - center).angle(),
                    });
                }
            }
        }
        if ports.is_empty() {
            return Err(Error::DegenerateAnnulus(
                "no sites between the boundaries".into(),
            ));
        }
        ports.sort_by(|x, y| x.angle.total_cmp(&y.angle).then(x.vertex.cmp(&y.vertex)));
        let port_at = ports
            .iter()
            .enumerate()
            .map(|(i, p)| (p.vertex, i))
            .collect();
        Ok(Annular {
            outer,
            hole,
            center,
            inner_radius,
            outer_radius,
            ports,
            port_at,
        })
    }

    pub fn ports(&self) -> &[Port] {
        &self.ports
    }

    pub fn domain(&self) -> Holed<&O, &SiteSet> {
        Holed {
            outer: &self.outer,
            hole: &self.hole,
        }
    }

    /// Does the annulus contain the site (outer region minus hole)?
    pub fn contains(&self, h: Hex) -> bool {
        !self.hole.contains(h) && self.outer.contains(h)
    }

    /// Sites of the annulus, found by flooding outward from the hole.
    pub fn sites(&self) -> SiteSet {
        let mut seen = std::collections::HashSet::new();
        let mut stack: Vec<Hex> = self
            .hole
            .iter()
            .flat_map(|h| h.neighbors())
            .filter(|n| self.contains(*n))
            .collect();
        while let Some(h) = stack.pop() {
            if seen.insert(h) {
                stack.extend(
                    h.neighbors()
                        .into_iter()
                        .filter(|n| self.contains(*n) && !seen.contains(n)),
                );
            }
        }
        SiteSet::from_sites(seen)
    }
}

impl Annular<Square> {
    /// Square annulus in lattice units.
    pub fn from_annulus(a: &Annulus) -> Result<Self> {
        let inner = a.inner();
        let hole = SiteSet::from_sites(inner.candidates().filter(|h| inner.contains(*h)));
        if hole.is_empty() {
            return Err(Error::DegenerateAnnulus(
                "inner square holds no site".into(),
            ));
        }
        Annular::new(a.outer(), hole, a.center, a.r_inner, a.r_outer)
    }

    /// Arms from the single site `x` to the square of radius `radius` around it.
    pub fn around_site(x: Hex, radius: f64) -> Result<Self> {
        Annular::new(
            Square::around(x, radius),
            SiteSet::from_sites([x]),
            x.point(),
            0.5,
            radius,
        )
    }
}

/// A crossing interface of an annular domain.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub port: usize,
    pub inner_end: Vertex,
    pub outer_end: Vertex,
    pub left_open: bool,
    pub trace: Option<InterfaceTrace>,
}

/// Result of scanning the ports of an annular domain.
#[derive(Clone, Debug, Default)]
pub struct Scan {
    /// Crossing interfaces in counterclockwise port order.
    pub crossings: Vec<Crossing>,
    /// Crossing counts for each nested square, when requested.
    pub nested: Vec<usize>,
    /// False when the scan stopped early.
    pub complete: bool,
}

impl Scan {
    pub fn count(&self) -> usize {
        self.crossings.len()
    }
}

/// Options for [`scan`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ScanOptions<'a> {
    /// Stop once this many crossings are known to exist, or known impossible.
    pub need: Option<usize>,
    /// Keep the full traces.
    pub record: bool,
    /// Smaller squares (same center) for which crossing counts are wanted.
    pub nested: &'a [Square],
}

/// Traces the interfaces starting on the hole boundary.
///
/// Interfaces returning to the hole are traced once; those reaching the
/// outside are the crossing interfaces. A hole-to-hole interface that leaves
/// a nested square counts twice there.
pub fn scan<C: Coloring + ?Sized, O: Region>(c: &C, ann: &Annular<O>, opts: ScanOptions) -> Scan {
    let dom = ann.domain();
    let n = ann.ports.len();
    let mut used = vec![false; n];
    let mut out = Scan {
        nested: vec![0; opts.nested.len()],
        complete: true,
        ..Default::default()
    };
    let live: Vec<bool> = ann
        .ports
        .iter()
        .map(|p| c.is_open(p.start.0) != c.is_open(p.start.1))
        .collect();
    let mut remaining = live.iter().filter(|&&b| b).count();
    let mut exits = vec![false; opts.nested.len()];
    for i in 0..n {
        if !live[i] || used[i] {
            continue;
        }
        if let Some(k) = opts.need {
            let resolved = |x: usize| x >= k || x + remaining < k;
            if resolved(out.crossings.len()) && out.nested.iter().all(|&x| resolved(x)) {
                out.complete = false;
                break;
            }
        }
        used[i] = true;
        remaining -= 1;
        let port = ann.ports[i];
        let mut trace = opts
            .record
            .then(|| InterfaceTrace::new(c.is_open(port.start.0), port.start));
        exits.iter_mut().for_each(|e| *e = false);
        let stop = follow(c, &dom, port.start, |l, r, t| {
            if let Some(tr) = trace.as_mut() {
                tr.edges.push((l, r));
            }
            for (e, sq) in exits.iter_mut().zip(opts.nested) {
                *e |= !sq.contains(t);
            }
        });
        match stop {
            Stop::Outer(v) => {
                if let Some(tr) = trace.as_mut() {
                    tr.end = Some(v);
                }
                out.nested.iter_mut().for_each(|x| *x += 1);
                out.crossings.push(Crossing {
                    port: i,
                    inner_end: port.vertex,
                    outer_end: v,
                    left_open: c.is_open(port.start.0),
                    trace,
                });
            }
            Stop::Hole(v) => {
                if let Some(&j) = ann.port_at.get(&v) {
                    if !used[j] {
                        used[j] = true;
                        remaining -= live[j] as usize;
                    }
                }
                for (x, e) in out.nested.iter_mut().zip(&exits) {
                    *x += 2 * (*e as usize);
                }
            }
            Stop::Loop => unreachable!("a trace started on the hole boundary cannot close"),
        }
    }
    out
}

/// All interfaces crossing the annulus, with traces.
pub fn crossing_interfaces<C: Coloring + ?Sized, O: Region>(
    c: &C,
    ann: &Annular<O>,
) -> Vec<Crossing> {
    scan(
        c,
        ann,
        ScanOptions {
            record: true,
            ..Default::default()
        },
    )
    .crossings
}

/// Number of crossing interfaces, capped at `cap`.
pub fn crossing_count<C: Coloring + ?Sized, O: Region>(
    c: &C,
    ann: &Annular<O>,
    cap: usize,
) -> usize {
    scan(
        c,
        ann,
        ScanOptions {
            need: Some(cap),
            ..Default::default()
        },
    )
    .count()
    .min(cap)
}

/// Outcome of the radial exploration.
#[derive(Clone, Debug)]
pub enum Radial {
    /// A closed circuit surrounds the hole; the trace is its inner side.
    ClosedCircuit { trace: InterfaceTrace },
    /// The open cluster of the hole reaches the outside.
    ReachedOuter {
        trace: InterfaceTrace,
        forced_turns: usize,
    },
}

impl Radial {
    pub fn reached_outer(&self) -> bool {
        matches!(self, Radial::ReachedOuter { .. })
    }

    pub fn trace(&self) -> &InterfaceTrace {
        match self {
            Radial::ClosedCircuit { trace } | Radial::ReachedOuter { trace, .. } => trace,
        }
    }
}

/// Explores outward from the hole with open on the right and closed on the
/// left, with the hole wired open.
///
/// The walk starts at the first closed site on the ray east of the hole's
/// center. A loop winding clockwise around the hole is a closed circuit. A
/// loop not winding around it went around an island of closed sites; that
/// loop is erased (a forced turn) and the walk restarts past the island.
pub fn radial_exploration<C: Coloring + ?Sized, O: Region>(c: &C, ann: &Annular<O>) -> Radial {
    let wired = Wired {
        base: c,
        region: &ann.hole,
        open: true,
    };
    let dom = Holed {
        outer: &ann.outer,
        hole: Nowhere,
    };
    let east = DIRECTIONS[0];
    let mut h0 = Hex::nearest(ann.center);
    if !ann.hole.contains(h0) {
        h0 = ann.hole.sites()[0];
    }
    let mut prev = h0;
    let mut forced_turns = 0;
    loop {
        let mut s = prev + east;
        while ann.outer.contains(s) && wired.is_open(s) {
            prev = s;
            s = s + east;
        }
        if !ann.outer.contains(s) {
            // an open run along the ray reaches the outside
            let mut trace = InterfaceTrace::new(false, (s, prev));
            trace.end = Some(Vertex::new(prev, s, s + DIRECTIONS[5]));
            return Radial::ReachedOuter {
                trace,
                forced_turns,
            };
        }
        let start = (s, prev);
        let mut trace = InterfaceTrace::new(false, start);
        match follow(&wired, &dom, start, |l, r, _| trace.edges.push((l, r))) {
            Stop::Outer(v) => {
                trace.end = Some(v);
                return Radial::ReachedOuter {
                    trace,
                    forced_turns,
                };
            }
            Stop::Hole(_) => unreachable!("no hole in the wired domain"),
            Stop::Loop => {
                if winding(&trace.edges, h0) != 0 {
                    return Radial::ClosedCircuit { trace };
                }
                forced_turns += 1;
                prev = trace
                    .edges
                    .iter()
                    .map(|&(_, r)| r)
                    .filter(|r| r.r == h0.r && r.q > s.q)
                    .max_by_key(|r| r.q)
                    .expect("an island is bounded, so the ray leaves it");
            }
        }
    }
}

/// Winding number of a closed trace around the center of site `h`.
///
/// Works in quadrupled axial coordinates, an orientation-preserving linear
/// image of the plane, so it is exact integer arithmetic. Edge midpoints
/// have even coordinates and the test ray sits at odd height.
pub fn winding(edges: &[(Hex, Hex)], h: Hex) -> i32 {
    let mid = |&(l, r): &(Hex, Hex)| (2 * (l.q + r.q) as i64, 2 * (l.r + r.r) as i64);
    let (px, py) = (4 * h.q as i64, 4 * h.r as i64 + 1);
    let mut w = 0;
    for i in 0..edges.len() {
        let (ax, ay) = mid(&edges[i]);
        let (bx, by) = mid(&edges[(i + 1) % edges.len()]);
        if (ay < py) != (by < py) {
            // x of the crossing compared with px, without division
            let lhs = (ax - px) * (by - ay) + (bx - ax) * (py - ay);
            let right = if by > ay { lhs > 0 } else { lhs < 0 };
            if right {
                w += if by > ay { 1 } else { -1 };
            }
        }
    }
    w
}

/// A quad with its exterior ring colored arc by arc.
#[derive(Clone, Copy, Debug)]
pub struct Framed<'a> {
    pub quad: &'a Quad,
    /// Color of arcs `ab, bc, cd, da`.
    pub colors: [bool; 4],
}

impl<'a> Framed<'a> {
    /// Dobrushin frame: `ab` open, the rest closed.
    pub fn dobrushin(quad: &'a Quad) -> Self {
        Framed {
            quad,
            colors: [true, false, false, false],
        }
    }

    /// Crossing frame: `ab`, `cd` open; `bc`, `da` closed.
    pub fn crossing(quad: &'a Quad) -> Self {
        Framed {
            quad,
            colors: [true, false, true, false],
        }
    }

    pub fn over<C>(self, base: C) -> FramedColoring<'a, C> {
        FramedColoring { base, frame: self }
    }

    /// Oriented start edge at the junction entering `arc`, heading inward.
    pub fn junction(&self, arc: Arc) -> Result<(Hex, Hex)> {
        let walk = self.quad.ring_walk();
        let n = walk.len();
        let prev_arc = Arc::ALL[(arc as usize + 3) % 4];
        for i in 0..n {
            let (a, b) = (walk[(i + n - 1) % n], walk[i]);
            if self.quad.arc_of(a) == Some(prev_arc) && self.quad.arc_of(b) == Some(arc) {
                let inner: Vec<Hex> = common_neighbors(a, b)
                    .into_iter()
                    .filter(|t| self.quad.contains(*t))
                    .collect();
                if let Some(&t) = inner.first() {
                    return orient(a, b, t).ok_or_else(|| Error::MalformedQuad("junction".into()));
                }
            }
        }
        Err(Error::MalformedQuad(format!(
            "no junction entering {arc:?}"
        )))
    }
}

fn common_neighbors(a: Hex, b: Hex) -> Vec<Hex> {
    a.neighbors()
        .into_iter()
        .filter(|n| n.is_adjacent(b))
        .collect()
}

impl Region for Framed<'_> {
    #[inline]
    fn contains(&self, h: Hex) -> bool {
        self.quad.sites().contains(h) || self.quad.ring().contains(h)
    }
}

/// A coloring with the frame's ring colors on top.
#[derive(Clone, Copy, Debug)]
pub struct FramedColoring<'a, C> {
    pub base: C,
    pub frame: Framed<'a>,
}

impl<C: Coloring> Coloring for FramedColoring<'_, C> {
    #[inline]
    fn is_open(&self, h: Hex) -> bool {
        match self.frame.quad.arc_of(h) {
            Some(a) => self.frame.colors[a as usize],
            None => self.base.is_open(h),
        }
    }
    fn try_open(&self, h: Hex) -> Option<bool> {
        match self.frame.quad.arc_of(h) {
            Some(a) => Some(self.frame.colors[a as usize]),
            None => self.base.try_open(h),
        }
    }
}

/// Traces the interface from a junction of a framed quad to the next one.
pub fn frame_interface<C: Coloring>(c: &C, frame: Framed, from: Arc) -> Result<InterfaceTrace> {
    let start = frame.junction(from)?;
    let fc = frame.over(c);
    let dom = Holed {
        outer: frame,
        hole: Nowhere,
    };
    let mut trace = InterfaceTrace::new(fc.is_open(start.0), start);
    match follow(&fc, &dom, start, |l, r, _| trace.edges.push((l, r))) {
        Stop::Outer(v) => trace.end = Some(v),
        _ => {
            return Err(Error::MalformedQuad(
                "frame interface did not reach the ring".into(),
            ))
        }
    }
    Ok(trace)
}

/// Arc whose junction the trace ended at: the arc of the site just outside
/// after the last edge, seen from the ring.
pub fn landing_arc(frame: Framed, trace: &InterfaceTrace) -> Option<Arc> {
    let &(l, r) = trace.edges.last()?;
    let arcs = [frame.quad.arc_of(l), frame.quad.arc_of(r)];
    match arcs {
        [Some(a), Some(b)] => {
            // the junction between consecutive arcs a -> b or b -> a; name it by the later one
            if (a as usize + 1) % 4 == b as usize {
                Some(b)
            } else {
                Some(a)
            }
        }
        _ => None,
    }
}

/// The chordal exploration path of a quad under Dobrushin conditions, from
/// `a` (open arc `ab` on the left) to `b`.
pub fn chordal_interface<C: Coloring>(c: &C, quad: &Quad) -> Result<InterfaceTrace> {
    frame_interface(c, Framed::dobrushin(quad), Arc::AB)
}

/// Open left-right crossing read off the interface leaving junction `b`:
/// it lands at junction `c` exactly when `ab` and `cd` are joined.
pub fn crossing_by_interface<C: Coloring>(c: &C, quad: &Quad) -> Result<bool> {
    let frame = Framed::crossing(quad);
    let trace = frame_interface(c, frame, Arc::BC)?;
    Ok(landing_arc(frame, &trace) == Some(Arc::CD))
}

/// Minimum pairwise distance between points, divided by `scale`; zero for
/// fewer than two points.
pub fn quality(points: &[Point], scale: f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(points[i].dist(points[j]));
        }
    }
    if best.is_finite() {
        best / scale
    } else {
        0.0
    }
}
