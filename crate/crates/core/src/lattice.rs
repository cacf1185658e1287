//! Triangular-lattice geometry.
//!
//! Sites are hexagons of the dual honeycomb, addressed by axial coordinates
//! `(q, r)`. With mesh `m` the center of `(q, r)` sits at
//! `m * (q + r/2, r * sqrt(3)/2)`. Algorithms work in lattice units (`m = 1`);
//! physical shapes are rescaled once with [`Square::in_lattice_units`].

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hex {
    pub q: i32,
    pub r: i32,
}

/// Unit steps to the six neighbours, counterclockwise starting east.
pub const DIRECTIONS: [Hex; 6] = [
    Hex::new(1, 0),
    Hex::new(0, 1),
    Hex::new(-1, 1),
    Hex::new(-1, 0),
    Hex::new(0, -1),
    Hex::new(1, -1),
];

impl Hex {
    pub const fn new(q: i32, r: i32) -> Self {
        Hex { q, r }
    }

    pub const ORIGIN: Hex = Hex::new(0, 0);

    pub fn neighbors(self) -> [Hex; 6] {
        DIRECTIONS.map(|d| self + d)
    }

    /// Rotation by 60 degrees counterclockwise about the origin site.
    #[inline]
    pub fn rot_ccw(self) -> Hex {
        Hex::new(-self.r, self.q + self.r)
    }

    #[inline]
    pub fn rot_cw(self) -> Hex {
        Hex::new(self.q + self.r, -self.q)
    }

    pub fn is_adjacent(self, other: Hex) -> bool {
        DIRECTIONS.contains(&(other - self))
    }

    /// Graph distance on the triangular lattice.
    pub fn distance(self, other: Hex) -> i32 {
        let d = other - self;
        (d.q.abs() + d.r.abs() + (d.q + d.r).abs()) / 2
    }

    /// Center of the hexagon in lattice units.
    #[inline]
    pub fn point(self) -> Point {
        Point::new(self.q as f64 + 0.5 * self.r as f64, SQRT3_2 * self.r as f64)
    }

    pub fn embed(self, mesh: f64) -> Point {
        self.point() * mesh
    }

    /// The site whose hexagon contains `p` (lattice units).
    pub fn nearest(p: Point) -> Hex {
        let rf = p.y / SQRT3_2;
        let qf = p.x - 0.5 * rf;
        let sf = -qf - rf;
        let (mut q, mut r, s) = (qf.round(), rf.round(), sf.round());
        let (dq, dr, ds) = ((q - qf).abs(), (r - rf).abs(), (s - sf).abs());
        if dq > dr && dq > ds {
            q = -r - s;
        } else if dr > ds {
            r = -q - s;
        }
        Hex::new(q as i32, r as i32)
    }
}

impl Add for Hex {
    type Output = Hex;
    #[inline]
    fn add(self, o: Hex) -> Hex {
        Hex::new(self.q + o.q, self.r + o.r)
    }
}

impl Sub for Hex {
    type Output = Hex;
    #[inline]
    fn sub(self, o: Hex) -> Hex {
        Hex::new(self.q - o.q, self.r - o.r)
    }
}

impl Neg for Hex {
    type Output = Hex;
    fn neg(self) -> Hex {
        Hex::new(-self.q, -self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// A set of sites given by a membership test.
pub trait Region {
    fn contains(&self, h: Hex) -> bool;
}

impl<R: Region + ?Sized> Region for &R {
    #[inline]
    fn contains(&self, h: Hex) -> bool {
        (**self).contains(h)
    }
}

/// The region with no sites.
#[derive(Clone, Copy, Debug, Default)]
pub struct Nowhere;

impl Region for Nowhere {
    fn contains(&self, _: Hex) -> bool {
        false
    }
}

impl Region for Hex {
    fn contains(&self, h: Hex) -> bool {
        *self == h
    }
}

/// Half-open rotated square `{ c + rot(angle)(u, v) : -R <= u, v < R }`.
///
/// As a [`Region`] it is read in lattice units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "SquareRepr", into = "SquareRepr")]
pub struct Square {
    pub center: Point,
    pub radius: f64,
    pub angle: f64,
    trig: (f64, f64),
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct SquareRepr {
    center: Point,
    radius: f64,
    angle: f64,
}

impl From<SquareRepr> for Square {
    fn from(s: SquareRepr) -> Square {
        Square::raw(s.center, s.radius, s.angle)
    }
}

impl From<Square> for SquareRepr {
    fn from(s: Square) -> SquareRepr {
        SquareRepr {
            center: s.center,
            radius: s.radius,
            angle: s.angle,
        }
    }
}

impl Square {
    pub fn new(center: Point, radius: f64, angle: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) || !center.x.is_finite() || !center.y.is_finite() {
            return Err(Error::InvalidParameter(format!("square radius {radius}")));
        }
        Ok(Self::raw(center, radius, angle))
    }

    fn raw(center: Point, radius: f64, angle: f64) -> Self {
        let trig = if angle == 0.0 {
            (0.0, 1.0)
        } else {
            angle.sin_cos()
        };
        Square {
            center,
            radius,
            angle,
            trig,
        }
    }

    /// Axis-aligned square; panics on a non-positive radius.
    pub fn axis(center: Point, radius: f64) -> Self {
        Self::new(center, radius, 0.0).expect("positive radius")
    }

    /// Axis-aligned square centered on a site, in lattice units.
    pub fn around(h: Hex, radius: f64) -> Self {
        Self::axis(h.point(), radius)
    }

    #[inline]
    fn sin_cos(&self) -> (f64, f64) {
        self.trig
    }

    /// Coordinates of `p` in the square's own frame.
    #[inline]
    pub fn local(&self, p: Point) -> (f64, f64) {
        let (s, c) = self.sin_cos();
        let d = p - self.center;
        (c * d.x + s * d.y, -s * d.x + c * d.y)
    }

    pub fn from_local(&self, u: f64, v: f64) -> Point {
        let (s, c) = self.sin_cos();
        self.center + Point::new(c * u - s * v, s * u + c * v)
    }

    #[inline]
    pub fn contains_point(&self, p: Point) -> bool {
        let (u, v) = self.local(p);
        let r = self.radius;
        u >= -r && u < r && v >= -r && v < r
    }

    /// Corners `a, b, c, d` in counterclockwise order starting top-left,
    /// so that `ab` is the left side and `cd` the right side.
    pub fn corners(&self) -> [Point; 4] {
        let r = self.radius;
        [
            self.from_local(-r, r),
            self.from_local(-r, -r),
            self.from_local(r, -r),
            self.from_local(r, r),
        ]
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn depth(&self, p: Point) -> f64 {
        let (u, v) = self.local(p);
        self.radius - u.abs().max(v.abs())
    }

    pub fn scaled(&self, k: f64) -> Square {
        Square::raw(self.center * k, self.radius * k, self.angle)
    }

    pub fn in_lattice_units(&self, mesh: f64) -> Square {
        self.scaled(1.0 / mesh)
    }

    pub fn with_radius(&self, radius: f64) -> Square {
        Square::raw(self.center, radius, self.angle)
    }

    /// Sites of the square at the given mesh.
    pub fn sites(&self, mesh: f64) -> SiteSet {
        let s = self.in_lattice_units(mesh);
        SiteSet::from_sites(s.candidates().filter(|h| s.contains(*h)))
    }

    /// All sites of the bounding parallelogram (lattice units).
    pub fn candidates(&self) -> impl Iterator<Item = Hex> {
        let (s, c) = self.sin_cos();
        let e = self.radius * (s.abs() + c.abs()) + 1.0;
        let c0 = self.center;
        let r_lo = ((c0.y - e) / SQRT3_2).floor() as i32;
        let r_hi = ((c0.y + e) / SQRT3_2).ceil() as i32;
        (r_lo..=r_hi).flat_map(move |r| {
            let q_lo = (c0.x - e - 0.5 * r as f64).floor() as i32;
            let q_hi = (c0.x + e - 0.5 * r as f64).ceil() as i32;
            (q_lo..=q_hi).map(move |q| Hex::new(q, r))
        })
    }
}

impl Region for Square {
    #[inline]
    fn contains(&self, h: Hex) -> bool {
        self.contains_point(h.point())
    }
}

/// Square annulus: outer square minus the concentric inner square.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub center: Point,
    pub r_inner: f64,
    pub r_outer: f64,
}

impl Annulus {
    pub fn new(center: Point, r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
            return Err(Error::DegenerateAnnulus(format!(
                "radii {r_inner} / {r_outer}"
            )));
        }
        Ok(Annulus {
            center,
            r_inner,
            r_outer,
        })
    }

    pub fn inner(&self) -> Square {
        Square::axis(self.center, self.r_inner)
    }

    pub fn outer(&self) -> Square {
        Square::axis(self.center, self.r_outer)
    }

    pub fn in_lattice_units(&self, mesh: f64) -> Annulus {
        Annulus {
            center: self.center * (1.0 / mesh),
            r_inner: self.r_inner / mesh,
            r_outer: self.r_outer / mesh,
        }
    }

    /// Sites strictly between the two squares; errors when no site is left.
    pub fn sites(&self, mesh: f64) -> Result<SiteSet> {
        let a = self.in_lattice_units(mesh);
        let (inner, outer) = (a.inner(), a.outer());
        let set = SiteSet::from_sites(
            outer
                .candidates()
                .filter(|h| outer.contains(*h) && !inner.contains(*h)),
        );
        if set.is_empty()
            || SiteSet::from_sites(outer.candidates().filter(|h| inner.contains(*h))).is_empty()
        {
            return Err(Error::DegenerateAnnulus(
                "no sites between the boundaries".into(),
            ));
        }
        Ok(set)
    }
}

/// Grid of squares of radius `eps` centered on `shift + rot(angle)(2 eps Z^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsGrid {
    pub eps: f64,
    pub shift: Point,
    pub angle: f64,
}

impl EpsGrid {
    pub fn new(eps: f64, shift: Point, angle: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid spacing {eps}")));
        }
        Ok(EpsGrid { eps, shift, angle })
    }

    pub fn cell(&self, i: i64, j: i64) -> Square {
        let c = self.shift
            + Point::new(2.0 * self.eps * i as f64, 2.0 * self.eps * j as f64).rotate(self.angle);
        Square::raw(c, self.eps, self.angle)
    }

    /// Index of the cell containing `p`.
    pub fn cell_of(&self, p: Point) -> (i64, i64) {
        let d = (p - self.shift).rotate(-self.angle);
        let f = |t: f64| ((t + self.eps) / (2.0 * self.eps)).floor() as i64;
        (f(d.x), f(d.y))
    }

    /// Cells whose closure lies inside `region` (same units as the grid).
    pub fn cells_inside(&self, region: &Square) -> Vec<(i64, i64)> {
        let reach = region.radius * std::f64::consts::SQRT_2 + 2.0 * self.eps;
        let (ci, cj) = self.cell_of(region.center);
        let n = (reach / (2.0 * self.eps)).ceil() as i64 + 1;
        let mut out = Vec::new();
        for i in ci - n..=ci + n {
            for j in cj - n..=cj + n {
                let cell = self.cell(i, j);
                let tol = 1e-9 * region.radius.max(1.0);
                if cell.corners().iter().all(|p| {
                    let (u, v) = region.local(*p);
                    u.abs() <= region.radius + tol && v.abs() <= region.radius + tol
                }) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Finite set of sites with constant-time membership and indexing.
#[derive(Clone, Debug, Default)]
pub struct SiteSet {
    sites: Vec<Hex>,
    q0: i32,
    r0: i32,
    width: usize,
    height: usize,
    slots: Vec<u32>,
}

const EMPTY: u32 = u32::MAX;

impl SiteSet {
    pub fn from_sites(iter: impl IntoIterator<Item = Hex>) -> Self {
        let mut sites: Vec<Hex> = iter.into_iter().collect();
        sites.sort_unstable_by_key(|h| (h.r, h.q));
        sites.dedup();
        if sites.is_empty() {
            return SiteSet::default();
        }
        let q0 = sites.iter().map(|h| h.q).min().unwrap_or(0);
        let q1 = sites.iter().map(|h| h.q).max().unwrap_or(0);
        let r0 = sites[0].r;
        let r1 = sites[sites.len() - 1].r;
        let width = (q1 - q0 + 1) as usize;
        let height = (r1 - r0 + 1) as usize;
        let mut slots = vec![EMPTY; width * height];
        for (i, h) in sites.iter().enumerate() {
            slots[(h.r - r0) as usize * width + (h.q - q0) as usize] = i as u32;
        }
        SiteSet {
            sites,
            q0,
            r0,
            width,
            height,
            slots,
        }
    }

    #[inline]
    pub fn index_of(&self, h: Hex) -> Option<usize> {
        let dq = h.q.wrapping_sub(self.q0) as u32 as usize;
        let dr = h.r.wrapping_sub(self.r0) as u32 as usize;
        if dq >= self.width || dr >= self.height {
            return None;
        }
        match self.slots[dr * self.width + dq] {
            EMPTY => None,
            i => Some(i as usize),
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Sites sorted by row, then column.
    pub fn sites(&self) -> &[Hex] {
        &self.sites
    }

    pub fn iter(&self) -> impl Iterator<Item = Hex> + '_ {
        self.sites.iter().copied()
    }

    /// Sites with at least one neighbour outside the set.
    pub fn boundary(&self) -> Vec<Hex> {
        self.iter()
            .filter(|h| h.neighbors().iter().any(|n| !self.contains(*n)))
            .collect()
    }

    /// Outside sites adjacent to the set.
    pub fn exterior(&self) -> SiteSet {
        SiteSet::from_sites(
            self.iter()
                .flat_map(|h| h.neighbors())
                .filter(|n| !self.contains(*n)),
        )
    }

    pub fn union(&self, other: &SiteSet) -> SiteSet {
        SiteSet::from_sites(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &impl Region) -> SiteSet {
        SiteSet::from_sites(self.iter().filter(|h| !other.contains(*h)))
    }

    pub fn is_subset(&self, other: &impl Region) -> bool {
        self.iter().all(|h| other.contains(h))
    }

    /// Counterclockwise walk along the outer boundary.
    ///
    /// Returns the sequence of `(inside, outside)` adjacent pairs met while
    /// keeping the set on the left, starting from the lowest-leftmost site.
    pub fn outer_walk(&self) -> Vec<(Hex, Hex)> {
        let Some(&start_in) = self.sites.first() else {
            return Vec::new();
        };
        let start = (start_in, start_in + Hex::new(-1, 0));
        let (mut l, mut r) = start;
        let mut walk = Vec::new();
        loop {
            walk.push((l, r));
            let t = l + (r - l).rot_ccw();
            if self.contains(t) {
                l = t;
            } else {
                r = t;
            }
            if (l, r) == start {
                break;
            }
        }
        walk
    }

    /// Sequence of outside sites along [`SiteSet::outer_walk`], with
    /// consecutive repeats removed.
    pub fn ring_walk(&self) -> Vec<Hex> {
        let mut ring: Vec<Hex> = Vec::new();
        for (_, o) in self.outer_walk() {
            if ring.last() != Some(&o) {
                ring.push(o);
            }
        }
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        ring
    }

    /// Cluster decomposition of the whole set under adjacency.
    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for n in self.sites[i].neighbors() {
                if let Some(j) = self.index_of(n) {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
        }
        count == self.len()
    }
}

impl Region for SiteSet {
    #[inline]
    fn contains(&self, h: Hex) -> bool {
        self.index_of(h).is_some()
    }
}

impl PartialEq for SiteSet {
    fn eq(&self, other: &Self) -> bool {
        self.sites == other.sites
    }
}

impl Serialize for SiteSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.sites.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SiteSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<Hex>::deserialize(d).map(SiteSet::from_sites)
    }
}

/// Names of the four boundary arcs of a quad.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arc {
    AB = 0,
    BC = 1,
    CD = 2,
    DA = 3,
}

impl Arc {
    pub const ALL: [Arc; 4] = [Arc::AB, Arc::BC, Arc::CD, Arc::DA];

    pub fn opposite(self) -> Arc {
        Arc::ALL[(self as usize + 2) % 4]
    }
}

/// A quad: a simply connected set of sites whose exterior ring is cut into
/// four consecutive arcs `ab, bc, cd, da` (counterclockwise).
///
/// Arcs are made of outside sites adjacent to the quad, so an open crossing
/// from `ab` to `cd` is an open path in the quad from a neighbour of `ab` to a
/// neighbour of `cd`.
#[derive(Clone, Debug)]
pub struct Quad {
    sites: SiteSet,
    ring: SiteSet,
    labels: Vec<Arc>,
    walk: Vec<Hex>,
}

impl Quad {
    /// Validates arcs given explicitly.
    pub fn new(sites: SiteSet, arcs: [Vec<Hex>; 4]) -> Result<Quad> {
        if sites.is_empty() {
            return Err(Error::EmptyRegion);
        }
        if !sites.is_connected() {
            return Err(Error::MalformedQuad("sites are not connected".into()));
        }
        let ring = sites.exterior();
        let mut label: HashMap<Hex, Arc> = HashMap::new();
        for (k, arc) in arcs.iter().enumerate() {
            if arc.is_empty() {
                return Err(Error::MalformedQuad(format!(
                    "arc {:?} is empty",
                    Arc::ALL[k]
                )));
            }
            for h in arc {
                if !ring.contains(*h) {
                    return Err(Error::MalformedQuad(format!(
                        "{h:?} is not adjacent to the quad"
                    )));
                }
                if label.insert(*h, Arc::ALL[k]).is_some() {
                    return Err(Error::MalformedQuad(format!("{h:?} belongs to two arcs")));
                }
            }
        }
        if label.len() != ring.len() {
            return Err(Error::MalformedQuad(
                "arcs do not cover the exterior ring".into(),
            ));
        }
        let walk = sites.ring_walk();
        if walk.iter().any(|h| !label.contains_key(h)) || walk.len() < ring.len() {
            return Err(Error::MalformedQuad("quad is not simply connected".into()));
        }
        let labels: Vec<Arc> = ring.iter().map(|h| label[&h]).collect();
        let quad = Quad {
            sites,
            ring,
            labels,
            walk,
        };
        quad.check_cyclic()?;
        Ok(quad)
    }

    /// Cuts the ring at the ring-walk positions nearest to the four marks,
    /// which must be given counterclockwise.
    pub fn with_marks(sites: SiteSet, marks: [Point; 4]) -> Result<Quad> {
        if sites.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let walk = sites.ring_walk();
        let n = walk.len();
        let idx: Vec<usize> = marks
            .iter()
            .map(|m| {
                (0..n)
                    .min_by(|&i, &j| {
                        walk[i]
                            .point()
                            .dist(*m)
                            .total_cmp(&walk[j].point().dist(*m))
                    })
                    .unwrap_or(0)
            })
            .collect();
        let rel: Vec<usize> = idx.iter().map(|&i| (i + n - idx[0]) % n).collect();
        if !(rel[1] > 0 && rel[2] > rel[1] && rel[3] > rel[2]) {
            return Err(Error::MalformedQuad(
                "marks are not in counterclockwise order".into(),
            ));
        }
        let mut arcs: [Vec<Hex>; 4] = Default::default();
        let mut seen = std::collections::HashSet::new();
        for step in 0..n {
            let k = (0..4).rev().find(|&k| rel[k] <= step).unwrap_or(0);
            let h = walk[(idx[0] + step) % n];
            if seen.insert(h) {
                arcs[k].push(h);
            }
        }
        Quad::new(sites, arcs)
    }

    /// The `side x side` lattice rhombus `0 <= q, r < side` with `ab` on the
    /// left (`q < 0`) and `bc` below (`r < 0`). The swap `(q, r) -> (r, q)`
    /// exchanges the two pairs of opposite arcs, so together with duality an
    /// open left-right crossing has probability exactly 1/2.
    pub fn rhombus(side: i32) -> Result<Quad> {
        if side < 2 {
            return Err(Error::MalformedQuad(format!(
                "rhombus side {side} is below 2"
            )));
        }
        let sites =
            SiteSet::from_sites((0..side).flat_map(|q| (0..side).map(move |r| Hex::new(q, r))));
        let mut arcs: [Vec<Hex>; 4] = Default::default();
        for h in sites.exterior().iter() {
            let k = if h.q < 0 {
                0
            } else if h.r < 0 {
                1
            } else if h.q >= side {
                2
            } else {
                3
            };
            arcs[k].push(h);
        }
        Quad::new(sites, arcs)
    }

    /// Quad on a square (lattice units) with marks at its corners.
    pub fn from_square(square: &Square) -> Result<Quad> {
        let sites = SiteSet::from_sites(square.candidates().filter(|h| square.contains(*h)));
        Quad::with_marks(sites, square.corners())
    }

    fn check_cyclic(&self) -> Result<()> {
        let mut runs: Vec<Arc> = Vec::new();
        for h in &self.walk {
            let a = self.arc_of(*h).expect("walk lies in ring");
            if runs.last() != Some(&a) {
                runs.push(a);
            }
        }
        while runs.len() > 1 && runs.first() == runs.last() {
            runs.pop();
        }
        let ok = runs.len() == 4
            && (0..4).all(|k| runs[(k + 1) % 4] as usize == (runs[k] as usize + 1) % 4);
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedQuad(format!(
                "arcs are not four consecutive runs: {runs:?}"
            )))
        }
    }

    pub fn sites(&self) -> &SiteSet {
        &self.sites
    }

    pub fn ring(&self) -> &SiteSet {
        &self.ring
    }

    /// Exterior ring in counterclockwise order.
    pub fn ring_walk(&self) -> &[Hex] {
        &self.walk
    }

    pub fn arc_of(&self, h: Hex) -> Option<Arc> {
        self.ring.index_of(h).map(|i| self.labels[i])
    }

    pub fn arc(&self, a: Arc) -> Vec<Hex> {
        self.ring
            .iter()
            .filter(|h| self.arc_of(*h) == Some(a))
            .collect()
    }
}

impl Region for Quad {
    fn contains(&self, h: Hex) -> bool {
        self.sites.contains(h)
    }
}

/// Serializable description of a shape, used for golden values and artifacts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Square {
        center: [f64; 2],
        radius: f64,
        angle: f64,
        mesh: f64,
    },
    Annulus {
        center: [f64; 2],
        r_inner: f64,
        r_outer: f64,
        mesh: f64,
    },
    Sites {
        sites: Vec<[i32; 2]>,
    },
    SitesWithHole {
        sites: Vec<[i32; 2]>,
        hole: Vec<[i32; 2]>,
    },
}

impl Geometry {
    /// Hex digest of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        crate::io::digest(
            serde_json::to_string(self)
                .expect("geometry serializes")
                .as_bytes(),
        )
    }

    pub fn from_sites(set: &SiteSet) -> Geometry {
        Geometry::Sites {
            sites: set.iter().map(|h| [h.q, h.r]).collect(),
        }
    }
}
