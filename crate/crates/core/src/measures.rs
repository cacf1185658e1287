//! Counting measures on pivotal, important and cluster sites, tilings, and
//! the grid approximation experiments.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arms::{four_arms_from_site, rho_box};
use crate::config::{Coloring, RandomField};
use crate::connectivity::{has_crossing, ClusterIndex};
use crate::coupling::ConditionalSampler;
use crate::error::{Error, Result};
use crate::explore::{chordal_interface, scan, Annular, ChordMap, Framed, ScanOptions};
use crate::lattice::{Annulus, EpsGrid, Hex, Point, Quad, Region, SiteSet, Square};
use crate::stats::{par_sums_with, Estimate};

/// What a measure counts, which fixes the arm exponent of its normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Pivotal4,
    Cluster1,
    Interface2,
}

/// Per-atom weight: one when raw, `mesh² / alpha` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub kind: MeasureKind,
    pub mesh: f64,
    /// Arm probability from one site to unit distance; `None` for raw counts.
    pub alpha: Option<f64>,
}

impl Normalization {
    pub fn raw(kind: MeasureKind, mesh: f64) -> Self {
        Normalization {
            kind,
            mesh,
            alpha: None,
        }
    }

    pub fn weight(&self) -> f64 {
        match self.alpha {
            Some(a) => self.mesh * self.mesh / a,
            None => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Site(Hex),
    Edge(Hex, Hex),
}

impl Atom {
    /// Location in lattice units; an edge sits at the midpoint.
    pub fn point(&self) -> Point {
        match *self {
            Atom::Site(h) => h.point(),
            Atom::Edge(a, b) => (a.point() + b.point()) * 0.5,
        }
    }
}

/// Equal-weight point masses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMeasure {
    pub atoms: Vec<Atom>,
    pub norm: Normalization,
}

impl PointMeasure {
    pub fn new(mut atoms: Vec<Atom>, norm: Normalization) -> Self {
        atoms.sort_unstable();
        PointMeasure { atoms, norm }
    }

    pub fn count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.count() as f64 * self.norm.weight()
    }

    /// Mass of the atoms satisfying `keep`.
    pub fn mass_where(&self, keep: impl Fn(&Atom) -> bool) -> f64 {
        self.atoms.iter().filter(|a| keep(a)).count() as f64 * self.norm.weight()
    }

    pub fn normalized(mut self, alpha: f64) -> Self {
        self.norm.alpha = Some(alpha);
        self
    }

    pub fn sites(&self) -> impl Iterator<Item = Hex> + '_ {
        self.atoms.iter().filter_map(|a| match a {
            Atom::Site(h) => Some(*h),
            Atom::Edge(..) => None,
        })
    }

    /// Every atom of `other` is an atom of `self`.
    pub fn dominates(&self, other: &PointMeasure) -> bool {
        other
            .atoms
            .iter()
            .all(|a| self.atoms.binary_search(a).is_ok())
    }
}

/// Sites of a quad that are pivotal for its open left-right crossing.
///
/// With the exterior ring colored open on `ab`, `cd` and closed on `bc`,
/// `da`, there are two chords between the four junctions; the pivotal sites
/// are those touched by both.
pub fn pivotal_measure<C: Coloring + ?Sized>(c: &C, q: &Quad, mesh: f64) -> PointMeasure {
    let frame = Framed::crossing(q);
    let domain = q.sites().union(q.ring());
    let mut map = ChordMap::new(domain);
    map.compute(&frame.over(c));
    let atoms = q
        .sites()
        .iter()
        .filter(|h| map.is_important(*h))
        .map(Atom::Site)
        .collect();
    PointMeasure::new(atoms, Normalization::raw(MeasureKind::Pivotal4, mesh))
}

/// Sites of the inner face with four alternating arms to the outer boundary.
pub fn a_important_measure<C: Coloring + ?Sized>(c: &C, a: &Annulus, mesh: f64) -> PointMeasure {
    let a = a.in_lattice_units(mesh);
    let mut map = ChordMap::new(site_set(&a.outer()));
    map.compute(c);
    let inner = a.inner();
    let atoms = map.important_in(&inner).map(Atom::Site).collect();
    PointMeasure::new(atoms, Normalization::raw(MeasureKind::Pivotal4, mesh))
}

/// Open sites of the inner face joined to the outer boundary.
pub fn cluster_measure<C: Coloring + ?Sized>(
    c: &C,
    a: &Annulus,
    mesh: f64,
) -> Result<PointMeasure> {
    let a = a.in_lattice_units(mesh);
    let outer = site_set(&a.outer());
    let clusters = ClusterIndex::build(c, &outer, true)?;
    let mut reaching = vec![false; clusters.cluster_count()];
    for h in outer.boundary() {
        if let Some(k) = clusters.cluster_of(h) {
            reaching[k] = true;
        }
    }
    let inner = a.inner();
    let atoms = outer
        .iter()
        .filter(|h| inner.contains(*h) && clusters.cluster_of(*h).is_some_and(|k| reaching[k]))
        .map(Atom::Site)
        .collect();
    Ok(PointMeasure::new(
        atoms,
        Normalization::raw(MeasureKind::Cluster1, mesh),
    ))
}

/// Edges of the chordal interface of the quad under Dobrushin conditions.
pub fn interface_measure<C: Coloring>(c: &C, q: &Quad, mesh: f64) -> Result<PointMeasure> {
    let trace = chordal_interface(c, q)?;
    let atoms = trace.edges.iter().map(|&(l, r)| Atom::Edge(l, r)).collect();
    Ok(PointMeasure::new(
        atoms,
        Normalization::raw(MeasureKind::Interface2, mesh),
    ))
}

/// Sites of `domain` with four alternating arms to distance `rho`.
pub fn rho_measure<C: Coloring + ?Sized>(
    c: &C,
    domain: &SiteSet,
    rho: f64,
    mesh: f64,
) -> PointMeasure {
    let atoms = domain
        .iter()
        .filter(|&x| {
            let b = rho_box(x, rho, mesh);
            four_arms_from_site(c, x, b, b.radius)
        })
        .map(Atom::Site)
        .collect();
    PointMeasure::new(atoms, Normalization::raw(MeasureKind::Pivotal4, mesh))
}

/// Sites of a square region (lattice units).
pub fn site_set(sq: &Square) -> SiteSet {
    SiteSet::from_sites(sq.candidates().filter(|h| sq.contains(*h)))
}

/// Annuli, in lattice units, whose inner faces tile a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnhancedTiling {
    pub annuli: Vec<Annulus>,
}

impl EnhancedTiling {
    /// The tiling `{ B(x, rho) \ {x} }` over the sites of `domain`.
    pub fn site_balls(domain: &SiteSet, rho_lattice: f64) -> Result<Self> {
        let annuli = domain
            .iter()
            .map(|x| Annulus::new(x.point(), 0.5, rho_lattice.max(1.01)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EnhancedTiling { annuli })
    }

    /// Largest outer diameter.
    pub fn diameter(&self) -> f64 {
        self.annuli
            .iter()
            .map(|a| 2.0 * std::f64::consts::SQRT_2 * a.r_outer)
            .fold(0.0, f64::max)
    }

    /// Index of the annulus whose inner face holds each site of `domain`.
    /// Errors when inner faces overlap or leave a site uncovered.
    pub fn owners(&self, domain: &SiteSet) -> Result<Vec<usize>> {
        let mut owner = vec![usize::MAX; domain.len()];
        for (k, a) in self.annuli.iter().enumerate() {
            let inner = a.inner();
            for h in inner.candidates().filter(|h| inner.contains(*h)) {
                if let Some(i) = domain.index_of(h) {
                    if owner[i] != usize::MAX {
                        return Err(Error::InvalidParameter(format!(
                            "not a tiling: inner faces overlap at {h:?}"
                        )));
                    }
                    owner[i] = k;
                }
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidParameter(format!(
                "not a tiling: {:?} is uncovered",
                domain.sites()[i]
            )));
        }
        Ok(owner)
    }
}

/// Sites of `domain` important for the annulus whose inner face holds them.
pub fn tiling_measure<C: Coloring + ?Sized>(
    c: &C,
    h: &EnhancedTiling,
    domain: &SiteSet,
    mesh: f64,
) -> Result<PointMeasure> {
    let owner = h.owners(domain)?;
    let mut by_annulus: HashMap<usize, Vec<Hex>> = HashMap::new();
    for (i, x) in domain.iter().enumerate() {
        by_annulus.entry(owner[i]).or_default().push(x);
    }
    let mut atoms = Vec::new();
    let mut keys: Vec<usize> = by_annulus.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let a = &h.annuli[k];
        let sites = &by_annulus[&k];
        if sites.len() == 1 {
            // one site: a single scan is cheaper than a chord map
            let x = sites[0];
            if four_arms_from_site(c, x, a.outer(), a.r_outer) {
                atoms.push(Atom::Site(x));
            }
        } else {
            let mut map = ChordMap::new(site_set(&a.outer()));
            map.compute(c);
            atoms.extend(
                sites
                    .iter()
                    .filter(|x| map.is_important(**x))
                    .map(|x| Atom::Site(*x)),
            );
        }
    }
    Ok(PointMeasure::new(
        atoms,
        Normalization::raw(MeasureKind::Pivotal4, mesh),
    ))
}

/// `h1` refines `h2` on `domain`: whenever inner faces share a site of the
/// domain, the outer box of the `h1` annulus lies inside that of `h2`, as
/// site sets.
pub fn refines(h1: &EnhancedTiling, h2: &EnhancedTiling, domain: &SiteSet) -> Result<bool> {
    let (o1, o2) = (h1.owners(domain)?, h2.owners(domain)?);
    let mut checked = std::collections::HashSet::new();
    for i in 0..domain.len() {
        if checked.insert((o1[i], o2[i])) {
            let (b, b2) = (h1.annuli[o1[i]].outer(), h2.annuli[o2[i]].outer());
            if !b
                .candidates()
                .filter(|h| b.contains(*h))
                .all(|h| b2.contains(h))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A square tiling family `H(eps)`: tiles of radius `eps/8` on the axis
/// grid, each with a concentric outer box of radius `eps/8 + 0.55 eps`.
///
/// Tiles meeting a tile of `H(eps')` for `eps <= 0.6875 eps'` have outer
/// boxes nested in the coarser ones, so the family is ordered along dyadic
/// ladders; the outer boxes are small enough for `H(rho)` to refine the
/// site balls of radius `rho` and wide enough for those to refine `H(2 rho)`.
pub fn square_tiling(eps_lattice: f64, domain: &SiteSet) -> Result<EnhancedTiling> {
    let t = eps_lattice / 8.0;
    let grid = EpsGrid::new(t, Point::default(), 0.0)?;
    let mut cells: Vec<(i64, i64)> = domain.iter().map(|h| grid.cell_of(h.point())).collect();
    cells.sort_unstable();
    cells.dedup();
    let annuli = cells
        .into_iter()
        .map(|(i, j)| Annulus::new(grid.cell(i, j).center, t, t + 0.55 * eps_lattice))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnhancedTiling { annuli })
}

/// Grid squares inside `b` with four alternating arms from the doubled
/// square to the outside of the chord map's domain.
pub fn grid_count_y_with(map: &ChordMap, squares: &[SiteSet]) -> u64 {
    squares
        .iter()
        .filter(|s| map.touching_any(s.iter()) >= 2)
        .count() as u64
}

/// Doubled grid squares (sites, lattice units) for the cells of `grid`
/// lying inside `b`. Errors when the grid is too fine for the mesh.
pub fn doubled_squares(b: &Square, grid: &EpsGrid, mesh: f64) -> Result<Vec<SiteSet>> {
    if grid.eps <= 2.0 * mesh {
        return Err(Error::InvalidParameter(format!(
            "grid too fine for mesh: eps {} <= 2 * {mesh}",
            grid.eps
        )));
    }
    Ok(grid
        .cells_inside(b)
        .into_iter()
        .map(|(i, j)| {
            site_set(
                &grid
                    .cell(i, j)
                    .with_radius(2.0 * grid.eps)
                    .in_lattice_units(mesh),
            )
        })
        .collect())
}

/// Number of grid squares `Q` inside `b` with four alternating arms from
/// `2Q` to the boundary of `target` (all in physical units).
pub fn grid_count_y<C: Coloring + ?Sized>(
    c: &C,
    b: &Square,
    target: &Square,
    grid: &EpsGrid,
    mesh: f64,
) -> Result<u64> {
    let squares = doubled_squares(b, grid, mesh)?;
    let mut map = ChordMap::new(site_set(&target.in_lattice_units(mesh)));
    map.compute(c);
    Ok(grid_count_y_with(&map, &squares))
}

/// Conditional mean of the important-site count in a grid square.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub eps: f64,
    pub mesh: f64,
    pub beta: Estimate,
    /// Same, also conditioned on the left-right crossing of the outer box.
    pub beta_crossed: Estimate,
    pub accepted: u64,
    pub attempts: u64,
}

impl BetaEstimate {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.attempts.max(1) as f64
    }
}

/// Mean number of `B(a,1)`-important sites in `B(a, eps)`, given four arms
/// from `B(a, 2 eps)` to the four sides of `B(a, 1)`, by rejection.
pub fn estimate_beta(
    eps: f64,
    mesh: f64,
    a: Point,
    theta: f64,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<BetaEstimate> {
    if !(2.0 * eps < 1.0 && eps >= mesh) {
        return Err(Error::InvalidParameter(format!(
            "need mesh <= eps < 1/2, got eps {eps}, mesh {mesh}"
        )));
    }
    let outer = Square::new(a, 1.0, theta)?.in_lattice_units(mesh);
    let quad = Quad::from_square(&outer)?;
    let q0 = site_set(&Square::new(a, eps, theta)?.in_lattice_units(mesh));
    let hole = site_set(&Square::new(a, 2.0 * eps, theta)?.in_lattice_units(mesh));
    let frame = Framed::crossing(&quad);
    let ann = Annular::new(frame, hole, outer.center, 2.0 * eps / mesh, outer.radius)?;
    let template = ChordMap::new(quad.sites().clone());
    let sampler = ConditionalSampler::new(seed, budget)?;
    let acc = sampler.collect(n, false, |i| {
        let c = RandomField::new(seed, i);
        let fc = frame.over(c);
        if scan(
            &fc,
            &ann,
            ScanOptions {
                need: Some(4),
                ..Default::default()
            },
        )
        .count()
            < 4
        {
            return None;
        }
        // accepted samples are rare enough that a fresh map per sample is fine
        let mut map = template.clone();
        map.compute(&c);
        let count = q0.iter().filter(|h| map.is_important(*h)).count() as i64;
        let crossed = has_crossing(&c, &quad, true).expect("field covers the quad");
        Some((count, crossed))
    })?;
    let (mut s, mut s2, mut sc, mut sc2, mut nc) = (0f64, 0f64, 0f64, 0f64, 0u64);
    for (_, (x, crossed)) in &acc.samples {
        let x = *x as f64;
        s += x;
        s2 += x * x;
        if *crossed {
            sc += x;
            sc2 += x * x;
            nc += 1;
        }
    }
    let k = acc.samples.len() as u64;
    Ok(BetaEstimate {
        eps,
        mesh,
        beta: Estimate::from_moments(k, s, s2),
        beta_crossed: Estimate::from_moments(nc, sc, sc2),
        accepted: k,
        attempts: acc.attempts,
    })
}

const MONOMIALS: [(u32, u32); 15] = [
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (4, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 4),
    (0, 0),
];

/// One row of the X-versus-beta-Y experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XyRow {
    pub eps: f64,
    pub mesh: f64,
    pub n: u64,
    pub beta: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    /// `E[(X - beta Y)^2] / E[X]^2`.
    pub ratio: Estimate,
}

/// Setup of the X-versus-beta-Y experiment, physical units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XySetup {
    /// Outer box of the annulus `A`; its inner face is the half-size box.
    pub outer: Square,
    /// Counting box `B`, inside the inner face.
    pub count_box: Square,
    /// Mesh as a fraction of the grid spacing.
    pub mesh_ratio: f64,
    pub theta: f64,
}

impl Default for XySetup {
    fn default() -> Self {
        XySetup {
            outer: Square::axis(Point::default(), 1.0),
            count_box: Square::axis(Point::default(), 0.25),
            mesh_ratio: 0.125,
            theta: 0.0,
        }
    }
}

/// Joint samples of `X` (important sites of `A` in `B`) and `Y` (grid count).
/// The grid is shifted so that its squares tile `B`; beta is estimated first
/// with `beta_n` accepted samples.
pub fn xy_l2_experiment(
    setup: &XySetup,
    eps: f64,
    n: u64,
    beta_n: usize,
    seed: u64,
) -> Result<(XyRow, BetaEstimate)> {
    let mesh = eps * setup.mesh_ratio;
    let grid = EpsGrid::new(
        eps,
        setup.count_box.center + Point::new(eps, eps),
        setup.theta,
    )?;
    let a0 = grid.cell(0, 0).center;
    let beta = estimate_beta(
        eps,
        mesh,
        a0,
        setup.theta,
        beta_n,
        seed ^ 0xBE7A,
        400 * beta_n as u64 + 100_000,
    )?;
    let b = beta.beta.mean;
    let squares = doubled_squares(&setup.count_box, &grid, mesh)?;
    let count_box = setup.count_box.in_lattice_units(mesh);
    let template = ChordMap::new(site_set(&setup.outer.in_lattice_units(mesh)));
    let counted: Vec<Hex> = template
        .domain()
        .iter()
        .filter(|h| count_box.contains(*h))
        .collect();
    // integer moment sums E[X^a Y^b], a + b <= 4, keep the run order-free
    let sums: [i64; 15] = par_sums_with(
        0..n,
        || template.clone(),
        |map, i| {
            let c = RandomField::new(seed, i);
            map.compute(&c);
            let x = counted.iter().filter(|h| map.is_important(**h)).count() as i64;
            let y = grid_count_y_with(map, &squares) as i64;
            let mut out = [0i64; 15];
            for (k, (a, b)) in MONOMIALS.iter().enumerate() {
                out[k] = x.pow(*a) * y.pow(*b);
            }
            out
        },
    );
    let m = |a: u32, b: u32| {
        let k = MONOMIALS
            .iter()
            .position(|&p| p == (a, b))
            .expect("monomial");
        sums[k] as f64 / n as f64
    };
    let (mx, my) = (m(1, 0), m(0, 1));
    let ez = m(2, 0) - 2.0 * b * m(1, 1) + b * b * m(0, 2);
    let ez2 = m(4, 0) - 4.0 * b * m(3, 1) + 6.0 * b * b * m(2, 2) - 4.0 * b.powi(3) * m(1, 3)
        + b.powi(4) * m(0, 4);
    let ezx = m(3, 0) - 2.0 * b * m(2, 1) + b * b * m(1, 2);
    let (var_z, var_x, cov) = (ez2 - ez * ez, m(2, 0) - mx * mx, ezx - ez * mx);
    let ratio = ez / (mx * mx);
    // delta method for E[Z] / E[X]^2; beta treated as fixed
    let var = (var_z / mx.powi(4) + 4.0 * ez * ez * var_x / mx.powi(6)
        - 4.0 * ez * cov / mx.powi(5))
        / n as f64;
    let stderr = var.max(0.0).sqrt();
    Ok((
        XyRow {
            eps,
            mesh,
            n,
            beta: b,
            mean_x: mx,
            mean_y: my,
            ratio: Estimate {
                mean: ratio,
                stderr,
                n,
            },
        },
        beta,
    ))
}

/// Expected important-site counts for `A`, `B` and their `lambda`-dilates at
/// the same mesh, and the ratio of the two.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceRow {
    pub lambda: f64,
    pub base: Estimate,
    pub scaled: Estimate,
    pub ratio: Estimate,
}

/// Mean number of `A`-important sites in `B` and of `lambda A`-important
/// sites in `lambda B`, on the same samples (lattice units).
pub fn scaling_covariance_experiment(
    outer: &Square,
    count_box: &Square,
    lambda: f64,
    n: u64,
    seed: u64,
) -> Result<CovarianceRow> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let sets = |k: f64| -> (ChordMap, Vec<Hex>) {
        let (o, b) = (outer.scaled(k), count_box.scaled(k));
        let map = ChordMap::new(site_set(&o));
        let counted = map.domain().iter().filter(|h| b.contains(*h)).collect();
        (map, counted)
    };
    let (m1, c1) = sets(1.0);
    let (m2, c2) = sets(lambda);
    let [s1, s2, s11, s22, s12] = par_sums_with(
        0..n,
        || (m1.clone(), m2.clone()),
        |(a, b), i| {
            let c = RandomField::new(seed, i);
            a.compute(&c);
            b.compute(&c);
            let x = c1.iter().filter(|h| a.is_important(**h)).count() as i64;
            let y = c2.iter().filter(|h| b.is_important(**h)).count() as i64;
            [x, y, x * x, y * y, x * y]
        },
    );
    let nf = n as f64;
    let base = Estimate::from_moments(n, s1 as f64, s11 as f64);
    let scaled = Estimate::from_moments(n, s2 as f64, s22 as f64);
    let r = scaled.mean / base.mean;
    // delta method for a ratio of correlated means
    let (vx, vy) = (
        s11 as f64 / nf - base.mean.powi(2),
        s22 as f64 / nf - scaled.mean.powi(2),
    );
    let cov = s12 as f64 / nf - base.mean * scaled.mean;
    let var = (vy / scaled.mean.powi(2) + vx / base.mean.powi(2)
        - 2.0 * cov / (base.mean * scaled.mean))
        / nf;
    Ok(CovarianceRow {
        lambda,
        base,
        scaled,
        ratio: Estimate {
            mean: r,
            stderr: r * var.max(0.0).sqrt(),
            n,
        },
    })
}
