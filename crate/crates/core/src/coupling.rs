//! Conditional sampling by rejection, and the separation and coupling
//! statistics built on it.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Coloring, Configuration, RandomField};
use crate::connectivity::connected_within;
use crate::error::{Error, Result};
use crate::explore::pinched;
use crate::explore::{
    crossing_count, crossing_interfaces, quality, radial_exploration, scan, Annular, Crossing,
    ScanOptions,
};
use crate::io::cell;
use crate::lattice::{Hex, Point, Region, SiteSet, Square};
use crate::stats::{tv_with_ci, Estimate, Histogram, Tally, TvEstimate};

/// Rejection sampler over the sample indices of one seed.
///
/// Attempts are made in fixed-size chunks; within a chunk they run in
/// parallel, and accepted samples are kept in index order. The first `n`
/// accepted indices are therefore the same for any worker count.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConditionalSampler {
    pub seed: u64,
    /// Maximum number of attempts.
    pub budget: u64,
    /// First sample index to try.
    pub start: u64,
    pub chunk: u64,
}

/// Accepted samples and the attempt count.
#[derive(Clone, Debug)]
pub struct Accepted<T> {
    pub samples: Vec<(u64, T)>,
    pub attempts: u64,
}

impl<T> Accepted<T> {
    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.samples.len() as f64 / self.attempts as f64
        }
    }
}

impl ConditionalSampler {
    pub fn new(seed: u64, budget: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::InvalidParameter(
                "rejection budget must be at least 1".into(),
            ));
        }
        Ok(ConditionalSampler {
            seed,
            budget,
            start: 0,
            chunk: 4096,
        })
    }

    /// The first `n` indices whose attempt returns `Some`, with their values.
    ///
    /// Exhausting the budget with fewer than `n` acceptances is an error
    /// unless `partial` is set, in which case what was found is returned.
    pub fn collect<T, F>(&self, n: usize, partial: bool, attempt: F) -> Result<Accepted<T>>
    where
        T: Send,
        F: Fn(u64) -> Option<T> + Send + Sync,
    {
        let mut samples = Vec::with_capacity(n);
        let mut next = self.start;
        let end = self.start + self.budget;
        while samples.len() < n && next < end {
            let hi = (next + self.chunk).min(end);
            let found: Vec<(u64, T)> = (next..hi)
                .into_par_iter()
                .filter_map(|i| attempt(i).map(|t| (i, t)))
                .collect();
            for (i, t) in found {
                if samples.len() < n {
                    samples.push((i, t));
                    if samples.len() == n {
                        next = i + 1;
                    }
                }
            }
            if samples.len() < n {
                next = hi;
            }
        }
        let attempts = next - self.start;
        if samples.len() < n && !partial {
            return Err(Error::BudgetExhausted {
                attempts,
                accepted: samples.len() as u64,
            });
        }
        Ok(Accepted { samples, attempts })
    }
}

/// The configuration on `region` of the first accepted sample.
pub fn sample_conditioned<F>(
    s: &ConditionalSampler,
    region: Arc<SiteSet>,
    predicate: F,
) -> Result<(Configuration, u64)>
where
    F: Fn(&RandomField) -> bool + Send + Sync,
{
    let acc = s.collect(1, false, |i| {
        predicate(&RandomField::new(s.seed, i)).then_some(())
    })?;
    let (index, ()) = acc.samples[0];
    Ok((Configuration::sample(region, s.seed, index)?, acc.attempts))
}

/// Square annulus `A(r, R)` around the origin, lattice units, with the
/// given outer region.
fn annulus_with<O: Region>(r: f64, outer: O, outer_radius: f64) -> Result<Annular<O>> {
    let inner = Square::axis(Point::default(), r);
    let hole = SiteSet::from_sites(inner.candidates().filter(|h| inner.contains(*h)));
    Annular::new(outer, hole, Point::default(), r, outer_radius)
}

/// Outer condition of a coupling experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterGeometry {
    /// The square of radius `R` around the origin.
    Centered,
    /// The square of radius `1.5 R` centered at `(R/2, 0)`: it holds the
    /// centered one, with one side at distance `R` and the opposite at `2R`.
    Offset,
    /// The centered square turned by 45 degrees and enlarged to hold it.
    Rotated,
}

impl OuterGeometry {
    pub fn square(self, big_r: f64) -> Square {
        match self {
            OuterGeometry::Centered => Square::axis(Point::default(), big_r),
            OuterGeometry::Offset => Square::axis(Point::new(big_r / 2.0, 0.0), 1.5 * big_r),
            OuterGeometry::Rotated => Square::new(
                Point::default(),
                big_r * std::f64::consts::SQRT_2,
                std::f64::consts::FRAC_PI_4,
            )
            .expect("positive radius"),
        }
    }
}

impl std::str::FromStr for OuterGeometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centered" => Ok(OuterGeometry::Centered),
            "offset" => Ok(OuterGeometry::Offset),
            "rotated" => Ok(OuterGeometry::Rotated),
            _ => Err(Error::Parse(format!("unknown outer geometry {s:?}"))),
        }
    }
}

/// Best inner quality over alternating four-subsets of the crossings.
pub fn best_inner_quality(crossings: &[Crossing], r: f64) -> f64 {
    let m = crossings.len();
    let mut best = 0.0f64;
    for a in 0..m {
        for b in a + 1..m {
            for d in b + 1..m {
                for e in d + 1..m {
                    let pick = [&crossings[a], &crossings[b], &crossings[d], &crossings[e]];
                    if (0..4).any(|i| pick[i].left_open == pick[(i + 1) % 4].left_open) {
                        continue;
                    }
                    best = best.max(quality(&pick.map(|x| x.inner_end.point()), r));
                }
            }
        }
    }
    best
}

/// Conditional frequency of a well separated inner end, with the quality
/// histogram (tenths, capped at 2).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub r: f64,
    pub big_r: f64,
    pub estimate: Estimate,
    /// Same with the best alternating four of the ends in place of all.
    pub best_four: Estimate,
    pub histogram: Vec<u64>,
    pub attempts: u64,
}

/// `P(Q(Gamma(r)) > 1/4 | four alternating arms from r to R)`, lattice units,
/// with the quality taken over the inner ends of all crossing interfaces.
pub fn separation_statistic(
    r: f64,
    big_r: f64,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<Separation> {
    if !(r >= 1.0 && big_r > r) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= r < R, got r={r} R={big_r}"
        )));
    }
    let ann = annulus_with(r, Square::axis(Point::default(), big_r), big_r)?;
    let s = ConditionalSampler::new(seed, budget)?;
    let acc = s.collect(n, false, |i| {
        let c = RandomField::new(seed, i);
        if crossing_count(&c, &ann, 4) < 4 {
            return None;
        }
        let cr = scan(&c, &ann, ScanOptions::default()).crossings;
        let ends: Vec<Point> = cr.iter().map(|x| x.inner_end.point()).collect();
        arms_alternate(&cr).then(|| (quality(&ends, r), best_inner_quality(&cr, r)))
    })?;
    if acc.samples.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut histogram = vec![0u64; 21];
    let (mut good, mut good4) = (0u64, 0u64);
    for (_, (q, q4)) in &acc.samples {
        histogram[((q * 10.0) as usize).min(20)] += 1;
        good += (*q > 0.25) as u64;
        good4 += (*q4 > 0.25) as u64;
    }
    Ok(Separation {
        r,
        big_r,
        estimate: Estimate::frequency(good, acc.samples.len() as u64),
        best_four: Estimate::frequency(good4, acc.samples.len() as u64),
        histogram,
        attempts: acc.attempts,
    })
}

/// Four of the crossings alternate in color.
fn arms_alternate(cr: &[Crossing]) -> bool {
    let open = cr.iter().filter(|x| x.left_open).count();
    open >= 2 && cr.len() - open >= 2
}

/// Two fingerprints of the interfaces at the inner radius.
///
/// Both end with the side color after the first inner end (by angle) and a
/// three valued `U` slot: with exactly four crossings, whether the two open
/// arms are joined inside the outer region (then the closed arms are not);
/// otherwise 2. The coarse one holds the crossing count (capped at 8) and
/// the angle bin of the first end; the full one the sorted bins of all ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub coarse: u64,
    pub full: u64,
    pub u: Option<bool>,
}

pub fn face_fingerprint<C: Coloring + ?Sized, O: Region>(
    c: &C,
    ann: &Annular<O>,
    bins: u32,
) -> Fingerprint {
    let cr = crossing_interfaces(c, ann);
    let u = (cr.len() == 4).then(|| {
        let open_ends: Vec<Hex> = cr
            .iter()
            .filter(|x| x.left_open)
            .filter_map(|x| x.trace.as_ref().and_then(|t| t.open_side().next()))
            .collect();
        matches!(open_ends[..], [a, b] if connected_within(c, &&ann.outer, a, b))
    });
    let tau = std::f64::consts::TAU;
    let bins = bins as u64;
    // order by exact angle so that color plays no part in it
    let mut ends: Vec<(f64, bool)> = cr
        .iter()
        .map(|x| {
            (
                (x.inner_end.point() - ann.center).angle().rem_euclid(tau),
                x.left_open,
            )
        })
        .collect();
    ends.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ends: Vec<(u64, bool)> = ends
        .into_iter()
        .map(|(a, open)| (((a / tau * bins as f64) as u64).min(bins - 1), open))
        .collect();
    let tail = |code: u64| {
        let first = ends.first().is_some_and(|e| e.1) as u64;
        (code * 2 + first) * 3 + u.map_or(2, |u| u as u64)
    };
    let coarse = (ends.len().min(8) as u64) * bins + ends.first().map_or(0, |e| e.0);
    let full = ends.iter().fold(1u64, |code, (b, _)| code * bins + b);
    Fingerprint {
        coarse: tail(coarse),
        full: tail(full),
        u,
    }
}

/// Fingerprint with the colors switched: same ends, other colors, and `U`
/// complemented when defined.
pub fn reverse_fingerprint(code: u64) -> u64 {
    let (rest, slot) = (code / 3, code % 3);
    let slot = if slot == 2 { 2 } else { 1 - slot };
    ((rest ^ 1) * 3) + slot
}

/// One side of a coupling comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FingerprintSample {
    pub coarse: Histogram,
    pub full: Histogram,
    pub accepted: u64,
    pub attempts: u64,
}

impl FingerprintSample {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.attempts.max(1) as f64
    }

    fn reversed(&self) -> FingerprintSample {
        let flip = |h: &Histogram| {
            let mut out = Histogram::new();
            for (k, v) in h {
                *out.entry(reverse_fingerprint(*k)).or_default() += v;
            }
            out
        };
        FingerprintSample {
            coarse: flip(&self.coarse),
            full: flip(&self.full),
            ..*self
        }
    }
}

/// Fingerprints under four arms from `r` to the outer geometry, optionally
/// also conditioned on exactly four crossings and `U = tau`.
#[allow(clippy::too_many_arguments)]
pub fn fingerprint_sample(
    r: f64,
    big_r: f64,
    outer: OuterGeometry,
    tau: Option<bool>,
    bins: u32,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<FingerprintSample> {
    if !(r >= 1.0 && big_r > r && (4..=64).contains(&bins)) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= r < R and 4 <= bins <= 64, got r={r} R={big_r} bins={bins}"
        )));
    }
    let ann = annulus_with(r, outer.square(big_r), big_r)?;
    let s = ConditionalSampler::new(seed, budget)?;
    let acc = s.collect(n, false, |i| {
        let c = RandomField::new(seed, i);
        if crossing_count(&c, &ann, 4) < 4 {
            return None;
        }
        let f = face_fingerprint(&c, &ann, bins);
        match (tau, f.u) {
            (None, _) => Some(f),
            (Some(t), Some(u)) if u == t => Some(f),
            _ => None,
        }
    })?;
    let (mut coarse, mut full) = (Histogram::new(), Histogram::new());
    for (_, f) in &acc.samples {
        *coarse.entry(f.coarse).or_default() += 1;
        *full.entry(f.full).or_default() += 1;
    }
    Ok(FingerprintSample {
        coarse,
        full,
        accepted: acc.samples.len() as u64,
        attempts: acc.attempts,
    })
}

/// TV between fingerprint laws of two conditionings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingRow {
    pub r: f64,
    pub big_r: f64,
    pub bins: u32,
    /// On the coarse fingerprint.
    pub tv: TvEstimate,
    /// On the full fingerprint, for sensitivity.
    pub tv_full: Option<TvEstimate>,
    pub acceptance: (f64, f64),
}

impl CouplingRow {
    pub const CSV_HEADER: [&'static str; 12] = [
        "r",
        "R",
        "bins",
        "tv",
        "tv_null",
        "tv_excess",
        "tv_excess_stderr",
        "tv_full",
        "tv_full_excess",
        "tv_full_excess_stderr",
        "acceptance_a",
        "acceptance_b",
    ];

    pub fn csv_row(&self) -> Vec<String> {
        let full = |f: fn(&TvEstimate) -> f64| {
            self.tv_full
                .as_ref()
                .map_or(String::from("nan"), |t| cell(f(t)))
        };
        vec![
            cell(self.r),
            cell(self.big_r),
            self.bins.to_string(),
            cell(self.tv.tv),
            cell(self.tv.null_mean),
            cell(self.tv.excess()),
            cell(self.tv.excess_stderr()),
            full(|t| t.tv),
            full(|t| t.excess()),
            full(|t| t.excess_stderr()),
            cell(self.acceptance.0),
            cell(self.acceptance.1),
        ]
    }
}

fn compare(
    r: f64,
    big_r: f64,
    bins: u32,
    a: &FingerprintSample,
    b: &FingerprintSample,
    seed: u64,
) -> Result<CouplingRow> {
    Ok(CouplingRow {
        r,
        big_r,
        bins,
        tv: tv_with_ci(&a.coarse, &b.coarse, 200, seed)?,
        tv_full: Some(tv_with_ci(&a.full, &b.full, 200, seed ^ 1)?),
        acceptance: (a.acceptance_rate(), b.acceptance_rate()),
    })
}

/// Fingerprint TV under four arms to two outer geometries.
#[allow(clippy::too_many_arguments)]
pub fn coupling_tv_experiment(
    r: f64,
    big_r: f64,
    a: OuterGeometry,
    b: OuterGeometry,
    bins: u32,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<CouplingRow> {
    let sa = fingerprint_sample(r, big_r, a, None, bins, n, seed, budget)?;
    // a different seed stream keeps the two samples independent
    let sb = fingerprint_sample(r, big_r, b, None, bins, n, seed ^ 0xC0C0_0001, budget)?;
    compare(r, big_r, bins, &sa, &sb, seed)
}

/// Fingerprints given `U = 0` against color-reversed fingerprints given
/// `U = 1`; the two laws agree exactly.
pub fn color_switch_experiment(
    r: f64,
    big_r: f64,
    bins: u32,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<CouplingRow> {
    let s0 = fingerprint_sample(
        r,
        big_r,
        OuterGeometry::Centered,
        Some(false),
        bins,
        n,
        seed,
        budget,
    )?;
    let s1 = fingerprint_sample(
        r,
        big_r,
        OuterGeometry::Centered,
        Some(true),
        bins,
        n,
        seed ^ 0xC0C0_0002,
        budget,
    )?;
    compare(r, big_r, bins, &s0, &s1.reversed(), seed)
}

/// Outermost open circuit of `A(r, u)` around the origin: the open sites
/// bordering the closed flood from outside. `None` when there is none.
pub fn outermost_open_circuit<C: Coloring + ?Sized>(c: &C, r: f64, u: f64) -> Option<Vec<Hex>> {
    let inner = Square::axis(Point::default(), r);
    let outer = Square::axis(Point::default(), u);
    let in_ann = |h: Hex| outer.contains(h) && !inner.contains(h);
    let ann = SiteSet::from_sites(outer.candidates().filter(|h| in_ann(*h)));
    // the exterior counts as closed
    let rim: Vec<Hex> = ann
        .boundary()
        .into_iter()
        .filter(|h| h.neighbors().iter().any(|n| !outer.contains(*n)))
        .collect();
    let mut stack: Vec<Hex> = rim.iter().copied().filter(|h| !c.is_open(*h)).collect();
    let mut seen: HashSet<Hex> = stack.iter().copied().collect();
    let mut circuit: HashSet<Hex> = rim.iter().copied().filter(|h| c.is_open(*h)).collect();
    while let Some(h) = stack.pop() {
        for n in h.neighbors() {
            if inner.contains(n) {
                return None;
            }
            if !in_ann(n) || seen.contains(&n) {
                continue;
            }
            if c.is_open(n) {
                circuit.insert(n);
            } else {
                seen.insert(n);
                stack.push(n);
            }
        }
    }
    let mut v: Vec<Hex> = circuit.into_iter().collect();
    v.sort_unstable();
    Some(v)
}

/// Coarse circuit fingerprint: existence, mean radius in eighths of the
/// annulus width, and the angle bin of the innermost circuit site.
pub fn circuit_fingerprint<C: Coloring + ?Sized>(c: &C, r: f64, u: f64, bins: u32) -> u64 {
    let Some(circuit) = outermost_open_circuit(c, r, u) else {
        return 0;
    };
    let radius = |h: &Hex| {
        let p = h.point();
        p.x.abs().max(p.y.abs())
    };
    let mean = circuit.iter().map(radius).sum::<f64>() / circuit.len() as f64;
    let level = (((mean - r) / (u - r) * 8.0).max(0.0) as u64).min(7);
    let inmost = circuit
        .iter()
        .min_by(|a, b| radius(a).total_cmp(&radius(b)).then(a.cmp(b)))
        .expect("nonempty");
    let ang = inmost.point().angle().rem_euclid(std::f64::consts::TAU);
    let bin = ((ang / std::f64::consts::TAU * bins as f64) as u64).min(bins as u64 - 1);
    1 + level * bins as u64 + bin
}

/// TV between outermost-circuit fingerprints in `A(r, u)` given one open arm
/// from `r` to the centered square of radius `R` and to the offset geometry.
#[allow(clippy::too_many_arguments)]
pub fn one_arm_circuit_coupling(
    r: f64,
    u: f64,
    big_r: f64,
    bins: u32,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<CouplingRow> {
    if !(r >= 1.0 && u > r && big_r > u && bins >= 1) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= r < u < R, got r={r} u={u} R={big_r}"
        )));
    }
    let side = |geom: OuterGeometry, seed: u64| -> Result<(Histogram, f64)> {
        let ann = annulus_with(r, geom.square(big_r), big_r)?;
        let s = ConditionalSampler::new(seed, budget)?;
        let acc = s.collect(n, false, |i| {
            let c = RandomField::new(seed, i);
            radial_exploration(&c, &ann)
                .reached_outer()
                .then(|| circuit_fingerprint(&c, r, u, bins))
        })?;
        let mut h = Histogram::new();
        for (_, f) in &acc.samples {
            *h.entry(*f).or_default() += 1;
        }
        Ok((h, acc.acceptance_rate()))
    };
    let (ha, ra) = side(OuterGeometry::Centered, seed)?;
    let (hb, rb) = side(OuterGeometry::Offset, seed ^ 0xC0C0_0003)?;
    let tv = tv_with_ci(&ha, &hb, 200, seed)?;
    Ok(CouplingRow {
        r,
        big_r,
        bins,
        tv,
        tv_full: None,
        acceptance: (ra, rb),
    })
}

/// Frequency of an open circuit in `A(r, u)`, lattice units.
pub fn circuit_frequency(r: f64, u: f64, n: u64, seed: u64) -> Result<Estimate> {
    if !(r >= 1.0 && u > r && n > 0) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= r < u and n > 0, got r={r} u={u} n={n}"
        )));
    }
    Ok(Tally::over(0, n, |i| {
        outermost_open_circuit(&RandomField::new(seed, i), r, u).is_some() as i64
    })
    .estimate())
}

/// Frequency of exactly four arms across `A(r, 2r)` with both end
/// qualities above 1/4, lattice units.
pub fn exactly_four_separated_prob(r: f64, n: u64, seed: u64) -> Result<Estimate> {
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let ann = annulus_with(r, Square::axis(Point::default(), 2.0 * r), 2.0 * r)?;
    let t = Tally::over(0, n, |i| {
        let c = RandomField::new(seed, i);
        if crossing_count(&c, &ann, 5) != 4 {
            return 0;
        }
        let cr = crossing_interfaces(&c, &ann);
        if cr.len() != 4 || !pinched(&cr) {
            return 0;
        }
        let qi = quality(
            &cr.iter().map(|x| x.inner_end.point()).collect::<Vec<_>>(),
            ann.inner_radius,
        );
        let qo = quality(
            &cr.iter().map(|x| x.outer_end.point()).collect::<Vec<_>>(),
            ann.outer_radius,
        );
        (qi > 0.25 && qo > 0.25) as i64
    });
    Ok(t.estimate())
}

/// Relative quality of an endpoint set: build the single-linkage hierarchy
/// and take, over its merges, the smallest ratio of the merge distance to
/// the diameter of the merged cluster. Scale free; 0 for coincident points
/// and 1 for fewer than three points.
pub fn relative_quality(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 1.0;
    }
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let diam = |m: &[usize]| {
        let mut d = 0.0f64;
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                d = d.max(points[m[i]].dist(points[m[j]]));
            }
        }
        d
    };
    let gap = |a: &[usize], b: &[usize]| {
        a.iter()
            .flat_map(|&i| b.iter().map(move |&j| points[i].dist(points[j])))
            .fold(f64::INFINITY, f64::min)
    };
    let mut worst = 1.0f64;
    while members.len() > 1 {
        let mut pick = (0, 1, f64::INFINITY);
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let g = gap(&members[i], &members[j]);
                if g < pick.2 {
                    pick = (i, j, g);
                }
            }
        }
        let (i, j, g) = pick;
        let b = members.remove(j);
        members[i].extend(b);
        let d = diam(&members[i]);
        if d > 0.0 {
            worst = worst.min(g / d);
        } else {
            return 0.0;
        }
    }
    worst
}
