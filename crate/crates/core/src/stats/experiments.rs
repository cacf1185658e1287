//! Desk-scale experiments built on the estimators.

use serde::{Deserialize, Serialize};

use super::{fit_exponent, fit_exponent_trimmed, par_sums, Estimate, Fit};
use crate::arms::{
    arm_annulus, arm_sample, estimate_alpha, four_sided_arms, ArmEstimate, ArmPattern,
};
use crate::config::RandomField;
use crate::connectivity::connected_within;
use crate::error::{Error, Result};
use crate::explore::chordal_interface;
use crate::io::cell;
use crate::lattice::{Hex, Point, Quad, SiteSet, Square};

/// `P(A) / P(B)` from joint indicator counts on the same `n` samples, with
/// the delta-method error including their covariance.
pub fn paired_ratio(n: u64, a: u64, b: u64, both: u64) -> Estimate {
    let nf = n as f64;
    let (pa, pb, pab) = (a as f64 / nf, b as f64 / nf, both as f64 / nf);
    if b == 0 {
        return Estimate {
            mean: f64::NAN,
            stderr: f64::NAN,
            n,
        };
    }
    let r = pa / pb;
    let var = if a == 0 {
        0.0
    } else {
        (pa * (1.0 - pa) / (pa * pa) + pb * (1.0 - pb) / (pb * pb)
            - 2.0 * (pab - pa * pb) / (pa * pb))
            / nf
    };
    Estimate {
        mean: r,
        stderr: r * var.max(0.0).sqrt(),
        n,
    }
}

/// Arm probabilities from one site to unit distance over a ladder of meshes.
pub fn alpha_ladder(
    p: &ArmPattern,
    inv_meshes: &[u32],
    n: u64,
    seed: u64,
) -> Result<Vec<ArmEstimate>> {
    inv_meshes
        .iter()
        .map(|&k| estimate_alpha(p, 1.0 / k as f64, 1.0, 1.0 / k as f64, n, seed ^ k as u64))
        .collect()
}

/// Fit of `ln alpha` against `ln (1/mesh)`; the slope is minus the exponent.
/// With `trim`, the coarsest scales are dropped while the fit is poor.
pub fn ladder_fit(rows: &[ArmEstimate], trim: Option<f64>) -> Result<Fit> {
    let points: Vec<(f64, Estimate)> = rows.iter().map(|e| (1.0 / e.mesh, e.estimate())).collect();
    match trim {
        Some(t) => fit_exponent_trimmed(&points, t),
        None => fit_exponent(&points),
    }
}

/// One mesh of a ratio-limit table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub mesh: f64,
    pub n: u64,
    /// Samples with the arms to distance `r`.
    pub hits_r: u64,
    /// Samples with the arms to distance 1.
    pub hits_1: u64,
    pub ratio: Estimate,
}

impl RatioRow {
    pub const CSV_HEADER: [&'static str; 6] = ["mesh", "n", "hits_r", "hits_1", "ratio", "stderr"];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            cell(self.mesh),
            self.n.to_string(),
            self.hits_r.to_string(),
            self.hits_1.to_string(),
            cell(self.ratio.mean),
            cell(self.ratio.stderr),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub pattern: ArmPattern,
    pub r: f64,
    /// Coarsest mesh first.
    pub rows: Vec<RatioRow>,
    /// `|ratio_k - ratio_{k-1}|` down the ladder.
    pub successive: Vec<f64>,
}

impl RatioTable {
    pub fn finest(&self) -> &RatioRow {
        self.rows.last().expect("nonempty table")
    }

    /// Distance of each row from `target`, in units of `target`.
    pub fn relative_errors(&self, target: f64) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| (r.ratio.mean - target).abs() / target)
            .collect()
    }
}

/// `alpha(mesh, r) / alpha(mesh, 1)` from one site, both events read off
/// the same samples.
pub fn ratio_limit_experiment(
    p: &ArmPattern,
    r: f64,
    inv_meshes: &[u32],
    n: u64,
    seed: u64,
) -> Result<RatioTable> {
    if !(r > 0.0 && r <= 1.0) || n == 0 || inv_meshes.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r <= 1, n > 0 and a mesh ladder, got r={r} n={n}"
        )));
    }
    let mut ladder = inv_meshes.to_vec();
    ladder.sort_unstable();
    let mut rows = Vec::new();
    for k in ladder {
        let mesh = 1.0 / k as f64;
        if r <= mesh {
            return Err(Error::InvalidParameter(format!(
                "r = {r} is below the mesh {mesh}"
            )));
        }
        let full = arm_annulus(mesh, 1.0, mesh)?;
        let part = if r < 1.0 {
            Some(arm_annulus(mesh, r, mesh)?)
        } else {
            None
        };
        let s = seed ^ k as u64;
        let [a, b, ab] = par_sums(0..n, |i| {
            let in_full = arm_sample(&full, p, s, i);
            let in_part = match &part {
                Some(ann) => in_full || arm_sample(ann, p, s, i),
                None => in_full,
            };
            [in_part as i64, in_full as i64, (in_part && in_full) as i64]
        });
        rows.push(RatioRow {
            mesh,
            n,
            hits_r: a as u64,
            hits_1: b as u64,
            ratio: paired_ratio(n, a as u64, b as u64, ab as u64),
        });
    }
    let successive = rows
        .windows(2)
        .map(|w| (w[1].ratio.mean - w[0].ratio.mean).abs())
        .collect();
    Ok(RatioTable {
        pattern: p.clone(),
        r,
        rows,
        successive,
    })
}

/// One orientation of the square-versus-plain comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareRatioRow {
    pub theta: f64,
    pub shift: Point,
    pub mesh: f64,
    pub n: u64,
    /// Four arms to the prescribed sides of the turned unit square.
    pub square: u64,
    /// Four alternating arms to distance 1.
    pub plain: u64,
    pub ratio: Estimate,
}

/// Ratio of the four-sided square event from the site nearest `shift` to the
/// plain four-arm event, per orientation.
pub fn square_vs_plain_ratio(
    thetas: &[f64],
    shift: Point,
    mesh: f64,
    n: u64,
    seed: u64,
) -> Result<Vec<SquareRatioRow>> {
    if !(mesh > 0.0 && mesh < 0.25) || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < mesh < 1/4 and n > 0, got mesh={mesh} n={n}"
        )));
    }
    let x = Hex::nearest(shift * (1.0 / mesh));
    let plain = crate::explore::Annular::around_site(x, 1.0 / mesh)?;
    let hole = SiteSet::from_sites([x]);
    thetas
        .iter()
        .map(|&theta| {
            let sq = Square::new(x.point(), 1.0 / mesh, theta)?;
            let quad = Quad::from_square(&sq)?;
            let four = ArmPattern::four_arm();
            // validate once, outside the parallel loop
            four_sided_arms(&RandomField::new(seed, 0), &quad, hole.clone())?;
            let [a, b, ab] = par_sums(0..n, |i| {
                let c = RandomField::new(seed, i);
                let sq_ev = four_sided_arms(&c, &quad, hole.clone()).unwrap_or(false);
                let pl_ev = crate::arms::arm_event(&c, &plain, &four).unwrap_or(false);
                [sq_ev as i64, pl_ev as i64, (sq_ev && pl_ev) as i64]
            });
            Ok(SquareRatioRow {
                theta,
                shift,
                mesh,
                n,
                square: a as u64,
                plain: b as u64,
                ratio: paired_ratio(n, a as u64, b as u64, ab as u64),
            })
        })
        .collect()
}

/// Connection frequency between two sites at one distance and angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPointRow {
    pub d: f64,
    pub angle: f64,
    pub mesh: f64,
    /// Lattice distance actually realized after rounding to a site.
    pub lattice_distance: f64,
    pub estimate: Estimate,
}

impl TwoPointRow {
    pub const CSV_HEADER: [&'static str; 7] =
        ["d", "angle", "mesh", "lattice_distance", "n", "p", "stderr"];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            cell(self.d),
            cell(self.angle),
            cell(self.mesh),
            cell(self.lattice_distance),
            self.estimate.n.to_string(),
            cell(self.estimate.mean),
            cell(self.estimate.stderr),
        ]
    }
}

/// `P[x <-> y]` for `|x - y| = d` at each angle (radians). Connections are
/// sought inside the square of radius `4d` turned with the pair.
pub fn two_point_isotropy(
    d: f64,
    angles: &[f64],
    mesh: f64,
    n: u64,
    seed: u64,
) -> Result<Vec<TwoPointRow>> {
    if !(d >= mesh * (1.0 - 1e-9)) || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "need d >= mesh and n > 0, got d={d} mesh={mesh}"
        )));
    }
    let len = d / mesh;
    angles
        .iter()
        .map(|&angle| {
            let x = Hex::ORIGIN;
            let y = Hex::nearest(Point::new(len, 0.0).rotate(angle));
            let mid = (x.point() + y.point()) * 0.5;
            let window = Square::new(mid, 4.0 * len, angle)?;
            let [k] = par_sums(0..n, |i| {
                [connected_within(&RandomField::new(seed, i), &window, x, y) as i64]
            });
            Ok(TwoPointRow {
                d,
                angle,
                mesh,
                lattice_distance: x.point().dist(y.point()),
                estimate: Estimate::frequency(k as u64, n),
            })
        })
        .collect()
}

/// Two-point function over a distance ladder, divided by the squared one-arm
/// probability to half the distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPointScaling {
    pub d: f64,
    pub two_point: Estimate,
    pub one_arm: Estimate,
    pub normalized: Estimate,
}

pub fn two_point_scaling(ds: &[f64], mesh: f64, n: u64, seed: u64) -> Result<Vec<TwoPointScaling>> {
    ds.iter()
        .map(|&d| {
            let tp = two_point_isotropy(d, &[0.0], mesh, n, seed)?
                .remove(0)
                .estimate;
            let one = estimate_alpha(&ArmPattern::one_arm(), mesh, d / 2.0, mesh, n, seed ^ 0x1A)?
                .estimate();
            let normalized = tp.ratio(one.product(one));
            Ok(TwoPointScaling {
                d,
                two_point: tp,
                one_arm: one,
                normalized,
            })
        })
        .collect()
}

/// Sandwich check for one scale triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiMultReport {
    pub pattern: ArmPattern,
    pub scales: [f64; 3],
    pub inner: Estimate,
    pub outer: Estimate,
    pub whole: Estimate,
    /// `alpha(r1, r3) / (alpha(r1, r2) alpha(r2, r3))`.
    pub constant: Estimate,
    /// Upper bound excess in standard errors; at most about 2 when it holds.
    pub upper_z: f64,
}

impl QuasiMultReport {
    pub fn upper_holds(&self, z: f64) -> bool {
        self.upper_z <= z
    }
}

/// Arm probabilities for `A(r1, r2)`, `A(r2, r3)` and `A(r1, r3)` on
/// independent samples, lattice units (the mesh rescales all three).
pub fn quasi_mult_check(
    p: &ArmPattern,
    r1: f64,
    r2: f64,
    r3: f64,
    mesh: f64,
    n: u64,
    seed: u64,
) -> Result<QuasiMultReport> {
    if !(r1 <= r2 && r2 <= r3 && r1 < r3 && r1 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r1 <= r2 <= r3, r1 < r3, got {r1}, {r2}, {r3}"
        )));
    }
    let alpha = |a: f64, b: f64, s: u64| -> Result<Estimate> {
        if a == b {
            Ok(Estimate {
                mean: 1.0,
                stderr: 0.0,
                n,
            })
        } else {
            Ok(estimate_alpha(p, a * mesh, b * mesh, mesh, n, s)?.estimate())
        }
    };
    let inner = alpha(r1, r2, seed ^ 1)?;
    let outer = alpha(r2, r3, seed ^ 2)?;
    let whole = alpha(r1, r3, seed ^ 3)?;
    let prod = inner.product(outer);
    let constant = whole.ratio(prod);
    let s = whole.stderr.hypot(prod.stderr);
    let upper_z = if s > 0.0 {
        (whole.mean - prod.mean) / s
    } else if whole.mean > prod.mean {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(QuasiMultReport {
        pattern: p.clone(),
        scales: [r1, r2, r3],
        inner,
        outer,
        whole,
        constant,
        upper_z,
    })
}

/// Interface mass within distance `delta` of the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub delta: f64,
    /// Mean number of interface edges within `delta` of the boundary.
    pub mass: Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDecay {
    pub rows: Vec<DecayRow>,
    pub total: Estimate,
    pub fit: Fit,
}

/// Chordal interface of the square of radius `radius` (lattice units) with
/// marks at the top and bottom midpoints: `ab` is the left half, open.
pub fn midpoint_quad(radius: f64) -> Result<Quad> {
    let sq = Square::axis(Point::default(), radius);
    let sites = SiteSet::from_sites(
        sq.candidates()
            .filter(|h| crate::lattice::Region::contains(&sq, *h)),
    );
    let r = radius;
    Quad::with_marks(
        sites,
        [
            Point::new(0.0, r),
            Point::new(0.0, -r),
            Point::new(r, -r),
            Point::new(r, r),
        ],
    )
}

/// `E[interface edges within delta of the boundary]` per `delta` (lattice
/// units), with a fit of its growth in `delta`. Edge distances are measured
/// from the edge midpoint to the boundary of `square`.
pub fn interface_boundary_decay(
    q: &Quad,
    square: &Square,
    deltas: &[f64],
    n: u64,
    seed: u64,
) -> Result<BoundaryDecay> {
    let mut ds = deltas.to_vec();
    ds.sort_by(f64::total_cmp);
    if ds.len() > 8 || ds.iter().any(|d| !(*d > 0.0)) || n == 0 {
        return Err(Error::InvalidParameter(
            "need up to 8 positive deltas and n > 0".into(),
        ));
    }
    chordal_interface(&RandomField::new(seed, 0), q)?;
    // per delta: count and its square; the last pair is the total
    let sums: [i64; 18] = par_sums(0..n, |i| {
        let c = RandomField::new(seed, i);
        let trace = chordal_interface(&c, q).expect("validated quad");
        let mut counts = [0i64; 9];
        for &(l, r) in &trace.edges {
            let depth = square.depth((l.point() + r.point()) * 0.5);
            for (k, d) in ds.iter().enumerate() {
                counts[k] += (depth < *d) as i64;
            }
            counts[8] += 1;
        }
        let mut out = [0i64; 18];
        for k in 0..9 {
            out[2 * k] = counts[k];
            out[2 * k + 1] = counts[k] * counts[k];
        }
        out
    });
    let est = |k: usize| Estimate::from_moments(n, sums[2 * k] as f64, sums[2 * k + 1] as f64);
    let rows: Vec<DecayRow> = ds
        .iter()
        .enumerate()
        .map(|(k, &delta)| DecayRow {
            delta,
            mass: est(k),
        })
        .collect();
    let points: Vec<(f64, Estimate)> = rows.iter().map(|r| (r.delta, r.mass)).collect();
    let fit = fit_exponent(&points)?;
    Ok(BoundaryDecay {
        rows,
        total: est(8),
        fit,
    })
}
