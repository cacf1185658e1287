//! Estimates, reducers, exponent fits and distribution distances.
//!
//! Per-sample outputs are integers and shards are combined by integer
//! addition, so every reduction is exact and independent of how the index
//! range was split across workers.

mod experiments;

#[allow(unused_imports)]
pub use experiments::*;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sums `f(i)` componentwise over `indices`, in parallel on the current pool.
pub fn par_sums<const K: usize, F>(indices: std::ops::Range<u64>, f: F) -> [i64; K]
where
    F: Fn(u64) -> [i64; K] + Send + Sync,
{
    indices.into_par_iter().map(f).reduce(
        || [0; K],
        |mut a, b| {
            for k in 0..K {
                a[k] += b[k];
            }
            a
        },
    )
}

/// As [`par_sums`], with per-worker scratch state built by `init`.
pub fn par_sums_with<const K: usize, T, I, F>(
    indices: std::ops::Range<u64>,
    init: I,
    f: F,
) -> [i64; K]
where
    I: Fn() -> T + Send + Sync,
    F: Fn(&mut T, u64) -> [i64; K] + Send + Sync,
{
    indices.into_par_iter().map_init(init, f).reduce(
        || [0; K],
        |mut a, b| {
            for k in 0..K {
                a[k] += b[k];
            }
            a
        },
    )
}

/// Exact running sums of an integer statistic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub n: u64,
    pub sum: i64,
    pub sum_sq: i64,
}

impl Tally {
    pub fn push(&mut self, x: i64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(self, o: Tally) -> Tally {
        Tally {
            n: self.n + o.n,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }

    /// Tally of `f(i)` over `n` consecutive indices starting at `start`.
    pub fn over<F>(start: u64, n: u64, f: F) -> Tally
    where
        F: Fn(u64) -> i64 + Send + Sync,
    {
        let [s, s2] = par_sums(start..start + n, |i| {
            let x = f(i);
            [x, x * x]
        });
        Tally {
            n,
            sum: s,
            sum_sq: s2,
        }
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum as f64 / self.n as f64
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate::from_moments(self.n, self.sum as f64, self.sum_sq as f64)
    }
}

/// A mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

impl Estimate {
    pub fn from_moments(n: u64, sum: f64, sum_sq: f64) -> Estimate {
        if n == 0 {
            return Estimate {
                mean: 0.0,
                stderr: 0.0,
                n: 0,
            };
        }
        let nf = n as f64;
        let mean = sum / nf;
        let var = (sum_sq / nf - mean * mean).max(0.0);
        Estimate {
            mean,
            stderr: (var / nf).sqrt(),
            n,
        }
    }

    /// Bernoulli frequency `k / n`.
    pub fn frequency(k: u64, n: u64) -> Estimate {
        Estimate::from_moments(n, k as f64, k as f64)
    }

    /// Pooled estimate of two independent runs of the same quantity.
    pub fn merge(self, o: Estimate) -> Estimate {
        let n = self.n + o.n;
        if n == 0 {
            return self;
        }
        let (a, b) = (self.n as f64, o.n as f64);
        let mean = (a * self.mean + b * o.mean) / n as f64;
        // recover second moments and pool them
        let m2 = |e: &Estimate, k: f64| k * (e.stderr * e.stderr * k + e.mean * e.mean);
        let sum_sq = m2(&self, a) + m2(&o, b);
        Estimate::from_moments(n, mean * n as f64, sum_sq)
    }

    /// Ratio of independent estimates, stderr by the delta method.
    pub fn ratio(self, o: Estimate) -> Estimate {
        let mean = self.mean / o.mean;
        let rel = (self.stderr / self.mean).hypot(o.stderr / o.mean);
        Estimate {
            mean,
            stderr: mean.abs() * rel,
            n: self.n.min(o.n),
        }
    }

    /// Product of independent estimates.
    pub fn product(self, o: Estimate) -> Estimate {
        let mean = self.mean * o.mean;
        let stderr = (self.stderr * o.mean).hypot(o.stderr * self.mean);
        Estimate {
            mean,
            stderr,
            n: self.n.min(o.n),
        }
    }

    pub fn ci(&self, z: f64) -> (f64, f64) {
        (self.mean - z * self.stderr, self.mean + z * self.stderr)
    }

    /// Distance between two independent estimates in combined standard errors.
    pub fn z_distance(&self, o: &Estimate) -> f64 {
        let s = self.stderr.hypot(o.stderr);
        if s == 0.0 {
            if self.mean == o.mean {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - o.mean).abs() / s
        }
    }
}

/// Result of a weighted log-log fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub chi2: f64,
    /// Scales dropped before fitting (coarsest first).
    pub dropped: Vec<f64>,
}

impl Fit {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        (self.slope - value).abs() <= tol
    }
}

/// Weighted least squares of `ln y` against `ln scale`, weights from the
/// relative standard errors.
pub fn fit_exponent(points: &[(f64, Estimate)]) -> Result<Fit> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "{} scales, need at least 3",
            points.len()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for &(s, e) in points {
        if !(e.mean > 0.0) || !(s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "non-positive value {} at scale {s}",
                e.mean
            )));
        }
        let sig = e.stderr / e.mean;
        xs.push(s.ln());
        ys.push(e.mean.ln());
        ws.push(if sig > 0.0 { 1.0 / (sig * sig) } else { 1e12 });
    }
    let (slope, slope_stderr, intercept, chi2) = wls(&xs, &ys, &ws);
    Ok(Fit {
        slope,
        slope_stderr,
        intercept,
        chi2,
        dropped: Vec::new(),
    })
}

/// As [`fit_exponent`], dropping the coarsest scale (smallest ratio) while
/// the fit is poor and more than three points remain.
pub fn fit_exponent_trimmed(points: &[(f64, Estimate)], chi2_per_dof: f64) -> Result<Fit> {
    let mut pts: Vec<(f64, Estimate)> = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut dropped = Vec::new();
    loop {
        let mut fit = fit_exponent(&pts)?;
        let dof = (pts.len() - 2) as f64;
        if fit.chi2 / dof <= chi2_per_dof || pts.len() <= 3 {
            fit.dropped = dropped;
            return Ok(fit);
        }
        dropped.push(pts.remove(0).0);
    }
}

/// Weighted linear regression; returns slope, its stderr, intercept, chi².
pub fn wls(xs: &[f64], ys: &[f64], ws: &[f64]) -> (f64, f64, f64, f64) {
    let sw: f64 = ws.iter().sum();
    let sx: f64 = xs.iter().zip(ws).map(|(x, w)| w * x).sum();
    let sy: f64 = ys.iter().zip(ws).map(|(y, w)| w * y).sum();
    let sxx: f64 = xs.iter().zip(ws).map(|(x, w)| w * x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).zip(ws).map(|((x, y), w)| w * x * y).sum();
    let det = sw * sxx - sx * sx;
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let chi2 = xs
        .iter()
        .zip(ys)
        .zip(ws)
        .map(|((x, y), w)| w * (y - intercept - slope * x).powi(2))
        .sum();
    (slope, (sw / det).sqrt(), intercept, chi2)
}

/// Empirical distribution over integer-coded categories.
pub type Histogram = BTreeMap<u64, u64>;

/// Plug-in total variation distance between two empirical distributions.
pub fn tv_distance(a: &Histogram, b: &Histogram) -> f64 {
    let (na, nb) = (
        a.values().sum::<u64>() as f64,
        b.values().sum::<u64>() as f64,
    );
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    let keys: std::collections::BTreeSet<&u64> = a.keys().chain(b.keys()).collect();
    0.5 * keys
        .into_iter()
        .map(|k| (*a.get(k).unwrap_or(&0) as f64 / na - *b.get(k).unwrap_or(&0) as f64 / nb).abs())
        .sum::<f64>()
}

/// Total variation estimate with a bootstrap interval and a permutation null.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvEstimate {
    pub tv: f64,
    /// Bootstrap standard deviation.
    pub stderr: f64,
    pub ci: (f64, f64),
    /// Mean plug-in TV when both samples come from the pooled law; the
    /// plug-in estimator's bias at these sample sizes.
    pub null_mean: f64,
    pub null_sd: f64,
    pub n_a: u64,
    pub n_b: u64,
}

impl TvEstimate {
    /// TV with the sampling bias (null mean) subtracted.
    pub fn excess(&self) -> f64 {
        self.tv - self.null_mean
    }

    /// Uncertainty of [`TvEstimate::excess`].
    pub fn excess_stderr(&self) -> f64 {
        self.stderr.hypot(self.null_sd)
    }
}

fn resample(sample: &[u64], rng: &mut ChaCha8Rng) -> Histogram {
    let mut h = Histogram::new();
    for _ in 0..sample.len() {
        *h.entry(sample[rng.gen_range(0..sample.len())]).or_default() += 1;
    }
    h
}

fn expand(h: &Histogram) -> Vec<u64> {
    h.iter()
        .flat_map(|(&k, &c)| std::iter::repeat_n(k, c as usize))
        .collect()
}

/// Plug-in TV with `reps` bootstrap and permutation replicates.
pub fn tv_with_ci(a: &Histogram, b: &Histogram, reps: usize, seed: u64) -> Result<TvEstimate> {
    let (xa, xb) = (expand(a), expand(b));
    if xa.is_empty() || xb.is_empty() {
        return Err(Error::NoSamples);
    }
    let tv = tv_distance(a, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boot: Vec<f64> = (0..reps)
        .map(|_| tv_distance(&resample(&xa, &mut rng), &resample(&xb, &mut rng)))
        .collect();
    boot.sort_by(f64::total_cmp);
    let mean_sd = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (
            m,
            (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len().max(2) - 1) as f64).sqrt(),
        )
    };
    let (_, sd) = mean_sd(&boot);
    let q = |p: f64| boot[((p * (boot.len() - 1) as f64).round() as usize).min(boot.len() - 1)];
    let mut pooled: Vec<u64> = xa.iter().chain(&xb).copied().collect();
    let mut null = Vec::with_capacity(reps);
    for _ in 0..reps {
        // Fisher-Yates on the pooled sample, then split
        for i in (1..pooled.len()).rev() {
            pooled.swap(i, rng.gen_range(0..=i));
        }
        let mut ha = Histogram::new();
        let mut hb = Histogram::new();
        for (i, &k) in pooled.iter().enumerate() {
            *if i < xa.len() { &mut ha } else { &mut hb }
                .entry(k)
                .or_default() += 1;
        }
        null.push(tv_distance(&ha, &hb));
    }
    let (null_mean, null_sd) = mean_sd(&null);
    Ok(TvEstimate {
        tv,
        stderr: sd,
        ci: (q(0.025), q(0.975)),
        null_mean,
        null_sd,
        n_a: xa.len() as u64,
        n_b: xb.len() as u64,
    })
}
