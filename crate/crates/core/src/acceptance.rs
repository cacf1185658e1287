//! The acceptance suite: fifteen pass/fail checks with their tables.
//!
//! Shared by the `suite` subcommand and the `acceptance` test target.

use std::time::Instant;

use serde::Serialize;

use crate::arms::{estimate_alpha, ArmEstimate, ArmPattern};
use crate::config::RandomField;
use crate::connectivity::has_crossing;
use crate::coupling::{
    color_switch_experiment, coupling_tv_experiment, separation_statistic, CouplingRow,
    OuterGeometry,
};
use crate::error::{Error, Result};
use crate::explore::crossing_by_interface;
use crate::io::{cell, digest, Table};
use crate::lattice::{Point, Quad, SiteSet, Square};
use crate::measures::{
    refines, rho_measure, scaling_covariance_experiment, site_set, square_tiling, tiling_measure,
    xy_l2_experiment, EnhancedTiling, XySetup,
};
use crate::oracle::full_suite;
use crate::stats::{
    alpha_ladder, interface_boundary_decay, ladder_fit, midpoint_quad, par_sums, quasi_mult_check,
    ratio_limit_experiment, two_point_isotropy, two_point_scaling, Estimate, RatioRow, TwoPointRow,
};

/// How much sampling to do. `Full` meets the stated sample sizes; `Quick`
/// runs every check at a small fraction of them (its verdicts are not
/// meaningful for the statistical criteria).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Full,
    Quick,
}

impl Profile {
    fn n(self, full: u64) -> u64 {
        match self {
            Profile::Full => full,
            Profile::Quick => (full / 50).max(100),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub profile: Profile,
}

/// Number, short name and time limit (seconds) of each check.
pub const CRITERIA: [(u8, &str, f64); 15] = [
    (1, "oracle-equivalence", 600.0),
    (2, "duality", 60.0),
    (3, "symmetric-crossing", 300.0),
    (4, "four-arm-exponent", 7200.0),
    (5, "one-arm-exponent", 3600.0),
    (6, "ratio-limit", 3600.0),
    (7, "quasi-multiplicativity", 1800.0),
    (8, "separation", 7200.0),
    (9, "coupling-decay", 10800.0),
    (10, "xy-l2", 7200.0),
    (11, "two-point-isotropy", 3600.0),
    (12, "scaling-covariance", 3600.0),
    (13, "filtering-dominations", 600.0),
    (14, "boundary-decay", 3600.0),
    (15, "determinism", f64::INFINITY),
];

/// Result of one check.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub seconds: f64,
    pub limit_seconds: f64,
    #[serde(skip)]
    pub tables: Vec<(String, Table)>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {:<24} {:>8.1}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.summary
        )
    }
}

struct Verdict {
    passed: bool,
    summary: String,
    tables: Vec<(String, Table)>,
}

/// Runs one check; its time limit is part of the verdict.
pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> Result<Outcome> {
    let &(_, name, limit) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidParameter(format!("no criterion {id}")))?;
    let t = Instant::now();
    let v = match id {
        1 => oracle_equivalence()?,
        2 => duality(cfg)?,
        3 => symmetric_crossing(cfg)?,
        4 => arm_exponent(cfg, &ArmPattern::four_arm(), -1.25, 0.10)?,
        5 => arm_exponent(cfg, &ArmPattern::one_arm(), -5.0 / 48.0, 0.03)?,
        6 => ratio_limit(cfg)?,
        7 => quasi_multiplicativity(cfg)?,
        8 => separation(cfg)?,
        9 => coupling_decay(cfg)?,
        10 => xy_l2(cfg)?,
        11 => two_point(cfg)?,
        12 => scaling_covariance(cfg)?,
        13 => filtering(cfg)?,
        14 => boundary_decay(cfg)?,
        _ => determinism(cfg)?,
    };
    let seconds = t.elapsed().as_secs_f64();
    let in_time = seconds <= limit;
    let summary = if in_time {
        v.summary
    } else {
        format!("{} (over the {limit:.0}s limit)", v.summary)
    };
    Ok(Outcome {
        id,
        name: name.into(),
        passed: v.passed && in_time,
        summary,
        seconds,
        limit_seconds: limit,
        tables: v.tables,
    })
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Table {
    let mut t = Table::new(header);
    for r in rows {
        t.push(r);
    }
    t
}

fn est_cells(e: &Estimate) -> Vec<String> {
    vec![e.n.to_string(), cell(e.mean), cell(e.stderr)]
}

fn oracle_equivalence() -> Result<Verdict> {
    let rows = full_suite();
    let mut by_pred: std::collections::BTreeMap<&str, (usize, u64, bool)> = Default::default();
    for a in &rows {
        let e = by_pred.entry(a.predicate.as_str()).or_default();
        e.0 += 1;
        e.1 += a.disagreements;
        e.2 |= a.informative == 0 || a.sites > crate::oracle::MAX_SITES;
    }
    let weak: Vec<&str> = by_pred
        .iter()
        .filter(|(_, v)| v.0 < 5 || v.2)
        .map(|(k, _)| *k)
        .collect();
    let bad: u64 = by_pred.values().map(|v| v.1).sum();
    let t = table(
        &[
            "predicate",
            "geometry",
            "sites",
            "configs",
            "informative",
            "disagreements",
        ],
        rows.iter().map(|a| {
            vec![
                a.predicate.clone(),
                a.geometry.clone(),
                a.sites.to_string(),
                a.configs.to_string(),
                a.informative.to_string(),
                a.disagreements.to_string(),
            ]
        }),
    );
    Ok(Verdict {
        passed: bad == 0 && weak.is_empty(),
        summary: format!(
            "{} predicates, {} geometry checks, {bad} disagreements, weak: {weak:?}",
            by_pred.len(),
            rows.len()
        ),
        tables: vec![("oracle".into(), t)],
    })
}

/// Quads for the duality check: an upright square, a turned square and a
/// lattice rhombus.
pub fn duality_quads() -> Result<Vec<(String, Quad)>> {
    Ok(vec![
        (
            "square r=10".into(),
            Quad::from_square(&Square::new(Point::new(0.3, 0.2), 10.0, 0.0)?)?,
        ),
        (
            "square r=14 turned 0.5".into(),
            Quad::from_square(&Square::new(Point::new(-0.2, 0.4), 14.0, 0.5)?)?,
        ),
        ("rhombus 20".into(), Quad::rhombus(20)?),
    ])
}

fn duality(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(100_000);
    let mut rows = Vec::new();
    let mut failures = 0;
    for (k, (name, q)) in duality_quads()?.into_iter().enumerate() {
        let seed = cfg.seed ^ (0xD0 + k as u64);
        let [bad] = par_sums(0..n, |i| {
            let c = RandomField::new(seed, i);
            let open = has_crossing(&c, &q, true).expect("field covers the quad");
            let closed = has_crossing(&c, &q, false).expect("field covers the quad");
            [(open == closed) as i64]
        });
        failures += bad;
        rows.push(vec![name, n.to_string(), bad.to_string()]);
    }
    Ok(Verdict {
        passed: failures == 0,
        summary: format!("{failures} violations in {} configurations", 3 * n),
        tables: vec![("duality".into(), table(&["quad", "n", "violations"], rows))],
    })
}

fn symmetric_crossing(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(100_000);
    let q = Quad::rhombus(256)?;
    crossing_by_interface(&RandomField::new(cfg.seed, 0), &q)?;
    let [k] = par_sums(0..n, |i| {
        [
            crossing_by_interface(&RandomField::new(cfg.seed ^ 0x5E, i), &q)
                .expect("validated quad") as i64,
        ]
    });
    let e = Estimate::frequency(k as u64, n);
    let z = (e.mean - 0.5).abs() / (0.25 / n as f64).sqrt();
    Ok(Verdict {
        passed: z <= 4.0,
        summary: format!(
            "P = {:.5} +- {:.5}, {z:.2} sigma from 1/2",
            e.mean, e.stderr
        ),
        tables: vec![(
            "symmetric_crossing".into(),
            table(
                &["side", "n", "p", "stderr"],
                [{
                    let mut r = vec!["256".to_string()];
                    r.extend(est_cells(&e));
                    r
                }],
            ),
        )],
    })
}

/// Mesh ladder for the exponent and ratio checks.
pub const LADDER: [u32; 4] = [64, 128, 256, 512];

fn arm_table(rows: &[ArmEstimate]) -> Table {
    table(&ArmEstimate::CSV_HEADER, rows.iter().map(|r| r.csv_row()))
}

fn arm_exponent(cfg: &SuiteConfig, p: &ArmPattern, target: f64, tol: f64) -> Result<Verdict> {
    let n = cfg
        .profile
        .n(if p.len() == 1 { 300_000 } else { 1_000_000 });
    let rows = alpha_ladder(p, &LADDER, n, cfg.seed ^ 0xA1)?;
    let fit = ladder_fit(&rows, None)?;
    let trimmed = ladder_fit(&rows, Some(2.0))?;
    Ok(Verdict {
        passed: fit.contains(target, tol),
        summary: format!(
            "slope {:.4} +- {:.4} (target {target:.4} +- {tol}); trimmed fit {:.4} dropping {:?}",
            fit.slope, fit.slope_stderr, trimmed.slope, trimmed.dropped
        ),
        tables: vec![
            (format!("alpha_{p}"), arm_table(&rows)),
            (
                format!("fit_{p}"),
                fit_table(&[("wls", &fit), ("trimmed", &trimmed)]),
            ),
        ],
    })
}

fn fit_table(fits: &[(&str, &crate::stats::Fit)]) -> Table {
    table(
        &[
            "fit",
            "slope",
            "slope_stderr",
            "intercept",
            "chi2",
            "dropped",
        ],
        fits.iter().map(|(name, f)| {
            vec![
                name.to_string(),
                cell(f.slope),
                cell(f.slope_stderr),
                cell(f.intercept),
                cell(f.chi2),
                f.dropped
                    .iter()
                    .map(|d| cell(*d))
                    .collect::<Vec<_>>()
                    .join(" "),
            ]
        }),
    )
}

/// Successive differences are non-increasing within `z` combined standard
/// errors of the two ratios they share.
pub fn diagnostic_decreasing(rows: &[RatioRow], z: f64) -> bool {
    let d: Vec<(f64, f64)> = rows
        .windows(2)
        .map(|w| {
            (
                (w[1].ratio.mean - w[0].ratio.mean).abs(),
                w[1].ratio.stderr.hypot(w[0].ratio.stderr),
            )
        })
        .collect();
    d.windows(2)
        .all(|w| w[1].0 <= w[0].0 + z * w[0].1.hypot(w[1].1))
}

fn ratio_limit(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(1_000_000);
    let target = 2f64.powf(1.25);
    let tab = ratio_limit_experiment(&ArmPattern::four_arm(), 0.5, &LADDER, n, cfg.seed ^ 0xB2)?;
    let fin = tab.finest().ratio;
    let close = (fin.mean - target).abs() / target <= 0.10;
    let decreasing = diagnostic_decreasing(&tab.rows, 2.0);
    Ok(Verdict {
        passed: close && decreasing,
        summary: format!(
            "finest ratio {:.4} +- {:.4} vs {target:.4} ({:.1}% off); successive differences {:?}{}",
            fin.mean,
            fin.stderr,
            100.0 * (fin.mean - target).abs() / target,
            tab.successive.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>(),
            if decreasing { "" } else { " not decreasing" }
        ),
        tables: vec![("ratio_OCOC".into(), table(&RatioRow::CSV_HEADER, tab.rows.iter().map(|r| r.csv_row())))],
    })
}

fn quasi_multiplicativity(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(100_000);
    let p = ArmPattern::four_arm();
    let a = quasi_mult_check(&p, 8.0, 16.0, 32.0, 1.0, n, cfg.seed ^ 0xC3)?;
    let b = quasi_mult_check(&p, 16.0, 32.0, 64.0, 1.0, n, cfg.seed ^ 0xC4)?;
    let upper = a.upper_holds(2.0) && b.upper_holds(2.0);
    let positive = a.constant.ci(2.0).0 > 0.0 && b.constant.ci(2.0).0 > 0.0;
    let z = a.constant.z_distance(&b.constant);
    let rows = [&a, &b].map(|r| {
        let mut v = r.scales.iter().map(|s| cell(*s)).collect::<Vec<_>>();
        for e in [&r.inner, &r.outer, &r.whole, &r.constant] {
            v.push(cell(e.mean));
            v.push(cell(e.stderr));
        }
        v.push(cell(r.upper_z));
        v
    });
    Ok(Verdict {
        passed: upper && positive && z < 3.0,
        summary: format!(
            "c = {:.4} +- {:.4} and {:.4} +- {:.4} ({z:.2} sigma apart); upper-bound z {:.2}, {:.2}",
            a.constant.mean, a.constant.stderr, b.constant.mean, b.constant.stderr, a.upper_z, b.upper_z
        ),
        tables: vec![(
            "quasi_mult".into(),
            table(
                &[
                    "r1", "r2", "r3", "a12", "a12_se", "a23", "a23_se", "a13", "a13_se", "c", "c_se", "upper_z",
                ],
                rows,
            ),
        )],
    })
}

fn separation(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(4_000) as usize;
    let r = 8.0;
    let mut rows = Vec::new();
    let mut ests = Vec::new();
    for k in [4.0, 8.0, 16.0] {
        let s = separation_statistic(r, k * r, n, cfg.seed ^ 0xD5 ^ k as u64, 1 << 32)?;
        let mut row = vec![cell(r), cell(k * r), s.attempts.to_string()];
        row.extend(est_cells(&s.estimate));
        row.push(cell(s.best_four.mean));
        row.push(cell(s.best_four.stderr));
        rows.push(row);
        ests.push(s.estimate);
    }
    let excl0 = ests.iter().all(|e| e.ci(2.0).0 > 0.0);
    let mut worst = 0.0f64;
    for i in 0..ests.len() {
        for j in i + 1..ests.len() {
            worst = worst.max(ests[i].z_distance(&ests[j]));
        }
    }
    Ok(Verdict {
        passed: excl0 && worst < 3.0,
        summary: format!(
            "P(Q > 1/4) = {} ; largest gap {worst:.2} sigma",
            ests.iter()
                .map(|e| format!("{:.3}+-{:.3}", e.mean, e.stderr))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        tables: vec![(
            "separation".into(),
            table(
                &[
                    "r",
                    "R",
                    "attempts",
                    "n",
                    "p",
                    "stderr",
                    "p_best_four",
                    "stderr_best_four",
                ],
                rows,
            ),
        )],
    })
}

fn coupling_decay(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(4_000) as usize;
    let (r, bins) = (8.0, 12);
    let near = coupling_tv_experiment(
        r,
        4.0 * r,
        OuterGeometry::Centered,
        OuterGeometry::Offset,
        bins,
        n,
        cfg.seed ^ 0xE6,
        1 << 32,
    )?;
    let far = coupling_tv_experiment(
        r,
        16.0 * r,
        OuterGeometry::Centered,
        OuterGeometry::Offset,
        bins,
        n,
        cfg.seed ^ 0xE7,
        1 << 32,
    )?;
    let switch = color_switch_experiment(r, 4.0 * r, bins, n, cfg.seed ^ 0xE8, 1 << 32)?;
    let gap = near.tv.excess() - far.tv.excess();
    let gap_se = near.tv.excess_stderr().hypot(far.tv.excess_stderr());
    let decays = gap > 2.0 * gap_se;
    let matches = switch.tv.excess().abs() <= 2.0 * switch.tv.excess_stderr();
    let t = table(
        &CouplingRow::CSV_HEADER,
        [&near, &far, &switch].map(|r| r.csv_row()),
    );
    Ok(Verdict {
        passed: decays && matches,
        summary: format!(
            "excess TV {:.4} +- {:.4} at R/r=4, {:.4} +- {:.4} at 16; color switch {:.4} +- {:.4}",
            near.tv.excess(),
            near.tv.excess_stderr(),
            far.tv.excess(),
            far.tv.excess_stderr(),
            switch.tv.excess(),
            switch.tv.excess_stderr()
        ),
        tables: vec![("coupling".into(), t)],
    })
}

fn xy_l2(cfg: &SuiteConfig) -> Result<Verdict> {
    let setup = XySetup::default();
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for (inv, n) in [(8u32, 4_000u64), (16, 2_000), (32, 1_000)] {
        let (row, beta) = xy_l2_experiment(
            &setup,
            1.0 / inv as f64,
            cfg.profile.n(n),
            cfg.profile.n(400) as usize,
            cfg.seed ^ 0xF0 ^ inv as u64,
        )?;
        ratios.push(row.ratio);
        rows.push(vec![
            cell(row.eps),
            cell(row.mesh),
            row.n.to_string(),
            cell(row.beta),
            cell(beta.beta.stderr),
            cell(beta.beta_crossed.mean),
            cell(beta.acceptance_rate()),
            cell(row.mean_x),
            cell(row.mean_y),
            cell(row.ratio.mean),
            cell(row.ratio.stderr),
        ]);
    }
    let decreasing = ratios.windows(2).all(|w| w[1].mean < w[0].mean);
    Ok(Verdict {
        passed: decreasing,
        summary: format!(
            "E[(X - bY)^2]/E[X]^2 = {}",
            ratios
                .iter()
                .map(|e| format!("{:.3}+-{:.3}", e.mean, e.stderr))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        tables: vec![(
            "xy".into(),
            table(
                &[
                    "eps",
                    "mesh",
                    "n",
                    "beta",
                    "beta_stderr",
                    "beta_crossed",
                    "beta_acceptance",
                    "mean_x",
                    "mean_y",
                    "ratio",
                    "stderr",
                ],
                rows,
            ),
        )],
    })
}

fn two_point(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(20_000);
    let iso = two_point_isotropy(
        64.0,
        &[0.0, std::f64::consts::FRAC_PI_6],
        1.0,
        n,
        cfg.seed ^ 0x71,
    )?;
    let z = iso[0].estimate.z_distance(&iso[1].estimate);
    let sc = two_point_scaling(&[32.0, 64.0, 128.0], 1.0, n, cfg.seed ^ 0x72)?;
    let vals: Vec<f64> = sc.iter().map(|s| s.normalized.mean).collect();
    let (lo, hi) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(*v), b.max(*v))
        });
    let spread = hi / lo - 1.0;
    let scaling = table(
        &[
            "d",
            "two_point",
            "two_point_se",
            "one_arm",
            "one_arm_se",
            "normalized",
            "normalized_se",
        ],
        sc.iter().map(|s| {
            vec![
                cell(s.d),
                cell(s.two_point.mean),
                cell(s.two_point.stderr),
                cell(s.one_arm.mean),
                cell(s.one_arm.stderr),
                cell(s.normalized.mean),
                cell(s.normalized.stderr),
            ]
        }),
    );
    Ok(Verdict {
        passed: z < 3.0 && spread < 0.20,
        summary: format!(
            "P at 0 and 30 degrees {:.4}, {:.4} ({z:.2} sigma); normalized {:?}, spread {:.1}%",
            iso[0].estimate.mean,
            iso[1].estimate.mean,
            vals.iter()
                .map(|v| (v * 1e3).round() / 1e3)
                .collect::<Vec<_>>(),
            100.0 * spread
        ),
        tables: vec![
            (
                "two_point".into(),
                table(&TwoPointRow::CSV_HEADER, iso.iter().map(|r| r.csv_row())),
            ),
            ("two_point_scaling".into(), scaling),
        ],
    })
}

fn scaling_covariance(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(4_000);
    let target = 2f64.powf(0.75);
    let row = scaling_covariance_experiment(
        &Square::axis(Point::default(), 128.0),
        &Square::axis(Point::default(), 32.0),
        2.0,
        n,
        cfg.seed ^ 0x12,
    )?;
    let off = (row.ratio.mean - target).abs() / target;
    let mut r = vec![cell(row.lambda)];
    for e in [&row.base, &row.scaled, &row.ratio] {
        r.push(cell(e.mean));
        r.push(cell(e.stderr));
    }
    Ok(Verdict {
        passed: off <= 0.15,
        summary: format!(
            "ratio {:.4} +- {:.4} vs {target:.4} ({:.1}% off)",
            row.ratio.mean,
            row.ratio.stderr,
            100.0 * off
        ),
        tables: vec![(
            "scaling_covariance".into(),
            table(
                &[
                    "lambda",
                    "base",
                    "base_se",
                    "scaled",
                    "scaled_se",
                    "ratio",
                    "ratio_se",
                ],
                [r],
            ),
        )],
    })
}

/// Filtering check on one sample: atoms of the fine square tiling contain the
/// `rho`-important sites, which contain the atoms of the coarse tiling.
pub fn dominations_hold(
    c: &RandomField,
    domain: &SiteSet,
    fine: &EnhancedTiling,
    coarse: &EnhancedTiling,
    rho: f64,
) -> Result<(bool, bool)> {
    let m_fine = tiling_measure(c, fine, domain, 1.0)?;
    let m_rho = rho_measure(c, domain, rho, 1.0);
    let m_coarse = tiling_measure(c, coarse, domain, 1.0)?;
    Ok((m_fine.dominates(&m_rho), m_rho.dominates(&m_coarse)))
}

fn filtering(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(1_000);
    let domain = site_set(&Square::axis(Point::default(), 16.0));
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut all = true;
    for rho in [4.0, 8.0] {
        let fine = square_tiling(rho, &domain)?;
        let coarse = square_tiling(2.0 * rho, &domain)?;
        let balls = EnhancedTiling::site_balls(&domain, rho)?;
        let ordered = refines(&fine, &balls, &domain)? && refines(&balls, &coarse, &domain)?;
        let [first, second] = par_sums(0..n, |i| {
            let c = RandomField::new(cfg.seed ^ 0x13, i);
            let (a, b) =
                dominations_hold(&c, &domain, &fine, &coarse, rho).expect("tilings validated");
            [a as i64, b as i64]
        });
        all &= ordered && first as u64 == n && second as u64 == n;
        notes.push(format!(
            "rho={rho}: {first}/{n} and {second}/{n}, ordered {ordered}"
        ));
        rows.push(vec![
            cell(rho),
            n.to_string(),
            ordered.to_string(),
            first.to_string(),
            second.to_string(),
        ]);
    }
    Ok(Verdict {
        passed: all,
        summary: notes.join("; "),
        tables: vec![(
            "filtering".into(),
            table(
                &["rho", "n", "ordered", "fine_over_rho", "rho_over_coarse"],
                rows,
            ),
        )],
    })
}

fn boundary_decay(cfg: &SuiteConfig) -> Result<Verdict> {
    let n = cfg.profile.n(400);
    let radius = 256.0;
    let q = midpoint_quad(radius)?;
    let sq = Square::axis(Point::default(), radius);
    let deltas: Vec<f64> = [64.0, 32.0, 16.0, 8.0].iter().map(|k| radius / k).collect();
    let d = interface_boundary_decay(&q, &sq, &deltas, n, cfg.seed ^ 0x14)?;
    let target = 13.0 / 12.0;
    let t = table(
        &["delta", "n", "mass", "stderr"],
        d.rows.iter().map(|r| {
            let mut v = vec![cell(r.delta)];
            v.extend(est_cells(&r.mass));
            v
        }),
    );
    Ok(Verdict {
        passed: d.fit.contains(target, 0.25),
        summary: format!(
            "exponent {:.4} +- {:.4} (target {target:.4} +- 0.25)",
            d.fit.slope, d.fit.slope_stderr
        ),
        tables: vec![("boundary_decay".into(), t)],
    })
}

/// CSV tables of a small cross-section of the experiments, keyed by name.
pub fn determinism_probe(seed: u64) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let e = estimate_alpha(
        &ArmPattern::four_arm(),
        1.0 / 32.0,
        1.0,
        1.0 / 32.0,
        3_000,
        seed,
    )?;
    out.push(("alpha".into(), arm_table(&[e]).to_csv()));
    let tab = ratio_limit_experiment(&ArmPattern::one_arm(), 0.5, &[16, 32], 2_000, seed)?;
    out.push((
        "ratio".into(),
        table(&RatioRow::CSV_HEADER, tab.rows.iter().map(|r| r.csv_row())).to_csv(),
    ));
    let (xy, _) = xy_l2_experiment(&XySetup::default(), 0.125, 60, 20, seed)?;
    out.push((
        "xy".into(),
        format!(
            "{},{},{}\n",
            cell(xy.beta),
            cell(xy.ratio.mean),
            cell(xy.ratio.stderr)
        ),
    ));
    let s = separation_statistic(4.0, 16.0, 200, seed, 1 << 20)?;
    out.push((
        "separation".into(),
        format!(
            "{},{},{}\n",
            s.attempts,
            cell(s.estimate.mean),
            cell(s.estimate.stderr)
        ),
    ));
    let c = coupling_tv_experiment(
        4.0,
        16.0,
        OuterGeometry::Centered,
        OuterGeometry::Offset,
        8,
        200,
        seed,
        1 << 20,
    )?;
    out.push((
        "coupling".into(),
        table(&CouplingRow::CSV_HEADER, [c.csv_row()]).to_csv(),
    ));
    let tp = two_point_isotropy(16.0, &[0.0, 0.5], 1.0, 2_000, seed)?;
    out.push((
        "two_point".into(),
        table(&TwoPointRow::CSV_HEADER, tp.iter().map(|r| r.csv_row())).to_csv(),
    ));
    Ok(out)
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn determinism(cfg: &SuiteConfig) -> Result<Verdict> {
    let runs: Vec<Vec<(String, String)>> = [1usize, 2, 5]
        .iter()
        .map(|&w| with_workers(w, || determinism_probe(cfg.seed))?)
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut same = true;
    for (k, (name, csv)) in runs[0].iter().enumerate() {
        let digests: Vec<String> = runs
            .iter()
            .map(|r| digest(r[k].1.as_bytes())[..16].to_string())
            .collect();
        let ok = runs.iter().all(|r| &r[k].1 == csv);
        same &= ok;
        let mut row = vec![name.clone()];
        row.extend(digests);
        row.push(ok.to_string());
        rows.push(row);
    }
    Ok(Verdict {
        passed: same,
        summary: format!(
            "{} tables identical across 1, 2 and 5 workers: {same}",
            rows.len()
        ),
        tables: vec![(
            "determinism".into(),
            table(
                &["table", "workers_1", "workers_2", "workers_5", "identical"],
                rows,
            ),
        )],
    })
}

/// Runs the listed checks in order; a check that errors counts as failed.
pub fn run_suite(ids: &[u8], cfg: &SuiteConfig, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    ids.iter()
        .map(|&id| {
            let o = run_criterion(id, cfg).unwrap_or_else(|e| Outcome {
                id,
                name: CRITERIA
                    .iter()
                    .find(|c| c.0 == id)
                    .map_or("unknown", |c| c.1)
                    .into(),
                passed: false,
                summary: format!("error: {e}"),
                seconds: 0.0,
                limit_seconds: 0.0,
                tables: Vec::new(),
            });
            report(&o);
            o
        })
        .collect()
}
