//! Command line front end: one subcommand per experiment, or a TOML spec
//! listing several. Every run writes CSV tables, a JSON summary, plot
//! scripts and a manifest into its output directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::acceptance::{run_suite, Profile, SuiteConfig, CRITERIA};
use crate::arms::{arm_annulus, arm_sample, is_quad_pivotal, ArmEstimate, ArmPattern};
use crate::config::{Configuration, RandomField};
use crate::coupling::{
    color_switch_experiment, coupling_tv_experiment, separation_statistic, CouplingRow,
    OuterGeometry,
};
use crate::error::{Error, Result};
use crate::io::{cell, loglog_script, read_json, write_json, Manifest, Table};
use crate::lattice::{Annulus, Point, Quad, SiteSet, Square};
use crate::measures::{
    a_important_measure, cluster_measure, interface_measure, pivotal_measure, xy_l2_experiment,
    XySetup,
};
use crate::stats::{
    fit_exponent, ratio_limit_experiment, two_point_isotropy, two_point_scaling, Estimate,
    RatioRow, Tally, TwoPointRow,
};

#[derive(Parser, Debug)]
#[command(
    name = "hexperc",
    version,
    about = "Critical site percolation experiments on the triangular lattice"
)]
pub struct Cli {
    /// Master seed; sample i of an experiment uses the stream (seed, i).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// TOML file listing experiments; with a subcommand, only entries of
    /// that kind run.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw one configuration on a box and dump it.
    Sample(SampleArgs),
    /// Arm probability, optionally over a mesh ladder with an exponent fit.
    Alpha(AlphaArgs),
    /// Number of pivotal sites for the left-right crossing of a square.
    Pivotal(PivotalArgs),
    /// Mass of a counting measure on a box.
    Measure(MeasureArgs),
    /// Second moment of X minus beta Y relative to the squared mean of X.
    Xy(XyArgs),
    /// Arm probability ratio against the mesh.
    Ratio(RatioArgs),
    /// Two-point connection probability at several angles.
    Twopoint(TwoPointArgs),
    /// Separation of interface ends under the arm conditioning.
    Separation(SeparationArgs),
    /// Total variation between inner fingerprints under two outer geometries.
    Coupling(CouplingArgs),
    /// Acceptance suite.
    Suite(SuiteArgs),
    /// Consolidate artifact directories.
    Report(ReportArgs),
}

macro_rules! parse_defaults {
    ($($t:ty),*) => {$(
        impl Default for $t {
            fn default() -> Self {
                <$t as Parser>::parse_from(["hexperc"])
            }
        }
    )*};
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleArgs {
    /// Box radius in lattice units.
    #[arg(long, default_value_t = 16.0)]
    pub radius: f64,
    /// Sample index.
    #[arg(long, default_value_t = 0)]
    pub index: u64,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlphaArgs {
    /// Cyclic color word such as O, OC or OCOC.
    #[arg(long, default_value = "OCOC")]
    pub pattern: String,
    #[arg(long, default_value_t = 0.0625)]
    pub r: f64,
    #[arg(long = "big-r", default_value_t = 1.0)]
    pub big_r: f64,
    #[arg(long, default_value_t = 0.0625)]
    pub mesh: f64,
    /// Inverse meshes; when given, `mesh` is ignored and `r` is set to the mesh.
    #[arg(long, value_delimiter = ',')]
    pub ladder: Vec<u32>,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    /// First sample index, so that runs over disjoint ranges can be merged.
    #[arg(long, default_value_t = 0)]
    pub start: u64,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PivotalArgs {
    /// Square radius in lattice units.
    #[arg(long, default_value_t = 16.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureChoice {
    Pivotal,
    Important,
    Cluster,
    Interface,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasureArgs {
    #[arg(long, value_enum, default_value = "pivotal")]
    pub kind: MeasureChoice,
    /// Box radius in lattice units; annulus-based measures use an inner
    /// radius of a quarter of it.
    #[arg(long, default_value_t = 32.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 500)]
    pub n: u64,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct XyArgs {
    /// Inverse grid spacings.
    #[arg(long, value_delimiter = ',', default_value = "8,16")]
    pub eps: Vec<u32>,
    #[arg(long, default_value_t = 200)]
    pub n: u64,
    /// Conditioned samples used to estimate beta.
    #[arg(long = "beta-n", default_value_t = 50)]
    pub beta_n: usize,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatioArgs {
    #[arg(long, default_value = "OCOC")]
    pub pattern: String,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    pub ladder: Vec<u32>,
    #[arg(long, default_value_t = 10000)]
    pub n: u64,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoPointArgs {
    /// Separation in lattice units.
    #[arg(long, default_value_t = 32.0)]
    pub d: f64,
    /// Angles in degrees.
    #[arg(long, value_delimiter = ',', default_value = "0,30")]
    pub angles: Vec<f64>,
    /// Extra separations for the normalized scaling table.
    #[arg(long, value_delimiter = ',')]
    pub scaling: Vec<f64>,
    #[arg(long, default_value_t = 2000)]
    pub n: u64,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeparationArgs {
    #[arg(long, default_value_t = 8.0)]
    pub r: f64,
    #[arg(long = "big-r", default_value_t = 32.0)]
    pub big_r: f64,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    /// Attempt budget for the conditioned sampler.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingArgs {
    #[arg(long, default_value_t = 8.0)]
    pub r: f64,
    #[arg(long = "big-r", default_value_t = 32.0)]
    pub big_r: f64,
    #[arg(long, default_value = "centered")]
    pub a: String,
    #[arg(long, default_value = "offset")]
    pub b: String,
    /// Angular bins of the fingerprint.
    #[arg(long, default_value_t = 12)]
    pub bins: u32,
    /// Compare against the color-reversed sample instead of geometry `b`.
    #[arg(long)]
    pub switch: bool,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileChoice {
    Full,
    Quick,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteArgs {
    /// Criteria to run (default: all).
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    #[arg(long, value_enum, default_value = "full")]
    pub profile: ProfileChoice,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    /// Artifact directories.
    pub dirs: Vec<PathBuf>,
}

parse_defaults!(
    SampleArgs,
    AlphaArgs,
    PivotalArgs,
    MeasureArgs,
    XyArgs,
    RatioArgs,
    TwoPointArgs,
    SeparationArgs,
    CouplingArgs,
    SuiteArgs
);

/// One entry of a spec file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    Sample(SampleArgs),
    Alpha(AlphaArgs),
    Pivotal(PivotalArgs),
    Measure(MeasureArgs),
    Xy(XyArgs),
    Ratio(RatioArgs),
    Twopoint(TwoPointArgs),
    Separation(SeparationArgs),
    Coupling(CouplingArgs),
    Suite(SuiteArgs),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Sample(_) => "sample",
            Experiment::Alpha(_) => "alpha",
            Experiment::Pivotal(_) => "pivotal",
            Experiment::Measure(_) => "measure",
            Experiment::Xy(_) => "xy",
            Experiment::Ratio(_) => "ratio",
            Experiment::Twopoint(_) => "twopoint",
            Experiment::Separation(_) => "separation",
            Experiment::Coupling(_) => "coupling",
            Experiment::Suite(_) => "suite",
        }
    }
}

/// A declarative list of experiments.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spec {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

impl Spec {
    pub fn parse(text: &str) -> Result<Spec> {
        let spec: Spec = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if spec.experiments.is_empty() {
            return Err(Error::Parse("spec lists no experiments".into()));
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Spec> {
        Spec::parse(&std::fs::read_to_string(path)?)
    }
}

/// What a finished experiment reports back.
#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    /// False when a suite criterion failed.
    pub accepted: bool,
}

/// Runs one experiment into `dir`; the manifest is written even when the
/// experiment fails, flagged as partial.
pub fn run_experiment(
    exp: &Experiment,
    seed: u64,
    workers: usize,
    dir: &Path,
) -> Result<RunSummary> {
    std::fs::create_dir_all(dir)?;
    let mut m = Manifest::new(exp.kind(), seed, workers, serde_json::to_value(exp)?);
    let res = dispatch(exp, seed, dir, &mut m);
    if let Err(e) = &res {
        m.partial = Some(e.to_string());
    }
    m.finish(dir)?;
    res
}

fn dispatch(exp: &Experiment, seed: u64, dir: &Path, m: &mut Manifest) -> Result<RunSummary> {
    let ok = RunSummary { accepted: true };
    match exp {
        Experiment::Sample(a) => {
            let region = Arc::new(sites_of(a.radius)?);
            let c = Configuration::sample(region, seed, a.index)?;
            let mut buf = Vec::new();
            c.dump(&mut buf)?;
            m.emit(dir, "configuration.txt", &String::from_utf8_lossy(&buf))?;
            summary(
                m,
                dir,
                &serde_json::json!({"sites": c.region().len(), "open": c.open_count()}),
            )?;
        }
        Experiment::Alpha(a) => run_alpha(a, seed, dir, m)?,
        Experiment::Pivotal(a) => {
            let q = Quad::from_square(&Square::axis(Point::default(), a.radius))?;
            let t = Tally::over(0, a.n, |i| {
                let c = RandomField::new(seed, i);
                q.sites()
                    .iter()
                    .filter(|&x| is_quad_pivotal(&c, x, &q).unwrap_or(false))
                    .count() as i64
            });
            let e = t.estimate();
            emit_estimates(m, dir, "pivotal", &["radius"], &[(vec![cell(a.radius)], e)])?;
            summary(m, dir, &e)?;
        }
        Experiment::Measure(a) => {
            let e = measure_mass(a, seed)?;
            emit_estimates(
                m,
                dir,
                "measure",
                &["kind", "radius"],
                &[(
                    vec![format!("{:?}", a.kind).to_lowercase(), cell(a.radius)],
                    e,
                )],
            )?;
            summary(m, dir, &e)?;
        }
        Experiment::Xy(a) => {
            let mut t = Table::new(&[
                "eps",
                "mesh",
                "n",
                "beta",
                "mean_x",
                "mean_y",
                "ratio",
                "stderr",
                "beta_attempts",
            ]);
            let mut rows = Vec::new();
            for &inv in &a.eps {
                if inv == 0 {
                    return Err(Error::InvalidParameter(
                        "eps inverse must be positive".into(),
                    ));
                }
                let (row, beta) = xy_l2_experiment(
                    &XySetup::default(),
                    1.0 / inv as f64,
                    a.n,
                    a.beta_n,
                    seed ^ inv as u64,
                )?;
                t.push(vec![
                    cell(row.eps),
                    cell(row.mesh),
                    row.n.to_string(),
                    cell(row.beta),
                    cell(row.mean_x),
                    cell(row.mean_y),
                    cell(row.ratio.mean),
                    cell(row.ratio.stderr),
                    beta.attempts.to_string(),
                ]);
                rows.push(row);
            }
            m.emit(dir, "xy.csv", &t.to_csv())?;
            summary(m, dir, &rows)?;
        }
        Experiment::Ratio(a) => {
            let p: ArmPattern = a.pattern.parse()?;
            let tab = ratio_limit_experiment(&p, a.r, &a.ladder, a.n, seed)?;
            let mut t = Table::new(&RatioRow::CSV_HEADER);
            for r in &tab.rows {
                t.push(r.csv_row());
            }
            m.emit(dir, "ratio.csv", &t.to_csv())?;
            summary(
                m,
                dir,
                &serde_json::json!({"successive_differences": tab.successive}),
            )?;
        }
        Experiment::Twopoint(a) => {
            let angles: Vec<f64> = a.angles.iter().map(|d| d.to_radians()).collect();
            let rows = two_point_isotropy(a.d, &angles, 1.0, a.n, seed)?;
            let mut t = Table::new(&TwoPointRow::CSV_HEADER);
            for r in &rows {
                t.push(r.csv_row());
            }
            m.emit(dir, "twopoint.csv", &t.to_csv())?;
            if !a.scaling.is_empty() {
                let sc = two_point_scaling(&a.scaling, 1.0, a.n, seed ^ 0x5CA1)?;
                let mut t = Table::new(&[
                    "d",
                    "two_point",
                    "two_point_se",
                    "normalized",
                    "normalized_se",
                ]);
                for s in &sc {
                    t.push(vec![
                        cell(s.d),
                        cell(s.two_point.mean),
                        cell(s.two_point.stderr),
                        cell(s.normalized.mean),
                        cell(s.normalized.stderr),
                    ]);
                }
                m.emit(dir, "twopoint_scaling.csv", &t.to_csv())?;
                m.emit(
                    dir,
                    "twopoint_scaling.gp",
                    &loglog_script(
                        "twopoint_scaling.csv",
                        1,
                        4,
                        Some(5),
                        "normalized two-point",
                    ),
                )?;
            }
            summary(
                m,
                dir,
                &serde_json::json!({"angles_degrees": a.angles, "estimates": rows.iter().map(|r| r.estimate).collect::<Vec<_>>()}),
            )?;
        }
        Experiment::Separation(a) => {
            let s = separation_statistic(a.r, a.big_r, a.n, seed, a.budget)?;
            let mut t = Table::new(&[
                "r",
                "R",
                "n",
                "attempts",
                "p",
                "stderr",
                "p_best_four",
                "stderr_best_four",
            ]);
            t.push(vec![
                cell(a.r),
                cell(a.big_r),
                s.estimate.n.to_string(),
                s.attempts.to_string(),
                cell(s.estimate.mean),
                cell(s.estimate.stderr),
                cell(s.best_four.mean),
                cell(s.best_four.stderr),
            ]);
            m.emit(dir, "separation.csv", &t.to_csv())?;
            summary(
                m,
                dir,
                &serde_json::json!({"estimate": s.estimate, "best_four": s.best_four, "attempts": s.attempts}),
            )?;
        }
        Experiment::Coupling(a) => {
            let row = if a.switch {
                color_switch_experiment(a.r, a.big_r, a.bins, a.n, seed, a.budget)?
            } else {
                let (ga, gb): (OuterGeometry, OuterGeometry) = (a.a.parse()?, a.b.parse()?);
                coupling_tv_experiment(a.r, a.big_r, ga, gb, a.bins, a.n, seed, a.budget)?
            };
            let mut t = Table::new(&CouplingRow::CSV_HEADER);
            t.push(row.csv_row());
            m.emit(dir, "coupling.csv", &t.to_csv())?;
            summary(
                m,
                dir,
                &serde_json::json!({"excess_tv": row.tv.excess(), "excess_tv_stderr": row.tv.excess_stderr()}),
            )?;
        }
        Experiment::Suite(a) => return run_suite_into(a, seed, dir, m),
    }
    Ok(ok)
}

fn sites_of(radius: f64) -> Result<SiteSet> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    Ok(crate::measures::site_set(&Square::axis(
        Point::default(),
        radius,
    )))
}

fn summary<T: Serialize + ?Sized>(m: &mut Manifest, dir: &Path, value: &T) -> Result<()> {
    m.emit(dir, "summary.json", &serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn emit_estimates(
    m: &mut Manifest,
    dir: &Path,
    name: &str,
    keys: &[&str],
    rows: &[(Vec<String>, Estimate)],
) -> Result<()> {
    let mut header = keys.to_vec();
    header.extend(["n", "mean", "stderr"]);
    let mut t = Table::new(&header);
    for (k, e) in rows {
        let mut row = k.clone();
        row.extend([e.n.to_string(), cell(e.mean), cell(e.stderr)]);
        t.push(row);
    }
    m.emit(dir, &format!("{name}.csv"), &t.to_csv())?;
    Ok(())
}

fn measure_mass(a: &MeasureArgs, seed: u64) -> Result<Estimate> {
    let sq = Square::axis(Point::default(), a.radius);
    let ann = Annulus::new(Point::default(), a.radius / 4.0, a.radius)?;
    let q = Quad::from_square(&sq)?;
    // validate once so that per-sample errors cannot occur
    match a.kind {
        MeasureChoice::Cluster => drop(cluster_measure(&RandomField::new(seed, 0), &ann, 1.0)?),
        MeasureChoice::Interface => drop(interface_measure(&RandomField::new(seed, 0), &q, 1.0)?),
        _ => {}
    }
    let t = Tally::over(0, a.n, |i| {
        let c = RandomField::new(seed, i);
        (match a.kind {
            MeasureChoice::Pivotal => pivotal_measure(&c, &q, 1.0).count(),
            MeasureChoice::Important => a_important_measure(&c, &ann, 1.0).count(),
            MeasureChoice::Cluster => cluster_measure(&c, &ann, 1.0).map_or(0, |p| p.count()),
            MeasureChoice::Interface => interface_measure(&c, &q, 1.0).map_or(0, |p| p.count()),
        }) as i64
    });
    Ok(t.estimate())
}

fn run_alpha(a: &AlphaArgs, seed: u64, dir: &Path, m: &mut Manifest) -> Result<()> {
    let p: ArmPattern = a.pattern.parse()?;
    if a.n == 0 {
        return Err(Error::NoSamples);
    }
    let scales: Vec<(f64, f64)> = if a.ladder.is_empty() {
        vec![(a.r, a.mesh)]
    } else {
        a.ladder
            .iter()
            .map(|&k| (1.0 / k as f64, 1.0 / k as f64))
            .collect()
    };
    let mut rows = Vec::new();
    for (r, mesh) in scales {
        let ann = arm_annulus(r, a.big_r, mesh)?;
        let t = Tally::over(a.start, a.n, |i| arm_sample(&ann, &p, seed, i) as i64);
        let e = t.estimate();
        rows.push(ArmEstimate {
            pattern: p.clone(),
            r,
            big_r: a.big_r,
            mesh,
            value: e.mean,
            stderr: e.stderr,
            n: a.n,
            seed,
            hits: t.sum as u64,
        });
    }
    let mut t = Table::new(&ArmEstimate::CSV_HEADER);
    for r in &rows {
        t.push(r.csv_row());
    }
    m.emit(dir, "alpha.csv", &t.to_csv())?;
    let mut out = serde_json::json!({"start": a.start, "estimates": rows});
    if rows.len() >= 2 {
        let pts: Vec<(f64, Estimate)> = rows.iter().map(|r| (1.0 / r.mesh, r.estimate())).collect();
        if let Ok(fit) = fit_exponent(&pts) {
            out["fit"] = serde_json::to_value(fit)?;
        }
        m.emit(
            dir,
            "alpha.gp",
            &loglog_script("alpha.csv", 4, 6, Some(7), &format!("arm probability {p}")),
        )?;
    }
    summary(m, dir, &out)
}

fn run_suite_into(a: &SuiteArgs, seed: u64, dir: &Path, m: &mut Manifest) -> Result<RunSummary> {
    let ids: Vec<u8> = if a.criteria.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        a.criteria.clone()
    };
    if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
        return Err(Error::InvalidParameter(format!("no criterion {bad}")));
    }
    let profile = match a.profile {
        ProfileChoice::Full => Profile::Full,
        ProfileChoice::Quick => Profile::Quick,
    };
    let cfg = SuiteConfig { seed, profile };
    let outcomes = run_suite(&ids, &cfg, |o| println!("{}", o.line()));
    for o in &outcomes {
        for (name, t) in &o.tables {
            m.emit(dir, &format!("c{:02}_{name}.csv", o.id), &t.to_csv())?;
        }
    }
    if let Some(o) = outcomes.iter().find(|o| o.id == 4) {
        if o.tables.iter().any(|(n, _)| n.starts_with("alpha_")) {
            let name = &o.tables[0].0;
            m.emit(
                dir,
                "c04_alpha.gp",
                &loglog_script(
                    &format!("c04_{name}.csv"),
                    4,
                    6,
                    Some(7),
                    "four-arm probability",
                ),
            )?;
        }
    }
    m.emit(
        dir,
        "outcomes.json",
        &serde_json::to_string_pretty(&outcomes)?,
    )?;
    Ok(RunSummary {
        accepted: outcomes.iter().all(|o| o.passed),
    })
}

/// Per-criterion status across artifact directories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportLine {
    pub id: u8,
    pub name: String,
    /// "pass", "fail" or "not run".
    pub status: String,
    pub summary: String,
}

/// Arm estimates of several runs merged by scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub criteria: Vec<ReportLine>,
    pub alpha: Vec<ArmEstimate>,
}

#[derive(Deserialize)]
struct AlphaSummary {
    estimates: Vec<ArmEstimate>,
}

#[derive(Deserialize)]
struct OutcomeRecord {
    id: u8,
    passed: bool,
    summary: String,
}

/// Consolidates artifact directories. Criteria take the conjunction of all
/// runs that include them; arm estimates at equal scale and pattern are
/// merged by adding counts, so runs over disjoint index ranges combine into
/// the estimate of one long run.
pub fn report(dirs: &[PathBuf]) -> Result<Report> {
    if dirs.is_empty() {
        return Err(Error::InvalidParameter(
            "report needs at least one directory".into(),
        ));
    }
    let mut seen: BTreeMap<u8, (bool, Vec<String>)> = BTreeMap::new();
    let mut alpha: BTreeMap<(String, String, String, String, u64), ArmEstimate> = BTreeMap::new();
    for d in dirs {
        let m: Manifest = read_json(&d.join("manifest.json"))?;
        match m.command.as_str() {
            "suite" => {
                let outs: Vec<OutcomeRecord> = read_json(&d.join("outcomes.json"))?;
                for o in outs {
                    let e = seen.entry(o.id).or_insert((true, Vec::new()));
                    e.0 &= o.passed;
                    e.1.push(o.summary);
                }
            }
            "alpha" => {
                let s: AlphaSummary = read_json(&d.join("summary.json"))?;
                for e in s.estimates {
                    let key = (
                        e.pattern.to_string(),
                        cell(e.r),
                        cell(e.big_r),
                        cell(e.mesh),
                        e.seed,
                    );
                    match alpha.get_mut(&key) {
                        Some(acc) => {
                            acc.hits += e.hits;
                            acc.n += e.n;
                        }
                        None => {
                            alpha.insert(key, e);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    let criteria = CRITERIA
        .iter()
        .map(|&(id, name, _)| match seen.get(&id) {
            Some((p, s)) => ReportLine {
                id,
                name: name.into(),
                status: if *p { "pass" } else { "fail" }.into(),
                summary: s.join(" | "),
            },
            None => ReportLine {
                id,
                name: name.into(),
                status: "not run".into(),
                summary: String::new(),
            },
        })
        .collect();
    let alpha = alpha
        .into_values()
        .map(|mut e| {
            let f = Estimate::frequency(e.hits, e.n);
            e.value = f.mean;
            e.stderr = f.stderr;
            e
        })
        .collect();
    Ok(Report { criteria, alpha })
}

fn emit_report(r: &Report, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut t = Table::new(&["id", "name", "status", "summary"]);
    for l in &r.criteria {
        t.push(vec![
            l.id.to_string(),
            l.name.clone(),
            l.status.clone(),
            l.summary.clone(),
        ]);
    }
    t.write(&dir.join("report.csv"))?;
    if !r.alpha.is_empty() {
        let mut t = Table::new(&ArmEstimate::CSV_HEADER);
        for e in &r.alpha {
            t.push(e.csv_row());
        }
        t.write(&dir.join("alpha_merged.csv"))?;
    }
    write_json(&dir.join("report.json"), r)
}

/// Entry point; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    if let Some(Command::Report(r)) = &cli.command {
        let rep = report(&r.dirs)?;
        for l in &rep.criteria {
            println!("{:<8} {:>2} {:<24} {}", l.status, l.id, l.name, l.summary);
        }
        emit_report(&rep, &cli.out)?;
        return Ok(0);
    }
    let (seed, workers, jobs) = match &cli.spec {
        Some(path) => {
            let spec = Spec::load(path)?;
            let want = cli.command.as_ref().map(|c| experiment_of(c).kind());
            let jobs: Vec<Experiment> = spec
                .experiments
                .into_iter()
                .filter(|e| want.is_none_or(|k| e.kind() == k))
                .collect();
            if jobs.is_empty() {
                return Err(Error::Parse(
                    "no experiment in the spec matches the subcommand".into(),
                ));
            }
            (
                spec.seed.unwrap_or(cli.seed),
                cli.workers.or(spec.workers),
                jobs,
            )
        }
        None => match &cli.command {
            Some(c) => (cli.seed, cli.workers, vec![experiment_of(c)]),
            None => {
                return Err(Error::InvalidParameter(
                    "give a subcommand or --spec".into(),
                ))
            }
        },
    };
    let workers = workers.unwrap_or_else(rayon::current_num_threads);
    let single = jobs.len() == 1;
    let run = || -> Result<bool> {
        let mut accepted = true;
        for (k, job) in jobs.iter().enumerate() {
            let dir = if single {
                cli.out.clone()
            } else {
                cli.out.join(format!("{k:02}_{}", job.kind()))
            };
            accepted &= run_experiment(job, seed, workers, &dir)?.accepted;
        }
        Ok(accepted)
    };
    let accepted = crate::acceptance::with_workers(workers, run)??;
    Ok(if accepted { 0 } else { 4 })
}

fn experiment_of(c: &Command) -> Experiment {
    match c {
        Command::Sample(a) => Experiment::Sample(a.clone()),
        Command::Alpha(a) => Experiment::Alpha(a.clone()),
        Command::Pivotal(a) => Experiment::Pivotal(a.clone()),
        Command::Measure(a) => Experiment::Measure(a.clone()),
        Command::Xy(a) => Experiment::Xy(a.clone()),
        Command::Ratio(a) => Experiment::Ratio(a.clone()),
        Command::Twopoint(a) => Experiment::Twopoint(a.clone()),
        Command::Separation(a) => Experiment::Separation(a.clone()),
        Command::Coupling(a) => Experiment::Coupling(a.clone()),
        Command::Suite(a) => Experiment::Suite(a.clone()),
        Command::Report(_) => unreachable!("handled before dispatch"),
    }
}
