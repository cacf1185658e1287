use std::path::{Path, PathBuf};

use clap::Parser;
use hexperc::cli::{main_with, report, Cli, Spec};
use hexperc::io::Manifest;

fn run(args: &[&str]) -> i32 {
    let mut full = vec!["hexperc"];
    full.extend_from_slice(args);
    main_with(Cli::parse_from(full))
}

fn manifest(dir: &Path) -> Manifest {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn alpha_run_writes_a_table_and_a_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("a");
    assert_eq!(
        run(&[
            "alpha",
            "--pattern",
            "OC",
            "--n",
            "300",
            "--seed",
            "3",
            "--out",
            s(&out)
        ]),
        0
    );
    let csv = std::fs::read_to_string(out.join("alpha.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2, "{csv}");
    let m = manifest(&out);
    assert_eq!((m.command.as_str(), m.seed), ("alpha", 3));
    assert!(m.partial.is_none());
    assert!(m.artifacts.iter().any(|a| a.path == "alpha.csv"));
    assert_eq!(m.parameters["pattern"], "OC");
}

#[test]
fn reruns_reproduce_artifacts_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let args = ["alpha", "--pattern", "O", "--ladder", "8,16", "--n", "400"];
    assert_eq!(
        run(&[&args[..], &["--workers", "1", "--out", s(&a)]].concat()),
        0
    );
    assert_eq!(
        run(&[&args[..], &["--workers", "3", "--out", s(&b)]].concat()),
        0
    );
    assert_eq!(manifest(&a).artifacts, manifest(&b).artifacts);
    assert!(a.join("alpha.gp").exists());
}

#[test]
fn spec_files_run_every_listed_experiment() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("runs.toml");
    std::fs::write(
        &spec,
        "seed = 9\n[[experiments]]\nkind = \"sample\"\nradius = 4.0\n\n[[experiments]]\nkind = \"alpha\"\npattern = \"O\"\nn = 100\n",
    )
    .unwrap();
    let out = tmp.path().join("o");
    assert_eq!(run(&["--spec", s(&spec), "--out", s(&out)]), 0);
    assert_eq!(manifest(&out.join("00_sample")).seed, 9);
    assert!(out.join("01_alpha/alpha.csv").exists());
    // a subcommand filters the spec
    let out2 = tmp.path().join("p");
    assert_eq!(run(&["--spec", s(&spec), "--out", s(&out2), "sample"]), 0);
    assert!(out2.join("manifest.json").exists());
    assert_eq!(run(&["--spec", s(&spec), "--out", s(&out2), "xy"]), 2);

    assert!(Spec::parse("seed = 1\n").is_err());
    assert!(Spec::parse("[[experiments]]\nkind = \"alpha\"\nwidth = 3\n").is_err());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("x");
    assert_eq!(run(&["alpha", "--pattern", "OX", "--out", s(&out)]), 2);
    assert_eq!(run(&["--out", s(&out)]), 2);
    // a tiny budget cannot produce the requested four-arm samples
    assert_eq!(
        run(&[
            "separation",
            "--r",
            "4",
            "--big-r",
            "32",
            "--n",
            "50",
            "--budget",
            "10",
            "--out",
            s(&out)
        ]),
        3
    );
    assert!(manifest(&out).partial.is_some());
}

#[test]
fn report_needs_input_and_passes_a_single_run_through() {
    assert!(report(&[]).is_err());
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("a");
    assert_eq!(
        run(&["alpha", "--pattern", "O", "--n", "200", "--out", s(&out)]),
        0
    );
    let rep = report(std::slice::from_ref(&out)).unwrap();
    assert_eq!(rep.alpha.len(), 1);
    assert_eq!(rep.alpha[0].n, 200);
    assert!(rep.criteria.iter().all(|l| l.status == "not run"));
    let dest = tmp.path().join("rep");
    assert_eq!(run(&["report", s(&out), "--out", s(&dest)]), 0);
    assert!(dest.join("report.csv").exists() && dest.join("alpha_merged.csv").exists());
}

#[test]
fn split_runs_merge_to_the_single_run() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs: Vec<PathBuf> = ["lo", "hi", "all"]
        .iter()
        .map(|d| tmp.path().join(d))
        .collect();
    let base = [
        "alpha",
        "--pattern",
        "OCOC",
        "--ladder",
        "8,16",
        "--seed",
        "5",
    ];
    for (dir, start, n) in [
        (&dirs[0], "0", "500"),
        (&dirs[1], "500", "500"),
        (&dirs[2], "0", "1000"),
    ] {
        assert_eq!(
            run(&[&base[..], &["--start", start, "--n", n, "--out", s(dir)]].concat()),
            0
        );
    }
    let merged = report(&dirs[..2]).unwrap();
    let single = report(&dirs[2..]).unwrap();
    assert_eq!(merged.alpha, single.alpha);
    assert_eq!(merged.alpha.len(), 2);
}
