//! Shared helpers for tests that drive the `mamseg` binary.
#![allow(dead_code)]

pub mod oracles;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mamseg::features::{write_feature_csv, FeatureRow};
use mamseg::imgio::{write_pgm, PgmVariant};
use mamseg::{FeatureVector, Image};

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mamseg"));
    c.env_remove("MAMSEG_OUT_DIR");
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// Runs with `dir` as the working directory.
pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub fn write_image(path: &Path, image: &Image) {
    std::fs::write(path, write_pgm(image, PgmVariant::Raw)).unwrap();
}

/// Two well separated labelled clusters, `n` rows each.
pub fn toy_dataset(n: usize) -> String {
    let mut rows = Vec::new();
    for i in 0..2 * n {
        let malignant = i >= n;
        let base = if malignant { 30.0 } else { 10.0 };
        let j = (i % n) as f64;
        rows.push(FeatureRow {
            id: format!("case{i:03}"),
            features: FeatureVector::from_array([
                base + 0.37 * j,
                6.0 * base + 1.1 * j,
                base * base + 3.0 * j,
                12.6 + if malignant { 4.0 } else { 0.0 } + 0.05 * j,
                0.1 * j / n as f64,
                if malignant { 0.3 } else { 0.05 } + 0.001 * j,
                1.1 + if malignant { 0.2 } else { 0.0 } + 0.003 * j,
                100.0 + 7.0 * j,
            ]),
            label: Some(if malignant { "M" } else { "B" }.into()),
        });
    }
    write_feature_csv(&rows, true).unwrap()
}

/// Outcome CSV with the given confusion counts.
pub fn outcomes_csv(tp: usize, fp: usize, tn: usize, fn_: usize) -> String {
    let mut s = String::from("prediction,label\n");
    for (n, line) in [(tp, "1,1\n"), (fp, "1,0\n"), (tn, "0,0\n"), (fn_, "0,1\n")] {
        for _ in 0..n {
            s.push_str(line);
        }
    }
    s
}

/// Every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

/// Runs every subcommand once from inside `out`, writing there. Inputs are
/// read from `inputs`, which must already hold the files written by
/// [`prepare_inputs`]. Returns the concatenated stdout.
pub fn full_suite(inputs: &Path, out: &Path) -> String {
    let i = |name: &str| inputs.join(name).to_str().expect("utf-8 path").to_string();
    let (img, truth, data) = (i("phantom.pgm"), i("phantom.truth.pgm"), i("data.csv"));
    let (outcomes, spec) = (i("outcomes.csv"), i("phantom.json"));
    let runs: Vec<Vec<&str>> = vec![
        vec!["phantom", "--noise", "5", "--rng-seed", "11", "--out-dir", "."],
        vec!["segment", &img, "--seed", "128,128", "--out-dir", ".", "--svg"],
        vec!["segment", &img, "--seed", "128,128", "--method", "rg", "--out-dir", "."],
        vec!["segment", &img, "--seed", "128,128", "--method", "ac", "--out-dir", "."],
        vec!["features", &img, &truth, "--label", "B", "--out", "features.csv"],
        vec!["train", &data, "--algorithm", "kmeans", "--rng-seed", "5", "--out", "kmeans.json"],
        vec!["train", &data, "--algorithm", "fcm", "--rng-seed", "5", "--out", "fcm.json"],
        vec!["train", &data, "--algorithm", "svm", "--rng-seed", "5", "--out", "svm.json"],
        vec!["train", &data, "--algorithm", "pam", "--out", "pam.json"],
        vec!["train", &data, "--algorithm", "tree", "--out", "tree.json"],
        vec!["train", &data, "--algorithm", "naive_bayes", "--out", "nb.json"],
        vec!["train", &data, "--algorithm", "knn", "--out", "knn.json"],
        vec!["evaluate", "--model", "svm.json", "--dataset", &data, "--out", "svm.metrics.json"],
        vec!["evaluate", "--model", "kmeans.json", "--dataset", &data, "--out", "kmeans.metrics.json"],
        vec!["evaluate", "--outcomes", &outcomes, "--out", "table.metrics.json"],
        vec!["compare", "--phantom", &spec, "--out-dir", ".", "--svg"],
    ];
    let mut log = String::new();
    for args in runs {
        let r = run_in(out, &args);
        assert_eq!(code(&r), 0, "{:?}: {}", args, stderr(&r));
        log.push_str(&stdout(&r));
    }
    log
}

/// Writes the phantom, its truth mask, a dataset and an outcome file into
/// `dir`.
pub fn prepare_inputs(dir: &Path) {
    let r = run(&["phantom", "--noise", "5", "--rng-seed", "11", "--out-dir", s(dir)]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    std::fs::write(dir.join("data.csv"), toy_dataset(12)).unwrap();
    std::fs::write(dir.join("outcomes.csv"), outcomes_csv(39, 27, 511, 21)).unwrap();
}
