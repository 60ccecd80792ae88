//! Golden CLI runs shared by the CLI and acceptance suites.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

/// `(golden file, arguments)`.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("splitting_trivial.csv", &["splitting", "--family", "trivial-n", "--nmax", "5"]),
    (
        "splitting_gl2.json",
        &["splitting", "--family", "gl", "--q", "2", "--nmax", "3", "--ell", "2", "--format", "json"],
    ),
    ("partition.csv", &["partition", "--nmax", "5"]),
    ("koszul_symmetric.csv", &["koszul", "--family", "symmetric", "--nmax", "4"]),
    ("free_basis_rational.csv", &["free-basis", "--ell", "0", "--k", "3", "--gens", "sigma:1,0", "--window", "6,6"]),
    (
        "free_basis_f2.json",
        &["free-basis", "--ell", "2", "--k", "2", "--gens", "sigma:1,0;x:2,2", "--window", "6,6", "--format", "json"],
    ),
    (
        "quotient_f3.json",
        &[
            "quotient",
            "--ell",
            "3",
            "--k",
            "inf",
            "--gens",
            "sigma:1,0",
            "--kill",
            "sigma",
            "--window",
            "9,12",
            "--format",
            "json",
        ],
    ),
    ("tor_free_w1_f2.csv", &["tor", "--ell", "2", "--k", "2", "--gens", "sigma:1,0", "--window", "4,4"]),
    ("e1_unit.csv", &["e1-homology", "--algebra", "unit", "--ell", "0", "--window", "6,6"]),
    (
        "stability_sweep.csv",
        &["stability", "--sets", "6", "--seed", "3", "--ell", "2", "--k", "2", "--window", "8,8", "--format", "csv"],
    ),
    ("two_thirds_f3.json", &["stability", "--mode", "two-thirds", "--ell", "3", "--window", "8,8"]),
    ("glnfq.json", &["glnfq", "--ell", "3", "--q", "4", "--window", "6,12", "--prime", "3"]),
    ("transfer_up.json", &["connectivity", "--rho", "affine:1,0", "--l", "1", "--k", "2", "--nmax", "6"]),
    (
        "convolve.csv",
        &["connectivity", "--mode", "convolve", "--rho", "affine:1,-1", "--rho2", "affine:1,-1", "--nmax", "6"],
    ),
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ekcells"))
}

/// Runs one case into `dir`, with an optional thread count; returns the exit code and the output bytes.
pub fn run_case(args: &[&str], dir: &Path, tag: &str, threads: Option<usize>) -> (i32, Vec<u8>) {
    let out = dir.join(tag);
    let mut cmd = bin();
    cmd.args(args).arg("--output").arg(&out);
    if let Some(t) = threads {
        cmd.arg("--threads").arg(t.to_string());
    }
    let status = cmd.output().expect("binary runs").status;
    (status.code().unwrap_or(-1), std::fs::read(&out).unwrap_or_default())
}

/// Names of golden cases whose output differs from the golden file, across two runs, or across thread counts.
pub fn determinism_failures() -> Vec<String> {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut bad = Vec::new();
    for (name, args) in GOLDEN_CASES {
        let golden = std::fs::read(golden_dir().join(name)).expect("golden file");
        let runs = [
            run_case(args, dir.path(), &format!("{name}.a"), None),
            run_case(args, dir.path(), &format!("{name}.b"), None),
            run_case(args, dir.path(), &format!("{name}.t1"), Some(1)),
            run_case(args, dir.path(), &format!("{name}.t4"), Some(4)),
        ];
        if runs.iter().any(|(code, bytes)| *code != 0 || *bytes != golden) {
            bad.push(name.to_string());
        }
    }
    bad
}
