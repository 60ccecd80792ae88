mod common;

use common::{bin, determinism_failures, golden_dir, run_case};

#[test]
fn golden_files_are_reproduced_across_runs_and_thread_counts() {
    assert_eq!(determinism_failures(), Vec::<String>::new());
}

#[test]
fn reference_outputs() {
    let splitting = std::fs::read_to_string(golden_dir().join("splitting_trivial.csv")).unwrap();
    assert_eq!(splitting, "n,concentrated,steinberg_dim\n1,true,1\n2,true,0\n3,true,0\n4,true,0\n5,true,0\n");
    let free = std::fs::read_to_string(golden_dir().join("free_basis_rational.csv")).unwrap();
    let rows: Vec<&str> = free.lines().skip(1).collect();
    assert_eq!(rows, (0..=6).map(|m| format!("{m},0,1")).collect::<Vec<_>>());
    let gl: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(golden_dir().join("glnfq.json")).unwrap()).unwrap();
    assert_eq!(gl["quillen"]["bound"], "1");
    assert_eq!(gl["quillen"]["holds"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run_case(
        &["connectivity", "--rho", "affine:2,-1", "--l", "1", "--k", "2", "--nmax", "4"],
        dir.path(),
        "f",
        None,
    );
    assert_eq!(code, 1, "a failed hypothesis is a false verdict");
    let out =
        bin().args(["free-basis", "--ell", "6", "--k", "2", "--gens", "s:1,0", "--window", "2,2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`ell`"));
    let out = bin().args(["partition", "--nmax", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`nmax`"));
    let out = bin().args(["splitting", "--nmax", "2"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing `family`"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"ell": 0, "k": "inf", "gens": "sigma:1,0", "window": [6, 6], "format": "csv"}"#).unwrap();
    let run = |extra: &[&str]| {
        let out = bin().arg("free-basis").arg("--config").arg(&cfg).args(extra).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run(&[]), std::fs::read_to_string(golden_dir().join("free_basis_rational.csv")).unwrap());
    // The window flag wins over the file.
    assert_eq!(run(&["--window", "2,0"]), "n,d,dim\n0,0,1\n1,0,1\n2,0,1\n");

    std::fs::write(&cfg, r#"{"ell": 0, "colour": "red"}"#).unwrap();
    let out = bin().arg("free-basis").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn sweeps_depend_only_on_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["stability", "--sets", "4", "--seed", "11", "--ell", "3", "--k", "inf", "--window", "6,6"];
    let (c1, a) = run_case(&args, dir.path(), "a", Some(1));
    let (c2, b) = run_case(&args, dir.path(), "b", Some(3));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}
