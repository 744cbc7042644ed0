//! End-to-end checks of the `entcert` binary: exit-code policy, output
//! formats, reproducibility, and schema conformance of the JSON outputs.

mod common;

use std::path::Path;
use std::process::{Command, Output};

fn entcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entcert"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn certify_exact_verdicts() {
    let out = entcert(&[
        "certify", "--family", "rho_w", "--d", "2", "--p", "0.9", "--pairs", "comp,sx", "--exact",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("verdict: entangled"), "{text}");

    let out = entcert(&[
        "certify", "--family", "rho_w", "--d", "2", "--p", "0.5", "--exact",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: inconclusive"));

    let out = entcert(&["certify", "--family", "max", "--d", "32", "--exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("verdict: maximally-entangled-consistent"),
        "{text}"
    );
    assert!(text.contains("sum = 10.000000"), "{text}");
}

#[test]
fn certify_sampled_still_certifies_strong_entanglement() {
    // counting noise at the default budget leaves plenty of 2σ margin
    // above the threshold for a strongly entangled d = 2 state
    let out = entcert(&[
        "certify",
        "--family",
        "rho_w",
        "--d",
        "2",
        "--p",
        "0.9",
        "--pairs",
        "comp,sx",
        "--n-total",
        "8000",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[simulated counts]"));
    assert!(text.contains("verdict: entangled"), "{text}");
}

#[test]
fn certify_json_matches_schema() {
    let out = entcert(&[
        "certify", "--family", "rho_b", "--d", "2", "--p", "0.9", "--exact", "--method", "pearson",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let schema = common::load_schema("certification_report.schema.json");
    common::validate_against_schema(&value, &schema).unwrap();
    assert_eq!(value["method"], "pearson_conjecture");
    assert_eq!(value["verdict"], "entangled");
    assert!((value["sum"].as_f64().unwrap() - 1.8).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["certify", "--family", "bogus", "--d", "2", "--p", "0.5"],
        vec![
            "certify", "--family", "rho_w", "--d", "3", "--p", "0.5", "--pairs", "comp,sx",
        ],
        vec!["certify", "--family", "rho_w", "--d", "2", "--p", "1.5"],
        vec![
            "certify", "--family", "rho_w", "--d", "3", "--p", "0.5", "--pairs", "mub3",
        ],
        vec!["mub-check", "--d", "5"],
        vec!["oracle-compare", "--family", "rho_s", "--d", "2"],
        vec!["sweep", "--family", "rho_w", "--d", "2", "--p-step", "0"],
        vec!["basis", "--kind", "sx", "--d", "3"],
    ];
    for args in cases {
        let out = entcert(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?}: {:?}",
            out.status
        );
    }
}

#[test]
fn sweep_csv_is_stable_and_reproducible() {
    let dir = std::env::temp_dir().join(format!("entcert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f1 = dir.join("a.csv");
    let f2 = dir.join("b.csv");
    for f in [&f1, &f2] {
        let out = entcert(&[
            "sweep",
            "--family",
            "rho_s",
            "--d",
            "2",
            "--p-step",
            "0.25",
            "--n-total",
            "4000",
            "--trials",
            "5",
            "--seed",
            "11",
            "--out",
            f.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&f1).unwrap();
    let b = std::fs::read(&f2).unwrap();
    assert_eq!(a, b, "same config + seed must give byte-identical files");

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,d,p,pair_labels,mi_ab,mi_cd,sum,sigma,analytic_sum,threshold,verdict"
    );
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 11, "row: {line}");
        let sum: f64 = cols[6].parse().unwrap();
        assert!(sum <= 1.0 + 1e-9, "separable family exceeded 1 bit: {line}");
        rows += 1;
    }
    assert_eq!(rows, 5);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_json_matches_schema_and_orders_rho_a_pairs() {
    let sx = entcert(&[
        "sweep", "--family", "rho_a", "--d", "4", "--p-step", "0.25", "--pairs", "comp,sx",
        "--exact", "--format", "json",
    ]);
    assert!(sx.status.success());
    let fourier = entcert(&[
        "sweep",
        "--family",
        "rho_a",
        "--d",
        "4",
        "--p-step",
        "0.25",
        "--pairs",
        "comp,fourier",
        "--exact",
        "--format",
        "json",
    ]);
    assert!(fourier.status.success());

    let schema = common::load_schema("sweep_records.schema.json");
    let sx_records: serde_json::Value = serde_json::from_str(&stdout(&sx)).unwrap();
    let fourier_records: serde_json::Value = serde_json::from_str(&stdout(&fourier)).unwrap();
    common::validate_against_schema(&sx_records, &schema).unwrap();
    common::validate_against_schema(&fourier_records, &schema).unwrap();

    for (a, b) in sx_records
        .as_array()
        .unwrap()
        .iter()
        .zip(fourier_records.as_array().unwrap())
    {
        let sum_sx = a["sum"].as_f64().unwrap();
        let sum_fourier = b["sum"].as_f64().unwrap();
        assert!(
            sum_sx >= sum_fourier - 1e-9,
            "σx sum {sum_sx} below Fourier sum {sum_fourier} at p = {}",
            a["p"]
        );
    }
}

#[test]
fn sweep_multi_mub_has_empty_verdict_column() {
    let out = entcert(&[
        "sweep", "--family", "rho_w", "--d", "3", "--p", "0.5", "--pairs", "mub3", "--exact",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.ends_with(','), "verdict cell must be empty: {row}");
}

#[test]
fn mub_check_reports() {
    let out = entcert(&["mub-check", "--d", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("construction OK"));
    assert!(!text.contains("NOT unbiased"));

    let out = entcert(&["mub-check", "--d", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("FAILED as published"), "{text}");
    assert!(text.contains("F4d"), "{text}");
    assert!(
        text.contains("corrected collection 'mub-d4-corrected'"),
        "{text}"
    );

    let out = entcert(&["mub-check", "--d", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // σx and Fourier are each unbiased to comp but not to one another
    assert!(text.contains("NOT unbiased"), "{text}");
    assert!(text.contains("comp"), "{text}");
}

#[test]
fn oracle_compare_reports_crossing() {
    let out = entcert(&[
        "oracle-compare",
        "--family",
        "rho_w",
        "--d",
        "2",
        "--p-step",
        "0.1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("max |numeric - analytic|"));
    assert!(text.contains("p* = 0.7799"), "{text}");

    let out = entcert(&[
        "oracle-compare",
        "--family",
        "rho_c",
        "--d",
        "8",
        "--p-step",
        "0.25",
    ]);
    assert!(out.status.success());
    let max_line = stdout(&out);
    let max_val: f64 = max_line
        .lines()
        .find(|l| l.starts_with("max |numeric"))
        .and_then(|l| l.rsplit('=').next())
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(max_val < 1e-9, "oracle disagreement {max_val}");
}

#[test]
fn basis_export_roundtrips() {
    let out = entcert(&["basis", "--kind", "fourier", "--d", "8"]);
    assert!(out.status.success());
    let basis = entcert::Basis::from_json(&stdout(&out)).unwrap();
    assert_eq!(basis.dim(), 8);
    assert_eq!(basis.label(), "fourier");
    let reference = entcert::fourier_basis(8).unwrap();
    for k in 0..8 {
        assert!(basis.ket(k).same_ray(reference.ket(k), 1e-12));
    }
}

#[test]
fn thread_cap_env_var_is_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_entcert"))
        .env("ENTCERT_THREADS", "1")
        .args([
            "sweep", "--family", "rho_w", "--d", "2", "--p-step", "0.5", "--trials", "3", "--seed",
            "4",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());

    let bad = Command::new(env!("CARGO_BIN_EXE_entcert"))
        .env("ENTCERT_THREADS", "zero")
        .args(["sweep", "--family", "rho_w", "--d", "2", "--trials", "3"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn schema_files_are_shipped() {
    for name in [
        "sweep_records.schema.json",
        "certification_report.schema.json",
    ] {
        let path = common::schema_path(name);
        assert!(Path::new(&path).exists(), "{} missing", path.display());
    }
}
