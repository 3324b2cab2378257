use std::path::Path;
use std::process::{Command, Output};

fn edgewire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgewire")).args(args).output().unwrap()
}

fn edgewire_to(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgewire")).args(args).arg("--out").arg(out).output().unwrap()
}

fn csv_rows(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn three_site_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let res = edgewire_to(&["spectrum", "--sites", "3", "--t", "1", "--tprime", "0.5"], &out);
    assert!(res.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, "index,energy_analytic,energy_numeric,abs_diff");
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][1], 0.0);
    assert!(rows[1][2].abs() < 1e-12);
    let e = 1.25f64.sqrt();
    assert!((rows[0][1] + e).abs() < 1e-14 && (rows[2][1] - e).abs() < 1e-14);
}

#[test]
fn even_sites_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let res = edgewire_to(&["spectrum", "--sites", "4", "--t", "1", "--tprime", "0.5"], &dir.path().join("s.csv"));
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("num_sites must be odd"));
}

#[test]
fn long_chain_spectrum_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    assert!(edgewire_to(&["spectrum", "--sites", "59", "--t", "1", "--tprime", "0.6667"], &out).status.success());
    let (_, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 59);
    assert!(rows.iter().all(|r| r[3] < 1e-10));
}

#[test]
fn zero_mode_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.csv");
    assert!(edgewire_to(&["zeromode", "--sites", "59", "--t", "1", "--tprime", "0.6666666666666666"], &out)
        .status
        .success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, "site,density");
    let r2 = 4.0 / 9.0;
    let site1 = (1.0 - r2) / (1.0 - (2.0f64 / 3.0).powi(60));
    assert!((rows[0][1] - site1).abs() < 1e-12);
    assert!((rows[0][1] - 0.55556).abs() < 1e-5);
    assert!(rows.iter().filter(|r| (r[0] as usize).is_multiple_of(2)).all(|r| r[1] == 0.0));
    assert!((rows.iter().map(|r| r[1]).sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn fully_dimerized_zero_mode_sits_on_site_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.csv");
    assert!(edgewire_to(&["zeromode", "--sites", "9", "--t", "1", "--tprime", "0"], &out).status.success());
    let (_, rows) = csv_rows(&out);
    assert_eq!(rows[0][1], 1.0);
    assert!(rows[1..].iter().all(|r| r[1] == 0.0));
}

#[test]
fn hubbard_report() {
    let res = edgewire(&["hubbard", "--e2", "1", "--lambda", "0.01"]);
    assert!(res.status.success());
    assert!(res.stderr.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    let exact = 0.5 - (0.25f64 + 4e-4).sqrt();
    assert!((v["E0_exact"].as_f64().unwrap() - exact).abs() < 1e-14);
    assert_eq!(v["E0_perturbative"].as_f64().unwrap(), -4e-4);
    assert!(v["triplet_gap"].as_f64().unwrap() > 0.0);
    for key in ["e2", "lambda", "singlet_overlap"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn hubbard_without_hopping() {
    let v: serde_json::Value =
        serde_json::from_slice(&edgewire(&["hubbard", "--e2", "1", "--lambda", "0"]).stdout).unwrap();
    assert_eq!(v["E0_exact"].as_f64().unwrap().abs(), 0.0);
    assert_eq!(v["E0_perturbative"].as_f64().unwrap().abs(), 0.0);
}

#[test]
fn strong_hopping_warns_on_stderr() {
    let res = edgewire(&["hubbard", "--e2", "1", "--lambda", "0.5"]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("warning"));
    assert!(serde_json::from_slice::<serde_json::Value>(&res.stdout).is_ok());
}

#[test]
fn electronic_teleport_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let res = edgewire_to(
        &["teleport", "--variant", "electronic", "--g1", "1,0", "--g2", "0,0", "--trials", "1000", "--seed", "7"],
        &out,
    );
    assert!(res.status.success());
    let summary = String::from_utf8_lossy(&res.stdout);
    assert!(summary.contains("trials=1000") && summary.contains("min_fidelity") && summary.contains("mean_rounds"));
    let v = json(&out);
    assert!((v["min_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["variant"], "electronic");
    assert_eq!(v["seed"], 7);
    let counts = v["branch_counts"].as_object().unwrap();
    assert_eq!(counts.len(), 4);
    assert_eq!(counts.values().map(|c| c.as_u64().unwrap()).sum::<u64>(), 1000);
}

#[test]
fn defaults_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    assert!(edgewire_to(&["teleport", "--variant", "coldatom"], &out).status.success());
    let v = json(&out);
    assert_eq!(v["trials"], 1000);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["g1"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn mixed_variant_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let res =
        edgewire_to(&["teleport", "--variant", "mixed", "--g1", "-0.6,0", "--g2", "0,0.8", "--trials", "20"], &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let v = json(&out);
    assert!((v["min_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(v["g1"][0].as_f64().unwrap() < 0.0);
}

#[test]
fn slightly_off_amplitudes_are_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let res = edgewire_to(
        &["teleport", "--variant", "electronic", "--g1", "0.6000001,0", "--g2", "0.8,0", "--trials", "5"],
        &out,
    );
    assert!(res.status.success());
    let v = json(&out);
    let (a, b) = (v["g1"][0].as_f64().unwrap(), v["g2"][0].as_f64().unwrap());
    assert!((a * a + b * b - 1.0).abs() < 1e-15);
}

#[test]
fn invalid_teleport_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    for args in [
        vec!["teleport", "--variant", "electronic", "--g1", "1,0", "--g2", "1,0"],
        vec!["teleport", "--variant", "electronic", "--g1", "1"],
        vec!["teleport", "--variant", "photonic"],
        vec!["teleport", "--variant", "electronic", "--trials", "0"],
    ] {
        let res = edgewire_to(&args, &out);
        assert_eq!(res.status.code(), Some(2), "{args:?}");
    }
    assert!(!out.exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let args = ["teleport", "--variant", "coldatom", "--g1", "0,1", "--g2", "0,0", "--trials", "300", "--seed", "9"];
    assert!(edgewire_to(&args, &a).status.success());
    assert!(edgewire_to(&args, &b).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
