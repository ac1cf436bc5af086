use std::path::Path;
use std::process::{Command, Output};

fn transducer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transducer")).args(args).output().expect("binary runs")
}

fn reference_config() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../device_reference.cfg").display().to_string()
}

#[test]
fn efficiency_map_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = transducer(&["run", "efficiency-map", "--config", &reference_config(), "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["fig3b_detuning0MHz.csv", "fig3b_detuning80MHz.csv", "summary.txt", "manifest.json"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenario"], "efficiency-map");
    assert_eq!(manifest["checks_passed"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(transducer(&["run", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(transducer(&["self-check", "--criteria", "14"]).status.code(), Some(2));
    assert_eq!(transducer(&[]).status.code(), Some(2));
}

#[test]
fn noisy_scenario_without_seed_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = transducer(&["run", "noise-psd", "--config", &reference_config(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
}

#[test]
fn missing_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = transducer(&["run", "flux-line", "--config", "/nonexistent.cfg", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn self_check_reference_passes_and_perturbed_fails() {
    let o = transducer(&["self-check", "--criteria", "1,2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);

    let o = transducer(&["self-check", "--criteria", "2", "--set", "transmon.kappa_f=36 MHz"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("[FAIL] 02"));
}

#[test]
fn fit_command_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let mut text = String::from("x,y\n");
    for k in 0..201 {
        let x = -10.0 + 0.1 * k as f64;
        let y = 2.0 / std::f64::consts::PI * 0.5 / ((x - 0.3).powi(2) + 0.25) + 0.1;
        text.push_str(&format!("{x},{y}\n"));
    }
    std::fs::write(&path, text).unwrap();
    let o = transducer(&["fit", "lorentzian", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let params = report["parameters"].as_array().unwrap();
    let value = |name: &str| params.iter().find(|p| p["name"] == name).unwrap()["value"].as_f64().unwrap();
    assert!((value("center") - 0.3).abs() < 1e-6);
    assert!((value("fwhm") - 1.0).abs() < 1e-6);
    assert_eq!(transducer(&["fit", "gaussian", path.to_str().unwrap()]).status.code(), Some(2));
}
