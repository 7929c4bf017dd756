use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_nkcurves"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("NKCURVES_OUT")
        .output()
        .expect("binary runs");
    out.status.code().expect("exit code")
}

fn report(dir: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{command}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn without_timestamp(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn verify_structure_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        run(
            d,
            &["verify-structure", "--background", "s6", "--points", "20"]
        ),
        0
    );
    let r = report(d, "verify-structure");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"], "pass");
    assert!((r["results"]["lambda"]["mean"].as_f64().unwrap() + 1.0).abs() < 1e-6);
    assert_eq!(r["results"]["tables"]["multiplication"]["table"][0][1], 3);

    assert_eq!(
        run(
            d,
            &[
                "verify-structure",
                "--background",
                "torus",
                "--field",
                "sin(x5)",
                "--points",
                "20"
            ]
        ),
        1
    );
    assert_eq!(report(d, "verify-structure")["status"], "violated");

    assert_eq!(
        run(
            d,
            &[
                "verify-structure",
                "--background",
                "s3s3",
                "--b",
                "0",
                "--points",
                "5"
            ]
        ),
        1
    );
    assert_eq!(
        report(d, "verify-structure")["results"]["hypothesis"],
        "violated"
    );

    assert_eq!(run(d, &["verify-structure", "--background", "mars"]), 2);
    assert_eq!(run(d, &["verify-structure", "--tol.nonsense=1"]), 2);
    assert_eq!(
        run(
            d,
            &[
                "verify-structure",
                "--background",
                "torus",
                "--field",
                "tan(x1)"
            ]
        ),
        2
    );
}

#[test]
fn tolerance_override_changes_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["find-nk-metric", "--tol.nk-metric=1e-30"]), 1);
    assert_eq!(
        report(d, "find-nk-metric")["config"]["tolerances"]["nk-metric"],
        1e-30
    );
}

#[test]
fn find_nk_metric_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["find-nk-metric"]), 0);
    let b = report(d, "find-nk-metric")["results"]["b_star"]
        .as_f64()
        .unwrap();
    assert!((b + 0.5).abs() < 1e-6);
    assert_eq!(run(d, &["find-nk-metric", "--lo", "0.5", "--hi", "0.2"]), 2);
}

#[test]
fn curve_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["curve-volume", "--resolution", "2"]), 0);
    let v = report(d, "curve-volume")["results"]["volume"]
        .as_f64()
        .unwrap();
    assert!((v - 4.0 * std::f64::consts::PI).abs() < 2e-3);
    assert_eq!(
        run(
            d,
            &["curve-volume", "--resolution", "2", "--triple", "1,2,4"]
        ),
        1
    );
    assert_eq!(run(d, &["curve-volume", "--background", "s3s3"]), 2);
    assert_eq!(run(d, &["hausdorff", "--resolution", "2"]), 0);
    let h = report(d, "hausdorff")["results"]["distance"]
        .as_f64()
        .unwrap();
    assert!((h - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn family_codes_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        run(
            d,
            &[
                "family",
                "--background",
                "torus",
                "--resolution",
                "4",
                "--steps",
                "128"
            ]
        ),
        0
    );
    let r = report(d, "family");
    assert!(r["results"]["drift"]["relative_drift"].as_f64().unwrap() > 1e-2);
    let csv = std::fs::read_to_string(d.join("family.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,volume,residual,hausdorff_step");
    assert_eq!(lines.count(), 129);

    assert_eq!(
        run(d, &["family", "--background", "torus", "--drive", "g2"]),
        2
    );
    assert_eq!(run(d, &["family", "--background", "s3s3"]), 2);
    assert_eq!(
        run(
            d,
            &[
                "family",
                "--drive",
                "random",
                "--magnitude",
                "10",
                "--resolution",
                "1",
                "--steps",
                "2"
            ]
        ),
        3
    );
    assert!(report(d, "family")["results"]["failure"]["kind"].is_string());
}

#[test]
fn reports_replay_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: &[&[&str]] = &[
        &[
            "verify-structure",
            "--background",
            "s6",
            "--points",
            "10",
            "--seed",
            "3",
        ],
        &["find-nk-metric"],
        &["curve-volume", "--resolution", "2"],
        &["hausdorff", "--resolution", "2"],
        &[
            "family",
            "--drive",
            "random",
            "--resolution",
            "1",
            "--steps",
            "3",
            "--seed",
            "5",
        ],
        &[
            "stokes-check",
            "--background",
            "torus",
            "--resolution",
            "4",
            "--steps",
            "8",
            "--tol.stokes=1e-2",
            "--tol.step=1",
        ],
    ];
    for args in cases {
        let command = args[0];
        let first_code = run(d, args);
        let first = std::fs::read_to_string(d.join(format!("{command}.json"))).unwrap();
        let csv_path = d.join(format!("{command}.csv"));
        let first_csv = std::fs::read(&csv_path).ok();
        let saved = d.join("saved.json");
        std::fs::write(&saved, &first).unwrap();
        let replay_code = run(d, &[command, "--config", saved.to_str().unwrap()]);
        assert_eq!(first_code, replay_code, "{command}");
        let second = std::fs::read_to_string(d.join(format!("{command}.json"))).unwrap();
        let a = without_timestamp(serde_json::from_str(&first).unwrap());
        let b = without_timestamp(serde_json::from_str(&second).unwrap());
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "{command}"
        );
        assert_eq!(first_csv, std::fs::read(&csv_path).ok(), "{command}");
    }
}

#[test]
fn config_for_other_command_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["find-nk-metric"]), 0);
    let path = d.join("find-nk-metric.json");
    assert_eq!(
        run(d, &["hausdorff", "--config", path.to_str().unwrap()]),
        2
    );
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_nkcurves"))
        .args(["find-nk-metric"])
        .env("NKCURVES_OUT", dir.path())
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(0));
    assert!(dir.path().join("find-nk-metric.json").exists());
}
