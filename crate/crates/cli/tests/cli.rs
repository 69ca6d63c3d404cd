use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn attenuo(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attenuo"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) -> Value {
    let o = attenuo(args, out);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.to_string_lossy().ends_with("_report.json"))
        .expect("a report was written");
    serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap()
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.v1.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(report: &Value) {
    let v = jsonschema::validator_for(&schema()).unwrap();
    let errors: Vec<String> = v.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn presets_are_listed() {
    let o = Command::new(env!("CARGO_BIN_EXE_attenuo")).arg("presets").output().unwrap();
    let s = String::from_utf8(o.stdout).unwrap();
    for name in ["fig1a", "fig3b", "fig4-gas", "castor", "ex-powerlaw0.66"] {
        assert!(s.contains(name), "{name} missing");
    }
}

#[test]
fn kernel_preset_writes_table_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = ok(&["kernel", "--preset", "fig1a"], dir.path());
    assert_valid(&report);
    assert_eq!(report["causality"]["verdict"], "causal");
    let (header, rows) = read_csv(&dir.path().join("kernel.csv"));
    assert_eq!(header, ["t", "K"]);
    assert_eq!(rows.len(), 512);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
}

#[test]
fn kernel_verdicts_of_the_figures() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [("fig1b", "non_causal"), ("fig2a", "causal"), ("fig2b", "non_causal"), ("fig3b", "causal")];
    for (preset, verdict) in cases {
        let d = dir.path().join(preset);
        let r = ok(&["kernel", "--preset", preset], &d);
        assert_eq!(r["causality"]["verdict"], verdict, "{preset}");
    }
    let r = ok(
        &["kernel", "--law", "ksb", "--gamma", "2", "--alpha0", "1", "--tau0", "1e-5", "--c0", "1", "--r", "0.25"],
        &dir.path().join("flags"),
    );
    assert_eq!(r["causality"]["verdict"], "causal");
}

#[test]
fn thermo_viscous_figure_is_non_causal() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok(&["kernel", "--preset", "fig3a"], dir.path());
    assert_eq!(r["causality"]["verdict"], "non_causal");
}

#[test]
fn lawcompare_presets() {
    let dir = tempfile::tempdir().unwrap();
    for preset in ["fig4-liquid", "fig4-gas"] {
        let r = ok(&["lawcompare", "--preset", preset], &dir.path().join(preset));
        assert_valid(&r);
        assert!(r["low_end_rel_diff"].as_f64().unwrap() < 0.05);
        let (header, rows) = read_csv(&dir.path().join(preset).join("lawcompare.csv"));
        assert_eq!(header, ["omega", "alpha_ksb", "alpha_pl"]);
        assert_eq!(rows[0], vec![0.0, 0.0, 0.0]);
    }
}

#[test]
fn lawcompare_accepts_caption_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok(&["lawcompare", "--gamma", "1.5", "--tau0", "1e-6", "--band", "0,60,61"], dir.path());
    assert_eq!(r["band"]["points"], 61);
    assert!((r["alpha0"].as_f64().unwrap() - 2e-6 / (0.75 * std::f64::consts::PI).cos().abs()).abs() < 1e-18);
}

#[test]
fn svd_writes_one_set_per_distance() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok(&["svd", "--preset", "castor", "--L", "0,2"], dir.path());
    assert_valid(&r);
    let runs = r["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 2);
    assert!(runs[0]["n_cut"].as_u64() >= runs[1]["n_cut"].as_u64());
    for tag in ["L0", "L2"] {
        let (h, rows) = read_csv(&dir.path().join(format!("sigma_{tag}.csv")));
        assert_eq!(h, ["index", "sigma"]);
        assert_eq!(rows.len(), 341);
        let (h, rows) = read_csv(&dir.path().join(format!("heatmap_{tag}.csv")));
        assert_eq!((h.len(), rows.len()), (342, 512));
    }
}

#[test]
fn forward_invert_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok(&["forward-invert", "--preset", "lossless", "--L", "0"], &dir.path().join("a"));
    assert_valid(&r);
    assert!(r["runs"][0]["round_trip_rel_l2"].as_f64().unwrap() <= 1e-3);
    let r = ok(&["forward-invert", "--preset", "castor", "--L", "0,4"], &dir.path().join("b"));
    let e0 = r["runs"][0]["round_trip_rel_l2"].as_f64().unwrap();
    let e4 = r["runs"][1]["round_trip_rel_l2"].as_f64().unwrap();
    assert!(e4 > e0);
    for f in ["p0_L0.csv", "p_att_L0.csv", "p0_rec_L4.csv"] {
        assert!(dir.path().join("b").join(f).exists(), "{f}");
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str, threads: &str| {
        let out = dir.path().join(sub);
        let o = Command::new(env!("CARGO_BIN_EXE_attenuo"))
            .args(["svd", "--preset", "ex-gamma2", "--L", "0,2,4", "--no-heatmap", "--out"])
            .arg(&out)
            .env("ATTENUO_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        out
    };
    let a = run("a", "1");
    let b = run("b", "3");
    for name in ["svd_report.json", "sigma_L0.csv", "sigma_L2.csv", "sigma_L4.csv"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn json_format_and_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["kernel", "--preset", "fig1c", "--format", "json", "--plot-script"], dir.path());
    let table: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("kernel.json")).unwrap()).unwrap();
    assert_eq!(table["t"].as_array().unwrap().len(), 512);
    assert!(dir.path().join("plot.py").exists());
    assert!(!dir.path().join("kernel.csv").exists());
}

#[test]
fn config_file_is_accepted_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"law": {"law": "power_law", "gamma": 0.5, "alpha0": 0.1581}, "grid": {"n": 256, "omega_max": 40}, "r": 0.5}"#,
    )
    .unwrap();
    let r = ok(&["kernel", "--config", good.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(r["grid"]["n"], 256);
    assert_eq!(r["r"], 0.5);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"r": 0.5, "radius": 2}"#).unwrap();
    let o = attenuo(&["kernel", "--preset", "fig1a", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["kernel", "--preset", "nope"],
        &["kernel", "--preset", "castor"],
        &["kernel", "--preset", "fig1a", "--grid", "7,1"],
        &["kernel", "--law", "power_law", "--gamma", "2", "--alpha0", "1"],
        &["svd", "--law", "power_law", "--gamma", "0.5", "--alpha0", "0.1"],
        &["kernel", "--law", "chen_holm", "--gamma", "1", "--alpha1", "0.5", "--c0", "1"],
    ];
    for args in cases {
        let o = attenuo(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = Command::new(env!("CARGO_BIN_EXE_attenuo"))
        .args(["kernel", "--preset", "fig1a", "--out"])
        .arg(dir.path())
        .env("ATTENUO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
