use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn sdpi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdpi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn sstar_bundled_files() {
    let q = json(&sdpi(&["sstar", data("quaternary.json").to_str().unwrap()]));
    assert!((num(&q["rho_star"]) - 0.045).abs() <= 0.005);
    assert_eq!(q["sstar_xy"]["method"], "combined");

    let i = json(&sdpi(&[
        "sstar",
        data("independent_binary.json").to_str().unwrap(),
    ]));
    assert_eq!(num(&i["rho_star"]), 0.0);

    let d = json(&sdpi(&["sstar", data("dsbs_p10.json").to_str().unwrap()]));
    assert!(num(&d["rho_star"]) >= 0.64 - 1e-9);
}

#[test]
fn sstar_diagonal_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        &dir,
        "diag.json",
        r#"{"x_size":3,"y_size":3,"probs":[0.2,0,0,0,0.3,0,0,0,0.5]}"#,
    );
    let v = json(&sdpi(&["sstar", &f]));
    assert!((num(&v["rho_star"]) - 1.0).abs() < 1e-9);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let f = data("quaternary.json");
    let a = sdpi(&["sstar", f.to_str().unwrap(), "--seed", "11"]);
    let b = sdpi(&["sstar", f.to_str().unwrap(), "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = write(&dir, "bad.json", r#"{"x_size": 2,"#);
    assert_eq!(sdpi(&["sstar", &malformed]).status.code(), Some(2));

    let zero = write(
        &dir,
        "zero.json",
        r#"{"x_size":2,"y_size":2,"probs":[0.5,0.5,0,0]}"#,
    );
    let out = sdpi(&["sstar", &zero]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("marginal"));

    assert_eq!(
        sdpi(&["sstar", "/no/such/file.json"]).status.code(),
        Some(4)
    );
    assert_eq!(sdpi(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        sdpi(&["cr", "--rate", "0", "--capacity", "1", "--sstar", "0.5"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        sdpi(&[
            "gauss-figures",
            "--rho",
            "0.5",
            "--out",
            "/no/such/dir/f.csv"
        ])
        .status
        .code(),
        Some(4)
    );
    assert_eq!(
        sdpi(&["gauss-figures", "--rho", "1.5"]).status.code(),
        Some(3)
    );
}

#[test]
fn rd_point_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(&dir, "src.json", r#"{"probs":[0.5,0.5]}"#);
    let ham = write(
        &dir,
        "ham.json",
        r#"{"x_size":2,"xhat_size":2,"costs":[0,1,1,0]}"#,
    );

    let p = json(&sdpi(&["rd", &src, &ham, "--distortion-target", "0.1"]));
    assert!((num(&p["rate"]) - 0.531004).abs() < 1e-6);

    let p = json(&sdpi(&["rd", &src, &ham, "--distortion-target", "0.7"]));
    assert_eq!(num(&p["rate"]), 0.0);

    let c = json(&sdpi(&["rd", &src, &ham, "--curve", "20"]));
    let pts = c["points"].as_array().unwrap();
    assert_eq!(pts.len(), 20);
    let rates: Vec<f64> = pts.iter().map(|p| num(&p["rate"])).collect();
    assert!(rates.windows(2).all(|w| w[1] <= w[0] + 1e-7));

    assert_eq!(sdpi(&["rd", &src, &ham]).status.code(), Some(2));
}

#[test]
fn bounds_on_quaternary() {
    let f = data("quaternary.json");
    let f = f.to_str().unwrap();
    let ok = json(&sdpi(&[
        "bounds", f, "--rx", "2", "--ry", "2", "--dx", "0", "--dy", "0",
    ]));
    let reports = ok["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["satisfied"] == true));

    let bad = json(&sdpi(&[
        "bounds", f, "--rx", "1.9", "--ry", "1.9", "--dx", "0", "--dy", "0",
    ]));
    assert_eq!(bad["reports"][2]["satisfied"], false);
}

#[test]
fn bounds_with_zero_y_distortion() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(
        &dir,
        "zero.json",
        r#"{"x_size":2,"xhat_size":2,"costs":[0,0,0,0]}"#,
    );
    let f = data("dsbs_p10.json");
    let out = sdpi(&[
        "bounds",
        f.to_str().unwrap(),
        "--rx",
        "0.5",
        "--ry",
        "0",
        "--dx",
        "0.1",
        "--dy",
        "0",
        "--y-distortion",
        &zero,
    ]);
    let v = json(&out);
    assert_eq!(v["reports"][1]["vacuous"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("R_Y(D_Y) = 0"));
}

#[test]
fn gauss_figures_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let p = path.to_str().unwrap();

    let s = json(&sdpi(&["gauss-figures", "--rho", "0.2", "--out", p]));
    assert!(num(&s["max_relative_gap_simple"]) <= 0.06);
    assert!(num(&s["min_margin"]) >= -1e-9);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("dx,dy,exact,simple,cooperative,max_bound")
    );
    assert_eq!(csv.lines().count(), 91);

    let s = json(&sdpi(&["gauss-figures", "--rho", "0.8", "--out", p]));
    assert!(num(&s["rows_cooperative_above_simple"]) > 0.0);

    json(&sdpi(&["gauss-figures", "--rho", "0", "--out", p]));
    for line in std::fs::read_to_string(&path).unwrap().lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[2] - f[3]).abs() < 1e-9 && (f[2] - f[4]).abs() < 1e-9);
    }

    let out = sdpi(&["gauss-figures", "--rho", "-0.5", "--grid", "product:0.01:5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 6);
}

#[test]
fn ceo_and_cr() {
    let c = json(&sdpi(&[
        "cr",
        "--rate",
        "1",
        "--capacity",
        "1.5",
        "--sstar",
        "0.5",
    ]));
    assert_eq!(num(&c["lhs"]), 2.0);
    assert_eq!(c["satisfied"], true);

    let v = json(&sdpi(&[
        "cr",
        "--rate",
        "1",
        "--capacity",
        "9",
        "--sstar",
        "1",
    ]));
    assert_eq!(v["vacuous"], true);

    let k1 = json(&sdpi(&[
        "ceo", "--rates", "2", "--sstars", "0.4", "--target", "1",
    ]));
    assert!((num(&k1["lhs"]) - 0.8).abs() < 1e-12);
    assert_eq!(k1["satisfied"], false);

    let k2 = json(&sdpi(&[
        "ceo", "--rates", "2,1", "--sstars", "0.4,0.3", "--target", "1",
    ]));
    assert!((num(&k2["lhs"]) - 1.1).abs() < 1e-12);
}

#[test]
fn config_file_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"multistart_count": 4, "grid_max_alphabet": 0}"#,
    );
    let f = data("quaternary.json");
    let out = sdpi(&[
        "sstar",
        f.to_str().unwrap(),
        "--config",
        &cfg,
        "--seed",
        "3",
    ]);
    let v = json(&out);
    assert_eq!(v["sstar_xy"]["method"], "multistart");
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let unknown = write(&dir, "unk.json", r#"{"bogus": 1}"#);
    assert_eq!(
        sdpi(&["sstar", f.to_str().unwrap(), "--config", &unknown])
            .status
            .code(),
        Some(2)
    );
}
