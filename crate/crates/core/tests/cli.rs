use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use symplectic_ginibre::limit::bulk_density;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symplectic-ginibre")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sg-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn records(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn bulk_density_cross_section() {
    let out = bin(&["density", "--N", "300", "--tau", "0.3", "--regime", "bulk", "--line", "0,0.1,0,3", "--samples", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = records(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["re_z", "im_z", "R_N", "R_limit", "sqrtN_diff", "R_half"]);
    assert_eq!(rows.len(), 7);
    for row in rows {
        assert!((row[3] - bulk_density(row[1])).abs() < 1e-14);
        assert!((row[2] - row[3]).abs() < 1e-8, "{row:?}");
    }
}

#[test]
fn invalid_input_exits_2() {
    let out = bin(&["density", "--N", "10", "--grid", "0,1,0,1", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["density", "--N", "10", "--line", "0,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["kernel", "--N", "10", "--tau", "1.5", "--z", "0,1", "--w", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_is_reproducible() {
    let args = ["sample", "--N", "40", "--tau", "0.5", "--seed", "9", "--samples", "2"];
    let a = bin(&args);
    let b = bin(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = records(&String::from_utf8(a.stdout).unwrap());
    assert_eq!(header, ["re", "im", "rescaled_re", "rescaled_im", "seed"]);
    assert_eq!(rows.len(), 80);
    assert!(rows.iter().all(|r| r[1] > 0.0));
}

#[test]
fn check_exit_codes() {
    assert_eq!(bin(&["check", "--samples", "2"]).status.code(), Some(0));
    assert_eq!(bin(&["check", "--samples", "2", "--perturb"]).status.code(), Some(3));
}

#[test]
fn figure2_schema_and_manifest() {
    let path = scratch("figure2.csv");
    let out = bin(&["figure2", "--N-list", "100,200,400", "--samples", "5", "--out", path.to_str().unwrap()]);
    // small N is far from the limit, so the tolerance outcome is a fail
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = records(&fs::read_to_string(&path).unwrap());
    let expect = [
        "re_z", "im_z", "R_limit", "R_half", "a", "b", "c", "residual", "corr_a", "R_N_100", "R_N_200", "R_N_400",
        "sqrtN_diff_100", "sqrtN_diff_200", "sqrtN_diff_400",
    ];
    assert_eq!(header, expect);
    assert_eq!(rows.len(), 5);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{}.manifest.json", path.display())).unwrap()).unwrap();
    assert_eq!(manifest["outcome"], "fail");
    assert_eq!(manifest["config"]["subcommand"], "figure2");
    assert!(manifest["summary"]["max_abs_error_a"].as_f64().unwrap() > 0.0);
}

#[test]
fn pfaffian_of_file() {
    let path = scratch("skew.csv");
    // Pf = a12 a34 - a13 a24 + a14 a23 = 1*6 - 2*5 + 3*4
    let rows = [
        "0,0,1,0,2,0,3,0",
        "-1,0,0,0,4,0,5,0",
        "-2,0,-4,0,0,0,6,0",
        "-3,0,-5,0,-6,0,0,0",
    ];
    fs::write(&path, rows.join("\n")).unwrap();
    let out = bin(&["pfaffian", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 4);
    assert!((v["re"].as_f64().unwrap() - 8.0).abs() < 1e-14);
    assert!(v["im"].as_f64().unwrap().abs() < 1e-14);
    assert_eq!(v["singular"], false);
}

#[test]
fn extrapolate_exact_series() {
    let path = scratch("series.csv");
    let mut text = String::from("N,value\n");
    for n in [100.0f64, 400.0, 900.0, 1600.0] {
        text += &format!("{n},{}\n", 1.5 + 2.0 / n.sqrt() - 3.0 / n);
    }
    fs::write(&path, text).unwrap();
    let out = bin(&["extrapolate", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = records(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["a", "b", "c", "residual"]);
    assert!((rows[0][0] - 1.5).abs() < 1e-10);
    assert!((rows[0][1] - 2.0).abs() < 1e-8);
    assert!((rows[0][2] + 3.0).abs() < 1e-7);
}
