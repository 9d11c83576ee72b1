use std::path::Path;
use std::process::{Command, Output};

use hyperzeta::groups::{enumerate_primitive_classes, pants_from_lengths};
use hyperzeta::store::load_spectrum;
use hyperzeta::zeta::{zeta_cylinder, TruncationPolicy};
use hyperzeta::Complex64;

fn hyperzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperzeta"))
        .args(args)
        .env("HYPERZETA_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_timestamp(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn eval_grid_has_one_row_per_point() {
    let o = hyperzeta(&["eval", "--model", "cylinder:1", "--what", "Z", "--grid", "0.5:3:0.1,0:0:1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["re_s", "im_s", "re_value", "im_value", "tail_bound"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 26);
    // values agree with the library
    let p = TruncationPolicy::default();
    for row in [&rows[0], &rows[13], &rows[25]] {
        let s: f64 = row[0].parse().unwrap();
        let want = zeta_cylinder(Complex64::new(s, 0.0), 1.0, &p).unwrap().value();
        let got: f64 = row[2].parse().unwrap();
        assert!((got - want.re).abs() < 1e-14 * (1.0 + want.re.abs()), "s = {s}");
    }
    assert!((rows[25][0].parse::<f64>().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn spectrum_matches_in_process_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.json");
    let o = hyperzeta(&["spectrum", "--model", "pants:2,2,2", "--lmax", "8", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let written = load_spectrum(&path).unwrap();
    let direct = enumerate_primitive_classes(&pants_from_lengths(2.0, 2.0, 2.0).unwrap(), 8.0, true).unwrap();
    assert!(written.complete && written.certificate.is_some());
    assert_eq!(written.total_count(), direct.total_count());
    for ((la, ma), (lb, mb)) in written.iter().zip(direct.iter()) {
        assert_eq!(ma, mb);
        assert!((la - lb).abs() < 1e-13 * lb);
    }
}

#[test]
fn appendix_suite_reports_the_unit_kappa_line() {
    let o = hyperzeta(&["verify", "--suite", "appendix"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "verify_report");
    let entries = v["data"]["entries"].as_array().unwrap();
    let line = entries
        .iter()
        .find(|e| e["id"] == "gs-int" && e["parameters"].as_str().unwrap().contains("kappa=1,"))
        .expect("gs-int at kappa = 1");
    assert!(line["parameters"].as_str().unwrap().contains("rhs=0.500000"));
    assert_eq!(line["pass"], true);
    for id in ["gs-int2", "ghgh-diag", "rsq-diag", "cusp-res-limit", "zinf-reflection"] {
        assert!(entries.iter().any(|e| e["id"] == id), "missing {id}");
    }
    assert!(entries.iter().all(|e| e["residual"].as_f64().unwrap() <= e["tolerance"].as_f64().unwrap()));
}

#[test]
fn artifacts_are_deterministic_apart_from_the_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = hyperzeta(&["resonances", "--model", "funnel:2", "--box=-4:0.5:-6:6", "--out", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        path
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(without_timestamp(&a), without_timestamp(&b));
    let v = without_timestamp(&a);
    assert_eq!(v["model"]["type"], "funnel");
    assert_eq!(v["policy"]["radius"], 60.0);
    assert_eq!(v["data"]["points"].as_array().unwrap().len(), 2 * 3);
}

#[test]
fn untimestamped_output_is_byte_identical() {
    let args = ["invert", "--model", "cylinder:1", "--no-timestamp"];
    let a = hyperzeta(&args);
    let b = hyperzeta(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!((v["data"]["chi"].as_i64(), v["data"]["n_c"].as_i64()), (Some(0), Some(0)));
}

#[test]
fn inversion_reads_an_eval_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    let o = hyperzeta(&[
        "eval",
        "--model",
        "pants:2,2,2",
        "--what",
        "det",
        "--log",
        "--grid",
        "15:61:2,0:0:1",
        "--format",
        "json",
        "--out",
        grid.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = hyperzeta(&["invert", "--input", grid.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["data"]["chi"].as_i64(), v["data"]["n_c"].as_i64()), (Some(-1), Some(0)));
}

#[test]
fn exit_codes_follow_the_error_class() {
    // configuration
    for args in [
        &["eval", "--grid", "0:1:0.5,0:0:1"][..],
        &["eval", "--model", "cylinder:1", "--grid", "0:1:0,0:0:1"],
        &["eval", "--model", "torus:1", "--grid", "0:1:0.5,0:0:1"],
        &["spectrum", "--model", "pants:2,2,2", "--policy", "100,1e-6"],
        &["resonances", "--model", "funnel:1", "--box=0:0:1:2"],
    ] {
        let o = hyperzeta(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = hyperzeta(&["definitely-not-a-command"]);
    assert_eq!(o.status.code(), Some(2));
    // i/o
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let o = hyperzeta(&["eval", "--what", "P", "--catalog", missing.to_str().unwrap(), "--grid", "0:1:0.5,0:0:1"]);
    assert_eq!(o.status.code(), Some(3));
    // computation: the topological factor has poles at the non-positive integers
    let o = hyperzeta(&["eval", "--model", "pants:2,2,2", "--what", "Zinf", "--grid", "-1:0:1,0:0:1"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}
