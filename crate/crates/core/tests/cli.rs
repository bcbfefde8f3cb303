use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cgmv::cli::{strip_timestamp, validate_csv, validate_measure_json};
use serde_json::Value;

fn cgmv(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgmv")).current_dir(dir).args(args).output().expect("binary runs")
}

fn identity_coin(dir: &Path) {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..4).map(|r| (0..4).map(|c| [if r == c { 1.0 } else { 0.0 }, 0.0]).collect()).collect();
    fs::write(dir.join("identity.json"), serde_json::to_string(&rows).unwrap()).unwrap();
}

#[test]
fn identity_coin_moves_ballistically() {
    let dir = tempfile::tempdir().unwrap();
    identity_coin(dir.path());
    let out = cgmv(dir.path(), &["simulate", "--type", "I", "--coin", "identity.json", "--steps", "3", "--out", "dist.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(dir.path().join("dist.csv")).unwrap(), "t,x,y,P\n3,3,0,1.0\n");
    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("dist.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["columns"], serde_json::json!(["t", "x", "y", "P"]));
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert!(m["timestamp"].is_u64());
    assert_eq!(m["config"]["simulate"]["steps"], 3);
}

#[test]
fn simulate_every_step_keeps_probability() {
    let dir = tempfile::tempdir().unwrap();
    let out = cgmv(dir.path(), &["simulate", "--type", "II", "--b", "0.3,-0.2", "--steps", "6", "--every"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    validate_csv(&text, &["t", "x", "y", "P"]).unwrap();
    for t in 0..=6 {
        let total: f64 = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').collect::<Vec<_>>())
            .filter(|r| r[0] == t.to_string())
            .map(|r| r[3].parse::<f64>().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-10, "t={t}: {total}");
    }
}

#[test]
fn spectrum_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = cgmv(dir.path(), &["spectrum", "--seq", "null-even:0.5,0", "--grid", "512", "--out", "m.json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    validate_measure_json(&v).unwrap();
    assert_eq!(v["weight"].as_array().unwrap().len(), 512);
    assert_eq!(v["atoms"].as_array().unwrap().len(), 2);
    assert!((v["total"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let out = cgmv(dir.path(), &["spectrum", "--seq", "null-odd:0.3,0.3", "--grid", "512", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(validate_csv(&text, &["kind", "theta", "value"]).unwrap(), 512 + 1 + 1);
    assert!(text.lines().any(|l| l.starts_with("atom,-0.3046")));
}

#[test]
fn dump_polys_lists_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let out = cgmv(dir.path(), &["spectrum", "--seq", "zero", "--dump-polys", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    validate_csv(&text, &["kind", "j", "exp", "re", "im"]).unwrap();
    assert!(text.contains("first,1,-1,1.0,0.0"));
    assert!(text.contains("second,2,1,1.0,0.0"));
}

#[test]
fn limit_measure_and_localization_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = cgmv(dir.path(), &["limit-measure", "--type", "I", "--a", "0.5,0", "--range", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(validate_csv(&text, &["x", "y", "mass"]).unwrap(), 9);
    assert!(text.contains("0,0,0.833333333333333"));

    let out = cgmv(dir.path(), &["limit-measure", "--type", "II", "--b", "0.5,0", "--range", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(validate_csv(&text, &["x", "y", "parity", "mass"]).unwrap(), 8);

    let out = cgmv(dir.path(), &["localization", "--type", "II", "--raster", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    validate_csv(&text, &["x", "y", "paper_region", "mass_criterion"]).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("raster points disagree"));
    assert!(stderr.lines().any(|l| l.starts_with("disagree ")));
}

#[test]
fn verify_prints_table_and_exits_with_numeric_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = cgmv(dir.path(), &["verify", "--correspondence", "--alpha", "0.5,0", "--dim", "16"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains('/')).count(), 17);
    assert!(text.contains("best\t"));
    // The folded walk does not match any convention for this coin.
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("correspondence residual"));

    let out = cgmv(dir.path(), &["verify", "--alpha", "0.5,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "command=simulate\ntype=I\nalpha=0,0\nsteps=2\nfoo=1\n").unwrap();
    assert_eq!(cgmv(dir.path(), &["run", "bad.cfg"]).status.code(), Some(2));
    assert_eq!(cgmv(dir.path(), &["run", "missing.cfg"]).status.code(), Some(2));
    assert_eq!(cgmv(dir.path(), &["spectrum", "--seq", "odd:1"]).status.code(), Some(2));
    assert_eq!(cgmv(dir.path(), &["simulate", "--type", "I", "--steps", "2"]).status.code(), Some(2));
    assert_eq!(cgmv(dir.path(), &["simulate", "--type", "III", "--alpha", "0,0", "--steps", "2"]).status.code(), Some(2));
}

#[test]
fn numeric_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = cgmv(dir.path(), &["limit-measure", "--type", "II", "--b", "1.5,0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = cgmv(dir.path(), &["verify", "--correspondence", "--alpha", "0.2,0.4", "--dim", "16"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn run_config_writes_manifest_with_seed() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.cfg"), "command=spectrum\nseq=const:0.4,0.2\ngrid=512\nseed=11\noutput=s.json\n").unwrap();
    let out = cgmv(dir.path(), &["run", "s.cfg"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["run_config"]["seed"], 11);
    assert_eq!(m["config"]["spectrum"]["seq"], "const:0.4,0.2");
    assert_eq!(m["conventions"]["weight_method"], "boundary");
}

#[test]
fn compare_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["compare", "--type", "II", "--b", "0,-0.5", "--steps", "64", "--out", "r.json"];
    for d in [&a, &b] {
        let out = cgmv(d.path(), &args);
        assert!(out.status.success());
        assert!(String::from_utf8(out.stderr).unwrap().contains("predicates disagree"));
    }
    let read = |d: &tempfile::TempDir, f: &str| fs::read_to_string(d.path().join(f)).unwrap();
    assert_eq!(read(&a, "r.json"), read(&b, "r.json"));
    assert_eq!(strip_timestamp(&read(&a, "r.json.manifest.json")).unwrap(), strip_timestamp(&read(&b, "r.json.manifest.json")).unwrap());
    let r: Value = serde_json::from_str(&read(&a, "r.json")).unwrap();
    assert_eq!(r["predicates"]["agree"], false);
    assert_eq!(r["spectrum"]["atoms"].as_array().unwrap().len(), 2);
}

#[test]
fn thread_count_does_not_change_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_cgmv"))
            .env("CGMV_THREADS", threads)
            .args(["spectrum", "--seq", "null-odd:0.3,0.3", "--grid", "512"])
            .current_dir(dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(run("1").stdout, run("4").stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn plot_data_is_whitespace_separated() {
    let dir = tempfile::tempdir().unwrap();
    let out = cgmv(dir.path(), &["spectrum", "--seq", "zero", "--grid", "512", "--emit-plot-data", "w.dat", "--out", "m.json"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("w.dat")).unwrap();
    assert!(text.starts_with("# theta w\n"));
    assert_eq!(text.lines().nth(1).unwrap().split(' ').count(), 2);
}
