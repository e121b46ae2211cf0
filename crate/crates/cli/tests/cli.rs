use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const LAMBDA3: [&str; 10] = ["--variant", "hermitian", "--m", "0.5", "--alpha", "1", "--v1", "1", "--v2", "6"];

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_morse-dk"));
    c.env_remove("MORSE_DK_OUTPUT_DIR");
    c
}

fn run(args: &[&str], out: &Path) -> Output {
    bin()
        .args(args)
        .arg("--output-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(p: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/v1")
}

// resolves `$ref`s against the files in schema/v1
struct LocalSchemas;

impl jsonschema::Retrieve for LocalSchemas {
    fn retrieve(&self, uri: &jsonschema::Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.as_str().rsplit('/').next().unwrap_or_default();
        let text = std::fs::read_to_string(schema_dir().join(name))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn validate(schema_file: &str, instance: &Value) {
    let validator = jsonschema::options()
        .with_retriever(LocalSchemas)
        .build(&read_json(schema_dir().join(schema_file)))
        .unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

fn csv_rows(p: PathBuf) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(p).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_owned).collect()).collect()
}

#[test]
fn spectrum_pole_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["spectrum"];
    args.extend(LAMBDA3);
    args.extend(["--backend", "pole", "--convention", "rederived"]);
    let o = run(&args, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let rows = csv_rows(dir.path().join("spectrum.csv"));
    let got: Vec<(usize, f64, f64)> = rows
        .iter()
        .map(|r| (r[3].parse().unwrap(), r[4].parse().unwrap(), r[5].parse().unwrap()))
        .collect();
    assert_eq!(got, vec![(0, -6.25, 0.0), (1, -2.25, 0.0), (2, -0.25, 0.0)]);
    validate("spectrum_result.schema.json", &read_json(dir.path().join("spectrum.json")));
}

#[test]
fn spectrum_paper_literal_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["spectrum"];
    args.extend(LAMBDA3);
    args.extend(["--backend", "paper-literal"]);
    let o = run(&args, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(dir.path().join("spectrum.csv"));
    assert_eq!(rows.len(), 8);
    let e0: f64 = rows[0][4].parse().unwrap();
    assert!((e0 + 4.6691).abs() < 1e-4, "{e0}");
}

#[test]
fn csv_header_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["spectrum"];
    args.extend(LAMBDA3);
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("variant,backend,convention,n,re,im"));
}

#[test]
fn invalid_variant_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--variant", "morse", "--m", "1", "--alpha", "1", "--v1", "1", "--v2", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("variant"), "{err}");
}

#[test]
fn invalid_value_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--variant", "hermitian", "--m", "-1", "--alpha", "1", "--v1", "1", "--v2", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mass"));

    let o = run(&["spectrum", "--variant", "hermitian", "--m", "1", "--v1", "1", "--v2", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
}

#[test]
fn unknown_flag_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--wobble", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("from_file");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"variant":"hermitian","mass":0.5,"alpha":1,"V1":1,"V2":[4,0],"output_dir":{:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = bin()
        .args(["spectrum", "--config", cfg.to_str().unwrap(), "--v2", "6"])
        .env_remove("MORSE_DK_OUTPUT_DIR")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(csv_rows(out.join("spectrum.csv")).len(), 3);
}

#[test]
fn bad_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"variant":"hermitian","mass":0.5,"grid":{"points":10}}"#).unwrap();
    let o = run(&["verify", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid"));

    let o = run(&["verify", "--config", dir.path().join("missing.json").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("env_out");
    let mut args = vec!["spectrum"];
    args.extend(LAMBDA3);
    let o = bin().args(&args).env("MORSE_DK_OUTPUT_DIR", &target).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(target.join("spectrum.json").exists());
    assert!(target.join("spectrum.csv").exists());
}

#[test]
fn verify_lambda3_passes() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["verify"];
    args.extend(LAMBDA3);
    let o = run(&args, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(dir.path().join("verification_report.json"));
    validate("verification_report.schema.json", &r);
    let rows = r["per_level"].as_array().unwrap();
    for row in &rows[..3] {
        assert!(row["abs_gap_pole_vs_oracle"].as_f64().unwrap() < 1e-6);
    }
    assert_eq!(r["level_counts"]["paper_literal"], 8);
    assert_eq!(r["level_counts"]["oracle"], 3);
    assert_eq!(r["level_counts"]["pole_condition"], 3);
    // every row carries every key, with null for absence
    for row in rows {
        for key in ["E_paper_literal", "E_pole_condition", "E_oracle", "residual_paper", "residual_pole", "abs_gap_pole_vs_oracle"] {
            assert!(row.get(key).is_some(), "{key} missing");
        }
    }
    assert!(rows[7]["E_oracle"].is_null());
}

#[test]
fn verify_tolerance_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["verify"];
    args.extend(LAMBDA3);
    args.extend(["--abs-gap-tol", "1e-13"]);
    let o = run(&args, dir.path());
    assert_eq!(o.status.code(), Some(3));
    let r = read_json(dir.path().join("verification_report.json"));
    assert_eq!(r["summary"]["pole_rows_pass"], false);
}

#[test]
fn verify_pt_has_no_oracle_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--variant", "pt", "--m", "0.5", "--alpha", "1", "--v1", "1", "--v2", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = read_json(dir.path().join("verification_report.json"));
    validate("verification_report.schema.json", &r);
    assert!(r["level_counts"]["oracle"].is_null());
    assert!(r["metadata"]["refined_grid"].is_null());
    let rows = r["per_level"].as_array().unwrap();
    assert!(!rows.is_empty());
    for row in rows {
        assert!(row["E_oracle"].is_null());
        assert!(row["residual_paper"].is_number());
    }
    assert_eq!(r["pt_check"]["is_pt"], true);
}

#[test]
fn verify_complex_pole_rows_have_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--variant", "non-pt-b", "--m", "0.5", "--alpha", "1", "--v1", "1", "--v2", "2,6"], dir.path());
    let r = read_json(dir.path().join("verification_report.json"));
    validate("verification_report.schema.json", &r);
    let rows = r["per_level"].as_array().unwrap();
    assert!(rows.iter().any(|row| row["residual_pole"].is_number()));
    assert!(matches!(o.status.code(), Some(0) | Some(3)));
}

fn without_timestamp(mut v: Value) -> String {
    v["metadata"]["timestamp"] = Value::Null;
    serde_json::to_string(&v).unwrap()
}

#[test]
fn verify_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut args = vec!["verify"];
    args.extend(LAMBDA3);
    run(&args, a.path());
    let mut seq = vec!["--jobs", "1"];
    seq.extend(&args);
    run(&seq, b.path());
    let ra = std::fs::read_to_string(a.path().join("verification_report.json")).unwrap();
    let rb = std::fs::read_to_string(b.path().join("verification_report.json")).unwrap();
    let strip = |s: &str| -> String { s.lines().filter(|l| !l.contains("\"timestamp\"")).collect::<Vec<_>>().join("\n") };
    assert_eq!(strip(&ra), strip(&rb));
    assert_eq!(
        without_timestamp(serde_json::from_str(&ra).unwrap()),
        without_timestamp(serde_json::from_str(&rb).unwrap())
    );
}

#[test]
fn kernel_three_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["kernel", "--method", "closed,spectral,sliced", "--tau", "1", "--nu", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(dir.path().join("kernel.csv"));
    assert_eq!(rows.len(), 3);
    let re: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    for i in 0..3 {
        for j in 0..3 {
            assert!((re[i] - re[j]).abs() < 1e-6);
        }
    }
    let text = std::fs::read_to_string(dir.path().join("kernel.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("tau,u_a,u_b,re,im,method"));
}

#[test]
fn kernel_gap_over_tolerance_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["kernel", "--method", "closed,sliced", "--tau", "1", "--nu", "1", "--n-slices", "4", "--radial-points", "300"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn kernel_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["kernel", "--tau", "-1"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["kernel", "--method", "euler"], dir.path()).status.code(), Some(2));
}

#[test]
fn hille_hardy_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["hille-hardy", "--t", "0.3", "--x", "0.7", "--y", "1.1", "--a", "0.5", "--n", "60"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_path(dir.path().join("hille_hardy.csv")).unwrap();
    let headers = r.headers().unwrap().clone();
    let rec = r.records().next().unwrap().unwrap();
    let col = |name: &str| -> f64 { rec[headers.iter().position(|h| h == name).unwrap()].parse().unwrap() };
    assert!(col("reference_residual") < 1e-12);
    assert!(col("variant_deviation") > 0.0);
}

#[test]
fn hille_hardy_divergent_t_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["hille-hardy", "--t", "1.5"], dir.path()).status.code(), Some(2));
}

#[test]
fn pt_check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["pt-check", "--variant", "pt", "--v1", "1", "--v2", "2", "--alpha", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let printed: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(printed["is_pt"], true);
    assert!(printed["max_deviation"].as_f64().unwrap() < 1e-12);
    assert_eq!(read_json(dir.path().join("pt_check.json")), printed);

    let o = run(&["pt-check", "--variant", "hermitian", "--v1", "1", "--v2", "2", "--alpha", "1"], dir.path());
    let printed: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(printed["is_pt"], false);
}

#[test]
fn zero_jobs_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["--jobs", "0", "spectrum"];
    args.extend(LAMBDA3);
    assert_eq!(run(&args, dir.path()).status.code(), Some(2));
}
