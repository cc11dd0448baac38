use ipkit::cli::{run, Manifest, MANIFEST};
use ipkit::config::{parse_grid, parse_sites, RunConfig};
use ipkit::error::CliError;
use ipkit::records::{parse, AcceptRecord, CdfRecord, Format, MomentRecord, SampleRecord};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::process::Command;

fn ipkit(args: &[&str]) -> (i32, Vec<u8>, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("ipkit").chain(args.iter().copied()), &mut out, &mut err);
    (code, out, String::from_utf8(err).unwrap())
}

fn error_json(stderr: &str) -> Value {
    let line = stderr.lines().rev().find(|l| l.starts_with('{')).expect("error JSON on stderr");
    serde_json::from_str(line).unwrap()
}

#[test]
fn sample_is_deterministic() {
    let args = ["sample", "--model", "plancherel", "--theta", "0.5", "--n", "10", "--seed", "7"];
    let (c1, a, _) = ipkit(&args);
    let (c2, b, _) = ipkit(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let recs: Vec<SampleRecord> = parse(&a, Format::Json).unwrap();
    assert_eq!(recs.len(), 10);
    assert!(recs.iter().enumerate().all(|(i, r)| r.sample == i));
    let (_, other, _) = ipkit(&["sample", "--model", "plancherel", "--theta", "0.5", "--n", "10", "--seed", "8"]);
    assert_ne!(a, other);
}

#[test]
fn thread_count_does_not_change_output() {
    let base = ["sample", "--model", "plancherel", "--theta", "5", "--n", "64", "--seed", "3", "--format", "csv"];
    let (_, one, _) = ipkit(&[&base[..], &["--threads", "1"]].concat());
    let (_, four, _) = ipkit(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
    let plane = ["sample", "--model", "plane", "--a", "2", "--b", "2", "--q", "0.3", "--n", "20", "--seed", "5"];
    let (_, one, _) = ipkit(&[&plane[..], &["--threads", "1"]].concat());
    let (_, four, _) = ipkit(&[&plane[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn fredholm_cdf_is_monotone() {
    let (code, out, _) = ipkit(&["fredholm", "--kernel", "airy", "--s-grid", "-5:2:0.5", "--format", "csv"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out.clone()).unwrap();
    assert!(text.starts_with("s,value\n"));
    let recs: Vec<CdfRecord> = parse(&out, Format::Csv).unwrap();
    assert_eq!(recs.len(), 15);
    assert!(recs.windows(2).all(|w| w[1].value >= w[0].value));
    assert!(recs.iter().all(|r| (0.0..=1.0).contains(&r.value)));
    let (_, pain, _) = ipkit(&["fredholm", "--s-grid", "-2:0:1", "--method", "painleve", "--format", "csv"]);
    let pain: Vec<CdfRecord> = parse(&pain, Format::Csv).unwrap();
    for p in pain {
        let r = recs.iter().find(|r| r.s == p.s).unwrap();
        assert!((r.value - p.value).abs() < 1e-8);
    }
}

#[test]
fn first_moment_closed_form() {
    let (code, out, _) = ipkit(&["moments", "--k", "1", "--N", "1", "--q", "0.4", "--tau", "0.3"]);
    assert_eq!(code, 0);
    let recs: Vec<MomentRecord> = parse(&out, Format::Json).unwrap();
    assert!((recs[0].moment - (-0.18f64).exp()).abs() <= 1e-8);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert!(v[0].get("N").is_some());
}

#[test]
fn errors_are_json_with_stable_codes() {
    let (code, out, err) = ipkit(&["sample", "--model", "plancherel", "--theta", "0.5"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(error_json(&err)["error"]["code"], "validation");

    let (code, _, err) = ipkit(&["moments", "--N", "1", "--q", "1.5", "--tau", "0.3"]);
    assert_eq!(code, 2);
    assert_eq!(error_json(&err)["error"]["code"], "validation");

    let (code, _, err) = ipkit(&["sample", "--bogus", "1", "--seed", "1"]);
    assert_eq!(code, 2);
    assert_eq!(error_json(&err)["error"]["code"], "validation");

    let (code, _, _) = ipkit(&["kernel", "--kernel", "sine", "--phi", "4"]);
    assert_eq!(code, 2);

    assert_eq!(CliError::from(ipkit_core::Error::NonConvergence("x".into())).exit_code(), 3);
    let budget = CliError::from(ipkit_core::Error::Budget("x".into()));
    assert_eq!(budget.exit_code(), 4);
    let v: Value = serde_json::from_str(&budget.to_json()).unwrap();
    assert_eq!(v["error"]["code"], "budget-exceeded");
    assert_eq!(v["error"]["message"], "x");
    assert_eq!(CliError::Internal("x".into()).exit_code(), 5);
}

#[test]
fn manifest_replays_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out_str = out_dir.to_str().unwrap();
    let (code, stdout, _) =
        ipkit(&["lpp", "--rows", "6", "--cols", "4", "--replicas", "5", "--seed", "11", "--format", "csv", "--out", out_str]);
    assert_eq!(code, 0);
    let artifact = std::fs::read(out_dir.join("lpp.csv")).unwrap();
    assert_eq!(artifact, stdout);
    let manifest: Manifest = serde_json::from_slice(&std::fs::read(out_dir.join(MANIFEST)).unwrap()).unwrap();
    assert_eq!(manifest.config.seed, Some(11));
    assert_eq!(manifest.config.command, "lpp");
    assert_eq!(manifest.artifacts[0].bytes, artifact.len());
    let digest: String = Sha256::digest(&artifact).iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(manifest.artifacts[0].sha256, digest);

    let replay_dir = dir.path().join("replay");
    let manifest_path = out_dir.join(MANIFEST);
    let (code, again, _) =
        ipkit(&["lpp", "--config", manifest_path.to_str().unwrap(), "--out", replay_dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(again, stdout);
    let replayed: Manifest = serde_json::from_slice(&std::fs::read(replay_dir.join(MANIFEST)).unwrap()).unwrap();
    assert_eq!(replayed.artifacts[0].sha256, digest);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        command: "sample".into(),
        params: serde_json::from_str(r#"{"model":"plancherel","theta":2.0,"n":3}"#).unwrap(),
        seed: Some(1),
        ..RunConfig::default()
    };
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let (_, from_cfg, _) = ipkit(&["sample", "--config", p]);
    assert_eq!(parse::<SampleRecord>(&from_cfg, Format::Json).unwrap().len(), 3);
    let (_, overridden, _) = ipkit(&["sample", "--config", p, "--n", "5"]);
    let recs: Vec<SampleRecord> = parse(&overridden, Format::Json).unwrap();
    assert_eq!(recs.len(), 5);
    // the first replicas do not depend on how many were requested
    let first: Vec<SampleRecord> = parse(&from_cfg, Format::Json).unwrap();
    assert_eq!(recs[..3], first[..]);

    let (code, _, err) = ipkit(&["moments", "--config", p]);
    assert_eq!(code, 2);
    assert!(err.contains("not `moments`"));
    std::fs::write(&path, r#"{"command":"sample","sed":1}"#).unwrap();
    assert_eq!(ipkit(&["sample", "--config", p]).0, 2);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_ipkit"))
        .args(["bd", "--width", "8", "--steps", "100", "--seed", "2"])
        .env("IPKIT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(status.status.success());
    assert_eq!(std::fs::read(dir.path().join("bd.json")).unwrap(), status.stdout);
    assert!(dir.path().join(MANIFEST).exists());

    let flag_dir = dir.path().join("flag");
    let status = Command::new(env!("CARGO_BIN_EXE_ipkit"))
        .args(["bd", "--width", "8", "--steps", "100", "--seed", "2", "--out", flag_dir.to_str().unwrap()])
        .env("IPKIT_OUT_DIR", dir.path().join("env"))
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(flag_dir.join("bd.json").exists());
    assert!(!dir.path().join("env").exists());
}

#[test]
fn binary_reports_errors_on_stderr() {
    let out = Command::new(env!("CARGO_BIN_EXE_ipkit")).args(["qtasep", "--N", "2", "--q", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(out.stderr.trim_ascii()).unwrap();
    assert_eq!(v["error"]["code"], "validation");
}

#[test]
fn every_subcommand_runs() {
    let cases: [&[&str]; 9] = [
        &["sample", "--model", "permutation", "--size", "12", "--n", "3", "--seed", "1"],
        &["kernel", "--kernel", "plancherel", "--theta", "1.5", "--sites", "-2:2"],
        &["kernel", "--kernel", "sine", "--sites", "0,1,2"],
        &["kernel", "--kernel", "airy", "--points", "-1:1:1"],
        &["lpp", "--rows", "3", "--cols", "3", "--weights", "geometric", "--p", "0.4", "--seed", "1"],
        &["polymer", "--model", "loggamma", "--rows", "4", "--cols", "4", "--theta", "2", "--seed", "1"],
        &["polymer", "--model", "oy", "--N", "2", "--t", "1", "--paths", "500", "--seed", "1"],
        &["qtasep", "--N", "2", "--q", "0.5", "--tau", "0.5", "--replicas", "500", "--seed", "1"],
        &["bd", "--width", "32", "--sweeps", "1,2,4,8", "--seed", "1"],
    ];
    for args in cases {
        let (code, out, err) = ipkit(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        let v: Value = serde_json::from_slice(&out).unwrap();
        assert!(!v.as_array().unwrap().is_empty(), "{args:?}");
    }
    let (_, out, _) = ipkit(&["kernel", "--kernel", "sine", "--sites", "0,1"]);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert!((v[0]["k"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn accept_subset() {
    let (code, out, err) = ipkit(&["accept", "--only", "1,7", "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(err.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    let recs: Vec<AcceptRecord> = parse(&out, Format::Csv).unwrap();
    assert_eq!(recs.iter().map(|r| r.id).collect::<Vec<_>>(), [1, 7]);
    assert!(recs.iter().all(|r| r.passed));
    assert_eq!(ipkit(&["accept", "--only", "19"]).0, 2);
}

#[test]
fn help_and_version() {
    let (code, out, _) = ipkit(&["--help"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    for c in ["sample", "kernel", "fredholm", "moments", "lpp", "polymer", "qtasep", "bd", "accept"] {
        assert!(text.contains(c));
    }
    assert_eq!(ipkit(&["--version"]).0, 0);
}

#[test]
fn grid_and_site_parsing() {
    assert_eq!(parse_grid("-1:1:0.5").unwrap(), [-1.0, -0.5, 0.0, 0.5, 1.0]);
    assert!(parse_grid("1:0:0.5").is_err());
    assert!(parse_grid("0:1").is_err());
    assert_eq!(parse_sites("-2:1").unwrap(), [-2, -1, 0, 1]);
    assert_eq!(parse_sites("3, 5").unwrap(), [3, 5]);
    assert!(parse_sites("a:b").is_err());
}
