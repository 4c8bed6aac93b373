use std::fs;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_rvlevy");

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

const MODEL: &str = r#""model": {"intensity": 1.0, "alpha": 1.5, "spectral": [{"dir": [1.0], "w": 1.0}], "diffusion": [[0.3]]}"#;

fn config(kind: &str, extra: &str) -> String {
    format!(
        r#"{{"experiment": "{kind}", {MODEL}, "integrand": {{"kind": "constant", "value": [1.0]}},
            "levels": [2.0, 5.0], "n": 3000, "grid_size": 32, "seed": 1{extra}}}"#
    )
}

fn run(args: &[&str], env_seed: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("RVLEVY_SEED");
    if let Some(s) = env_seed {
        cmd.env("RVLEVY_SEED", s);
    }
    cmd.output().unwrap()
}

#[test]
fn validate_reports_status_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), "good.json", &config("tails", ""));
    let out = run(&["validate", good.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));

    let bad = write_config(dir.path(), "bad.json", &config("lemma-checks", r#", "beta": 0.4"#).replace("[2.0, 5.0]", "[]"));
    let out = run(&["validate", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("beta must lie in (1/2, 1)"), "{err}");
    assert!(err.contains("levels must be nonempty"), "{err}");

    let broken = write_config(dir.path(), "broken.json", "{\n \"experiment\": ");
    let out = run(&["validate", broken.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));

    let out = run(&["run", dir.path().join("missing.json").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn every_experiment_kind_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("tails", "", "tails.csv"),
        ("tail-equivalence", "", "tail_equivalence.csv"),
        ("breiman", r#", "multiplier": {"law": "constant", "value": 2.0}"#, "breiman.csv"),
        ("one-big-jump", r#", "epsilon": 0.1, "refinement": 2"#, "one_big_jump.csv"),
        ("lemma-checks", r#", "n_values": [100, 1000]"#, "multiple_jumps.csv"),
        ("paths", r#", "paths": 2"#, "integral_1.csv"),
    ];
    for (kind, extra, file) in cases {
        let cfg = write_config(dir.path(), &format!("{kind}.json"), &config(kind, extra));
        let out_dir = dir.path().join(kind);
        let out = run(&["run", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(), "--threads", "1"], None);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        let text = fs::read_to_string(out_dir.join(file)).unwrap();
        assert!(text.starts_with("# config_hash="), "{kind}");
        let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["seed"], 1);
        assert!(manifest["files"].as_array().unwrap().iter().any(|f| f == file));
    }
}

#[test]
fn runs_are_reproducible_and_seed_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "paths.json", &config("paths", ""));
    let cfg = cfg.to_str().unwrap();
    let dump = |name: &str, extra: &[&str], env: Option<&str>| {
        let out_dir = dir.path().join(name);
        let mut args = vec!["paths", cfg, "--out-dir", out_dir.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(run(&args, env).status.code(), Some(0));
        fs::read_to_string(out_dir.join("levy_0.csv")).unwrap()
    };
    let a = dump("a", &[], None);
    let b = dump("b", &["--threads", "1"], None);
    assert_eq!(a, b);
    let env = dump("c", &[], Some("99"));
    let flag = dump("d", &["--seed", "99"], Some("5"));
    assert_ne!(a, env);
    assert_eq!(env, flag);

    // the tails estimate file is byte-identical across runs
    let tails = write_config(dir.path(), "tails.json", &config("tails", ""));
    let read = |name: &str| {
        let out_dir = dir.path().join(name);
        run(&["run", tails.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()], None);
        fs::read(out_dir.join("tails.csv")).unwrap()
    };
    assert_eq!(read("t1"), read("t2"));
}

#[test]
fn json_output_carries_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let body = config("tails", &format!(r#", "output": {{"dir": "{}", "format": "json"}}"#, out_dir.display()));
    let cfg = write_config(dir.path(), "tails.json", &body);
    assert_eq!(run(&["run", cfg.to_str().unwrap()], None).status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("tails.json")).unwrap()).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(v["config_hash"], manifest["config_hash"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}
