use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cts() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cts"));
    c.env_remove("CTS_OUT_DIR");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.json");
    fs::write(&path, body).unwrap();
    path
}

fn small_config(dir: &Path) -> PathBuf {
    write_config(
        dir,
        &format!(
            r#"{{
                "instances": ["{}", {{"generate": {{"kind": "kcenter", "size": 5, "k": 2, "seed": 1}}}}],
                "policies": ["cts_beta", "cts_gaussian", "cucb"],
                "horizon": 150,
                "seeds": "0..3",
                "checks": {{"smoothness_trials": 50, "reduction_trials": 10, "trigger_steps": 1000}}
            }}"#,
            fixture("pmc_5x5.json").display()
        ),
    )
}

fn read_tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

#[test]
fn help_lists_subcommands() {
    let out = cts().arg("--help").output().unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["run", "verify", "gen", "solve"] {
        assert!(text.contains(sub), "missing {sub} in help");
    }
}

#[test]
fn outputs_do_not_depend_on_jobs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let mut trees = Vec::new();
    for (jobs, name) in [("1", "a"), ("2", "b"), ("1", "c")] {
        let out = cts()
            .args(["run", "--config"])
            .arg(&cfg)
            .args(["--jobs", jobs, "--out"])
            .arg(tmp.path().join(name))
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        trees.push(read_tree(&tmp.path().join(name)));
    }
    assert!(trees[0].contains_key(Path::new("ledger.csv")));
    assert!(trees[0].contains_key(Path::new("checks.csv")));
    assert_eq!(trees[0], trees[1]);
    assert_eq!(trees[0], trees[2]);
}

#[test]
fn flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("o");
    let out = cts()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--policy", "uniform_random", "--horizon", "7", "--seeds", "4..=5"])
        .args(["--checkers", "off", "--trace-posteriors", "--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let ledger = fs::read_to_string(out_dir.join("ledger.csv")).unwrap();
    // 2 instances x 1 policy x 2 seeds x 7 rounds
    assert_eq!(ledger.lines().count(), 1 + 2 * 2 * 7);
    assert!(ledger.lines().skip(1).all(|l| l.contains(",uniform_random,")));
    assert!(!out_dir.join("checks.csv").exists());
    assert!(out_dir.join("posteriors.csv").exists());
}

#[test]
fn out_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let env_dir = tmp.path().join("from_env");
    let out = cts()
        .env("CTS_OUT_DIR", &env_dir)
        .args(["run", "--checkers", "off", "--horizon", "5", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(env_dir.join("ledger.csv").exists());
}

#[test]
fn verify_bundled_fixture_passes() {
    let out = cts().arg("verify").arg(fixture("pmc_5x5.json")).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn zero_smoothness_constants_fail_verification() {
    let out = cts()
        .arg("verify")
        .arg(fixture("pmc_5x5_zero_b.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().find(|l| l.contains("smoothness")).unwrap();
    assert!(line.ends_with("FAIL"), "{line}");
}

#[test]
fn triangle_violation_is_rejected() {
    let out = cts()
        .arg("verify")
        .arg(fixture("tsp_bad_triangle.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("triangle"));
}

#[test]
fn unknown_config_field_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"instances": [], "horizon": 5, "seeds": "0", "horizn": 3}"#,
    );
    let out = cts().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_instance_file_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"instances": ["nope.json"], "horizon": 5, "seeds": "0"}"#,
    );
    let out = cts().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn gen_then_solve() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = tmp.path().join("vc.json");
    let out = cts()
        .args(["gen", "vertex_cover", "--size", "6", "--seed", "2", "--out"])
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let out = cts().arg("solve").arg(&inst).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["action"]["type"], "cover");
    assert!(doc["reward"].as_f64().unwrap() <= 0.0);
}

#[test]
fn solve_with_mean_file() {
    let tmp = tempfile::tempdir().unwrap();
    let mu = tmp.path().join("mu.json");
    fs::write(&mu, "[0.9, 0.1, 0.1, 0.1, 0.8]").unwrap();
    let out = cts()
        .arg("solve")
        .arg(fixture("pmc_5x5.json"))
        .arg("--mu")
        .arg(&mu)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["action"]["value"], serde_json::json!([0, 4]));

    fs::write(&mu, "[0.5]").unwrap();
    let out = cts()
        .arg("solve")
        .arg(fixture("pmc_5x5.json"))
        .arg("--mu")
        .arg(&mu)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn bad_beta_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = cts()
        .args(["run", "--beta", "0.5", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}
