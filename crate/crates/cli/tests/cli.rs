use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn heisenberg(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heisenberg"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = heisenberg(&["table", "--d", "2..6"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("constants.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "d,delta_star,kappa_d");
    assert_eq!(lines[1], "2,2.37340e-1,5.21337e0");
    let j = read_json(&dir.path().join("constants.json"));
    assert_eq!(j["header"]["schema_version"], 1);
    assert_eq!(j["command"], "table");
}

#[test]
fn constants_k2() {
    let dir = tempfile::tempdir().unwrap();
    let o = heisenberg(&["constants", "--d", "2", "--delta", "0.23734"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("K_d=5.21337"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(heisenberg(&["table", "--d", "0"], dir.path()).status.code(), Some(2));
    assert_eq!(heisenberg(&["resolvent", "--lambda", "nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(heisenberg(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(heisenberg(&["constants", "--delta", "-1"], dir.path()).status.code(), Some(2));
}

#[test]
fn resolvent_uses_default_lambda_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = heisenberg(&["resolvent", "--members", "1", "--quad", "fast", "--delta", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let j = read_json(&dir.path().join("verdicts.json"));
    assert_eq!(j["results"][0]["lambdas"].as_array().unwrap().len(), 12);
    assert_eq!(j["results"][0]["all_pass"], true);
    let ids = read_json(&dir.path().join("identities.json"));
    assert_eq!(ids["results"][0]["all_hold"], true);
}

#[test]
fn reruns_are_identical_apart_from_header() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["resolvent", "--members", "2", "--quad", "fast", "--lambda", "1+0.5i", "--lambda", "-1+i", "--seed", "3"];
    heisenberg(&args, a.path());
    heisenberg(&args, b.path());
    for name in ["verdicts.json", "identities.json"] {
        let (mut x, mut y) = (read_json(&a.path().join(name)), read_json(&b.path().join(name)));
        x.as_object_mut().unwrap().remove("header");
        y.as_object_mut().unwrap().remove("header");
        assert_eq!(x, y, "{name}");
    }
    let csv = |d: &Path| std::fs::read(d.join("verdicts.csv")).unwrap();
    assert_eq!(csv(a.path()), csv(b.path()));
}

#[test]
fn source_date_epoch_pins_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_heisenberg"))
        .args(["table", "--format", "json", "--out"])
        .arg(dir.path())
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap();
    assert!(o.status.success());
    let j = read_json(&dir.path().join("constants.json"));
    assert_eq!(j["header"]["generated_at_unix"], 1700000000u64);
}

#[test]
fn batch_file() {
    let dir = tempfile::tempdir().unwrap();
    let batch = dir.path().join("batch.json");
    std::fs::write(
        &batch,
        r#"{"d": 2, "seed": 0, "quad": "fast", "entries": [
            {"field": {"gaussian": {"a": 1.0, "b": 1.0}}, "lambda1": 1.0, "lambda2": 0.5, "delta": 1.0, "theorem": "thm1"}
        ]}"#,
    )
    .unwrap();
    let o = heisenberg(&["resolvent", "--batch", batch.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(read_json(&dir.path().join("verdicts.json"))["results"]["all_pass"].as_bool().unwrap());
    std::fs::write(&batch, "{not json").unwrap();
    assert_eq!(heisenberg(&["resolvent", "--batch", batch.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn potential_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = heisenberg(&["potential-check", "--potential", "inv-sq:0.1", "--potential", "inv-sq:0.2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let j = read_json(&dir.path().join("potentials.json"));
    let r = j["results"].as_array().unwrap();
    assert_eq!(r.len(), 2);
    assert_eq!(r[0]["positive_potential"]["hypothesis_met"], true);
    assert_eq!(r[1]["positive_potential"]["hypothesis_met"], false);
    assert_eq!(r[0]["nonnegative"], true);
}

#[test]
fn format_selects_outputs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    heisenberg(&["table", "--format", "json"], a.path());
    heisenberg(&["table", "--format", "csv"], b.path());
    assert!(a.path().join("constants.json").exists() && !a.path().join("constants.csv").exists());
    assert!(b.path().join("constants.csv").exists() && !b.path().join("constants.json").exists());
}
