use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sofic_core::{invalidating_mutations, Certificate};

fn sofic(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sofic")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const CYCLIC_JOB: &str = r#"{
  "command": "approx",
  "action": {"kind": "coset", "rank": 2, "subgroup": ["a"]},
  "F": ["a", "b"],
  "E": ["1", "b"],
  "epsilon": "1/10"
}"#;

#[test]
fn approx_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("job.json"), CYCLIC_JOB).unwrap();
    let out = sofic(&["approx", "--config", "job.json", "--out", "cert.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("|A|: 2"));
    assert!(text.contains("|B|: 2"));
    assert!(text.contains("separator index: 2"));
    assert!(text.contains("epsilon_achieved: 0"));

    let verified = sofic(&["verify", "cert.json"], dir.path());
    assert_eq!(verified.status.code(), Some(0));
    assert!(stdout(&verified).starts_with("verdict: accept"));

    let json = sofic(&["verify", "cert.json", "--json"], dir.path());
    let report: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(report["verdict"], "accept");
}

#[test]
fn identical_jobs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let job = r#"{"action": {"kind": "coset", "rank": 3, "subgroup": ["ab", "bc"]}, "F": ["a", "c"], "E": ["1", "c", "a"]}"#;
    fs::write(dir.path().join("job.json"), job).unwrap();
    for out in ["one.json", "two.json"] {
        assert_eq!(sofic(&["approx", "--config", "job.json", "--out", out], dir.path()).status.code(), Some(0));
    }
    assert_eq!(fs::read(dir.path().join("one.json")).unwrap(), fs::read(dir.path().join("two.json")).unwrap());
}

#[test]
fn without_out_the_certificate_goes_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("job.json"), r#"{"action": {"kind": "coset", "rank": 2}, "F": [], "E": []}"#).unwrap();
    let out = sofic(&["approx", "--config", "job.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("|A|: 1"));
    Certificate::from_json(&stdout(&out)).unwrap();
}

#[test]
fn mutated_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("job.json"), CYCLIC_JOB).unwrap();
    sofic(&["approx", "--config", "job.json", "--out", "cert.json"], dir.path());
    let cert = Certificate::from_json(&fs::read_to_string(dir.path().join("cert.json")).unwrap()).unwrap();
    let mutation = invalidating_mutations(&cert).unwrap().remove(0);
    fs::write(dir.path().join("bad.json"), mutation.certificate.to_json()).unwrap();
    let out = sofic(&["verify", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("verdict: reject ("));
}

#[test]
fn epsilon_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("job.json"), CYCLIC_JOB).unwrap();
    sofic(&["approx", "--config", "job.json", "--out", "cert.json"], dir.path());
    let out = sofic(&["verify", "cert.json", "--epsilon", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("epsilon: 0"));
    assert_eq!(sofic(&["verify", "cert.json", "--epsilon", "0.1"], dir.path()).status.code(), Some(2));
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = sofic(&["verify", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    fs::write(dir.path().join("garbage.json"), "{\"action\": 3}").unwrap();
    let out = sofic(&["verify", "garbage.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed action"), "{}", stderr(&out));

    fs::write(dir.path().join("float.json"), r#"{"action": {"kind": "coset", "rank": 2}, "epsilon": 0.5}"#).unwrap();
    assert_eq!(sofic(&["approx", "--config", "float.json"], dir.path()).status.code(), Some(2));

    fs::write(dir.path().join("caps.json"), r#"{"action": {"kind": "coset", "rank": 2}, "caps": {"core": 0}}"#).unwrap();
    let out = sofic(&["approx", "--config", "caps.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("caps.core"));

    fs::write(dir.path().join("wrong.json"), r#"{"command": "verify", "action": {"kind": "coset", "rank": 2}}"#).unwrap();
    assert_eq!(sofic(&["approx", "--config", "wrong.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn pipeline_errors_carry_stage_tags() {
    let dir = tempfile::tempdir().unwrap();
    let job = r#"{"action": {"kind": "coset", "rank": 2, "subgroup": ["a"]}, "F": ["a"], "E": ["1", "a"]}"#;
    fs::write(dir.path().join("job.json"), job).unwrap();
    let out = sofic(&["approx", "--config", "job.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("[parse] duplicate point"), "{}", stderr(&out));
}

#[test]
fn subgroup_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&sofic(&["subgroup", "aa", "b"], dir.path()));
    assert!(out.contains("vertices: 2"));
    assert!(out.contains("  0 -a-> 1\n  0 -b-> 0\n  1 -a-> 0\n"));
    assert!(out.contains("finite index: false"));

    let out = stdout(&sofic(&["subgroup", "--avoid", "a"], dir.path()));
    assert!(out.contains("separator index: 2"));
    assert!(out.contains("a -> coset 1"));

    let out = sofic(&["subgroup", "a", "--avoid", "a"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("inseparable"));
}

#[test]
fn conj_demo_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = sofic(&["conj-demo", "-F", "a,b", "-E", "1,a,b,baB", "--out", "conj.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("conjugation verdict: accept"));
    assert!(text.contains("diagonal phi agrees: true"));
    assert_eq!(sofic(&["verify", "conj.json"], dir.path()).status.code(), Some(0));

    let single = sofic(&["conj-demo", "-F", "a", "-E", "ab"], dir.path());
    assert_eq!(single.status.code(), Some(0));

    let dup = sofic(&["conj-demo", "-F", "a", "-E", "a,a"], dir.path());
    assert_eq!(dup.status.code(), Some(2));
}

#[test]
fn fuzz_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let out = sofic(&["fuzz", "--seed", "1", "--cases", "20"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("kill-rate 20/20"), "{text}");
    assert!(text.contains("sanity check failures: 0"));
    assert_eq!(text, stdout(&sofic(&["fuzz", "--seed", "1", "--cases", "20"], dir.path())));

    let empty = sofic(&["fuzz", "--cases", "0"], dir.path());
    assert_eq!(stdout(&empty), "cases: 0\n");
}
