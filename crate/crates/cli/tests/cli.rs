use std::io::Write;
use std::process::{Command, Stdio};

use proptest::prelude::*;
use serde_json::Value;

use polyzeta_cli::{run, IntegralSpec, JobSpec, Mode, SeriesSpec, ZSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyzeta"))
}

fn run_stdin(job: &str, extra: &[&str]) -> (i32, String) {
    let mut child = bin()
        .arg("-")
        .args(extra)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(job.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let mut text = String::from_utf8_lossy(&out.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&out.stderr));
    (out.status.code().unwrap(), text)
}

const HORRIBLE: &str = r#"{
  "mode": "verify",
  "series": {"numerator": "5*k2^2 - k1^2 - 4*k1*k2 - 3*k1 + 7*k2", "a": [4, 3], "n": [2, 3], "r": [0, 1]},
  "z": "one"
}"#;

#[test]
fn worked_example_json() {
    let (code, out) = run_stdin(HORRIBLE, &["--json"]);
    assert_eq!(code, 0, "{out}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["mzv"]["constant"], "-153060027667/1289945088");
    assert_eq!(doc["verify"]["pass"], true);
    let diff: f64 = doc["verify"]["absdiff"].as_str().unwrap().parse().unwrap();
    assert!(diff < 1e-8);
    assert_eq!(doc["diagnostics"]["table"][0]["D"], 10);
}

#[test]
fn exit_codes() {
    let divergent = r#"{"mode":"decompose-at-one","series":{"numerator":"1","a":[1,1],"n":[0,0]},"z":"one"}"#;
    let (code, out) = run_stdin(divergent, &[]);
    assert_eq!(code, 2);
    assert!(out.contains("D_1 = -1"), "{out}");

    // k^-1 log k tail: 1e-8 is out of reach of direct summation, so the check fails
    let slow = r#"{"mode":"verify","series":{"numerator":"1","a":[2,1],"n":[0,0]},"z":"one","cutoff":2000}"#;
    let (code, _) = run_stdin(slow, &[]);
    assert_eq!(code, 3);

    let (code, _) = run_stdin("{not json", &[]);
    assert_eq!(code, 1);
}

#[test]
fn flags_without_job_file() {
    let out = bin()
        .args(["--numerator", "1", "--a", "2,1", "--n", "0,0", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let terms = doc["mzv"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);

    let out = bin()
        .args(["--numerator", "k1", "--a", "2", "--n", "1", "--generic-z", "--z", "3/2", "--verify", "--certificate"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("PASS") && text.contains("certificate"));
}

#[test]
fn integral_mode() {
    let job = JobSpec {
        mode: Mode::FromIntegral,
        series: None,
        integral: Some(IntegralSpec { dim: 3, r: vec![0, 0], s: vec![0, 0], t: vec![0, 0], d: vec![2, 3] }),
        z: ZSpec::one(),
        precision: 128,
        cutoff: 20000,
        emit_certificate: false,
        verify: false,
        tolerance: 1e-8,
    };
    let r = run(&job).unwrap();
    assert_eq!(r.document["mzv"]["text"], "zeta(2,1) + zeta(3)");

    let job = JobSpec { z: ZSpec::Point(vec!["2".into()]), verify: true, ..job };
    let r = run(&job).unwrap();
    assert_eq!(r.verified, Some(true));
    let q = &r.document["quadrature"];
    let v: f64 = r.document["value"].as_str().unwrap().parse().unwrap();
    assert!((q["value"].as_f64().unwrap() - v).abs() < 1e-6);
}

#[test]
fn output_is_stable() {
    let a = run_stdin(HORRIBLE, &["--json"]).1;
    let b = run_stdin(HORRIBLE, &["--json"]).1;
    assert_eq!(a, b);
}

fn arb_job() -> impl Strategy<Value = JobSpec> {
    (1usize..=3, any::<bool>(), any::<bool>(), 32u32..512, 2usize..100_000).prop_flat_map(
        |(p, cert, verify, precision, cutoff)| {
            (
                proptest::collection::vec(1u32..6, p),
                proptest::collection::vec(0u32..3, p),
                proptest::collection::vec(0u32..3, p),
                proptest::collection::vec(-5i32..6, 1..4),
            )
                .prop_map(move |(a, n, r, coeffs)| {
                    let numerator = coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| format!("({c})*k{}", 1 + i % p))
                        .collect::<Vec<_>>()
                        .join(" + ");
                    JobSpec {
                        mode: Mode::DecomposeAtOne,
                        series: Some(SeriesSpec { numerator, a, n, r }),
                        integral: None,
                        z: ZSpec::one(),
                        precision,
                        cutoff,
                        emit_certificate: cert,
                        verify,
                        tolerance: 1e-8,
                    }
                })
        },
    )
}

proptest! {
    #[test]
    fn job_round_trip(job in arb_job()) {
        let text = job.to_json();
        let back = JobSpec::from_json(&text).unwrap();
        prop_assert_eq!(&back, &job);
        prop_assert_eq!(back.to_json(), text);
    }
}
