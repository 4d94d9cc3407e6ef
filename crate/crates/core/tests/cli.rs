use std::io::Write;
use std::process::Command;

use cubic_pfaffian::cli::{run, EXIT_FAILED, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cubic-pfaffian").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s.trim()).unwrap_or_else(|e| panic!("bad json ({e}): {s}"))
}

fn temp_with(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn represent_fermat() {
    let (code, out, _) = call(&["represent", "--cubic", "x^3 + y^3 + z^3 + t^3"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["branch"], "irreducible");
    assert_eq!(v["certificate"]["pass"], true);
    assert_eq!(v["matrices"].as_array().unwrap().len(), 4);
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn represent_is_deterministic() {
    let a = call(&["represent", "--cubic", "x*y*z + t^3 - y^3", "--seed", "3"]);
    let b = call(&["represent", "--cubic", "x*y*z + t^3 - y^3", "--seed", "3"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
}

#[test]
fn represent_reports_plane_split() {
    let (code, out, _) = call(&["represent", "--cubic", "z*(x^2 + t*z)"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["branch"], "plane_split");
    assert_eq!(v["certificate"]["pass"], true);
}

#[test]
fn represent_rejects_bad_input() {
    for bad in ["x^2", "x^3 + w^3", "0", "x^3 +"] {
        let (code, out, err) = call(&["represent", "--cubic", bad]);
        assert_eq!(code, EXIT_INPUT, "{bad}");
        assert!(out.is_empty());
        assert!(err.starts_with("error:"), "{err}");
    }
}

#[test]
fn represent_text_and_timings() {
    let (code, out, _) = call(&["--format", "text", "represent", "--cubic", "x^3 + y^3 + z^3 + t^3", "--timings"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("certificate: pass"));
    assert!(out.contains("A3 ="));
    assert!(out.contains("time "));
}

#[test]
fn theta_file_request() {
    let mut theta = vec!["[0, 0]"; 20];
    // slots 1..4 are x^3, y^3, z^3, t^3
    for s in 0..4 {
        theta[s] = "[1, 0]";
    }
    let f = temp_with(&format!(r#"{{"cubic": {{"theta": [{}]}}, "seed": 5}}"#, theta.join(", ")));
    let (code, out, _) = call(&["represent", "--theta-file", f.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["certificate"]["pass"], true);
}

#[test]
fn batch_with_summary() {
    let f = temp_with(
        "{\"cubic\": \"x^3 + y^3 + z^3 + t^3\"}\n# comment\n\n{\"cubic\": \"x^2\"}\n{\"cubic\": \"y*(x^2 + z*t)\"}\n",
    );
    let (code, out, _) = call(&["represent", "--batch", f.path().to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(code, EXIT_INPUT);
    let lines: Vec<Value> = out.lines().map(json).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["certificate"]["pass"], true);
    assert_eq!(lines[1]["index"], 1);
    assert_eq!(lines[1]["exit_code"], EXIT_INPUT);
    assert_eq!(lines[2]["branch"], "plane_split");
    let s = &lines[3]["summary"];
    assert_eq!((s["total"].as_u64(), s["passed"].as_u64(), s["input_errors"].as_u64()), (Some(3), Some(2), Some(1)));
}

#[test]
fn verify_round_trip() {
    let cubic = "x^3 + y^3 + z^3 + t^3 + x*y*z";
    let (code, out, _) = call(&["represent", "--cubic", cubic]);
    assert_eq!(code, EXIT_OK);
    let f = temp_with(&out);
    let path = f.path().to_str().unwrap();
    let (code, out, _) = call(&["verify", "--matrices", path, "--cubic", cubic]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["certificate"]["pass"], true);

    // the same matrices do not represent a different cubic
    let (code, out, _) = call(&["verify", "--matrices", path, "--cubic", "x^3 + y^3 + z^3 + t^3 + 2*x*y*z"]);
    assert_eq!(code, EXIT_FAILED);
    assert_eq!(json(&out)["certificate"]["pass"], false);
}

#[test]
fn verify_rejects_perturbed_entry() {
    let cubic = "x^3 + y^3 + z^3 + t^3";
    let (_, out, _) = call(&["represent", "--cubic", cubic]);
    let mut v = json(&out);
    let entry = &mut v["matrices"][0][0][1][0];
    let old: f64 = entry.as_str().unwrap().parse().unwrap();
    *entry = Value::String(format!("{}", old + 1e-3));
    let entry = &mut v["matrices"][0][1][0][0];
    let old: f64 = entry.as_str().unwrap().parse().unwrap();
    *entry = Value::String(format!("{}", old - 1e-3));
    let f = temp_with(&v.to_string());
    let (code, _, _) = call(&["verify", "--matrices", f.path().to_str().unwrap(), "--cubic", cubic]);
    assert_eq!(code, EXIT_FAILED);
}

#[test]
fn verify_input_errors() {
    let (code, _, err) = call(&["verify", "--matrices", "/nonexistent/m.json", "--cubic", "x^3"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cannot read"));

    // a 6x6 matrix with a single non-skew entry
    let m = |bad: bool| {
        let rows: Vec<String> = (0..6)
            .map(|i| {
                let cells: Vec<&str> = (0..6).map(|j| if bad && i == 0 && j == 1 { "[1, 0]" } else { "[0, 0]" }).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    };
    let f = temp_with(&format!("{{\"matrices\": [{}, {}, {}, {}]}}", m(true), m(false), m(false), m(false)));
    let (code, _, err) = call(&["verify", "--matrices", f.path().to_str().unwrap(), "--cubic", "x^3"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("skew"), "{err}");

    let f = temp_with("{\"matrices\": []}");
    let (code, _, _) = call(&["verify", "--matrices", f.path().to_str().unwrap(), "--cubic", "x^3"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn canon_reports_the_section() {
    let (code, out, _) = call(&["canon", "--cubic", "x^3 + y^3 + z^3 + t^3"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["slice"], "x^3 + z^3 + t^3");
    assert!(v["lam3"].is_array());

    let (code, out, _) = call(&["canon", "--cubic", "x*t*z + y^3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["lines"].as_array().unwrap().len(), 3);

    let (code, out, _) = call(&["--format", "text", "canon", "--cubic", "y*(x^2 + z*t)"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("identically zero"));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(call(&["represent"]).0, EXIT_INPUT);
    assert_eq!(call(&["represent", "--cubic", "x^3", "--batch", "b.jsonl"]).0, EXIT_INPUT);
    assert_eq!(call(&["--precision-bits", "32", "canon", "--cubic", "x^3"]).0, EXIT_INPUT);
    assert_eq!(call(&["--precision-bits", "9000", "canon", "--cubic", "x^3"]).0, EXIT_INPUT);
    assert_eq!(call(&["--max-rotations", "0", "canon", "--cubic", "x^3"]).0, EXIT_INPUT);
    assert_eq!(call(&["frobnicate"]).0, EXIT_INPUT);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["represent", "verify", "canon"] {
        assert!(out.contains(sub));
    }
}

#[test]
fn binary_forwards_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cubic-pfaffian");
    let ok = Command::new(bin).args(["canon", "--cubic", "x^3 + y^3 + z^3 + t^3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin).args(["represent", "--cubic", "x^2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    let env = Command::new(bin)
        .env("PFAFF_PRECISION_BITS", "10")
        .args(["canon", "--cubic", "x^3"])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(EXIT_INPUT));
}
