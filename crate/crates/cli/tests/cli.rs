use std::path::{Path, PathBuf};
use std::process::Command;

use hats_cli::{run, EXIT_DATA, EXIT_FAIL, EXIT_NO_INPUT, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE};
use serde_json::Value;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hats(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hats").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_k5minus_exhaustively() {
    let dir = TempDir::new().unwrap();
    let expr = file(&dir, "k5.hats", "k5minus\n");
    let o = hats(&["verify", s(&expr), "--jobs", "1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let report: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["mode"], "exhaustive");
    assert_eq!(report["checked"], 16464);
    assert_eq!(report["counterexample"], Value::Null);
    assert_eq!(report["min_correct"], 1);
}

#[test]
fn solve_losing_and_winning_documents() {
    let dir = TempDir::new().unwrap();
    let lose = file(
        &dir,
        "k2.json",
        r#"{"vertices":[{"name":"v0","hatness":2},{"name":"v1","hatness":3}],"edges":[["v0","v1"]]}"#,
    );
    let o = hats(&["solve", s(&lose)]);
    assert_eq!(o.code, EXIT_FAIL);
    let result: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(result["status"], "losing");

    let win = file(
        &dir,
        "k2w.json",
        r#"{"vertices":[{"name":"v0","hatness":2},{"name":"v1","hatness":2}],"edges":[["v0","v1"]]}"#,
    );
    let o = hats(&["solve", s(&win), "--budget", "1000"]);
    assert_eq!(o.code, EXIT_OK);
    let result: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(result["status"], "winning");
    assert_eq!(result["table"]["v0"].as_array().unwrap().len(), 2);

    let o = hats(&["solve", s(&win), "--budget", "0"]);
    assert_eq!(o.code, EXIT_UNKNOWN);
}

#[test]
fn info_planar14() {
    let dir = TempDir::new().unwrap();
    let expr = file(&dir, "p14.hats", "planar14");
    let o = hats(&["info", s(&expr)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("vertices: 209\n"));
    assert!(o.stdout.contains("min hatness: 14\n"));
    assert!(o.stdout.contains("hat guessing number at least: 14\n"));
    assert!(o.stdout.contains("embedding: planar=true"));
    assert!(o.stdout.contains("trap-lemma"));
}

#[test]
fn build_writes_document_and_dot() {
    let dir = TempDir::new().unwrap();
    let expr = file(&dir, "t.hats", "# three copies of 26666\ntrefoil\n");
    let json = dir.path().join("t.json");
    let dot = dir.path().join("t.dot");
    let o = hats(&["build", s(&expr), "--out", s(&json), "--dot", s(&dot)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 13);
    assert!(doc["rotation"].is_object());
    assert!(std::fs::read_to_string(&dot).unwrap().contains("[label=\"O:8\"]"));

    let o = hats(&["embed-check", s(&json)]);
    assert_eq!(o.code, EXIT_OK);
    let report: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["planar"], true);
    assert_eq!(report["outerplanar"], true);

    // the same expression builds to byte-identical output
    let again = hats(&["build", s(&expr)]);
    assert_eq!(again.stdout, std::fs::read_to_string(&json).unwrap());
}

#[test]
fn embed_check_rejects_nonplanar_rotation() {
    let dir = TempDir::new().unwrap();
    let names = ["a", "b", "c", "d", "e"];
    let mut edges = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            edges.push(format!("[\"{}\",\"{}\"]", names[i], names[j]));
        }
    }
    let rotation: Vec<String> = (0..5)
        .map(|i| {
            let ring: Vec<String> = (0..5).filter(|&j| j != i).map(|j| format!("\"{}\"", names[j])).collect();
            format!("\"{}\":[{}]", names[i], ring.join(","))
        })
        .collect();
    let vertices: Vec<String> = names.iter().map(|n| format!("{{\"name\":\"{n}\",\"hatness\":2}}")).collect();
    let text = format!(
        "{{\"vertices\":[{}],\"edges\":[{}],\"rotation\":{{{}}}}}",
        vertices.join(","),
        edges.join(","),
        rotation.join(",")
    );
    let k5 = file(&dir, "k5.json", &text);
    let o = hats(&["embed-check", s(&k5)]);
    assert_eq!(o.code, EXIT_FAIL);
    let report: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["planar"], false);

    let bare = file(
        &dir,
        "bare.json",
        r#"{"vertices":[{"name":"a","hatness":2}],"edges":[]}"#,
    );
    assert_eq!(hats(&["embed-check", s(&bare)]).code, EXIT_DATA);
}

#[test]
fn verify_sampled_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let expr = file(&dir, "t.hats", "trefoil");
    let a = hats(&["verify", s(&expr), "--sample", "20000", "--seed", "7", "--jobs", "1"]);
    let b = hats(&["verify", s(&expr), "--sample", "20000", "--seed", "7", "--jobs", "3"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(b.code, EXIT_OK);
    let (mut ra, mut rb): (Value, Value) = (
        serde_json::from_str(&a.stdout).unwrap(),
        serde_json::from_str(&b.stdout).unwrap(),
    );
    ra["seconds"] = Value::Null;
    rb["seconds"] = Value::Null;
    assert_eq!(ra, rb);
    assert_eq!(ra["mode"], "sampled");
    assert_eq!(ra["checked"], 20000);
}

#[test]
fn verify_refuses_games_without_strategy() {
    let dir = TempDir::new().unwrap();
    let lose = file(&dir, "l.hats", "clique[2,3]");
    let o = hats(&["verify", s(&lose)]);
    assert_eq!(o.code, EXIT_FAIL);
    assert!(o.stderr.contains("losing"));
    let big = file(&dir, "p.hats", "planar14");
    let o = hats(&["verify", s(&big)]);
    assert_eq!(o.code, EXIT_UNKNOWN);
    assert!(o.stderr.contains("--sample"));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(hats(&[]).code, EXIT_USAGE);
    assert_eq!(hats(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(hats(&["verify", "x", "--seed", "3"]).code, EXIT_USAGE);
    assert_eq!(hats(&["solve", "x", "--budget", "lots"]).code, EXIT_USAGE);
    let help = hats(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("embed-check"));

    assert_eq!(hats(&["info", "/nonexistent/expr"]).code, EXIT_NO_INPUT);
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.hats", "clique[]");
    let o = hats(&["info", s(&bad)]);
    assert_eq!(o.code, EXIT_DATA);
    assert!(o.stderr.contains("line 1, column 8"));
    let elab = file(&dir, "e.hats", "product(clique[2,3]@v0,\n clique[2,2]@v0)");
    let o = hats(&["build", s(&elab)]);
    assert_eq!(o.code, EXIT_DATA);
    assert!(o.stderr.contains("product requires winning factors"));
}

/// Exit codes agree with the verdict and report printed alongside them.
#[test]
fn exit_codes_match_reports() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("clique[2,2]", EXIT_OK),
        ("clique[3,3,3]", EXIT_OK),
        ("clique[2,3,7]", EXIT_FAIL),
        ("lower(clique[2,3,7]; v2=6)", EXIT_UNKNOWN),
        ("windmill(3,2)", EXIT_OK),
        ("game26666", EXIT_OK),
        ("lower(game26666; O=1)", EXIT_OK),
    ];
    for (i, (src, expected)) in cases.iter().enumerate() {
        let expr = file(&dir, &format!("c{i}.hats"), src);
        let info = hats(&["info", s(&expr)]);
        assert_eq!(info.code, *expected, "info {src}: {}", info.stderr);
        let verdict = info
            .stdout
            .lines()
            .find_map(|l| l.strip_prefix("verdict: "))
            .unwrap()
            .to_string();
        let from_verdict = match verdict.as_str() {
            "winning" => EXIT_OK,
            "losing" => EXIT_FAIL,
            _ => EXIT_UNKNOWN,
        };
        assert_eq!(info.code, from_verdict, "{src}");

        let v = hats(&["verify", s(&expr), "--jobs", "2"]);
        if verdict == "winning" {
            let report: Value = serde_json::from_str(&v.stdout).unwrap();
            assert_eq!(v.code == EXIT_OK, report["counterexample"].is_null(), "{src}");
            assert_eq!(v.code, EXIT_OK, "{src}");
        } else {
            assert_eq!(v.code, from_verdict, "{src}");
            assert!(v.stdout.is_empty());
        }
    }
}

#[test]
fn binary_honours_hats_jobs() {
    let dir = TempDir::new().unwrap();
    let expr = file(&dir, "g.hats", "game26666");
    let out = Command::new(env!("CARGO_BIN_EXE_hats"))
        .args(["verify", s(&expr)])
        .env("HATS_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checked"], 2592);

    let out = Command::new(env!("CARGO_BIN_EXE_hats"))
        .args(["verify", s(&expr)])
        .env("HATS_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
