use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn matgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matgen")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn check_x_e11() {
    let out = matgen(&["check", "--input", data("x_e11.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["verdict"], "generates");
    assert!(v["elementary_divisors"].as_array().unwrap().iter().all(|d| d == "1"));
    assert!(v["certificate_words"].as_array().unwrap().len() == 9);
}

#[test]
fn check_blocks() {
    let out = matgen(&["check", "--input", data("blocks_2_3.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["verdict"], "generates");
}

#[test]
fn failing_verdict_still_exits_zero() {
    let dir = std::env::temp_dir().join(format!("matgen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("diag.json");
    std::fs::write(&p, r#"{"n": 2, "A": [[1,0],[0,1]], "B": [[2,0],[0,3]]}"#).unwrap();
    let out = matgen(&["check", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["verdict"], "fails");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pell_c1() {
    let out = matgen(&["pell", "--c", "1", "--count", "3"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let pairs: Vec<(String, String)> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["a"].as_str().unwrap().to_string(), s["b"].as_str().unwrap().to_string()))
        .collect();
    assert!(pairs.contains(&("1".into(), "1".into())));
    assert!(pairs.contains(&("2".into(), "1".into())));
    for (a, b) in &pairs {
        let (a, b): (i64, i64) = (a.parse().unwrap(), b.parse().unwrap());
        assert_eq!((a * a - a * b - b * b).abs(), 1);
    }
}

#[test]
fn g2_solve_flags() {
    let out = matgen(&["g2", "solve", "--c", "2", "--count", "4", "--emit-pairs"]);
    assert_eq!(code(&out), 0);
    for s in json_of(&out).as_array().unwrap() {
        assert_eq!(s["pair_generates"], true);
        assert_eq!(s["triple_generates"], true);
        assert!(s.get("a1").is_some());
    }
}

#[test]
fn malformed_input_exits_one() {
    for f in ["malformed.json", "bad_rows.json", "does_not_exist.json"] {
        let out = matgen(&["check", "--input", data(f).to_str().unwrap()]);
        assert_eq!(code(&out), 1, "{f}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(code(&matgen(&["frobnicate"])), 1);
    assert_eq!(code(&matgen(&["density", "fq", "--n", "2", "--q", "4"])), 1);
    assert_eq!(code(&matgen(&["density", "fq", "--n", "2", "--q", "3", "--samples", "10"])), 1);
}

#[test]
fn resource_caps_exit_two() {
    assert_eq!(code(&matgen(&["circulant", "units", "--n", "12", "--bound", "3"])), 2);
    assert_eq!(code(&matgen(&["present", "rank", "--n", "2", "--max-degree", "16"])), 2);
    assert_eq!(code(&matgen(&["--cap", "100", "density", "fq", "--n", "2", "--q", "3"])), 2);
}

#[test]
fn relator_file_membership() {
    let out = matgen(&[
        "present", "member", "--n", "3", "--relators", data("troika.txt").to_str().unwrap(),
        "--target", "y x^2 y", "--max-degree", "8",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["membership"]["status"], "certificate");
    assert_eq!(v["verified"], true);
    assert_eq!(v["relators"].as_array().unwrap().len(), 3);
}

#[test]
fn density_csv_rows() {
    let out = matgen(&["--format", "csv", "density", "sweep", "--ns", "2", "--qs", "2,3", "--samples", "500", "--seed", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("experiment,params,estimate,half_width"));
    assert!(lines[1].starts_with("fq,n=2;q=2,0.375,0,"));
}

#[test]
fn seeded_runs_are_stable() {
    let args = ["density", "g2z", "--k", "3", "--samples", "3000", "--seed", "7"];
    assert_eq!(matgen(&args).stdout, matgen(&args).stdout);
}

#[test]
fn circulant_and_rep() {
    let out = matgen(&["circulant", "units", "--n", "5", "--bound", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["nontrivial_count"], 20);
    let y1 = matgen(&["circulant", "y1", "--c", "-1,0,1,0,-1", "--d", "0,0,-1,1,-1"]);
    let v = json_of(&y1);
    assert_eq!(v["trace"], "1");
    assert_eq!(v["has_negative"], true);
    let rep = matgen(&["rep", "canonicalize", "--input", data("rep_x_y.json").to_str().unwrap(), "--n", "3"]);
    assert_eq!(code(&rep), 0);
    let f = json_of(&rep);
    assert_eq!((f["k"].as_u64(), f["r"].as_u64()), (Some(1), Some(0)));
    let bad = matgen(&["rep", "canonicalize", "--input", data("x_e11.json").to_str().unwrap(), "--n", "3"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn corpus_matches_golden() {
    let out = matgen(&["corpus"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let got = json_of(&out);
    let want: Value = serde_json::from_str(&std::fs::read_to_string(data("corpus.golden.json")).unwrap()).unwrap();
    assert_eq!(got, want);
    assert!(got.as_array().unwrap().iter().all(|c| c["pass"] == true));
}
