use std::process::{Command, Output};

use serde_json::Value;

fn marchtp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marchtp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn analyze_both_engines_has_empty_diff() {
    let o = marchtp(&["analyze", "--march", "March B"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0, "{out}");
    assert!(out.contains("(matcher)") && out.contains("(oracle)"));
    assert!(out.contains("engine diff: none"));
    assert!(out.contains("published: 47 detected"));
}

#[test]
fn analyze_march_b_reports_47() {
    let o = marchtp(&["analyze", "--march", "March B", "--quiet"]);
    assert!(stdout(&o).contains("March B: 47/86 detected"), "{}", stdout(&o));
}

#[test]
fn diff_march_a_to_b_gains_three_cfdsxw() {
    let o = marchtp(&["--json", "diff", "March A", "March B"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let gained: Vec<&str> = doc["gained"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(gained, ["<0w1;0/1/->a>v", "<0w1;1/0/->a<v", "<1w0;0/1/->a>v"]);
}

#[test]
fn read_before_init_is_a_validation_error() {
    let o = marchtp(&["analyze", "--march", "u(r0)"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("before any initialization"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&marchtp(&["analyze", "--march", "u(w0"])), 3);
    assert_eq!(code(&marchtp(&["analyze", "--march", "March A", "--faults", "nonsense"])), 3);
    assert_eq!(code(&marchtp(&["analyze", "--march", "missing.march"])), 5);
    assert_eq!(code(&marchtp(&["analyze"])), 2);
    assert_eq!(code(&marchtp(&["analyze", "--march", "March A", "--cells", "2"])), 2);
}

#[test]
fn library_rows_and_expansion() {
    let o = marchtp(&["library"]);
    assert_eq!(stdout(&o).lines().filter(|l| !l.trim_start().starts_with("also")).count(), 16);
    let o = marchtp(&["--json", "library", "--expand"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 86);
    let o = marchtp(&["library", "--class", "CFtr"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.trim_end().ends_with("⟨x;yWȳ⟩#Rȳ"), "{out}");
}

#[test]
fn annotate_renderings() {
    let o = marchtp(&["annotate", "--march", "b(w0)"]);
    assert_eq!(stdout(&o).trim(), "<0,x,x> | <x,x,0> b w0");
    let o = marchtp(&["annotate", "--march", "March SR", "--unicode"]);
    assert!(stdout(&o).starts_with("⟨0,x,x⟩⇕w0; ⟨0,0,0⟩⇑r0 "));
    let o = marchtp(&["annotate", "--march", "March A", "--unicode"]);
    assert!(stdout(&o).contains("⟨1,0,0⟩⇑r0 ⟨1,0,0⟩⇑w1 ⟨1,1,0⟩⇑w0 ⟨1,0,0⟩⇑w1;"));
}

#[test]
fn oracle_logs_mismatches() {
    let o = marchtp(&["oracle", "--march", "mats+", "--faults", "<forall/0/->"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0);
    assert!(out.contains("element 3, op 1, addr 0: expected 1, observed 0"), "{out}");
}

#[test]
fn text_and_json_agree_on_detected_sets() {
    let o = marchtp(&["--json", "analyze", "--march", "March SR", "--engine", "matcher"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let results = doc["matcher"]["results"].as_array().unwrap();
    let json_detected = results.iter().filter(|r| r["detected"] == true).count();
    let text = stdout(&marchtp(&["analyze", "--march", "March SR", "--engine", "matcher", "--quiet"]));
    assert!(text.contains(&format!("{json_detected}/86")), "{text}");
    assert_eq!(doc["matcher"]["detected"].as_u64(), Some(json_detected as u64));
}

#[test]
fn march_files_are_read() {
    let dir = std::env::temp_dir().join(format!("marchtp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("mine.march");
    std::fs::write(&file, "// MATS+\nb(w0); u(r0,w1); d(r1,w0)\n").unwrap();
    let o = marchtp(&["analyze", "--march", file.to_str().unwrap(), "--faults", "SAF,TF", "-q"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("mine: 3/4 detected"), "{}", stdout(&o));
    std::fs::remove_dir_all(dir).unwrap();
}
