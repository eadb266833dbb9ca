use std::process::{Command, Stdio};

use cardtricks_cli::run;
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli_with_input(args: &[&str], input: &str) -> Run {
    let mut argv = vec!["cardtricks"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn cli(args: &[&str]) -> Run {
    cli_with_input(args, "")
}

fn ok(args: &[&str]) -> String {
    let r = cli(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.err);
    r.out
}

fn temp_path(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("cardtricks-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn golden_examples() {
    assert_eq!(ok(&["bounds", "--variant", "cheney", "--k", "5"]), "52\n");
    assert_eq!(
        ok(&["encode", "--codec", "three-card", "--hand", "7D QH 3S"]),
        "hidden: 7D\nL QH:u1 3S:d0\n"
    );
    assert_eq!(
        ok(&["sequence", "--id", "A002720", "--count", "6"]),
        "1, 2, 7, 34, 209, 1546\n"
    );
    assert_eq!(
        ok(&["sequence", "--id", "A371217", "--count", "11"]),
        "1, 4, 15, 52, 197, 896, 4987, 33216, 257161, 2262124, 22241671\n"
    );
    assert_eq!(ok(&["decode", "--codec", "three-card", "--message", "L QH:u1 ?:d0"]), "7D\n");
    let t5 = ok(&["table", "--id", "T5"]);
    assert!(t5.starts_with("R/K\t1\t2\t3\t4\t5\t6\n1\t1\t4\t15\t52\t197\t896\n"), "{t5}");
}

#[test]
fn bounds_variants_and_options() {
    assert_eq!(ok(&["bounds", "--variant", "line-assistant", "--k", "4", "--r", "2"]), "195\n");
    assert_eq!(ok(&["bounds", "--variant", "circle-assistant", "--k", "4", "--r", "2"]), "67\n");
    assert_eq!(ok(&["bounds", "--variant", "dup-assistant", "--k", "4"]), "18\n");
    assert_eq!(ok(&["bounds", "--variant", "multi-audience", "--k", "5", "--c", "2"]), "7\n");
    assert_eq!(ok(&["bounds", "--variant", "bctm", "--k", "5"]), "14\n");
    assert_eq!(ok(&["sequence", "--id", "a372256", "--count", "4", "--deck-sizes"]), "2, 2, 4, 8\n");
    assert_eq!(ok(&["--format", "tsv", "sequence", "--id", "A030495", "--count", "3"]), "1\t3\t8\n");
}

#[test]
fn json_envelope() {
    let out = ok(&["--format", "json", "bounds", "--variant", "cheney", "--k", "5"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "bounds");
    assert_eq!(v["params"]["variant"], "cheney");
    assert_eq!(v["params"]["k"], 5);
    assert_eq!(v["result"]["value"], 52);

    let out = ok(&["encode", "--format", "json", "--codec", "three-card", "--hand", "7D QH 3S"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["hidden"], "7D");
    assert_eq!(v["result"]["message"], "L QH:u1 3S:d0");

    let out = ok(&["--format", "json", "table", "--id", "T2"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["cells"][1][2], 19);
}

#[test]
fn exit_codes() {
    let r = cli(&["bounds", "--variant", "nope", "--k", "3"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("possible values"), "{}", r.err);
    assert_eq!(cli(&["bounds", "--variant", "cheney", "--k", "5", "--extra"]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["verify"]).code, 2);

    let r = cli(&["decode", "--codec", "three-card", "--message", "L QH:u1"]);
    assert_eq!(r.code, 1);
    assert!(r.err.starts_with("error: invalid message"), "{}", r.err);
    let r = cli(&["encode", "--codec", "best-trick", "--k", "3", "--n", "9", "--hand", "0 1 2"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("capacity"), "{}", r.err);
    let r = cli(&["table", "--id", "T7"]);
    assert_eq!(r.code, 1);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn numeric_codecs_and_one_based_ids() {
    let out = ok(&["encode", "--codec", "two-hidden-audience", "--k", "5", "--n", "7", "--hand", "2 3 4 5 6", "--hidden", "3 5", "--one-based"]);
    assert_eq!(out, "L 4:u0 6:u0 2:u0\n");
    let out = ok(&["decode", "--codec", "two-hidden-audience", "--k", "5", "--n", "7", "--message", "L 4:u0 6:u0 2:u0", "--one-based"]);
    assert_eq!(out, "3 5\n");
    let out = ok(&["encode", "--codec", "bctm2", "--hand", "2 3 7 9 13", "--one-based"]);
    assert_eq!(out, "hidden: 3 13\nL 2:u0 9:u0 7:u0\n");
    let out = ok(&["encode", "--codec", "dup-signal", "--k", "6", "--n", "40", "--hand", "6 9 9 10 10 11"]);
    assert_eq!(out, "hidden: 9\nL 9:u0 6:u0 10:u0 10:u0 11:u0\n");
}

#[test]
fn verify_reports_are_deterministic() {
    let path = temp_path("report.json");
    let args = ["verify", "--codec", "best-trick", "--k", "5", "--sample", "2000", "--seed", "7", "--report", &path];
    let out = ok(&args);
    assert!(out.contains("cases: 2000\n") && out.ends_with("result: PASS\n"), "{out}");
    let first = std::fs::read_to_string(&path).unwrap();
    ok(&args);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["cases"], 2000);
    assert!(v["failures"].as_array().unwrap().is_empty());

    let out = ok(&["verify", "--codec", "dup-k3", "--exhaustive"]);
    assert!(out.contains("cases: 16\n"), "{out}");
}

#[test]
fn synthesize_writes_a_verifiable_table() {
    let path = temp_path("line.jsonl");
    let out = ok(&["synthesize", "--family", "line-assistant", "--k", "3", "--n", "8", "--out", &path]);
    assert_eq!(out, format!("feasible: 56 rows written to {path}\n"));
    let out = ok(&["verify", "--table", &path]);
    assert!(out.contains("cases: 56\n") && out.ends_with("result: PASS\n"), "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    let row: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert!(row["hand"].is_array() && row["hidden"].is_array() && row["message"].is_string());

    let out = ok(&["synthesize", "--family", "line-assistant", "--k", "3", "--n", "9"]);
    assert!(out.starts_with("infeasible: "), "{out}");
    assert_eq!(ok(&["synthesize", "--family", "flip-audience", "--k", "3"]), "max deck: 7\n");
    let out = ok(&["--format", "json", "synthesize", "--family", "dup-assistant", "--k", "2", "--n", "4"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["feasible"], false);
    assert_eq!(v["result"]["obstruction"]["kind"], "hall");
}

#[test]
fn perform_transcripts() {
    let r = cli_with_input(&["perform", "--role", "assistant", "--codec", "three-card"], "7D QH 3S\n");
    assert_eq!(
        r.out,
        "deal 3 cards (e.g. 7D QH 3S):\n\
         hidden: 7D\n\
         place QH face up, upright, leftmost\n\
         place 3S face down, rotated, rightmost\n\
         deal 3 cards (e.g. 7D QH 3S):\n"
    );
    let r = cli_with_input(&["perform", "--role", "magician", "--codec", "three-card"], "QH:u1 ?:d0\n");
    assert_eq!(r.out.lines().nth(1), Some("7D"));
    let r = cli_with_input(&["perform", "--role", "magician", "--codec", "cheney5"], "2C 3C 4C 5C\n9H 10H JH QH\n");
    let answers: Vec<&str> = r.out.lines().filter(|l| !l.starts_with("describe")).collect();
    assert_eq!(answers, ["3C", "10H"]);

    let r = cli_with_input(&["perform", "--role", "assistant", "--codec", "cheney5"], "XX\nAS 2S 3S 4S 5S\n");
    assert_eq!(r.code, 0);
    assert!(r.out.contains("try again"));
    assert!(r.out.contains("hidden: "));

    let r = cli_with_input(&["perform", "--role", "assistant", "--codec", "mulcahy4", "--format", "json"], "AC 2C 3C 4C\n");
    let v: Value = serde_json::from_str(r.out.trim()).unwrap();
    assert_eq!(v["command"], "perform");
    assert_eq!(v["result"]["instructions"].as_array().unwrap().len(), 3);
}

#[test]
fn binary_exit_codes_and_stdin() {
    let bin = env!("CARGO_BIN_EXE_cardtricks");
    let out = Command::new(bin).args(["bounds", "--variant", "cheney", "--k", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "52\n");
    let out = Command::new(bin).args(["bounds", "--k", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).args(["table", "--id", "T8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    use std::io::Write;
    let mut child = Command::new(bin)
        .args(["perform", "--role", "magician", "--codec", "three-card"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"QH:u1 ?:d0\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\n7D\n"));
}
