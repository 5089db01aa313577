use std::process::{Command, Output};

fn moonshine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moonshine")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = moonshine(&full);
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn derived(doc: &serde_json::Value, name: &str) -> String {
    doc["results"]
        .as_array()
        .expect("results")
        .iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no item {name}"))["derived"]
        .as_str()
        .expect("string")
        .to_string()
}

#[test]
fn derive_q_level_two_vacuum() {
    let doc = json(&["derive-q", "--hv", "2", "--hu", "2", "--k", "0", "--m", "2"]);
    assert_eq!(derived(&doc, "Q^{2,2}_0(-2)"), "1/6 L(-2)");
    assert_eq!(doc["central_charge"], "24");
}

#[test]
fn derive_q_top_component_is_identity() {
    let doc = json(&["derive-q", "--hv", "2", "--hu", "2", "--k", "3", "--m", "0"]);
    assert_eq!(derived(&doc, "Q^{2,2}_3(-0)"), "1");
}

#[test]
fn derive_q_three_term_operator() {
    let doc = json(&["derive-q", "--hv", "2", "--hu", "3", "--k", "4", "--m", "3"]);
    assert_eq!(
        derived(&doc, "Q^{2,3}_4(-3)"),
        "145/2272 L(-3) + 105/2272 L(-2)L(-1) + 79/13632 L(-1)^3"
    );
}

#[test]
fn derive_q_inconsistent_exits_2() {
    let out = moonshine(&["derive-q", "--hv", "2", "--hu", "3", "--k", "0", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("INCONSISTENT"));
}

#[test]
fn verify_lemma7_all_exact() {
    let out = moonshine(&["--format", "json", "verify", "--suite", "lemma7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    let results = doc["results"].as_array().expect("results");
    assert_eq!(results.iter().filter(|r| r["status"] == "EXACT_MATCH").count(), 9);
    assert!(results.iter().all(|r| r["status"] != "MISMATCH"));
}

#[test]
fn verify_remark9_and_lemma13_exit_0() {
    for suite in ["remark9", "lemma13"] {
        let out = moonshine(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
    }
}

#[test]
fn verify_at_wrong_central_charge_exits_1() {
    let out = moonshine(&["--c", "25", "verify", "--suite", "lemma7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("MISMATCH"));
}

#[test]
fn characters_csv() {
    let out = moonshine(&["--format", "csv", "characters", "--max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,c,primary"));
    assert!(text.lines().any(|l| l == "2,196884,196883"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn characters_precision_out_of_range() {
    for max in ["1", "65"] {
        assert_eq!(moonshine(&["characters", "--max", max]).status.code(), Some(2));
    }
}

#[test]
fn physical_single_state() {
    let doc = json(&["physical", "--m", "2", "--n", "2", "--k", "5"]);
    assert_eq!(derived(&doc, "dim P^1"), "1");
    assert_eq!(derived(&doc, "dim rad"), "0");
    assert_eq!(derived(&doc, "multiplicity"), "1");
}

#[test]
fn physical_empty_block() {
    let doc = json(&["physical", "--m", "1", "--n", "-2", "--k", "2"]);
    assert_eq!(derived(&doc, "block dimension"), "0");
    assert_eq!(derived(&doc, "multiplicity"), "0");
}

#[test]
fn physical_guards_exit_2() {
    let cases: [&[&str]; 3] = [
        &["physical", "--m", "3", "--n", "3", "--k", "0"],
        &["physical", "--m", "1", "--n", "1", "--k", "1"],
        &["physical", "--m", "100", "--n", "0", "--k", "0"],
    ];
    for args in cases {
        assert_eq!(moonshine(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(moonshine(&["--format", "xml", "verify"]).status.code(), Some(2));
    assert_eq!(moonshine(&["--c", "1/0", "verify"]).status.code(), Some(2));
    assert_eq!(moonshine(&["derive-q", "--hv", "2"]).status.code(), Some(2));
    assert_eq!(moonshine(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_round_trips() {
    let out = moonshine(&["--format", "json", "physical", "--m", "1", "--n", "2", "--k", "0", "--dump"]);
    let text = stdout(&out);
    let doc = moonshine_engine::report::ReportDocument::from_json(&text).expect("report parses");
    assert_eq!(format!("{}\n", doc.to_json()), text);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_moonshine"))
            .args(["--format", "json", "noghost", "--m", "1", "--n", "3"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .expect("binary runs")
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, run("4").stdout);
    assert_eq!(one.stdout, run("4").stdout);
}

#[test]
fn noghost_single_degree() {
    let doc = json(&["noghost", "--m", "1", "--n", "3"]);
    assert_eq!(
        derived(&doc, "noghost (1,3)"),
        "V_4^p + V_3^p + 2V_2^p + 2V_0 (dim 864299970)"
    );
}

#[test]
fn lemma13_command() {
    let out = moonshine(&["lemma13"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[EXACT_MATCH] lemma13 factor Phi^2 / Phi^3 mod rad"));
}
