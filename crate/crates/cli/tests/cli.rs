use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_zslab");

struct Run {
    code: i32,
    report: Option<Value>,
    stderr: String,
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn zslab(args: &[&str]) -> Run {
    let out = Command::new(BIN)
        .args(args)
        .env_remove("ZSLAB_WORKERS")
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = (!stdout.trim().is_empty()).then(|| {
        let v: Value = serde_json::from_str(&stdout).unwrap();
        let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}\n{stdout}");
        v
    });
    Run {
        code: out.status.code().unwrap(),
        report,
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn c0_small_payload() {
    let r = zslab(&["c0", "--group", "3,3"]);
    assert_eq!(r.code, 0);
    let rep = r.report.unwrap();
    assert_eq!(rep["result"]["c0"], 5);
    assert_eq!(rep["status"], "ok");
    assert_eq!(rep["claim"], "c0(C_p+C_p) = 2p-1");
}

#[test]
fn verify_paper_payload() {
    let r = zslab(&["verify-paper", "--q", "5"]);
    assert_eq!(r.code, 0);
    let res = &r.report.unwrap()["result"];
    assert_eq!(res["lower_bound_length"], 17);
    assert!(res["missing"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([2, 12])));
    assert_eq!(res["stabilizer_trivial"], true);
}

#[test]
fn exit_code_classes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(
        dir.path(),
        "empty.json",
        r#"{"group": "3,15", "terms": []}"#,
    );
    // 2: usage
    assert_eq!(
        zslab(&["sigma", "--group", "3,15", "--seq", &empty]).code,
        2
    );
    assert_eq!(
        zslab(&["sigma", "--group", "3,15", "--seq", "/nonexistent.json"]).code,
        2
    );
    assert_eq!(zslab(&["c0"]).code, 2);
    assert_eq!(zslab(&["c0", "--group", "3,x"]).code, 2);
    let bad = zslab(&["c0", "--group", "3,3", "--frobnicate"]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("--frobnicate"));
    assert_eq!(zslab(&["davenport", "--group", "2,2,2"]).code, 2);
    // 3: budget
    let r = zslab(&["c0", "--group", "5,5", "--budget-nodes", "1000"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report.unwrap()["status"], "budget_exhausted");
    let r = zslab(&["c0", "--group", "3,3", "--cap", "2"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report.unwrap()["status"], "unknown");
    // 1: mathematics says no
    let r = zslab(&[
        "monte-carlo",
        "--q",
        "5",
        "--trials",
        "20",
        "--length",
        "17",
        "--plant-extremal",
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.report.unwrap()["result"]["planted_counterexamples"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
    // 0
    assert_eq!(
        zslab(&["monte-carlo", "--q", "5", "--trials", "50"]).code,
        0
    );
}

#[test]
fn sequence_commands() {
    let dir = tempfile::tempdir().unwrap();
    let ext = write(
        dir.path(),
        "ext.json",
        &format!(
            r#"{{"group": "3,15", "terms": [{}, [1,14],[1,14],[1,14],[1,14]]}}"#,
            vec!["[0,1]"; 13].join(",")
        ),
    );
    let r = zslab(&["sigma", "--seq", &ext]);
    assert_eq!(r.code, 0);
    let res = r.report.unwrap()["result"].clone();
    assert_eq!(res["missing"], serde_json::json!([[2, 12]]));
    assert_eq!(res["sigma_size"], 44);

    let r = zslab(&["regular", "--seq", &ext]).report.unwrap();
    assert_eq!(r["result"]["regular"], true);
    let r = zslab(&["basis", "--group", "3,15", "--seq", &ext])
        .report
        .unwrap();
    assert_eq!(r["result"]["basis"], false);
    let r = zslab(&["stabilizer", "--seq", &ext]).report.unwrap();
    assert_eq!(r["result"]["trivial"], true);
    assert_eq!(r["result"]["lemma"]["holds"], true);

    let over = write(
        dir.path(),
        "over.json",
        r#"{"group": "3,15", "multiplicity": {"3": 15}}"#,
    );
    let r = zslab(&["regular", "--seq", &over]).report.unwrap();
    assert_eq!(r["result"]["regular"], false);
    assert_eq!(r["result"]["violation"]["subgroup_order"], 15);
    assert_eq!(r["result"]["violation"]["terms"], 15);

    // The group in the file must match --group.
    assert_eq!(zslab(&["sigma", "--group", "3,3", "--seq", &ext]).code, 2);

    let pair = write(
        dir.path(),
        "pair.json",
        r#"{"group": "3,3", "terms": [[1,0],[1,0],[0,1],[0,1]]}"#,
    );
    for args in [
        &["algebra-cover", "--seq", &pair][..],
        &["algebra", "cover", "--seq", &pair],
    ] {
        let r = zslab(args);
        assert_eq!(r.code, 0);
        assert_eq!(r.report.unwrap()["result"]["vanishes"], false);
    }
    let five = write(
        dir.path(),
        "five.json",
        r#"{"group": "3,3", "terms": [[1,0],[1,0],[0,1],[0,1],[1,1]]}"#,
    );
    let r = zslab(&["algebra-cover", "--seq", &five]).report.unwrap();
    assert_eq!(r["result"]["vanishes"], true);
    assert_eq!(r["result"]["assignment"].as_array().unwrap().len(), 5);
}

#[test]
fn group_level_commands() {
    let r = zslab(&["group-info", "--group", "15,3"]).report.unwrap();
    assert_eq!(r["result"]["factors"], serde_json::json!([3, 15]));
    assert_eq!(r["result"]["subgroups"], 12);

    let r = zslab(&["davenport", "--group", "3,3", "--mode", "bruteforce"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["davenport"], 5);
    let r = zslab(&["davenport", "--group", "3,15"]).report.unwrap();
    assert_eq!(r["result"]["davenport"], 17);

    for (len, exists) in [("4", true), ("5", false)] {
        let r = zslab(&["algebra", "dwitness", "--group", "3,3", "--length", len]);
        assert_eq!(r.code, 0);
        assert_eq!(r.report.unwrap()["result"]["exists"], exists);
    }
    let r = zslab(&["algebra-dwitness", "--group", "2,4", "--length", "4"]);
    assert_eq!(r.report.unwrap()["result"]["exists"], true);

    let r = zslab(&[
        "stabilizer",
        "--group",
        "3,15",
        "--set",
        "0,0;0,5;0,10;1,1;1,6;1,11",
    ])
    .report
    .unwrap();
    assert_eq!(r["result"]["stabilizer"]["order"], 3);
    assert_eq!(zslab(&["stabilizer", "--group", "3,15"]).code, 2);

    let r = zslab(&["search-extremal", "--group", "2,2"])
        .report
        .unwrap();
    assert_eq!(r["result"]["longest_regular_nonbasis"], 2);

    let r = zslab(&["kneser-fuzz", "--trials", "300", "--seed", "5"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["violations"], 0);
}

#[test]
fn json_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let r = zslab(&["c0", "--group", "2,2", "--json", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.report.is_none());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(validator().is_valid(&v));
    assert_eq!(v["result"]["c0"], 3);
}

#[test]
fn results_do_not_depend_on_workers() {
    let cases: [&[&str]; 4] = [
        &["c0", "--group", "5,5"],
        &["c0", "--group", "2,6"],
        &["kneser-fuzz", "--trials", "500", "--seed", "9"],
        &["monte-carlo", "--q", "5", "--trials", "300", "--seed", "42"],
    ];
    for args in cases {
        let one = zslab(&[args, &["--workers", "1"]].concat()).report.unwrap();
        let four = zslab(&[args, &["--workers", "4"]].concat()).report.unwrap();
        assert_eq!(one["result"], four["result"], "{args:?}");
        assert_eq!(one["config"]["workers"], 1);
        assert_eq!(four["config"]["workers"], 4);
    }
}

#[test]
fn workers_from_environment() {
    let out = Command::new(BIN)
        .args(["c0", "--group", "2,2"])
        .env("ZSLAB_WORKERS", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["workers"], 3);
}

#[test]
fn resume_after_interruption() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("c0.jsonl");
    let ck = ck.to_str().unwrap();
    let fresh = zslab(&["c0", "--group", "5,5"]).report.unwrap();
    let total = fresh["result"]["nodes_explored"].as_u64().unwrap();

    let first = zslab(&[
        "c0",
        "--group",
        "5,5",
        "--checkpoint",
        ck,
        "--budget-nodes",
        &(total / 2).to_string(),
        "--workers",
        "2",
    ]);
    assert_eq!(first.code, 3);
    let lines = std::fs::read_to_string(ck).unwrap().lines().count();
    assert!(lines > 1, "checkpoint holds completed prefixes");

    let resumed = zslab(&["c0", "--group", "5,5", "--checkpoint", ck]);
    assert_eq!(resumed.code, 0);
    let rep = resumed.report.unwrap();
    assert_eq!(rep["result"]["c0"], 9);
    assert_eq!(rep["result"], fresh["result"]);

    // Different configuration, same file.
    let r = zslab(&["c0", "--group", "3,3", "--checkpoint", ck]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("hash"), "{}", r.stderr);
    assert_eq!(
        zslab(&["c0", "--group", "5,5", "--cap", "20", "--checkpoint", ck]).code,
        2
    );
}

#[test]
fn checkpoint_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.jsonl", "");
    let r = zslab(&["c0", "--group", "3,3", "--checkpoint", &empty]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["c0"], 5);

    let ok = std::fs::read_to_string(&empty).unwrap();
    let header = ok.lines().next().unwrap();
    let corrupt = write(
        dir.path(),
        "corrupt.jsonl",
        &format!("{header}\nnot json\n"),
    );
    let r = zslab(&["c0", "--group", "3,3", "--checkpoint", &corrupt]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains(":2"), "{}", r.stderr);

    assert_eq!(
        zslab(&["davenport", "--group", "3,3", "--checkpoint", &empty]).code,
        2
    );
}
