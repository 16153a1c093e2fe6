//! End-to-end checks of the command-line surface.

use std::io::Write;
use std::process::Command;

fn beadq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_beadq"))
}

fn write_temp(content: &str, suffix: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

const FIGURE_PAIR_CSV: &str = "label,t,x,y,v\n\
a,0,0,0,1.9\n\
a,2,0,2,1.9\n\
b,0,3,0,1.9\n\
b,2,3,2,1.9\n";

#[test]
fn load_check_reports_shape() {
    let db = write_temp(FIGURE_PAIR_CSV, ".csv");
    let out = beadq().arg("load-check").arg(db.path()).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2 labels"));
    assert!(text.contains("4 samples"));
}

#[test]
fn load_check_fails_on_duplicates() {
    let db = write_temp("a,0,0,0,1\na,0,1,1,1\n", ".csv");
    let out = beadq().arg("load-check").arg(db.path()).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("duplicate"), "stderr: {err}");
}

#[test]
fn alibi_query_json_output() {
    let db = write_temp(FIGURE_PAIR_CSV, ".csv");
    let out = beadq()
        .args(["alibi"])
        .arg(db.path())
        .args(["a", "b", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["kind"], "alibi");
    assert_eq!(report["verdict"], false, "the figure pair can have met");
    assert_eq!(report["cases"][0], "II");
    assert_eq!(
        report["pairs_considered"].as_u64().unwrap() + report["pairs_pruned"].as_u64().unwrap(),
        1
    );
}

#[test]
fn alibi_at_json_output() {
    let json_db = write_temp(
        r#"[
            {"label":"a","t":0,"x":0,"y":0,"v":1.9},
            {"label":"a","t":2,"x":0,"y":2,"v":1.9},
            {"label":"b","t":0,"x":3,"y":0,"v":1.9},
            {"label":"b","t":2,"x":3,"y":2,"v":1.9}
        ]"#,
        ".json",
    );
    let out = beadq()
        .arg("alibi-at")
        .arg(json_db.path())
        .args(["a", "b", "1.0", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["kind"], "alibi-at");
    assert_eq!(report["verdict"], true, "they can have met at t0 = 1");

    let out = beadq()
        .arg("alibi-at")
        .arg(json_db.path())
        .args(["a", "b", "-10.0", "--json"])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], false, "before both trajectories");
}

#[test]
fn bead_subcommand_direct_pair() {
    let out = beadq()
        .args(["bead", "0", "0", "0", "2", "0", "2", "1.9", "0", "3", "0", "2", "3", "2", "1.9", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], true);
    assert_eq!(report["cases"][0], "II");
}

#[test]
fn bead_subcommand_rejects_bad_times() {
    let out = beadq()
        .args(["bead", "5", "0", "0", "2", "0", "2", "1.9", "0", "3", "0", "2", "3", "2", "1.9"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn bench_subcommand_agrees_with_oracle() {
    let out = beadq().args(["bench", "--pairs", "60", "--seed", "3", "--json"]).output().unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["kind"], "bench");
    assert_eq!(report["agreement"]["disagree"], 0);
    assert_eq!(report["pairs_considered"], 60);
}

#[test]
fn unknown_label_exits_nonzero() {
    let db = write_temp(FIGURE_PAIR_CSV, ".csv");
    let out = beadq().arg("alibi").arg(db.path()).args(["a", "nobody"]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown label"), "stderr: {err}");
}
