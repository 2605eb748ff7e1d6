use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIXTURE: &str = "\
# the example graph
@node 0 a
@node 1 b
@node 2 c
@node 3 d
@node 4 e
a b 1 3
a d 2 3
a d 4 6
b c 3 6
b e 3 5
d b 0 6
e d 3 5
";

const STRUCTURES: [&str; 7] = ["oracle", "edgelog", "evelog", "cas", "cet", "tgcsa", "ckd"];

fn tgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgraph")).args(args).env_remove("TG_SEED").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("fixture.tsv");
    fs::write(&path, FIXTURE).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn query_examples() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir);
    let out = tgraph(&["query", s(&f), "neighbors_r", "d", "--from", "2", "--to", "4", "--semantics", "weak"]);
    assert_eq!(stdout(&out), "a e\n");
    let out = tgraph(&["query", s(&f), "has_edge", "a", "b", "--from", "2", "--to", "2"]);
    assert_eq!(stdout(&out), "true\n");
    let out = tgraph(&["query", s(&f), "activated_edges", "--from", "2", "--to", "4", "--semantics", "strong"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tgraph(&["query", s(&f), "deactivated_edges", "--from", "2"]);
    assert_eq!(stdout(&out), "{}\n");
}

#[test]
fn every_structure_builds_and_answers_like_the_log() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir);
    let queries: [&[&str]; 5] = [
        &["changed_edges", "--from", "2", "--to", "4", "--semantics", "strong"],
        &["aggregate", "--from", "2", "--to", "4"],
        &["neighbors", "a", "--from", "0", "--to", "6", "--semantics", "weak"],
        &["next_activation", "a", "d", "--from", "3"],
        &["neighbors_r", "b", "--from", "2"],
    ];
    for structure in STRUCTURES {
        let out = dir.path().join(format!("{structure}.tgix"));
        for extra in [&[][..], &["--reverse", "--compressed-psi"][..]] {
            let mut args = vec!["build", "--structure", structure, "--input", s(&f), "--output", s(&out)];
            args.extend(extra);
            stdout(&tgraph(&args));
            for q in queries {
                let mut direct = vec!["query", s(&f)];
                direct.extend(q);
                let mut loaded = vec!["query", s(&out)];
                loaded.extend(q);
                assert_eq!(stdout(&tgraph(&loaded)), stdout(&tgraph(&direct)), "{structure} {q:?}");
            }
        }
        let round = dir.path().join(format!("{structure}.tsv"));
        stdout(&tgraph(&["ingest", s(&out), "--output", s(&round)]));
        let reparsed = stdout(&tgraph(&["ingest", s(&round)]));
        assert_eq!(reparsed, "n = 5  m = 6  c = 7  τ = 7\n");
    }
}

#[test]
fn corrupted_magic_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir);
    let idx = dir.path().join("cas.tgix");
    stdout(&tgraph(&["build", "-s", "cas", "-i", s(&f), "-o", s(&idx)]));
    let mut bytes = fs::read(&idx).unwrap();
    bytes[0] = b'X';
    fs::write(&idx, &bytes).unwrap();
    // Without the magic the file is read as text, which is not UTF-8.
    let out = tgraph(&["query", s(&idx), "aggregate", "--from", "1"]);
    assert_eq!(out.status.code(), Some(1));

    let mut bytes = fs::read(&idx).unwrap();
    bytes[0] = b'T';
    bytes[4] = 9;
    fs::write(&idx, &bytes).unwrap();
    let out = tgraph(&["query", s(&idx), "aggregate", "--from", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported container"));
}

#[test]
fn ingest_reports_and_rejects() {
    let dir = TempDir::new().unwrap();
    assert_eq!(stdout(&tgraph(&["ingest", s(&fixture(&dir))])), "n = 5  m = 6  c = 7  τ = 7\n");
    let empty = dir.path().join("empty.tsv");
    fs::write(&empty, "").unwrap();
    assert_eq!(stdout(&tgraph(&["ingest", s(&empty)])), "n = 0  m = 0  c = 0  τ = 0\n");
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "a b 3 1\n").unwrap();
    let out = tgraph(&["ingest", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid contact"));
    fs::write(&bad, "a b 1 2\na b\n").unwrap();
    let out = tgraph(&["ingest", s(&bad)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn gen_is_seeded_and_valid() {
    let dir = TempDir::new().unwrap();
    let a = stdout(&tgraph(&["gen", "5", "7", "7", "--seed", "3"]));
    assert_eq!(a, stdout(&tgraph(&["gen", "5", "7", "7", "--seed", "3"])));
    let path = dir.path().join("g.tsv");
    stdout(&tgraph(&["gen", "5", "7", "7", "--seed", "3", "-o", s(&path)]));
    assert_eq!(fs::read_to_string(&path).unwrap(), a);
    let stats = stdout(&tgraph(&["ingest", s(&path)]));
    assert!(stats.contains("c = 7"), "{stats}");
    let empty = stdout(&tgraph(&["gen", "5", "7", "0"]));
    assert_eq!(empty.lines().filter(|l| !l.starts_with('@')).count(), 0);
    let out = tgraph(&["gen", "2", "5", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn bench_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir);
    let args = ["bench", s(&f), "--json", "--no-timing", "--verify"];
    let a = stdout(&tgraph(&args));
    assert_eq!(a, stdout(&tgraph(&args)));
    let reports: serde_json::Value = serde_json::from_str(&a).unwrap();
    let structures = reports[0]["structures"].as_array().unwrap();
    assert_eq!(structures.len(), 6);
    assert!(structures.iter().all(|s| s["mismatches"] == 0));
    assert_eq!(reports[0]["queries_per_class"], 100);

    let seeded = Command::new(env!("CARGO_BIN_EXE_tgraph")).args(args).env("TG_SEED", "9").output().unwrap();
    let seeded: serde_json::Value = serde_json::from_slice(&seeded.stdout).unwrap();
    assert_eq!(seeded[0]["seed"], 9);

    let text = stdout(&tgraph(&["bench", s(&f), "--queries", "10", "--structures", "cas,ckd"]));
    assert!(text.contains("latency p50 / p99"), "{text}");
}

#[test]
fn stats_lists_structures() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir);
    let text = stdout(&tgraph(&["stats", s(&f)]));
    assert_eq!(text.lines().count(), 7);
    let json: serde_json::Value = serde_json::from_str(&stdout(&tgraph(&["stats", s(&f), "--json"]))).unwrap();
    assert_eq!(json["graph"]["edges"], 6);
}
