use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_trussdiv"));
    c.env_remove("TRUSSDIV_MEM_CAP_MB");
    c
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/fig1_full.txt")
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn search_json_has_top_vertex_and_contexts() {
    let o = run(&["search", &fixture(), "-k", "4", "-r", "1", "--contexts"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["vertex"], 0);
    assert_eq!(v["results"][0]["score"], 3);
    assert_eq!(v["results"][0]["contexts"].as_array().unwrap().len(), 3);
    // the run report goes to stderr as one JSON line
    let report: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(report["search_space"], 1);
    assert_eq!(report["digest"].as_str().unwrap().len(), 64);
}

#[test]
fn every_algorithm_gives_the_same_tsv() {
    let outs: Vec<String> = ["online", "bounded", "tsd", "gct"]
        .iter()
        .map(|a| {
            stdout(&run(&[
                "search",
                &fixture(),
                "-k",
                "3",
                "-r",
                "15",
                "--tsv",
                "--algo",
                a,
            ]))
        })
        .collect();
    assert!(outs.iter().all(|o| o == &outs[0]));
    assert!(outs[0].starts_with("0\t2\n"));
}

#[test]
fn threads_do_not_change_output() {
    let a = run(&[
        "search",
        &fixture(),
        "-k",
        "4",
        "-r",
        "10",
        "--contexts",
        "--threads",
        "1",
    ]);
    let b = run(&[
        "search",
        &fixture(),
        "-k",
        "4",
        "-r",
        "10",
        "--contexts",
        "--threads",
        "8",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn decompose_tsv_lists_each_edge_once() {
    let o = run(&["decompose", &fixture(), "--tsv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 40);
    let bitmap = run(&["decompose", &fixture(), "--tsv", "--bitmap"]);
    assert_eq!(text, stdout(&bitmap));
    let ego = stdout(&run(&["decompose", &fixture(), "--tsv", "--ego", "0"]));
    assert_eq!(ego.lines().count(), 26);
}

#[test]
fn index_build_and_query() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["tsd", "gct"] {
        let path = dir.path().join(format!("{kind}.json"));
        let p = path.to_str().unwrap();
        assert!(
            run(&["build-index", &fixture(), "--type", kind, "--out", p])
                .status
                .success()
        );
        let q = run(&["query", p, "--vertex", "0", "-k", "4", "--tsv"]);
        assert_eq!(stdout(&q), "0\t3\t1,2,3,4|11,12,13,14|21,22,23,24,25,26\n");
        let top = run(&["query", p, "-k", "4", "-r", "1", "--tsv"]);
        assert_eq!(stdout(&top), "0\t3\n");
    }
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(run(&["search"]).status.code(), Some(2));
    assert_eq!(
        run(&["search", &fixture(), "-k", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["search", &fixture(), "-r", "0"]).status.code(),
        Some(2)
    );
    // input
    assert_eq!(run(&["search", "/no/such/file"]).status.code(), Some(3));
    assert_eq!(
        run(&["score", &fixture(), "--vertex", "999"]).status.code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2\n3 x\n").unwrap();
    let o = run(&["stats", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    // resource cap
    let o = bin()
        .args(["build-index", &fixture(), "--type", "tsd", "--out"])
        .arg(dir.path().join("x.json"))
        .env("TRUSSDIV_MEM_CAP_MB", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(
        run(&["oracle", &fixture(), "--cap", "5"]).status.code(),
        Some(4)
    );
}

#[test]
fn report_file_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let o = bin()
        .args(["stats", &fixture(), "--truss", "--report"])
        .arg(&rep)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stderr.is_empty());
    let stats: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stats["n"], 15);
    assert_eq!(stats["m"], 40);
    assert_eq!(stats["max_edge_trussness"], 5);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(rep).unwrap()).unwrap();
    assert_eq!(report["command"], "stats");
}

#[test]
fn bench_digests_agree() {
    let o = run(&["bench", &fixture(), "-k", "4", "-r", "5"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["digests_agree"], true);
    assert_eq!(v["runs"].as_array().unwrap().len(), 4);
}

#[test]
fn oracle_matches_search() {
    let a = stdout(&run(&[
        "oracle",
        &fixture(),
        "-k",
        "3",
        "-r",
        "15",
        "--tsv",
    ]));
    let b = stdout(&run(&[
        "search",
        &fixture(),
        "-k",
        "3",
        "-r",
        "15",
        "--tsv",
    ]));
    assert_eq!(a, b);
}
