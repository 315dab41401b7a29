use std::path::Path;
use std::process::{Command, Output};

fn mcayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcayley"))
        .args(args)
        .env_remove("MCAYLEY_BOUND_ELEMENTS")
        .env_remove("MCAYLEY_BOUND_AUT_VERTICES")
        .env_remove("MCAYLEY_BOUND_GROUP_ORDER")
        .env_remove("MCAYLEY_BOUND_BUDGET_S")
        .env_remove("MCAYLEY_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn build_summaries() {
    let o = mcayley(&["build", "fixture:F2"]);
    assert_eq!(code(&o), 0);
    assert!(
        stdout(&o).starts_with("6 vertices, 15 arcs"),
        "{}",
        stdout(&o)
    );

    let dir = tempfile::tempdir().unwrap();
    let empty = write(
        dir.path(),
        "e.json",
        r#"{"group":"Z2","m":2,"mode":"pcayley-graph","sets":[[[],[]],[[],[]]]}"#,
    );
    let o = mcayley(&["build", &empty]);
    assert!(stdout(&o).starts_with("4 vertices, 0 arcs"));

    let bad = write(
        dir.path(),
        "b.json",
        r#"{"group":"Z3","m":2,"mode":"graph","sets":[[[],[1]],[[],[]]]}"#,
    );
    let o = mcayley(&["build", &bad]);
    assert_eq!(code(&o), 2);
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("(0,1)"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn build_export_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f2.json");
    assert_eq!(
        code(&mcayley(&[
            "build",
            "fixture:F2",
            "--out",
            out.to_str().unwrap()
        ])),
        0
    );
    let o = mcayley(&["aut", out.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("|Aut| = 9"));
    let sets = stdout(&mcayley(&["fixture", "F8", "--sets"]));
    let p = write(dir.path(), "f8.json", &sets);
    assert!(stdout(&mcayley(&["aut", &p])).starts_with("|Aut| = 18"));
}

#[test]
fn aut_reports() {
    assert!(stdout(&mcayley(&["aut", "fixture:F2"])).starts_with("|Aut| = 9"));
    let o = stdout(&mcayley(&["aut", "fixture:F11", "--normalizer"]));
    assert!(o.starts_with("|Aut| = 8"));
    assert!(o.contains("|Ñ| = 8") && o.contains("|K̃| = 2"), "{o}");
    let o = stdout(&mcayley(&["aut", "fixture:F4", "--parts-fixed"]));
    assert!(o.contains("|Aut_(G)| = 16"), "{o}");
}

#[test]
fn check_exit_codes() {
    let o = mcayley(&["check", "fixture:F4", "--property", "mpci"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("non-conjugate"));
    assert_eq!(
        code(&mcayley(&["check", "fixture:F2", "--property", "mci"])),
        1
    );
    let dir = tempfile::tempdir().unwrap();
    let empty = write(
        dir.path(),
        "e.json",
        r#"{"group":"Z2","m":2,"mode":"pcayley-graph","sets":[[[],[]],[[],[]]]}"#,
    );
    assert_eq!(code(&mcayley(&["check", &empty, "--property", "mpci"])), 0);
    assert_eq!(
        code(&mcayley(&["check", "fixture:F2", "--property", "mpci"])),
        2
    );
    let o = mcayley(&[
        "check",
        "fixture:F1",
        "--property",
        "mci",
        "--against",
        "fixture:F1:sigma",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stats"]["elements_scanned"], 324);
}

#[test]
fn bounds_and_env() {
    let o = mcayley(&[
        "check",
        "fixture:F4",
        "--property",
        "mpci",
        "--element-bound",
        "1",
    ]);
    assert_eq!(code(&o), 3);
    let env = |v: &str, extra: &[&str]| {
        let mut args = vec!["check", "fixture:F4", "--property", "mpci"];
        args.extend(extra);
        Command::new(env!("CARGO_BIN_EXE_mcayley"))
            .args(&args)
            .env("MCAYLEY_BOUND_ELEMENTS", v)
            .output()
            .unwrap()
    };
    assert_eq!(code(&env("1", &[])), 3);
    assert_eq!(code(&env("1", &["--element-bound", "100000"])), 1);
    assert_eq!(
        code(&mcayley(&["aut", "fixture:F8", "--aut-bound", "4"])),
        3
    );
}

#[test]
fn json_is_deterministic() {
    let a = mcayley(&[
        "check",
        "fixture:F3",
        "--property",
        "mpci",
        "--format",
        "json",
    ]);
    let b = mcayley(&[
        "check",
        "fixture:F3",
        "--property",
        "mpci",
        "--format",
        "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["stats"].get("wall_ms").is_none());
}

#[test]
fn census_runs() {
    let o = mcayley(&["census", "Z3", "3", "pcayley-graph"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("512/512 mPCI"), "{}", stdout(&o));
    let o = mcayley(&["census", "Z3", "2", "cayley-graph-general"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("Z3 is 2CI"), "{}", stdout(&o));
    assert_eq!(code(&mcayley(&["census", "Z2", "2", "graph"])), 1);
    assert_eq!(
        code(&mcayley(&[
            "census",
            "Z2",
            "4",
            "pcayley-digraph",
            "--budget-s",
            "0"
        ])),
        3
    );
}

#[test]
fn census_shards_resume_and_merge() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for k in 0..2 {
        let shard = format!("{k}/2");
        let o = mcayley(&[
            "census",
            "Z2",
            "3",
            "pcayley-digraph",
            "--shard",
            &shard,
            "--out",
            d,
            "--resume",
        ]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let first = dir.path().join("Z2-m3-pcayley-digraph-shard0of2.jsonl");
    let lines = std::fs::read_to_string(&first).unwrap().lines().count();
    assert_eq!(lines, 2048);
    let o = mcayley(&[
        "census",
        "Z2",
        "3",
        "pcayley-digraph",
        "--shard",
        "0/2",
        "--out",
        d,
        "--resume",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["examined"], 2048);
    let o = mcayley(&["merge", d, "Z2", "3", "pcayley-digraph"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("4096/4096"), "{}", stdout(&o));
}

#[test]
fn repro_targets() {
    let o = mcayley(&["repro", "F3", "--k", "5"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(
        s.contains("aut-order: 200") && s.contains("mpci-verdict: false"),
        "{s}"
    );
    let o = mcayley(&["repro", "table1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("[ok]").count(), 4);
    assert_eq!(code(&mcayley(&["repro", "F9"])), 0);
    assert_eq!(code(&mcayley(&["repro", "nope"])), 2);
}
