use std::process::{Command, Output};

fn tqps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tqps")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = tqps(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn fdl_enumerate_three_generators() {
    let o = tqps(&["fdl", "enumerate", "--generators", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("18 elements"));
    let v = json(&["fdl", "enumerate", "--generators", "4"]);
    assert_eq!(v["count"], 166);
    assert_eq!(v["schema"], 1);
}

#[test]
fn out_of_range_arguments_are_usage_errors() {
    for args in [
        &["verify", "psi", "--n", "4"][..],
        &["verify", "freeness", "--n", "0"][..],
        &["fdl", "enumerate", "--generators", "6"][..],
        &["verify", "cocycle", "--n", "1"][..],
        &["verify", "nonsense"][..],
        &["verify", "psi", "--n", "1", "--format", "dot"][..],
        &[][..],
    ] {
        assert_eq!(tqps(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invalid_thread_cap_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_tqps"))
        .args(["verify", "psi", "--n", "1"])
        .env("TQPS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn freeness_json_is_byte_identical_across_runs_and_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_tqps"))
            .args(["verify", "freeness", "--n", "2", "--seed", "11", "--format", "json"])
            .env("TQPS_THREADS", threads)
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["N"], 2);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["verdict"]["verdict"], "free");
    assert!(v["lemma34"].as_array().is_some_and(|a| !a.is_empty()));
    assert!(v["lemma35"].as_array().is_some_and(|a| !a.is_empty()));
    assert_eq!(v["lattice"]["size"], 18);
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "psi", "--n", "3", "--samples", "100"][..],
        &["verify", "cocycle", "--n", "3", "--samples", "10"][..],
        &["verify", "kernel-images", "--n", "3", "--samples", "10"][..],
        &["classical", "lattice", "--n", "2"][..],
        &["classical", "transitions", "--n", "3", "--trials", "200"][..],
        &["birkhoff", "roundtrip", "--poset-size", "5", "--trials", "20"][..],
    ] {
        let v = json(args);
        assert_eq!(v["passed"], true, "{args:?}");
        assert_eq!(v["schema"], 1);
    }
}

#[test]
fn cocycle_report_covers_all_distinct_triples() {
    let v = json(&["verify", "cocycle", "--n", "2", "--samples", "5"]);
    assert_eq!(v["reports"].as_array().unwrap().len(), 6);
}

#[test]
fn hasse_exports() {
    let o = tqps(&["export", "hasse", "--target", "fdl", "--generators", "3"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("[label=").count(), 18);
    let v = json(&["export", "hasse", "--target", "kernels", "--n", "1"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);
    let v = json(&["export", "hasse", "--target", "classical", "--n", "2"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 18);
    let o = tqps(&["classical", "lattice", "--n", "1", "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("tqps-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("psi.json");
    let o = tqps(&["verify", "psi", "--n", "1", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify psi");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn list_prints_map() {
    let o = tqps(&["--list"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("verify cocycle"));
    assert!(s.contains("verify freeness"));
}

#[test]
fn library_entry_point_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = tqps_cli::run_with(["tqps", "fdl", "enumerate", "--generators", "2"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, tqps(&["fdl", "enumerate", "--generators", "2"]).stdout);
}
