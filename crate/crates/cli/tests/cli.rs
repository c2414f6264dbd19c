use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramicalc"))
        .args(args)
        .env_remove("RAMICALC_GRID")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn bn_listing() {
    assert!(stdout(&["bn", "--max", "2"])
        .trim_end()
        .ends_with("b_2 = x^2 + 7x + 9"));
    assert_eq!(stdout(&["bn", "--max", "0"]), "b_0 = 1\n");
    let b = json(&["bn", "--max", "3"]);
    assert_eq!(b[3], serde_json::json!(["90", "76", "17", "1"]));
}

#[test]
fn bn_cap() {
    assert_eq!(run(&["bn", "--max", "21"]).status.code(), Some(2));
    assert!(run(&["bn", "--max", "20"]).status.success());
}

#[test]
fn bound_tables() {
    let an = stdout(&["bound", "an", "--n", "1", "--lc", "3", "--rank", "1"]);
    assert!(an.contains("h^0 ≤ 1\n") && an.contains("h^1 ≤ 3\n") && an.contains("h^2 = 0\n"));
    let curve = stdout(&[
        "bound", "curve", "--genus", "0", "--points", "1", "--lc", "3", "--rank", "1",
    ]);
    assert!(curve.contains("h^1 ≤ 3\n") && curve.contains("h^2 = 0\n"));
    assert!(
        stdout(&["bound", "an", "--n", "2", "--lc", "0", "--rank", "5"]).contains("h^2 ≤ 45\n")
    );
    let compact = json(&[
        "bound",
        "an-compact",
        "--n",
        "2",
        "--lc",
        "0",
        "--rank",
        "1",
    ]);
    assert_eq!(
        compact["bounds"],
        serde_json::json!(["0", "0", "9", "0", "1"])
    );
}

#[test]
fn bound_rejects_bad_parameters() {
    let out = run(&[
        "bound", "curve", "--genus", "0", "--points", "0", "--lc", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|D| >= 1"));
    assert_eq!(
        run(&["bound", "an", "--n", "1", "--lc", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["bound", "an", "--n", "1", "--lc", "1/0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gos_from_flags_and_file() {
    let text = stdout(&[
        "gos",
        "--genus",
        "0",
        "--rank",
        "1",
        "--point",
        "dimtot=4,rank=0",
    ]);
    assert!(text.starts_with("chi = -2\n"));
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "curve.json",
        r#"{"genus":0,"generic_rank":1,"bad_points":[{"label":"inf","dimtot":"4","stalk_rank":0}]}"#,
    );
    let doc = json(&["gos", "--in", &path]);
    assert_eq!(doc["chi"], "-2");
    assert_eq!(doc["cc"]["fibers"][0]["coeff"], "-4");
    assert_eq!(
        run(&["gos", "--genus", "0", "--rank", "1", "--point", "rank=0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn chi_commands() {
    let s = json(&["chi-bounds", "--n", "2", "--lc", "0"]);
    assert_eq!(
        (s["lower"].as_str(), s["upper"].as_str()),
        (Some("-2"), Some("9"))
    );
    let t = json(&["chi-twisted", "--n", "2", "--m", "2"]);
    assert_eq!(
        (t["lower"].as_str(), t["upper"].as_str()),
        (Some("-1"), Some("2"))
    );
    assert_eq!(
        run(&["chi-bounds", "--n", "1", "--lc", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn slopes_commands() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        &dir,
        "m.json",
        r#"{"rank":1,"perfect_residue":true,"log":[{"slope":"3","rank":1}]}"#,
    );
    let n = write(
        &dir,
        "n.json",
        r#"{"rank":2,"perfect_residue":true,"log":[{"slope":"1/2","rank":2}]}"#,
    );
    assert_eq!(json(&["slopes", "swan", "--in", &m])["swan"], "3");
    assert_eq!(json(&["slopes", "dimtot", "--in", &m])["dimtot"], "4");
    assert_eq!(
        json(&["slopes", "dual", "--in", &n]),
        json(&["slopes", "dual", "--in", &n])
    );
    let t = json(&["slopes", "tensor", "--in", &m, "--with", &n]);
    assert_eq!(t["rank"], 2);
    assert_eq!(t["log"][0]["slope"], "3");
    let b = json(&["slopes", "tensor-bounds", "--in", &n, "--with", &m]);
    assert_eq!(
        (
            b["lower"].as_str(),
            b["upper"].as_str(),
            b["exact"].as_str()
        ),
        (Some("1"), Some("7"), Some("6"))
    );
    assert_eq!(
        run(&["slopes", "tensor", "--in", &m, "--with", &m])
            .status
            .code(),
        Some(2)
    );

    let a = json(&["slopes", "as", "--m", "3", "--p", "2"]);
    assert_eq!(a["nonlog"][0]["slope"], "4");
    assert_eq!(
        run(&["slopes", "as", "--m", "4", "--p", "2"]).status.code(),
        Some(2)
    );
    let d = json(&["slopes", "two-lines", "--m", "3", "--p", "2"]);
    assert_eq!(d["components"], serde_json::json!({"D": "12", "E": "4"}));
    assert_eq!(
        json(&[
            "slopes",
            "two-lines",
            "--m",
            "3",
            "--p",
            "2",
            "--alpha",
            "1",
            "--beta",
            "1"
        ])["conductor"],
        "16"
    );
    let pb = json(&[
        "slopes",
        "pushforward-bound",
        "--lc-trivial",
        "1",
        "--degree",
        "3",
        "--lc-e",
        "1/2",
    ]);
    assert_eq!(pb["bound"], "5/2");
}

#[test]
fn mu_and_folds() {
    let dir = tempfile::tempdir().unwrap();
    let combo = write(
        &dir,
        "combo.json",
        r#"{"terms":[{"coeff":"3","token":{"name":"O_D","fibers":{"s":{"components":{"D":"1"}}}}}]}"#,
    );
    let mu = json(&["mu", "--in", &combo, "--fiber", "s"]);
    assert_eq!(mu["mu_f"], "3");
    assert_eq!(mu["torsion"]["components"]["D"], "3");

    let a = json(&[
        "assemble",
        "--n",
        "1",
        "--fiber-dim",
        "1",
        "--delta",
        "1",
        "--mu",
        "2",
    ]);
    assert_eq!(a["evaluated"], serde_json::json!(["2", "6", "2"]));

    let fams = write(&dir, "fams.json", r#"[[["1"]], [["1"], ["0", "1"]]]"#);
    let f = json(&["perverse-fold", "--in", &fams, "--at", "1"]);
    assert_eq!(f["sequence"], serde_json::json!([["1"], ["2", "2"]]));
    assert_eq!(f["evaluated"], serde_json::json!(["1", "4"]));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "appendix", "--max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let steps = reports[0]["appendix"].as_array().unwrap();
    assert!(steps.iter().all(|s| s["certified"] == true));
    assert_eq!(
        run(&["verify", "--suite", "sharpness"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["verify", "--suite", "appendix", "--max", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--suite", "appendix", "--max", "21"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn grid_override() {
    let custom = Command::new(env!("CARGO_BIN_EXE_ramicalc"))
        .args(["verify", "--suite", "appendix", "--max", "4"])
        .env("RAMICALC_GRID", "0:1:10")
        .output()
        .unwrap();
    assert_eq!(custom.status.code(), Some(0));
    let broken = Command::new(env!("CARGO_BIN_EXE_ramicalc"))
        .args(["verify", "--suite", "appendix"])
        .env("RAMICALC_GRID", "-1:1:10")
        .output()
        .unwrap();
    assert_eq!(broken.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["nope"]).status.code(), Some(2));
    assert_eq!(run(&["bn", "--max", "x"]).status.code(), Some(2));
    assert_eq!(
        run(&["slopes", "swan", "--in", "/nonexistent/m.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn decimal_column() {
    let text = stdout(&["--decimal", "bound", "an", "--n", "1", "--lc", "1/3"]);
    assert!(text.contains("h^1 ≤ 1/3  (0.333333)"), "{text}");
    let plain = json(&["--decimal", "bound", "an", "--n", "1", "--lc", "1/3"]);
    assert_eq!(plain["bounds"][1], "1/3");
}
