use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    root.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vabelian")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_accepts_the_corpus() {
    for g in ["z.grp", "z2.grp", "dinf.grp", "p4.grp"] {
        let o = run(&["validate", "--group", &corpus(g)]);
        assert_eq!(o.status.code(), Some(0), "{g}: {}", stderr(&o));
        assert!(stdout(&o).starts_with("valid"));
    }
}

#[test]
fn validate_rejects_a_bad_determinant() {
    let o = run(&["validate", "--group", &corpus("broken.grp")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("det not ±1"));
}

#[test]
fn broken_groups_are_refused_everywhere() {
    let o = run(&["eval", "--group", &corpus("broken.grp"), "--word", "r"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn missing_file_is_a_data_error() {
    let o = run(&["validate", "--group", "/nonexistent/x.grp"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["geodesic", "--group", &corpus("z.grp")]).status.code(), Some(2));
}

#[test]
fn unknown_letter_is_a_data_error() {
    let o = run(&["eval", "--group", &corpus("z.grp"), "--word", "q"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eval_prints_weight() {
    let o = run(&["eval", "--group", &corpus("dinf.grp"), "--word", "r s r"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weight: 3"));
}

#[test]
fn shuffle_prints_the_patterned_word() {
    let o = run(&["shuffle", "--group", &corpus("dinf.grp"), "--word", "r s r"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("pattern: r\n"));
    assert!(out.contains("v: 0 1 0 0 0 0 0 0\n"));
}

#[test]
fn geodesic_exit_codes() {
    for method in ["oracle", "pattern", "both"] {
        let yes = run(&["geodesic", "--group", &corpus("dinf.grp"), "--word", "r s r", "--method", method]);
        assert_eq!(yes.status.code(), Some(0));
        let no = run(&["geodesic", "--group", &corpus("dinf.grp"), "--word", "r r", "--method", method]);
        assert_eq!(no.status.code(), Some(1));
        assert!(stdout(&no).contains("not geodesic"));
    }
}

#[test]
fn growth_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z2.csv");
    let o = run(&["growth", "--group", &corpus("z2.grp"), "--max-weight", "6", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("n,sphere,cumulative"));
    assert!(text.lines().any(|l| l == "6,252,481"));
    let summary = stdout(&o);
    assert!(summary.contains("horizon: 6"));
    assert!(summary.contains("heuristic"));
}

#[test]
fn growth_methods_agree() {
    let o = run(&["growth", "--group", &corpus("dinf.grp"), "--max-weight", "8", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("8,2,17"));
}

#[test]
fn gamma_export_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let o = run(&["gamma", "export", "--group", &corpus("dinf.grp"), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
}

#[test]
fn machine_from_a_file_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("z.m");
    let m = m.to_str().unwrap();
    let o = run(&["machine", "build", "--group", &corpus("z.grp"), "--decomposition", &format!("file:{}", corpus("z.dec")), "--out", m]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for (w, code) in [("a a a", 0), ("A A", 0), ("", 0), ("a A", 1), ("A a A", 1)] {
        let o = run(&["machine", "run", "--machine", m, "--word", w]);
        assert_eq!(o.status.code(), Some(code), "{w}: {}", stdout(&o));
    }
}

#[test]
fn windowed_machine_refuses_long_words() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("d.m");
    let m = m.to_str().unwrap();
    let o = run(&["machine", "build", "--group", &corpus("dinf.grp"), "--decomposition", "windowed:4", "--out", m]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(run(&["machine", "run", "--machine", m, "--word", "r s r s"]).status.code(), Some(0));
    assert_eq!(run(&["machine", "run", "--machine", m, "--word", "r r"]).status.code(), Some(1));
    let o = run(&["machine", "run", "--machine", m, "--word", "r s r s r s r"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("outside certified window"));
}

#[test]
fn exhausted_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("z.m");
    let m = m.to_str().unwrap();
    run(&["machine", "build", "--group", &corpus("z.grp"), "--decomposition", &format!("file:{}", corpus("z.dec")), "--out", m]);
    let o = run(&["machine", "run", "--machine", m, "--word", "a a a a a a", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_decomposition_source() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("x.m");
    let o = run(&["machine", "build", "--group", &corpus("z.grp"), "--decomposition", "nonsense", "--out", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
