use std::path::PathBuf;
use std::process::{Command, Output};

fn specs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_profinite"))
        .current_dir(specs())
        .args(args)
        .output()
        .unwrap()
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

fn levels(text: &str) -> Vec<bool> {
    text.lines().map(|l| l.ends_with("true")).collect()
}

#[test]
fn eval_two_adic_involution() {
    let out = stdout(&[
        "eval",
        "--group",
        "twoadic.spec",
        "--formula",
        "E x. x != 1 & x^2 = 1",
        "--kmax",
        "6",
    ]);
    assert_eq!(levels(&out), vec![true; 7]);
}

#[test]
fn eval_trivial_group() {
    let out = stdout(&[
        "eval",
        "--group",
        "trivial.spec",
        "--formula",
        "E x. x != 1",
        "--kmax",
        "3",
    ]);
    assert_eq!(out, "level 0: false\nlevel 1: false\nlevel 2: false\nlevel 3: false\n");
}

#[test]
fn eval_sigma2_mock() {
    // stage 0 already holds the swap (0 1)
    let out = stdout(&[
        "eval",
        "--group",
        "sigma2_mock.spec",
        "--formula",
        "E x. x != 1 & x^2 = 1",
        "--kmax",
        "4",
    ]);
    assert_eq!(levels(&out), vec![true; 5]);
}

#[test]
fn eval_binds_handles() {
    let out = stdout(&[
        "eval",
        "--group",
        "builtin:two_adic",
        "--formula",
        "gen^2 != 1",
        "--kmax",
        "2",
    ]);
    assert_eq!(levels(&out), vec![false, true, true]);
    let out = run(&["eval", "--group", "builtin:two_adic", "--formula", "y = 1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decide_oi_certifies_order_five() {
    let out = stdout(&[
        "decide",
        "--mode",
        "oi",
        "--group",
        "cp235.spec",
        "--formula",
        "@alpha:2",
        "--kmax",
        "8",
    ]);
    assert!(out.contains("verdict = \"CertifiedTrue(2)\""), "{out}");
}

#[test]
fn decide_witness_reports_extinction() {
    let out = stdout(&[
        "decide",
        "--mode",
        "witness",
        "--group",
        "twoadic.spec",
        "--formula",
        "x != 1 & x^2 = 1",
        "--kmax",
        "8",
    ]);
    assert!(out.contains("no surviving chain"), "{out}");
    assert!(out.contains("width_profile = [1, 1, 1, 1, 1, 1, 1, 1, 1]"), "{out}");
}

#[test]
fn decide_oi_refuses_two_adic() {
    let out = run(&[
        "decide",
        "--mode",
        "oi",
        "--group",
        "twoadic.spec",
        "--formula",
        "E x. x != 1",
        "--kmax",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("refusing"));
}

#[test]
fn decide_fv_and_limit() {
    let out = stdout(&[
        "decide",
        "--mode",
        "fv",
        "--group",
        "builtin:cp2",
        "--formula",
        "A x. x^2 = 1",
        "--kmax",
        "4",
    ]);
    assert!(out.contains("stabilized true from level 0"), "{out}");
    let out = stdout(&[
        "decide",
        "--mode",
        "limit",
        "--group",
        "builtin:two_adic",
        "--formula",
        "gen^2 != 1",
        "--kmax",
        "4",
    ]);
    assert!(out.contains("CertifiedTrue(1)"), "{out}");
}

#[test]
fn construct_sigma1_logs_allocations() {
    let out = stdout(&[
        "construct",
        "--kind",
        "sigma1",
        "--oracle",
        "mock1.txt",
        "--stages",
        "20",
    ]);
    assert_eq!(out.lines().count(), 20);
    assert!(out.contains("stage=3 block=3+2 H=C2 note=\"serves e=0\""), "{out}");
    assert!(out.contains("H=C37"), "{out}");
}

#[test]
fn construct_sqrt_without_halting_is_two_branching() {
    let out = stdout(&[
        "construct",
        "--kind",
        "sqrt_diag",
        "--oracle",
        "empty.txt",
        "--stages",
        "10",
    ]);
    assert_eq!(out.lines().count(), 10);
    assert!(out.lines().all(|l| l.ends_with("+2 H=C2")), "{out}");
}

#[test]
fn construct_sigma2_growth_blocks() {
    let out = stdout(&[
        "construct",
        "--kind",
        "sigma2",
        "--oracle",
        "mock2.txt",
        "--stages",
        "12",
    ]);
    // W_0 grows for the third time at <0,4> = 10: a block of 2^4 points
    assert!(
        out.contains("stage=10 pair=<0,4> block=65+16 H=C16 link=stage3/mod8"),
        "{out}"
    );
    assert!(out.contains("stage=11 pair=<1,3> block=81+27 H=C27"), "{out}");
}

#[test]
fn construct_writes_spec_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("s2.spec");
    let log = stdout(&[
        "construct",
        "--kind",
        "sigma2",
        "--oracle",
        "mock2.txt",
        "--stages",
        "6",
        "-o",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read_to_string(dir.path().join("s2.log")).unwrap(), log);
    let out = stdout(&[
        "eval",
        "--group",
        spec.to_str().unwrap(),
        "--formula",
        "E x. x != 1 & x^3 = 1",
        "--kmax",
        "2",
    ]);
    assert_eq!(levels(&out), vec![false, false, true]);
}

#[test]
fn construct_rejects_malformed_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "halt 0 x 1\n").unwrap();
    let out = run(&["construct", "--kind", "sigma1", "--oracle", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dump_sizes() {
    let out = stdout(&["dump", "--group", "twoadic.spec", "--depth", "3", "--encoding", "block"]);
    assert_eq!(out.lines().next(), Some("levels=4 encoding=block"));
    assert_eq!(out.lines().count() - 1, 2 + 4 + 8 + 16);
    let out = stdout(&["dump", "--group", "trivial.spec", "--depth", "1"]);
    assert_eq!(out, "levels=2 encoding=block\n0 0 - [0]\n1 1 0 [0 1]\n");
}

#[test]
fn dump_reimports_as_a_group() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.dump");
    stdout(&[
        "dump",
        "--group",
        "builtin:s3",
        "--depth",
        "2",
        "-o",
        path.to_str().unwrap(),
    ]);
    let again = stdout(&["dump", "--group", path.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(again, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn verify_suites_pass() {
    let out = stdout(&[
        "verify",
        "--suite",
        "persistence",
        "--group",
        "cp22.spec",
        "--kmax",
        "6",
    ]);
    assert!(out.contains("0 violations"), "{out}");
    let out = stdout(&["verify", "--suite", "coherence", "--kmax", "4"]);
    assert_eq!(out.matches(": pass").count(), 7, "{out}");
}

#[test]
fn parse_reports_positions() {
    let out = stdout(&["parse", "--formula", "A x. E y. y*y = x"]);
    assert_eq!(
        out,
        "A x. E y. y^2*x^-1 = 1\nshape: general\npolarity: positive\nquantifier rank: 2\nfree: none\n"
    );
    let out = run(&["parse", "--formula", "E x. x * = 1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("position 9"), "{err}");
}

#[test]
fn missing_group_file_is_an_input_error() {
    let out = run(&["dump", "--group", "no-such.spec"]);
    assert_eq!(out.status.code(), Some(2));
}
