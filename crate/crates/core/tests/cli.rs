use std::path::PathBuf;
use std::process::{Command, Output};

fn sperner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sperner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn construct_writes_verified_document() {
    let path = scratch("cli-17-8.json");
    let o = sperner(&[
        "construct",
        "--n",
        "17",
        "--k",
        "8",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = std::fs::read_to_string(&path).unwrap();
    let built = sperner::format::parse(&doc).unwrap();
    assert!(built.same_as(&sperner::fixtures::system("fig-17-8").unwrap()));

    let v = sperner(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("valid"));
}

#[test]
fn construct_method_mismatch_is_usage_error() {
    let o = sperner(&["construct", "--n", "10", "--k", "4", "--method", "dev-2k1"]);
    assert_eq!(o.status.code(), Some(64));
    let o = sperner(&["construct", "--n", "10", "--k", "4", "--method", "nonsense"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn usage_help_and_version() {
    assert_eq!(sperner(&["--bogus"]).status.code(), Some(64));
    assert_eq!(sperner(&[]).status.code(), Some(64));
    assert_eq!(sperner(&["--help"]).status.code(), Some(0));
    assert_eq!(sperner(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let bad = scratch("cli-bad.txt");
    std::fs::write(&bad, "4 2 2\n0,1|2,3\n0,1,2|3\n").unwrap();
    let o = sperner(&["verify", "--report", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("invalid"), "{out}");
    assert!(out.lines().count() > 1, "{out}");

    let broken = scratch("cli-broken.txt");
    std::fs::write(&broken, "7 3 1\n0,1|2,3|4,5\n").unwrap();
    let o = sperner(&["verify", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("element 6 uncovered"));

    let o = sperner(&["verify", scratch("does-not-exist").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bounds_output() {
    let o = sperner(&["bounds", "--n", "9", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(first.contains("lower 8"), "{first}");
    assert!(first.contains("upper 8"), "{first}");
    assert!(first.ends_with("exact"), "{first}");

    let o = sperner(&["bounds", "--table", "--max-n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    // header plus one row per 1 <= k <= n <= 6
    assert_eq!(stdout(&o).lines().count(), 1 + 21);

    assert_eq!(sperner(&["bounds", "--n", "9"]).status.code(), Some(64));
}

#[test]
fn search_exit_codes() {
    let o = sperner(&["search", "--n", "7", "--k", "3", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("size 5 proven"));

    let o = sperner(&["search", "--n", "10", "--k", "4", "--time-limit", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("not proven"));

    let o = sperner(&["search", "--n", "8", "--k", "3", "--target", "6"]);
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(
        sperner(&["search", "--n", "5", "--k", "3"]).status.code(),
        Some(64)
    );
}

#[test]
fn fixtures_list_and_emit() {
    let o = sperner(&["fixtures", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);

    let o = sperner(&["fixtures", "emit", "fig1", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let s = sperner::format::parse(&stdout(&o)).unwrap();
    assert_eq!((s.n(), s.k(), s.len()), (7, 3, 5));

    assert_eq!(
        sperner(&["fixtures", "emit", "fig-99"]).status.code(),
        Some(64)
    );
}

#[test]
fn output_is_deterministic() {
    let a = sperner(&["construct", "--n", "25", "--k", "12"]);
    let b = sperner(&["construct", "--n", "25", "--k", "12"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
