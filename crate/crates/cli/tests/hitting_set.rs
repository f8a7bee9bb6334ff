mod common;

use common::fptprop;

fn generate_and_propagate(sets: &[&str], k: u64) -> common::Run {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hs.toml");
    let mut args: Vec<String> = vec!["gen-hitting-set".into(), "--k".into(), k.to_string()];
    for s in sets {
        args.push("--set".into());
        args.push((*s).into());
    }
    args.extend(["--out".into(), path.display().to_string()]);
    let g = fptprop(&args);
    assert_eq!(g.code, 0, "{}", g.stderr);
    fptprop([std::ffi::OsStr::new("propagate"), path.as_os_str()])
}

#[test]
fn three_pairwise_sets_have_no_single_hitter() {
    let r = generate_and_propagate(&["1,2", "2,3", "1,3"], 1);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("constraint `hitting_set`"));
}

#[test]
fn forced_common_value() {
    let r = generate_and_propagate(&["1", "1"], 1);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("N: {0,1} -> {1}"), "{}", r.stdout);
}

#[test]
fn two_disjoint_singletons_need_two() {
    let r = generate_and_propagate(&["1", "2"], 2);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("N: {0,1,2} -> {2}"), "{}", r.stdout);
}

#[test]
fn empty_set_is_rejected() {
    let r = fptprop(["gen-hitting-set", "--set", "1,2", "--set", "", "--k", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("set 2 is empty"), "{}", r.stderr);
}

#[test]
fn generated_file_goes_to_stdout_by_default() {
    let r = fptprop([
        "gen-hitting-set",
        "--set",
        "1,2",
        "--set",
        "2,3",
        "--set",
        "1,3",
        "--k",
        "1",
    ]);
    assert_eq!(r.code, 0);
    let expected = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/hitting_set.toml"),
    );
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/hitting_set.toml"),
            &r.stdout,
        )
        .unwrap();
        return;
    }
    assert_eq!(r.stdout, expected.unwrap());
}
