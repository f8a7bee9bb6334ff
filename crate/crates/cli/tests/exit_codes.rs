mod common;

use common::{fptprop, instance, instance_files};

#[test]
fn propagate_reports_worked_nvalue_pruning() {
    let r = fptprop([std::path::Path::new("propagate"), &instance("nvalue.toml")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("N: {1,3} -> {3}"), "{}", r.stdout);
    assert!(r.stdout.contains("X1: {1,2} -> {1,2}"));
    assert!(r.stdout.starts_with("status: pruned"));
}

#[test]
fn infeasible_disjoint_exits_one_naming_the_constraint() {
    let r = fptprop([
        std::path::Path::new("propagate"),
        &instance("disjoint_infeasible.toml"),
    ]);
    assert_eq!(r.code, 1);
    assert!(
        r.stdout.contains("status: wipeout (constraint `apart`)"),
        "{}",
        r.stdout
    );
}

#[test]
fn no_constraints_is_unchanged() {
    let r = fptprop([std::path::Path::new("propagate"), &instance("empty.toml")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("status: unchanged"));
}

#[test]
fn parse_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[[var]]\nname = \"X\"\ndomain = [1, \"a\"]\n", "line 3, column 14"),
        ("[[var]]\nname = \"X\"\n", "missing field `domain`"),
        ("[[var]]\nname = \"X\"\ndomain = [1]\n\n[[constraint]]\nkind = \"nvalu\"\n", "unknown variant `nvalu`"),
        ("[[var]]\nname = \"X\"\ndomain = [1]\n\n[[constraint]]\nkind = \"nvalue\"\nx = [\"X\"]\nn = \"Q\"\n", "line 5, column 1: constraint `c0`, field `n`: undeclared variable `Q`"),
        ("[[var]]\nname = \"X\"\ndomain = [1]\n[[var]]\nname = \"X\"\ndomain = [2]\n", "line 4, column 1: variable `X`, field `name`: declared twice"),
        ("[[var]]\nname = \"X\"\ndomain = []\n", "field `domain`: must not be empty"),
        ("[[var]]\nname = \"X\"\ndomain = [1]\nextra = 2\n", "unknown field `extra`"),
        ("[[var]]\nname = \"X\"\ndomain = [3000000000]\n", "outside the 32-bit range"),
        (
            "[[var]]\nname = \"X\"\ndomain = [1]\n[[var]]\nname = \"N\"\ndomain = [1]\n[[constraint]]\nkind = \"cardpath\"\nx = [\"X\"]\nn = \"N\"\np = 1\nbuiltin = \"bigger\"\n",
            "field `builtin`: unknown builtin `bigger`",
        ),
        ("[[var]]\nname = \"X\"\ndomain = [1\n", "line 3"),
    ];
    for (i, (text, expected)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.toml"));
        std::fs::write(&path, text).unwrap();
        let r = fptprop([std::path::Path::new("propagate"), &path]);
        assert_eq!(r.code, 2, "case {i}");
        assert!(r.stderr.contains(expected), "case {i}: {}", r.stderr);
        assert!(r.stdout.is_empty());
    }
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    assert_eq!(fptprop(["propagate", "/nonexistent/file.toml"]).code, 2);
    assert_eq!(fptprop(["frobnicate"]).code, 2);
    assert_eq!(fptprop(["compare"]).code, 2);
    assert_eq!(fptprop(["--help"]).code, 0);
}

#[test]
fn parameter_caps_exit_two() {
    let r = fptprop([
        std::path::Path::new("--k-max"),
        std::path::Path::new("0"),
        std::path::Path::new("propagate"),
        &instance("among_set.toml"),
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("exceeds the cap"), "{}", r.stderr);
}

#[test]
fn every_shipped_instance_matches_the_oracle() {
    for file in instance_files() {
        let r = fptprop([std::path::Path::new("compare"), &file]);
        assert_eq!(r.code, 0, "{}: {}", file.display(), r.stdout);
        for line in r.stdout.lines().filter(|l| l.starts_with("  ")) {
            assert!(line.ends_with(" MATCH"), "{line}");
        }
    }
}

#[test]
fn oracle_cap_exceeded_advises_smaller_instance() {
    let r = fptprop([
        std::path::Path::new("--oracle-cap"),
        std::path::Path::new("3"),
        std::path::Path::new("compare"),
        &instance("nvalue.toml"),
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("smaller instance"), "{}", r.stderr);
}

#[test]
fn random_compare_prints_summary() {
    let r = fptprop(["compare", "--random", "7", "4", "3", "3", "--count", "20"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r
        .stdout
        .starts_with("status: match (seed 7, n<=4, d<=3, k<=3)"));
    for kind in ["nvalue", "roots", "sum_eq"] {
        assert!(
            r.stdout
                .lines()
                .any(|l| l.starts_with(kind) && l.contains(" 20 ")),
            "{}",
            r.stdout
        );
    }
    let r = fptprop([
        "compare",
        "--random",
        "7",
        "4",
        "3",
        "3",
        "--count",
        "5",
        "--kinds",
        "nvalue,bogus",
    ]);
    assert_eq!(r.code, 2);
}

#[test]
fn bench_rejects_unknown_kind_listing_kinds() {
    let r = fptprop(["bench", "--kind", "alldiff", "--n", "10", "--k", "2"]);
    assert_eq!(r.code, 2);
    for kind in [
        "nvalue",
        "uses",
        "cardpath",
        "valsymbreak",
        "disjoint",
        "among_set",
        "roots",
        "sum_eq",
        "extensional",
    ] {
        assert!(r.stderr.contains(kind), "{}", r.stderr);
    }
}

#[test]
fn bench_emits_one_row_per_size() {
    let r = fptprop([
        "--format",
        "machine",
        "bench",
        "--kind",
        "nvalue",
        "--n",
        "10,20",
        "--k",
        "2..3",
        "--samples",
        "1",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let sizes: Vec<(u64, u64)> = rows
        .iter()
        .map(|r| (r["n"].as_u64().unwrap(), r["k"].as_u64().unwrap()))
        .collect();
    assert_eq!(sizes, vec![(10, 2), (20, 2), (10, 3), (20, 3)]);
    assert!(rows.iter().all(|r| r["seconds"].as_f64().unwrap() > 0.0));
    assert_eq!(
        fptprop(["bench", "--kind", "nvalue", "--n", "x", "--k", "2"]).code,
        2
    );
}
