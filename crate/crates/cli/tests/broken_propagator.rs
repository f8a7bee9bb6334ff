//! Negative control: a filter that misses a pruning must be reported as a
//! mismatch on the variable it got wrong.

mod common;

use fptprop::random::Shape;
use fptprop::{Config, Constraint, Kind, ProblemState, Pruning};
use fptprop_cli::commands::{compare_random, compare_with, fpt_filter};
use fptprop_cli::{InstanceFile, Render};

/// The real filter, except that it never removes values from `N`.
fn keeps_n(c: &Constraint, state: &ProblemState, config: &Config) -> fptprop::Result<Pruning> {
    let mut p = fpt_filter(c, state, config)?;
    if let (Pruning::Domains(d), Some(n)) = (&mut p, state.find_var("N")) {
        if d.contains_key(&n) {
            d.insert(n, state.dom(n).clone());
        }
    }
    Ok(p)
}

#[test]
fn broken_filter_is_named_in_the_diff() {
    let source = std::fs::read_to_string(common::instance("nvalue.toml")).unwrap();
    let model = InstanceFile::parse(&source)
        .unwrap()
        .build(&source)
        .unwrap();

    let report = compare_with(&model, Config::default(), &keeps_n).unwrap();
    assert!(!report.matches());
    assert_eq!(
        report.mismatches(),
        vec![("c0".to_string(), "N".to_string())]
    );
    let text = report.text();
    assert!(
        text.contains("  N: {1,3} propagator {1,3} oracle {3} MISMATCH"),
        "{text}"
    );
    assert!(
        text.contains("  X1: {1,2} propagator {1,2} oracle {1,2} MATCH"),
        "{text}"
    );

    let good = compare_with(&model, Config::default(), &fpt_filter).unwrap();
    assert!(good.matches());
}

#[test]
fn broken_filter_fails_random_mode() {
    let shape = Shape::new(4, 3, 3);
    let summary =
        compare_random(&[Kind::NValue], 1, shape, 100, Config::default(), &keeps_n).unwrap();
    assert!(!summary.matches());
    assert!(summary.rows[0].mismatches > 0);
    assert!(summary
        .first_mismatch
        .as_deref()
        .unwrap()
        .contains("kind = \"nvalue\""));
}
