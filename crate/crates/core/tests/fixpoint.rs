mod common;

use common::add_vars;
use fptprop::engine::{fixpoint, run, Propagator};
use fptprop::{Config, Constraint, Domain, ProblemState, Status};

#[test]
fn single_propagator_fixpoint_equals_one_call() {
    let mut s = ProblemState::new();
    let xs = add_vars(&mut s, "X", &[&[1, 2], &[2, 3], &[1, 3]]);
    let n = s.add_var("N", Domain::from([1, 3])).unwrap();
    s.add_constraint(Constraint::NValue { xs, n }).unwrap();
    let p = s.constraints()[0].propagator(Config::default());

    let mut once = s.clone();
    let out = run(&p, &mut once).unwrap();
    assert_eq!(out.removed[&n], vec![1]);

    let mut fp = s.clone();
    let res = fixpoint(&mut fp, &[&p]).unwrap();
    assert_eq!(res.outcome.status, Status::Pruned);
    assert_eq!(once, fp);
}

#[test]
fn uses_and_sum_feed_each_other_in_either_order() {
    let mut s = ProblemState::new();
    let x = add_vars(&mut s, "X", &[&[1, 2, 3]]);
    let ys = add_vars(&mut s, "Y", &[&[1, 2, 3], &[1, 2, 3]]);
    let t = s.add_var("T", Domain::from([2])).unwrap();
    s.add_constraint(Constraint::Uses {
        xs: x.clone(),
        ys: ys.clone(),
    })
    .unwrap();
    s.add_constraint(Constraint::SumEq {
        xs: ys.clone(),
        target: t,
    })
    .unwrap();
    let props: Vec<_> = s
        .constraints()
        .iter()
        .map(|c| c.propagator(Config::default()))
        .collect();

    let mut a = s.clone();
    let fa = fixpoint(&mut a, &[&props[0] as &dyn Propagator, &props[1]]).unwrap();
    let mut b = s.clone();
    let fb = fixpoint(&mut b, &[&props[1] as &dyn Propagator, &props[0]]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.dom(x[0]), &Domain::singleton(1));
    assert_eq!(a.dom(ys[0]), &Domain::singleton(1));
    // Uses runs again after the sum fixes the Y side
    assert!(fa.invocations[0] >= 2);
    assert!(fb.invocations.iter().all(|&c| c >= 1));
}

#[test]
fn wipeout_names_the_failing_propagator() {
    let mut s = ProblemState::new();
    let xs = add_vars(&mut s, "X", &[&[1, 2]]);
    let ys = add_vars(&mut s, "Y", &[&[1], &[2]]);
    s.add_constraint(Constraint::Disjoint { xs, ys }).unwrap();
    let p = s.constraints()[0].propagator(Config::default());
    let before = s.clone();
    let res = fixpoint(&mut s, &[&p]).unwrap();
    assert_eq!(res.outcome.status, Status::Wipeout);
    assert_eq!(res.failed, Some(0));
    assert_eq!(s, before);
}
