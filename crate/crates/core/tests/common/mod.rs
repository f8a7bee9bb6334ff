#![allow(dead_code)]

use fptprop::{oracle, Config, Constraint, Domain, ProblemState, Pruning, Value, VarId};

pub fn add_vars(s: &mut ProblemState, prefix: &str, doms: &[&[Value]]) -> Vec<VarId> {
    doms.iter()
        .enumerate()
        .map(|(i, d)| {
            s.add_var(format!("{prefix}{}", i + 1), Domain::new(d.iter().copied()))
                .unwrap()
        })
        .collect()
}

/// Propagator result and oracle result for the first posted constraint.
pub fn both(state: &ProblemState) -> (Pruning, Pruning) {
    let c = &state.constraints()[0];
    let config = Config::default();
    let fpt = c.prune(state, &config).unwrap();
    let dc = oracle::constraint_dc(c, state, config.oracle_cap).unwrap();
    (fpt, dc)
}

/// Posts `c` and returns the propagator result, asserting it equals the oracle.
pub fn post_and_check(state: &mut ProblemState, c: Constraint) -> Pruning {
    state.add_constraint(c).unwrap();
    let (fpt, dc) = both(state);
    assert_eq!(fpt, dc, "propagator and oracle disagree");
    fpt
}
