//! Brute-force reference: constraint checkers on complete assignments and
//! exhaustive domain consistency. Written to be obviously correct, not fast.

use std::collections::BTreeSet;

use crate::automata::{Permutation, TuplePredicate};
use crate::constraint::Constraint;
use crate::domain::{Domain, Value};
use crate::error::{Error, Result};
use crate::state::{ProblemState, Pruning, VarId};

pub fn nvalue_check(xs: &[Value], n: Value) -> bool {
    xs.iter().collect::<BTreeSet<_>>().len() as Value == n
}

pub fn uses_check(xs: &[Value], ys: &[Value]) -> bool {
    xs.iter().all(|x| ys.contains(x))
}

pub fn cardpath_check(xs: &[Value], n: Value, p: usize, predicate: &TuplePredicate) -> bool {
    let held = (0..xs.len().saturating_sub(p - 1))
        .filter(|&i| predicate.holds(&xs[i..i + p]))
        .count();
    held as Value == n
}

/// `xs <=lex sigma(xs)` for every symmetry; false if some image is undefined.
pub fn valsymbreak_check(xs: &[Value], symmetries: &[Permutation]) -> bool {
    symmetries.iter().all(|sigma| {
        let image: Option<Vec<Value>> = xs.iter().map(|&x| sigma.apply(x)).collect();
        image.is_some_and(|img| xs <= img.as_slice())
    })
}

pub fn disjoint_check(xs: &[Value], ys: &[Value]) -> bool {
    xs.iter().all(|x| !ys.contains(x))
}

pub fn among_check(xs: &[Value], set: &[Value], n: Value) -> bool {
    xs.iter().filter(|x| set.contains(x)).count() as Value == n
}

/// `s` holds 1-based indices.
pub fn roots_check(xs: &[Value], s: &[Value], t: &[Value]) -> bool {
    let expected: Vec<Value> = (1..=xs.len() as Value)
        .filter(|&i| t.contains(&xs[i as usize - 1]))
        .collect();
    let mut s = s.to_vec();
    s.sort_unstable();
    s == expected
}

pub fn sum_check(xs: &[Value], target: Value) -> bool {
    xs.iter().sum::<Value>() == target
}

fn check_cap(state: &ProblemState, scope: &[VarId], cap: u128) -> Result<()> {
    let mut estimate: u128 = 1;
    for &v in scope {
        estimate = estimate.saturating_mul(state.domain(v)?.len() as u128);
    }
    if estimate > cap {
        return Err(Error::OracleCapExceeded { estimate, cap });
    }
    Ok(())
}

/// Calls `visit` on every assignment of `scope`, in lexicographic order of
/// variable position then value.
fn for_each_assignment(state: &ProblemState, scope: &[VarId], mut visit: impl FnMut(&[Value])) {
    let doms: Vec<&Domain> = scope.iter().map(|&v| state.dom(v)).collect();
    let mut digits = vec![0usize; scope.len()];
    let mut tuple: Vec<Value> = doms.iter().map(|d| d.values()[0]).collect();
    loop {
        visit(&tuple);
        let mut pos = scope.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < doms[pos].len() {
                tuple[pos] = doms[pos].values()[digits[pos]];
                break;
            }
            digits[pos] = 0;
            tuple[pos] = doms[pos].values()[0];
        }
    }
}

/// Exact domain consistency: keeps a value iff some satisfying assignment of
/// `scope` uses it.
pub fn brute_force_dc(
    check: impl Fn(&[Value]) -> bool,
    state: &ProblemState,
    scope: &[VarId],
    cap: u128,
) -> Result<Pruning> {
    check_cap(state, scope, cap)?;
    let mut supported: Vec<BTreeSet<Value>> = vec![BTreeSet::new(); scope.len()];
    for_each_assignment(state, scope, |t| {
        if check(t) {
            for (s, &v) in supported.iter_mut().zip(t) {
                s.insert(v);
            }
        }
    });
    let mut kept: Vec<(VarId, Domain)> = Vec::with_capacity(scope.len());
    for (&var, vals) in scope.iter().zip(supported) {
        let dom = Domain::new(vals);
        match kept.iter_mut().find(|(v, _)| *v == var) {
            Some((_, d)) => *d = d.intersect(&dom),
            None => kept.push((var, dom)),
        }
    }
    Ok(Pruning::from_domains(kept))
}

/// Every satisfying assignment of `scope`, in lexicographic order.
pub fn enumerate_solutions(
    check: impl Fn(&[Value]) -> bool,
    state: &ProblemState,
    scope: &[VarId],
    cap: u128,
) -> Result<Vec<Vec<Value>>> {
    check_cap(state, scope, cap)?;
    let mut out = Vec::new();
    for_each_assignment(state, scope, |t| {
        if check(t) {
            out.push(t.to_vec());
        }
    });
    Ok(out)
}

/// [`brute_force_dc`] over a posted constraint's full scope, set bits
/// included.
pub fn constraint_dc(constraint: &Constraint, state: &ProblemState, cap: u128) -> Result<Pruning> {
    let scope = constraint.scope(state)?;
    brute_force_dc(
        |t| constraint.check(state, t).unwrap_or(false),
        state,
        &scope,
        cap,
    )
}
