//! Domain consistency from bound consistency, by enumerating which maximal
//! run of each holey domain a support lies in.

use std::collections::HashSet;

use crate::domain::{Domain, Value};
use crate::error::{Error, Result};
use crate::state::{ProblemState, Pruning, VarId};

/// Closed interval `lo..=hi`.
pub type Bounds = (Value, Value);

/// Maximal gap-free runs of a domain, in increasing order.
pub fn runs(dom: &Domain) -> Vec<Bounds> {
    let mut out: Vec<Bounds> = Vec::new();
    for v in dom.iter() {
        match out.last_mut() {
            Some((_, hi)) if *hi + 1 == v => *hi = v,
            _ => out.push((v, v)),
        }
    }
    out
}

/// Number of values `v` in the domain with `v + 1` outside it, i.e. the
/// number of maximal runs.
pub fn intervals_count(dom: &Domain) -> Result<usize> {
    if dom.is_empty() {
        return Err(Error::usage("intervals_count of an empty domain"));
    }
    Ok(dom.iter().filter(|&v| !dom.contains(v + 1)).count())
}

/// `(p, q)`: the largest run count over the domains, and how many domains
/// have more than one run.
pub fn interval_parameters<'a>(domains: impl IntoIterator<Item = &'a Domain>) -> (usize, usize) {
    domains.into_iter().fold((0, 0), |(p, q), d| {
        let r = runs(d).len();
        (p.max(r), q + usize::from(r > 1))
    })
}

/// A bound-consistency propagator over interval domains.
///
/// Contract: on all-interval input, a non-failing result is bound consistent,
/// so the returned bounds of every variable belong to a satisfying tuple
/// inside the returned box. The lifting relies on it and cannot check it.
pub trait BoundsPropagator {
    /// Narrows `bounds` in place; returns `false` on failure.
    fn propagate(&self, bounds: &mut [Bounds]) -> bool;
}

/// Bound consistency for `x_1 + ... + x_{n-1} = x_n`: the last position is
/// the target.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumBc;

impl BoundsPropagator for SumBc {
    fn propagate(&self, bounds: &mut [Bounds]) -> bool {
        sum_bc(bounds)
    }
}

/// Bounds fixpoint for a unit-coefficient sum. `bounds` lists the summands
/// then the target.
pub fn sum_bc(bounds: &mut [Bounds]) -> bool {
    let Some((target, xs)) = bounds.split_last_mut() else {
        return true;
    };
    loop {
        let min_sum: Value = xs.iter().map(|b| b.0).sum();
        let max_sum: Value = xs.iter().map(|b| b.1).sum();
        let t = (target.0.max(min_sum), target.1.min(max_sum));
        if t.0 > t.1 {
            return false;
        }
        let mut changed = t != *target;
        *target = t;
        for x in xs.iter_mut() {
            let lo = x.0.max(t.0 - (max_sum - x.1));
            let hi = x.1.min(t.1 - (min_sum - x.0));
            if lo > hi {
                return false;
            }
            changed |= (lo, hi) != *x;
            *x = (lo, hi);
        }
        if !changed {
            return true;
        }
    }
}

/// Result of [`lift_to_dc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifted {
    pub pruning: Pruning,
    /// Calls made to the bounds propagator.
    pub bc_calls: u64,
    /// Largest run count over the scope domains.
    pub p: usize,
    /// Number of scope domains with more than one run.
    pub q: usize,
}

/// Enforces domain consistency on `scope` using only a bounds propagator.
///
/// Value `v` of `X_i` is probed by fixing `X_i = v` and trying each choice
/// of run for the other holey variables until the propagator does not fail.
/// A non-failing call also certifies the narrowed bounds of every variable,
/// which are then not probed again.
pub fn lift_to_dc<B: BoundsPropagator + ?Sized>(
    bc: &B,
    state: &ProblemState,
    scope: &[VarId],
    run_product_cap: u64,
) -> Result<Lifted> {
    let var_runs: Vec<Vec<Bounds>> = scope
        .iter()
        .map(|&v| state.domain(v).map(runs))
        .collect::<Result<_>>()?;
    let (p, q) = interval_parameters(scope.iter().map(|&v| state.dom(v)));

    for i in 0..scope.len() {
        let product = var_runs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .try_fold(1u64, |acc, (_, r)| acc.checked_mul(r.len() as u64));
        match product {
            Some(prod) if prod <= run_product_cap => {}
            other => {
                return Err(Error::ParameterTooLarge {
                    parameter: "run-count product",
                    value: other.unwrap_or(u64::MAX),
                    cap: run_product_cap,
                })
            }
        }
    }

    let mut certified: Vec<HashSet<Value>> = vec![HashSet::new(); scope.len()];
    let mut bc_calls = 0u64;
    let mut boxes = vec![(0, 0); scope.len()];

    for i in 0..scope.len() {
        let others: Vec<usize> = (0..scope.len())
            .filter(|&j| j != i && var_runs[j].len() > 1)
            .collect();
        for v in state.dom(scope[i]).iter() {
            if certified[i].contains(&v) {
                continue;
            }
            // mixed-radix counter over the run choices of `others`
            let mut choice = vec![0usize; others.len()];
            loop {
                for (j, r) in var_runs.iter().enumerate() {
                    boxes[j] = (r[0].0, r[r.len() - 1].1);
                }
                for (&j, &c) in others.iter().zip(&choice) {
                    boxes[j] = var_runs[j][c];
                }
                boxes[i] = (v, v);
                bc_calls += 1;
                if bc.propagate(&mut boxes) {
                    for (j, &(lo, hi)) in boxes.iter().enumerate() {
                        certified[j].insert(lo);
                        certified[j].insert(hi);
                    }
                    debug_assert!(certified[i].contains(&v));
                    break;
                }
                if !advance(&mut choice, others.iter().map(|&j| var_runs[j].len())) {
                    break;
                }
            }
        }
    }

    let pruning = Pruning::from_domains(scope.iter().zip(&certified).map(|(&var, ok)| {
        (
            var,
            state
                .dom(var)
                .iter()
                .filter(|v| ok.contains(v))
                .collect::<Domain>(),
        )
    }));
    Ok(Lifted {
        pruning,
        bc_calls,
        p,
        q,
    })
}

fn advance(counter: &mut [usize], radix: impl Iterator<Item = usize>) -> bool {
    for (c, r) in counter.iter_mut().zip(radix) {
        *c += 1;
        if *c < r {
            return true;
        }
        *c = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals_count_examples() {
        assert_eq!(intervals_count(&Domain::from([1, 2, 3])).unwrap(), 1);
        assert_eq!(intervals_count(&Domain::from([1, 3])).unwrap(), 2);
        assert_eq!(intervals_count(&Domain::from([7])).unwrap(), 1);
        assert!(intervals_count(&Domain::empty()).is_err());
        assert_eq!(
            runs(&Domain::from([1, 2, 4, 6, 7])),
            vec![(1, 2), (4, 4), (6, 7)]
        );
    }

    #[test]
    fn sum_bc_examples() {
        let mut b = [(1, 2), (1, 2), (5, 5)];
        assert!(!sum_bc(&mut b));

        let mut b = [(1, 3), (1, 3), (6, 6)];
        assert!(sum_bc(&mut b));
        assert_eq!(b, [(3, 3), (3, 3), (6, 6)]);

        let mut b = [(0, 9), (0, 1), (4, 5)];
        assert!(sum_bc(&mut b));
        assert_eq!(b[0], (3, 5));
        assert_eq!(b[1], (0, 1));
        assert_eq!(b[2], (4, 5));
    }

    fn lift(doms: &[&[Value]]) -> (ProblemState, Vec<VarId>, Lifted) {
        let mut s = ProblemState::new();
        let scope: Vec<VarId> = doms
            .iter()
            .enumerate()
            .map(|(i, d)| {
                s.add_var(format!("V{i}"), Domain::new(d.iter().copied()))
                    .unwrap()
            })
            .collect();
        let l = lift_to_dc(&SumBc, &s, &scope, 4096).unwrap();
        (s, scope, l)
    }

    #[test]
    fn lifted_sum_examples() {
        let (_, v, l) = lift(&[&[1, 3], &[1, 2, 3, 4], &[5]]);
        assert_eq!(l.pruning.domain(v[0]), Some(&Domain::from([1, 3])));
        assert_eq!(l.pruning.domain(v[1]), Some(&Domain::from([2, 4])));

        let (s, v, l) = lift(&[&[1, 2], &[1, 2], &[3]]);
        assert_eq!(l.pruning, s.snapshot(&v));

        let (_, v, l) = lift(&[&[1, 4], &[1, 4], &[8]]);
        assert_eq!(l.pruning.domain(v[0]), Some(&Domain::singleton(4)));
        assert_eq!(l.pruning.domain(v[1]), Some(&Domain::singleton(4)));
        assert_eq!((l.p, l.q), (2, 2));
    }

    #[test]
    fn lifted_sum_wipeout() {
        let (_, _, l) = lift(&[&[1, 3], &[1, 3], &[5]]);
        assert_eq!(l.pruning, Pruning::Wipeout);
    }

    #[test]
    fn run_product_cap() {
        let mut s = ProblemState::new();
        let holey = Domain::from([0, 2, 4]);
        let scope: Vec<VarId> = (0..4)
            .map(|i| s.add_var(format!("V{i}"), holey.clone()).unwrap())
            .collect();
        assert!(matches!(
            lift_to_dc(&SumBc, &s, &scope, 26),
            Err(Error::ParameterTooLarge { value: 27, .. })
        ));
        assert!(lift_to_dc(&SumBc, &s, &scope, 27).is_ok());
    }
}
