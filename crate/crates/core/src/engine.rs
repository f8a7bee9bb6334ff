//! Propagation to fixpoint.

use std::collections::VecDeque;

use crate::error::Result;
use crate::state::{FilterOutcome, ProblemState, Pruning, Status, VarId};

/// A contracting, sound filtering procedure over part of a [`ProblemState`].
pub trait Propagator {
    fn name(&self) -> String;

    /// Variables whose change should re-schedule this propagator.
    fn scope(&self, state: &ProblemState) -> Vec<VarId>;

    /// Computes the domains to keep. Must never add values.
    fn prune(&self, state: &ProblemState) -> Result<Pruning>;
}

/// Runs one propagator once and writes its result into `state`.
pub fn run(propagator: &dyn Propagator, state: &mut ProblemState) -> Result<FilterOutcome> {
    let pruning = propagator.prune(state)?;
    state.apply(&pruning, &propagator.name())
}

/// Result of [`fixpoint`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixpoint {
    pub outcome: FilterOutcome,
    /// Calls made to each propagator, by position in the input list.
    pub invocations: Vec<usize>,
    /// Position of the propagator that wiped out, if any.
    pub failed: Option<usize>,
}

/// Applies `propagators` until none of them changes a domain.
///
/// Scheduling is a FIFO queue: a propagator is re-queued whenever a variable
/// in its scope loses a value. On wipeout the state keeps the domains it had
/// just before the failing call.
pub fn fixpoint(state: &mut ProblemState, propagators: &[&dyn Propagator]) -> Result<Fixpoint> {
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); state.num_vars()];
    for (i, p) in propagators.iter().enumerate() {
        for v in p.scope(state) {
            if let Some(w) = watchers.get_mut(v.0) {
                w.push(i);
            }
        }
    }

    let mut queue: VecDeque<usize> = (0..propagators.len()).collect();
    let mut queued = vec![true; propagators.len()];
    let mut invocations = vec![0; propagators.len()];
    let mut outcome = FilterOutcome::unchanged();

    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        invocations[i] += 1;
        let step = run(propagators[i], state)?;
        if step.status == Status::Wipeout {
            outcome.status = Status::Wipeout;
            return Ok(Fixpoint {
                outcome,
                invocations,
                failed: Some(i),
            });
        }
        for var in step.removed.keys() {
            for &j in &watchers[var.0] {
                if !queued[j] {
                    queued[j] = true;
                    queue.push_back(j);
                }
            }
        }
        outcome.absorb(step);
    }

    Ok(Fixpoint {
        outcome,
        invocations,
        failed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::error::Error;

    struct Adds(VarId);

    impl Propagator for Adds {
        fn name(&self) -> String {
            "adds".into()
        }
        fn scope(&self, _: &ProblemState) -> Vec<VarId> {
            vec![self.0]
        }
        fn prune(&self, state: &ProblemState) -> Result<Pruning> {
            let mut d = state.dom(self.0).clone();
            d = d.union(&Domain::singleton(99));
            Ok(Pruning::from_domains([(self.0, d)]))
        }
    }

    #[test]
    fn empty_propagator_list_is_unchanged() {
        let mut s = ProblemState::new();
        s.add_var("X", Domain::from([1, 2])).unwrap();
        let fp = fixpoint(&mut s, &[]).unwrap();
        assert_eq!(fp.outcome, FilterOutcome::unchanged());
        assert!(fp.invocations.is_empty());
    }

    #[test]
    fn additions_are_a_contract_violation() {
        let mut s = ProblemState::new();
        let x = s.add_var("X", Domain::from([1, 2])).unwrap();
        let err = fixpoint(&mut s, &[&Adds(x)]).unwrap_err();
        assert!(matches!(err, Error::ContractViolation { value: 99, .. }));
    }
}
