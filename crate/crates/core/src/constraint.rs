//! Constraint descriptors: what is posted, over which variables.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::automata::{self, Permutation, TuplePredicate};
use crate::backdoor;
use crate::config::Config;
use crate::domain::{Domain, Value};
use crate::engine::Propagator;
use crate::error::{Error, Result};
use crate::interval::{self, SumBc};
use crate::oracle;
use crate::regular;
use crate::state::{ProblemState, Pruning, SetVarId, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    NValue,
    Uses,
    CardPath,
    ValSymBreak,
    Disjoint,
    AmongSet,
    Roots,
    SumEq,
    Extensional,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::NValue,
        Kind::Uses,
        Kind::CardPath,
        Kind::ValSymBreak,
        Kind::Disjoint,
        Kind::AmongSet,
        Kind::Roots,
        Kind::SumEq,
        Kind::Extensional,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::NValue => "nvalue",
            Kind::Uses => "uses",
            Kind::CardPath => "cardpath",
            Kind::ValSymBreak => "valsymbreak",
            Kind::Disjoint => "disjoint",
            Kind::AmongSet => "among_set",
            Kind::Roots => "roots",
            Kind::SumEq => "sum_eq",
            Kind::Extensional => "extensional",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Kind::ALL.iter().map(|k| k.as_str()).collect();
                Error::usage(format!(
                    "unknown constraint kind `{s}` (expected one of: {})",
                    names.join(", ")
                ))
            })
    }
}

/// A posted global constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// `xs` take exactly `n` distinct values.
    NValue { xs: Vec<VarId>, n: VarId },
    /// Every value taken by `xs` is taken by some `ys`.
    Uses { xs: Vec<VarId>, ys: Vec<VarId> },
    /// Exactly `n` of the windows `xs[i..i+p]` satisfy `predicate`.
    CardPath {
        xs: Vec<VarId>,
        n: VarId,
        p: usize,
        predicate: TuplePredicate,
    },
    /// `xs <=lex sigma(xs)` for every listed value symmetry.
    ValSymBreak {
        xs: Vec<VarId>,
        symmetries: Vec<Permutation>,
    },
    /// No value is shared between `xs` and `ys`.
    Disjoint { xs: Vec<VarId>, ys: Vec<VarId> },
    /// `n` = number of `xs` whose value lies in `set`.
    AmongSet {
        xs: Vec<VarId>,
        set: SetVarId,
        n: VarId,
    },
    /// `s` = { i : xs[i-1] in t }, with `s` ranging over indices 1..=n.
    Roots {
        xs: Vec<VarId>,
        s: SetVarId,
        t: SetVarId,
    },
    /// `sum(xs) = target`.
    SumEq { xs: Vec<VarId>, target: VarId },
    /// `scope` takes one of the listed tuples.
    Extensional {
        scope: Vec<VarId>,
        tuples: Vec<Vec<Value>>,
    },
}

impl Constraint {
    pub fn kind(&self) -> Kind {
        match self {
            Constraint::NValue { .. } => Kind::NValue,
            Constraint::Uses { .. } => Kind::Uses,
            Constraint::CardPath { .. } => Kind::CardPath,
            Constraint::ValSymBreak { .. } => Kind::ValSymBreak,
            Constraint::Disjoint { .. } => Kind::Disjoint,
            Constraint::AmongSet { .. } => Kind::AmongSet,
            Constraint::Roots { .. } => Kind::Roots,
            Constraint::SumEq { .. } => Kind::SumEq,
            Constraint::Extensional { .. } => Kind::Extensional,
        }
    }

    /// Every 0/1 or finite-domain variable the constraint reads, set
    /// variables expanded to their bits. Assignments passed to
    /// [`Constraint::check`] follow this order.
    pub fn scope(&self, state: &ProblemState) -> Result<Vec<VarId>> {
        let bits = |s: SetVarId| -> Result<Vec<VarId>> { Ok(state.set_var(s)?.bits.clone()) };
        Ok(match self {
            Constraint::NValue { xs, n } | Constraint::CardPath { xs, n, .. } => {
                concat([xs, &vec![*n]])
            }
            Constraint::Uses { xs, ys } | Constraint::Disjoint { xs, ys } => concat([xs, ys]),
            Constraint::ValSymBreak { xs, .. } => xs.clone(),
            Constraint::AmongSet { xs, set, n } => concat([xs, &bits(*set)?, &vec![*n]]),
            Constraint::Roots { xs, s, t } => concat([xs, &bits(*s)?, &bits(*t)?]),
            Constraint::SumEq { xs, target } => concat([xs, &vec![*target]]),
            Constraint::Extensional { scope, .. } => scope.clone(),
        })
    }

    pub(crate) fn validate(&self, state: &ProblemState) -> Result<()> {
        let scope = self.scope(state)?;
        let mut seen = HashSet::new();
        for &v in &scope {
            state.var(v)?;
            if !seen.insert(v) {
                return Err(Error::usage(format!(
                    "{}: variable `{}` occurs twice in the scope",
                    self.kind(),
                    state.name(v)
                )));
            }
        }
        for set in self.set_vars() {
            let sv = state.set_var(set)?;
            for &b in &sv.bits {
                if !state.dom(b).is_subset(&Domain::from([0, 1])) {
                    return Err(Error::usage(format!(
                        "bit `{}` of set variable `{}` is not 0/1",
                        state.name(b),
                        sv.name
                    )));
                }
            }
        }
        match self {
            Constraint::CardPath {
                xs, p, predicate, ..
            } => {
                if *p == 0 || xs.len() < *p {
                    return Err(Error::usage(format!(
                        "cardpath: need 1 <= p <= n, got p = {p}, n = {}",
                        xs.len()
                    )));
                }
                predicate.check_arity(*p)?;
            }
            Constraint::ValSymBreak { symmetries, .. } => {
                let ids: Vec<VarId> = scope.clone();
                automata::check_symmetries(symmetries, ids.iter().map(|&v| state.dom(v)))?;
            }
            Constraint::Roots { xs, s, .. } => {
                let sv = state.set_var(*s)?;
                let expected: Vec<Value> = (1..=xs.len() as Value).collect();
                if sv.universe != expected {
                    return Err(Error::usage(format!(
                        "roots: index set `{}` must range over 1..={}",
                        sv.name,
                        xs.len()
                    )));
                }
            }
            Constraint::Extensional { scope, tuples } => {
                if let Some(t) = tuples.iter().find(|t| t.len() != scope.len()) {
                    return Err(Error::usage(format!(
                        "extensional: tuple of length {} over a scope of {}",
                        t.len(),
                        scope.len()
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn set_vars(&self) -> Vec<SetVarId> {
        match self {
            Constraint::AmongSet { set, .. } => vec![*set],
            Constraint::Roots { s, t, .. } => vec![*s, *t],
            _ => Vec::new(),
        }
    }

    /// The fixed parameter governing the propagator's exponential cost on the
    /// current domains.
    pub fn parameter(&self, state: &ProblemState) -> Result<u64> {
        let union = |vars: &[VarId]| union_of(state, vars).len() as u64;
        let undecided = |set: SetVarId| -> Result<u64> {
            Ok((state.ub(set)?.len() - state.lb(set)?.len()) as u64)
        };
        Ok(match self {
            Constraint::NValue { xs, .. } => union(xs),
            Constraint::Uses { ys, .. } => union(ys),
            Constraint::CardPath { xs, p, .. } => {
                *p as u64 + xs.iter().map(|&x| state.dom(x).len()).max().unwrap_or(0) as u64
            }
            Constraint::ValSymBreak { symmetries, .. } => symmetries.len() as u64,
            Constraint::Disjoint { xs, ys } => {
                union_of(state, xs).intersect(&union_of(state, ys)).len() as u64
            }
            Constraint::AmongSet { set, .. } => undecided(*set)?,
            Constraint::Roots { t, .. } => undecided(*t)?,
            Constraint::SumEq { .. } => {
                let doms: Vec<&Domain> = self.scope(state)?.iter().map(|&v| state.dom(v)).collect();
                let (p, q) = interval::interval_parameters(doms);
                (p + q) as u64
            }
            Constraint::Extensional { .. } => 0,
        })
    }

    /// Checks a complete assignment to [`Constraint::scope`].
    pub fn check(&self, state: &ProblemState, assignment: &[Value]) -> Result<bool> {
        let width = self.scope(state)?.len();
        if assignment.len() != width {
            return Err(Error::usage(format!(
                "{}: assignment of length {} for a scope of {width}",
                self.kind(),
                assignment.len()
            )));
        }
        let members = |set: SetVarId, bits: &[Value]| -> Result<Vec<Value>> {
            let sv = state.set_var(set)?;
            Ok(sv
                .universe
                .iter()
                .zip(bits)
                .filter(|(_, &b)| b == 1)
                .map(|(&v, _)| v)
                .collect())
        };
        Ok(match self {
            Constraint::NValue { xs, .. } => {
                oracle::nvalue_check(&assignment[..xs.len()], assignment[xs.len()])
            }
            Constraint::Uses { xs, .. } => {
                let (x, y) = assignment.split_at(xs.len());
                oracle::uses_check(x, y)
            }
            Constraint::CardPath {
                xs, p, predicate, ..
            } => {
                oracle::cardpath_check(&assignment[..xs.len()], assignment[xs.len()], *p, predicate)
            }
            Constraint::ValSymBreak { symmetries, .. } => {
                oracle::valsymbreak_check(assignment, symmetries)
            }
            Constraint::Disjoint { xs, .. } => {
                let (x, y) = assignment.split_at(xs.len());
                oracle::disjoint_check(x, y)
            }
            Constraint::AmongSet { xs, set, .. } => {
                let n = xs.len();
                let rest = &assignment[n..];
                let (bits, count) = rest.split_at(rest.len() - 1);
                oracle::among_check(&assignment[..n], &members(*set, bits)?, count[0])
            }
            Constraint::Roots { xs, s, t } => {
                let n = xs.len();
                let ns = state.set_var(*s)?.bits.len();
                let s_bits = &assignment[n..n + ns];
                let t_bits = &assignment[n + ns..];
                oracle::roots_check(
                    &assignment[..n],
                    &members(*s, s_bits)?,
                    &members(*t, t_bits)?,
                )
            }
            Constraint::SumEq { xs, .. } => {
                oracle::sum_check(&assignment[..xs.len()], assignment[xs.len()])
            }
            Constraint::Extensional { tuples, .. } => tuples.iter().any(|t| t == assignment),
        })
    }

    /// Runs the constraint's fixed-parameter domain-consistency filter.
    pub fn prune(&self, state: &ProblemState, config: &Config) -> Result<Pruning> {
        match self {
            Constraint::NValue { xs, n } => {
                let a = automata::NValueAutomaton::for_state(state, xs, config)?;
                regular::filter(&a, state, &concat([xs, &vec![*n]]))
            }
            Constraint::Uses { xs, ys } => {
                let a = automata::UsesAutomaton::for_state(state, xs, ys, config)?;
                regular::filter(&a, state, &concat([ys, xs]))
            }
            Constraint::CardPath {
                xs,
                n,
                p,
                predicate,
                ..
            } => {
                let a = automata::CardPathAutomaton::for_state(state, xs, *p, predicate.clone())?;
                regular::filter(&a, state, &concat([xs, &vec![*n]]))
            }
            Constraint::ValSymBreak { xs, symmetries } => {
                let a = automata::ValSymBreakAutomaton::for_state(state, xs, symmetries, config)?;
                regular::filter(&a, state, xs)
            }
            Constraint::Disjoint { xs, ys } => backdoor::disjoint_dc(xs, ys, state, config.k_max),
            Constraint::AmongSet { xs, set, n } => {
                backdoor::among_set_dc(xs, *set, *n, state, config.k_max)
            }
            Constraint::Roots { xs, s, t } => backdoor::roots_dc(xs, *s, *t, state, config.k_max),
            Constraint::SumEq { xs, target } => {
                let bc = SumBc;
                let scope = concat([xs, &vec![*target]]);
                Ok(interval::lift_to_dc(&bc, state, &scope, config.run_product_cap)?.pruning)
            }
            Constraint::Extensional { scope, tuples } => Ok(table_filter(state, scope, tuples)),
        }
    }

    pub fn propagator(&self, config: Config) -> ConstraintPropagator {
        ConstraintPropagator {
            constraint: self.clone(),
            config,
        }
    }
}

/// Keeps the values that occur in some tuple all of whose values are live.
fn table_filter(state: &ProblemState, scope: &[VarId], tuples: &[Vec<Value>]) -> Pruning {
    let mut supported = vec![Vec::new(); scope.len()];
    for t in tuples {
        if t.iter().zip(scope).all(|(&v, &x)| state.dom(x).contains(v)) {
            for (s, &v) in supported.iter_mut().zip(t) {
                s.push(v);
            }
        }
    }
    Pruning::from_domains(
        scope
            .iter()
            .zip(supported)
            .map(|(&x, vals)| (x, Domain::new(vals))),
    )
}

pub(crate) fn union_of(state: &ProblemState, vars: &[VarId]) -> Domain {
    Domain::new(vars.iter().flat_map(|&v| state.dom(v).iter()))
}

fn concat<const N: usize>(parts: [&Vec<VarId>; N]) -> Vec<VarId> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// A posted constraint wrapped with its caps, ready for the fixpoint engine.
#[derive(Debug, Clone)]
pub struct ConstraintPropagator {
    pub constraint: Constraint,
    pub config: Config,
}

impl Propagator for ConstraintPropagator {
    fn name(&self) -> String {
        self.constraint.kind().to_string()
    }

    fn scope(&self, state: &ProblemState) -> Vec<VarId> {
        self.constraint.scope(state).unwrap_or_default()
    }

    fn prune(&self, state: &ProblemState) -> Result<Pruning> {
        self.constraint.prune(state, &self.config)
    }
}
