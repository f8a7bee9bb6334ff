//! Strong-backdoor enumeration.
//!
//! Every completion of a small set of 0/1 variables leaves a residual problem
//! that a polynomial filter solves exactly. Filtering once per completion and
//! taking the union of the surviving domains gives domain consistency on the
//! whole constraint.

use std::collections::BTreeMap;

use crate::constraint::union_of;
use crate::domain::{Domain, Value};
use crate::error::{Error, Result};
use crate::state::{ProblemState, Pruning, SetVarId, VarId};

/// A backdoor position: an existing 0/1 variable, or an auxiliary bit that
/// only lives inside the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackdoorBit {
    Var(VarId),
    Free,
}

pub struct BackdoorDecomposition<F> {
    pub backdoor: Vec<BackdoorBit>,
    /// Variables the residual filter prunes.
    pub scope: Vec<VarId>,
    /// Filters the residual problem under one complete instantiation of the
    /// backdoor, given positionally. Must achieve domain consistency on it.
    pub sub_filter: F,
}

/// Filters once per backdoor completion consistent with the current bit
/// domains and returns the union of the results.
///
/// Completions are visited in binary counting order over the undecided bits.
/// The search stops early once every value of every variable is supported.
pub fn enumerate_union<F>(
    dec: &BackdoorDecomposition<F>,
    state: &ProblemState,
    k_max: u32,
) -> Result<Pruning>
where
    F: Fn(&[bool], &ProblemState) -> Pruning,
{
    // per position: Some(b) if fixed, None if undecided
    let mut fixed: Vec<Option<bool>> = Vec::with_capacity(dec.backdoor.len());
    for bit in &dec.backdoor {
        fixed.push(match bit {
            BackdoorBit::Free => None,
            BackdoorBit::Var(v) => {
                let d = state.domain(*v)?;
                match (d.contains(0), d.contains(1)) {
                    (true, true) => None,
                    (false, true) => Some(true),
                    (true, false) => Some(false),
                    (false, false) => {
                        return Err(Error::usage(format!(
                            "backdoor variable `{}` is not 0/1",
                            state.name(*v)
                        )))
                    }
                }
            }
        });
    }
    let undecided: Vec<usize> = (0..fixed.len()).filter(|&i| fixed[i].is_none()).collect();
    let k = undecided.len();
    if k > k_max as usize || k >= 64 {
        return Err(Error::ParameterTooLarge {
            parameter: "k (backdoor size)",
            value: k as u64,
            cap: k_max as u64,
        });
    }

    let bit_vars: Vec<(usize, VarId)> = dec
        .backdoor
        .iter()
        .enumerate()
        .filter_map(|(i, b)| match b {
            BackdoorBit::Var(v) => Some((i, *v)),
            BackdoorBit::Free => None,
        })
        .collect();
    let targets: Vec<VarId> = bit_vars
        .iter()
        .map(|&(_, v)| v)
        .chain(dec.scope.iter().copied())
        .collect();
    let full: usize = targets.iter().map(|&v| state.dom(v).len()).sum();

    let mut union: BTreeMap<VarId, Domain> =
        targets.iter().map(|&v| (v, Domain::empty())).collect();
    let mut covered = 0usize;
    let mut any = false;
    let mut bits: Vec<bool> = fixed.iter().map(|b| b.unwrap_or(false)).collect();

    for mask in 0u64..(1u64 << k) {
        for (j, &pos) in undecided.iter().enumerate() {
            bits[pos] = mask & (1 << j) != 0;
        }
        let Pruning::Domains(kept) = (dec.sub_filter)(&bits, state) else {
            continue;
        };
        any = true;
        for &(pos, var) in &bit_vars {
            covered += merge(&mut union, var, &Domain::singleton(Value::from(bits[pos])));
        }
        for &var in &dec.scope {
            let dom = kept.get(&var).unwrap_or_else(|| state.dom(var));
            covered += merge(&mut union, var, dom);
        }
        if covered == full {
            break;
        }
    }

    if !any {
        return Ok(Pruning::Wipeout);
    }
    Ok(Pruning::from_domains(union))
}

// Adds `dom` into the union for `var`, returning how many values were new.
fn merge(union: &mut BTreeMap<VarId, Domain>, var: VarId, dom: &Domain) -> usize {
    let acc = union.get_mut(&var).expect("union target");
    let before = acc.len();
    *acc = acc.union(dom);
    debug_assert!(acc.len() >= before);
    acc.len() - before
}

/// Domain consistency for `Disjoint(xs, ys)`: no `X_i` equals any `Y_j`.
///
/// The backdoor is one auxiliary bit `S_v` per value `v` shared by the `X`
/// and `Y` sides. With `S` fixed, `X_i` keeps the values that are either
/// absent from the `Y` side or in `S`, and `Y_j` those absent from the `X`
/// side or outside `S`.
pub fn disjoint_dc(
    xs: &[VarId],
    ys: &[VarId],
    state: &ProblemState,
    k_max: u32,
) -> Result<Pruning> {
    let shared = union_of(state, xs).intersect(&union_of(state, ys));
    let scope: Vec<VarId> = xs.iter().chain(ys).copied().collect();
    let in_s = |bits: &[bool], v: Value| -> Option<bool> {
        shared.values().binary_search(&v).ok().map(|i| bits[i])
    };
    let dec = BackdoorDecomposition {
        backdoor: vec![BackdoorBit::Free; shared.len()],
        scope: scope.clone(),
        sub_filter: |bits: &[bool], st: &ProblemState| {
            let keep = |var: VarId, x_side: bool| -> Domain {
                st.dom(var)
                    .iter()
                    .filter(|&v| in_s(bits, v).is_none_or(|s| s == x_side))
                    .collect()
            };
            Pruning::from_domains(
                xs.iter()
                    .map(|&x| (x, keep(x, true)))
                    .chain(ys.iter().map(|&y| (y, keep(y, false)))),
            )
        },
    };
    enumerate_union(&dec, state, k_max)
}

/// Membership of each set-variable universe value under one completion.
fn members(state: &ProblemState, set: SetVarId, bits: &[bool]) -> Result<Vec<Value>> {
    let sv = state.set_var(set)?;
    Ok(sv
        .universe
        .iter()
        .zip(bits)
        .filter(|(_, &b)| b)
        .map(|(&v, _)| v)
        .collect())
}

/// Domain consistency for `Among(xs, S, N)`: `N = |{i : X_i in S}|`.
///
/// The backdoor is the bits of `S`. The decomposition channels a Boolean
/// `B_i <-> X_i in S` and posts `sum B_i = N`; once `S` is fixed each `B_i`
/// is independent, so the reachable counts form the interval `[lo, hi]`
/// with `lo = #{i : dom(X_i) ⊆ S}` and `hi = #{i : dom(X_i) ∩ S ≠ ∅}`. The
/// residual filter works on these counts directly.
pub fn among_set_dc(
    xs: &[VarId],
    set: SetVarId,
    n: VarId,
    state: &ProblemState,
    k_max: u32,
) -> Result<Pruning> {
    let sv = state.set_var(set)?;
    let mut scope = xs.to_vec();
    scope.push(n);
    let dec = BackdoorDecomposition {
        backdoor: sv.bits.iter().map(|&b| BackdoorBit::Var(b)).collect(),
        scope,
        sub_filter: |bits: &[bool], st: &ProblemState| {
            let chosen = Domain::new(members(st, set, bits).unwrap_or_default());
            // (can be in, can be out) per X_i
            let reach: Vec<(bool, bool)> = xs
                .iter()
                .map(|&x| {
                    let d = st.dom(x);
                    (
                        d.iter().any(|v| chosen.contains(v)),
                        d.iter().any(|v| !chosen.contains(v)),
                    )
                })
                .collect();
            let lo = reach.iter().filter(|(_, out)| !out).count() as Value;
            let hi = reach.iter().filter(|(inn, _)| *inn).count() as Value;
            let n_dom: Domain = st.dom(n).iter().filter(|&c| lo <= c && c <= hi).collect();
            if n_dom.is_empty() {
                return Pruning::Wipeout;
            }
            let mut kept = Vec::with_capacity(xs.len() + 1);
            for (&x, &(inn, out)) in xs.iter().zip(&reach) {
                // counts achievable by the others
                let lo_rest = lo - Value::from(!out);
                let hi_rest = hi - Value::from(inn);
                let fits = |b: Value| n_dom.iter().any(|c| lo_rest + b <= c && c <= hi_rest + b);
                let (fits_in, fits_out) = (fits(1), fits(0));
                let dom: Domain = st
                    .dom(x)
                    .iter()
                    .filter(|&v| {
                        if chosen.contains(v) {
                            fits_in
                        } else {
                            fits_out
                        }
                    })
                    .collect();
                kept.push((x, dom));
            }
            kept.push((n, n_dom));
            Pruning::from_domains(kept)
        },
    };
    enumerate_union(&dec, state, k_max)
}

/// Domain consistency for `Roots(xs, S, T)`: `S = {i : X_i in T}`.
///
/// The backdoor is the bits of `T`. With `T` fixed the decomposition
/// `(i in S) <-> (X_i in T)` splits into independent per-index pairs.
pub fn roots_dc(
    xs: &[VarId],
    s: SetVarId,
    t: SetVarId,
    state: &ProblemState,
    k_max: u32,
) -> Result<Pruning> {
    let s_bits = state.set_var(s)?.bits.clone();
    let t_var = state.set_var(t)?;
    if s_bits.len() != xs.len() {
        return Err(Error::usage(
            "roots: index set size differs from the number of variables",
        ));
    }
    let scope: Vec<VarId> = xs.iter().chain(&s_bits).copied().collect();
    let dec = BackdoorDecomposition {
        backdoor: t_var.bits.iter().map(|&b| BackdoorBit::Var(b)).collect(),
        scope,
        sub_filter: |bits: &[bool], st: &ProblemState| {
            let chosen = Domain::new(members(st, t, bits).unwrap_or_default());
            let mut kept = Vec::with_capacity(2 * xs.len());
            for (&x, &sb) in xs.iter().zip(&s_bits) {
                let b = st.dom(sb);
                let dom: Domain = st
                    .dom(x)
                    .iter()
                    .filter(|&v| b.contains(Value::from(chosen.contains(v))))
                    .collect();
                let bit: Domain = b
                    .iter()
                    .filter(|&bv| dom.iter().any(|v| Value::from(chosen.contains(v)) == bv))
                    .collect();
                kept.push((x, dom));
                kept.push((sb, bit));
            }
            Pruning::from_domains(kept)
        },
    };
    enumerate_union(&dec, state, k_max)
}
