//! Seeded random instance families, one per constraint kind.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::automata::{Permutation, TuplePredicate};
use crate::constraint::{Constraint, Kind};
use crate::domain::{Domain, Value};
use crate::error::Result;
use crate::interval::runs;
use crate::state::{ProblemState, VarId};

/// Size knobs for a generated instance.
///
/// `n` counts the main variable sequence, `d` bounds domain sizes and `k`
/// sets the constraint's parameter (value-universe size for the automata
/// families, backdoor size for the set-variable families).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    /// Draw every domain with exactly `d` values instead of 1..=d.
    pub exact: bool,
}

impl Shape {
    pub fn new(n: usize, d: usize, k: usize) -> Self {
        Shape {
            n,
            d,
            k,
            exact: false,
        }
    }

    /// Each of n, d and k drawn uniformly from 1..= its value here.
    pub fn sample_within(&self, rng: &mut impl Rng) -> Shape {
        Shape {
            n: rng.random_range(1..=self.n.max(1)),
            d: rng.random_range(1..=self.d.max(1)),
            k: rng.random_range(1..=self.k.max(1)),
            exact: self.exact,
        }
    }
}

fn values(lo: Value, hi: Value) -> Vec<Value> {
    (lo..=hi).collect()
}

/// A random nonempty subset of `universe` with at most `d` values.
pub fn random_domain(rng: &mut impl Rng, universe: &[Value], d: usize, exact: bool) -> Domain {
    let cap = d.clamp(1, universe.len());
    let size = if exact {
        cap
    } else {
        rng.random_range(1..=cap)
    };
    Domain::new(universe.choose_multiple(rng, size).copied())
}

/// A random domain inside `lo..=hi` with at most `max_runs` maximal runs.
pub fn holey_domain(rng: &mut impl Rng, lo: Value, hi: Value, d: usize, max_runs: usize) -> Domain {
    let universe = values(lo, hi);
    loop {
        let dom = random_domain(rng, &universe, d, false);
        if runs(&dom).len() <= max_runs {
            return dom;
        }
    }
}

fn add_vars(
    state: &mut ProblemState,
    prefix: &str,
    count: usize,
    mut dom: impl FnMut() -> Domain,
) -> Result<Vec<VarId>> {
    (1..=count)
        .map(|i| state.add_var(format!("{prefix}{i}"), dom()))
        .collect()
}

/// Set variable over `universe` with at most `k` undecided elements.
fn add_set(
    rng: &mut impl Rng,
    state: &mut ProblemState,
    name: &str,
    universe: &[Value],
    k: usize,
) -> Result<crate::state::SetVarId> {
    let mut order = universe.to_vec();
    order.shuffle(rng);
    let open = rng.random_range(0..=k.min(order.len()));
    let mut lb = Vec::new();
    let mut ub = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        if i < open {
            ub.push(v);
        } else if rng.random_bool(0.5) {
            lb.push(v);
            ub.push(v);
        }
    }
    state.add_set_var(name, universe, &lb, &ub)
}

fn random_predicate(rng: &mut impl Rng, universe: &[Value], p: usize) -> TuplePredicate {
    match rng.random_range(0..4) {
        0 => TuplePredicate::Equal,
        1 => TuplePredicate::NotEqual,
        2 => TuplePredicate::LessThan,
        _ => {
            let mut tuples = Vec::new();
            let mut t = vec![0usize; p];
            loop {
                if rng.random_bool(0.4) {
                    tuples.push(t.iter().map(|&i| universe[i]).collect());
                }
                let mut pos = 0;
                loop {
                    if pos == p {
                        return TuplePredicate::table(tuples);
                    }
                    t[pos] += 1;
                    if t[pos] < universe.len() {
                        break;
                    }
                    t[pos] = 0;
                    pos += 1;
                }
            }
        }
    }
}

fn random_permutation(rng: &mut impl Rng, universe: &[Value]) -> Permutation {
    let mut images = universe.to_vec();
    images.shuffle(rng);
    Permutation::new(universe.iter().copied().zip(images)).expect("shuffle is a bijection")
}

/// Generates a state holding one posted constraint of `kind`.
pub fn instance(kind: Kind, shape: Shape, rng: &mut impl Rng) -> Result<ProblemState> {
    let Shape { n, d, k, exact } = shape;
    let n = n.max(1);
    let k = k.max(1);
    let mut s = ProblemState::new();
    let constraint = match kind {
        Kind::NValue => {
            let u = values(1, k as Value);
            let xs = add_vars(&mut s, "X", n, || random_domain(rng, &u, d, exact))?;
            let counts = values(0, n.min(k) as Value + 1);
            let nv = s.add_var("N", random_domain(rng, &counts, d.max(2), false))?;
            Constraint::NValue { xs, n: nv }
        }
        Kind::Uses => {
            let uy = values(1, k as Value);
            let ux = values(1, k as Value + 1);
            let xs = add_vars(&mut s, "X", n, || random_domain(rng, &ux, d, exact))?;
            let m = rng.random_range(1..=n);
            let ys = add_vars(&mut s, "Y", m, || random_domain(rng, &uy, d, exact))?;
            Constraint::Uses { xs, ys }
        }
        Kind::CardPath => {
            let u = values(1, k.max(2) as Value);
            let p = rng.random_range(1..=n.min(3));
            let predicate = random_predicate(rng, &u, p);
            let xs = add_vars(&mut s, "X", n, || random_domain(rng, &u, d, exact))?;
            let counts = values(0, (n - p + 1) as Value);
            let nv = s.add_var("N", random_domain(rng, &counts, d.max(2), false))?;
            Constraint::CardPath {
                xs,
                n: nv,
                p,
                predicate,
            }
        }
        Kind::ValSymBreak => {
            let u = values(1, k.max(2) as Value);
            let count = rng.random_range(1..=4);
            let symmetries = (0..count).map(|_| random_permutation(rng, &u)).collect();
            let xs = add_vars(&mut s, "X", n, || random_domain(rng, &u, d, exact))?;
            Constraint::ValSymBreak { xs, symmetries }
        }
        Kind::Disjoint => {
            let ux = values(1, k as Value + 2);
            let uy = values(3, k as Value + 4);
            let xs = add_vars(&mut s, "X", n, || random_domain(rng, &ux, d, exact))?;
            let m = rng.random_range(1..=n);
            let ys = add_vars(&mut s, "Y", m, || random_domain(rng, &uy, d, exact))?;
            Constraint::Disjoint { xs, ys }
        }
        Kind::AmongSet => {
            let ux = values(1, k as Value + 2);
            let xs = add_vars(&mut s, "X", n, || random_domain(rng, &ux, d, exact))?;
            let su = values(1, k as Value + 3);
            let universe = random_domain(rng, &su, k + 2, false);
            let set = add_set(rng, &mut s, "S", universe.values(), k)?;
            let counts = values(0, n as Value);
            let nv = s.add_var("N", random_domain(rng, &counts, d.max(2), false))?;
            Constraint::AmongSet { xs, set, n: nv }
        }
        Kind::Roots => {
            let ux = values(1, k as Value + 2);
            let xs = add_vars(&mut s, "X", n, || random_domain(rng, &ux, d, exact))?;
            let idx = values(1, n as Value);
            let sv = add_set(rng, &mut s, "S", &idx, n)?;
            let tu = random_domain(rng, &values(1, k as Value + 3), k + 2, false);
            let t = add_set(rng, &mut s, "T", tu.values(), k)?;
            Constraint::Roots { xs, s: sv, t }
        }
        Kind::SumEq => {
            let xs = add_vars(&mut s, "X", n, || holey_domain(rng, 0, 9, d.max(1), 3))?;
            let lo: Value = xs.iter().map(|&x| s.dom(x).min().unwrap()).sum();
            let hi: Value = xs.iter().map(|&x| s.dom(x).max().unwrap()).sum();
            let target = s.add_var("T", holey_domain(rng, lo, hi, d.max(2), 3))?;
            Constraint::SumEq { xs, target }
        }
        Kind::Extensional => {
            let u = values(1, k as Value);
            let scope = add_vars(&mut s, "X", n, || random_domain(rng, &u, d, exact))?;
            let tuples = (0..rng.random_range(1..=2 * n + 2))
                .map(|_| {
                    scope
                        .iter()
                        .map(|&x| *s.dom(x).values().choose(rng).unwrap())
                        .collect()
                })
                .collect();
            Constraint::Extensional { scope, tuples }
        }
    };
    s.add_constraint(constraint)?;
    Ok(s)
}

/// Posts a random binary table constraint over two variables of the first
/// constraint's scope, so that two propagators interact.
pub fn add_companion(state: &mut ProblemState, rng: &mut impl Rng) -> Result<bool> {
    let Some(first) = state.constraints().first() else {
        return Ok(false);
    };
    let scope = first.scope(state)?;
    if scope.len() < 2 {
        return Ok(false);
    }
    let pair: Vec<VarId> = scope.choose_multiple(rng, 2).copied().collect();
    let (a, b) = (state.dom(pair[0]).clone(), state.dom(pair[1]).clone());
    let mut tuples: Vec<Vec<Value>> = Vec::new();
    for x in a.iter() {
        for y in b.iter() {
            if rng.random_bool(0.6) {
                tuples.push(vec![x, y]);
            }
        }
    }
    if tuples.is_empty() {
        tuples.push(vec![a.values()[0], b.values()[0]]);
    }
    state.add_constraint(Constraint::Extensional {
        scope: pair,
        tuples,
    })?;
    Ok(true)
}
