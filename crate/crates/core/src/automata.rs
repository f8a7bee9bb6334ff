//! Automata for NValue, Uses, CardPath and ValSymBreak.
//!
//! Each builder encodes the constraint's solutions as a layered automaton
//! whose states stay few when the constraint's parameter is small; the
//! [`regular`](crate::regular) filter then enforces domain consistency.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::Config;
use crate::constraint::union_of;
use crate::domain::{Domain, Value};
use crate::error::{Error, Result};
use crate::regular::Automaton;
use crate::state::{ProblemState, VarId};

/// Terminal state reached by reading an acceptable count.
const ACCEPT: u64 = u64::MAX;

fn check_width(parameter: &'static str, k: usize, config: &Config) -> Result<()> {
    let cap = config.mask_width.min(63) as u64;
    if k as u64 > cap {
        return Err(Error::ParameterTooLarge {
            parameter,
            value: k as u64,
            cap,
        });
    }
    Ok(())
}

fn pow2_bound(k: usize) -> usize {
    1usize.checked_shl(k as u32).unwrap_or(usize::MAX)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NValueParams {
    /// Every value any `X_i` may take, sorted.
    pub universe: Vec<Value>,
    /// Number of `X_i`.
    pub n: usize,
}

/// Reads `X_1..X_n` then `N`. The state is the set of values used so far,
/// as a bitmask over the universe; reading `N` accepts iff it equals the
/// size of that set.
#[derive(Debug, Clone)]
pub struct NValueAutomaton {
    universe: Vec<Value>,
    n: usize,
}

pub fn nvalue_automaton(params: NValueParams, config: &Config) -> Result<NValueAutomaton> {
    check_width("k (NValue values)", params.universe.len(), config)?;
    Ok(NValueAutomaton {
        universe: Domain::new(params.universe).values().to_vec(),
        n: params.n,
    })
}

impl NValueAutomaton {
    pub fn for_state(state: &ProblemState, xs: &[VarId], config: &Config) -> Result<Self> {
        nvalue_automaton(
            NValueParams {
                universe: union_of(state, xs).values().to_vec(),
                n: xs.len(),
            },
            config,
        )
    }
}

impl Automaton for NValueAutomaton {
    type State = u64;

    fn layers(&self) -> usize {
        self.n + 1
    }

    fn initial(&self) -> u64 {
        0
    }

    fn step(&self, layer: usize, q: &u64, v: Value) -> Option<u64> {
        if layer < self.n {
            let i = self.universe.binary_search(&v).ok()?;
            Some(q | (1 << i))
        } else {
            (q.count_ones() as Value == v).then_some(ACCEPT)
        }
    }

    fn accepting(&self, q: &u64) -> bool {
        *q == ACCEPT
    }

    fn state_bound(&self, layer: usize) -> Option<usize> {
        Some(if layer <= self.n {
            pow2_bound(self.universe.len())
        } else {
            1
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsesParams {
    /// Every value any `Y_j` may take, sorted.
    pub y_universe: Vec<Value>,
    pub n: usize,
    pub m: usize,
}

/// Reads `Y_1..Y_m` collecting their values, then `X_1..X_n`, accepting an
/// `X` value only if it was collected. Every state left standing accepts.
#[derive(Debug, Clone)]
pub struct UsesAutomaton {
    universe: Vec<Value>,
    n: usize,
    m: usize,
}

pub fn uses_automaton(params: UsesParams, config: &Config) -> Result<UsesAutomaton> {
    check_width("k (Uses values)", params.y_universe.len(), config)?;
    Ok(UsesAutomaton {
        universe: Domain::new(params.y_universe).values().to_vec(),
        n: params.n,
        m: params.m,
    })
}

impl UsesAutomaton {
    pub fn for_state(
        state: &ProblemState,
        xs: &[VarId],
        ys: &[VarId],
        config: &Config,
    ) -> Result<Self> {
        uses_automaton(
            UsesParams {
                y_universe: union_of(state, ys).values().to_vec(),
                n: xs.len(),
                m: ys.len(),
            },
            config,
        )
    }
}

impl Automaton for UsesAutomaton {
    type State = u64;

    fn layers(&self) -> usize {
        self.m + self.n
    }

    fn initial(&self) -> u64 {
        0
    }

    fn step(&self, layer: usize, q: &u64, v: Value) -> Option<u64> {
        let bit = 1u64 << self.universe.binary_search(&v).ok()?;
        if layer < self.m {
            Some(q | bit)
        } else {
            (q & bit != 0).then_some(*q)
        }
    }

    fn accepting(&self, _: &u64) -> bool {
        true
    }

    fn state_bound(&self, _layer: usize) -> Option<usize> {
        Some(pow2_bound(self.universe.len()))
    }
}

/// The constraint a CardPath window must satisfy.
///
/// The builtins compare adjacent window positions: `Equal` holds when all
/// values are equal, `NotEqual` when no two neighbours are equal, `LessThan`
/// when the window strictly increases. Arity-1 builtins always hold.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TuplePredicate {
    Equal,
    NotEqual,
    LessThan,
    Table(BTreeSet<Vec<Value>>),
}

impl TuplePredicate {
    pub fn table(tuples: impl IntoIterator<Item = Vec<Value>>) -> Self {
        TuplePredicate::Table(tuples.into_iter().collect())
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "equal" => Some(TuplePredicate::Equal),
            "not_equal" => Some(TuplePredicate::NotEqual),
            "less_than" => Some(TuplePredicate::LessThan),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TuplePredicate::Equal => "equal",
            TuplePredicate::NotEqual => "not_equal",
            TuplePredicate::LessThan => "less_than",
            TuplePredicate::Table(_) => "table",
        }
    }

    pub fn holds(&self, window: &[Value]) -> bool {
        let mut pairs = window.windows(2);
        match self {
            TuplePredicate::Equal => pairs.all(|w| w[0] == w[1]),
            TuplePredicate::NotEqual => pairs.all(|w| w[0] != w[1]),
            TuplePredicate::LessThan => pairs.all(|w| w[0] < w[1]),
            TuplePredicate::Table(t) => t.contains(window),
        }
    }

    pub(crate) fn check_arity(&self, p: usize) -> Result<()> {
        if let TuplePredicate::Table(t) = self {
            if let Some(bad) = t.iter().find(|tuple| tuple.len() != p) {
                return Err(Error::usage(format!(
                    "cardpath: tuple {bad:?} does not have arity {p}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardPathParams {
    pub p: usize,
    pub predicate: TuplePredicate,
    /// Values each `X_i` may take; the length is the chain length n.
    pub universes: Vec<Domain>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CardPathState {
    /// The last `min(read, p - 1)` values and how many windows held so far.
    Scan {
        window: Vec<Value>,
        count: usize,
    },
    Accept,
}

/// Reads `X_1..X_n` then `N`, tracking the trailing `p - 1` values and the
/// number of satisfied windows; reading `N` accepts iff it equals the count.
#[derive(Debug, Clone)]
pub struct CardPathAutomaton {
    p: usize,
    predicate: TuplePredicate,
    universes: Vec<Domain>,
    max_domain: usize,
}

pub fn cardpath_automaton(params: CardPathParams) -> Result<CardPathAutomaton> {
    let n = params.universes.len();
    if params.p == 0 || n < params.p {
        return Err(Error::usage(format!(
            "cardpath: need 1 <= p <= n, got p = {}, n = {n}",
            params.p
        )));
    }
    params.predicate.check_arity(params.p)?;
    Ok(CardPathAutomaton {
        p: params.p,
        max_domain: params.universes.iter().map(Domain::len).max().unwrap_or(0),
        predicate: params.predicate,
        universes: params.universes,
    })
}

impl CardPathAutomaton {
    pub fn for_state(
        state: &ProblemState,
        xs: &[VarId],
        p: usize,
        predicate: TuplePredicate,
    ) -> Result<Self> {
        cardpath_automaton(CardPathParams {
            p,
            predicate,
            universes: xs.iter().map(|&x| state.dom(x).clone()).collect(),
        })
    }

    fn n(&self) -> usize {
        self.universes.len()
    }
}

impl Automaton for CardPathAutomaton {
    type State = CardPathState;

    fn layers(&self) -> usize {
        self.n() + 1
    }

    fn initial(&self) -> CardPathState {
        CardPathState::Scan {
            window: Vec::new(),
            count: 0,
        }
    }

    fn step(&self, layer: usize, q: &CardPathState, v: Value) -> Option<CardPathState> {
        let CardPathState::Scan { window, count } = q else {
            return None;
        };
        if layer == self.n() {
            return (*count as Value == v).then_some(CardPathState::Accept);
        }
        if !self.universes[layer].contains(v) {
            return None;
        }
        let mut next = Vec::with_capacity(self.p);
        next.extend_from_slice(window);
        next.push(v);
        if next.len() < self.p {
            return Some(CardPathState::Scan {
                window: next,
                count: 0,
            });
        }
        let count = count + usize::from(self.predicate.holds(&next));
        next.remove(0);
        Some(CardPathState::Scan {
            window: next,
            count,
        })
    }

    fn accepting(&self, q: &CardPathState) -> bool {
        *q == CardPathState::Accept
    }

    fn state_bound(&self, layer: usize) -> Option<usize> {
        if layer > self.n() {
            return Some(1);
        }
        let w = self.p - 1;
        let windows = self.max_domain.saturating_pow(layer.min(w) as u32);
        let labels = layer.saturating_sub(w) + 1;
        Some(windows.saturating_mul(labels))
    }
}

/// A bijection on a finite set of values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: BTreeMap<Value, Value>,
}

impl Permutation {
    /// Builds a permutation from `(value, image)` pairs, which must define a
    /// bijection on the listed values.
    pub fn new(pairs: impl IntoIterator<Item = (Value, Value)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (from, to) in pairs {
            if map.insert(from, to).is_some() {
                return Err(Error::usage(format!(
                    "permutation maps {from} more than once"
                )));
            }
        }
        let images: BTreeSet<Value> = map.values().copied().collect();
        if images.len() != map.len() || !images.iter().all(|v| map.contains_key(v)) {
            return Err(Error::usage("permutation is not a bijection on its values"));
        }
        Ok(Permutation { map })
    }

    pub fn identity(universe: &[Value]) -> Self {
        Permutation {
            map: universe.iter().map(|&v| (v, v)).collect(),
        }
    }

    /// Exchanges `a` and `b`, fixing the rest of `universe`.
    pub fn swap(universe: &[Value], a: Value, b: Value) -> Self {
        let image = |v| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        };
        let mut map: BTreeMap<Value, Value> = universe.iter().map(|&v| (v, image(v))).collect();
        map.insert(a, b);
        map.insert(b, a);
        Permutation { map }
    }

    pub fn apply(&self, v: Value) -> Option<Value> {
        self.map.get(&v).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Value, Value)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }
}

/// Fails if some symmetry is undefined on a value of one of `domains`.
pub fn check_symmetries<'a>(
    symmetries: &[Permutation],
    domains: impl IntoIterator<Item = &'a Domain>,
) -> Result<()> {
    let values = Domain::new(domains.into_iter().flat_map(|d| d.iter()));
    for (i, sigma) in symmetries.iter().enumerate() {
        if let Some(v) = values.iter().find(|&v| sigma.apply(v).is_none()) {
            return Err(Error::usage(format!(
                "valsymbreak: symmetry #{i} is undefined on value {v}"
            )));
        }
    }
    Ok(())
}

/// Reads `X_1..X_n`; the state is the set of symmetries already strictly
/// broken, i.e. those `sigma` with the prefix lex-smaller than its image.
/// A value `v` is rejected if some unbroken `sigma` maps it below `v`.
#[derive(Debug, Clone)]
pub struct ValSymBreakAutomaton {
    symmetries: Vec<Permutation>,
    n: usize,
}

pub fn valsymbreak_automaton(
    symmetries: &[Permutation],
    n: usize,
    config: &Config,
) -> Result<ValSymBreakAutomaton> {
    check_width("k (symmetries)", symmetries.len(), config)?;
    Ok(ValSymBreakAutomaton {
        symmetries: symmetries.to_vec(),
        n,
    })
}

impl ValSymBreakAutomaton {
    pub fn for_state(
        state: &ProblemState,
        xs: &[VarId],
        symmetries: &[Permutation],
        config: &Config,
    ) -> Result<Self> {
        check_symmetries(symmetries, xs.iter().map(|&x| state.dom(x)))?;
        valsymbreak_automaton(symmetries, xs.len(), config)
    }
}

impl Automaton for ValSymBreakAutomaton {
    type State = u64;

    fn layers(&self) -> usize {
        self.n
    }

    fn initial(&self) -> u64 {
        0
    }

    fn step(&self, _layer: usize, q: &u64, v: Value) -> Option<u64> {
        let mut next = *q;
        for (j, sigma) in self.symmetries.iter().enumerate() {
            let image = sigma.apply(v)?;
            let broken = q & (1 << j) != 0;
            if v > image && !broken {
                return None;
            }
            if v < image {
                next |= 1 << j;
            }
        }
        Some(next)
    }

    fn accepting(&self, _: &u64) -> bool {
        true
    }

    fn state_bound(&self, _layer: usize) -> Option<usize> {
        Some(pow2_bound(self.symmetries.len()))
    }
}
