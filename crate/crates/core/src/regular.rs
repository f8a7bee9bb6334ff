//! Domain-consistency filtering for constraints given as layered automata.
//!
//! The automaton reads one value per scope variable. Unfolding it over the
//! current domains yields a layered graph; a value survives iff it labels an
//! edge on some path from the initial state to an accepting final state.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::hash::Hash;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;

use crate::domain::{Domain, Value};
use crate::error::{Error, Result};
use crate::state::{ProblemState, Pruning, VarId};

/// A deterministic automaton over a fixed number of layers.
///
/// States are opaque keys chosen by the implementor. A missing transition
/// rejects the value.
pub trait Automaton {
    type State: Clone + Eq + Hash;

    /// Number of values read, i.e. the scope length.
    fn layers(&self) -> usize;

    fn initial(&self) -> Self::State;

    fn step(&self, layer: usize, state: &Self::State, value: Value) -> Option<Self::State>;

    /// Whether a state reached after the last layer accepts.
    fn accepting(&self, state: &Self::State) -> bool;

    /// Upper bound on distinct states at `layer` (0 = before reading),
    /// checked while unfolding.
    fn state_bound(&self, _layer: usize) -> Option<usize> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: u32,
    pub value: Value,
    pub to: u32,
}

type StateSet<S> = IndexSet<S, FxBuildHasher>;

/// The automaton unfolded over the current domains.
///
/// Only forward-reachable states are materialized. Layer `i` holds the states
/// before reading `scope[i]`; there are `scope.len() + 1` layers.
#[derive(Debug, Clone)]
pub struct LayeredGraph<S> {
    states: Vec<StateSet<S>>,
    edges: Vec<Vec<Edge>>,
    // backward[i][j]: state j of layer i reaches an accepting final state
    backward: Vec<Vec<bool>>,
}

impl<S: Clone + Eq + Hash> LayeredGraph<S> {
    pub fn num_layers(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self, layer: usize) -> impl Iterator<Item = &S> {
        self.states[layer].iter()
    }

    pub fn state_count(&self, layer: usize) -> usize {
        self.states[layer].len()
    }

    pub fn total_states(&self) -> usize {
        self.states.iter().map(StateSet::len).sum()
    }

    /// Whether `state` sits at `layer` and can still reach acceptance.
    pub fn reaches_accepting(&self, layer: usize, state: &S) -> bool {
        self.states[layer]
            .get_index_of(state)
            .is_some_and(|j| self.backward[layer][j])
    }

    /// Edges leaving `layer`.
    pub fn edges(&self, layer: usize) -> &[Edge] {
        &self.edges[layer]
    }

    /// Edges leaving `layer` whose target can still reach acceptance.
    pub fn live_edges(&self, layer: usize) -> impl Iterator<Item = &Edge> {
        let next = &self.backward[layer + 1];
        self.edges[layer]
            .iter()
            .filter(move |e| next[e.to as usize])
    }

    pub fn accepts_any(&self) -> bool {
        self.backward[0].first().copied().unwrap_or(false)
    }

    /// All accepted strings. Exponential; for tests on tiny graphs.
    pub fn accepted_paths(&self) -> Vec<Vec<Value>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_paths(0, 0, &mut path, &mut out);
        out
    }

    fn collect_paths(
        &self,
        layer: usize,
        at: usize,
        path: &mut Vec<Value>,
        out: &mut Vec<Vec<Value>>,
    ) {
        if layer + 1 == self.states.len() {
            if self.backward[layer][at] {
                out.push(path.clone());
            }
            return;
        }
        for e in self.edges[layer].iter().filter(|e| e.from as usize == at) {
            path.push(e.value);
            self.collect_paths(layer + 1, e.to as usize, path, out);
            path.pop();
        }
    }
}

fn index(i: usize) -> Result<u32> {
    u32::try_from(i).map_err(|_| Error::ParameterTooLarge {
        parameter: "states per layer",
        value: i as u64,
        cap: u64::from(u32::MAX),
    })
}

/// Unfolds `automaton` over the domains of `scope`.
pub fn unfold<A: Automaton>(
    automaton: &A,
    state: &ProblemState,
    scope: &[VarId],
) -> Result<LayeredGraph<A::State>> {
    if scope.len() != automaton.layers() {
        return Err(Error::usage(format!(
            "automaton reads {} layers but the scope has {} variables",
            automaton.layers(),
            scope.len()
        )));
    }
    for &v in scope {
        state.var(v)?;
    }

    let mut states = Vec::with_capacity(scope.len() + 1);
    let mut edges = Vec::with_capacity(scope.len());
    let mut first = StateSet::with_capacity_and_hasher(1, FxBuildHasher);
    first.insert(automaton.initial());
    states.push(first);

    for (layer, &var) in scope.iter().enumerate() {
        let width = states[layer].len() * state.dom(var).len();
        let bound = automaton.state_bound(layer + 1).unwrap_or(width).min(width);
        let mut next = StateSet::with_capacity_and_hasher(bound, FxBuildHasher);
        let mut layer_edges = Vec::with_capacity(width);
        for (from, q) in states[layer].iter().enumerate() {
            for value in state.dom(var).iter() {
                if let Some(succ) = automaton.step(layer, q, value) {
                    let (to, _) = next.insert_full(succ);
                    layer_edges.push(Edge {
                        from: index(from)?,
                        value,
                        to: index(to)?,
                    });
                }
            }
        }
        debug_assert!(
            automaton
                .state_bound(layer + 1)
                .is_none_or(|b| next.len() <= b),
            "layer {} has {} states, bound {:?}",
            layer + 1,
            next.len(),
            automaton.state_bound(layer + 1)
        );
        states.push(next);
        edges.push(layer_edges);
    }

    let last = scope.len();
    let mut backward: Vec<Vec<bool>> = states.iter().map(|l| vec![false; l.len()]).collect();
    for (j, q) in states[last].iter().enumerate() {
        backward[last][j] = automaton.accepting(q);
    }
    for layer in (0..last).rev() {
        let (head, tail) = backward.split_at_mut(layer + 1);
        for e in &edges[layer] {
            if tail[0][e.to as usize] {
                head[layer][e.from as usize] = true;
            }
        }
    }

    Ok(LayeredGraph {
        states,
        edges,
        backward,
    })
}

/// Enforces domain consistency on `scope` with respect to the strings the
/// automaton accepts.
pub fn filter<A: Automaton>(
    automaton: &A,
    state: &ProblemState,
    scope: &[VarId],
) -> Result<Pruning> {
    let graph = unfold(automaton, state, scope)?;
    Ok(prune_from_graph(&graph, state, scope))
}

pub(crate) fn prune_from_graph<S: Clone + Eq + Hash>(
    graph: &LayeredGraph<S>,
    state: &ProblemState,
    scope: &[VarId],
) -> Pruning {
    if !graph.accepts_any() {
        return Pruning::Wipeout;
    }
    let mut kept: BTreeMap<VarId, Domain> = BTreeMap::new();
    for (layer, &var) in scope.iter().enumerate() {
        let current = state.dom(var).values();
        let mut live = vec![false; current.len()];
        for e in graph.live_edges(layer) {
            if let Ok(i) = current.binary_search(&e.value) {
                live[i] = true;
            }
        }
        let dom = Domain::new(
            current
                .iter()
                .zip(&live)
                .filter(|(_, &l)| l)
                .map(|(&v, _)| v),
        );
        // a variable repeated in the scope keeps only values live at every position
        match kept.entry(var) {
            Entry::Occupied(mut d) => {
                let both = d.get().intersect(&dom);
                d.insert(both);
            }
            Entry::Vacant(slot) => {
                slot.insert(dom);
            }
        }
    }
    debug_assert!(kept.iter().all(|(v, d)| d.is_subset(state.dom(*v))));
    Pruning::from_domains(kept)
}
