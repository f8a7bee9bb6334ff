//! Variables, set variables and the problem state they live in.

use std::collections::BTreeMap;
use std::fmt;

use crate::constraint::Constraint;
use crate::domain::{in_range, Domain, Value};
use crate::error::{Error, Result};

/// Index of a finite-domain variable inside a [`ProblemState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Index of a set variable inside a [`ProblemState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetVarId(pub usize);

impl fmt::Display for SetVarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "set#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdVariable {
    pub id: VarId,
    pub name: String,
    pub domain: Domain,
}

/// A set variable, stored only through its characteristic 0/1 variables.
///
/// `bits[i]` is 1 iff `universe[i]` belongs to the set. Lower and upper
/// bounds are derived from the bit domains on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetVariable {
    pub id: SetVarId,
    pub name: String,
    pub universe: Vec<Value>,
    pub bits: Vec<VarId>,
}

impl SetVariable {
    /// The bit variable for `v`, if `v` is in the universe.
    pub fn bit(&self, v: Value) -> Option<VarId> {
        self.universe.binary_search(&v).ok().map(|i| self.bits[i])
    }
}

/// Outcome status of a propagation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pruned,
    Unchanged,
    Wipeout,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pruned => "pruned",
            Status::Unchanged => "unchanged",
            Status::Wipeout => "wipeout",
        })
    }
}

/// What a propagation step did to a state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    pub status: Status,
    pub removed: BTreeMap<VarId, Vec<Value>>,
}

impl FilterOutcome {
    pub fn unchanged() -> Self {
        FilterOutcome {
            status: Status::Unchanged,
            removed: BTreeMap::new(),
        }
    }

    pub fn wipeout() -> Self {
        FilterOutcome {
            status: Status::Wipeout,
            removed: BTreeMap::new(),
        }
    }

    pub fn is_wipeout(&self) -> bool {
        self.status == Status::Wipeout
    }

    /// Folds a later outcome into this one.
    pub fn absorb(&mut self, later: FilterOutcome) {
        match later.status {
            Status::Wipeout => self.status = Status::Wipeout,
            Status::Pruned if self.status != Status::Wipeout => self.status = Status::Pruned,
            _ => {}
        }
        for (var, mut vals) in later.removed {
            let entry = self.removed.entry(var).or_default();
            entry.append(&mut vals);
            entry.sort_unstable();
        }
    }
}

/// The domains a propagator wants to keep for the variables it filtered.
///
/// Variables absent from the map are left untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pruning {
    Wipeout,
    Domains(BTreeMap<VarId, Domain>),
}

impl Pruning {
    /// Collects per-variable domains, collapsing to `Wipeout` if any is empty.
    pub fn from_domains(domains: impl IntoIterator<Item = (VarId, Domain)>) -> Self {
        let mut map = BTreeMap::new();
        for (var, dom) in domains {
            if dom.is_empty() {
                return Pruning::Wipeout;
            }
            map.insert(var, dom);
        }
        Pruning::Domains(map)
    }

    pub fn is_wipeout(&self) -> bool {
        matches!(self, Pruning::Wipeout)
    }

    pub fn domain(&self, var: VarId) -> Option<&Domain> {
        match self {
            Pruning::Wipeout => None,
            Pruning::Domains(m) => m.get(&var),
        }
    }

    pub fn domains(&self) -> Option<&BTreeMap<VarId, Domain>> {
        match self {
            Pruning::Wipeout => None,
            Pruning::Domains(m) => Some(m),
        }
    }
}

/// Variable domains plus the constraints posted over them.
///
/// The state is a plain value: clone it to take a snapshot.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProblemState {
    vars: Vec<FdVariable>,
    set_vars: Vec<SetVariable>,
    constraints: Vec<Constraint>,
}

impl ProblemState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, domain: Domain) -> Result<VarId> {
        let name = name.into();
        if domain.is_empty() {
            return Err(Error::EmptyDomain(name));
        }
        if let Some(v) = domain.iter().find(|&v| !in_range(v)) {
            return Err(Error::ValueOutOfRange(v));
        }
        let id = VarId(self.vars.len());
        self.vars.push(FdVariable { id, name, domain });
        Ok(id)
    }

    /// Adds a set variable over `universe` with definite elements `lb` and
    /// potential elements `ub`. One 0/1 variable is created per universe value.
    pub fn add_set_var(
        &mut self,
        name: impl Into<String>,
        universe: &[Value],
        lb: &[Value],
        ub: &[Value],
    ) -> Result<SetVarId> {
        let name = name.into();
        let universe = Domain::new(universe.iter().copied());
        let lb = Domain::new(lb.iter().copied());
        let ub = Domain::new(ub.iter().copied());
        if !lb.is_subset(&ub) || !ub.is_subset(&universe) {
            return Err(Error::usage(format!(
                "set variable `{name}`: need lb ⊆ ub ⊆ universe"
            )));
        }
        let id = SetVarId(self.set_vars.len());
        let mut bits = Vec::with_capacity(universe.len());
        for v in universe.iter() {
            let dom = if lb.contains(v) {
                Domain::singleton(1)
            } else if ub.contains(v) {
                Domain::from([0, 1])
            } else {
                Domain::singleton(0)
            };
            bits.push(self.add_var(format!("{name}[{v}]"), dom)?);
        }
        self.set_vars.push(SetVariable {
            id,
            name,
            universe: universe.values().to_vec(),
            bits,
        });
        Ok(id)
    }

    pub fn add_constraint(&mut self, constraint: Constraint) -> Result<usize> {
        constraint.validate(self)?;
        self.constraints.push(constraint);
        Ok(self.constraints.len() - 1)
    }

    pub fn vars(&self) -> &[FdVariable] {
        &self.vars
    }

    pub fn set_vars(&self) -> &[SetVariable] {
        &self.set_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, var: VarId) -> Result<&FdVariable> {
        self.vars.get(var.0).ok_or(Error::UnknownVariable(var))
    }

    pub fn set_var(&self, set: SetVarId) -> Result<&SetVariable> {
        self.set_vars
            .get(set.0)
            .ok_or(Error::UnknownSetVariable(set))
    }

    pub fn domain(&self, var: VarId) -> Result<&Domain> {
        self.var(var).map(|v| &v.domain)
    }

    /// Domain of a variable known to exist.
    ///
    /// Panics on an unknown id; propagators only see validated scopes.
    pub fn dom(&self, var: VarId) -> &Domain {
        &self.vars[var.0].domain
    }

    pub fn name(&self, var: VarId) -> &str {
        &self.vars[var.0].name
    }

    pub fn find_var(&self, name: &str) -> Option<VarId> {
        self.vars.iter().find(|v| v.name == name).map(|v| v.id)
    }

    pub fn is_fixed(&self, var: VarId) -> Result<bool> {
        Ok(self.domain(var)?.len() == 1)
    }

    pub fn assigned_value(&self, var: VarId) -> Result<Value> {
        let dom = self.domain(var)?;
        if dom.len() == 1 {
            Ok(dom.values()[0])
        } else {
            Err(Error::NotFixed(var))
        }
    }

    /// Definite elements of a set variable.
    pub fn lb(&self, set: SetVarId) -> Result<Vec<Value>> {
        let s = self.set_var(set)?;
        Ok(s.universe
            .iter()
            .zip(&s.bits)
            .filter(|(_, &b)| self.dom(b).min() == Some(1))
            .map(|(&v, _)| v)
            .collect())
    }

    /// Potential elements of a set variable.
    pub fn ub(&self, set: SetVarId) -> Result<Vec<Value>> {
        let s = self.set_var(set)?;
        Ok(s.universe
            .iter()
            .zip(&s.bits)
            .filter(|(_, &b)| self.dom(b).contains(1))
            .map(|(&v, _)| v)
            .collect())
    }

    pub fn remove_value(&mut self, var: VarId, v: Value) -> Result<FilterOutcome> {
        let dom = self.domain(var)?;
        if !dom.contains(v) {
            return Ok(FilterOutcome::unchanged());
        }
        if dom.len() == 1 {
            return Ok(FilterOutcome::wipeout());
        }
        self.vars[var.0].domain.remove(v);
        Ok(FilterOutcome {
            status: Status::Pruned,
            removed: BTreeMap::from([(var, vec![v])]),
        })
    }

    /// Writes a pruning into the state.
    ///
    /// Fails with a contract violation if the pruning would add a value, in
    /// which case the state is left untouched. A wipeout leaves the state
    /// untouched too.
    pub fn apply(&mut self, pruning: &Pruning, propagator: &str) -> Result<FilterOutcome> {
        let domains = match pruning {
            Pruning::Wipeout => return Ok(FilterOutcome::wipeout()),
            Pruning::Domains(d) => d,
        };
        for (&var, dom) in domains {
            let cur = self.domain(var)?;
            if let Some(v) = dom.iter().find(|&v| !cur.contains(v)) {
                return Err(Error::ContractViolation {
                    propagator: propagator.to_string(),
                    var,
                    value: v,
                });
            }
            if dom.is_empty() {
                return Ok(FilterOutcome::wipeout());
            }
        }
        let mut outcome = FilterOutcome::unchanged();
        for (&var, dom) in domains {
            let cur = &mut self.vars[var.0].domain;
            if cur.len() != dom.len() {
                outcome.removed.insert(var, cur.difference(dom));
                *cur = dom.clone();
                outcome.status = Status::Pruned;
            }
        }
        Ok(outcome)
    }

    /// Current domains of `scope` as a pruning, i.e. the identity filter.
    pub fn snapshot(&self, scope: &[VarId]) -> Pruning {
        Pruning::Domains(scope.iter().map(|&v| (v, self.dom(v).clone())).collect())
    }

    /// Overwrites a domain without the contraction check. Test and search use only.
    pub fn set_domain(&mut self, var: VarId, domain: Domain) -> Result<()> {
        if domain.is_empty() {
            return Err(Error::EmptyDomain(self.var(var)?.name.clone()));
        }
        self.vars
            .get_mut(var.0)
            .ok_or(Error::UnknownVariable(var))?
            .domain = domain;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(dom: &[Value]) -> (ProblemState, VarId) {
        let mut s = ProblemState::new();
        let x = s.add_var("X", Domain::new(dom.iter().copied())).unwrap();
        (s, x)
    }

    #[test]
    fn remove_value_prunes() {
        let (mut s, x) = one(&[1, 2]);
        let out = s.remove_value(x, 2).unwrap();
        assert_eq!(out.status, Status::Pruned);
        assert_eq!(out.removed[&x], vec![2]);
        assert_eq!(s.dom(x), &Domain::singleton(1));
    }

    #[test]
    fn remove_last_value_is_wipeout() {
        let (mut s, x) = one(&[1]);
        assert_eq!(s.remove_value(x, 1).unwrap().status, Status::Wipeout);
        // never stored empty
        assert_eq!(s.dom(x), &Domain::singleton(1));
    }

    #[test]
    fn remove_absent_value_is_unchanged() {
        let (mut s, x) = one(&[1, 2]);
        let out = s.remove_value(x, 5).unwrap();
        assert_eq!(out, FilterOutcome::unchanged());
    }

    #[test]
    fn remove_from_unknown_variable() {
        let (mut s, _) = one(&[1]);
        assert_eq!(
            s.remove_value(VarId(7), 1),
            Err(Error::UnknownVariable(VarId(7)))
        );
    }

    #[test]
    fn fixed_and_assigned() {
        let (s, x) = one(&[3]);
        assert!(s.is_fixed(x).unwrap());
        assert_eq!(s.assigned_value(x).unwrap(), 3);

        let (s, x) = one(&[1, 2]);
        assert!(!s.is_fixed(x).unwrap());
        assert_eq!(s.assigned_value(x), Err(Error::NotFixed(x)));
    }

    #[test]
    fn set_variable_bits() {
        let mut s = ProblemState::new();
        let set = s.add_set_var("S", &[1, 2, 3], &[1], &[1, 2]).unwrap();
        let sv = s.set_var(set).unwrap().clone();
        assert_eq!(s.dom(sv.bits[0]), &Domain::singleton(1));
        assert_eq!(s.dom(sv.bits[1]), &Domain::from([0, 1]));
        // a fixed-out bit reads as fixed 0
        assert!(s.is_fixed(sv.bits[2]).unwrap());
        assert_eq!(s.assigned_value(sv.bits[2]).unwrap(), 0);
        assert_eq!(s.lb(set).unwrap(), vec![1]);
        assert_eq!(s.ub(set).unwrap(), vec![1, 2]);
        assert!(s.add_set_var("T", &[1], &[2], &[1, 2]).is_err());
    }

    #[test]
    fn apply_rejects_additions() {
        let (mut s, x) = one(&[1, 2]);
        let p = Pruning::from_domains([(x, Domain::from([1, 3]))]);
        assert!(matches!(
            s.apply(&p, "bad"),
            Err(Error::ContractViolation { value: 3, .. })
        ));
        assert_eq!(s.dom(x), &Domain::from([1, 2]));
    }

    #[test]
    fn empty_domains_are_rejected() {
        let mut s = ProblemState::new();
        assert!(matches!(
            s.add_var("X", Domain::empty()),
            Err(Error::EmptyDomain(_))
        ));
        assert!(matches!(
            s.add_var("X", Domain::from([1 << 40])),
            Err(Error::ValueOutOfRange(_))
        ));
    }
}
