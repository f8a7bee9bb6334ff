//! Finite integer domains.

use std::fmt;

/// An integer domain value.
pub type Value = i64;

/// Smallest value accepted by instance readers and domain constructors.
pub const VALUE_MIN: Value = i32::MIN as Value;
/// Largest value accepted by instance readers and domain constructors.
pub const VALUE_MAX: Value = i32::MAX as Value;

pub fn in_range(v: Value) -> bool {
    (VALUE_MIN..=VALUE_MAX).contains(&v)
}

/// A sorted, duplicate-free set of values.
///
/// A domain may be empty while a propagator is computing it, but a
/// [`ProblemState`](crate::ProblemState) never stores an empty one: emptiness
/// is reported as a wipeout instead.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Domain(Vec<Value>);

impl Domain {
    pub fn new(values: impl IntoIterator<Item = Value>) -> Self {
        let mut v: Vec<Value> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Domain(v)
    }

    pub fn empty() -> Self {
        Domain(Vec::new())
    }

    pub fn singleton(v: Value) -> Self {
        Domain(vec![v])
    }

    /// The closed interval `lo..=hi`.
    pub fn interval(lo: Value, hi: Value) -> Self {
        Domain((lo..=hi).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Value) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn min(&self) -> Option<Value> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<Value> {
        self.0.last().copied()
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Value> + '_ {
        self.0.iter().copied()
    }

    /// Removes `v`, returning whether it was present.
    pub fn remove(&mut self, v: Value) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn retain(&mut self, f: impl FnMut(&Value) -> bool) {
        self.0.retain(f);
    }

    pub fn is_subset(&self, other: &Domain) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn intersect(&self, other: &Domain) -> Domain {
        Domain(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn union(&self, other: &Domain) -> Domain {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x <= y {
                        out.push(x);
                        a.next();
                        if x == y {
                            b.next();
                        }
                    } else {
                        out.push(y);
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Domain(out)
    }

    /// Values of `self` missing from `other`.
    pub fn difference(&self, other: &Domain) -> Vec<Value> {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }
}

impl FromIterator<Value> for Domain {
    fn from_iter<I: IntoIterator<Item = Value>>(iter: I) -> Self {
        Domain::new(iter)
    }
}

impl<const N: usize> From<[Value; N]> for Domain {
    fn from(values: [Value; N]) -> Self {
        Domain::new(values)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_sorts_and_dedups() {
        let d = Domain::new([3, 1, 2, 3, 1]);
        assert_eq!(d.values(), &[1, 2, 3]);
        assert_eq!(d.to_string(), "{1,2,3}");
    }

    #[test]
    fn set_operations() {
        let a = Domain::from([1, 3, 5]);
        let b = Domain::from([2, 3, 4]);
        assert_eq!(a.union(&b), Domain::from([1, 2, 3, 4, 5]));
        assert_eq!(a.intersect(&b), Domain::from([3]));
        assert_eq!(a.difference(&b), vec![1, 5]);
        assert!(Domain::from([3]).is_subset(&a));
        assert!(!b.is_subset(&a));
    }

    #[test]
    fn remove_reports_presence() {
        let mut d = Domain::from([1, 2]);
        assert!(d.remove(2));
        assert!(!d.remove(5));
        assert_eq!(d, Domain::singleton(1));
    }
}
