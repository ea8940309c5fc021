//! State indices and sets of state indices.
//!
//! States of an automaton are identified by indices `1..=n`. The same set
//! type doubles as a set of state indices used for hope-set annotations,
//! since hope sets range over the same index space.

use std::collections::BTreeSet;
use std::fmt;

/// Index of an automaton state. States are numbered `1..=n`.
pub type StateId = u32;

/// Index of a symbol into an automaton's alphabet.
pub type SymbolId = usize;

/// An ordered set of state indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateSet(BTreeSet<StateId>);

impl StateSet {
    pub fn new() -> Self {
        StateSet(BTreeSet::new())
    }

    /// The full set `{1, ..., n}`.
    pub fn full(n: u32) -> Self {
        StateSet((1..=n).collect())
    }

    pub fn singleton(q: StateId) -> Self {
        StateSet(BTreeSet::from([q]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.0.contains(&q)
    }

    pub fn insert(&mut self, q: StateId) -> bool {
        self.0.insert(q)
    }

    pub fn remove(&mut self, q: StateId) -> bool {
        self.0.remove(&q)
    }

    pub fn first(&self) -> Option<StateId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<StateId> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = StateId> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet(self.0.union(&other.0).copied().collect())
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        StateSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn minus(&self, other: &StateSet) -> StateSet {
        StateSet(self.0.difference(&other.0).copied().collect())
    }

    /// True iff the two sets share at least one element.
    pub fn intersects(&self, other: &StateSet) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Largest element of `self \ other`, if any.
    pub fn max_difference(&self, other: &StateSet) -> Option<StateId> {
        self.0.difference(&other.0).last().copied()
    }

    /// Largest element of `self` strictly below `bound`, if any.
    pub fn max_below(&self, bound: StateId) -> Option<StateId> {
        self.0.range(..bound).next_back().copied()
    }
}

impl FromIterator<StateId> for StateSet {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        StateSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[StateId; N]> for StateSet {
    fn from(items: [StateId; N]) -> Self {
        StateSet(BTreeSet::from(items))
    }
}

impl<'a> IntoIterator for &'a StateSet {
    type Item = StateId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, StateId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

/// All nonempty subsets of `{1, ..., n}`, in ascending bitmask order.
///
/// Only intended for small `n`; callers guard the exponential blow-up.
pub fn nonempty_subsets(n: u32) -> impl Iterator<Item = StateSet> {
    assert!(n <= 25, "subset enumeration requested for n = {n}");
    (1u32..(1 << n)).map(move |mask| {
        (1..=n)
            .filter(|q| mask & (1 << (q - 1)) != 0)
            .collect::<StateSet>()
    })
}
