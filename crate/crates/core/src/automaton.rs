//! Nondeterministic ω-automata and infinity-set acceptance conditions.
//!
//! An acceptance condition is evaluated as a predicate over subsets of
//! states: a run is accepting iff the predicate holds on the set of states
//! the run visits infinitely often.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::set::{nonempty_subsets, StateId, StateSet, SymbolId};

/// Default guard for [`OmegaAutomaton::to_muller`], which enumerates all
/// `2^n` state subsets.
pub const DEFAULT_MULLER_BOUND: u32 = 20;

/// A pair `(e, f)` of state sets, as used by Rabin and Streett conditions.
///
/// Rabin reading: a run is accepting iff for some pair, `e` is avoided and
/// `f` is met infinitely often. Streett reading: for every pair, if `f` is
/// met infinitely often then so is `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AcceptancePair {
    pub e: StateSet,
    pub f: StateSet,
}

/// Boolean formula over `Inf(i)` / `Fin(i)` atoms on state indices.
///
/// `Inf(i)` holds on an infinity set `X` iff `i ∈ X`; `Fin(i)` iff `i ∉ X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElFormula {
    Inf(StateId),
    Fin(StateId),
    Not(Box<ElFormula>),
    And(Box<ElFormula>, Box<ElFormula>),
    Or(Box<ElFormula>, Box<ElFormula>),
}

impl ElFormula {
    pub fn eval(&self, x: &StateSet) -> bool {
        match self {
            ElFormula::Inf(q) => x.contains(*q),
            ElFormula::Fin(q) => !x.contains(*q),
            ElFormula::Not(inner) => !inner.eval(x),
            ElFormula::And(a, b) => a.eval(x) && b.eval(x),
            ElFormula::Or(a, b) => a.eval(x) || b.eval(x),
        }
    }

    /// All state indices mentioned by atoms of the formula.
    pub fn atoms(&self) -> StateSet {
        fn collect(f: &ElFormula, out: &mut StateSet) {
            match f {
                ElFormula::Inf(q) | ElFormula::Fin(q) => {
                    out.insert(*q);
                }
                ElFormula::Not(inner) => collect(inner, out),
                ElFormula::And(a, b) | ElFormula::Or(a, b) => {
                    collect(a, out);
                    collect(b, out);
                }
            }
        }
        let mut out = StateSet::new();
        collect(self, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            ElFormula::Or(..) => 0,
            ElFormula::And(..) => 1,
            ElFormula::Not(..) => 2,
            ElFormula::Inf(..) | ElFormula::Fin(..) => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min_prec {
            write!(f, "(")?;
        }
        match self {
            ElFormula::Inf(q) => write!(f, "Inf({q})")?,
            ElFormula::Fin(q) => write!(f, "Fin({q})")?,
            ElFormula::Not(inner) => {
                write!(f, "!")?;
                inner.fmt_prec(f, 2)?;
            }
            ElFormula::And(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " & ")?;
                // Right operand needs strictly higher binding to reparse
                // left-associatively.
                b.fmt_prec(f, 2)?;
            }
            ElFormula::Or(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 1)?;
            }
        }
        if prec < min_prec {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ElFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// An infinity-set acceptance condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AcceptanceCondition {
    /// Accept iff the infinity set meets the given set.
    Buchi(StateSet),
    /// Accept iff the infinity set is one of the listed sets.
    Muller(Vec<StateSet>),
    /// Accept iff some pair has `e` avoided and `f` met.
    Rabin(Vec<AcceptancePair>),
    /// Accept iff every pair with `f` met also has `e` met.
    Streett(Vec<AcceptancePair>),
    /// Accept iff the least index whose set is met is even.
    Parity(Vec<StateSet>),
    /// Accept iff the formula holds on the infinity set.
    EmersonLei(ElFormula),
}

impl AcceptanceCondition {
    /// Evaluates the condition on a candidate infinity set.
    pub fn accepts(&self, x: &StateSet) -> bool {
        match self {
            AcceptanceCondition::Buchi(f) => x.intersects(f),
            AcceptanceCondition::Muller(sets) => sets.iter().any(|s| s == x),
            AcceptanceCondition::Rabin(pairs) => pairs
                .iter()
                .any(|p| !x.intersects(&p.e) && x.intersects(&p.f)),
            AcceptanceCondition::Streett(pairs) => pairs
                .iter()
                .all(|p| !x.intersects(&p.f) || x.intersects(&p.e)),
            AcceptanceCondition::Parity(sets) => sets
                .iter()
                .position(|s| x.intersects(s))
                .is_some_and(|j| j % 2 == 0),
            AcceptanceCondition::EmersonLei(formula) => formula.eval(x),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            AcceptanceCondition::Buchi(_) => "buchi",
            AcceptanceCondition::Muller(_) => "muller",
            AcceptanceCondition::Rabin(_) => "rabin",
            AcceptanceCondition::Streett(_) => "streett",
            AcceptanceCondition::Parity(_) => "parity",
            AcceptanceCondition::EmersonLei(_) => "el",
        }
    }

    /// All state sets referenced by the condition (for validation).
    fn referenced_sets(&self) -> Vec<(&'static str, StateSet)> {
        match self {
            AcceptanceCondition::Buchi(f) => vec![("buchi set", f.clone())],
            AcceptanceCondition::Muller(sets) => sets
                .iter()
                .map(|s| ("muller member set", s.clone()))
                .collect(),
            AcceptanceCondition::Rabin(pairs) | AcceptanceCondition::Streett(pairs) => pairs
                .iter()
                .flat_map(|p| [("pair e-set", p.e.clone()), ("pair f-set", p.f.clone())])
                .collect(),
            AcceptanceCondition::Parity(sets) => {
                sets.iter().map(|s| ("parity set", s.clone())).collect()
            }
            AcceptanceCondition::EmersonLei(formula) => {
                vec![("formula atom", formula.atoms())]
            }
        }
    }
}

/// A single well-formedness violation found by [`OmegaAutomaton::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// A nondeterministic ω-automaton with states `1..=num_states`.
///
/// The transition relation may be partial: a missing `(state, symbol)` entry
/// means the run dies there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaAutomaton {
    pub num_states: u32,
    pub alphabet: Vec<String>,
    pub initial: StateSet,
    pub transitions: BTreeMap<(StateId, SymbolId), StateSet>,
    pub acceptance: AcceptanceCondition,
}

impl OmegaAutomaton {
    pub fn new(
        num_states: u32,
        alphabet: Vec<String>,
        initial: StateSet,
        transitions: BTreeMap<(StateId, SymbolId), StateSet>,
        acceptance: AcceptanceCondition,
    ) -> Self {
        OmegaAutomaton {
            num_states,
            alphabet,
            initial,
            transitions,
            acceptance,
        }
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        1..=self.num_states
    }

    pub fn symbol_index(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Successors of a single state on a symbol; empty if undefined.
    pub fn post(&self, q: StateId, sym: SymbolId) -> StateSet {
        self.transitions
            .get(&(q, sym))
            .cloned()
            .unwrap_or_default()
    }

    /// Image of a state set under one symbol (union of per-state successors).
    pub fn successors(&self, set: &StateSet, sym: SymbolId) -> Result<StateSet, Error> {
        if sym >= self.alphabet.len() {
            return Err(Error::UnknownSymbol {
                index: sym,
                alphabet_len: self.alphabet.len(),
            });
        }
        Ok(self.post_set(set, sym))
    }

    pub(crate) fn post_set(&self, set: &StateSet, sym: SymbolId) -> StateSet {
        let mut out = StateSet::new();
        for q in set {
            if let Some(dsts) = self.transitions.get(&(q, sym)) {
                out.union_with(dsts);
            }
        }
        out
    }

    /// True iff the automaton has exactly one initial state and at most one
    /// successor per (state, symbol).
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.transitions.values().all(|dsts| dsts.len() <= 1)
    }

    /// Checks every structural invariant; returns all violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut violation = |field: &str, message: String| {
            out.push(Violation {
                field: field.to_string(),
                message,
            });
        };
        let in_range = |set: &StateSet| set.iter().all(|q| q >= 1 && q <= self.num_states);

        if self.num_states == 0 {
            violation("states", "automaton must have at least one state".into());
        }
        if self.alphabet.is_empty() {
            violation("alphabet", "alphabet must be nonempty".into());
        }
        for (i, sym) in self.alphabet.iter().enumerate() {
            if self.alphabet[..i].contains(sym) {
                violation("alphabet", format!("duplicate symbol '{sym}'"));
            }
        }
        if self.initial.is_empty() {
            violation("initial", "initial state set must be nonempty".into());
        }
        if !in_range(&self.initial) {
            violation(
                "initial",
                format!("index out of range in {}", self.initial),
            );
        }
        for ((src, sym), dsts) in &self.transitions {
            if *src < 1 || *src > self.num_states {
                violation("trans", format!("source state {src} out of range"));
            }
            if *sym >= self.alphabet.len() {
                violation("trans", format!("symbol index {sym} out of range"));
            }
            if !in_range(dsts) {
                violation(
                    "trans",
                    format!("target out of range in {dsts} from state {src}"),
                );
            }
        }
        for (field, set) in self.acceptance.referenced_sets() {
            if !in_range(&set) {
                violation("acceptance", format!("{field} {set} not within 1..={}", self.num_states));
            }
        }
        match &self.acceptance {
            AcceptanceCondition::Muller(sets) => {
                for s in sets {
                    if s.is_empty() {
                        violation("acceptance", "muller member set must be nonempty".into());
                    }
                }
            }
            AcceptanceCondition::Rabin(pairs) | AcceptanceCondition::Streett(pairs) => {
                if pairs.is_empty() {
                    violation("acceptance", "pair list must be nonempty".into());
                }
            }
            AcceptanceCondition::Parity(sets) => {
                if sets.is_empty() {
                    violation("acceptance", "parity sequence must be nonempty".into());
                }
            }
            _ => {}
        }
        out
    }

    /// Rewrites the acceptance condition into an equivalent Muller condition
    /// by enumerating all nonempty state subsets. Transition structure is
    /// preserved.
    pub fn to_muller(&self) -> Result<OmegaAutomaton, Error> {
        self.to_muller_bounded(DEFAULT_MULLER_BOUND)
    }

    pub fn to_muller_bounded(&self, bound: u32) -> Result<OmegaAutomaton, Error> {
        if self.num_states > bound {
            return Err(Error::SubsetBound {
                states: self.num_states,
                bound,
            });
        }
        let sets: Vec<StateSet> = nonempty_subsets(self.num_states)
            .filter(|x| self.acceptance.accepts(x))
            .collect();
        Ok(OmegaAutomaton {
            acceptance: AcceptanceCondition::Muller(sets),
            ..self.clone()
        })
    }
}
