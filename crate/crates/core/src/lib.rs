//! Determinization of ω-automata with infinity-set acceptance conditions.
//!
//! The library converts nondeterministic ω-automata whose acceptance is a
//! predicate on the set of states visited infinitely often (Büchi, Muller,
//! Rabin, Streett, parity, Emerson-Lei) into deterministic parity automata,
//! using compact generalized Safra trees. Alongside the determinizer it
//! provides:
//!
//! - the classical Safra-Schwoon construction from nondeterministic Streett
//!   automata to deterministic Rabin automata, as a comparison baseline,
//! - a brute-force membership oracle for ultimately periodic words, used as
//!   ground truth in the test suites,
//! - parity-automaton utilities (lasso acceptance, parity-to-Rabin
//!   reinterpretation, bounded equivalence checking, Rabin-index state
//!   lower bound),
//! - a generator for a family of Streett automata with exponentially many
//!   acceptance pairs on which tree-based Streett determinization blows up.

pub mod automaton;
pub mod cgs;
pub mod corpus;
mod error;
pub mod family;
pub mod lasso;
pub mod parity;
pub mod safra;
pub mod set;

pub use automaton::{AcceptanceCondition, AcceptancePair, ElFormula, OmegaAutomaton, Violation};
pub use error::Error;
pub use set::{StateId, StateSet, SymbolId};
