use thiserror::Error;

use crate::cgs::ExplorationStats;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol index {index} is out of range for an alphabet of {alphabet_len} symbols")]
    UnknownSymbol { index: usize, alphabet_len: usize },

    #[error("symbol '{name}' is not in the alphabet")]
    UnknownSymbolName { name: String },

    #[error("subset enumeration guard exceeded: automaton has {states} states, bound is {bound}")]
    SubsetBound { states: u32, bound: u32 },

    #[error("brute-force oracle bound exceeded: automaton has {states} states, bound is {bound}")]
    OracleBound { states: u32, bound: u32 },

    #[error("state limit of {limit} exceeded after exploring {} states", stats.states)]
    StateLimit { limit: usize, stats: ExplorationStats },

    #[error("time limit of {limit_seconds}s exceeded after exploring {} states", stats.states)]
    TimeLimit { limit_seconds: f64, stats: ExplorationStats },

    #[error("reached a tree violating a structural invariant: {details}")]
    TreeInvariant { details: String },

    #[error("parity component out of range: e = {e}, f = {f} with m = {m}")]
    ParityComponents { e: u32, f: u32, m: u32 },

    #[error("automaton does not use Streett acceptance")]
    NotStreett,

    #[error("automaton is not deterministic: {reason}")]
    NotDeterministic { reason: String },

    #[error("family size {n} exceeds the cap of {cap} (the pair table has 2^n + 1 entries)")]
    FamilyCap { n: u32, cap: u32 },

    #[error("lasso enumeration budget exceeded: {count} lassos requested, budget is {budget}")]
    LassoBudget { count: u128, budget: u64 },

    #[error("name pool exhausted while transforming a tree (invariant bug)")]
    NamePoolExhausted,
}
