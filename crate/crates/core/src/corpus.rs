//! Seeded random automata for the test corpora.

use std::collections::BTreeMap;

use rand::Rng;

use crate::automaton::{AcceptanceCondition, AcceptancePair, ElFormula, OmegaAutomaton};
use crate::set::{StateId, StateSet};

/// The acceptance kinds a corpus covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptanceKind {
    Buchi,
    Muller,
    Rabin,
    Streett,
    Parity,
    EmersonLei,
}

pub const ALL_KINDS: [AcceptanceKind; 6] = [
    AcceptanceKind::Buchi,
    AcceptanceKind::Muller,
    AcceptanceKind::Rabin,
    AcceptanceKind::Streett,
    AcceptanceKind::Parity,
    AcceptanceKind::EmersonLei,
];

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub min_states: u32,
    pub max_states: u32,
    pub alphabet_size: usize,
    /// Probability that any given state is a target of a given
    /// (state, symbol) cell; cells ending up empty leave the relation
    /// partial there.
    pub edge_prob: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            min_states: 1,
            max_states: 4,
            alphabet_size: 2,
            edge_prob: 0.45,
        }
    }
}

fn random_subset(rng: &mut impl Rng, n: u32, p: f64) -> StateSet {
    (1..=n).filter(|_| rng.gen_bool(p)).collect()
}

fn random_nonempty_subset(rng: &mut impl Rng, n: u32) -> StateSet {
    let mut set = random_subset(rng, n, 0.5);
    if set.is_empty() {
        set.insert(rng.gen_range(1..=n));
    }
    set
}

fn random_formula(rng: &mut impl Rng, n: u32, depth: u32) -> ElFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        let q: StateId = rng.gen_range(1..=n);
        return if rng.gen_bool(0.5) {
            ElFormula::Inf(q)
        } else {
            ElFormula::Fin(q)
        };
    }
    match rng.gen_range(0..3) {
        0 => ElFormula::And(
            Box::new(random_formula(rng, n, depth - 1)),
            Box::new(random_formula(rng, n, depth - 1)),
        ),
        1 => ElFormula::Or(
            Box::new(random_formula(rng, n, depth - 1)),
            Box::new(random_formula(rng, n, depth - 1)),
        ),
        _ => ElFormula::Not(Box::new(random_formula(rng, n, depth - 1))),
    }
}

fn random_acceptance(rng: &mut impl Rng, kind: AcceptanceKind, n: u32) -> AcceptanceCondition {
    match kind {
        AcceptanceKind::Buchi => AcceptanceCondition::Buchi(random_subset(rng, n, 0.5)),
        AcceptanceKind::Muller => {
            let count = rng.gen_range(0..=3);
            let mut sets: Vec<StateSet> = Vec::new();
            for _ in 0..count {
                let s = random_nonempty_subset(rng, n);
                if !sets.contains(&s) {
                    sets.push(s);
                }
            }
            AcceptanceCondition::Muller(sets)
        }
        AcceptanceKind::Rabin | AcceptanceKind::Streett => {
            let count = rng.gen_range(1..=3);
            let pairs = (0..count)
                .map(|_| AcceptancePair {
                    e: random_subset(rng, n, 0.4),
                    f: random_subset(rng, n, 0.4),
                })
                .collect();
            if kind == AcceptanceKind::Rabin {
                AcceptanceCondition::Rabin(pairs)
            } else {
                AcceptanceCondition::Streett(pairs)
            }
        }
        AcceptanceKind::Parity => {
            let count = rng.gen_range(1..=5);
            AcceptanceCondition::Parity((0..count).map(|_| random_subset(rng, n, 0.4)).collect())
        }
        AcceptanceKind::EmersonLei => {
            AcceptanceCondition::EmersonLei(random_formula(rng, n, 3))
        }
    }
}

/// Draws a valid random automaton of the given acceptance kind.
pub fn random_automaton(
    rng: &mut impl Rng,
    kind: AcceptanceKind,
    cfg: &CorpusConfig,
) -> OmegaAutomaton {
    let n = rng.gen_range(cfg.min_states..=cfg.max_states);
    let alphabet: Vec<String> = (0..cfg.alphabet_size)
        .map(|i| {
            char::from_u32('a' as u32 + i as u32)
                .expect("small alphabet")
                .to_string()
        })
        .collect();
    let mut transitions = BTreeMap::new();
    for q in 1..=n {
        for sym in 0..cfg.alphabet_size {
            let targets = random_subset(rng, n, cfg.edge_prob);
            if !targets.is_empty() {
                transitions.insert((q, sym), targets);
            }
        }
    }
    let a = OmegaAutomaton::new(
        n,
        alphabet,
        random_nonempty_subset(rng, n),
        transitions,
        random_acceptance(rng, kind, n),
    );
    debug_assert!(a.validate().is_empty(), "{:?}", a.validate());
    a
}
