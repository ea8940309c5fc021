//! Utilities over deterministic automata: lasso acceptance, parity-to-Rabin
//! reinterpretation, bounded equivalence checking, and the Rabin-index
//! state lower bound.

use std::collections::BTreeSet;

use crate::automaton::OmegaAutomaton;
use crate::cgs::Dpw;
use crate::error::Error;
use crate::lasso::{accepts_lasso, Lasso};
use crate::safra::{Drw, DrwPair};
use crate::set::{StateSet, SymbolId};

/// Cap on the number of lassos [`check_equivalence`] will enumerate.
pub const LASSO_BUDGET: u64 = 2_000_000;

/// Runs a deterministic transition function over the lasso and returns the
/// set of positions visited infinitely often, or `None` if the run dies.
pub(crate) fn run_cycle(
    step: impl Fn(usize, SymbolId) -> Option<usize>,
    start: usize,
    l: &Lasso,
) -> Option<BTreeSet<usize>> {
    let mut cur = start;
    for &sym in &l.stem {
        cur = step(cur, sym)?;
    }
    let mut boundary = vec![cur];
    loop {
        let mut s = *boundary.last().unwrap();
        for &sym in &l.cycle {
            s = step(s, sym)?;
        }
        if let Some(i) = boundary.iter().position(|&b| b == s) {
            // Replay the cycling portion once, collecting every state on it.
            let mut states = BTreeSet::new();
            let mut t = boundary[i];
            for _ in i..boundary.len() {
                for &sym in &l.cycle {
                    states.insert(t);
                    t = step(t, sym).expect("replayed step exists");
                }
            }
            debug_assert_eq!(t, boundary[i]);
            return Some(states);
        }
        boundary.push(s);
    }
}

fn check_symbols(alphabet_len: usize, l: &Lasso) -> Result<(), Error> {
    for &sym in l.stem.iter().chain(l.cycle.iter()) {
        if sym >= alphabet_len {
            return Err(Error::UnknownSymbol {
                index: sym,
                alphabet_len,
            });
        }
    }
    Ok(())
}

/// Runs the parity automaton on the lasso; accepts iff the least parity
/// index on the cycle is even.
pub fn dpw_accepts_lasso(d: &Dpw, l: &Lasso) -> Result<bool, Error> {
    check_symbols(d.alphabet.len(), l)?;
    let inf = run_cycle(|s, sym| Some(d.transition(s, sym)), d.initial, l)
        .expect("transition table is total");
    let min_index = inf
        .iter()
        .map(|&s| d.priorities[s])
        .min()
        .expect("cycle is nonempty");
    Ok(min_index % 2 == 0)
}

/// Acceptance of a lasso by any *deterministic* automaton: run the unique
/// path, extract the cycle's states, and evaluate the acceptance predicate
/// on them. A run that dies rejects.
pub fn deterministic_accepts_lasso(a: &OmegaAutomaton, l: &Lasso) -> Result<bool, Error> {
    if !a.is_deterministic() {
        return Err(Error::NotDeterministic {
            reason: "lasso evaluation needs a unique run".to_string(),
        });
    }
    check_symbols(a.alphabet.len(), l)?;
    let start = a.initial.first().expect("validated initial set") as usize;
    let inf = run_cycle(
        |q, sym| a.post(q as u32, sym).first().map(|next| next as usize),
        start,
        l,
    );
    match inf {
        None => Ok(false),
        Some(set) => {
            let x: StateSet = set.iter().map(|&s| s as u32).collect();
            Ok(a.acceptance.accepts(&x))
        }
    }
}

/// Reinterprets a parity automaton as a Rabin automaton with `m` pairs:
/// pair `i` rules out indices below `2i` and requires index `2i` itself.
pub fn dpw_to_drw(d: &Dpw) -> Drw {
    let m = d.parity_sets / 2;
    let pairs = (0..m)
        .map(|i| {
            let mut e = BTreeSet::new();
            let mut f = BTreeSet::new();
            for (s, &p) in d.priorities.iter().enumerate() {
                if p < 2 * i {
                    e.insert(s);
                }
                if p == 2 * i {
                    f.insert(s);
                }
            }
            DrwPair { e, f }
        })
        .collect();
    let state_keys = d
        .states
        .iter()
        .map(|s| match s {
            crate::cgs::DpwState::Tree(t) => t.canonical_encoding(),
            crate::cgs::DpwState::Sink => "sink".to_string(),
        })
        .collect();
    Drw {
        alphabet: d.alphabet.clone(),
        initial: d.initial,
        transitions: d.transitions.clone(),
        pairs,
        state_keys,
    }
}

/// The least `n` with `n² + n + 1 ≥ k`: no automaton with fewer states can
/// recognize a language of Rabin index `k`.
pub fn rabin_index_state_lower_bound(k: u64) -> u64 {
    let mut n: u64 = 0;
    while n * n + n + 1 < k {
        n += 1;
    }
    n
}

/// The looser headline figure `⌈√k⌉ - 1`.
pub fn sqrt_headline_bound(k: u64) -> u64 {
    let mut r = (k as f64).sqrt() as u64;
    while r * r < k {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= k {
        r -= 1;
    }
    r.saturating_sub(1)
}

/// All lassos with `|stem| ≤ stem_max` and `1 ≤ |cycle| ≤ cycle_max` over an
/// alphabet of the given size, in lexicographic order.
pub fn enumerate_lassos(
    alphabet_len: usize,
    stem_max: usize,
    cycle_max: usize,
) -> Result<Vec<Lasso>, Error> {
    let mut count: u128 = 0;
    let mut stems_total: u128 = 0;
    let mut cycles_total: u128 = 0;
    for len in 0..=stem_max {
        stems_total += (alphabet_len as u128).pow(len as u32);
    }
    for len in 1..=cycle_max {
        cycles_total += (alphabet_len as u128).pow(len as u32);
    }
    count += stems_total * cycles_total;
    if count > LASSO_BUDGET as u128 {
        return Err(Error::LassoBudget {
            count,
            budget: LASSO_BUDGET,
        });
    }

    fn words_of_length(alphabet_len: usize, len: usize) -> Vec<Vec<SymbolId>> {
        let mut out = Vec::new();
        let mut word = vec![0usize; len];
        loop {
            out.push(word.clone());
            // Advance the word like a base-`alphabet_len` counter.
            let mut pos = len;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                word[pos] += 1;
                if word[pos] < alphabet_len {
                    break;
                }
                word[pos] = 0;
            }
        }
    }

    let stems: Vec<Vec<SymbolId>> = (0..=stem_max)
        .flat_map(|len| words_of_length(alphabet_len, len))
        .collect();
    let cycles: Vec<Vec<SymbolId>> = (1..=cycle_max)
        .flat_map(|len| words_of_length(alphabet_len, len))
        .collect();
    let mut out = Vec::with_capacity(stems.len() * cycles.len());
    for stem in &stems {
        for cycle in &cycles {
            out.push(Lasso::new(stem.clone(), cycle.clone()));
        }
    }
    Ok(out)
}

/// One lasso on which the two automata disagreed.
#[derive(Debug, Clone)]
pub struct Disagreement {
    pub lasso: Lasso,
    pub spec_verdict: bool,
    pub impl_verdict: bool,
}

/// Outcome of a bounded-lasso equivalence check.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub total_lassos: usize,
    pub disagreements: Vec<Disagreement>,
    pub stem_max: usize,
    pub loop_max: usize,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares the brute-force oracle on `a` against an arbitrary verdict
/// function, over every lasso within the bounds.
pub fn check_equivalence_with(
    a: &OmegaAutomaton,
    mut impl_verdict: impl FnMut(&Lasso) -> Result<bool, Error>,
    stem_max: usize,
    loop_max: usize,
) -> Result<EquivalenceReport, Error> {
    let lassos = enumerate_lassos(a.alphabet.len(), stem_max, loop_max)?;
    let mut disagreements = Vec::new();
    for l in &lassos {
        let spec_verdict = accepts_lasso(a, l)?;
        let impl_verdict = impl_verdict(l)?;
        if spec_verdict != impl_verdict {
            disagreements.push(Disagreement {
                lasso: l.clone(),
                spec_verdict,
                impl_verdict,
            });
        }
    }
    Ok(EquivalenceReport {
        total_lassos: lassos.len(),
        disagreements,
        stem_max,
        loop_max,
    })
}

/// Bounded-lasso equivalence of an automaton against a parity automaton
/// (typically its own determinization).
pub fn check_equivalence(
    a: &OmegaAutomaton,
    d: &Dpw,
    stem_max: usize,
    loop_max: usize,
) -> Result<EquivalenceReport, Error> {
    check_equivalence_with(a, |l| dpw_accepts_lasso(d, l), stem_max, loop_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::AcceptanceCondition;
    use crate::cgs::{determinize, Limits};
    use crate::set::StateId;
    use std::collections::BTreeMap;

    fn automaton(
        n: u32,
        alphabet: &[&str],
        initial: &[StateId],
        trans: &[(StateId, usize, &[StateId])],
        acceptance: AcceptanceCondition,
    ) -> OmegaAutomaton {
        let mut transitions = BTreeMap::new();
        for (src, sym, dsts) in trans {
            transitions.insert((*src, *sym), dsts.iter().copied().collect());
        }
        OmegaAutomaton::new(
            n,
            alphabet.iter().map(|s| s.to_string()).collect(),
            initial.iter().copied().collect(),
            transitions,
            acceptance,
        )
    }

    fn accepting_loop() -> OmegaAutomaton {
        automaton(
            1,
            &["a"],
            &[1],
            &[(1, 0, &[1])],
            AcceptanceCondition::Buchi(StateSet::from([1])),
        )
    }

    #[test]
    fn dpw_acceptance_follows_min_index() {
        let d = determinize(&accepting_loop(), &Limits::default()).unwrap();
        assert!(dpw_accepts_lasso(&d, &Lasso::new(vec![], vec![0])).unwrap());

        // Flip every priority to odd: everything becomes rejecting.
        let mut odd = d.clone();
        for p in odd.priorities.iter_mut() {
            *p = 1;
        }
        assert!(!dpw_accepts_lasso(&odd, &Lasso::new(vec![], vec![0])).unwrap());
    }

    #[test]
    fn dpw_acceptance_invariant_under_rotation_and_unrolling() {
        let a = automaton(
            2,
            &["a", "b"],
            &[1],
            &[
                (1, 0, &[1, 2]),
                (2, 0, &[2]),
                (2, 1, &[1]),
            ],
            AcceptanceCondition::Buchi(StateSet::from([2])),
        );
        let d = determinize(&a, &Limits::default()).unwrap();
        for l in enumerate_lassos(2, 2, 3).unwrap() {
            let base = dpw_accepts_lasso(&d, &l).unwrap();
            for k in 1..l.cycle.len() {
                assert_eq!(dpw_accepts_lasso(&d, &l.rotated(k)).unwrap(), base);
            }
            assert_eq!(dpw_accepts_lasso(&d, &l.unrolled(2)).unwrap(), base);
        }
    }

    #[test]
    fn dpw_to_drw_preserves_verdicts() {
        let a = automaton(
            3,
            &["a", "b"],
            &[1],
            &[
                (1, 0, &[2, 3]),
                (2, 0, &[2]),
                (3, 1, &[1]),
                (2, 1, &[3]),
            ],
            AcceptanceCondition::Parity(vec![StateSet::from([2]), StateSet::from([1, 3])]),
        );
        let d = determinize(&a, &Limits::default()).unwrap();
        let r = dpw_to_drw(&d);
        assert!(r.pairs.len() as u32 <= 3 * 3 + 3 + 1);
        for l in enumerate_lassos(2, 3, 3).unwrap() {
            assert_eq!(
                crate::safra::drw_accepts_lasso(&r, &l).unwrap(),
                dpw_accepts_lasso(&d, &l).unwrap(),
                "pair reinterpretation disagrees on {l:?}"
            );
        }
    }

    #[test]
    fn all_odd_priorities_give_empty_language() {
        let d = determinize(&accepting_loop(), &Limits::default()).unwrap();
        let mut odd = d.clone();
        for p in odd.priorities.iter_mut() {
            *p = 1;
        }
        let r = dpw_to_drw(&odd);
        for pair in &r.pairs {
            assert!(pair.f.is_empty() || !pair.e.is_empty());
        }
        assert!(!crate::safra::drw_accepts_lasso(&r, &Lasso::new(vec![], vec![0])).unwrap());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(rabin_index_state_lower_bound(1), 0);
        assert_eq!(rabin_index_state_lower_bound(3), 1);
        assert_eq!(rabin_index_state_lower_bound(8), 3);
        assert_eq!(rabin_index_state_lower_bound(7), 2);
    }

    #[test]
    fn lower_bound_is_least_and_dominates_headline() {
        for k in 1..=2000u64 {
            let n = rabin_index_state_lower_bound(k);
            assert!(n * n + n + 1 >= k);
            if n > 0 {
                let p = n - 1;
                assert!(p * p + p + 1 < k);
            }
            assert!(n >= sqrt_headline_bound(k));
        }
        // Monotone in k.
        let mut prev = 0;
        for k in 1..=2000u64 {
            let n = rabin_index_state_lower_bound(k);
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn lasso_enumeration_counts() {
        let lassos = enumerate_lassos(2, 3, 4).unwrap();
        assert_eq!(lassos.len(), 15 * 30);
        // Deterministic order.
        let again = enumerate_lassos(2, 3, 4).unwrap();
        assert_eq!(lassos, again);
        assert!(matches!(
            enumerate_lassos(10, 10, 10),
            Err(Error::LassoBudget { .. })
        ));
    }

    #[test]
    fn equivalence_check_accepts_own_determinization() {
        let a = accepting_loop();
        let d = determinize(&a, &Limits::default()).unwrap();
        let report = check_equivalence(&a, &d, 2, 3).unwrap();
        assert!(report.equivalent());
        // One-letter alphabet: three stems times three cycles.
        assert_eq!(report.total_lassos, 9);
    }

    #[test]
    fn flipped_priority_is_detected() {
        let a = accepting_loop();
        let mut d = determinize(&a, &Limits::default()).unwrap();
        // Make the accepting fixpoint odd.
        let s1 = d.transition(d.initial, 0);
        d.priorities[s1] = 1;
        let report = check_equivalence(&a, &d, 2, 3).unwrap();
        assert!(!report.equivalent());
        assert!(report.disagreements.iter().all(|x| x.spec_verdict));
    }

    #[test]
    fn empty_language_agrees_everywhere_with_false() {
        let mut a = accepting_loop();
        a.acceptance = AcceptanceCondition::Buchi(StateSet::new());
        let d = determinize(&a, &Limits::default()).unwrap();
        let report = check_equivalence(&a, &d, 2, 3).unwrap();
        assert!(report.equivalent());
        for l in enumerate_lassos(1, 2, 3).unwrap() {
            assert!(!dpw_accepts_lasso(&d, &l).unwrap());
        }
    }

    #[test]
    fn deterministic_lasso_acceptance_requires_determinism() {
        let a = automaton(
            2,
            &["a"],
            &[1],
            &[(1, 0, &[1, 2])],
            AcceptanceCondition::Buchi(StateSet::from([1])),
        );
        assert!(matches!(
            deterministic_accepts_lasso(&a, &Lasso::new(vec![], vec![0])),
            Err(Error::NotDeterministic { .. })
        ));
        let d = determinize(&accepting_loop(), &Limits::default()).unwrap();
        let auto = d.to_automaton();
        assert!(deterministic_accepts_lasso(&auto, &Lasso::new(vec![], vec![0])).unwrap());
    }
}
