//! Cross-checks between the determinizers and the brute-force oracle on a
//! seeded random corpus. The full-size corpus lives in the CLI crate's
//! acceptance suite; this one is sized to run on every test invocation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use odet_core::cgs::{determinize, DpwState, Limits};
use odet_core::corpus::{random_automaton, AcceptanceKind, CorpusConfig, ALL_KINDS};
use odet_core::lasso::{accepts_lasso, realizable_infinity_sets, witness_run};
use odet_core::parity::{check_equivalence, dpw_to_drw, enumerate_lassos};
use odet_core::safra::{determinize_streett_safra, drw_accepts_lasso};

fn kind_seed(kind: AcceptanceKind) -> u64 {
    match kind {
        AcceptanceKind::Buchi => 11,
        AcceptanceKind::Muller => 22,
        AcceptanceKind::Rabin => 33,
        AcceptanceKind::Streett => 44,
        AcceptanceKind::Parity => 55,
        AcceptanceKind::EmersonLei => 66,
    }
}

#[test]
fn determinization_matches_oracle_on_mini_corpus() {
    let cfg = CorpusConfig::default();
    for kind in ALL_KINDS {
        let mut rng = ChaCha8Rng::seed_from_u64(kind_seed(kind));
        for case in 0..30 {
            let a = random_automaton(&mut rng, kind, &cfg);
            let d = determinize(&a, &Limits::default())
                .unwrap_or_else(|e| panic!("{kind:?} case {case}: {e}"));
            let report = check_equivalence(&a, &d, 2, 3).unwrap();
            assert!(
                report.equivalent(),
                "{kind:?} case {case} disagrees: {:?}\nautomaton: {a:?}",
                report.disagreements.first()
            );
        }
    }
}

#[test]
fn parity_to_rabin_matches_on_mini_corpus() {
    let cfg = CorpusConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..25 {
        let a = random_automaton(&mut rng, AcceptanceKind::Parity, &cfg);
        let d = determinize(&a, &Limits::default()).unwrap();
        let r = dpw_to_drw(&d);
        for l in enumerate_lassos(a.alphabet.len(), 2, 3).unwrap() {
            assert_eq!(
                drw_accepts_lasso(&r, &l).unwrap(),
                odet_core::parity::dpw_accepts_lasso(&d, &l).unwrap()
            );
        }
    }
}

#[test]
fn three_way_agreement_on_streett_corpus() {
    let cfg = CorpusConfig {
        min_states: 1,
        max_states: 3,
        alphabet_size: 2,
        edge_prob: 0.45,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let lassos = enumerate_lassos(2, 3, 3).unwrap();
    for case in 0..15 {
        let a = random_automaton(&mut rng, AcceptanceKind::Streett, &cfg);
        let dpw = determinize(&a, &Limits::default()).unwrap();
        let safra = determinize_streett_safra(&a, &Limits::default()).unwrap();
        for l in &lassos {
            let oracle = accepts_lasso(&a, l).unwrap();
            let via_cgs = odet_core::parity::dpw_accepts_lasso(&dpw, l).unwrap();
            let via_safra = drw_accepts_lasso(&safra.drw, l).unwrap();
            assert_eq!(oracle, via_cgs, "case {case} cgs mismatch on {l:?}\n{a:?}");
            assert_eq!(oracle, via_safra, "case {case} safra mismatch on {l:?}\n{a:?}");
        }
    }
}

#[test]
fn oracle_witnesses_on_random_automata() {
    let cfg = CorpusConfig {
        min_states: 1,
        max_states: 4,
        alphabet_size: 2,
        edge_prob: 0.5,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7177);
    for _ in 0..40 {
        let a = random_automaton(&mut rng, AcceptanceKind::Buchi, &cfg);
        for l in enumerate_lassos(2, 1, 2).unwrap() {
            for x in realizable_infinity_sets(&a, &l).unwrap() {
                let w = witness_run(&a, &l, &x).unwrap().expect("witness");
                w.verify(&a, &l).unwrap();
                assert_eq!(w.infinity_set(), x);
            }
        }
    }
}

#[test]
fn every_reachable_tree_passes_the_invariant_suite() {
    // validate_trees makes determinize fail on the first violation; this
    // re-checks explicitly so a regression names the failing state.
    let cfg = CorpusConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for kind in ALL_KINDS {
        for _ in 0..10 {
            let a = random_automaton(&mut rng, kind, &cfg);
            let d = determinize(&a, &Limits::default()).unwrap();
            for state in &d.states {
                if let DpwState::Tree(t) = state {
                    let violations = t.check_invariants();
                    assert!(violations.is_empty(), "{violations:?}");
                }
            }
        }
    }
}
