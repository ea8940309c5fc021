use odet_core::automaton::{AcceptanceCondition, AcceptancePair, OmegaAutomaton};
use odet_core::safra::{determinize_streett_safra, QhTree, safra_next};
use odet_core::cgs::Limits;
use odet_core::set::StateSet;
use std::collections::BTreeMap;

fn main() {
    let mut transitions = BTreeMap::new();
    transitions.insert((1u32, 1usize), StateSet::from([3]));
    transitions.insert((2, 0), StateSet::from([1]));
    transitions.insert((2, 1), StateSet::from([3]));
    transitions.insert((3, 0), StateSet::from([2, 3]));
    transitions.insert((3, 1), StateSet::from([1, 2, 3]));
    let a = OmegaAutomaton::new(
        3,
        vec!["a".into(), "b".into()],
        StateSet::from([1, 2]),
        transitions,
        AcceptanceCondition::Streett(vec![
            AcceptancePair { e: StateSet::new(), f: StateSet::from([1]) },
            AcceptancePair { e: StateSet::from([3]), f: StateSet::from([1]) },
            AcceptancePair { e: StateSet::new(), f: StateSet::from([1, 3]) },
        ]),
    );
    // trace the qh trees on b^omega
    let mut t = QhTree::initial(&a);
    println!("step 0: {}", t.canonical_encoding());
    for i in 1..=12 {
        t = safra_next(&t, &a, 1).unwrap().unwrap();
        let leaves: Vec<u32> = t.names().filter(|&n| t.is_leaf(n)).collect();
        println!("step {i}: leaves {leaves:?} | {}", t.canonical_encoding());
    }
    let out = determinize_streett_safra(&a, &Limits::default()).unwrap();
    println!("drw states: {}", out.drw.num_states());
    // which pairs fire on the b-cycle?
    let l = odet_core::lasso::Lasso::new(vec![], vec![1]);
    println!("accepts: {}", odet_core::safra::drw_accepts_lasso(&out.drw, &l).unwrap());
    // compute cycle states
    let mut cur = out.drw.initial;
    let mut seen = vec![cur];
    loop {
        cur = out.drw.transition(cur, 1);
        if let Some(p) = seen.iter().position(|&s| s == cur) {
            let cyc: Vec<usize> = seen[p..].to_vec();
            println!("cycle state ids: {cyc:?}");
            for &s in &cyc {
                println!("  state {s}: {}", out.drw.state_keys[s]);
            }
            for (i, pair) in out.drw.pairs.iter().enumerate() {
                let inf: std::collections::BTreeSet<usize> = cyc.iter().copied().collect();
                if inf.is_disjoint(&pair.e) && !inf.is_disjoint(&pair.f) {
                    println!("pair for name {} fires", i + 1);
                }
            }
            break;
        }
        seen.push(cur);
    }
}
