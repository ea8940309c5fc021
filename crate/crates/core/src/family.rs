//! Generator for a family of nondeterministic Streett automata with `3n+1`
//! states and `2^n + 1` acceptance pairs, on which name-sensitive Streett
//! determinization blows up while the CGS construction does not.
//!
//! States, in index order: the start state, then the ⊤-states
//! `q_{0,⊤}..q_{n-1,⊤}`, the s-states, and the ⊥-states. The alphabet is
//! `a_0..a_{n-1}`, `s_0..s_{n-1}`, `bot`; `a_0` doubles as the start letter.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;

use crate::automaton::{AcceptanceCondition, AcceptancePair, OmegaAutomaton};
use crate::cgs::{self, Limits};
use crate::error::Error;
use crate::safra;
use crate::set::{StateId, StateSet};

/// Default cap on the family size; the pair table has `2^n + 1` entries.
pub const DEFAULT_FAMILY_CAP: u32 = 12;

/// Index layout of the family's states.
#[derive(Debug, Clone, Copy)]
pub struct FamilyLayout {
    pub n: u32,
}

impl FamilyLayout {
    pub fn from_state_count(num_states: u32) -> Option<FamilyLayout> {
        if num_states >= 7 && (num_states - 1) % 3 == 0 {
            Some(FamilyLayout {
                n: (num_states - 1) / 3,
            })
        } else {
            None
        }
    }

    pub fn start(&self) -> StateId {
        1
    }

    pub fn top(&self, i: u32) -> StateId {
        2 + i
    }

    pub fn s(&self, i: u32) -> StateId {
        2 + self.n + i
    }

    pub fn bottom(&self, i: u32) -> StateId {
        2 + 2 * self.n + i
    }

    pub fn tops(&self) -> StateSet {
        (0..self.n).map(|i| self.top(i)).collect()
    }

    pub fn bottoms(&self) -> StateSet {
        (0..self.n).map(|i| self.bottom(i)).collect()
    }

    /// Symbol ids: `a_i` at `i`, `s_i` at `n + i`, `bot` last.
    pub fn sym_a(&self, i: u32) -> usize {
        i as usize
    }

    pub fn sym_s(&self, i: u32) -> usize {
        (self.n + i) as usize
    }

    pub fn sym_bot(&self) -> usize {
        (2 * self.n) as usize
    }

    /// Number of pair blocks, `⌊2^n / n⌋`.
    pub fn blocks(&self) -> u64 {
        (1u64 << self.n) / self.n as u64
    }
}

/// Builds the family member of size `n ≥ 2` under the default cap.
pub fn build_family_nsw(n: u32) -> Result<OmegaAutomaton, Error> {
    build_family_nsw_capped(n, DEFAULT_FAMILY_CAP)
}

pub fn build_family_nsw_capped(n: u32, cap: u32) -> Result<OmegaAutomaton, Error> {
    assert!(n >= 2, "the family is defined for n >= 2");
    if n > cap {
        return Err(Error::FamilyCap { n, cap });
    }
    let layout = FamilyLayout { n };
    let num_pairs = (1usize << n) + 1;

    let mut alphabet: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    alphabet.extend((0..n).map(|i| format!("s{i}")));
    alphabet.push("bot".to_string());

    let mut transitions: BTreeMap<(StateId, usize), StateSet> = BTreeMap::new();
    transitions.insert((layout.start(), layout.sym_a(0)), layout.tops());
    for i in 0..n {
        transitions.insert(
            (layout.top(i), layout.sym_bot()),
            StateSet::singleton(layout.top(i)),
        );
        transitions.insert(
            (layout.top(i), layout.sym_a(i)),
            StateSet::singleton(layout.s(i)),
        );
        transitions.insert(
            (layout.s(i), layout.sym_bot()),
            StateSet::singleton(layout.bottom(i)),
        );
        transitions.insert(
            (layout.bottom(i), layout.sym_bot()),
            StateSet::singleton(layout.bottom(i)),
        );
        for j in 0..n {
            transitions.insert(
                (layout.s(i), layout.sym_s(j)),
                StateSet::singleton(layout.s(j)),
            );
            transitions.insert(
                (layout.top(i), layout.sym_s(j)),
                StateSet::singleton(layout.top(i)),
            );
            transitions.insert(
                (layout.bottom(i), layout.sym_s(j)),
                StateSet::singleton(layout.bottom(i)),
            );
            transitions.insert(
                (layout.bottom(i), layout.sym_a(j)),
                StateSet::singleton(layout.bottom(i)),
            );
        }
    }

    // Pair table, position 0 being the placeholder pair and position j the
    // pair with index j. Memberships not forced by a constraint stay empty.
    let mut pairs = vec![
        AcceptancePair {
            e: StateSet::new(),
            f: StateSet::new(),
        };
        num_pairs
    ];
    pairs[0].f = layout.bottoms();
    pairs[1 << n].f = layout.tops();
    let k = layout.blocks();
    for r in 0..k {
        for i in 0..n as u64 {
            let idx = (1u64 << n) - r * n as u64 - i;
            pairs[idx as usize].e = StateSet::singleton(layout.s(i as u32));
        }
    }

    Ok(OmegaAutomaton::new(
        3 * n + 1,
        alphabet,
        StateSet::singleton(layout.start()),
        transitions,
        AcceptanceCondition::Streett(pairs),
    ))
}

/// A violated constraint of the family's pair table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintViolation {
    /// Constraint number, 1 through 6.
    pub constraint: u32,
    pub detail: String,
}

/// Checks the six pair-table constraints on a purported family member.
/// Returns the list of violated constraints with witnesses.
pub fn verify_family_constraints(a: &OmegaAutomaton) -> Vec<ConstraintViolation> {
    let mut out = Vec::new();
    let Some(layout) = FamilyLayout::from_state_count(a.num_states) else {
        out.push(ConstraintViolation {
            constraint: 0,
            detail: format!("state count {} is not of the form 3n+1", a.num_states),
        });
        return out;
    };
    let n = layout.n;
    let AcceptanceCondition::Streett(pairs) = &a.acceptance else {
        out.push(ConstraintViolation {
            constraint: 0,
            detail: "acceptance is not a Streett pair table".to_string(),
        });
        return out;
    };
    if pairs.len() != (1usize << n) + 1 {
        out.push(ConstraintViolation {
            constraint: 0,
            detail: format!("expected {} pairs, found {}", (1usize << n) + 1, pairs.len()),
        });
        return out;
    }
    let top_index = 1usize << n;

    // 1: every ⊤-state in the top pair's f, none in its e.
    for i in 0..n {
        if !pairs[top_index].f.contains(layout.top(i)) {
            out.push(ConstraintViolation {
                constraint: 1,
                detail: format!("top state {} missing from F_{top_index}", layout.top(i)),
            });
        }
        if pairs[top_index].e.contains(layout.top(i)) {
            out.push(ConstraintViolation {
                constraint: 1,
                detail: format!("top state {} present in E_{top_index}", layout.top(i)),
            });
        }
    }
    // 2: ⊥-states in no e-set with positive index.
    for j in 1..=top_index {
        for i in 0..n {
            if pairs[j].e.contains(layout.bottom(i)) {
                out.push(ConstraintViolation {
                    constraint: 2,
                    detail: format!("bottom state {} in E_{j}", layout.bottom(i)),
                });
            }
        }
    }
    // 3: ⊥-states in no f-set with positive index.
    for j in 1..=top_index {
        for i in 0..n {
            if pairs[j].f.contains(layout.bottom(i)) {
                out.push(ConstraintViolation {
                    constraint: 3,
                    detail: format!("bottom state {} in F_{j}", layout.bottom(i)),
                });
            }
        }
    }
    // 4: every ⊥-state in the placeholder pair's f.
    for i in 0..n {
        if !pairs[0].f.contains(layout.bottom(i)) {
            out.push(ConstraintViolation {
                constraint: 4,
                detail: format!("bottom state {} missing from the placeholder f", layout.bottom(i)),
            });
        }
    }
    // 5 and 6 range over the block-covered indices.
    let k = layout.blocks();
    for r in 0..k {
        for i in 0..n as u64 {
            let idx = ((1u64 << n) - r * n as u64 - i) as usize;
            let expected = StateSet::singleton(layout.s(i as u32));
            if pairs[idx].e != expected {
                out.push(ConstraintViolation {
                    constraint: 5,
                    detail: format!("E_{idx} is {} rather than {expected}", pairs[idx].e),
                });
            }
            for j in 0..n as u64 {
                if j != i {
                    let f_idx = ((1u64 << n) - r * n as u64 - j) as usize;
                    if pairs[f_idx].f.contains(layout.s(i as u32)) {
                        out.push(ConstraintViolation {
                            constraint: 5,
                            detail: format!("s-state {} in F_{f_idx}", layout.s(i as u32)),
                        });
                    }
                }
            }
            for t in 0..n as u64 {
                let f_idx = ((1u64 << n) - r * n as u64 - t) as usize;
                if pairs[f_idx].f.contains(layout.s(i as u32)) {
                    out.push(ConstraintViolation {
                        constraint: 6,
                        detail: format!("s-state {} in F_{f_idx}", layout.s(i as u32)),
                    });
                }
            }
        }
    }
    out
}

/// Exact value of `(n! · k^n)^n` with `k = ⌊2^n / n⌋`: the number of ways
/// of choosing one block permutation per branch.
pub fn block_permutation_count(n: u32) -> BigUint {
    assert!(n >= 1);
    let k = BigUint::from((1u128 << n) / n as u128);
    let mut factorial = BigUint::from(1u32);
    for i in 2..=n {
        factorial *= BigUint::from(i);
    }
    (factorial * k.pow(n)).pow(n)
}

/// Outcome of one determinization run in [`compare_state_counts`].
#[derive(Debug, Clone)]
pub enum CountOutcome {
    Complete { states: usize, millis: u128 },
    Partial { explored: usize, reason: String },
}

impl CountOutcome {
    pub fn states(&self) -> usize {
        match self {
            CountOutcome::Complete { states, .. } => *states,
            CountOutcome::Partial { explored, .. } => *explored,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, CountOutcome::Complete { .. })
    }
}

/// Reachable-state counts of both constructions on the family member of
/// size `n`, the tree-shape count with names stripped, and timings.
#[derive(Debug, Clone)]
pub struct FamilyComparison {
    pub n: u32,
    pub cgs: CountOutcome,
    pub safra: CountOutcome,
    /// Distinct reachable trees counted without names; `None` when the
    /// baseline hit a limit.
    pub safra_unnamed: Option<usize>,
}

pub fn compare_state_counts(n: u32, limits: &Limits) -> Result<FamilyComparison, Error> {
    let a = build_family_nsw(n)?;

    let started = Instant::now();
    let cgs_outcome = match cgs::determinize(&a, limits) {
        Ok(d) => CountOutcome::Complete {
            states: d.num_states(),
            millis: started.elapsed().as_millis(),
        },
        Err(Error::StateLimit { stats, .. }) | Err(Error::TimeLimit { stats, .. }) => {
            CountOutcome::Partial {
                explored: stats.states,
                reason: "limit exceeded".to_string(),
            }
        }
        Err(other) => return Err(other),
    };

    let started = Instant::now();
    let (safra_outcome, safra_unnamed) = match safra::determinize_streett_safra(&a, limits) {
        Ok(out) => {
            let unnamed: std::collections::BTreeSet<String> = out
                .trees
                .iter()
                .flatten()
                .map(|t| t.unnamed_encoding())
                .collect();
            (
                CountOutcome::Complete {
                    states: out.drw.num_states(),
                    millis: started.elapsed().as_millis(),
                },
                Some(unnamed.len()),
            )
        }
        Err(Error::StateLimit { stats, .. }) | Err(Error::TimeLimit { stats, .. }) => (
            CountOutcome::Partial {
                explored: stats.states,
                reason: "limit exceeded".to_string(),
            },
            None,
        ),
        Err(other) => return Err(other),
    };

    Ok(FamilyComparison {
        n,
        cgs: cgs_outcome,
        safra: safra_outcome,
        safra_unnamed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_the_closed_forms() {
        for n in 2..=5 {
            let a = build_family_nsw(n).unwrap();
            assert_eq!(a.num_states, 3 * n + 1);
            let AcceptanceCondition::Streett(pairs) = &a.acceptance else {
                panic!("family must be a Streett automaton");
            };
            assert_eq!(pairs.len(), (1usize << n) + 1);
            assert_eq!(a.alphabet.len() as u32, 2 * n + 1);
            assert!(a.validate().is_empty(), "{:?}", a.validate());
        }
    }

    #[test]
    fn generated_members_satisfy_all_constraints() {
        for n in 2..=4 {
            let a = build_family_nsw(n).unwrap();
            assert_eq!(verify_family_constraints(&a), Vec::new());
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_family_nsw(13),
            Err(Error::FamilyCap { .. })
        ));
    }

    #[test]
    fn mutations_are_detected() {
        let layout = FamilyLayout { n: 2 };
        let top_index = 1usize << 2;

        let mut a = build_family_nsw(2).unwrap();
        if let AcceptanceCondition::Streett(pairs) = &mut a.acceptance {
            pairs[top_index].f.remove(layout.top(0));
        }
        let violations = verify_family_constraints(&a);
        assert!(violations.iter().any(|v| v.constraint == 1));

        let mut b = build_family_nsw(2).unwrap();
        if let AcceptanceCondition::Streett(pairs) = &mut b.acceptance {
            pairs[2].e.insert(layout.bottom(0));
        }
        let violations = verify_family_constraints(&b);
        assert!(violations.iter().any(|v| v.constraint == 2));
    }

    #[test]
    fn block_counts_match_hand_computation() {
        assert_eq!(block_permutation_count(1), BigUint::from(2u32));
        assert_eq!(block_permutation_count(2), BigUint::from(64u32));
        assert_eq!(block_permutation_count(3), BigUint::from(110592u32));
    }

    #[test]
    fn block_count_dominates_factorial_power() {
        for n in 1..=8u32 {
            let mut factorial = BigUint::from(1u32);
            for i in 2..=n {
                factorial *= BigUint::from(i);
            }
            assert!(block_permutation_count(n) >= factorial.pow(n));
        }
    }

    #[test]
    fn comparison_runs_at_small_size() {
        let comparison = compare_state_counts(2, &Limits::default()).unwrap();
        assert!(comparison.cgs.is_complete(), "{:?}", comparison.cgs);
        assert!(comparison.safra.is_complete(), "{:?}", comparison.safra);
        assert!(comparison.safra_unnamed.unwrap() <= comparison.safra.states());
        assert!(comparison.cgs.states() > 0);
    }
}
