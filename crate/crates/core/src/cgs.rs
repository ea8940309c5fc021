//! Determinization via compact generalized Safra (CGS) trees.
//!
//! A CGS tree is one state of the output deterministic parity automaton.
//! Each node tracks a subset of runs (its state label) together with a
//! *hope set*: the set of state indices the node conjectures as the
//! infinity set of those runs. Two integer components `e` and `f` record,
//! per transition, the smallest name of a deleted node and the smallest
//! name of a surviving node whose conjecture completed a verification
//! round on an accepting hope set. The parity condition reads acceptance
//! off `e` and `f`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::automaton::{AcceptanceCondition, OmegaAutomaton};
use crate::error::Error;
use crate::set::{StateId, StateSet, SymbolId};

/// Maximum node name for an automaton with `n` states: `n² + n + 1`.
pub fn name_bound(n: u32) -> u32 {
    n * n + n + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CgsNode {
    parent: Option<u32>,
    label: StateSet,
    hope: StateSet,
}

/// A compact generalized Safra tree: named, state-labeled, hope-annotated
/// nodes plus the `e`/`f` components. One such tree is one state of the
/// constructed deterministic parity automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgsTree {
    n: u32,
    nodes: BTreeMap<u32, CgsNode>,
    e: u32,
    f: u32,
}

impl CgsTree {
    /// The initial tree: a single root named 1, labeled with the initial
    /// states, hoping for the full index set; `e = f = m + 1`.
    pub fn initial(a: &OmegaAutomaton) -> CgsTree {
        let n = a.num_states;
        let m = name_bound(n);
        let mut nodes = BTreeMap::new();
        nodes.insert(
            1,
            CgsNode {
                parent: None,
                label: a.initial.clone(),
                hope: StateSet::full(n),
            },
        );
        CgsTree {
            n,
            nodes,
            e: m + 1,
            f: m + 1,
        }
    }

    pub fn num_automaton_states(&self) -> u32 {
        self.n
    }

    pub fn name_bound(&self) -> u32 {
        name_bound(self.n)
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = u32> + '_ {
        self.nodes.keys().copied()
    }

    pub fn label(&self, name: u32) -> Option<&StateSet> {
        self.nodes.get(&name).map(|v| &v.label)
    }

    pub fn hope(&self, name: u32) -> Option<&StateSet> {
        self.nodes.get(&name).map(|v| &v.hope)
    }

    pub fn parent(&self, name: u32) -> Option<u32> {
        self.nodes.get(&name).and_then(|v| v.parent)
    }

    /// Children of a node in ascending name order.
    pub fn children(&self, name: u32) -> Vec<u32> {
        self.nodes
            .iter()
            .filter(|(_, node)| node.parent == Some(name))
            .map(|(k, _)| *k)
            .collect()
    }

    /// Annotation of the edge into `name`: the index its hope set dropped
    /// relative to its parent's, or 0 when the hope sets are equal.
    pub fn edge_annotation(&self, name: u32) -> Option<u32> {
        let node = self.nodes.get(&name)?;
        let parent = node.parent?;
        Some(
            self.nodes[&parent]
                .hope
                .max_difference(&node.hope)
                .unwrap_or(0),
        )
    }

    fn is_leaf(&self, name: u32) -> bool {
        self.nodes.values().all(|node| node.parent != Some(name))
    }

    /// The parity index of this tree within `0..2m`.
    pub fn parity_index(&self) -> Result<u32, Error> {
        parity_index(self.e, self.f, self.name_bound())
    }

    /// Deterministic, injective key: name-to-parent, labels, hopes, `e`, `f`.
    pub fn canonical_encoding(&self) -> String {
        let mut out = String::new();
        write!(out, "e{} f{}", self.e, self.f).unwrap();
        for (name, node) in &self.nodes {
            write!(
                out,
                " {}:{}:{}:{}",
                name,
                node.parent.map_or(0, |p| p),
                node.label,
                node.hope
            )
            .unwrap();
        }
        out
    }

    /// The unique successor tree on `sym`, or `None` when every tracked run
    /// dies (the caller maps that to the rejecting sink).
    pub fn successor(&self, a: &OmegaAutomaton, sym: SymbolId) -> Option<CgsTree> {
        let m = self.name_bound();

        let mut work = Transform {
            acceptance: &a.acceptance,
            nodes: self.nodes.clone(),
            next_name: self.nodes.keys().max().copied().unwrap_or(0) + 1,
            deleted: BTreeSet::new(),
            resets: BTreeSet::new(),
        };

        // Advance every state label one step.
        for node in work.nodes.values_mut() {
            node.label = a.post_set(&node.label, sym);
        }
        if work.nodes[&1].label.is_empty() {
            return None;
        }

        work.transform(1);

        // Name compaction: shift each survivor down by the number of
        // deleted names below it, restoring a gapless range in [m].
        let e = work.deleted.first().copied().unwrap_or(m + 1);
        let deleted: Vec<u32> = work.deleted.iter().copied().collect();
        let shift =
            |name: u32| -> u32 { name - deleted.partition_point(|&d| d < name) as u32 };
        let mut nodes = BTreeMap::new();
        for (name, node) in &work.nodes {
            nodes.insert(
                shift(*name),
                CgsNode {
                    parent: node.parent.map(shift),
                    label: node.label.clone(),
                    hope: node.hope.clone(),
                },
            );
        }
        let f = work
            .resets
            .iter()
            .filter(|name| work.nodes.contains_key(name))
            .map(|&name| shift(name))
            .min()
            .unwrap_or(m + 1);

        Some(CgsTree {
            n: self.n,
            nodes,
            e,
            f,
        })
    }

    /// Checks every structural invariant; an empty result means the tree is
    /// well-formed. Individual messages name the violated property.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n;
        let m = self.name_bound();

        let names: Vec<u32> = self.nodes.keys().copied().collect();
        if names.len() as u32 > m {
            out.push(format!("node count {} exceeds {m}", names.len()));
        }
        if names
            .iter()
            .enumerate()
            .any(|(i, &name)| name != i as u32 + 1)
        {
            out.push(format!("names are not the gapless range 1..={}", names.len()));
        }

        match self.nodes.get(&1) {
            None => out.push("root named 1 is missing".into()),
            Some(root) => {
                if root.parent.is_some() {
                    out.push("root has a parent".into());
                }
                if root.hope != StateSet::full(n) {
                    out.push(format!("root hope {} is not the full index set", root.hope));
                }
            }
        }
        for (&name, node) in &self.nodes {
            if name != 1 && node.parent.is_none() {
                out.push(format!("node {name} has no parent"));
            }
            if let Some(p) = node.parent {
                match self.nodes.get(&p) {
                    None => out.push(format!("node {name} has dangling parent {p}")),
                    Some(parent) => {
                        if !node.hope.is_subset(&parent.hope) {
                            out.push(format!("hope of node {name} is not within its parent's"));
                        }
                        if parent.hope.minus(&node.hope).len() > 1 {
                            out.push(format!(
                                "hope of node {name} drops more than one index from its parent's"
                            ));
                        }
                    }
                }
            }
            if !node.label.is_subset(&node.hope) {
                out.push(format!(
                    "label {} of node {name} leaves its hope set {}",
                    node.label, node.hope
                ));
            }
        }

        let mut leaves = 0usize;
        for &name in &names {
            let node = &self.nodes[&name];
            let kids = self.children(name);
            if kids.is_empty() {
                leaves += 1;
                if node.label.is_empty() {
                    out.push(format!("leaf {name} has an empty label"));
                }
            } else {
                if node.hope.is_empty() {
                    out.push(format!("non-leaf {name} has an empty hope set"));
                }
                let mut union = StateSet::new();
                for (i, &c) in kids.iter().enumerate() {
                    for &d in &kids[i + 1..] {
                        if self.nodes[&c].label.intersects(&self.nodes[&d].label) {
                            out.push(format!("children {c} and {d} of {name} share states"));
                        }
                    }
                    union.union_with(&self.nodes[&c].label);
                }
                if union != node.label {
                    out.push(format!(
                        "label of {name} is {} but its children union to {union}",
                        node.label
                    ));
                }
            }
        }
        if leaves as u32 > n {
            out.push(format!("leaf count {leaves} exceeds {n}"));
        }

        // Height after contracting edges that keep the hope set unchanged.
        for &name in &names {
            let mut depth = 0u32;
            let mut cur = name;
            while let Some(p) = self.nodes[&cur].parent {
                if self.nodes[&p].hope != self.nodes[&cur].hope {
                    depth += 1;
                }
                cur = p;
            }
            if depth > n {
                out.push(format!("collapsed depth of node {name} exceeds {n}"));
            }
        }

        if self.e < 2 || self.e > m + 1 {
            out.push(format!("e = {} is outside 2..={}", self.e, m + 1));
        }
        if self.f < 1 || self.f > m + 1 {
            out.push(format!("f = {} is outside 1..={}", self.f, m + 1));
        }
        if self.f <= m {
            let ok = self
                .nodes
                .get(&self.f)
                .is_some_and(|node| self.is_leaf(self.f) && !node.hope.is_empty());
            if !ok {
                out.push(format!(
                    "f = {} but there is no leaf with that name and a nonempty hope",
                    self.f
                ));
            }
        }
        out
    }
}

/// One in-flight transformation of a tree.
struct Transform<'a> {
    acceptance: &'a AcceptanceCondition,
    nodes: BTreeMap<u32, CgsNode>,
    next_name: u32,
    /// Names of nodes deleted so far, at their deletion-time value.
    deleted: BTreeSet<u32>,
    /// Names of nodes that completed a verification round on an accepting
    /// hope set.
    resets: BTreeSet<u32>,
}

impl Transform<'_> {
    fn children(&self, v: u32) -> Vec<u32> {
        self.nodes
            .iter()
            .filter(|(_, node)| node.parent == Some(v))
            .map(|(k, _)| *k)
            .collect()
    }

    fn descendants(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = self.children(v);
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children(u));
        }
        out
    }

    fn create_child(&mut self, parent: u32, label: StateSet, hope: StateSet) -> u32 {
        let name = self.next_name;
        self.next_name += 1;
        self.nodes.insert(
            name,
            CgsNode {
                parent: Some(parent),
                label,
                hope,
            },
        );
        name
    }

    fn remove_state_from_subtree(&mut self, v: u32, q: StateId) {
        self.nodes.get_mut(&v).unwrap().label.remove(q);
        for u in self.descendants(v) {
            self.nodes.get_mut(&u).unwrap().label.remove(q);
        }
    }

    fn delete_subtree(&mut self, v: u32) {
        for u in self.descendants(v) {
            self.nodes.remove(&u);
            self.deleted.insert(u);
        }
        self.nodes.remove(&v);
        self.deleted.insert(v);
    }

    fn transform(&mut self, v: u32) {
        let hope_v = self.nodes[&v].hope.clone();
        let mut kids = self.children(v);

        if kids.is_empty() {
            if hope_v.is_empty() {
                return;
            }
            // Extend a live leaf with a child that gives up on the largest
            // hoped-for index.
            let label = self.nodes[&v].label.clone();
            let mut hope = hope_v.clone();
            hope.remove(hope.last().unwrap());
            let child = self.create_child(v, label, hope);
            kids = vec![child];
        }

        // Snapshot: later steps iterate only over these children; children
        // created below are not revisited in this call.
        let annotations: Vec<u32> = kids
            .iter()
            .map(|&c| hope_v.max_difference(&self.nodes[&c].hope).unwrap_or(0))
            .collect();

        for &c in &kids {
            self.transform(c);
        }

        for (&c, &j) in kids.iter().zip(&annotations) {
            let present: Vec<StateId> = self.nodes[&c].label.iter().collect();
            for q in present {
                if j >= 1 && q == j {
                    // The awaited state arrived: the parent registers
                    // progress with a fresh child whose hope drops the next
                    // smaller awaited index (or nothing, completing a round).
                    let mut hope = hope_v.clone();
                    if let Some(next_await) = hope_v.max_below(j) {
                        hope.remove(next_await);
                    }
                    self.create_child(v, StateSet::singleton(q), hope);
                } else if q != j && !self.nodes[&c].hope.contains(q) {
                    // The run left the child's conjectured infinity set.
                    self.remove_state_from_subtree(c, q);
                }
            }
        }

        // A state tracked by several children stays only with the child
        // that made the most progress: least edge annotation, then least
        // name.
        let kids_now = self.children(v);
        let mut owners: BTreeMap<StateId, Vec<(u32, u32)>> = BTreeMap::new();
        for &c in &kids_now {
            let ann = hope_v.max_difference(&self.nodes[&c].hope).unwrap_or(0);
            for q in &self.nodes[&c].label.clone() {
                owners.entry(q).or_default().push((ann, c));
            }
        }
        for (q, mut list) in owners {
            if list.len() < 2 {
                continue;
            }
            list.sort_unstable();
            for &(_, c) in &list[1..] {
                self.remove_state_from_subtree(c, q);
            }
        }

        // Drop descendants that no longer track any run.
        for u in self.descendants(v) {
            if self.nodes.get(&u).is_some_and(|node| node.label.is_empty()) {
                self.delete_subtree(u);
            }
        }

        // All children back to the parent's own hope set: the node's
        // conjecture completed one verification round.
        let kids_final = self.children(v);
        if !kids_final.is_empty()
            && kids_final.iter().all(|&c| self.nodes[&c].hope == hope_v)
        {
            for c in kids_final {
                self.delete_subtree(c);
            }
            if self.acceptance.accepts(&hope_v) {
                self.resets.insert(v);
            }
        }
    }
}

/// Parity index of a state with components `e`, `f` over name bound `m`.
///
/// Index 0 holds states with `f = 1 < e`; odd index `2e - 3` holds states
/// with `f ≥ e`; even index `2f - 2` holds states with `1 < f < e`; the
/// maximal odd index `2m - 1` holds states with `e, f > m`.
pub fn parity_index(e: u32, f: u32, m: u32) -> Result<u32, Error> {
    if e < 2 || e > m + 1 || f < 1 || f > m + 1 {
        return Err(Error::ParityComponents { e, f, m });
    }
    Ok(if e > m && f > m {
        2 * m - 1
    } else if f < e {
        if f == 1 {
            0
        } else {
            2 * f - 2
        }
    } else {
        2 * e - 3
    })
}

/// Exploration limits for the reachable-state construction.
#[derive(Debug, Clone)]
pub struct Limits {
    pub max_states: usize,
    pub max_seconds: Option<f64>,
    /// Check the structural invariants of every discovered tree.
    pub validate_trees: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 100_000,
            max_seconds: None,
            validate_trees: true,
        }
    }
}

/// Counters reported by the explorations, also on early exit.
#[derive(Debug, Clone, Default)]
pub struct ExplorationStats {
    pub states: usize,
    pub transitions: usize,
    pub elapsed: Duration,
}

/// One state of the constructed parity automaton.
#[derive(Debug, Clone)]
pub enum DpwState {
    Tree(CgsTree),
    /// Rejecting sink entered when every tracked run has died.
    Sink,
}

/// An explicit deterministic parity automaton.
#[derive(Debug, Clone)]
pub struct Dpw {
    pub alphabet: Vec<String>,
    pub initial: usize,
    pub states: Vec<DpwState>,
    /// `transitions[s][sym]` is the successor state index; always total.
    pub transitions: Vec<Vec<usize>>,
    /// Parity index per state, within `0..parity_sets`.
    pub priorities: Vec<u32>,
    /// Number of parity sets `2m`.
    pub parity_sets: u32,
    pub stats: ExplorationStats,
}

impl Dpw {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn transition(&self, state: usize, sym: SymbolId) -> usize {
        self.transitions[state][sym]
    }

    /// Re-expresses the automaton as an [`OmegaAutomaton`] with a parity
    /// acceptance sequence of all `parity_sets` sets (empty ones included).
    pub fn to_automaton(&self) -> OmegaAutomaton {
        let mut sets = vec![StateSet::new(); self.parity_sets as usize];
        for (i, &p) in self.priorities.iter().enumerate() {
            sets[p as usize].insert(i as u32 + 1);
        }
        let mut transitions = BTreeMap::new();
        for (s, row) in self.transitions.iter().enumerate() {
            for (sym, &t) in row.iter().enumerate() {
                transitions.insert((s as u32 + 1, sym), StateSet::singleton(t as u32 + 1));
            }
        }
        OmegaAutomaton::new(
            self.states.len() as u32,
            self.alphabet.clone(),
            StateSet::singleton(self.initial as u32 + 1),
            transitions,
            AcceptanceCondition::Parity(sets),
        )
    }
}

/// Builds the deterministic parity automaton for `a`: the reachable closure
/// of the initial tree under the successor transformation, with one parity
/// index per state.
pub fn determinize(a: &OmegaAutomaton, limits: &Limits) -> Result<Dpw, Error> {
    let start = Instant::now();
    let m = name_bound(a.num_states);
    let mut states: Vec<DpwState> = Vec::new();
    let mut priorities: Vec<u32> = Vec::new();
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut index_of: HashMap<String, usize> = HashMap::new();
    let mut sink_index: Option<usize> = None;

    let stats_now = |states: &Vec<DpwState>, transitions: &Vec<Vec<usize>>| ExplorationStats {
        states: states.len(),
        transitions: transitions.iter().map(|row| row.len()).sum(),
        elapsed: start.elapsed(),
    };

    let add_tree = |tree: CgsTree,
                        states: &mut Vec<DpwState>,
                        priorities: &mut Vec<u32>,
                        index_of: &mut HashMap<String, usize>|
     -> Result<usize, Error> {
        let key = tree.canonical_encoding();
        if let Some(&i) = index_of.get(&key) {
            return Ok(i);
        }
        if limits.validate_trees {
            let violations = tree.check_invariants();
            if !violations.is_empty() {
                return Err(Error::TreeInvariant {
                    details: format!("state {key}: {}", violations.join("; ")),
                });
            }
        }
        let index = states.len();
        priorities.push(tree.parity_index()?);
        states.push(DpwState::Tree(tree));
        index_of.insert(key, index);
        Ok(index)
    };

    let initial = add_tree(
        CgsTree::initial(a),
        &mut states,
        &mut priorities,
        &mut index_of,
    )?;
    let mut frontier = std::collections::VecDeque::from([initial]);

    while let Some(s) = frontier.pop_front() {
        if let Some(limit) = limits.max_seconds {
            if start.elapsed().as_secs_f64() > limit {
                return Err(Error::TimeLimit {
                    limit_seconds: limit,
                    stats: stats_now(&states, &transitions),
                });
            }
        }
        let mut row = Vec::with_capacity(a.alphabet.len());
        for sym in 0..a.alphabet.len() {
            // Compute the successor first so the borrow of `states` ends
            // before new states are inserted.
            let successor = match &states[s] {
                DpwState::Sink => None,
                DpwState::Tree(tree) => Some(tree.successor(a, sym)),
            };
            let target = match successor {
                // The sink loops on every symbol.
                None => s,
                Some(Some(next)) => {
                    let before = states.len();
                    let t = add_tree(next, &mut states, &mut priorities, &mut index_of)?;
                    if t == before {
                        frontier.push_back(t);
                    }
                    t
                }
                Some(None) => *sink_index.get_or_insert_with(|| {
                    states.push(DpwState::Sink);
                    priorities.push(2 * m - 1);
                    let idx = states.len() - 1;
                    frontier.push_back(idx);
                    idx
                }),
            };
            row.push(target);
        }
        transitions.push(row);
        if states.len() > limits.max_states {
            return Err(Error::StateLimit {
                limit: limits.max_states,
                stats: stats_now(&states, &transitions),
            });
        }
    }

    let stats = stats_now(&states, &transitions);
    Ok(Dpw {
        alphabet: a.alphabet.clone(),
        initial,
        states,
        transitions,
        priorities,
        parity_sets: 2 * m,
        stats,
    })
}

/// Trees reached on each prefix of `word`, starting with the initial tree;
/// `None` once every run has died.
pub fn trace_word(a: &OmegaAutomaton, word: &[SymbolId]) -> Vec<Option<CgsTree>> {
    let mut out = vec![Some(CgsTree::initial(a))];
    for &sym in word {
        let next = match out.last().unwrap() {
            Some(tree) => tree.successor(a, sym),
            None => None,
        };
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::{accepts_lasso, Lasso};

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

    /// Five-state Muller automaton used throughout: accepts exactly the
    /// words whose run loops in state 1 forever.
    fn reference_muller() -> OmegaAutomaton {
        automaton(
            5,
            &["b", "c"],
            &[1],
            &[
                (1, 0, &[5]),
                (5, 0, &[4]),
                (4, 0, &[1, 5]),
                (1, 1, &[1]),
                (5, 1, &[5]),
            ],
            AcceptanceCondition::Muller(vec![StateSet::from([1])]),
        )
    }

    #[test]
    fn initial_tree_components() {
        let a = reference_muller();
        let t = CgsTree::initial(&a);
        assert_eq!(t.name_bound(), 31);
        assert_eq!((t.e(), t.f()), (32, 32));
        assert_eq!(t.label(1), Some(&StateSet::from([1])));
        assert_eq!(t.hope(1), Some(&StateSet::full(5)));

        let one = automaton(
            1,
            &["a"],
            &[1],
            &[(1, 0, &[1])],
            AcceptanceCondition::Buchi(StateSet::from([1])),
        );
        let t1 = CgsTree::initial(&one);
        assert_eq!(t1.name_bound(), 3);
        assert_eq!((t1.e(), t1.f()), (4, 4));

        let two = automaton(
            2,
            &["a"],
            &[1, 2],
            &[],
            AcceptanceCondition::Buchi(StateSet::from([1])),
        );
        let t2 = CgsTree::initial(&two);
        assert_eq!(t2.name_bound(), 7);
        assert_eq!((t2.e(), t2.f()), (8, 8));
        assert_eq!(t2.label(1), Some(&StateSet::from([1, 2])));
    }

    #[test]
    fn reference_trace_first_step() {
        let a = reference_muller();
        let b = 0;
        let t0 = CgsTree::initial(&a);
        let t1 = t0.successor(&a, b).expect("runs survive");
        assert_eq!(t1.names().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(t1.e(), 2);
        assert_eq!(t1.f(), 32);
        assert_eq!(t1.label(1), Some(&StateSet::from([5])));
        assert_eq!(t1.label(2), Some(&StateSet::from([5])));
        assert_eq!(t1.edge_annotation(2), Some(4));
        assert!(t1.check_invariants().is_empty());
    }

    #[test]
    fn reference_trace_second_step() {
        let a = reference_muller();
        let b = 0;
        let trace = trace_word(&a, &[b, b]);
        let t2 = trace[2].as_ref().unwrap();
        assert_eq!(t2.names().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(t2.label(2), Some(&StateSet::from([4])));
        assert_eq!(t2.edge_annotation(2), Some(3));
        assert_eq!(t2.e(), 2);
        assert_eq!(t2.f(), 32);
    }

    #[test]
    fn reference_trace_third_step_updates_f() {
        let a = reference_muller();
        let b = 0;
        let trace = trace_word(&a, &[b, b, b]);
        let t3 = trace[3].as_ref().unwrap();
        assert_eq!(t3.e(), 6);
        assert_eq!(t3.f(), 5);
        assert_eq!(t3.len(), 6);
        // The nodes hoping for exactly {1} and {5} survive as leaves.
        assert_eq!(t3.hope(5), Some(&StateSet::from([1])));
        assert_eq!(t3.label(5), Some(&StateSet::from([1])));
        assert_eq!(t3.hope(6), Some(&StateSet::from([1, 2, 5])));
        assert_eq!(t3.label(6), Some(&StateSet::from([5])));
        assert!(t3.check_invariants().is_empty());
    }

    #[test]
    fn reference_trace_cycles_at_parity_index_eight() {
        let a = reference_muller();
        let word = [0, 0, 0, 1, 1, 1, 1, 1];
        let trace = trace_word(&a, &word);
        // All states after the stem have parity index 8 = 2·5 − 2.
        for t in trace[4..].iter() {
            let t = t.as_ref().unwrap();
            assert_eq!(t.parity_index().unwrap(), 8, "e={} f={}", t.e(), t.f());
            assert!(t.check_invariants().is_empty());
        }
        // After three loop letters the state repeats forever.
        let t5 = trace[5].as_ref().unwrap();
        let t6 = trace[6].as_ref().unwrap();
        let t7 = trace[7].as_ref().unwrap();
        assert_ne!(t5.canonical_encoding(), t6.canonical_encoding());
        assert_eq!(t6.canonical_encoding(), t7.canonical_encoding());
        // The fixpoint keeps two leaves whose hopes are the two run
        // infinity sets.
        assert_eq!(t6.hope(5), Some(&StateSet::from([1])));
        assert_eq!(t6.hope(8), Some(&StateSet::from([5])));
    }

    #[test]
    fn parity_index_table() {
        assert_eq!(parity_index(2, 32, 31).unwrap(), 1);
        assert_eq!(parity_index(6, 5, 31).unwrap(), 8);
        assert_eq!(parity_index(32, 32, 31).unwrap(), 61);
        assert_eq!(parity_index(2, 1, 31).unwrap(), 0);
        assert_eq!(parity_index(3, 3, 31).unwrap(), 3);
        assert!(parity_index(1, 5, 31).is_err());
        assert!(parity_index(2, 0, 31).is_err());
        assert!(parity_index(33, 5, 31).is_err());
    }

    #[test]
    fn parity_index_is_a_partition() {
        let m = 7;
        for e in 2..=m + 1 {
            for f in 1..=m + 1 {
                let j = parity_index(e, f, m).unwrap();
                assert!(j < 2 * m, "index {j} out of range for e={e} f={f}");
            }
        }
    }

    #[test]
    fn buchi_self_loop_determinizes_to_accepting_cycle() {
        let a = automaton(
            1,
            &["a"],
            &[1],
            &[(1, 0, &[1])],
            AcceptanceCondition::Buchi(StateSet::from([1])),
        );
        let d = determinize(&a, &Limits::default()).unwrap();
        assert!(d.num_states() <= 4);
        // The reached fixpoint has f = 1 (index 0) and recurs.
        let s1 = d.transition(d.initial, 0);
        assert_eq!(d.priorities[s1], 0);
        assert_eq!(d.transition(s1, 0), s1);
        assert!(accepts_lasso(&a, &Lasso::new(vec![], vec![0])).unwrap());
    }

    #[test]
    fn dead_runs_reach_the_sink() {
        let a = automaton(
            2,
            &["a", "b"],
            &[1],
            &[(1, 0, &[2]), (2, 0, &[1])],
            AcceptanceCondition::Buchi(StateSet::from([1])),
        );
        let d = determinize(&a, &Limits::default()).unwrap();
        let sink = d.transition(d.initial, 1);
        assert!(matches!(d.states[sink], DpwState::Sink));
        assert_eq!(d.priorities[sink], 2 * name_bound(2) - 1);
        // The sink loops on every symbol.
        assert_eq!(d.transition(sink, 0), sink);
        assert_eq!(d.transition(sink, 1), sink);
    }

    #[test]
    fn determinize_respects_state_limit() {
        let a = reference_muller();
        let limits = Limits {
            max_states: 2,
            ..Limits::default()
        };
        match determinize(&a, &limits) {
            Err(Error::StateLimit { limit, stats }) => {
                assert_eq!(limit, 2);
                assert!(stats.states >= 2);
            }
            other => panic!("expected state limit, got {other:?}"),
        }
    }

    #[test]
    fn successor_is_deterministic() {
        let a = reference_muller();
        let t = CgsTree::initial(&a);
        let k1 = t.successor(&a, 0).unwrap().canonical_encoding();
        let k2 = t.successor(&a, 0).unwrap().canonical_encoding();
        assert_eq!(k1, k2);
    }

    #[test]
    fn encoding_separates_e_and_f() {
        let a = reference_muller();
        let mut t = CgsTree::initial(&a);
        let base = t.canonical_encoding();
        t.e = 5;
        assert_ne!(t.canonical_encoding(), base);
        t.e = 32;
        t.f = 6;
        assert_ne!(t.canonical_encoding(), base);
    }

    #[test]
    fn encoding_ignores_transient_name_history() {
        // Two different words that produce the same compacted tree must
        // yield the same key even though intermediate fresh names differ.
        let a = automaton(
            2,
            &["a", "b"],
            &[1],
            &[
                (1, 0, &[1]),
                (1, 1, &[1]),
                (2, 0, &[1]),
            ],
            AcceptanceCondition::Buchi(StateSet::from([1])),
        );
        let t_a = trace_word(&a, &[0, 0]);
        let t_b = trace_word(&a, &[1, 0]);
        let key_a = t_a[2].as_ref().unwrap().canonical_encoding();
        let key_b = t_b[2].as_ref().unwrap().canonical_encoding();
        assert_eq!(key_a, key_b);
    }

    #[test]
    fn all_reachable_states_satisfy_invariants() {
        let a = reference_muller();
        let d = determinize(&a, &Limits::default()).unwrap();
        for state in &d.states {
            if let DpwState::Tree(t) = state {
                assert!(t.check_invariants().is_empty());
            }
        }
        assert!(d.priorities.iter().all(|&p| p <= 61));
    }

    #[test]
    fn dpw_reexpression_is_deterministic_and_total() {
        let a = reference_muller();
        let d = determinize(&a, &Limits::default()).unwrap();
        let auto = d.to_automaton();
        assert!(auto.validate().is_empty());
        assert!(auto.is_deterministic());
        for q in auto.states() {
            for sym in 0..auto.alphabet.len() {
                assert_eq!(auto.post(q, sym).len(), 1);
            }
        }
        if let AcceptanceCondition::Parity(sets) = &auto.acceptance {
            assert_eq!(sets.len(), 62);
        } else {
            panic!("expected parity acceptance");
        }
    }
}
