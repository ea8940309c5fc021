//! Safra-Schwoon determinization of nondeterministic Streett automata into
//! deterministic Rabin automata, used as the comparison baseline.
//!
//! States of the output are `(Q, H)`-trees: ordered trees whose leaves carry
//! disjoint state labels and whose edges carry Streett pair indices (or 0).
//! Unlike CGS trees, the left-to-right child order is semantic and node
//! names are drawn from a fixed pool and reused after deletion.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::time::Instant;

use crate::automaton::{AcceptanceCondition, AcceptancePair, OmegaAutomaton};
use crate::cgs::{ExplorationStats, Limits};
use crate::error::Error;
use crate::lasso::Lasso;
use crate::parity::run_cycle;
use crate::set::{StateId, StateSet, SymbolId};

/// Size of the name pool for an automaton with `n` states and `h` pairs.
pub fn name_pool_size(n: u32, h: u32) -> u32 {
    2 * n * (h + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct QhNode {
    parent: Option<u32>,
    /// Children in left-to-right order.
    children: Vec<u32>,
    /// Annotation of the edge from the parent; 0 for the root.
    edge: u32,
    /// State label; kept only at leaves, empty at internal nodes.
    label: StateSet,
}

/// A `(Q, H)`-tree: one state of the deterministic Rabin automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QhTree {
    root: u32,
    nodes: BTreeMap<u32, QhNode>,
}

impl QhTree {
    /// The initial tree: a single root named 1 labeled with the initial
    /// states.
    pub fn initial(a: &OmegaAutomaton) -> QhTree {
        let mut nodes = BTreeMap::new();
        nodes.insert(
            1,
            QhNode {
                parent: None,
                children: Vec::new(),
                edge: 0,
                label: a.initial.clone(),
            },
        );
        QhTree { root: 1, nodes }
    }

    pub fn root(&self) -> u32 {
        self.root
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

    pub fn has_node(&self, name: u32) -> bool {
        self.nodes.contains_key(&name)
    }

    pub fn is_leaf(&self, name: u32) -> bool {
        self.nodes
            .get(&name)
            .is_some_and(|node| node.children.is_empty())
    }

    pub fn children(&self, name: u32) -> &[u32] {
        self.nodes
            .get(&name)
            .map(|node| node.children.as_slice())
            .unwrap_or(&[])
    }

    pub fn edge_annotation(&self, name: u32) -> Option<u32> {
        let node = self.nodes.get(&name)?;
        node.parent?;
        Some(node.edge)
    }

    pub fn leaf_label(&self, name: u32) -> Option<&StateSet> {
        self.nodes.get(&name).map(|node| &node.label)
    }

    /// Union of the leaf labels in the subtree rooted at `name`.
    pub fn derived_label(&self, name: u32) -> StateSet {
        let mut out = StateSet::new();
        let mut stack = vec![name];
        while let Some(v) = stack.pop() {
            let node = &self.nodes[&v];
            if node.children.is_empty() {
                out.union_with(&node.label);
            } else {
                stack.extend(node.children.iter().copied());
            }
        }
        out
    }

    /// Deterministic key; child order is part of the state identity.
    pub fn canonical_encoding(&self) -> String {
        fn enc(t: &QhTree, v: u32, out: &mut String) {
            let node = &t.nodes[&v];
            write!(out, "{}e{}", v, node.edge).unwrap();
            if node.children.is_empty() {
                write!(out, "{}", node.label).unwrap();
            } else {
                out.push('[');
                for &c in &node.children {
                    enc(t, c, out);
                }
                out.push(']');
            }
        }
        let mut out = String::new();
        enc(self, self.root, &mut out);
        out
    }

    /// Encoding with node names stripped, for counting tree shapes the way
    /// name-insensitive state bounds do.
    pub fn unnamed_encoding(&self) -> String {
        fn enc(t: &QhTree, v: u32, out: &mut String) {
            let node = &t.nodes[&v];
            write!(out, "e{}", node.edge).unwrap();
            if node.children.is_empty() {
                write!(out, "{}", node.label).unwrap();
            } else {
                out.push('[');
                for &c in &node.children {
                    enc(t, c, out);
                }
                out.push(']');
            }
        }
        let mut out = String::new();
        enc(self, self.root, &mut out);
        out
    }

    /// Checks the structural invariants of a `(Q, H)`-tree over an
    /// automaton with `n` states and `h` pairs.
    pub fn check_invariants(&self, n: u32, h: u32) -> Vec<String> {
        let mut out = Vec::new();
        let cap = name_pool_size(n, h);
        for (&name, node) in &self.nodes {
            if name < 1 || name > cap {
                out.push(format!("name {name} outside the pool 1..={cap}"));
            }
            for &c in &node.children {
                match self.nodes.get(&c) {
                    None => out.push(format!("dangling child {c} of {name}")),
                    Some(child) => {
                        if child.parent != Some(name) {
                            out.push(format!("child {c} does not point back to {name}"));
                        }
                        if child.edge > h {
                            out.push(format!("edge into {c} annotated {} > {h}", child.edge));
                        }
                    }
                }
            }
            if node.children.is_empty() {
                if node.label.is_empty() {
                    out.push(format!("leaf {name} has an empty label"));
                }
            } else {
                if !node.label.is_empty() {
                    out.push(format!("internal node {name} carries a stored label"));
                }
                if !node.children.iter().any(|&c| self.nodes[&c].edge != 0) {
                    out.push(format!("non-leaf {name} has no non-zero annotated child"));
                }
            }
        }
        // Leaf labels pairwise disjoint.
        let leaves: Vec<u32> = self
            .nodes
            .iter()
            .filter(|(_, node)| node.children.is_empty())
            .map(|(k, _)| *k)
            .collect();
        for (i, &a) in leaves.iter().enumerate() {
            for &b in &leaves[i + 1..] {
                if self.nodes[&a].label.intersects(&self.nodes[&b].label) {
                    out.push(format!("leaves {a} and {b} share states"));
                }
            }
        }
        // No non-zero annotation repeats on a root-to-leaf path.
        for &leaf in &leaves {
            let mut seen = BTreeSet::new();
            let mut cur = leaf;
            loop {
                let node = &self.nodes[&cur];
                if node.parent.is_some() && node.edge != 0 && !seen.insert(node.edge) {
                    out.push(format!(
                        "annotation {} repeats on the path to leaf {leaf}",
                        node.edge
                    ));
                }
                match node.parent {
                    Some(p) => cur = p,
                    None => break,
                }
            }
        }
        out
    }

    /// Witness set of a node: all pair indices minus the annotations on its
    /// root path.
    pub fn witness_set(&self, name: u32, h: u32) -> StateSet {
        let mut w = StateSet::full(h);
        let mut cur = name;
        while let Some(p) = self.nodes[&cur].parent {
            let edge = self.nodes[&cur].edge;
            if edge != 0 {
                w.remove(edge);
            }
            cur = p;
        }
        w
    }
}

struct SafraTransform<'a> {
    pairs: &'a [AcceptancePair],
    name_cap: u32,
    tree: QhTree,
}

impl SafraTransform<'_> {
    fn fresh_name(&self) -> Result<u32, Error> {
        (1..=self.name_cap)
            .find(|name| !self.tree.nodes.contains_key(name))
            .ok_or(Error::NamePoolExhausted)
    }

    fn create_rightmost_child(
        &mut self,
        parent: u32,
        label: StateSet,
        edge: u32,
    ) -> Result<u32, Error> {
        let name = self.fresh_name()?;
        self.tree.nodes.insert(
            name,
            QhNode {
                parent: Some(parent),
                children: Vec::new(),
                edge,
                label,
            },
        );
        self.tree
            .nodes
            .get_mut(&parent)
            .unwrap()
            .children
            .push(name);
        Ok(name)
    }

    fn descendants(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = self.tree.nodes[&v].children.clone();
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.tree.nodes[&u].children.iter().copied());
        }
        out
    }

    fn delete_subtree(&mut self, v: u32) {
        for u in self.descendants(v) {
            self.tree.nodes.remove(&u);
        }
        let parent = self.tree.nodes[&v].parent;
        self.tree.nodes.remove(&v);
        if let Some(p) = parent {
            self.tree
                .nodes
                .get_mut(&p)
                .unwrap()
                .children
                .retain(|&c| c != v);
        }
    }

    fn remove_state_from_leaves(&mut self, v: u32, q: StateId) {
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let node = self.tree.nodes.get_mut(&u).unwrap();
            if node.children.is_empty() {
                node.label.remove(q);
            } else {
                stack.extend(node.children.clone());
            }
        }
    }

    fn recurse(&mut self, v: u32, witness: &StateSet) -> Result<(), Error> {
        let is_leaf = self.tree.nodes[&v].children.is_empty();
        if is_leaf {
            if witness.is_empty() {
                return Ok(());
            }
            // The leaf's process starts a sub-process awaiting the largest
            // pair index; the label moves down to it.
            let label = std::mem::take(&mut self.tree.nodes.get_mut(&v).unwrap().label);
            self.create_rightmost_child(v, label, witness.last().unwrap())?;
        }

        // Snapshot; children created below are not revisited in this call.
        let kids: Vec<(u32, u32)> = self.tree.nodes[&v]
            .children
            .iter()
            .map(|&c| (c, self.tree.nodes[&c].edge))
            .collect();

        for &(c, edge) in &kids {
            let mut child_witness = witness.clone();
            child_witness.remove(edge);
            self.recurse(c, &child_witness)?;
        }

        for &(c, edge) in &kids {
            if edge == 0 {
                continue;
            }
            let pair = self.pairs[edge as usize - 1].clone();
            for q in self.tree.derived_label(c).iter().collect::<Vec<_>>() {
                if pair.f.contains(q) {
                    // Progress on the awaited f-set: restart tracking of q
                    // under the same annotation.
                    self.remove_state_from_leaves(c, q);
                    self.create_rightmost_child(v, StateSet::singleton(q), edge)?;
                }
                if pair.e.contains(q) {
                    // The e-set was met: q advances to the next smaller
                    // awaited index (or completes the round with 0).
                    let new_edge = witness.max_below(edge).unwrap_or(0);
                    self.create_rightmost_child(v, StateSet::singleton(q), new_edge)?;
                }
            }
        }

        // A state tracked by several children stays with the child of least
        // annotation; ties go to the leftmost.
        let kids_now = self.tree.nodes[&v].children.clone();
        let mut owners: BTreeMap<StateId, Vec<(u32, usize, u32)>> = BTreeMap::new();
        for (pos, &c) in kids_now.iter().enumerate() {
            let edge = self.tree.nodes[&c].edge;
            for q in &self.tree.derived_label(c) {
                owners.entry(q).or_default().push((edge, pos, c));
            }
        }
        for (q, mut list) in owners {
            if list.len() < 2 {
                continue;
            }
            list.sort_unstable();
            for &(_, _, c) in &list[1..] {
                self.remove_state_from_leaves(c, q);
            }
        }

        for u in self.descendants(v) {
            if self.tree.nodes.contains_key(&u) && self.tree.derived_label(u).is_empty() {
                self.delete_subtree(u);
            }
        }

        // All children on 0-annotated edges: the node's check succeeded;
        // reset it to a leaf carrying the runs it tracks.
        self.reset_if_succeeded(v);
        Ok(())
    }

    fn reset_if_succeeded(&mut self, v: u32) {
        let kids = self.tree.nodes[&v].children.clone();
        if !kids.is_empty() && kids.iter().all(|&c| self.tree.nodes[&c].edge == 0) {
            let label = self.tree.derived_label(v);
            for c in kids {
                self.delete_subtree(c);
            }
            self.tree.nodes.get_mut(&v).unwrap().label = label;
        }
    }

    /// Duplicate elimination at a node can empty the last non-0 child of a
    /// node deeper in the tree, after that node's own reset check already
    /// ran. A final bottom-up sweep applies the pending resets so that no
    /// non-leaf is left with only 0-annotated children.
    fn sweep_resets(&mut self, v: u32) {
        for c in self.tree.nodes[&v].children.clone() {
            self.sweep_resets(c);
        }
        self.reset_if_succeeded(v);
    }
}

/// The successor `(Q, H)`-tree on `sym`; `None` when every run dies.
pub fn safra_next(
    t: &QhTree,
    a: &OmegaAutomaton,
    sym: SymbolId,
) -> Result<Option<QhTree>, Error> {
    let AcceptanceCondition::Streett(pairs) = &a.acceptance else {
        return Err(Error::NotStreett);
    };
    let h = pairs.len() as u32;
    let mut tree = t.clone();
    for node in tree.nodes.values_mut() {
        if node.children.is_empty() {
            node.label = a.post_set(&node.label, sym);
        }
    }
    if tree.derived_label(tree.root).is_empty() {
        return Ok(None);
    }
    let root = tree.root;
    let mut transform = SafraTransform {
        pairs,
        name_cap: name_pool_size(a.num_states, h),
        tree,
    };
    transform.recurse(root, &StateSet::full(h))?;
    transform.sweep_resets(root);
    Ok(Some(transform.tree))
}

/// One Rabin pair over DRW state indices.
#[derive(Debug, Clone)]
pub struct DrwPair {
    pub e: BTreeSet<usize>,
    pub f: BTreeSet<usize>,
}

/// An explicit deterministic Rabin automaton.
#[derive(Debug, Clone)]
pub struct Drw {
    pub alphabet: Vec<String>,
    pub initial: usize,
    /// `transitions[s][sym]`; always total.
    pub transitions: Vec<Vec<usize>>,
    pub pairs: Vec<DrwPair>,
    /// Canonical key per state (tree encoding, or "sink").
    pub state_keys: Vec<String>,
}

impl Drw {
    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn transition(&self, state: usize, sym: SymbolId) -> usize {
        self.transitions[state][sym]
    }

    /// Re-expresses the automaton as an [`OmegaAutomaton`] with Rabin
    /// acceptance over `1..=num_states`.
    pub fn to_automaton(&self) -> OmegaAutomaton {
        let mut transitions = BTreeMap::new();
        for (s, row) in self.transitions.iter().enumerate() {
            for (sym, &t) in row.iter().enumerate() {
                transitions.insert((s as u32 + 1, sym), StateSet::singleton(t as u32 + 1));
            }
        }
        let pairs = self
            .pairs
            .iter()
            .map(|p| AcceptancePair {
                e: p.e.iter().map(|&s| s as u32 + 1).collect(),
                f: p.f.iter().map(|&s| s as u32 + 1).collect(),
            })
            .collect();
        OmegaAutomaton::new(
            self.num_states() as u32,
            self.alphabet.clone(),
            StateSet::singleton(self.initial as u32 + 1),
            transitions,
            AcceptanceCondition::Rabin(pairs),
        )
    }
}

/// Result of the Safra-Schwoon construction: the Rabin automaton plus the
/// tree behind each state (`None` for the rejecting sink).
#[derive(Debug, Clone)]
pub struct SafraDrw {
    pub drw: Drw,
    pub trees: Vec<Option<QhTree>>,
    pub stats: ExplorationStats,
}

/// Reachable closure of the initial `(Q, H)`-tree under [`safra_next`],
/// with the Rabin pair table read off node names: pair `i` asks that some
/// tree with a leaf named `i` recurs while trees lacking node `i`
/// eventually stop occurring.
pub fn determinize_streett_safra(
    a: &OmegaAutomaton,
    limits: &Limits,
) -> Result<SafraDrw, Error> {
    let AcceptanceCondition::Streett(pairs) = &a.acceptance else {
        return Err(Error::NotStreett);
    };
    let h = pairs.len() as u32;
    let name_cap = name_pool_size(a.num_states, h);
    let start = Instant::now();

    let mut trees: Vec<Option<QhTree>> = Vec::new();
    let mut keys: Vec<String> = Vec::new();
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut index_of: HashMap<String, usize> = HashMap::new();
    let mut sink_index: Option<usize> = None;

    let add_tree = |tree: QhTree,
                    trees: &mut Vec<Option<QhTree>>,
                    keys: &mut Vec<String>,
                    index_of: &mut HashMap<String, usize>|
     -> Result<usize, Error> {
        let key = tree.canonical_encoding();
        if let Some(&i) = index_of.get(&key) {
            return Ok(i);
        }
        if limits.validate_trees {
            let violations = tree.check_invariants(a.num_states, h);
            if !violations.is_empty() {
                return Err(Error::TreeInvariant {
                    details: format!("state {key}: {}", violations.join("; ")),
                });
            }
        }
        let index = trees.len();
        trees.push(Some(tree));
        keys.push(key.clone());
        index_of.insert(key, index);
        Ok(index)
    };

    let initial = add_tree(QhTree::initial(a), &mut trees, &mut keys, &mut index_of)?;
    let mut frontier = std::collections::VecDeque::from([initial]);

    while let Some(s) = frontier.pop_front() {
        if let Some(limit) = limits.max_seconds {
            if start.elapsed().as_secs_f64() > limit {
                return Err(Error::TimeLimit {
                    limit_seconds: limit,
                    stats: ExplorationStats {
                        states: trees.len(),
                        transitions: transitions.iter().map(|r| r.len()).sum(),
                        elapsed: start.elapsed(),
                    },
                });
            }
        }
        let mut row = Vec::with_capacity(a.alphabet.len());
        for sym in 0..a.alphabet.len() {
            let successor = match &trees[s] {
                None => None,
                Some(tree) => Some(safra_next(tree, a, sym)?),
            };
            let target = match successor {
                None => s,
                Some(Some(next)) => {
                    let before = trees.len();
                    let t = add_tree(next, &mut trees, &mut keys, &mut index_of)?;
                    if t == before {
                        frontier.push_back(t);
                    }
                    t
                }
                Some(None) => *sink_index.get_or_insert_with(|| {
                    trees.push(None);
                    keys.push("sink".to_string());
                    let idx = trees.len() - 1;
                    frontier.push_back(idx);
                    idx
                }),
            };
            row.push(target);
        }
        debug_assert_eq!(transitions.len(), s);
        transitions.push(row);
        if trees.len() > limits.max_states {
            return Err(Error::StateLimit {
                limit: limits.max_states,
                stats: ExplorationStats {
                    states: trees.len(),
                    transitions: transitions.iter().map(|r| r.len()).sum(),
                    elapsed: start.elapsed(),
                },
            });
        }
    }

    let mut rabin_pairs = Vec::with_capacity(name_cap as usize);
    for name in 1..=name_cap {
        let mut e = BTreeSet::new();
        let mut f = BTreeSet::new();
        for (idx, tree) in trees.iter().enumerate() {
            match tree {
                None => {
                    e.insert(idx);
                }
                Some(t) => {
                    if !t.has_node(name) {
                        e.insert(idx);
                    }
                    if t.is_leaf(name) {
                        f.insert(idx);
                    }
                }
            }
        }
        rabin_pairs.push(DrwPair { e, f });
    }

    let stats = ExplorationStats {
        states: trees.len(),
        transitions: transitions.iter().map(|r| r.len()).sum(),
        elapsed: start.elapsed(),
    };
    Ok(SafraDrw {
        drw: Drw {
            alphabet: a.alphabet.clone(),
            initial,
            transitions,
            pairs: rabin_pairs,
            state_keys: keys,
        },
        trees,
        stats,
    })
}

/// Runs the deterministic Rabin automaton on the lasso and evaluates the
/// pair table on the cycle's states.
pub fn drw_accepts_lasso(d: &Drw, l: &Lasso) -> Result<bool, Error> {
    for &sym in l.stem.iter().chain(l.cycle.iter()) {
        if sym >= d.alphabet.len() {
            return Err(Error::UnknownSymbol {
                index: sym,
                alphabet_len: d.alphabet.len(),
            });
        }
    }
    let inf = run_cycle(|s, sym| Some(d.transition(s, sym)), d.initial, l)
        .expect("transition table is total");
    Ok(d.pairs
        .iter()
        .any(|p| inf.is_disjoint(&p.e) && !inf.is_disjoint(&p.f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgs;
    use crate::lasso::accepts_lasso;
    use crate::parity::{dpw_accepts_lasso, enumerate_lassos};

    fn streett_automaton(
        n: u32,
        alphabet: &[&str],
        initial: &[StateId],
        trans: &[(StateId, usize, &[StateId])],
        pairs: &[(&[StateId], &[StateId])],
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
            AcceptanceCondition::Streett(
                pairs
                    .iter()
                    .map(|(e, f)| AcceptancePair {
                        e: e.iter().copied().collect(),
                        f: f.iter().copied().collect(),
                    })
                    .collect(),
            ),
        )
    }

    #[test]
    fn first_step_extends_the_root() {
        // One pair, so the initial witness set is {1}.
        let a = streett_automaton(
            2,
            &["a"],
            &[1],
            &[(1, 0, &[1, 2]), (2, 0, &[2])],
            &[(&[2], &[1])],
        );
        let t = QhTree::initial(&a);
        let next = safra_next(&t, &a, 0).unwrap().unwrap();
        // Root was extended with one child annotated max(H) = 1 holding the
        // advanced label.
        assert_eq!(next.derived_label(next.root()), StateSet::from([1, 2]));
        let kids = next.children(next.root());
        assert!(!kids.is_empty());
        assert!(kids
            .iter()
            .any(|&c| next.edge_annotation(c) == Some(1)));
        assert!(next.check_invariants(2, 1).is_empty());
    }

    #[test]
    fn non_streett_input_is_rejected() {
        let mut a = streett_automaton(1, &["a"], &[1], &[(1, 0, &[1])], &[(&[], &[1])]);
        a.acceptance = AcceptanceCondition::Buchi(StateSet::from([1]));
        assert!(matches!(
            safra_next(&QhTree::initial(&a), &a, 0),
            Err(Error::NotStreett)
        ));
        assert!(matches!(
            determinize_streett_safra(&a, &Limits::default()),
            Err(Error::NotStreett)
        ));
    }

    #[test]
    fn reachable_trees_satisfy_invariants() {
        let a = streett_automaton(
            3,
            &["a", "b"],
            &[1],
            &[
                (1, 0, &[1, 2]),
                (2, 0, &[3]),
                (3, 0, &[1]),
                (1, 1, &[2]),
                (2, 1, &[2]),
                (3, 1, &[2, 3]),
            ],
            &[(&[1], &[3]), (&[2], &[1])],
        );
        let out = determinize_streett_safra(&a, &Limits::default()).unwrap();
        assert_eq!(out.drw.pairs.len() as u32, name_pool_size(3, 2));
        for tree in out.trees.iter().flatten() {
            assert!(tree.check_invariants(3, 2).is_empty());
        }
    }

    #[test]
    fn empty_pair_table_behavior_on_lassos() {
        // A DRW with no satisfiable pair rejects everything.
        let d = Drw {
            alphabet: vec!["a".into()],
            initial: 0,
            transitions: vec![vec![0]],
            pairs: Vec::new(),
            state_keys: vec!["only".into()],
        };
        assert!(!drw_accepts_lasso(&d, &Lasso::new(vec![], vec![0])).unwrap());
        // One pair with empty e and full f accepts every lasso.
        let d2 = Drw {
            pairs: vec![DrwPair {
                e: BTreeSet::new(),
                f: BTreeSet::from([0]),
            }],
            ..d
        };
        assert!(drw_accepts_lasso(&d2, &Lasso::new(vec![], vec![0])).unwrap());
    }

    #[test]
    fn safra_agrees_with_oracle_and_cgs() {
        let a = streett_automaton(
            2,
            &["a", "b"],
            &[1],
            &[
                (1, 0, &[1, 2]),
                (2, 0, &[1]),
                (1, 1, &[2]),
            ],
            &[(&[2], &[1]), (&[1], &[2])],
        );
        let safra = determinize_streett_safra(&a, &Limits::default()).unwrap();
        let dpw = cgs::determinize(&a, &Limits::default()).unwrap();
        for l in enumerate_lassos(2, 3, 3).unwrap() {
            let oracle = accepts_lasso(&a, &l).unwrap();
            assert_eq!(
                drw_accepts_lasso(&safra.drw, &l).unwrap(),
                oracle,
                "safra disagrees on {l:?}"
            );
            assert_eq!(
                dpw_accepts_lasso(&dpw, &l).unwrap(),
                oracle,
                "cgs disagrees on {l:?}"
            );
        }
    }

    #[test]
    fn unnamed_encoding_ignores_names_but_keeps_shape() {
        let a = streett_automaton(
            2,
            &["a"],
            &[1],
            &[(1, 0, &[1, 2]), (2, 0, &[2])],
            &[(&[2], &[1])],
        );
        let t1 = safra_next(&QhTree::initial(&a), &a, 0).unwrap().unwrap();
        let t2 = safra_next(&t1, &a, 0).unwrap().unwrap();
        // Same shape under different names collapses; different shapes do
        // not.
        assert_eq!(t1.unnamed_encoding(), t1.unnamed_encoding());
        if t1.canonical_encoding() != t2.canonical_encoding() {
            // The named encodings may differ while shapes coincide; the
            // reverse must never happen.
            if t1.unnamed_encoding() == t2.unnamed_encoding() {
                assert_ne!(t1.canonical_encoding(), t2.canonical_encoding());
            }
        }
    }
}
