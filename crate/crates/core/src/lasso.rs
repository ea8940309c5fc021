//! Brute-force membership oracle for ultimately periodic words.
//!
//! This module is the ground truth the determinizers are tested against, so
//! it favors the most obviously correct algorithm over a clever one: it
//! enumerates every candidate infinity set and checks realizability on a
//! product of the automaton with the loop positions.

use crate::automaton::OmegaAutomaton;
use crate::error::Error;
use crate::set::{nonempty_subsets, StateId, StateSet, SymbolId};

/// Default state-count bound for the exhaustive oracle, which enumerates
/// all `2^n` subsets.
pub const DEFAULT_ORACLE_BOUND: u32 = 12;

/// An ultimately periodic word `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub stem: Vec<SymbolId>,
    /// The repeated part; always nonempty.
    pub cycle: Vec<SymbolId>,
}

impl Lasso {
    pub fn new(stem: Vec<SymbolId>, cycle: Vec<SymbolId>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        Lasso { stem, cycle }
    }

    /// Resolves symbol names against an automaton's alphabet.
    pub fn from_names(
        a: &OmegaAutomaton,
        stem: &[&str],
        cycle: &[&str],
    ) -> Result<Self, Error> {
        let resolve = |names: &[&str]| -> Result<Vec<SymbolId>, Error> {
            names
                .iter()
                .map(|name| {
                    a.symbol_index(name).ok_or_else(|| Error::UnknownSymbolName {
                        name: (*name).to_string(),
                    })
                })
                .collect()
        };
        let cycle = resolve(cycle)?;
        if cycle.is_empty() {
            return Err(Error::UnknownSymbolName {
                name: "(empty cycle)".to_string(),
            });
        }
        Ok(Lasso::new(resolve(stem)?, cycle))
    }

    /// Symbol read at position `t` of the infinite word.
    pub fn symbol_at(&self, t: usize) -> SymbolId {
        if t < self.stem.len() {
            self.stem[t]
        } else {
            self.cycle[(t - self.stem.len()) % self.cycle.len()]
        }
    }

    /// The same ω-word with the first `k` cycle letters moved into the stem.
    pub fn rotated(&self, k: usize) -> Lasso {
        let k = k % self.cycle.len();
        let mut stem = self.stem.clone();
        stem.extend_from_slice(&self.cycle[..k]);
        let mut cycle = self.cycle[k..].to_vec();
        cycle.extend_from_slice(&self.cycle[..k]);
        Lasso { stem, cycle }
    }

    /// The same ω-word with the cycle repeated `times` times.
    pub fn unrolled(&self, times: usize) -> Lasso {
        assert!(times >= 1);
        let cycle = self.cycle.repeat(times);
        Lasso {
            stem: self.stem.clone(),
            cycle,
        }
    }

    fn check_alphabet(&self, a: &OmegaAutomaton) -> Result<(), Error> {
        for &sym in self.stem.iter().chain(self.cycle.iter()) {
            if sym >= a.alphabet.len() {
                return Err(Error::UnknownSymbol {
                    index: sym,
                    alphabet_len: a.alphabet.len(),
                });
            }
        }
        Ok(())
    }
}

/// Product of automaton states with cycle positions. Vertex `(q, i)` is
/// state `q` about to read `cycle[i]`.
struct LoopProduct {
    cycle_len: usize,
    /// Adjacency over vertex ids `(q - 1) * cycle_len + i`.
    adj: Vec<Vec<usize>>,
}

impl LoopProduct {
    fn build(a: &OmegaAutomaton, cycle: &[SymbolId]) -> Self {
        let n = a.num_states as usize;
        let len = cycle.len();
        let mut adj = vec![Vec::new(); n * len];
        for q in a.states() {
            for (i, &sym) in cycle.iter().enumerate() {
                let v = (q as usize - 1) * len + i;
                for q2 in &a.post(q, sym) {
                    adj[v].push((q2 as usize - 1) * len + (i + 1) % len);
                }
            }
        }
        LoopProduct { cycle_len: len, adj }
    }

    fn vertex(&self, q: StateId, phase: usize) -> usize {
        (q as usize - 1) * self.cycle_len + phase
    }

    fn state_of(&self, v: usize) -> StateId {
        (v / self.cycle_len) as u32 + 1
    }

    fn phase_of(&self, v: usize) -> usize {
        v % self.cycle_len
    }

    /// Vertices reachable from the given starts, with BFS parents.
    fn reachable(&self, starts: &[usize]) -> (Vec<bool>, Vec<Option<usize>>) {
        let mut seen = vec![false; self.adj.len()];
        let mut parent = vec![None; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    queue.push_back(u);
                }
            }
        }
        (seen, parent)
    }

    /// Shortest path between two vertices using only `active` vertices.
    fn path_within(&self, from: usize, to: usize, active: &[bool]) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        if from == to {
            return Some(vec![from]);
        }
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if active[u] && !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    if u == to {
                        let mut path = vec![to];
                        let mut cur = to;
                        while cur != from {
                            cur = parent[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(u);
                }
            }
        }
        None
    }
}

/// Strongly connected components of the subgraph induced by `active`
/// vertices (Kosaraju, iterative).
fn strongly_connected_components(adj: &[Vec<usize>], active: &[bool]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if visited[start] || !active[start] {
            continue;
        }
        visited[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some((v, ci)) = stack.last_mut() {
            if *ci < adj[*v].len() {
                let u = adj[*v][*ci];
                *ci += 1;
                if active[u] && !visited[u] {
                    visited[u] = true;
                    stack.push((u, 0));
                }
            } else {
                order.push(*v);
                stack.pop();
            }
        }
    }
    let mut transpose = vec![Vec::new(); n];
    for v in 0..n {
        if !active[v] {
            continue;
        }
        for &u in &adj[v] {
            if active[u] {
                transpose[u].push(v);
            }
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &start in order.iter().rev() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = Vec::new();
        let mut stack = vec![start];
        component[start] = id;
        while let Some(v) = stack.pop() {
            members.push(v);
            for &u in &transpose[v] {
                if component[u] == usize::MAX {
                    component[u] = id;
                    stack.push(u);
                }
            }
        }
        components.push(members);
    }
    components
}

fn ensure_bound(a: &OmegaAutomaton, bound: u32) -> Result<(), Error> {
    if a.num_states > bound {
        return Err(Error::OracleBound {
            states: a.num_states,
            bound,
        });
    }
    Ok(())
}

/// States reachable from the initial set after reading the stem.
fn states_after_stem(a: &OmegaAutomaton, stem: &[SymbolId]) -> StateSet {
    let mut cur = a.initial.clone();
    for &sym in stem {
        cur = a.post_set(&cur, sym);
    }
    cur
}

fn realizable_with_product(
    a: &OmegaAutomaton,
    l: &Lasso,
) -> (LoopProduct, Vec<bool>, Vec<Option<usize>>, Vec<(StateSet, Vec<usize>)>) {
    let product = LoopProduct::build(a, &l.cycle);
    let starts: Vec<usize> = states_after_stem(a, &l.stem)
        .iter()
        .map(|q| product.vertex(q, 0))
        .collect();
    let (reachable, parents) = product.reachable(&starts);

    let mut found = Vec::new();
    for x in nonempty_subsets(a.num_states) {
        let active: Vec<bool> = (0..product.adj.len())
            .map(|v| x.contains(product.state_of(v)))
            .collect();
        let components = strongly_connected_components(&product.adj, &active);
        let witness = components.into_iter().find(|c| {
            let nontrivial = c.len() > 1 || self_looping(&product.adj, c[0]);
            if !nontrivial || !c.iter().any(|&v| reachable[v]) {
                return false;
            }
            let projection: StateSet = c.iter().map(|&v| product.state_of(v)).collect();
            projection == x
        });
        if let Some(c) = witness {
            found.push((x, c));
        }
    }
    (product, reachable, parents, found)
}

fn self_looping(adj: &[Vec<usize>], v: usize) -> bool {
    adj[v].contains(&v)
}

/// Exactly the infinity sets of runs of `a` on the word `stem · cycle^ω`.
pub fn realizable_infinity_sets(a: &OmegaAutomaton, l: &Lasso) -> Result<Vec<StateSet>, Error> {
    realizable_infinity_sets_bounded(a, l, DEFAULT_ORACLE_BOUND)
}

pub fn realizable_infinity_sets_bounded(
    a: &OmegaAutomaton,
    l: &Lasso,
    bound: u32,
) -> Result<Vec<StateSet>, Error> {
    ensure_bound(a, bound)?;
    l.check_alphabet(a)?;
    let (_, _, _, found) = realizable_with_product(a, l);
    Ok(found.into_iter().map(|(x, _)| x).collect())
}

/// True iff some run of `a` on the word is accepting.
pub fn accepts_lasso(a: &OmegaAutomaton, l: &Lasso) -> Result<bool, Error> {
    accepts_lasso_bounded(a, l, DEFAULT_ORACLE_BOUND)
}

pub fn accepts_lasso_bounded(a: &OmegaAutomaton, l: &Lasso, bound: u32) -> Result<bool, Error> {
    Ok(realizable_infinity_sets_bounded(a, l, bound)?
        .iter()
        .any(|x| a.acceptance.accepts(x)))
}

/// A concrete eventually periodic run backing a realizable infinity set.
///
/// `states[t]` is the state after reading `t` letters of the word, with
/// `states[cycle_start..]` one full period: the last entry equals
/// `states[cycle_start]` and the run repeats that segment forever.
#[derive(Debug, Clone)]
pub struct RunWitness {
    pub states: Vec<StateId>,
    pub cycle_start: usize,
}

impl RunWitness {
    /// Set of states on the repeated segment — the run's infinity set.
    pub fn infinity_set(&self) -> StateSet {
        self.states[self.cycle_start..self.states.len() - 1]
            .iter()
            .copied()
            .collect()
    }

    /// Checks that this is a genuine run of `a` on `l` with the claimed shape.
    pub fn verify(&self, a: &OmegaAutomaton, l: &Lasso) -> Result<(), String> {
        if self.states.is_empty() || !a.initial.contains(self.states[0]) {
            return Err("witness does not start in an initial state".into());
        }
        for t in 0..self.states.len() - 1 {
            let sym = l.symbol_at(t);
            if !a.post(self.states[t], sym).contains(self.states[t + 1]) {
                return Err(format!("step {t} is not a transition"));
            }
        }
        if self.cycle_start < l.stem.len() {
            return Err("cycle starts inside the stem".into());
        }
        let period = self.states.len() - 1 - self.cycle_start;
        if period == 0 || period % l.cycle.len() != 0 {
            return Err("period is not a positive multiple of the cycle length".into());
        }
        if self.states[self.cycle_start] != self.states[self.states.len() - 1] {
            return Err("repeated segment does not close".into());
        }
        Ok(())
    }
}

/// Produces a run witnessing that `x` is the infinity set of some run of
/// `a` on `l`; `None` if `x` is not realizable.
pub fn witness_run(a: &OmegaAutomaton, l: &Lasso, x: &StateSet) -> Result<Option<RunWitness>, Error> {
    ensure_bound(a, DEFAULT_ORACLE_BOUND)?;
    l.check_alphabet(a)?;
    let (product, reachable, parents, found) = realizable_with_product(a, l);
    let Some((_, component)) = found.into_iter().find(|(set, _)| set == x) else {
        return Ok(None);
    };

    // Entry point: a component vertex reachable from the stem frontier.
    let entry = *component
        .iter()
        .find(|&&v| reachable[v])
        .expect("realizable component must be reachable");

    // Walk the BFS parents back to a phase-0 start vertex.
    let mut product_path = vec![entry];
    let mut cur = entry;
    while let Some(p) = parents[cur] {
        product_path.push(p);
        cur = p;
    }
    product_path.reverse();
    let start_state = product.state_of(product_path[0]);

    // Stem portion: pick any run of the stem ending in `start_state` by
    // walking backwards through the stem layers.
    let mut layers: Vec<StateSet> = vec![a.initial.clone()];
    for &sym in &l.stem {
        let next = a.post_set(layers.last().unwrap(), sym);
        layers.push(next);
    }
    let mut stem_states = vec![start_state];
    for t in (0..l.stem.len()).rev() {
        let target = *stem_states.last().unwrap();
        let prev = layers[t]
            .iter()
            .find(|&q| a.post(q, l.stem[t]).contains(target))
            .expect("stem layer must contain a predecessor");
        stem_states.push(prev);
    }
    stem_states.reverse();

    // Closed walk through every component vertex, staying inside it.
    let active: Vec<bool> = (0..product.adj.len())
        .map(|v| component.contains(&v))
        .collect();
    let mut walk = vec![entry];
    let mut pos = entry;
    for &target in component.iter().filter(|&&v| v != entry) {
        let segment = product
            .path_within(pos, target, &active)
            .expect("component is strongly connected");
        walk.extend_from_slice(&segment[1..]);
        pos = target;
    }
    // Close the walk; force at least one step so single-vertex components
    // take their self-loop.
    if pos == entry && walk.len() == 1 {
        walk.push(
            *product.adj[entry]
                .iter()
                .find(|&&u| u == entry)
                .expect("trivial component must have a self-loop"),
        );
    } else if pos != entry {
        let segment = product
            .path_within(pos, entry, &active)
            .expect("component is strongly connected");
        walk.extend_from_slice(&segment[1..]);
    }

    let mut states = stem_states;
    states.extend(product_path[1..].iter().map(|&v| product.state_of(v)));
    let cycle_start = states.len() - 1;
    states.extend(walk[1..].iter().map(|&v| product.state_of(v)));
    debug_assert_eq!(product.phase_of(entry), product.phase_of(*walk.last().unwrap()));

    Ok(Some(RunWitness { states, cycle_start }))
}
