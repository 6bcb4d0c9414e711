//! Exact shortest distances by breadth-first search over the
//! reconfiguration graph, whose nodes are cliques and whose edges are
//! single rule steps.
//!
//! The node set has at most `sum_{i=k..w} C(n, i)` members for a graph with
//! clique number `w`, so this is polynomial only for bounded `w`. A node
//! budget turns runaway inputs into an error. This solver is also the
//! reference oracle for the faster ones.

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Instant;

use thiserror::Error;

use crate::graph::Graph;
use crate::rules::{adjacent_unchecked, Instance, ReconfSequence, Rule};
use crate::set::{Clique, VertexSet};
use crate::solve::{SolveResult, SolverKind, Stats};
use crate::td::{TdError, TreeDecomposition};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExhaustiveError {
    #[error("clique enumeration exceeded the budget of {budget} cliques")]
    BudgetExceeded { budget: usize },
    #[error("invalid tree decomposition: {0}")]
    Decomposition(#[from] TdError),
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    /// Maximum number of cliques visited during enumeration.
    pub budget: usize,
    /// Only cliques up to this size become nodes. `None` means no limit.
    pub max_size: Option<usize>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { budget: DEFAULT_NODE_BUDGET, max_size: None }
    }
}

/// All cliques with at least `min_size` vertices, in canonical order (by
/// size, then lexicographically).
pub fn enumerate_cliques(g: &Graph, min_size: usize, budget: usize) -> Result<Vec<Clique>, ExhaustiveError> {
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let mut enumerator = Enumerator::new(g, min_size, usize::MAX, budget);
    enumerator.run(&all)?;
    Ok(enumerator.finish())
}

pub(crate) fn enumerate_cliques_sized(
    g: &Graph,
    min_size: usize,
    max_size: usize,
    budget: usize,
) -> Result<Vec<Clique>, ExhaustiveError> {
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let mut enumerator = Enumerator::new(g, min_size, max_size, budget);
    enumerator.run(&all)?;
    Ok(enumerator.finish())
}

/// The same clique set as [`enumerate_cliques`], found bag by bag. Every
/// clique lies inside some bag, so the search never leaves one.
pub fn enumerate_cliques_from_td(
    g: &Graph,
    td: &TreeDecomposition,
    min_size: usize,
    budget: usize,
) -> Result<Vec<Clique>, ExhaustiveError> {
    enumerate_cliques_from_td_sized(g, td, min_size, usize::MAX, budget)
}

fn enumerate_cliques_from_td_sized(
    g: &Graph,
    td: &TreeDecomposition,
    min_size: usize,
    max_size: usize,
    budget: usize,
) -> Result<Vec<Clique>, ExhaustiveError> {
    td.validate(g)?;
    let mut enumerator = Enumerator::new(g, min_size, max_size, budget);
    for bag in &td.bags {
        enumerator.run(bag.as_slice())?;
    }
    Ok(enumerator.finish())
}

struct Enumerator<'a> {
    g: &'a Graph,
    min_size: usize,
    max_size: usize,
    budget: usize,
    visited: usize,
    found: HashSet<Clique>,
}

impl<'a> Enumerator<'a> {
    fn new(g: &'a Graph, min_size: usize, max_size: usize, budget: usize) -> Self {
        Enumerator { g, min_size, max_size, budget, visited: 0, found: HashSet::new() }
    }

    fn run(&mut self, candidates: &[usize]) -> Result<(), ExhaustiveError> {
        let mut current = Vec::new();
        self.visit(&current)?;
        self.extend(&mut current, candidates)
    }

    fn visit(&mut self, clique: &[usize]) -> Result<(), ExhaustiveError> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(ExhaustiveError::BudgetExceeded { budget: self.budget });
        }
        if clique.len() >= self.min_size {
            self.found.insert(VertexSet::from_sorted(clique.to_vec()));
        }
        Ok(())
    }

    /// Extends `current` with each candidate in turn; candidates are larger
    /// than every member and adjacent to all of them.
    fn extend(&mut self, current: &mut Vec<usize>, candidates: &[usize]) -> Result<(), ExhaustiveError> {
        if current.len() >= self.max_size {
            return Ok(());
        }
        for (i, &v) in candidates.iter().enumerate() {
            current.push(v);
            self.visit(current)?;
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.g.has_edge(v, w))
                .collect();
            self.extend(current, &next)?;
            current.pop();
        }
        Ok(())
    }

    fn finish(self) -> Vec<Clique> {
        let mut out: Vec<Clique> = self.found.into_iter().collect();
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }
}

/// Cliques as nodes, single rule steps as edges.
#[derive(Clone, Debug)]
pub struct ReconfigurationGraph {
    rule: Rule,
    nodes: Vec<Clique>,
    index: HashMap<Clique, usize>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl ReconfigurationGraph {
    /// Builds the graph over `cliques` (for TAR, those below the threshold
    /// are dropped). TAR edges link each clique to its one-smaller
    /// sub-cliques; TJ/TS edges come from swapping one member for a common
    /// neighbour of the rest.
    pub fn build(g: &Graph, cliques: Vec<Clique>, rule: Rule) -> Self {
        let nodes: Vec<Clique> = match rule {
            Rule::Tar(k) => cliques.into_iter().filter(|c| c.len() >= k).collect(),
            _ => cliques,
        };
        let index: HashMap<Clique, usize> =
            nodes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut edge_count = 0;
        let mut link = |a: usize, b: usize, adjacency: &mut Vec<Vec<usize>>| {
            adjacency[a].push(b);
            adjacency[b].push(a);
            edge_count += 1;
        };
        for (i, c) in nodes.iter().enumerate() {
            match rule {
                Rule::Tar(k) => {
                    if c.len() <= k {
                        continue;
                    }
                    for v in c {
                        if let Some(&j) = index.get(&c.without(v)) {
                            link(i, j, &mut adjacency);
                        }
                    }
                }
                Rule::Tj | Rule::Ts => {
                    for v in c {
                        let rest = c.without(v);
                        for w in g.common_neighbors(&rest).iter() {
                            if w == v || (rule == Rule::Ts && !g.has_edge(v, w)) {
                                continue;
                            }
                            if let Some(&j) = index.get(&rest.with(w)) {
                                if i < j {
                                    link(i, j, &mut adjacency);
                                }
                            }
                        }
                    }
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        debug_assert!(nodes.iter().enumerate().all(|(i, c)| adjacency[i]
            .iter()
            .all(|&j| adjacent_unchecked(g, rule, c, &nodes[j]))));
        ReconfigurationGraph { rule, nodes, index, adjacency, edge_count }
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> &[Clique] {
        &self.nodes
    }

    pub fn id_of(&self, c: &Clique) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    /// BFS distances from `from` to every node; `None` where unreachable.
    pub fn distances_from(&self, from: &Clique) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        if let Some(s) = self.id_of(from) {
            dist[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                let d = dist[a].map(|d| d + 1);
                for &b in &self.adjacency[a] {
                    if dist[b].is_none() {
                        dist[b] = d;
                        queue.push_back(b);
                    }
                }
            }
        }
        dist
    }

    /// One shortest path, reconstructed from BFS parent pointers.
    pub fn shortest_path(&self, from: &Clique, to: &Clique) -> Option<Vec<Clique>> {
        let (s, t) = (self.id_of(from)?, self.id_of(to)?);
        let mut parent = vec![usize::MAX; self.nodes.len()];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            if a == t {
                break;
            }
            for &b in &self.adjacency[a] {
                if parent[b] == usize::MAX {
                    parent[b] = a;
                    queue.push_back(b);
                }
            }
        }
        if parent[t] == usize::MAX {
            return None;
        }
        let mut path = vec![t];
        while *path.last().unwrap() != s {
            path.push(parent[*path.last().unwrap()]);
        }
        Some(path.into_iter().rev().map(|i| self.nodes[i].clone()).collect())
    }
}

/// Exact shortest reconfiguration under the instance's own rule.
pub fn solve_exact(inst: &Instance<'_>, opts: &ExactOptions) -> Result<SolveResult, ExhaustiveError> {
    let started = Instant::now();
    if let Some(decision) = inst.trivial_decision() {
        return Ok(SolveResult::decided(inst, decision, SolverKind::Exact, started));
    }
    let (min, max) = size_bounds(inst, opts);
    let cliques = enumerate_cliques_sized(inst.graph(), min, max, opts.budget)?;
    Ok(search(inst, cliques, started))
}

/// As [`solve_exact`], enumerating cliques bag by bag from a supplied
/// tree decomposition.
pub fn solve_exact_with_td(
    inst: &Instance<'_>,
    td: &TreeDecomposition,
    opts: &ExactOptions,
) -> Result<SolveResult, ExhaustiveError> {
    let started = Instant::now();
    td.validate(inst.graph())?;
    if let Some(decision) = inst.trivial_decision() {
        return Ok(SolveResult::decided(inst, decision, SolverKind::Exact, started));
    }
    let (min, max) = size_bounds(inst, opts);
    let cliques = enumerate_cliques_from_td_sized(inst.graph(), td, min, max, opts.budget)?;
    Ok(search(inst, cliques, started))
}

fn size_bounds(inst: &Instance<'_>, opts: &ExactOptions) -> (usize, usize) {
    match inst.rule() {
        Rule::Tar(k) => (k, opts.max_size.unwrap_or(usize::MAX)),
        Rule::Tj | Rule::Ts => (inst.source().len(), inst.source().len()),
    }
}

fn search(inst: &Instance<'_>, cliques: Vec<Clique>, started: Instant) -> SolveResult {
    let rg = ReconfigurationGraph::build(inst.graph(), cliques, inst.rule());
    let path = rg.shortest_path(inst.source(), inst.target());
    let stats = Stats {
        nodes: rg.node_count(),
        edges: rg.edge_count(),
        elapsed: started.elapsed(),
    };
    SolveResult {
        reachable: path.is_some(),
        distance: path.as_ref().map(|p| p.len() - 1),
        sequence: path.map(|p| ReconfSequence::new(inst.rule(), p)),
        shortest: true,
        solver: SolverKind::Exact,
        decision: None,
        tar_threshold: None,
        stats,
    }
}
