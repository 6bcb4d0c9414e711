//! Reachability through the k-intersection maximal-clique graph.
//!
//! Its nodes are the maximal cliques; two are joined when they share at
//! least `k` vertices. A TAR(k) instance is a YES instance exactly when a
//! maximal clique containing the source and one containing the target lie
//! in the same component.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;
use crate::rules::{maximal_extension_unchecked, Instance, ReconfSequence, Rule};
use crate::set::{Clique, VertexSet};
use crate::solve::{SolveResult, SolverKind, Stats};

pub const DEFAULT_CLIQUE_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McgError {
    #[error(
        "more than {budget} maximal cliques; exact search is unlikely to be feasible either"
    )]
    BudgetExceeded { budget: usize },
    #[error("expected a TAR instance, got {0}")]
    NotTar(Rule),
    #[error("path does not connect the endpoints: {0}")]
    BrokenPath(String),
}

/// All maximal cliques, lexicographically sorted. A graph without vertices
/// has the single maximal clique `{}`.
pub fn enumerate_maximal_cliques(g: &Graph, budget: usize) -> Result<Vec<Clique>, McgError> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(vec![Clique::new()]);
    }
    let order = degeneracy_order(g);
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut out = Vec::new();
    let mut r = Vec::new();
    for &v in &order {
        let (mut p, mut x) = (Vec::new(), Vec::new());
        for &w in g.neighbors(v) {
            if position[w] > position[v] {
                p.push(w);
            } else {
                x.push(w);
            }
        }
        r.push(v);
        expand(g, &mut r, p, x, &mut out, budget)?;
        r.pop();
    }
    out.sort();
    Ok(out.into_iter().map(VertexSet::from_sorted).collect())
}

/// Bron–Kerbosch with Tomita pivoting.
fn expand(
    g: &Graph,
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: usize,
) -> Result<(), McgError> {
    if p.is_empty() {
        if x.is_empty() {
            if out.len() == budget {
                return Err(McgError::BudgetExceeded { budget });
            }
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
        }
        return Ok(());
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&w| g.has_edge(u, w)).count())
        .expect("p is non-empty");
    let branch: Vec<usize> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
    for v in branch {
        let p_next = p.iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        let x_next = x.iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        r.push(v);
        expand(g, r, p_next, x_next, out, budget)?;
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
    Ok(())
}

/// Repeatedly removes a vertex of minimum remaining degree.
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_degree + 1];
    for v in 0..n {
        buckets[degree[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while order.len() < n {
        let Some(v) = buckets[d].pop() else {
            d += 1;
            continue;
        };
        if removed[v] || degree[v] != d {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
                buckets[degree[w]].push(w);
            }
        }
        d = d.saturating_sub(1);
    }
    order
}

/// The k-intersection graph over a list of maximal cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mcg {
    pub k: usize,
    pub cliques: Vec<Clique>,
    pub adjacency: Vec<Vec<usize>>,
}

impl Mcg {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
    }

    /// Shortest node path between two maximal cliques, by index.
    pub fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.cliques.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(a) = queue.pop_front() {
            if a == to {
                break;
            }
            for &b in &self.adjacency[a] {
                if parent[b] == usize::MAX {
                    parent[b] = a;
                    queue.push_back(b);
                }
            }
        }
        if parent[to] == usize::MAX {
            return None;
        }
        let mut path = vec![to];
        while *path.last().unwrap() != from {
            path.push(parent[*path.last().unwrap()]);
        }
        path.reverse();
        Some(path)
    }
}

/// Joins every pair of cliques sharing at least `k` vertices.
pub fn build_mcg(cliques: Vec<Clique>, k: usize) -> Mcg {
    let rows: Vec<Vec<usize>> = (0..cliques.len())
        .into_par_iter()
        .map(|i| {
            (0..cliques.len())
                .filter(|&j| j != i && cliques[i].intersection_len(&cliques[j]) >= k)
                .collect()
        })
        .collect();
    Mcg { k, cliques, adjacency: rows }
}

/// Decides a TAR instance through the maximal-clique graph and returns a
/// valid, not necessarily shortest, witness.
pub fn solve_mcg(inst: &Instance<'_>, budget: usize) -> Result<SolveResult, McgError> {
    let started = Instant::now();
    let Rule::Tar(k) = inst.rule() else {
        return Err(McgError::NotTar(inst.rule()));
    };
    if let Some(decision) = inst.trivial_decision() {
        return Ok(SolveResult::decided(inst, decision, SolverKind::Mcg, started));
    }
    let g = inst.graph();
    let mcg = build_mcg(enumerate_maximal_cliques(g, budget)?, k);
    let index: HashMap<&Clique, usize> = mcg.cliques.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let locate = |c: &Clique| {
        let m = maximal_extension_unchecked(g, c);
        index
            .get(&m)
            .copied()
            .or_else(|| mcg.cliques.iter().position(|m| c.is_subset(m)))
            .expect("every clique lies in an enumerated maximal clique")
    };
    let (from, to) = (locate(inst.source()), locate(inst.target()));
    let stats = Stats {
        nodes: mcg.cliques.len(),
        edges: mcg.edge_count(),
        elapsed: started.elapsed(),
    };
    let Some(path) = mcg.path(from, to) else {
        return Ok(SolveResult {
            reachable: false,
            distance: None,
            sequence: None,
            shortest: false,
            solver: SolverKind::Mcg,
            decision: None,
            tar_threshold: None,
            stats,
        });
    };
    let cliques: Vec<Clique> = path.iter().map(|&i| mcg.cliques[i].clone()).collect();
    let seq = materialize_sequence(&cliques, inst.source(), inst.target(), k)?;
    Ok(SolveResult {
        reachable: true,
        distance: Some(seq.len()),
        sequence: Some(seq),
        shortest: false,
        solver: SolverKind::Mcg,
        decision: None,
        tar_threshold: None,
        stats: Stats { elapsed: started.elapsed(), ..stats },
    })
}

/// Walks a path of maximal cliques: inside each one it moves to the `k`
/// lowest vertices shared with the next, adding the new vertices before
/// removing the old ones.
pub fn materialize_sequence(
    path: &[Clique],
    source: &Clique,
    target: &Clique,
    k: usize,
) -> Result<ReconfSequence, McgError> {
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return Err(McgError::BrokenPath("empty path".into()));
    };
    if !source.is_subset(first) || !target.is_subset(last) {
        return Err(McgError::BrokenPath("endpoints outside the end cliques".into()));
    }
    let mut cliques = vec![source.clone()];
    let mut current = source.clone();
    for (i, m) in path.iter().enumerate() {
        let goal = match path.get(i + 1) {
            Some(next) => {
                let shared = m.intersection(next);
                if shared.len() < k {
                    return Err(McgError::BrokenPath(format!(
                        "cliques {} and {} share fewer than {k} vertices",
                        i,
                        i + 1
                    )));
                }
                shared.prefix(k)
            }
            None => target.clone(),
        };
        walk_within(&mut cliques, &mut current, &goal);
    }
    Ok(ReconfSequence::new(Rule::Tar(k), cliques))
}

/// Within one clique: add `goal ∖ current`, then remove `current ∖ goal`.
pub(crate) fn walk_within(cliques: &mut Vec<Clique>, current: &mut Clique, goal: &Clique) {
    for v in goal.difference(current).iter() {
        current.insert(v);
        cliques.push(current.clone());
    }
    for v in current.difference(goal).iter() {
        current.remove(v);
        cliques.push(current.clone());
    }
}
