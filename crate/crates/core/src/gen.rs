//! Seeded random graphs and instances.
//!
//! All generators take a `ChaCha8Rng`, so a seed fixes the output on every
//! platform.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::graph::Graph;
use crate::rules::{Instance, Rule};
use crate::set::{Clique, VertexSet};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Chordal graph grown one simplicial vertex at a time.
///
/// Each new vertex `v` picks an earlier vertex `u` and attaches to part of
/// the clique formed by `u` and the vertices `u` was attached to: with
/// probability one half all of it, otherwise a random subset of random
/// size. Either way at most `max_attach` vertices. With probability
/// `p_isolated` it starts a new component instead.
pub fn chordal(n: usize, max_attach: usize, p_isolated: f64, rng: &mut GenRng) -> Graph {
    let mut attached: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut pool = Vec::new();
    for v in 0..n {
        let mut chosen = Vec::new();
        if v > 0 && !rng.gen_bool(p_isolated) {
            let u = rng.gen_range(0..v);
            pool.clear();
            pool.push(u);
            pool.extend_from_slice(&attached[u]);
            let cap = pool.len().min(max_attach.max(1));
            let size = if rng.gen_bool(0.5) { cap } else { rng.gen_range(1..=cap) };
            chosen.extend(pool.choose_multiple(rng, size).copied());
        }
        edges.extend(chosen.iter().map(|&w| (w, v)));
        attached.push(chosen);
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

/// Intersection graph of `n` random closed intervals with integer
/// endpoints in `0..2n` and lengths up to `max_len`.
pub fn interval(n: usize, max_len: usize, rng: &mut GenRng) -> Graph {
    let span = (2 * n).max(1);
    let mut intervals: Vec<(usize, usize, usize)> = (0..n)
        .map(|v| {
            let a = rng.gen_range(0..span);
            (a, a + rng.gen_range(0..=max_len), v)
        })
        .collect();
    intervals.sort_unstable();
    let mut edges = Vec::new();
    let mut open: Vec<(usize, usize)> = Vec::new();
    for &(a, b, v) in &intervals {
        open.retain(|&(end, _)| end >= a);
        edges.extend(open.iter().map(|&(_, w)| (w, v)));
        open.push((b, v));
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

/// Erdős–Rényi graph: each pair is an edge with probability `p`.
pub fn gnp(n: usize, p: f64, rng: &mut GenRng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

/// `rows × cols` grid; vertex `(i, j)` is `i * cols + j`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = i * cols + j;
            if j + 1 < cols {
                edges.push((v, v + 1));
            }
            if i + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::from_edges(rows * cols, edges).expect("generated edges are valid")
}

/// A random clique: a random start vertex grown by random common
/// neighbours, stopping with probability `1 - p_grow` after each addition.
/// Empty for graphs without vertices.
pub fn random_clique(g: &Graph, p_grow: f64, rng: &mut GenRng) -> Clique {
    let n = g.vertex_count();
    if n == 0 {
        return Clique::new();
    }
    let mut c = VertexSet::from([rng.gen_range(0..n)]);
    loop {
        let candidates = g.common_neighbors(&c);
        if candidates.is_empty() || !rng.gen_bool(p_grow) {
            return c;
        }
        c.insert(candidates.as_slice()[rng.gen_range(0..candidates.len())]);
    }
}

/// A maximal clique grown from a random vertex.
pub fn random_maximal_clique(g: &Graph, rng: &mut GenRng) -> Clique {
    random_clique(g, 1.0, rng)
}

/// Two random cliques and a TAR threshold no larger than either.
pub fn random_tar_instance<'g>(g: &'g Graph, rng: &mut GenRng) -> Instance<'g> {
    let s = random_clique(g, 0.6, rng);
    let t = random_clique(g, 0.6, rng);
    let k = rng.gen_range(0..=s.len().min(t.len()));
    Instance::new(g, s, t, Rule::Tar(k)).expect("generated endpoints are cliques")
}

/// Two random cliques of the same size, under `rule` (TJ or TS). `None`
/// when the graph has no two cliques of the sampled size.
pub fn random_equal_size_instance<'g>(g: &'g Graph, rule: Rule, rng: &mut GenRng) -> Option<Instance<'g>> {
    let s = random_clique(g, 0.6, rng);
    for _ in 0..20 {
        let t = random_clique(g, 0.8, rng);
        if t.len() >= s.len() {
            let mut members = t.into_vec();
            members.shuffle(rng);
            members.truncate(s.len());
            let t: Clique = members.into_iter().collect();
            return Some(Instance::new(g, s, t, rule).expect("subsets of cliques are cliques"));
        }
    }
    None
}
