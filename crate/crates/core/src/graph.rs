//! Simple undirected graphs and the DIMACS-style edge-list format.
//!
//! Vertices are `0..n`. The file format is 1-based:
//!
//! ```text
//! c optional comments
//! p edge <n> <m>
//! e <u> <v>
//! ```

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::set::VertexSet;

/// Graphs up to this many vertices also keep a dense adjacency matrix.
const DENSE_LIMIT: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
}

/// An immutable simple undirected graph in compressed adjacency form.
///
/// Neighbour lists are sorted. Adjacency tests are O(1) for graphs with at
/// most 2048 vertices and O(log deg) above that.
#[derive(Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    dense: Option<FixedBitSet>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are collapsed; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            pairs.push((u, v));
        }

        // Bucket both orientations by tail, then sort and dedup each row.
        let mut offsets = vec![0; n + 1];
        for &(u, v) in &pairs {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut slots = vec![0; offsets[n]];
        for (u, v) in pairs {
            slots[fill[u]] = v;
            fill[u] += 1;
            slots[fill[v]] = u;
            fill[v] += 1;
        }
        let mut targets = Vec::with_capacity(slots.len());
        let mut compact = vec![0; n + 1];
        for u in 0..n {
            let row = &mut slots[offsets[u]..offsets[u + 1]];
            row.sort_unstable();
            let before = targets.len();
            for &v in row.iter() {
                if targets.len() == before || targets[targets.len() - 1] != v {
                    targets.push(v);
                }
            }
            compact[u + 1] = targets.len();
        }
        Ok(Graph::from_csr(compact, targets))
    }

    /// Wraps sorted, duplicate-free, symmetric neighbour rows.
    fn from_csr(offsets: Vec<usize>, targets: Vec<usize>) -> Self {
        let n = offsets.len() - 1;
        let dense = (n <= DENSE_LIMIT).then(|| {
            let mut bits = FixedBitSet::with_capacity(n * n);
            for u in 0..n {
                for &v in &targets[offsets[u]..offsets[u + 1]] {
                    bits.insert(u * n + v);
                }
            }
            bits
        });

        Graph {
            offsets,
            targets,
            dense,
        }
    }

    /// A graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph::from_edges(n, std::iter::empty()).expect("no edges to reject")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("valid complete graph")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least three vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.dense {
            Some(bits) => bits.contains(u * self.vertex_count() + v),
            None => self.neighbors(u).binary_search(&v).is_ok(),
        }
    }

    /// Each edge once, with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn check_vertices(&self, s: &VertexSet) -> Result<(), GraphError> {
        let n = self.vertex_count();
        match s.max() {
            Some(v) if v >= n => Err(GraphError::OutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }

    /// Whether every two distinct members of `s` are adjacent. The empty set
    /// and singletons are cliques.
    pub fn is_clique(&self, s: &VertexSet) -> Result<bool, GraphError> {
        self.check_vertices(s)?;
        Ok(self.is_clique_unchecked(s.as_slice()))
    }

    pub(crate) fn is_clique_unchecked(&self, members: &[usize]) -> bool {
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Vertices outside `s` adjacent to every member of `s`. For the empty
    /// set this is every vertex.
    pub fn common_neighbors(&self, s: &VertexSet) -> VertexSet {
        let Some(pivot) = s.iter().min_by_key(|&v| self.degree(v)) else {
            return VertexSet::from_sorted((0..self.vertex_count()).collect());
        };
        VertexSet::from_sorted(
            self.neighbors(pivot)
                .iter()
                .copied()
                .filter(|&w| !s.contains(w) && s.iter().all(|u| u == pivot || self.has_edge(u, w)))
                .collect(),
        )
    }

    /// A clique is maximal when no outside vertex is adjacent to all of it.
    pub fn is_maximal_clique(&self, c: &VertexSet) -> Result<bool, GraphError> {
        if !self.is_clique(c)? {
            return Ok(false);
        }
        Ok(self.common_neighbors(c).is_empty())
    }

    /// The graph on the same vertices whose edges are exactly the non-edges
    /// of `self`.
    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        for u in 0..n {
            let nbrs = self.neighbors(u);
            let mut k = 0;
            for v in u + 1..n {
                while k < nbrs.len() && nbrs[k] < v {
                    k += 1;
                }
                if k >= nbrs.len() || nbrs[k] != v {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges).expect("complement of a simple graph is simple")
    }

    /// Subgraph induced by `s`. Vertex `i` of the result is `map[i]` of
    /// `self`; `map` is increasing.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_vertices(s)?;
        let map = s.as_slice().to_vec();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in map.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        let sub = Graph::from_edges(map.len(), edges).expect("induced subgraph is simple");
        Ok((sub, map))
    }

    /// Appends one new vertex per entry of `joined`, adjacent to exactly
    /// that set. New vertex `i` gets index `n + i`.
    pub fn with_new_vertices(&self, joined: &[&VertexSet]) -> Result<Graph, GraphError> {
        let n = self.vertex_count();
        for set in joined {
            self.check_vertices(set)?;
        }
        let total = n + joined.len();
        let mut extra = vec![0usize; n];
        for set in joined {
            for v in *set {
                extra[v] += 1;
            }
        }
        let new_arcs: usize = joined.iter().map(|s| s.len()).sum();
        let mut offsets = Vec::with_capacity(total + 1);
        let mut targets = Vec::with_capacity(self.targets.len() + 2 * new_arcs);
        offsets.push(0);
        for u in 0..n {
            targets.extend_from_slice(self.neighbors(u));
            if extra[u] > 0 {
                targets.extend((0..joined.len()).filter(|&i| joined[i].contains(u)).map(|i| n + i));
            }
            offsets.push(targets.len());
        }
        for set in joined {
            targets.extend(set.iter());
            offsets.push(targets.len());
        }
        Ok(Graph::from_csr(offsets, targets))
    }

    /// Serializes in the 1-based `p edge` format.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets && self.targets == other.targets
    }
}

impl Eq for Graph {}

/// Parses the `p edge` format. Errors carry the 1-based line number.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| GraphError::Parse { line, msg };
        let mut fields = raw.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if n.is_some() {
                    return Err(err("duplicate header".into()));
                }
                let format = fields.next();
                if format != Some("edge") {
                    return Err(err(format!("expected `p edge <n> <m>`, found {raw:?}")));
                }
                let count = parse_field(fields.next(), "vertex count").map_err(err)?;
                parse_field(fields.next(), "edge count").map_err(err)?;
                if fields.next().is_some() {
                    return Err(err("trailing fields in header".into()));
                }
                n = Some(count);
            }
            "e" => {
                let Some(n) = n else {
                    return Err(err("edge line before `p edge` header".into()));
                };
                let u = parse_field(fields.next(), "edge endpoint").map_err(err)?;
                let v = parse_field(fields.next(), "edge endpoint").map_err(err)?;
                if fields.next().is_some() {
                    return Err(err("trailing fields in edge line".into()));
                }
                for w in [u, v] {
                    if w == 0 || w > n {
                        return Err(err(format!("vertex {w} out of range 1..={n}")));
                    }
                }
                if u == v {
                    return Err(err(format!("self-loop on vertex {u}")));
                }
                edges.push((u - 1, v - 1));
            }
            other => return Err(err(format!("unknown line type {other:?}"))),
        }
    }
    let n = n.ok_or(GraphError::Parse {
        line: text.lines().count().max(1),
        msg: "missing `p edge` header".into(),
    })?;
    Graph::from_edges(n, edges)
}

fn parse_field(field: Option<&str>, what: &str) -> Result<usize, String> {
    let field = field.ok_or_else(|| format!("missing {what}"))?;
    field
        .parse()
        .map_err(|_| format!("invalid {what} {field:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        // K4 minus the edge 2-3
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn parses_triangle_and_path() {
        let k3 = parse_graph("p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n").unwrap();
        assert_eq!(k3, Graph::complete(3));
        let p4 = parse_graph("c a path\np edge 4 3\ne 1 2\ne 2 3\ne 3 4\n").unwrap();
        assert_eq!(p4, Graph::path(4));
    }

    #[test]
    fn rejects_self_loop_with_line() {
        let err = parse_graph("p edge 2 1\ne 1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            parse_graph("e 1 2\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("p edge 2 1\ne 1 3\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("p graph 2 1\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(parse_graph("c nothing\n").is_err());
        assert!(parse_graph("p edge x 1\n").is_err());
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse_graph("p edge 2 3\ne 1 2\ne 2 1\ne 1 2\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn clique_predicate() {
        let k3 = Graph::complete(3);
        assert!(k3.is_clique(&VertexSet::from([0, 1, 2])).unwrap());
        let p4 = Graph::path(4);
        assert!(!p4.is_clique(&VertexSet::from([0, 2])).unwrap());
        assert!(p4.is_clique(&VertexSet::new()).unwrap());
        assert!(p4.is_clique(&VertexSet::from([3])).unwrap());
        assert!(p4.is_clique(&VertexSet::from([7])).is_err());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Graph::complete(3).complement(), Graph::empty(3));
        let p4 = Graph::path(4);
        let co: Vec<_> = p4.complement().edges().collect();
        assert_eq!(co, vec![(0, 2), (0, 3), (1, 3)]);
        assert_eq!(p4.complement().complement(), p4);
    }

    #[test]
    fn induced_subgraph_examples() {
        let (k3, map) = Graph::complete(4)
            .induced_subgraph(&VertexSet::from([0, 1, 2]))
            .unwrap();
        assert_eq!(k3, Graph::complete(3));
        assert_eq!(map, vec![0, 1, 2]);

        let (two, _) = Graph::path(4)
            .induced_subgraph(&VertexSet::from([0, 3]))
            .unwrap();
        assert_eq!(two, Graph::empty(2));

        // {1,2,3} of the diamond: 1-2 and 1-3 are edges, 2-3 is not.
        let (p, map) = diamond().induced_subgraph(&VertexSet::from([1, 2, 3])).unwrap();
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn common_neighbors_and_maximality() {
        let g = diamond();
        assert_eq!(
            g.common_neighbors(&VertexSet::from([0, 1])),
            VertexSet::from([2, 3])
        );
        assert!(g.is_maximal_clique(&VertexSet::from([0, 1, 2])).unwrap());
        assert!(!g.is_maximal_clique(&VertexSet::from([0, 1])).unwrap());
        assert_eq!(g.common_neighbors(&VertexSet::new()).len(), 4);
    }

    #[test]
    fn large_graphs_use_sparse_adjacency() {
        let g = Graph::path(DENSE_LIMIT + 10);
        assert!(g.dense.is_none());
        assert!(g.has_edge(DENSE_LIMIT, DENSE_LIMIT + 1));
        assert!(!g.has_edge(0, 2));
    }
}
