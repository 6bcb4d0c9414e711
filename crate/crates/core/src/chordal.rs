//! Shortest TAR sequences on chordal graphs in linear time.
//!
//! The pipeline: maximum cardinality search gives a perfect elimination
//! ordering, the ordering gives a clique tree, two dummy vertices pin the
//! endpoints to tree nodes, and the tree path between those nodes is the
//! clique path of an interval subgraph `H` with the same distance. On `H` a
//! greedy walk is optimal: drop the outgoing vertex that leaves the path
//! first, or add the incoming vertex that stays longest.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use thiserror::Error;

use crate::graph::Graph;
use crate::rules::{tj_to_tar, ts_to_tar, Instance, Reduction, ReconfSequence, Rule};
use crate::set::{Clique, VertexSet};
use crate::solve::{SolveResult, SolverKind, Stats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChordalError {
    #[error(
        "graph is not chordal: vertex {} is adjacent to {} and {}, which are not adjacent; use the mcg or exact solver",
        .v + 1, .p + 1, .w + 1
    )]
    NotChordal { v: usize, p: usize, w: usize },
    #[error("vertex {} occupies non-consecutive bags of the clique path", .0 + 1)]
    NotConsecutive(usize),
    #[error("invalid elimination ordering: {0}")]
    InvalidOrdering(String),
}

/// A perfect elimination ordering: each vertex's later neighbours form a
/// clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peo {
    pub order: Vec<usize>,
    pub position: Vec<usize>,
}

impl Peo {
    fn from_order(order: Vec<usize>) -> Self {
        let mut position = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        Peo { order, position }
    }
}

/// Runs maximum cardinality search and verifies the reversed visit order
/// as a perfect elimination ordering.
pub fn check_chordal(g: &Graph) -> Result<Peo, ChordalError> {
    chordal_elimination(g).map(|(peo, _)| peo)
}

fn chordal_elimination(g: &Graph) -> Result<(Peo, Elimination), ChordalError> {
    let (peo, elim) = maximum_cardinality_search(g);
    verify_peo(g, &elim)?;
    Ok((peo, elim))
}

/// Maximum cardinality search. The neighbours of `v` already visited when
/// `v` is visited are its later neighbours in the reversed order, so the
/// elimination data comes out of the same pass.
fn maximum_cardinality_search(g: &Graph) -> (Peo, Elimination) {
    let n = g.vertex_count();
    let max_degree = (0..n).map(|v| g.degree(v)).max().unwrap_or(0);
    let mut weight = vec![0u32; n];
    // Visit index, `UNSEEN` until visited.
    let mut seen = vec![UNSEEN; n];
    let mut parent = vec![NO_PARENT; n];
    let mut later = vec![0u32; n];
    // Lazy buckets: a vertex is pushed again on every weight increase. Every
    // bucket above `top` is empty, so an entry popped from `top` is stale
    // exactly when its vertex was already visited.
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); max_degree + 1];
    buckets[0] = (0..n as u32).rev().collect();
    let mut top = 0;
    let mut visit = Vec::with_capacity(n);
    while visit.len() < n {
        let v = loop {
            match buckets[top].pop() {
                Some(v) if seen[v as usize] == UNSEEN => break v as usize,
                Some(_) => {}
                None => top -= 1,
            }
        };
        let index = visit.len() as u32;
        seen[v] = index;
        visit.push(v);
        let mut latest = UNSEEN;
        for &w in g.neighbors(v) {
            let sw = seen[w];
            if sw == UNSEEN {
                weight[w] += 1;
                buckets[weight[w] as usize].push(w as u32);
                top = top.max(weight[w] as usize);
            } else {
                later[v] += 1;
                if latest == UNSEEN || sw > latest {
                    latest = sw;
                    parent[v] = w as u32;
                }
            }
        }
    }
    // Position in the ordering is the reversed visit index.
    let last = n.saturating_sub(1) as u32;
    let pos: Vec<u32> = seen.iter().map(|&i| last - i).collect();
    visit.reverse();
    (Peo::from_order(visit), Elimination { pos, parent, later })
}

const UNSEEN: u32 = u32::MAX;
const NONE: usize = usize::MAX;
const NO_PARENT: u32 = u32::MAX;

/// Per vertex: the position in the ordering, the earliest later neighbour
/// (`NO_PARENT` if there is none) and the number of later neighbours.
struct Elimination {
    pos: Vec<u32>,
    parent: Vec<u32>,
    later: Vec<u32>,
}

impl Elimination {
    fn new(g: &Graph, peo: &Peo) -> Self {
        let n = g.vertex_count();
        let pos: Vec<u32> = peo.position.iter().map(|&p| p as u32).collect();
        let mut parent = vec![NO_PARENT; n];
        let mut later = vec![0; n];
        for v in 0..n {
            let pv = pos[v];
            let mut best = u32::MAX;
            for &w in g.neighbors(v) {
                let pw = pos[w];
                if pw > pv {
                    later[v] += 1;
                    if pw < best {
                        best = pw;
                        parent[v] = w as u32;
                    }
                }
            }
        }
        Elimination { pos, parent, later }
    }

    fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NO_PARENT).then_some(p as usize)
    }

    fn is_later(&self, w: usize, v: usize) -> bool {
        self.pos[w] > self.pos[v]
    }
}

/// Each vertex's earliest later neighbour must be adjacent to all its other
/// later neighbours. Checked in one pass by grouping the requirements by
/// that neighbour.
fn verify_peo(g: &Graph, elim: &Elimination) -> Result<(), ChordalError> {
    let n = g.vertex_count();
    // Required neighbours of each parent p in one flat array: after filling,
    // p's block is `end[p + 1]..end[p + 2]`.
    let mut end = vec![0u32; n + 2];
    for v in 0..n {
        if let Some(p) = elim.parent(v) {
            end[p + 1] += elim.later[v] - 1;
        }
    }
    for p in 0..n {
        end[p + 1] += end[p];
    }
    end[n + 1] = end[n];
    let mut required = vec![0u32; end[n] as usize];
    for v in 0..n {
        if let Some(p) = elim.parent(v) {
            for &w in g.neighbors(v) {
                if w != p && elim.is_later(w, v) {
                    end[p + 1] -= 1;
                    required[end[p + 1] as usize] = w as u32;
                }
            }
        }
    }
    let mut mark = vec![NO_PARENT; n];
    for p in 0..n {
        let needs = &required[end[p + 1] as usize..end[p + 2] as usize];
        if needs.is_empty() {
            continue;
        }
        for &w in g.neighbors(p) {
            mark[w] = p as u32;
        }
        if let Some(&w) = needs.iter().find(|&&w| mark[w as usize] != p as u32) {
            let w = w as usize;
            let v = (0..n)
                .find(|&v| elim.parent(v) == Some(p) && g.has_edge(v, w) && elim.is_later(w, v))
                .expect("a requirement comes from a child of p");
            return Err(ChordalError::NotChordal { v, p, w });
        }
    }
    Ok(())
}

/// Maximal cliques joined into a tree in which the cliques containing any
/// one vertex form a subtree. Disconnected graphs get their component trees
/// chained together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueTree {
    pub cliques: Vec<Clique>,
    pub edges: Vec<(usize, usize)>,
    /// For each vertex, the index of one clique containing it.
    pub home: Vec<usize>,
}

impl CliqueTree {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.cliques.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Nodes on the unique tree path from `from` to `to`.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        tree_path(self.cliques.len(), &self.edges, from, to)
    }
}

/// Builds a clique tree from a perfect elimination ordering.
///
/// `K(v)` is `v` with its later neighbours. It is a maximal clique unless a
/// vertex whose earliest later neighbour is `v` has exactly one more later
/// neighbour than `v`, in which case that vertex's clique absorbs it.
pub fn build_clique_tree(g: &Graph, peo: &Peo) -> Result<CliqueTree, ChordalError> {
    let n = g.vertex_count();
    if peo.order.len() != n || peo.position.len() != n {
        return Err(ChordalError::InvalidOrdering(format!("{} vertices ordered, graph has {n}", peo.order.len())));
    }
    if peo.order.iter().enumerate().any(|(i, &v)| v >= n || peo.position[v] != i) {
        return Err(ChordalError::InvalidOrdering("order and position disagree".into()));
    }
    let elim = Elimination::new(g, peo);
    verify_peo(g, &elim)?;
    let skeleton = Skeleton::new(peo, &elim);
    let cliques = skeleton.owner.iter().map(|&v| skeleton.members(g, &elim, v)).collect();
    Ok(CliqueTree { cliques, edges: skeleton.edges(), home: skeleton.home })
}

/// A clique tree whose node `i` is `K(owner[i])`, not yet materialized.
struct Skeleton {
    owner: Vec<usize>,
    /// Parent node, `NONE` at the root.
    up: Vec<usize>,
    home: Vec<usize>,
}

impl Skeleton {
    fn new(peo: &Peo, elim: &Elimination) -> Self {
        let n = peo.order.len();
        let later = &elim.later;
        let mut absorbed_by = vec![NONE; n];
        for v in 0..n {
            if let Some(p) = elim.parent(v) {
                if later[v] == later[p] + 1 && absorbed_by[p] == NONE {
                    absorbed_by[p] = v;
                }
            }
        }

        // An absorbing vertex comes earlier in the ordering than the one it
        // absorbs.
        let mut owner = Vec::new();
        let mut rep = vec![NONE; n];
        for &v in &peo.order {
            rep[v] = if absorbed_by[v] == NONE {
                owner.push(v);
                owner.len() - 1
            } else {
                rep[absorbed_by[v]]
            };
        }

        let mut up = vec![NONE; owner.len()];
        let mut previous_root = NONE;
        for v in 0..n {
            match elim.parent(v) {
                Some(p) if rep[v] != rep[p] => up[rep[v]] = rep[p],
                Some(_) => {}
                None => {
                    // Component roots are chained.
                    if previous_root != NONE {
                        up[previous_root] = rep[v];
                    }
                    previous_root = rep[v];
                }
            }
        }
        Skeleton { owner, up, home: rep }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.up.len()).filter(|&i| self.up[i] != NONE).map(|i| (i, self.up[i])).collect()
    }

    /// Climbs from both ends to the lowest common ancestor.
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut left = vec![from];
        while let Some(&top) = left.last().filter(|&&t| self.up[t] != NONE) {
            left.push(self.up[top]);
        }
        let index: HashMap<usize, usize> = left.iter().enumerate().map(|(i, &node)| (node, i)).collect();
        let mut right = vec![to];
        let meet = loop {
            let node = *right.last().expect("non-empty");
            if let Some(&i) = index.get(&node) {
                break i;
            }
            right.push(self.up[node]);
        };
        right.pop();
        left.truncate(meet + 1);
        left.extend(right.into_iter().rev());
        left
    }

    fn members(&self, g: &Graph, elim: &Elimination, v: usize) -> VertexSet {
        g.neighbors(v).iter().copied().filter(|&w| elim.is_later(w, v)).chain(std::iter::once(v)).collect()
    }
}

fn tree_path(nodes: usize, edges: &[(usize, usize)], from: usize, to: usize) -> Vec<usize> {
    let mut start = vec![0usize; nodes + 1];
    for &(a, b) in edges {
        start[a + 1] += 1;
        start[b + 1] += 1;
    }
    for i in 0..nodes {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut adj = vec![0usize; start[nodes]];
    for &(a, b) in edges {
        adj[fill[a]] = b;
        fill[a] += 1;
        adj[fill[b]] = a;
        fill[b] += 1;
    }
    let mut parent = vec![NONE; nodes];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(a) = queue.pop_front() {
        if a == to {
            break;
        }
        for &b in &adj[start[a]..start[a + 1]] {
            if parent[b] == NONE {
                parent[b] = a;
                queue.push_back(b);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// Bags `M_0..M_t` of an interval graph in path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliquePath {
    pub vertex_count: usize,
    pub bags: Vec<VertexSet>,
}

/// First and last bag index containing a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub l: usize,
    pub r: usize,
}

/// `l_v` and `r_v` for every vertex; fails unless each vertex's bags are
/// consecutive. Vertices in no bag get `None`.
pub fn compute_lr(path: &CliquePath) -> Result<Vec<Option<Span>>, ChordalError> {
    let mut spans: Vec<Option<Span>> = vec![None; path.vertex_count];
    for (i, bag) in path.bags.iter().enumerate() {
        for v in bag {
            match &mut spans[v] {
                None => spans[v] = Some(Span { l: i, r: i }),
                Some(span) if span.r + 1 == i => span.r = i,
                Some(_) => return Err(ChordalError::NotConsecutive(v)),
            }
        }
    }
    Ok(spans)
}

/// The interval subgraph `H` with its clique path, and the endpoints in
/// `H`'s numbering. Vertex `i` of `H` is `map[i]` of the original graph.
#[derive(Clone, Debug)]
pub struct IntervalReduction {
    pub h: Graph,
    pub map: Vec<usize>,
    pub path: CliquePath,
    pub source: Clique,
    pub target: Clique,
    pub tree_nodes: usize,
}

/// Attaches a dummy vertex to each endpoint, builds a clique tree of the
/// augmented graph and keeps the tree path between the two dummy cliques.
pub fn reduce_to_interval(inst: &Instance<'_>) -> Result<IntervalReduction, ChordalError> {
    let g = inst.graph();
    let n = g.vertex_count();
    let (d1, d2) = (n, n + 1);
    let augmented = g.with_new_vertices(&[inst.source(), inst.target()]).expect("endpoints are in range");
    // The dummies are simplicial, so the augmented graph is chordal iff `g` is.
    let (peo, elim) = match chordal_elimination(&augmented) {
        Ok(found) => found,
        Err(_) => return Err(check_chordal(g).expect_err("a chordal graph stays chordal with simplicial vertices")),
    };
    let tree = Skeleton::new(&peo, &elim);
    let nodes = tree.path(tree.home[d1], tree.home[d2]);
    let path_bags: Vec<VertexSet> = nodes.iter().map(|&i| tree.members(&augmented, &elim, tree.owner[i])).collect();

    let kept: VertexSet = path_bags.iter().flat_map(|b| b.iter()).filter(|&v| v < n).collect();
    let (h, map) = g.induced_subgraph(&kept).expect("kept vertices are in range");
    let relabel = |set: &VertexSet| -> VertexSet {
        set.iter().filter(|&v| v < n).map(|v| map.binary_search(&v).expect("kept vertex")).collect()
    };
    let bags: Vec<VertexSet> = path_bags.iter().map(relabel).collect();
    Ok(IntervalReduction {
        path: CliquePath { vertex_count: h.vertex_count(), bags },
        source: relabel(inst.source()),
        target: relabel(inst.target()),
        h,
        map,
        tree_nodes: tree.owner.len(),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Among equally good vertices pick the lowest index.
    #[default]
    Lowest,
    Highest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Add(usize),
    Remove(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChordalOptions {
    pub with_sequence: bool,
    pub tie_break: TieBreak,
}

impl Default for ChordalOptions {
    fn default() -> Self {
        ChordalOptions { with_sequence: true, tie_break: TieBreak::Lowest }
    }
}

/// Steps of a shortest TAR(k) sequence on the interval graph described by
/// `path`, or `None` when the target is unreachable.
pub fn greedy_steps(
    path: &CliquePath,
    source: &Clique,
    target: &Clique,
    k: usize,
    tie: TieBreak,
) -> Result<Option<Vec<Step>>, ChordalError> {
    if source == target {
        return Ok(Some(Vec::new()));
    }
    if k <= source.intersection_len(target) {
        return Ok(Some(through_intersection_steps(source, target)));
    }
    let spans = compute_lr(path)?;
    let span = |v: usize| spans[v].expect("endpoint vertices lie in the path");
    // Bags before the last bag containing all of the source, and after the
    // first containing all of the target, are never needed.
    let first = source.iter().map(|v| span(v).r).min().expect("source is non-empty here");
    let last = target.iter().map(|v| span(v).l).max().expect("target is non-empty here");
    if first >= last {
        // Some bag holds both endpoints.
        return Ok(Some(within_clique_steps(source, target)));
    }
    let r = |v: usize| span(v).r.min(last);
    let better = |a: usize, b: usize| match tie {
        TieBreak::Lowest => a < b,
        TieBreak::Highest => a > b,
    };

    let nv = path.vertex_count;
    let mut in_c = vec![false; nv];
    let mut in_t = vec![false; nv];
    let mut removed = vec![false; nv];
    let mut current: Vec<usize> = source.iter().collect();
    for v in source {
        in_c[v] = true;
    }
    for v in target {
        in_t[v] = true;
    }
    let mut shared = source.intersection_len(target);
    let mut anchor = first;
    let mut steps = Vec::new();

    while !(current.len() == target.len() && shared == target.len()) {
        if steps.len() > 2 * nv {
            return Ok(None);
        }
        if shared < current.len() && current.len() > k {
            let mut pick: Option<usize> = None;
            for &v in current.iter().filter(|&&v| !in_t[v]) {
                pick = match pick {
                    Some(u) if r(u) < r(v) || (r(u) == r(v) && !better(v, u)) => Some(u),
                    _ => Some(v),
                };
            }
            let u = pick.expect("current is not inside the target");
            removed[u] = true;
            in_c[u] = false;
            current.retain(|&v| v != u);
            steps.push(Step::Remove(u));
            anchor = current.iter().map(|&v| r(v)).min().expect("at least k >= 1 vertices remain");
        } else {
            let bag = &path.bags[anchor];
            let mut wanted: Option<usize> = None;
            let mut longest: Option<usize> = None;
            for v in bag.iter().filter(|&v| !in_c[v]) {
                if in_t[v] && wanted.map_or(true, |u| better(v, u)) {
                    wanted = Some(v);
                }
                longest = match longest {
                    Some(u) if r(u) > r(v) || (r(u) == r(v) && !better(v, u)) => Some(u),
                    _ => Some(v),
                };
            }
            let Some(u) = wanted.or(longest) else {
                return Ok(None);
            };
            // A shortest sequence never brings a vertex back.
            if removed[u] {
                return Ok(None);
            }
            in_c[u] = true;
            if in_t[u] {
                shared += 1;
            }
            current.push(u);
            steps.push(Step::Add(u));
        }
    }
    Ok(Some(steps))
}

/// Within a common clique: add the target's vertices, then remove the
/// source's.
fn within_clique_steps(source: &Clique, target: &Clique) -> Vec<Step> {
    let adds = target.difference(source).into_vec().into_iter().map(Step::Add);
    let removes = source.difference(target).into_vec().into_iter().map(Step::Remove);
    adds.chain(removes).collect()
}

/// Down to the common part, then up to the target.
fn through_intersection_steps(source: &Clique, target: &Clique) -> Vec<Step> {
    let removes = source.difference(target).into_vec().into_iter().map(Step::Remove);
    let adds = target.difference(source).into_vec().into_iter().map(Step::Add);
    removes.chain(adds).collect()
}

/// Applies steps to a starting clique.
pub fn replay(start: &Clique, steps: &[Step]) -> Vec<Clique> {
    let mut current = start.clone();
    let mut out = Vec::with_capacity(steps.len() + 1);
    out.push(current.clone());
    for &step in steps {
        match step {
            Step::Add(v) => current.insert(v),
            Step::Remove(v) => current.remove(v),
        };
        out.push(current.clone());
    }
    out
}

/// Greedy solve of a TAR instance on an interval graph given its clique
/// path.
pub fn greedy_solve(inst: &Instance<'_>, path: &CliquePath, opts: &ChordalOptions) -> Result<SolveResult, ChordalError> {
    let started = Instant::now();
    let k = tar_threshold(inst)?;
    if let Some(decision) = inst.trivial_decision() {
        return Ok(SolveResult::decided(inst, decision, SolverKind::Chordal, started));
    }
    let steps = greedy_steps(path, inst.source(), inst.target(), k, opts.tie_break)?;
    let stats = Stats {
        nodes: path.bags.len(),
        edges: path.bags.len().saturating_sub(1),
        elapsed: started.elapsed(),
    };
    Ok(result_from_steps(inst, steps, opts, stats, |c| c))
}

fn tar_threshold(inst: &Instance<'_>) -> Result<usize, ChordalError> {
    inst.rule()
        .threshold()
        .ok_or_else(|| ChordalError::InvalidOrdering(format!("expected a TAR instance, got {}", inst.rule())))
}

fn result_from_steps(
    inst: &Instance<'_>,
    steps: Option<Vec<Step>>,
    opts: &ChordalOptions,
    stats: Stats,
    to_original: impl Fn(Clique) -> Clique,
) -> SolveResult {
    let distance = steps.as_ref().map(Vec::len);
    let sequence = match (&steps, opts.with_sequence) {
        (Some(steps), true) => {
            let start = inst.source().clone();
            let cliques = replay(&start, steps).into_iter().map(to_original).collect();
            Some(ReconfSequence::new(inst.rule(), cliques))
        }
        _ => None,
    };
    SolveResult {
        reachable: steps.is_some(),
        distance,
        sequence,
        shortest: true,
        solver: SolverKind::Chordal,
        decision: None,
        tar_threshold: None,
        stats,
    }
}

/// Shortest reconfiguration on a chordal graph. TJ and TS instances are
/// solved through their TAR images.
pub fn solve_chordal(inst: &Instance<'_>, opts: &ChordalOptions) -> Result<SolveResult, ChordalError> {
    let started = Instant::now();
    if let Some(decision) = inst.trivial_decision() {
        return Ok(SolveResult::decided(inst, decision, SolverKind::Chordal, started));
    }
    let k = match inst.rule() {
        Rule::Tar(k) => k,
        Rule::Ts | Rule::Tj => {
            let reduction = match inst.rule() {
                Rule::Ts => ts_to_tar(inst),
                _ => tj_to_tar(inst),
            };
            let Ok(Reduction::Reduced(tar)) = reduction else {
                unreachable!("size-consistent TJ/TS instances always reduce")
            };
            let threshold = tar.rule().threshold().unwrap_or_default();
            return Ok(solve_chordal(&tar, opts)?.from_tar(inst, threshold));
        }
    };

    if k <= inst.source().intersection_len(inst.target()) {
        check_chordal(inst.graph())?;
        let steps = through_intersection_steps(inst.source(), inst.target());
        let stats = Stats { elapsed: started.elapsed(), ..Stats::default() };
        return Ok(result_from_steps(inst, Some(steps), opts, stats, |c| c));
    }

    let red = reduce_to_interval(inst)?;
    let steps = greedy_steps(&red.path, &red.source, &red.target, k, opts.tie_break)?;
    let map = &red.map;
    let stats = Stats {
        nodes: red.tree_nodes,
        edges: red.path.bags.len().saturating_sub(1),
        elapsed: started.elapsed(),
    };
    let steps = steps.map(|s| {
        s.into_iter()
            .map(|step| match step {
                Step::Add(v) => Step::Add(map[v]),
                Step::Remove(v) => Step::Remove(map[v]),
            })
            .collect()
    });
    let mut result = result_from_steps(inst, steps, opts, stats, |c| c);
    result.stats.elapsed = started.elapsed();
    Ok(result)
}
