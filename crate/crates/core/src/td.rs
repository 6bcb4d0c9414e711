//! Tree decompositions in the PACE `.td` format.
//!
//! ```text
//! c comment
//! s td <bags> <width + 1> <vertices>
//! b 1 1 2
//! b 2 2 3
//! 1 2
//! ```
//!
//! Bag ids and vertices are 1-based. Decompositions are read, never
//! computed.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;
use crate::set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("decomposition is over {td} vertices but the graph has {graph}")]
    VertexCount { td: usize, graph: usize },
    #[error("bag tree is not a tree: {0}")]
    NotATree(String),
    #[error("vertex {} is in no bag", .0 + 1)]
    UncoveredVertex(usize),
    #[error("edge {}-{} is in no bag", .0 + 1, .1 + 1)]
    UncoveredEdge(usize, usize),
    #[error("bags containing vertex {} are not connected in the tree", .0 + 1)]
    DisconnectedTrace(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub vertex_count: usize,
    pub bags: Vec<VertexSet>,
    /// Tree edges as pairs of 0-based bag indices.
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; an empty decomposition has width 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the tree shape, vertex and edge coverage, and that the bags
    /// holding any one vertex form a connected subtree.
    pub fn validate(&self, g: &Graph) -> Result<(), TdError> {
        let n = g.vertex_count();
        if self.vertex_count != n {
            return Err(TdError::VertexCount { td: self.vertex_count, graph: n });
        }
        self.validate_tree()?;

        let mut bags_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (b, bag) in self.bags.iter().enumerate() {
            for v in bag {
                if v >= n {
                    return Err(TdError::NotATree(format!("bag {} holds vertex {}", b + 1, v + 1)));
                }
                bags_of[v].push(b);
            }
        }
        if let Some(v) = bags_of.iter().position(Vec::is_empty) {
            return Err(TdError::UncoveredVertex(v));
        }

        // A vertex trace is a forest inside the tree; it is connected iff it
        // has exactly one fewer edge than nodes.
        let mut trace_edges = vec![0usize; n];
        for &(a, b) in &self.edges {
            for v in self.bags[a].intersection(&self.bags[b]).iter() {
                trace_edges[v] += 1;
            }
        }
        for v in 0..n {
            if trace_edges[v] + 1 != bags_of[v].len() {
                return Err(TdError::DisconnectedTrace(v));
            }
        }

        for (u, v) in g.edges() {
            let (short, other) = if bags_of[u].len() <= bags_of[v].len() { (u, v) } else { (v, u) };
            if !bags_of[short].iter().any(|&b| self.bags[b].contains(other)) {
                return Err(TdError::UncoveredEdge(u, v));
            }
        }
        Ok(())
    }

    fn validate_tree(&self) -> Result<(), TdError> {
        let count = self.bags.len();
        if count == 0 {
            return Ok(());
        }
        if self.edges.len() + 1 != count {
            return Err(TdError::NotATree(format!(
                "{} bags need {} edges, found {}",
                count,
                count - 1,
                self.edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); count];
        for &(a, b) in &self.edges {
            if a >= count || b >= count || a == b {
                return Err(TdError::NotATree(format!("bad edge {}-{}", a + 1, b + 1)));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(b) => Err(TdError::NotATree(format!("bag {} is unreachable", b + 1))),
            None => Ok(()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "s td {} {} {}",
            self.bags.len(),
            self.width() + 1,
            self.vertex_count
        );
        for (i, bag) in self.bags.iter().enumerate() {
            let _ = write!(out, "b {}", i + 1);
            for v in bag {
                let _ = write!(out, " {}", v + 1);
            }
            out.push('\n');
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{} {}", a + 1, b + 1);
        }
        out
    }
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, TdError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<VertexSet>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| TdError::Parse { line, msg };
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = fields.first() else { continue };
        let num = |i: usize| -> Result<usize, TdError> {
            let f = fields.get(i).ok_or_else(|| err("missing field".into()))?;
            f.parse().map_err(|_| err(format!("invalid number {f:?}")))
        };
        match tag {
            "c" => {}
            "s" => {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                if fields.get(1) != Some(&"td") || fields.len() != 5 {
                    return Err(err("expected `s td <bags> <width+1> <vertices>`".into()));
                }
                let (count, size, n) = (num(2)?, num(3)?, num(4)?);
                bags = vec![None; count];
                header = Some((count, size, n));
            }
            "b" => {
                let Some((count, size, n)) = header else {
                    return Err(err("bag before header".into()));
                };
                let id = num(1)?;
                if id == 0 || id > count {
                    return Err(err(format!("bag id {id} out of range 1..={count}")));
                }
                let mut members = Vec::new();
                for i in 2..fields.len() {
                    let v = num(i)?;
                    if v == 0 || v > n {
                        return Err(err(format!("vertex {v} out of range 1..={n}")));
                    }
                    members.push(v - 1);
                }
                let bag: VertexSet = members.into_iter().collect();
                if bag.len() > size {
                    return Err(err(format!("bag {id} exceeds the declared size {size}")));
                }
                if bags[id - 1].replace(bag).is_some() {
                    return Err(err(format!("bag {id} defined twice")));
                }
            }
            _ => {
                let Some((count, _, _)) = header else {
                    return Err(err("edge before header".into()));
                };
                if fields.len() != 2 {
                    return Err(err(format!("unrecognised line {raw:?}")));
                }
                let (a, b) = (num(0)?, num(1)?);
                if a == 0 || b == 0 || a > count || b > count {
                    return Err(err(format!("tree edge {a}-{b} out of range")));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, _, vertex_count) = header.ok_or(TdError::Parse {
        line: text.lines().count().max(1),
        msg: "missing `s td` header".into(),
    })?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.ok_or(TdError::Parse {
                line: text.lines().count(),
                msg: format!("bag {} never defined", i + 1),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(TreeDecomposition { vertex_count, bags, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4_path_decomposition() -> TreeDecomposition {
        parse_td("c path\ns td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n").unwrap()
    }

    #[test]
    fn parses_and_validates() {
        let td = p4_path_decomposition();
        assert_eq!(td.bags.len(), 3);
        assert_eq!(td.width(), 1);
        assert_eq!(td.validate(&Graph::path(4)), Ok(()));
        assert_eq!(parse_td(&td.to_text()).unwrap(), td);
    }

    #[test]
    fn uncovered_edge() {
        let td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n").unwrap();
        assert_eq!(td.validate(&Graph::complete(3)), Err(TdError::UncoveredEdge(0, 2)));
    }

    #[test]
    fn disconnected_trace() {
        let td = parse_td("s td 3 2 3\nb 1 1 2\nb 2 3\nb 3 1 3\n1 2\n2 3\n").unwrap();
        assert_eq!(td.validate(&Graph::path(3)), Err(TdError::DisconnectedTrace(0)));
    }

    #[test]
    fn structural_errors() {
        let not_tree = parse_td("s td 2 2 2\nb 1 1\nb 2 2\n").unwrap();
        assert!(matches!(not_tree.validate(&Graph::empty(2)), Err(TdError::NotATree(_))));
        let uncovered = parse_td("s td 1 1 2\nb 1 1\n").unwrap();
        assert_eq!(uncovered.validate(&Graph::empty(2)), Err(TdError::UncoveredVertex(1)));
        let wrong_n = p4_path_decomposition();
        assert!(matches!(wrong_n.validate(&Graph::path(5)), Err(TdError::VertexCount { .. })));
        assert!(parse_td("b 1 1\n").is_err());
        assert!(parse_td("s td 1 1 2\nb 1 3\n").is_err());
        assert!(parse_td("s td 2 1 2\nb 1 1\n").is_err());
    }
}
