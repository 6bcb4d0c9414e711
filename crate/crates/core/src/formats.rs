//! Instance and sequence files.
//!
//! Instance file, vertices 1-based:
//!
//! ```text
//! r tar 2
//! s 1 2 3
//! t 4 5
//! ```
//!
//! Sequence file: one clique per line, space-separated 1-based vertices. A
//! blank line is the empty clique; lines starting with `c` are comments.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;
use crate::rules::{Instance, ReconfSequence, Rule, RuleError};
use crate::set::{Clique, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
}

/// The contents of an instance file, not yet tied to a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub rule: Rule,
    pub source: Clique,
    pub target: Clique,
}

impl InstanceSpec {
    pub fn bind<'g>(&self, graph: &'g Graph) -> Result<Instance<'g>, RuleError> {
        Instance::new(graph, self.source.clone(), self.target.clone(), self.rule)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.rule {
            Rule::Tar(k) => {
                let _ = writeln!(out, "r tar {k}");
            }
            other => {
                let _ = writeln!(out, "r {}", other.name());
            }
        }
        for (tag, set) in [('s', &self.source), ('t', &self.target)] {
            out.push(tag);
            for v in set {
                let _ = write!(out, " {}", v + 1);
            }
            out.push('\n');
        }
        out
    }
}

impl<'g> From<&Instance<'g>> for InstanceSpec {
    fn from(inst: &Instance<'g>) -> Self {
        InstanceSpec {
            rule: inst.rule(),
            source: inst.source().clone(),
            target: inst.target().clone(),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceSpec, FormatError> {
    let (mut rule, mut source, mut target) = (None, None, None);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| FormatError::Parse { line, msg };
        let trimmed = raw.trim();
        let (tag, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let slot = match tag {
            "" | "c" => continue,
            "r" => {
                if rule.is_some() {
                    return Err(err("duplicate `r` line".into()));
                }
                rule = Some(rest.parse::<Rule>().map_err(err)?);
                continue;
            }
            "s" => &mut source,
            "t" => &mut target,
            other => return Err(err(format!("unknown line type {other:?}"))),
        };
        if slot.is_some() {
            return Err(err(format!("duplicate `{tag}` line")));
        }
        *slot = Some(parse_vertices(rest).map_err(err)?);
    }
    Ok(InstanceSpec {
        rule: rule.ok_or(FormatError::Missing("r"))?,
        source: source.ok_or(FormatError::Missing("s"))?,
        target: target.ok_or(FormatError::Missing("t"))?,
    })
}

fn parse_vertices(text: &str) -> Result<VertexSet, String> {
    let mut members = Vec::new();
    for field in text.split_whitespace() {
        let v: usize = field
            .parse()
            .map_err(|_| format!("invalid vertex {field:?}"))?;
        if v == 0 {
            return Err("vertices are numbered from 1".into());
        }
        members.push(v - 1);
    }
    let set: VertexSet = members.iter().copied().collect();
    if set.len() != members.len() {
        return Err("repeated vertex".into());
    }
    Ok(set)
}

/// Parses a sequence file. The rule is not stored in the file and is
/// supplied by the caller.
pub fn parse_sequence(text: &str, rule: Rule) -> Result<ReconfSequence, FormatError> {
    let mut cliques = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.starts_with('c') {
            continue;
        }
        let set = parse_vertices(trimmed).map_err(|msg| FormatError::Parse { line: idx + 1, msg })?;
        cliques.push(set);
    }
    Ok(ReconfSequence::new(rule, cliques))
}

pub fn format_sequence(seq: &ReconfSequence) -> String {
    let mut out = String::new();
    for c in &seq.cliques {
        let _ = writeln!(out, "{c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let text = "c comment\nr tar 1\ns 1\nt 4\n";
        let spec = parse_instance(text).unwrap();
        assert_eq!(spec.rule, Rule::Tar(1));
        assert_eq!(spec.source, VertexSet::from([0]));
        assert_eq!(spec.target, VertexSet::from([3]));
        assert_eq!(parse_instance(&spec.to_text()).unwrap(), spec);
    }

    #[test]
    fn empty_endpoint() {
        let spec = parse_instance("r tar 0\ns\nt 2 3\n").unwrap();
        assert!(spec.source.is_empty());
        assert_eq!(spec.to_text(), "r tar 0\ns\nt 2 3\n");
    }

    #[test]
    fn instance_errors() {
        assert_eq!(parse_instance("r ts\ns 1\n"), Err(FormatError::Missing("t")));
        assert!(matches!(
            parse_instance("r ts\ns 0\nt 1\n"),
            Err(FormatError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("r tar\ns 1\nt 1\n"),
            Err(FormatError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("r ts\ns 1 1\nt 1 2\n"),
            Err(FormatError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn bind_rejects_non_cliques() {
        let spec = parse_instance("r ts\ns 1 3\nt 1 2\n").unwrap();
        assert!(spec.bind(&Graph::path(4)).is_err());
    }

    #[test]
    fn sequence_round_trip() {
        let seq = parse_sequence("1\n1 2\n2\n", Rule::Tar(1)).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(format_sequence(&seq), "1\n1 2\n2\n");
        let with_empty = parse_sequence("1\n\n2\n", Rule::Tar(0)).unwrap();
        assert!(with_empty.cliques[1].is_empty());
    }
}
