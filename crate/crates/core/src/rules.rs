//! The three reconfiguration rules, instances, sequences and the
//! reductions between rules.
//!
//! * `TAR(k)`: add or remove one vertex, never dropping below `k` vertices.
//! * `TJ`: replace one vertex by any other vertex.
//! * `TS`: replace one vertex by a neighbour of it.
//!
//! Every reduction here picks "arbitrary" subsets and supersets by taking
//! the lowest vertex indices, so outputs are reproducible.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::set::{Clique, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Token addition/removal with threshold `k`.
    Tar(usize),
    /// Token jumping.
    Tj,
    /// Token sliding.
    Ts,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Tar(_) => "tar",
            Rule::Tj => "tj",
            Rule::Ts => "ts",
        }
    }

    pub fn threshold(&self) -> Option<usize> {
        match self {
            Rule::Tar(k) => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Tar(k) => write!(f, "TAR({k})"),
            Rule::Tj => f.write_str("TJ"),
            Rule::Ts => f.write_str("TS"),
        }
    }
}

impl FromStr for Rule {
    type Err = String;

    /// Accepts `tar <k>`, `tj` and `ts`, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut fields = s.split_whitespace();
        let name = fields.next().ok_or("empty rule")?.to_ascii_lowercase();
        let rule = match name.as_str() {
            "tar" => {
                let k = fields.next().ok_or("TAR needs a threshold k")?;
                Rule::Tar(k.parse().map_err(|_| format!("invalid threshold {k:?}"))?)
            }
            "tj" => Rule::Tj,
            "ts" => Rule::Ts,
            other => return Err(format!("unknown rule {other:?}")),
        };
        match fields.next() {
            Some(extra) => Err(format!("unexpected {extra:?} after rule")),
            None => Ok(rule),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{which} {set:?} is not a clique")]
    NotAClique { which: &'static str, set: VertexSet },
    #[error("expected a {expected} instance, got {found}")]
    WrongRule { expected: &'static str, found: Rule },
}

/// An answer that follows from the instance definition alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    /// Source equals target and satisfies the size constraint: YES, distance 0.
    Identical,
    /// TJ/TS endpoints of different sizes: NO.
    SizeMismatch,
    /// A TAR endpoint smaller than the threshold: NO.
    BelowThreshold,
    /// Distinct TAR endpoints, one of which is a maximal clique of size
    /// exactly `k` and therefore has no neighbour at all: NO.
    FrozenMaximal,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Identical)
    }

    pub fn code(&self) -> &'static str {
        match self {
            Decision::Identical => "identical",
            Decision::SizeMismatch => "size-mismatch",
            Decision::BelowThreshold => "below-threshold",
            Decision::FrozenMaximal => "frozen-maximal",
        }
    }
}

/// A graph, two cliques and a rule.
#[derive(Clone, Debug)]
pub struct Instance<'g> {
    graph: &'g Graph,
    source: Clique,
    target: Clique,
    rule: Rule,
}

impl<'g> Instance<'g> {
    /// Checks that both endpoints are cliques of `graph`. Size constraints
    /// are not errors; see [`Instance::trivial_decision`].
    pub fn new(graph: &'g Graph, source: Clique, target: Clique, rule: Rule) -> Result<Self, RuleError> {
        for (which, set) in [("source", &source), ("target", &target)] {
            if !graph.is_clique(set)? {
                return Err(RuleError::NotAClique { which, set: set.clone() });
            }
        }
        Ok(Instance { graph, source, target, rule })
    }

    pub(crate) fn new_unchecked(graph: &'g Graph, source: Clique, target: Clique, rule: Rule) -> Self {
        Instance { graph, source, target, rule }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn source(&self) -> &Clique {
        &self.source
    }

    pub fn target(&self) -> &Clique {
        &self.target
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// The same endpoints under another rule.
    pub fn with_rule(&self, rule: Rule) -> Instance<'g> {
        Instance { rule, ..self.clone() }
    }

    /// Answers that need no search: size violations and equal endpoints.
    pub fn trivial_decision(&self) -> Option<Decision> {
        let (s, t) = (self.source.len(), self.target.len());
        match self.rule {
            Rule::Tar(k) if s.min(t) < k => Some(Decision::BelowThreshold),
            Rule::Tj | Rule::Ts if s != t => Some(Decision::SizeMismatch),
            _ if self.source == self.target => Some(Decision::Identical),
            _ => None,
        }
    }

    /// For TAR instances with distinct endpoints: whether an endpoint of
    /// size exactly `k` is a maximal clique, which makes the answer NO.
    pub fn has_frozen_endpoint(&self) -> bool {
        let Rule::Tar(k) = self.rule else { return false };
        self.source != self.target
            && [&self.source, &self.target]
                .into_iter()
                .any(|c| c.len() == k && self.graph.common_neighbors(c).is_empty())
    }

    fn expect_rule(&self, expected: &'static str) -> Result<(), RuleError> {
        if self.rule.name() == expected {
            Ok(())
        } else {
            Err(RuleError::WrongRule { expected, found: self.rule })
        }
    }
}

/// One-step adjacency under `rule`, assuming both sets are cliques of `g`.
pub(crate) fn adjacent_unchecked(g: &Graph, rule: Rule, c1: &Clique, c2: &Clique) -> bool {
    match rule {
        Rule::Tar(k) => c1.len() >= k && c2.len() >= k && c1.symmetric_difference_len(c2) == 1,
        Rule::Tj | Rule::Ts => {
            if c1.len() != c2.len() {
                return false;
            }
            let out = c1.difference(c2);
            if out.len() != 1 {
                return false;
            }
            if rule == Rule::Tj {
                return true;
            }
            let into = c2.difference(c1);
            g.has_edge(out.as_slice()[0], into.as_slice()[0])
        }
    }
}

/// Whether `c2` is reachable from `c1` in one step under `rule`.
pub fn adjacent(g: &Graph, rule: Rule, c1: &Clique, c2: &Clique) -> Result<bool, RuleError> {
    for (which, c) in [("first clique", c1), ("second clique", c2)] {
        if !g.is_clique(c)? {
            return Err(RuleError::NotAClique { which, set: c.clone() });
        }
    }
    Ok(adjacent_unchecked(g, rule, c1, c2))
}

/// An ordered list of cliques under a rule. Its length is the number of
/// steps, one less than the number of cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconfSequence {
    pub rule: Rule,
    pub cliques: Vec<Clique>,
}

impl ReconfSequence {
    pub fn new(rule: Rule, cliques: Vec<Clique>) -> Self {
        ReconfSequence { rule, cliques }
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.cliques.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.len() <= 1
    }

    /// Whether each vertex belongs to a contiguous run of cliques, i.e. it
    /// is added at most once and removed at most once.
    pub fn has_contiguous_membership(&self) -> bool {
        let mut last_seen: std::collections::HashMap<usize, usize> = Default::default();
        for (i, c) in self.cliques.iter().enumerate() {
            for v in c {
                if let Some(prev) = last_seen.insert(v, i) {
                    if prev + 1 != i {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationReason {
    EmptySequence,
    RuleMismatch,
    WrongStart,
    WrongEnd,
    VertexOutOfRange,
    NotAClique,
    BelowThreshold,
    SizeChanged,
    NotAdjacent,
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationReason::EmptySequence => "empty sequence",
            ViolationReason::RuleMismatch => "sequence rule differs from instance rule",
            ViolationReason::WrongStart => "does not start at the source clique",
            ViolationReason::WrongEnd => "does not end at the target clique",
            ViolationReason::VertexOutOfRange => "vertex out of range",
            ViolationReason::NotAClique => "not a clique",
            ViolationReason::BelowThreshold => "smaller than the threshold",
            ViolationReason::SizeChanged => "size differs from the source clique",
            ViolationReason::NotAdjacent => "not adjacent to the previous clique",
        })
    }
}

/// The first position at which a sequence fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("clique {index}: {reason}")]
pub struct Violation {
    /// Index into the clique list, 0-based.
    pub index: usize,
    pub reason: ViolationReason,
}

/// Checks that `seq` starts at the source, ends at the target, consists of
/// cliques meeting the size constraint, and moves by single rule steps.
pub fn validate_sequence(inst: &Instance<'_>, seq: &ReconfSequence) -> Result<(), Violation> {
    let fail = |index, reason| Err(Violation { index, reason });
    if seq.rule != inst.rule {
        return fail(0, ViolationReason::RuleMismatch);
    }
    let Some(first) = seq.cliques.first() else {
        return fail(0, ViolationReason::EmptySequence);
    };
    if first != inst.source() {
        return fail(0, ViolationReason::WrongStart);
    }
    let g = inst.graph();
    for (i, c) in seq.cliques.iter().enumerate() {
        if g.check_vertices(c).is_err() {
            return fail(i, ViolationReason::VertexOutOfRange);
        }
        if !g.is_clique_unchecked(c.as_slice()) {
            return fail(i, ViolationReason::NotAClique);
        }
        match inst.rule {
            Rule::Tar(k) if c.len() < k => return fail(i, ViolationReason::BelowThreshold),
            Rule::Tj | Rule::Ts if c.len() != first.len() => {
                return fail(i, ViolationReason::SizeChanged)
            }
            _ => {}
        }
        if i > 0 && !adjacent_unchecked(g, inst.rule, &seq.cliques[i - 1], c) {
            return fail(i, ViolationReason::NotAdjacent);
        }
    }
    if seq.cliques.last() != Some(inst.target()) {
        return fail(seq.cliques.len() - 1, ViolationReason::WrongEnd);
    }
    Ok(())
}

/// Result of reducing an instance to another rule.
#[derive(Clone, Debug)]
pub enum Reduction<'g> {
    Reduced(Instance<'g>),
    Decided(Decision),
}

impl<'g> Reduction<'g> {
    pub fn instance(&self) -> Option<&Instance<'g>> {
        match self {
            Reduction::Reduced(inst) => Some(inst),
            Reduction::Decided(_) => None,
        }
    }

    pub fn decision(&self) -> Option<Decision> {
        match self {
            Reduction::Reduced(_) => None,
            Reduction::Decided(d) => Some(*d),
        }
    }
}

/// TS with endpoints of size `k` becomes TAR(k) on the same endpoints.
/// TAR distances are exactly twice the TS distances.
pub fn ts_to_tar<'g>(inst: &Instance<'g>) -> Result<Reduction<'g>, RuleError> {
    inst.expect_rule("ts")?;
    if inst.source.len() != inst.target.len() {
        return Ok(Reduction::Decided(Decision::SizeMismatch));
    }
    Ok(Reduction::Reduced(inst.with_rule(Rule::Tar(inst.source.len()))))
}

/// TJ with endpoints of size `k` becomes TAR(k - 1) on the same endpoints.
/// TAR distances are exactly twice the TJ distances.
pub fn tj_to_tar<'g>(inst: &Instance<'g>) -> Result<Reduction<'g>, RuleError> {
    inst.expect_rule("tj")?;
    if inst.source.len() != inst.target.len() {
        return Ok(Reduction::Decided(Decision::SizeMismatch));
    }
    // Two empty endpoints are equal; TAR(0) gives the same distance 0.
    let k = inst.source.len().saturating_sub(1);
    Ok(Reduction::Reduced(inst.with_rule(Rule::Tar(k))))
}

/// TAR(k) becomes TS on the `k` lowest-indexed vertices of each endpoint.
/// Reachability is preserved; distances are not.
pub fn tar_to_ts<'g>(inst: &Instance<'g>) -> Result<Reduction<'g>, RuleError> {
    inst.expect_rule("tar")?;
    let k = inst.rule.threshold().unwrap_or_default();
    if inst.source.len().min(inst.target.len()) < k {
        return Ok(Reduction::Decided(Decision::BelowThreshold));
    }
    Ok(Reduction::Reduced(Instance::new_unchecked(
        inst.graph,
        inst.source.prefix(k),
        inst.target.prefix(k),
        Rule::Ts,
    )))
}

/// TAR(k) becomes TJ on endpoints of size `k + 1`: larger endpoints keep
/// their `k + 1` lowest vertices, endpoints of size `k` gain their lowest
/// common neighbour. Reachability is preserved.
///
/// Distinct endpoints where one is a maximal clique of size `k` are
/// answered NO directly, since such a clique cannot move at all.
pub fn tar_to_tj<'g>(inst: &Instance<'g>) -> Result<Reduction<'g>, RuleError> {
    inst.expect_rule("tar")?;
    let k = inst.rule.threshold().unwrap_or_default();
    if let Some(decision) = inst.trivial_decision() {
        return Ok(Reduction::Decided(decision));
    }
    if inst.has_frozen_endpoint() {
        return Ok(Reduction::Decided(Decision::FrozenMaximal));
    }
    let resize = |c: &Clique| {
        if c.len() > k {
            c.prefix(k + 1)
        } else {
            let grow = inst.graph.common_neighbors(c).as_slice()[0];
            c.with(grow)
        }
    };
    Ok(Reduction::Reduced(Instance::new_unchecked(
        inst.graph,
        resize(&inst.source),
        resize(&inst.target),
        Rule::Tj,
    )))
}

/// Extends `c` to a maximal clique by repeatedly adding the lowest-indexed
/// vertex adjacent to every current member.
pub fn maximal_extension(g: &Graph, c: &Clique) -> Result<Clique, RuleError> {
    if !g.is_clique(c)? {
        return Err(RuleError::NotAClique { which: "clique", set: c.clone() });
    }
    Ok(maximal_extension_unchecked(g, c))
}

pub(crate) fn maximal_extension_unchecked(g: &Graph, c: &Clique) -> Clique {
    // Candidates are already adjacent to all of `c`; scanning them in
    // increasing order is the same as repeatedly taking the lowest one.
    let mut out = c.clone();
    let mut added: Vec<usize> = Vec::new();
    for w in g.common_neighbors(c).iter() {
        if added.iter().all(|&a| g.has_edge(a, w)) {
            added.push(w);
            out.insert(w);
        }
    }
    out
}

/// Rewrites a TJ or TS sequence as a TAR sequence of twice the length:
/// TS steps pass through the union of consecutive cliques (threshold `k`),
/// TJ steps through their intersection (threshold `k - 1`).
pub fn expand_to_tar(seq: &ReconfSequence) -> ReconfSequence {
    let size = seq.cliques.first().map_or(0, |c| c.len());
    let (rule, through_union) = match seq.rule {
        Rule::Ts => (Rule::Tar(size), true),
        Rule::Tj => (Rule::Tar(size.saturating_sub(1)), false),
        Rule::Tar(_) => return seq.clone(),
    };
    let mut cliques = Vec::with_capacity(2 * seq.cliques.len());
    for (i, c) in seq.cliques.iter().enumerate() {
        if i > 0 {
            let prev = &seq.cliques[i - 1];
            cliques.push(if through_union {
                prev.union(c)
            } else {
                prev.intersection(c)
            });
        }
        cliques.push(c.clone());
    }
    ReconfSequence::new(rule, cliques)
}

/// Turns a TAR sequence whose endpoints both have size `size` into a TS
/// (`rule == Rule::Ts`, threshold `size`) or TJ (`rule == Rule::Tj`,
/// threshold `size - 1`) sequence between the same endpoints.
///
/// Peaks more than one above the threshold are flattened first, so the
/// sizes alternate between the threshold and one more; then every other
/// clique is kept. A shortest input yields an output of exactly half its
/// length.
pub fn contract_from_tar(cliques: &[Clique], rule: Rule, size: usize) -> ReconfSequence {
    let low = match rule {
        Rule::Ts => size,
        Rule::Tj => size.saturating_sub(1),
        Rule::Tar(_) => panic!("contract_from_tar targets TJ or TS"),
    };
    let mut seq = cliques.to_vec();
    let mut i = 1;
    while i + 1 < seq.len() {
        let (prev, cur, next) = (&seq[i - 1], &seq[i], &seq[i + 1]);
        if cur.len() >= low + 2 && prev.len() < cur.len() && next.len() < cur.len() {
            let added = cur.difference(prev).as_slice()[0];
            let removed = cur.difference(next).as_slice()[0];
            if added == removed {
                seq.drain(i..i + 2);
            } else {
                seq[i] = prev.without(removed);
            }
            i = i.saturating_sub(1).max(1);
            continue;
        }
        i += 1;
    }

    // With sizes confined to {low, low + 1}, the endpoint size recurs at
    // every even index.
    let mut out: Vec<Clique> = Vec::with_capacity(seq.len() / 2 + 1);
    for c in seq.into_iter().filter(|c| c.len() == size) {
        if out.last() != Some(&c) {
            out.push(c);
        }
    }
    ReconfSequence::new(rule, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    fn c<const N: usize>(v: [usize; N]) -> Clique {
        VertexSet::from(v)
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("tar 2".parse::<Rule>(), Ok(Rule::Tar(2)));
        assert_eq!("TS".parse::<Rule>(), Ok(Rule::Ts));
        assert_eq!("tj".parse::<Rule>(), Ok(Rule::Tj));
        assert!("tar".parse::<Rule>().is_err());
        assert!("ts 3".parse::<Rule>().is_err());
        assert!("slide".parse::<Rule>().is_err());
    }

    #[test]
    fn adjacency_examples() {
        let k3 = Graph::complete(3);
        let p4 = Graph::path(4);
        assert!(adjacent(&k3, Rule::Tar(1), &c([0]), &c([0, 1])).unwrap());
        assert!(adjacent(&p4, Rule::Ts, &c([0]), &c([1])).unwrap());
        assert!(!adjacent(&p4, Rule::Ts, &c([0]), &c([2])).unwrap());
        assert!(adjacent(&p4, Rule::Tj, &c([0]), &c([2])).unwrap());
        assert!(adjacent(&k3, Rule::Tj, &c([0, 1]), &c([0, 2])).unwrap());
        assert!(!adjacent(&k3, Rule::Tar(2), &c([0]), &c([0, 1])).unwrap());
        assert!(!adjacent(&k3, Rule::Tj, &c([0, 1]), &c([0, 1])).unwrap());
        assert!(matches!(
            adjacent(&p4, Rule::Tj, &c([0, 2]), &c([0])),
            Err(RuleError::NotAClique { .. })
        ));
    }

    #[test]
    fn validate_examples() {
        let p4 = Graph::path(4);
        let tar = Instance::new(&p4, c([0]), c([1]), Rule::Tar(1)).unwrap();
        let seq = ReconfSequence::new(Rule::Tar(1), vec![c([0]), c([0, 1]), c([1])]);
        assert_eq!(validate_sequence(&tar, &seq), Ok(()));

        let tj = Instance::new(&p4, c([0]), c([2]), Rule::Tj).unwrap();
        let jump = ReconfSequence::new(Rule::Tj, vec![c([0]), c([2])]);
        assert_eq!(validate_sequence(&tj, &jump), Ok(()));

        let ts = tj.with_rule(Rule::Ts);
        let slide = ReconfSequence::new(Rule::Ts, vec![c([0]), c([2])]);
        assert_eq!(
            validate_sequence(&ts, &slide),
            Err(Violation { index: 1, reason: ViolationReason::NotAdjacent })
        );
    }

    #[test]
    fn validate_reports_each_reason() {
        let p4 = Graph::path(4);
        let inst = Instance::new(&p4, c([0]), c([1]), Rule::Tar(1)).unwrap();
        let check = |cliques: Vec<Clique>| {
            validate_sequence(&inst, &ReconfSequence::new(Rule::Tar(1), cliques)).unwrap_err()
        };
        assert_eq!(check(vec![]).reason, ViolationReason::EmptySequence);
        assert_eq!(check(vec![c([1])]).reason, ViolationReason::WrongStart);
        assert_eq!(check(vec![c([0])]).reason, ViolationReason::WrongEnd);
        assert_eq!(
            check(vec![c([0]), c([0, 2]), c([1])]),
            Violation { index: 1, reason: ViolationReason::NotAClique }
        );
        assert_eq!(
            check(vec![c([0]), c([]), c([1])]),
            Violation { index: 1, reason: ViolationReason::BelowThreshold }
        );
        assert_eq!(
            check(vec![c([0]), c([9])]),
            Violation { index: 1, reason: ViolationReason::VertexOutOfRange }
        );
        let ts = Instance::new(&p4, c([0]), c([1]), Rule::Ts).unwrap();
        let grown = ReconfSequence::new(Rule::Ts, vec![c([0]), c([0, 1]), c([1])]);
        assert_eq!(
            validate_sequence(&ts, &grown).unwrap_err().reason,
            ViolationReason::SizeChanged
        );
        let wrong_rule = ReconfSequence::new(Rule::Tj, vec![c([0]), c([1])]);
        assert_eq!(
            validate_sequence(&ts, &wrong_rule).unwrap_err().reason,
            ViolationReason::RuleMismatch
        );
    }

    #[test]
    fn trivial_decisions() {
        let g = Graph::complete(4);
        let inst = |s, t, r| Instance::new(&g, s, t, r).unwrap();
        assert_eq!(
            inst(c([0]), c([1, 2]), Rule::Ts).trivial_decision(),
            Some(Decision::SizeMismatch)
        );
        assert_eq!(
            inst(c([0]), c([1, 2]), Rule::Tar(2)).trivial_decision(),
            Some(Decision::BelowThreshold)
        );
        assert_eq!(
            inst(c([0, 1]), c([0, 1]), Rule::Tar(2)).trivial_decision(),
            Some(Decision::Identical)
        );
        assert_eq!(inst(c([0]), c([1]), Rule::Tj).trivial_decision(), None);
    }

    #[test]
    fn ts_and_tj_to_tar() {
        let p4 = Graph::path(4);
        let ts = Instance::new(&p4, c([0]), c([3]), Rule::Ts).unwrap();
        let red = ts_to_tar(&ts).unwrap();
        let tar = red.instance().unwrap();
        assert_eq!((tar.source(), tar.target(), tar.rule()), (&c([0]), &c([3]), Rule::Tar(1)));

        let tj = ts.with_rule(Rule::Tj);
        assert_eq!(tj_to_tar(&tj).unwrap().instance().unwrap().rule(), Rule::Tar(0));

        let k3 = Graph::complete(3);
        let tj = Instance::new(&k3, c([0, 1]), c([1, 2]), Rule::Tj).unwrap();
        assert_eq!(tj_to_tar(&tj).unwrap().instance().unwrap().rule(), Rule::Tar(1));

        let mismatch = Instance::new(&k3, c([0]), c([1, 2]), Rule::Ts).unwrap();
        assert_eq!(ts_to_tar(&mismatch).unwrap().decision(), Some(Decision::SizeMismatch));
        assert!(matches!(ts_to_tar(&tj), Err(RuleError::WrongRule { .. })));
    }

    #[test]
    fn tar_to_ts_takes_lowest_vertices() {
        let k3 = Graph::complete(3);
        let tar = Instance::new(&k3, c([0, 1, 2]), c([0, 1, 2]), Rule::Tar(2)).unwrap();
        let ts = tar_to_ts(&tar).unwrap();
        let ts = ts.instance().unwrap();
        assert_eq!((ts.source(), ts.target(), ts.rule()), (&c([0, 1]), &c([0, 1]), Rule::Ts));

        let g = diamond();
        let tar = Instance::new(&g, c([0, 1, 2]), c([0, 1, 3]), Rule::Tar(2)).unwrap();
        let ts = tar_to_ts(&tar).unwrap();
        assert_eq!(ts.instance().unwrap().source(), &c([0, 1]));
        assert_eq!(ts.instance().unwrap().target(), &c([0, 1]));
    }

    #[test]
    fn tar_to_tj_cases() {
        let two_edges = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let tar = Instance::new(&two_edges, c([0, 1]), c([2, 3]), Rule::Tar(2)).unwrap();
        assert_eq!(tar_to_tj(&tar).unwrap().decision(), Some(Decision::FrozenMaximal));

        let g = diamond();
        let tar = Instance::new(&g, c([0, 2]), c([0, 3]), Rule::Tar(2)).unwrap();
        let tj = tar_to_tj(&tar).unwrap();
        let tj = tj.instance().unwrap();
        assert_eq!((tj.source(), tj.target(), tj.rule()), (&c([0, 1, 2]), &c([0, 1, 3]), Rule::Tj));

        let k4 = Graph::complete(4);
        let same = Instance::new(&k4, c([0, 1, 2, 3]), c([0, 1, 2, 3]), Rule::Tar(2)).unwrap();
        assert_eq!(tar_to_tj(&same).unwrap().decision(), Some(Decision::Identical));

        let shrink = Instance::new(&k4, c([0, 1, 2, 3]), c([1, 2, 3]), Rule::Tar(1)).unwrap();
        let tj = tar_to_tj(&shrink).unwrap();
        assert_eq!(tj.instance().unwrap().source(), &c([0, 1]));
        assert_eq!(tj.instance().unwrap().target(), &c([1, 2]));
    }

    #[test]
    fn maximal_extension_examples() {
        assert_eq!(maximal_extension(&Graph::path(4), &c([1])).unwrap(), c([0, 1]));
        assert_eq!(maximal_extension(&Graph::complete(3), &c([0, 1, 2])).unwrap(), c([0, 1, 2]));
        assert_eq!(maximal_extension(&diamond(), &c([2])).unwrap(), c([0, 1, 2]));
        assert_eq!(maximal_extension(&Graph::empty(2), &c([])).unwrap(), c([0]));
        assert!(maximal_extension(&Graph::path(4), &c([0, 3])).is_err());
    }

    #[test]
    fn expand_and_contract_round_trip() {
        let p4 = Graph::path(4);
        let ts = ReconfSequence::new(Rule::Ts, vec![c([0]), c([1]), c([2]), c([3])]);
        let tar = expand_to_tar(&ts);
        assert_eq!(tar.rule, Rule::Tar(1));
        assert_eq!(tar.len(), 6);
        let inst = Instance::new(&p4, c([0]), c([3]), Rule::Tar(1)).unwrap();
        assert_eq!(validate_sequence(&inst, &tar), Ok(()));
        assert_eq!(contract_from_tar(&tar.cliques, Rule::Ts, 1), ts);

        let tj = ReconfSequence::new(Rule::Tj, vec![c([0]), c([3])]);
        let tar = expand_to_tar(&tj);
        assert_eq!(tar.cliques, vec![c([0]), c([]), c([3])]);
        assert_eq!(contract_from_tar(&tar.cliques, Rule::Tj, 1), tj);
    }

    #[test]
    fn contract_flattens_high_peaks() {
        // K4, TAR(1) walk {0} -> {0,1} -> {0,1,2} -> {1,2} -> {2}
        let g = Graph::complete(4);
        let walk = vec![c([0]), c([0, 1]), c([0, 1, 2]), c([1, 2]), c([2])];
        let ts = contract_from_tar(&walk, Rule::Ts, 1);
        let inst = Instance::new(&g, c([0]), c([2]), Rule::Ts).unwrap();
        assert_eq!(validate_sequence(&inst, &ts), Ok(()));
        assert_eq!(ts.cliques, vec![c([0]), c([1]), c([2])]);

        // a peak that adds and removes the same vertex collapses entirely
        let walk = vec![c([0]), c([0, 1]), c([0, 1, 3]), c([0, 1]), c([1])];
        let ts = contract_from_tar(&walk, Rule::Ts, 1);
        assert_eq!(ts.cliques, vec![c([0]), c([1])]);
    }

    #[test]
    fn contiguous_membership() {
        let ok = ReconfSequence::new(Rule::Tar(1), vec![c([0]), c([0, 1]), c([1])]);
        assert!(ok.has_contiguous_membership());
        let back = ReconfSequence::new(Rule::Tar(0), vec![c([0]), c([]), c([0])]);
        assert!(!back.has_contiguous_membership());
    }
}
