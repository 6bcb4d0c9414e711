//! Solver results and the dispatching facade.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::chordal::{self, ChordalError, ChordalOptions};
use crate::exhaustive::{self, ExactOptions, ExhaustiveError, DEFAULT_NODE_BUDGET};
use crate::mcg::{self, McgError, DEFAULT_CLIQUE_BUDGET};
use crate::rules::{
    contract_from_tar, tj_to_tar, ts_to_tar, Decision, Instance, Reduction, ReconfSequence, Rule,
};
use crate::td::TreeDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Exact,
    Mcg,
    Chordal,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Exact => "exact",
            SolverKind::Mcg => "mcg",
            SolverKind::Chordal => "chordal",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Nodes of the structure searched: cliques for the exact solver,
    /// maximal cliques for the others.
    pub nodes: usize,
    pub edges: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub reachable: bool,
    /// Number of steps; `None` exactly when unreachable.
    pub distance: Option<usize>,
    pub sequence: Option<ReconfSequence>,
    /// Whether `distance` is the minimum. False for maximal-clique-graph
    /// witnesses.
    pub shortest: bool,
    pub solver: SolverKind,
    /// Set when the answer needed no search.
    pub decision: Option<Decision>,
    /// The TAR threshold actually solved when a TJ/TS instance was reduced.
    pub tar_threshold: Option<usize>,
    pub stats: Stats,
}

impl SolveResult {
    pub(crate) fn decided(inst: &Instance<'_>, decision: Decision, solver: SolverKind, started: Instant) -> Self {
        let yes = decision.is_yes();
        SolveResult {
            reachable: yes,
            distance: yes.then_some(0),
            sequence: yes.then(|| ReconfSequence::new(inst.rule(), vec![inst.source().clone()])),
            shortest: true,
            solver,
            decision: Some(decision),
            tar_threshold: None,
            stats: Stats { elapsed: started.elapsed(), ..Stats::default() },
        }
    }

    pub fn answer(&self) -> &'static str {
        if self.reachable {
            "YES"
        } else {
            "NO"
        }
    }

    /// Rewrites a result for the TAR image of a TJ/TS instance in terms of
    /// the original instance: distances halve, sequences contract.
    pub(crate) fn from_tar(mut self, original: &Instance<'_>, threshold: usize) -> Self {
        let size = original.source().len();
        if let Some(seq) = self.sequence.take() {
            let contracted = contract_from_tar(&seq.cliques, original.rule(), size);
            if !self.shortest {
                self.distance = Some(contracted.len());
            }
            self.sequence = Some(contracted);
        }
        if self.shortest {
            self.distance = self.distance.map(|d| d / 2);
        }
        self.tar_threshold = Some(threshold);
        self
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Exhaustive(#[from] ExhaustiveError),
    #[error(transparent)]
    Mcg(#[from] McgError),
    #[error(transparent)]
    Chordal(#[from] ChordalError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Solver {
    Exact,
    Mcg,
    Chordal,
    /// Chordal if the graph is chordal, else the maximal-clique graph if its
    /// enumeration fits the budget, else exact search.
    #[default]
    Auto,
}

impl std::str::FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Solver::Exact),
            "mcg" => Ok(Solver::Mcg),
            "chordal" => Ok(Solver::Chordal),
            "auto" => Ok(Solver::Auto),
            other => Err(format!("unknown solver {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions<'a> {
    pub solver: Solver,
    /// Clique budget for exact search.
    pub budget: usize,
    /// Maximal clique budget for the maximal-clique graph.
    pub mcg_budget: usize,
    /// Build the reconfiguration sequence, not only the distance.
    pub with_sequence: bool,
    /// Enumerate cliques bag by bag for exact search. With `Auto` on a
    /// non-chordal graph this selects exact search.
    pub td: Option<&'a TreeDecomposition>,
}

impl Default for SolveOptions<'_> {
    fn default() -> Self {
        SolveOptions {
            solver: Solver::Auto,
            budget: DEFAULT_NODE_BUDGET,
            mcg_budget: DEFAULT_CLIQUE_BUDGET,
            with_sequence: true,
            td: None,
        }
    }
}

/// Solves any instance with the selected algorithm.
///
/// Instances that need no search are answered directly, as are TAR
/// instances with a frozen endpoint: a maximal clique of size exactly `k`.
pub fn solve(inst: &Instance<'_>, opts: &SolveOptions<'_>) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let kind = match opts.solver {
        Solver::Exact => SolverKind::Exact,
        Solver::Mcg => SolverKind::Mcg,
        Solver::Chordal => SolverKind::Chordal,
        Solver::Auto => {
            if chordal::check_chordal(inst.graph()).is_ok() {
                SolverKind::Chordal
            } else if opts.td.is_some() {
                SolverKind::Exact
            } else {
                SolverKind::Mcg
            }
        }
    };
    if let Some(decision) = inst.trivial_decision() {
        return Ok(SolveResult::decided(inst, decision, kind, started));
    }
    let tar = match inst.rule() {
        Rule::Tar(_) => inst.clone(),
        Rule::Ts => reduced(ts_to_tar(inst)),
        Rule::Tj => reduced(tj_to_tar(inst)),
    };
    if tar.has_frozen_endpoint() {
        return Ok(SolveResult::decided(inst, Decision::FrozenMaximal, kind, started));
    }

    let result = match kind {
        SolverKind::Exact => {
            // The exact solver handles TJ and TS natively.
            let eo = ExactOptions { budget: opts.budget, max_size: None };
            match opts.td {
                Some(td) => exhaustive::solve_exact_with_td(inst, td, &eo)?,
                None => exhaustive::solve_exact(inst, &eo)?,
            }
        }
        SolverKind::Mcg => {
            let res = match mcg::solve_mcg(&tar, opts.mcg_budget) {
                Err(McgError::BudgetExceeded { .. }) if opts.solver == Solver::Auto => {
                    let eo = ExactOptions { budget: opts.budget, max_size: None };
                    exhaustive::solve_exact(inst, &eo)?
                }
                other => other?,
            };
            lift(res, inst, &tar)
        }
        SolverKind::Chordal => {
            let co = ChordalOptions { with_sequence: opts.with_sequence, ..Default::default() };
            lift(chordal::solve_chordal(&tar, &co)?, inst, &tar)
        }
    };
    let mut result = result;
    if !opts.with_sequence {
        result.sequence = None;
    }
    result.stats.elapsed = started.elapsed();
    Ok(result)
}

fn reduced<'g>(red: Result<Reduction<'g>, crate::rules::RuleError>) -> Instance<'g> {
    match red {
        Ok(Reduction::Reduced(inst)) => inst,
        // Size mismatches were already answered by the trivial decision.
        _ => unreachable!("reduction of a size-consistent TJ/TS instance"),
    }
}

fn lift(res: SolveResult, original: &Instance<'_>, tar: &Instance<'_>) -> SolveResult {
    if res.solver == SolverKind::Exact || original.rule() == tar.rule() {
        return res;
    }
    res.from_tar(original, tar.rule().threshold().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rules::validate_sequence;
    use crate::set::VertexSet;

    fn c<const N: usize>(v: [usize; N]) -> VertexSet {
        VertexSet::from(v)
    }

    fn three_triangles() -> Graph {
        Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn auto_picks_chordal_for_paths() {
        let p4 = Graph::path(4);
        let inst = Instance::new(&p4, c([0]), c([3]), Rule::Tar(1)).unwrap();
        let res = solve(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(res.solver, SolverKind::Chordal);
        assert_eq!(res.distance, Some(6));
        assert!(res.shortest);
    }

    #[test]
    fn auto_avoids_chordal_on_cycles() {
        let c4 = Graph::cycle(4);
        let inst = Instance::new(&c4, c([0]), c([2]), Rule::Tar(1)).unwrap();
        let res = solve(&inst, &SolveOptions::default()).unwrap();
        assert_ne!(res.solver, SolverKind::Chordal);
        assert!(res.reachable);
    }

    #[test]
    fn frozen_endpoint_is_no() {
        let d = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let inst = Instance::new(&d, c([0, 1, 2]), c([0, 1, 3]), Rule::Tar(3)).unwrap();
        for solver in [Solver::Auto, Solver::Exact, Solver::Mcg, Solver::Chordal] {
            let res = solve(&inst, &SolveOptions { solver, ..Default::default() }).unwrap();
            assert!(!res.reachable);
            assert_eq!(res.decision, Some(Decision::FrozenMaximal));
        }
    }

    #[test]
    fn ts_and_tj_are_halved() {
        let g = three_triangles();
        for (rule, threshold, expected) in [(Rule::Ts, 2, 3), (Rule::Tj, 1, 2)] {
            let inst = Instance::new(&g, c([0, 1]), c([3, 4]), rule).unwrap();
            for solver in [Solver::Exact, Solver::Chordal] {
                let res = solve(&inst, &SolveOptions { solver, ..Default::default() }).unwrap();
                assert_eq!(res.distance, Some(expected), "{rule} {solver:?}");
                let seq = res.sequence.as_ref().unwrap();
                assert_eq!(seq.len(), expected);
                assert_eq!(validate_sequence(&inst, seq), Ok(()));
                if solver == Solver::Chordal {
                    assert_eq!(res.tar_threshold, Some(threshold));
                }
            }
            let res = solve(&inst, &SolveOptions { solver: Solver::Mcg, ..Default::default() }).unwrap();
            assert!(!res.shortest);
            let seq = res.sequence.as_ref().unwrap();
            assert_eq!(validate_sequence(&inst, seq), Ok(()));
            assert_eq!(res.distance, Some(seq.len()));
        }
    }

    #[test]
    fn sequence_can_be_skipped() {
        let p4 = Graph::path(4);
        let inst = Instance::new(&p4, c([0]), c([3]), Rule::Tar(1)).unwrap();
        let opts = SolveOptions { with_sequence: false, ..Default::default() };
        let res = solve(&inst, &opts).unwrap();
        assert_eq!(res.distance, Some(6));
        assert!(res.sequence.is_none());
    }

    #[test]
    fn chordal_rejects_non_chordal() {
        let c4 = Graph::cycle(4);
        let inst = Instance::new(&c4, c([0]), c([2]), Rule::Tar(1)).unwrap();
        let err = solve(&inst, &SolveOptions { solver: Solver::Chordal, ..Default::default() });
        assert!(matches!(err, Err(SolveError::Chordal(ChordalError::NotChordal { .. }))));
    }
}
