//! Clique reconfiguration.
//!
//! Given a graph, two cliques and a rule, decide whether one clique can be
//! turned into the other by single-vertex moves that keep a clique at every
//! step, and find a shortest such sequence.
//!
//! * [`rules`] defines the rules, sequence validation and the reductions
//!   between rules.
//! * [`exhaustive`] searches the reconfiguration graph exactly.
//! * [`mcg`] decides TAR reachability through intersecting maximal cliques.
//! * [`chordal`] finds shortest sequences on chordal graphs in linear time.
//! * [`solve()`] picks one of them.
//!
//! ```
//! use cliquereconf::{solve, Graph, Instance, Rule, SolveOptions, VertexSet};
//!
//! let path = Graph::path(4);
//! let inst = Instance::new(&path, VertexSet::from([0]), VertexSet::from([3]), Rule::Tar(1))?;
//! let result = solve(&inst, &SolveOptions::default())?;
//! assert_eq!(result.distance, Some(6));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod chordal;
pub mod crosscheck;
pub mod exhaustive;
pub mod formats;
pub mod gen;
pub mod graph;
pub mod mcg;
pub mod rules;
pub mod set;
pub mod solve;
pub mod td;

pub use graph::{parse_graph, Graph, GraphError};
pub use rules::{validate_sequence, Decision, Instance, ReconfSequence, Rule, RuleError, Violation};
pub use set::{Clique, VertexSet};
pub use solve::{solve, SolveError, SolveOptions, SolveResult, Solver, SolverKind};
