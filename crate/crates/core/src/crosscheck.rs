//! Randomized batteries comparing the fast solvers and the rule reductions
//! against exact search.
//!
//! Every discrepancy comes with a reproducer shrunk by deleting vertices
//! outside the endpoints while the check keeps failing.

use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use crate::chordal::{self, ChordalOptions, TieBreak};
use crate::exhaustive::{solve_exact, ExactOptions};
use crate::formats::InstanceSpec;
use crate::gen;
use crate::graph::Graph;
use crate::mcg::{self, DEFAULT_CLIQUE_BUDGET};
use crate::rules::{tar_to_tj, tar_to_ts, validate_sequence, Instance, Reduction, Rule};
use crate::set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Battery {
    /// Maximal-clique graph reachability against exact search.
    Oracle,
    /// TS and TJ distances against half the TAR distances.
    RuleEquivalence,
    /// TAR→TS and TAR→TJ reductions preserve reachability.
    Reductions,
    /// Chordal distances and sequences against exact search.
    Chordal,
}

impl Battery {
    pub const ALL: [Battery; 4] = [Battery::Oracle, Battery::RuleEquivalence, Battery::Reductions, Battery::Chordal];

    pub fn name(&self) -> &'static str {
        match self {
            Battery::Oracle => "oracle",
            Battery::RuleEquivalence => "rule-equivalence",
            Battery::Reductions => "reductions",
            Battery::Chordal => "chordal",
        }
    }
}

impl fmt::Display for Battery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deliberate faults for checking that the batteries notice bugs, or
/// correctly ignore harmless changes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// The chordal greedy breaks ties towards the highest index.
    ReversedTieBreak,
    /// TJ is compared against TAR(k) instead of TAR(k - 1).
    ThresholdShift,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub count: usize,
    pub seed: u64,
    pub min_n: usize,
    pub max_n: usize,
    /// Upper bound on vertices for chordal graphs.
    pub max_chordal_n: usize,
    pub fault: Fault,
}

impl Default for Config {
    fn default() -> Self {
        Config { count: 500, seed: 0, min_n: 3, max_n: 10, max_chordal_n: 12, fault: Fault::None }
    }
}

#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub battery: Battery,
    pub seed: u64,
    pub detail: String,
    pub graph: Graph,
    pub instance: InstanceSpec,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    /// Instances checked per battery, in `Battery::ALL` order.
    pub checked: [usize; 4],
    /// Sorted by seed, then battery.
    pub discrepancies: Vec<Discrepancy>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (battery, count) in Battery::ALL.iter().zip(self.checked) {
            let bad = self.discrepancies.iter().filter(|d| d.battery == *battery).count();
            out.push_str(&format!("{battery}: {count} instances, {bad} discrepancies\n"));
        }
        out.push_str(&format!("{} discrepancies\n", self.discrepancies.len()));
        out
    }
}

pub fn run(config: &Config) -> Report {
    let mut per_seed: Vec<(u64, [usize; 4], Vec<Discrepancy>)> = (0..config.count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = config.seed.wrapping_add(i);
            let (checked, found) = run_seed(config, seed);
            (seed, checked, found)
        })
        .collect();
    per_seed.sort_by_key(|(seed, _, _)| *seed);
    let mut report = Report::default();
    for (_, checked, found) in per_seed {
        for (total, c) in report.checked.iter_mut().zip(checked) {
            *total += c;
        }
        report.discrepancies.extend(found);
    }
    report
}

fn run_seed(config: &Config, seed: u64) -> ([usize; 4], Vec<Discrepancy>) {
    let mut rng = gen::rng(seed);
    let mut checked = [0; 4];
    let mut found = Vec::new();
    let mut record = |battery: Battery, g: &Graph, spec: InstanceSpec, checked: &mut [usize; 4]| {
        checked[battery as usize] += 1;
        if let Err(detail) = check(battery, config.fault, g, &spec) {
            let (graph, instance) = minimize(battery, config.fault, g, &spec);
            found.push(Discrepancy { battery, seed, detail, graph, instance });
        }
    };

    let n = rng.gen_range(config.min_n..=config.max_n.max(config.min_n));
    let p = [0.3, 0.5, 0.7][rng.gen_range(0..3)];
    let g = gen::gnp(n, p, &mut rng);

    let base = gen::random_tar_instance(&g, &mut rng);
    for k in 0..=base.source().len().min(base.target().len()) {
        let spec = InstanceSpec { rule: Rule::Tar(k), ..InstanceSpec::from(&base) };
        record(Battery::Oracle, &g, spec.clone(), &mut checked);
        record(Battery::Reductions, &g, spec, &mut checked);
    }
    // A maximal clique at its own size as threshold exercises the frozen
    // endpoint shortcut.
    let frozen = gen::random_maximal_clique(&g, &mut rng);
    let other = gen::random_clique(&g, 0.8, &mut rng);
    if other.len() >= frozen.len() {
        let spec = InstanceSpec { rule: Rule::Tar(frozen.len()), source: frozen, target: other };
        record(Battery::Reductions, &g, spec, &mut checked);
    }

    for rule in [Rule::Ts, Rule::Tj] {
        if let Some(inst) = gen::random_equal_size_instance(&g, rule, &mut rng) {
            record(Battery::RuleEquivalence, &g, InstanceSpec::from(&inst), &mut checked);
        }
    }

    let cn = rng.gen_range(config.min_n..=config.max_chordal_n.max(config.min_n));
    let cg = gen::chordal(cn, 4, 0.05, &mut rng);
    let base = gen::random_tar_instance(&cg, &mut rng);
    for k in 0..=base.source().len().min(base.target().len()) {
        let spec = InstanceSpec { rule: Rule::Tar(k), ..InstanceSpec::from(&base) };
        record(Battery::Chordal, &cg, spec, &mut checked);
    }
    (checked, found)
}

fn exact_distance(inst: &Instance<'_>) -> Result<Option<usize>, String> {
    solve_exact(inst, &ExactOptions::default())
        .map(|r| r.distance)
        .map_err(|e| e.to_string())
}

fn show(d: Option<usize>) -> String {
    d.map_or("inf".into(), |d| d.to_string())
}

/// Runs one battery's check on one instance; `Err` describes the mismatch.
pub fn check(battery: Battery, fault: Fault, g: &Graph, spec: &InstanceSpec) -> Result<(), String> {
    let inst = spec.bind(g).map_err(|e| e.to_string())?;
    match battery {
        Battery::Oracle => {
            let exact = exact_distance(&inst)?.is_some();
            let res = mcg::solve_mcg(&inst, DEFAULT_CLIQUE_BUDGET).map_err(|e| e.to_string())?;
            if res.reachable != exact {
                return Err(format!("mcg says {}, exact says {}", res.answer(), if exact { "YES" } else { "NO" }));
            }
            if let Some(seq) = &res.sequence {
                validate_sequence(&inst, seq).map_err(|v| format!("mcg witness invalid: {v}"))?;
            }
        }
        Battery::RuleEquivalence => {
            let size = inst.source().len();
            let threshold = match (inst.rule(), fault) {
                (Rule::Ts, _) => size,
                (Rule::Tj, Fault::ThresholdShift) => size,
                (Rule::Tj, _) => size.saturating_sub(1),
                (Rule::Tar(_), _) => return Err("rule equivalence needs a TJ or TS instance".into()),
            };
            let direct = exact_distance(&inst)?;
            let tar = exact_distance(&inst.with_rule(Rule::Tar(threshold)))?;
            if tar.map(|d| d / 2) != direct || tar.map_or(false, |d| d % 2 != 0) {
                return Err(format!(
                    "{} distance {} but TAR({threshold}) distance {}",
                    inst.rule(),
                    show(direct),
                    show(tar)
                ));
            }
        }
        Battery::Reductions => {
            let expected = exact_distance(&inst)?.is_some();
            for (name, red) in [("tar_to_ts", tar_to_ts(&inst)), ("tar_to_tj", tar_to_tj(&inst))] {
                let got = match red.map_err(|e| e.to_string())? {
                    Reduction::Reduced(r) => exact_distance(&r)?.is_some(),
                    Reduction::Decided(d) => d.is_yes(),
                };
                if got != expected {
                    return Err(format!("{name} changes the answer"));
                }
            }
        }
        Battery::Chordal => {
            let tie_break = match fault {
                Fault::ReversedTieBreak => TieBreak::Highest,
                _ => TieBreak::Lowest,
            };
            let opts = ChordalOptions { with_sequence: true, tie_break };
            let res = chordal::solve_chordal(&inst, &opts).map_err(|e| e.to_string())?;
            let exact = exact_distance(&inst)?;
            if res.distance != exact {
                return Err(format!("chordal distance {} but exact {}", show(res.distance), show(exact)));
            }
            if let Some(seq) = &res.sequence {
                validate_sequence(&inst, seq).map_err(|v| format!("chordal sequence invalid: {v}"))?;
                if !seq.has_contiguous_membership() {
                    return Err("chordal sequence re-adds a vertex".into());
                }
            }
        }
    }
    Ok(())
}

/// Deletes vertices outside the endpoints while the check still fails.
pub fn minimize(battery: Battery, fault: Fault, g: &Graph, spec: &InstanceSpec) -> (Graph, InstanceSpec) {
    let mut graph = g.clone();
    let mut spec = spec.clone();
    let mut v = graph.vertex_count();
    while v > 0 {
        v -= 1;
        if spec.source.contains(v) || spec.target.contains(v) {
            continue;
        }
        let n = graph.vertex_count();
        let keep: VertexSet = (0..n).filter(|&w| w != v).collect();
        let (smaller, _) = graph.induced_subgraph(&keep).expect("in range");
        let shift = |set: &VertexSet| -> VertexSet { set.iter().map(|w| if w > v { w - 1 } else { w }).collect() };
        let candidate = InstanceSpec { rule: spec.rule, source: shift(&spec.source), target: shift(&spec.target) };
        if check(battery, fault, &smaller, &candidate).is_err() {
            graph = smaller;
            spec = candidate;
        }
    }
    (graph, spec)
}

/// Writes `<battery>-<seed>.graph` and `<battery>-<seed>.inst` into `dir`.
pub fn write_reproducer(dir: &Path, d: &Discrepancy) -> io::Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let stem = format!("{}-{}", d.battery, d.seed);
    let graph_path = dir.join(format!("{stem}.graph"));
    let inst_path = dir.join(format!("{stem}.inst"));
    std::fs::write(&graph_path, format!("c {}\n{}", d.detail, d.graph.to_dimacs()))?;
    std::fs::write(&inst_path, d.instance.to_text())?;
    Ok((graph_path, inst_path))
}
