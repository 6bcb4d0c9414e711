use std::fmt::Write;

use cliquereconf::{Instance, ReconfSequence, SolveResult, Violation};
use serde::Serialize;

#[derive(Serialize)]
struct SolveJson {
    answer: &'static str,
    reachable: bool,
    distance: Option<usize>,
    shortest: bool,
    solver: &'static str,
    rule: String,
    tar_threshold: Option<usize>,
    decision: Option<&'static str>,
    sequence: Option<Vec<Vec<usize>>>,
    stats: StatsJson,
}

#[derive(Serialize)]
struct StatsJson {
    nodes: usize,
    edges: usize,
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct CheckJson {
    ok: bool,
    steps: usize,
    /// 1-based line of the offending clique.
    line: Option<usize>,
    reason: Option<String>,
}

fn one_based(seq: &ReconfSequence) -> Vec<Vec<usize>> {
    seq.cliques.iter().map(|c| c.iter().map(|v| v + 1).collect()).collect()
}

pub fn solve_json(inst: &Instance<'_>, res: &SolveResult) -> String {
    let doc = SolveJson {
        answer: res.answer(),
        reachable: res.reachable,
        distance: res.distance,
        shortest: res.shortest,
        solver: res.solver.name(),
        rule: inst.rule().to_string(),
        tar_threshold: res.tar_threshold,
        decision: res.decision.map(|d| d.code()),
        sequence: res.sequence.as_ref().map(one_based),
        stats: StatsJson {
            nodes: res.stats.nodes,
            edges: res.stats.edges,
            elapsed_ms: res.stats.elapsed.as_secs_f64() * 1e3,
        },
    };
    let mut out = serde_json::to_string(&doc).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn solve_text(inst: &Instance<'_>, res: &SolveResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "answer {}", res.answer());
    match res.distance {
        Some(d) => {
            let _ = writeln!(out, "distance {d}{}", if res.shortest { "" } else { " (not shortest)" });
        }
        None => out.push_str("distance inf\n"),
    }
    let _ = writeln!(out, "solver {}", res.solver);
    let _ = writeln!(out, "rule {}", inst.rule());
    if let Some(k) = res.tar_threshold {
        let _ = writeln!(out, "tar_threshold {k}");
    }
    if let Some(d) = res.decision {
        let _ = writeln!(out, "decision {}", d.code());
    }
    if let Some(seq) = &res.sequence {
        let _ = writeln!(out, "sequence {}", seq.cliques.len());
        for clique in one_based(seq) {
            let line: Vec<String> = clique.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    out
}

pub fn check(verdict: &Result<(), Violation>, seq: &ReconfSequence, json: bool) -> String {
    if json {
        let doc = CheckJson {
            ok: verdict.is_ok(),
            steps: seq.len(),
            line: verdict.as_ref().err().map(|v| v.index + 1),
            reason: verdict.as_ref().err().map(|v| v.reason.to_string()),
        };
        let mut out = serde_json::to_string(&doc).expect("plain data serializes");
        out.push('\n');
        return out;
    }
    match verdict {
        Ok(()) => format!("ok {} steps\n", seq.len()),
        Err(v) => format!("violation at clique {}: {}\n", v.index + 1, v.reason),
    }
}
