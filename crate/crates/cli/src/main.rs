use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cliquereconf::crosscheck::{self, Config, Fault};
use cliquereconf::formats::{format_sequence, parse_instance, parse_sequence, FormatError, InstanceSpec};
use cliquereconf::td::{parse_td, TdError};
use cliquereconf::{gen, parse_graph, solve, validate_sequence, Graph, GraphError, Rule, RuleError, SolveError, SolveOptions, Solver};
use thiserror::Error;

mod render;

#[derive(Parser)]
#[command(name = "cliquereconf", version, about = "Clique reconfiguration under TAR, TJ and TS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide reachability and find a reconfiguration sequence.
    Solve(SolveArgs),
    /// Validate a sequence file against an instance.
    Check(CheckArgs),
    /// Generate a random graph and instance.
    Gen(GenArgs),
    /// Compare the fast solvers and reductions against exact search.
    Crosscheck(CrosscheckArgs),
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    solver: SolverArg,
    #[arg(long)]
    json: bool,
    /// Clique budget for exact search.
    #[arg(long, default_value_t = cliquereconf::exhaustive::DEFAULT_NODE_BUDGET)]
    budget: usize,
    /// Maximal clique budget for the maximal-clique graph.
    #[arg(long, default_value_t = cliquereconf::mcg::DEFAULT_CLIQUE_BUDGET)]
    mcg_budget: usize,
    /// Tree decomposition (PACE `.td`) used to enumerate cliques.
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long)]
    no_sequence: bool,
    /// Also write the sequence to this file.
    #[arg(long)]
    sequence_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Exact,
    Mcg,
    Chordal,
    Auto,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Exact => Solver::Exact,
            SolverArg::Mcg => Solver::Mcg,
            SolverArg::Chordal => Solver::Chordal,
            SolverArg::Auto => Solver::Auto,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    graph: PathBuf,
    instance: PathBuf,
    sequence: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Chordal,
    Interval,
    Gnp,
    Grid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Tar,
    Tj,
    Ts,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Output prefix; writes `<out>.graph` and `<out>.inst`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability for gnp.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Attachment size cap for chordal.
    #[arg(long, default_value_t = 4)]
    max_attach: usize,
    /// Probability of a new component for chordal.
    #[arg(long, default_value_t = 0.0)]
    p_isolated: f64,
    /// Longest interval for interval graphs.
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    /// Grid rows; columns come from `--n`.
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, value_enum, default_value_t = RuleArg::Tar)]
    rule: RuleArg,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[arg(long, default_value_t = 500)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    min_n: usize,
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    #[arg(long, default_value_t = 12)]
    max_chordal_n: usize,
    /// Directory for minimized reproducers.
    #[arg(long, default_value = "crosscheck-failures")]
    reproducers: PathBuf,
    #[arg(long, value_enum, default_value_t = FaultArg::None, hide = true)]
    fault: FaultArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    None,
    ReversedTieBreak,
    ThresholdShift,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: {source}")]
    Td { path: PathBuf, source: TdError },
    #[error("instance: {0}")]
    Instance(#[from] RuleError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?).map_err(|source| CliError::Graph { path: path.to_owned(), source })
}

fn load_instance(path: &Path) -> Result<InstanceSpec, CliError> {
    parse_instance(&read(path)?).map_err(|source| CliError::Format { path: path.to_owned(), source })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => run_solve(&args),
        Command::Check(args) => run_check(&args),
        Command::Gen(args) => run_gen(&args),
        Command::Crosscheck(args) => run_crosscheck(&args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
}

fn run_solve(args: &SolveArgs) -> Result<bool, CliError> {
    let g = load_graph(&args.graph)?;
    let spec = load_instance(&args.instance)?;
    let inst = spec.bind(&g)?;
    let td = match &args.td {
        Some(path) => {
            let td = parse_td(&read(path)?).map_err(|source| CliError::Td { path: path.clone(), source })?;
            td.validate(&g).map_err(|source| CliError::Td { path: path.clone(), source })?;
            Some(td)
        }
        None => None,
    };
    let opts = SolveOptions {
        solver: args.solver.into(),
        budget: args.budget,
        mcg_budget: args.mcg_budget,
        with_sequence: !args.no_sequence || args.sequence_out.is_some(),
        td: td.as_ref(),
    };
    let mut result = solve(&inst, &opts)?;
    if let (Some(path), Some(seq)) = (&args.sequence_out, &result.sequence) {
        write(path, &format_sequence(seq))?;
    }
    if args.no_sequence {
        result.sequence = None;
    }
    let text = if args.json {
        render::solve_json(&inst, &result)
    } else {
        render::solve_text(&inst, &result)
    };
    emit(&text);
    Ok(result.reachable)
}

fn run_check(args: &CheckArgs) -> Result<bool, CliError> {
    let g = load_graph(&args.graph)?;
    let spec = load_instance(&args.instance)?;
    let inst = spec.bind(&g)?;
    let seq = parse_sequence(&read(&args.sequence)?, spec.rule)
        .map_err(|source| CliError::Format { path: args.sequence.clone(), source })?;
    let verdict = validate_sequence(&inst, &seq);
    emit(&render::check(&verdict, &seq, args.json));
    Ok(verdict.is_ok())
}

fn run_gen(args: &GenArgs) -> Result<bool, CliError> {
    let invalid = |msg: &str| Err(CliError::Invalid(msg.to_owned()));
    if args.n == 0 {
        return invalid("--n must be positive");
    }
    if !(0.0..=1.0).contains(&args.p) || !(0.0..=1.0).contains(&args.p_isolated) {
        return invalid("probabilities must lie in [0, 1]");
    }
    if args.kind == GenKind::Chordal && args.max_attach == 0 {
        return invalid("--max-attach must be positive");
    }
    if args.kind == GenKind::Interval && args.max_len == 0 {
        return invalid("--max-len must be positive");
    }
    if args.kind == GenKind::Grid && args.rows == 0 {
        return invalid("--rows must be positive");
    }
    let mut rng = gen::rng(args.seed);
    let g = match args.kind {
        GenKind::Chordal => gen::chordal(args.n, args.max_attach, args.p_isolated, &mut rng),
        GenKind::Interval => gen::interval(args.n, args.max_len, &mut rng),
        GenKind::Gnp => gen::gnp(args.n, args.p, &mut rng),
        GenKind::Grid => gen::grid(args.rows, args.n),
    };
    let inst = match args.rule {
        RuleArg::Tar => Some(gen::random_tar_instance(&g, &mut rng)),
        RuleArg::Tj => gen::random_equal_size_instance(&g, Rule::Tj, &mut rng),
        RuleArg::Ts => gen::random_equal_size_instance(&g, Rule::Ts, &mut rng),
    };
    let Some(inst) = inst else {
        return invalid("no two cliques of equal size found; try another seed");
    };
    let graph_path = with_suffix(&args.out, ".graph");
    let inst_path = with_suffix(&args.out, ".inst");
    write(&graph_path, &g.to_dimacs())?;
    write(&inst_path, &InstanceSpec::from(&inst).to_text())?;
    emit(&format!("{}\n{}\n", graph_path.display(), inst_path.display()));
    Ok(true)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    name.into()
}

fn run_crosscheck(args: &CrosscheckArgs) -> Result<bool, CliError> {
    if args.min_n == 0 || args.min_n > args.max_n {
        return Err(CliError::Invalid("need 0 < --min-n <= --max-n".into()));
    }
    let config = Config {
        count: args.count,
        seed: args.seed,
        min_n: args.min_n,
        max_n: args.max_n,
        max_chordal_n: args.max_chordal_n.max(1),
        fault: match args.fault {
            FaultArg::None => Fault::None,
            FaultArg::ReversedTieBreak => Fault::ReversedTieBreak,
            FaultArg::ThresholdShift => Fault::ThresholdShift,
        },
    };
    let report = crosscheck::run(&config);
    let mut out = report.summary();
    for d in &report.discrepancies {
        let (graph, inst) = crosscheck::write_reproducer(&args.reproducers, d)
            .map_err(|source| CliError::Io { path: args.reproducers.clone(), source })?;
        out.push_str(&format!(
            "{} seed {}: {}\n  reproducer {} {}\n",
            d.battery,
            d.seed,
            d.detail,
            graph.display(),
            inst.display()
        ));
    }
    emit(&out);
    Ok(report.is_clean())
}
