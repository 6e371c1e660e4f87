//! The `hatguess` command line.
//!
//! Exit codes: 0 wins/solvable/true, 1 loses/unsolvable/false,
//! 2 timeout/not-found, 3 usage or I/O error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use hatguess::formats::{
    parse_graph, parse_matrix, parse_matrix_file, parse_strategy, verdict_line, view_key, write_graph,
    write_linear_strategy, write_matrix, write_table_strategy, StrategyFile,
};
use hatguess::saturated::{random_saturated, search_saturated, SearchOutcome};
use hatguess::solver::{
    decide_solvable_with, hat_guessing_number_with, Branching, DEFAULT_LLL_ITERS, DEFAULT_NODE_BUDGET,
    DEFAULT_SOLVE_TIMEOUT,
};
use hatguess::strategies::DEFAULT_VERIFY_WORK;
use hatguess::{
    bipartite_from_saturated, build_graph, c4_linear_example, complete_graph_strategy, cycle_minus_edge_adversary,
    decide_linear_solvable, directed_cycle_strategy, find_all_bad_colorings, is_t_saturated, linear_verify,
    lll_bad_coloring, min_rank_bruteforce, multipartite_partial, multipartite_strategy, robust_bad_coloring,
    tree_reduction, verify_wins_par, Budget, Color, FieldSpec, GraphSpec, LinearDecision, MinRank, PartialColoringSet,
    RobustOutcome, Saturation, SightGraph, SolveOutcome, TableStrategy, Verdict,
};

pub const EXIT_TRUE: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_UNDECIDED: u8 = 2;
pub const EXIT_ERROR: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] hatguess::Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult = Result<u8, CliError>;

#[derive(Debug, Parser)]
#[command(name = "hatguess", version, about = "Hat guessing games on graphs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Limits {
    /// Work limit, in the unit the subcommand counts (search nodes,
    /// colorings or enumerated matrices).
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout_secs: Option<u64>,
}

impl Limits {
    fn budget(&self, work: u64, time: Option<Duration>) -> Budget {
        Budget::new(
            self.budget_nodes.unwrap_or(work),
            self.timeout_secs.map(Duration::from_secs).or(time),
        )
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Lex,
    Fewest,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a graph or a strategy.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a strategy against every coloring.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
        /// Defaults to the strategy's own q.
        #[arg(long)]
        q: Option<usize>,
        /// List every bad coloring instead of the first.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        limits: Limits,
    },
    /// Decide q-solvability exactly.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = BranchArg::Lex)]
        branching: BranchArg,
        /// Where to write the witness strategy.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Hat guessing number up to q-max.
    Hg {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q_max: usize,
        #[arg(long, value_enum, default_value_t = BranchArg::Lex)]
        branching: BranchArg,
        #[command(flatten)]
        limits: Limits,
    },
    /// Decide whether some affine strategy over F_q wins.
    LinearDecide {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Check a linear strategy against every coloring.
    LinearVerify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Build or check t-saturated matrices.
    #[command(subcommand)]
    Saturated(SaturatedCmd),
    /// Search for colorings that defeat every vertex.
    #[command(subcommand)]
    Adversary(AdversaryCmd),
    /// Minimum rank over F_q of a matrix fitting the graph.
    Minrank {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        limits: Limits,
    },
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// Write a standard graph: complete:N, path:N, cycle:N, star:K,
    /// multipartite:A,B,..., dicycle:A,B,C,..., cycle-minus-edge:N.
    Graph {
        family: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sum-mod-n strategy on K_n.
    Complete {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        outs: Outputs,
    },
    /// K_{m,n} strategy from an (m+1)-saturated n x q^m matrix.
    Bipartite {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        outs: Outputs,
    },
    /// K_{m,...,m,n} strategy from a t-saturated matrix, t <= m^(r-1).
    Multipartite {
        #[arg(long)]
        m: usize,
        /// Number of parts, counting the size-n part.
        #[arg(long)]
        r: usize,
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        outs: Outputs,
    },
    /// K_{m,...,m} strategy correct on the colorings listed in a file, one
    /// per line as space-separated colors.
    Partial {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        colorings: PathBuf,
        #[command(flatten)]
        outs: Outputs,
    },
    /// Blow-up of the directed cycle; one matrix per part except the last.
    DirectedCycle {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long = "matrix", required = true)]
        matrices: Vec<PathBuf>,
        #[command(flatten)]
        outs: Outputs,
    },
    /// The C_4 linear strategy over F_3.
    C4Example {
        #[command(flatten)]
        outs: Outputs,
    },
    /// Uniformly random table strategy.
    Random {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Delete a degree-one vertex from a winning strategy (q >= 3).
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[command(flatten)]
        outs: Outputs,
        #[command(flatten)]
        limits: Limits,
    },
}

#[derive(Debug, Args)]
struct Outputs {
    /// Strategy output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the strategy's graph here.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum SaturatedCmd {
    /// Randomized alteration construction.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for the fewest rows.
    Search {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Check the saturation level of a matrix file.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        /// Defaults to the level claimed in the file.
        #[arg(long)]
        t: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum AdversaryCmd {
    /// Sequential adversary on the cycle with arc 0 -> n-1 removed, q = 3.
    CycleMinusEdge {
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Moser-Tardos resampling.
    Lll {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_LLL_ITERS)]
        max_iters: u64,
    },
    /// Colors for the vertices seeing at most k others that defeat them
    /// whatever the rest wear.
    Robust {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q_low: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        limits: Limits,
    },
}

/// Parses `argv` (including the program name) and runs it.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_TRUE };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes via a temporary file in the target directory and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => out.write_all(contents.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn say(out: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn load_graph(path: &Path) -> Result<SightGraph, CliError> {
    Ok(parse_graph(&read(path)?)?)
}

fn load_strategy(path: &Path) -> Result<StrategyFile, CliError> {
    Ok(parse_strategy(&read(path)?)?)
}

fn load_table(path: &Path) -> Result<TableStrategy, CliError> {
    match load_strategy(path)? {
        StrategyFile::Table(t) => Ok(t),
        StrategyFile::Linear(_) => Err(CliError::Usage(format!(
            "{}: expected a table strategy",
            path.display()
        ))),
    }
}

fn coloring_text(x: &[Color]) -> String {
    view_key(x)
}

pub fn parse_family(text: &str) -> Result<GraphSpec, CliError> {
    let bad = || CliError::Usage(format!("unknown graph family `{text}`"));
    let (name, args) = text.split_once(':').ok_or_else(bad)?;
    let nums = args
        .split(',')
        .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<usize>, _>>()?;
    let one = || match nums.as_slice() {
        [k] => Ok(*k),
        _ => Err(bad()),
    };
    Ok(match name {
        "complete" => GraphSpec::Complete(one()?),
        "path" => GraphSpec::Path(one()?),
        "cycle" => GraphSpec::Cycle(one()?),
        "star" => GraphSpec::Star(one()?),
        "cycle-minus-edge" => GraphSpec::CycleMinusEdge(one()?),
        "multipartite" => GraphSpec::CompleteMultipartite(nums),
        "dicycle" => GraphSpec::DirectedCycleBlowup(nums),
        _ => return Err(bad()),
    })
}

fn branching(b: BranchArg) -> Branching {
    match b {
        BranchArg::Lex => Branching::Lex,
        BranchArg::Fewest => Branching::FewestOptions,
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Construct(c) => construct(c, out),
        Command::Verify {
            graph,
            strategy,
            q,
            all,
            workers,
            limits,
        } => {
            let g = load_graph(&graph)?;
            let budget = limits.budget(DEFAULT_VERIFY_WORK, None);
            let verdict = match load_strategy(&strategy)? {
                StrategyFile::Table(s) => {
                    let q = q.unwrap_or(s.q());
                    if all {
                        let bad = find_all_bad_colorings(&g, &s, q, budget)?;
                        for x in &bad {
                            say(out, &format!("bad {}", coloring_text(x)))?;
                        }
                        match bad.into_iter().next() {
                            None => Verdict::Wins,
                            Some(x) => Verdict::Loses(x),
                        }
                    } else {
                        verify_wins_par(&g, &s, q, budget, workers)?
                    }
                }
                StrategyFile::Linear(s) => {
                    if q.is_some_and(|q| q != s.field().q()) {
                        return Err(CliError::Usage("--q differs from the strategy's field".into()));
                    }
                    linear_verify(&g, &s, budget)?
                }
            };
            report_verdict(&verdict, out)
        }
        Command::LinearVerify {
            graph,
            strategy,
            limits,
        } => {
            let g = load_graph(&graph)?;
            let StrategyFile::Linear(s) = load_strategy(&strategy)? else {
                return Err(CliError::Usage(format!(
                    "{}: expected a linear strategy",
                    strategy.display()
                )));
            };
            report_verdict(&linear_verify(&g, &s, limits.budget(DEFAULT_VERIFY_WORK, None))?, out)
        }
        Command::Solve {
            graph,
            q,
            branching: b,
            out: path,
            limits,
        } => {
            let g = load_graph(&graph)?;
            let budget = limits.budget(DEFAULT_NODE_BUDGET, Some(DEFAULT_SOLVE_TIMEOUT));
            let v = decide_solvable_with(&g, q, budget, branching(b))?;
            if let (SolveOutcome::Solvable(s), Some(p)) = (&v.outcome, &path) {
                write_atomic(p, &write_table_strategy(s))?;
            }
            say(out, &verdict_line(&v))?;
            Ok(match v.outcome {
                SolveOutcome::Solvable(_) => EXIT_TRUE,
                SolveOutcome::Unsolvable => EXIT_FALSE,
                SolveOutcome::Timeout => EXIT_UNDECIDED,
            })
        }
        Command::Hg {
            graph,
            q_max,
            branching: b,
            limits,
        } => {
            let g = load_graph(&graph)?;
            let budget = limits.budget(DEFAULT_NODE_BUDGET, Some(DEFAULT_SOLVE_TIMEOUT));
            let hg = hat_guessing_number_with(&g, q_max, budget, branching(b))?;
            for (q, v) in &hg.verdicts {
                say(out, &format!("q={q} {}", verdict_line(v)))?;
            }
            let timed_out = hg.verdicts.iter().any(|(_, v)| v.is_timeout());
            say(
                out,
                &format!("hg {} {}", hg.value, if hg.exact { "exact" } else { "lower-bound" }),
            )?;
            Ok(if timed_out { EXIT_UNDECIDED } else { EXIT_TRUE })
        }
        Command::LinearDecide {
            graph,
            q,
            workers,
            out: path,
            limits,
        } => {
            let g = load_graph(&graph)?;
            let field = FieldSpec::new(q)?;
            let report = decide_linear_solvable(&g, &field, limits.budget(u64::MAX, None), workers)?;
            let (label, code) = match &report.decision {
                LinearDecision::Solvable(s) => {
                    if let Some(p) = &path {
                        write_atomic(p, &write_linear_strategy(s))?;
                    }
                    ("solvable", EXIT_TRUE)
                }
                LinearDecision::Unsolvable => ("unsolvable", EXIT_FALSE),
                LinearDecision::Timeout => ("timeout", EXIT_UNDECIDED),
            };
            say(out, &format!("linear {label} matrices={}", report.matrices))?;
            Ok(code)
        }
        Command::Saturated(c) => saturated(c, out),
        Command::Adversary(c) => adversary(c, out),
        Command::Minrank { graph, q, limits } => {
            let g = load_graph(&graph)?;
            match min_rank_bruteforce(&g, &FieldSpec::new(q)?, limits.budget(u64::MAX, None))? {
                MinRank::Value(r) => {
                    say(out, &format!("minrank {r}"))?;
                    Ok(EXIT_TRUE)
                }
                MinRank::Timeout => {
                    say(out, "minrank timeout")?;
                    Ok(EXIT_UNDECIDED)
                }
            }
        }
    }
}

fn report_verdict(v: &Verdict, out: &mut dyn Write) -> CliResult {
    match v {
        Verdict::Wins => {
            say(out, "verdict wins")?;
            Ok(EXIT_TRUE)
        }
        Verdict::Loses(x) => {
            say(out, &format!("verdict loses witness={}", coloring_text(x)))?;
            Ok(EXIT_FALSE)
        }
        Verdict::Timeout => {
            say(out, "verdict timeout")?;
            Ok(EXIT_UNDECIDED)
        }
    }
}

fn write_construction(outs: &Outputs, graph: &SightGraph, strategy: &str, out: &mut dyn Write) -> CliResult {
    if let Some(p) = &outs.graph_out {
        write_atomic(p, &write_graph(graph))?;
    }
    emit(out, outs.out.as_deref(), strategy)?;
    Ok(EXIT_TRUE)
}

fn construct(c: Construct, out: &mut dyn Write) -> CliResult {
    match c {
        Construct::Graph { family, out: path } => {
            let g = build_graph(&parse_family(&family)?)?;
            emit(out, path.as_deref(), &write_graph(&g))?;
            Ok(EXIT_TRUE)
        }
        Construct::Complete { n, outs } => {
            let c = complete_graph_strategy(n)?;
            write_construction(&outs, &c.graph, &write_table_strategy(&c.strategy), out)
        }
        Construct::Bipartite { m, matrix, outs } => {
            let mat = parse_matrix(&read(&matrix)?)?;
            let c = bipartite_from_saturated(m, mat.n_rows(), mat.q(), &mat)?;
            write_construction(&outs, &c.graph, &write_table_strategy(&c.strategy), out)
        }
        Construct::Multipartite { m, r, matrix, outs } => {
            let mat = parse_matrix(&read(&matrix)?)?;
            let c = multipartite_strategy(m, r, mat.n_rows(), mat.q(), &mat)?;
            write_construction(&outs, &c.graph, &write_table_strategy(&c.strategy), out)
        }
        Construct::Partial {
            m,
            r,
            q,
            colorings,
            outs,
        } => {
            let text = read(&colorings)?;
            let words = text
                .lines()
                .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
                .map(|l| {
                    l.split_whitespace()
                        .map(|t| t.parse::<Color>())
                        .collect::<Result<Vec<Color>, _>>()
                        .map_err(|_| CliError::Usage(format!("bad coloring line `{l}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let set = PartialColoringSet::new(words, m * r, q)?;
            let c = multipartite_partial(m, r, q, &set)?;
            write_construction(&outs, &c.graph, &write_table_strategy(&c.strategy), out)
        }
        Construct::DirectedCycle { sizes, matrices, outs } => {
            let mats = matrices
                .iter()
                .map(|p| Ok(parse_matrix(&read(p)?)?))
                .collect::<Result<Vec<_>, CliError>>()?;
            let q = mats.first().map_or(0, |m| m.q());
            let c = directed_cycle_strategy(&sizes, q, &mats)?;
            write_construction(&outs, &c.graph, &write_table_strategy(&c.strategy), out)
        }
        Construct::C4Example { outs } => {
            let g = build_graph(&GraphSpec::Cycle(4))?;
            write_construction(&outs, &g, &write_linear_strategy(&c4_linear_example()), out)
        }
        Construct::Random {
            graph,
            q,
            seed,
            out: path,
        } => {
            let g = load_graph(&graph)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = TableStrategy::from_fn(&g, q, |_, _| rng.gen_range(0..q) as Color)?;
            emit(out, path.as_deref(), &write_table_strategy(&s))?;
            Ok(EXIT_TRUE)
        }
        Construct::Reduce {
            graph,
            strategy,
            vertex,
            outs,
            limits,
        } => {
            let g = load_graph(&graph)?;
            let s = load_table(&strategy)?;
            let red = tree_reduction(&g, &s, vertex, s.q(), limits.budget(DEFAULT_VERIFY_WORK, None))?;
            write_construction(&outs, &red.graph, &write_table_strategy(&red.strategy), out)
        }
    }
}

fn saturated(c: SaturatedCmd, out: &mut dyn Write) -> CliResult {
    match c {
        SaturatedCmd::Random {
            n,
            l,
            q,
            t,
            seed,
            out: path,
        } => match random_saturated(n, l, q, t, seed)? {
            Some(m) => {
                emit(out, path.as_deref(), &write_matrix(&m))?;
                Ok(EXIT_TRUE)
            }
            None => {
                say(out, "saturated not-found")?;
                Ok(EXIT_UNDECIDED)
            }
        },
        SaturatedCmd::Search {
            n_max,
            l,
            q,
            t,
            out: path,
            limits,
        } => match search_saturated(n_max, l, q, t, limits.budget(u64::MAX, None))? {
            SearchOutcome::Found(m) => {
                emit(out, path.as_deref(), &write_matrix(&m))?;
                Ok(EXIT_TRUE)
            }
            SearchOutcome::NotFound => {
                say(out, "saturated none")?;
                Ok(EXIT_FALSE)
            }
            SearchOutcome::Timeout => {
                say(out, "saturated timeout")?;
                Ok(EXIT_UNDECIDED)
            }
        },
        SaturatedCmd::Check { matrix, t } => {
            let m = parse_matrix_file(&read(&matrix)?)?;
            match is_t_saturated(&m.rows, m.q, t.unwrap_or(m.t))? {
                Saturation::Saturated => {
                    say(out, "saturated true")?;
                    Ok(EXIT_TRUE)
                }
                Saturation::Violated(cols) => {
                    let cols: Vec<String> = cols.iter().map(usize::to_string).collect();
                    say(out, &format!("saturated false columns={}", cols.join(",")))?;
                    Ok(EXIT_FALSE)
                }
            }
        }
    }
}

fn adversary(c: AdversaryCmd, out: &mut dyn Write) -> CliResult {
    let found = |out: &mut dyn Write, x: &[Color]| -> CliResult {
        say(out, &format!("coloring {}", coloring_text(x)))?;
        Ok(EXIT_TRUE)
    };
    match c {
        AdversaryCmd::CycleMinusEdge { strategy } => {
            let s = load_table(&strategy)?;
            found(out, &cycle_minus_edge_adversary(s.n(), &s)?)
        }
        AdversaryCmd::Lll {
            graph,
            strategy,
            seed,
            max_iters,
        } => {
            let g = load_graph(&graph)?;
            let s = load_table(&strategy)?;
            match lll_bad_coloring(&g, &s, s.q(), seed, max_iters)? {
                Some(x) => found(out, &x),
                None => {
                    say(out, "coloring not-found")?;
                    Ok(EXIT_UNDECIDED)
                }
            }
        }
        AdversaryCmd::Robust {
            graph,
            strategy,
            k,
            q_low,
            seed,
            limits,
        } => {
            let g = load_graph(&graph)?;
            let s = load_table(&strategy)?;
            match robust_bad_coloring(&g, &s, k, q_low, s.q(), seed, limits.budget(u64::MAX, None))? {
                RobustOutcome::Found(x) => {
                    let cells: Vec<String> = x.iter().map(|c| c.map_or("*".into(), |c| c.to_string())).collect();
                    say(out, &format!("partial {}", cells.join(",")))?;
                    Ok(EXIT_TRUE)
                }
                RobustOutcome::NoneExists => {
                    say(out, "partial none")?;
                    Ok(EXIT_FALSE)
                }
                RobustOutcome::Timeout => {
                    say(out, "partial timeout")?;
                    Ok(EXIT_UNDECIDED)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(parse_family("cycle:5").unwrap(), GraphSpec::Cycle(5));
        assert_eq!(
            parse_family("dicycle:3,3,3").unwrap(),
            GraphSpec::DirectedCycleBlowup(vec![3, 3, 3])
        );
        assert!(parse_family("cycle").is_err());
        assert!(parse_family("cycle:1,2").is_err());
        assert!(parse_family("wheel:5").is_err());
    }

    #[test]
    fn limits_override_defaults() {
        let l = Limits {
            budget_nodes: Some(5),
            timeout_secs: None,
        };
        assert_eq!(
            l.budget(9, Some(Duration::from_secs(1))),
            Budget::new(5, Some(Duration::from_secs(1)))
        );
    }

    #[test]
    fn usage_errors_exit_3() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["hatguess", "solve", "--bogus"], &mut o, &mut e), EXIT_ERROR);
        assert_eq!(run(["hatguess", "--help"], &mut o, &mut e), EXIT_TRUE);
    }
}
