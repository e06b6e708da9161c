//! Command-line front end: rank edges by any supported centrality, carve
//! residual graphs by removing top-rho edges, sample resistance-proportional
//! sparsifiers, dump effective resistances with their bounds, and run the
//! randomized invariant suites.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use edgerake::baselines;
use edgerake::erwr;
use edgerake::graph::Graph;
use edgerake::io::{self, EdgeListDocument, RemovalOrder};
use edgerake::sparsify::{self, Reweighting};
use edgerake::spectral;
use edgerake::verify::{self, Suite, VerifyConfig};
use edgerake::CentralityVector;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

const DEFAULT_ALPHA: f64 = 0.5;
const DEFAULT_EPSILON: f64 = 1e-6;
const ITERATION_CAP: usize = erwr::ITERATION_CAP;
const RECURSIVE_TOL: f64 = baselines::DEFAULT_TOL;

#[derive(Debug, Parser)]
#[command(
    name = "edgerake",
    version,
    about = "Edge centrality, residual graphs, and resistance-based sparsification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score every edge and write a rankings CSV.
    Rank(RankArgs),
    /// Remove the top-(m*rho) edges of the score order and write the rest.
    Residual(ResidualArgs),
    /// Sample edges proportionally to effective resistance and reweight them.
    Sparsify(SparsifyArgs),
    /// Emit per-edge effective resistance, optionally with analytic bounds.
    Resistance(ResistanceArgs),
    /// Run a randomized invariant suite; exits non-zero on any violation.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    /// Edge ranking via the edge-wise random walk with restart.
    Erk,
    /// Edge PageRank.
    Ep,
    /// Edge Katz.
    Ek,
    /// Generalized topological overlap.
    Gtom,
    /// Edge betweenness (ordered node pairs, so undirected values are twice
    /// the unordered convention).
    Eb,
    /// Effective resistance.
    Er,
    /// Biharmonic-distance centrality.
    Bdrc,
}

#[derive(Debug, Args)]
struct MeasureOpts {
    /// Jump probability for erk/ep/ek.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Accuracy target that picks the erk iteration count (capped at 150).
    #[arg(long, conflicts_with = "iters")]
    epsilon: Option<f64>,
    /// Explicit erk iteration count (overrides --epsilon, not capped).
    #[arg(long)]
    iters: Option<usize>,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long, value_enum)]
    measure: MeasureArg,
    #[command(flatten)]
    opts: MeasureOpts,
    /// Treat the edge list as directed arcs.
    #[arg(long)]
    directed: bool,
    /// Edge-list file (`tail head [weight]` per line; `#`/`%` comments).
    #[arg(long)]
    input: PathBuf,
    /// Destination CSV; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ResidualArgs {
    /// Rankings CSV to take scores from (instead of computing a measure).
    #[arg(long, conflicts_with = "measure")]
    scores: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "scores")]
    measure: Option<MeasureArg>,
    #[command(flatten)]
    opts: MeasureOpts,
    /// Fraction of edges to remove, in [0, 1].
    #[arg(long)]
    rho: f64,
    /// Which end of the score order is removed first.
    #[arg(long, value_enum, default_value_t = OrderArg::Asc)]
    order: OrderArg,
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    /// Delete lowest-scoring edges first (the removal protocol default).
    Asc,
    /// Delete highest-scoring edges first.
    Desc,
}

#[derive(Debug, Args)]
struct SparsifyArgs {
    /// Number of edge draws.
    #[arg(long)]
    ns: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reweight by frequency times sampling probability instead of the
    /// unbiased importance-sampling estimator.
    #[arg(long = "paper-weights")]
    paper_weights: bool,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ResistanceArgs {
    /// Also emit the degree lower bound and both upper bounds per edge
    /// (connected unweighted graphs).
    #[arg(long)]
    bounds: bool,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Invariant suite: lemma2 (walk stochasticity), balance (weighted
    /// symmetry), lemma3 (score range), theorem (truncation error bound),
    /// foster (resistance sum), qmatrix (projection structure).
    #[arg(long)]
    suite: String,
    /// Maximum node count per random graph.
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Rank(args) => rank(args),
        Command::Residual(args) => residual(args),
        Command::Sparsify(args) => run_sparsify(args),
        Command::Resistance(args) => resistance(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn load(path: &Path, directed: bool) -> Result<(EdgeListDocument, Graph)> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    io::parse_edge_list(BufReader::new(file), directed)
        .with_context(|| format!("parsing {}", path.display()))
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn compute_scores(g: &Graph, measure: MeasureArg, opts: &MeasureOpts) -> Result<CentralityVector> {
    let alpha = opts.alpha;
    let scores = match measure {
        MeasureArg::Erk => {
            let iterations = match opts.iters {
                Some(t) => t,
                None => {
                    let epsilon = opts.epsilon.unwrap_or(DEFAULT_EPSILON);
                    erwr::iterations_for_epsilon(alpha, epsilon)?.min(ITERATION_CAP)
                }
            };
            erwr::edgerake_approx(g, alpha, iterations)?
        }
        MeasureArg::Ep => baselines::edge_pagerank(g, alpha, ITERATION_CAP, RECURSIVE_TOL)?,
        MeasureArg::Ek => baselines::edge_katz(g, alpha, ITERATION_CAP, RECURSIVE_TOL)?,
        MeasureArg::Gtom => baselines::gtom(g)?,
        MeasureArg::Eb => baselines::edge_betweenness(g),
        MeasureArg::Er => baselines::effective_resistance_centrality(g)?,
        MeasureArg::Bdrc => baselines::bdrc(g)?,
    };
    Ok(scores)
}

fn rank(args: RankArgs) -> Result<()> {
    let (doc, g) = load(&args.input, args.directed)?;
    let scores = compute_scores(&g, args.measure, &args.opts)?;
    let mut out = sink(&args.output)?;
    io::write_rankings(&doc, &g, &scores, &mut out)?;
    out.flush()?;
    Ok(())
}

fn residual(args: ResidualArgs) -> Result<()> {
    let (doc, g) = load(&args.input, args.directed)?;
    let scores = match (&args.scores, args.measure) {
        (Some(path), _) => {
            let file =
                File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            let values = io::read_scores_csv(BufReader::new(file))?;
            if values.len() != g.edge_count() {
                bail!(
                    "scores file has {} rows but the graph has {} edges",
                    values.len(),
                    g.edge_count()
                );
            }
            CentralityVector::new(
                values,
                edgerake::Measure::EdgeBetweenness,
                edgerake::Params::default(),
            )
        }
        (None, Some(measure)) => compute_scores(&g, measure, &args.opts)?,
        (None, None) => unreachable!("clap enforces one of --scores/--measure"),
    };
    let order = match args.order {
        OrderArg::Asc => RemovalOrder::Ascending,
        OrderArg::Desc => RemovalOrder::Descending,
    };
    let (_residual, kept) = io::residual_graph(&g, &scores, args.rho, order)?;
    eprintln!(
        "kept {} of {} edges (rho = {})",
        kept.len(),
        g.edge_count(),
        args.rho
    );
    let mut out = sink(&args.output)?;
    // Kept edges still carry their original indices into `g`'s labels.
    io::write_edge_list(&doc, &g, Some(&kept), &mut out)?;
    out.flush()?;
    Ok(())
}

fn run_sparsify(args: SparsifyArgs) -> Result<()> {
    let (doc, g) = load(&args.input, false)?;
    let mode = if args.paper_weights {
        Reweighting::Literal
    } else {
        Reweighting::Unbiased
    };
    let sample = sparsify::sparsify_with(&g, args.ns, args.seed, mode)?;
    let support = sample.support();
    eprintln!(
        "sampled {} draws over {} edges, {} distinct edges kept (seed {})",
        sample.n_s,
        g.edge_count(),
        support.len(),
        sample.seed
    );
    let mut out = sink(&args.output)?;
    for &e in &support {
        let edge = g.edge(e);
        writeln!(
            out,
            "{} {} {}",
            doc.label(edge.tail),
            doc.label(edge.head),
            sample.sparse_weights[e]
        )?;
    }
    out.flush()?;
    Ok(())
}

fn resistance(args: ResistanceArgs) -> Result<()> {
    let (doc, g) = load(&args.input, false)?;
    let r = spectral::effective_resistance_all(&g)?;
    let bounds = if args.bounds {
        let mut all = Vec::with_capacity(g.edge_count());
        for e in 0..g.edge_count() {
            all.push(spectral::resistance_bounds(&g, e)?);
        }
        Some(all)
    } else {
        None
    };
    let mut out = sink(&args.output)?;
    match &bounds {
        None => writeln!(out, "edge_id,tail,head,weight,resistance")?,
        Some(_) => writeln!(
            out,
            "edge_id,tail,head,weight,resistance,lower,upper_lovasz,upper_triangle"
        )?,
    }
    for (e, edge) in g.edges().iter().enumerate() {
        let base = format!(
            "{},{},{},{},{}",
            e,
            doc.label(edge.tail),
            doc.label(edge.head),
            edge.weight,
            io::format_score(r[e])
        );
        match &bounds {
            None => writeln!(out, "{base}")?,
            Some(all) => {
                let (lower, upper_lovasz, upper_triangle) = all[e];
                writeln!(
                    out,
                    "{base},{},{},{}",
                    io::format_score(lower),
                    io::format_score(upper_lovasz),
                    io::format_score(upper_triangle)
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<()> {
    let Some(suite) = Suite::from_token(&args.suite) else {
        bail!(
            "unknown suite `{}`; expected one of lemma2, balance, lemma3, theorem, foster, qmatrix",
            args.suite
        );
    };
    let report = verify::run_suite(
        suite,
        VerifyConfig {
            max_nodes: args.n.max(2),
            trials: args.trials,
            seed: args.seed,
        },
    );
    println!(
        "suite {}: {} graphs, {} checks, max deviation {:.3e}, {} violation(s)",
        suite.token(),
        report.graphs,
        report.checks,
        report.max_deviation,
        report.violations.len()
    );
    for violation in &report.violations {
        println!("  violation: {violation}");
    }
    if !report.ok() {
        std::process::exit(1);
    }
    Ok(())
}
