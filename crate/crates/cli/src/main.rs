//! `flowimprove`: scripted access to the flow-based cluster improvement
//! routines, seeded PageRank, local embeddings and image graphs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "flowimprove", version, about = "Flow-based local cluster improvement")]
struct Cli {
    /// Worker threads for batch and embedding runs (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Random seed; the only source of randomness in every command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Improve a seed set with MQI, FlowImprove or LocalFlowImprove.
    Improve(ImproveArgs),
    /// Cut, volume, conductance and related ratios of a node set.
    Metrics(MetricsArgs),
    /// Seeded PageRank scores as `node score` lines.
    Ppr(PprArgs),
    /// Best-conductance sweep over seeded PageRank or a score file.
    Sweep(SweepArgs),
    /// Local coordinates from repeated improvement of sampled seeds (CSV).
    Embed(EmbedArgs),
    /// Convert a PNG or PGM image into a pixel similarity graph.
    Img2graph(ImageArgs),
    /// Improve many seed sets, one per line, writing JSON lines in input order.
    Batch(BatchArgs),
}

#[derive(Args, Debug, Clone)]
struct GraphArgs {
    /// Edge list with `u v [w]` lines.
    #[arg(short, long)]
    graph: PathBuf,
    /// Treat node ids as labels and map them to dense ids in order of appearance.
    #[arg(long)]
    relabel: bool,
    /// Count self-loop weight in the node degree instead of dropping it.
    #[arg(long)]
    fold_self_loops: bool,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct SetArgs {
    /// Node-set file, one id per line.
    #[arg(short = 's', long = "set")]
    set_file: Option<PathBuf>,
    /// Inline node ids, comma or space separated.
    #[arg(long)]
    ids: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum AlgorithmArg {
    Mqi,
    Fi,
    Lfi,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ModeArg {
    Dinkelbach,
    Bisection,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ArithmeticArg {
    /// Exact for integer weights, floating point otherwise.
    Auto,
    Exact,
    Float,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    #[arg(long = "alg", value_enum)]
    algorithm: AlgorithmArg,
    /// Locality parameter for `lfi`: sigma = vol(R)/vol(R̄) + delta.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Dinkelbach)]
    mode: ModeArg,
    /// Bisection tolerance (bisection only).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = ArithmeticArg::Auto)]
    arithmetic: ArithmeticArg,
    /// Accept seeds holding more than half of the graph volume.
    #[arg(long)]
    allow_large_seed: bool,
    /// Keep disconnected optimal pieces instead of the smallest one.
    #[arg(long)]
    no_reduce: bool,
    /// Solve LocalFlowImprove on the whole-graph network.
    #[arg(long)]
    explicit: bool,
}

#[derive(Args, Debug)]
struct ImproveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    set: SetArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write JSON here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    set: SetArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct PageRankArgs {
    /// Teleport probability in (0, 1).
    #[arg(long)]
    alpha: f64,
    /// Push tolerance; nodes keep residual below rho times their degree.
    #[arg(long)]
    rho: f64,
}

#[derive(Args, Debug)]
struct PprArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    set: SetArgs,
    #[command(flatten)]
    pagerank: PageRankArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Seeds for PageRank (ignored with --scores).
    #[arg(short = 's', long = "set", conflicts_with = "scores")]
    set_file: Option<PathBuf>,
    #[arg(long, conflicts_with = "scores")]
    ids: Option<String>,
    /// Sweep an existing `node score` file instead of running PageRank.
    #[arg(long)]
    scores: Option<PathBuf>,
    #[arg(long, requires = "rho")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    rho: Option<f64>,
    /// Also write the swept set, one id per line.
    #[arg(long)]
    set_output: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Reference region to sample from.
    #[command(flatten)]
    set: SetArgs,
    /// Number of sampled seeds (matrix columns).
    #[arg(long)]
    samples: usize,
    /// Members drawn from the reference set per sample.
    #[arg(long)]
    subset: usize,
    /// Breadth-first hops added around each drawn subset.
    #[arg(long, default_value_t = 0)]
    hops: usize,
    /// Output dimensions.
    #[arg(long)]
    dims: usize,
    /// Improver for each sample; ignored with --pagerank.
    #[arg(long = "alg", value_enum, default_value_t = AlgorithmArg::Mqi)]
    algorithm: AlgorithmArg,
    #[arg(long)]
    delta: Option<f64>,
    /// Use log10 seeded PageRank columns instead of flow improvement.
    #[arg(long, requires_all = ["alpha", "rho"])]
    pagerank: bool,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Replace each coordinate by its rank within its column.
    #[arg(long)]
    rank_order: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ImageArgs {
    /// PNG or PGM/PPM input.
    #[arg(short, long)]
    image: PathBuf,
    /// Squared pixel-distance gate.
    #[arg(long)]
    r: f64,
    /// Spatial bandwidth (squared).
    #[arg(long)]
    sigma_d2: f64,
    /// Intensity bandwidth (squared).
    #[arg(long)]
    sigma_i2: f64,
    /// Convert colour input to a single luminance channel.
    #[arg(long)]
    gray: bool,
    /// Edge list output.
    #[arg(short, long)]
    output: PathBuf,
    /// Map file with `nodeid row col` lines.
    #[arg(long)]
    map: PathBuf,
}

#[derive(Args, Debug)]
struct BatchArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// One seed set per line; ids separated by spaces or commas.
    #[arg(long)]
    seeds: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
