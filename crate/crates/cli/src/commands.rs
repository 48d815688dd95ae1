use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use flowimprove::diffusion::{seeded_pagerank, sweep_cut};
use flowimprove::embed::{flow_coordinates, rank_transform, EmbeddingParams, Improver};
use flowimprove::imagegraph::{image_to_graph, Image, KernelParams};
use flowimprove::improve::{improve, Algorithm, Arithmetic, ImproveOptions, ImproveResult, LfiSolver};
use flowimprove::io::{load_edge_list, parse_inline_set, read_node_set, write_edge_list, EdgeListOptions};
use flowimprove::metrics::set_metrics;
use flowimprove::{Error, Mode, NodeSet, WeightedGraph};

use crate::{
    AlgorithmArg, ArithmeticArg, BatchArgs, Cli, Command, EmbedArgs, GraphArgs, ImageArgs, ImproveArgs, MetricsArgs,
    ModeArg, PprArgs, SetArgs, SolverArgs, SweepArgs,
};

/// A violated precondition on otherwise well-formed input.
#[derive(Debug)]
pub struct Precondition(pub String);

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Precondition {}

fn precondition(msg: impl Into<String>) -> anyhow::Error {
    Precondition(msg.into()).into()
}

fn is_precondition(err: &Error) -> bool {
    matches!(
        err,
        Error::SeedTooLarge { .. }
            | Error::InfeasibleSeed
            | Error::EmptySet
            | Error::UndefinedRatio(_)
            | Error::NonIntegerWeights
            | Error::InvalidParameter(_)
            | Error::Overflow
    )
}

/// 2 for precondition failures, 1 for I/O and parse failures.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<Precondition>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return if is_precondition(e) { 2 } else { 1 };
        }
    }
    1
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(precondition("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Improve(args) => cmd_improve(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Ppr(args) => cmd_ppr(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Embed(args) => cmd_embed(args, cli.seed),
        Command::Img2graph(args) => cmd_img2graph(args),
        Command::Batch(args) => cmd_batch(args),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn load_graph(args: &GraphArgs) -> Result<WeightedGraph> {
    let options = EdgeListOptions {
        relabel: args.relabel,
        fold_self_loops: args.fold_self_loops,
    };
    let (graph, report) =
        load_edge_list(open(&args.graph)?, &options).with_context(|| format!("{}", args.graph.display()))?;
    if report.self_loops_dropped > 0 {
        eprintln!("warning: dropped {} self-loops", report.self_loops_dropped);
    }
    if report.duplicates_merged > 0 {
        eprintln!("warning: merged {} duplicate edges", report.duplicates_merged);
    }
    Ok(graph)
}

fn load_set(args: &SetArgs, graph: &WeightedGraph) -> Result<NodeSet> {
    match (&args.set_file, &args.ids) {
        (Some(path), _) => read_node_set(open(path)?, graph).with_context(|| format!("{}", path.display())),
        (None, Some(ids)) => parse_inline_set(ids, graph).context("--ids"),
        (None, None) => Err(precondition("a node set is required (--set or --ids)")),
    }
}

/// Writes to `path`, or stdout when absent.
fn emit(path: Option<&PathBuf>, write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut out = BufWriter::new(file);
            write(&mut out).and_then(|_| out.flush()).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            write(&mut out).context("writing to stdout")
        }
    }
}

fn emit_json(path: Option<&PathBuf>, value: &Value) -> Result<()> {
    emit(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value)?;
        writeln!(out)
    })
}

/// Node ids as numbers, or as their original labels when relabelled.
fn set_json(graph: &WeightedGraph, set: &NodeSet) -> Value {
    match graph.labels() {
        Some(labels) => set.iter().map(|u| Value::from(labels[u].clone())).collect(),
        None => set.iter().map(Value::from).collect(),
    }
}

fn solver_config(args: &SolverArgs) -> Result<(Algorithm, ImproveOptions)> {
    let algorithm = match (args.algorithm, args.delta) {
        (AlgorithmArg::Lfi, Some(delta)) => {
            if !(delta >= 0.0 && delta.is_finite()) {
                return Err(precondition(format!("--delta must be a finite nonnegative number, got {delta}")));
            }
            Algorithm::LocalFlowImprove { delta }
        }
        (AlgorithmArg::Lfi, None) => return Err(precondition("--alg lfi requires --delta")),
        (_, Some(_)) => return Err(precondition("--delta applies only to --alg lfi")),
        (AlgorithmArg::Mqi, None) => Algorithm::Mqi,
        (AlgorithmArg::Fi, None) => Algorithm::FlowImprove,
    };
    if args.eps.is_some() && args.mode != ModeArg::Bisection {
        return Err(precondition("--eps applies only to --mode bisection"));
    }
    if let Some(eps) = args.eps {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(precondition(format!("--eps must be positive, got {eps}")));
        }
    }
    if args.explicit && args.algorithm != AlgorithmArg::Lfi {
        return Err(precondition("--explicit applies only to --alg lfi"));
    }
    let options = ImproveOptions {
        mode: match args.mode {
            ModeArg::Dinkelbach => Mode::Dinkelbach,
            ModeArg::Bisection => Mode::Bisection,
        },
        eps: args.eps,
        arithmetic: match args.arithmetic {
            ArithmeticArg::Auto => Arithmetic::Auto,
            ArithmeticArg::Exact => Arithmetic::Exact,
            ArithmeticArg::Float => Arithmetic::Float,
        },
        allow_large_seed: args.allow_large_seed,
        reduce_components: !args.no_reduce,
        lfi_solver: if args.explicit { LfiSolver::Explicit } else { LfiSolver::Local },
    };
    Ok((algorithm, options))
}

fn result_json(graph: &WeightedGraph, res: &ImproveResult) -> Value {
    let mut value = json!({
        "algorithm": res.algorithm.name(),
        "set": set_json(graph, &res.set),
        "cut": res.cut,
        "vol": res.volume,
        "conductance": res.conductance,
        "objective": res.objective,
        "iterations": res.iterations,
        "arcs_touched": res.arcs_touched,
        "flipped": res.flipped,
        "trace": res.trace,
    });
    let extra = json!({
        "size": res.set.len(),
        "objective_label": res.objective_label,
        "exact_objective": res.exact_objective.map(|q| q.to_string()),
        "mode": match res.mode {
            Mode::Dinkelbach => "dinkelbach",
            Mode::Bisection => "bisection",
        },
        "arc_scans": res.arc_scans,
        "nodes_touched": res.nodes_touched,
    });
    if let Algorithm::LocalFlowImprove { delta } = res.algorithm {
        value["delta"] = json!(delta);
    }
    if let (Value::Object(map), Value::Object(more)) = (&mut value, extra) {
        map.extend(more);
    }
    value
}

fn cmd_improve(args: ImproveArgs) -> Result<()> {
    let (algorithm, options) = solver_config(&args.solver)?;
    let graph = load_graph(&args.graph)?;
    let seed = load_set(&args.set, &graph)?;
    let result = improve(&graph, &seed, algorithm, &options)?;
    emit_json(args.output.as_ref(), &result_json(&graph, &result))
}

fn cmd_metrics(args: MetricsArgs) -> Result<()> {
    let graph = load_graph(&args.graph)?;
    let set = load_set(&args.set, &graph)?;
    let metrics = set_metrics(&graph, &set)?;
    emit_json(args.output.as_ref(), &serde_json::to_value(metrics)?)
}

fn cmd_ppr(args: PprArgs) -> Result<()> {
    let graph = load_graph(&args.graph)?;
    let seeds = load_set(&args.set, &graph)?;
    let scores = seeded_pagerank(&graph, &seeds, args.pagerank.alpha, args.pagerank.rho)?;
    emit(args.output.as_ref(), |out| {
        for &(u, p) in scores.entries() {
            writeln!(out, "{} {}", graph.label(u), p)?;
        }
        Ok(())
    })
}

/// Reads `node score` lines, resolving labels when the graph has them.
fn read_scores(path: &Path, graph: &WeightedGraph) -> Result<Vec<(usize, f64)>> {
    let index = graph.label_index();
    let mut scores = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let lineno = i + 1;
        let line = line.with_context(|| format!("{}: line {lineno}", path.display()))?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |what: &str| anyhow::anyhow!("{}: line {lineno}: {what}", path.display());
        let mut parts = content.split_whitespace();
        let (Some(node), Some(score), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected `node score`"));
        };
        let id = match &index {
            Some(map) => *map.get(node).ok_or_else(|| bad(&format!("unknown node label `{node}`")))?,
            None => node.parse::<usize>().map_err(|_| bad(&format!("invalid node id `{node}`")))?,
        };
        if id >= graph.node_count() {
            return Err(bad(&format!("node id {id} out of range (graph has {} nodes)", graph.node_count())));
        }
        let score: f64 = score.parse().map_err(|_| bad(&format!("invalid score `{score}`")))?;
        scores.push((id, score));
    }
    Ok(scores)
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let graph = load_graph(&args.graph)?;
    let scores = match &args.scores {
        Some(path) => read_scores(path, &graph)?,
        None => {
            let (Some(alpha), Some(rho)) = (args.alpha, args.rho) else {
                return Err(precondition("sweep needs --scores, or seeds with --alpha and --rho"));
            };
            let set_args = SetArgs { set_file: args.set_file.clone(), ids: args.ids.clone() };
            let seeds = load_set(&set_args, &graph)?;
            seeded_pagerank(&graph, &seeds, alpha, rho)?.entries().to_vec()
        }
    };
    let (set, profile) = sweep_cut(&graph, &scores)?;
    if let Some(path) = &args.set_output {
        emit(Some(path), |out| flowimprove::io::write_node_set(&graph, &set, out))?;
    }
    let value = json!({
        "set": set_json(&graph, &set),
        "cut": profile.cut,
        "vol": profile.volume,
        "vol_bar": profile.complement_volume,
        "conductance": profile.conductance,
        "size": profile.size,
        "support": scores.len(),
    });
    emit_json(args.output.as_ref(), &value)
}

fn cmd_embed(args: EmbedArgs, seed: u64) -> Result<()> {
    let graph = load_graph(&args.graph)?;
    let reference = load_set(&args.set, &graph)?;
    let improver = if args.pagerank {
        Improver::PageRank {
            alpha: args.alpha.expect("clap enforces --alpha"),
            rho: args.rho.expect("clap enforces --rho"),
        }
    } else {
        let solver = SolverArgs {
            algorithm: args.algorithm,
            delta: args.delta,
            mode: ModeArg::Dinkelbach,
            eps: None,
            arithmetic: ArithmeticArg::Auto,
            allow_large_seed: false,
            no_reduce: false,
            explicit: false,
        };
        let (algorithm, options) = solver_config(&solver)?;
        Improver::Flow { algorithm, options }
    };
    let params = EmbeddingParams {
        samples: args.samples,
        subset_size: args.subset,
        hops: args.hops,
        dims: args.dims,
        improver,
    };
    let emb = flow_coordinates(&graph, &reference, &params, seed)?;
    for skip in &emb.skipped {
        eprintln!("warning: sample {} skipped: {}", skip.index, skip.reason);
    }
    let coords = if args.rank_order { rank_transform(&emb.coords) } else { emb.coords.clone() };
    emit(args.output.as_ref(), |out| {
        write!(out, "node")?;
        for j in 1..=params.dims {
            write!(out, ",c{j}")?;
        }
        writeln!(out)?;
        for (u, row) in emb.nodes.iter().zip(&coords) {
            write!(out, "{}", graph.label(*u))?;
            for x in row {
                write!(out, ",{x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    })
}

fn decode_image(path: &Path, gray: bool) -> Result<Image> {
    let decoded = image::ImageReader::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?
        .with_guessed_format()
        .with_context(|| format!("reading {}", path.display()))?
        .decode()
        .with_context(|| format!("decoding {}", path.display()))?;
    let (cols, rows) = (decoded.width() as usize, decoded.height() as usize);
    // Float buffers are normalized to [0, 1]; clamp guards HDR-ish inputs.
    let (channels, data): (usize, Vec<f64>) = if gray || !decoded.color().has_color() {
        (1, decoded.to_luma32f().into_raw().into_iter().map(|x| (x as f64).clamp(0.0, 1.0)).collect())
    } else {
        (3, decoded.to_rgb32f().into_raw().into_iter().map(|x| (x as f64).clamp(0.0, 1.0)).collect())
    };
    Ok(Image::new(rows, cols, channels, data)?)
}

fn cmd_img2graph(args: ImageArgs) -> Result<()> {
    let image = decode_image(&args.image, args.gray)?;
    let params = KernelParams {
        r: args.r,
        sigma_d2: args.sigma_d2,
        sigma_i2: args.sigma_i2,
    };
    let ig = image_to_graph(&image, params)?;
    for w in &ig.warnings {
        eprintln!("warning: {w}");
    }
    emit(Some(&args.output), |out| write_edge_list(&ig.graph, out))?;
    emit(Some(&args.map), |out| ig.map.write(out))?;
    let summary = json!({
        "rows": image.rows,
        "cols": image.cols,
        "channels": image.channels,
        "nodes": ig.graph.node_count(),
        "edges": ig.graph.edge_count(),
        "warnings": ig.warnings,
    });
    emit_json(None, &summary)
}

fn batch_entry(graph: &WeightedGraph, lineno: usize, text: &str, algorithm: Algorithm, options: &ImproveOptions) -> Value {
    let outcome = parse_inline_set(text, graph)
        .map_err(|e| match e {
            // inline parsing numbers tokens, not file lines
            Error::Parse { message, .. } => Error::Parse { line: lineno, message },
            other => other,
        })
        .and_then(|seed| improve(graph, &seed, algorithm, options));
    match outcome {
        Ok(result) => {
            let mut value = json!({ "line": lineno });
            if let (Value::Object(map), Value::Object(rest)) = (&mut value, result_json(graph, &result)) {
                map.extend(rest);
            }
            value
        }
        Err(e) => {
            let code = if is_precondition(&e) { 2 } else { 1 };
            json!({ "line": lineno, "error": e.to_string(), "code": code })
        }
    }
}

fn cmd_batch(args: BatchArgs) -> Result<()> {
    let (algorithm, options) = solver_config(&args.solver)?;
    let graph = load_graph(&args.graph)?;
    let mut jobs = Vec::new();
    for (i, line) in open(&args.seeds)?.lines().enumerate() {
        let line = line.with_context(|| format!("{}: line {}", args.seeds.display(), i + 1))?;
        let content = line.split('#').next().unwrap_or("").trim().to_string();
        if !content.is_empty() {
            jobs.push((i + 1, content));
        }
    }
    let results: Vec<Value> = jobs
        .par_iter()
        .map(|(lineno, text)| batch_entry(&graph, *lineno, text, algorithm, &options))
        .collect();
    let failed = results.iter().filter(|v| v.get("error").is_some()).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} seed sets failed", results.len());
    }
    emit(args.output.as_ref(), |out| {
        for value in &results {
            serde_json::to_writer(&mut *out, value)?;
            writeln!(out)?;
        }
        Ok(())
    })
}
