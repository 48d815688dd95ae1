//! WebAssembly entry points for the browser demo.
//!
//! Each exported function takes plain numbers and strings and returns a JSON
//! string. The `*_json` functions hold the logic and are callable natively,
//! which is how the tests exercise them.

use flowimprove::diffusion::{seeded_pagerank, sweep_cut};
use flowimprove::generators::{clique_members, ring_of_cliques};
use flowimprove::imagegraph::{image_to_graph, Image, KernelParams};
use flowimprove::improve::{improve, Algorithm, ImproveOptions, ImproveResult};
use flowimprove::io::{load_edge_list, parse_inline_set, EdgeListOptions};
use flowimprove::metrics::conductance;
use flowimprove::{NodeSet, WeightedGraph};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest ring the locality demo will build.
pub const MAX_RING_NODES: usize = 20_000;

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub algorithm: &'static str,
    pub set: Vec<usize>,
    pub size: usize,
    pub cut: f64,
    pub vol: f64,
    pub conductance: Option<f64>,
    pub iterations: usize,
    pub arcs_touched: usize,
    pub nodes_touched: usize,
}

impl RunSummary {
    fn from_result(res: &ImproveResult) -> Self {
        RunSummary {
            algorithm: res.algorithm.name(),
            set: res.set.members().to_vec(),
            size: res.set.len(),
            cut: res.cut,
            vol: res.volume,
            conductance: res.conductance,
            iterations: res.iterations,
            arcs_touched: res.arcs_touched,
            nodes_touched: res.nodes_touched,
        }
    }
}

fn parse_algorithm(name: &str, delta: f64) -> Result<Algorithm, String> {
    match name {
        "mqi" => Ok(Algorithm::Mqi),
        "fi" => Ok(Algorithm::FlowImprove),
        "lfi" if delta >= 0.0 && delta.is_finite() => Ok(Algorithm::LocalFlowImprove { delta }),
        "lfi" => Err(format!("delta must be finite and nonnegative, got {delta}")),
        other => Err(format!("unknown algorithm `{other}` (expected mqi, fi or lfi)")),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct Segmentation {
    pub nodes: usize,
    pub edges: usize,
    pub seed_conductance: Option<f64>,
    pub result: RunSummary,
    pub warnings: Vec<String>,
}

/// Builds the pixel graph of a grayscale image (row-major, values in
/// `[0, 1]`) and improves `seed`, given as pixel indices.
#[allow(clippy::too_many_arguments)]
pub fn segment_image_json(
    rows: usize,
    cols: usize,
    pixels: &[f64],
    seed: &[u32],
    r: f64,
    sigma_d2: f64,
    sigma_i2: f64,
    algorithm: &str,
    delta: f64,
) -> Result<String, String> {
    let algorithm = parse_algorithm(algorithm, delta)?;
    let image = Image::new(rows, cols, 1, pixels.to_vec()).map_err(|e| e.to_string())?;
    let ig = image_to_graph(&image, KernelParams { r, sigma_d2, sigma_i2 }).map_err(|e| e.to_string())?;
    let graph = &ig.graph;
    let seed = NodeSet::new(graph, seed.iter().map(|&u| u as usize)).map_err(|e| e.to_string())?;
    let res = improve(graph, &seed, algorithm, &ImproveOptions::default()).map_err(|e| e.to_string())?;
    to_json(&Segmentation {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        seed_conductance: conductance(graph, &seed).ok().map(|p| p.conductance),
        result: RunSummary::from_result(&res),
        warnings: ig.warnings,
    })
}

#[derive(Debug, Serialize)]
pub struct LocalityReport {
    pub nodes: usize,
    pub edges: usize,
    pub seed_size: usize,
    pub seed_volume: f64,
    pub runs: Vec<RunSummary>,
}

/// Runs MQI, LocalFlowImprove and FlowImprove on a ring of cliques seeded
/// with one clique and reports how much of the graph each one touched.
pub fn locality_demo_json(cliques: usize, size: usize, seed_clique: usize, delta: f64) -> Result<String, String> {
    if cliques < 3 || size < 2 {
        return Err("need at least 3 cliques of at least 2 nodes".into());
    }
    if cliques * size > MAX_RING_NODES {
        return Err(format!("ring too large for the demo (limit {MAX_RING_NODES} nodes)"));
    }
    if seed_clique >= cliques {
        return Err(format!("seed clique {seed_clique} out of range 0..{cliques}"));
    }
    let lfi = parse_algorithm("lfi", delta)?;
    let graph = ring_of_cliques(cliques, size);
    let seed = NodeSet::new(&graph, clique_members(seed_clique, size)).map_err(|e| e.to_string())?;
    let opts = ImproveOptions::default();
    let mut runs = Vec::new();
    for algorithm in [Algorithm::Mqi, lfi, Algorithm::FlowImprove] {
        let res = improve(&graph, &seed, algorithm, &opts).map_err(|e| e.to_string())?;
        let mut summary = RunSummary::from_result(&res);
        // member lists of whole-graph runs are not needed by the page
        summary.set.truncate(size * 3);
        runs.push(summary);
    }
    to_json(&LocalityReport {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        seed_size: seed.len(),
        seed_volume: seed.volume(),
        runs,
    })
}

#[derive(Debug, Serialize)]
pub struct ProfilePoint {
    pub size: usize,
    pub conductance: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub nodes: usize,
    pub support: usize,
    pub profile: Vec<ProfilePoint>,
    pub sweep_set: Vec<usize>,
    pub sweep_conductance: f64,
    /// MQI applied to the sweep set; absent when the set is too large to seed it.
    pub refined: Option<RunSummary>,
}

/// Sweep order of `scores`: score over degree descending, ties by id.
fn sweep_order(graph: &WeightedGraph, scores: &[(usize, f64)]) -> Vec<usize> {
    let ratio = |u: usize, p: f64| {
        let d = graph.degree(u);
        if d > 0.0 {
            p / d
        } else {
            f64::INFINITY
        }
    };
    let mut order: Vec<(usize, f64)> =
        scores.iter().filter(|e| e.1 > 0.0).map(|&(u, p)| (u, ratio(u, p))).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    order.into_iter().map(|e| e.0).collect()
}

/// Seeded PageRank from `seeds`, the conductance of every sweep prefix, the
/// best prefix, and that prefix refined by MQI.
pub fn sweep_profile_json(edge_list: &str, seeds: &str, alpha: f64, rho: f64) -> Result<String, String> {
    let (graph, _) =
        load_edge_list(edge_list.as_bytes(), &EdgeListOptions::default()).map_err(|e| e.to_string())?;
    let seeds = parse_inline_set(seeds, &graph).map_err(|e| format!("seed ids: {e}"))?;
    let scores = seeded_pagerank(&graph, &seeds, alpha, rho).map_err(|e| e.to_string())?;
    let order = sweep_order(&graph, scores.entries());
    let mut profile = Vec::new();
    for k in 1..=order.len() {
        let prefix = NodeSet::new(&graph, order[..k].iter().copied()).map_err(|e| e.to_string())?;
        if let Ok(p) = conductance(&graph, &prefix) {
            profile.push(ProfilePoint { size: k, conductance: p.conductance });
        }
    }
    let (best, best_profile) = sweep_cut(&graph, scores.entries()).map_err(|e| e.to_string())?;
    let refined = if 2.0 * best.volume() <= graph.total_volume() {
        let res = improve(&graph, &best, Algorithm::Mqi, &ImproveOptions::default()).map_err(|e| e.to_string())?;
        Some(RunSummary::from_result(&res))
    } else {
        None
    };
    to_json(&SweepReport {
        nodes: graph.node_count(),
        support: scores.support(),
        profile,
        sweep_set: best.members().to_vec(),
        sweep_conductance: best_profile.conductance,
        refined,
    })
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn segment_image(
    rows: usize,
    cols: usize,
    pixels: &[f64],
    seed: &[u32],
    r: f64,
    sigma_d2: f64,
    sigma_i2: f64,
    algorithm: &str,
    delta: f64,
) -> Result<String, JsError> {
    segment_image_json(rows, cols, pixels, seed, r, sigma_d2, sigma_i2, algorithm, delta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn locality_demo(cliques: usize, size: usize, seed_clique: usize, delta: f64) -> Result<String, JsError> {
    locality_demo_json(cliques, size, seed_clique, delta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep_profile(edge_list: &str, seeds: &str, alpha: f64, rho: f64) -> Result<String, JsError> {
    sweep_profile_json(edge_list, seeds, alpha, rho).map_err(|e| JsError::new(&e))
}
