//! Local coordinates from repeated improvement runs.
//!
//! Each sample draws `k` seed members, grows them by `d` hops, improves the
//! result, and records the output as one column of an indicator matrix. The
//! leading left singular vectors of that matrix give per-node coordinates.
//! Rows are restricted to nodes that appear in some column; every other node
//! has all-zero coordinates.

use std::collections::VecDeque;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffusion::seeded_pagerank;
use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};
use crate::improve::{improve, Algorithm, ImproveOptions};
use crate::svd::{truncated_svd, DenseMatrix};

/// Floor applied to log-scores in the PageRank variant.
pub const LOG_FLOOR: f64 = -10.0;

/// What to run on each sampled seed.
#[derive(Debug, Clone, PartialEq)]
pub enum Improver {
    Flow { algorithm: Algorithm, options: ImproveOptions },
    /// Seeded PageRank from the sample; columns hold `log10` scores floored
    /// at [`LOG_FLOOR`].
    PageRank { alpha: f64, rho: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingParams {
    pub samples: usize,
    pub subset_size: usize,
    pub hops: usize,
    pub dims: usize,
    pub improver: Improver,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedSample {
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct FlowCoordinates {
    /// Row labels: every node that appears in some column, ascending.
    pub nodes: Vec<usize>,
    /// `coords[i][j]` is coordinate `j` of `nodes[i]`.
    pub coords: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    /// Sparse columns in sample order, skipped samples omitted.
    pub columns: Vec<Vec<(usize, f64)>>,
    /// The grown seed behind each kept column.
    pub samples: Vec<NodeSet>,
    pub skipped: Vec<SkippedSample>,
}

impl FlowCoordinates {
    /// Coordinates of `u`, zero when `u` never appeared.
    pub fn of(&self, u: usize) -> Vec<f64> {
        match self.nodes.binary_search(&u) {
            Ok(i) => self.coords[i].clone(),
            Err(_) => vec![0.0; self.singular_values.len()],
        }
    }
}

/// Nodes within `hops` BFS steps of `start`.
pub fn expand_hops(graph: &WeightedGraph, start: &[usize], hops: usize) -> Vec<usize> {
    let mut dist = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    for &u in start {
        if dist.insert(u, 0usize).is_none() {
            queue.push_back(u);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == hops {
            continue;
        }
        for (v, _) in graph.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(v) {
                slot.insert(du + 1);
                queue.push_back(v);
            }
        }
    }
    let mut out: Vec<usize> = dist.into_keys().collect();
    out.sort_unstable();
    out
}

/// A grown sample and the sparse column it produced.
type Column = (NodeSet, Vec<(usize, f64)>);

fn sample_column(
    graph: &WeightedGraph,
    reference: &NodeSet,
    params: &EmbeddingParams,
    seed: u64,
    index: usize,
) -> Result<Column> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let members = reference.members();
    let picked: Vec<usize> = index::sample(&mut rng, members.len(), params.subset_size)
        .into_iter()
        .map(|i| members[i])
        .collect();
    let grown = NodeSet::new(graph, expand_hops(graph, &picked, params.hops))?;
    match &params.improver {
        Improver::Flow { algorithm, options } => {
            let result = improve(graph, &grown, *algorithm, options)?;
            if result.set.is_empty() {
                return Err(Error::EmptySet);
            }
            Ok((grown, result.set.iter().map(|u| (u, 1.0)).collect()))
        }
        Improver::PageRank { alpha, rho } => {
            let scores = seeded_pagerank(graph, &grown, *alpha, *rho)?;
            Ok((grown, scores.entries().iter().map(|&(u, p)| (u, p.log10().max(LOG_FLOOR))).collect()))
        }
    }
}

#[cfg(feature = "parallel")]
fn all_columns(
    graph: &WeightedGraph,
    reference: &NodeSet,
    params: &EmbeddingParams,
    seed: u64,
) -> Vec<Result<Column>> {
    use rayon::prelude::*;
    (0..params.samples)
        .into_par_iter()
        .map(|i| sample_column(graph, reference, params, seed, i))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn all_columns(
    graph: &WeightedGraph,
    reference: &NodeSet,
    params: &EmbeddingParams,
    seed: u64,
) -> Vec<Result<Column>> {
    (0..params.samples)
        .map(|i| sample_column(graph, reference, params, seed, i))
        .collect()
}

pub fn flow_coordinates(
    graph: &WeightedGraph,
    reference: &NodeSet,
    params: &EmbeddingParams,
    seed: u64,
) -> Result<FlowCoordinates> {
    if params.subset_size == 0 || params.subset_size > reference.len() {
        return Err(Error::InvalidParameter(format!(
            "subset size {} must lie in 1..={}",
            params.subset_size,
            reference.len()
        )));
    }
    if params.dims == 0 || params.dims > params.samples {
        return Err(Error::InvalidParameter(format!(
            "dimensions {} must lie in 1..={} (the sample count)",
            params.dims, params.samples
        )));
    }

    let mut columns = Vec::new();
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for (i, col) in all_columns(graph, reference, params, seed).into_iter().enumerate() {
        match col {
            Ok((sample, c)) => {
                samples.push(sample);
                columns.push(c);
            }
            Err(e) => skipped.push(SkippedSample { index: i, reason: e.to_string() }),
        }
    }

    let mut nodes: Vec<usize> = columns.iter().flatten().map(|e| e.0).collect();
    nodes.sort_unstable();
    nodes.dedup();
    if columns.len() < params.dims || nodes.len() < params.dims {
        return Err(Error::InvalidParameter(format!(
            "{} usable samples over {} nodes cannot support {} dimensions",
            columns.len(),
            nodes.len(),
            params.dims
        )));
    }
    let fill = match params.improver {
        Improver::Flow { .. } => 0.0,
        Improver::PageRank { .. } => LOG_FLOOR,
    };
    let mut x = DenseMatrix::zeros(nodes.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        x.column_mut(j).fill(fill);
        for &(u, val) in col {
            let i = nodes.binary_search(&u).expect("row index covers every column");
            x.set(i, j, val);
        }
    }
    let svd = truncated_svd(&x, params.dims)?;
    let coords = (0..nodes.len()).map(|i| svd.u.iter().map(|col| col[i]).collect()).collect();
    Ok(FlowCoordinates {
        nodes,
        coords,
        singular_values: svd.singular_values,
        columns,
        samples,
        skipped,
    })
}

/// Replaces every coordinate by its rank within its column (ascending,
/// ties by row order).
pub fn rank_transform(coords: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dims = coords.first().map_or(0, Vec::len);
    let mut out = vec![vec![0.0; dims]; coords.len()];
    for j in 0..dims {
        let mut order: Vec<usize> = (0..coords.len()).collect();
        order.sort_by(|&a, &b| coords[a][j].total_cmp(&coords[b][j]).then(a.cmp(&b)));
        for (rank, &i) in order.iter().enumerate() {
            out[i][j] = rank as f64;
        }
    }
    out
}
