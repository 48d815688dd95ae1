//! Seed generation: approximate seeded PageRank by residual pushes, and the
//! sweep cut that rounds a score vector to a set.
//!
//! The PageRank vector solves `p = α·s + (1 − α)·p·D⁻¹A` where `s` is uniform
//! over the seeds. A push at `u` moves `α·r(u)` into `p(u)` and spreads the
//! rest of `r(u)` over the neighbors in proportion to edge weight. Pushing
//! stops once `r(u) < ρ·d(u)` everywhere, so the total work is bounded by
//! `1/(α·ρ)` independently of the graph size. Pushes run in synchronous
//! rounds so the output does not depend on a queue order.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};
use crate::metrics::{self, CutProfile};

/// Sparse nonnegative scores, sorted by node id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseScoreVector {
    pub alpha: f64,
    pub rho: f64,
    entries: Vec<(usize, f64)>,
    residual: Vec<(usize, f64)>,
    /// Number of push operations performed.
    pub pushes: usize,
}

impl SparseScoreVector {
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    /// Residual mass left at termination, sorted by node id.
    pub fn residual(&self) -> &[(usize, f64)] {
        &self.residual
    }

    pub fn get(&self, u: usize) -> f64 {
        self.entries
            .binary_search_by_key(&u, |e| e.0)
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

fn sorted(map: HashMap<usize, f64>) -> Vec<(usize, f64)> {
    let mut v: Vec<_> = map.into_iter().filter(|e| e.1 > 0.0).collect();
    v.sort_unstable_by_key(|e| e.0);
    v
}

pub fn seeded_pagerank(graph: &WeightedGraph, seeds: &NodeSet, alpha: f64, rho: f64) -> Result<SparseScoreVector> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    if seeds.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(id) = seeds.iter().find(|&u| u >= graph.node_count()) {
        return Err(Error::NodeOutOfRange { id, node_count: graph.node_count() });
    }

    let mut p: HashMap<usize, f64> = HashMap::new();
    let mut r: HashMap<usize, f64> = HashMap::new();
    let share = 1.0 / seeds.len() as f64;
    for u in seeds.iter() {
        r.insert(u, share);
    }
    let above = |r: &HashMap<usize, f64>, u: usize| {
        let m = r.get(&u).copied().unwrap_or(0.0);
        m > 0.0 && m >= rho * graph.degree(u)
    };
    let mut active: Vec<usize> = seeds.iter().filter(|&u| above(&r, u)).collect();
    let mut pushes = 0;

    // every active node pushes from the same snapshot, in id order
    while !active.is_empty() {
        let batch: Vec<(usize, f64)> = active.iter().map(|&u| (u, r.insert(u, 0.0).unwrap_or(0.0))).collect();
        let mut touched = Vec::new();
        for (u, mass) in batch {
            pushes += 1;
            let d = graph.degree(u);
            if d == 0.0 {
                // isolated node: the walk has nowhere to go, so all mass settles
                *p.entry(u).or_default() += mass;
                continue;
            }
            *p.entry(u).or_default() += alpha * mass;
            let spread = (1.0 - alpha) * mass / d;
            let looped = graph.self_loop_weight(u);
            if looped > 0.0 {
                *r.entry(u).or_default() += spread * looped;
                touched.push(u);
            }
            for (v, w) in graph.neighbors(u) {
                *r.entry(v).or_default() += spread * w;
                touched.push(v);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        active = touched.into_iter().filter(|&u| above(&r, u)).collect();
    }

    Ok(SparseScoreVector {
        alpha,
        rho,
        entries: sorted(p),
        residual: sorted(r),
        pushes,
    })
}

/// Orders the positive entries by `score/degree` descending, ties by node
/// id, and returns the prefix of smallest conductance.
pub fn sweep_cut(graph: &WeightedGraph, scores: &[(usize, f64)]) -> Result<(NodeSet, CutProfile)> {
    let n = graph.node_count();
    let mut order: Vec<(usize, f64)> = Vec::with_capacity(scores.len());
    for &(u, s) in scores {
        if u >= n {
            return Err(Error::NodeOutOfRange { id: u, node_count: n });
        }
        if s > 0.0 {
            let d = graph.degree(u);
            order.push((u, if d > 0.0 { s / d } else { f64::INFINITY }));
        }
    }
    if order.is_empty() {
        return Err(Error::EmptySet);
    }
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    order.dedup_by_key(|e| e.0);

    let total = graph.total_volume();
    let mut inside = vec![false; n];
    let (mut cut, mut vol) = (0.0, 0.0);
    let mut best: Option<(f64, usize)> = None;
    for (k, &(u, _)) in order.iter().enumerate() {
        let mut toward_prefix = 0.0;
        for (v, w) in graph.neighbors(u) {
            if inside[v] {
                toward_prefix += w;
            }
        }
        inside[u] = true;
        cut += graph.degree(u) - graph.self_loop_weight(u) - 2.0 * toward_prefix;
        vol += graph.degree(u);
        let denom = vol.min(total - vol);
        if denom <= 0.0 {
            continue;
        }
        let phi = cut.max(0.0) / denom;
        if best.is_none_or(|(b, _)| phi < b) {
            best = Some((phi, k + 1));
        }
    }
    let (_, len) = best.ok_or(Error::UndefinedRatio("conductance"))?;
    let set = NodeSet::new(graph, order[..len].iter().map(|e| e.0))?;
    let profile = metrics::conductance(graph, &set)?;
    Ok((set, profile))
}
