//! Cut, volume and the set-quality scores built from them.
//!
//! Every score here is "smaller is better". Conductance divides the cut by
//! the smaller side volume; `ncut_prime` uses `vol(S)` alone; expansion and
//! ratio cut count nodes instead of volume.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};

/// Total weight of edges with exactly one endpoint in `set`.
pub fn cut(graph: &WeightedGraph, set: &NodeSet) -> f64 {
    set.iter()
        .flat_map(|u| graph.neighbors(u))
        .filter(|&(v, _)| !set.contains(v))
        .map(|(_, w)| w)
        .sum()
}

/// `vol(S ∩ R)` and `vol(S ∩ R̄)`.
pub fn split_volume(graph: &WeightedGraph, set: &NodeSet, reference: &NodeSet) -> (f64, f64) {
    let mut inside = 0.0;
    let mut outside = 0.0;
    for u in set.iter() {
        if reference.contains(u) {
            inside += graph.degree(u);
        } else {
            outside += graph.degree(u);
        }
    }
    (inside, outside)
}

/// Relative volume `vol(S ∩ R) − κ·vol(S ∩ R̄)`; may be negative.
pub fn rvol(graph: &WeightedGraph, set: &NodeSet, reference: &NodeSet, kappa: f64) -> f64 {
    let (inside, outside) = split_volume(graph, set, reference);
    inside - kappa * outside
}

/// `vol(R) / vol(R̄)`: the smallest κ for which `rvol(V; R, κ) = 0`.
pub fn theta(graph: &WeightedGraph, reference: &NodeSet) -> f64 {
    reference.volume() / (graph.total_volume() - reference.volume())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutProfile {
    pub cut: f64,
    pub volume: f64,
    pub complement_volume: f64,
    pub conductance: f64,
    pub size: usize,
}

pub fn conductance(graph: &WeightedGraph, set: &NodeSet) -> Result<CutProfile> {
    let volume = set.volume();
    let complement_volume = graph.total_volume() - volume;
    if set.is_empty() || set.len() == graph.node_count() || volume <= 0.0 || complement_volume <= 0.0 {
        return Err(Error::UndefinedRatio("conductance"));
    }
    let cut = cut(graph, set);
    Ok(CutProfile {
        cut,
        volume,
        complement_volume,
        conductance: cut / volume.min(complement_volume),
        size: set.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuxMetrics {
    pub ncut: f64,
    pub ncut_prime: f64,
    pub expansion: f64,
    pub sparsity: f64,
    pub ratio_cut: f64,
}

pub fn aux_metrics(graph: &WeightedGraph, set: &NodeSet) -> Result<AuxMetrics> {
    let n = graph.node_count();
    let size = set.len();
    if size == 0 || size == n {
        return Err(Error::UndefinedRatio("cut ratio"));
    }
    let c = cut(graph, set);
    let vol = set.volume();
    let vol_bar = graph.total_volume() - vol;
    let comp_size = (n - size) as f64;
    let size = size as f64;
    Ok(AuxMetrics {
        ncut: c / vol + c / vol_bar,
        ncut_prime: c / vol,
        expansion: c / size.min(comp_size),
        sparsity: c / (size * comp_size),
        ratio_cut: c / size,
    })
}

/// Nodes outside `set` with at least one neighbor inside it.
pub fn boundary(graph: &WeightedGraph, set: &NodeSet) -> NodeSet {
    let members: Vec<usize> = set
        .iter()
        .flat_map(|u| graph.neighbors(u))
        .map(|(v, _)| v)
        .filter(|&v| !set.contains(v))
        .collect();
    NodeSet::from_unsorted(graph, members)
}

/// The metrics record emitted by the command line tools.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetMetrics {
    pub cut: f64,
    pub vol: f64,
    pub vol_bar: f64,
    pub size: usize,
    pub conductance: f64,
    pub ncut: f64,
    pub expansion: f64,
    pub sparsity: f64,
    pub ratio_cut: f64,
}

pub fn set_metrics(graph: &WeightedGraph, set: &NodeSet) -> Result<SetMetrics> {
    let profile = conductance(graph, set)?;
    let aux = aux_metrics(graph, set)?;
    Ok(SetMetrics {
        cut: profile.cut,
        vol: profile.volume,
        vol_bar: profile.complement_volume,
        size: profile.size,
        conductance: profile.conductance,
        ncut: aux.ncut,
        expansion: aux.expansion,
        sparsity: aux.sparsity,
        ratio_cut: aux.ratio_cut,
    })
}
