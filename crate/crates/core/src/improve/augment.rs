//! Explicit augmented networks: MQI on the seed alone, and the whole-graph
//! construction shared by FlowImprove and the reference LocalFlowImprove.

use crate::error::Result;
use crate::flow::{FlowNetwork, FlowStats};
use crate::frac::Solve;
use crate::graph::{NodeSet, WeightedGraph};
use crate::scalar::{Capacity, Scalar};

pub(crate) const SOURCE: usize = 0;
pub(crate) const SINK: usize = 1;
const FIRST_SLOT: usize = 2;

fn weight<F: Scalar>(w: f64, scale: &F) -> Result<F::Cap> {
    F::from_f64(w)?.to_cap(scale)
}

/// Maps the residual source side back to graph ids.
fn extract<C: Capacity>(net: &FlowNetwork<C>, node_of: impl Fn(usize) -> usize) -> Result<Vec<usize>> {
    Ok(net
        .min_cut_source_side()?
        .into_iter()
        .filter(|&slot| slot >= FIRST_SLOT)
        .map(node_of)
        .collect())
}

fn finish(graph: &WeightedGraph, members: Vec<usize>, stats: FlowStats, nodes: usize) -> Solve {
    Solve {
        set: NodeSet::from_unsorted(graph, members),
        arcs_touched: stats.arcs_touched,
        arc_scans: stats.arc_scans,
        nodes_touched: nodes,
        frontier_volume: 0.0,
    }
}

/// Minimizer of `cut(S) - δ·vol(S)` over `S ⊆ R`.
///
/// Only the seed is materialized: edges leaving R are merged into one arc
/// to the sink per seed node.
pub fn solve_mqi<F: Scalar>(graph: &WeightedGraph, reference: &NodeSet, delta: &F) -> Result<Solve> {
    let members = reference.members();
    let scale = F::common_scale(std::slice::from_ref(delta))?;
    let mut net = FlowNetwork::<F::Cap>::new(FIRST_SLOT + members.len(), SOURCE, SINK);
    for (k, &u) in members.iter().enumerate() {
        let slot = FIRST_SLOT + k;
        let source_cap = (delta.clone() * F::from_f64(graph.degree(u))?).to_cap(&scale)?;
        if source_cap > F::Cap::zero() {
            net.add_arc(SOURCE, slot, source_cap);
        }
        let mut leaving = 0.0;
        for (v, w) in graph.neighbors(u) {
            match members.binary_search(&v) {
                Ok(j) if u < v => {
                    net.add_edge(slot, FIRST_SLOT + j, weight::<F>(w, &scale)?);
                }
                Ok(_) => {}
                Err(_) => leaving += w,
            }
        }
        if leaving > 0.0 {
            net.add_arc(slot, SINK, weight::<F>(leaving, &scale)?);
        }
    }
    let stats = net.max_flow()?;
    let set = extract(&net, |slot| members[slot - FIRST_SLOT])?;
    Ok(finish(graph, set, stats, members.len()))
}

/// Minimizer of `cut(S) - δ·rvol(S; R, κ)` over all `S ⊆ V`, built on the
/// whole graph.
pub fn solve_explicit<F: Scalar>(graph: &WeightedGraph, reference: &NodeSet, delta: &F, kappa: &F) -> Result<Solve> {
    let n = graph.node_count();
    let outside = delta.clone() * kappa.clone();
    let scale = F::common_scale(&[delta.clone(), outside.clone()])?;
    let zero = F::Cap::zero();
    let mut net = FlowNetwork::<F::Cap>::new(FIRST_SLOT + n, SOURCE, SINK);
    for u in 0..n {
        let d = F::from_f64(graph.degree(u))?;
        if reference.contains(u) {
            let cap = (delta.clone() * d).to_cap(&scale)?;
            if cap > zero {
                net.add_arc(SOURCE, FIRST_SLOT + u, cap);
            }
        } else {
            let cap = (outside.clone() * d).to_cap(&scale)?;
            if cap > zero {
                net.add_arc(FIRST_SLOT + u, SINK, cap);
            }
        }
    }
    for (u, v, w) in graph.edges() {
        net.add_edge(FIRST_SLOT + u, FIRST_SLOT + v, weight::<F>(w, &scale)?);
    }
    let stats = net.max_flow_push_relabel()?;
    let set = extract(&net, |slot| slot - FIRST_SLOT)?;
    Ok(finish(graph, set, stats, n))
}
