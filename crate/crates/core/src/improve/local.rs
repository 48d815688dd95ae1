//! Strongly local solver for the LocalFlowImprove subproblem.
//!
//! The network starts with the seed, its edges, and one sink arc of
//! capacity `δσ·d_j` per neighbor `j` outside the seed. After each max-flow
//! the frontier nodes whose sink arc saturated join the bottleneck set `B`
//! and have their own edges added. Flow is kept across these rounds. When
//! no frontier sink arc saturates, every frontier node is cut off from the
//! source, so the residual source side equals the one on the whole graph.

use std::collections::HashMap;

use crate::error::Result;
use crate::flow::{FlowNetwork, FlowStats};
use crate::frac::Solve;
use crate::graph::{NodeSet, WeightedGraph};
use crate::scalar::{Capacity, Scalar};

use super::augment::{SINK, SOURCE};

/// State of the locally grown network after a solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LocalFrontier {
    /// Graph nodes added to the bottleneck set, in order of expansion.
    pub bottleneck: Vec<usize>,
    pub bottleneck_volume: f64,
    /// Graph nodes with a slot in the network (seed, B and their boundary).
    pub materialized: usize,
    /// Number of max-flow rounds, i.e. expansions plus one.
    pub rounds: usize,
}

struct Grower<'g, F: Scalar> {
    graph: &'g WeightedGraph,
    net: FlowNetwork<F::Cap>,
    slot_of: HashMap<usize, usize>,
    node_of: Vec<usize>,
    expanded: Vec<bool>,
    sink_arc: Vec<Option<usize>>,
    sink_factor: F,
    scale: F,
}

impl<F: Scalar> Grower<'_, F> {
    fn slot(&mut self, u: usize) -> Result<usize> {
        if let Some(&s) = self.slot_of.get(&u) {
            return Ok(s);
        }
        let s = self.net.add_node();
        self.slot_of.insert(u, s);
        self.node_of.push(u);
        self.expanded.push(false);
        let cap = (self.sink_factor.clone() * F::from_f64(self.graph.degree(u))?).to_cap(&self.scale)?;
        let arc = (cap > F::Cap::zero()).then(|| self.net.add_arc(s, SINK, cap));
        self.sink_arc.push(arc);
        Ok(s)
    }

    /// Adds every edge from `u` to a node that is not yet expanded.
    fn expand(&mut self, u: usize) -> Result<()> {
        let su = self.slot(u)?;
        self.expanded[su] = true;
        for (v, w) in self.graph.neighbors(u) {
            let sv = self.slot(v)?;
            if !self.expanded[sv] {
                let cap = F::from_f64(w)?.to_cap(&self.scale)?;
                self.net.add_edge(su, sv, cap);
            }
        }
        Ok(())
    }
}

/// Minimizer of `cut(S) - δ·rvol(S; R, σ)`, touching only the seed, the
/// bottleneck set and their neighbors.
pub fn solve_local<F: Scalar>(
    graph: &WeightedGraph,
    reference: &NodeSet,
    delta: &F,
    sigma: &F,
) -> Result<(Solve, LocalFrontier, FlowStats)> {
    let sink_factor = delta.clone() * sigma.clone();
    let scale = F::common_scale(&[delta.clone(), sink_factor.clone()])?;
    let mut grow = Grower {
        graph,
        net: FlowNetwork::new(2, SOURCE, SINK),
        slot_of: HashMap::with_capacity(2 * reference.len()),
        node_of: vec![usize::MAX, usize::MAX],
        expanded: vec![true, true],
        sink_arc: vec![None, None],
        sink_factor,
        scale: scale.clone(),
    };

    // seed nodes are expanded up front and never get sink arcs
    for u in reference.iter() {
        let s = grow.net.add_node();
        grow.slot_of.insert(u, s);
        grow.node_of.push(u);
        grow.expanded.push(true);
        grow.sink_arc.push(None);
        let cap = (delta.clone() * F::from_f64(graph.degree(u))?).to_cap(&scale)?;
        if cap > F::Cap::zero() {
            grow.net.add_arc(SOURCE, s, cap);
        }
    }
    for u in reference.iter() {
        let su = grow.slot_of[&u];
        for (v, w) in graph.neighbors(u) {
            let sv = grow.slot(v)?;
            if !grow.expanded[sv] || (reference.contains(v) && u < v) {
                let cap = F::from_f64(w)?.to_cap(&scale)?;
                grow.net.add_edge(su, sv, cap);
            }
        }
    }

    let mut frontier = LocalFrontier::default();
    let stats = loop {
        let stats = grow.net.max_flow()?;
        frontier.rounds += 1;
        let saturated: Vec<usize> = (2..grow.node_of.len())
            .filter(|&s| !grow.expanded[s])
            .filter(|&s| grow.sink_arc[s].is_some_and(|a| grow.net.is_saturated(a)))
            .collect();
        if saturated.is_empty() {
            break stats;
        }
        for s in saturated {
            let u = grow.node_of[s];
            frontier.bottleneck.push(u);
            frontier.bottleneck_volume += graph.degree(u);
            grow.expand(u)?;
        }
    };
    frontier.materialized = grow.node_of.len() - 2;

    let members: Vec<usize> = grow
        .net
        .min_cut_source_side()?
        .into_iter()
        .filter(|&s| s >= 2)
        .map(|s| grow.node_of[s])
        .collect();
    let solve = Solve {
        set: NodeSet::from_unsorted(graph, members),
        arcs_touched: stats.arcs_touched,
        arc_scans: stats.arc_scans,
        nodes_touched: frontier.materialized,
        frontier_volume: frontier.bottleneck_volume,
    };
    Ok((solve, frontier, stats))
}
