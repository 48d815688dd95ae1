//! Undirected weighted graphs in compressed adjacency form, and node sets.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Largest weight or volume that is still treated as an exact integer.
const EXACT_INTEGER_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53

/// Immutable undirected graph with non-negative edge weights.
///
/// Adjacency is stored in compressed rows; every undirected edge appears once
/// in the row of each endpoint. Degrees and the total volume are cached.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    self_loops: Option<Vec<f64>>,
    total_volume: f64,
    integer_weights: bool,
    labels: Option<Vec<String>>,
}

/// What happened to the raw edges while building a graph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BuildReport {
    pub self_loops_dropped: usize,
    pub self_loops_folded: usize,
    pub duplicates_merged: usize,
}

impl WeightedGraph {
    /// Builds a graph from undirected edges `(u, v, w)`.
    ///
    /// Duplicate edges (in either orientation) have their weights summed and
    /// self-loops are dropped. Use [`WeightedGraph::from_edges_with`] to fold
    /// self-loop weight into the degrees instead.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize, f64)]) -> Result<(Self, BuildReport)> {
        Self::from_edges_with(node_count, edges, false)
    }

    pub fn from_edges_with(
        node_count: usize,
        edges: &[(usize, usize, f64)],
        fold_self_loops: bool,
    ) -> Result<(Self, BuildReport)> {
        let mut report = BuildReport::default();
        let mut loops = vec![0.0; node_count];
        let mut pairs: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
        for (line, &(u, v, w)) in edges.iter().enumerate() {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::NegativeWeight { line: line + 1, weight: w });
            }
            for id in [u, v] {
                if id >= node_count {
                    return Err(Error::NodeOutOfRange { id, node_count });
                }
            }
            if u == v {
                if fold_self_loops {
                    loops[u] += w;
                    report.self_loops_folded += 1;
                } else {
                    report.self_loops_dropped += 1;
                }
                continue;
            }
            pairs.push((u.min(v), u.max(v), w));
        }
        pairs.sort_unstable_by_key(|p| (p.0, p.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(pairs.len());
        for (u, v, w) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => {
                    last.2 += w;
                    report.duplicates_merged += 1;
                }
                _ => merged.push((u, v, w)),
            }
        }
        let has_loops = loops.iter().any(|&w| w > 0.0);
        if merged.is_empty() && !has_loops {
            return Err(Error::EmptyGraph);
        }

        let mut counts = vec![0usize; node_count + 1];
        for &(u, v, _) in &merged {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..node_count {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut cursor = offsets.clone();
        let mut targets = vec![0usize; offsets[node_count]];
        let mut weights = vec![0.0; offsets[node_count]];
        for &(u, v, w) in &merged {
            targets[cursor[u]] = v;
            weights[cursor[u]] = w;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            weights[cursor[v]] = w;
            cursor[v] += 1;
        }
        // rows come out sorted by neighbor id because `merged` is sorted
        let mut degrees: Vec<f64> = (0..node_count)
            .map(|u| weights[offsets[u]..offsets[u + 1]].iter().sum())
            .collect();
        if has_loops {
            for (d, l) in degrees.iter_mut().zip(&loops) {
                *d += l;
            }
        }
        let total_volume: f64 = degrees.iter().sum();
        let integer_weights = weights
            .iter()
            .chain(loops.iter())
            .all(|&w| w.fract() == 0.0 && w <= EXACT_INTEGER_LIMIT)
            && total_volume <= EXACT_INTEGER_LIMIT;

        Ok((
            WeightedGraph {
                offsets,
                targets,
                weights,
                degrees,
                self_loops: has_loops.then_some(loops),
                total_volume,
                integer_weights,
                labels: None,
            },
            report,
        ))
    }

    /// Unweighted convenience constructor.
    pub fn from_unweighted(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Ok(Self::from_edges(node_count, &weighted)?.0)
    }

    /// Graph with `node_count` isolated nodes. Every ratio on it is undefined,
    /// but it is a valid value for degenerate inputs such as a 1-pixel image.
    pub fn edgeless(node_count: usize) -> Self {
        WeightedGraph {
            offsets: vec![0; node_count + 1],
            targets: Vec::new(),
            weights: Vec::new(),
            degrees: vec![0.0; node_count],
            self_loops: None,
            total_volume: 0.0,
            integer_weights: true,
            labels: None,
        }
    }

    pub(crate) fn set_labels(&mut self, labels: Vec<String>) {
        debug_assert_eq!(labels.len(), self.node_count());
        self.labels = Some(labels);
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    /// Number of undirected edges (self-loops excluded).
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, u: usize) -> f64 {
        self.degrees[u]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    #[inline]
    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    /// True when every weight is an integer, which enables exact arithmetic.
    pub fn has_integer_weights(&self) -> bool {
        self.integer_weights
    }

    pub fn self_loop_weight(&self, u: usize) -> f64 {
        self.self_loops.as_ref().map_or(0.0, |l| l[u])
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Neighbor count of `u` (unweighted degree).
    pub fn neighbor_count(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Weight of edge `{u, v}`, or zero when absent.
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        let range = self.offsets[u]..self.offsets[u + 1];
        match self.targets[range.clone()].binary_search(&v) {
            Ok(pos) => self.weights[range.start + pos],
            Err(_) => 0.0,
        }
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External name of node `u`: its label if the graph was relabelled.
    pub fn label(&self, u: usize) -> String {
        match &self.labels {
            Some(l) => l[u].clone(),
            None => u.to_string(),
        }
    }

    pub fn label_index(&self) -> Option<HashMap<&str, usize>> {
        self.labels
            .as_ref()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect())
    }

    /// Connected components as a per-node component id.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for (v, _) in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.components().0 <= 1
    }
}

/// A sorted set of node ids with its cached volume.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    members: Vec<usize>,
    volume: f64,
}

impl NodeSet {
    /// Validates ids against `graph`; duplicates are collapsed.
    pub fn new(graph: &WeightedGraph, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = ids.into_iter().collect();
        let n = graph.node_count();
        if let Some(&bad) = members.iter().find(|&&id| id >= n) {
            return Err(Error::NodeOutOfRange { id: bad, node_count: n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted(graph, members))
    }

    /// `members` must be sorted, unique and in range.
    pub(crate) fn from_sorted(graph: &WeightedGraph, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let volume = members.iter().map(|&u| graph.degree(u)).sum();
        NodeSet { members, volume }
    }

    pub(crate) fn from_unsorted(graph: &WeightedGraph, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self::from_sorted(graph, members)
    }

    pub fn empty() -> Self {
        NodeSet {
            members: Vec::new(),
            volume: 0.0,
        }
    }

    pub fn all(graph: &WeightedGraph) -> Self {
        Self::from_sorted(graph, (0..graph.node_count()).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn into_members(self) -> Vec<usize> {
        self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    #[inline]
    pub fn contains(&self, id: usize) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn complement(&self, graph: &WeightedGraph) -> NodeSet {
        let mut out = Vec::with_capacity(graph.node_count() - self.len());
        let mut it = self.members.iter().peekable();
        for u in 0..graph.node_count() {
            if it.peek() == Some(&&u) {
                it.next();
            } else {
                out.push(u);
            }
        }
        NodeSet::from_sorted(graph, out)
    }

    pub fn intersection(&self, other: &NodeSet, graph: &WeightedGraph) -> NodeSet {
        let members = self.iter().filter(|&u| other.contains(u)).collect();
        NodeSet::from_sorted(graph, members)
    }

    /// Indicator over all nodes of `graph`.
    pub fn indicator(&self, node_count: usize) -> Vec<bool> {
        let mut mask = vec![false; node_count];
        for &u in &self.members {
            mask[u] = true;
        }
        mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_edges_are_summed() {
        let (g, report) = WeightedGraph::from_edges(2, &[(0, 1, 2.0), (1, 0, 3.0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_weight(0, 1), 5.0);
        assert_eq!(report.duplicates_merged, 1);
        assert_eq!(g.total_volume(), 10.0);
    }

    #[test]
    fn self_loops_dropped_or_folded() {
        let edges = [(0, 0, 1.0), (0, 1, 1.0)];
        let (g, report) = WeightedGraph::from_edges(2, &edges).unwrap();
        assert_eq!(g.degrees(), &[1.0, 1.0]);
        assert_eq!(report.self_loops_dropped, 1);

        let (g, report) = WeightedGraph::from_edges_with(2, &edges, true).unwrap();
        assert_eq!(g.degrees(), &[2.0, 1.0]);
        assert_eq!(report.self_loops_folded, 1);
        assert_eq!(g.self_loop_weight(0), 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            WeightedGraph::from_edges(2, &[(0, 1, -1.0)]).unwrap_err(),
            Error::NegativeWeight { line: 1, weight: -1.0 }
        );
        assert_eq!(WeightedGraph::from_edges(3, &[]).unwrap_err(), Error::EmptyGraph);
        assert!(matches!(
            WeightedGraph::from_edges(2, &[(0, 2, 1.0)]),
            Err(Error::NodeOutOfRange { id: 2, .. })
        ));
    }

    #[test]
    fn integer_weight_detection() {
        let g = WeightedGraph::from_unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(g.has_integer_weights());
        let (g, _) = WeightedGraph::from_edges(2, &[(0, 1, 0.5)]).unwrap();
        assert!(!g.has_integer_weights());
    }

    #[test]
    fn node_set_basics() {
        let g = WeightedGraph::from_unweighted(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = NodeSet::new(&g, [2, 1, 2]).unwrap();
        assert_eq!(s.members(), &[1, 2]);
        assert_eq!(s.volume(), 4.0);
        assert_eq!(s.complement(&g).members(), &[0, 3]);
        assert!(NodeSet::new(&g, [4]).is_err());
    }

    #[test]
    fn components_of_disjoint_edges() {
        let g = WeightedGraph::from_unweighted(4, &[(0, 1), (2, 3)]).unwrap();
        let (count, comp) = g.components();
        assert_eq!(count, 2);
        assert_eq!(comp[0], comp[1]);
        assert_ne!(comp[1], comp[2]);
    }
}
