//! Small deterministic graph families used by tests, benches and the demo.

use crate::graph::WeightedGraph;

fn build(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    WeightedGraph::from_unweighted(n, edges).expect("generator produced an invalid graph")
}

fn clique_edges(nodes: &[usize], out: &mut Vec<(usize, usize)>) {
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            out.push((u, v));
        }
    }
}

/// Cycle `0 - 1 - ... - (n-1) - 0`.
pub fn cycle(n: usize) -> WeightedGraph {
    assert!(n >= 3, "a cycle needs at least 3 nodes");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &edges)
}

#[derive(Debug, Clone)]
pub struct Dumbbell {
    pub graph: WeightedGraph,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Endpoint of the bridge inside the left clique.
    pub left_bridge: usize,
    /// Endpoint of the bridge inside the right clique.
    pub right_bridge: usize,
}

/// Cliques `K_a` (nodes `0..a`) and `K_b` (nodes `a..a+b`) joined by the
/// single edge `(a-1, a)`.
pub fn dumbbell(a: usize, b: usize) -> Dumbbell {
    let left: Vec<usize> = (0..a).collect();
    let right: Vec<usize> = (a..a + b).collect();
    let mut edges = Vec::new();
    clique_edges(&left, &mut edges);
    clique_edges(&right, &mut edges);
    edges.push((a - 1, a));
    Dumbbell {
        graph: build(a + b, &edges),
        left,
        right,
        left_bridge: a - 1,
        right_bridge: a,
    }
}

/// `count` cliques of `size` nodes in a ring. Clique `i` holds nodes
/// `i*size .. (i+1)*size`; its last node links to the first node of clique
/// `i+1`.
pub fn ring_of_cliques(count: usize, size: usize) -> WeightedGraph {
    assert!(count >= 3 && size >= 2);
    let mut edges = Vec::with_capacity(count * (size * (size - 1) / 2 + 1));
    let mut members = Vec::with_capacity(size);
    for c in 0..count {
        members.clear();
        members.extend(c * size..(c + 1) * size);
        clique_edges(&members, &mut edges);
        edges.push(((c + 1) * size - 1, ((c + 1) % count) * size));
    }
    build(count * size, &edges)
}

pub fn clique_members(index: usize, size: usize) -> Vec<usize> {
    (index * size..(index + 1) * size).collect()
}

/// The `4N + 8` node cycle with two dense stretches.
///
/// Nodes are numbered along the cycle. Each dense stretch is
/// `G0, G1, x_1..x_N, F1, F0` with extra chords between nodes two steps
/// apart, which gives the `x_i` degree 4 and the four end nodes degree 3.
/// The stretches alternate with plain runs of `N` degree-2 nodes.
#[derive(Debug, Clone)]
pub struct CycleFamily {
    pub graph: WeightedGraph,
    /// Degree-4 nodes of the first dense stretch.
    pub region_a: Vec<usize>,
    /// Degree-4 nodes of the second dense stretch.
    pub region_b: Vec<usize>,
    /// `region_a` plus its four degree-3 neighbors along the cycle.
    pub dense_a: Vec<usize>,
}

pub fn cycle_family(n: usize) -> CycleFamily {
    assert!(n >= 1);
    let stretch = n + 4;
    let total = 4 * n + 8;
    let mut edges: Vec<(usize, usize)> = (0..total).map(|i| (i, (i + 1) % total)).collect();
    // first stretch starts at 0, second after the first plain run
    let starts = [0, stretch + n];
    for &start in &starts {
        for i in 0..stretch - 2 {
            edges.push((start + i, start + i + 2));
        }
    }
    CycleFamily {
        graph: build(total, &edges),
        region_a: (2..2 + n).collect(),
        region_b: (starts[1] + 2..starts[1] + 2 + n).collect(),
        dense_a: (0..stretch).collect(),
    }
}
