//! Independent oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the library's solvers.
#![allow(dead_code)]

use std::collections::VecDeque;

use flowimprove::scalar::Rational;
use flowimprove::{NodeSet, WeightedGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// A small integer-weighted graph kept alongside its raw edge list.
pub struct Instance {
    pub graph: WeightedGraph,
    pub n: usize,
    pub edges: Vec<(usize, usize, i64)>,
}

/// Random spanning tree plus extra edges with probability `p`, weights in
/// `1..=max_w`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64, max_w: i64) -> Instance {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for i in 1..n {
        let u = order[i];
        let v = order[rng.gen_range(0..i)];
        present[u][v] = true;
        present[v][u] = true;
        edges.push((u.min(v), u.max(v), rng.gen_range(1..=max_w)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(1..=max_w)));
            }
        }
    }
    let weighted: Vec<_> = edges.iter().map(|&(u, v, w)| (u, v, w as f64)).collect();
    let (graph, _) = WeightedGraph::from_edges(n, &weighted).unwrap();
    Instance { graph, n, edges }
}

impl Instance {
    pub fn degrees(&self) -> Vec<i64> {
        let mut d = vec![0; self.n];
        for &(u, v, w) in &self.edges {
            d[u] += w;
            d[v] += w;
        }
        d
    }

    pub fn cut_mask(&self, mask: u32) -> i64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| (mask >> u & 1) != (mask >> v & 1))
            .map(|e| e.2)
            .sum()
    }

    pub fn vol_mask(&self, mask: u32) -> i64 {
        let d = self.degrees();
        (0..self.n).filter(|&u| mask >> u & 1 == 1).map(|u| d[u]).sum()
    }

    pub fn mask_of(set: &NodeSet) -> u32 {
        set.iter().fold(0, |m, u| m | 1 << u)
    }

    pub fn set_of(&self, mask: u32) -> NodeSet {
        NodeSet::new(&self.graph, (0..self.n).filter(|&u| mask >> u & 1 == 1)).unwrap()
    }

    /// `(cut, vol)` for every mask.
    pub fn table(&self) -> Vec<(i64, i64)> {
        let d = self.degrees();
        let full = 1u32 << self.n;
        let mut out = Vec::with_capacity(full as usize);
        for mask in 0..full {
            let cut = self.cut_mask(mask);
            let vol = (0..self.n).filter(|&u| mask >> u & 1 == 1).map(|u| d[u]).sum();
            out.push((cut, vol));
        }
        out
    }
}

/// Penalty on volume outside the seed; `None` means sets must stay inside.
#[derive(Clone, Copy, Debug)]
pub enum Penalty {
    Inside,
    Kappa(Rational),
}

/// `θ + delta` with `delta` given as a fraction; `None` gives plain `θ`.
pub fn penalty_for(vol_r: i64, vol_rbar: i64, delta: Option<Rational>) -> Rational {
    let theta = Rational::new(vol_r as i128, vol_rbar as i128);
    delta.map_or(theta, |d| theta + d)
}

/// Exhaustive `min cut(S)/g(S)` over `S` with `g(S) > 0`.
pub fn best_ratio(table: &[(i64, i64)], r_mask: u32, penalty: Penalty) -> (Rational, Vec<u32>) {
    let mut best: Option<Rational> = None;
    let mut argmins = Vec::new();
    for (mask, &(cut, vol)) in table.iter().enumerate() {
        let mask = mask as u32;
        if mask == 0 {
            continue;
        }
        let inside = table[(mask & r_mask) as usize].1;
        let outside = vol - inside;
        let g = match penalty {
            Penalty::Inside if mask & !r_mask != 0 => continue,
            Penalty::Inside => Rational::from_integer(inside as i128),
            Penalty::Kappa(k) => Rational::from_integer(inside as i128) - k * Rational::from_integer(outside as i128),
        };
        if g <= Rational::from_integer(0) {
            continue;
        }
        let ratio = Rational::from_integer(cut as i128) / g;
        match best {
            Some(b) if ratio > b => {}
            Some(b) if ratio == b => argmins.push(mask),
            _ => {
                best = Some(ratio);
                argmins = vec![mask];
            }
        }
    }
    (best.expect("seed itself is feasible"), argmins)
}

/// Seed with `0 < vol(R) <= vol(G)/2`, drawn by random inclusion.
pub fn random_seed<R: Rng>(rng: &mut R, inst: &Instance) -> NodeSet {
    let total = inst.vol_mask((1u32 << inst.n) - 1);
    loop {
        let size = rng.gen_range(1..=inst.n / 2);
        let mut ids: Vec<usize> = (0..inst.n).collect();
        ids.shuffle(rng);
        ids.truncate(size);
        let set = NodeSet::new(&inst.graph, ids).unwrap();
        let vol = inst.vol_mask(Instance::mask_of(&set));
        if vol > 0 && 2 * vol <= total {
            return set;
        }
    }
}

/// Edmonds-Karp on a dense capacity matrix. Undirected edges add capacity
/// in both directions.
pub fn edmonds_karp(n: usize, s: usize, t: usize, arcs: &[(usize, usize, i64, bool)]) -> i64 {
    let mut cap = vec![vec![0i64; n]; n];
    for &(u, v, c, undirected) in arcs {
        cap[u][v] += c;
        if undirected {
            cap[v][u] += c;
        }
    }
    let mut total = 0;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            return total;
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            bottleneck = bottleneck.min(cap[parent[v]][v]);
            v = parent[v];
        }
        let mut v = t;
        while v != s {
            cap[parent[v]][v] -= bottleneck;
            cap[v][parent[v]] += bottleneck;
            v = parent[v];
        }
        total += bottleneck;
    }
}

pub fn exact_conductance(inst: &Instance, set: &NodeSet) -> Rational {
    let mask = Instance::mask_of(set);
    let total = inst.vol_mask((1u32 << inst.n) - 1);
    let vol = inst.vol_mask(mask);
    Rational::new(inst.cut_mask(mask) as i128, vol.min(total - vol) as i128)
}
