//! Dinic max-flow on networks that can grow between solves.
//!
//! Arcs are stored in pairs: arc `a` and its partner `a ^ 1`. A directed arc
//! has a zero-capacity partner; an undirected edge gives both halves the
//! same capacity, so the residual is `c - f` one way and `c + f` the other.
//! Flow already pushed is kept when nodes or arcs are added, which lets a
//! local solver extend the network and resume.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Capacity;

const UNSEEN: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Arc<C> {
    to: usize,
    cap: C,
    flow: C,
    tol: C,
}

/// Work counters from a max-flow run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowStats {
    pub value: f64,
    /// Arc pairs present in the network (each undirected edge counts once).
    pub arcs_touched: usize,
    /// Arc inspections made by all BFS and augmentation passes so far.
    pub arc_scans: usize,
    pub blocking_flow_rounds: usize,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork<C: Capacity> {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc<C>>,
    level: Vec<usize>,
    cursor: Vec<usize>,
    source: usize,
    sink: usize,
    value: C,
    is_max: bool,
    arc_scans: usize,
    rounds: usize,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); node_count],
            arcs: Vec::new(),
            level: Vec::new(),
            cursor: Vec::new(),
            source,
            sink,
            value: C::zero(),
            is_max: false,
            arc_scans: 0,
            rounds: 0,
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn arc_pair_count(&self) -> usize {
        self.arcs.len() / 2
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.is_max = false;
        self.adj.len() - 1
    }

    fn push_pair(&mut self, u: usize, v: usize, forward: C, backward: C) -> usize {
        assert!(!(forward < C::zero()) && !(backward < C::zero()), "negative capacity");
        let tol = C::tolerance(if forward < backward { backward } else { forward });
        let id = self.arcs.len();
        self.arcs.push(Arc {
            to: v,
            cap: forward,
            flow: C::zero(),
            tol,
        });
        self.arcs.push(Arc {
            to: u,
            cap: backward,
            flow: C::zero(),
            tol,
        });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        self.is_max = false;
        id
    }

    /// Directed arc `u -> v`; returns its id.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: C) -> usize {
        self.push_pair(u, v, cap, C::zero())
    }

    /// Undirected edge usable in both directions up to `cap`.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: C) -> usize {
        self.push_pair(u, v, cap, cap)
    }

    #[inline]
    pub fn residual(&self, arc: usize) -> C {
        let a = &self.arcs[arc];
        a.cap - a.flow
    }

    #[inline]
    fn has_residual(&self, arc: usize) -> bool {
        let a = &self.arcs[arc];
        a.cap - a.flow > a.tol
    }

    /// True when no more flow fits through `arc`, up to tolerance.
    pub fn is_saturated(&self, arc: usize) -> bool {
        !self.has_residual(arc)
    }

    pub fn flow(&self, arc: usize) -> C {
        self.arcs[arc].flow
    }

    pub fn flow_value(&self) -> C {
        self.value
    }

    pub fn is_max(&self) -> bool {
        self.is_max
    }

    /// Builds BFS levels from the source; returns whether the sink is reachable.
    fn build_levels(&mut self) -> bool {
        let n = self.adj.len();
        self.level.clear();
        self.level.resize(n, UNSEEN);
        self.level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            if self.level[self.sink] != UNSEEN && self.level[u] >= self.level[self.sink] {
                break;
            }
            for &a in &self.adj[u] {
                self.arc_scans += 1;
                let v = self.arcs[a].to;
                if self.level[v] == UNSEEN && self.has_residual(a) {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[self.sink] != UNSEEN
    }

    /// Residual distance from source to sink, if any.
    pub fn st_distance(&mut self) -> Option<usize> {
        self.build_levels().then(|| self.level[self.sink])
    }

    /// Augments along level-graph paths until every one of them has a
    /// saturated arc. Needs fresh levels.
    fn blocking_flow(&mut self) -> C {
        let n = self.adj.len();
        self.cursor.clear();
        self.cursor.resize(n, 0);
        let mut total = C::zero();
        let mut path: Vec<usize> = Vec::new();
        let mut u = self.source;
        loop {
            if u == self.sink {
                let mut bottleneck = self.residual(path[0]);
                let mut cut_at = 0;
                for (i, &a) in path.iter().enumerate().skip(1) {
                    let r = self.residual(a);
                    if r < bottleneck {
                        bottleneck = r;
                        cut_at = i;
                    }
                }
                for &a in &path {
                    self.arcs[a].flow = self.arcs[a].flow + bottleneck;
                    self.arcs[a ^ 1].flow = self.arcs[a ^ 1].flow - bottleneck;
                }
                total = total + bottleneck;
                path.truncate(cut_at);
                u = path.last().map_or(self.source, |&a| self.arcs[a].to);
                continue;
            }
            let mut advanced = false;
            while self.cursor[u] < self.adj[u].len() {
                let a = self.adj[u][self.cursor[u]];
                self.arc_scans += 1;
                let v = self.arcs[a].to;
                if self.level[v] != UNSEEN && self.level[v] == self.level[u] + 1 && self.has_residual(a) {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                self.cursor[u] += 1;
            }
            if !advanced {
                if u == self.source {
                    break;
                }
                // dead end: drop u from the level graph and back up
                self.level[u] = UNSEEN;
                let a = path.pop().expect("non-source node reached without a path");
                u = self.arcs[a ^ 1].to;
                self.cursor[u] += 1;
            }
        }
        total
    }

    /// One Dinic phase: levels plus a blocking flow. `None` when the sink
    /// is unreachable.
    pub fn blocking_flow_round(&mut self) -> Result<Option<C>> {
        if self.source == self.sink {
            return Err(Error::SourceEqualsSink);
        }
        if !self.build_levels() {
            self.is_max = true;
            return Ok(None);
        }
        let pushed = self.blocking_flow();
        self.value = self.value + pushed;
        self.rounds += 1;
        self.is_max = false;
        Ok(Some(pushed))
    }

    /// Runs Dinic to completion, continuing from the current flow.
    pub fn max_flow(&mut self) -> Result<FlowStats> {
        while self.blocking_flow_round()?.is_some() {}
        debug_assert!(self.check_invariants(), "flow invariants violated");
        Ok(self.stats())
    }

    /// FIFO push-relabel with periodic global relabeling, run until the
    /// preflow is a flow again. Ends in the same state as [`max_flow`]: a
    /// maximum flow whose residual source side is the smallest min cut.
    ///
    /// Used for whole-graph networks, where the flow may have to travel far
    /// from the source and Dinic's phase count grows with that distance.
    ///
    /// [`max_flow`]: FlowNetwork::max_flow
    pub fn max_flow_push_relabel(&mut self) -> Result<FlowStats> {
        if self.source == self.sink {
            return Err(Error::SourceEqualsSink);
        }
        let n = self.adj.len();
        let (s, t) = (self.source, self.sink);
        let mut top = C::zero();
        for a in &self.arcs {
            if top < a.cap {
                top = a.cap;
            }
        }
        let slack = C::tolerance(top);

        let mut excess = vec![C::zero(); n];
        for i in 0..self.adj[s].len() {
            let a = self.adj[s][i];
            if self.has_residual(a) {
                let r = self.residual(a);
                self.push(a, r);
                let v = self.arcs[a].to;
                excess[v] = excess[v] + r;
            }
        }
        let mut label = vec![0usize; n];
        self.global_relabel(&mut label);
        let mut cursor = vec![0usize; n];
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            if v != s && v != t && excess[v] > slack {
                queued[v] = true;
                queue.push_back(v);
            }
        }

        let mut relabels = 0usize;
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            while excess[v] > slack && label[v] < 2 * n {
                if cursor[v] == self.adj[v].len() {
                    let mut lowest = usize::MAX;
                    for &a in &self.adj[v] {
                        self.arc_scans += 1;
                        if self.has_residual(a) {
                            lowest = lowest.min(label[self.arcs[a].to]);
                        }
                    }
                    label[v] = lowest.saturating_add(1).min(2 * n);
                    cursor[v] = 0;
                    relabels += 1;
                    continue;
                }
                let a = self.adj[v][cursor[v]];
                self.arc_scans += 1;
                let w = self.arcs[a].to;
                if self.has_residual(a) && label[v] == label[w] + 1 {
                    let r = self.residual(a);
                    let amount = if excess[v] < r { excess[v] } else { r };
                    self.push(a, amount);
                    excess[v] = excess[v] - amount;
                    excess[w] = excess[w] + amount;
                    if w != s && w != t && !queued[w] && excess[w] > slack {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                } else {
                    cursor[v] += 1;
                }
            }
            if relabels > n {
                relabels = 0;
                self.global_relabel(&mut label);
                cursor.iter_mut().for_each(|c| *c = 0);
            }
        }

        let mut inflow = C::zero();
        for &a in &self.adj[t] {
            inflow = inflow - self.arcs[a].flow;
        }
        self.value = inflow;
        self.rounds += 1;
        self.is_max = true;
        debug_assert!(self.check_invariants(), "flow invariants violated");
        Ok(self.stats())
    }

    fn push(&mut self, arc: usize, amount: C) {
        self.arcs[arc].flow = self.arcs[arc].flow + amount;
        self.arcs[arc ^ 1].flow = self.arcs[arc ^ 1].flow - amount;
    }

    /// Exact labels: residual distance to the sink, or `n +` distance to the
    /// source for nodes that can no longer reach the sink.
    fn global_relabel(&mut self, label: &mut [usize]) {
        let n = self.adj.len();
        label.iter_mut().for_each(|l| *l = 2 * n);
        for (root, base) in [(self.sink, 0), (self.source, n)] {
            if label[root] < 2 * n {
                continue;
            }
            label[root] = base;
            let mut queue = VecDeque::from([root]);
            while let Some(w) = queue.pop_front() {
                for &a in &self.adj[w] {
                    self.arc_scans += 1;
                    let x = self.arcs[a].to;
                    if label[x] == 2 * n && x != self.source && self.has_residual(a ^ 1) {
                        label[x] = label[w] + 1;
                        queue.push_back(x);
                    }
                }
            }
        }
        label[self.source] = n;
    }

    pub fn stats(&self) -> FlowStats {
        FlowStats {
            value: self.value.to_f64(),
            arcs_touched: self.arc_pair_count(),
            arc_scans: self.arc_scans,
            blocking_flow_rounds: self.rounds,
        }
    }

    /// Slots reachable from the source in the residual network, source
    /// excluded. This is the smallest source side of a minimum cut.
    pub fn min_cut_source_side(&self) -> Result<Vec<usize>> {
        if !self.is_max {
            return Err(Error::FlowNotMaximal);
        }
        let reach = self.residual_reachable();
        Ok((0..self.adj.len()).filter(|&u| reach[u] && u != self.source).collect())
    }

    fn residual_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[self.source] = true;
        let mut stack = vec![self.source];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.arcs[a].to;
                if !seen[v] && self.has_residual(a) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Capacity of the cut between `side` (which must hold the source) and
    /// the rest.
    pub fn cut_capacity(&self, side: &[bool]) -> C {
        let mut total = C::zero();
        for (u, arcs) in self.adj.iter().enumerate() {
            if !side[u] {
                continue;
            }
            for &a in arcs {
                if !side[self.arcs[a].to] {
                    total = total + self.arcs[a].cap;
                }
            }
        }
        total
    }

    /// Conservation at inner nodes and `flow <= cap` on every half-arc.
    pub fn check_invariants(&self) -> bool {
        let mut scale = C::zero();
        for a in &self.arcs {
            if a.flow > a.cap + a.tol {
                return false;
            }
            if scale < a.cap {
                scale = a.cap;
            }
        }
        let slack = C::tolerance(scale) + C::tolerance(scale);
        for (u, arcs) in self.adj.iter().enumerate() {
            if u == self.source || u == self.sink {
                continue;
            }
            let mut net = C::zero();
            for &a in arcs {
                net = net + self.arcs[a].flow;
            }
            if net > slack || -net > slack {
                return false;
            }
        }
        true
    }

    /// Residual arcs in a DOT-like text form, for debugging and tests.
    pub fn residual_dot(&self) -> String {
        let mut out = String::from("digraph residual {\n");
        for (u, arcs) in self.adj.iter().enumerate() {
            for &a in arcs {
                if self.has_residual(a) {
                    let _ = writeln!(out, "  {} -> {} [label=\"{:?}\"];", u, self.arcs[a].to, self.residual(a));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
