//! Ratio minimization `min cut(S) / g(S)` by repeated parametric min-cuts.
//!
//! Each driver calls a subsolver that returns a minimizer of
//! `z(S, δ) = cut(S) - δ·g(S)`. Dinkelbach's method jumps `δ` to the ratio
//! of the last set; bisection brackets the optimum instead.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};
use crate::metrics;
use crate::scalar::{rational_from_f64, Rational, Scalar};

/// Which denominator `g` the ratio uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectiveKind {
    /// `g(S) = vol(S)` for `S ⊆ R`.
    Mqi,
    /// `g(S) = rvol(S; R, θ)` with `θ = vol(R)/vol(R̄)`.
    FlowImprove,
    /// `g(S) = rvol(S; R, σ)` with `σ = θ + delta`.
    LocalFlowImprove { delta: f64 },
}

#[derive(Debug, Clone)]
pub struct RatioObjective {
    pub kind: ObjectiveKind,
    pub reference: NodeSet,
    reference_volume: f64,
    complement_volume: f64,
}

impl RatioObjective {
    pub fn new(graph: &WeightedGraph, reference: NodeSet, kind: ObjectiveKind) -> Result<Self> {
        if reference.is_empty() {
            return Err(Error::EmptySet);
        }
        if let ObjectiveKind::LocalFlowImprove { delta } = kind {
            if !(delta >= 0.0) || !delta.is_finite() {
                return Err(Error::InvalidParameter(format!("delta must be finite and >= 0, got {delta}")));
            }
        }
        let reference_volume = reference.volume();
        let complement_volume = graph.total_volume() - reference_volume;
        if reference_volume <= 0.0 {
            return Err(Error::InfeasibleSeed);
        }
        if kind != ObjectiveKind::Mqi && complement_volume <= 0.0 {
            return Err(Error::InfeasibleSeed);
        }
        Ok(RatioObjective {
            kind,
            reference,
            reference_volume,
            complement_volume,
        })
    }

    pub fn reference_volume(&self) -> f64 {
        self.reference_volume
    }

    pub fn complement_volume(&self) -> f64 {
        self.complement_volume
    }

    /// `θ = vol(R)/vol(R̄)`.
    pub fn theta<F: Scalar>(&self) -> Result<F> {
        Ok(F::from_f64(self.reference_volume)? / F::from_f64(self.complement_volume)?)
    }

    /// The penalty κ on `vol(S ∩ R̄)`; `None` for MQI, which forbids leaving R.
    pub fn kappa<F: Scalar>(&self) -> Result<Option<F>> {
        match self.kind {
            ObjectiveKind::Mqi => Ok(None),
            ObjectiveKind::FlowImprove => Ok(Some(self.theta()?)),
            ObjectiveKind::LocalFlowImprove { delta } => Ok(Some(self.theta::<F>()? + F::from_f64(delta)?)),
        }
    }

    /// `(cut(S), g(S))`. For MQI the denominator is `vol(S)` and sets must
    /// stay inside the reference.
    pub fn evaluate<F: Scalar>(&self, graph: &WeightedGraph, set: &NodeSet) -> Result<(F, F)> {
        let cut = F::from_f64(metrics::cut(graph, set))?;
        let (inside, outside) = metrics::split_volume(graph, set, &self.reference);
        let g = match self.kappa::<F>()? {
            None => {
                if outside > 0.0 {
                    return Err(Error::InvalidParameter("MQI set leaves the reference".into()));
                }
                F::from_f64(inside)?
            }
            Some(kappa) => F::from_f64(inside)? - kappa * F::from_f64(outside)?,
        };
        Ok((cut, g))
    }

    /// `cut(S)/g(S)`, or `None` when `g(S) <= 0`.
    pub fn ratio<F: Scalar>(&self, graph: &WeightedGraph, set: &NodeSet) -> Result<Option<F>> {
        let (cut, g) = self.evaluate::<F>(graph, set)?;
        Ok((g > F::zero()).then(|| cut / g))
    }
}

/// One subproblem solve as seen by a driver.
#[derive(Debug, Clone)]
pub struct Solve {
    pub set: NodeSet,
    pub arcs_touched: usize,
    pub arc_scans: usize,
    pub nodes_touched: usize,
    /// Volume of the bottleneck set grown by the local solver (zero otherwise).
    pub frontier_volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    /// Parameter the subproblem was solved at.
    pub delta: f64,
    /// Cut and denominator of the set held after this step.
    pub cut: f64,
    pub denominator: f64,
    pub arcs_touched: usize,
    pub arc_scans: usize,
    pub nodes_touched: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Dinkelbach,
    Bisection,
}

/// What a driver hands back before any post-processing.
#[derive(Debug, Clone)]
pub struct DriverOutcome<F> {
    pub set: NodeSet,
    pub objective: F,
    pub iterations: usize,
    pub trace: Vec<TraceStep>,
    pub arcs_touched: usize,
    pub arc_scans: usize,
    pub nodes_touched: usize,
    pub frontier_volume: f64,
}

impl<F> DriverOutcome<F> {
    fn new(set: NodeSet, objective: F) -> Self {
        DriverOutcome {
            set,
            objective,
            iterations: 0,
            trace: Vec::new(),
            arcs_touched: 0,
            arc_scans: 0,
            nodes_touched: 0,
            frontier_volume: 0.0,
        }
    }

    fn absorb(&mut self, solve: &Solve) {
        self.iterations += 1;
        self.arcs_touched = self.arcs_touched.max(solve.arcs_touched);
        self.arc_scans += solve.arc_scans;
        self.nodes_touched = self.nodes_touched.max(solve.nodes_touched);
        self.frontier_volume = self.frontier_volume.max(solve.frontier_volume);
    }
}

fn step<F: Scalar>(delta: &F, cut: &F, g: &F, solve: &Solve) -> TraceStep {
    TraceStep {
        delta: delta.to_f64(),
        cut: cut.to_f64(),
        denominator: g.to_f64(),
        arcs_touched: solve.arcs_touched,
        arc_scans: solve.arc_scans,
        nodes_touched: solve.nodes_touched,
    }
}

/// Dinkelbach's method from `S_1 = R`.
///
/// Every solve counts as an iteration. The loop stops at the first solve
/// whose set does not strictly beat the current ratio.
pub fn dinkelbach<F, S>(graph: &WeightedGraph, objective: &RatioObjective, mut solver: S) -> Result<DriverOutcome<F>>
where
    F: Scalar,
    S: FnMut(&F) -> Result<Solve>,
{
    let reference = objective.reference.clone();
    let (mut cut, mut g) = objective.evaluate::<F>(graph, &reference)?;
    if !(g > F::zero()) {
        return Err(Error::InfeasibleSeed);
    }
    if !(cut > F::zero()) {
        return Ok(DriverOutcome::new(reference, F::zero()));
    }
    let mut delta = cut.clone() / g.clone();
    let mut out = DriverOutcome::new(reference, delta.clone());
    loop {
        let solve = solver(&delta)?;
        out.absorb(&solve);
        out.trace.push(step(&delta, &cut, &g, &solve));
        if solve.set.is_empty() {
            break;
        }
        let (c, d) = objective.evaluate::<F>(graph, &solve.set)?;
        if !(d > F::zero()) {
            break;
        }
        let ratio = c.clone() / d.clone();
        if !(ratio < delta) {
            break;
        }
        delta = ratio;
        cut = c;
        g = d;
        out.set = solve.set;
        out.objective = delta.clone();
    }
    Ok(out)
}

/// Bisection on `δ` until `δ_max - δ_min <= eps·δ_min`, followed by one
/// more solve at `δ_max`.
pub fn bisection<F, S>(
    graph: &WeightedGraph,
    objective: &RatioObjective,
    eps: &F,
    mut solver: S,
) -> Result<DriverOutcome<F>>
where
    F: Scalar,
    S: FnMut(&F) -> Result<Solve>,
{
    if !(*eps > F::zero()) || *eps > F::one() {
        return Err(Error::InvalidParameter("eps must lie in (0, 1]".into()));
    }
    let reference = objective.reference.clone();
    let (cut, g) = objective.evaluate::<F>(graph, &reference)?;
    if !(g > F::zero()) {
        return Err(Error::InfeasibleSeed);
    }
    if !(cut > F::zero()) {
        return Ok(DriverOutcome::new(reference, F::zero()));
    }
    let mut lo = F::zero();
    let mut hi = cut / g;
    let mut out = DriverOutcome::new(reference, hi.clone());

    while hi.clone() - lo.clone() > eps.clone() * lo.clone() {
        let mid = F::bisect(&lo, &hi);
        let solve = solver(&mid)?;
        out.absorb(&solve);
        let (c, d) = objective.evaluate::<F>(graph, &solve.set)?;
        out.trace.push(step(&mid, &c, &d, &solve));
        if !solve.set.is_empty() && d > F::zero() {
            // the returned set has ratio <= mid; tighten to its ratio
            hi = c / d;
            out.set = solve.set;
            out.objective = hi.clone();
        } else {
            lo = mid;
        }
    }

    let solve = solver(&hi)?;
    out.absorb(&solve);
    let (c, d) = objective.evaluate::<F>(graph, &solve.set)?;
    out.trace.push(step(&hi, &c, &d, &solve));
    if !solve.set.is_empty() && d > F::zero() {
        let ratio = c / d;
        if ratio < out.objective {
            out.objective = ratio;
            out.set = solve.set;
        }
    }
    Ok(out)
}

/// Bisection tolerance that guarantees the exact optimum on integer
/// weights: half of `1/vol(R)²` for MQI and of `1/(q·vol(R̄)·vol(R)²)` for
/// the relative-volume objectives, where `q` is the denominator of the
/// locality parameter (1 for FlowImprove).
pub fn exact_eps_ratio(graph: &WeightedGraph, objective: &RatioObjective) -> Result<Rational> {
    if !graph.has_integer_weights() {
        return Err(Error::NonIntegerWeights);
    }
    let vol_r = objective.reference_volume() as i128;
    let mut denom = vol_r.checked_mul(vol_r).ok_or(Error::Overflow)?;
    let spread = match objective.kind {
        ObjectiveKind::Mqi => 1,
        ObjectiveKind::FlowImprove => objective.complement_volume() as i128,
        ObjectiveKind::LocalFlowImprove { delta } => {
            let q = *rational_from_f64(delta)?.denom();
            (objective.complement_volume() as i128).checked_mul(q).ok_or(Error::Overflow)?
        }
    };
    denom = denom.checked_mul(spread).and_then(|d| d.checked_mul(2)).ok_or(Error::Overflow)?;
    Ok(Rational::new(1, denom))
}

pub fn exact_eps(graph: &WeightedGraph, objective: &RatioObjective) -> Result<f64> {
    exact_eps_ratio(graph, objective).map(|r| r.to_f64())
}

/// Among the connected pieces of `set` (in the induced subgraph), the
/// smallest one whose ratio is no worse than `best`. Returns `set` itself
/// when none qualifies or it is already connected.
pub fn smallest_optimal_component<F: Scalar>(
    graph: &WeightedGraph,
    objective: &RatioObjective,
    set: &NodeSet,
    best: &F,
) -> Result<NodeSet> {
    let pieces = induced_components(graph, set);
    if pieces.len() <= 1 {
        return Ok(set.clone());
    }
    let mut chosen: Option<NodeSet> = None;
    for piece in pieces {
        if let Some(r) = objective.ratio::<F>(graph, &piece)? {
            let better = chosen.as_ref().is_none_or(|c| piece.len() < c.len());
            if !(r > *best) && better {
                chosen = Some(piece);
            }
        }
    }
    Ok(chosen.unwrap_or_else(|| set.clone()))
}

fn induced_components(graph: &WeightedGraph, set: &NodeSet) -> Vec<NodeSet> {
    let members = set.members();
    let mut seen = vec![false; members.len()];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..members.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut piece = Vec::new();
        while let Some(i) = stack.pop() {
            piece.push(members[i]);
            for (v, _) in graph.neighbors(members[i]) {
                if let Ok(j) = members.binary_search(&v) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        out.push(NodeSet::from_unsorted(graph, piece));
    }
    out
}
