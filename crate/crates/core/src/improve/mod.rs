//! MQI, FlowImprove and LocalFlowImprove.
//!
//! All three minimize `cut(S)/g(S)` with the drivers in [`crate::frac`];
//! they differ in the denominator and in the network each subproblem is
//! solved on.

mod augment;
mod local;

pub use augment::{solve_explicit, solve_mqi};
pub use local::{solve_local, LocalFrontier};

use crate::error::{Error, Result};
use crate::flow::FlowStats;
use crate::frac::{
    bisection, dinkelbach, exact_eps_ratio, smallest_optimal_component, Mode, ObjectiveKind, RatioObjective, Solve,
    TraceStep,
};
use crate::graph::{NodeSet, WeightedGraph};
use crate::metrics;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Mqi,
    FlowImprove,
    /// `delta` is the locality parameter: `σ = vol(R)/vol(R̄) + delta`.
    LocalFlowImprove { delta: f64 },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Mqi => "mqi",
            Algorithm::FlowImprove => "fi",
            Algorithm::LocalFlowImprove { .. } => "lfi",
        }
    }

    pub fn objective_kind(&self) -> ObjectiveKind {
        match *self {
            Algorithm::Mqi => ObjectiveKind::Mqi,
            Algorithm::FlowImprove => ObjectiveKind::FlowImprove,
            Algorithm::LocalFlowImprove { delta } => ObjectiveKind::LocalFlowImprove { delta },
        }
    }

    /// FlowImprove results, and LocalFlowImprove with `delta = 0` (the same
    /// objective), are reported on the smaller-volume side.
    fn flips(&self) -> bool {
        match *self {
            Algorithm::Mqi => false,
            Algorithm::FlowImprove => true,
            Algorithm::LocalFlowImprove { delta } => delta == 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    /// Exact when every weight is an integer, floating point otherwise.
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfiSolver {
    /// Grow the network from the seed (the default).
    Local,
    /// Build the whole-graph network; used as a reference.
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImproveOptions {
    pub mode: Mode,
    /// Bisection tolerance; defaults to the exactness threshold for integer
    /// weights and `1e-9` otherwise.
    pub eps: Option<f64>,
    pub arithmetic: Arithmetic,
    /// Accept seeds with `vol(R) > vol(G)/2`.
    pub allow_large_seed: bool,
    /// Shrink the result to its smallest connected piece with the same ratio.
    pub reduce_components: bool,
    pub lfi_solver: LfiSolver,
}

impl Default for ImproveOptions {
    fn default() -> Self {
        ImproveOptions {
            mode: Mode::Dinkelbach,
            eps: None,
            arithmetic: Arithmetic::Auto,
            allow_large_seed: false,
            reduce_components: true,
            lfi_solver: LfiSolver::Local,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ImproveResult {
    pub algorithm: Algorithm,
    pub mode: Mode,
    pub set: NodeSet,
    /// Optimal ratio `cut(S)/g(S)` before any flip.
    pub objective: f64,
    /// The same ratio as an exact fraction when exact arithmetic was used.
    pub exact_objective: Option<Rational>,
    /// What `objective` measures: `conductance`, `ncut_prime` (MQI on an
    /// oversized seed) or `relative_conductance`.
    pub objective_label: &'static str,
    pub cut: f64,
    pub volume: f64,
    /// Conductance of `set`; `None` when undefined.
    pub conductance: Option<f64>,
    pub iterations: usize,
    /// Largest network built by any subproblem, in arc pairs.
    pub arcs_touched: usize,
    pub arc_scans: usize,
    pub nodes_touched: usize,
    /// Largest bottleneck-set volume reached by the local solver.
    pub frontier_volume: f64,
    /// True when `set` is the complement of the optimizer.
    pub flipped: bool,
    pub trace: Vec<TraceStep>,
}

pub fn improve(
    graph: &WeightedGraph,
    reference: &NodeSet,
    algorithm: Algorithm,
    options: &ImproveOptions,
) -> Result<ImproveResult> {
    if reference.is_empty() {
        return Err(Error::EmptySet);
    }
    let oversized = reference.volume() > graph.total_volume() / 2.0;
    if oversized && !options.allow_large_seed {
        return Err(Error::SeedTooLarge {
            seed_volume: reference.volume(),
            total_volume: graph.total_volume(),
        });
    }
    let objective = RatioObjective::new(graph, reference.clone(), algorithm.objective_kind())?;
    let exact = match options.arithmetic {
        Arithmetic::Auto => graph.has_integer_weights(),
        Arithmetic::Exact if !graph.has_integer_weights() => return Err(Error::NonIntegerWeights),
        Arithmetic::Exact => true,
        Arithmetic::Float => false,
    };
    let mut result = if exact {
        run::<Rational>(graph, &objective, algorithm, options)?
    } else {
        run::<f64>(graph, &objective, algorithm, options)?
    };
    if algorithm == Algorithm::Mqi && oversized {
        result.objective_label = "ncut_prime";
    }
    Ok(result)
}

pub fn mqi(graph: &WeightedGraph, reference: &NodeSet, options: &ImproveOptions) -> Result<ImproveResult> {
    improve(graph, reference, Algorithm::Mqi, options)
}

pub fn flow_improve(graph: &WeightedGraph, reference: &NodeSet, options: &ImproveOptions) -> Result<ImproveResult> {
    improve(graph, reference, Algorithm::FlowImprove, options)
}

pub fn local_flow_improve(
    graph: &WeightedGraph,
    reference: &NodeSet,
    delta: f64,
    options: &ImproveOptions,
) -> Result<ImproveResult> {
    improve(graph, reference, Algorithm::LocalFlowImprove { delta }, options)
}

fn run<F: Scalar>(
    graph: &WeightedGraph,
    objective: &RatioObjective,
    algorithm: Algorithm,
    options: &ImproveOptions,
) -> Result<ImproveResult> {
    let kappa = objective.kappa::<F>()?;
    let reference = &objective.reference;
    let solver = |delta: &F| -> Result<Solve> {
        match (algorithm, &kappa) {
            (Algorithm::Mqi, _) => solve_mqi(graph, reference, delta),
            (Algorithm::LocalFlowImprove { .. }, Some(sigma)) if options.lfi_solver == LfiSolver::Local => {
                solve_local(graph, reference, delta, sigma).map(|(solve, _, _)| solve)
            }
            (_, Some(kappa)) => solve_explicit(graph, reference, delta, kappa),
            (_, None) => unreachable!("relative objectives always carry a penalty"),
        }
    };
    let outcome = match options.mode {
        Mode::Dinkelbach => dinkelbach(graph, objective, solver)?,
        Mode::Bisection => {
            let eps = match options.eps {
                Some(e) => F::from_f64(e)?,
                None if F::EXACT => F::from_rational(exact_eps_ratio(graph, objective)?),
                None => F::from_f64(1e-9)?,
            };
            bisection(graph, objective, &eps, solver)?
        }
    };

    let mut set = outcome.set;
    if options.reduce_components && outcome.iterations > 0 {
        set = smallest_optimal_component(graph, objective, &set, &outcome.objective)?;
    }
    let mut flipped = false;
    if algorithm.flips() && 2.0 * set.volume() > graph.total_volume() {
        set = set.complement(graph);
        flipped = true;
    }
    let cut = metrics::cut(graph, &set);
    Ok(ImproveResult {
        algorithm,
        mode: options.mode,
        objective: outcome.objective.to_f64(),
        exact_objective: outcome.objective.as_rational(),
        objective_label: if algorithm == Algorithm::Mqi {
            "conductance"
        } else {
            "relative_conductance"
        },
        cut,
        volume: set.volume(),
        conductance: metrics::conductance(graph, &set).ok().map(|p| p.conductance),
        iterations: outcome.iterations,
        arcs_touched: outcome.arcs_touched,
        arc_scans: outcome.arc_scans,
        nodes_touched: outcome.nodes_touched,
        frontier_volume: outcome.frontier_volume,
        flipped,
        trace: outcome.trace,
        set,
    })
}

/// Minimizer of `cut(S) - δ·vol(S)` over `S ⊆ R`, in floating point.
pub fn mqi_subproblem(graph: &WeightedGraph, reference: &NodeSet, delta: f64) -> Result<NodeSet> {
    if reference.is_empty() {
        return Err(Error::EmptySet);
    }
    solve_mqi(graph, reference, &delta).map(|s| s.set)
}

/// Minimizer of `cut(S) - δ·rvol(S; R, θ)` over all sets, on the whole graph.
pub fn fi_subproblem(graph: &WeightedGraph, reference: &NodeSet, delta: f64, theta: f64) -> Result<NodeSet> {
    solve_explicit(graph, reference, &delta, &theta).map(|s| s.set)
}

/// Minimizer of `cut(S) - δ·rvol(S; R, σ)` found with the local solver.
pub fn lfi_subproblem(
    graph: &WeightedGraph,
    reference: &NodeSet,
    delta: f64,
    sigma: f64,
) -> Result<(NodeSet, LocalFrontier, FlowStats)> {
    solve_local(graph, reference, &delta, &sigma).map(|(s, f, st)| (s.set, f, st))
}

/// `cut(S) - δ·rvol(S; R, κ)`.
pub fn z_value(graph: &WeightedGraph, reference: &NodeSet, set: &NodeSet, delta: f64, kappa: f64) -> f64 {
    metrics::cut(graph, set) - delta * metrics::rvol(graph, set, reference, kappa)
}

/// The weight `κ = δ(σ-θ)/(1+θ)` and shifted parameter `δ + κ` for which
/// the LocalFlowImprove subproblem equals the FlowImprove subproblem at
/// `δ + κ` plus `κ·vol(S)`.
pub fn l1_equivalent(delta: f64, theta: f64, sigma: f64) -> (f64, f64) {
    let kappa = delta * (sigma - theta) / (1.0 + theta);
    (kappa, delta + kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn dumbbell_seed() -> (WeightedGraph, NodeSet) {
        let d = generators::dumbbell(4, 6);
        let mut ids = d.left.clone();
        ids.push(d.right_bridge);
        let r = NodeSet::new(&d.graph, ids).unwrap();
        (d.graph, r)
    }

    #[test]
    fn mqi_on_dumbbell() {
        let (g, r) = dumbbell_seed();
        let res = mqi(&g, &r, &ImproveOptions::default()).unwrap();
        assert_eq!(res.set.members(), &[0, 1, 2, 3]);
        assert_eq!(res.exact_objective, Some(Rational::new(1, 13)));
        assert_eq!(res.trace[0].delta, 5.0 / 19.0);
        assert!(!res.flipped);
    }

    #[test]
    fn mqi_fixed_point_takes_one_solve() {
        let (g, _) = dumbbell_seed();
        let left = NodeSet::new(&g, 0..4).unwrap();
        let res = mqi(&g, &left, &ImproveOptions::default()).unwrap();
        assert_eq!(res.set, left);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn mqi_subproblem_values() {
        let (g, r) = dumbbell_seed();
        let s = mqi_subproblem(&g, &r, 5.0 / 19.0).unwrap();
        assert_eq!(s.members(), &[0, 1, 2, 3]);
        let s = solve_mqi(&g, &r, &Rational::new(1, 14)).unwrap().set;
        assert!(s.is_empty());
    }

    #[test]
    fn bisection_modes_agree() {
        let (g, r) = dumbbell_seed();
        for alg in [Algorithm::Mqi, Algorithm::FlowImprove, Algorithm::LocalFlowImprove { delta: 0.5 }] {
            let dk = improve(&g, &r, alg, &ImproveOptions::default()).unwrap();
            let opts = ImproveOptions {
                mode: Mode::Bisection,
                ..Default::default()
            };
            let bs = improve(&g, &r, alg, &opts).unwrap();
            assert_eq!(dk.exact_objective, bs.exact_objective, "{alg:?}");
        }
    }

    #[test]
    fn local_matches_explicit_on_dumbbell() {
        let (g, r) = dumbbell_seed();
        let theta = Rational::new(19, 25);
        for sigma in [theta, theta + Rational::new(1, 2), Rational::from_integer(30)] {
            for delta in [Rational::new(1, 13), Rational::new(1, 5), Rational::new(5, 19)] {
                let (local, _, _) = solve_local(&g, &r, &delta, &sigma).unwrap();
                let explicit = solve_explicit(&g, &r, &delta, &sigma).unwrap();
                assert_eq!(local.set, explicit.set);
            }
        }
    }

    #[test]
    fn seed_preconditions() {
        let (g, _) = dumbbell_seed();
        let big = NodeSet::new(&g, 0..8).unwrap();
        assert!(matches!(
            mqi(&g, &big, &ImproveOptions::default()),
            Err(Error::SeedTooLarge { .. })
        ));
        let opts = ImproveOptions {
            allow_large_seed: true,
            ..Default::default()
        };
        assert_eq!(mqi(&g, &big, &opts).unwrap().objective_label, "ncut_prime");
        assert_eq!(
            mqi(&g, &NodeSet::empty(), &ImproveOptions::default()).unwrap_err(),
            Error::EmptySet
        );
    }

    #[test]
    fn float_weights_use_float_arithmetic() {
        let (g0, r) = dumbbell_seed();
        let edges: Vec<_> = g0.edges().map(|(u, v, w)| (u, v, w * 0.5)).collect();
        let (g, _) = WeightedGraph::from_edges(g0.node_count(), &edges).unwrap();
        let r = NodeSet::new(&g, r.iter()).unwrap();
        let res = mqi(&g, &r, &ImproveOptions::default()).unwrap();
        assert!(res.exact_objective.is_none());
        assert!((res.objective - 1.0 / 13.0).abs() < 1e-12);
        let opts = ImproveOptions {
            arithmetic: Arithmetic::Exact,
            ..Default::default()
        };
        assert_eq!(mqi(&g, &r, &opts).unwrap_err(), Error::NonIntegerWeights);
    }
}
