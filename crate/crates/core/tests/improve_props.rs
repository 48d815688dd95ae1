mod common;

use common::{random_connected, random_seed, Instance};
use flowimprove::improve::{
    fi_subproblem, improve, mqi_subproblem, solve_explicit, solve_local, z_value, Algorithm, Arithmetic,
    ImproveOptions, ImproveResult, LfiSolver,
};
use flowimprove::metrics::{conductance, theta};
use flowimprove::scalar::Rational;
use flowimprove::{Mode, NodeSet, WeightedGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, n: usize, p: f64) -> (Instance, NodeSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_connected(&mut rng, n, p, 3);
    let r = random_seed(&mut rng, &inst);
    (inst, r)
}

fn run(g: &WeightedGraph, r: &NodeSet, alg: Algorithm) -> ImproveResult {
    improve(g, r, alg, &ImproveOptions::default()).unwrap()
}

fn small_side(g: &WeightedGraph, s: &NodeSet) -> bool {
    !s.is_empty() && s.volume() <= g.total_volume() / 2.0
}

/// Seed-sized sets on a larger graph, built without the exhaustive table.
fn medium(seed: u64, n: usize) -> (WeightedGraph, NodeSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_connected(&mut rng, n, 4.0 / n as f64, 3);
    let g = inst.graph;
    loop {
        let k = rng.gen_range(1..=n / 3);
        let start = rng.gen_range(0..n);
        let mut ids = vec![start];
        let mut i = 0;
        while ids.len() < k && i < ids.len() {
            for (v, _) in g.neighbors(ids[i]) {
                if ids.len() < k && !ids.contains(&v) {
                    ids.push(v);
                }
            }
            i += 1;
        }
        let r = NodeSet::new(&g, ids).unwrap();
        if r.volume() <= g.total_volume() / 2.0 {
            return (g, r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ordering_on_medium_graphs(seed in any::<u64>(), n in 20usize..=60, delta in prop::sample::select(vec![0.1, 1.0, 10.0])) {
        let (g, r) = medium(seed, n);
        let fi = run(&g, &r, Algorithm::FlowImprove);
        let lfi = run(&g, &r, Algorithm::LocalFlowImprove { delta });
        let mqi = run(&g, &r, Algorithm::Mqi);
        prop_assert!(mqi.set.iter().all(|u| r.contains(u)));
        let phi = |res: &ImproveResult| conductance(&g, &res.set).unwrap().conductance;
        if small_side(&g, &lfi.set) && !lfi.flipped {
            prop_assert!(phi(&lfi) <= phi(&mqi) + 1e-12);
            if small_side(&g, &fi.set) && !fi.flipped {
                prop_assert!(phi(&fi) <= phi(&lfi) + 1e-12);
            }
        }
    }

    #[test]
    fn lfi_volume_bound(seed in any::<u64>(), n in 20usize..=60, delta in 0.05f64..20.0) {
        let (g, r) = medium(seed, n);
        let lfi = run(&g, &r, Algorithm::LocalFlowImprove { delta });
        prop_assume!(!lfi.flipped);
        let vr = r.volume();
        let vbar = g.total_volume() - vr;
        prop_assert!(lfi.set.volume() < (1.0 + vbar / (vr + delta * vbar)) * vr);
    }

    #[test]
    fn local_equals_explicit(seed in any::<u64>(), n in 10usize..=200, num in 1i128..40, den in 1i128..40, extra in 0i128..30) {
        let (g, r) = medium(seed, n);
        let vr = r.volume() as i128;
        let theta = Rational::new(vr, g.total_volume() as i128 - vr);
        let sigma = theta + Rational::new(extra, 10);
        let delta = Rational::new(num, den * 10);
        let (local, frontier, _) = solve_local(&g, &r, &delta, &sigma).unwrap();
        let explicit = solve_explicit(&g, &r, &delta, &sigma).unwrap();
        prop_assert_eq!(local.set.members(), explicit.set.members());
        prop_assert!(frontier.materialized <= g.node_count());
    }

    #[test]
    fn lfi_zero_matches_fi_and_huge_matches_mqi(seed in any::<u64>(), n in 4usize..=12) {
        let (inst, r) = instance(seed, n, 0.35);
        let g = &inst.graph;
        let fi = run(g, &r, Algorithm::FlowImprove);
        let lfi0 = run(g, &r, Algorithm::LocalFlowImprove { delta: 0.0 });
        prop_assert_eq!(fi.set.members(), lfi0.set.members());
        prop_assert_eq!(fi.exact_objective, lfi0.exact_objective);
        let mqi = run(g, &r, Algorithm::Mqi);
        let big = run(g, &r, Algorithm::LocalFlowImprove { delta: 2.0 * r.volume() });
        prop_assert_eq!(mqi.set.members(), big.set.members());
    }

    #[test]
    fn float_mode_agrees_with_exact(seed in any::<u64>(), n in 4usize..=12) {
        let (inst, r) = instance(seed, n, 0.35);
        let g = &inst.graph;
        for alg in [Algorithm::Mqi, Algorithm::FlowImprove, Algorithm::LocalFlowImprove { delta: 1.0 }] {
            let exact = run(g, &r, alg);
            let float = improve(g, &r, alg, &ImproveOptions { arithmetic: Arithmetic::Float, ..Default::default() }).unwrap();
            prop_assert!((exact.objective - float.objective).abs() <= 1e-9 * exact.objective.max(1e-9));
        }
    }

    #[test]
    fn subproblems_minimize_z(seed in any::<u64>(), n in 3usize..=10, num in 1i64..30) {
        let (inst, r) = instance(seed, n, 0.35);
        let g = &inst.graph;
        let delta = num as f64 / 30.0;
        let th = theta(g, &r);
        let table: Vec<NodeSet> = (0..1u32 << n).map(|m| inst.set_of(m)).collect();
        let best_fi = table.iter().map(|s| z_value(g, &r, s, delta, th)).fold(f64::INFINITY, f64::min);
        let got = fi_subproblem(g, &r, delta, th).unwrap();
        prop_assert!((z_value(g, &r, &got, delta, th) - best_fi).abs() < 1e-9);
        // MQI: sets inside R, with vol(S) in place of rvol
        let best_mqi = table
            .iter()
            .filter(|s| s.iter().all(|u| r.contains(u)))
            .map(|s| z_value(g, &r, s, delta, 0.0))
            .fold(f64::INFINITY, f64::min);
        let got = mqi_subproblem(g, &r, delta).unwrap();
        prop_assert!(got.iter().all(|u| r.contains(u)));
        prop_assert!((z_value(g, &r, &got, delta, 0.0) - best_mqi).abs() < 1e-9);
    }

    #[test]
    fn explicit_solver_option_matches_local(seed in any::<u64>(), n in 4usize..=12, delta in prop::sample::select(vec![0.1, 1.0, 10.0])) {
        let (inst, r) = instance(seed, n, 0.35);
        let g = &inst.graph;
        let alg = Algorithm::LocalFlowImprove { delta };
        let local = run(g, &r, alg);
        let explicit = improve(g, &r, alg, &ImproveOptions { lfi_solver: LfiSolver::Explicit, ..Default::default() }).unwrap();
        prop_assert_eq!(local.set.members(), explicit.set.members());
        prop_assert_eq!(local.exact_objective, explicit.exact_objective);
    }

    #[test]
    fn dinkelbach_traces_shrink(seed in any::<u64>(), n in 20usize..=60, delta in prop::sample::select(vec![0.1, 1.0, 10.0])) {
        let (g, r) = medium(seed, n);
        let cut_r = flowimprove::metrics::cut(&g, &r);
        for alg in [Algorithm::Mqi, Algorithm::FlowImprove, Algorithm::LocalFlowImprove { delta }] {
            let res = run(&g, &r, alg);
            prop_assert!(res.iterations as f64 <= cut_r.max(1.0));
            for w in res.trace.windows(2) {
                prop_assert!(w[1].delta < w[0].delta);
                prop_assert!(w[1].cut < w[0].cut);
                prop_assert!(w[1].denominator < w[0].denominator);
            }
        }
    }

    #[test]
    fn bisection_with_float_eps(seed in any::<u64>(), n in 4usize..=12) {
        let (inst, r) = instance(seed, n, 0.35);
        let g = &inst.graph;
        let exact = run(g, &r, Algorithm::FlowImprove);
        let opts = ImproveOptions { mode: Mode::Bisection, eps: Some(1e-10), arithmetic: Arithmetic::Float, ..Default::default() };
        let bis = improve(g, &r, Algorithm::FlowImprove, &opts).unwrap();
        prop_assert!(bis.objective <= exact.objective * (1.0 + 1e-9) + 1e-12);
    }
}

#[test]
fn sigma_beyond_seed_volume_stays_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let inst = random_connected(&mut rng, 10, 0.3, 3);
        let r = random_seed(&mut rng, &inst);
        let g = &inst.graph;
        let delta = 0.2;
        let sigma = 2.0 * r.volume();
        let (set, frontier, _) = flowimprove::improve::lfi_subproblem(g, &r, delta, sigma).unwrap();
        assert!(frontier.bottleneck.is_empty());
        assert_eq!(set, mqi_subproblem(g, &r, delta).unwrap());
    }
}
