mod common;

use common::random_connected;
use flowimprove::io::{load_edge_list, EdgeListOptions};
use flowimprove::metrics::{aux_metrics, boundary, conductance, cut, rvol, set_metrics, theta};
use flowimprove::{generators, NodeSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph_and_set(seed: u64, n: usize) -> (common::Instance, NodeSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_connected(&mut rng, n, 0.3, 3);
    let ids: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let set = NodeSet::new(&inst.graph, ids).unwrap();
    (inst, set)
}

proptest! {
    #[test]
    fn cut_is_symmetric_and_volumes_add_up(seed in any::<u64>(), n in 2usize..30) {
        let (inst, s) = graph_and_set(seed, n);
        let g = &inst.graph;
        let c = s.complement(g);
        prop_assert!((cut(g, &s) - cut(g, &c)).abs() < 1e-9);
        prop_assert!((s.volume() + c.volume() - g.total_volume()).abs() < 1e-9);
    }

    #[test]
    fn rvol_vanishes_on_whole_graph_at_theta(seed in any::<u64>(), n in 3usize..30) {
        let (inst, r) = graph_and_set(seed, n);
        let g = &inst.graph;
        prop_assume!(!r.is_empty() && r.len() < n);
        let all = NodeSet::all(g);
        prop_assert!(rvol(g, &all, &r, theta(g, &r)).abs() < 1e-9 * g.total_volume());
    }

    #[test]
    fn ncut_between_phi_and_twice_phi(seed in any::<u64>(), n in 3usize..30) {
        let (inst, s) = graph_and_set(seed, n);
        let g = &inst.graph;
        prop_assume!(!s.is_empty() && s.len() < n);
        let phi = conductance(g, &s).unwrap().conductance;
        let ncut = aux_metrics(g, &s).unwrap().ncut;
        prop_assert!(phi <= ncut + 1e-12);
        prop_assert!(ncut <= 2.0 * phi + 1e-12);
    }

    #[test]
    fn metrics_match_raw_edge_list(seed in any::<u64>(), n in 3usize..25) {
        let (inst, s) = graph_and_set(seed, n);
        prop_assume!(!s.is_empty() && s.len() < n);
        let inside = |u: usize| s.contains(u);
        let raw_cut: i64 = inst.edges.iter().filter(|e| inside(e.0) != inside(e.1)).map(|e| e.2).sum();
        let deg = inst.degrees();
        let vol: i64 = s.iter().map(|u| deg[u]).sum();
        let total: i64 = deg.iter().sum();
        let m = set_metrics(&inst.graph, &s).unwrap();
        prop_assert_eq!(m.cut, raw_cut as f64);
        prop_assert_eq!(m.vol, vol as f64);
        prop_assert_eq!(m.vol_bar, (total - vol) as f64);
        let phi = raw_cut as f64 / vol.min(total - vol) as f64;
        prop_assert!((m.conductance - phi).abs() < 1e-15);
        let k = s.len() as f64;
        prop_assert!((m.expansion - raw_cut as f64 / k.min(n as f64 - k)).abs() < 1e-12);
        prop_assert!((m.sparsity - raw_cut as f64 / (k * (n as f64 - k))).abs() < 1e-12);
        prop_assert!((m.ratio_cut - raw_cut as f64 / k).abs() < 1e-12);
    }
}

#[test]
fn parser_examples() {
    let g = load_edge_list("0 1\n1 2".as_bytes(), &EdgeListOptions::default()).unwrap().0;
    assert_eq!(g.degrees(), &[1.0, 2.0, 1.0]);
    assert_eq!(g.total_volume(), 4.0);
    let g = load_edge_list("0 1 2.0\n0 1 3.0".as_bytes(), &EdgeListOptions::default()).unwrap().0;
    assert_eq!(g.edge_weight(0, 1), 5.0);
    let g = load_edge_list("0 0 1.0\n0 1 1.0".as_bytes(), &EdgeListOptions::default()).unwrap().0;
    assert_eq!(g.degrees(), &[1.0, 1.0]);
}

#[test]
fn cycle_and_dumbbell_values() {
    let c8 = generators::cycle(8);
    let s = NodeSet::new(&c8, [0, 1, 2]).unwrap();
    assert_eq!(cut(&c8, &s), 2.0);
    assert_eq!(cut(&c8, &NodeSet::all(&c8)), 0.0);
    let aux = aux_metrics(&c8, &s).unwrap();
    assert!((aux.ncut - (2.0 / 6.0 + 2.0 / 10.0)).abs() < 1e-12);
    assert!((aux.expansion - 2.0 / 3.0).abs() < 1e-12);
    assert!((aux.sparsity - 2.0 / 15.0).abs() < 1e-12);
    assert_eq!(boundary(&c8, &NodeSet::new(&c8, [0]).unwrap()).members(), &[1, 7]);
    assert!(boundary(&c8, &NodeSet::all(&c8)).is_empty());

    let d = generators::dumbbell(4, 6);
    let left = NodeSet::new(&d.graph, d.left.clone()).unwrap();
    assert_eq!(cut(&d.graph, &left), 1.0);
    assert!((conductance(&d.graph, &left).unwrap().conductance - 1.0 / 13.0).abs() < 1e-15);
    assert_eq!(boundary(&d.graph, &left).members(), &[d.right_bridge]);
    // the larger side switches to the complement volume
    let right = left.complement(&d.graph);
    assert_eq!(conductance(&d.graph, &right).unwrap().conductance, 1.0 / 13.0);
}
