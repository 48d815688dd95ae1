use flowimprove::imagegraph::{image_to_graph, kernel_weight, Image, KernelParams};
use proptest::prelude::*;

fn image_strategy() -> impl Strategy<Value = Image> {
    (1usize..8, 1usize..8, prop::sample::select(vec![1usize, 3])).prop_flat_map(|(rows, cols, ch)| {
        prop::collection::vec(0.0f64..=1.0, rows * cols * ch)
            .prop_map(move |data| Image::new(rows, cols, ch, data).unwrap())
    })
}

fn params_strategy() -> impl Strategy<Value = KernelParams> {
    (0.5f64..10.0, 0.1f64..5.0, 0.01f64..2.0).prop_map(|(r, sigma_d2, sigma_i2)| KernelParams { r, sigma_d2, sigma_i2 })
}

proptest! {
    #[test]
    fn graph_matches_direct_formula(image in image_strategy(), params in params_strategy()) {
        let ig = image_to_graph(&image, params).unwrap();
        let g = &ig.graph;
        let n = image.rows * image.cols;
        prop_assert_eq!(g.node_count(), n);
        let reach = params.r.sqrt().floor() as usize;
        let neighborhood = (2 * reach + 1).pow(2);
        prop_assert!(g.edge_count() * 2 <= n * neighborhood);
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let (pu, pv) = (ig.map.position(u), ig.map.position(v));
                let dr = pu.0 as f64 - pv.0 as f64;
                let dc = pu.1 as f64 - pv.1 as f64;
                let spatial2 = dr * dr + dc * dc;
                let color2: f64 = image.pixel(pu.0, pu.1).iter().zip(image.pixel(pv.0, pv.1)).map(|(a, b)| (a - b).powi(2)).sum();
                let w = g.edge_weight(u, v);
                prop_assert_eq!(w, g.edge_weight(v, u));
                if spatial2 <= params.r {
                    let expected = (-spatial2 / params.sigma_d2 - color2 / params.sigma_i2).exp();
                    prop_assert!((w - expected).abs() <= 1e-15 * expected.max(1e-300));
                    prop_assert!(expected == 0.0 || (w > 0.0 && w <= 1.0));
                } else {
                    prop_assert_eq!(w, 0.0);
                }
            }
        }
    }

    #[test]
    fn kernel_is_monotone(s1 in 0.0f64..10.0, s2 in 0.0f64..10.0, c1 in 0.0f64..3.0, c2 in 0.0f64..3.0, params in params_strategy()) {
        let (slo, shi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        let (clo, chi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        prop_assert!(kernel_weight(shi, clo, &params) <= kernel_weight(slo, clo, &params));
        prop_assert!(kernel_weight(slo, chi, &params) <= kernel_weight(slo, clo, &params));
    }
}
