use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqr_core::sfg::{
    decompose, determinant_i_minus_a, enumerate_loops, linear_solve_transfer, mason_transfer, SignalFlowGraph,
};

/// Random graph with ∞-norm of the gain matrix scaled to `radius`, which
/// bounds its spectral radius.
fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, density: f64, radius: f64) -> SignalFlowGraph {
    let n = rng.gen_range(2..=max_nodes);
    let mut raw = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if rng.gen_bool(density) {
                let g = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                raw.push((from, to, g));
            }
        }
    }
    let mut row = vec![0.0; n];
    for &(_, to, g) in &raw {
        row[to] += g.norm();
    }
    let max_row = row.iter().cloned().fold(0.0, f64::max);
    let scale = if max_row > 0.0 { radius / max_row } else { 1.0 };
    let mut g = SignalFlowGraph::with_nodes(n);
    for (from, to, w) in raw {
        g.add_edge(from, to, w * scale).unwrap();
    }
    g
}

/// Every cycle by exhaustive search over subsets and orderings, rooted at
/// the smallest node.
fn brute_force_cycles(g: &SignalFlowGraph) -> Vec<(Vec<usize>, Complex64)> {
    fn extend(
        g: &SignalFlowGraph,
        path: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, Complex64)>,
    ) {
        let n = g.node_count();
        let start = path[0];
        let last = *path.last().unwrap();
        if let Some(close) = g.gain(last, start) {
            let mut gain = close;
            for w in path.windows(2) {
                gain *= g.gain(w[0], w[1]).unwrap();
            }
            out.push((path.clone(), gain));
        }
        for next in start + 1..n {
            if !used[next] && g.gain(last, next).is_some() {
                used[next] = true;
                path.push(next);
                extend(g, path, used, out);
                path.pop();
                used[next] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.node_count() {
        let mut used = vec![false; g.node_count()];
        used[s] = true;
        extend(g, &mut vec![s], &mut used, &mut out);
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[test]
fn complete_digraph_loops_match_brute_force() {
    let mut g = SignalFlowGraph::with_nodes(4);
    for f in 0..4 {
        for t in 0..4 {
            g.add_edge(f, t, Complex64::new(0.1 * (f + 1) as f64, 0.05 * t as f64)).unwrap();
        }
    }
    let loops = enumerate_loops(&g);
    let oracle = brute_force_cycles(&g);
    // 4 self-loops, 6 two-cycles, 8 three-cycles, 6 four-cycles
    assert_eq!(loops.len(), 24);
    assert_eq!(loops.len(), oracle.len());
    for (l, (nodes, gain)) in loops.iter().zip(&oracle) {
        assert_eq!(&l.nodes, nodes);
        assert!((l.gain - gain).norm() < 1e-15);
    }
}

#[test]
fn mason_matches_linear_solve_on_seeded_graphs() {
    let mut worst = 0.0f64;
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 8, 0.3, 0.9);
        for sink in 0..g.node_count() {
            let m = mason_transfer(&g, sink).unwrap();
            let l = linear_solve_transfer(&g, sink).unwrap();
            worst = worst.max((m - l).norm());
        }
    }
    assert!(worst < 1e-10, "max |mason - linear| = {worst:e}");
}

#[test]
fn delta_matches_determinant() {
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let g = random_graph(&mut rng, 8, 0.35, 0.9);
        let d = decompose(&g, g.node_count() - 1).unwrap();
        let det = determinant_i_minus_a(&g);
        assert!((d.delta - det).norm() <= 1e-10 * det.norm(), "seed {seed}");
        for set in &d.nontouching_sets {
            for (i, &a) in set.iter().enumerate() {
                for &b in &set[i + 1..] {
                    assert!(d.loops[a].nodes.iter().all(|v| !d.loops[b].nodes.contains(v)));
                }
            }
        }
    }
}

#[test]
fn loop_order_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = random_graph(&mut rng, 8, 0.5, 0.9);
    let a = enumerate_loops(&g);
    let b = enumerate_loops(&g.clone());
    assert_eq!(a, b);
    let keys: Vec<_> = a.iter().map(|l| l.nodes.clone()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for l in &a {
        assert_eq!(l.nodes[0], *l.nodes.iter().min().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn source_scaling_is_exact(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // the identity needs a source without incoming edges
        let full = random_graph(&mut rng, 6, 0.4, 0.8);
        let mut g = SignalFlowGraph::with_nodes(full.node_count());
        for (f, t, w) in full.edges().filter(|&(_, t, _)| t != 0) {
            g.add_edge(f, t, w).unwrap();
        }
        let s = Complex64::new(re, im);
        let mut scaled = g.clone();
        scaled.scale_source_edges(s);
        for sink in 1..g.node_count() {
            let t = mason_transfer(&g, sink).unwrap();
            let ts = mason_transfer(&scaled, sink).unwrap();
            prop_assert!((ts - s * t).norm() <= 1e-12 * (1.0 + (s * t).norm()));
        }
    }

    #[test]
    fn loops_are_simple_cycles(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 7, 0.4, 0.9);
        let loops = enumerate_loops(&g);
        let oracle = brute_force_cycles(&g);
        prop_assert_eq!(loops.len(), oracle.len());
        for l in &loops {
            let mut seen = l.nodes.clone();
            seen.sort();
            seen.dedup();
            prop_assert_eq!(seen.len(), l.nodes.len());
        }
    }
}
