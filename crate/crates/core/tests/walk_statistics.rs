use chordwalk_core::corpus;
use chordwalk_core::generators::random_regular;
use chordwalk_core::oracle::{exact_self_avoiding_prob, exact_walk_matrix, ratio_to_f64};
use chordwalk_core::walk::{
    cross_edge_tail_estimate, dominated_set_sample, endpoint_histogram, intersection_tail_estimate, random_walk_stream,
    reversal_ratio_check, self_avoiding_estimate, subsample,
};
use chordwalk_core::{BipartiteGraph, Graph, Side, VertexSet};

#[test]
fn empirical_endpoints_match_exact_walk_powers() {
    let g = Graph::complete_bipartite(3, 3);
    let trials = 100_000;
    let hist = endpoint_histogram(&g, 0, 3, trials, 11).unwrap();
    let exact = exact_walk_matrix(&g, 3).unwrap();
    let tv: f64 = (0..g.n()).map(|u| (hist[u] as f64 / trials as f64 - exact.entry_f64(0, u)).abs()).sum::<f64>() / 2.0;
    assert!(tv <= 0.02, "total variation {tv}");
}

#[test]
fn self_avoiding_estimates_cover_exact_values() {
    for (g, v, len, seed) in [(Graph::complete(4), 0, 2, 1), (Graph::cycle(10), 3, 3, 2), (Graph::petersen(), 0, 4, 3)] {
        let exact = ratio_to_f64(&exact_self_avoiding_prob(&g, v, len).unwrap().0);
        let est = self_avoiding_estimate(&g, v, len, 20_000, seed).unwrap();
        assert!(est.covers(exact), "estimate {} vs exact {exact}", est.point);
    }
}

/// Mean number of distinct vertices hit by `draws`
/// independent uniform picks, each kept with probability `q`, from `size`.
fn expected_distinct(size: usize, draws: usize, q: f64) -> f64 {
    let miss = 1.0 - q / size as f64;
    size as f64 * (1.0 - miss.powi(draws as i32))
}

#[test]
fn dominated_sample_mean_matches_expectation() {
    let b = BipartiteGraph::from_graph(Graph::complete_bipartite(8, 8)).unwrap();
    let (t, k, q) = (60, 3, 0.4);
    let rounds: usize = t / 3;
    let expected = expected_distinct(8, rounds.div_ceil(2), q) + expected_distinct(8, rounds / 2, q);
    let samples: Vec<f64> = (0..10_000).map(|s| dominated_set_sample(&b, t, k, q, s).unwrap().len() as f64).collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - expected).abs() <= 3.0 * (var / n).sqrt(), "mean {mean} vs {expected}");
}

#[test]
fn walk_subsample_dominates_auxiliary_set() {
    let b = BipartiteGraph::from_graph(Graph::complete_bipartite(8, 8)).unwrap();
    let x: VertexSet = [0, 1, 2, 8, 9].into_iter().collect();
    let start = (0..b.n()).find(|&v| b.side_of(v) == Side::Y).unwrap();
    let (t, k, q, trials) = (30, 3, 0.5, 20_000u64);
    let mut walk_counts = [0u64; 16];
    let mut aux_counts = [0u64; 16];
    for s in 0..trials {
        let trace = random_walk_stream(b.graph(), start, t, 5, s).unwrap();
        let hits = subsample(&trace, k).unwrap().distinct().iter().filter(|&v| x.contains(v)).count();
        walk_counts[hits] += 1;
        let aux = dominated_set_sample(&b, t, k, q, 1_000_000 + s).unwrap();
        aux_counts[aux.iter().filter(|&v| x.contains(v)).count()] += 1;
    }
    let (mut walk_cdf, mut aux_cdf) = (0.0, 0.0);
    for j in 0..16 {
        walk_cdf += walk_counts[j] as f64 / trials as f64;
        aux_cdf += aux_counts[j] as f64 / trials as f64;
        assert!(walk_cdf <= aux_cdf + 0.01, "P(hits <= {j}): walk {walk_cdf} aux {aux_cdf}");
    }
}

#[test]
fn intersection_tail_stays_below_bound() {
    let b = BipartiteGraph::from_graph(Graph::complete_bipartite(50, 50)).unwrap();
    let x: VertexSet = (0..10).chain(50..60).collect();
    let tail = intersection_tail_estimate(&b, &x, 200, 3, 100.0, 5_000, 9).unwrap();
    assert!(tail.estimate.clopper_pearson.0 <= tail.bound, "{tail:?}");
    let half: VertexSet = (0..50).collect();
    let large = intersection_tail_estimate(&b, &half, 300, 3, 10.0, 2_000, 9).unwrap();
    assert!(large.threshold >= 5.0);
    assert!(large.estimate.clopper_pearson.0 <= large.bound, "{large:?}");
}

#[test]
fn cross_edge_tail_on_random_regular_graph() {
    let g = random_regular(200, 20, 4).unwrap();
    let est = cross_edge_tail_estimate(&g, 0, 1, 150, 5, 100.0, 2_000, 3).unwrap();
    assert!(est.mean_cross_edges > est.threshold);
    assert!(est.estimate.clopper_pearson.0 <= (-est.threshold).exp(), "{est:?}");
}

#[test]
fn reversal_identity_holds_on_corpus() {
    let graphs = corpus::named_small().into_iter().chain(corpus::random_connected(20, 10..=40, 3));
    for (name, g) in graphs {
        for t in [1, 2, 7, 20, 50] {
            for (v, u) in [(0, g.n() - 1), (1 % g.n(), g.n() / 2)] {
                assert!(reversal_ratio_check(&g, v, u, t).unwrap(), "{name} t={t} ({v},{u})");
            }
        }
    }
}
