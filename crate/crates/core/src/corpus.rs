//! Named small graphs and seeded random families used as a regression
//! corpus.

use crate::generators;
use crate::graph::Graph;

/// Graph on `2^dim` vertices joining ids that differ in one bit.
pub fn hypercube(dim: usize) -> Graph {
    let n = 1usize << dim;
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|v| (0..dim).map(move |b| (v, v ^ (1 << b)))).filter(|(u, v)| u < v).collect();
    Graph::from_edges(n, &edges).expect("valid hypercube")
}

/// Hub 0 joined to every vertex of the cycle `1..=rim`.
pub fn wheel(rim: usize) -> Graph {
    let cycle = Graph::cycle(rim);
    let mut edges: Vec<(usize, usize)> = cycle.edges().map(|(u, v)| (u + 1, v + 1)).collect();
    edges.extend((1..=rim).map(|v| (0, v)));
    Graph::from_edges(rim + 1, &edges).expect("valid wheel")
}

/// Two copies of `K_size` joined by one edge.
pub fn barbell(size: usize) -> Graph {
    Graph::complete(size)
        .disjoint_union(&Graph::complete(size))
        .with_edges(&[(size - 1, size)])
        .expect("valid barbell")
}

/// Named connected graphs on at most 24 vertices.
pub fn named_small() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 3..=10 {
        out.push((format!("K{n}"), Graph::complete(n)));
    }
    for n in 3..=16 {
        out.push((format!("C{n}"), Graph::cycle(n)));
    }
    for n in 2..=10 {
        out.push((format!("P{n}"), Graph::path(n)));
    }
    for (a, b) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 3), (3, 5), (4, 4), (5, 7), (6, 6), (8, 8), (12, 12)] {
        out.push((format!("K{a},{b}"), Graph::complete_bipartite(a, b)));
    }
    for leaves in [3, 6, 10] {
        out.push((format!("star{leaves}"), Graph::star(leaves)));
    }
    out.push(("petersen".into(), Graph::petersen()));
    out.push(("C6+chord".into(), Graph::cycle(6).with_edges(&[(0, 3)]).expect("chord")));
    out.push(("Q3".into(), hypercube(3)));
    out.push(("Q4".into(), hypercube(4)));
    out.push(("wheel6".into(), wheel(6)));
    out.push(("barbell4".into(), barbell(4)));
    out.push(("barbell10".into(), barbell(10)));
    out.push((
        "bridged-triangles".into(),
        Graph::complete(3).disjoint_union(&Graph::complete(3)).with_edges(&[(2, 3)]).expect("bridge"),
    ));
    out
}

/// `count` connected `G(n, p)` graphs with `n` in `n_range` and `p` in
/// `[0.2, 0.7]`, drawn from consecutive seeds starting at `seed`.
pub fn random_connected(count: usize, n_range: std::ops::RangeInclusive<usize>, seed: u64) -> Vec<(String, Graph)> {
    let span = n_range.end() - n_range.start() + 1;
    let mut out = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        let n = n_range.start() + (s as usize * 7919) % span;
        let p = 0.2 + 0.5 * ((s * 2654435761) % 1000) as f64 / 1000.0;
        let g = generators::gnp(n, p, s).expect("valid probability");
        if g.n() >= 2 && g.is_connected() {
            out.push((format!("gnp-n{n}-s{s}"), g));
        }
        s += 1;
    }
    out
}

/// `count` connected random bipartite graphs with `a + b` in `n_range`.
pub fn random_connected_bipartite(
    count: usize,
    n_range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Vec<(String, Graph)> {
    let span = n_range.end() - n_range.start() + 1;
    let mut out = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        let n = (n_range.start() + (s as usize * 104729) % span).max(2);
        let a = 1 + (s as usize * 31) % (n - 1);
        let p = 0.25 + 0.5 * ((s * 40503) % 1000) as f64 / 1000.0;
        let g = generators::random_bipartite(a, n - a, p, s).expect("valid probability");
        if g.is_connected() {
            out.push((format!("bip-a{a}-b{}-s{s}", n - a), g));
        }
        s += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_graphs_are_connected_and_small() {
        for (name, g) in named_small() {
            assert!(g.is_connected(), "{name}");
            assert!(g.n() <= 24, "{name}");
        }
        assert_eq!(hypercube(3).m(), 12);
        assert_eq!(wheel(5).m(), 10);
    }

    #[test]
    fn random_families_are_deterministic() {
        let a = random_connected(5, 6..=12, 1);
        assert_eq!(a, random_connected(5, 6..=12, 1));
        assert!(a.iter().all(|(_, g)| g.is_connected() && (6..=12).contains(&g.n())));
        let b = random_connected_bipartite(5, 6..=20, 1);
        assert!(b.iter().all(|(_, g)| g.is_connected()));
    }
}
