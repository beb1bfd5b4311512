//! Seeded random graph models.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph, Side};
use crate::rng::{self, Rng};

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")))
    }
}

/// Erdős–Rényi `G(n, p)`: pairs `u < v` are visited in lexicographic order.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = rng::stream(seed, 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng::bernoulli(&mut rng, p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Random bipartite graph on `a + b` vertices (side X is `0..a`), each
/// cross pair present with probability `p`.
pub fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = rng::stream(seed, 0);
    let mut edges = Vec::new();
    for u in 0..a {
        for v in a..a + b {
            if rng::bernoulli(&mut rng, p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(a + b, &edges)
}

/// Random `d`-regular graph: a uniform pairing of `n·d` half-edges, then
/// random double switches until no loop or repeated edge remains.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(Error::InvalidParameter(format!("no {d}-regular graph on {n} vertices")));
    }
    let mut rng = rng::stream(seed, 0);
    let mut points: Vec<usize> = (0..n * d).map(|i| i / d.max(1)).collect();
    rng::shuffle(&mut rng, &mut points);
    let mut pairs: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0], c[1])).collect();
    repair_pairs(&mut pairs, &mut rng, |_, _| true)?;
    Graph::from_edges(n, &pairs)
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Rewires loops and repeated pairs with random switches
/// `{a,b},{c,d} -> {a,c},{b,d}` (or `{a,d},{b,c}` when `allowed` says so),
/// keeping every degree.
fn repair_pairs(
    pairs: &mut [(usize, usize)],
    rng: &mut Rng,
    allowed: impl Fn(usize, usize) -> bool,
) -> Result<()> {
    use std::collections::HashMap;
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for &(u, v) in pairs.iter() {
        *count.entry(key(u, v)).or_default() += 1;
    }
    let is_bad = |count: &HashMap<(usize, usize), usize>, (u, v): (usize, usize)| u == v || count[&key(u, v)] > 1;
    // A switch only creates fresh pairs, so one pass fixes everything.
    let cap = 1000 * pairs.len().max(1);
    let mut tries = 0;
    for i in 0..pairs.len() {
        while is_bad(&count, pairs[i]) {
            tries += 1;
            if tries > cap {
                return Err(Error::BudgetExhausted(cap));
            }
            let j = rng::below(rng, pairs.len());
            if i == j {
                continue;
            }
            let ((a, b), (c, d)) = (pairs[i], pairs[j]);
            let (first, second) = if rng::bernoulli(rng, 0.5) { ((a, c), (b, d)) } else { ((a, d), (b, c)) };
            let fresh = |x: (usize, usize)| x.0 != x.1 && allowed(x.0, x.1) && !count.contains_key(&key(x.0, x.1));
            if !fresh(first) || !fresh(second) || key(first.0, first.1) == key(second.0, second.1) {
                continue;
            }
            for old in [pairs[i], pairs[j]] {
                let k = key(old.0, old.1);
                let entry = count.get_mut(&k).expect("counted");
                *entry -= 1;
                if *entry == 0 {
                    count.remove(&k);
                }
            }
            pairs[i] = first;
            pairs[j] = second;
            count.insert(key(first.0, first.1), 1);
            count.insert(key(second.0, second.1), 1);
        }
    }
    Ok(())
}

/// Random bipartite graph with sides `0..half` and `half..2·half`: the
/// union of `degree` edge-disjoint uniform perfect matchings, plus every
/// remaining cross pair independently with probability `extra`.
///
/// With `extra = c/half` the minimum degree is `degree` and the maximum is
/// about `degree + c + O(sqrt(c log half))`.
pub fn almost_regular_bipartite(half: usize, degree: usize, extra: f64, seed: u64) -> Result<BipartiteGraph> {
    check_probability(extra)?;
    if degree > half {
        return Err(Error::InvalidParameter(format!("degree {degree} exceeds side size {half}")));
    }
    let mut rng = rng::stream(seed, 0);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(half * degree);
    for _ in 0..degree {
        let mut perm: Vec<usize> = (half..2 * half).collect();
        rng::shuffle(&mut rng, &mut perm);
        pairs.extend(perm.into_iter().enumerate());
    }
    repair_pairs(&mut pairs, &mut rng, |u, v| (u < half) != (v < half))?;
    let mut edges = pairs;
    let mut present = std::collections::HashSet::with_capacity(edges.len());
    for &(u, v) in &edges {
        present.insert(key(u, v));
    }
    for u in 0..half {
        for v in half..2 * half {
            if rng::bernoulli(&mut rng, extra) && !present.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(2 * half, &edges)?;
    let sides = (0..2 * half).map(|v| if v < half { Side::X } else { Side::Y }).collect();
    BipartiteGraph::new(graph, sides)
}
