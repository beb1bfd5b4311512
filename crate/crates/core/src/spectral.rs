//! Conductance, the second eigenvalue of `N = D^{1/2} A D^{1/2}` (with
//! `D = diag(1/d(v))`) and bipartite mixing times.
//!
//! `λ2` comes from a dense symmetric eigensolve up to [`DENSE_LIMIT`]
//! vertices. Connected bipartite graphs above [`REDUCTION_THRESHOLD`] are
//! solved through the half-size matrix `B Bᵀ`, where `B` is the normalized
//! biadjacency block: the spectrum of `N` is `±σ_i(B)` padded with zeros.
//! Beyond the dense limit a power iteration on `(N + I)/2` with the known
//! top eigenvector (`∝ sqrt(d(v))`) projected out is used.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{for_each_subset, BipartiteGraph, Graph, Side, VertexSet};

pub const DENSE_LIMIT: usize = 4096;
pub const REDUCTION_THRESHOLD: usize = 512;
pub const POWER_TOLERANCE: f64 = 1e-9;
pub const POWER_ITERATION_CAP: usize = 100_000;
/// Assumed absolute error of a computed `λ2`.
pub const LAMBDA2_TOLERANCE: f64 = 1e-9;

/// Second eigenvalue of `N` and a unit eigenvector for it.
#[derive(Clone, Debug)]
pub struct SecondEigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
}

fn require_walkable(g: &Graph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn normalized_adjacency(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut m = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        let w = 1.0 / ((g.degree(u) * g.degree(v)) as f64).sqrt();
        m[(u, v)] = w;
        m[(v, u)] = w;
    }
    m
}

/// Indices of `values` sorted by decreasing value.
fn descending(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx
}

struct Reduction {
    rows: Vec<usize>,
    cols: Vec<usize>,
    gram: DMatrix<f64>,
}

/// `B Bᵀ` for the smaller side of the bipartition.
fn bipartite_gram(g: &Graph, sides: &[Side]) -> Reduction {
    let x: Vec<usize> = (0..g.n()).filter(|&v| sides[v] == Side::X).collect();
    let y: Vec<usize> = (0..g.n()).filter(|&v| sides[v] == Side::Y).collect();
    let (rows, cols) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in rows.iter().enumerate() {
        index[v] = i;
    }
    let mut gram = DMatrix::zeros(rows.len(), rows.len());
    for &w in &cols {
        let nbrs = g.neighbors(w);
        let dw = g.degree(w) as f64;
        for &a in nbrs {
            for &b in nbrs {
                let (ia, ib) = (index[a], index[b]);
                gram[(ia, ib)] += 1.0 / ((g.degree(a) * g.degree(b)) as f64).sqrt() / dw;
            }
        }
    }
    Reduction { rows, cols, gram }
}

/// `λ2` from singular values: `σ2` when the smaller side has two or more
/// vertices, otherwise `0` (zero eigenvalues exist) or `-1` for `K2`.
fn lambda2_from_singular(sigma: &[f64], n: usize) -> f64 {
    if sigma.len() >= 2 {
        sigma[1]
    } else if n > 2 {
        0.0
    } else {
        -1.0
    }
}

fn try_bipartition(g: &Graph) -> Option<Vec<Side>> {
    BipartiteGraph::from_graph(g.clone()).ok().map(|b| b.sides().to_vec())
}

/// Second-largest eigenvalue of `N(G)`.
pub fn lambda2(g: &Graph) -> Result<f64> {
    require_walkable(g)?;
    let n = g.n();
    if n > DENSE_LIMIT {
        return Ok(power_iteration(g).value);
    }
    if n > REDUCTION_THRESHOLD {
        if let Some(sides) = try_bipartition(g) {
            let red = bipartite_gram(g, &sides);
            let mut mu: Vec<f64> = red.gram.symmetric_eigenvalues().iter().copied().collect();
            mu.sort_by(|a, b| b.total_cmp(a));
            let sigma: Vec<f64> = mu.iter().map(|&m| m.max(0.0).sqrt()).collect();
            return Ok(lambda2_from_singular(&sigma, n));
        }
    }
    let values: Vec<f64> = normalized_adjacency(g).symmetric_eigenvalues().iter().copied().collect();
    let order = descending(&values);
    Ok(if n >= 2 { values[order[1]] } else { values[order[0]] })
}

/// Second eigenvalue of `N(G)` with an eigenvector, for sweep cuts.
pub fn second_eigenpair(g: &Graph) -> Result<SecondEigenpair> {
    require_walkable(g)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::Precondition("second eigenpair needs two vertices".into()));
    }
    if n > DENSE_LIMIT {
        return Ok(power_iteration(g));
    }
    if n > REDUCTION_THRESHOLD {
        if let Some(sides) = try_bipartition(g) {
            return Ok(reduced_eigenpair(g, &sides));
        }
    }
    let eig = SymmetricEigen::new(normalized_adjacency(g));
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let i = descending(&values)[1];
    Ok(SecondEigenpair { value: values[i], vector: eig.eigenvectors.column(i).iter().copied().collect() })
}

fn reduced_eigenpair(g: &Graph, sides: &[Side]) -> SecondEigenpair {
    let n = g.n();
    let red = bipartite_gram(g, sides);
    let eig = SymmetricEigen::new(red.gram.clone());
    let mu: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = descending(&mu);
    let sigma: Vec<f64> = order.iter().map(|&i| mu[i].max(0.0).sqrt()).collect();
    let value = lambda2_from_singular(&sigma, n);
    let mut vector = vec![0.0; n];
    if order.len() >= 2 {
        let col = eig.eigenvectors.column(order[1]);
        for (i, &a) in red.rows.iter().enumerate() {
            vector[a] = col[i];
        }
        if sigma[1] > 1e-12 {
            let row_coord = vector.clone();
            for &w in &red.cols {
                let s: f64 = g
                    .neighbors(w)
                    .iter()
                    .map(|&a| row_coord[a] / ((g.degree(a) * g.degree(w)) as f64).sqrt())
                    .sum();
                vector[w] = s / sigma[1];
            }
        }
    }
    let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        vector.iter_mut().for_each(|x| *x /= norm);
    }
    SecondEigenpair { value, vector }
}

/// Power iteration on `(N + I)/2` with the top eigenvector projected out.
pub fn power_iteration(g: &Graph) -> SecondEigenpair {
    let n = g.n();
    let two_m = 2.0 * g.m() as f64;
    let top: Vec<f64> = (0..n).map(|v| (g.degree(v) as f64 / two_m).sqrt()).collect();
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / (g.degree(v) as f64).sqrt()).collect();
    let project = |x: &mut [f64]| {
        let dot: f64 = x.iter().zip(&top).map(|(a, b)| a * b).sum();
        x.iter_mut().zip(&top).for_each(|(a, b)| *a -= dot * b);
        let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        x.iter_mut().for_each(|a| *a /= norm);
    };
    let apply = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|u| {
                let s: f64 = g.neighbors(u).iter().map(|&w| x[w] * inv_sqrt[w]).sum();
                0.5 * (s * inv_sqrt[u] + x[u])
            })
            .collect()
    };
    let mut x: Vec<f64> = (0..n).map(|v| ((v as u64).wrapping_mul(2654435761) % 1000) as f64 / 1000.0 - 0.5).collect();
    project(&mut x);
    let mut mu = f64::NAN;
    for _ in 0..POWER_ITERATION_CAP {
        let mut y = apply(&x);
        let rayleigh: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        project(&mut y);
        x = y;
        if (rayleigh - mu).abs() < POWER_TOLERANCE {
            mu = rayleigh;
            break;
        }
        mu = rayleigh;
    }
    SecondEigenpair { value: 2.0 * mu - 1.0, vector: x }
}

/// Exact minimum conductance with an argmin witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Conductance {
    pub phi: f64,
    /// `phi = numerator / denominator` exactly.
    pub numerator: u128,
    pub denominator: u128,
    pub witness: VertexSet,
}

/// `min_S e(S, S̄)·2m / (vol(S)·vol(S̄))` by enumerating every subset.
/// Sets with zero volume on either side are skipped.
pub fn conductance_exact(g: &Graph) -> Result<Conductance> {
    let masks = g.adjacency_masks()?;
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    let two_m = 2 * g.m();
    let mut best: Option<(u128, u128, u32)> = None;
    for_each_subset(&masks, |set, _size, cut, vol| {
        if vol == 0 || vol == two_m {
            return;
        }
        let num = (cut * two_m) as u128;
        let den = (vol as u128) * ((two_m - vol) as u128);
        let better = match best {
            None => true,
            Some((bn, bd, _)) => num * bd < bn * den,
        };
        if better {
            best = Some((num, den, set));
        }
    });
    let (numerator, denominator, set) =
        best.ok_or_else(|| Error::Precondition("no proper subset with positive volume".into()))?;
    Ok(Conductance {
        phi: numerator as f64 / denominator as f64,
        numerator,
        denominator,
        witness: VertexSet::from_mask(set, g.n()),
    })
}

/// `Φ_G ≥ λ / K` for a `K`-almost-regular `λ`-expander.
pub fn conductance_lower_bound(lambda: f64, k: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(k >= 1.0) || !lambda.is_finite() || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("need lambda > 0 and K >= 1, got ({lambda}, {k})")));
    }
    Ok(lambda / k)
}

/// `λ2 ≤ 1 - Φ²/8`.
pub fn lambda2_upper_bound(phi: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&phi) {
        return Err(Error::InvalidParameter(format!("conductance {phi} outside [0, 2]")));
    }
    Ok(1.0 - phi * phi / 8.0)
}

/// `⌈30 K² λ⁻² ln n⌉`.
pub fn mixing_time_bound(k: f64, lambda: f64, n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    mixing_time_bound_from_log(k, lambda, (n as f64).ln())
}

/// [`mixing_time_bound`] with `ln n` supplied directly.
pub fn mixing_time_bound_from_log(k: f64, lambda: f64, log_n: f64) -> Result<u64> {
    if !(k >= 1.0) || !(lambda > 0.0) || !(log_n > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need K >= 1, lambda > 0, ln n > 0, got ({k}, {lambda}, {log_n})"
        )));
    }
    Ok((30.0 * k * k / (lambda * lambda) * log_n).ceil().max(1.0) as u64)
}

/// Row `v` of `M^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkDistribution(pub Vec<f64>);

impl WalkDistribution {
    pub fn probability(&self, u: usize) -> f64 {
        self.0[u]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// One step `p ↦ p M`.
pub(crate) fn walk_step(g: &Graph, p: &[f64]) -> Vec<f64> {
    let mut next = vec![0.0; g.n()];
    for (w, &mass) in p.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        let share = mass / g.degree(w) as f64;
        for &u in g.neighbors(w) {
            next[u] += share;
        }
    }
    next
}

fn require_connected_bipartite(b: &BipartiteGraph) -> Result<()> {
    require_walkable(b.graph())
}

pub fn walk_distribution(b: &BipartiteGraph, v: usize, k: usize) -> Result<WalkDistribution> {
    require_connected_bipartite(b)?;
    if v >= b.n() {
        return Err(Error::OutOfRange { vertex: v, n: b.n() });
    }
    let mut p = vec![0.0; b.n()];
    p[v] = 1.0;
    for _ in 0..k {
        p = walk_step(b.graph(), &p);
    }
    Ok(WalkDistribution(p))
}

/// Parity-corrected stationary target
/// `d(u)/2m · (1 + (-1)^{k + [v ∈ X] + [u ∈ X]})`.
pub fn mixing_target(b: &BipartiteGraph, v: usize, u: usize, k: usize) -> f64 {
    let exponent = k + usize::from(b.side_of(v) == Side::X) + usize::from(b.side_of(u) == Side::X);
    if exponent.is_multiple_of(2) {
        b.graph().degree(u) as f64 / b.graph().m() as f64
    } else {
        0.0
    }
}

fn max_deviation_rows(b: &BipartiteGraph, rows: &[Vec<f64>], k: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for (v, row) in rows.iter().enumerate() {
        for (u, &p) in row.iter().enumerate() {
            worst = worst.max((p - mixing_target(b, v, u, k)).abs());
        }
    }
    worst
}

/// Largest `|M^k(v,u) - target(v,u,k)|` over all pairs.
pub fn mixing_deviation(b: &BipartiteGraph, k: usize) -> Result<f64> {
    require_connected_bipartite(b)?;
    let rows: Vec<Vec<f64>> = (0..b.n())
        .map(|v| walk_distribution(b, v, k).map(|d| d.0))
        .collect::<Result<_>>()?;
    Ok(max_deviation_rows(b, &rows, k))
}

/// Every entry of `M^k` is within `1/n²` of its parity-corrected target.
pub fn verify_mixing(b: &BipartiteGraph, k: usize) -> Result<bool> {
    let n = b.n() as f64;
    Ok(mixing_deviation(b, k)? <= 1.0 / (n * n))
}

/// Smallest `k` in `1..=k_max` passing [`verify_mixing`]; `None` when the
/// scan is exhausted.
pub fn empirical_mixing_time(b: &BipartiteGraph, k_max: usize) -> Result<Option<usize>> {
    require_connected_bipartite(b)?;
    let n = b.n();
    let threshold = 1.0 / (n as f64 * n as f64);
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|v| {
            let mut p = vec![0.0; n];
            p[v] = 1.0;
            p
        })
        .collect();
    for k in 1..=k_max {
        rows = rows.iter().map(|p| walk_step(b.graph(), p)).collect();
        if max_deviation_rows(b, &rows, k) <= threshold {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `λ2`, a conductance value and a mixing-time bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub lambda2: f64,
    pub conductance: f64,
    pub conductance_is_exact: bool,
    pub mixing_time_bound: u64,
    pub certified: bool,
}

/// Smallest `k ≥ 1` with `sqrt(K)·λ^k ≤ 1/n²`.
pub fn certified_mixing_steps(lambda: f64, k: f64, n: usize) -> Result<u64> {
    let lambda = lambda.max(0.0);
    if lambda >= 1.0 {
        return Err(Error::NoSpectralGap(lambda));
    }
    let target = 1.0 / (n as f64 * n as f64 * k.sqrt());
    if lambda == 0.0 {
        return Ok(1);
    }
    let holds = |steps: u64| (steps as f64) * lambda.ln() <= target.ln();
    let mut steps = (target.ln() / lambda.ln()).ceil().max(1.0) as u64;
    while steps > 1 && holds(steps - 1) {
        steps -= 1;
    }
    while !holds(steps) {
        steps += 1;
    }
    Ok(steps)
}

/// Certified bipartite mixing time from the measured `λ2`.
///
/// `λ2` is inflated by [`LAMBDA2_TOLERANCE`] before use; the conductance
/// field carries the lower bound `(1 - λ2)/2`.
pub fn spectral_certificate(b: &BipartiteGraph, k: f64) -> Result<SpectralProfile> {
    require_connected_bipartite(b)?;
    if !b.graph().is_k_almost_regular(k)? {
        return Err(Error::Precondition(format!(
            "graph is not {k}-almost-regular (ratio {})",
            b.graph().regularity_ratio()
        )));
    }
    let l2 = lambda2(b.graph())?;
    certificate_from_lambda2(l2, k, b.n())
}

pub(crate) fn certificate_from_lambda2(l2: f64, k: f64, n: usize) -> Result<SpectralProfile> {
    if l2 >= 1.0 - 1e-12 {
        return Err(Error::NoSpectralGap(l2));
    }
    let steps = certified_mixing_steps((l2 + LAMBDA2_TOLERANCE).min(1.0), k, n)?;
    Ok(SpectralProfile {
        lambda2: l2,
        conductance: (1.0 - l2) / 2.0,
        conductance_is_exact: false,
        mixing_time_bound: steps,
        certified: true,
    })
}

/// Expansion constant implied by `λ2`: every `U` with `|U| ≤ n/2` has
/// `e(U, Ū) ≥ (1 - λ2)/2 · min(vol U, vol Ū) ≥ (1 - λ2)/2 · δ |U|`.
pub fn certified_expansion(g: &Graph, l2: f64) -> f64 {
    let d = g.average_degree();
    if d == 0.0 {
        return 0.0;
    }
    ((1.0 - l2 - LAMBDA2_TOLERANCE) / 2.0).max(0.0) * g.min_degree() as f64 / d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bip(g: Graph) -> BipartiteGraph {
        BipartiteGraph::from_graph(g).unwrap()
    }

    #[test]
    fn lambda2_fixtures() {
        // n-cycle walk eigenvalues are cos(2πj/n).
        assert!(lambda2(&Graph::cycle(4)).unwrap().abs() < 1e-9);
        assert!((lambda2(&Graph::cycle(6)).unwrap() - 0.5).abs() < 1e-9);
        assert!(lambda2(&Graph::complete_bipartite(2, 2)).unwrap().abs() < 1e-9);
        let c9 = (2.0 * std::f64::consts::PI / 9.0).cos();
        assert!((lambda2(&Graph::cycle(9)).unwrap() - c9).abs() < 1e-9);
        assert_eq!(lambda2(&Graph::complete(3).disjoint_union(&Graph::complete(3))), Err(Error::Disconnected));
    }

    #[test]
    fn reduction_agrees_with_full_matrix() {
        for (a, b) in [(3usize, 5usize), (4, 4), (1, 6)] {
            let g = Graph::complete_bipartite(a, b).filter_edges(|u, v| (u + v) % 5 != 0 || a == 1);
            if !g.is_connected() {
                continue;
            }
            let sides = try_bipartition(&g).unwrap();
            let red = reduced_eigenpair(&g, &sides);
            let full = lambda2(&g).unwrap();
            assert!((red.value - full).abs() < 1e-7, "{a},{b}: {} vs {full}", red.value);
        }
        let c20 = Graph::cycle(20);
        let red = reduced_eigenpair(&c20, &try_bipartition(&c20).unwrap());
        let expected = (2.0 * std::f64::consts::PI / 20.0).cos();
        assert!((red.value - expected).abs() < 1e-9);
        // Rayleigh quotient of the lifted vector recovers the eigenvalue.
        let n = normalized_adjacency(&c20);
        let x = nalgebra::DVector::from_vec(red.vector.clone());
        assert!(((x.transpose() * &n * &x)[(0, 0)] - expected).abs() < 1e-9);
    }

    #[test]
    fn power_iteration_matches_dense() {
        let g = Graph::cycle(10).with_edges(&[(0, 5), (2, 7)]).unwrap();
        let dense = lambda2(&g).unwrap();
        assert!((power_iteration(&g).value - dense).abs() < 1e-6);
    }

    #[test]
    fn conductance_fixtures() {
        let k4 = conductance_exact(&Graph::complete(4)).unwrap();
        assert_eq!(k4.numerator * 3, k4.denominator * 4);
        let c4 = conductance_exact(&Graph::cycle(4)).unwrap();
        assert_eq!(c4.numerator, c4.denominator);
        assert_eq!(c4.witness.len(), 2);
        let w = c4.witness.as_slice();
        assert!(Graph::cycle(4).has_edge(w[0], w[1]));
        assert_eq!(conductance_exact(&Graph::empty(3)), Err(Error::Edgeless));
    }

    #[test]
    fn bound_formulas() {
        assert_eq!(conductance_lower_bound(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(conductance_lower_bound(0.5, 100.0).unwrap(), 1.0 / 200.0);
        assert!(conductance_lower_bound(0.0, 1.0).is_err());
        assert!(conductance_lower_bound(1.0, 0.5).is_err());
        assert_eq!(lambda2_upper_bound(0.0).unwrap(), 1.0);
        assert_eq!(lambda2_upper_bound(1.0).unwrap(), 0.875);
        assert!(lambda2_upper_bound(2.5).is_err());
        assert_eq!(mixing_time_bound_from_log(1.0, 1.0, 1.0).unwrap(), 30);
        let n = 1000usize;
        let ln = (n as f64).ln();
        let paper = mixing_time_bound(100.0, 1.0 / (10.0 * ln), n).unwrap();
        assert_eq!(paper, (3e7 * ln.powi(3)).ceil() as u64);
        assert!(mixing_time_bound(2.0, 0.5, n).unwrap() > mixing_time_bound(1.0, 0.5, n).unwrap());
        assert!(mixing_time_bound(1.0, 0.25, n).unwrap() > mixing_time_bound(1.0, 0.5, n).unwrap());
    }

    #[test]
    fn walk_distribution_fixtures() {
        let k22 = bip(Graph::complete_bipartite(2, 2));
        let one = walk_distribution(&k22, 0, 1).unwrap();
        assert_eq!(one.as_slice(), &[0.0, 0.0, 0.5, 0.5]);
        let two = walk_distribution(&k22, 0, 2).unwrap();
        assert_eq!(two.as_slice(), &[0.5, 0.5, 0.0, 0.0]);
        let p3 = bip(Graph::path(3));
        assert_eq!(walk_distribution(&p3, 0, 2).unwrap().as_slice(), &[0.5, 0.0, 0.5]);
        assert_eq!(walk_distribution(&p3, 0, 0).unwrap().as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn mixing_fixtures() {
        let k22 = bip(Graph::complete_bipartite(2, 2));
        assert_eq!(mixing_deviation(&k22, 1).unwrap(), 0.0);
        assert!(verify_mixing(&k22, 1).unwrap());
        assert!(!verify_mixing(&bip(Graph::cycle(20)), 1).unwrap());
        assert_eq!(empirical_mixing_time(&k22, 10).unwrap(), Some(1));
        assert_eq!(empirical_mixing_time(&bip(Graph::cycle(4)), 10).unwrap(), Some(1));
        assert_eq!(empirical_mixing_time(&bip(Graph::cycle(20)), 3).unwrap(), None);
    }

    #[test]
    fn certificate_fixtures() {
        let k22 = spectral_certificate(&bip(Graph::complete_bipartite(2, 2)), 1.0).unwrap();
        assert_eq!(k22.mixing_time_bound, 1);
        assert!(k22.certified && !k22.conductance_is_exact);
        let c6 = spectral_certificate(&bip(Graph::cycle(6)), 1.0).unwrap();
        assert_eq!(c6.mixing_time_bound, 6);
        assert!(matches!(spectral_certificate(&bip(Graph::star(3)), 2.0), Err(Error::Precondition(_))));
        assert!(matches!(certificate_from_lambda2(1.0, 1.0, 10), Err(Error::NoSpectralGap(_))));
    }

    #[test]
    fn certified_expansion_is_sound_on_small_graphs() {
        for g in [Graph::cycle(8), Graph::petersen(), Graph::complete_bipartite(3, 4)] {
            let cert = certified_expansion(&g, lambda2(&g).unwrap());
            assert!(cert <= g.expansion_constant().unwrap() + 1e-12);
        }
    }
}
