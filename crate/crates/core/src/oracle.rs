//! Exact ground truth at tiny scale, in integer and rational arithmetic.
//!
//! Walk probabilities are kept as integers over the common denominator
//! `L^k`, where `L` is the lcm of all degrees, so every step is an exact
//! integer matrix product.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Vertex cap for exact matrix methods.
pub const MATRIX_LIMIT: usize = 64;
/// Step cap for exact matrix powers.
pub const POWER_LIMIT: usize = 100;
/// Vertex cap for exhaustive cycle search.
pub const CYCLE_LIMIT: usize = 14;
/// Cap on `Δ^L` for exact self-avoidance enumeration.
pub const WALK_ENUMERATION_LIMIT: f64 = 1e7;

fn require_no_isolated(g: &Graph) -> Result<()> {
    match (0..g.n()).find(|&v| g.degree(v) == 0) {
        Some(v) => Err(Error::IsolatedVertex(v)),
        None => Ok(()),
    }
}

fn degree_lcm(g: &Graph) -> BigInt {
    (0..g.n()).fold(BigInt::one(), |acc, v| acc.lcm(&BigInt::from(g.degree(v))))
}

/// `L/d(v)` for every vertex.
fn step_weights(g: &Graph, lcm: &BigInt) -> Vec<BigInt> {
    (0..g.n()).map(|v| lcm / BigInt::from(g.degree(v))).collect()
}

/// `M^k = W^k / L^k` with integer `W = L·M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactWalkMatrix {
    pub power: usize,
    pub lcm: BigInt,
    /// Numerators over `lcm^power`.
    pub numerators: Vec<Vec<BigInt>>,
}

impl ExactWalkMatrix {
    pub fn denominator(&self) -> BigInt {
        num_traits::pow(self.lcm.clone(), self.power)
    }

    pub fn entry(&self, v: usize, u: usize) -> BigRational {
        BigRational::new(self.numerators[v][u].clone(), self.denominator())
    }

    pub fn entry_f64(&self, v: usize, u: usize) -> f64 {
        ratio_to_f64(&BigRational::new_raw(self.numerators[v][u].clone(), self.denominator()))
    }

    /// Every entry rounded to `f64`, sharing one denominator.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        let den = self.denominator();
        self.numerators
            .iter()
            .map(|row| row.iter().map(|x| ratio_to_f64(&BigRational::new_raw(x.clone(), den.clone()))).collect())
            .collect()
    }

    pub fn row_sum(&self, v: usize) -> BigRational {
        let total: BigInt = self.numerators[v].iter().sum();
        BigRational::new(total, self.denominator())
    }
}

/// Successive exact powers `M^0, M^1, ...` of the walk matrix.
pub struct WalkPowers<'a> {
    graph: &'a Graph,
    weights: Vec<BigInt>,
    current: ExactWalkMatrix,
}

impl<'a> WalkPowers<'a> {
    pub fn new(g: &'a Graph) -> Result<Self> {
        if g.n() > MATRIX_LIMIT {
            return Err(Error::SizeLimit { n: g.n(), limit: MATRIX_LIMIT, hint: "exact walk matrices" });
        }
        require_no_isolated(g)?;
        let lcm = degree_lcm(g);
        let numerators = (0..g.n())
            .map(|v| (0..g.n()).map(|u| if u == v { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Ok(WalkPowers {
            graph: g,
            weights: step_weights(g, &lcm),
            current: ExactWalkMatrix { power: 0, lcm, numerators },
        })
    }

    pub fn current(&self) -> &ExactWalkMatrix {
        &self.current
    }

    /// Multiplies by `W` on the right: `(P·W)(v,u) = Σ_{w~u} P(v,w)·L/d(w)`.
    pub fn advance(&mut self) -> &ExactWalkMatrix {
        let g = self.graph;
        let next: Vec<Vec<BigInt>> = self
            .current
            .numerators
            .iter()
            .map(|row| {
                (0..g.n())
                    .map(|u| g.neighbors(u).iter().map(|&w| &row[w] * &self.weights[w]).sum())
                    .collect()
            })
            .collect();
        self.current.numerators = next;
        self.current.power += 1;
        &self.current
    }
}

/// `M^k` exactly.
pub fn exact_walk_matrix(g: &Graph, k: usize) -> Result<ExactWalkMatrix> {
    if k > POWER_LIMIT {
        return Err(Error::SizeLimit { n: k, limit: POWER_LIMIT, hint: "matrix power too large" });
    }
    let mut powers = WalkPowers::new(g)?;
    for _ in 0..k {
        powers.advance();
    }
    Ok(powers.current)
}

/// `P(X_1, .., X_k ∉ A)` for the walk from every start vertex, by the
/// absorbing recursion `f_0 = 1`, `f_j(x) = Σ_{y~x, y∉A} f_{j-1}(y)/d(x)`.
pub fn exact_avoid_all(g: &Graph, a: &VertexSet, k: usize) -> Result<Vec<BigRational>> {
    if g.n() > MATRIX_LIMIT {
        return Err(Error::SizeLimit { n: g.n(), limit: MATRIX_LIMIT, hint: "exact avoid events" });
    }
    require_no_isolated(g)?;
    let lcm = degree_lcm(g);
    let weights = step_weights(g, &lcm);
    let blocked = a.mask(g.n());
    let mut f: Vec<BigInt> = vec![BigInt::one(); g.n()];
    for _ in 0..k {
        f = (0..g.n())
            .map(|x| {
                let s: BigInt = g.neighbors(x).iter().filter(|&&y| !blocked[y]).map(|&y| &f[y]).sum();
                s * &weights[x]
            })
            .collect();
    }
    let denominator = num_traits::pow(lcm, k);
    Ok(f.into_iter().map(|num| BigRational::new(num, denominator.clone())).collect())
}

pub fn exact_avoid_event(g: &Graph, v: usize, a: &VertexSet, k: usize) -> Result<BigRational> {
    if v >= g.n() {
        return Err(Error::OutOfRange { vertex: v, n: g.n() });
    }
    Ok(exact_avoid_all(g, a, k)?.swap_remove(v))
}

/// Probability that the walk of `length` steps from `v` visits pairwise
/// distinct vertices, by enumerating every walk.
pub fn exact_self_avoiding_prob(g: &Graph, v: usize, length: usize) -> Result<(BigRational, u64)> {
    if v >= g.n() {
        return Err(Error::OutOfRange { vertex: v, n: g.n() });
    }
    if g.degree(v) == 0 {
        return Err(Error::IsolatedVertex(v));
    }
    if (g.max_degree() as f64).powi(length as i32) > WALK_ENUMERATION_LIMIT {
        return Err(Error::SizeLimit { n: g.n(), limit: WALK_ENUMERATION_LIMIT as usize, hint: "Δ^L too large" });
    }
    let lcm = (0..g.n()).filter(|&x| g.degree(x) > 0).fold(BigUint::one(), |acc, x| acc.lcm(&BigUint::from(g.degree(x))));
    let weights: Vec<BigUint> = (0..g.n()).map(|x| if g.degree(x) == 0 { BigUint::zero() } else { &lcm / g.degree(x) }).collect();
    let mut on_path = vec![false; g.n()];
    on_path[v] = true;
    let mut walks = 0u64;
    let numerator = self_avoid_dfs(g, v, length, &weights, &mut on_path, &mut walks);
    let denominator = num_traits::pow(lcm, length);
    Ok((BigRational::new(BigInt::from(numerator), BigInt::from(denominator)), walks))
}

/// `lcm^left` times the probability that `left` more steps from `x` stay
/// off the path.
fn self_avoid_dfs(g: &Graph, x: usize, left: usize, weights: &[BigUint], on_path: &mut [bool], walks: &mut u64) -> BigUint {
    if left == 0 {
        *walks += 1;
        return BigUint::one();
    }
    let mut total = BigUint::zero();
    for &y in g.neighbors(x) {
        if on_path[y] {
            *walks += 1;
            continue;
        }
        on_path[y] = true;
        total += self_avoid_dfs(g, y, left - 1, weights, on_path, walks);
        on_path[y] = false;
    }
    total * &weights[x]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordSurplus {
    pub cycle: Vec<usize>,
    pub chords: usize,
    /// `chords - |cycle|`.
    pub surplus: i64,
    /// Vertex sets spanning at least one cycle.
    pub cyclic_sets: u64,
}

/// Best `chords(C) - |C|` over all cycles `C`.
///
/// The chord count of a cycle depends only on its vertex set, so it is
/// enough to find every vertex set `S` with a Hamiltonian cycle in `G[S]`
/// (bitmask path DP from the lowest vertex of `S`) and score `e(S) - 2|S|`.
/// Ties go to the larger cycle, then to the numerically smaller set.
/// Returns `None` for forests.
pub fn max_chord_surplus(g: &Graph) -> Result<Option<ChordSurplus>> {
    let n = g.n();
    if n > CYCLE_LIMIT {
        return Err(Error::SizeLimit { n, limit: CYCLE_LIMIT, hint: "exhaustive cycle search" });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u))).collect();
    let full = 1usize << n;
    // reach[mask]: endpoints v of paths that start at the lowest vertex of
    // mask and visit exactly mask.
    let mut reach = vec![0u32; full];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    let mut best: Option<(i64, u32, usize)> = None;
    let mut cyclic_sets = 0u64;
    for mask in 1..full {
        let ends = reach[mask];
        if ends == 0 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let size = mask.count_ones() as usize;
        if size >= 3 && ends & adj[low] != 0 {
            cyclic_sets += 1;
            let edges: u32 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| (adj[v] & mask as u32).count_ones()).sum::<u32>() / 2;
            let surplus = edges as i64 - 2 * size as i64;
            if best.is_none_or(|(s, _, len)| surplus > s || (surplus == s && size > len)) {
                best = Some((surplus, mask as u32, size));
            }
        }
        let above_low = !((1u32 << (low + 1)) - 1);
        let mut rest = ends;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut next = adj[v] & !(mask as u32) & above_low;
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                reach[mask | (1 << w)] |= 1 << w;
            }
        }
    }
    Ok(best.map(|(surplus, mask, size)| {
        let cycle = rebuild_cycle(&adj, &reach, mask);
        ChordSurplus { cycle, chords: (surplus + size as i64) as usize, surplus, cyclic_sets }
    }))
}

fn rebuild_cycle(adj: &[u32], reach: &[u32], mask: u32) -> Vec<usize> {
    let low = mask.trailing_zeros() as usize;
    let mut v = (reach[mask as usize] & adj[low]).trailing_zeros() as usize;
    let mut remaining = mask;
    let mut reversed = vec![v];
    while v != low {
        remaining &= !(1 << v);
        let prev = (reach[remaining as usize] & adj[v]).trailing_zeros() as usize;
        reversed.push(prev);
        v = prev;
    }
    reversed.reverse();
    // Lowest vertex first, then the direction with the smaller second entry.
    if reversed.len() > 2 && reversed[1] > reversed[reversed.len() - 1] {
        reversed[1..].reverse();
    }
    reversed
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub quantity: String,
    /// Exact value, `p/q` for rationals.
    pub exact: String,
    pub value: f64,
    pub enumeration_size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn walk_matrix_fixtures() {
        let k22 = Graph::complete_bipartite(2, 2);
        let id = exact_walk_matrix(&k22, 0).unwrap();
        assert_eq!(id.entry(1, 1), ratio(1, 1));
        assert_eq!(id.entry(1, 2), ratio(0, 1));
        let two = exact_walk_matrix(&k22, 2).unwrap();
        assert_eq!(two.entry(0, 0), ratio(1, 2));
        assert_eq!(two.entry(0, 1), ratio(1, 2));
        assert_eq!(two.entry(0, 2), ratio(0, 1));
        let p = Graph::path(5);
        let m = exact_walk_matrix(&p, 7).unwrap();
        assert!((0..5).all(|v| m.row_sum(v) == ratio(1, 1)));
    }

    #[test]
    fn avoid_event_fixtures() {
        let p3 = Graph::path(3);
        assert_eq!(exact_avoid_event(&p3, 0, &VertexSet::empty(), 4).unwrap(), ratio(1, 1));
        assert_eq!(exact_avoid_event(&p3, 0, &VertexSet::new(vec![2], 3).unwrap(), 2).unwrap(), ratio(1, 2));
    }

    #[test]
    fn self_avoiding_fixtures() {
        let k4 = Graph::complete(4);
        assert_eq!(exact_self_avoiding_prob(&k4, 0, 2).unwrap().0, ratio(2, 3));
        assert_eq!(exact_self_avoiding_prob(&Graph::petersen(), 3, 1).unwrap().0, ratio(1, 1));
        assert_eq!(exact_self_avoiding_prob(&Graph::cycle(10), 0, 3).unwrap().0, ratio(1, 4));
        assert_eq!(exact_self_avoiding_prob(&Graph::cycle(10), 0, 5).unwrap().0, ratio(1, 16));
    }

    #[test]
    fn chord_surplus_fixtures() {
        let k5 = max_chord_surplus(&Graph::complete(5)).unwrap().unwrap();
        assert_eq!((k5.cycle.len(), k5.chords, k5.surplus), (5, 5, 0));
        let k6 = max_chord_surplus(&Graph::complete(6)).unwrap().unwrap();
        assert_eq!((k6.cycle.len(), k6.chords, k6.surplus), (6, 9, 3));
        let c7 = max_chord_surplus(&Graph::cycle(7)).unwrap().unwrap();
        assert_eq!((c7.cycle, c7.chords, c7.surplus, c7.cyclic_sets), ((0..7).collect(), 0, -7, 1));
        assert_eq!(max_chord_surplus(&Graph::path(6)).unwrap(), None);
        assert!(max_chord_surplus(&Graph::complete(15)).is_err());
    }

    #[test]
    fn cyclic_set_count_of_k5() {
        // Every subset of size at least three spans a cycle.
        let k5 = max_chord_surplus(&Graph::complete(5)).unwrap().unwrap();
        assert_eq!(k5.cyclic_sets, 10 + 5 + 1);
    }
}
