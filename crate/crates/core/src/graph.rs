//! Immutable simple graphs and the set, cut and degree primitives the rest
//! of the crate is phrased in.
//!
//! Vertices are dense `0..n` ids. Every operation that produces a subgraph
//! returns the subgraph together with an `origin` table mapping each new id
//! back to the id it had in the parent graph.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count for which subset-enumerating checks are allowed.
pub const EXHAUSTIVE_LIMIT: usize = 24;

/// A set of vertex ids, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.last() {
            if v >= n {
                return Err(Error::OutOfRange { vertex: v, n });
            }
        }
        Ok(VertexSet(members))
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    pub(crate) fn from_mask(mask: u32, n: usize) -> Self {
        VertexSet((0..n).filter(|&v| mask >> v & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn complement(&self, n: usize) -> VertexSet {
        let mask = self.mask(n);
        VertexSet((0..n).filter(|&v| !mask[v]).collect())
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let set: BTreeSet<usize> = self.iter().chain(other.iter()).collect();
        VertexSet(set.into_iter().collect())
    }

    /// Membership bitmap of length `n`. Members `>= n` are ignored.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter().filter(|&v| v < n) {
            mask[v] = true;
        }
        mask
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let set: BTreeSet<usize> = iter.into_iter().collect();
        VertexSet(set.into_iter().collect())
    }
}

/// Minimum, maximum and exact average degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub avg: Ratio<u64>,
}

/// Undirected simple graph with ascending neighbor lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n()).field("m", &self.m).finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list. Self-loops are rejected; repeated
    /// edges are merged and their number returned alongside the graph.
    pub fn from_edges_counting(n: usize, edges: &[(usize, usize)]) -> Result<(Graph, usize)> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut half_degree_sum = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            half_degree_sum += list.len();
        }
        let m = half_degree_sum / 2;
        Ok((Graph { adj, m }, edges.len() - m))
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Self::from_edges_counting(n, edges).map(|(g, _)| g)
    }

    /// Builds a graph from neighbor lists that are already symmetric,
    /// sorted and loop-free.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Graph {
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let g = Graph { adj, m };
        debug_assert!(g.check_invariants().is_ok());
        g
    }

    pub fn empty(n: usize) -> Graph {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn complete(n: usize) -> Graph {
        let adj = (0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect();
        Self::from_sorted_adjacency(adj)
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path edges are valid")
    }

    /// `K_{a,b}` with the `a` side on ids `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
        Self::from_edges(a + b, &edges).expect("complete bipartite edges are valid")
    }

    /// `K_{1,leaves}` centred on vertex 0.
    pub fn star(leaves: usize) -> Graph {
        Self::complete_bipartite(1, leaves)
    }

    /// Outer 5-cycle on `0..5`, inner pentagram on `5..10`, spokes `i - i+5`.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Self::from_edges(10, &edges).expect("petersen edges are valid")
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|l| l.iter().map(|&u| u + shift).collect()));
        Self::from_sorted_adjacency(adj)
    }

    /// Returns a copy with the extra edges inserted.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Graph> {
        let mut edges: Vec<_> = self.edges().collect();
        edges.extend_from_slice(extra);
        Self::from_edges(self.n(), &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// `2m / n` as a float; zero for the empty graph.
    pub fn average_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            2.0 * self.m as f64 / self.n() as f64
        }
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree_stats(&self) -> Result<DegreeStats> {
        if self.n() == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(DegreeStats {
            min: self.min_degree(),
            max: self.max_degree(),
            avg: Ratio::new(2 * self.m as u64, self.n() as u64),
        })
    }

    /// `Δ ≤ K·δ`.
    pub fn is_k_almost_regular(&self, k: f64) -> Result<bool> {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(Error::InvalidParameter(format!("almost-regularity factor {k} must be >= 1")));
        }
        self.degree_stats()?;
        // Compared as a quotient so that `k = regularity_ratio()` passes.
        Ok(self.regularity_ratio() <= k)
    }

    /// `Δ / δ`, infinite when some vertex is isolated.
    pub fn regularity_ratio(&self) -> f64 {
        let min = self.min_degree();
        if min == 0 {
            f64::INFINITY
        } else {
            self.max_degree() as f64 / min as f64
        }
    }

    fn checked_mask(&self, s: &VertexSet) -> Result<Vec<bool>> {
        if let Some(v) = s.iter().find(|&v| v >= self.n()) {
            return Err(Error::OutOfRange { vertex: v, n: self.n() });
        }
        Ok(s.mask(self.n()))
    }

    /// `e(S, S̄)`.
    pub fn cut_edges(&self, s: &VertexSet) -> Result<usize> {
        let mask = self.checked_mask(s)?;
        Ok(s.iter().map(|v| self.adj[v].iter().filter(|&&u| !mask[u]).count()).sum())
    }

    /// `e(S)`, the number of edges with both ends in `S`.
    pub fn internal_edges(&self, s: &VertexSet) -> Result<usize> {
        let mask = self.checked_mask(s)?;
        let twice: usize = s.iter().map(|v| self.adj[v].iter().filter(|&&u| mask[u]).count()).sum();
        Ok(twice / 2)
    }

    /// Sum of degrees over `S`.
    pub fn volume(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.degree(v)).sum()
    }

    /// `G[S]` plus the table mapping new ids to ids of `self`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        if s.is_empty() {
            return Err(Error::Precondition("induced subgraph of an empty vertex set".into()));
        }
        self.checked_mask(s)?;
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, v) in s.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = s
            .iter()
            .map(|v| {
                self.adj[v].iter().filter(|&&u| new_id[u] != usize::MAX).map(|&u| new_id[u]).collect()
            })
            .collect();
        Ok((Graph::from_sorted_adjacency(adj), s.as_slice().to_vec()))
    }

    /// Subgraph keeping every vertex but only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(u, list)| list.iter().copied().filter(|&v| keep(u.min(v), u.max(v))).collect())
            .collect();
        Graph::from_sorted_adjacency(adj)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(VertexSet::from_sorted(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().len() == 1
    }

    /// Largest component; ties go to the one with the smallest member.
    pub fn largest_component(&self) -> VertexSet {
        let mut best = VertexSet::empty();
        for c in self.components() {
            if c.len() > best.len() {
                best = c;
            }
        }
        best
    }

    pub fn check_invariants(&self) -> Result<()> {
        let mut half = 0;
        for (v, list) in self.adj.iter().enumerate() {
            if !list.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Precondition(format!("neighbors of {v} not strictly ascending")));
            }
            for &u in list {
                if u == v {
                    return Err(Error::SelfLoop(v));
                }
                if u >= self.n() {
                    return Err(Error::OutOfRange { vertex: u, n: self.n() });
                }
                if self.adj[u].binary_search(&v).is_err() {
                    return Err(Error::Precondition(format!("edge {v}-{u} is not symmetric")));
                }
            }
            half += list.len();
        }
        if half != 2 * self.m {
            return Err(Error::Precondition("edge count disagrees with adjacency".into()));
        }
        Ok(())
    }

    pub(crate) fn adjacency_masks(&self) -> Result<Vec<u32>> {
        if self.n() > EXHAUSTIVE_LIMIT {
            return Err(Error::SizeLimit {
                n: self.n(),
                limit: EXHAUSTIVE_LIMIT,
                hint: "use spectral certification instead",
            });
        }
        Ok(self.adj.iter().map(|l| l.iter().fold(0u32, |acc, &u| acc | 1 << u)).collect())
    }

    /// Minimum of `e(X, X̄) / |X|` over nonempty `X` with `|X| ≤ n/2`, as
    /// `(cut, size, witness)`. `None` when no such `X` exists (`n < 2`).
    ///
    /// Ties keep the first set met in Gray-code order.
    pub fn min_expansion(&self) -> Result<Option<(usize, usize, VertexSet)>> {
        let masks = self.adjacency_masks()?;
        let n = self.n();
        let mut best: Option<(usize, usize, u32)> = None;
        for_each_subset(&masks, |set, size, cut, _vol| {
            if size == 0 || 2 * size > n {
                return;
            }
            let better = match best {
                None => true,
                Some((bc, bs, _)) => cut * bs < bc * size,
            };
            if better {
                best = Some((cut, size, set));
            }
        });
        Ok(best.map(|(c, s, set)| (c, s, VertexSet::from_mask(set, n))))
    }

    /// Largest `λ` for which the graph is a `λ`-expander, i.e. the minimum
    /// of `e(X, X̄) / (d(G)|X|)`. Infinite for graphs with no admissible
    /// set or no edges.
    pub fn expansion_constant(&self) -> Result<f64> {
        let d = self.average_degree();
        Ok(match self.min_expansion()? {
            Some((cut, size, _)) if d > 0.0 => cut as f64 / (d * size as f64),
            _ => f64::INFINITY,
        })
    }

    /// Exhaustive check that every `X` with `|X| ≤ n/2` has
    /// `e(X, X̄) ≥ λ·d(G)·|X|`.
    pub fn is_lambda_expander(&self, lambda: f64) -> Result<bool> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda {lambda} must be finite")));
        }
        let two_m = 2 * self.m;
        let n = self.n();
        Ok(match self.min_expansion()? {
            // cut / size >= lambda * 2m / n, cross-multiplied.
            Some((cut, size, _)) => (cut * n) as f64 >= lambda * (two_m * size) as f64,
            None => true,
        })
    }

    /// Local-search max-cut bipartite subgraph.
    ///
    /// Starts from the even/odd id split and repeatedly flips the
    /// lowest-id vertex with more same-side than cross-side neighbors.
    /// Only cross edges are kept and isolated vertices are dropped; the
    /// returned table maps new ids to ids of `self`.
    pub fn greedy_bipartition(&self) -> Result<(BipartiteGraph, Vec<usize>)> {
        if self.m == 0 {
            return Err(Error::Edgeless);
        }
        let n = self.n();
        let mut side: Vec<bool> = (0..n).map(|v| v % 2 == 1).collect();
        let mut same: Vec<usize> =
            (0..n).map(|v| self.adj[v].iter().filter(|&&u| side[u] == side[v]).count()).collect();
        let unhappy = |v: usize, same: &[usize]| 2 * same[v] > self.degree(v);
        let mut queue: BTreeSet<usize> = (0..n).filter(|&v| unhappy(v, &same)).collect();
        while let Some(v) = queue.pop_first() {
            side[v] = !side[v];
            same[v] = self.degree(v) - same[v];
            for &u in &self.adj[v] {
                if side[u] == side[v] {
                    same[u] += 1;
                } else {
                    same[u] -= 1;
                }
                if unhappy(u, &same) {
                    queue.insert(u);
                } else {
                    queue.remove(&u);
                }
            }
        }
        let cross = self.filter_edges(|u, v| side[u] != side[v]);
        let keep: VertexSet = (0..n).filter(|&v| cross.degree(v) > 0).collect();
        let (graph, origin) = cross.induced_subgraph(&keep)?;
        let sides = origin.iter().map(|&v| if side[v] { Side::Y } else { Side::X }).collect();
        Ok((BipartiteGraph::new(graph, sides)?, origin))
    }
}

/// Visits every subset of `0..masks.len()` in Gray-code order, passing
/// `(set, |set|, e(set, complement), vol(set))`.
pub(crate) fn for_each_subset(masks: &[u32], mut visit: impl FnMut(u32, usize, usize, usize)) {
    let n = masks.len();
    assert!(n <= EXHAUSTIVE_LIMIT);
    let degrees: Vec<usize> = masks.iter().map(|m| m.count_ones() as usize).collect();
    let mut set = 0u32;
    let mut size = 0usize;
    let mut cut = 0usize;
    let mut vol = 0usize;
    visit(set, size, cut, vol);
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let inside = (masks[v] & set & !bit).count_ones() as usize;
        if set & bit == 0 {
            set |= bit;
            size += 1;
            vol += degrees[v];
            cut = cut + degrees[v] - 2 * inside;
        } else {
            set &= !bit;
            size -= 1;
            vol -= degrees[v];
            cut = cut + 2 * inside - degrees[v];
        }
        visit(set, size, cut, vol);
    }
}

/// Side of a bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

/// A graph with a proper two-colouring and no isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    graph: Graph,
    side: Vec<Side>,
}

impl BipartiteGraph {
    pub fn new(graph: Graph, side: Vec<Side>) -> Result<Self> {
        if side.len() != graph.n() {
            return Err(Error::InvalidParameter("side labels do not match vertex count".into()));
        }
        if let Some((u, v)) = graph.edges().find(|&(u, v)| side[u] == side[v]) {
            return Err(Error::NotBipartite(u, v));
        }
        if let Some(v) = (0..graph.n()).find(|&v| graph.degree(v) == 0) {
            return Err(Error::IsolatedVertex(v));
        }
        Ok(BipartiteGraph { graph, side })
    }

    /// Two-colours `graph` by BFS, giving the smallest vertex of every
    /// component side `X`.
    pub fn from_graph(graph: Graph) -> Result<Self> {
        let n = graph.n();
        let mut side: Vec<Option<Side>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(Side::X);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let sv = side[v].expect("visited vertices are coloured");
                for &u in graph.neighbors(v) {
                    match side[u] {
                        None => {
                            side[u] = Some(sv.other());
                            queue.push_back(u);
                        }
                        Some(su) if su == sv => return Err(Error::NotBipartite(v.min(u), v.max(u))),
                        Some(_) => {}
                    }
                }
            }
        }
        let side = side.into_iter().map(|s| s.expect("every vertex coloured")).collect();
        Self::new(graph, side)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn side_of(&self, v: usize) -> Side {
        self.side[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    pub fn part(&self, s: Side) -> VertexSet {
        (0..self.n()).filter(|&v| self.side[v] == s).collect()
    }

    /// `G[S]` restricted to `S`, keeping labels; fails if `S` leaves a
    /// vertex isolated.
    pub fn induced(&self, s: &VertexSet) -> Result<(BipartiteGraph, Vec<usize>)> {
        let (graph, origin) = self.graph.induced_subgraph(s)?;
        let side = origin.iter().map(|&v| self.side[v]).collect();
        Ok((BipartiteGraph::new(graph, side)?, origin))
    }
}
