//! Seeded random walks, odd-stride subsamples and Monte Carlo estimators.
//!
//! Trial `i` of every estimator draws from stream `i` of the caller's seed
//! and trials are reduced by integer counting, so estimates are identical
//! for any number of worker threads.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph, Side, VertexSet};
use crate::io::graph_hash;
use crate::rng::{self, Rng};
use crate::spectral::walk_step;

/// Largest branching `Δ^k` the exact short-walk enumeration accepts.
pub const ENUMERATION_LIMIT: f64 = 1e7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub start: usize,
    /// `X_0 .. X_t`.
    pub steps: Vec<usize>,
    pub seed: u64,
    pub stream: u64,
    pub graph_hash: String,
}

impl WalkTrace {
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Header comments, then one vertex id per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seed={} stream={}", self.seed, self.stream);
        let _ = writeln!(out, "# graph={}", self.graph_hash);
        let _ = writeln!(out, "# start={} steps={}", self.start, self.len());
        for v in &self.steps {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<WalkTrace> {
        let mut fields = std::collections::BTreeMap::new();
        let mut steps = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                for token in comment.split_whitespace() {
                    if let Some((k, v)) = token.split_once('=') {
                        fields.insert(k.to_string(), v.to_string());
                    }
                }
            } else if !line.is_empty() {
                steps.push(line.parse().map_err(|_| Error::Parse { line: idx + 1, message: format!("bad vertex {line:?}") })?);
            }
        }
        let get = |k: &str| fields.get(k).ok_or_else(|| Error::Parse { line: 0, message: format!("missing {k}") });
        let number = |k: &str| -> Result<u64> {
            get(k)?.parse().map_err(|_| Error::Parse { line: 0, message: format!("bad {k}") })
        };
        let trace = WalkTrace {
            start: number("start")? as usize,
            seed: number("seed")?,
            stream: number("stream")?,
            graph_hash: get("graph")?.clone(),
            steps,
        };
        if trace.steps.first() != Some(&trace.start) || trace.len() as u64 != number("steps")? {
            return Err(Error::Parse { line: 0, message: "trace body disagrees with header".into() });
        }
        Ok(trace)
    }

    /// Consecutive steps adjacent in `g`.
    pub fn is_walk_in(&self, g: &Graph) -> bool {
        self.steps.iter().all(|&v| v < g.n()) && self.steps.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

fn require_start(g: &Graph, v: usize) -> Result<()> {
    if v >= g.n() {
        return Err(Error::OutOfRange { vertex: v, n: g.n() });
    }
    if g.degree(v) == 0 {
        return Err(Error::IsolatedVertex(v));
    }
    Ok(())
}

/// One uniform step from `v` along its ascending neighbour list.
#[inline]
pub(crate) fn step(g: &Graph, v: usize, rng: &mut Rng) -> usize {
    let nbrs = g.neighbors(v);
    nbrs[rng::below(rng, nbrs.len())]
}

/// Appends `t` steps from `v0` to `out` (which receives `X_0` too).
pub(crate) fn walk_into(g: &Graph, v0: usize, t: usize, rng: &mut Rng, out: &mut Vec<usize>) {
    out.clear();
    out.push(v0);
    let mut v = v0;
    for _ in 0..t {
        v = step(g, v, rng);
        out.push(v);
    }
}

/// Walk of `t` steps from `v0` drawn from stream 0 of `seed`.
pub fn random_walk(g: &Graph, v0: usize, t: usize, seed: u64) -> Result<WalkTrace> {
    random_walk_stream(g, v0, t, seed, 0)
}

pub fn random_walk_stream(g: &Graph, v0: usize, t: usize, seed: u64, stream: u64) -> Result<WalkTrace> {
    require_start(g, v0)?;
    let mut steps = Vec::with_capacity(t + 1);
    walk_into(g, v0, t, &mut rng::stream(seed, stream), &mut steps);
    Ok(WalkTrace { start: v0, steps, seed, stream, graph_hash: graph_hash(g) })
}

/// `k` itself when odd, else `k + 1`.
pub fn odd_stride(k: usize) -> usize {
    if k % 2 == 1 {
        k
    } else {
        k + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledSet {
    pub k_prime: usize,
    /// `u_i = X_{i·k'}` for `i = 1 .. ⌊t/k'⌋`.
    pub picks: Vec<usize>,
}

impl SampledSet {
    pub fn distinct(&self) -> VertexSet {
        self.picks.iter().copied().collect()
    }
}

pub fn subsample_steps(steps: &[usize], k: usize) -> Result<SampledSet> {
    if k == 0 {
        return Err(Error::InvalidParameter("stride must be at least 1".into()));
    }
    let k_prime = odd_stride(k);
    let t = steps.len().saturating_sub(1);
    if t < k_prime {
        return Err(Error::InvalidParameter(format!("walk of length {t} is shorter than stride {k_prime}")));
    }
    Ok(SampledSet { k_prime, picks: steps.iter().skip(k_prime).step_by(k_prime).copied().collect() })
}

pub fn subsample(trace: &WalkTrace, k: usize) -> Result<SampledSet> {
    subsample_steps(&trace.steps, k)
}

/// All steps pairwise distinct.
pub fn is_self_avoiding_steps(steps: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(steps.len());
    steps.iter().all(|v| seen.insert(*v))
}

pub fn is_self_avoiding(trace: &WalkTrace) -> bool {
    is_self_avoiding_steps(&trace.steps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub point: f64,
    pub trials: u64,
    pub successes: u64,
    /// Half-width of the normal-approximation 95% interval.
    pub ci95: f64,
    /// Exact Clopper-Pearson 95% interval.
    pub clopper_pearson: (f64, f64),
    pub seed: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64, seed: u64) -> Estimate {
        assert!(trials > 0 && successes <= trials);
        let n = trials as f64;
        let point = successes as f64 / n;
        let ci95 = 1.96 * (point * (1.0 - point) / n).sqrt();
        Estimate { point, trials, successes, ci95, clopper_pearson: clopper_pearson(successes, trials), seed }
    }

    /// `value` lies in the normal-approximation interval.
    pub fn covers(&self, value: f64) -> bool {
        (value - self.point).abs() <= self.ci95 + 1e-12
    }
}

/// Exact two-sided 95% binomial interval.
pub fn clopper_pearson(successes: u64, trials: u64) -> (f64, f64) {
    let (x, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 { 0.0 } else { Beta::new(x, n - x + 1.0).map_or(0.0, |b| b.inverse_cdf(0.025)) };
    let hi = if successes == trials { 1.0 } else { Beta::new(x + 1.0, n - x).map_or(1.0, |b| b.inverse_cdf(0.975)) };
    (lo, hi)
}

/// Runs `trial` on streams `0..trials` of `seed` and counts successes.
pub fn count_successes(trials: u64, seed: u64, trial: impl Fn(&mut Rng) -> bool + Sync) -> u64 {
    (0..trials).into_par_iter().filter(|&i| trial(&mut rng::stream(seed, i))).count() as u64
}

fn require_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    Ok(())
}

/// Probability that `X_1, .., X_k` all avoid `A`, for the walk from `v`.
pub fn avoid_event_estimate(g: &Graph, v: usize, a: &VertexSet, k: usize, trials: u64, seed: u64) -> Result<Estimate> {
    require_start(g, v)?;
    require_trials(trials)?;
    let blocked = a.mask(g.n());
    let hits = count_successes(trials, seed, |rng| {
        let mut x = v;
        (0..k).all(|_| {
            x = step(g, x, rng);
            !blocked[x]
        })
    });
    Ok(Estimate::from_counts(hits, trials, seed))
}

/// Probability that a walk of `length` steps from `v` never revisits a
/// vertex (`X_0` included). Trials stop at the first revisit.
pub fn self_avoiding_estimate(g: &Graph, v: usize, length: usize, trials: u64, seed: u64) -> Result<Estimate> {
    require_start(g, v)?;
    require_trials(trials)?;
    let hits = count_successes(trials, seed, |rng| {
        let mut seen = vec![false; g.n()];
        seen[v] = true;
        let mut x = v;
        (0..length).all(|_| {
            x = step(g, x, rng);
            !std::mem::replace(&mut seen[x], true)
        })
    });
    Ok(Estimate::from_counts(hits, trials, seed))
}

/// Row `v` of `M^t` by repeated distribution pushes.
fn walk_row(g: &Graph, v: usize, t: usize) -> Vec<f64> {
    let mut p = vec![0.0; g.n()];
    p[v] = 1.0;
    for _ in 0..t {
        p = walk_step(g, &p);
    }
    p
}

/// Checks `M^t(v,u)·d(v) = M^t(u,v)·d(u)` within `1e-9`.
pub fn reversal_ratio_check(g: &Graph, v: usize, u: usize, t: usize) -> Result<bool> {
    if g.n() > 64 || t > 50 {
        return Err(Error::SizeLimit { n: g.n().max(t), limit: 64, hint: "needs n <= 64 and t <= 50" });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    require_start(g, v)?;
    require_start(g, u)?;
    let forward = walk_row(g, v, t)[u] * g.degree(v) as f64;
    let backward = walk_row(g, u, t)[v] * g.degree(u) as f64;
    Ok((forward - backward).abs() <= 1e-9)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortAvoidCheck {
    /// Probability that `X_0, .., X_k` are distinct and `X_1, .., X_k ∉ S`.
    pub exact_prob: f64,
    /// `1 - 200k²/Δ`.
    pub bound: f64,
    /// `(1 - 2k/δ)^k`.
    pub sharper_bound: f64,
    /// `bound ≤ 0`, so the first inequality says nothing.
    pub vacuous: bool,
    pub ok: bool,
    pub sharper_ok: bool,
    /// Walks enumerated.
    pub walks: u64,
}

/// Exact enumeration of all `k`-step walks from `v` against the short-walk
/// self-avoidance bounds.
pub fn short_avoid_lower_bound_check(g: &Graph, v: usize, s: &VertexSet, k: usize) -> Result<ShortAvoidCheck> {
    require_start(g, v)?;
    if s.len() > k {
        return Err(Error::InvalidParameter(format!("|S| = {} exceeds k = {k}", s.len())));
    }
    let branching = (g.max_degree() as f64).powi(k as i32);
    if branching > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit { n: g.n(), limit: ENUMERATION_LIMIT as usize, hint: "Δ^k too large to enumerate" });
    }
    let blocked = s.mask(g.n());
    let mut on_path = vec![false; g.n()];
    on_path[v] = true;
    let mut walks = 0u64;
    let exact_prob = avoid_dfs(g, v, k, &blocked, &mut on_path, &mut walks);
    let (delta, big_delta) = (g.min_degree() as f64, g.max_degree() as f64);
    let kf = k as f64;
    let bound = 1.0 - 200.0 * kf * kf / big_delta;
    let sharper_bound = (1.0 - 2.0 * kf / delta).max(0.0).powi(k as i32);
    let slack = 1e-12;
    Ok(ShortAvoidCheck {
        exact_prob,
        bound,
        sharper_bound,
        vacuous: bound <= 0.0,
        ok: exact_prob >= bound - slack,
        sharper_ok: exact_prob >= sharper_bound - slack,
        walks,
    })
}

fn avoid_dfs(g: &Graph, x: usize, left: usize, blocked: &[bool], on_path: &mut [bool], walks: &mut u64) -> f64 {
    if left == 0 {
        *walks += 1;
        return 1.0;
    }
    let share = 1.0 / g.degree(x) as f64;
    let mut total = 0.0;
    for &y in g.neighbors(x) {
        if blocked[y] || on_path[y] {
            *walks += 1;
            continue;
        }
        on_path[y] = true;
        total += share * avoid_dfs(g, y, left - 1, blocked, on_path, walks);
        on_path[y] = false;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub estimate: Estimate,
    /// `θ = |X|·t / (C·k·n)`.
    pub threshold: f64,
    /// `e^{-θ}`.
    pub bound: f64,
}

/// Probability that a walk of length `t` from a uniformly random start
/// meets `X` in at most `θ` distinct picks of its stride-`k'` subsample.
#[allow(clippy::too_many_arguments)]
pub fn intersection_tail_estimate(
    g: &BipartiteGraph,
    x: &VertexSet,
    t: usize,
    k: usize,
    constant: f64,
    trials: u64,
    seed: u64,
) -> Result<TailEstimate> {
    require_trials(trials)?;
    let graph = g.graph();
    let n = graph.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if let Some(v) = (0..n).find(|&v| graph.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    if t > 10 * n {
        return Err(Error::Precondition(format!("walk length {t} exceeds 10n = {}", 10 * n)));
    }
    if k == 0 || constant <= 0.0 {
        return Err(Error::InvalidParameter("need k >= 1 and a positive constant".into()));
    }
    let k_prime = odd_stride(k);
    let threshold = x.len() as f64 * t as f64 / (constant * k as f64 * n as f64);
    let member = x.mask(n);
    let hits = count_successes(trials, seed, |rng| {
        let mut v = rng::below(rng, n);
        let mut seen = std::collections::HashSet::new();
        for i in 1..=t {
            v = step(graph, v, rng);
            if i % k_prime == 0 && member[v] {
                seen.insert(v);
            }
        }
        seen.len() as f64 <= threshold
    });
    Ok(TailEstimate { estimate: Estimate::from_counts(hits, trials, seed), threshold, bound: (-threshold).exp() })
}

/// The auxiliary set of the domination argument: `⌊t/k'⌋` rounds, round
/// `i` (from 1) adds a uniform vertex of side X for odd `i` and of side Y
/// for even `i`, each with probability `q`.
pub fn dominated_set_sample(g: &BipartiteGraph, t: usize, k: usize, q: f64, seed: u64) -> Result<VertexSet> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!("probability {q} outside (0, 1]")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("stride must be at least 1".into()));
    }
    let parts = [g.part(Side::X), g.part(Side::Y)];
    let mut rng = rng::stream(seed, 0);
    let mut picked = Vec::new();
    for i in 1..=t / odd_stride(k) {
        let part = &parts[(i + 1) % 2];
        if rng::bernoulli(&mut rng, q) && !part.is_empty() {
            picked.push(part.as_slice()[rng::below(&mut rng, part.len())]);
        }
    }
    Ok(picked.into_iter().collect())
}

/// Host edges joining the distinct picks of `p1` to those of `p2`, each
/// edge counted once.
pub fn cross_edges(g: &Graph, p1: &SampledSet, p2: &SampledSet) -> usize {
    let (d1, d2) = (p1.distinct(), p2.distinct());
    let (in1, in2) = (d1.mask(g.n()), d2.mask(g.n()));
    let mut count = 0;
    let mut doubled = 0;
    for a in d1.iter() {
        for &b in g.neighbors(a) {
            if in2[b] {
                count += 1;
                // Seen again from b when both ends lie in both sets.
                if in1[b] && in2[a] {
                    doubled += 1;
                }
            }
        }
    }
    count - doubled / 2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossEdgeEstimate {
    /// Probability that `e(R1(k), R2(k)) ≤ θ`.
    pub estimate: Estimate,
    /// `θ = t²·δ / (C·k²·n)`.
    pub threshold: f64,
    pub mean_cross_edges: f64,
}

/// Two independent walks of length `t` from `v1` and `v2` per trial; counts
/// host edges between their stride-`k'` subsamples.
#[allow(clippy::too_many_arguments)]
pub fn cross_edge_tail_estimate(
    g: &Graph,
    v1: usize,
    v2: usize,
    t: usize,
    k: usize,
    constant: f64,
    trials: u64,
    seed: u64,
) -> Result<CrossEdgeEstimate> {
    require_start(g, v1)?;
    require_start(g, v2)?;
    require_trials(trials)?;
    if k == 0 || constant <= 0.0 || t < odd_stride(k) {
        return Err(Error::InvalidParameter("need k >= 1, t >= k' and a positive constant".into()));
    }
    let (tf, kf) = (t as f64, k as f64);
    let threshold = tf * tf * g.min_degree() as f64 / (constant * kf * kf * g.n() as f64);
    let counts: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, i);
            let (mut a, mut b) = (Vec::with_capacity(t + 1), Vec::with_capacity(t + 1));
            walk_into(g, v1, t, &mut rng, &mut a);
            walk_into(g, v2, t, &mut rng, &mut b);
            let p1 = subsample_steps(&a, k).expect("t >= k'");
            let p2 = subsample_steps(&b, k).expect("t >= k'");
            cross_edges(g, &p1, &p2)
        })
        .collect();
    let low = counts.iter().filter(|&&c| c as f64 <= threshold).count() as u64;
    let mean_cross_edges = counts.iter().sum::<usize>() as f64 / trials as f64;
    Ok(CrossEdgeEstimate { estimate: Estimate::from_counts(low, trials, seed), threshold, mean_cross_edges })
}

/// Endpoint counts of `trials` walks of `k` steps from `v`.
pub fn endpoint_histogram(g: &Graph, v: usize, k: usize, trials: u64, seed: u64) -> Result<Vec<u64>> {
    require_start(g, v)?;
    let hist = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; g.n()],
            |mut acc, i| {
                let mut rng = rng::stream(seed, i);
                let mut x = v;
                for _ in 0..k {
                    x = step(g, x, &mut rng);
                }
                acc[x] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; g.n()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist)
}
