//! Random-walk search for a cycle with at least as many chords as
//! vertices.
//!
//! Walks run inside a certified expander extracted from the host graph;
//! a self-avoiding walk whose first and last quarters are joined by a host
//! edge closes into a cycle, and its chords are counted in the host.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cleanup::{extract_expander, Extraction};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::profile::{ConstantsProfile, Preset};
use crate::rng;
use crate::walk::{odd_stride, step};

/// Attempts evaluated per parallel batch.
const BATCH: u64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttemptConfig {
    pub walk_length: usize,
    pub mixing_time: usize,
    pub k_prime: usize,
    /// Steps `i` with `4i < t` form the first quarter.
    pub first_quarter_end: usize,
    /// Steps `i` with `4i > 3t` form the last quarter.
    pub last_quarter_start: usize,
    /// Edge target `factor·t/k` for each shifted subsample.
    pub chord_target: f64,
    pub budget: u64,
}

impl AttemptConfig {
    pub fn new(walk_length: usize, mixing_time: usize, target_factor: f64, budget: u64) -> Result<Self> {
        if mixing_time == 0 || budget == 0 {
            return Err(Error::InvalidParameter("mixing time and budget must be at least 1".into()));
        }
        let k_prime = odd_stride(mixing_time);
        if walk_length < 4 * k_prime {
            return Err(Error::InvalidParameter(format!("walk length {walk_length} below 4k' = {}", 4 * k_prime)));
        }
        let t = walk_length;
        Ok(AttemptConfig {
            walk_length: t,
            mixing_time,
            k_prime,
            first_quarter_end: t.div_ceil(4),
            last_quarter_start: 3 * t / 4 + 1,
            chord_target: target_factor * t as f64 / mixing_time as f64,
            budget,
        })
    }

    /// `t = max(4k', min(n', ⌈β²n'/(divisor·k)⌉))`.
    pub fn from_profile(profile: &ConstantsProfile, n_prime: usize, mixing_time: u64, budget: u64) -> Result<Self> {
        let k = mixing_time.max(1) as usize;
        let raw = profile.raw_walk_length(n_prime, k as u64);
        let t = (4 * odd_stride(k)).max((n_prime as f64).min(raw) as usize);
        Self::new(t, k, profile.chord_target_factor, budget)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Events {
    #[serde(rename = "E1")]
    pub e1: bool,
    #[serde(rename = "E2")]
    pub e2: bool,
    /// Evaluated only when the walk is self-avoiding.
    #[serde(rename = "E3")]
    pub e3: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub attempt: u64,
    pub t: usize,
    pub k: usize,
    pub k_prime: usize,
    pub preset: Preset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    /// Host vertex ids; the last vertex is joined back to the first.
    pub cycle: Vec<usize>,
    pub chords: Vec<(usize, usize)>,
    pub events: Events,
    pub provenance: Provenance,
}

impl CycleWitness {
    pub fn surplus(&self) -> i64 {
        self.chords.len() as i64 - self.cycle.len() as i64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }

    /// Cycle edges solid and bold, chords dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph witness {\n  node [shape=circle];\n");
        let len = self.cycle.len();
        for i in 0..len {
            let (a, b) = (self.cycle[i], self.cycle[(i + 1) % len]);
            let _ = writeln!(out, "  {a} -- {b} [penwidth=2.5, color=black];");
        }
        for (a, b) in &self.chords {
            let _ = writeln!(out, "  {a} -- {b} [style=dashed, color=gray40];");
        }
        out.push_str("}\n");
        out
    }
}

/// Every problem that stops `w` from being a valid witness in `g`.
pub fn witness_problems(g: &Graph, w: &CycleWitness) -> Vec<String> {
    let mut problems = Vec::new();
    let len = w.cycle.len();
    if len < 3 {
        problems.push(format!("cycle has {len} vertices"));
        return problems;
    }
    if let Some(&v) = w.cycle.iter().find(|&&v| v >= g.n()) {
        problems.push(format!("vertex {v} out of range"));
        return problems;
    }
    let mut position = vec![usize::MAX; g.n()];
    for (i, &v) in w.cycle.iter().enumerate() {
        if position[v] != usize::MAX {
            problems.push(format!("vertex {v} repeated"));
        }
        position[v] = i;
    }
    for i in 0..len {
        let (a, b) = (w.cycle[i], w.cycle[(i + 1) % len]);
        if !g.has_edge(a, b) {
            problems.push(format!("cycle edge {a}-{b} missing from host"));
        }
    }
    let consecutive = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        d == 1 || d == len - 1
    };
    let mut seen = HashSet::new();
    for &(a, b) in &w.chords {
        let inside = a < g.n() && b < g.n() && position[a] != usize::MAX && position[b] != usize::MAX;
        if !inside {
            problems.push(format!("chord {a}-{b} leaves the cycle"));
            continue;
        }
        if !g.has_edge(a, b) {
            problems.push(format!("chord {a}-{b} is not a host edge"));
        }
        if a == b || consecutive(position[a], position[b]) {
            problems.push(format!("chord {a}-{b} joins consecutive cycle vertices"));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            problems.push(format!("chord {a}-{b} listed twice"));
        }
    }
    if problems.is_empty() {
        let set: VertexSet = w.cycle.iter().copied().collect();
        let recount = g.internal_edges(&set).map_or(0, |e| e.saturating_sub(len));
        if recount < len || w.chords.len() < len {
            problems.push(format!("{} chords listed, {recount} present, cycle length {len}", w.chords.len()));
        }
    }
    problems
}

/// Exact check of a witness against the host; no randomness.
pub fn verify_witness(g: &Graph, w: &CycleWitness) -> bool {
    witness_problems(g, w).is_empty()
}

/// Host cycle and its chords.
pub type CycleAndChords = (Vec<usize>, Vec<(usize, usize)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptOutcome {
    pub events: Events,
    /// Step at which the walk first revisited a vertex.
    pub death_step: Option<usize>,
    pub chords: Option<usize>,
    pub cycle_length: Option<usize>,
    pub witness: Option<CycleAndChords>,
}

/// Edges spanned by each shifted subsample `W_i(k)` of the middle half,
/// checked pairwise disjoint; returns whether all reach the target.
fn shifted_subsample_event(walk_graph: &Graph, steps: &[usize], cfg: &AttemptConfig) -> Result<bool> {
    let q1 = cfg.walk_length / 4;
    let q3 = 3 * cfg.walk_length / 4;
    let mut claimed: HashSet<(usize, usize)> = HashSet::new();
    let mut all_reach = true;
    for i in 1..=cfg.mixing_time {
        let start = q1 + i;
        let picks: Vec<usize> =
            (start + cfg.k_prime..=q3).step_by(cfg.k_prime).map(|p| steps[p]).collect();
        let member: HashSet<usize> = picks.iter().copied().collect();
        let mut spanned = 0usize;
        for &a in &picks {
            for &b in walk_graph.neighbors(a) {
                if a < b && member.contains(&b) {
                    spanned += 1;
                    if !claimed.insert((a, b)) {
                        return Err(Error::Stage {
                            stage: "attempt",
                            message: format!("edge {a}-{b} spanned by two shifted subsamples"),
                        });
                    }
                }
            }
        }
        all_reach &= spanned as f64 >= cfg.chord_target;
    }
    Ok(all_reach)
}

/// Evaluates the events on a given walk. `steps` are ids of `walk_graph`;
/// `origin` maps them into `host`, where the closing edge and the chords
/// are looked up.
pub fn evaluate_walk(
    walk_graph: &Graph,
    host: &Graph,
    origin: &[usize],
    cfg: &AttemptConfig,
    steps: &[usize],
) -> Result<AttemptOutcome> {
    let t = cfg.walk_length;
    if steps.len() != t + 1 {
        return Err(Error::InvalidParameter(format!("walk has {} steps, expected {}", steps.len(), t + 1)));
    }
    let mut outcome =
        AttemptOutcome { events: Events::default(), death_step: None, chords: None, cycle_length: None, witness: None };
    let mut position = vec![usize::MAX; host.n()];
    for (i, &v) in steps.iter().enumerate() {
        let h = origin[v];
        if position[h] != usize::MAX {
            outcome.death_step = Some(i);
            return Ok(outcome);
        }
        position[h] = i;
    }
    outcome.events.e1 = true;
    outcome.events.e3 = Some(shifted_subsample_event(walk_graph, steps, cfg)?);

    // Longest closing edge, then smallest first index.
    let mut best: Option<(usize, usize)> = None;
    for (i, &v) in steps.iter().enumerate().take(cfg.first_quarter_end) {
        for &y in host.neighbors(origin[v]) {
            let j = position[y];
            if j == usize::MAX || j < cfg.last_quarter_start {
                continue;
            }
            if best.is_none_or(|(bi, bj)| j - i > bj - bi) {
                best = Some((i, j));
            }
        }
    }
    let Some((i, j)) = best else { return Ok(outcome) };
    outcome.events.e2 = true;
    let cycle: Vec<usize> = steps[i..=j].iter().map(|&v| origin[v]).collect();
    let len = cycle.len();
    let mut chords = Vec::new();
    for (a_pos, &a) in cycle.iter().enumerate() {
        for &b in host.neighbors(a) {
            let b_pos = position[b];
            if b_pos == usize::MAX || b_pos < i || b_pos > j {
                continue;
            }
            let b_pos = b_pos - i;
            if b_pos > a_pos + 1 && !(a_pos == 0 && b_pos == len - 1) {
                chords.push((a.min(b), a.max(b)));
            }
        }
    }
    chords.sort_unstable();
    outcome.chords = Some(chords.len());
    outcome.cycle_length = Some(len);
    if chords.len() >= len {
        outcome.witness = Some((cycle, chords));
    }
    Ok(outcome)
}

/// One walk of length `t` from a uniform start in the expander, drawn from
/// stream `attempt` of `seed`; stops at the first revisit.
pub fn attempt(
    extraction: &Extraction,
    host: &Graph,
    cfg: &AttemptConfig,
    seed: u64,
    attempt: u64,
) -> Result<AttemptOutcome> {
    let g = extraction.expander.graph();
    let mut rng = rng::stream(seed, attempt);
    let mut steps = Vec::with_capacity(cfg.walk_length + 1);
    let mut visited = HashSet::with_capacity(cfg.walk_length + 1);
    let mut v = rng::below(&mut rng, g.n());
    steps.push(v);
    visited.insert(v);
    for i in 1..=cfg.walk_length {
        v = step(g, v, &mut rng);
        if !visited.insert(v) {
            let events = Events::default();
            return Ok(AttemptOutcome { events, death_step: Some(i), chords: None, cycle_length: None, witness: None });
        }
        steps.push(v);
    }
    evaluate_walk(g, host, &extraction.origin, cfg, &steps)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AttemptStats {
    pub attempts: u64,
    pub e1: u64,
    pub e2: u64,
    pub e3: u64,
    /// Self-avoiding with a closing edge but too few chords.
    pub short_of_chords: u64,
    /// `death_histogram[i]`: walks whose first revisit was at step `i`.
    pub death_histogram: Vec<u64>,
}

impl AttemptStats {
    fn record(&mut self, o: &AttemptOutcome) {
        self.attempts += 1;
        self.e1 += o.events.e1 as u64;
        self.e2 += o.events.e2 as u64;
        self.e3 += (o.events.e3 == Some(true)) as u64;
        self.short_of_chords += (o.events.e2 && o.witness.is_none()) as u64;
        if let Some(s) = o.death_step {
            self.death_histogram[s] += 1;
        }
    }

    pub fn rate(&self, count: u64) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            count as f64 / self.attempts as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordSearch {
    pub config: AttemptConfig,
    pub stats: AttemptStats,
    pub witness: Option<CycleWitness>,
    pub expander_vertices: usize,
    pub expander_edges: usize,
    pub below_edge_threshold: bool,
}

/// Extraction, then up to `budget` seeded attempts; the lowest-index
/// successful attempt wins whatever the thread count.
pub fn find_chordal_cycle(g: &Graph, profile: &ConstantsProfile, budget: u64, seed: u64) -> Result<ChordSearch> {
    let below_edge_threshold = (g.m() as f64) < profile.edge_threshold(g.n());
    if below_edge_threshold {
        log::warn!("{} edges is below the threshold {:.0}", g.m(), profile.edge_threshold(g.n()));
    }
    let extraction = extract_expander(g, profile)?;
    let cfg = AttemptConfig::from_profile(profile, extraction.expander.n(), extraction.spectral.mixing_time_bound, budget)?;
    let mut stats = AttemptStats { death_histogram: vec![0; cfg.walk_length + 1], ..Default::default() };
    let mut found = None;
    let mut next = 0u64;
    while next < budget && found.is_none() {
        let end = (next + BATCH).min(budget);
        let outcomes: Vec<AttemptOutcome> = (next..end)
            .into_par_iter()
            .map(|i| attempt(&extraction, g, &cfg, seed, i))
            .collect::<Result<_>>()?;
        for (offset, outcome) in outcomes.into_iter().enumerate() {
            stats.record(&outcome);
            if let Some((cycle, chords)) = outcome.witness {
                let provenance = Provenance {
                    seed,
                    attempt: next + offset as u64,
                    t: cfg.walk_length,
                    k: cfg.mixing_time,
                    k_prime: cfg.k_prime,
                    preset: profile.preset,
                };
                found = Some(CycleWitness { cycle, chords, events: outcome.events, provenance });
                break;
            }
        }
        next = end;
    }
    if let Some(w) = &found {
        let problems = witness_problems(g, w);
        if !problems.is_empty() {
            return Err(Error::Stage { stage: "verify_witness", message: problems.join("; ") });
        }
    }
    Ok(ChordSearch {
        config: cfg,
        stats,
        witness: found,
        expander_vertices: extraction.expander.n(),
        expander_edges: extraction.expander.graph().m(),
        below_edge_threshold,
    })
}
