//! Passing from a dense graph to an almost-regular bipartite expander.
//!
//! The pipeline is: local-search bipartition, a `K0`-almost-regular
//! subgraph found by dyadic degree bucketing, then the density-increment
//! loop that deletes vertices of degree below `d(H)/2` or recurses into one
//! side of a sparse cut until no sparse cut remains.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph, VertexSet, EXHAUSTIVE_LIMIT};
use crate::profile::ConstantsProfile;
use crate::spectral::{self, SpectralProfile};

/// Step cap of the density-increment loop, per input vertex.
pub const STEP_BUDGET_PER_VERTEX: usize = 10;

/// Vertices of degree in `[2^i, 2^{i+1})` share class `i`.
fn degree_class(degree: usize) -> usize {
    debug_assert!(degree > 0);
    (usize::BITS - 1 - degree.leading_zeros()) as usize
}

/// Repeatedly deletes every vertex whose degree is below `Δ/K0` (and
/// every isolated vertex) until `Δ ≤ K0·δ` holds or nothing is left.
fn trim_to_band(g: &Graph, alive: &mut [bool], k0: f64) {
    let mut degree: Vec<usize> = (0..g.n())
        .map(|v| if alive[v] { g.neighbors(v).iter().filter(|&&u| alive[u]).count() } else { 0 })
        .collect();
    loop {
        let live = (0..g.n()).filter(|&v| alive[v]);
        let (min, max) = live.fold((usize::MAX, 0), |(lo, hi), v| (lo.min(degree[v]), hi.max(degree[v])));
        if min == usize::MAX || (min > 0 && max as f64 <= k0 * min as f64) {
            return;
        }
        let cutoff = max as f64 / k0;
        let doomed: Vec<usize> =
            (0..g.n()).filter(|&v| alive[v] && (degree[v] == 0 || (degree[v] as f64) < cutoff)).collect();
        for &v in &doomed {
            alive[v] = false;
        }
        for &v in &doomed {
            for &u in g.neighbors(v) {
                if alive[u] {
                    degree[u] -= 1;
                }
            }
        }
    }
}

/// A `K0`-almost-regular subgraph with average degree at least
/// `d(G) / (divisor · ln n)`.
///
/// Every contiguous range of dyadic degree classes is trimmed to the `K0`
/// band; among the survivors meeting the degree bound the one keeping the
/// most edges wins (earliest range on ties). Returns the subgraph and its
/// vertex origin table.
pub fn almost_regular_subgraph(g: &Graph, profile: &ConstantsProfile) -> Result<(Graph, Vec<usize>)> {
    let d = g.average_degree();
    if d < 2.0 {
        return Err(Error::Precondition(format!("average degree {d} below 2")));
    }
    let required = profile.almost_regular_min_degree(d, g.n());
    let classes: Vec<Option<usize>> =
        (0..g.n()).map(|v| (g.degree(v) > 0).then(|| degree_class(g.degree(v)))).collect();
    let top = classes.iter().flatten().copied().max().unwrap_or(0);
    let mut best: Option<(usize, Vec<bool>)> = None;
    let mut best_seen = 0.0f64;
    for lo in 0..=top {
        for hi in lo..=top {
            let mut alive: Vec<bool> = classes.iter().map(|c| matches!(c, Some(c) if (lo..=hi).contains(c))).collect();
            if !alive.iter().any(|&a| a) {
                continue;
            }
            trim_to_band(g, &mut alive, profile.almost_reg_k0);
            let n_alive = alive.iter().filter(|&&a| a).count();
            if n_alive == 0 {
                continue;
            }
            let twice_edges: usize =
                (0..g.n()).filter(|&v| alive[v]).map(|v| g.neighbors(v).iter().filter(|&&u| alive[u]).count()).sum();
            let avg = twice_edges as f64 / n_alive as f64;
            best_seen = best_seen.max(avg);
            if avg < required {
                continue;
            }
            let edges = twice_edges / 2;
            if best.as_ref().is_none_or(|(e, _)| edges > *e) {
                best = Some((edges, alive));
            }
        }
    }
    let (_, alive) = best.ok_or_else(|| Error::Stage {
        stage: "almost_regular_subgraph",
        message: format!(
            "no {}-almost-regular subgraph reaches average degree {required:.3} (best {best_seen:.3})",
            profile.almost_reg_k0
        ),
    })?;
    let keep: VertexSet = (0..g.n()).filter(|&v| alive[v]).collect();
    g.induced_subgraph(&keep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Exhaustive,
    Components,
    Sweep,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseCutSearch {
    /// A set `U` with `|U| ≤ n/2` and `e(U, Ū) < threshold·d(H)·|U|`.
    pub cut: Option<VertexSet>,
    pub method: SearchMethod,
    /// `λ2(N(H))` when the sweep ran.
    pub lambda2: Option<f64>,
}

impl SparseCutSearch {
    /// An empty result proves that no sparse cut exists.
    pub fn is_certificate(&self) -> bool {
        self.cut.is_none() && self.method == SearchMethod::Exhaustive
    }
}

fn is_sparse(cut: usize, size: usize, threshold: f64, d: f64) -> bool {
    (cut as f64) < threshold * d * size as f64
}

/// Looks for `U` with `|U| ≤ |V(H)|/2` and `e(U, Ū) < threshold·d(H)·|U|`.
///
/// Up to [`EXHAUSTIVE_LIMIT`] vertices every subset is checked and the set
/// minimising `e(U, Ū)/|U|` is returned. Larger disconnected graphs yield
/// their smallest component; larger connected graphs are swept along the
/// second eigenvector of `N(H)`, where finding nothing proves nothing.
pub fn find_sparse_cut(h: &Graph, threshold: f64) -> Result<SparseCutSearch> {
    if h.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let d = h.average_degree();
    if h.n() <= EXHAUSTIVE_LIMIT {
        let cut = h
            .min_expansion()?
            .filter(|(cut, size, _)| is_sparse(*cut, *size, threshold, d))
            .map(|(_, _, set)| set);
        return Ok(SparseCutSearch { cut, method: SearchMethod::Exhaustive, lambda2: None });
    }
    let components = h.components();
    if components.len() > 1 {
        let smallest = components.into_iter().min_by_key(|c| c.len()).expect("two or more components");
        let cut = is_sparse(0, smallest.len(), threshold, d).then_some(smallest);
        return Ok(SparseCutSearch { cut, method: SearchMethod::Components, lambda2: None });
    }
    let pair = spectral::second_eigenpair(h)?;
    let mut order: Vec<usize> = (0..h.n()).collect();
    let score: Vec<f64> = (0..h.n()).map(|v| pair.vector[v] / (h.degree(v) as f64).sqrt()).collect();
    order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for pass in 0..2 {
        if pass == 1 {
            order.reverse();
        }
        let mut inside = vec![false; h.n()];
        let mut cut = 0usize;
        for (i, &v) in order.iter().take(h.n() / 2).enumerate() {
            let internal = h.neighbors(v).iter().filter(|&&u| inside[u]).count();
            inside[v] = true;
            cut = cut + h.degree(v) - 2 * internal;
            let size = i + 1;
            if !is_sparse(cut, size, threshold, d) {
                continue;
            }
            if best.as_ref().is_none_or(|(bc, bs, _)| cut * bs < bc * size) {
                best = Some((cut, size, order[..size].to_vec()));
            }
        }
    }
    let cut = best.map(|(_, _, members)| members.into_iter().collect());
    Ok(SparseCutSearch { cut, method: SearchMethod::Sweep, lambda2: Some(pair.value) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum StepAction {
    /// Vertex ids are those of the density-increment input.
    RemoveLowDegreeVertex { vertex: usize, degree: usize },
    /// The sparse side `U` was dropped.
    KeepComplement { cut_side: Vec<usize> },
    /// Only the sparse side `U` was kept.
    KeepU { cut_side: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CleanupStep {
    pub index: usize,
    #[serde(flatten)]
    pub action: StepAction,
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub avg_degree_before: f64,
    pub avg_degree_after: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certification {
    /// Every subset was checked.
    Exhaustive,
    /// `λ2` implies the required expansion.
    Spectral { lambda2: f64, certified_expansion: f64 },
    /// The sweep found no sparse cut but `λ2` is too large to prove none
    /// exists.
    Heuristic { lambda2: f64, certified_expansion: f64 },
}

impl Certification {
    pub fn is_proof(&self) -> bool {
        !matches!(self, Certification::Heuristic { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub stage: String,
    pub vertices: usize,
    pub edges: usize,
    pub avg_degree: f64,
}

impl StageSummary {
    fn of(stage: &str, g: &Graph) -> Self {
        StageSummary { stage: stage.into(), vertices: g.n(), edges: g.m(), avg_degree: g.average_degree() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CleanupReport {
    pub lambda_step: f64,
    pub cut_threshold: f64,
    pub steps: Vec<CleanupStep>,
    pub certification: Certification,
    pub stages: Vec<StageSummary>,
    /// `d(G') / d(G1)` achieved by the density increment.
    pub degree_ratio: f64,
    /// Set when the output had to be restricted to its largest component.
    pub component_restricted: Option<(usize, usize)>,
    /// Final vertex ids mapped to ids of the graph the report started from.
    pub origin: Vec<usize>,
    pub spectral: Option<SpectralProfile>,
}

impl CleanupReport {
    /// One JSON object per step, then one summary line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("step serializes"));
            out.push('\n');
        }
        let summary = serde_json::json!({
            "summary": {
                "lambda_step": self.lambda_step,
                "cut_threshold": self.cut_threshold,
                "certification": self.certification,
                "stages": self.stages,
                "degree_ratio": self.degree_ratio,
                "component_restricted": self.component_restricted,
                "spectral": self.spectral,
                "final_vertices": self.origin.len(),
            }
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }

    /// Checks the average-degree bookkeeping: removals and kept complements
    /// (at least half the vertices) never lower the average degree, a kept
    /// sparse side lowers it by a factor of at most `1 - λ`.
    pub fn trajectory_violations(&self) -> Vec<usize> {
        let slack = 1e-12;
        self.steps
            .iter()
            .filter(|s| {
                let floor = match s.action {
                    StepAction::KeepU { .. } => (1.0 - self.lambda_step) * s.avg_degree_before,
                    _ => s.avg_degree_before,
                };
                s.avg_degree_after < floor - slack
            })
            .map(|s| s.index)
            .collect()
    }

    /// Re-applies the recorded steps to the density-increment input,
    /// checking each removal and each cut against its rule, and returns the
    /// resulting vertex set (input ids).
    pub fn replay(&self, g1: &Graph) -> Result<VertexSet> {
        let mut current = VertexSet::full(g1.n());
        for step in &self.steps {
            let (h, origin) = g1.induced_subgraph(&current)?;
            let local = |v: usize| origin.binary_search(&v).map_err(|_| Error::OutOfRange { vertex: v, n: h.n() });
            let d = h.average_degree();
            current = match &step.action {
                StepAction::RemoveLowDegreeVertex { vertex, .. } => {
                    let deg = h.degree(local(*vertex)?);
                    if 2 * deg as u64 * h.n() as u64 >= 2 * h.m() as u64 {
                        return Err(Error::Stage {
                            stage: "replay",
                            message: format!("step {}: vertex {vertex} has degree {deg} >= d/2", step.index),
                        });
                    }
                    current.iter().filter(|v| v != vertex).collect()
                }
                StepAction::KeepComplement { cut_side } | StepAction::KeepU { cut_side } => {
                    let u: VertexSet = cut_side.iter().map(|&v| local(v)).collect::<Result<_>>()?;
                    let cut = h.cut_edges(&u)?;
                    if 2 * u.len() > h.n() || !is_sparse(cut, u.len(), self.cut_threshold, d) {
                        return Err(Error::Stage {
                            stage: "replay",
                            message: format!("step {}: recorded cut is not sparse", step.index),
                        });
                    }
                    let side: VertexSet = cut_side.iter().copied().collect();
                    match step.action {
                        StepAction::KeepU { .. } => side,
                        _ => current.iter().filter(|&v| !side.contains(v)).collect(),
                    }
                }
            };
            if current.len() != step.vertices_after {
                return Err(Error::Stage { stage: "replay", message: format!("step {}: size mismatch", step.index) });
            }
        }
        Ok(current)
    }
}

/// Output of [`density_increment`]: the final subgraph, its origin table
/// into the input, and the step log.
#[derive(Clone, Debug)]
pub struct Increment {
    pub graph: Graph,
    pub origin: Vec<usize>,
    pub report: CleanupReport,
}

/// Density-increment loop with `λ` evaluated at `n = |V(G1)|`.
pub fn density_increment(g1: &Graph, profile: &ConstantsProfile) -> Result<Increment> {
    density_increment_at(g1, profile, g1.n())
}

/// Density-increment loop with `λ = profile.lambda_step(log_n_vertices)`.
///
/// Each step removes the lowest-degree vertex (lowest id on ties) if its
/// degree is below `d(H)/2`; otherwise searches for a sparse cut at
/// threshold `λ/3` and keeps the complement when it is at least as dense
/// as `H`, else the cut side; otherwise stops and records how the absence
/// of a sparse cut was established.
pub fn density_increment_at(g1: &Graph, profile: &ConstantsProfile, log_n_vertices: usize) -> Result<Increment> {
    if g1.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if g1.m() == 0 {
        return Err(Error::Edgeless);
    }
    let lambda = profile.lambda_step(log_n_vertices);
    let threshold = lambda / 3.0;
    let budget = STEP_BUDGET_PER_VERTEX * g1.n();
    let mut steps: Vec<CleanupStep> = Vec::new();
    let mut h = g1.clone();
    let mut origin: Vec<usize> = (0..g1.n()).collect();
    let certification = loop {
        // Low-degree removals, done in place before materialising H.
        let mut alive = vec![true; h.n()];
        let mut degree: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
        let (mut n_alive, mut twice_m) = (h.n(), 2 * h.m());
        let mut removed_any = false;
        while let Some(v) = (0..h.n()).filter(|&v| alive[v]).min_by_key(|&v| (degree[v], v)) {
            // degree < d/2  <=>  2·deg·n < 2m
            if 2 * degree[v] * n_alive >= twice_m {
                break;
            }
            if steps.len() >= budget {
                return Err(Error::BudgetExhausted(budget));
            }
            let before = (n_alive, twice_m as f64 / n_alive as f64);
            alive[v] = false;
            n_alive -= 1;
            twice_m -= 2 * degree[v];
            for &u in h.neighbors(v) {
                if alive[u] {
                    degree[u] -= 1;
                }
            }
            removed_any = true;
            steps.push(CleanupStep {
                index: steps.len(),
                action: StepAction::RemoveLowDegreeVertex { vertex: origin[v], degree: degree[v] },
                vertices_before: before.0,
                vertices_after: n_alive,
                avg_degree_before: before.1,
                avg_degree_after: if n_alive == 0 { 0.0 } else { twice_m as f64 / n_alive as f64 },
            });
        }
        if removed_any {
            let keep: VertexSet = (0..h.n()).filter(|&v| alive[v]).collect();
            let (next, local) = h.induced_subgraph(&keep)?;
            origin = local.into_iter().map(|v| origin[v]).collect();
            h = next;
        }

        let search = find_sparse_cut(&h, threshold)?;
        let Some(u) = search.cut else {
            break if search.method == SearchMethod::Exhaustive {
                Certification::Exhaustive
            } else {
                let lambda2 = search.lambda2.map_or_else(|| spectral::lambda2(&h), Ok)?;
                let certified_expansion = spectral::certified_expansion(&h, lambda2);
                if certified_expansion >= threshold {
                    Certification::Spectral { lambda2, certified_expansion }
                } else {
                    Certification::Heuristic { lambda2, certified_expansion }
                }
            };
        };
        if steps.len() >= budget {
            return Err(Error::BudgetExhausted(budget));
        }
        let d = h.average_degree();
        let complement = u.complement(h.n());
        let (hc, oc) = h.induced_subgraph(&complement)?;
        let (hu, ou) = h.induced_subgraph(&u)?;
        let cut_side: Vec<usize> = u.iter().map(|v| origin[v]).collect();
        let (action, next, local) = if hc.average_degree() >= d {
            (StepAction::KeepComplement { cut_side }, hc, oc)
        } else if hu.average_degree() >= (1.0 - lambda) * d {
            (StepAction::KeepU { cut_side }, hu, ou)
        } else {
            return Err(Error::Stage {
                stage: "density_increment",
                message: format!("neither side of a sparse cut of size {} is dense enough", u.len()),
            });
        };
        steps.push(CleanupStep {
            index: steps.len(),
            action,
            vertices_before: h.n(),
            vertices_after: next.n(),
            avg_degree_before: d,
            avg_degree_after: next.average_degree(),
        });
        origin = local.into_iter().map(|v| origin[v]).collect();
        h = next;
    };
    let report = CleanupReport {
        lambda_step: lambda,
        cut_threshold: threshold,
        steps,
        certification,
        stages: vec![StageSummary::of("density_increment_input", g1), StageSummary::of("density_increment", &h)],
        degree_ratio: h.average_degree() / g1.average_degree(),
        component_restricted: None,
        origin: origin.clone(),
        spectral: None,
    };
    Ok(Increment { graph: h, origin, report })
}

/// Certified almost-regular bipartite expander with its provenance.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub expander: BipartiteGraph,
    /// Expander ids mapped to ids of the input graph.
    pub origin: Vec<usize>,
    pub spectral: SpectralProfile,
    pub report: CleanupReport,
}

/// Postconditions of an extraction, each checked directly on the output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Postconditions {
    pub bipartite: bool,
    pub almost_regular: bool,
    pub min_degree_half_average: bool,
    pub expansion_proved: bool,
    /// Set for outputs small enough to enumerate.
    pub exhaustive_expander: Option<bool>,
    pub regularity_ratio: f64,
    pub degree_ratio: f64,
}

impl Postconditions {
    pub fn all_certified(&self) -> bool {
        self.bipartite
            && self.almost_regular
            && self.min_degree_half_average
            && self.expansion_proved
            && self.exhaustive_expander.unwrap_or(true)
    }
}

impl Extraction {
    pub fn postconditions(&self, host: &Graph, profile: &ConstantsProfile) -> Postconditions {
        let g = self.expander.graph();
        let bipartite = g.edges().all(|(u, v)| {
            self.expander.side_of(u) != self.expander.side_of(v) && host.has_edge(self.origin[u], self.origin[v])
        }) && (0..g.n()).all(|v| g.degree(v) > 0);
        let exhaustive_expander = (g.n() <= EXHAUSTIVE_LIMIT)
            .then(|| g.is_lambda_expander(self.report.cut_threshold).unwrap_or(false));
        Postconditions {
            bipartite,
            almost_regular: g.is_k_almost_regular(profile.k_final).unwrap_or(false),
            min_degree_half_average: 2.0 * g.min_degree() as f64 >= g.average_degree(),
            expansion_proved: self.report.certification.is_proof(),
            exhaustive_expander,
            regularity_ratio: g.regularity_ratio(),
            degree_ratio: self.report.degree_ratio,
        }
    }
}

/// Bipartition, almost-regular subgraph, density increment, then the
/// spectral certificate of the result.
pub fn extract_expander(g: &Graph, profile: &ConstantsProfile) -> Result<Extraction> {
    let d = g.average_degree();
    let floor = profile.extract_min_degree(g.n());
    if d < floor || g.m() == 0 {
        return Err(Error::Precondition(format!("average degree {d:.3} below required {floor:.3}")));
    }
    let (b0, o0) = g.greedy_bipartition().map_err(|e| Error::stage("greedy_bipartition", e))?;
    let (g1, o1) =
        almost_regular_subgraph(b0.graph(), profile).map_err(|e| Error::stage("almost_regular_subgraph", e))?;
    let mut inc = density_increment_at(&g1, profile, g.n()).map_err(|e| Error::stage("density_increment", e))?;
    let mut origin: Vec<usize> = inc.origin.iter().map(|&v| o0[o1[v]]).collect();

    let mut restricted = None;
    while !inc.graph.is_connected() {
        let largest = inc.graph.largest_component();
        log::info!("restricting to the largest component ({} of {} vertices)", largest.len(), inc.graph.n());
        restricted = Some((inc.graph.n(), largest.len()));
        let (comp, local) = inc.graph.induced_subgraph(&largest)?;
        let again = density_increment_at(&comp, profile, g.n()).map_err(|e| Error::stage("density_increment", e))?;
        origin = again.origin.iter().map(|&v| origin[local[v]]).collect();
        let mut steps = inc.report.steps;
        steps.extend(again.report.steps);
        inc = Increment { report: CleanupReport { steps, ..again.report }, ..again };
    }

    let sides = origin
        .iter()
        .map(|&v| o0.iter().position(|&w| w == v).map(|i| b0.side_of(i)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Stage { stage: "extract_expander", message: "lost vertex origin".into() })?;
    let expander =
        BipartiteGraph::new(inc.graph.clone(), sides).map_err(|e| Error::stage("extract_expander", e))?;
    let ratio = expander.graph().regularity_ratio();
    if ratio > profile.k_final {
        return Err(Error::Stage {
            stage: "extract_expander",
            message: format!("output is only {ratio:.3}-almost-regular (need {})", profile.k_final),
        });
    }
    let spectral = spectral::spectral_certificate(&expander, ratio.max(1.0))
        .map_err(|e| Error::stage("spectral_certificate", e))?;

    let mut report = inc.report;
    report.stages = vec![
        StageSummary::of("input", g),
        StageSummary::of("greedy_bipartition", b0.graph()),
        StageSummary::of("almost_regular_subgraph", &g1),
        StageSummary::of("density_increment", expander.graph()),
    ];
    report.degree_ratio = expander.graph().average_degree() / g1.average_degree();
    report.component_restricted = restricted;
    report.origin = origin.clone();
    report.spectral = Some(spectral.clone());
    Ok(Extraction { expander, origin, spectral, report })
}
