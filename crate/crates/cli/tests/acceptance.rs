//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use chordwalk_core::cleanup::extract_expander;
use chordwalk_core::corpus;
use chordwalk_core::generators::{almost_regular_bipartite, gnp};
use chordwalk_core::oracle::{
    exact_avoid_all, exact_avoid_event, exact_self_avoiding_prob, max_chord_surplus, ratio_string, ratio_to_f64,
    WalkPowers,
};
use chordwalk_core::pipeline::{find_chordal_cycle, verify_witness};
use chordwalk_core::rng;
use chordwalk_core::spectral::{
    conductance_exact, empirical_mixing_time, lambda2, mixing_target, spectral_certificate, LAMBDA2_TOLERANCE,
};
use chordwalk_core::star_forest::{check_family, family_shape, root_disjoint_family};
use chordwalk_core::walk::{avoid_event_estimate, self_avoiding_estimate, short_avoid_lower_bound_check};
use chordwalk_core::{BipartiteGraph, ConstantsProfile, Graph, VertexSet};

/// Additive slack on every floating-point comparison against a bound.
const BOUND_SLACK: f64 = 1e-9;
const SANDWICH_GRAPHS: usize = 200;
const SANDWICH_TIME: Duration = Duration::from_secs(60);
const EXTRACTION_GRAPHS: usize = 100;
const EXTRACTION_TIME: Duration = Duration::from_secs(600);
const STAR_FOREST_SEEDS: u64 = 100;
const STAR_FOREST_PASSES: usize = 95;
const COVERAGE_CASES: u64 = 100;
const COVERAGE_PASSES: usize = 93;
const COVERAGE_TRIALS: u64 = 4_000;
const PIPELINE_SEEDS: u64 = 10;
const PIPELINE_PASSES: usize = 9;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn desk() -> ConstantsProfile {
    ConstantsProfile::desk()
}

/// Cheeger sandwich and the expansion-to-conductance bound on every named
/// graph plus random connected graphs on at most 24 vertices.
fn spectral_sandwich() -> Verdict {
    let start = Instant::now();
    let named = corpus::named_small();
    let random = corpus::random_connected(SANDWICH_GRAPHS.saturating_sub(named.len()) + 40, 5..=24, 100);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, g) in named.iter().chain(&random) {
        let phi = conductance_exact(g).unwrap().phi;
        let l2 = lambda2(g).unwrap();
        let expansion = g.expansion_constant().unwrap();
        let k = g.regularity_ratio();
        if l2 > 1.0 - phi * phi / 8.0 + BOUND_SLACK || phi < expansion / k - BOUND_SLACK {
            failures.push(name.clone());
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && checked >= SANDWICH_GRAPHS && elapsed <= SANDWICH_TIME,
        format!("{checked} graphs, {} violations {failures:?}, {:.1}s", failures.len(), elapsed.as_secs_f64()),
    )
}

/// Exact `M^k` entries within `sqrt(d(u)/d(v))·λ2^k` of the parity target.
fn exact_mixing_bound() -> Verdict {
    let graphs = corpus::random_connected_bipartite(50, 4..=64, 200);
    let mut worst_margin = f64::INFINITY;
    let mut failures = Vec::new();
    for (name, g) in &graphs {
        let b = BipartiteGraph::from_graph(g.clone()).unwrap();
        let l2 = lambda2(g).unwrap().max(0.0);
        let mut powers = WalkPowers::new(g).unwrap();
        let mut ok = true;
        for k in 1..=50 {
            let rows = powers.advance().to_f64_rows();
            for (v, row) in rows.iter().enumerate() {
                for (u, &p) in row.iter().enumerate() {
                    let allowed = (g.degree(u) as f64 / g.degree(v) as f64).sqrt() * l2.powi(k as i32) + BOUND_SLACK;
                    let margin = allowed - (p - mixing_target(&b, v, u, k)).abs();
                    worst_margin = worst_margin.min(margin);
                    ok &= margin >= 0.0;
                }
            }
        }
        if !ok {
            failures.push(name.clone());
        }
    }
    verdict(
        failures.is_empty(),
        format!("{} graphs, k <= 50, smallest margin {worst_margin:.3e}, failures {failures:?}", graphs.len()),
    )
}

/// Certified mixing time never below the first `k` at which every entry
/// is within `1/n²` of its target.
fn certified_mixing_time() -> Verdict {
    let named = corpus::named_small().into_iter().filter(|(_, g)| BipartiteGraph::from_graph(g.clone()).is_ok());
    let graphs: Vec<_> = named.chain(corpus::random_connected_bipartite(100, 4..=40, 300)).collect();
    let mut failures = Vec::new();
    let mut tightest = f64::INFINITY;
    for (name, g) in &graphs {
        let b = BipartiteGraph::from_graph(g.clone()).unwrap();
        let cert = spectral_certificate(&b, g.regularity_ratio()).unwrap();
        let bound = cert.mixing_time_bound as usize;
        match empirical_mixing_time(&b, bound).unwrap() {
            Some(k) => tightest = tightest.min(bound as f64 / k as f64),
            None => failures.push(name.clone()),
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} bipartite graphs, tolerance {LAMBDA2_TOLERANCE:e} on λ2, min bound/empirical {tightest:.2}, failures {failures:?}",
            graphs.len()
        ),
    )
}

/// Extraction postconditions and cleanup trajectory on random graphs, plus
/// exhaustive expansion checks on small inputs.
fn extraction_postconditions() -> Verdict {
    let start = Instant::now();
    let profile = desk();
    let mut failures = Vec::new();
    for s in 0..EXTRACTION_GRAPHS as u64 {
        let n = 500 + (s as usize * 151) % 1501;
        let d = 20 + (s as usize * 7) % 41;
        let g = gnp(n, d as f64 / (n - 1) as f64, 10_000 + s).unwrap();
        let ok = match extract_expander(&g, &profile) {
            Ok(x) => {
                x.postconditions(&g, &profile).all_certified()
                    && x.report.trajectory_violations().is_empty()
            }
            Err(_) => false,
        };
        if !ok {
            failures.push(format!("n={n} d={d} seed={}", 10_000 + s));
        }
    }
    let elapsed = start.elapsed();
    let small: Vec<Graph> = vec![
        Graph::complete(12),
        Graph::complete_bipartite(12, 12),
        gnp(20, 0.6, 1).unwrap(),
        gnp(22, 0.5, 2).unwrap(),
        gnp(24, 0.55, 3).unwrap(),
    ];
    let mut small_ok = 0;
    for g in &small {
        if let Ok(x) = extract_expander(g, &profile) {
            let post = x.postconditions(g, &profile);
            small_ok += usize::from(post.all_certified() && post.exhaustive_expander == Some(true));
        }
    }
    verdict(
        failures.is_empty() && small_ok == small.len() && elapsed <= EXTRACTION_TIME,
        format!(
            "{} random graphs in {:.1}s, failures {failures:?}; small exhaustive {small_ok}/{}",
            EXTRACTION_GRAPHS,
            elapsed.as_secs_f64(),
            small.len()
        ),
    )
}

/// Root-disjoint star-forest families on the almost-regular model.
fn star_forest_families() -> Verdict {
    let profile = desk();
    let mut passes = 0;
    let mut shape = None;
    for seed in 0..STAR_FOREST_SEEDS {
        let b = almost_regular_bipartite(1000, 32, 16.0 / 1000.0, seed).unwrap();
        let (count, size, forests) = family_shape(&profile, b.n(), b.graph().min_degree());
        shape = Some((count, size, forests));
        if let Ok(family) = root_disjoint_family(&b, &profile) {
            passes += usize::from(family.len() == forests && check_family(&b, &family, size).is_ok());
        }
    }
    verdict(
        passes >= STAR_FOREST_PASSES,
        format!("{passes}/{STAR_FOREST_SEEDS} seeds (need {STAR_FOREST_PASSES}), last shape {shape:?}"),
    )
}

/// Monte Carlo intervals against exact values, plus the exact fixtures.
fn estimate_coverage() -> Verdict {
    let self_avoid = corpus::random_connected(COVERAGE_CASES as usize / 2, 6..=14, 500);
    let avoid = corpus::random_connected(COVERAGE_CASES as usize / 2, 6..=14, 900);
    let mut covered = 0;
    for (i, (_, g)) in self_avoid.iter().enumerate() {
        let len = 2 + i % 4;
        let exact = ratio_to_f64(&exact_self_avoiding_prob(g, 0, len).unwrap().0);
        let est = self_avoiding_estimate(g, 0, len, COVERAGE_TRIALS, 7_000 + i as u64).unwrap();
        covered += usize::from(est.covers(exact));
    }
    for (i, (_, g)) in avoid.iter().enumerate() {
        let mut pool: Vec<usize> = (1..g.n()).collect();
        rng::shuffle(&mut rng::stream(i as u64, 0), &mut pool);
        let a: VertexSet = pool.into_iter().take(1 + i % 3).collect();
        let k = 1 + i % 4;
        let exact = ratio_to_f64(&exact_avoid_event(g, 0, &a, k).unwrap());
        let est = avoid_event_estimate(g, 0, &a, k, COVERAGE_TRIALS, 8_000 + i as u64).unwrap();
        covered += usize::from(est.covers(exact));
    }
    let k4 = ratio_string(&exact_self_avoiding_prob(&Graph::complete(4), 0, 2).unwrap().0);
    let p3 = ratio_string(&exact_avoid_event(&Graph::path(3), 0, &[2].into_iter().collect(), 2).unwrap());
    verdict(
        covered >= COVERAGE_PASSES && k4 == "2/3" && p3 == "1/2",
        format!("{covered}/{COVERAGE_CASES} covered (need {COVERAGE_PASSES}); K4 L=2 {k4}; P3 avoid {{2}} k=2 {p3}"),
    )
}

/// Short-walk self-avoidance bounds by exact enumeration.
fn short_walk_bounds() -> Verdict {
    let fixtures: Vec<(&str, Graph, Vec<usize>, usize)> = vec![
        ("K250,250 k=1", Graph::complete_bipartite(250, 250), vec![], 1),
        ("K250,250 k=1 |S|=1", Graph::complete_bipartite(250, 250), vec![300], 1),
        ("K1000,1000 k=2", Graph::complete_bipartite(1000, 1000), vec![1500], 2),
        ("G(600,0.9) k=1", gnp(600, 0.9, 5).unwrap(), vec![7], 1),
        ("K50,50 k=1", Graph::complete_bipartite(50, 50), vec![60], 1),
        ("K40,40 k=3", Graph::complete_bipartite(40, 40), vec![45, 3], 3),
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    let mut non_vacuous = 0;
    for (name, g, s, k) in fixtures {
        let set = VertexSet::new(s, g.n()).unwrap();
        let c = short_avoid_lower_bound_check(&g, 0, &set, k).unwrap();
        pass &= c.ok && c.sharper_ok;
        non_vacuous += usize::from(!c.vacuous);
        lines.push(format!(
            "{name}: p={:.6} bound={:.4}{} sharper={:.6}",
            c.exact_prob,
            c.bound,
            if c.vacuous { " (vacuous)" } else { "" },
            c.sharper_bound
        ));
    }
    verdict(pass && non_vacuous >= 3, lines.join("; "))
}

/// Summed failure probability of the avoid event over all start vertices.
fn bad_set_aggregate() -> Verdict {
    let graphs = corpus::random_connected(50, 10..=64, 1300);
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for (i, (_, g)) in graphs.iter().enumerate() {
        let k = 1 + i % 10;
        let mut pool: Vec<usize> = (0..g.n()).collect();
        rng::shuffle(&mut rng::stream(2_000 + i as u64, 0), &mut pool);
        let a: VertexSet = pool.into_iter().take(1 + i % 8).collect();
        let total: f64 = exact_avoid_all(g, &a, k).unwrap().iter().map(|p| 1.0 - ratio_to_f64(p)).sum();
        let cap = 100.0 * k as f64 * a.len() as f64;
        worst = worst.max(total / cap);
        pass &= total <= cap + BOUND_SLACK;
    }
    verdict(pass, format!("{} graphs, largest sum/cap {worst:.4}", graphs.len()))
}

/// Verified witnesses on K60 and on seeded G(500, 0.12).
fn pipeline_witnesses() -> Verdict {
    let profile = desk();
    let k60 = Graph::complete(60);
    let k60_ok = match find_chordal_cycle(&k60, &profile, 10_000, 7) {
        Ok(s) => s.witness.as_ref().is_some_and(|w| verify_witness(&k60, w)),
        Err(_) => false,
    };
    let mut found = 0;
    let mut details = Vec::new();
    for seed in 0..PIPELINE_SEEDS {
        let g = gnp(500, 0.12, seed).unwrap();
        if let Ok(s) = find_chordal_cycle(&g, &profile, 100_000, seed) {
            if let Some(w) = s.witness.filter(|w| verify_witness(&g, w)) {
                found += 1;
                details.push(format!("{}:{}", w.cycle.len(), w.chords.len()));
            }
        }
    }
    verdict(
        k60_ok && found >= PIPELINE_PASSES,
        format!("K60 seed 7 {}; G(500,0.12) {found}/{PIPELINE_SEEDS} verified, cycle:chords {details:?}", if k60_ok {
            "verified"
        } else {
            "failed"
        }),
    )
}

/// Witness surplus never exceeds the exhaustive optimum on small graphs.
fn surplus_against_oracle() -> Verdict {
    let profile = desk();
    let mut graphs: Vec<(String, Graph)> =
        (9..=12).map(|n| (format!("K{n}"), Graph::complete(n))).collect();
    graphs.extend((0..8).map(|s| (format!("G(12,0.8) s{s}"), gnp(12, 0.8, s).unwrap())));
    let mut compared = 0;
    let mut pass = true;
    for (name, g) in &graphs {
        let best = max_chord_surplus(g).unwrap().map(|c| c.surplus);
        if let Ok(Some(w)) = find_chordal_cycle(g, &profile, 2_000, 3).map(|s| s.witness) {
            compared += 1;
            let ok = verify_witness(g, &w) && best.is_some_and(|b| w.surplus() <= b);
            if !ok {
                pass = false;
                eprintln!("  {name}: witness surplus {} vs oracle {best:?}", w.surplus());
            }
        }
    }
    let surplus = |g: Graph| max_chord_surplus(&g).unwrap().map(|c| c.surplus);
    let fixtures = (surplus(Graph::complete(5)), surplus(Graph::complete(6)), surplus(Graph::cycle(7)));
    verdict(
        pass && compared >= 4 && fixtures == (Some(0), Some(3), Some(-7)),
        format!("{compared} witnesses compared; K5/K6/C7 surplus {fixtures:?}"),
    )
}

/// CLI artifacts identical across runs, thread counts and golden files.
fn cli_determinism() -> Verdict {
    let (unstable, drifted) = common::check_cases();
    verdict(
        unstable.is_empty() && drifted.is_empty(),
        format!("{} cases, threads 1/1/8; unstable {unstable:?}, drifted {drifted:?}", common::cases().len()),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 11] = [
        ("spectral sandwich on small graphs", spectral_sandwich),
        ("exact mixing bound", exact_mixing_bound),
        ("certified mixing time", certified_mixing_time),
        ("extraction postconditions", extraction_postconditions),
        ("star-forest families", star_forest_families),
        ("estimator coverage", estimate_coverage),
        ("short-walk bounds", short_walk_bounds),
        ("bad-set aggregate", bad_set_aggregate),
        ("pipeline witnesses", pipeline_witnesses),
        ("witness surplus vs oracle", surplus_against_oracle),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        failed += usize::from(!v.pass);
        println!(
            "{} C{:02} {name} [{:.1}s]: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
