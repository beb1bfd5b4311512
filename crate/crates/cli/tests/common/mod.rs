#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> String {
    crate_dir().join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

/// One recorded invocation: subcommand arguments, plus whether it writes
/// an `--output` artifact.
pub struct Case {
    pub name: &'static str,
    pub args: Vec<String>,
    pub writes_output: bool,
}

fn case(name: &'static str, writes_output: bool, args: &[&str]) -> Case {
    let args = args
        .iter()
        .map(|a| a.strip_prefix('@').map(fixture).unwrap_or_else(|| a.to_string()))
        .collect();
    Case { name, args, writes_output }
}

/// Golden cases over K5, C7 and a seeded G(200, 0.2). `@name` is a
/// fixture path.
pub fn cases() -> Vec<Case> {
    vec![
        case("generate_complete5", true, &["generate", "--model", "complete", "--n", "5"]),
        case("generate_cycle7", true, &["generate", "--model", "cycle", "--n", "7"]),
        case("generate_gnp200", true, &["generate", "--model", "gnp", "--n", "200", "--p", "0.2", "--seed", "1"]),
        case("analyze_k5", false, &["analyze", "--input", "@k5.edges"]),
        case("analyze_c7", false, &["analyze", "--input", "@c7.edges"]),
        case("analyze_gnp200", false, &["analyze", "--input", "@gnp200.edges"]),
        case("oracle_surplus_k5", false, &["oracle", "--kind", "chord_surplus", "--input", "@k5.edges"]),
        case("oracle_surplus_c7", false, &["oracle", "--kind", "chord_surplus", "--input", "@c7.edges"]),
        case("oracle_self_avoid_k5", false, &["oracle", "--kind", "self_avoid", "--input", "@k5.edges", "--length", "3"]),
        case("oracle_walk_matrix_c7", false, &["oracle", "--kind", "walk_matrix", "--input", "@c7.edges", "--k", "3"]),
        case(
            "oracle_avoid_event_c7",
            false,
            &["oracle", "--kind", "avoid_event", "--input", "@c7.edges", "--vertices", "2,5", "--k", "3"],
        ),
        case(
            "estimate_self_avoid_k5",
            false,
            &["estimate", "--kind", "self_avoid", "--input", "@k5.edges", "--length", "3", "--trials", "5000", "--seed", "4"],
        ),
        case(
            "estimate_avoid_event_gnp200",
            false,
            &[
                "estimate", "--kind", "avoid_event", "--input", "@gnp200.edges", "--vertices", "1,2,3", "--k", "5",
                "--trials", "2000", "--seed", "2",
            ],
        ),
        case(
            "estimate_cross_edges_gnp200",
            false,
            &["estimate", "--kind", "cross_edges", "--input", "@gnp200.edges", "--length", "60", "--k", "3", "--trials", "500"],
        ),
        case("clean_gnp200", true, &["clean", "--input", "@gnp200.edges"]),
        case("find_cycle_gnp200", true, &["find-cycle", "--input", "@gnp200.edges", "--seed", "1"]),
        case("verify_gnp200", false, &["verify", "--input", "@gnp200.edges", "--witness", "@gnp200.witness.json"]),
    ]
}

/// Runs `case` with the given thread count and renders exit code, both
/// streams and the output artifact as one text blob.
pub fn render(case: &Case, threads: usize, scratch: &Path) -> String {
    let out_path = scratch.join(format!("{}-{threads}.out", case.name));
    let mut args: Vec<String> = vec!["chordwalk".into()];
    args.extend(case.args.iter().cloned());
    args.extend(["--threads".into(), threads.to_string()]);
    if case.writes_output {
        args.extend(["--output".into(), out_path.to_string_lossy().into_owned()]);
    }
    let outcome = chordwalk::run(args);
    let artifact = if case.writes_output { std::fs::read_to_string(&out_path).unwrap_or_default() } else { String::new() };
    format!(
        "exit {}\n--- stdout\n{}--- stderr\n{}--- output\n{}",
        outcome.code, outcome.stdout, outcome.stderr, artifact
    )
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{name}.txt"))
}

/// Renders every case twice on one thread and once on eight; returns the
/// names whose renderings differ and the names that differ from their
/// golden file. `UPDATE_GOLDEN=1` rewrites the golden files instead.
pub fn check_cases() -> (Vec<&'static str>, Vec<&'static str>) {
    let scratch = tempfile::tempdir().expect("scratch dir");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let (mut unstable, mut drifted) = (Vec::new(), Vec::new());
    for case in cases() {
        let first = render(&case, 1, scratch.path());
        let again = render(&case, 1, scratch.path());
        let wide = render(&case, 8, scratch.path());
        if first != again || first != wide {
            unstable.push(case.name);
        }
        let path = golden_path(case.name);
        if update {
            std::fs::write(&path, &first).expect("write golden");
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(first.as_str()) {
            drifted.push(case.name);
        }
    }
    (unstable, drifted)
}
