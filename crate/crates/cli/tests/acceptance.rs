//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;

use riskcomm_core::capacity::{
    blahut_arimoto, collision_channel, collision_margin, deterministic_capacity, is_collision,
    CollisionGrid, CollisionScenario, DeterministicMapper, GridAxis,
};
use riskcomm_core::design::{exhaustive_search, CandidateVariable, ConstraintMode};
use riskcomm_core::pipeline::ErrorMethod;
use riskcomm_core::random::{random_channel, random_distribution, random_joint, random_partition, random_pipeline, seeded};
use riskcomm_core::refinement::refinement_report;
use riskcomm_core::{
    aggregate_classes, dpi_audit, entropy, pricing_errors, simulate, stationary_distribution,
    variable_quality, Alphabet, Channel, DesignProblem, FiniteDistribution, Partition, RiskPipeline,
};

/// 1 - h(p) for the binary symmetric channel, from a 50-digit evaluation.
const BSC_CAPACITY: [(f64, &str, f64); 3] = [
    (0.05, "bsc005.json", 0.7136030428840439),
    (0.10, "bsc01.json", 0.5310044064107188),
    (0.25, "bsc025.json", 0.1887218755408671),
];

fn alphabet(prefix: &str, n: usize) -> Alphabet {
    Alphabet::indexed(prefix, n).unwrap()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn within(start: Instant, limit: Duration, what: &str) -> String {
    let took = start.elapsed();
    assert!(took < limit, "{what} took {took:?}, limit {limit:?}");
    format!("{took:.2?}")
}

fn riskcomm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_riskcomm")).args(args).output().expect("spawn riskcomm")
}

fn bsc_capacity() -> String {
    let dir = tempfile::tempdir().unwrap();
    let mut worst: f64 = 0.0;
    for (p, file, expected) in BSC_CAPACITY {
        let start = Instant::now();
        let r = blahut_arimoto(&Channel::binary_symmetric(p).unwrap(), 1e-9, 100_000).unwrap();
        within(start, Duration::from_secs(1), "library solve");
        worst = worst.max((r.capacity - expected).abs());

        let out = dir.path().join("cap.json");
        let start = Instant::now();
        let run = riskcomm(&[
            "capacity", "--channel", fixtures().join(file).to_str().unwrap(), "--tol", "1e-9", "--out", out.to_str().unwrap(),
        ]);
        within(start, Duration::from_secs(1), "cli solve");
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
        let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
        assert_eq!(report["units"], "bits");
        let bits = report["result"]["capacity_bits"].as_f64().unwrap();
        worst = worst.max((bits - expected).abs());
    }
    assert!(worst <= 1e-6, "max deviation {worst:e}");
    format!("max |C - (1 - h(p))| = {worst:.1e}")
}

fn deterministic_equality() -> String {
    let start = Instant::now();
    let mut rng = seeded(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let xs = rng.random_range(1..=16);
        let ys = rng.random_range(1..=16);
        let table = (0..xs).map(|_| rng.random_range(0..ys)).collect();
        let g = DeterministicMapper::new(alphabet("x", xs), alphabet("y", ys), table).unwrap();
        let law = random_distribution(&mut rng, alphabet("x", xs));
        let r = deterministic_capacity(&g, &law).unwrap();
        worst = worst.max((r.i_xy - r.h_y).abs());
    }
    assert!(worst <= 1e-12, "max |I - H(Y)| = {worst:e}");
    let t = within(start, Duration::from_secs(10), "suite");
    format!("1000 maps, max |I - H(Y)| = {worst:.1e}, {t}")
}

fn dpi_audits() -> String {
    let start = Instant::now();
    let mut rng = seeded(3);
    let mut worst = f64::INFINITY;
    for k in 0..10_000 {
        let levels = rng.random_range(1..=5);
        let xs = rng.random_range(1..=8);
        let ys = rng.random_range(1..=8);
        let p = random_pipeline(&mut rng, levels, xs, ys, k % 2 == 0);
        let r = dpi_audit(&p).unwrap();
        worst = worst.min(r.slack_decoder).min(r.slack_mapper);
    }
    assert!(worst >= -1e-12, "min slack {worst:e}");
    let t = within(start, Duration::from_secs(60), "suite");
    format!("10000 pipelines, min slack {worst:.1e}, {t}")
}

fn refinement_monotonicity() -> String {
    let start = Instant::now();
    let mut rng = seeded(4);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=8);
        let c = rng.random_range(1..=6);
        let j = random_joint(&mut rng, alphabet("e", n), alphabet("c", c));
        let grouping = random_partition(&mut rng, j.row_alphabet(), n);
        let r = refinement_report(&j, &grouping).unwrap();
        worst = worst.min(r.delta_h).min(r.delta_i);
    }
    assert!(worst >= -1e-12, "min delta {worst:e}");
    let t = within(start, Duration::from_secs(60), "suite");
    format!("10000 cases, min delta {worst:.1e}, {t}")
}

fn shoe_degeneracy() -> String {
    let law = FiniteDistribution::new(alphabet("s", 2), vec![0.99999, 0.00001]).unwrap();
    let mut rng = seeded(5);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let ch = random_channel(&mut rng, alphabet("s", 2), alphabet("y", 2));
        let q = variable_quality(&law, &ch, 1e-3).unwrap();
        assert!(q.degenerate);
        worst = worst.max(q.i_xy);
    }
    assert!(worst <= 1.81e-4, "max I = {worst:e}");
    format!("1000 channels, max I = {worst:.3e} bits, all degenerate")
}

fn overall_error(p: &RiskPipeline) -> f64 {
    pricing_errors(p, ErrorMethod::Exact).unwrap().overall
}

fn decoded_entropy(p: &RiskPipeline) -> f64 {
    entropy(&p.stage_laws().unwrap().lambda_lambdahat.col_marginal())
}

fn aggregation_paradox() -> String {
    let mut rng = seeded(6);
    let mut both_strict = 0;
    for _ in 0..1000 {
        let xs = rng.random_range(2..=6);
        let ys = rng.random_range(2..=6);
        let p = random_pipeline(&mut rng, 4, xs, ys, true);
        let mut assignment = [0, 0, 1, 1];
        // random two-block merge
        for a in assignment.iter_mut().skip(1) {
            *a = rng.random_range(0..2);
        }
        if assignment.iter().all(|&a| a == 0) {
            assignment[3] = 1;
        }
        let grouping = Partition::from_assignment(p.levels().clone(), &assignment).unwrap();
        let merged = aggregate_classes(&p, &grouping).unwrap();
        let (h0, h1) = (decoded_entropy(&p), decoded_entropy(&merged));
        let (e0, e1) = (overall_error(&p), overall_error(&merged));
        assert!(h1 <= h0 + 1e-12, "H(decoded) rose {h0} -> {h1}");
        assert!(e1 <= e0 + 1e-12, "error rose {e0} -> {e1}");
        if h1 < h0 && e1 < e0 {
            both_strict += 1;
        }
    }
    assert!(both_strict > 0, "no strict decrease in both");
    format!("1000 merges, {both_strict} with strict decrease in both")
}

fn monte_carlo() -> String {
    let start = Instant::now();
    let mut rng = seeded(7);
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let levels = rng.random_range(2..=4);
        let p = random_pipeline(&mut rng, levels, 4, 4, true);
        let exact = p.stage_laws().unwrap().lambda_lambdahat;
        let empirical = simulate(&p, 1_000_000, seed).unwrap().empirical_lambda_lambdahat();
        worst = worst.max(exact.l1_distance(&empirical).unwrap());
    }
    assert!(worst <= 0.01, "max L1 {worst}");
    let t = within(start, Duration::from_secs(30), "suite");
    format!("10 runs of 10^6 steps, max L1 = {worst:.4}, {t}")
}

/// Recursive enumeration in candidate order; ties go to higher H, lower cost,
/// then the smaller sorted name list.
fn brute_force_design(p: &DesignProblem) -> (f64, f64, Vec<String>) {
    fn walk(p: &DesignProblem, i: usize, pick: &mut Vec<usize>, best: &mut (f64, f64, Vec<String>)) {
        if i == p.candidates.len() {
            let h: f64 = pick.iter().map(|&k| entropy(&p.candidates[k].marginal)).sum();
            let cost: f64 = pick.iter().map(|&k| p.candidates[k].cost).sum();
            if cost > p.budget {
                return;
            }
            let mut names: Vec<String> = pick.iter().map(|&k| p.candidates[k].name.clone()).collect();
            names.sort();
            let (bh, bc, bn) = (best.0, best.1, &best.2);
            if h > bh || (h == bh && (cost < bc || (cost == bc && names < *bn))) {
                *best = (h, cost, names);
            }
            return;
        }
        walk(p, i + 1, pick, best);
        pick.push(i);
        walk(p, i + 1, pick, best);
        pick.pop();
    }
    let mut best = (0.0, 0.0, Vec::new());
    walk(p, 0, &mut Vec::new(), &mut best);
    best
}

fn design_oracle() -> String {
    let mut rng = seeded(8);
    for _ in 0..50 {
        let n = rng.random_range(1..=12);
        let candidates = (0..n)
            .map(|i| {
                let k = rng.random_range(1..=4);
                let law = random_distribution(&mut rng, alphabet("v", k));
                CandidateVariable::new(format!("v{i}"), law, f64::from(rng.random_range(0..5u8))).unwrap()
            })
            .collect();
        let p = DesignProblem {
            candidates,
            budget: f64::from(rng.random_range(0..20u8)),
            h_target: rng.random_range(0.0..6.0),
            mode: ConstraintMode::Weak,
        };
        let s = exhaustive_search(&p).unwrap();
        let (h, cost, names) = brute_force_design(&p);
        let mut chosen = s.chosen.clone();
        chosen.sort();
        assert_eq!((s.h_x, s.total_cost, chosen), (h, cost, names));
    }
    "50 instances match 2^n enumeration exactly".into()
}

fn collision_fixtures() -> String {
    let cases = [
        ((20.0, 20.0, 6.0, 6.0, 1.5, 1.0), 10.0, false),
        ((20.0, 20.0, 6.0, 6.0, 1.2, 1.2), 0.0, true),
        ((0.0, 20.0, 6.0, 6.0, 1.0, 1.0), -100.0 / 3.0, true),
    ];
    for ((v1, v2, a1, a2, h2, r2), y, collides) in cases {
        let m = collision_margin(&CollisionScenario::new(v1, v2, a1, a2, h2, r2).unwrap());
        assert!((m - y).abs() <= 1e-9, "margin {m} vs {y}");
        assert_eq!(is_collision(m), collides);
    }

    let range = GridAxis::Range { min: 0.0, max: 3.0, steps: 10 };
    let grid = CollisionGrid {
        v1: GridAxis::Value(20.0),
        v2: GridAxis::Value(20.0),
        a1: GridAxis::Value(6.0),
        a2: GridAxis::Value(6.0),
        h2: range,
        r2: range,
    };
    let sweep = collision_channel(&grid, &[]).unwrap();
    let uniform = FiniteDistribution::uniform(sweep.mapper.input().clone());
    let h_y = deterministic_capacity(&sweep.mapper, &uniform).unwrap().h_y;
    // equal speeds and decelerations: collision iff h2 <= r2 on the shared grid
    let colliding = (0..10).flat_map(|i| (0..10).map(move |j| (i, j))).filter(|(i, j)| i <= j).count();
    let f = colliding as f64 / 100.0;
    let oracle = -f * f.log2() - (1.0 - f) * (1.0 - f).log2();
    assert_eq!(sweep.scenarios.len(), 100);
    assert!((h_y - oracle).abs() <= 1e-12, "H(Y) {h_y} vs {oracle}");
    format!("margins 10, 0, -33.333; grid {colliding}/100 colliding, H(Y) = {h_y:.6}")
}

/// Overall error of a decoder table, summed over every (level, x, y) path.
fn path_error(p: &RiskPipeline, pi: &[f64], table: &[usize]) -> f64 {
    let mut correct = 0.0;
    for (l, &w) in pi.iter().enumerate() {
        for x in 0..p.x_alphabet().len() {
            for (y, &d) in table.iter().enumerate() {
                if d == l {
                    correct += w * p.encoder().row(l)[x] * p.mapper().row(x)[y];
                }
            }
        }
    }
    1.0 - correct
}

fn map_optimality() -> String {
    let mut rng = seeded(10);
    let mut decoders = 0usize;
    for _ in 0..200 {
        let levels = rng.random_range(1..=4);
        let ys = rng.random_range(1..=4);
        let xs = rng.random_range(1..=5);
        let p = random_pipeline(&mut rng, levels, xs, ys, true);
        let pi = stationary_distribution(p.source()).unwrap().law;
        let map = overall_error(&p);
        for code in 0..levels.pow(ys as u32) {
            let table: Vec<usize> = (0..ys).map(|k| code / levels.pow(k as u32) % levels).collect();
            let e = path_error(&p, pi.probs(), &table);
            assert!(map <= e + 1e-12, "MAP {map} beaten by {table:?} at {e}");
            decoders += 1;
        }
    }
    format!("200 pipelines, {decoders} decoders enumerated")
}

fn cli_determinism() -> String {
    let f = fixtures();
    let fx = |name: &str| f.join(name).to_str().unwrap().to_owned();
    let runs: Vec<(&str, Vec<String>, &str, i32)> = vec![
        ("measure-dist", vec!["measure".into(), "--dist".into(), fx("dist.json")], "json", 0),
        ("measure-joint", vec!["measure".into(), "--joint".into(), fx("joint.json")], "json", 0),
        (
            "measure-pipeline",
            ["measure", "--pipeline", &fx("pipeline.json"), "--by-estimate", "--horizon", "5000", "--seed", "3"].map(String::from).to_vec(),
            "json",
            0,
        ),
        ("simulate", ["simulate", "--pipeline", &fx("pipeline.json"), "--horizon", "1000", "--seed", "42"].map(String::from).to_vec(), "csv", 0),
        ("capacity", ["capacity", "--channel", &fx("bsc01.json"), "--tol", "1e-9", "--input", &fx("shoe.json")].map(String::from).to_vec(), "json", 0),
        ("refine", ["refine", "--joint", &fx("joint.json"), "--partition", &fx("partition.json")].map(String::from).to_vec(), "json", 0),
        ("design", ["design", "--problem", &fx("design.json")].map(String::from).to_vec(), "json", 0),
        ("design-infeasible", ["design", "--problem", &fx("design_infeasible.json")].map(String::from).to_vec(), "json", 1),
        ("collision", ["collision", "--grid", &fx("grid.json")].map(String::from).to_vec(), "csv", 0),
        ("heinrich", vec!["heinrich".into()], "json", 0),
    ];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (name, args, ext, code) in &runs {
        let mut outputs = Vec::new();
        for dir in &dirs {
            let out = dir.path().join(format!("{name}.{ext}"));
            let mut argv: Vec<&str> = args.iter().map(String::as_str).collect();
            argv.extend(["--out", out.to_str().unwrap()]);
            let run = riskcomm(&argv);
            assert_eq!(run.status.code(), Some(*code), "{name}: {}", String::from_utf8_lossy(&run.stderr));
            outputs.push(std::fs::read(&out).unwrap());
        }
        assert!(!outputs[0].is_empty(), "{name} wrote nothing");
        assert_eq!(outputs[0], outputs[1], "{name} differs between runs");
    }

    let bad = dirs[0].path().join("bad.json");
    let run = riskcomm(&["measure", "--joint", &fx("malformed.json"), "--out", bad.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(!bad.exists());
    format!("{} subcommand runs byte-identical, malformed input exits 2", runs.len())
}

type Criterion = (&'static str, fn() -> String);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("BSC capacity", bsc_capacity),
        ("deterministic-mapper equality", deterministic_equality),
        ("DPI audits", dpi_audits),
        ("refinement monotonicity", refinement_monotonicity),
        ("shoe degeneracy", shoe_degeneracy),
        ("aggregation paradox", aggregation_paradox),
        ("exact vs Monte Carlo", monte_carlo),
        ("design-search oracle", design_oracle),
        ("collision fixtures", collision_fixtures),
        ("MAP optimality", map_optimality),
        ("CLI determinism", cli_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
