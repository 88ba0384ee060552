//! `riskcomm`: command-line front end for the risk-communication toolkit.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or input-format error.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use riskcomm_core::capacity::{
    blahut_arimoto, collision_channel, deterministic_capacity, CollisionGrid, DEFAULT_MAX_ITER,
    DEFAULT_TOLERANCE,
};
use riskcomm_core::design::{CandidateDoc, CandidateVariable, ConstraintMode, DEFAULT_EPSILON};
use riskcomm_core::pipeline::{ErrorMethod, PipelineConfig};
use riskcomm_core::prob::{joint_entropy, ChannelDoc, DistributionDoc};
use riskcomm_core::refinement::{heinrich_demo, heinrich_event_law, refinement_report, PartitionDoc, HEINRICH_EVENTS};
use riskcomm_core::{
    conditional_entropy, design_search, dpi_audit, entropy, mutual_information, ErrorReport,
    simulate, stationary_distribution, variable_quality, Channel, DesignProblem, FiniteDistribution,
    JointDistribution, Partition, RiskPipeline,
};

use report::{write_atomic, Envelope};

#[derive(Parser)]
#[command(name = "riskcomm", version, about = "Risk pipelines as communication systems. All information measures are in bits.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output file (written atomically).
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Embed the wall-clock time (unix seconds) in JSON reports. Off by default so reports are reproducible.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args)]
struct SeedArg {
    /// RNG seed (u64). Defaults to 0 with a warning.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy and mutual information of a distribution, joint, or pipeline. JSON report, bits.
    Measure(MeasureArgs),
    /// Monte Carlo trajectory of a pipeline. CSV with columns t,lambda,x,y,lambda_hat.
    Simulate(SimulateArgs),
    /// Channel capacity by Blahut-Arimoto. JSON report, bits.
    Capacity(CapacityArgs),
    /// Entropy and information lost by coarsening events. JSON report, bits.
    Refine(RefineArgs),
    /// Cost-constrained variable selection. JSON report; exits 1 if no design meets the target.
    Design(DesignArgs),
    /// Two-vehicle collision margin over a parameter grid. CSV with margin y in metres.
    Collision(CollisionArgs),
    /// Accident-pyramid refinement demo. JSON report, bits.
    Heinrich(HeinrichArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["dist", "joint", "pipeline"])))]
struct MeasureArgs {
    /// Distribution file {"alphabet": [..], "probs": [..]}.
    #[arg(long, value_name = "PATH")]
    dist: Option<PathBuf>,
    /// Joint file {"input": rows, "output": cols, "rows": mass}.
    #[arg(long, value_name = "PATH")]
    joint: Option<PathBuf>,
    /// Pipeline config; reports stationary law, data-processing audit and pricing errors.
    #[arg(long, value_name = "PATH")]
    pipeline: Option<PathBuf>,
    /// Also report error conditional on each estimate (pipeline only).
    #[arg(long)]
    by_estimate: bool,
    /// Estimate pricing errors from a simulated trajectory of this many steps instead of exactly.
    #[arg(long, value_name = "STEPS")]
    horizon: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    /// Pipeline config file.
    #[arg(long, value_name = "PATH")]
    pipeline: PathBuf,
    /// Number of time steps (>= 1).
    #[arg(long, value_name = "STEPS")]
    horizon: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CapacityArgs {
    /// Channel file {"input": [..], "output": [..], "rows": [[..]]}.
    #[arg(long, value_name = "PATH")]
    channel: PathBuf,
    /// Stop when the capacity bracket is narrower than this, bits.
    #[arg(long, value_name = "BITS", default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Iteration cap.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Input law to grade against the channel (distribution file).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Degeneracy threshold on I(X,Y) for --input, bits.
    #[arg(long, value_name = "BITS", default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RefineArgs {
    /// Fine joint over (events, estimates).
    #[arg(long, value_name = "PATH")]
    joint: PathBuf,
    /// Grouping of the events {"base": [..], "blocks": [[..]]}.
    #[arg(long, value_name = "PATH")]
    partition: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DesignArgs {
    /// Problem {"candidates": [{"name", "probs", "cost"}], "budget", "h_target" (bits), "mode": "strong"|"weak"}.
    #[arg(long, value_name = "PATH")]
    problem: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CollisionArgs {
    /// Grid {"v1","v2" (m/s), "a1","a2" (m/s^2), "h2","r2" (s)}; each a number or {"min","max","steps"}.
    #[arg(long, value_name = "PATH")]
    grid: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct HeinrichArgs {
    /// Use estimates independent of the event instead of the built-in conditional table.
    #[arg(long)]
    independent: bool,
    #[command(flatten)]
    common: Common,
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<riskcomm_core::Error> for Failure {
    fn from(e: riskcomm_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Measure(a) => measure(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Capacity(a) => capacity(a),
        Command::Refine(a) => refine(a),
        Command::Design(a) => design(a),
        Command::Collision(a) => collision(a),
        Command::Heinrich(a) => heinrich(a),
    }
}

/// Reads a JSON document; unreadable or malformed files are usage errors.
fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Reads a document shape, then validates it into the domain type.
fn read_as<D, T>(path: &Path) -> Result<T, Failure>
where
    D: DeserializeOwned,
    T: TryFrom<D, Error = riskcomm_core::Error>,
{
    let doc: D = read_doc(path)?;
    T::try_from(doc).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn read_pipeline(path: &Path) -> Result<RiskPipeline, Failure> {
    let config: PipelineConfig = read_doc(path)?;
    RiskPipeline::from_config(config).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn resolve_seed(seed: &SeedArg) -> u64 {
    seed.seed.unwrap_or_else(|| {
        eprintln!("warning: no --seed given, using 0");
        0
    })
}

fn measure(a: MeasureArgs) -> Outcome {
    let mut seed = 0;
    let result = if let Some(path) = &a.dist {
        let d: FiniteDistribution = read_as::<DistributionDoc, _>(path)?;
        json!({ "alphabet": d.alphabet(), "entropy": entropy(&d) })
    } else if let Some(path) = &a.joint {
        let j: JointDistribution = read_as::<ChannelDoc, _>(path)?;
        let (rows, cols) = j.marginals();
        json!({
            "rows": j.row_alphabet(),
            "cols": j.col_alphabet(),
            "h_rows": entropy(&rows),
            "h_cols": entropy(&cols),
            "h_joint": joint_entropy(&j),
            "h_cols_given_rows": conditional_entropy(&j),
            "mutual_information": mutual_information(&j),
        })
    } else {
        let path = a.pipeline.as_ref().expect("clap enforces one input");
        let p = read_pipeline(path)?;
        let method = match a.horizon {
            Some(horizon) => {
                seed = resolve_seed(&a.seed);
                ErrorMethod::Empirical { horizon, seed }
            }
            None => ErrorMethod::Exact,
        };
        let stationary = stationary_distribution(p.source())?;
        let audit = dpi_audit(&p)?;
        let joint = match method {
            ErrorMethod::Exact => p.stage_laws()?.lambda_lambdahat,
            ErrorMethod::Empirical { horizon, seed } => simulate(&p, horizon, seed)?.empirical_lambda_lambdahat(),
        };
        let errors = ErrorReport::from_joint(&joint, method, a.by_estimate);
        json!({ "stationary": stationary, "dpi": audit, "pricing_errors": errors })
    };
    Envelope::new("measure", seed, a.common.timestamp).write(&a.common.out, result)?;
    Ok(true)
}

fn simulate_cmd(a: SimulateArgs) -> Outcome {
    let p = read_pipeline(&a.pipeline)?;
    let seed = resolve_seed(&a.seed);
    let batch = simulate(&p, a.horizon, seed)?;
    let mut buf = Vec::new();
    batch.write_csv(&mut buf)?;
    write_atomic(&a.common.out, &buf)?;
    eprintln!("riskcomm {} simulate: seed {seed}, {} steps", riskcomm_core::VERSION, a.horizon);
    Ok(true)
}

fn capacity(a: CapacityArgs) -> Outcome {
    let ch: Channel = read_as::<ChannelDoc, _>(&a.channel)?;
    let result = blahut_arimoto(&ch, a.tol, a.max_iter)?;
    let mut body = serde_json::to_value(&result).map_err(|e| Failure::Domain(e.to_string()))?;
    if let Some(path) = &a.input {
        let law: FiniteDistribution = read_as::<DistributionDoc, _>(path)?;
        let q = variable_quality(&law, &ch, a.epsilon)?;
        body["input_quality"] = serde_json::to_value(q).map_err(|e| Failure::Domain(e.to_string()))?;
        body["epsilon"] = json!(a.epsilon);
    }
    body["tolerance"] = json!(a.tol);
    Envelope::new("capacity", 0, a.common.timestamp).write(&a.common.out, body)?;
    Ok(true)
}

fn refine(a: RefineArgs) -> Outcome {
    let j: JointDistribution = read_as::<ChannelDoc, _>(&a.joint)?;
    let grouping: Partition = read_as::<PartitionDoc, _>(&a.partition)?;
    let r = refinement_report(&j, &grouping)?;
    let blocks: Vec<Vec<&str>> = (0..grouping.k()).map(|b| grouping.block_labels(b)).collect();
    let body = json!({ "blocks": blocks, "report": r });
    Envelope::new("refine", 0, a.common.timestamp).write(&a.common.out, body)?;
    Ok(true)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignDoc {
    candidates: Vec<CandidateDoc>,
    budget: f64,
    h_target: f64,
    mode: ConstraintMode,
}

fn design(a: DesignArgs) -> Outcome {
    let doc: DesignDoc = read_doc(&a.problem)?;
    let candidates = doc
        .candidates
        .into_iter()
        .map(CandidateVariable::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    let problem = DesignProblem {
        candidates,
        budget: doc.budget,
        h_target: doc.h_target,
        mode: doc.mode,
    };
    let s = design_search(&problem)?;
    let feasible = s.feasible;
    Envelope::new("design", 0, a.common.timestamp).write(&a.common.out, json!({ "h_target": problem.h_target, "budget": problem.budget, "solution": s }))?;
    if !feasible {
        eprintln!("error: no affordable design exceeds h_target = {} bits (report written)", problem.h_target);
    }
    Ok(feasible)
}

fn collision(a: CollisionArgs) -> Outcome {
    let grid: CollisionGrid = read_doc(&a.grid)?;
    let sweep = collision_channel(&grid, &[])?;
    let mut buf = Vec::new();
    sweep.write_csv(&mut buf)?;
    write_atomic(&a.common.out, &buf)?;
    let uniform = FiniteDistribution::uniform(sweep.mapper.input().clone());
    let cap = deterministic_capacity(&sweep.mapper, &uniform)?;
    eprintln!(
        "riskcomm {} collision: {} of {} cells collide, H(Y) = {} bits",
        riskcomm_core::VERSION,
        sweep.collisions(),
        sweep.scenarios.len(),
        cap.h_y
    );
    Ok(true)
}

fn heinrich(a: HeinrichArgs) -> Outcome {
    let r = heinrich_demo(a.independent);
    let body = json!({
        "events": HEINRICH_EVENTS,
        "event_law": heinrich_event_law(),
        "independent": a.independent,
        "report": r,
    });
    Envelope::new("heinrich", 0, a.common.timestamp).write(&a.common.out, body)?;
    Ok(true)
}
