//! `cvrp3d` command-line harness.
//!
//! Exit status: 0 on success, 1 when a solution fails validation, 2 on usage
//! or input errors.

mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use cvrp3d::bench::{scaling, thread_cap, LinearFit, ScalingConfig};
use cvrp3d::env::EnvConfig;
use cvrp3d::instance::{augment, generate, parse_gendreau, to_instance_text, GenParams, Transform};
use cvrp3d::policy::{local_search, rollout, GreedyNearest, Policy, RandomPolicy};
use cvrp3d::{cost, validate, CostBreakdown, Instance, PlacementRules, Solution, ValidationReport};

#[derive(Parser)]
#[command(name = "cvrp3d", version, about = "Vehicle routing with 3D loading constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Generate(GenerateArgs),
    /// Convert an instance file to native JSON or text.
    Convert {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Roll out a policy and write solution, cost and validation report.
    Solve(SolveArgs),
    /// Check a solution against every loading and routing constraint.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        /// Solution JSON, either bare or as written by `solve`.
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = cvrp3d::DEFAULT_A_MIN)]
        amin: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Move or mirror the node coordinates of an instance.
    Augment(AugmentArgs),
    /// Time greedy rollouts against the number of clients.
    BenchScaling(BenchArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output file. `.txt` selects the text format; anything else is JSON.
    /// Prints JSON to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 15)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generator parameters as JSON; `--n` and `--seed` override its fields.
    #[arg(long)]
    params: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PolicyName {
    Greedy,
    Random,
    #[value(name = "greedy+ls")]
    #[serde(rename = "greedy+ls")]
    GreedyLs,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file, or the name of a bundled benchmark such as `E016-03m`.
    #[arg(long)]
    instance: String,
    #[arg(long, value_enum, default_value = "greedy")]
    policy: PolicyName,
    #[arg(long, default_value_t = cvrp3d::DEFAULT_PENALTY)]
    penalty: f64,
    #[arg(long, default_value_t = cvrp3d::DEFAULT_A_MIN)]
    amin: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Local search rounds for `greedy+ls`.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    /// Also write an SVG rendering to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AugmentArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, group = "transform")]
    flip_x: bool,
    #[arg(long, group = "transform")]
    flip_y: bool,
    #[arg(long, group = "transform")]
    flip_xy: bool,
    /// Translation as `dx,dy`.
    #[arg(long, group = "transform", value_parser = parse_pair, allow_hyphen_values = true)]
    translate: Option<(f64, f64)>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated client counts.
    #[arg(long, value_delimiter = ',', default_values_t = (1..=10).map(|k| k * 10).collect::<Vec<usize>>())]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = cvrp3d::DEFAULT_PENALTY)]
    penalty: f64,
    /// CSV output; the fit summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected dx,dy")?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    instance: &'a str,
    policy: PolicyName,
    seed: u64,
    penalty: f64,
    a_min: f64,
    solution: &'a Solution,
    cost: CostBreakdown,
    validation: &'a ValidationReport,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SolutionDoc {
    Wrapped { solution: Solution },
    Bare(Solution),
}

#[derive(Serialize)]
struct BenchSummary {
    sizes: Vec<usize>,
    repetitions: usize,
    threads: usize,
    fit: LinearFit,
    total_seconds: f64,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = read(path)?;
    let inst = if text.trim_start().starts_with('{') {
        Instance::from_json(&text)
    } else {
        parse_gendreau(&text)
    };
    inst.with_context(|| format!("parsing {}", path.display()))
}

/// A path, or a benchmark name looked up in `$CVRP3D_DATA_DIR` and `data/`.
fn resolve_instance(spec: &str) -> Result<Instance> {
    let direct = PathBuf::from(spec);
    if direct.exists() {
        return load_instance(&direct);
    }
    let dirs = std::env::var_os("CVRP3D_DATA_DIR")
        .map(PathBuf::from)
        .into_iter()
        .chain([PathBuf::from("data")]);
    for dir in dirs {
        let p = dir.join(format!("{spec}.txt"));
        if p.exists() {
            return load_instance(&p);
        }
    }
    bail!("no instance file or bundled benchmark named {spec:?}")
}

fn write(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn write_instance(inst: &Instance, out: &OutArgs) -> Result<()> {
    let text = match &out.out {
        Some(p) if p.extension().is_some_and(|e| e == "txt") => to_instance_text(inst),
        _ => inst.to_json()? + "\n",
    };
    write(out.out.as_deref(), &text)
}

fn solve(args: &SolveArgs) -> Result<bool> {
    let inst = Arc::new(resolve_instance(&args.instance)?);
    let env = EnvConfig::default().with_a_min(args.amin);
    let rules = env.rules;
    let greedy = GreedyNearest;
    let random = RandomPolicy { seed: args.seed };
    let policy: &dyn Policy = match args.policy {
        PolicyName::Random => &random,
        _ => &greedy,
    };
    let run = rollout(policy, inst.clone(), env, args.penalty)?;
    let (solution, breakdown) = match args.policy {
        PolicyName::GreedyLs => {
            let improved = local_search(&run.solution, &inst, args.budget, args.penalty, &rules)?;
            let missed = improved.missed(&inst).len();
            let c = cost(&improved, missed, &inst, args.penalty)?;
            (improved, c)
        }
        _ => (run.solution, run.cost),
    };
    let report = validate(&inst, &solution, &rules)?;
    let doc = SolveOutput {
        instance: inst.name(),
        policy: args.policy,
        seed: args.seed,
        penalty: args.penalty,
        a_min: args.amin,
        solution: &solution,
        cost: breakdown,
        validation: &report,
    };
    write(args.out.as_deref(), &json(&doc)?)?;
    if let Some(p) = &args.svg {
        std::fs::write(p, svg::render(&inst, &solution)).with_context(|| format!("writing {}", p.display()))?;
    }
    eprintln!(
        "{}: distance {:.2}, loaded {}, missed {}, cost {:.6}, validation {}",
        inst.name(),
        report.distance,
        report.loaded,
        report.missed,
        breakdown.total,
        if report.passed() { "passed" } else { "FAILED" }
    );
    if !report.passed() {
        eprintln!("failed constraints: {:?}", report.failed());
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate(a) => {
            let base = match &a.params {
                Some(p) => GenParams::from_json(&read(p)?)?,
                None => GenParams::default(),
            };
            let inst = generate(&base.with_n(a.n).with_seed(a.seed))?;
            write_instance(&inst, &a.out)?;
        }
        Command::Convert { instance, out } => write_instance(&load_instance(&instance)?, &out)?,
        Command::Solve(a) => return solve(&a),
        Command::Validate {
            instance,
            solution,
            amin,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let sol = match serde_json::from_str(&read(&solution)?)
                .with_context(|| format!("parsing {}", solution.display()))?
            {
                SolutionDoc::Wrapped { solution } | SolutionDoc::Bare(solution) => solution,
            };
            let rules = PlacementRules {
                a_min: amin,
                ..PlacementRules::default()
            };
            let report = validate(&inst, &sol, &rules)?;
            write(out.as_deref(), &(report.to_json()? + "\n"))?;
            if !report.passed() {
                eprintln!("failed constraints: {:?}", report.failed());
                return Ok(false);
            }
        }
        Command::Augment(a) => {
            let t = match (a.flip_x, a.flip_y, a.flip_xy, a.translate) {
                (true, ..) => Transform::FlipX,
                (_, true, ..) => Transform::FlipY,
                (_, _, true, _) => Transform::FlipXY,
                (.., Some((dx, dy))) => Transform::Translate { dx, dy },
                _ => bail!("choose one of --flip-x, --flip-y, --flip-xy, --translate"),
            };
            write_instance(&augment(&load_instance(&a.instance)?, t), &a.out)?;
        }
        Command::BenchScaling(a) => {
            let threads = thread_cap().unwrap_or(1);
            let cfg = ScalingConfig {
                sizes: a.sizes,
                repetitions: a.reps,
                seed: a.seed,
                threads,
                penalty: a.penalty,
                ..ScalingConfig::default()
            };
            let report = scaling(&cfg)?;
            if let Some(p) = &a.out {
                std::fs::write(p, report.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            } else {
                print!("{}", report.to_csv());
            }
            let summary = BenchSummary {
                sizes: cfg.sizes,
                repetitions: cfg.repetitions,
                threads,
                fit: report.fit,
                total_seconds: report.total_seconds,
            };
            let text = json(&summary)?;
            if a.out.is_some() {
                print!("{text}");
            } else {
                eprint!("{text}");
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
