mod bench;
mod plot;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use linecollect::instance_io::{
    generate_random, normalize_instance, parse_instance, parse_schedule, serialize_instance,
    serialize_schedule, NormalizedInstance,
};
use linecollect::oracles::{brute_force, ssp_dense, BRUTE_FORCE_MAX};
use linecollect::residual::TraceEvent;
use linecollect::validate::{
    certify, check_noncrossing, check_schedule, solution_schedule, total_weight,
};
use linecollect::{solve, Node, PointSet, Schedule, SolverConfig, Q};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "linecollect",
    version,
    about = "Collect timed requests on a line with k robots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Ssp,
    Brute,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the schedule.
    Solve {
        instance: PathBuf,
        /// Override the robot count from the instance header.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "none")]
        oracle: Oracle,
        /// Write the relax trace next to the output.
        #[arg(long)]
        trace: bool,
        /// Schedule file; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = SolverConfig::default().base_case_threshold)]
        threshold: usize,
    },
    /// Check a schedule file against an instance.
    Verify {
        instance: PathBuf,
        schedule: PathBuf,
    },
    /// Time the solver against the successive-shortest-path baseline.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1024")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seeds: Vec<u64>,
        #[arg(long, value_enum, default_value = "ssp")]
        oracle: Oracle,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Largest request time; defaults to n.
        #[arg(long)]
        horizon: Option<i64>,
        #[arg(long, default_value_t = 20)]
        wmax: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an instance and a schedule as SVG.
    Plot {
        instance: PathBuf,
        schedule: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const INPUT_ERROR: u8 = 1;
const INVARIANT_BREACH: u8 = 2;
const ORACLE_MISMATCH: u8 = 3;

fn fail(code: u8) -> impl FnOnce(anyhow::Error) -> Failure {
    move |error| Failure { code, error }
}

/// Reads an instance and returns its speed together with the unit-speed normalization.
fn read_instance(path: &Path) -> Result<(Q, NormalizedInstance), Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(fail(INPUT_ERROR))?;
    let inst = parse_instance(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(fail(INPUT_ERROR))?;
    Ok((inst.v, normalize_instance(&inst)))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(fail(INPUT_ERROR)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn point_label(points: &PointSet, id: u32) -> String {
    if id == points.s() {
        "s".into()
    } else if id == points.t() {
        "t".into()
    } else {
        format!("r{}", points.source(id))
    }
}

fn node_label(points: &PointSet, node: Node) -> String {
    match node {
        Node::S => "s".into(),
        Node::T => "t".into(),
        Node::Minus(p) => format!("r{}-", points.source(p)),
        Node::Plus(p) => format!("r{}+", points.source(p)),
    }
}

fn format_trace(points: &PointSet, traces: &[Vec<TraceEvent>]) -> String {
    let mut out = String::new();
    for (i, trace) in traces.iter().enumerate() {
        let _ = writeln!(out, "# round {}", i + 1);
        for ev in trace {
            match ev {
                TraceEvent::Edge(a, b) => {
                    let _ = writeln!(
                        out,
                        "relax {} {}",
                        node_label(points, *a),
                        node_label(points, *b)
                    );
                }
                TraceEvent::Group {
                    target,
                    alpha_hi,
                    beta_lo,
                    beta_hi,
                    excluded,
                } => {
                    let target = point_label(points, *target);
                    let ex: Vec<String> =
                        excluded.iter().map(|&e| point_label(points, e)).collect();
                    let _ = writeln!(
                        out,
                        "Relax {target} alpha<={alpha_hi} beta=[{beta_lo},{beta_hi}] excluded=[{}]",
                        ex.join(",")
                    );
                }
            }
        }
    }
    out
}

fn oracle_weight(
    inst: &NormalizedInstance,
    points: &PointSet,
    oracle: Oracle,
) -> Result<Option<i64>, Failure> {
    let pts = points;
    Ok(match oracle {
        Oracle::None => None,
        Oracle::Ssp => Some(ssp_dense(pts, inst.k).last().copied().unwrap_or(0)),
        Oracle::Brute => {
            if pts.n() > BRUTE_FORCE_MAX {
                return Err(fail(INPUT_ERROR)(anyhow!(
                    "brute force supports at most {BRUTE_FORCE_MAX} requests"
                )));
            }
            Some(brute_force(pts, inst.k).map_err(|e| fail(INPUT_ERROR)(e.into()))?)
        }
    })
}

fn cmd_solve(
    instance: &Path,
    k: Option<usize>,
    oracle: Oracle,
    trace: bool,
    out: Option<&Path>,
    threshold: usize,
) -> Result<(), Failure> {
    let (v, mut inst) = read_instance(instance)?;
    if let Some(k) = k {
        if k == 0 {
            return Err(fail(INPUT_ERROR)(anyhow!("--k must be at least 1")));
        }
        inst.k = k;
    }
    if threshold == 0 {
        return Err(fail(INPUT_ERROR)(anyhow!("--threshold must be at least 1")));
    }
    let cfg = SolverConfig {
        base_case_threshold: threshold,
        trace,
    };
    let start = Instant::now();
    let sol = solve(&inst, cfg).map_err(|e| fail(INVARIANT_BREACH)(e.into()))?;
    let elapsed = start.elapsed().as_millis();
    if let Err(errors) = certify(&inst, &sol) {
        return Err(fail(INVARIANT_BREACH)(anyhow!(
            "solver output failed validation: {}",
            errors.join("; ")
        )));
    }
    let (schedule, _) = solution_schedule(&inst, &sol);
    let text = serialize_schedule(&schedule, v, sol.weight);
    write_or_print(out, &text)?;
    if trace {
        let path = match out {
            Some(p) => p.with_extension("trace"),
            None => instance.with_extension("trace"),
        };
        std::fs::write(&path, format_trace(&sol.points, &sol.traces))
            .with_context(|| format!("writing {}", path.display()))
            .map_err(fail(INPUT_ERROR))?;
    }
    println!(
        "weight={} n={} k={} time_ms={elapsed}",
        sol.weight,
        inst.requests.len(),
        inst.k
    );
    if let Some(w) = oracle_weight(&inst, &sol.points, oracle)? {
        let name = if oracle == Oracle::Ssp {
            "ssp"
        } else {
            "brute"
        };
        println!("oracle={name} oracle_weight={w} match={}", w == sol.weight);
        if w != sol.weight {
            return Err(fail(ORACLE_MISMATCH)(anyhow!(
                "solver weight {} differs from oracle {w}",
                sol.weight
            )));
        }
    }
    Ok(())
}

/// Claims derived from the waypoints: each request goes to the first robot that stops at it.
fn waypoint_claims(inst: &NormalizedInstance, schedule: &Schedule) -> Vec<Vec<usize>> {
    let mut taken = vec![false; inst.requests.len()];
    schedule
        .robots
        .iter()
        .map(|plan| {
            let mut claims = Vec::new();
            for &(x, t) in plan {
                if let Some(i) = inst.requests.iter().position(|r| r.x == x && r.t == t) {
                    if !taken[i] {
                        taken[i] = true;
                        claims.push(i);
                    }
                }
            }
            claims
        })
        .collect()
}

fn cmd_verify(instance: &Path, schedule_path: &Path) -> Result<(), Failure> {
    let (v, inst) = read_instance(instance)?;
    let sched_text = std::fs::read_to_string(schedule_path)
        .with_context(|| format!("reading {}", schedule_path.display()))
        .map_err(fail(INPUT_ERROR))?;
    let (schedule, declared) =
        parse_schedule(&sched_text, v).map_err(|e| fail(INPUT_ERROR)(e.into()))?;
    let claims = waypoint_claims(&inst, &schedule);
    let mut report = check_schedule(&inst, &schedule, &claims);
    report.merge(check_noncrossing(&schedule));
    let weight = total_weight(&inst, &schedule);
    let mut problems: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    if schedule.robots.len() > inst.k {
        problems.push(format!("{} robots for k={}", schedule.robots.len(), inst.k));
    }
    if let Some(d) = declared {
        if d != weight {
            problems.push(format!(
                "declared weight {d} but schedule collects {weight}"
            ));
        }
    }
    for p in &problems {
        println!("violation: {p}");
    }
    println!(
        "valid={} weight={weight} robots={} violations={}",
        problems.is_empty(),
        schedule.robots.len(),
        problems.len()
    );
    if problems.is_empty() {
        Ok(())
    } else {
        Err(fail(INVARIANT_BREACH)(anyhow!("schedule is invalid")))
    }
}

fn cmd_gen(
    n: usize,
    seed: u64,
    k: usize,
    horizon: Option<i64>,
    wmax: i64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if n == 0 || k == 0 {
        return Err(fail(INPUT_ERROR)(anyhow!("--n and --k must be at least 1")));
    }
    let horizon = horizon.unwrap_or(n as i64).max(1);
    if (n as i64) > (horizon + 1) * (horizon + 1) {
        return Err(fail(INPUT_ERROR)(anyhow!(
            "horizon {horizon} is too small for {n} distinct requests"
        )));
    }
    write_or_print(
        out,
        &serialize_instance(&generate_random(seed, n, horizon, wmax, k)),
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            instance,
            k,
            oracle,
            trace,
            out,
            threshold,
        } => cmd_solve(&instance, k, oracle, trace, out.as_deref(), threshold),
        Command::Verify { instance, schedule } => cmd_verify(&instance, &schedule),
        Command::Bench {
            sizes,
            k,
            seeds,
            oracle,
        } => bench::run(&sizes, k, &seeds, oracle != Oracle::None),
        Command::Gen {
            n,
            seed,
            k,
            horizon,
            wmax,
            out,
        } => cmd_gen(n, seed, k, horizon, wmax, out.as_deref()),
        Command::Plot {
            instance,
            schedule,
            out,
        } => plot::run(&instance, &schedule, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
