//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input/output failure, 2 usage error,
//! 3 negative result (solve did not reach a non-obtuse state, or a solution
//! failed verification).

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde::Serialize;

use nonobtuse::cdt::Instance;
use nonobtuse::io::{parse_instance, parse_solution, render_svg, stats, verify, write_solution, Solution};
use nonobtuse::merge::{merge_loop, MergeConfig};
use nonobtuse::search::{solve, RoundRecord, SearchConfig, Terminated};

const NEGATIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "nonobtuse", version, about = "Non-obtuse triangulations with few Steiner points")]
struct Cli {
    /// Worker threads for candidate evaluation and merge attempts.
    #[arg(long, global = true, env = "NONOBTUSE_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the solution plus a report sidecar.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check a solution exactly and print the report as JSON.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Merge a pool of solutions of one instance.
    Merge {
        #[arg(long)]
        instance: PathBuf,
        /// Directory of solution files.
        #[arg(long)]
        pool: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 20)]
        rounds: usize,
        #[arg(long, default_value_t = 4)]
        circles: usize,
        #[arg(long, default_value_t = 0.1)]
        radius_min: f64,
        #[arg(long, default_value_t = 0.5)]
        radius_max: f64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Draw an instance, optionally with a solution, as SVG.
    Render {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Angle histograms over solution files; writes JSON and a CSV beside it.
    Stats {
        /// Glob of solution files.
        #[arg(long)]
        glob: String,
        /// Glob of instance files, matched to solutions by uid.
        #[arg(long)]
        instances: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Lookahead depth.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=SearchConfig::MAX_DEPTH as u64))]
    depth: u64,
    /// Children sampled per lookahead level.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    sample: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget in seconds, checked between rounds.
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    max_rounds: usize,
    /// Reproducible output: the time budget is ignored.
    #[arg(long)]
    deterministic: bool,
}

impl SearchArgs {
    fn config(&self, workers: usize) -> Result<SearchConfig> {
        let time_budget = match self.time_budget {
            _ if self.deterministic => None,
            Some(t) if !(t.is_finite() && t > 0.0) => bail!("--time-budget must be positive"),
            t => t.map(Duration::from_secs_f64),
        };
        if self.deterministic && self.time_budget.is_some() {
            warn!("--deterministic ignores --time-budget");
        }
        Ok(SearchConfig {
            depth: self.depth as usize,
            sample_size: self.sample as usize,
            seed: self.seed,
            max_rounds: self.max_rounds,
            time_budget,
            parallel: workers > 1,
            ..SearchConfig::default()
        })
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&bytes).with_context(|| format!("parsing instance {}", path.display()))
}

fn read_solution(path: &Path) -> Result<Solution> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_solution(&bytes).with_context(|| format!("parsing solution {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// `sol.json` -> `sol.report.json`.
fn sidecar(out: &Path) -> PathBuf {
    let name = out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".json").unwrap_or(&name);
    out.with_file_name(format!("{stem}.report.json"))
}

#[derive(Serialize)]
struct SolveSidecar<'a> {
    instance_uid: &'a str,
    terminated: Terminated,
    steiner_points: usize,
    obtuse_triangles: usize,
    elapsed_seconds: f64,
    depth: usize,
    sample_size: usize,
    seed: u64,
    rounds: &'a [RoundRecord],
}

fn cmd_solve(instance: &Path, out: &Path, args: &SearchArgs, workers: usize) -> Result<u8> {
    let inst = read_instance(instance)?;
    let cfg = args.config(workers)?;
    let report = solve(&inst, &cfg).context("building the initial triangulation")?;
    let sol = Solution::from_cdt(&inst, &report.final_cdt);
    write(out, &write_solution(&sol)?)?;
    let side = SolveSidecar {
        instance_uid: &inst.uid,
        terminated: report.terminated,
        steiner_points: sol.steiner_count(),
        obtuse_triangles: report.final_cdt.obtuse_count(),
        elapsed_seconds: report.elapsed.as_secs_f64(),
        depth: cfg.depth,
        sample_size: cfg.sample_size,
        seed: cfg.seed,
        rounds: &report.rounds,
    };
    write(&sidecar(out), &serde_json::to_string_pretty(&side)?)?;
    info!(
        "{}: {:?} after {} rounds, {} Steiner points, {:.2}s",
        inst.uid,
        report.terminated,
        report.rounds.len(),
        sol.steiner_count(),
        report.elapsed.as_secs_f64()
    );
    Ok(if report.terminated == Terminated::NonObtuse { 0 } else { NEGATIVE })
}

fn cmd_verify(instance: &Path, solution: &Path) -> Result<u8> {
    let inst = read_instance(instance)?;
    let sol = read_solution(solution)?;
    let report = verify(&inst, &sol);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.valid { 0 } else { NEGATIVE })
}

fn pool_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| {
        let name = p.to_string_lossy();
        name.ends_with(".json") && !name.ends_with(".report.json")
    });
    files.sort();
    Ok(files)
}

#[allow(clippy::too_many_arguments)]
fn cmd_merge(
    instance: &Path,
    pool: &Path,
    out: &Path,
    rounds: usize,
    circles: usize,
    radius: (f64, f64),
    args: &SearchArgs,
    workers: usize,
) -> Result<u8> {
    let inst = read_instance(instance)?;
    let mut solutions = Vec::new();
    for f in pool_files(pool)? {
        let s = read_solution(&f)?;
        if s.instance_uid == inst.uid {
            solutions.push(s);
        }
    }
    if solutions.is_empty() {
        bail!("no solutions for `{}` in {}", inst.uid, pool.display());
    }
    let resolve = args.config(workers)?;
    let cfg = MergeConfig {
        rounds,
        circles_per_pair: circles,
        radius,
        seed: args.seed,
        parallel: workers > 1,
        resolve: SearchConfig { max_rounds: resolve.max_rounds.min(500), ..resolve },
    };
    let report = merge_loop(&inst, &solutions, &cfg)?;
    write(out, &write_solution(&report.best)?)?;
    info!(
        "merged {} solutions: best {} Steiner points ({} improvements)",
        solutions.len(),
        report.best.steiner_count(),
        report.improvements
    );
    Ok(0)
}

fn cmd_render(instance: &Path, solution: Option<&Path>, out: &Path) -> Result<u8> {
    let inst = read_instance(instance)?;
    let sol = solution.map(read_solution).transpose()?;
    write(out, &render_svg(&inst, sol.as_ref()))?;
    Ok(0)
}

fn expand(pattern: &str) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in glob::glob(pattern).with_context(|| format!("bad glob {pattern:?}"))? {
        files.push(entry?);
    }
    files.sort();
    Ok(files)
}

fn cmd_stats(solutions: &str, instances: &str, out: &Path) -> Result<u8> {
    let mut by_uid: HashMap<String, Instance> = HashMap::new();
    for f in expand(instances)? {
        let inst = read_instance(&f)?;
        by_uid.insert(inst.uid.clone(), inst);
    }
    let mut entries = Vec::new();
    for f in expand(solutions)? {
        if f.to_string_lossy().ends_with(".report.json") {
            continue;
        }
        let sol = read_solution(&f)?;
        let Some(inst) = by_uid.get(&sol.instance_uid) else {
            bail!("no instance with uid `{}` for {}", sol.instance_uid, f.display());
        };
        entries.push((inst.clone(), sol));
    }
    let report = stats(&entries)?;
    write(out, &serde_json::to_string_pretty(&report)?)?;
    write(&out.with_extension("csv"), &report.to_csv())?;
    info!("{} triangles over {} solutions", report.triangles, entries.len());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    let workers =
        cli.workers.map(|w| w as usize).unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().context("starting worker pool")?;
    pool.install(|| match &cli.command {
        Command::Solve { instance, out, search } => cmd_solve(instance, out, search, workers),
        Command::Verify { instance, solution } => cmd_verify(instance, solution),
        Command::Merge { instance, pool, out, rounds, circles, radius_min, radius_max, search } => {
            cmd_merge(instance, pool, out, *rounds, *circles, (*radius_min, *radius_max), search, workers)
        }
        Command::Render { instance, solution, out } => cmd_render(instance, solution.as_deref(), out),
        Command::Stats { glob, instances, out } => cmd_stats(glob, instances, out),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse_from(std::env::args_os().collect::<Vec<OsString>>()) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
