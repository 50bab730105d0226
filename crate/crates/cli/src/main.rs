//! `sagents` — run and analyze self-organizing agent-group benchmarks.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use sagents_core::harness::{
    bench_world_config, iron_scarce_config, run_cell_with, run_experiment, summary_table,
    ExperimentMatrix, OrgSpec, TaskSpec,
};
use sagents_core::planner_backends::{
    Backend, CassetteBackend, RemoteBackend, RemoteConfig, ScriptedOracle,
};
use sagents_core::scheduler::{
    collect_metrics, log_from_jsonl, log_to_jsonl, Mode, RunMeta, RunOutput, RunReport,
    SchedulerConfig,
};
use sagents_core::{AgentGraph, WorldConfig};

#[derive(Parser)]
#[command(name = "sagents", version, about = "Self-organizing agent-group benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one task with one organization and print the report.
    Run(RunArgs),
    /// Sweep organizations x modes x seeds and write per-run artifacts.
    Experiment(ExperimentArgs),
    /// Validate an organization: command cycles and in-degree limits.
    ValidateOrg(ValidateArgs),
    /// Recompute a report from a persisted event log and check it
    /// matches the original byte for byte.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct WorldArgs {
    /// World preset: `bench` or `iron-scarce`.
    #[arg(long, default_value = "bench")]
    preset: String,
    /// TOML world configuration file; overrides --preset.
    #[arg(long)]
    world_config: Option<PathBuf>,
}

impl WorldArgs {
    fn load(&self) -> Result<WorldConfig> {
        if let Some(path) = &self.world_config {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            return WorldConfig::from_toml(&text).map_err(|e| anyhow!("{e}"));
        }
        match self.preset.as_str() {
            "bench" => Ok(bench_world_config()),
            "iron-scarce" => Ok(iron_scarce_config()),
            other => bail!("unknown preset '{other}' (expected bench or iron-scarce)"),
        }
    }
}

#[derive(Args)]
struct BackendArgs {
    /// Planner backend: `oracle` or `remote`.
    #[arg(long, default_value = "oracle")]
    backend: String,
    /// Chat-completions endpoint for the remote backend.
    #[arg(long, default_value = "https://api.openai.com/v1/chat/completions")]
    endpoint: String,
    /// Model name for the remote backend.
    #[arg(long, default_value = "gpt-4")]
    model: String,
    /// Environment variable holding the remote bearer token. The token
    /// itself is never accepted on the command line.
    #[arg(long, default_value = "SAGENTS_API_TOKEN")]
    token_env: String,
    /// Cassette file for record/replay of backend responses.
    #[arg(long)]
    cassette: Option<PathBuf>,
    /// Cassette mode: `record` or `replay`.
    #[arg(long, default_value = "replay")]
    cassette_mode: String,
}

impl BackendArgs {
    fn build(&self, world_config: &WorldConfig) -> Result<Box<dyn Backend>> {
        let inner: Box<dyn Backend> = match self.backend.as_str() {
            "oracle" => Box::new(ScriptedOracle::new(world_config.clone())),
            "remote" => Box::new(
                RemoteBackend::new(RemoteConfig {
                    endpoint: self.endpoint.clone(),
                    model: self.model.clone(),
                    token_env: self.token_env.clone(),
                    ..RemoteConfig::default()
                })
                .map_err(|e| anyhow!("{e}"))?,
            ),
            other => bail!("unknown backend '{other}' (expected oracle or remote)"),
        };
        match (&self.cassette, self.cassette_mode.as_str()) {
            (None, _) => Ok(inner),
            (Some(path), "record") => Ok(Box::new(
                CassetteBackend::record(inner, path.clone()).map_err(|e| anyhow!("{e}"))?,
            )),
            (Some(path), "replay") => Ok(Box::new(
                CassetteBackend::replay(path.clone()).map_err(|e| anyhow!("{e}"))?,
            )),
            (Some(_), other) => bail!("unknown cassette mode '{other}'"),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Task spec: `collection:<item>:<count>` or `shelter[:WxD:H]`.
    #[arg(long)]
    task: String,
    /// Organization: `solo`, `toa:N`, `goa:N`, or `coa:N`.
    #[arg(long)]
    org: String,
    /// Collaboration mode: relay, roundbased, or nonobstructive.
    #[arg(long, default_value = "nonobstructive")]
    mode: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Probability of an injected action mishap.
    #[arg(long, default_value_t = 0.0)]
    failure_rate: f64,
    /// Directory to write report.json, events.jsonl, pool.jsonl, and
    /// world_final.json into.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    world: WorldArgs,
    #[command(flatten)]
    backend: BackendArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Task spec, as for `run`.
    #[arg(long)]
    task: String,
    /// Comma-separated organizations, e.g. `solo,toa:4,goa:3`.
    #[arg(long)]
    orgs: String,
    /// Comma-separated modes.
    #[arg(long, default_value = "relay,roundbased,nonobstructive")]
    modes: String,
    /// Comma-separated seeds.
    #[arg(long, default_value = "1,2,3")]
    seeds: String,
    #[arg(long, default_value_t = 0.0)]
    failure_rate: f64,
    /// Output directory for artifacts and summary.json.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    world: WorldArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Organization preset, as for `run`.
    #[arg(long)]
    org: Option<String>,
    /// JSON file describing the organization graph.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Maximum command in-degree allowed per agent.
    #[arg(long, default_value_t = 1)]
    max_in_degree: usize,
}

#[derive(Args)]
struct ReplayArgs {
    /// report.json produced by `run` or `experiment`.
    #[arg(long)]
    report: PathBuf,
    /// events.jsonl produced alongside the report.
    #[arg(long)]
    events: PathBuf,
}

fn write_artifacts(dir: &Path, out: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(&out.report)?)?;
    fs::write(dir.join("events.jsonl"), log_to_jsonl(&out.log))?;
    fs::write(dir.join("pool.jsonl"), out.pool.to_jsonl())?;
    fs::write(dir.join("world_final.json"), out.world.snapshot_json())?;
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let task = TaskSpec::parse(&args.task).map_err(|e| anyhow!(e))?;
    let org: OrgSpec = args.org.parse().map_err(|e: String| anyhow!(e))?;
    let mode: Mode = args.mode.parse().map_err(|e: String| anyhow!(e))?;
    let world_config = args.world.load()?;
    let sched = SchedulerConfig { failure_rate: args.failure_rate, ..SchedulerConfig::default() };
    let mut backend = args.backend.build(&world_config)?;
    let out = run_cell_with(&task, &org, mode, args.seed, &world_config, &sched, backend.as_mut())
        .map_err(|e| anyhow!(e))?;
    if let Some(dir) = &args.out {
        write_artifacts(dir, &out)?;
        eprintln!("artifacts written to {}", dir.display());
    }
    println!("{}", serde_json::to_string_pretty(&out.report)?);
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let matrix = ExperimentMatrix {
        task: TaskSpec::parse(&args.task).map_err(|e| anyhow!(e))?,
        orgs: args.orgs.split(',').map(|s| s.trim().to_string()).collect(),
        modes: args
            .modes
            .split(',')
            .map(|s| s.trim().parse::<Mode>().map_err(|e| anyhow!(e)))
            .collect::<Result<Vec<_>>>()?,
        seeds: args
            .seeds
            .split(',')
            .map(|s| s.trim().parse::<u64>().context("bad seed"))
            .collect::<Result<Vec<_>>>()?,
    };
    let world_config = args.world.load()?;
    let sched = SchedulerConfig { failure_rate: args.failure_rate, ..SchedulerConfig::default() };
    let outcome =
        run_experiment(&matrix, &world_config, &sched, &args.out).map_err(|e| anyhow!(e))?;
    println!("config hash: {}", outcome.config_hash);
    print!("{}", summary_table(&outcome));
    println!("artifacts under {}", args.out.display());
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<()> {
    let graph: AgentGraph = match (&args.org, &args.file) {
        (Some(org), None) => org
            .parse::<OrgSpec>()
            .map_err(|e: String| anyhow!(e))?
            .build()
            .map_err(|e| anyhow!("{e}"))?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).context("parsing organization graph")?
        }
        _ => bail!("pass exactly one of --org or --file"),
    };
    let report = graph.validate_with(args.max_in_degree);
    println!("{}", serde_json::to_string_pretty(&report)?);
    if report.is_valid {
        Ok(())
    } else {
        bail!("organization is invalid")
    }
}

fn cmd_replay(args: ReplayArgs) -> Result<()> {
    let report_text = fs::read_to_string(&args.report)
        .with_context(|| format!("reading {}", args.report.display()))?;
    let original: RunReport = serde_json::from_str(&report_text).context("parsing report")?;
    let meta: RunMeta = serde_json::from_str(&report_text).context("parsing run identity")?;
    let events = fs::read_to_string(&args.events)
        .with_context(|| format!("reading {}", args.events.display()))?;
    let log = log_from_jsonl(&events).context("parsing event log")?;
    let recomputed = collect_metrics(&meta, &log);
    if recomputed == original {
        println!("replay matches: report is fully derived from the event log");
        Ok(())
    } else {
        println!("original:   {}", serde_json::to_string(&original)?);
        println!("recomputed: {}", serde_json::to_string(&recomputed)?);
        bail!("replay mismatch")
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::ValidateOrg(args) => cmd_validate(args),
        Command::Replay(args) => cmd_replay(args),
    }
}
