//! Discrete-event execution of an organization against a world.
//!
//! Agents are stepped in deterministic lexicographic round-robin order;
//! every step is appended to an event log. Collaboration modes share the
//! same causal execution and differ in how task completion time (TC) is
//! accounted: Relay charges the sum of all work (one agent active at a
//! time), RoundBased synchronizes on task-completion barriers and charges
//! the per-round maximum, and NonObstructive charges ideal parallel time.
//! All metrics in the final report are recomputed purely from the event
//! log, so a replay from the persisted log reproduces the report exactly.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::comms::{protocol, MessagePool};
use crate::hourglass::{AgentRuntime, StepCtx, StepEvent};
use crate::org_graph::{AgentGraph, AgentId, StructureLabel};
use crate::planner_backends::Backend;
use crate::world::blueprint::ShelterBlueprint;
use crate::world::{FailureInjector, World};

/// Collaboration strategy; see the module docs for the accounting rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Relay,
    RoundBased,
    NonObstructive,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Mode::Relay => "relay",
            Mode::RoundBased => "roundbased",
            Mode::NonObstructive => "nonobstructive",
        };
        f.write_str(s)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().replace(['-', '_'], "").as_str() {
            "relay" => Ok(Mode::Relay),
            "roundbased" => Ok(Mode::RoundBased),
            "nonobstructive" => Ok(Mode::NonObstructive),
            other => Err(format!("unknown mode '{other}'")),
        }
    }
}

/// What a run is trying to achieve; implemented by benchmark tasks.
pub trait Goal {
    /// The instruction handed to the organization's entry agent.
    fn objective(&self) -> String;
    /// Progress value at which the goal counts as achieved.
    fn target(&self) -> u64;
    /// Current progress measured directly on the world.
    fn progress(&self, world: &World) -> u64;
    fn blueprint(&self) -> Option<&ShelterBlueprint> {
        None
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchedulerConfig {
    /// Hard cap on accumulated work ticks.
    pub max_ticks: u64,
    /// A run stalls when no goal progress happens for this many ticks.
    pub stall_ticks: u64,
    /// Failed task attempts tolerated before a stall counts as divergence.
    pub attempt_limit: u32,
    /// Probability that a primitive is replaced by an injected mishap.
    pub failure_rate: f64,
    /// Ticks charged for an injected mishap.
    pub failure_penalty: u64,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        Self {
            max_ticks: 500_000,
            stall_ticks: 2_400,
            attempt_limit: 5,
            failure_rate: 0.0,
            failure_penalty: 120,
        }
    }
}

/// One agent step in the event log. The log is the source of truth for
/// all metrics: `collect_metrics` rebuilds the report from it alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub seq: u64,
    pub agent: String,
    pub ticks: u64,
    pub idle: bool,
    /// Set when a task finished this step (true = success).
    pub completed: Option<bool>,
    /// Task-planning prompts issued during this step.
    pub prompts: u64,
    /// Goal progress after this step.
    pub progress: u64,
    pub events: Vec<StepEvent>,
}

/// Identity of a run; everything `collect_metrics` cannot derive from
/// the event log itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub objective: String,
    pub structure: StructureLabel,
    pub mode: Mode,
    pub seed: u64,
    pub agents: Vec<String>,
    pub goal_target: u64,
    pub stall_ticks: u64,
    pub attempt_limit: u32,
    pub world_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    #[serde(flatten)]
    pub meta: RunMeta,
    pub success: bool,
    /// True when the run diverged (stalled while failing); task
    /// completion time is undefined (null) in that case.
    pub diverged: bool,
    pub goal_progress: u64,
    pub total_ticks: u64,
    pub per_agent_ticks: BTreeMap<String, u64>,
    /// Per-agent durations of completed tasks, in completion order. The
    /// trailing entry per agent is residual work not closed by a task.
    pub task_durations: BTreeMap<String, Vec<u64>>,
    pub prompt_counts: BTreeMap<String, u64>,
    pub failed_attempts: u32,
    /// Task completion time under the run's mode; None encodes NaN.
    pub tc: Option<f64>,
    /// Mean prompt turns: task-planning prompts per agent.
    pub mpt: f64,
}

pub struct RunOutput {
    pub report: RunReport,
    pub log: Vec<StepRecord>,
    pub pool: MessagePool,
    pub world: World,
}

/// Task completion time for a duration matrix under a mode.
///
/// Relay serializes everything; RoundBased advances in barriers where
/// round `r` costs the maximum of each agent's `r`-th task duration;
/// NonObstructive is ideal parallelism (total work / agent count).
/// For any matrix: nonobstructive <= roundbased <= relay.
pub fn mode_tc(mode: Mode, durations: &BTreeMap<String, Vec<u64>>) -> f64 {
    let n = durations.len().max(1);
    let total: u64 = durations.values().flatten().sum();
    match mode {
        Mode::Relay => total as f64,
        Mode::NonObstructive => total as f64 / n as f64,
        Mode::RoundBased => {
            let rounds = durations.values().map(Vec::len).max().unwrap_or(0);
            (0..rounds)
                .map(|r| {
                    durations
                        .values()
                        .filter_map(|d| d.get(r).copied())
                        .max()
                        .unwrap_or(0)
                })
                .sum::<u64>() as f64
        }
    }
}

/// Rebuilds the full report from the event log and run identity alone.
pub fn collect_metrics(meta: &RunMeta, log: &[StepRecord]) -> RunReport {
    let mut per_agent_ticks: BTreeMap<String, u64> =
        meta.agents.iter().map(|a| (a.clone(), 0)).collect();
    let mut task_durations: BTreeMap<String, Vec<u64>> =
        meta.agents.iter().map(|a| (a.clone(), Vec::new())).collect();
    let mut open: BTreeMap<String, u64> = BTreeMap::new();
    let mut prompt_counts: BTreeMap<String, u64> =
        meta.agents.iter().map(|a| (a.clone(), 0)).collect();
    let mut failed_attempts = 0u32;
    let mut total_ticks = 0u64;
    let mut progress = 0u64;
    let mut last_progress_tick = 0u64;

    for step in log {
        total_ticks += step.ticks;
        *per_agent_ticks.entry(step.agent.clone()).or_insert(0) += step.ticks;
        *open.entry(step.agent.clone()).or_insert(0) += step.ticks;
        *prompt_counts.entry(step.agent.clone()).or_insert(0) += step.prompts;
        if let Some(ok) = step.completed {
            let d = open.remove(&step.agent).unwrap_or(0);
            task_durations.entry(step.agent.clone()).or_default().push(d);
            if !ok {
                failed_attempts += 1;
            }
        }
        if step.progress > progress {
            progress = step.progress;
            last_progress_tick = total_ticks;
        }
    }
    // Residual work not closed by a task completion still costs time.
    for (agent, d) in open {
        if d > 0 {
            task_durations.entry(agent).or_default().push(d);
        }
    }

    let success = progress >= meta.goal_target && meta.goal_target > 0;
    let stalled = total_ticks.saturating_sub(last_progress_tick) > meta.stall_ticks;
    let diverged = !success && stalled && failed_attempts > meta.attempt_limit;
    let tc = if success {
        Some(mode_tc(meta.mode, &task_durations))
    } else {
        None
    };
    let n = meta.agents.len().max(1) as f64;
    let mpt = prompt_counts.values().sum::<u64>() as f64 / n;

    RunReport {
        meta: meta.clone(),
        success,
        diverged,
        goal_progress: progress,
        total_ticks,
        per_agent_ticks,
        task_durations,
        prompt_counts,
        failed_attempts,
        tc,
        mpt,
    }
}

/// The agent first instructed with the objective: tree root, chain head,
/// lexicographically first graph member, or the solo agent itself.
pub fn entry_agent(graph: &AgentGraph) -> AgentId {
    match graph.structure() {
        StructureLabel::Tree | StructureLabel::Chain => graph
            .root()
            .cloned()
            .unwrap_or_else(|| graph.agents()[0].clone()),
        StructureLabel::Graph | StructureLabel::Solo => graph
            .agents()
            .iter()
            .min()
            .cloned()
            .expect("organization has agents"),
    }
}

/// Runs one organization against one goal. The world must already have a
/// body spawned for every agent in the graph.
pub fn run(
    graph: &AgentGraph,
    goal: &dyn Goal,
    mode: Mode,
    seed: u64,
    mut world: World,
    backend: &mut dyn Backend,
    config: &SchedulerConfig,
) -> RunOutput {
    let mut pool = MessagePool::new();
    let mut runtimes = AgentRuntime::for_graph(graph);
    runtimes.sort_by(|a, b| a.id.cmp(&b.id));

    let entry = entry_agent(graph);
    pool.post(
        0,
        AgentId::from("commissioner"),
        entry.clone(),
        protocol::instruction(entry.display_name(), &goal.objective()),
    )
    .expect("commissioner differs from agents");

    let mut injector = if config.failure_rate > 0.0 {
        Some(FailureInjector::new(config.failure_rate, config.failure_penalty, seed))
    } else {
        None
    };

    let mut log: Vec<StepRecord> = Vec::new();
    let mut busy_total = 0u64;
    let mut last_progress_tick = 0u64;
    let mut progress = goal.progress(&world);
    let mut failed_attempts = 0u32;
    let mut seq = 0u64;

    'run: loop {
        let mut any_active = false;
        for rt in runtimes.iter_mut() {
            let prompts_before = rt.prompt_count;
            let out = {
                let mut ctx = StepCtx {
                    world: &mut world,
                    pool: &mut pool,
                    graph,
                    backend,
                    blueprint: goal.blueprint(),
                    injector: injector.as_mut(),
                    now: busy_total,
                };
                rt.step(&mut ctx)
            };
            busy_total += out.ticks;
            if let Some(false) = out.completed_task {
                failed_attempts += 1;
            }
            let p = goal.progress(&world);
            if p > progress {
                progress = p;
                last_progress_tick = busy_total;
            }
            seq += 1;
            log.push(StepRecord {
                seq,
                agent: rt.id.to_string(),
                ticks: out.ticks,
                idle: out.idle,
                completed: out.completed_task,
                prompts: rt.prompt_count - prompts_before,
                progress: p,
                events: out.events,
            });
            if !out.idle || out.ticks > 0 {
                any_active = true;
            }
            if progress >= goal.target() {
                break 'run;
            }
            let stalled = busy_total.saturating_sub(last_progress_tick) > config.stall_ticks;
            if stalled && failed_attempts > config.attempt_limit {
                break 'run;
            }
            if busy_total > config.max_ticks {
                break 'run;
            }
        }
        if !any_active {
            // Quiescent: every agent idle, nothing left to happen.
            break;
        }
    }

    let meta = RunMeta {
        objective: goal.objective(),
        structure: graph.structure(),
        mode,
        seed,
        agents: graph
            .agents()
            .iter()
            .map(|a| a.to_string())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect(),
        goal_target: goal.target(),
        stall_ticks: config.stall_ticks,
        attempt_limit: config.attempt_limit,
        world_hash: world.state_hash(),
    };
    let report = collect_metrics(&meta, &log);
    RunOutput { report, log, pool, world }
}

/// Serializes an event log as JSONL, one step per line.
pub fn log_to_jsonl(log: &[StepRecord]) -> String {
    let mut out = String::new();
    for step in log {
        out.push_str(&serde_json::to_string(step).expect("step serializes"));
        out.push('\n');
    }
    out
}

/// Parses a JSONL event log back into step records.
pub fn log_from_jsonl(text: &str) -> Result<Vec<StepRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
