//! Per-agent architecture: perception and group messages narrow to a
//! single objective, which hierarchical planning widens back into a
//! staged plan and an executable action queue.

mod agent;
mod monitor;
mod plan;
mod todo;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::org_graph::AgentId;
use crate::world::{Inventory, Position};

pub use agent::{AgentRuntime, StepCtx, StepEvent, StepOutcome};
pub use monitor::{monitor_progress, monitor_stage};
pub use plan::{
    judge_progress, parse_judgment, parse_plan_response, parse_todo_list, plan_actions,
    plan_tasks, render_plan_text, PlanContext,
};
pub use todo::{extract_task_core, parse_todo, render_action, task_matches};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("empty task")]
    EmptyTask,
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("malformed plan: {0}")]
    MalformedPlan(String),
    #[error("todo list is not a JSON array of strings: {0}")]
    UnparseableTodoList(String),
    #[error("unknown verb in todo: {0}")]
    UnknownVerb(String),
    #[error("build todo missing position: {0}")]
    MissingPosition(String),
    #[error("malformed todo: {0}")]
    MalformedTodo(String),
    #[error("agent {agent} has no authority over {target}")]
    AuthorityViolation { agent: String, target: String },
}

/// Terminal or non-terminal status of a task. The paper's "ongoing" and
/// the prompt's "unknown" both map to `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskStatus {
    Success,
    Fail,
    Unknown,
}

impl std::fmt::Display for TaskStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TaskStatus::Success => "success",
            TaskStatus::Fail => "fail",
            TaskStatus::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressJudgment {
    pub rationale: String,
    pub status: TaskStatus,
}

/// Planner role: a root plans work for its group, a leaf plans only for
/// itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Root,
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub agent: AgentId,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub label: String,
    pub assignments: Vec<Assignment>,
}

impl Stage {
    /// Human-readable summary used as the protocol task string.
    pub fn summary(&self) -> String {
        self.assignments
            .iter()
            .map(|a| a.description.clone())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// The hourglass bottleneck and its decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct PlanState {
    pub objective: String,
    pub analysis: String,
    pub long_term_plan: Vec<Stage>,
    pub task_at_hand: Option<Stage>,
    pub informer: Option<AgentId>,
    /// Root only: what the root believes each employee is carrying.
    pub inventory_beliefs: BTreeMap<AgentId, Inventory>,
}

impl PlanState {
    /// Root plans must give every agent at most one assignment per stage
    /// and never assign work to the planner itself.
    pub fn well_formed_for_root(&self, root: &AgentId) -> bool {
        self.long_term_plan.iter().chain(self.task_at_hand.iter()).all(|stage| {
            let mut seen = std::collections::BTreeSet::new();
            stage
                .assignments
                .iter()
                .all(|a| a.agent != *root && seen.insert(a.agent.clone()))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verb {
    Mine,
    Craft,
    Smelt,
    Kill,
    Cook,
    Equip,
    Build,
    Give,
    MoveTo,
}

impl Verb {
    pub fn keyword(&self) -> &'static str {
        match self {
            Verb::Mine => "mine",
            Verb::Craft => "craft",
            Verb::Smelt => "smelt",
            Verb::Kill => "kill",
            Verb::Cook => "cook",
            Verb::Equip => "equip",
            Verb::Build => "build",
            Verb::Give => "give",
            Verb::MoveTo => "move to",
        }
    }
}

/// Payload of a direct-execution action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionBody {
    pub verb: Verb,
    pub quantity: Option<u32>,
    pub item: Option<String>,
    pub position: Option<Position>,
    /// Recipient, Give only.
    pub target: Option<AgentId>,
}

/// A parsed todo: either performed by the agent itself or delegated to
/// another agent via message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgentAction {
    Direct(ActionBody),
    Delegate { target: AgentId, inner: ActionBody },
}

/// Strict-FIFO queue of pending actions for the current task.
#[derive(Debug, Clone, Default)]
pub struct ActionQueue {
    pending: VecDeque<AgentAction>,
    pub attempts_for_current_task: u32,
}

impl ActionQueue {
    pub fn refill(&mut self, actions: impl IntoIterator<Item = AgentAction>) {
        self.pending = actions.into_iter().collect();
        self.attempts_for_current_task = 0;
    }

    pub fn pop(&mut self) -> Option<AgentAction> {
        self.pending.pop_front()
    }

    pub fn clear(&mut self) {
        self.pending.clear();
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pending.len()
    }
}
