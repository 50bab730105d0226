//! Agent runtime: ingests messages, executes queued actions one at a
//! time, and runs the monitor/planner cycle when the queue is empty.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::comms::{protocol, render_grouped, ConversationCursor, MessagePool, MessageRecord};
use crate::org_graph::{AgentGraph, AgentId, StructureLabel};
use crate::planner_backends::Backend;
use crate::world::blueprint::{ShelterBlueprint, ShelterPart};
use crate::world::config::normalize_item;
use crate::world::{
    execute_primitive, perceive, FailureInjector, Inventory, PerceptionSnapshot, Primitive, World,
};

use super::monitor::monitor_stage;
use super::plan::{judge_progress, plan_actions, plan_tasks, PlanContext};
use super::todo::render_action;
use super::{
    ActionBody, ActionQueue, AgentAction, PlanError, PlanState, ProgressJudgment, Role, Stage,
    TaskStatus, Verb,
};

/// Consecutive failures a worker tolerates before escalating to its
/// superior instead of retrying. Agents without a superior in the
/// organization keep retrying.
pub const ESCALATION_LIMIT: u32 = 5;

/// Everything an agent step may touch.
pub struct StepCtx<'a> {
    pub world: &'a mut World,
    pub pool: &'a mut MessagePool,
    pub graph: &'a AgentGraph,
    pub backend: &'a mut dyn Backend,
    pub blueprint: Option<&'a ShelterBlueprint>,
    pub injector: Option<&'a mut FailureInjector>,
    pub now: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepEvent {
    Planned { layer: String, objective: String, stage: Option<String> },
    Monitored { task: String, status: TaskStatus, rationale: String },
    Acted { todo: String, ticks: u64, ok: bool, error: Option<String> },
    Messaged { to: String, text: String },
    AuthorityViolation { target: String },
    Escalated { task: String },
}

#[derive(Debug, Default)]
pub struct StepOutcome {
    pub ticks: u64,
    pub events: Vec<StepEvent>,
    /// Set when a task finished this step (true = success).
    pub completed_task: Option<bool>,
    /// True when the step had nothing to do.
    pub idle: bool,
}

/// Raised before any pool write when a delegation targets an agent the
/// speaker has no command edge to.
pub fn authority_check(
    graph: &AgentGraph,
    agent: &AgentId,
    target: &AgentId,
) -> Result<(), PlanError> {
    let allowed = graph
        .command_targets(agent)
        .map(|t| t.contains(target))
        .unwrap_or(false);
    if allowed {
        Ok(())
    } else {
        Err(PlanError::AuthorityViolation {
            agent: agent.to_string(),
            target: target.to_string(),
        })
    }
}

/// One planning layer (group-level or own work) and its stage state.
#[derive(Debug, Default)]
struct TaskLayer {
    plan: Option<PlanState>,
    /// (label, summary) of the stage currently being executed/awaited.
    current: Option<(String, String)>,
    last_judgment: Option<ProgressJudgment>,
    done: bool,
}

impl TaskLayer {
    fn reset(&mut self) {
        *self = TaskLayer::default();
    }

    fn current_stage(&self) -> Option<&Stage> {
        self.plan.as_ref().and_then(|p| p.task_at_hand.as_ref())
    }
}

pub struct AgentRuntime {
    pub id: AgentId,
    pub role: Role,
    pub include_self: bool,
    cursor: ConversationCursor,
    queue: ActionQueue,
    group: TaskLayer,
    leaf: TaskLayer,
    /// Latest instruction received: (sender, todo text).
    pub instruction: Option<(AgentId, String)>,
    /// Own share extracted from a group stage, pending leaf planning.
    self_task: Option<String>,
    self_task_active: bool,
    pub beliefs: BTreeMap<AgentId, Inventory>,
    pub prompt_count: u64,
    pub monitor_count: u64,
    pub consecutive_fails: u32,
    escalated: bool,
    started_current: bool,
    /// New records involving this agent arrived since the last cycle.
    dirty: bool,
}

impl AgentRuntime {
    pub fn new(id: AgentId, role: Role, include_self: bool) -> Self {
        Self {
            cursor: ConversationCursor::new(id.clone()),
            id,
            role,
            include_self,
            queue: ActionQueue::default(),
            group: TaskLayer::default(),
            leaf: TaskLayer::default(),
            instruction: None,
            self_task: None,
            self_task_active: false,
            beliefs: BTreeMap::new(),
            prompt_count: 0,
            monitor_count: 0,
            consecutive_fails: 0,
            escalated: false,
            started_current: false,
            dirty: false,
        }
    }

    /// Builds the runtime set for an organization: tree roots and graph
    /// coordinators plan for the group, chain members relay, everyone
    /// else plans only for themselves.
    pub fn for_graph(graph: &AgentGraph) -> Vec<AgentRuntime> {
        graph
            .agents()
            .iter()
            .map(|a| {
                let (role, include_self) = match graph.structure() {
                    StructureLabel::Tree => {
                        if graph.root() == Some(a) {
                            (Role::Root, false)
                        } else {
                            (Role::Leaf, false)
                        }
                    }
                    StructureLabel::Graph => {
                        let first = graph.agents().iter().min();
                        if first == Some(a) && graph.agents().len() > 1 {
                            (Role::Root, true)
                        } else {
                            (Role::Leaf, false)
                        }
                    }
                    StructureLabel::Chain => {
                        if graph.successor(a).is_some() {
                            (Role::Root, false)
                        } else {
                            (Role::Leaf, false)
                        }
                    }
                    StructureLabel::Solo => (Role::Leaf, false),
                };
                AgentRuntime::new(a.clone(), role, include_self)
            })
            .collect()
    }

    pub fn informer(&self) -> Option<&AgentId> {
        self.instruction.as_ref().map(|(who, _)| who)
    }

    pub fn is_finished(&self) -> bool {
        if self.escalated {
            return true;
        }
        if !self.queue.is_empty() || self.self_task.is_some() {
            return false;
        }
        match self.role {
            Role::Root => self.group.done,
            Role::Leaf => self.leaf.done,
        }
    }

    /// One scheduling step: ingest, then either execute one queued
    /// action or run a monitor/planning cycle.
    pub fn step(&mut self, ctx: &mut StepCtx<'_>) -> StepOutcome {
        let mut out = StepOutcome::default();
        self.ingest(ctx, &mut out);
        if let Some(action) = self.queue.pop() {
            self.execute(action, ctx, &mut out);
            return out;
        }
        // A drained queue with an own share pending switches this agent
        // into leaf mode for its share.
        if self.self_task.is_some() && !self.self_task_active {
            self.self_task_active = true;
            self.leaf.reset();
            self.started_current = false;
        }
        self.plan_cycle(ctx, &mut out);
        out
    }

    // -- ingestion -----------------------------------------------------

    fn ingest(&mut self, ctx: &mut StepCtx<'_>, out: &mut StepOutcome) {
        let groups = ctx.pool.conversation_since(&mut self.cursor);
        let mut new_instruction: Option<(AgentId, String)> = None;
        for (_, records) in &groups {
            for record in records {
                if record.respondent != self.id {
                    continue;
                }
                self.dirty = true;
                let msg = record.message.as_str();
                if let Some(inv) = protocol::parse_inventory_report(msg) {
                    self.beliefs.insert(record.speaker.clone(), inv);
                } else if msg == protocol::ACK
                    || protocol::task_of_start(msg).is_some()
                    || protocol::task_of_success(msg).is_some()
                    || protocol::task_of_failure(msg).is_some()
                {
                    // Status traffic; the monitor reads it from the pool.
                } else {
                    let todo = protocol::instruction_of(msg).unwrap_or(msg).to_string();
                    new_instruction = Some((record.speaker.clone(), todo));
                }
            }
        }
        if let Some((sender, todo)) = new_instruction {
            let changed = self.escalated
                || self
                    .instruction
                    .as_ref()
                    .map(|(s, t)| *s != sender || *t != todo)
                    .unwrap_or(true);
            self.instruction = Some((sender.clone(), todo));
            if changed {
                // A fresh instruction restarts this agent's own work.
                self.queue.clear();
                self.leaf.reset();
                if self.role == Role::Root {
                    self.group.reset();
                }
                self.self_task = None;
                self.self_task_active = false;
                self.consecutive_fails = 0;
                self.escalated = false;
                self.started_current = false;
                self.post(ctx, out, &sender, protocol::ACK.to_string());
            }
        }
    }

    fn post(&self, ctx: &mut StepCtx<'_>, out: &mut StepOutcome, to: &AgentId, text: String) {
        if *to == self.id {
            return;
        }
        let cost = ctx.world.config.tick_costs.message;
        let time = ctx.now + out.ticks;
        if ctx.pool.post(time, self.id.clone(), to.clone(), text.clone()).is_ok() {
            out.ticks += cost;
            ctx.world.advance_clock(cost);
            out.events.push(StepEvent::Messaged { to: to.to_string(), text });
        }
    }

    // -- execution -----------------------------------------------------

    fn execute(&mut self, action: AgentAction, ctx: &mut StepCtx<'_>, out: &mut StepOutcome) {
        match action {
            AgentAction::Delegate { target, inner } => {
                if authority_check(ctx.graph, &self.id, &target).is_err() {
                    out.events
                        .push(StepEvent::AuthorityViolation { target: target.to_string() });
                    self.queue.clear();
                    out.completed_task = Some(false);
                    return;
                }
                let todo = render_action(&AgentAction::Direct(inner));
                let text = protocol::instruction(target.display_name(), &todo);
                self.post(ctx, out, &target, text);
            }
            AgentAction::Direct(body) => {
                self.execute_direct(body, ctx, out);
            }
        }
    }

    fn active_layer(&mut self) -> &mut TaskLayer {
        if self.self_task_active || self.role == Role::Leaf {
            &mut self.leaf
        } else {
            &mut self.group
        }
    }

    fn execute_direct(&mut self, body: ActionBody, ctx: &mut StepCtx<'_>, out: &mut StepOutcome) {
        let summary = self
            .active_layer()
            .current
            .as_ref()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| render_action(&AgentAction::Direct(body.clone())));
        if !self.started_current {
            self.started_current = true;
            if let Some(informer) = self.informer().cloned() {
                self.post(ctx, out, &informer, protocol::start_task(&summary));
            }
        }

        let todo_text = render_action(&AgentAction::Direct(body.clone()));
        let primitives = self.lower(&body, ctx);
        let mut failure: Option<String> = None;
        let mut acted_ticks = 0;
        for primitive in &primitives {
            let injected = ctx.injector.as_deref_mut().and_then(FailureInjector::intercept);
            let outcome = match injected {
                Some(injected) => {
                    ctx.world.advance_clock(injected.ticks);
                    injected
                }
                None => match execute_primitive(ctx.world, &self.id, primitive) {
                    Ok(outcome) => outcome,
                    Err(e) => {
                        out.events.push(StepEvent::Acted {
                            todo: todo_text.clone(),
                            ticks: 0,
                            ok: false,
                            error: Some(e.to_string()),
                        });
                        return;
                    }
                },
            };
            acted_ticks += outcome.ticks;
            out.ticks += outcome.ticks;
            if let Some(err) = outcome.failure {
                failure = Some(err.to_string());
                break;
            }
        }
        out.events.push(StepEvent::Acted {
            todo: todo_text,
            ticks: acted_ticks,
            ok: failure.is_none(),
            error: failure.clone(),
        });

        if failure.is_some() {
            self.queue.clear();
            self.consecutive_fails += 1;
            out.completed_task = Some(false);
            self.report(ctx, out, &summary, false);
            let informer_in_graph = self
                .informer()
                .map(|i| ctx.graph.contains(i))
                .unwrap_or(false);
            if self.consecutive_fails >= ESCALATION_LIMIT && informer_in_graph {
                self.escalated = true;
                out.events.push(StepEvent::Escalated { task: summary });
            }
        } else if self.queue.is_empty() {
            self.consecutive_fails = 0;
            out.completed_task = Some(true);
            self.report(ctx, out, &summary, true);
        }
    }

    /// Posts the success/failure protocol pair for a finished task.
    fn report(&mut self, ctx: &mut StepCtx<'_>, out: &mut StepOutcome, task: &str, ok: bool) {
        self.started_current = false;
        let Some(informer) = self.informer().cloned() else {
            return;
        };
        let text = if ok {
            protocol::succeeded_task(task)
        } else {
            protocol::failed_task(task)
        };
        self.post(ctx, out, &informer, text);
        if let Ok(body) = ctx.world.body(&self.id) {
            let report = protocol::inventory_report(&body.inventory, &body.equipment);
            self.post(ctx, out, &informer, report);
        }
        // The agent's own state changed; re-evaluate on the next cycle.
        self.dirty = true;
    }

    /// Lowers one todo body into world primitives.
    fn lower(&self, body: &ActionBody, ctx: &StepCtx<'_>) -> Vec<Primitive> {
        let item = body.item.as_deref().map(normalize_item).unwrap_or_default();
        let count = body.quantity.unwrap_or(1);
        match body.verb {
            Verb::Mine => vec![Primitive::MineBlock { kind: item, count }],
            Verb::Craft => vec![Primitive::CraftItem { item, count }],
            Verb::Smelt => vec![Primitive::SmeltItem { item, count }],
            Verb::Equip => vec![Primitive::Equip { item }],
            Verb::Give => vec![Primitive::GiveItem {
                target: body.target.clone().expect("parser guarantees give target"),
                item,
                count,
            }],
            Verb::MoveTo => {
                vec![Primitive::MoveTo(body.position.expect("parser guarantees position"))]
            }
            Verb::Build => self.lower_build(body, ctx),
            // No mobs or food exist in this world; these succeed as
            // no-ops rather than wedging the queue.
            Verb::Kill | Verb::Cook => vec![],
        }
    }

    /// Build places every still-missing cell of the named part, in the
    /// blueprint's canonical order, as long as materials last.
    fn lower_build(&self, body: &ActionBody, ctx: &StepCtx<'_>) -> Vec<Primitive> {
        let Some(part) = body.item.as_deref().and_then(ShelterPart::parse) else {
            return Vec::new();
        };
        let Some(blueprint) = ctx.blueprint else {
            return Vec::new();
        };
        let kind = part.material();
        let consumed = ctx
            .world
            .config
            .block_items
            .get(kind)
            .cloned()
            .unwrap_or_else(|| kind.to_string());
        let mut budget = ctx.world.body(&self.id).map(|b| b.count(&consumed)).unwrap_or(0);
        let mut prims = Vec::new();
        for cell in blueprint.cells(part) {
            if budget == 0 {
                break;
            }
            if ctx.world.state.block_at(cell).is_none() {
                prims.push(Primitive::PlaceBlock { kind: kind.to_string(), pos: *cell });
                budget -= 1;
            }
        }
        prims
    }

    // -- planning ------------------------------------------------------

    fn plan_cycle(&mut self, ctx: &mut StepCtx<'_>, out: &mut StepOutcome) {
        if self.escalated {
            out.idle = true;
            return;
        }
        if self.self_task_active {
            self.leaf_cycle(ctx, out);
            if !(self.leaf.done && out.idle) {
                return;
            }
            // The own share is finished; resume group planning now.
            self.self_task_active = false;
            self.self_task = None;
            self.dirty = true;
            out.idle = false;
        }
        match self.role {
            Role::Leaf => self.leaf_cycle(ctx, out),
            Role::Root => self.group_cycle(ctx, out),
        }
    }

    fn leaf_objective(&self) -> Option<(AgentId, String)> {
        if self.self_task_active {
            let task = self.self_task.clone()?;
            let informer = self
                .instruction
                .as_ref()
                .map(|(s, _)| s.clone())
                .unwrap_or_else(|| AgentId::from("commissioner"));
            return Some((informer, task));
        }
        self.instruction.clone()
    }

    fn leaf_cycle(&mut self, ctx: &mut StepCtx<'_>, out: &mut StepOutcome) {
        let Some((informer, objective)) = self.leaf_objective() else {
            out.idle = true;
            return;
        };
        if self.leaf.done {
            out.idle = true;
            return;
        }
        // Monitor the stage that just drained, if any.
        if let Some((_, summary)) = self.leaf.current.clone() {
            let stage = self.leaf.current_stage().cloned();
            let judgment =
                self.run_monitor(&summary, stage.as_ref(), ctx, out, &informer, &objective);
            self.leaf.last_judgment = judgment;
        }
        self.dirty = false;
        self.replan(Role::Leaf, &informer, &objective, ctx, out);
    }

    fn group_cycle(&mut self, ctx: &mut StepCtx<'_>, out: &mut StepOutcome) {
        let Some((informer, objective)) = self.instruction.clone() else {
            out.idle = true;
            return;
        };
        if self.group.done {
            out.idle = true;
            return;
        }
        if let Some((_, summary)) = self.group.current.clone() {
            if !self.dirty {
                out.idle = true;
                return;
            }
            let stage = self.group.current_stage().cloned();
            let judgment =
                self.run_monitor(&summary, stage.as_ref(), ctx, out, &informer, &objective);
            let waiting =
                matches!(judgment.as_ref().map(|j| j.status), Some(TaskStatus::Unknown));
            self.group.last_judgment = judgment;
            self.dirty = false;
            if waiting {
                out.idle = true;
                return;
            }
        }
        self.dirty = false;
        self.replan(Role::Root, &informer, &objective, ctx, out);
    }

    fn run_monitor(
        &mut self,
        summary: &str,
        stage: Option<&Stage>,
        ctx: &mut StepCtx<'_>,
        out: &mut StepOutcome,
        informer: &AgentId,
        objective: &str,
    ) -> Option<ProgressJudgment> {
        let result = {
            let Ok(owned) = self.plan_context(Role::Root, informer, objective, ctx) else {
                return None;
            };
            let plan_ctx = owned.as_plan_context(ctx.blueprint);
            judge_progress(summary, stage, &plan_ctx, ctx.backend)
        };
        self.monitor_count += 1;
        let cost = ctx.world.config.tick_costs.poll;
        out.ticks += cost;
        ctx.world.advance_clock(cost);
        match result {
            Ok(judgment) => {
                out.events.push(StepEvent::Monitored {
                    task: summary.to_string(),
                    status: judgment.status,
                    rationale: judgment.rationale.clone(),
                });
                Some(judgment)
            }
            Err(_) => None,
        }
    }

    fn assignment_statuses(
        &self,
        stage: &Stage,
        ctx: &StepCtx<'_>,
    ) -> BTreeMap<AgentId, TaskStatus> {
        let records = ctx.pool.involving(&self.id);
        let (_, mut statuses) = monitor_stage(stage, &records, None);
        // The planner judges this agent's own share from its inventory,
        // not from chat.
        statuses.remove(&self.id);
        statuses
    }

    fn plan_context<'a>(
        &'a self,
        role: Role,
        informer: &'a AgentId,
        objective: &'a str,
        ctx: &StepCtx<'_>,
    ) -> Result<OwnedPlanContext<'a>, PlanError> {
        let perception = perceive(ctx.world, &self.id)
            .map_err(|e| PlanError::BackendUnavailable(e.to_string()))?;
        let employment: Vec<AgentId> = ctx
            .graph
            .command_targets(&self.id)
            .map(|t| t.into_iter().collect())
            .unwrap_or_default();
        let records = ctx.pool.involving(&self.id);
        let mut grouped: BTreeMap<AgentId, Vec<MessageRecord>> = BTreeMap::new();
        for r in &records {
            let counterpart =
                if r.speaker == self.id { r.respondent.clone() } else { r.speaker.clone() };
            grouped.entry(counterpart).or_default().push(r.clone());
        }
        let groups: Vec<(AgentId, Vec<MessageRecord>)> = grouped.into_iter().collect();
        let conversation = render_grouped(&self.id, &groups);
        let layer = if role == Role::Root { &self.group } else { &self.leaf };
        let statuses = layer
            .current_stage()
            .map(|stage| self.assignment_statuses(stage, ctx))
            .unwrap_or_default();
        Ok(OwnedPlanContext {
            perception,
            employment,
            records,
            conversation,
            statuses,
            role,
            informer,
            objective,
            previous: layer.current.clone(),
            judgment: layer.last_judgment.clone(),
            runtime: self,
            structure: ctx.graph.structure(),
            downstream: ctx.graph.downstream_count(&self.id),
            group_size: ctx.graph.agents().len(),
        })
    }

    fn replan(
        &mut self,
        role: Role,
        informer: &AgentId,
        objective: &str,
        ctx: &mut StepCtx<'_>,
        out: &mut StepOutcome,
    ) {
        let plan_result = {
            let Ok(owned) = self.plan_context(role, informer, objective, ctx) else {
                out.idle = true;
                return;
            };
            let plan_ctx = owned.as_plan_context(ctx.blueprint);
            plan_tasks(&plan_ctx, ctx.backend)
        };
        self.prompt_count += 1;
        let cost = ctx.world.config.tick_costs.planning;
        out.ticks += cost;
        ctx.world.advance_clock(cost);

        let plan = match plan_result {
            Ok(plan) => plan,
            Err(_) => {
                out.idle = true;
                return;
            }
        };
        out.events.push(StepEvent::Planned {
            layer: if role == Role::Root { "group".into() } else { "leaf".into() },
            objective: objective.to_string(),
            stage: plan.task_at_hand.as_ref().map(Stage::summary),
        });

        let stage = match plan.task_at_hand.clone() {
            Some(stage) => stage,
            None => {
                let layer = self.layer_mut(role);
                layer.plan = Some(plan);
                layer.done = true;
                layer.current = None;
                if role == Role::Root {
                    // The group objective is complete: tell the informer.
                    out.completed_task = Some(true);
                    let text = protocol::succeeded_task(objective);
                    self.post(ctx, out, informer, text);
                } else {
                    out.idle = true;
                }
                return;
            }
        };

        let actions_result = {
            let Ok(owned) = self.plan_context(role, informer, objective, ctx) else {
                out.idle = true;
                return;
            };
            let plan_ctx = owned.as_plan_context(ctx.blueprint);
            plan_actions(&stage, &plan_ctx, ctx.backend)
        };
        let mut actions = match actions_result {
            Ok(actions) => actions,
            Err(_) => {
                out.idle = true;
                return;
            }
        };

        if role == Role::Root {
            // Own-share assignments become a pending leaf objective; only
            // delegations stay in the queue.
            if let Some(own) = stage
                .assignments
                .iter()
                .find(|a| a.agent == self.id)
                .map(|a| a.description.clone())
            {
                self.self_task = Some(own);
            }
            actions.retain(|a| matches!(a, AgentAction::Delegate { .. }));
        }

        let layer = self.layer_mut(role);
        layer.current = Some((stage.label.clone(), stage.summary()));
        layer.plan = Some(plan);
        self.queue.refill(actions);
        self.started_current = false;

        if self.queue.is_empty() && role == Role::Root && self.self_task.is_some() {
            self.self_task_active = true;
            self.leaf.reset();
        }
    }

    fn layer_mut(&mut self, role: Role) -> &mut TaskLayer {
        if role == Role::Root {
            &mut self.group
        } else {
            &mut self.leaf
        }
    }
}

/// Owns the derived data a `PlanContext` borrows.
struct OwnedPlanContext<'a> {
    perception: PerceptionSnapshot,
    employment: Vec<AgentId>,
    records: Vec<MessageRecord>,
    conversation: String,
    statuses: BTreeMap<AgentId, TaskStatus>,
    role: Role,
    informer: &'a AgentId,
    objective: &'a str,
    previous: Option<(String, String)>,
    judgment: Option<ProgressJudgment>,
    runtime: &'a AgentRuntime,
    structure: StructureLabel,
    downstream: usize,
    group_size: usize,
}

impl OwnedPlanContext<'_> {
    fn as_plan_context<'b>(&'b self, blueprint: Option<&'b ShelterBlueprint>) -> PlanContext<'b> {
        PlanContext {
            agent: &self.runtime.id,
            role: self.role,
            structure: self.structure,
            employment: self.employment.clone(),
            downstream: self.downstream,
            include_self: self.runtime.include_self,
            group_size: self.group_size,
            objective: self.objective,
            perception: &self.perception,
            conversation: self.conversation.clone(),
            records: self.records.clone(),
            beliefs: &self.runtime.beliefs,
            assignment_status: &self.statuses,
            previous_label: self.previous.as_ref().map(|(l, _)| l.clone()),
            previous_task: self.previous.as_ref().map(|(_, s)| s.clone()),
            last_judgment: self.judgment.clone(),
            blueprint,
            informer: Some(self.informer),
            chest: None,
        }
    }
}
