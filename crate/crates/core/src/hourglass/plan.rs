//! Hierarchical planning entry points. Both planner functions build a
//! backend request (structured slots plus rendered prompt), submit it,
//! and parse the response text, so scripted and remote backends are
//! interchangeable.

use std::collections::BTreeMap;

use crate::comms::MessageRecord;
use crate::org_graph::{AgentId, StructureLabel};
use crate::planner_backends::{template_ids, templates, Backend, BackendRequest};
use crate::world::blueprint::ShelterBlueprint;
use crate::world::{Inventory, PerceptionSnapshot};

use super::todo::parse_todo;
use super::{
    AgentAction, Assignment, PlanError, PlanState, ProgressJudgment, Role, Stage, TaskStatus,
};

/// Everything a planner invocation may draw on.
pub struct PlanContext<'a> {
    pub agent: &'a AgentId,
    pub role: Role,
    pub structure: StructureLabel,
    /// Agents this one can instruct, lexicographic order.
    pub employment: Vec<AgentId>,
    /// Chain only: number of agents further down the chain.
    pub downstream: usize,
    /// Graph coordinators plan a share for themselves as well.
    pub include_self: bool,
    pub group_size: usize,
    pub objective: &'a str,
    pub perception: &'a PerceptionSnapshot,
    /// Rendered grouped conversation text.
    pub conversation: String,
    /// Raw records involving this agent, for the monitor.
    pub records: Vec<MessageRecord>,
    pub beliefs: &'a BTreeMap<AgentId, Inventory>,
    pub assignment_status: &'a BTreeMap<AgentId, TaskStatus>,
    pub previous_label: Option<String>,
    pub previous_task: Option<String>,
    pub last_judgment: Option<ProgressJudgment>,
    pub blueprint: Option<&'a ShelterBlueprint>,
    pub informer: Option<&'a AgentId>,
    pub chest: Option<&'a Inventory>,
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("slot value serializes")
}

impl PlanContext<'_> {
    fn base_slots(&self) -> BTreeMap<String, String> {
        let mut slots = BTreeMap::new();
        slots.insert("agent".into(), self.agent.to_string());
        slots.insert("role".into(), json(&self.role).trim_matches('"').to_string());
        slots.insert("structure".into(), json(&self.structure).trim_matches('"').to_string());
        slots.insert("biome".into(), self.perception.biome.clone());
        slots.insert("group_size".into(), self.group_size.to_string());
        slots.insert("downstream".into(), self.downstream.to_string());
        slots.insert("include_self".into(), self.include_self.to_string());
        slots.insert(
            "employment".into(),
            json(&self.employment.iter().map(|a| a.to_string()).collect::<Vec<_>>()),
        );
        slots.insert("objective".into(), self.objective.to_string());
        slots.insert("inventory".into(), json(&self.perception.inventory));
        slots.insert("equipment".into(), json(&self.perception.equipment));
        slots.insert("nearby".into(), json(&self.perception.nearby_blocks));
        slots.insert("conversation".into(), self.conversation.clone());
        slots.insert("conversation_json".into(), json(&self.records));
        slots.insert(
            "beliefs".into(),
            json(&self
                .beliefs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect::<BTreeMap<String, Inventory>>()),
        );
        slots.insert(
            "assignment_status".into(),
            json(&self
                .assignment_status
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect::<BTreeMap<String, TaskStatus>>()),
        );
        slots.insert(
            "previous_task".into(),
            self.previous_task.clone().unwrap_or_else(|| "none".into()),
        );
        slots.insert(
            "previous_label".into(),
            self.previous_label.clone().unwrap_or_else(|| "none".into()),
        );
        slots.insert(
            "judgment".into(),
            self.last_judgment
                .as_ref()
                .map(|j| j.status.to_string())
                .unwrap_or_else(|| "none".into()),
        );
        slots.insert(
            "blueprint".into(),
            self.blueprint.map(json).unwrap_or_default(),
        );
        slots.insert(
            "informer".into(),
            self.informer.map(|a| a.to_string()).unwrap_or_else(|| "commissioner".into()),
        );
        slots.insert(
            "chest_json".into(),
            self.chest.map(json).unwrap_or_else(|| "null".into()),
        );
        slots
    }

    fn request(&self, template_id: &str, extra: &[(&str, String)]) -> Result<BackendRequest, PlanError> {
        let mut slots = self.base_slots();
        for (k, v) in extra {
            slots.insert(k.to_string(), v.clone());
        }
        let template = templates::by_id(template_id)
            .ok_or_else(|| PlanError::MalformedPlan(format!("unknown template {template_id}")))?;
        let prompt = template
            .render(&slots)
            .map_err(|e| PlanError::MalformedPlan(e.to_string()))?;
        Ok(BackendRequest {
            template_id: template_id.to_string(),
            slots,
            prompt,
            deterministic: true,
        })
    }
}

/// Narrow: perception plus conversation to a staged plan. One parse
/// retry is allowed before the plan is rejected as malformed.
pub fn plan_tasks(
    ctx: &PlanContext<'_>,
    backend: &mut dyn Backend,
) -> Result<PlanState, PlanError> {
    if ctx.objective.trim().is_empty() {
        return Err(PlanError::EmptyTask);
    }
    let template_id = match ctx.role {
        Role::Root => template_ids::TASK_ROOT,
        Role::Leaf => template_ids::TASK_LEAF,
    };
    let request = ctx.request(template_id, &[])?;
    let known: Vec<AgentId> = ctx
        .employment
        .iter()
        .cloned()
        .chain(std::iter::once(ctx.agent.clone()))
        .collect();
    let mut last_err = None;
    for _ in 0..2 {
        let response = backend
            .complete(&request)
            .map_err(|e| PlanError::BackendUnavailable(e.to_string()))?;
        match parse_plan_response(&response.text, &known) {
            Ok(plan) => return Ok(plan),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("loop ran"))
}

/// Widen: one stage to an executable todo list.
pub fn plan_actions(
    stage: &Stage,
    ctx: &PlanContext<'_>,
    backend: &mut dyn Backend,
) -> Result<Vec<AgentAction>, PlanError> {
    let extra = [
        ("task", render_stage(stage)),
        ("stage_json", json(stage)),
    ];
    let request = ctx.request(template_ids::ACTION, &extra)?;
    let mut last_err = None;
    for _ in 0..2 {
        let response = backend
            .complete(&request)
            .map_err(|e| PlanError::BackendUnavailable(e.to_string()))?;
        match parse_todo_list(&response.text) {
            Ok(todos) => {
                return todos.iter().map(|t| parse_todo(t)).collect();
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("loop ran"))
}

/// Progress judgment routed through the backend. When the stage is
/// given, judgment is per-assignment (each sub-task is matched against
/// its own agent's messages).
pub fn judge_progress(
    task: &str,
    stage: Option<&Stage>,
    ctx: &PlanContext<'_>,
    backend: &mut dyn Backend,
) -> Result<ProgressJudgment, PlanError> {
    if task.trim().is_empty() {
        return Err(PlanError::EmptyTask);
    }
    let extra = [
        ("task", task.to_string()),
        ("stage_json", stage.map(|s| json(s)).unwrap_or_default()),
    ];
    let request = ctx.request(template_ids::MONITOR, &extra)?;
    let response = backend
        .complete(&request)
        .map_err(|e| PlanError::BackendUnavailable(e.to_string()))?;
    parse_judgment(&response.text)
}

/// Renders a plan into the canonical response text emitted by the
/// scripted oracle and expected from remote models.
pub fn render_plan_text(plan: &PlanState) -> String {
    let mut out = String::new();
    out.push_str("Objective:\n");
    out.push_str(&plan.objective);
    out.push_str("\nAnalysis:\n");
    out.push_str(&plan.analysis);
    out.push_str("\nLong term plan:\n");
    for (i, stage) in plan.long_term_plan.iter().enumerate() {
        out.push_str(&format!("Stage {}: {}\n", i + 1, stage.label));
        for a in &stage.assignments {
            out.push_str(&format!("    {}: {}\n", a.agent, a.description));
        }
    }
    out.push_str("The task at hand:\n");
    match &plan.task_at_hand {
        Some(stage) => {
            let number = plan
                .long_term_plan
                .iter()
                .position(|s| s == stage)
                .map(|i| i + 1)
                .unwrap_or(1);
            out.push_str(&format!("Stage {number}: {}\n", stage.label));
            for a in &stage.assignments {
                out.push_str(&format!("    {}: {}\n", a.agent, a.description));
            }
        }
        None => out.push_str("None\n"),
    }
    out.push_str(&format!(
        "Informer is {}",
        plan.informer.as_ref().map(|a| a.to_string()).unwrap_or_else(|| "commissioner".into())
    ));
    out
}

fn render_stage(stage: &Stage) -> String {
    let mut out = format!("Stage: {}\n", stage.label);
    for a in &stage.assignments {
        out.push_str(&format!("    {}: {}\n", a.agent, a.description));
    }
    out
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Objective,
    Analysis,
    LongTermPlan,
    TaskAtHand,
}

/// Parses the canonical plan text back into a structured plan.
pub fn parse_plan_response(text: &str, known: &[AgentId]) -> Result<PlanState, PlanError> {
    let mut plan = PlanState::default();
    let mut section = Section::Preamble;
    let mut current_stage: Option<Stage> = None;
    let mut task_stage: Option<Stage> = None;
    let mut task_none = false;

    let flush =
        |stage: &mut Option<Stage>, into_task: bool, plan: &mut PlanState, task: &mut Option<Stage>| {
            if let Some(s) = stage.take() {
                if into_task {
                    *task = Some(s);
                } else {
                    plan.long_term_plan.push(s);
                }
            }
        };

    for raw_line in text.lines() {
        let line = raw_line.trim_end();
        let lower = line.trim().to_lowercase();
        if lower == "objective:" {
            section = Section::Objective;
            continue;
        }
        if lower == "analysis:" {
            section = Section::Analysis;
            continue;
        }
        if lower == "long term plan:" || lower == "long-term plan:" {
            section = Section::LongTermPlan;
            continue;
        }
        if lower == "the task at hand:" || lower == "task at hand:" {
            flush(&mut current_stage, false, &mut plan, &mut task_stage);
            section = Section::TaskAtHand;
            continue;
        }
        if let Some(name) = lower.strip_prefix("informer is ") {
            flush(
                &mut current_stage,
                section == Section::TaskAtHand,
                &mut plan,
                &mut task_stage,
            );
            plan.informer = Some(AgentId::from(name.trim().trim_end_matches('.')));
            continue;
        }
        match section {
            Section::Preamble => {}
            Section::Objective => {
                if !line.trim().is_empty() {
                    if !plan.objective.is_empty() {
                        plan.objective.push(' ');
                    }
                    plan.objective.push_str(line.trim());
                }
            }
            Section::Analysis => {
                if !line.trim().is_empty() {
                    if !plan.analysis.is_empty() {
                        plan.analysis.push(' ');
                    }
                    plan.analysis.push_str(line.trim());
                }
            }
            Section::LongTermPlan | Section::TaskAtHand => {
                let into_task = section == Section::TaskAtHand;
                let trimmed = line.trim();
                if trimmed.is_empty() {
                    continue;
                }
                if into_task && trimmed.eq_ignore_ascii_case("none") {
                    task_none = true;
                    continue;
                }
                if let Some(rest) = strip_stage_prefix(trimmed) {
                    flush(&mut current_stage, into_task, &mut plan, &mut task_stage);
                    current_stage = Some(Stage { label: rest.to_string(), assignments: vec![] });
                    continue;
                }
                if let Some((name, desc)) = trimmed.split_once(':') {
                    let id = AgentId::from(name.trim());
                    if known.iter().any(|k| *k == id) {
                        if let Some(stage) = current_stage.as_mut() {
                            stage.assignments.push(Assignment {
                                agent: id,
                                description: desc.trim().trim_end_matches('.').to_string(),
                            });
                            continue;
                        }
                    }
                }
                // Prose inside the plan body is tolerated and skipped.
            }
        }
    }
    flush(
        &mut current_stage,
        section == Section::TaskAtHand,
        &mut plan,
        &mut task_stage,
    );

    if plan.objective.is_empty() {
        return Err(PlanError::MalformedPlan("missing Objective section".into()));
    }
    if plan.long_term_plan.is_empty() && task_stage.is_none() && !task_none {
        return Err(PlanError::MalformedPlan("missing plan stages".into()));
    }
    if !task_none {
        if let Some(found) = task_stage {
            // Tie the task at hand to the matching long-term stage when
            // labels coincide, so stage identity comparisons work.
            plan.task_at_hand = Some(
                plan.long_term_plan
                    .iter()
                    .find(|s| s.label == found.label)
                    .cloned()
                    .unwrap_or(found),
            );
        } else {
            plan.task_at_hand = plan.long_term_plan.first().cloned();
        }
    }
    Ok(plan)
}

fn strip_stage_prefix(line: &str) -> Option<&str> {
    let lower = line.to_lowercase();
    if !lower.starts_with("stage") {
        return None;
    }
    let rest = &line[5..];
    let rest = rest.trim_start();
    let rest = rest.trim_start_matches(|c: char| c.is_ascii_digit());
    let rest = rest.trim_start().strip_prefix(':')?;
    Some(rest.trim())
}

/// Parses a todo-list response: a strict JSON array of strings, with a
/// lenient fallback that extracts the first bracketed array.
pub fn parse_todo_list(text: &str) -> Result<Vec<String>, PlanError> {
    if let Ok(list) = serde_json::from_str::<Vec<String>>(text.trim()) {
        return Ok(list);
    }
    if let Some(start) = text.find('[') {
        if let Some(end) = text[start..].rfind(']') {
            let candidate = &text[start..start + end + 1];
            if let Ok(list) = serde_json::from_str::<Vec<String>>(candidate) {
                return Ok(list);
            }
        }
    }
    Err(PlanError::UnparseableTodoList(text.trim().chars().take(120).collect()))
}

/// Parses the two-line monitor response.
pub fn parse_judgment(text: &str) -> Result<ProgressJudgment, PlanError> {
    let mut status = None;
    let mut rationale = String::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("Status:") {
            status = match rest.trim().to_lowercase().as_str() {
                "success" => Some(TaskStatus::Success),
                "fail" | "failure" | "failed" => Some(TaskStatus::Fail),
                "unknown" | "ongoing" => Some(TaskStatus::Unknown),
                other => {
                    return Err(PlanError::MalformedPlan(format!("unknown status '{other}'")))
                }
            };
        } else if let Some(rest) = trimmed.strip_prefix("Rationale:") {
            rationale = rest.trim().to_string();
        }
    }
    match status {
        Some(status) => Ok(ProgressJudgment { rationale, status }),
        None => Err(PlanError::MalformedPlan("monitor response missing Status line".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn known() -> Vec<AgentId> {
        vec!["leader".into(), "workerA".into(), "workerB".into(), "workerC".into()]
    }

    #[test]
    fn plan_text_round_trips() {
        let stage1 = Stage {
            label: "Gather stones".into(),
            assignments: vec![
                Assignment { agent: "workerA".into(), description: "mine 17 stones".into() },
                Assignment { agent: "workerB".into(), description: "mine 17 stones".into() },
                Assignment { agent: "workerC".into(), description: "mine 16 stones".into() },
            ],
        };
        let plan = PlanState {
            objective: "mine 50 stones".into(),
            analysis: "Split 50 stones over 3 players by largest remainder.".into(),
            long_term_plan: vec![stage1.clone()],
            task_at_hand: Some(stage1),
            informer: Some("commissioner".into()),
            inventory_beliefs: BTreeMap::new(),
        };
        let text = render_plan_text(&plan);
        let parsed = parse_plan_response(&text, &known()).expect("parse");
        assert_eq!(parsed.objective, plan.objective);
        assert_eq!(parsed.long_term_plan, plan.long_term_plan);
        assert_eq!(parsed.task_at_hand, plan.task_at_hand);
        assert_eq!(parsed.informer, plan.informer);
    }

    #[test]
    fn none_task_at_hand_round_trips() {
        let plan = PlanState {
            objective: "mine 50 stones".into(),
            analysis: "All shares are collected.".into(),
            long_term_plan: vec![Stage {
                label: "Gather stones".into(),
                assignments: vec![Assignment {
                    agent: "workerA".into(),
                    description: "mine 50 stones".into(),
                }],
            }],
            task_at_hand: None,
            informer: Some("commissioner".into()),
            inventory_beliefs: BTreeMap::new(),
        };
        let text = render_plan_text(&plan);
        assert!(text.contains("The task at hand:\nNone"));
        let parsed = parse_plan_response(&text, &known()).expect("parse");
        assert_eq!(parsed.task_at_hand, None);
    }

    #[test]
    fn prose_lines_are_tolerated() {
        let text = "Objective:\nmine 9 stones\nAnalysis:\nWe should gather tools first.\n\
Long term plan:\nStage 1: Prepare\n    we discuss the approach\n    workerA: mine 9 stones\n\
The task at hand:\nStage 1: Prepare\n    workerA: mine 9 stones\nInformer is leader";
        let plan = parse_plan_response(text, &known()).expect("parse");
        assert_eq!(plan.long_term_plan[0].assignments.len(), 1);
        assert_eq!(plan.informer, Some("leader".into()));
    }

    #[test]
    fn missing_objective_is_malformed() {
        assert!(matches!(
            parse_plan_response("Analysis:\nhm", &known()),
            Err(PlanError::MalformedPlan(_))
        ));
    }

    #[test]
    fn todo_list_strict_and_lenient() {
        assert_eq!(
            parse_todo_list(r#"["mine 3 logs", "craft 12 planks"]"#).unwrap(),
            vec!["mine 3 logs".to_string(), "craft 12 planks".to_string()]
        );
        assert_eq!(
            parse_todo_list("Here is the list:\n[\"mine 3 logs\"]\nDone.").unwrap(),
            vec!["mine 3 logs".to_string()]
        );
        assert!(matches!(
            parse_todo_list("no list here"),
            Err(PlanError::UnparseableTodoList(_))
        ));
    }

    #[test]
    fn judgment_parses() {
        let j = parse_judgment("Status: success\nRationale: reported done.").unwrap();
        assert_eq!(j.status, TaskStatus::Success);
        assert_eq!(j.rationale, "reported done.");
        assert!(parse_judgment("nothing").is_err());
    }
}
