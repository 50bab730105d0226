//! Rule-based progress monitor. Reads the conversation transcript and
//! judges whether the current task succeeded, failed, or is still of
//! unknown status, with an explicit rationale.

use std::collections::BTreeMap;

use crate::comms::{protocol, MessageRecord};
use crate::org_graph::AgentId;
use crate::world::config::normalize_item;
use crate::world::Inventory;

use super::todo::{extract_task_core, task_matches};
use super::{PlanError, ProgressJudgment, Stage, TaskStatus, Verb};

/// Judges one task (possibly several sub-tasks, one per line or
/// separated by ';') against a transcript. `chest` is the contents of a
/// shared deposit chest, if the task uses one: items already banked
/// count as success even without a verbal report.
pub fn monitor_progress(
    task: &str,
    conversation: &[MessageRecord],
    chest: Option<&Inventory>,
) -> Result<ProgressJudgment, PlanError> {
    if task.trim().is_empty() {
        return Err(PlanError::EmptyTask);
    }
    let subtasks = split_subtasks(task);
    let mut rationales = Vec::new();
    let mut any_fail = false;
    let mut all_success = true;
    for sub in &subtasks {
        let (status, why) = judge_subtask(sub, conversation, chest);
        match status {
            TaskStatus::Fail => any_fail = true,
            TaskStatus::Unknown => all_success = false,
            TaskStatus::Success => {}
        }
        rationales.push(why);
    }
    let status = if any_fail {
        TaskStatus::Fail
    } else if all_success {
        TaskStatus::Success
    } else {
        TaskStatus::Unknown
    };
    Ok(ProgressJudgment { rationale: rationales.join(" "), status })
}

/// Judges each assignment of a stage separately; used by roots to track
/// which employees have finished. Returns the overall judgment plus a
/// per-agent status map.
pub fn monitor_stage(
    stage: &Stage,
    conversation: &[MessageRecord],
    chest: Option<&Inventory>,
) -> (ProgressJudgment, BTreeMap<AgentId, TaskStatus>) {
    let mut per_agent = BTreeMap::new();
    let mut rationales = Vec::new();
    let mut any_fail = false;
    let mut all_success = true;
    for a in &stage.assignments {
        let relevant: Vec<MessageRecord> = conversation
            .iter()
            .filter(|m| m.speaker == a.agent || m.respondent == a.agent)
            .cloned()
            .collect();
        let (status, why) = judge_subtask(&a.description, &relevant, chest);
        match status {
            TaskStatus::Fail => any_fail = true,
            TaskStatus::Unknown => all_success = false,
            TaskStatus::Success => {}
        }
        per_agent.insert(a.agent.clone(), status);
        rationales.push(format!("{}: {}", a.agent, why));
    }
    let status = if any_fail {
        TaskStatus::Fail
    } else if all_success && !stage.assignments.is_empty() {
        TaskStatus::Success
    } else {
        TaskStatus::Unknown
    };
    (
        ProgressJudgment { rationale: rationales.join(" "), status },
        per_agent,
    )
}

fn split_subtasks(task: &str) -> Vec<String> {
    let parts: Vec<String> = task
        .split(|c| c == '\n' || c == ';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    if parts.is_empty() {
        vec![task.trim().to_string()]
    } else {
        parts
    }
}

fn judge_subtask(
    sub: &str,
    conversation: &[MessageRecord],
    chest: Option<&Inventory>,
) -> (TaskStatus, String) {
    // Deposited goods satisfy a collection sub-task outright.
    if let Some(chest) = chest {
        if let Some(core) = extract_task_core(sub) {
            if core.verb == Verb::Mine {
                if let Some(item) = core.item.as_deref() {
                    let want = core.quantity.unwrap_or(1);
                    let have = chest.get(&normalize_item(item)).copied().unwrap_or(0);
                    if have >= want {
                        return (
                            TaskStatus::Success,
                            format!("the chest already holds {have} {item}, satisfying '{sub}'."),
                        );
                    }
                }
            }
        }
    }

    // Last explicit claim about this sub-task wins.
    let mut last_claim: Option<(&MessageRecord, TaskStatus)> = None;
    let mut started = false;
    for record in conversation {
        if let Some(t) = protocol::task_of_success(&record.message) {
            if task_matches(&t, sub) {
                last_claim = Some((record, TaskStatus::Success));
            }
        } else if let Some(t) = protocol::task_of_failure(&record.message) {
            if task_matches(&t, sub) {
                last_claim = Some((record, TaskStatus::Fail));
            }
        } else if let Some(t) = protocol::task_of_start(&record.message) {
            if task_matches(&t, sub) {
                started = true;
            }
        }
    }

    match last_claim {
        Some((record, TaskStatus::Success)) => {
            // A later inventory report from the same speaker can
            // contradict the claim.
            if let Some(contradiction) =
                inventory_contradiction(sub, &record.speaker, record.seq, conversation)
            {
                return (TaskStatus::Fail, contradiction);
            }
            (
                TaskStatus::Success,
                format!("{} reported success on '{sub}'.", record.speaker),
            )
        }
        Some((record, TaskStatus::Fail)) => (
            TaskStatus::Fail,
            format!("{} reported failure on '{sub}'.", record.speaker),
        ),
        _ if started => (
            TaskStatus::Unknown,
            format!("'{sub}' was started but no outcome has been reported yet."),
        ),
        _ => (
            TaskStatus::Unknown,
            format!("no outcome has been reported for '{sub}'."),
        ),
    }
}

/// Checks inventory reports posted by `speaker` at or after `since_seq`
/// against the claimed sub-task. Returns a rationale when the report
/// shows the claimed product is missing.
fn inventory_contradiction(
    sub: &str,
    speaker: &AgentId,
    since_seq: u64,
    conversation: &[MessageRecord],
) -> Option<String> {
    let core = extract_task_core(sub)?;
    let item = normalize_item(core.item.as_deref()?);
    let want = match core.verb {
        Verb::Mine | Verb::Craft | Verb::Smelt => core.quantity.unwrap_or(1),
        Verb::Equip | Verb::Give | Verb::Build | Verb::MoveTo | Verb::Kill | Verb::Cook => {
            return None
        }
    };
    for record in conversation {
        if record.speaker != *speaker || record.seq < since_seq {
            continue;
        }
        let Some(inventory) = protocol::parse_inventory_report(&record.message) else {
            continue;
        };
        let mut have = inventory.get(&item).copied().unwrap_or(0);
        have += protocol::parse_equipment_report(&record.message)
            .iter()
            .flatten()
            .filter(|e| normalize_item(e) == item)
            .count() as u32;
        if have < want {
            return Some(format!(
                "{speaker} claimed success on '{sub}' but reported only {have} {item} \
                 (needed {want}); judging the task failed."
            ));
        }
        return None;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comms::MessagePool;

    fn pool_with(lines: &[(&str, &str, String)]) -> Vec<MessageRecord> {
        let mut pool = MessagePool::default();
        for (i, (from, to, msg)) in lines.iter().enumerate() {
            pool.post(i as u64, AgentId::from(*from), AgentId::from(*to), msg.clone())
                .expect("post");
        }
        pool.records().to_vec()
    }

    #[test]
    fn start_only_is_unknown() {
        let records = pool_with(&[(
            "workerA",
            "manager",
            protocol::start_task("mine 17 stones"),
        )]);
        let j = monitor_progress("mine 17 stones", &records, None).expect("judge");
        assert_eq!(j.status, TaskStatus::Unknown);
    }

    #[test]
    fn ack_only_is_unknown() {
        let records = pool_with(&[("workerA", "manager", protocol::ACK.to_string())]);
        let j = monitor_progress("mine 17 stones", &records, None).expect("judge");
        assert_eq!(j.status, TaskStatus::Unknown);
        assert!(j.rationale.contains("no outcome"));
    }

    #[test]
    fn success_claim_is_success() {
        let records = pool_with(&[(
            "workerA",
            "manager",
            protocol::succeeded_task("mine 17 stones"),
        )]);
        let j = monitor_progress("mine 17 stones", &records, None).expect("judge");
        assert_eq!(j.status, TaskStatus::Success);
    }

    #[test]
    fn failure_claim_is_fail() {
        let records = pool_with(&[(
            "workerA",
            "manager",
            protocol::failed_task("mine 17 stones"),
        )]);
        let j = monitor_progress("mine 17 stones", &records, None).expect("judge");
        assert_eq!(j.status, TaskStatus::Fail);
    }

    #[test]
    fn success_contradicted_by_inventory_is_fail() {
        let mut inv = Inventory::new();
        inv.insert("log".to_string(), 3);
        let records = pool_with(&[
            (
                "workerA",
                "manager",
                protocol::succeeded_task("craft 1 wooden_pickaxe"),
            ),
            (
                "workerA",
                "manager",
                protocol::inventory_report(&inv, &[None, None, None, None, None, None]),
            ),
        ]);
        let j = monitor_progress("craft 1 wooden_pickaxe", &records, None).expect("judge");
        assert_eq!(j.status, TaskStatus::Fail);
        assert!(j.rationale.contains("claimed success"));
    }

    #[test]
    fn equipped_product_counts_against_contradiction() {
        let inv = Inventory::new();
        let equipment = [
            Some("wooden_pickaxe".to_string()),
            None,
            None,
            None,
            None,
            None,
        ];
        let records = pool_with(&[
            (
                "workerA",
                "manager",
                protocol::succeeded_task("craft 1 wooden_pickaxe"),
            ),
            (
                "workerA",
                "manager",
                protocol::inventory_report(&inv, &equipment),
            ),
        ]);
        let j = monitor_progress("craft 1 wooden_pickaxe", &records, None).expect("judge");
        assert_eq!(j.status, TaskStatus::Success);
    }

    #[test]
    fn chest_contents_satisfy_collection() {
        let mut chest = Inventory::new();
        chest.insert("stone".to_string(), 20);
        let j = monitor_progress("mine 17 stones", &[], Some(&chest)).expect("judge");
        assert_eq!(j.status, TaskStatus::Success);
        assert!(j.rationale.contains("chest"));
    }

    #[test]
    fn later_claim_overrides_earlier() {
        let records = pool_with(&[
            (
                "workerA",
                "manager",
                protocol::failed_task("mine 17 stones"),
            ),
            (
                "workerA",
                "manager",
                protocol::succeeded_task("mine 17 stones"),
            ),
        ]);
        let j = monitor_progress("mine 17 stones", &records, None).expect("judge");
        assert_eq!(j.status, TaskStatus::Success);
    }

    #[test]
    fn unrelated_claims_ignored() {
        let records = pool_with(&[(
            "workerA",
            "manager",
            protocol::succeeded_task("mine 3 logs"),
        )]);
        let j = monitor_progress("mine 17 stones", &records, None).expect("judge");
        assert_eq!(j.status, TaskStatus::Unknown);
    }

    #[test]
    fn empty_task_rejected() {
        assert_eq!(
            monitor_progress("  ", &[], None),
            Err(PlanError::EmptyTask)
        );
    }

    #[test]
    fn stage_reports_per_agent_status() {
        let stage = Stage {
            label: "Gather stones".to_string(),
            assignments: vec![
                super::super::Assignment {
                    agent: AgentId::from("workerA"),
                    description: "workerA mines 17 stones.".to_string(),
                },
                super::super::Assignment {
                    agent: AgentId::from("workerB"),
                    description: "workerB mines 16 stones.".to_string(),
                },
            ],
        };
        let records = pool_with(&[(
            "workerA",
            "manager",
            protocol::succeeded_task("mine 17 stones"),
        )]);
        let (judgment, per_agent) = monitor_stage(&stage, &records, None);
        assert_eq!(judgment.status, TaskStatus::Unknown);
        assert_eq!(per_agent[&AgentId::from("workerA")], TaskStatus::Success);
        assert_eq!(per_agent[&AgentId::from("workerB")], TaskStatus::Unknown);
    }

    /// Brute-force oracle for single-claim transcripts: classify by the
    /// last protocol phrase alone, then compare with the monitor.
    #[test]
    fn matches_bruteforce_on_single_task_transcripts() {
        let task = "mine 17 stones";
        let phrase_sets: Vec<Vec<String>> = vec![
            vec![protocol::ACK.to_string()],
            vec![protocol::start_task(task)],
            vec![protocol::start_task(task), protocol::succeeded_task(task)],
            vec![protocol::start_task(task), protocol::failed_task(task)],
            vec![
                protocol::failed_task(task),
                protocol::start_task(task),
                protocol::succeeded_task(task),
            ],
        ];
        for phrases in phrase_sets {
            let mut expected = TaskStatus::Unknown;
            for p in &phrases {
                if protocol::task_of_success(p).is_some() {
                    expected = TaskStatus::Success;
                } else if protocol::task_of_failure(p).is_some() {
                    expected = TaskStatus::Fail;
                }
            }
            let records = pool_with(
                &phrases
                    .iter()
                    .map(|p| ("workerA", "manager", p.clone()))
                    .collect::<Vec<_>>(),
            );
            let j = monitor_progress(task, &records, None).expect("judge");
            assert_eq!(j.status, expected, "transcript {phrases:?}");
        }
    }
}
