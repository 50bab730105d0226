//! Shared message pool: the single mutable structure agents share.
//! Appends are totally ordered by (time, sequence); nothing is ever
//! removed or rewritten.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::org_graph::AgentId;
use crate::world::Inventory;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CommsError {
    #[error("agent {0} cannot message itself")]
    SelfMessage(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageRecord {
    pub time: u64,
    pub seq: u64,
    pub speaker: AgentId,
    pub respondent: AgentId,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MessagePool {
    records: Vec<MessageRecord>,
}

/// Read position of one agent into the pool.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConversationCursor {
    pub owner: AgentId,
    pub last_seen: u64,
}

impl ConversationCursor {
    pub fn new(owner: AgentId) -> Self {
        Self { owner, last_seen: 0 }
    }
}

impl MessagePool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn post(
        &mut self,
        time: u64,
        speaker: AgentId,
        respondent: AgentId,
        message: impl Into<String>,
    ) -> Result<&MessageRecord, CommsError> {
        if speaker == respondent {
            return Err(CommsError::SelfMessage(speaker.to_string()));
        }
        let seq = self.records.len() as u64 + 1;
        self.records.push(MessageRecord {
            time,
            seq,
            speaker,
            respondent,
            message: message.into(),
        });
        Ok(self.records.last().expect("just pushed"))
    }

    pub fn records(&self) -> &[MessageRecord] {
        &self.records
    }

    /// Records involving `cursor.owner` newer than the cursor, grouped per
    /// counterpart; advances the cursor past everything returned.
    pub fn conversation_since(
        &self,
        cursor: &mut ConversationCursor,
    ) -> Vec<(AgentId, Vec<MessageRecord>)> {
        let mut grouped: BTreeMap<AgentId, Vec<MessageRecord>> = BTreeMap::new();
        for rec in &self.records {
            if rec.seq <= cursor.last_seen {
                continue;
            }
            let counterpart = if rec.speaker == cursor.owner {
                rec.respondent.clone()
            } else if rec.respondent == cursor.owner {
                rec.speaker.clone()
            } else {
                continue;
            };
            grouped.entry(counterpart).or_default().push(rec.clone());
        }
        if let Some(last) = self.records.last() {
            cursor.last_seen = last.seq;
        }
        grouped.into_iter().collect()
    }

    /// All records involving `owner`, regardless of any cursor.
    pub fn involving(&self, owner: &AgentId) -> Vec<MessageRecord> {
        self.records
            .iter()
            .filter(|r| &r.speaker == owner || &r.respondent == owner)
            .cloned()
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            out.push_str(&serde_json::to_string(rec).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

/// 60 ticks equal one simulated minute; one tick is one second.
pub fn ticks_to_clock(ticks: u64) -> String {
    let h = ticks / 3600;
    let m = (ticks % 3600) / 60;
    let s = ticks % 60;
    format!("{h:02}:{m:02}:{s:02}")
}

/// One line per record: `-[HH:MM:SS]<speaker> says: '<message>'`.
pub fn render_transcript(records: &[MessageRecord]) -> String {
    records
        .iter()
        .map(|r| format!("-[{}]{} says: '{}'", ticks_to_clock(r.time), r.speaker, r.message))
        .collect::<Vec<_>>()
        .join("\n")
}

/// The grouped transcript shape used in planner prompts.
pub fn render_grouped(owner: &AgentId, groups: &[(AgentId, Vec<MessageRecord>)]) -> String {
    groups
        .iter()
        .map(|(counterpart, records)| {
            format!(
                "The conversation between {counterpart} and {owner}\n{}",
                render_transcript(records)
            )
        })
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Protocol vocabulary shared by the rule-based monitor and the prompt
/// templates.
pub mod protocol {
    use super::Inventory;

    pub const ACK: &str = "Got it!";

    pub fn start_task(task: &str) -> String {
        format!("I'll start the task {task} now")
    }

    pub fn succeeded_task(task: &str) -> String {
        format!("I have succeeded the task {task}.")
    }

    pub fn failed_task(task: &str) -> String {
        format!("I have failed the task {task}.")
    }

    pub fn instruction(target_display: &str, todo: &str) -> String {
        format!("{target_display}, please {todo}")
    }

    /// `my inventory is {'log': 3}, and my equipment is [None, ...] `
    pub fn inventory_report(inventory: &Inventory, equipment: &[Option<String>]) -> String {
        let inv = if inventory.is_empty() {
            "{}".to_string()
        } else {
            let fields: Vec<String> =
                inventory.iter().map(|(k, v)| format!("'{k}': {v}")).collect();
            format!("{{{}}}", fields.join(", "))
        };
        let eq: Vec<String> = equipment
            .iter()
            .map(|slot| match slot {
                Some(item) => format!("'{item}'"),
                None => "None".to_string(),
            })
            .collect();
        format!("my inventory is {inv}, and my equipment is [{}] ", eq.join(", "))
    }

    pub fn task_of_start(message: &str) -> Option<&str> {
        message
            .strip_prefix("I'll start the task ")
            .and_then(|rest| rest.strip_suffix(" now"))
    }

    pub fn task_of_success(message: &str) -> Option<&str> {
        message
            .strip_prefix("I have succeeded the task ")
            .map(|rest| rest.strip_suffix('.').unwrap_or(rest))
    }

    pub fn task_of_failure(message: &str) -> Option<&str> {
        message
            .strip_prefix("I have failed the task ")
            .map(|rest| rest.strip_suffix('.').unwrap_or(rest))
    }

    pub fn instruction_of(message: &str) -> Option<&str> {
        message.split_once(", please ").map(|(_, todo)| todo)
    }

    /// Parse a python-style inventory report back into a map.
    pub fn parse_inventory_report(message: &str) -> Option<Inventory> {
        let rest = message.strip_prefix("my inventory is ")?;
        let open = rest.find('{')?;
        let close = rest.find('}')?;
        let body = &rest[open + 1..close];
        let mut inv = Inventory::new();
        for pair in body.split(',') {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let (key, value) = pair.split_once(':')?;
            let key = key.trim().trim_matches('\'').trim_matches('"');
            let value: u32 = value.trim().parse().ok()?;
            inv.insert(key.to_string(), value);
        }
        Some(inv)
    }

    /// Equipment list from a report: `['wooden_pickaxe', None, ...]`.
    pub fn parse_equipment_report(message: &str) -> Vec<Option<String>> {
        let Some(idx) = message.find("my equipment is [") else {
            return Vec::new();
        };
        let rest = &message[idx + "my equipment is [".len()..];
        let Some(close) = rest.find(']') else {
            return Vec::new();
        };
        rest[..close]
            .split(',')
            .map(|slot| {
                let slot = slot.trim().trim_matches('\'').trim_matches('"');
                if slot == "None" || slot.is_empty() {
                    None
                } else {
                    Some(slot.to_string())
                }
            })
            .collect()
    }
}
