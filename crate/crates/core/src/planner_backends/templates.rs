//! Prompt templates. Placeholders are `{snake_case}` names; rendering
//! fails when a placeholder has no bound slot. Braces not forming a
//! placeholder (inventory literals, coordinates) pass through verbatim.

use std::collections::BTreeMap;

use super::BackendError;

#[derive(Debug, Clone)]
pub struct PromptTemplate {
    pub id: &'static str,
    pub text: &'static str,
}

impl PromptTemplate {
    pub fn render(&self, slots: &BTreeMap<String, String>) -> Result<String, BackendError> {
        let mut out = String::with_capacity(self.text.len());
        let mut chars = self.text.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c != '{' {
                out.push(c);
                continue;
            }
            // Try to read a placeholder name.
            let rest = &self.text[i + 1..];
            if let Some(end) = rest.find('}') {
                let name = &rest[..end];
                let is_ident = !name.is_empty()
                    && name.chars().next().is_some_and(|c| c.is_ascii_lowercase() || c == '_')
                    && name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
                if is_ident {
                    let value = slots.get(name).ok_or_else(|| {
                        BackendError::Template(format!(
                            "template '{}' has unbound placeholder '{{{name}}}'",
                            self.id
                        ))
                    })?;
                    out.push_str(value);
                    for _ in 0..=end {
                        chars.next();
                    }
                    continue;
                }
            }
            out.push(c);
        }
        Ok(out)
    }
}

/// Staged plan request for a group leader.
pub const TASK_ROOT: PromptTemplate = PromptTemplate {
    id: super::template_ids::TASK_ROOT,
    text: "You are {agent}, a playful Minecraft player and the leader of a team of \
{group_size} players in a {biome} biome. You employ the following players: {employment}.\n\
Current inventory of employers: {beliefs}\n\
Your own inventory is {inventory}, and your equipment is {equipment}.\n\
The objective given to you is: {objective}\n\
Blueprint for construction work (empty if none): {blueprint}\n\
Conversation so far:\n{conversation}\n\
Status of the assignments you handed out: {assignment_status}\n\
Previously, the task at hand was: {previous_task}\n\
Your progress judgment of it was: {judgment}\n\
Break the objective into stages, assign each player at most one task per stage, \
and never assign a task to yourself unless you are also a worker. Respond exactly in \
the following format:\n\
Objective:\n<one line>\n\
Analysis:\n<one line>\n\
Long term plan:\nStage 1: <label>\n    <player>: <task>\n    ...\n\
The task at hand:\n<the single stage to execute now, or None>\n\
Informer is <the player who gave you the objective>",
};

/// Staged plan request for an individual worker.
pub const TASK_LEAF: PromptTemplate = PromptTemplate {
    id: super::template_ids::TASK_LEAF,
    text: "You are {agent}, a playful Minecraft player in a {biome} biome.\n\
My inventory is {inventory}, and my equipment is {equipment}.\n\
Nearby blocks: {nearby}\n\
Blueprint for construction work (empty if none): {blueprint}\n\
The task given to you is: {objective}\n\
Conversation so far:\n{conversation}\n\
Previously, the task at hand was: {previous_task}\n\
Your progress judgment of it was: {judgment}\n\
Work out which tools and intermediate items you still need, plan the stages to \
obtain them, and finish with the task itself. Respond exactly in the following \
format:\n\
Objective:\n<one line>\n\
Analysis:\n<one line>\n\
Long term plan:\nStage 1: <label>\n    <your name>: <task>\n    ...\n\
The task at hand:\n<the single stage to execute now, or None>\n\
Informer is <the player who gave you the task>",
};

/// Task-at-hand to executable todo list.
pub const ACTION: PromptTemplate = PromptTemplate {
    id: super::template_ids::ACTION,
    text: "You are {agent}. Translate the task at hand into a todo list.\n\
The task at hand is:\n{task}\n\
You may only use these verbs: Mine, Craft, Smelt, Kill, Cook, Equip, Build, Give, \
MoveTo, and the delegation form 'inform <player> to <todo>'. Delegate exactly the \
tasks assigned to other players and keep your own tasks as plain todos.\n\
Respond with a JSON array of strings and nothing else.",
};

/// Progress judgment over the recent conversation.
pub const MONITOR: PromptTemplate = PromptTemplate {
    id: super::template_ids::MONITOR,
    text: "You are {agent}. Decide the progress status of the task below from the \
conversation. A task is successful when its outcome was reported and not \
contradicted by a later inventory report; it failed when a failure was reported \
or a success claim is contradicted; otherwise it is unknown.\n\
The task: {task}\n\
Conversation records (JSON): {conversation_json}\n\
Shared chest contents (JSON, empty if none): {chest_json}\n\
Respond exactly with two lines:\nStatus: <success|fail|unknown>\nRationale: <one line>",
};

pub fn by_id(id: &str) -> Option<&'static PromptTemplate> {
    match id {
        super::template_ids::TASK_ROOT => Some(&TASK_ROOT),
        super::template_ids::TASK_LEAF => Some(&TASK_LEAF),
        super::template_ids::ACTION => Some(&ACTION),
        super::template_ids::MONITOR => Some(&MONITOR),
        _ => None,
    }
}
