//! Grammar for natural-language todo strings.
//!
//! Shape: `[inform <agent> to ] <verb> [<quantity>] [<item>] [at (x,y,z)]
//! [to <agent>]`. Verbs accept third-person conjugation ("mines"),
//! quantities accept "a"/"an" for one, and trailing parentheticals such
//! as "(use 48 planks)" are ignored.

use crate::org_graph::AgentId;
use crate::world::config::normalize_item;
use crate::world::Position;

use super::{ActionBody, AgentAction, PlanError, Verb};

const VERBS: &[(&str, Verb)] = &[
    ("mine", Verb::Mine),
    ("craft", Verb::Craft),
    ("smelt", Verb::Smelt),
    ("kill", Verb::Kill),
    ("cook", Verb::Cook),
    ("equip", Verb::Equip),
    ("build", Verb::Build),
    ("give", Verb::Give),
    ("move", Verb::MoveTo),
];

fn verb_of(token: &str) -> Option<Verb> {
    let t = token.to_ascii_lowercase();
    for (kw, v) in VERBS {
        if t == *kw || t == format!("{kw}s") {
            return Some(*v);
        }
    }
    None
}

/// Splits on whitespace, keeping parenthesised groups as one token.
fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_position(token: &str) -> Option<Position> {
    let inner = token.trim().strip_prefix('(')?.strip_suffix(')')?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return None;
    }
    let x = parts[0].parse().ok()?;
    let y = parts[1].parse().ok()?;
    let z = parts[2].parse().ok()?;
    Some(Position { x, y, z })
}

fn strip_word_punct(token: &str) -> &str {
    token.trim_matches(|c: char| matches!(c, '.' | ',' | '!' | '\'' | '"' | ';' | ':'))
}

/// Parses the body of a todo starting at its verb token.
fn parse_body(tokens: &[String], raw: &str) -> Result<ActionBody, PlanError> {
    let first = tokens
        .first()
        .ok_or_else(|| PlanError::MalformedTodo(raw.to_string()))?;
    let verb = verb_of(strip_word_punct(first))
        .ok_or_else(|| PlanError::UnknownVerb(raw.to_string()))?;
    let mut idx = 1;
    // "move to (x,y,z)": skip the connective.
    if verb == Verb::MoveTo && tokens.get(idx).map(|t| t.eq_ignore_ascii_case("to")) == Some(true) {
        idx += 1;
    }

    // Optional quantity; articles mean one, "the" means unspecified.
    let mut quantity = None;
    if let Some(tok) = tokens.get(idx) {
        let t = strip_word_punct(tok).to_ascii_lowercase();
        if t == "a" || t == "an" {
            quantity = Some(1);
            idx += 1;
        } else if t == "the" {
            idx += 1;
        } else if let Ok(n) = t.parse::<u32>() {
            quantity = Some(n);
            idx += 1;
        }
    }

    // Remaining tokens up to "at <pos>" / "to <agent>" name the item.
    let mut item_words: Vec<String> = Vec::new();
    let mut position = None;
    let mut target = None;
    while idx < tokens.len() {
        let tok = strip_word_punct(&tokens[idx]);
        let low = tok.to_ascii_lowercase();
        if low == "at" {
            if let Some(next) = tokens.get(idx + 1) {
                if let Some(pos) = parse_position(strip_word_punct(next)) {
                    position = Some(pos);
                    idx += 2;
                    continue;
                }
            }
            idx += 1;
            continue;
        }
        if low == "to" && verb == Verb::Give {
            if let Some(next) = tokens.get(idx + 1) {
                target = Some(AgentId::from(strip_word_punct(next)));
            }
            idx += 2;
            continue;
        }
        if tok.starts_with('(') {
            // A bare coordinate group is a position ("move to (x,y,z)");
            // anything else is an aside such as "(use 48 planks)".
            if position.is_none() {
                if let Some(pos) = parse_position(tok) {
                    position = Some(pos);
                }
            }
            idx += 1;
            continue;
        }
        if !tok.is_empty() {
            item_words.push(low);
        }
        idx += 1;
    }

    let item = if item_words.is_empty() {
        None
    } else {
        Some(item_words.join("_"))
    };

    match verb {
        Verb::MoveTo if position.is_none() => Err(PlanError::MissingPosition(raw.to_string())),
        Verb::Build if position.is_none() => Err(PlanError::MissingPosition(raw.to_string())),
        Verb::Give if target.is_none() || item.is_none() => {
            Err(PlanError::MalformedTodo(raw.to_string()))
        }
        Verb::Mine | Verb::Craft | Verb::Smelt | Verb::Kill | Verb::Cook | Verb::Equip
            if item.is_none() =>
        {
            Err(PlanError::MalformedTodo(raw.to_string()))
        }
        _ => Ok(ActionBody { verb, quantity, item, position, target }),
    }
}

/// Parses one todo string into an action.
pub fn parse_todo(raw: &str) -> Result<AgentAction, PlanError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(PlanError::EmptyTask);
    }
    let tokens = tokenize(trimmed);
    if tokens
        .first()
        .map(|t| strip_word_punct(t).eq_ignore_ascii_case("inform"))
        == Some(true)
    {
        // inform <agent> [to] <body>
        let target = tokens
            .get(1)
            .map(|t| AgentId::from(strip_word_punct(t)))
            .ok_or_else(|| PlanError::MalformedTodo(raw.to_string()))?;
        let mut rest = 2;
        if tokens.get(rest).map(|t| t.eq_ignore_ascii_case("to")) == Some(true) {
            rest += 1;
        }
        let inner = parse_body(&tokens[rest..], raw)?;
        return Ok(AgentAction::Delegate { target, inner });
    }
    Ok(AgentAction::Direct(parse_body(&tokens, raw)?))
}

/// Renders an action back into the todo grammar. Output is canonical:
/// `parse_todo(render_action(a)) == a` for any well-formed action.
pub fn render_action(action: &AgentAction) -> String {
    match action {
        AgentAction::Direct(body) => render_body(body),
        AgentAction::Delegate { target, inner } => {
            format!("inform {} to {}", target, render_body(inner))
        }
    }
}

fn render_body(body: &ActionBody) -> String {
    let mut out = String::new();
    out.push_str(body.verb.keyword());
    if let Some(q) = body.quantity {
        out.push_str(&format!(" {q}"));
    }
    if let Some(item) = &body.item {
        out.push(' ');
        out.push_str(item);
    }
    if body.verb == Verb::Give {
        if let Some(t) = &body.target {
            out.push_str(&format!(" to {t}"));
        }
    }
    if let Some(p) = &body.position {
        if body.verb == Verb::MoveTo {
            out.push_str(&format!(" {p}"));
        } else {
            out.push_str(&format!(" at {p}"));
        }
    }
    out
}

/// Lenient parse for task descriptions that embed a todo inside prose,
/// e.g. "workerA mines 17 stones." — scans for the first verb token.
pub fn extract_task_core(text: &str) -> Option<ActionBody> {
    let tokens = tokenize(text.trim());
    for start in 0..tokens.len() {
        if verb_of(strip_word_punct(&tokens[start])).is_some() {
            if let Ok(body) = parse_body(&tokens[start..], text) {
                return Some(body);
            }
        }
    }
    None
}

/// True when two task descriptions refer to the same work: same verb,
/// same normalized item, same quantity (missing quantity matches one).
pub fn task_matches(a: &str, b: &str) -> bool {
    match (extract_task_core(a), extract_task_core(b)) {
        (Some(x), Some(y)) => {
            let norm = |body: &ActionBody| {
                (
                    body.verb,
                    body.item.as_deref().map(normalize_item),
                    body.quantity.unwrap_or(1),
                )
            };
            norm(&x) == norm(&y)
        }
        _ => a.trim().eq_ignore_ascii_case(b.trim()),
    }
}
