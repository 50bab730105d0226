//! Deterministic scripted planner. Reads the structured slots of each
//! request, computes a plan with fixed policies (largest-remainder work
//! splits, tech-tree preparation, fail-driven reallocation) and emits it
//! in the same canonical text format a remote model is prompted for.

use std::collections::BTreeMap;

use crate::comms::MessageRecord;
use crate::hourglass::{
    extract_task_core, monitor_progress, render_action, render_plan_text, ActionBody,
    AgentAction, Assignment, PlanState, Stage, TaskStatus, Verb,
};
use crate::org_graph::AgentId;
use crate::world::blueprint::{ShelterBlueprint, ShelterPart};
use crate::world::config::{items, normalize_item, Station, ToolTier};
use crate::world::{Inventory, Position, WorldConfig};

use super::{template_ids, Backend, BackendError, BackendRequest, BackendResponse};

/// Splits `total` into `parts` integer shares by the largest-remainder
/// rule; earlier (lexicographically first) positions receive the extras.
pub fn largest_remainder(total: u32, parts: usize) -> Vec<u32> {
    if parts == 0 {
        return Vec::new();
    }
    let parts_u = parts as u32;
    let base = total / parts_u;
    let rem = (total % parts_u) as usize;
    (0..parts).map(|i| if i < rem { base + 1 } else { base }).collect()
}

const PREPARE_LABEL: &str = "Prepare tools and materials";
const EXECUTE_LABEL: &str = "Execute the task";
const SELF_LABEL: &str = "Collect own share";
const DELEGATE_LABEL: &str = "Delegate the remainder";

pub struct ScriptedOracle {
    config: WorldConfig,
}

impl ScriptedOracle {
    pub fn new(config: WorldConfig) -> Self {
        Self { config }
    }
}

impl Backend for ScriptedOracle {
    fn name(&self) -> &str {
        "oracle"
    }

    fn complete(&mut self, request: &BackendRequest) -> Result<BackendResponse, BackendError> {
        let text = match request.template_id.as_str() {
            template_ids::TASK_ROOT => plan_root(&self.config, request)?,
            template_ids::TASK_LEAF => plan_leaf(&self.config, request)?,
            template_ids::ACTION => actions(request)?,
            template_ids::MONITOR => monitor(request)?,
            other => {
                return Err(BackendError::Template(format!("unknown template id '{other}'")))
            }
        };
        Ok(BackendResponse { text })
    }
}

fn slot_json<T: serde::de::DeserializeOwned>(
    request: &BackendRequest,
    key: &str,
) -> Result<T, BackendError> {
    serde_json::from_str(request.slot(key))
        .map_err(|e| BackendError::Template(format!("slot '{key}' malformed: {e}")))
}

fn slot_json_or<T: serde::de::DeserializeOwned + Default>(request: &BackendRequest, key: &str) -> T {
    serde_json::from_str(request.slot(key)).unwrap_or_default()
}

fn objective_core(request: &BackendRequest) -> Result<ActionBody, BackendError> {
    extract_task_core(request.slot("objective")).ok_or_else(|| {
        BackendError::Template(format!(
            "objective '{}' is not an executable task",
            request.slot("objective")
        ))
    })
}

// ---------------------------------------------------------------------
// Monitor: the scripted judgment is exactly the rule-based monitor.
// ---------------------------------------------------------------------

fn monitor(request: &BackendRequest) -> Result<String, BackendError> {
    let records: Vec<MessageRecord> = slot_json(request, "conversation_json")?;
    let chest: Option<Inventory> = slot_json_or(request, "chest_json");
    // With stage structure available, judge each assignment against its
    // own agent's messages; otherwise judge the flat task text.
    let judgment = if request.slot("stage_json").is_empty() {
        monitor_progress(request.slot("task"), &records, chest.as_ref())
            .map_err(|e| BackendError::Template(e.to_string()))?
    } else {
        let stage: Stage = slot_json(request, "stage_json")?;
        crate::hourglass::monitor_stage(&stage, &records, chest.as_ref()).0
    };
    Ok(format!("Status: {}\nRationale: {}", judgment.status, judgment.rationale))
}

// ---------------------------------------------------------------------
// Action translation: assignments to self stay direct (quantities cut
// down to what is still outstanding for the instructed task); other
// agents' assignments become delegation messages.
// ---------------------------------------------------------------------

fn actions(request: &BackendRequest) -> Result<String, BackendError> {
    let stage: Stage = slot_json(request, "stage_json")?;
    let me = AgentId::from(request.slot("agent"));
    let objective = request.slot("objective");
    let inventory: Inventory = slot_json_or(request, "inventory");
    let mut todos = Vec::new();
    for a in &stage.assignments {
        if a.agent == me {
            let Some(mut core) = extract_task_core(&a.description) else {
                return Err(BackendError::Template(format!(
                    "assignment '{}' is not an executable task",
                    a.description
                )));
            };
            if matches!(core.verb, Verb::Mine | Verb::Craft | Verb::Smelt)
                && crate::hourglass::task_matches(&a.description, objective)
            {
                let item = core.item.as_deref().map(normalize_item).unwrap_or_default();
                let have = inventory.get(&item).copied().unwrap_or(0);
                let want = core.quantity.unwrap_or(1);
                if have >= want {
                    continue;
                }
                core.quantity = Some(want - have);
            }
            todos.push(render_action(&AgentAction::Direct(core)));
        } else {
            let core = extract_task_core(&a.description).map(AgentAction::Direct);
            let rendered = match core {
                Some(action) => render_action(&action),
                None => a.description.clone(),
            };
            todos.push(format!("inform {} to {}", a.agent, rendered));
        }
    }
    Ok(serde_json::to_string(&todos).expect("todos serialize"))
}

// ---------------------------------------------------------------------
// Root planning: collection splits, shelter staging, chain relay.
// ---------------------------------------------------------------------

fn plan_root(config: &WorldConfig, request: &BackendRequest) -> Result<String, BackendError> {
    let structure = request.slot("structure").to_string();
    let plan = if structure == "chain" {
        plan_chain(request)?
    } else {
        let core = objective_core(request)?;
        let is_shelter = core.verb == Verb::Build
            || request.slot("objective").to_lowercase().contains("shelter");
        if is_shelter {
            plan_shelter_root(config, request)?
        } else {
            plan_collection_root(request)?
        }
    };
    Ok(render_plan_text(&plan))
}

fn participants(request: &BackendRequest) -> Result<Vec<AgentId>, BackendError> {
    let employment: Vec<String> = slot_json(request, "employment")?;
    let me = AgentId::from(request.slot("agent"));
    let include_self = request.slot("include_self") == "true";
    let mut out: Vec<AgentId> = employment.iter().map(|s| AgentId::from(s.as_str())).collect();
    if include_self {
        out.push(me);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn statuses(request: &BackendRequest) -> BTreeMap<AgentId, TaskStatus> {
    let raw: BTreeMap<String, TaskStatus> = slot_json_or(request, "assignment_status");
    raw.into_iter().map(|(k, v)| (AgentId::from(k.as_str()), v)).collect()
}

fn believed_count(request: &BackendRequest, who: &AgentId, item: &str) -> u32 {
    let me = AgentId::from(request.slot("agent"));
    if *who == me {
        let inv: Inventory = slot_json_or(request, "inventory");
        return inv.get(item).copied().unwrap_or(0);
    }
    let beliefs: BTreeMap<String, Inventory> = slot_json_or(request, "beliefs");
    beliefs
        .iter()
        .find(|(k, _)| AgentId::from(k.as_str()) == *who)
        .and_then(|(_, inv)| inv.get(item).copied())
        .unwrap_or(0)
}

fn plan_collection_root(request: &BackendRequest) -> Result<PlanState, BackendError> {
    let core = objective_core(request)?;
    let noun = core.item.clone().unwrap_or_else(|| "items".into());
    let item = normalize_item(&noun);
    let total = core.quantity.unwrap_or(1);
    let workers = participants(request)?;
    if workers.is_empty() {
        return Err(BackendError::Template("no workers to plan for".into()));
    }

    let collected: u32 = workers.iter().map(|w| believed_count(request, w, &item)).sum();
    let remaining = total.saturating_sub(collected);
    let status_map = statuses(request);
    let informer = Some(AgentId::from(request.slot("informer")));

    let label = format!("Gather {noun}");
    if remaining == 0 {
        return Ok(PlanState {
            objective: request.slot("objective").to_string(),
            analysis: format!("All {total} {noun} are collected; nothing remains."),
            long_term_plan: vec![Stage { label, assignments: vec![] }],
            task_at_hand: None,
            informer,
            inventory_beliefs: BTreeMap::new(),
        });
    }

    // Reallocation policy: once outcomes diverge, hand the remainder to
    // the agents that proved able to do the work; otherwise retry the
    // failed ones; with no reports yet, use everyone.
    let succeeded: Vec<AgentId> = workers
        .iter()
        .filter(|w| status_map.get(w) == Some(&TaskStatus::Success))
        .cloned()
        .collect();
    let failed: Vec<AgentId> = workers
        .iter()
        .filter(|w| status_map.get(w) == Some(&TaskStatus::Fail))
        .cloned()
        .collect();
    let active: Vec<AgentId> = if status_map.is_empty() {
        workers.clone()
    } else if !succeeded.is_empty() && !failed.is_empty() {
        succeeded
    } else if !failed.is_empty() {
        failed
    } else {
        workers.clone()
    };

    // Each worker's task states the absolute target for its own
    // inventory (current holdings plus its share of the remainder), so
    // completion can be judged from an inventory count alone.
    let shares = largest_remainder(remaining, active.len());
    let assignments: Vec<Assignment> = active
        .iter()
        .zip(shares.iter())
        .filter(|(_, share)| **share > 0)
        .map(|(w, share)| {
            let target = believed_count(request, w, &item) + share;
            Assignment {
                agent: w.clone(),
                description: format!("mine {target} {noun}"),
            }
        })
        .collect();
    let stage = Stage { label, assignments };
    Ok(PlanState {
        objective: request.slot("objective").to_string(),
        analysis: format!(
            "Split the remaining {remaining} {noun} over {} players by largest remainder.",
            active.len()
        ),
        long_term_plan: vec![stage.clone()],
        task_at_hand: Some(stage),
        informer,
        inventory_beliefs: BTreeMap::new(),
    })
}

fn plan_chain(request: &BackendRequest) -> Result<PlanState, BackendError> {
    let core = objective_core(request)?;
    let noun = core.item.clone().unwrap_or_else(|| "items".into());
    let item = normalize_item(&noun);
    let total = core.quantity.unwrap_or(1);
    let downstream: usize = request.slot("downstream").parse().unwrap_or(0);
    let employment: Vec<String> = slot_json_or(request, "employment");
    let successor = employment.first().map(|s| AgentId::from(s.as_str()));
    let me = AgentId::from(request.slot("agent"));
    let informer = Some(AgentId::from(request.slot("informer")));

    let shares = largest_remainder(total, downstream + 1);
    let my_share = shares.first().copied().unwrap_or(total);
    let rest = total - my_share;
    let inv: Inventory = slot_json_or(request, "inventory");
    let have = inv.get(&item).copied().unwrap_or(0);

    let self_stage = Stage {
        label: SELF_LABEL.into(),
        assignments: vec![Assignment {
            agent: me.clone(),
            description: format!("mine {my_share} {noun}"),
        }],
    };
    let delegate_stage = successor.as_ref().filter(|_| rest > 0).map(|next| {
        // Absolute target for the successor's own inventory.
        let target = believed_count(request, next, &item) + rest;
        Stage {
            label: DELEGATE_LABEL.into(),
            assignments: vec![Assignment {
                agent: next.clone(),
                description: format!("mine {target} {noun}"),
            }],
        }
    });

    let delegated_done = request.slot("previous_label") == DELEGATE_LABEL
        && request.slot("judgment") == "success";
    let task_at_hand = if have < my_share {
        Some(self_stage.clone())
    } else if let Some(stage) = delegate_stage.clone().filter(|_| !delegated_done) {
        Some(stage)
    } else {
        None
    };

    let mut long_term_plan = vec![self_stage];
    long_term_plan.extend(delegate_stage);
    Ok(PlanState {
        objective: request.slot("objective").to_string(),
        analysis: format!(
            "Keep {my_share} {noun} as my own share and relay the remaining {rest} down the chain."
        ),
        long_term_plan,
        task_at_hand,
        informer,
        inventory_beliefs: BTreeMap::new(),
    })
}

fn plan_shelter_root(config: &WorldConfig, request: &BackendRequest) -> Result<PlanState, BackendError> {
    let blueprint: ShelterBlueprint = slot_json(request, "blueprint")?;
    let workers = participants(request)?;
    if workers.is_empty() {
        return Err(BackendError::Template("no workers to plan for".into()));
    }
    let informer = Some(AgentId::from(request.slot("informer")));
    // Stone work (foundation and roof) goes to the last worker, wall
    // work to the preceding ones, so material pipelines don't collide.
    let stone_worker = workers.last().expect("non-empty").clone();
    let plank_workers: Vec<AgentId> = if workers.len() > 1 {
        workers[..workers.len() - 1].to_vec()
    } else {
        workers.clone()
    };
    let origin = blueprint.origin;
    let build_todo = |part: ShelterPart, origin: Position| format!("build {part} at {origin}");
    let _ = config;

    let stages = vec![
        Stage {
            label: "Build the foundation".into(),
            assignments: vec![Assignment {
                agent: stone_worker.clone(),
                description: build_todo(ShelterPart::Foundation, origin),
            }],
        },
        Stage {
            label: "Build the walls".into(),
            assignments: plank_workers
                .iter()
                .map(|w| Assignment {
                    agent: w.clone(),
                    description: build_todo(ShelterPart::Walls, origin),
                })
                .collect(),
        },
        Stage {
            label: "Build the roof".into(),
            assignments: vec![Assignment {
                agent: stone_worker,
                description: build_todo(ShelterPart::Roof, origin),
            }],
        },
    ];

    let previous_label = request.slot("previous_label");
    let judgment = request.slot("judgment");
    let idx = stages.iter().position(|s| s.label == previous_label);
    let task_at_hand = match idx {
        None => Some(stages[0].clone()),
        Some(i) if judgment == "success" => stages.get(i + 1).cloned(),
        Some(i) => Some(stages[i].clone()),
    };

    Ok(PlanState {
        objective: request.slot("objective").to_string(),
        analysis: "Build bottom-up: stone foundation, plank walls, stone roof.".into(),
        long_term_plan: stages,
        task_at_hand,
        informer,
        inventory_beliefs: BTreeMap::new(),
    })
}

// ---------------------------------------------------------------------
// Leaf planning: tech-tree preparation derived from the recipe registry
// plus the instructed task itself.
// ---------------------------------------------------------------------

fn plan_leaf(config: &WorldConfig, request: &BackendRequest) -> Result<String, BackendError> {
    let me = AgentId::from(request.slot("agent"));
    let core = objective_core(request)?;
    let inventory: Inventory = slot_json_or(request, "inventory");
    let equipment: Vec<Option<String>> = slot_json_or(request, "equipment");
    let nearby: BTreeMap<String, Position> = slot_json_or(request, "nearby");
    let blueprint: Option<ShelterBlueprint> = if request.slot("blueprint").is_empty() {
        None
    } else {
        Some(slot_json(request, "blueprint")?)
    };
    let informer = Some(AgentId::from(request.slot("informer")));
    let objective = request.slot("objective").to_string();

    let finished_by_report = request.slot("previous_label") == EXECUTE_LABEL
        && request.slot("judgment") == "success";
    let finished_by_count = match core.verb {
        Verb::Mine | Verb::Craft | Verb::Smelt => {
            let item = core.item.as_deref().map(normalize_item).unwrap_or_default();
            inventory.get(&item).copied().unwrap_or(0) >= core.quantity.unwrap_or(1)
        }
        _ => false,
    };

    let final_todo = render_action(&AgentAction::Direct(core.clone()));
    let prep = if finished_by_report || finished_by_count {
        Vec::new()
    } else {
        preparation_todos(config, &core, &inventory, &equipment, &nearby, blueprint.as_ref())?
    };

    let mut stages = Vec::new();
    if !prep.is_empty() {
        stages.push(Stage {
            label: PREPARE_LABEL.into(),
            assignments: prep
                .into_iter()
                .map(|t| Assignment { agent: me.clone(), description: t })
                .collect(),
        });
    }
    stages.push(Stage {
        label: EXECUTE_LABEL.into(),
        assignments: vec![Assignment { agent: me.clone(), description: final_todo }],
    });

    let task_at_hand = if finished_by_report || finished_by_count {
        None
    } else {
        stages.first().cloned()
    };
    let plan = PlanState {
        objective,
        analysis: "Acquire any missing tools and materials, then carry out the task.".into(),
        long_term_plan: stages,
        task_at_hand,
        informer,
        inventory_beliefs: BTreeMap::new(),
    };
    Ok(render_plan_text(&plan))
}

fn equipped_tier(config: &WorldConfig, equipment: &[Option<String>]) -> ToolTier {
    equipment
        .iter()
        .flatten()
        .filter_map(|item| config.tools.get(item).copied())
        .max()
        .unwrap_or(ToolTier::Hand)
}

/// Computes the ordered list of preparation todos (tool tech tree plus
/// raw materials) needed before the instructed task can run.
fn preparation_todos(
    config: &WorldConfig,
    core: &ActionBody,
    inventory: &Inventory,
    equipment: &[Option<String>],
    nearby: &BTreeMap<String, Position>,
    blueprint: Option<&ShelterBlueprint>,
) -> Result<Vec<String>, BackendError> {
    let mut avail = inventory.clone();
    let mut demand: BTreeMap<String, u32> = BTreeMap::new();
    let mut tier_required = ToolTier::Hand;
    let have_tier = equipped_tier(config, equipment);
    let table_nearby = nearby.contains_key(items::CRAFTING_TABLE);
    let furnace_nearby = nearby.contains_key(items::FURNACE);
    let mut need_table = false;
    let mut need_furnace = false;

    let add_demand = |demand: &mut BTreeMap<String, u32>, item: &str, n: u32| {
        *demand.entry(item.to_string()).or_insert(0) += n;
    };

    // Seed demands from the instructed task.
    match core.verb {
        Verb::Mine => {
            let kind = normalize_item(core.item.as_deref().unwrap_or(""));
            if let Some(spec) = config.blocks.get(&kind) {
                tier_required = spec.required_tier;
            }
        }
        Verb::Craft | Verb::Smelt => {
            let item = normalize_item(core.item.as_deref().unwrap_or(""));
            let want = core.quantity.unwrap_or(1);
            let have = avail.get(&item).copied().unwrap_or(0);
            if have < want {
                if let Some(recipe) = config.recipe_for(&item) {
                    let batches = (want - have).div_ceil(recipe.output.1);
                    for (input, count) in &recipe.inputs {
                        add_demand(&mut demand, input, count * batches);
                    }
                    match recipe.station {
                        Some(Station::CraftingTable) => need_table = true,
                        Some(Station::Furnace) => need_furnace = true,
                        None => {}
                    }
                }
            }
        }
        Verb::Build => {
            let part = core
                .item
                .as_deref()
                .and_then(ShelterPart::parse)
                .ok_or_else(|| BackendError::Template("build task names no shelter part".into()))?;
            let bp = blueprint
                .ok_or_else(|| BackendError::Template("build task without blueprint".into()))?;
            let material_block = part.material();
            let material_item = config
                .block_items
                .get(material_block)
                .cloned()
                .unwrap_or_else(|| material_block.to_string());
            add_demand(&mut demand, &material_item, bp.cells(part).len() as u32);
        }
        Verb::Give => {
            let item = normalize_item(core.item.as_deref().unwrap_or(""));
            add_demand(&mut demand, &item, core.quantity.unwrap_or(1));
        }
        Verb::Equip => {
            let item = normalize_item(core.item.as_deref().unwrap_or(""));
            add_demand(&mut demand, &item, 1);
        }
        Verb::Kill | Verb::Cook | Verb::MoveTo => {}
    }

    // Smelting inputs that must be mined can raise the tier requirement.
    if demand.get(items::IRON_ORE).copied().unwrap_or(0)
        > avail.get(items::IRON_ORE).copied().unwrap_or(0)
    {
        tier_required = tier_required.max(ToolTier::Stone);
    }

    // How much of `item` still has to be produced, consuming stock.
    let outstanding = |avail: &mut Inventory, demand: &BTreeMap<String, u32>, item: &str| {
        let want = demand.get(item).copied().unwrap_or(0);
        let stock = avail.entry(item.to_string()).or_insert(0);
        let cover = (*stock).min(want);
        *stock -= cover;
        want - cover
    };

    let mut make: BTreeMap<String, u32> = BTreeMap::new();
    let mut equip_stone = false;
    let mut equip_wood = false;

    // Stone pickaxe chain.
    if tier_required >= ToolTier::Stone && have_tier < ToolTier::Stone {
        equip_stone = true;
        add_demand(&mut demand, items::STONE_PICKAXE, 1);
    }
    let n = outstanding(&mut avail, &demand, items::STONE_PICKAXE);
    if n > 0 {
        make.insert(items::STONE_PICKAXE.into(), n);
        add_demand(&mut demand, items::STONE, 3 * n);
        add_demand(&mut demand, items::STICK, 2 * n);
        need_table = true;
    }

    // Furnace chain.
    if need_furnace && !furnace_nearby {
        add_demand(&mut demand, items::FURNACE, 1);
    }
    let n = outstanding(&mut avail, &demand, items::FURNACE);
    if n > 0 {
        make.insert(items::FURNACE.into(), n);
        add_demand(&mut demand, items::STONE, 8 * n);
        need_table = true;
    }

    // Wooden pickaxe chain: needed for any outstanding stone.
    let stone_short = demand.get(items::STONE).copied().unwrap_or(0)
        > avail.get(items::STONE).copied().unwrap_or(0);
    if (stone_short || tier_required == ToolTier::Wooden) && have_tier < ToolTier::Wooden {
        equip_wood = true;
        add_demand(&mut demand, items::WOODEN_PICKAXE, 1);
    }
    let n = outstanding(&mut avail, &demand, items::WOODEN_PICKAXE);
    if n > 0 {
        make.insert(items::WOODEN_PICKAXE.into(), n);
        add_demand(&mut demand, items::PLANK, 3 * n);
        add_demand(&mut demand, items::STICK, 2 * n);
        need_table = true;
    }

    // Crafting table.
    if need_table && !table_nearby {
        add_demand(&mut demand, items::CRAFTING_TABLE, 1);
    }
    let n = outstanding(&mut avail, &demand, items::CRAFTING_TABLE);
    if n > 0 {
        make.insert(items::CRAFTING_TABLE.into(), n);
        add_demand(&mut demand, items::PLANK, 4 * n);
    }

    // Sticks.
    let n = outstanding(&mut avail, &demand, items::STICK);
    if n > 0 {
        let batches = n.div_ceil(4);
        make.insert(items::STICK.into(), batches * 4);
        add_demand(&mut demand, items::PLANK, 2 * batches);
    }

    // Planks.
    let n = outstanding(&mut avail, &demand, items::PLANK);
    if n > 0 {
        let batches = n.div_ceil(4);
        make.insert(items::PLANK.into(), batches * 4);
        add_demand(&mut demand, items::LOG, batches);
    }

    // Raw blocks.
    let n = outstanding(&mut avail, &demand, items::LOG);
    if n > 0 {
        make.insert(items::LOG.into(), n);
    }
    let n = outstanding(&mut avail, &demand, items::STONE);
    if n > 0 {
        make.insert(items::STONE.into(), n);
    }
    let n = outstanding(&mut avail, &demand, items::IRON_ORE);
    if n > 0 {
        make.insert(items::IRON_ORE.into(), n);
    }

    // Emit in execution order: wood, planks, sticks, table, wooden
    // pickaxe, stone work, stone pickaxe, furnace, iron.
    let mut todos = Vec::new();
    if let Some(n) = make.get(items::LOG) {
        todos.push(format!("mine {n} logs"));
    }
    if let Some(n) = make.get(items::PLANK) {
        todos.push(format!("craft {n} planks"));
    }
    if let Some(n) = make.get(items::STICK) {
        todos.push(format!("craft {n} sticks"));
    }
    if let Some(n) = make.get(items::CRAFTING_TABLE) {
        todos.push(format!("craft {n} crafting_table"));
    }
    if let Some(n) = make.get(items::WOODEN_PICKAXE) {
        todos.push(format!("craft {n} wooden_pickaxe"));
    }
    if equip_wood {
        todos.push("equip wooden_pickaxe".to_string());
    }
    if let Some(n) = make.get(items::STONE) {
        todos.push(format!("mine {n} stones"));
    }
    if let Some(n) = make.get(items::STONE_PICKAXE) {
        todos.push(format!("craft {n} stone_pickaxe"));
    }
    if equip_stone {
        todos.push("equip stone_pickaxe".to_string());
    }
    if let Some(n) = make.get(items::FURNACE) {
        todos.push(format!("craft {n} furnace"));
    }
    if let Some(n) = make.get(items::IRON_ORE) {
        todos.push(format!("mine {n} iron_ores"));
    }
    Ok(todos)
}
