//! Executable world primitives and their tick accounting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::org_graph::AgentId;

use super::config::Station;
use super::{Position, World, WorldError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Primitive {
    MoveTo(Position),
    MineBlock { kind: String, count: u32 },
    CraftItem { item: String, count: u32 },
    SmeltItem { item: String, count: u32 },
    PlaceBlock { kind: String, pos: Position },
    GiveItem { target: AgentId, item: String, count: u32 },
    Equip { item: String },
    DepositChest { pos: Position, item: String, count: u32 },
}

impl std::fmt::Display for Primitive {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Primitive::MoveTo(p) => write!(f, "move_to {p}"),
            Primitive::MineBlock { kind, count } => write!(f, "mine {count} {kind}"),
            Primitive::CraftItem { item, count } => write!(f, "craft {count} {item}"),
            Primitive::SmeltItem { item, count } => write!(f, "smelt {count} {item}"),
            Primitive::PlaceBlock { kind, pos } => write!(f, "place {kind} at {pos}"),
            Primitive::GiveItem { target, item, count } => {
                write!(f, "give {count} {item} to {target}")
            }
            Primitive::Equip { item } => write!(f, "equip {item}"),
            Primitive::DepositChest { pos, item, count } => {
                write!(f, "deposit {count} {item} at {pos}")
            }
        }
    }
}

/// Result of executing one primitive. Failed primitives still consume
/// the ticks spent before the failure (travel, scouting).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionOutcome {
    pub ticks: u64,
    pub transcript: String,
    pub failure: Option<WorldError>,
}

impl ActionOutcome {
    fn ok(ticks: u64, transcript: String) -> Self {
        Self { ticks, transcript, failure: None }
    }

    fn fail(ticks: u64, err: WorldError) -> Self {
        Self { ticks, transcript: format!("failed: {err}"), failure: Some(err) }
    }

    pub fn is_success(&self) -> bool {
        self.failure.is_none()
    }
}

/// Seed-driven injector replacing primitives with no-op failures,
/// emulating open-world mishaps (getting lost, obstructions).
#[derive(Debug, Clone)]
pub struct FailureInjector {
    rate: f64,
    penalty_ticks: u64,
    rng: ChaCha8Rng,
}

impl FailureInjector {
    pub fn new(rate: f64, penalty_ticks: u64, seed: u64) -> Self {
        Self { rate, penalty_ticks, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// When triggered, returns the no-op failure outcome to use instead.
    pub fn intercept(&mut self) -> Option<ActionOutcome> {
        if self.rate > 0.0 && self.rng.gen_bool(self.rate.clamp(0.0, 1.0)) {
            Some(ActionOutcome::fail(
                self.penalty_ticks,
                WorldError::Unreachable("got lost on the way".into()),
            ))
        } else {
            None
        }
    }
}

fn travel_ticks(world: &World, from: &Position, to: &Position) -> u64 {
    from.distance(to).ceil() as u64 * world.config.tick_costs.move_per_block
}

fn has_station(world: &World, agent: &AgentId, station: &Station) -> bool {
    let body = &world.bodies[agent];
    let item = match station {
        Station::CraftingTable => super::items::CRAFTING_TABLE,
        Station::Furnace => super::items::FURNACE,
    };
    body.total_including_equipment(item) > 0
        || world
            .state
            .nearest_block(item, &body.position, world.config.search_radius as f64)
            .is_some()
}

/// Deterministic wander target used when a block search finds nothing:
/// one of eight compass directions chosen from (agent, clock).
fn scout_move(world: &mut World, agent: &AgentId) {
    let body = world.bodies.get_mut(agent).expect("checked");
    let mut h: u64 = world.state.clock.wrapping_mul(0x9e3779b97f4a7c15);
    for b in agent.key().bytes() {
        h = h.wrapping_mul(31).wrapping_add(b as u64);
    }
    let dir = (h % 8) as i32;
    let step = world.config.search_radius;
    let (dx, dz) = match dir {
        0 => (step, 0),
        1 => (step, step),
        2 => (0, step),
        3 => (-step, step),
        4 => (-step, 0),
        5 => (-step, -step),
        6 => (0, -step),
        _ => (step, -step),
    };
    let h_ext = world.config.half_extent;
    body.position.x = (body.position.x + dx).clamp(-h_ext, h_ext);
    body.position.z = (body.position.z + dz).clamp(-h_ext, h_ext);
}

/// Execute one primitive on behalf of `agent`, mutating world and body.
/// Returns Err only when the agent itself is unknown; in-world failures
/// are reported inside the outcome so the caller can account for time.
pub fn execute_primitive(
    world: &mut World,
    agent: &AgentId,
    primitive: &Primitive,
) -> Result<ActionOutcome, WorldError> {
    if !world.bodies.contains_key(agent) {
        return Err(WorldError::UnknownAgent(agent.to_string()));
    }
    let outcome = match primitive {
        Primitive::MoveTo(pos) => move_to(world, agent, pos),
        Primitive::MineBlock { kind, count } => mine(world, agent, kind, *count),
        Primitive::CraftItem { item, count } => {
            craft(world, agent, item, *count, world.config.tick_costs.craft)
        }
        Primitive::SmeltItem { item, count } => {
            craft(world, agent, item, *count, world.config.tick_costs.smelt)
        }
        Primitive::PlaceBlock { kind, pos } => place(world, agent, kind, pos),
        Primitive::GiveItem { target, item, count } => give(world, agent, target, item, *count),
        Primitive::Equip { item } => equip(world, agent, item),
        Primitive::DepositChest { pos, item, count } => deposit(world, agent, pos, item, *count),
    };
    world.advance_clock(outcome.ticks);
    Ok(outcome)
}

fn move_to(world: &mut World, agent: &AgentId, pos: &Position) -> ActionOutcome {
    let from = world.bodies[agent].position;
    let dist = from.distance(pos);
    if dist > world.config.travel_limit as f64 {
        return ActionOutcome::fail(0, WorldError::Unreachable(format!("{pos} beyond travel limit")));
    }
    let ticks = travel_ticks(world, &from, pos);
    world.bodies.get_mut(agent).unwrap().position = *pos;
    ActionOutcome::ok(ticks, format!("moved to {pos}"))
}

fn mine(world: &mut World, agent: &AgentId, kind: &str, count: u32) -> ActionOutcome {
    let spec = match world.config.blocks.get(kind) {
        Some(s) => s.clone(),
        None => {
            return ActionOutcome::fail(0, WorldError::TargetNotFound(format!("unknown block {kind}")))
        }
    };
    let tier = world.bodies[agent].equipped_tier(&world.config);
    if tier < spec.required_tier {
        return ActionOutcome::fail(0, WorldError::NoTool(kind.to_string()));
    }
    let radius = world.config.search_radius as f64;
    let mut ticks = 0u64;
    let mut mined = 0u32;
    while mined < count {
        let from = world.bodies[agent].position;
        let target = match world.state.nearest_minable(kind, &from, radius) {
            Some(t) => t,
            None => {
                // Nothing in range: wander to a new spot and report failure.
                ticks += world.config.tick_costs.scout;
                scout_move(world, agent);
                let mut out = ActionOutcome::fail(
                    ticks,
                    WorldError::TargetNotFound(format!("no {kind} within search radius")),
                );
                if mined > 0 {
                    out.transcript = format!("mined {mined}/{count} {kind}, then ran out of targets");
                }
                return out;
            }
        };
        ticks += travel_ticks(world, &from, &target);
        ticks += spec.mine_ticks;
        world.state.remove_block(&target);
        let body = world.bodies.get_mut(agent).unwrap();
        body.position.x = target.x;
        body.position.z = target.z;
        body.add_item(&spec.yields, 1);
        mined += 1;
    }
    ActionOutcome::ok(ticks, format!("mined {count} {kind}"))
}

fn craft(world: &mut World, agent: &AgentId, item: &str, count: u32, cost: u64) -> ActionOutcome {
    let recipe = match world.config.recipe_for(item) {
        Some(r) => r.clone(),
        None => {
            return ActionOutcome::fail(0, WorldError::NoMaterials(format!("no recipe for {item}")))
        }
    };
    if count == 0 {
        return ActionOutcome::ok(0, format!("crafted 0 {item}"));
    }
    if let Some(station) = &recipe.station {
        if !has_station(world, agent, station) {
            return ActionOutcome::fail(
                0,
                WorldError::NoMaterials(format!("no {:?} available for {item}", station)),
            );
        }
    }
    let times = count.div_ceil(recipe.output.1);
    let body = world.bodies.get_mut(agent).unwrap();
    for (input, n) in &recipe.inputs {
        if body.count(input) < n * times {
            return ActionOutcome::fail(
                0,
                WorldError::NoMaterials(format!("need {} {input} to craft {count} {item}", n * times)),
            );
        }
    }
    for (input, n) in &recipe.inputs {
        body.remove_item(input, n * times).expect("checked above");
    }
    let produced = recipe.output.1 * times;
    body.add_item(item, produced);
    ActionOutcome::ok(cost * times as u64, format!("crafted {produced} {item}"))
}

fn place(world: &mut World, agent: &AgentId, kind: &str, pos: &Position) -> ActionOutcome {
    let h = world.config.half_extent;
    if pos.x.abs() > h || pos.z.abs() > h || pos.y < world.config.min_y || pos.y > world.config.max_y {
        return ActionOutcome::fail(0, WorldError::BadTarget(format!("{pos} out of bounds")));
    }
    if world.state.block_at(pos).is_some() {
        return ActionOutcome::fail(0, WorldError::BadTarget(format!("{pos} is occupied")));
    }
    let item = world
        .config
        .block_items
        .get(kind)
        .cloned()
        .unwrap_or_else(|| kind.to_string());
    let from = world.bodies[agent].position;
    let ticks = travel_ticks(world, &from, pos) + world.config.tick_costs.place;
    let body = world.bodies.get_mut(agent).unwrap();
    if let Err(e) = body.remove_item(&item, 1) {
        return ActionOutcome::fail(0, e);
    }
    body.position.x = pos.x;
    body.position.z = pos.z;
    world.state.insert_block(*pos, kind.to_string());
    ActionOutcome::ok(ticks, format!("placed {kind} at {pos}"))
}

fn give(
    world: &mut World,
    agent: &AgentId,
    target: &AgentId,
    item: &str,
    count: u32,
) -> ActionOutcome {
    if agent == target {
        return ActionOutcome::fail(0, WorldError::BadTarget("cannot give to self".into()));
    }
    let target_pos = match world.bodies.get(target) {
        Some(b) => b.position,
        None => return ActionOutcome::fail(0, WorldError::BadTarget(format!("no such agent {target}"))),
    };
    let from = world.bodies[agent].position;
    let ticks = travel_ticks(world, &from, &target_pos);
    {
        let giver = world.bodies.get_mut(agent).unwrap();
        if let Err(e) = giver.remove_item(item, count) {
            return ActionOutcome::fail(0, e);
        }
        giver.position = target_pos;
    }
    world.bodies.get_mut(target).unwrap().add_item(item, count);
    ActionOutcome::ok(ticks, format!("gave {count} {item} to {target}"))
}

fn equip(world: &mut World, agent: &AgentId, item: &str) -> ActionOutcome {
    let body = world.bodies.get_mut(agent).unwrap();
    if let Err(e) = body.remove_item(item, 1) {
        return ActionOutcome::fail(0, e);
    }
    let slot = body.equipment.iter().position(|s| s.is_none()).unwrap_or(0);
    if let Some(old) = body.equipment[slot].take() {
        body.add_item(&old, 1);
    }
    body.equipment[slot] = Some(item.to_string());
    ActionOutcome::ok(1, format!("equipped {item}"))
}

fn deposit(
    world: &mut World,
    agent: &AgentId,
    pos: &Position,
    item: &str,
    count: u32,
) -> ActionOutcome {
    if !world.state.chests.contains_key(pos) {
        return ActionOutcome::fail(0, WorldError::TargetNotFound(format!("no chest at {pos}")));
    }
    let from = world.bodies[agent].position;
    let ticks = travel_ticks(world, &from, pos);
    let body = world.bodies.get_mut(agent).unwrap();
    if let Err(e) = body.remove_item(item, count) {
        return ActionOutcome::fail(0, e);
    }
    body.position.x = pos.x;
    body.position.z = pos.z;
    let chest = world.state.chests.get_mut(pos).unwrap();
    *chest.entry(item.to_string()).or_insert(0) += count;
    ActionOutcome::ok(ticks, format!("deposited {count} {item} at {pos}"))
}
