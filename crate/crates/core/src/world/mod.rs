//! Deterministic tick-based crafting-world simulator.
//!
//! The world is a static block map plus per-agent bodies. Agents never
//! mutate it directly; the scheduler executes primitives on their behalf
//! in simulated-time order, so identical (seed, config, action sequence)
//! always reproduces the same state.

pub mod blueprint;
pub mod config;
mod gen;
mod primitives;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::org_graph::AgentId;
pub use config::{normalize_item, items, BlockSpec, Recipe, Station, TickCosts, ToolTier, WorldConfig};
pub use primitives::{execute_primitive, ActionOutcome, FailureInjector, Primitive};

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WorldError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("unknown agent: {0}")]
    UnknownAgent(String),
    #[error("no tool of required tier for {0}")]
    NoTool(String),
    #[error("missing materials: {0}")]
    NoMaterials(String),
    #[error("target not found: {0}")]
    TargetNotFound(String),
    #[error("unreachable: {0}")]
    Unreachable(String),
    #[error("bad target: {0}")]
    BadTarget(String),
}

/// Block coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Position {
    pub fn new(x: i32, y: i32, z: i32) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        let dx = (self.x - other.x) as f64;
        let dy = (self.y - other.y) as f64;
        let dz = (self.z - other.z) as f64;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

pub type Inventory = BTreeMap<String, u32>;

pub const EQUIPMENT_SLOTS: usize = 6;

/// An embodied agent: position, carried items and equipment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgentBody {
    pub owner: AgentId,
    pub position: Position,
    pub inventory: Inventory,
    pub equipment: [Option<String>; EQUIPMENT_SLOTS],
    pub health: u8,
    pub hunger: u8,
}

impl AgentBody {
    pub fn new(owner: AgentId, position: Position) -> Self {
        Self {
            owner,
            position,
            inventory: Inventory::new(),
            equipment: Default::default(),
            health: 20,
            hunger: 20,
        }
    }

    pub fn count(&self, item: &str) -> u32 {
        self.inventory.get(item).copied().unwrap_or(0)
    }

    pub fn add_item(&mut self, item: &str, count: u32) {
        if count > 0 {
            *self.inventory.entry(item.to_string()).or_insert(0) += count;
        }
    }

    /// Removes `count` of `item`; fails without mutating when short.
    pub fn remove_item(&mut self, item: &str, count: u32) -> Result<(), WorldError> {
        let have = self.count(item);
        if have < count {
            return Err(WorldError::NoMaterials(format!(
                "need {count} {item}, have {have}"
            )));
        }
        if have == count {
            self.inventory.remove(item);
        } else {
            self.inventory.insert(item.to_string(), have - count);
        }
        Ok(())
    }

    /// Best tool tier currently equipped.
    pub fn equipped_tier(&self, config: &WorldConfig) -> ToolTier {
        self.equipment
            .iter()
            .flatten()
            .filter_map(|item| config.tools.get(item).copied())
            .max()
            .unwrap_or(ToolTier::Hand)
    }

    /// Total of `item` across inventory and equipment slots.
    pub fn total_including_equipment(&self, item: &str) -> u32 {
        let equipped = self.equipment.iter().flatten().filter(|i| i.as_str() == item).count() as u32;
        self.count(item) + equipped
    }
}

/// JSON maps need string keys, so position-keyed maps serialize as
/// ordered lists of pairs.
mod position_map {
    use super::Position;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<V: Serialize, S: Serializer>(
        map: &BTreeMap<Position, V>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        ser.collect_seq(map.iter())
    }

    pub fn deserialize<'de, V: Deserialize<'de>, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<Position, V>, D::Error> {
        let pairs: Vec<(Position, V)> = Vec::deserialize(de)?;
        Ok(pairs.into_iter().collect())
    }
}

/// The block map and global clock.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorldState {
    #[serde(with = "position_map")]
    pub blocks: BTreeMap<Position, String>,
    #[serde(with = "position_map")]
    pub chests: BTreeMap<Position, Inventory>,
    pub clock: u64,
    pub biome: String,
    pub rng_seed: u64,
    /// Positions agents must not mine, e.g. a construction site: placed
    /// structures would otherwise be the nearest source of raw blocks.
    #[serde(default)]
    pub protected: std::collections::BTreeSet<Position>,
    /// Per-kind position index, kept in sync with `blocks`.
    #[serde(skip)]
    index: BTreeMap<String, std::collections::BTreeSet<Position>>,
}

impl WorldState {
    pub fn block_at(&self, pos: &Position) -> Option<&str> {
        self.blocks.get(pos).map(|s| s.as_str())
    }

    pub(crate) fn insert_block(&mut self, pos: Position, kind: String) {
        self.index.entry(kind.clone()).or_default().insert(pos);
        self.blocks.insert(pos, kind);
    }

    pub(crate) fn remove_block(&mut self, pos: &Position) -> Option<String> {
        let kind = self.blocks.remove(pos)?;
        if let Some(set) = self.index.get_mut(&kind) {
            set.remove(pos);
        }
        Some(kind)
    }

    pub fn count_blocks(&self, kind: &str) -> usize {
        self.index.get(kind).map(|s| s.len()).unwrap_or(0)
    }

    /// Nearest block of `kind` within `radius` of `from` (ties broken by
    /// coordinate order for determinism).
    pub fn nearest_block(&self, kind: &str, from: &Position, radius: f64) -> Option<Position> {
        let set = self.index.get(kind)?;
        let mut best: Option<(f64, Position)> = None;
        for pos in set {
            let d = pos.distance(from);
            if d <= radius {
                match &best {
                    Some((bd, _)) if *bd <= d => {}
                    _ => best = Some((d, *pos)),
                }
            }
        }
        best.map(|(_, p)| p)
    }

    /// Like [`nearest_block`](Self::nearest_block) but skips protected
    /// positions; used when choosing mining targets.
    pub fn nearest_minable(&self, kind: &str, from: &Position, radius: f64) -> Option<Position> {
        let set = self.index.get(kind)?;
        let mut best: Option<(f64, Position)> = None;
        for pos in set {
            if self.protected.contains(pos) {
                continue;
            }
            let d = pos.distance(from);
            if d <= radius {
                match &best {
                    Some((bd, _)) if *bd <= d => {}
                    _ => best = Some((d, *pos)),
                }
            }
        }
        best.map(|(_, p)| p)
    }

    pub(crate) fn rebuild_index(&mut self) {
        self.index.clear();
        for (pos, kind) in &self.blocks {
            self.index.entry(kind.clone()).or_default().insert(*pos);
        }
    }
}

/// A full simulation world: terrain plus agent bodies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct World {
    pub state: WorldState,
    pub bodies: BTreeMap<AgentId, AgentBody>,
    pub config: WorldConfig,
}

impl World {
    /// Deterministic terrain generation from a seed.
    pub fn generate(seed: u64, config: WorldConfig) -> Result<Self, WorldError> {
        config.validate()?;
        Ok(gen::generate(seed, config))
    }

    pub fn spawn(&mut self, owner: AgentId, position: Position) {
        self.bodies.insert(owner.clone(), AgentBody::new(owner, position));
    }

    pub fn body(&self, agent: &AgentId) -> Result<&AgentBody, WorldError> {
        self.bodies
            .get(agent)
            .ok_or_else(|| WorldError::UnknownAgent(agent.to_string()))
    }

    pub fn body_mut(&mut self, agent: &AgentId) -> Result<&mut AgentBody, WorldError> {
        self.bodies
            .get_mut(agent)
            .ok_or_else(|| WorldError::UnknownAgent(agent.to_string()))
    }

    /// Advance the clock; the world itself is static, so nothing else moves.
    pub fn advance_clock(&mut self, ticks: u64) {
        self.state.clock += ticks;
    }

    /// Total count of `item` across all agent inventories (incl. equipment)
    /// and chests.
    pub fn total_item(&self, item: &str) -> u32 {
        let carried: u32 = self
            .bodies
            .values()
            .map(|b| b.total_including_equipment(item))
            .sum();
        let chested: u32 = self
            .state
            .chests
            .values()
            .map(|inv| inv.get(item).copied().unwrap_or(0))
            .sum();
        carried + chested
    }

    /// Content hash over the full serialized state (clock excluded so the
    /// hash reflects material state, not elapsed time).
    pub fn state_hash(&self) -> String {
        let mut clone = self.clone();
        clone.state.clock = 0;
        let json = serde_json::to_vec(&clone).expect("world serializes");
        let mut hasher = Sha256::new();
        hasher.update(&json);
        format!("{:x}", hasher.finalize())
    }

    pub fn snapshot_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("world serializes")
    }
}

/// An agent's view of the world, limited to the perception radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerceptionSnapshot {
    pub inventory: Inventory,
    pub equipment: Vec<Option<String>>,
    /// Block kinds within the radius, with the nearest representative
    /// position of each.
    pub nearby_blocks: BTreeMap<String, Position>,
    pub biome: String,
    pub time: u64,
    pub health: u8,
    pub hunger: u8,
    pub position: Position,
    pub nearby_chest_contents: Option<Inventory>,
}

/// Pure read of world + body; never mutates either.
pub fn perceive(world: &World, agent: &AgentId) -> Result<PerceptionSnapshot, WorldError> {
    let body = world.body(agent)?;
    let radius = world.config.perception_radius as f64;
    let mut nearby_blocks = BTreeMap::new();
    for kind in world.state.index.keys() {
        if let Some(pos) = world.state.nearest_block(kind, &body.position, radius) {
            nearby_blocks.insert(kind.clone(), pos);
        }
    }
    let nearby_chest_contents = world
        .state
        .chests
        .iter()
        .find(|(pos, _)| pos.distance(&body.position) <= radius)
        .map(|(_, inv)| inv.clone());
    Ok(PerceptionSnapshot {
        inventory: body.inventory.clone(),
        equipment: body.equipment.to_vec(),
        nearby_blocks,
        biome: world.state.biome.clone(),
        time: world.state.clock,
        health: body.health,
        hunger: body.hunger,
        position: body.position,
        nearby_chest_contents,
    })
}
