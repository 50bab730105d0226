//! World configuration: terrain parameters, tick costs, the block
//! registry and the recipe table. Everything lives in one document so a
//! run can be reproduced from config + seed alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::WorldError;

pub mod items {
    pub const LOG: &str = "log";
    pub const STONE: &str = "stone";
    pub const IRON_ORE: &str = "iron_ore";
    pub const DIRT: &str = "dirt";
    pub const GRASS: &str = "grass";
    pub const PLANK: &str = "plank";
    pub const STICK: &str = "stick";
    pub const CRAFTING_TABLE: &str = "crafting_table";
    pub const WOODEN_PICKAXE: &str = "wooden_pickaxe";
    pub const STONE_PICKAXE: &str = "stone_pickaxe";
    pub const FURNACE: &str = "furnace";
    pub const IRON: &str = "iron";
    pub const PLANK_BLOCK: &str = "plank_block";
    pub const CHEST: &str = "chest";
}

/// Tool tiers forming the tech-tree ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToolTier {
    Hand,
    Wooden,
    Stone,
    Iron,
}

/// Per-block-kind registry entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockSpec {
    /// Ticks to mine one block of this kind.
    pub mine_ticks: u64,
    /// Minimum tool tier required to mine it.
    pub required_tier: ToolTier,
    /// Item yielded when mined.
    pub yields: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Station {
    CraftingTable,
    Furnace,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Recipe {
    pub output: (String, u32),
    pub inputs: Vec<(String, u32)>,
    #[serde(default)]
    pub station: Option<Station>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TickCosts {
    pub move_per_block: u64,
    pub craft: u64,
    pub smelt: u64,
    pub place: u64,
    pub message: u64,
    pub planning: u64,
    pub poll: u64,
    /// Wandering cost charged when a block search comes up empty.
    pub scout: u64,
}

impl Default for TickCosts {
    fn default() -> Self {
        Self {
            move_per_block: 1,
            craft: 10,
            smelt: 10,
            place: 2,
            message: 1,
            planning: 30,
            poll: 30,
            scout: 120,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorldConfig {
    /// Terrain spans x,z in [-half_extent, half_extent].
    pub half_extent: i32,
    pub surface_y: i32,
    pub min_y: i32,
    pub max_y: i32,
    /// Number of stone layers starting two blocks below the surface.
    pub stone_layers: i32,
    pub tree_count: u32,
    pub logs_per_tree: u32,
    pub iron_vein_count: u32,
    pub iron_vein_size: u32,
    /// Veins are scattered at this radial distance band from the origin.
    pub iron_min_distance: f64,
    pub iron_max_distance: f64,
    pub perception_radius: i32,
    /// Block searches (mining targets) look this far from the agent.
    pub search_radius: i32,
    /// MoveTo beyond this distance is Unreachable.
    pub travel_limit: i32,
    pub biome: String,
    pub tick_costs: TickCosts,
    pub blocks: BTreeMap<String, BlockSpec>,
    pub recipes: Vec<Recipe>,
    /// Items that count as tools, with their tier.
    pub tools: BTreeMap<String, ToolTier>,
    /// Item consumed when placing a given block kind.
    pub block_items: BTreeMap<String, String>,
}

impl Default for WorldConfig {
    fn default() -> Self {
        use items::*;
        let mut blocks = BTreeMap::new();
        blocks.insert(
            GRASS.to_string(),
            BlockSpec { mine_ticks: 10, required_tier: ToolTier::Hand, yields: DIRT.into() },
        );
        blocks.insert(
            DIRT.to_string(),
            BlockSpec { mine_ticks: 10, required_tier: ToolTier::Hand, yields: DIRT.into() },
        );
        blocks.insert(
            LOG.to_string(),
            BlockSpec { mine_ticks: 20, required_tier: ToolTier::Hand, yields: LOG.into() },
        );
        blocks.insert(
            STONE.to_string(),
            BlockSpec { mine_ticks: 30, required_tier: ToolTier::Wooden, yields: STONE.into() },
        );
        blocks.insert(
            IRON_ORE.to_string(),
            BlockSpec { mine_ticks: 60, required_tier: ToolTier::Stone, yields: IRON_ORE.into() },
        );
        blocks.insert(
            PLANK_BLOCK.to_string(),
            BlockSpec { mine_ticks: 15, required_tier: ToolTier::Hand, yields: PLANK.into() },
        );

        let recipes = vec![
            Recipe { output: (PLANK.into(), 4), inputs: vec![(LOG.into(), 1)], station: None },
            Recipe { output: (STICK.into(), 4), inputs: vec![(PLANK.into(), 2)], station: None },
            Recipe {
                output: (CRAFTING_TABLE.into(), 1),
                inputs: vec![(PLANK.into(), 4)],
                station: None,
            },
            Recipe {
                output: (WOODEN_PICKAXE.into(), 1),
                inputs: vec![(PLANK.into(), 3), (STICK.into(), 2)],
                station: Some(Station::CraftingTable),
            },
            Recipe {
                output: (STONE_PICKAXE.into(), 1),
                inputs: vec![(STONE.into(), 3), (STICK.into(), 2)],
                station: Some(Station::CraftingTable),
            },
            Recipe {
                output: (FURNACE.into(), 1),
                inputs: vec![(STONE.into(), 8)],
                station: Some(Station::CraftingTable),
            },
            Recipe {
                output: (IRON.into(), 1),
                inputs: vec![(IRON_ORE.into(), 1)],
                station: Some(Station::Furnace),
            },
        ];

        let mut tools = BTreeMap::new();
        tools.insert(WOODEN_PICKAXE.to_string(), ToolTier::Wooden);
        tools.insert(STONE_PICKAXE.to_string(), ToolTier::Stone);

        let mut block_items = BTreeMap::new();
        block_items.insert(PLANK_BLOCK.to_string(), PLANK.to_string());
        block_items.insert(STONE.to_string(), STONE.to_string());
        block_items.insert(DIRT.to_string(), DIRT.to_string());
        block_items.insert(CRAFTING_TABLE.to_string(), CRAFTING_TABLE.to_string());

        Self {
            half_extent: 48,
            surface_y: 64,
            min_y: 0,
            max_y: 128,
            stone_layers: 3,
            tree_count: 40,
            logs_per_tree: 4,
            iron_vein_count: 3,
            iron_vein_size: 5,
            iron_min_distance: 10.0,
            iron_max_distance: 40.0,
            perception_radius: 16,
            search_radius: 32,
            travel_limit: 256,
            biome: "plains".into(),
            tick_costs: TickCosts::default(),
            blocks,
            recipes,
            tools,
            block_items,
        }
    }
}

impl WorldConfig {
    pub fn validate(&self) -> Result<(), WorldError> {
        if self.half_extent <= 0 {
            return Err(WorldError::InvalidConfig("half_extent must be positive".into()));
        }
        if self.min_y >= self.max_y || self.surface_y <= self.min_y || self.surface_y >= self.max_y {
            return Err(WorldError::InvalidConfig("y bounds must bracket the surface".into()));
        }
        if self.stone_layers < 0 {
            return Err(WorldError::InvalidConfig("stone_layers must be non-negative".into()));
        }
        for r in &self.recipes {
            if r.inputs.is_empty() || r.output.1 == 0 || r.inputs.iter().any(|(_, c)| *c == 0) {
                return Err(WorldError::InvalidConfig(format!(
                    "recipe for {} has empty inputs or zero counts",
                    r.output.0
                )));
            }
        }
        Ok(())
    }

    pub fn recipe_for(&self, item: &str) -> Option<&Recipe> {
        self.recipes.iter().find(|r| r.output.0 == item)
    }

    pub fn from_toml(text: &str) -> Result<Self, WorldError> {
        toml::from_str(text).map_err(|e| WorldError::InvalidConfig(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, WorldError> {
        serde_json::from_str(text).map_err(|e| WorldError::InvalidConfig(e.to_string()))
    }
}

/// Canonicalize the item/block spellings that appear in plans and chat
/// ("woods", "stones", "irons", ...).
pub fn normalize_item(raw: &str) -> String {
    let lower = raw.trim().to_lowercase().replace(' ', "_");
    match lower.as_str() {
        "wood" | "woods" | "logs" => items::LOG.into(),
        "stones" => items::STONE.into(),
        "iron" | "irons" | "iron_ores" => items::IRON_ORE.into(),
        "planks" | "wooden_planks" | "wooden_plank" => items::PLANK.into(),
        "sticks" => items::STICK.into(),
        // Generic plural: "furnaces", "walls", "zombies".
        _ if lower.ends_with('s') && !lower.ends_with("ss") => {
            lower[..lower.len() - 1].to_string()
        }
        _ => lower,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        WorldConfig::default().validate().unwrap();
    }

    #[test]
    fn plank_recipe_matches_tech_tree() {
        let cfg = WorldConfig::default();
        let r = cfg.recipe_for(items::PLANK).unwrap();
        assert_eq!(r.output.1, 4);
        assert_eq!(r.inputs, vec![(items::LOG.to_string(), 1)]);
    }

    #[test]
    fn item_normalization() {
        assert_eq!(normalize_item("woods"), "log");
        assert_eq!(normalize_item("Stones"), "stone");
        assert_eq!(normalize_item("irons"), "iron_ore");
        assert_eq!(normalize_item("wooden pickaxe"), "wooden_pickaxe");
        assert_eq!(normalize_item("grass"), "grass");
    }

    #[test]
    fn toml_round_trip() {
        let cfg = WorldConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back = WorldConfig::from_toml(&text).unwrap();
        assert_eq!(back.tree_count, cfg.tree_count);
        assert_eq!(back.recipes.len(), cfg.recipes.len());
    }
}
