//! Seeded terrain generation: flat grass plain, shallow stone layer,
//! scattered trees and a few iron veins at a configurable distance band.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::items;
use super::{Position, World, WorldConfig, WorldState};

pub(super) fn generate(seed: u64, config: WorldConfig) -> World {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = WorldState {
        blocks: BTreeMap::new(),
        chests: BTreeMap::new(),
        clock: 0,
        biome: config.biome.clone(),
        rng_seed: seed,
        protected: Default::default(),
        index: BTreeMap::new(),
    };

    let h = config.half_extent;
    let s = config.surface_y;
    for x in -h..=h {
        for z in -h..=h {
            state.blocks.insert(Position::new(x, s, z), items::GRASS.into());
            state.blocks.insert(Position::new(x, s - 1, z), items::DIRT.into());
            for layer in 0..config.stone_layers {
                state
                    .blocks
                    .insert(Position::new(x, s - 2 - layer, z), items::STONE.into());
            }
        }
    }

    // Trees: vertical log trunks at distinct surface positions.
    let mut trunk_spots = std::collections::BTreeSet::new();
    while (trunk_spots.len() as u32) < config.tree_count {
        let x = rng.gen_range(-h..=h);
        let z = rng.gen_range(-h..=h);
        trunk_spots.insert((x, z));
    }
    // Insertion order from the set is coordinate-sorted, hence deterministic.
    for (x, z) in trunk_spots {
        for dy in 1..=config.logs_per_tree as i32 {
            state.blocks.insert(Position::new(x, s + dy, z), items::LOG.into());
        }
    }

    // Iron veins: ore clusters replacing stone, placed on a radial band.
    for _ in 0..config.iron_vein_count {
        let angle = rng.gen_range(0.0..TAU);
        let dist = rng.gen_range(config.iron_min_distance..=config.iron_max_distance);
        let cx = ((angle.cos() * dist).round() as i32).clamp(-h, h);
        let cz = ((angle.sin() * dist).round() as i32).clamp(-h, h);
        let mut placed = 0u32;
        let mut offset = 0i32;
        while placed < config.iron_vein_size && offset <= h {
            let x = (cx + offset).clamp(-h, h);
            let pos = Position::new(x, s - 2, cz);
            if state.blocks.get(&pos).map(|k| k == items::STONE).unwrap_or(false) {
                state.blocks.insert(pos, items::IRON_ORE.into());
                placed += 1;
            }
            offset += 1;
        }
    }

    state.rebuild_index();
    World { state, bodies: BTreeMap::new(), config }
}
