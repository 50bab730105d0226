//! Shelter geometry: foundation, walls and roof cells derived from an
//! origin, a footprint and a wall height.

use serde::{Deserialize, Serialize};

use super::config::items;
use super::Position;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShelterPart {
    Foundation,
    Walls,
    Roof,
}

impl std::fmt::Display for ShelterPart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ShelterPart::Foundation => "foundation",
            ShelterPart::Walls => "walls",
            ShelterPart::Roof => "roof",
        };
        f.write_str(s)
    }
}

impl ShelterPart {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_lowercase().as_str() {
            "foundation" => Some(ShelterPart::Foundation),
            "walls" | "wall" => Some(ShelterPart::Walls),
            "roof" | "ceiling" => Some(ShelterPart::Roof),
            _ => None,
        }
    }

    pub fn material(&self) -> &'static str {
        match self {
            ShelterPart::Foundation | ShelterPart::Roof => items::STONE,
            ShelterPart::Walls => items::PLANK_BLOCK,
        }
    }
}

/// Cell layout of the shelter: stone foundation slab, plank wall rings on
/// the footprint perimeter, stone roof slab above the walls.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShelterBlueprint {
    pub origin: Position,
    pub footprint: (i32, i32),
    pub wall_height: i32,
    pub foundation: Vec<Position>,
    pub walls: Vec<Position>,
    pub roof: Vec<Position>,
}

impl ShelterBlueprint {
    pub fn new(origin: Position, footprint: (i32, i32), wall_height: i32) -> Self {
        let (w, d) = footprint;
        let mut foundation = Vec::new();
        let mut walls = Vec::new();
        let mut roof = Vec::new();
        for dx in 0..w {
            for dz in 0..d {
                foundation.push(Position::new(origin.x + dx, origin.y, origin.z + dz));
                roof.push(Position::new(
                    origin.x + dx,
                    origin.y + wall_height + 1,
                    origin.z + dz,
                ));
                let perimeter = dx == 0 || dz == 0 || dx == w - 1 || dz == d - 1;
                if perimeter {
                    for dy in 1..=wall_height {
                        walls.push(Position::new(origin.x + dx, origin.y + dy, origin.z + dz));
                    }
                }
            }
        }
        Self { origin, footprint, wall_height, foundation, walls, roof }
    }

    pub fn cells(&self, part: ShelterPart) -> &[Position] {
        match part {
            ShelterPart::Foundation => &self.foundation,
            ShelterPart::Walls => &self.walls,
            ShelterPart::Roof => &self.roof,
        }
    }

    /// Which part a cell belongs to, if any.
    pub fn part_of(&self, pos: &Position) -> Option<ShelterPart> {
        for part in [ShelterPart::Foundation, ShelterPart::Walls, ShelterPart::Roof] {
            if self.cells(part).contains(pos) {
                return Some(part);
            }
        }
        None
    }

    pub fn total_cells(&self) -> usize {
        self.foundation.len() + self.walls.len() + self.roof.len()
    }
}
