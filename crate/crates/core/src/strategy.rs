use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enclosure::{ExtensionOrder, KrawczykVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("unknown strategy {0}, expected 1, 2, 3 or 4")]
pub struct UnknownStrategy(pub u8);

/// Pairing of a range extension with a Krawczyk variant used by the
/// exclusion and certification tests.
///
/// | id | range test            | Krawczyk |
/// |----|-----------------------|----------|
/// | 1  | natural ∩ order 2     | order 2  |
/// | 2  | natural ∩ order 2     | order 1  |
/// | 3  | natural ∩ order 1     | order 1  |
/// | 4  | natural               | order 1  |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Strategy(u8);

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy(1), Strategy(2), Strategy(3), Strategy(4)];

    pub fn new(id: u8) -> Result<Self, UnknownStrategy> {
        match id {
            1..=4 => Ok(Strategy(id)),
            _ => Err(UnknownStrategy(id)),
        }
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn range_extension(self) -> ExtensionOrder {
        match self.0 {
            1 | 2 => ExtensionOrder::Order2,
            3 => ExtensionOrder::Order1,
            _ => ExtensionOrder::Order0,
        }
    }

    pub fn krawczyk(self) -> KrawczykVariant {
        match self.0 {
            1 => KrawczykVariant::Order2,
            _ => KrawczykVariant::Order1,
        }
    }
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy(1)
    }
}

impl TryFrom<u8> for Strategy {
    type Error = UnknownStrategy;
    fn try_from(id: u8) -> Result<Self, Self::Error> {
        Strategy::new(id)
    }
}

impl From<Strategy> for u8 {
    fn from(s: Strategy) -> u8 {
        s.0
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0)
    }
}
