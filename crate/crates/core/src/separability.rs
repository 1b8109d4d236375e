//! Separability of points by a family.
//!
//! Two points are separable when some member contains exactly one of them.
//! Unseparability is an equivalence relation; its classes partition the
//! universe and, for an algebra, are exactly the minimal nonempty members.

use crate::error::Result;
use crate::family::{ElementSet, Family, FamilyJson, Universe};
use crate::partition::Partition;

/// Unseparability classes of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparabilityClasses {
    pub universe: Universe,
    pub blocks: Partition,
}

impl SeparabilityClasses {
    /// The class containing `element`.
    pub fn class_of(&self, element: usize) -> Option<ElementSet> {
        self.blocks.block_of(element)
    }

    /// Family JSON of the blocks, ordered by least element.
    pub fn to_json(&self) -> String {
        self.blocks.to_json()
    }

    pub fn to_json_value(&self) -> FamilyJson {
        FamilyJson::from_sets(self.universe, self.blocks.blocks().iter().copied())
    }
}

/// True iff some member contains exactly one of `a`, `b`. A point is never
/// separable from itself.
pub fn separable(family: &Family, a: usize, b: usize) -> Result<bool> {
    let universe = family.universe();
    universe.check_element(a)?;
    universe.check_element(b)?;
    let pair = (1u32 << (a - 1)) | (1u32 << (b - 1));
    Ok(a != b
        && family.bits().iter().any(|&m| {
            let hit = m & pair;
            hit != 0 && hit != pair
        }))
}

/// Every pair of distinct points is separable.
pub fn is_universe_separable(family: &Family) -> bool {
    equivalence_classes(family).blocks.len() == family.universe().size()
}

/// Refines `{X}` by every member in turn; what remains unsplit is a class.
pub fn equivalence_classes(family: &Family) -> SeparabilityClasses {
    let universe = family.universe();
    let mut blocks = vec![universe.mask()];
    for &m in family.bits() {
        let mut refined = Vec::with_capacity(blocks.len() * 2);
        for b in blocks {
            let inside = b & m;
            let outside = b & !m;
            if inside != 0 {
                refined.push(inside);
            }
            if outside != 0 {
                refined.push(outside);
            }
        }
        blocks = refined;
        if blocks.len() == universe.size() {
            break;
        }
    }
    let blocks = blocks
        .into_iter()
        .map(|b| ElementSet::from_raw(universe, b))
        .collect();
    SeparabilityClasses {
        universe,
        blocks: Partition::from_blocks_unchecked(universe, blocks),
    }
}

/// Intersection of the members containing `element`; the whole universe when
/// no member contains it.
pub fn intersection_of_containing(family: &Family, element: usize) -> Result<ElementSet> {
    let universe = family.universe();
    universe.check_element(element)?;
    let bit = 1u32 << (element - 1);
    let bits = family
        .bits()
        .iter()
        .filter(|&&m| m & bit != 0)
        .fold(universe.mask(), |acc, &m| acc & m);
    Ok(ElementSet::from_raw(universe, bits))
}
