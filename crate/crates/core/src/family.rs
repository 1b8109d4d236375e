//! Finite universes, subsets encoded as bit vectors, and canonical families.
//!
//! Element `i` of the universe `{1, ..., size}` is stored in bit `i - 1`, so a
//! subset doubles as an unsigned integer. Families keep their members sorted by
//! that integer and free of duplicates, which makes equality structural and
//! serialization deterministic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SetError};

/// Largest universe accepted by [`Universe::new`].
pub const DEFAULT_UNIVERSE_CAP: usize = 16;
/// Largest universe accepted by [`Universe::with_cap`].
pub const MAX_UNIVERSE_CAP: usize = 32;

/// The finite ground set `{1, ..., size}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Universe {
    size: u8,
}

impl Universe {
    pub fn new(size: usize) -> Result<Self> {
        Self::with_cap(size, DEFAULT_UNIVERSE_CAP)
    }

    /// Like [`Universe::new`] with a caller-chosen cap (at most 32).
    pub fn with_cap(size: usize, cap: usize) -> Result<Self> {
        let cap = cap.min(MAX_UNIVERSE_CAP);
        if size == 0 || size > cap {
            return Err(SetError::UniverseSize { size, cap });
        }
        Ok(Universe { size: size as u8 })
    }

    pub fn size(self) -> usize {
        self.size as usize
    }

    /// Bit mask with one bit per element.
    pub fn mask(self) -> u32 {
        if self.size as u32 == u32::BITS {
            u32::MAX
        } else {
            (1u32 << self.size) - 1
        }
    }

    pub fn empty_set(self) -> ElementSet {
        ElementSet {
            bits: 0,
            universe: self,
        }
    }

    pub fn full_set(self) -> ElementSet {
        ElementSet {
            bits: self.mask(),
            universe: self,
        }
    }

    /// Number of subsets, `2^size`.
    pub fn power_set_len(self) -> u64 {
        1u64 << self.size
    }

    pub fn check_element(self, element: usize) -> Result<()> {
        if element == 0 || element > self.size() {
            return Err(SetError::ElementOutOfRange {
                element: element as i64,
                universe: self.size(),
            });
        }
        Ok(())
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        1..=self.size()
    }
}

/// A subset of a [`Universe`].
///
/// Ordering compares the bit value first, which is the canonical member order
/// of a [`Family`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: u32,
    universe: Universe,
}

impl ElementSet {
    pub fn from_bits(universe: Universe, bits: u32) -> Result<Self> {
        if bits & !universe.mask() != 0 {
            let element = (u32::BITS - bits.leading_zeros()) as i64;
            return Err(SetError::ElementOutOfRange {
                element,
                universe: universe.size(),
            });
        }
        Ok(ElementSet { bits, universe })
    }

    /// Builds a set from 1-based element labels. Duplicates are ignored.
    pub fn from_elements<I>(universe: Universe, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let mut bits = 0u32;
        for e in elements {
            if e < 1 || e > universe.size() as i64 {
                return Err(SetError::ElementOutOfRange {
                    element: e,
                    universe: universe.size(),
                });
            }
            bits |= 1 << (e - 1);
        }
        Ok(ElementSet { bits, universe })
    }

    pub fn singleton(universe: Universe, element: usize) -> Result<Self> {
        universe.check_element(element)?;
        Ok(ElementSet {
            bits: 1 << (element - 1),
            universe,
        })
    }

    pub(crate) fn from_raw(universe: Universe, bits: u32) -> Self {
        debug_assert_eq!(bits & !universe.mask(), 0);
        ElementSet { bits, universe }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn universe(self) -> Universe {
        self.universe
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == self.universe.mask()
    }

    /// Membership test; elements outside the universe are never members.
    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.universe.size() && self.bits & (1 << (element - 1)) != 0
    }

    /// Smallest element, if any.
    pub fn min_element(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize + 1)
    }

    pub fn union(self, other: ElementSet) -> ElementSet {
        ElementSet::from_raw(self.universe, self.bits | other.bits)
    }

    pub fn intersection(self, other: ElementSet) -> ElementSet {
        ElementSet::from_raw(self.universe, self.bits & other.bits)
    }

    pub fn difference(self, other: ElementSet) -> ElementSet {
        ElementSet::from_raw(self.universe, self.bits & !other.bits)
    }

    pub fn complement(self) -> ElementSet {
        ElementSet::from_raw(self.universe, !self.bits & self.universe.mask())
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: ElementSet) -> bool {
        self.bits & other.bits == 0
    }

    /// Elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..u32::BITS as usize)
            .filter(move |i| bits & (1 << i) != 0)
            .map(|i| i + 1)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// A deduplicated family of subsets in canonical (ascending bit value) order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    universe: Universe,
    members: Vec<u32>,
}

impl Family {
    pub fn empty(universe: Universe) -> Self {
        Family {
            universe,
            members: Vec::new(),
        }
    }

    /// Canonicalizes raw bit vectors, rejecting bits outside the universe.
    pub fn from_bits<I>(universe: Universe, bits: I) -> Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        let mut members = Vec::new();
        for b in bits {
            ElementSet::from_bits(universe, b)?;
            members.push(b);
        }
        Ok(Self::from_vec_unchecked(universe, members))
    }

    pub fn from_sets<I>(universe: Universe, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = ElementSet>,
    {
        let mut members = Vec::new();
        for s in sets {
            if s.universe != universe {
                return Err(SetError::UniverseMismatch {
                    left: universe.size(),
                    right: s.universe.size(),
                });
            }
            members.push(s.bits);
        }
        Ok(Self::from_vec_unchecked(universe, members))
    }

    /// Canonical family from lists of 1-based elements. The empty list is
    /// rejected; see [`Family::normalize_permissive`].
    pub fn normalize(universe: Universe, sets: &[Vec<i64>]) -> Result<Self> {
        if sets.is_empty() {
            return Err(SetError::EmptyFamily);
        }
        Self::normalize_permissive(universe, sets)
    }

    /// As [`Family::normalize`], but an empty input yields the empty family.
    pub fn normalize_permissive(universe: Universe, sets: &[Vec<i64>]) -> Result<Self> {
        let members = sets
            .iter()
            .map(|s| ElementSet::from_elements(universe, s.iter().copied()).map(|e| e.bits))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_vec_unchecked(universe, members))
    }

    pub(crate) fn from_vec_unchecked(universe: Universe, mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        Family { universe, members }
    }

    /// `members` must already be strictly ascending and in range.
    pub(crate) fn from_sorted_unchecked(universe: Universe, members: Vec<u32>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family { universe, members }
    }

    /// Every subset of the universe.
    pub fn power_set(universe: Universe) -> Self {
        Family {
            universe,
            members: (0..=universe.mask()).collect(),
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Raw member bit vectors in canonical order.
    pub fn bits(&self) -> &[u32] {
        &self.members
    }

    pub fn members(&self) -> impl ExactSizeIterator<Item = ElementSet> + '_ {
        let universe = self.universe;
        self.members
            .iter()
            .map(move |&b| ElementSet::from_raw(universe, b))
    }

    pub fn get(&self, index: usize) -> Option<ElementSet> {
        self.members
            .get(index)
            .map(|&b| ElementSet::from_raw(self.universe, b))
    }

    pub fn contains(&self, set: ElementSet) -> bool {
        set.universe == self.universe && self.contains_bits(set.bits)
    }

    pub fn contains_bits(&self, bits: u32) -> bool {
        self.members.binary_search(&bits).is_ok()
    }

    /// `self ⊆ other` as families. Families over different universes are
    /// never nested.
    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        if self.universe != other.universe || self.len() > other.len() {
            return false;
        }
        let mut theirs = other.members.iter().peekable();
        'outer: for &m in &self.members {
            while let Some(&&t) = theirs.peek() {
                theirs.next();
                if t == m {
                    continue 'outer;
                }
                if t > m {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.check_same_universe(other)?;
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        Ok(Self::from_vec_unchecked(self.universe, members))
    }

    pub fn intersection(&self, other: &Family) -> Result<Family> {
        self.check_same_universe(other)?;
        let members = self
            .members
            .iter()
            .copied()
            .filter(|m| other.contains_bits(*m))
            .collect();
        Ok(Self::from_sorted_unchecked(self.universe, members))
    }

    /// The family with `set` removed (unchanged if absent).
    pub fn without(&self, set: ElementSet) -> Family {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&m| m != set.bits)
            .collect();
        Self::from_sorted_unchecked(self.universe, members)
    }

    pub fn with(&self, set: ElementSet) -> Family {
        let mut members = self.members.clone();
        members.push(set.bits);
        Self::from_vec_unchecked(self.universe, members)
    }

    pub(crate) fn check_same_universe(&self, other: &Family) -> Result<()> {
        if self.universe != other.universe {
            return Err(SetError::UniverseMismatch {
                left: self.universe.size(),
                right: other.universe.size(),
            });
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> FamilyJson {
        FamilyJson::from_sets(self.universe, self.members())
    }

    /// Compact JSON in canonical order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("family serializes")
    }

    /// Parses `{"universe": n, "sets": [[...], ...]}`. An empty `sets` list is
    /// accepted here; operations that need a non-empty family reject it.
    pub fn from_json(text: &str) -> Result<Family> {
        let raw: FamilyJson = serde_json::from_str(text).map_err(|e| SetError::Parse(e.to_string()))?;
        raw.to_family(DEFAULT_UNIVERSE_CAP)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(|X|={}, ", self.universe.size())?;
        fmt::Display::fmt(self, f)?;
        f.write_str(")")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.members().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// Wire form shared by families, partitions and separability classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub universe: i64,
    pub sets: Vec<Vec<i64>>,
}

impl FamilyJson {
    /// Keeps the given set order (callers choose canonical or block order).
    pub fn from_sets<I>(universe: Universe, sets: I) -> Self
    where
        I: IntoIterator<Item = ElementSet>,
    {
        FamilyJson {
            universe: universe.size() as i64,
            sets: sets
                .into_iter()
                .map(|s| s.elements().map(|e| e as i64).collect())
                .collect(),
        }
    }

    pub fn universe(&self, cap: usize) -> Result<Universe> {
        if self.universe < 1 {
            return Err(SetError::Parse(format!(
                "field `universe`: expected a positive integer, got {}",
                self.universe
            )));
        }
        Universe::with_cap(self.universe as usize, cap)
    }

    pub fn to_family(&self, cap: usize) -> Result<Family> {
        let universe = self.universe(cap)?;
        self.element_sets(universe)
            .and_then(|sets| Family::from_sets(universe, sets))
    }

    pub fn element_sets(&self, universe: Universe) -> Result<Vec<ElementSet>> {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                ElementSet::from_elements(universe, s.iter().copied())
                    .map_err(|e| SetError::Parse(format!("field `sets[{i}]`: {e}")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    #[test]
    fn normalize_dedups_and_sorts() {
        let f = Family::normalize(u(3), &[vec![1, 2], vec![1, 2], vec![3]]).unwrap();
        // {1,2} encodes 3, {3} encodes 4
        assert_eq!(f.bits(), &[3, 4]);
        assert_eq!(f.to_string(), "{{1,2}, {3}}");
    }

    #[test]
    fn normalize_rejects_empty_by_default() {
        assert_eq!(Family::normalize(u(3), &[]), Err(SetError::EmptyFamily));
        assert!(Family::normalize_permissive(u(3), &[]).unwrap().is_empty());
    }

    #[test]
    fn normalize_singleton_universe() {
        let f = Family::normalize(u(1), &[vec![1]]).unwrap();
        assert_eq!(f.bits(), &[1]);
    }

    #[test]
    fn normalize_rejects_out_of_range() {
        assert!(matches!(
            Family::normalize(u(3), &[vec![4]]),
            Err(SetError::ElementOutOfRange { element: 4, .. })
        ));
        assert!(matches!(
            Family::normalize(u(3), &[vec![0]]),
            Err(SetError::ElementOutOfRange { element: 0, .. })
        ));
    }

    #[test]
    fn normalize_is_idempotent() {
        let f = Family::normalize(u(4), &[vec![4], vec![2, 1], vec![], vec![3, 4]]).unwrap();
        let again = Family::from_json(&f.to_json()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn universe_cap() {
        assert!(Universe::new(0).is_err());
        assert!(Universe::new(16).is_ok());
        assert!(Universe::new(17).is_err());
        assert!(Universe::with_cap(32, 32).is_ok());
        assert!(Universe::with_cap(33, 64).is_err());
        assert_eq!(Universe::with_cap(32, 32).unwrap().mask(), u32::MAX);
    }

    #[test]
    fn element_set_ops() {
        let x = u(4);
        let a = ElementSet::from_elements(x, [1, 2]).unwrap();
        let b = ElementSet::from_elements(x, [2, 3]).unwrap();
        assert_eq!(a.union(b).bits(), 0b0111);
        assert_eq!(a.intersection(b).bits(), 0b0010);
        assert_eq!(a.complement().bits(), 0b1100);
        assert_eq!(a.difference(b).bits(), 0b0001);
        assert!(a.contains(1) && !a.contains(3) && !a.contains(9));
        assert_eq!(b.min_element(), Some(2));
        assert_eq!(x.empty_set().min_element(), None);
        assert_eq!(a.elements().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn json_shape() {
        let f = Family::normalize(u(3), &[vec![2, 3], vec![1, 2]]).unwrap();
        assert_eq!(f.to_json(), r#"{"universe":3,"sets":[[1,2],[2,3]]}"#);
    }

    #[test]
    fn json_errors_name_the_field() {
        let err = Family::from_json(r#"{"universe":3,"sets":[[1],[7]]}"#).unwrap_err();
        assert!(err.to_string().contains("sets[1]"), "{err}");
        let err = Family::from_json(r#"{"universe":0,"sets":[]}"#).unwrap_err();
        assert!(err.to_string().contains("universe"), "{err}");
        let err = Family::from_json(r#"{"univers":3,"sets":[]}"#).unwrap_err();
        assert!(err.to_string().contains("univers"), "{err}");
    }

    #[test]
    fn subfamily() {
        let x = u(3);
        let a = Family::from_bits(x, [1, 3]).unwrap();
        let b = Family::from_bits(x, [0, 1, 2, 3]).unwrap();
        assert!(a.is_subfamily_of(&b));
        assert!(!b.is_subfamily_of(&a));
        assert!(Family::empty(x).is_subfamily_of(&a));
        assert!(!Family::from_bits(x, [5]).unwrap().is_subfamily_of(&b));
    }
}
