//! Partitions of the universe and their correspondence with finite algebras.
//!
//! A partition with `k` blocks generates the algebra of all `2^k` unions of
//! blocks, and every finite algebra arises this way from exactly one
//! partition (its separability classes). Counting algebras on an `n`-element
//! universe is therefore counting set partitions, i.e. the Bell numbers.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::closure::{fixpoint, is_algebra};
use crate::error::{Result, SetError};
use crate::family::{ElementSet, Family, FamilyJson, Universe, DEFAULT_UNIVERSE_CAP};
use crate::separability::equivalence_classes;

/// Largest universe the exhaustive algebra census accepts.
pub const EXHAUSTIVE_CENSUS_MAX: usize = 4;

/// Nonempty, pairwise disjoint blocks covering the universe, ordered by least
/// element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    universe: Universe,
    blocks: Vec<ElementSet>,
}

impl Partition {
    pub fn new<I>(universe: Universe, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = ElementSet>,
    {
        let mut seen = 0u32;
        let mut out = Vec::new();
        for b in blocks {
            if b.universe() != universe {
                return Err(SetError::UniverseMismatch {
                    left: universe.size(),
                    right: b.universe().size(),
                });
            }
            if b.is_empty() {
                return Err(SetError::NotAPartition("empty block".into()));
            }
            if b.bits() & seen != 0 {
                return Err(SetError::NotAPartition(format!("block {b} overlaps another block")));
            }
            seen |= b.bits();
            out.push(b);
        }
        if seen != universe.mask() {
            let missing = ElementSet::from_bits(universe, universe.mask() & !seen)?;
            return Err(SetError::NotAPartition(format!("elements {missing} are not covered")));
        }
        Ok(Self::from_blocks_unchecked(universe, out))
    }

    pub(crate) fn from_blocks_unchecked(universe: Universe, mut blocks: Vec<ElementSet>) -> Self {
        blocks.sort_by_key(|b| b.min_element());
        Partition { universe, blocks }
    }

    /// Interprets a family's members as blocks.
    pub fn from_family(family: &Family) -> Result<Self> {
        Self::new(family.universe(), family.members())
    }

    /// Block labels per element (restricted growth string, 0-based labels).
    pub fn from_restricted_growth(universe: Universe, labels: &[usize]) -> Result<Self> {
        if labels.len() != universe.size() {
            return Err(SetError::InvalidArgument(format!(
                "restricted growth string has length {}, universe has {} elements",
                labels.len(),
                universe.size()
            )));
        }
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut bits = vec![0u32; count];
        for (i, &l) in labels.iter().enumerate() {
            bits[l] |= 1 << i;
        }
        let blocks = bits
            .into_iter()
            .map(|b| ElementSet::from_bits(universe, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, blocks)
    }

    /// The one-block partition `{X}`.
    pub fn trivial(universe: Universe) -> Self {
        Partition {
            universe,
            blocks: vec![universe.full_set()],
        }
    }

    /// All singletons.
    pub fn discrete(universe: Universe) -> Self {
        let blocks = universe
            .elements()
            .map(|e| ElementSet::from_raw(universe, 1 << (e - 1)))
            .collect();
        Partition { universe, blocks }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn blocks(&self) -> &[ElementSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, element: usize) -> Option<ElementSet> {
        self.blocks.iter().copied().find(|b| b.contains(element))
    }

    /// The blocks as a canonical family.
    pub fn to_family(&self) -> Family {
        Family::from_vec_unchecked(self.universe, self.blocks.iter().map(|b| b.bits()).collect())
    }

    /// Family JSON with blocks ordered by least element.
    pub fn to_json(&self) -> String {
        let raw = FamilyJson::from_sets(self.universe, self.blocks.iter().copied());
        serde_json::to_string(&raw).expect("partition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FamilyJson = serde_json::from_str(text).map_err(|e| SetError::Parse(e.to_string()))?;
        let universe = raw.universe(DEFAULT_UNIVERSE_CAP)?;
        Self::new(universe, raw.element_sets(universe)?)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition(|X|={}, {self})", self.universe.size())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("}")
    }
}

/// All `2^k` unions of the blocks of `partition`.
pub fn algebra_from_partition(partition: &Partition) -> Result<Family> {
    algebra_from_partition_with_budget(partition, &Budget::default())
}

pub fn algebra_from_partition_with_budget(partition: &Partition, budget: &Budget) -> Result<Family> {
    let k = partition.len();
    let needed = 1u128.checked_shl(k as u32);
    budget.check("algebra from partition", needed)?;
    let mut members = Vec::with_capacity(1 << k);
    for choice in 0u64..(1u64 << k) {
        let mut bits = 0u32;
        let mut c = choice;
        while c != 0 {
            bits |= partition.blocks[c.trailing_zeros() as usize].bits();
            c &= c - 1;
        }
        members.push(bits);
    }
    Ok(Family::from_vec_unchecked(partition.universe, members))
}

/// The separability classes of an algebra, i.e. its minimal nonempty members.
pub fn partition_from_algebra(algebra: &Family) -> Result<Partition> {
    if !is_algebra(algebra) {
        return Err(SetError::NotAnAlgebra);
    }
    Ok(equivalence_classes(algebra).blocks)
}

/// One atom `A_I`: the points lying in exactly the members indexed by `I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomIndex {
    /// 1-based positions into the family's canonical member order.
    pub index_set: Vec<usize>,
    #[serde(serialize_with = "serialize_elements")]
    pub atom: ElementSet,
}

fn serialize_elements<S: serde::Serializer>(set: &ElementSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.elements())
}

/// Nonempty atoms of a family, grouped by each point's membership signature.
pub fn atoms(family: &Family) -> Result<Partition> {
    if family.is_empty() {
        return Err(SetError::EmptyFamily);
    }
    let universe = family.universe();
    let words = family.len().div_ceil(64);
    let mut groups: BTreeMap<Vec<u64>, u32> = BTreeMap::new();
    for x in universe.elements() {
        let mut signature = vec![0u64; words];
        for (i, m) in family.members().enumerate() {
            if m.contains(x) {
                signature[i / 64] |= 1 << (i % 64);
            }
        }
        *groups.entry(signature).or_default() |= 1 << (x - 1);
    }
    let blocks = groups
        .into_values()
        .map(|b| ElementSet::from_raw(universe, b))
        .collect();
    Ok(Partition::from_blocks_unchecked(universe, blocks))
}

/// Every `A_I = ⋂_{i∈I} E_i − ⋃_{i∉I} E_i` over all `I ⊆ {1..|U|}`, empty
/// atoms included, in increasing order of the index-set bitmask.
pub fn atom_indices(family: &Family, budget: &Budget) -> Result<Vec<AtomIndex>> {
    if family.is_empty() {
        return Err(SetError::EmptyFamily);
    }
    let n = family.len();
    budget.check("atom index sets", 1u128.checked_shl(n as u32))?;
    let universe = family.universe();
    let members: Vec<u32> = family.bits().to_vec();
    let out = (0u64..(1u64 << n))
        .map(|choice| {
            let mut inside = universe.mask();
            let mut outside = 0u32;
            for (i, &m) in members.iter().enumerate() {
                if choice & (1 << i) != 0 {
                    inside &= m;
                } else {
                    outside |= m;
                }
            }
            AtomIndex {
                index_set: (0..n).filter(|i| choice & (1 << i) != 0).map(|i| i + 1).collect(),
                atom: ElementSet::from_raw(universe, inside & !outside),
            }
        })
        .collect();
    Ok(out)
}

/// Bell number `B_n` via the Bell triangle.
pub fn bell_number(n: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("row is never empty").clone());
        for value in &row {
            let sum = next.last().expect("just pushed") + value;
            next.push(sum);
        }
        row = next;
    }
    row.swap_remove(0)
}

/// Set partitions of `{1..n}` in lexicographic order of their restricted
/// growth strings.
pub struct PartitionIter {
    universe: Universe,
    labels: Vec<usize>,
    done: bool,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_restricted_growth(self.universe, &self.labels)
            .expect("restricted growth strings describe partitions");
        self.advance();
        Some(current)
    }
}

impl PartitionIter {
    fn advance(&mut self) {
        let n = self.labels.len();
        // prefix_max[i] = max(labels[0..i])
        let mut prefix_max = vec![0usize; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.labels[i - 1]);
        }
        for i in (1..n).rev() {
            if self.labels[i] <= prefix_max[i] {
                self.labels[i] += 1;
                self.labels[i + 1..].iter_mut().for_each(|l| *l = 0);
                return;
            }
        }
        self.done = true;
    }
}

pub fn enumerate_partitions(n: usize) -> Result<PartitionIter> {
    let universe = Universe::new(n)?;
    Ok(PartitionIter {
        universe,
        labels: vec![0; n],
        done: false,
    })
}

/// Result of counting the distinct algebras on `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub partition_count: BigUint,
    pub exhaustive_count: Option<BigUint>,
    /// Nonempty families closed by the exhaustive pass.
    pub families_enumerated: Option<u64>,
}

impl Census {
    /// `None` when only the partition count was computed.
    pub fn agree(&self) -> Option<bool> {
        self.exhaustive_count
            .as_ref()
            .map(|e| *e == self.partition_count)
    }

    /// `{"n":k,"partition_count":b,"exhaustive_count":b',"agree":bool}`; the
    /// last two are `null` without an exhaustive count.
    pub fn to_json(&self) -> String {
        // Bell numbers outgrow u64, so the numbers are written by hand.
        let exhaustive = self
            .exhaustive_count
            .as_ref()
            .map_or_else(|| "null".to_string(), |c| c.to_string());
        let agree = self.agree().map_or_else(|| "null".to_string(), |a| a.to_string());
        format!(
            r#"{{"n":{},"partition_count":{},"exhaustive_count":{},"agree":{}}}"#,
            self.n, self.partition_count, exhaustive, agree
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    /// Count set partitions (the bijection with algebras).
    Partition,
    /// Close every nonempty family of subsets and count distinct results.
    Exhaustive,
}

/// Partition mode counts without materializing anything, so it accepts any
/// `n >= 1`; exhaustive mode needs a universe and `n <= 4`.
pub fn count_distinct_algebras(n: usize, mode: CensusMode) -> Result<BigUint> {
    match mode {
        CensusMode::Partition if n >= 1 => Ok(bell_number(n)),
        CensusMode::Partition => Err(SetError::InvalidArgument("census needs n >= 1".into())),
        CensusMode::Exhaustive => Ok(exhaustive_census(Universe::new(n)?)?.0),
    }
}

pub fn census(n: usize, exhaustive: bool) -> Result<Census> {
    let partition_count = count_distinct_algebras(n, CensusMode::Partition)?;
    let (exhaustive_count, families_enumerated) = if exhaustive {
        let (count, visited) = exhaustive_census(Universe::new(n)?)?;
        (Some(count), Some(visited))
    } else {
        (None, None)
    };
    Ok(Census {
        n,
        partition_count,
        exhaustive_count,
        families_enumerated,
    })
}

/// Distinct closures and the number of families closed.
fn exhaustive_census(universe: Universe) -> Result<(BigUint, u64)> {
    if universe.size() > EXHAUSTIVE_CENSUS_MAX {
        return Err(SetError::BudgetExceeded {
            what: "exhaustive algebra census",
            needed: format!("universe of {}", universe.size()),
            limit: format!("universe of {EXHAUSTIVE_CENSUS_MAX}"),
        });
    }
    let subsets = universe.power_set_len() as u32;
    // each family is a bitmask over the 2^n subsets
    let families: u64 = 1 << subsets;
    let (distinct, visited) = (1..families)
        .into_par_iter()
        .fold(
            || (HashSet::new(), 0u64),
            |(mut seen, visited), mask| {
                let members = (0..subsets).filter(|s| mask & (1 << s) != 0).collect();
                let family = Family::from_sorted_unchecked(universe, members);
                seen.insert(fixpoint(&family).bits().to_vec());
                (seen, visited + 1)
            },
        )
        .reduce(
            || (HashSet::<Vec<u32>>::new(), 0),
            |(mut a, na), (b, nb)| {
                a.extend(b);
                (a, na + nb)
            },
        );
    Ok((BigUint::from(distinct.len()), visited))
}

/// Convenience for tests and callers holding a `usize`.
pub fn bell_number_u64(n: usize) -> Option<u64> {
    u64::try_from(bell_number(n)).ok()
}
