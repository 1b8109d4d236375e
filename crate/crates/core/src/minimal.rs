//! n-minimal constructibility.
//!
//! A family is n-minimal constructible when no proper subfamily rebuilds it
//! within `n` steps. Because closure is monotone in the source family, it is
//! enough to try the maximal proper subfamilies `U − {A}`.

use serde::Serialize;

use crate::closure::{fixpoint, is_algebra, iterate};
use crate::error::{Result, SetError};
use crate::family::{ElementSet, Family, Universe};
use crate::partition::Partition;
use crate::separability::equivalence_classes;

/// Largest universe [`enumerate_n_minimal`] will scan.
pub const ENUMERATION_MAX_UNIVERSE: usize = 4;

/// A member whose removal still lets the rest rebuild what was required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub removed: ElementSet,
    /// `C_n(U − {removed})`, which contains the required family.
    pub rebuilt: Family,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityReport {
    pub family: Family,
    pub n: usize,
    pub is_minimal: bool,
    pub witness: Option<Witness>,
}

impl MinimalityReport {
    fn new(family: &Family, n: usize, witness: Option<Witness>) -> Self {
        MinimalityReport {
            family: family.clone(),
            n,
            is_minimal: witness.is_none(),
            witness,
        }
    }
}

#[derive(Serialize)]
struct ReportJson {
    n: usize,
    is_minimal: bool,
    removed: Option<Vec<usize>>,
}

impl MinimalityReport {
    /// `{"n":k,"is_minimal":bool,"removed":[...]|null}`
    pub fn to_json(&self) -> String {
        let raw = ReportJson {
            n: self.n,
            is_minimal: self.is_minimal,
            removed: self.witness.as_ref().map(|w| w.removed.elements().collect()),
        };
        serde_json::to_string(&raw).expect("report serializes")
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(SetError::InvalidArgument("step budget n must be >= 1".into()));
    }
    Ok(())
}

/// Every member `A` with `required ⊆ C_n(U − {A})`, in canonical order.
fn removals<'a>(
    family: &'a Family,
    required: &'a Family,
    n: usize,
) -> impl Iterator<Item = Witness> + 'a {
    family.members().filter_map(move |a| {
        let rebuilt = iterate(&family.without(a), n);
        required
            .is_subfamily_of(&rebuilt)
            .then_some(Witness { removed: a, rebuilt })
    })
}

/// n-minimal constructibility via single-member removals. The witness, if
/// any, is the first removable member in canonical order.
pub fn is_n_minimal_constructible(family: &Family, n: usize) -> Result<MinimalityReport> {
    check_n(n)?;
    let witness = removals(family, family, n).next();
    Ok(MinimalityReport::new(family, n, witness))
}

/// Every member whose removal leaves a family that rebuilds `family` in `n`
/// steps.
pub fn removable_members(family: &Family, n: usize) -> Result<Vec<Witness>> {
    check_n(n)?;
    Ok(removals(family, family, n).collect())
}

/// n-minimal-fat constructibility: no proper subfamily `H` has
/// `U_{n−1} ⊆ H_n`.
pub fn is_n_minimal_fat(family: &Family, n: usize) -> Result<MinimalityReport> {
    check_n(n)?;
    let required = iterate(family, n - 1);
    let witness = removals(family, &required, n).next();
    Ok(MinimalityReport::new(family, n, witness))
}

fn require_algebra(algebra: &Family) -> Result<Partition> {
    if !is_algebra(algebra) {
        return Err(SetError::NotAnAlgebra);
    }
    Ok(equivalence_classes(algebra).blocks)
}

/// The separability partition of a finite algebra: a 1-minimal constructible
/// generator with `log2 |A|` members.
pub fn generator_1mc(algebra: &Family) -> Result<Family> {
    Ok(require_algebra(algebra)?.to_family())
}

/// The separability partition minus its last block (least-element order)
/// when it has at least two blocks. The result generates the algebra and is
/// n-minimal constructible for every n.
pub fn generator_all_n(algebra: &Family) -> Result<Family> {
    let partition = require_algebra(algebra)?;
    let blocks = partition.blocks();
    let keep = if blocks.len() >= 2 { &blocks[..blocks.len() - 1] } else { blocks };
    Family::from_sets(algebra.universe(), keep.iter().copied())
}

/// Checks that `generator` is what [`generator_all_n`] promises for
/// `algebra`, probing `n = 1..=max_n`.
pub fn verify_all_n_generator(algebra: &Family, generator: &Family, max_n: usize) -> Result<bool> {
    if !generator.is_subfamily_of(algebra) || fixpoint(generator) != *algebra {
        return Ok(false);
    }
    for n in 1..=max_n {
        if !is_n_minimal_constructible(generator, n)?.is_minimal {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Families over `{1..universe_size}` with at most `max_family_size` members
/// that are n-minimal constructible, ordered by size and then by their member
/// lists. The empty family comes first.
pub fn enumerate_n_minimal(universe_size: usize, n: usize, max_family_size: usize) -> Result<Vec<Family>> {
    check_n(n)?;
    if universe_size > ENUMERATION_MAX_UNIVERSE {
        return Err(SetError::BudgetExceeded {
            what: "n-minimal enumeration",
            needed: format!("universe of {universe_size}"),
            limit: format!("universe of {ENUMERATION_MAX_UNIVERSE}"),
        });
    }
    let universe = Universe::new(universe_size)?;
    let subsets = universe.power_set_len() as u32;
    let mut out = Vec::new();
    // families of each size in lexicographic order of their member lists
    for size in 0..=max_family_size.min(subsets as usize) {
        let mut chosen = Vec::with_capacity(size);
        collect_minimal(universe, subsets, size, 0, &mut chosen, n, &mut out);
    }
    Ok(out)
}

fn collect_minimal(
    universe: Universe,
    subsets: u32,
    size: usize,
    start: u32,
    chosen: &mut Vec<u32>,
    n: usize,
    out: &mut Vec<Family>,
) {
    if chosen.len() == size {
        let family = Family::from_sorted_unchecked(universe, chosen.clone());
        if removals(&family, &family, n).next().is_none() {
            out.push(family);
        }
        return;
    }
    let need = (size - chosen.len()) as u32;
    for s in start..=subsets - need {
        chosen.push(s);
        collect_minimal(universe, subsets, size, s + 1, chosen, n, out);
        chosen.pop();
    }
}
