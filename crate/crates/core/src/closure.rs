//! The one-step construction operator and its iterates.
//!
//! `close_once(U)` collects every `E1 ∪ E2`, `E1 ∩ E2` and `E1ᶜ` with
//! `E1, E2 ∈ U`. Iterating it produces an increasing chain `U ⊆ U_1 ⊆ U_2 ⊆ …`
//! that stops growing once two consecutive members have equal size; the last
//! member is the algebra generated by `U`.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SetError};
use crate::family::{Family, Universe};

/// Universes up to this size deduplicate through a dense bitmap over all
/// `2^size` subsets; larger ones use a hash set.
const DENSE_DEDUP_MAX_UNIVERSE: usize = 20;

/// Pair loops with fewer members than this run on the calling thread.
const PARALLEL_MIN_MEMBERS: usize = 256;

/// Per-iteration record produced by [`close_fixpoint`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    /// `(k, |U_k|)` for `k = 0..=fixpoint_index + 1`.
    pub entries: Vec<(usize, usize)>,
    /// First `k` with `|U_k| = |U_{k+1}|`.
    pub fixpoint_index: usize,
}

/// `S_U(H)`: a step count or "never".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepCount {
    Finite(usize),
    Infinite,
}

impl StepCount {
    pub fn finite(self) -> Option<usize> {
        match self {
            StepCount::Finite(n) => Some(n),
            StepCount::Infinite => None,
        }
    }
}

impl fmt::Display for StepCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepCount::Finite(n) => write!(f, "{n}"),
            StepCount::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for StepCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StepCount::Finite(n) => s.serialize_u64(*n as u64),
            StepCount::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `C_1(U)`. Rejects the empty family.
pub fn close_once(family: &Family) -> Result<Family> {
    if family.is_empty() {
        return Err(SetError::EmptyFamily);
    }
    Ok(step(family))
}

/// `C_n(U)`, with `close_n(U, 0) = U`.
pub fn close_n(family: &Family, n: usize) -> Result<Family> {
    if family.is_empty() {
        return Err(SetError::EmptyFamily);
    }
    Ok(iterate(family, n))
}

/// `U_∞` together with the cardinality trace that certified it.
pub fn close_fixpoint(family: &Family) -> Result<(Family, StepTrace)> {
    if family.is_empty() {
        return Err(SetError::EmptyFamily);
    }
    Ok(fixpoint_with_trace(family))
}

/// Permissive iterate: the empty family is its own closure.
pub(crate) fn iterate(family: &Family, n: usize) -> Family {
    let mut current = family.clone();
    for _ in 0..n {
        let next = step(&current);
        // C_1 is inflationary, so equal size means equal families and the
        // chain is constant from here on.
        if next.len() == current.len() {
            break;
        }
        current = next;
    }
    current
}

/// Permissive fixpoint: the empty family is its own closure.
pub(crate) fn fixpoint(family: &Family) -> Family {
    fixpoint_with_trace(family).0
}

fn fixpoint_with_trace(family: &Family) -> (Family, StepTrace) {
    let mut entries = vec![(0, family.len())];
    let mut current = family.clone();
    let mut k = 0;
    loop {
        let next = step(&current);
        entries.push((k + 1, next.len()));
        if next.len() == current.len() {
            return (
                current,
                StepTrace {
                    entries,
                    fixpoint_index: k,
                },
            );
        }
        current = next;
        k += 1;
    }
}

/// One application of the construction operator; empty in, empty out.
pub(crate) fn step(family: &Family) -> Family {
    let universe = family.universe();
    let members = family.bits();
    if members.is_empty() {
        return family.clone();
    }
    let out = if universe.size() <= DENSE_DEDUP_MAX_UNIVERSE {
        step_dense(universe, members)
    } else {
        step_sparse(universe, members)
    };
    Family::from_sorted_unchecked(universe, out)
}

/// Everything produced from the pairs `(members[i], members[j])`, `j >= i`,
/// plus the complement of `members[i]`.
#[inline]
fn emit_row(members: &[u32], i: usize, mask: u32, mut emit: impl FnMut(u32)) {
    let a = members[i];
    emit(!a & mask);
    for &b in &members[i..] {
        emit(a | b);
        emit(a & b);
    }
}

fn step_dense(universe: Universe, members: &[u32]) -> Vec<u32> {
    let mask = universe.mask();
    let words = (universe.power_set_len() as usize).div_ceil(64);
    let fill = |bitmap: &mut Vec<u64>, i: usize| {
        emit_row(members, i, mask, |s| bitmap[(s >> 6) as usize] |= 1 << (s & 63));
    };
    let bitmap = if members.len() < PARALLEL_MIN_MEMBERS {
        let mut bitmap = vec![0u64; words];
        (0..members.len()).for_each(|i| fill(&mut bitmap, i));
        bitmap
    } else {
        (0..members.len())
            .into_par_iter()
            .fold(|| vec![0u64; words], |mut bm, i| {
                fill(&mut bm, i);
                bm
            })
            .reduce(
                || vec![0u64; words],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x |= y);
                    a
                },
            )
    };
    let mut out = Vec::new();
    for (w, &word) in bitmap.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let bit = word.trailing_zeros();
            out.push(((w as u32) << 6) | bit);
            word &= word - 1;
        }
    }
    out
}

fn step_sparse(universe: Universe, members: &[u32]) -> Vec<u32> {
    let mask = universe.mask();
    let set: HashSet<u32> = if members.len() < PARALLEL_MIN_MEMBERS {
        let mut set = HashSet::new();
        for i in 0..members.len() {
            emit_row(members, i, mask, |s| {
                set.insert(s);
            });
        }
        set
    } else {
        (0..members.len())
            .into_par_iter()
            .fold(HashSet::new, |mut set, i| {
                emit_row(members, i, mask, |s| {
                    set.insert(s);
                });
                set
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            })
    };
    let mut out: Vec<u32> = set.into_iter().collect();
    out.sort_unstable();
    out
}

/// Closed under complement and pairwise union and intersection. The empty
/// family is not an algebra.
pub fn is_algebra(family: &Family) -> bool {
    if family.is_empty() {
        return false;
    }
    let mask = family.universe().mask();
    let members = family.bits();
    let contains = |s: u32| family.contains_bits(s);
    if !members.iter().all(|&a| contains(!a & mask)) {
        return false;
    }
    // With complements present, union-closure gives intersection-closure by
    // De Morgan, but both are checked directly.
    let row_closed = |i: usize| {
        let a = members[i];
        members[i + 1..]
            .iter()
            .all(|&b| contains(a | b) && contains(a & b))
    };
    if members.len() < PARALLEL_MIN_MEMBERS {
        (0..members.len()).all(row_closed)
    } else {
        (0..members.len()).into_par_iter().all(row_closed)
    }
}

/// `S_U(H) = inf{n ≥ 0 : H ⊆ U_n}`, reported as [`StepCount::Infinite`] once
/// the chain stabilizes without containing `target`.
pub fn steps_to(source: &Family, target: &Family) -> Result<StepCount> {
    source.check_same_universe(target)?;
    if source.is_empty() {
        return Err(SetError::EmptyFamily);
    }
    let mut current = source.clone();
    let mut n = 0;
    loop {
        if target.is_subfamily_of(&current) {
            return Ok(StepCount::Finite(n));
        }
        let next = step(&current);
        if next.len() == current.len() {
            return Ok(StepCount::Infinite);
        }
        current = next;
        n += 1;
    }
}
