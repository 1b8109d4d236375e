//! How many construction steps a family needs.
//!
//! For a family `U = {A_1, …, A_n}`, a k-union is a union of exactly `k`
//! distinct members, and `B_m` collects the `k` whose k-unions all appear in
//! `U_m`. For a partition into `n` blocks the generated algebra is exactly the
//! set of k-unions, so `U_m` is the whole algebra once `B_m = {0, …, n}`, and
//! the number of steps follows a closed form in `log2 n`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::budget::Budget;
use crate::closure::{iterate, step};
use crate::error::{Result, SetError};
use crate::family::Family;

/// `U_k(U)` for a fixed `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KUnionLadder {
    pub source: Family,
    pub k: usize,
    pub unions: Family,
}

/// `B_m`: the `k` whose k-unions are all present in `U_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BSet {
    pub m: usize,
    pub members: BTreeSet<usize>,
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Calls `visit` on each k-union of `members`; stops early when it returns
/// `false`. Returns whether every call returned `true`.
fn for_each_k_union(members: &[u32], k: usize, visit: &mut impl FnMut(u32) -> bool) -> bool {
    fn go(members: &[u32], start: usize, left: usize, acc: u32, visit: &mut impl FnMut(u32) -> bool) -> bool {
        if left == 0 {
            return visit(acc);
        }
        // need `left` more members from members[start..]
        for i in start..=members.len() - left {
            if !go(members, i + 1, left - 1, acc | members[i], visit) {
                return false;
            }
        }
        true
    }
    go(members, 0, k, 0, visit)
}

/// All unions of exactly `k` distinct members; `k = 0` gives `{∅}`.
pub fn k_unions(family: &Family, k: usize) -> Result<KUnionLadder> {
    k_unions_with_budget(family, k, &Budget::default())
}

pub fn k_unions_with_budget(family: &Family, k: usize, budget: &Budget) -> Result<KUnionLadder> {
    let n = family.len();
    if k > n {
        return Err(SetError::InvalidArgument(format!("k = {k} exceeds family size {n}")));
    }
    budget.check("k-unions", binomial(n, k))?;
    let mut out = Vec::new();
    for_each_k_union(family.bits(), k, &mut |u| {
        out.push(u);
        true
    });
    Ok(KUnionLadder {
        source: family.clone(),
        k,
        unions: Family::from_vec_unchecked(family.universe(), out),
    })
}

fn b_members(source: &Family, closed: &Family) -> BTreeSet<usize> {
    (0..=source.len())
        .filter(|&k| for_each_k_union(source.bits(), k, &mut |u| closed.contains_bits(u)))
        .collect()
}

/// `B_m`, measured against `close_n(U, m)`.
pub fn b_set(family: &Family, m: usize) -> Result<BSet> {
    if family.is_empty() {
        return Err(SetError::EmptyFamily);
    }
    let closed = iterate(family, m);
    Ok(BSet {
        m,
        members: b_members(family, &closed),
    })
}

/// `B_0, …, B_max_m` from a single pass over the chain.
pub fn b_ladder(family: &Family, max_m: usize) -> Result<Vec<BSet>> {
    if family.is_empty() {
        return Err(SetError::EmptyFamily);
    }
    let mut current = family.clone();
    let mut out = Vec::with_capacity(max_m + 1);
    for m in 0..=max_m {
        if m > 0 {
            current = step(&current);
        }
        out.push(BSet {
            m,
            members: b_members(family, &current),
        });
    }
    Ok(out)
}

/// Predicted `B_k` for a partition into `n` blocks, `k ≥ 2`:
/// `{0, …, 2^k} ∪ {n − 2^(k−1), …, n}`, clipped to `{0, …, n}`.
pub fn predicted_b_set(n: usize, k: usize) -> Option<BTreeSet<usize>> {
    if k < 2 {
        return None;
    }
    let low = 1usize.checked_shl(k as u32).unwrap_or(usize::MAX).min(n);
    let high_start = n.saturating_sub(1usize.checked_shl(k as u32 - 1).unwrap_or(usize::MAX));
    Some((0..=low).chain(high_start..=n).collect())
}

/// `g_n(k) = n − 3·2^(k−1)` for `k ≥ 1`.
pub fn gap(n: u64, k: u32) -> i128 {
    assert!((1..=120).contains(&k), "gap is defined for 1 <= k <= 120");
    n as i128 - 3 * (1i128 << (k - 1))
}

fn floor_log2(n: u64) -> u32 {
    u64::BITS - 1 - n.leading_zeros()
}

fn ceil_log2(n: u64) -> u32 {
    floor_log2(n) + u32::from(!n.is_power_of_two())
}

/// Steps needed to generate the algebra of an `n`-block partition.
pub fn steps_formula(n: u64) -> Result<u32> {
    match n {
        0 => Err(SetError::InvalidArgument("steps formula needs n >= 1".into())),
        1 | 2 => Ok(1),
        3 => Ok(2),
        _ => {
            let fl = floor_log2(n);
            if n <= 1 + 3 * (1u64 << (fl - 1)) {
                Ok(fl)
            } else {
                Ok(ceil_log2(n))
            }
        }
    }
}
