//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's closure or partition kernels.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use setforge::{Family, Universe};

pub type Sets = BTreeSet<u32>;

pub fn universe(n: usize) -> Universe {
    Universe::new(n).unwrap()
}

pub fn family(n: usize, sets: &[&[i64]]) -> Family {
    let sets: Vec<Vec<i64>> = sets.iter().map(|s| s.to_vec()).collect();
    Family::normalize_permissive(universe(n), &sets).unwrap()
}

pub fn sets_of(f: &Family) -> Sets {
    f.bits().iter().copied().collect()
}

pub fn mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// One construction step, written as the literal definition.
pub fn naive_step(sets: &Sets, n: usize) -> Sets {
    let mut out = Sets::new();
    for &a in sets {
        out.insert(!a & mask(n));
        for &b in sets {
            out.insert(a | b);
            out.insert(a & b);
        }
    }
    out
}

pub fn naive_close_n(sets: &Sets, n: usize, steps: usize) -> Sets {
    let mut cur = sets.clone();
    for _ in 0..steps {
        cur = naive_step(&cur, n);
    }
    cur
}

pub fn naive_fixpoint(sets: &Sets, n: usize) -> Sets {
    let mut cur = sets.clone();
    loop {
        let next = naive_step(&cur, n);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Every set partition of `{1..n}` as block bitmasks, by recursive insertion.
pub fn all_partitions(n: usize) -> Vec<Vec<u32>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        let bit = 1u32 << i;
        for j in 0..blocks.len() {
            blocks[j] |= bit;
            go(i + 1, n, blocks, out);
            blocks[j] &= !bit;
        }
        blocks.push(bit);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// All unions of blocks.
pub fn unions_of_blocks(blocks: &[u32]) -> Sets {
    (0u64..1 << blocks.len())
        .map(|sel| {
            blocks
                .iter()
                .enumerate()
                .filter(|(i, _)| sel & (1 << i) != 0)
                .fold(0u32, |acc, (_, &b)| acc | b)
        })
        .collect()
}

/// Closed under complement, pairwise union and pairwise intersection.
pub fn naive_is_algebra(sets: &Sets, n: usize) -> bool {
    !sets.is_empty() && naive_step(sets, n) == *sets
}

/// Intersection of every algebra over `{1..n}` containing `sets`; every
/// finite algebra is the block-union algebra of some partition.
pub fn smallest_algebra_containing(sets: &Sets, n: usize) -> Sets {
    let mut acc: Option<Sets> = None;
    for p in all_partitions(n) {
        let a = unions_of_blocks(&p);
        if sets.is_subset(&a) {
            acc = Some(match acc {
                None => a,
                Some(prev) => prev.intersection(&a).copied().collect(),
            });
        }
    }
    acc.expect("the power set always qualifies")
}

pub fn random_family(rng: &mut impl Rng, n: usize, min: usize, max: usize) -> Family {
    let size = rng.gen_range(min..=max);
    let bits: Vec<u32> = (0..size).map(|_| rng.gen_range(0..=mask(n))).collect();
    Family::from_bits(universe(n), bits).unwrap()
}

pub fn random_partition_blocks(rng: &mut impl Rng, n: usize) -> Vec<u32> {
    let mut blocks: Vec<u32> = Vec::new();
    for i in 0..n {
        let j = rng.gen_range(0..=blocks.len());
        if j == blocks.len() {
            blocks.push(1 << i);
        } else {
            blocks[j] |= 1 << i;
        }
    }
    blocks
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
