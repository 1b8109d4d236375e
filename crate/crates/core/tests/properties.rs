mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::collection::vec;
use proptest::prelude::*;
use setforge::closure::{close_fixpoint, close_n, close_once, is_algebra, steps_to, StepCount};
use setforge::intervals::{ExtReal, IntervalSet};
use setforge::minimal::{is_n_minimal_constructible, is_n_minimal_fat};
use setforge::partition::{algebra_from_partition, atoms, partition_from_algebra, Partition};
use setforge::separability::{equivalence_classes, separable};
use setforge::steps::{b_set, gap, predicted_b_set};
use setforge::{ElementSet, Family};

fn family_strategy(max_n: usize, max_len: usize) -> impl Strategy<Value = Family> {
    (1..=max_n).prop_flat_map(move |n| {
        vec(0..=mask(n), 1..=max_len).prop_map(move |bits| Family::from_bits(universe(n), bits).unwrap())
    })
}

fn two_families(max_n: usize, max_len: usize) -> impl Strategy<Value = (Family, Family)> {
    (1..=max_n).prop_flat_map(move |n| {
        let f = move |bits: Vec<u32>| Family::from_bits(universe(n), bits).unwrap();
        (vec(0..=mask(n), 1..=max_len).prop_map(f), vec(0..=mask(n), 1..=max_len).prop_map(f))
    })
}

/// Restricted-growth labels, i.e. an arbitrary partition of `{1..n}`.
fn partition_strategy(max_n: usize) -> impl Strategy<Value = Partition> {
    (1..=max_n)
        .prop_flat_map(|n| vec(0..n, n))
        .prop_map(|raw| {
            let mut labels = Vec::with_capacity(raw.len());
            let mut next = 0;
            for r in raw {
                let l = r.min(next);
                if l == next {
                    next += 1;
                }
                labels.push(l);
            }
            Partition::from_restricted_growth(universe(labels.len()), &labels).unwrap()
        })
}

fn subfamily(f: &Family, keep: &[bool]) -> Family {
    Family::from_bits(
        f.universe(),
        f.bits().iter().zip(keep.iter().cycle()).filter(|(_, &k)| k).map(|(&b, _)| b),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn chain_is_monotone(u in family_strategy(6, 6), k in 0usize..4) {
        prop_assert!(close_n(&u, k).unwrap().is_subfamily_of(&close_n(&u, k + 1).unwrap()));
    }

    #[test]
    fn subfamilies_build_less(u in family_strategy(6, 6), keep in vec(any::<bool>(), 6), k in 0usize..4) {
        let h = subfamily(&u, &keep);
        prop_assume!(!h.is_empty());
        prop_assert!(close_n(&h, k).unwrap().is_subfamily_of(&close_n(&u, k).unwrap()));
    }

    #[test]
    fn union_and_intersection_bounds((u, h) in two_families(5, 5), k in 0usize..4) {
        let uk = close_n(&u, k).unwrap();
        let hk = close_n(&h, k).unwrap();
        let joined = close_n(&u.union(&h).unwrap(), k).unwrap();
        prop_assert!(uk.union(&hk).unwrap().is_subfamily_of(&joined));
        let met = u.intersection(&h).unwrap();
        if !met.is_empty() {
            prop_assert!(close_n(&met, k).unwrap().is_subfamily_of(&uk.intersection(&hk).unwrap()));
        }
    }

    #[test]
    fn one_step_size_bound(u in family_strategy(8, 12)) {
        let c = close_once(&u).unwrap();
        prop_assert!(c.len() <= u.len() * u.len() + u.len());
    }

    #[test]
    fn separable_families_generate_power_set(u in family_strategy(4, 4)) {
        let n = u.universe().size();
        let separated = (1..=n).all(|a| (a + 1..=n).all(|b| separable(&u, a, b).unwrap()));
        prop_assume!(separated);
        prop_assert_eq!(close_fixpoint(&u).unwrap().0.len(), 1 << n);
    }
}

proptest! {
    #[test]
    fn closure_matches_naive_oracle(u in family_strategy(7, 6), k in 0usize..4) {
        let n = u.universe().size();
        prop_assert_eq!(sets_of(&close_n(&u, k).unwrap()), naive_close_n(&sets_of(&u), n, k));
    }

    #[test]
    fn fixpoint_is_smallest_algebra(u in family_strategy(4, 5)) {
        let n = u.universe().size();
        let (fix, trace) = close_fixpoint(&u).unwrap();
        prop_assert!(is_algebra(&fix));
        prop_assert!(naive_is_algebra(&sets_of(&fix), n));
        prop_assert!(u.is_subfamily_of(&fix));
        prop_assert_eq!(sets_of(&fix), smallest_algebra_containing(&sets_of(&u), n));
        prop_assert!(fix.contains_bits(0) && fix.contains_bits(mask(n)));

        let sizes: Vec<usize> = trace.entries.iter().map(|e| e.1).collect();
        prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(sizes[sizes.len() - 1], sizes[sizes.len() - 2]);
        prop_assert_eq!(close_n(&u, trace.fixpoint_index).unwrap(), fix.clone());
    }

    #[test]
    fn algebras_are_their_own_step(u in family_strategy(5, 5)) {
        let (fix, trace) = close_fixpoint(&u).unwrap();
        prop_assert_eq!(close_once(&fix).unwrap(), fix.clone());
        prop_assert_eq!(close_fixpoint(&fix).unwrap().1.fixpoint_index, 0);
        prop_assert!(trace.fixpoint_index > 0 || is_algebra(&u));
    }

    #[test]
    fn steps_to_is_least((u, h) in two_families(4, 4)) {
        let (fix, _) = close_fixpoint(&u).unwrap();
        match steps_to(&u, &h).unwrap() {
            StepCount::Finite(s) => {
                prop_assert!(h.is_subfamily_of(&close_n(&u, s).unwrap()));
                if s > 0 {
                    prop_assert!(!h.is_subfamily_of(&close_n(&u, s - 1).unwrap()));
                }
            }
            StepCount::Infinite => prop_assert!(!h.is_subfamily_of(&fix)),
        }
        prop_assert_eq!(steps_to(&u, &u).unwrap(), StepCount::Finite(0));
    }

    #[test]
    fn partition_round_trip(p in partition_strategy(5)) {
        let a = algebra_from_partition(&p).unwrap();
        prop_assert_eq!(a.len(), 1 << p.len());
        prop_assert_eq!(sets_of(&a), unions_of_blocks(&p.blocks().iter().map(|b| b.bits()).collect::<Vec<_>>()));
        prop_assert_eq!(partition_from_algebra(&a).unwrap(), p);
    }

    #[test]
    fn partition_separability_survives_closure(p in partition_strategy(6)) {
        let f = p.to_family();
        let (fix, _) = close_fixpoint(&f).unwrap();
        let n = p.universe().size();
        for a in 1..=n {
            for b in 1..=n {
                prop_assert_eq!(separable(&f, a, b).unwrap(), separable(&fix, a, b).unwrap());
            }
        }
    }

    #[test]
    fn classes_match_pairwise_separability(u in family_strategy(6, 5)) {
        let c = equivalence_classes(&u);
        let n = u.universe().size();
        for a in 1..=n {
            for b in 1..=n {
                let same = c.class_of(a) == c.class_of(b);
                prop_assert_eq!(same, !separable(&u, a, b).unwrap());
            }
        }
    }

    #[test]
    fn atoms_generate_the_fixpoint(u in family_strategy(6, 5)) {
        let h = atoms(&u).unwrap().to_family();
        let (fix, _) = close_fixpoint(&u).unwrap();
        prop_assert!(h.is_subfamily_of(&fix));
        prop_assert_eq!(close_n(&h, u.len()).unwrap(), fix.clone());
        prop_assert_eq!(close_fixpoint(&h).unwrap().0, fix);
        // atoms are the separability classes by another route
        prop_assert_eq!(atoms(&u).unwrap(), equivalence_classes(&u).blocks);
    }

    #[test]
    fn b_sets_grow_and_predict(p in partition_strategy(9), m in 0usize..5) {
        let f = p.to_family();
        let n = f.len();
        let now = b_set(&f, m).unwrap().members;
        let next = b_set(&f, m + 1).unwrap().members;
        prop_assert!(now.is_subset(&next));
        let (fix, _) = close_fixpoint(&f).unwrap();
        if m >= 2 {
            let full: BTreeSet<usize> = (0..=n).collect();
            let done = close_n(&f, m).unwrap() == fix;
            prop_assert_eq!(done, full.is_subset(&now));
            prop_assert_eq!(done, gap(n as u64, m as u32) <= 1);
            prop_assert_eq!(Some(now), predicted_b_set(n, m));
        }
    }
}

/// Brute force over every proper subfamily.
fn minimal_by_definition(u: &Family, n: usize) -> bool {
    let len = u.len();
    (0u32..(1 << len) - 1).all(|sel| {
        let h = Family::from_bits(
            u.universe(),
            u.bits().iter().enumerate().filter(|(i, _)| sel & (1 << i) != 0).map(|(_, &b)| b),
        )
        .unwrap();
        let hn = naive_close_n(&sets_of(&h), u.universe().size(), n);
        !sets_of(u).is_subset(&hn)
    })
}

proptest! {
    #[test]
    fn single_removals_decide_minimality(u in family_strategy(4, 5), n in 1usize..4) {
        prop_assert_eq!(is_n_minimal_constructible(&u, n).unwrap().is_minimal, minimal_by_definition(&u, n));
    }

    #[test]
    fn minimality_is_downward_closed(u in family_strategy(5, 5), n in 1usize..4) {
        let here = is_n_minimal_constructible(&u, n).unwrap().is_minimal;
        let next = is_n_minimal_constructible(&u, n + 1).unwrap().is_minimal;
        prop_assert!(!next || here);
    }

    #[test]
    fn empty_or_full_member_breaks_minimality(u in family_strategy(5, 5), full in any::<bool>(), n in 2usize..4) {
        let x = u.universe();
        let extra = if full { x.full_set() } else { x.empty_set() };
        let v = u.with(extra);
        prop_assume!(v.len() > 1);
        prop_assert!(!is_n_minimal_constructible(&v, n).unwrap().is_minimal);
    }

    #[test]
    fn minimality_is_hereditary(u in family_strategy(5, 5), keep in vec(any::<bool>(), 5), n in 1usize..4) {
        prop_assume!(is_n_minimal_constructible(&u, n).unwrap().is_minimal);
        prop_assert!(is_n_minimal_constructible(&subfamily(&u, &keep), n).unwrap().is_minimal);
    }

    #[test]
    fn minimal_implies_fat(u in family_strategy(5, 5), n in 1usize..4) {
        let minimal = is_n_minimal_constructible(&u, n).unwrap().is_minimal;
        let fat = is_n_minimal_fat(&u, n).unwrap().is_minimal;
        prop_assert!(!minimal || fat);
        if n == 1 {
            prop_assert_eq!(minimal, fat);
        }
    }

    #[test]
    fn witness_iff_not_minimal(u in family_strategy(5, 5), n in 1usize..4) {
        let r = is_n_minimal_constructible(&u, n).unwrap();
        prop_assert_eq!(r.is_minimal, r.witness.is_none());
        if let Some(w) = r.witness {
            prop_assert!(u.contains(w.removed));
            prop_assert!(u.is_subfamily_of(&w.rebuilt));
        }
    }

    #[test]
    fn partitions_are_one_minimal_unless_two_blocks(p in partition_strategy(6)) {
        let minimal = is_n_minimal_constructible(&p.to_family(), 1).unwrap().is_minimal;
        // {B, X-B}: each block is the complement of the other
        prop_assert_eq!(minimal, p.len() != 2);
    }

    #[test]
    fn family_json_round_trips(u in family_strategy(10, 8)) {
        let text = u.to_json();
        let back = Family::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, u);
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let u = Family::from_bits(universe(12), (0..40u32).map(|i| i.wrapping_mul(2654435761u32) & mask(12))).unwrap();
    let pooled = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| close_fixpoint(&u).unwrap())
    };
    assert_eq!(pooled(1), pooled(4));
}

#[test]
fn separable_example_needs_no_partition() {
    let u = family(3, &[&[1], &[2]]);
    assert_eq!(close_fixpoint(&u).unwrap().0, Family::power_set(universe(3)));
    assert!(Partition::from_family(&u).is_err());
}

#[test]
fn element_set_basics() {
    let x = universe(4);
    let a = ElementSet::from_elements(x, [1, 3]).unwrap();
    assert_eq!(a.complement().to_string(), "{2,4}");
    assert!(ElementSet::from_elements(x, [5]).is_err());
}

// ---- intervals ----

#[derive(Debug, Clone)]
enum Expr {
    Gen(Option<i64>, Option<i64>),
    Point(i64),
    Union(Box<Expr>, Box<Expr>),
    Inter(Box<Expr>, Box<Expr>),
    Compl(Box<Expr>),
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let end = prop_oneof![1 => Just(None), 4 => (-6i64..=6).prop_map(Some)];
    let leaf = prop_oneof![
        4 => (end.clone(), end).prop_filter_map("empty interval", |(a, b)| match (a, b) {
            (Some(a), Some(b)) if a >= b => None,
            _ => Some(Expr::Gen(a, b)),
        }),
        1 => (-6i64..=6).prop_map(Expr::Point),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Union(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Inter(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Expr::Compl(Box::new(a))),
        ]
    })
}

fn bound(v: Option<i64>, inf: ExtReal) -> ExtReal {
    v.map_or(inf, |v| ExtReal::Finite(q(v, 1)))
}

fn eval(e: &Expr) -> IntervalSet {
    match e {
        Expr::Gen(a, b) => IntervalSet::open(bound(*a, ExtReal::NegInf), bound(*b, ExtReal::PosInf)).unwrap(),
        Expr::Point(p) => IntervalSet::point(q(*p, 1)),
        Expr::Union(a, b) => eval(a).union(&eval(b)),
        Expr::Inter(a, b) => eval(a).intersect(&eval(b)),
        Expr::Compl(a) => eval(a).complement(),
    }
}

/// Membership of `k/2`.
fn member(e: &Expr, k: i64) -> bool {
    match e {
        Expr::Gen(a, b) => a.is_none_or(|a| 2 * a < k) && b.is_none_or(|b| k < 2 * b),
        Expr::Point(p) => 2 * p == k,
        Expr::Union(a, b) => member(a, k) || member(b, k),
        Expr::Inter(a, b) => member(a, k) && member(b, k),
        Expr::Compl(a) => !member(a, k),
    }
}

proptest! {
    #[test]
    fn interval_membership_matches_oracle(e in expr_strategy()) {
        let s = eval(&e);
        // integers in [-6, 6] are the only boundaries; half-integers cover
        // every piece between and beyond them
        for k in -14..=14 {
            prop_assert_eq!(s.contains(&q(k, 2)), member(&e, k), "at {}/2 in {}", k, s);
        }
        // neighbours may share an endpoint only when that point is excluded
        for w in s.intervals().windows(2) {
            prop_assert!(w[0].hi() <= w[1].lo());
            if w[0].hi() == w[1].lo() {
                prop_assert!(!s.contains(w[0].hi().as_finite().unwrap()));
            }
        }
        prop_assert!(s.points().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(s.points().iter().all(|p| !s.intervals().iter().any(|i| i.contains(p))));
    }

    #[test]
    fn interval_laws(a in expr_strategy(), b in expr_strategy()) {
        let (a, b) = (eval(&a), eval(&b));
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.intersect(&b).complement(), a.complement().union(&b.complement()));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.union(&a.intersect(&b)), a.clone());
        prop_assert_eq!(a.intersect(&a.union(&b)), a.clone());
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&IntervalSet::empty()), a.clone());
        prop_assert!(a.intersect(&IntervalSet::empty()).is_empty());
    }

    #[test]
    fn equal_sets_serialize_identically(a in expr_strategy(), b in expr_strategy()) {
        let (sa, sb) = (eval(&a), eval(&b));
        let same = (-14..=14).all(|k| member(&a, k) == member(&b, k));
        prop_assert_eq!(same, sa.to_json() == sb.to_json());
    }

    #[test]
    fn empty_interior_means_finite(e in expr_strategy()) {
        let s = eval(&e);
        if s.intervals().is_empty() {
            let members = (-14..=14).filter(|&k| s.contains(&q(k, 2))).count();
            prop_assert_eq!(members, s.points().len());
        }
        prop_assert_eq!(s.construction_bound(), s.intervals().len().max(s.points().len() + 2));
    }
}
