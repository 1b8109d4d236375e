//! Families of subsets of a finite universe, closed step by step under
//! union, intersection and complement.
//!
//! Subsets of `{1, …, n}` are bit vectors (element `i` is bit `i − 1`) and a
//! [`Family`] is a sorted, duplicate-free list of them. Every operation that
//! returns a family returns it in this canonical order.

pub mod budget;
pub mod cli;
pub mod closure;
pub mod error;
pub mod family;
pub mod intervals;
pub mod minimal;
pub mod partition;
pub mod separability;
pub mod steps;

pub use budget::Budget;
pub use closure::{close_fixpoint, close_n, close_once, is_algebra, steps_to, StepCount, StepTrace};
pub use error::{Result, SetError};
pub use family::{ElementSet, Family, Universe};
pub use intervals::{ExtReal, IntervalSet, OpenInterval, Rational};
pub use minimal::{is_n_minimal_constructible, is_n_minimal_fat, MinimalityReport};
pub use partition::{algebra_from_partition, atoms, partition_from_algebra, Partition};
pub use separability::{equivalence_classes, separable, SeparabilityClasses};
pub use steps::{b_set, k_unions, steps_formula};
