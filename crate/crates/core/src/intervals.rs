//! Exact algebra of the subsets of ℝ generated by open intervals.
//!
//! Every such set is a finite point set `P` together with finitely many
//! disjoint open intervals, `P ∪ (a_1, b_1) ∪ … ∪ (a_n, b_n)`. Endpoints are
//! exact rationals or ±∞.
//!
//! All three operations work the same way: collect the finite boundary values
//! of the operands, which cut the line into open gaps and single points on
//! which membership is constant, evaluate membership once per piece, and read
//! the canonical form back off the pieces. The canonical form merges touching
//! intervals, absorbs points lying inside an interval, and splices a point
//! `b` between `(a, b)` and `(b, c)` into `(a, c)`, so two sets are equal iff
//! their canonical forms are identical.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SetError};

pub type Rational = BigRational;

/// A rational number or one of the two infinities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtReal {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtReal {
    pub fn finite(self) -> Option<Rational> {
        match self {
            ExtReal::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    fn cmp_rational(&self, q: &Rational) -> Ordering {
        match self {
            ExtReal::NegInf => Ordering::Less,
            ExtReal::Finite(v) => v.cmp(q),
            ExtReal::PosInf => Ordering::Greater,
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(q: Rational) -> Self {
        ExtReal::Finite(q)
    }
}

impl From<i64> for ExtReal {
    fn from(v: i64) -> Self {
        ExtReal::Finite(Rational::from_integer(v.into()))
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" => Ok(ExtReal::NegInf),
            "+inf" | "inf" => Ok(ExtReal::PosInf),
            other => parse_rational(other).map(ExtReal::Finite),
        }
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || SetError::Parse(format!("`{s}` is not a rational of the form p/q"));
    let (num, den) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Lowest terms, always with an explicit denominator: `"-3/2"`, `"4/1"`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn format_ext(x: &ExtReal) -> String {
    match x {
        ExtReal::Finite(q) => format_rational(q),
        other => other.to_string(),
    }
}

/// An open interval `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpenInterval {
    lo: ExtReal,
    hi: ExtReal,
}

impl OpenInterval {
    pub fn new(lo: ExtReal, hi: ExtReal) -> Result<Self> {
        if lo >= hi {
            return Err(SetError::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(OpenInterval { lo, hi })
    }

    pub fn lo(&self) -> &ExtReal {
        &self.lo
    }

    pub fn hi(&self) -> &ExtReal {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.cmp_rational(x) == Ordering::Less && self.hi.cmp_rational(x) == Ordering::Greater
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Canonical `P ∪ ⋃ (a_i, b_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    points: Vec<Rational>,
    intervals: Vec<OpenInterval>,
}

impl Default for IntervalSet {
    fn default() -> Self {
        Self::empty()
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet {
            points: Vec::new(),
            intervals: Vec::new(),
        }
    }

    /// ℝ, stored as the single interval `(-inf, +inf)`.
    pub fn real_line() -> Self {
        IntervalSet {
            points: Vec::new(),
            intervals: vec![OpenInterval {
                lo: ExtReal::NegInf,
                hi: ExtReal::PosInf,
            }],
        }
    }

    pub fn open(lo: impl Into<ExtReal>, hi: impl Into<ExtReal>) -> Result<Self> {
        let iv = OpenInterval::new(lo.into(), hi.into())?;
        Ok(IntervalSet {
            points: Vec::new(),
            intervals: vec![iv],
        })
    }

    pub fn point(x: Rational) -> Self {
        IntervalSet {
            points: vec![x],
            intervals: Vec::new(),
        }
    }

    /// Canonical form of an arbitrary finite union of points and open
    /// intervals.
    pub fn normalize(points: Vec<Rational>, intervals: Vec<(ExtReal, ExtReal)>) -> Result<Self> {
        let intervals = intervals
            .into_iter()
            .map(|(lo, hi)| OpenInterval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        let raw = RawSet { points, intervals };
        let breaks = raw.boundaries();
        Ok(Self::from_pieces(breaks, |x| raw.contains(x)))
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn intervals(&self) -> &[OpenInterval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.intervals.is_empty()
    }

    pub fn is_real_line(&self) -> bool {
        *self == Self::real_line()
    }

    /// Membership: `x ∈ P` or `x` strictly inside some interval.
    pub fn contains(&self, x: &Rational) -> bool {
        if self.points.binary_search(x).is_ok() {
            return true;
        }
        // first interval whose upper end lies above x
        let i = self
            .intervals
            .partition_point(|iv| iv.hi.cmp_rational(x) != Ordering::Greater);
        self.intervals.get(i).is_some_and(|iv| iv.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let breaks = merged_boundaries(self, other);
        Self::from_pieces(breaks, |x| self.contains(x) || other.contains(x))
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let breaks = merged_boundaries(self, other);
        Self::from_pieces(breaks, |x| self.contains(x) && other.contains(x))
    }

    /// Complement within ℝ.
    pub fn complement(&self) -> IntervalSet {
        Self::from_pieces(boundaries(self), |x| !self.contains(x))
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let breaks = merged_boundaries(self, other);
        Self::from_pieces(breaks, |x| self.contains(x) && !other.contains(x))
    }

    /// `max(n, |P| + 2)` where `n` is the interval count: an upper bound on
    /// the steps needed to build the set from open intervals.
    pub fn construction_bound(&self) -> usize {
        self.intervals.len().max(self.points.len() + 2)
    }

    /// Whether the set is also generated by bounded open intervals: the
    /// outermost endpoints are both finite or both infinite. Pure point sets
    /// qualify.
    pub fn bounded_variant_ok(&self) -> bool {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(first), Some(last)) => first.lo.is_finite() == last.hi.is_finite(),
            _ => true,
        }
    }

    /// Finite boundary values in ascending order: points and finite
    /// endpoints.
    pub fn boundaries(&self) -> Vec<Rational> {
        boundaries(self)
    }

    /// Rebuilds the canonical form from a membership predicate that is
    /// constant on every open gap between consecutive `breaks`.
    fn from_pieces(breaks: Vec<Rational>, member: impl Fn(&Rational) -> bool) -> IntervalSet {
        let m = breaks.len();
        let gap_sample = |i: usize| -> Rational {
            match (i, m) {
                (_, 0) => Rational::zero(),
                (0, _) => &breaks[0] - Rational::one(),
                (i, m) if i == m => &breaks[m - 1] + Rational::one(),
                (i, _) => (&breaks[i - 1] + &breaks[i]) / Rational::from_integer(2.into()),
            }
        };
        let gap_lo = |i: usize| if i == 0 { ExtReal::NegInf } else { ExtReal::Finite(breaks[i - 1].clone()) };
        let gap_hi = |i: usize| if i == m { ExtReal::PosInf } else { ExtReal::Finite(breaks[i].clone()) };

        // pieces alternate gap_0, point_0, gap_1, …, point_{m-1}, gap_m
        let included: Vec<bool> = (0..2 * m + 1)
            .map(|j| if j % 2 == 0 { member(&gap_sample(j / 2)) } else { member(&breaks[j / 2]) })
            .collect();

        let mut points = Vec::new();
        let mut intervals = Vec::new();
        let mut j = 0;
        while j < included.len() {
            if !included[j] {
                j += 1;
                continue;
            }
            let start = j;
            while j < included.len() && included[j] {
                j += 1;
            }
            let end = j - 1;
            // a run has at most one point before its first gap and one after
            // its last
            let first_gap = if start % 2 == 0 { start } else { start + 1 };
            let last_gap = if end % 2 == 0 { end } else { end - 1 };
            if first_gap > end {
                points.push(breaks[start / 2].clone());
                continue;
            }
            if start % 2 == 1 {
                points.push(breaks[start / 2].clone());
            }
            intervals.push(OpenInterval {
                lo: gap_lo(first_gap / 2),
                hi: gap_hi(last_gap / 2),
            });
            if end % 2 == 1 {
                points.push(breaks[end / 2].clone());
            }
        }
        IntervalSet { points, intervals }
    }

    pub fn to_json_value(&self) -> IntervalSetJson {
        IntervalSetJson {
            points: self.points.iter().map(format_rational).collect(),
            intervals: self
                .intervals
                .iter()
                .map(|iv| IntervalJson {
                    lo: format_ext(&iv.lo),
                    hi: format_ext(&iv.hi),
                })
                .collect(),
        }
    }

    /// `{"points":["p/q",…],"intervals":[{"lo":…,"hi":…},…]}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("interval set serializes")
    }

    /// Parses and normalizes; the input need not be canonical.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: IntervalSetJson = serde_json::from_str(text).map_err(|e| SetError::Parse(e.to_string()))?;
        raw.to_interval_set()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let mut parts = Vec::new();
        if !self.points.is_empty() {
            let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
            parts.push(format!("{{{}}}", pts.join(", ")));
        }
        parts.extend(self.intervals.iter().map(|iv| iv.to_string()));
        f.write_str(&parts.join(" ∪ "))
    }
}

/// Unnormalized input: membership only.
struct RawSet {
    points: Vec<Rational>,
    intervals: Vec<OpenInterval>,
}

impl RawSet {
    fn contains(&self, x: &Rational) -> bool {
        self.points.contains(x) || self.intervals.iter().any(|iv| iv.contains(x))
    }

    fn boundaries(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.points.clone();
        for iv in &self.intervals {
            out.extend(iv.lo.as_finite().cloned());
            out.extend(iv.hi.as_finite().cloned());
        }
        out.sort();
        out.dedup();
        out
    }
}

fn boundaries(set: &IntervalSet) -> Vec<Rational> {
    let mut out: Vec<Rational> = set.points.clone();
    for iv in &set.intervals {
        out.extend(iv.lo.as_finite().cloned());
        out.extend(iv.hi.as_finite().cloned());
    }
    out.sort();
    out.dedup();
    out
}

fn merged_boundaries(a: &IntervalSet, b: &IntervalSet) -> Vec<Rational> {
    let mut out = boundaries(a);
    out.extend(boundaries(b));
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSetJson {
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub intervals: Vec<IntervalJson>,
}

impl IntervalSetJson {
    pub fn to_interval_set(&self) -> Result<IntervalSet> {
        let field = |name: String, e: SetError| SetError::Parse(format!("field `{name}`: {e}"));
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| parse_rational(p).map_err(|e| field(format!("points[{i}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        let intervals = self
            .intervals
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                let lo = iv.lo.parse().map_err(|e| field(format!("intervals[{i}].lo"), e))?;
                let hi = iv.hi.parse().map_err(|e| field(format!("intervals[{i}].hi"), e))?;
                OpenInterval::new(lo, hi)
                    .map(|v| (v.lo, v.hi))
                    .map_err(|e| field(format!("intervals[{i}]"), e))
            })
            .collect::<Result<Vec<_>>>()?;
        IntervalSet::normalize(points, intervals)
    }
}
