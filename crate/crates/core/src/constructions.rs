//! Finite truncations of the example spaces: integer lines, segment grids,
//! the segment with an extra L1 point, geometric and power sequences, and
//! segments with a removed gap.

use crate::rational::{self, Rational};
use crate::space::{validate, FiniteMetricSpace, ValidationError};
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("step {} does not evenly divide {}", rational::format(.step), rational::format(.length))]
    StepDoesNotDivide { step: Rational, length: Rational },
    #[error("gap [{}, {}] must lie strictly inside (-{n}, {n})", rational::format(.low), rational::format(.high))]
    GapOutOfRange { low: Rational, high: Rational, n: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Built-in exponent sequences for [`phi_powers`]. Both have consecutive
/// differences that grow without bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    /// `φ(n) = n²`
    Square,
    /// `φ(n) = 2ⁿ`
    PowerOfTwo,
}

impl Exponent {
    pub fn at(self, n: u32) -> u32 {
        match self {
            Exponent::Square => n * n,
            Exponent::PowerOfTwo => 1 << n,
        }
    }
}

/// A parameterized example family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Integers { n: u32 },
    SegmentGrid { n: u32, h: Rational },
    RTildeGrid { n: u32, h: Rational },
    Geometric { p: u32, n: u32 },
    PhiPowers { q: Rational, exponent: Exponent, n: u32 },
    GappedSegment { n: u32, a: Rational, d: Rational, h: Rational },
}

impl FamilySpec {
    pub fn build(&self) -> Result<FiniteMetricSpace, ConstructionError> {
        match self {
            FamilySpec::Integers { n } => integers(*n),
            FamilySpec::SegmentGrid { n, h } => segment_grid(*n, h),
            FamilySpec::RTildeGrid { n, h } => rtilde_grid(*n, h),
            FamilySpec::Geometric { p, n } => geometric(*p, *n),
            FamilySpec::PhiPowers { q, exponent, n } => phi_powers(q, *exponent, *n),
            FamilySpec::GappedSegment { n, a, d, h } => gapped_segment(*n, a, d, h),
        }
    }
}

fn require_positive(name: &str, value: u32) -> Result<(), ConstructionError> {
    if value == 0 {
        return Err(ConstructionError::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(())
}

fn line(points: &[Rational]) -> Result<FiniteMetricSpace, ConstructionError> {
    Ok(FiniteMetricSpace::from_line(points)?)
}

/// `{-n, …, n}` with the line metric.
pub fn integers(n: u32) -> Result<FiniteMetricSpace, ConstructionError> {
    require_positive("n", n)?;
    let n = i64::from(n);
    line(&(-n..=n).map(rational::int).collect::<Vec<_>>())
}

/// Coordinates `-n, -n + h, …, n`.
pub fn grid_points(n: u32, h: &Rational) -> Result<Vec<Rational>, ConstructionError> {
    require_positive("n", n)?;
    if !h.is_positive() {
        return Err(ConstructionError::InvalidParameter("step must be positive".into()));
    }
    let length = rational::int(2 * i64::from(n));
    let steps = &length / h;
    if !steps.is_integer() {
        return Err(ConstructionError::StepDoesNotDivide { step: h.clone(), length });
    }
    let start = -rational::int(i64::from(n));
    let count = steps.to_integer();
    let mut points = Vec::new();
    let mut k = BigInt::zero();
    while k <= count {
        points.push(&start + h * Rational::from_integer(k.clone()));
        k += 1;
    }
    Ok(points)
}

/// The segment `[-n, n]` sampled with step `h`.
pub fn segment_grid(n: u32, h: &Rational) -> Result<FiniteMetricSpace, ConstructionError> {
    line(&grid_points(n, h)?)
}

/// Label of the extra point of [`rtilde_grid`].
pub const RTILDE_APEX: &str = "(0,1)";

/// [`segment_grid`] placed on the x-axis of the L1 plane, plus the point
/// `(0, 1)`, which sits at `|x| + 1` from grid point `x`. The extra point
/// is last.
pub fn rtilde_grid(n: u32, h: &Rational) -> Result<FiniteMetricSpace, ConstructionError> {
    let points = grid_points(n, h)?;
    let total = points.len() + 1;
    let mut labels: Vec<String> = points.iter().map(rational::format).collect();
    labels.push(RTILDE_APEX.to_string());
    let coord = |i: usize| -> (Rational, Rational) {
        if i < points.len() {
            (points[i].clone(), rational::zero())
        } else {
            (rational::zero(), rational::one())
        }
    };
    let matrix = (0..total)
        .map(|i| (0..total).map(|j| l1(&coord(i), &coord(j))).collect())
        .collect();
    Ok(validate(labels, matrix)?)
}

pub(crate) fn l1(p: &(Rational, Rational), q: &(Rational, Rational)) -> Rational {
    rational::abs_diff(&p.0, &q.0) + rational::abs_diff(&p.1, &q.1)
}

/// `{p^k : -n ≤ k ≤ n}` with the line metric.
pub fn geometric(p: u32, n: u32) -> Result<FiniteMetricSpace, ConstructionError> {
    if p < 2 {
        return Err(ConstructionError::InvalidParameter("p must be at least 2".into()));
    }
    require_positive("n", n)?;
    let base = Rational::from_integer(BigInt::from(p));
    let n = n as i32;
    let points: Vec<Rational> = (-n..=n).map(|k| power(&base, k)).collect();
    line(&points)
}

fn power(base: &Rational, exponent: i32) -> Rational {
    if exponent >= 0 {
        Pow::pow(base, exponent.unsigned_abs())
    } else {
        Rational::one() / Pow::pow(base, exponent.unsigned_abs())
    }
}

/// `{q^φ(k) : 1 ≤ k ≤ n}` with the line metric.
pub fn phi_powers(q: &Rational, exponent: Exponent, n: u32) -> Result<FiniteMetricSpace, ConstructionError> {
    if q <= &Rational::one() {
        return Err(ConstructionError::InvalidParameter("q must exceed 1".into()));
    }
    require_positive("n", n)?;
    let points: Vec<Rational> = (1..=n).map(|k| Pow::pow(q, exponent.at(k))).collect();
    line(&points)
}

/// [`segment_grid`] with every point strictly inside `(a - d, a + d)`
/// removed. The closed gap `[a - d, a + d]` must lie inside `(-n, n)`.
pub fn gapped_segment(
    n: u32,
    a: &Rational,
    d: &Rational,
    h: &Rational,
) -> Result<FiniteMetricSpace, ConstructionError> {
    require_positive("n", n)?;
    if !d.is_positive() {
        return Err(ConstructionError::InvalidParameter("gap radius must be positive".into()));
    }
    let (low, high) = (a - d, a + d);
    let bound = rational::int(i64::from(n));
    if low <= -bound.clone() || high >= bound {
        return Err(ConstructionError::GapOutOfRange { low, high, n });
    }
    let points: Vec<Rational> = grid_points(n, h)?
        .into_iter()
        .filter(|x| !(x > &low && x < &high))
        .collect();
    line(&points)
}
