//! Scaling identities, the ultrametric inequality for bounded spaces, and
//! bound curves for scale-stabilizer probes.
//!
//! The `check_*` functions compute both sides exactly and return
//! [`CloudError::IdentityViolated`] when they disagree. The identities hold
//! for every finite metric space, so a violation means a solver defect.

use crate::constructions::{ConstructionError, FamilySpec};
use crate::rational::{self, Rational};
use crate::search::{gh_exact, gh_lower_bound, gh_upper_bound_greedy, GhResult, SolveStatus, DEFAULT_RESTARTS};
use crate::space::{scale, FiniteMetricSpace, SpaceError};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write;
use thiserror::Error;

/// Largest family instance accepted by [`stabilizer_probe`].
pub const PROBE_MAX_POINTS: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CloudError {
    #[error("search stopped at its budget with bounds [{}, {}]", rational::format(.lower), rational::format(.upper))]
    SearchIncomplete { lower: Rational, upper: Rational },
    #[error("{check}: {} != {}", rational::format(.left), rational::format(.right))]
    IdentityViolated { check: &'static str, left: Rational, right: Rational },
    #[error("scale factor must be positive, got {}", rational::format(.0))]
    NonPositiveScale(Rational),
    #[error("family instance has {0} points, more than {PROBE_MAX_POINTS}")]
    FamilyTooLarge(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Both sides of a checked relation. For identities `left == right`; for the
/// ultrametric inequality `left <= right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub left: Rational,
    pub right: Rational,
}

/// Distance to the one-point space, `diam X / 2`.
pub fn dist_to_point(x: &FiniteMetricSpace) -> Rational {
    x.diameter() * rational::half()
}

fn exact_value(result: GhResult) -> Result<Rational, CloudError> {
    match result.status {
        SolveStatus::Exact => Ok(result.value),
        SolveStatus::LowerUpper { lower, upper } => Err(CloudError::SearchIncomplete { lower, upper }),
    }
}

/// `|λX, μX| = |λ − μ| · diam X / 2`.
pub fn check_scaling_identity(
    x: &FiniteMetricSpace,
    lambda: &Rational,
    mu: &Rational,
    budget: Option<u64>,
) -> Result<CheckReport, CloudError> {
    let left = exact_value(gh_exact(&scale(x, lambda)?, &scale(x, mu)?, budget))?;
    let right = rational::abs_diff(lambda, mu) * dist_to_point(x);
    if left != right {
        return Err(CloudError::IdentityViolated { check: "scaling identity", left, right });
    }
    Ok(CheckReport { left, right })
}

/// `|λX, λY| = λ · |X, Y|` for `λ > 0`.
pub fn check_homogeneity(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    lambda: &Rational,
    budget: Option<u64>,
) -> Result<CheckReport, CloudError> {
    if !lambda.is_positive() {
        return Err(CloudError::NonPositiveScale(lambda.clone()));
    }
    let left = exact_value(gh_exact(&scale(x, lambda)?, &scale(y, lambda)?, budget))?;
    let right = lambda * exact_value(gh_exact(x, y, budget))?;
    if left != right {
        return Err(CloudError::IdentityViolated { check: "homogeneity", left, right });
    }
    Ok(CheckReport { left, right })
}

/// `|X₁, X₂| ≤ max(|X₁, Δ₁|, |X₂, Δ₁|)`.
pub fn check_ultrametric(
    x1: &FiniteMetricSpace,
    x2: &FiniteMetricSpace,
    budget: Option<u64>,
) -> Result<CheckReport, CloudError> {
    let left = exact_value(gh_exact(x1, x2, budget))?;
    let right = dist_to_point(x1).max(dist_to_point(x2));
    if left > right {
        return Err(CloudError::IdentityViolated { check: "ultrametric inequality", left, right });
    }
    Ok(CheckReport { left, right })
}

/// Certified bounds on `|X, λX|` at one scale factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbePoint {
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub lambda: Rational,
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub lower: Rational,
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub upper: Rational,
}

/// Lower (diameter gap) and upper (local search) bounds on `|X, λX|` for
/// each `λ` in the grid, sorted by `λ`. Nothing here is an exact value.
pub fn stabilizer_probe(family: &FamilySpec, grid: &[Rational]) -> Result<Vec<ProbePoint>, CloudError> {
    let x = family.build()?;
    if x.len() > PROBE_MAX_POINTS {
        return Err(CloudError::FamilyTooLarge(x.len()));
    }
    if let Some(bad) = grid.iter().find(|l| !l.is_positive()) {
        return Err(CloudError::NonPositiveScale(bad.clone()));
    }
    let mut points = grid
        .par_iter()
        .map(|lambda| {
            let scaled = scale(&x, lambda)?;
            let lower = gh_lower_bound(&x, &scaled);
            let (upper, _) = gh_upper_bound_greedy(&x, &scaled, DEFAULT_RESTARTS);
            Ok(ProbePoint { lambda: lambda.clone(), lower, upper })
        })
        .collect::<Result<Vec<_>, CloudError>>()?;
    points.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    Ok(points)
}

/// `start, start + step, …` up to and including `end`.
pub fn lambda_grid(start: &Rational, end: &Rational, step: &Rational) -> Result<Vec<Rational>, CloudError> {
    if !step.is_positive() {
        return Err(CloudError::NonPositiveScale(step.clone()));
    }
    let mut grid = Vec::new();
    let mut lambda = start.clone();
    while &lambda <= end {
        grid.push(lambda.clone());
        lambda += step;
    }
    Ok(grid)
}

/// CSV with header `lambda,lower,upper`, one row per probe point.
pub fn probe_csv(points: &[ProbePoint]) -> String {
    let mut out = String::from("lambda,lower,upper\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{}",
            rational::format(&p.lambda),
            rational::format(&p.lower),
            rational::format(&p.upper)
        );
    }
    out
}

/// Whether every point satisfies `lower <= upper` and the point at `λ = 1`,
/// if present, is `(0, 0)`.
pub fn probe_is_consistent(points: &[ProbePoint]) -> bool {
    points.iter().all(|p| {
        p.lower <= p.upper && (p.lambda != rational::one() || (p.lower.is_zero() && p.upper.is_zero()))
    })
}
