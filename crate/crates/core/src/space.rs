//! Finite metric spaces with exact distances.

use crate::rational::{self, Rational};
use num_traits::{Signed, Zero};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

/// One failed metric axiom, located by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    LabelCountMismatch { labels: usize, rows: usize },
    NonSquare { row: usize, len: usize, expected: usize },
    DuplicateLabel(String),
    NonzeroDiagonalAt(usize),
    AsymmetricAt(usize, usize),
    NonpositiveOffDiagonalAt(usize, usize),
    TriangleViolationAt(usize, usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "space has no points"),
            Violation::LabelCountMismatch { labels, rows } => {
                write!(f, "{labels} labels but {rows} matrix rows")
            }
            Violation::NonSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            Violation::DuplicateLabel(label) => write!(f, "duplicate label {label:?}"),
            Violation::NonzeroDiagonalAt(i) => write!(f, "nonzero diagonal at ({i},{i})"),
            Violation::AsymmetricAt(i, j) => write!(f, "asymmetric at ({i},{j})"),
            Violation::NonpositiveOffDiagonalAt(i, j) => {
                write!(f, "nonpositive off-diagonal at ({i},{j})")
            }
            Violation::TriangleViolationAt(i, j, k) => {
                write!(f, "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})")
            }
        }
    }
}

/// Every axiom violated by a candidate matrix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid metric space: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError(pub Vec<Violation>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("scale factor must be nonnegative, got {}", rational::format(.0))]
    NegativeScale(Rational),
    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("simplex size must be at least 1")]
    EmptySimplex,
    #[error("realization subsets must be nonempty")]
    EmptySubset,
}

/// A validated finite metric space: distinct labels and a full symmetric
/// distance matrix satisfying the metric axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

/// Checks the metric axioms and returns the space, or every violation found.
pub fn validate(
    labels: Vec<String>,
    matrix: Vec<Vec<Rational>>,
) -> Result<FiniteMetricSpace, ValidationError> {
    let n = matrix.len();
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::Empty);
    }
    if labels.len() != n {
        violations.push(Violation::LabelCountMismatch { labels: labels.len(), rows: n });
    }
    for (row, entries) in matrix.iter().enumerate() {
        if entries.len() != n {
            violations.push(Violation::NonSquare { row, len: entries.len(), expected: n });
        }
    }
    let mut seen = HashSet::new();
    for label in &labels {
        if !seen.insert(label.as_str()) {
            violations.push(Violation::DuplicateLabel(label.clone()));
        }
    }
    if !violations.is_empty() {
        return Err(ValidationError(violations));
    }

    for i in 0..n {
        if !matrix[i][i].is_zero() {
            violations.push(Violation::NonzeroDiagonalAt(i));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if i < j && matrix[i][j] != matrix[j][i] {
                violations.push(Violation::AsymmetricAt(i, j));
            }
            if !matrix[i][j].is_positive() {
                violations.push(Violation::NonpositiveOffDiagonalAt(i, j));
            }
        }
    }
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if matrix[i][k] > &matrix[i][j] + &matrix[j][k] {
                    violations.push(Violation::TriangleViolationAt(i, j, k));
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(FiniteMetricSpace { labels, dist: matrix })
    } else {
        Err(ValidationError(violations))
    }
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self, ValidationError> {
        validate(labels, matrix)
    }

    /// Builds the line metric `|x - y|` on the given coordinates. Labels are
    /// the canonical renderings of the coordinates.
    pub fn from_line(points: &[Rational]) -> Result<Self, ValidationError> {
        let labels = points.iter().map(rational::format).collect();
        let matrix = points
            .iter()
            .map(|x| points.iter().map(|y| rational::abs_diff(x, y)).collect())
            .collect();
        validate(labels, matrix)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: a validated space has at least one point.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    /// Largest distance from `i` to any other point.
    pub fn eccentricity(&self, i: usize) -> Rational {
        self.dist[i].iter().max().cloned().unwrap_or_else(rational::zero)
    }

    pub fn diameter(&self) -> Rational {
        diameter(self)
    }

    /// Sub-space on the given indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, SpaceError> {
        for &index in indices {
            if index >= self.len() {
                return Err(SpaceError::IndexOutOfRange { index, len: self.len() });
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let matrix = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.dist[i][j].clone()).collect())
            .collect();
        Ok(validate(labels, matrix)?)
    }
}

pub fn diameter(space: &FiniteMetricSpace) -> Rational {
    space
        .dist
        .iter()
        .flat_map(|row| row.iter())
        .max()
        .cloned()
        .unwrap_or_else(rational::zero)
}

/// Multiplies every distance by `factor`. A zero factor collapses the space
/// to a single point.
pub fn scale(space: &FiniteMetricSpace, factor: &Rational) -> Result<FiniteMetricSpace, SpaceError> {
    if factor.is_negative() {
        return Err(SpaceError::NegativeScale(factor.clone()));
    }
    if factor.is_zero() {
        return Ok(one_point());
    }
    let dist = space
        .dist
        .iter()
        .map(|row| row.iter().map(|d| d * factor).collect())
        .collect();
    Ok(FiniteMetricSpace { labels: space.labels.clone(), dist })
}

pub fn one_point() -> FiniteMetricSpace {
    FiniteMetricSpace { labels: vec!["pt".to_string()], dist: vec![vec![rational::zero()]] }
}

/// `m` points, pairwise at distance 1.
pub fn simplex(m: usize) -> Result<FiniteMetricSpace, SpaceError> {
    if m == 0 {
        return Err(SpaceError::EmptySimplex);
    }
    let labels = (1..=m).map(|k| format!("s{k}")).collect();
    let dist = (0..m)
        .map(|i| (0..m).map(|j| if i == j { rational::zero() } else { rational::one() }).collect())
        .collect();
    Ok(FiniteMetricSpace { labels, dist })
}

/// Attaches `m` simplex points to `space`. Simplex points are pairwise at
/// distance 1, and a simplex point sits at `d(x, base) + 1` from every
/// original point `x`. The original points keep their indices.
pub fn simplex_extend(
    space: &FiniteMetricSpace,
    base: usize,
    m: usize,
) -> Result<FiniteMetricSpace, SpaceError> {
    let n = space.len();
    if base >= n {
        return Err(SpaceError::IndexOutOfRange { index: base, len: n });
    }
    if m == 0 {
        return Err(SpaceError::EmptySimplex);
    }
    let used: HashSet<&str> = space.labels.iter().map(String::as_str).collect();
    let mut labels = space.labels.clone();
    for k in 1..=m {
        let mut label = format!("s{k}");
        while used.contains(label.as_str()) {
            label.push('\'');
        }
        labels.push(label);
    }

    let total = n + m;
    let mut dist = vec![vec![rational::zero(); total]; total];
    for i in 0..total {
        for j in 0..total {
            dist[i][j] = match (i < n, j < n) {
                (true, true) => space.dist[i][j].clone(),
                (true, false) => &space.dist[i][base] + rational::one(),
                (false, true) => &space.dist[j][base] + rational::one(),
                (false, false) if i == j => rational::zero(),
                (false, false) => rational::one(),
            };
        }
    }
    Ok(validate(labels, dist)?)
}

/// An ambient space with two marked nonempty point subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    ambient: FiniteMetricSpace,
    subset_a: Vec<usize>,
    subset_b: Vec<usize>,
}

impl Realization {
    /// Subsets are sorted and deduplicated.
    pub fn new(
        ambient: FiniteMetricSpace,
        mut subset_a: Vec<usize>,
        mut subset_b: Vec<usize>,
    ) -> Result<Self, SpaceError> {
        for subset in [&mut subset_a, &mut subset_b] {
            if subset.is_empty() {
                return Err(SpaceError::EmptySubset);
            }
            subset.sort_unstable();
            subset.dedup();
            if let Some(&index) = subset.iter().find(|&&i| i >= ambient.len()) {
                return Err(SpaceError::IndexOutOfRange { index, len: ambient.len() });
            }
        }
        Ok(Realization { ambient, subset_a, subset_b })
    }

    pub fn ambient(&self) -> &FiniteMetricSpace {
        &self.ambient
    }

    pub fn subset_a(&self) -> &[usize] {
        &self.subset_a
    }

    pub fn subset_b(&self) -> &[usize] {
        &self.subset_b
    }

    pub fn swapped(&self) -> Self {
        Realization {
            ambient: self.ambient.clone(),
            subset_a: self.subset_b.clone(),
            subset_b: self.subset_a.clone(),
        }
    }
}

/// Hausdorff distance between the two marked subsets. Since both subsets
/// are isometric copies inside one ambient, the value also bounds the
/// Gromov-Hausdorff distance between them from above.
pub fn hausdorff_in_ambient(realization: &Realization) -> Rational {
    let space = &realization.ambient;
    let directed = |from: &[usize], to: &[usize]| -> Rational {
        from.iter()
            .map(|&a| to.iter().map(|&b| space.dist(a, b)).min().expect("nonempty subset"))
            .max()
            .expect("nonempty subset")
            .clone()
    };
    let forward = directed(&realization.subset_a, &realization.subset_b);
    let backward = directed(&realization.subset_b, &realization.subset_a);
    forward.max(backward)
}
