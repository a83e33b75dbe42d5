//! Correspondences between finite metric spaces and their distortion.

use crate::rational::{self, Rational};
use crate::space::FiniteMetricSpace;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("pair ({left}, {right}) out of range for spaces of sizes {left_len} and {right_len}")]
    IndexOutOfRange { left: usize, right: usize, left_len: usize, right_len: usize },
    #[error("left point {0} has no partner")]
    NotSurjectiveOnLeft(usize),
    #[error("right point {0} has no partner")]
    NotSurjectiveOnRight(usize),
    #[error("correspondence is between spaces of sizes {expected:?}, got {actual:?}")]
    SizeMismatch { expected: (usize, usize), actual: (usize, usize) },
}

/// A relation between `0..left_len` and `0..right_len` in which every index
/// on either side has at least one partner. Pairs are kept sorted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
    #[serde(skip)]
    left_len: usize,
    #[serde(skip)]
    right_len: usize,
}

impl Correspondence {
    pub fn new(
        mut pairs: Vec<(usize, usize)>,
        left_len: usize,
        right_len: usize,
    ) -> Result<Self, CorrespondenceError> {
        pairs.sort_unstable();
        pairs.dedup();
        let mut left_hit = vec![false; left_len];
        let mut right_hit = vec![false; right_len];
        for &(left, right) in &pairs {
            if left >= left_len || right >= right_len {
                return Err(CorrespondenceError::IndexOutOfRange { left, right, left_len, right_len });
            }
            left_hit[left] = true;
            right_hit[right] = true;
        }
        if let Some(i) = left_hit.iter().position(|hit| !hit) {
            return Err(CorrespondenceError::NotSurjectiveOnLeft(i));
        }
        if let Some(j) = right_hit.iter().position(|hit| !hit) {
            return Err(CorrespondenceError::NotSurjectiveOnRight(j));
        }
        Ok(Correspondence { pairs, left_len, right_len })
    }

    /// `graph(forward) ∪ transpose(graph(backward))`, where `forward` maps left
    /// indices to right ones and `backward` maps right indices to left ones.
    pub fn from_functions(forward: &[usize], backward: &[usize]) -> Result<Self, CorrespondenceError> {
        let pairs = forward
            .iter()
            .enumerate()
            .map(|(i, &j)| (i, j))
            .chain(backward.iter().enumerate().map(|(j, &i)| (i, j)))
            .collect();
        Self::new(pairs, forward.len(), backward.len())
    }

    /// Every pair of the product `0..left_len × 0..right_len`.
    pub fn full(left_len: usize, right_len: usize) -> Self {
        let pairs = (0..left_len).flat_map(|i| (0..right_len).map(move |j| (i, j))).collect();
        Correspondence { pairs, left_len, right_len }
    }

    pub fn identity(len: usize) -> Self {
        Correspondence { pairs: (0..len).map(|i| (i, i)).collect(), left_len: len, right_len: len }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.left_len, self.right_len)
    }

    pub fn transpose(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Correspondence { pairs, left_len: self.right_len, right_len: self.left_len }
    }

    /// Right-hand partners of left point `i`.
    pub fn image(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().filter(move |&&(l, _)| l == i).map(|&(_, r)| r)
    }

    fn check_spaces(&self, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<(), CorrespondenceError> {
        if (x.len(), y.len()) != (self.left_len, self.right_len) {
            return Err(CorrespondenceError::SizeMismatch {
                expected: (self.left_len, self.right_len),
                actual: (x.len(), y.len()),
            });
        }
        Ok(())
    }
}

/// Largest `|d_X(x, x') - d_Y(y, y')|` over all pairs `(x, y), (x', y')` of
/// the correspondence.
pub fn distortion(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    r: &Correspondence,
) -> Result<Rational, CorrespondenceError> {
    r.check_spaces(x, y)?;
    let pairs = r.pairs();
    let mut worst = rational::zero();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[k + 1..] {
            let gap = rational::abs_diff(x.dist(a, c), y.dist(b, d));
            if gap > worst {
                worst = gap;
            }
        }
    }
    Ok(worst)
}

/// Diameter in `y` of the image of left point `i`. Never exceeds the
/// distortion of `r`.
pub fn image_diameter(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    r: &Correspondence,
    i: usize,
) -> Result<Rational, CorrespondenceError> {
    r.check_spaces(x, y)?;
    if i >= x.len() {
        return Err(CorrespondenceError::IndexOutOfRange {
            left: i,
            right: 0,
            left_len: x.len(),
            right_len: y.len(),
        });
    }
    let image: Vec<usize> = r.image(i).collect();
    let mut widest = rational::zero();
    for (k, &a) in image.iter().enumerate() {
        for &b in &image[k + 1..] {
            if y.dist(a, b) > &widest {
                widest = y.dist(a, b).clone();
            }
        }
    }
    Ok(widest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::space::one_point;
    use proptest::prelude::*;

    fn line(points: &[i64]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_line(&points.iter().map(|&p| int(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_has_zero_distortion() {
        let x = line(&[0, 2, 7]);
        assert_eq!(distortion(&x, &x, &Correspondence::identity(3)).unwrap(), int(0));
    }

    #[test]
    fn full_correspondence_distortion_is_max_diameter() {
        let x = line(&[0, 2, 7]);
        let y = line(&[0, 4]);
        assert_eq!(distortion(&x, &y, &Correspondence::full(3, 2)).unwrap(), int(7));
        assert_eq!(distortion(&y, &x, &Correspondence::full(2, 3)).unwrap(), int(7));
        for i in 0..3 {
            assert_eq!(image_diameter(&x, &y, &Correspondence::full(3, 2), i).unwrap(), int(4));
        }
    }

    #[test]
    fn three_to_two_example() {
        // pair-pairs: (0,0)-(1,0): |1-0|, (0,0)-(2,1): |2-1|, (1,0)-(2,1): |1-1|
        let r = Correspondence::new(vec![(0, 0), (1, 0), (2, 1)], 3, 2).unwrap();
        assert_eq!(distortion(&line(&[0, 1, 2]), &line(&[0, 1]), &r).unwrap(), int(1));
    }

    #[test]
    fn image_diameter_example() {
        // pair-pairs: (0,0)-(0,1): |0-3|, (0,0)-(1,1): |1-3|, (0,1)-(1,1): |1-0|
        let x = line(&[0, 1]);
        let y = line(&[0, 3]);
        let r = Correspondence::new(vec![(0, 0), (0, 1), (1, 1)], 2, 2).unwrap();
        assert_eq!(image_diameter(&x, &y, &r, 0).unwrap(), int(3));
        assert_eq!(distortion(&x, &y, &r).unwrap(), int(3));
    }

    #[test]
    fn function_like_images_are_points() {
        let x = line(&[0, 1, 5]);
        let y = line(&[0, 3]);
        let r = Correspondence::new(vec![(0, 0), (1, 1), (2, 1)], 3, 2).unwrap();
        for i in 0..3 {
            assert_eq!(image_diameter(&x, &y, &r, i).unwrap(), int(0));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            Correspondence::new(vec![(0, 0)], 2, 1),
            Err(CorrespondenceError::NotSurjectiveOnLeft(1))
        );
        assert_eq!(
            Correspondence::new(vec![(0, 0), (1, 0)], 2, 2),
            Err(CorrespondenceError::NotSurjectiveOnRight(1))
        );
        assert!(matches!(
            Correspondence::new(vec![(0, 3)], 1, 1),
            Err(CorrespondenceError::IndexOutOfRange { .. })
        ));
        let r = Correspondence::identity(2);
        assert!(matches!(
            distortion(&line(&[0, 1]), &one_point(), &r),
            Err(CorrespondenceError::SizeMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn image_diameter_bounded_by_distortion(seed in any::<u64>()) {
            let mut rng = crate::random::rng(seed);
            let x = crate::random::random_space(&mut rng, 6, 6);
            let y = crate::random::random_space(&mut rng, 6, 6);
            let r = crate::random::random_correspondence(&mut rng, x.len(), y.len());
            let dis = distortion(&x, &y, &r).unwrap();
            for i in 0..x.len() {
                prop_assert!(image_diameter(&x, &y, &r, i).unwrap() <= dis);
            }
            prop_assert_eq!(distortion(&y, &x, &r.transpose()).unwrap(), dis);
        }
    }
}
