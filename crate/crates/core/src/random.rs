//! Seeded random spaces and correspondences for property checks.
//!
//! All generators take an explicit RNG; [`rng`] builds the ChaCha stream
//! used throughout so that a recorded seed reproduces the same inputs.

use crate::correspondence::Correspondence;
use crate::rational::ratio;
use crate::space::{validate, FiniteMetricSpace};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shortest-path closure of the complete graph on `n` vertices whose edge
/// `{i, j}` (with `i < j`) has weight `weight(i, j) / denominator`.
/// Weights must be positive. Every entry of the result is a multiple of
/// `1/denominator`.
pub fn closure_space(
    n: usize,
    denominator: i64,
    weight: impl Fn(usize, usize) -> i64,
) -> FiniteMetricSpace {
    assert!(n >= 1 && denominator >= 1);
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = weight(i, j);
            assert!(w > 0, "edge weights must be positive");
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    let matrix = d
        .iter()
        .map(|row| row.iter().map(|&v| ratio(v, denominator)).collect())
        .collect();
    validate(labels, matrix).expect("shortest-path closure is a metric")
}

/// A space with `1..=max_points` points whose distances are multiples of
/// `1/q` for a random `q` in `1..=max_denominator`.
pub fn random_space<R: Rng>(rng: &mut R, max_points: usize, max_denominator: i64) -> FiniteMetricSpace {
    let n = rng.gen_range(1..=max_points);
    random_space_of_size(rng, n, max_denominator)
}

pub fn random_space_of_size<R: Rng>(rng: &mut R, n: usize, max_denominator: i64) -> FiniteMetricSpace {
    let q = rng.gen_range(1..=max_denominator);
    let weights: Vec<i64> = (0..n * n).map(|_| rng.gen_range(1..=4 * q)).collect();
    closure_space(n, q, |i, j| weights[i * n + j])
}

/// A random correspondence between index sets of sizes `n` and `m`: a
/// random function pair plus a few extra random pairs.
pub fn random_correspondence<R: Rng>(rng: &mut R, n: usize, m: usize) -> Correspondence {
    let mut pairs = Vec::new();
    for i in 0..n {
        pairs.push((i, rng.gen_range(0..m)));
    }
    for j in 0..m {
        pairs.push((rng.gen_range(0..n), j));
    }
    let extra = rng.gen_range(0..=n.max(m));
    for _ in 0..extra {
        pairs.push((rng.gen_range(0..n), rng.gen_range(0..m)));
    }
    pairs.shuffle(rng);
    Correspondence::new(pairs, n, m).expect("covers both sides")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = random_space(&mut rng(7), 6, 6);
        let b = random_space(&mut rng(7), 6, 6);
        assert_eq!(a, b);
    }

    #[test]
    fn denominators_bounded() {
        let mut r = rng(11);
        for _ in 0..50 {
            let space = random_space(&mut r, 5, 6);
            for row in space.matrix() {
                for v in row {
                    assert!(v.denom() <= &6.into());
                }
            }
        }
    }
}
