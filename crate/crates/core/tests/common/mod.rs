//! Oracles that share no code with the solver under test.

#![allow(dead_code, clippy::needless_range_loop)]

use ghcloud::rational::{self, Rational};
use ghcloud::FiniteMetricSpace;
use std::collections::BTreeSet;

/// Exact distance through correspondences-as-cliques: pairs `(a, b)` and
/// `(c, d)` are compatible at threshold `t` when `|d_X(a, c) - d_Y(b, d)| <= t`,
/// and a correspondence of distortion `<= t` is a clique of compatible pairs
/// that covers every row and column. Each maximal clique is checked with
/// Bron-Kerbosch; the smallest feasible threshold is found by bisection over
/// the candidate gaps. Works on arbitrary relations, not function pairs.
pub fn clique_gh(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
    let (nx, ny) = (x.len(), y.len());
    let np = nx * ny;
    assert!(np <= 128, "bitset oracle handles at most 128 pairs");
    let pairs: Vec<(usize, usize)> = (0..nx).flat_map(|a| (0..ny).map(move |b| (a, b))).collect();
    let gap = |p: usize, q: usize| {
        let ((a, b), (c, d)) = (pairs[p], pairs[q]);
        rational::abs_diff(x.dist(a, c), y.dist(b, d))
    };
    let mut table = vec![vec![rational::zero(); np]; np];
    let mut values = BTreeSet::new();
    for p in 0..np {
        for q in 0..np {
            table[p][q] = gap(p, q);
            values.insert(table[p][q].clone());
        }
    }
    let values: Vec<Rational> = values.into_iter().collect();

    let feasible = |t: &Rational| -> bool {
        let adj: Vec<u128> = (0..np)
            .map(|p| {
                (0..np)
                    .filter(|&q| q != p && &table[p][q] <= t)
                    .fold(0u128, |m, q| m | 1 << q)
            })
            .collect();
        let mut cover = Cover { pairs: &pairs, nx, ny, adj: &adj };
        let all = if np == 128 { u128::MAX } else { (1u128 << np) - 1 };
        cover.search(0, all, 0)
    };

    let (mut lo, mut hi) = (0usize, values.len() - 1);
    debug_assert!(feasible(&values[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    &values[lo] * rational::half()
}

struct Cover<'a> {
    pairs: &'a [(usize, usize)],
    nx: usize,
    ny: usize,
    adj: &'a [u128],
}

impl Cover<'_> {
    fn covers(&self, set: u128) -> bool {
        let (mut rows, mut cols) = (0u64, 0u64);
        let mut bits = set;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            rows |= 1 << self.pairs[p].0;
            cols |= 1 << self.pairs[p].1;
            bits &= bits - 1;
        }
        rows.count_ones() as usize == self.nx && cols.count_ones() as usize == self.ny
    }

    /// Bron-Kerbosch with pivoting; true when some clique extending `r`
    /// covers both sides.
    fn search(&mut self, r: u128, p: u128, x: u128) -> bool {
        if self.covers(r) {
            return true;
        }
        if p == 0 || !self.covers(r | p) {
            return false;
        }
        let pivot = {
            let union = p | x;
            let mut best = union.trailing_zeros() as usize;
            let mut best_count = 0;
            let mut bits = union;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                let c = (p & self.adj[u]).count_ones();
                if c >= best_count {
                    best = u;
                    best_count = c;
                }
                bits &= bits - 1;
            }
            best
        };
        let mut p = p;
        let mut x = x;
        let mut candidates = p & !self.adj[pivot];
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            let bit = 1u128 << v;
            if self.search(r | bit, p & self.adj[v], x & self.adj[v]) {
                return true;
            }
            p &= !bit;
            x |= bit;
            candidates &= !bit;
        }
        false
    }
}
