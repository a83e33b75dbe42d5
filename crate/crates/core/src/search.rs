//! Exact Gromov-Hausdorff distances between finite metric spaces.
//!
//! Three routes are provided:
//!
//! * [`gh_oracle`] enumerates every relation between the two point sets that
//!   is surjective on both sides. It is exponential in `|X|·|Y|` and capped at
//!   four points per side.
//! * [`gh_exact`] runs a branch-and-bound over correspondences of the form
//!   `graph(f) ∪ transpose(graph(g))`. Any correspondence contains such a
//!   sub-correspondence, and removing pairs never increases distortion, so
//!   the minimum over this family is the minimum over all correspondences.
//! * [`gh_upper_bound_greedy`] runs deterministic local search over function
//!   pairs and returns a certified upper bound.
//!
//! Internally all distortion values are replaced by their rank in the sorted
//! list of candidate gaps `|d_X(a, c) - d_Y(b, d)|`. The optimum is always one
//! of these gaps, so comparisons on ranks are exact.

use crate::correspondence::Correspondence;
use crate::rational::{self, Rational};
use crate::space::FiniteMetricSpace;
use rand::Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, Ordering};
use std::sync::Mutex;
use thiserror::Error;

/// Largest side accepted by [`gh_oracle`].
pub const ORACLE_MAX_POINTS: usize = 4;

/// Restarts used to seed the branch-and-bound incumbent.
pub const DEFAULT_RESTARTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("oracle accepts at most {ORACLE_MAX_POINTS} points per side, got {left} and {right}")]
    TooLargeForOracle { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Exact,
    /// Search stopped at its node budget; the true distance lies in
    /// `[lower, upper]` and the witness attains `upper`.
    LowerUpper { lower: Rational, upper: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhResult {
    /// Half the distortion of `witness`; the exact distance when `status` is
    /// [`SolveStatus::Exact`].
    pub value: Rational,
    pub witness: Correspondence,
    pub status: SolveStatus,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

impl GhResult {
    pub fn is_exact(&self) -> bool {
        self.status == SolveStatus::Exact
    }

    pub fn lower(&self) -> &Rational {
        match &self.status {
            SolveStatus::Exact => &self.value,
            SolveStatus::LowerUpper { lower, .. } => lower,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactOptions {
    /// Maximum number of search-tree nodes; `None` searches to completion.
    pub budget: Option<u64>,
    /// Return the lexicographically smallest optimal `(f, g)` as witness and
    /// search on a single thread.
    pub deterministic: bool,
    pub parallel: bool,
    pub restarts: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { budget: None, deterministic: false, parallel: true, restarts: DEFAULT_RESTARTS }
    }
}

/// `½·|diam X − diam Y|`, a lower bound on the distance.
pub fn gh_lower_bound(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
    rational::abs_diff(&x.diameter(), &y.diameter()) * rational::half()
}

/// Pairwise costs between candidate pairs `(a, b) ∈ X × Y`, as ranks into
/// the sorted distinct gaps `|d_X(a, c) − d_Y(b, d)|`.
pub(crate) struct CostTable {
    nx: usize,
    ny: usize,
    levels: Vec<Rational>,
    cost: Vec<u32>,
}

impl CostTable {
    pub(crate) fn new(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Self {
        let (nx, ny) = (x.len(), y.len());
        let mut gaps = BTreeSet::new();
        for a in 0..nx {
            for c in a..nx {
                for b in 0..ny {
                    for d in b..ny {
                        gaps.insert(rational::abs_diff(x.dist(a, c), y.dist(b, d)));
                    }
                }
            }
        }
        let levels: Vec<Rational> = gaps.into_iter().collect();
        let np = nx * ny;
        let mut cost = vec![0u32; np * np];
        for a in 0..nx {
            for c in 0..nx {
                for b in 0..ny {
                    for d in 0..ny {
                        let gap = rational::abs_diff(x.dist(a, c), y.dist(b, d));
                        let rank = levels.binary_search(&gap).expect("gap was collected") as u32;
                        cost[(a * ny + b) * np + c * ny + d] = rank;
                    }
                }
            }
        }
        CostTable { nx, ny, levels, cost }
    }

    #[inline]
    fn pair(&self, a: usize, b: usize) -> usize {
        a * self.ny + b
    }

    #[inline]
    fn row(&self, pair: usize) -> &[u32] {
        let np = self.nx * self.ny;
        &self.cost[pair * np..(pair + 1) * np]
    }

    #[inline]
    fn between(&self, p: usize, q: usize) -> u32 {
        self.cost[p * self.nx * self.ny + q]
    }

    fn level(&self, rank: u32) -> &Rational {
        &self.levels[rank as usize]
    }

    fn rank_of(&self, value: &Rational) -> Option<u32> {
        self.levels.binary_search(value).ok().map(|r| r as u32)
    }

    fn distortion_rank(&self, pairs: &[(usize, usize)]) -> u32 {
        let ids: Vec<usize> = pairs.iter().map(|&(a, b)| self.pair(a, b)).collect();
        let mut worst = 0;
        for (k, &p) in ids.iter().enumerate() {
            for &q in &ids[k + 1..] {
                worst = worst.max(self.between(p, q));
            }
        }
        worst
    }
}

/// Exhaustive minimum over all correspondences. Both spaces must have at
/// most [`ORACLE_MAX_POINTS`] points.
pub fn gh_oracle(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<GhResult, SearchError> {
    let (nx, ny) = (x.len(), y.len());
    if nx > ORACLE_MAX_POINTS || ny > ORACLE_MAX_POINTS {
        return Err(SearchError::TooLargeForOracle { left: nx, right: ny });
    }
    let pairs: Vec<(usize, usize)> =
        (0..nx).flat_map(|a| (0..ny).map(move |b| (a, b))).collect();
    let np = pairs.len();

    // gap[p][q] as Rationals, then ranked locally.
    let mut values = BTreeSet::new();
    let mut gap = vec![vec![rational::zero(); np]; np];
    for (p, &(a, b)) in pairs.iter().enumerate() {
        for (q, &(c, d)) in pairs.iter().enumerate() {
            gap[p][q] = rational::abs_diff(x.dist(a, c), y.dist(b, d));
            values.insert(gap[p][q].clone());
        }
    }
    let values: Vec<Rational> = values.into_iter().collect();
    let rank: Vec<Vec<usize>> = gap
        .iter()
        .map(|row| row.iter().map(|v| values.binary_search(v).unwrap()).collect())
        .collect();

    // dis[mask] = max over pairs of bits in mask, built from the mask with
    // its highest bit removed.
    let total = 1usize << np;
    let mut dis = vec![0usize; total];
    let mut best: Option<(usize, usize)> = None;
    for mask in 1..total {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let mut worst = dis[rest];
        let mut bits = rest;
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            worst = worst.max(rank[top][q]);
            bits &= bits - 1;
        }
        dis[mask] = worst;

        let mut left = 0u32;
        let mut right = 0u32;
        let mut bits = mask;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            left |= 1 << pairs[p].0;
            right |= 1 << pairs[p].1;
            bits &= bits - 1;
        }
        if left.count_ones() as usize == nx
            && right.count_ones() as usize == ny
            && best.is_none_or(|(d, _)| worst < d)
        {
            best = Some((worst, mask));
        }
    }
    let (worst, mask) = best.expect("the full product is a correspondence");
    let chosen = (0..np).filter(|p| mask >> p & 1 == 1).map(|p| pairs[p]).collect();
    let witness = Correspondence::new(chosen, nx, ny).expect("surjectivity was checked");
    Ok(GhResult {
        value: &values[worst] * rational::half(),
        witness,
        status: SolveStatus::Exact,
        nodes: total as u64 - 1,
    })
}

pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace, budget: Option<u64>) -> GhResult {
    gh_exact_with(x, y, &ExactOptions { budget, ..ExactOptions::default() })
}

pub fn gh_exact_with(x: &FiniteMetricSpace, y: &FiniteMetricSpace, options: &ExactOptions) -> GhResult {
    let table = CostTable::new(x, y);
    let (nx, ny) = (table.nx, table.ny);

    let greedy = greedy_search(&table, options.restarts.max(1));
    let diameter_rank = table
        .rank_of(&rational::abs_diff(&x.diameter(), &y.diameter()))
        .expect("the diameter gap is a candidate gap");

    let mut x_order: Vec<usize> = (0..nx).collect();
    let ecc_x: Vec<Rational> = (0..nx).map(|i| x.eccentricity(i)).collect();
    x_order.sort_by(|&a, &b| ecc_x[b].cmp(&ecc_x[a]).then(a.cmp(&b)));
    let mut y_order: Vec<usize> = (0..ny).collect();
    let ecc_y: Vec<Rational> = (0..ny).map(|j| y.eccentricity(j)).collect();
    y_order.sort_by(|&a, &b| ecc_y[b].cmp(&ecc_y[a]).then(a.cmp(&b)));

    let shared = Shared {
        incumbent: AtomicU32::new(greedy.rank),
        best: Mutex::new(greedy.pairs()),
        nodes: AtomicU64::new(0),
        budget: options.budget,
        exhausted: AtomicBool::new(false),
        open_bound: AtomicU32::new(u32::MAX),
        stop: AtomicBool::new(false),
    };

    if greedy.rank > diameter_rank {
        let plan = Plan { x_order, y_order, total_g: false, sort_values: true, first_only: false };
        if options.parallel && !options.deterministic {
            search_parallel(&table, &plan, &shared);
        } else {
            let mut node = Node::root(&table);
            node.dfs(&table, &plan, &shared, 0);
        }
    }

    let nodes = shared.nodes.load(Ordering::Relaxed);
    let upper_rank = shared.incumbent.load(Ordering::Relaxed);
    let mut pairs = shared.best.into_inner().unwrap();
    let exhausted = shared.exhausted.load(Ordering::Relaxed);

    if !exhausted && options.deterministic {
        pairs = canonical_witness(&table, upper_rank);
    }
    debug_assert_eq!(table.distortion_rank(&pairs), upper_rank);
    let witness = Correspondence::new(pairs, nx, ny).expect("search output covers both sides");
    let value = table.level(upper_rank) * rational::half();

    let status = if exhausted {
        let open = shared.open_bound.load(Ordering::Relaxed);
        let lower_rank = open.min(upper_rank).max(diameter_rank);
        if lower_rank >= upper_rank {
            SolveStatus::Exact
        } else {
            SolveStatus::LowerUpper {
                lower: table.level(lower_rank) * rational::half(),
                upper: value.clone(),
            }
        }
    } else {
        SolveStatus::Exact
    };
    GhResult { value, witness, status, nodes }
}

/// Lexicographically smallest `(f, g)` whose correspondence has distortion
/// rank at most `threshold`. Variables are assigned in index order: all of
/// `f`, then all of `g`, each value tried in increasing index.
fn canonical_witness(table: &CostTable, threshold: u32) -> Vec<(usize, usize)> {
    let plan = Plan {
        x_order: (0..table.nx).collect(),
        y_order: (0..table.ny).collect(),
        total_g: true,
        sort_values: false,
        first_only: true,
    };
    let shared = Shared {
        incumbent: AtomicU32::new(threshold + 1),
        best: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        budget: None,
        exhausted: AtomicBool::new(false),
        open_bound: AtomicU32::new(u32::MAX),
        stop: AtomicBool::new(false),
    };
    let mut node = Node::root(table);
    node.dfs(table, &plan, &shared, 0);
    let found = shared.best.into_inner().unwrap();
    assert!(!found.is_empty(), "a correspondence at the optimal distortion exists");
    found
}

struct Plan {
    x_order: Vec<usize>,
    y_order: Vec<usize>,
    /// Assign `g` on every right point, not only uncovered ones.
    total_g: bool,
    /// Try values in increasing cost order instead of index order.
    sort_values: bool,
    /// Stop at the first solution below the incumbent.
    first_only: bool,
}

struct Shared {
    incumbent: AtomicU32,
    best: Mutex<Vec<(usize, usize)>>,
    nodes: AtomicU64,
    budget: Option<u64>,
    exhausted: AtomicBool,
    /// Smallest lower bound over subtrees abandoned when the budget ran out.
    open_bound: AtomicU32,
    stop: AtomicBool,
}

impl Shared {
    fn tick(&self) -> bool {
        let visited = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        match self.budget {
            Some(limit) if visited > limit => {
                self.exhausted.store(true, Ordering::Relaxed);
                false
            }
            _ => true,
        }
    }

    fn offer(&self, rank: u32, pairs: &[(usize, usize)]) {
        let mut best = self.best.lock().unwrap();
        if rank < self.incumbent.load(Ordering::Relaxed) {
            self.incumbent.store(rank, Ordering::Relaxed);
            *best = pairs.to_vec();
        }
    }
}

enum Outcome {
    Complete,
    Aborted,
}

#[derive(Clone)]
struct Node {
    /// `pc[level][p]`: max cost between candidate pair `p` and the pairs
    /// chosen so far, one row per depth.
    pc: Vec<Vec<u32>>,
    cur: Vec<u32>,
    pairs: Vec<(usize, usize)>,
    y_cover: Vec<u32>,
}

impl Node {
    fn root(table: &CostTable) -> Self {
        let np = table.nx * table.ny;
        let depth = table.nx + table.ny + 1;
        Node {
            pc: vec![vec![0; np]; depth],
            cur: vec![0; depth],
            pairs: Vec::with_capacity(depth),
            y_cover: vec![0; table.ny],
        }
    }

    fn push(&mut self, table: &CostTable, depth: usize, a: usize, b: usize) {
        let p = table.pair(a, b);
        let (head, tail) = self.pc.split_at_mut(depth + 1);
        let (from, to) = (&head[depth], &mut tail[0]);
        for ((dst, &old), &c) in to.iter_mut().zip(from.iter()).zip(table.row(p)) {
            *dst = old.max(c);
        }
        self.cur[depth + 1] = self.cur[depth].max(from[p]);
        self.pairs.push((a, b));
        self.y_cover[b] += 1;
    }

    fn pop(&mut self) {
        let (_, b) = self.pairs.pop().expect("pop after push");
        self.y_cover[b] -= 1;
    }

    /// Lower bound for every completion of this node: each unassigned left
    /// point and each uncovered right point needs at least one more pair.
    fn bound(&self, table: &CostTable, plan: &Plan, depth: usize) -> u32 {
        let pc = &self.pc[depth];
        let ny = table.ny;
        let mut bound = self.cur[depth];
        let assigned_x = depth.min(table.nx);
        for &a in &plan.x_order[assigned_x..] {
            let best = pc[a * ny..(a + 1) * ny].iter().min().copied().unwrap_or(0);
            bound = bound.max(best);
        }
        let g_done = depth.saturating_sub(table.nx);
        for (k, &b) in plan.y_order.iter().enumerate() {
            let pending = if plan.total_g { k >= g_done } else { self.y_cover[b] == 0 };
            if pending {
                let best = (0..table.nx).map(|a| pc[a * ny + b]).min().unwrap_or(0);
                bound = bound.max(best);
            }
        }
        bound
    }

    /// Next variable at `depth`: `Left(a)` assigns `f(a)`, `Right(b)` assigns
    /// `g(b)`, `None` means the assignment is complete.
    fn next_var(&self, table: &CostTable, plan: &Plan, depth: usize) -> Option<Var> {
        if depth < table.nx {
            return Some(Var::Left(plan.x_order[depth]));
        }
        if plan.total_g {
            return plan.y_order.get(depth - table.nx).map(|&b| Var::Right(b));
        }
        plan.y_order.iter().find(|&&b| self.y_cover[b] == 0).map(|&b| Var::Right(b))
    }

    fn candidates(&self, table: &CostTable, plan: &Plan, depth: usize, var: Var) -> Vec<(u32, usize, usize)> {
        let pc = &self.pc[depth];
        let mut out: Vec<(u32, usize, usize)> = match var {
            Var::Left(a) => (0..table.ny).map(|b| (pc[table.pair(a, b)], a, b)).collect(),
            Var::Right(b) => (0..table.nx).map(|a| (pc[table.pair(a, b)], a, b)).collect(),
        };
        if plan.sort_values {
            out.sort_by_key(|&(c, a, b)| (c, a, b));
        }
        out
    }

    fn dfs(&mut self, table: &CostTable, plan: &Plan, shared: &Shared, depth: usize) -> Outcome {
        if shared.stop.load(Ordering::Relaxed) {
            return Outcome::Complete;
        }
        if !shared.tick() {
            let bound = self.bound(table, plan, depth);
            shared.open_bound.fetch_min(bound, Ordering::Relaxed);
            return Outcome::Aborted;
        }
        let bound = self.bound(table, plan, depth);
        if bound >= shared.incumbent.load(Ordering::Relaxed) {
            return Outcome::Complete;
        }
        let Some(var) = self.next_var(table, plan, depth) else {
            shared.offer(self.cur[depth], &self.pairs);
            if plan.first_only {
                shared.stop.store(true, Ordering::Relaxed);
            }
            return Outcome::Complete;
        };
        let candidates = self.candidates(table, plan, depth, var);
        for (k, &(cost, a, b)) in candidates.iter().enumerate() {
            if bound.max(cost) >= shared.incumbent.load(Ordering::Relaxed) {
                if plan.sort_values {
                    break;
                }
                continue;
            }
            self.push(table, depth, a, b);
            let outcome = self.dfs(table, plan, shared, depth + 1);
            self.pop();
            if let Outcome::Aborted = outcome {
                let rest = candidates[k + 1..]
                    .iter()
                    .map(|&(c, _, _)| bound.max(c))
                    .min()
                    .unwrap_or(u32::MAX);
                shared.open_bound.fetch_min(rest, Ordering::Relaxed);
                return Outcome::Aborted;
            }
            if shared.stop.load(Ordering::Relaxed) {
                break;
            }
        }
        Outcome::Complete
    }
}

#[derive(Clone, Copy)]
enum Var {
    Left(usize),
    Right(usize),
}

/// Splits the first branching level across rayon workers sharing one
/// incumbent.
fn search_parallel(table: &CostTable, plan: &Plan, shared: &Shared) {
    let root = Node::root(table);
    if !shared.tick() {
        shared.open_bound.fetch_min(root.bound(table, plan, 0), Ordering::Relaxed);
        return;
    }
    let Some(var) = root.next_var(table, plan, 0) else { return };
    let candidates = root.candidates(table, plan, 0, var);
    candidates.par_iter().for_each(|&(cost, a, b)| {
        if shared.exhausted.load(Ordering::Relaxed) {
            shared.open_bound.fetch_min(cost, Ordering::Relaxed);
            return;
        }
        if cost >= shared.incumbent.load(Ordering::Relaxed) {
            return;
        }
        let mut node = root.clone();
        node.push(table, 0, a, b);
        node.dfs(table, plan, shared, 1);
    });
}

/// Result of local search: a function pair and its distortion rank.
struct GreedyOutcome {
    rank: u32,
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl GreedyOutcome {
    fn pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .forward
            .iter()
            .enumerate()
            .map(|(a, &b)| (a, b))
            .chain(self.backward.iter().enumerate().map(|(b, &a)| (a, b)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }
}

/// Best half-distortion found by local search over function pairs, with the
/// correspondence that attains it. Restart 0 starts from `i ↦ i mod |Y|`,
/// restart 1 matches points by eccentricity rank, and later restarts start
/// from a random pair seeded by the restart index.
pub fn gh_upper_bound_greedy(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    restarts: usize,
) -> (Rational, Correspondence) {
    let table = CostTable::new(x, y);
    let outcome = greedy_search(&table, restarts.max(1));
    let witness = Correspondence::from_functions(&outcome.forward, &outcome.backward)
        .expect("function pairs cover both sides");
    (table.level(outcome.rank) * rational::half(), witness)
}

fn greedy_search(table: &CostTable, restarts: usize) -> GreedyOutcome {
    let (nx, ny) = (table.nx, table.ny);
    let mut best: Option<GreedyOutcome> = None;
    for restart in 0..restarts {
        let (forward, backward) = match restart {
            0 => ((0..nx).map(|a| a % ny).collect(), (0..ny).map(|b| b % nx).collect()),
            1 => eccentricity_matching(table),
            _ => {
                let mut rng = crate::random::rng(restart as u64);
                (
                    (0..nx).map(|_| rng.gen_range(0..ny)).collect(),
                    (0..ny).map(|_| rng.gen_range(0..nx)).collect(),
                )
            }
        };
        let outcome = LocalSearch::new(table, forward, backward).run();
        if best.as_ref().is_none_or(|b| outcome.rank < b.rank) {
            best = Some(outcome);
        }
        if best.as_ref().is_some_and(|b| b.rank == 0) {
            break;
        }
    }
    best.expect("at least one restart")
}

/// Maps the k-th most eccentric point of one side to the proportionally
/// placed point of the other side. Eccentricities are read off the cost
/// table through pairs with a fixed partner, so this works on ranks only.
fn eccentricity_matching(table: &CostTable) -> (Vec<usize>, Vec<usize>) {
    let (nx, ny) = (table.nx, table.ny);
    // With the other side pinned to index 0, the gap to (c, 0) is d_X(a, c).
    let ecc_x: Vec<u32> = (0..nx)
        .map(|a| (0..nx).map(|c| table.between(table.pair(a, 0), table.pair(c, 0))).max().unwrap_or(0))
        .collect();
    let ecc_y: Vec<u32> = (0..ny)
        .map(|b| (0..ny).map(|d| table.between(table.pair(0, b), table.pair(0, d))).max().unwrap_or(0))
        .collect();
    let mut ox: Vec<usize> = (0..nx).collect();
    ox.sort_by_key(|&a| (ecc_x[a], a));
    let mut oy: Vec<usize> = (0..ny).collect();
    oy.sort_by_key(|&b| (ecc_y[b], b));
    let mut forward = vec![0; nx];
    for (k, &a) in ox.iter().enumerate() {
        forward[a] = oy[k * ny / nx];
    }
    let mut backward = vec![0; ny];
    for (k, &b) in oy.iter().enumerate() {
        backward[b] = ox[k * nx / ny];
    }
    (forward, backward)
}

/// First-improvement local search. The objective is the distortion rank,
/// with ties broken by how many pair-pairs attain it.
struct LocalSearch<'a> {
    table: &'a CostTable,
    /// Pair ids: `nx` forward pairs followed by `ny` backward pairs.
    slots: Vec<usize>,
    histogram: Vec<u32>,
    top: usize,
}

impl<'a> LocalSearch<'a> {
    fn new(table: &'a CostTable, forward: Vec<usize>, backward: Vec<usize>) -> Self {
        let slots: Vec<usize> = forward
            .iter()
            .enumerate()
            .map(|(a, &b)| table.pair(a, b))
            .chain(backward.iter().enumerate().map(|(b, &a)| table.pair(a, b)))
            .collect();
        let mut histogram = vec![0u32; table.levels.len()];
        for (k, &p) in slots.iter().enumerate() {
            for &q in &slots[k + 1..] {
                histogram[table.between(p, q) as usize] += 1;
            }
        }
        let mut search = LocalSearch { table, slots, histogram, top: 0 };
        search.top = search.histogram.len() - 1;
        search.settle_top();
        search
    }

    fn settle_top(&mut self) {
        while self.top > 0 && self.histogram[self.top] == 0 {
            self.top -= 1;
        }
    }

    fn objective(&self) -> (usize, u32) {
        (self.top, self.histogram[self.top])
    }

    fn replace(&mut self, slot: usize, pair: usize) {
        let old = self.slots[slot];
        for (k, &q) in self.slots.iter().enumerate() {
            if k != slot {
                self.histogram[self.table.between(old, q) as usize] -= 1;
                let c = self.table.between(pair, q) as usize;
                self.histogram[c] += 1;
                self.top = self.top.max(c);
            }
        }
        self.slots[slot] = pair;
        self.settle_top();
    }

    fn run(mut self) -> GreedyOutcome {
        let (nx, ny) = (self.table.nx, self.table.ny);
        loop {
            let mut improved = false;
            for slot in 0..nx + ny {
                let alternatives = if slot < nx { ny } else { nx };
                for value in 0..alternatives {
                    let candidate = if slot < nx {
                        self.table.pair(slot, value)
                    } else {
                        self.table.pair(value, slot - nx)
                    };
                    let current = self.slots[slot];
                    if candidate == current {
                        continue;
                    }
                    let before = self.objective();
                    self.replace(slot, candidate);
                    if self.objective() < before {
                        improved = true;
                        break;
                    }
                    self.replace(slot, current);
                }
            }
            if !improved || self.top == 0 {
                break;
            }
        }
        let forward = (0..nx).map(|a| self.slots[a] % ny).collect();
        let backward = (0..ny).map(|b| self.slots[nx + b] / ny).collect();
        GreedyOutcome { rank: self.top as u32, forward, backward }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::distortion;
    use crate::rational::{int, ratio};
    use crate::space::{one_point, scale};

    fn line(points: &[i64]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_line(&points.iter().map(|&p| int(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(gh_oracle(&one_point(), &one_point()).unwrap().value, int(0));
        assert_eq!(gh_oracle(&line(&[0, 1]), &one_point()).unwrap().value, ratio(1, 2));
        assert_eq!(gh_oracle(&line(&[0, 1, 2]), &line(&[0, 1])).unwrap().value, ratio(1, 2));
    }

    #[test]
    fn oracle_cap() {
        let big = line(&[0, 1, 2, 3, 4]);
        assert_eq!(
            gh_oracle(&big, &one_point()),
            Err(SearchError::TooLargeForOracle { left: 5, right: 1 })
        );
    }

    #[test]
    fn exact_self_distance_is_zero() {
        let x = line(&[0, 1, 3, 7]);
        let result = gh_exact(&x, &x, None);
        assert_eq!(result.value, int(0));
        assert!(result.is_exact());
        assert_eq!(distortion(&x, &x, &result.witness).unwrap(), int(0));
    }

    #[test]
    fn exact_identity_witness_when_deterministic() {
        let x = line(&[0, 1, 3, 7]);
        let options = ExactOptions { deterministic: true, ..ExactOptions::default() };
        let result = gh_exact_with(&x, &x, &options);
        assert_eq!(result.witness, Correspondence::identity(4));
    }

    #[test]
    fn exact_distance_to_point() {
        let x = line(&[0, 2, 3, 9]);
        assert_eq!(gh_exact(&x, &one_point(), None).value, ratio(9, 2));
        assert_eq!(gh_exact(&one_point(), &x, None).value, ratio(9, 2));
    }

    #[test]
    fn witness_attains_value() {
        let x = line(&[0, 1, 3, 4, 9]);
        let y = line(&[0, 2, 5, 6]);
        let result = gh_exact(&x, &y, None);
        assert_eq!(distortion(&x, &y, &result.witness).unwrap() * ratio(1, 2), result.value);
    }

    #[test]
    fn lower_bounds() {
        let pair = line(&[0, 1]);
        assert_eq!(gh_lower_bound(&pair, &pair), int(0));
        assert_eq!(gh_lower_bound(&pair, &one_point()), ratio(1, 2));
    }

    #[test]
    fn greedy_identity_and_sandwich() {
        let x = line(&[0, 1, 4]);
        assert_eq!(gh_upper_bound_greedy(&x, &x, 1).0, int(0));
        let y = line(&[0, 1]);
        let (upper, witness) = gh_upper_bound_greedy(&line(&[0, 1, 2]), &y, 4);
        assert!(upper >= gh_oracle(&line(&[0, 1, 2]), &y).unwrap().value);
        assert_eq!(distortion(&line(&[0, 1, 2]), &y, &witness).unwrap() * ratio(1, 2), upper);
        let ints = line(&[-2, -1, 0, 1, 2]);
        let doubled = scale(&ints, &int(2)).unwrap();
        assert!(gh_upper_bound_greedy(&ints, &doubled, 8).0 >= int(1));
    }

    #[test]
    fn budget_exhaustion_reports_bounds() {
        let x = line(&[0, 1, 3, 7, 8, 12]);
        let y = line(&[0, 2, 3, 5, 11]);
        let exact = gh_exact(&x, &y, None);
        let options = ExactOptions { budget: Some(1), parallel: false, ..ExactOptions::default() };
        let limited = gh_exact_with(&x, &y, &options);
        match &limited.status {
            SolveStatus::LowerUpper { lower, upper } => {
                assert!(lower <= &exact.value && &exact.value <= upper);
                assert_eq!(upper, &limited.value);
            }
            SolveStatus::Exact => assert_eq!(limited.value, exact.value),
        }
    }
}
