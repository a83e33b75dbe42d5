//! The reproducible check suite behind `ghcloud verify paper`.
//!
//! Checks are identified by the letters `a`..`i` and always reported in that
//! order. Checks `a`..`g` are exact identities or inequalities and must
//! pass. Checks `h` and `i` evaluate truncations of statements about the
//! whole real line; their values are compared against regression constants
//! pinned from an independent exhaustive search and are marked
//! informational.

use crate::cloud::{check_homogeneity, check_scaling_identity, check_ultrametric, CloudError};
use crate::constructions::{self, gapped_segment, grid_points, integers, rtilde_grid, segment_grid, Exponent};
use crate::correspondence::{distortion, image_diameter};
use crate::random;
use crate::rational::{self, int, ratio, Rational};
use crate::search::{gh_exact_with, ExactOptions, GhResult, SolveStatus};
use crate::space::{self, hausdorff_in_ambient, one_point, simplex, simplex_extend, FiniteMetricSpace, Realization};
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write;

/// Seed for every randomized check.
pub const VERIFY_SEED: u64 = 0x0067_6863_6c6f_7564;

/// Default node budget per exact search.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub id: &'static str,
    pub name: &'static str,
    /// The statement being exercised.
    pub anchor: &'static str,
    pub claim: String,
    pub values: Vec<NamedValue>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub n: u32,
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub h: Rational,
    pub budget: u64,
    pub seed: u64,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub metadata: Metadata,
    pub checks: Vec<CheckEntry>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Aligned plain-text rendering, one block per check.
    pub fn to_text(&self) -> String {
        let m = &self.metadata;
        let mut out = format!(
            "verify paper  n={} h={} budget={} seed={} deterministic={}\n",
            m.n,
            rational::format(&m.h),
            m.budget,
            m.seed,
            m.deterministic
        );
        for check in &self.checks {
            let verdict = match check.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Informational => "INFO",
            };
            let _ = writeln!(out, "[{verdict:<4}] ({}) {:<28} {}", check.id, check.name, check.claim);
            let width = check.values.iter().map(|v| v.name.len()).max().unwrap_or(0);
            for v in &check.values {
                let _ = writeln!(out, "         {:<width$}  {}", v.name, v.value);
            }
            for note in &check.notes {
                let _ = writeln!(out, "         note: {note}");
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct VerifyParams {
    pub n: u32,
    pub h: Rational,
    pub budget: u64,
    pub deterministic: bool,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { n: 2, h: ratio(1, 2), budget: DEFAULT_BUDGET, deterministic: false }
    }
}

/// `(n, h, value)` with `h` and `value` as `(numerator, denominator)`.
pub type PinnedTable = [(u32, (i64, i64), (i64, i64))];

/// Regression constants for check `h`, `|integers(n), rtilde_grid(n, h)|`,
/// computed by exhaustive clique search over all correspondences.
pub const PINNED_RTILDE: &PinnedTable = &[
    (1, (1, 1), (1, 2)),
    (1, (1, 2), (1, 2)),
    (2, (1, 1), (1, 2)),
    (2, (1, 2), (1, 2)),
    (3, (1, 1), (1, 2)),
    (3, (1, 2), (1, 2)),
];

/// Regression constants for check `i`,
/// `|segment_grid(n, h), gapped_segment(n, 0, gap_radius(n), h)|`.
pub const PINNED_GAP: &PinnedTable = &[
    (1, (1, 1), (1, 2)),
    (1, (1, 2), (1, 4)),
    (2, (1, 1), (1, 2)),
    (2, (1, 2), (3, 4)),
    (3, (1, 1), (1, 2)),
];

fn pinned(table: &PinnedTable, n: u32, h: &Rational) -> Option<Rational> {
    table
        .iter()
        .find(|(tn, (hn, hd), _)| *tn == n && &ratio(*hn, *hd) == h)
        .map(|(_, _, (vn, vd))| ratio(*vn, *vd))
}

pub fn pinned_rtilde(n: u32, h: &Rational) -> Option<Rational> {
    pinned(PINNED_RTILDE, n, h)
}

pub fn pinned_gap(n: u32, h: &Rational) -> Option<Rational> {
    pinned(PINNED_GAP, n, h)
}

/// Radius of the removed interval in check `i`: 1, or `n/2` when `n < 2`
/// so that the closed gap stays inside `(-n, n)`.
pub fn gap_radius(n: u32) -> Rational {
    rational::one().min(ratio(i64::from(n), 2))
}

fn value(name: impl Into<String>, v: &Rational) -> NamedValue {
    NamedValue { name: name.into(), value: rational::format(v) }
}

fn text(name: impl Into<String>, v: impl Into<String>) -> NamedValue {
    NamedValue { name: name.into(), value: v.into() }
}

fn line(points: &[i64]) -> FiniteMetricSpace {
    FiniteMetricSpace::from_line(&points.iter().map(|&p| int(p)).collect::<Vec<_>>())
        .expect("distinct points")
}

/// The ten spaces used by check `a`, each at most six points.
pub fn scaling_suite() -> Vec<(&'static str, FiniteMetricSpace)> {
    vec![
        ("one point", one_point()),
        ("line {0,1}", line(&[0, 1])),
        ("line {0,1,3}", line(&[0, 1, 3])),
        ("simplex(3)", simplex(3).expect("m > 0")),
        ("integers(1)", integers(1).expect("n > 0")),
        ("geometric(2,1)", constructions::geometric(2, 1).expect("valid")),
        ("line {0,1,2,4}", line(&[0, 1, 2, 4])),
        ("rtilde_grid(1,1)", rtilde_grid(1, &int(1)).expect("valid")),
        ("phi_powers(2,n^2,3)", constructions::phi_powers(&int(2), Exponent::Square, 3).expect("valid")),
        ("segment_grid(1,1/2)", segment_grid(1, &ratio(1, 2)).expect("valid")),
    ]
}

/// Scale-factor pairs `(λ, μ)` applied to every space of check `a`.
pub fn scaling_factors() -> Vec<(Rational, Rational)> {
    vec![
        (int(1), int(1)),
        (int(2), ratio(1, 2)),
        (int(3), int(1)),
        (int(0), ratio(5, 3)),
        (ratio(5, 2), ratio(4, 3)),
    ]
}

/// The ten pairs used by checks `b` and `c`, each side at most five points.
pub fn pair_suite() -> Vec<(String, FiniteMetricSpace, FiniteMetricSpace)> {
    let mut pairs = vec![
        ("line {0,1} / point".to_string(), line(&[0, 1]), one_point()),
        ("line {0,1,2} / line {0,1}".to_string(), line(&[0, 1, 2]), line(&[0, 1])),
        ("simplex(3) / line {0,1,2}".to_string(), simplex(3).expect("m > 0"), line(&[0, 1, 2])),
        ("integers(1) / rtilde_grid(1,1)".to_string(), integers(1).expect("n > 0"), rtilde_grid(1, &int(1)).expect("valid")),
        ("geometric(2,1) / line {0,1,3}".to_string(), constructions::geometric(2, 1).expect("valid"), line(&[0, 1, 3])),
        ("simplex(4) / simplex(2)".to_string(), simplex(4).expect("m > 0"), simplex(2).expect("m > 0")),
        ("line {0,2,3} / line {0,1,5}".to_string(), line(&[0, 2, 3]), line(&[0, 1, 5])),
    ];
    let mut rng = random::rng(VERIFY_SEED);
    for k in 0..3 {
        let x = random::random_space_of_size(&mut rng, 4, 6);
        let y = random::random_space_of_size(&mut rng, 4, 6);
        pairs.push((format!("random pair {k}"), x, y));
    }
    pairs
}

/// Scale factors used by check `b`.
pub fn homogeneity_factors() -> Vec<Rational> {
    vec![int(1), int(4), ratio(5, 3), ratio(1, 2)]
}

/// Runs all checks. Checks run concurrently and are reported in id order.
pub fn verify_paper(params: &VerifyParams) -> VerifyReport {
    type Check = fn(&VerifyParams) -> CheckEntry;
    let checks: [Check; 9] = [
        check_a, check_b, check_c, check_d, check_e, check_f, check_g, check_h, check_i,
    ];
    let checks = checks.par_iter().map(|check| check(params)).collect();
    VerifyReport {
        metadata: Metadata {
            n: params.n,
            h: params.h.clone(),
            budget: params.budget,
            seed: VERIFY_SEED,
            deterministic: params.deterministic,
        },
        checks,
    }
}

fn cloud_failure(err: &CloudError) -> String {
    err.to_string()
}

fn check_a(params: &VerifyParams) -> CheckEntry {
    let mut values = Vec::new();
    let mut notes = Vec::new();
    for (name, x) in scaling_suite() {
        for (l, m) in scaling_factors() {
            let key = format!("{name}: λ={} μ={}", rational::format(&l), rational::format(&m));
            match check_scaling_identity(&x, &l, &m, Some(params.budget)) {
                Ok(r) => values.push(text(key, format!("{} = {}", rational::format(&r.left), rational::format(&r.right)))),
                Err(e) => notes.push(format!("{key}: {}", cloud_failure(&e))),
            }
        }
    }
    CheckEntry {
        id: "a",
        name: "scaling identity",
        anchor: "|λX, μX| = |λ − μ|·|X, Δ₁|",
        claim: "exact search on (λX, μX) equals |λ−μ|·diam X/2 for 10 spaces × 5 factor pairs".into(),
        verdict: if notes.is_empty() { Verdict::Pass } else { Verdict::Fail },
        values,
        notes,
    }
}

fn check_b(params: &VerifyParams) -> CheckEntry {
    let mut values = Vec::new();
    let mut notes = Vec::new();
    for (name, x, y) in pair_suite() {
        for l in homogeneity_factors() {
            let key = format!("{name}: λ={}", rational::format(&l));
            match check_homogeneity(&x, &y, &l, Some(params.budget)) {
                Ok(r) => values.push(text(key, format!("{} = {}", rational::format(&r.left), rational::format(&r.right)))),
                Err(e) => notes.push(format!("{key}: {}", cloud_failure(&e))),
            }
        }
    }
    CheckEntry {
        id: "b",
        name: "homogeneity",
        anchor: "|λX, λY| = λ|X, Y|",
        claim: "exact search on (λX, λY) equals λ times exact search on (X, Y) for 10 pairs × 4 factors".into(),
        verdict: if notes.is_empty() { Verdict::Pass } else { Verdict::Fail },
        values,
        notes,
    }
}

fn check_c(params: &VerifyParams) -> CheckEntry {
    let mut values = Vec::new();
    let mut notes = Vec::new();
    for (name, x, y) in pair_suite() {
        match check_ultrametric(&x, &y, Some(params.budget)) {
            Ok(r) => values.push(text(name, format!("{} <= {}", rational::format(&r.left), rational::format(&r.right)))),
            Err(e) => notes.push(format!("{name}: {}", cloud_failure(&e))),
        }
    }
    CheckEntry {
        id: "c",
        name: "ultrametric inequality",
        anchor: "|X₁, X₂| ≤ max(|X₁, Δ₁|, |X₂, Δ₁|) for bounded spaces",
        claim: "exact distance never exceeds the larger distance to a point, 10 pairs".into(),
        verdict: if notes.is_empty() { Verdict::Pass } else { Verdict::Fail },
        values,
        notes,
    }
}

/// Integer points inside the grid of step `h` on `[-n, n]`.
pub fn integer_realization(n: u32, h: &Rational) -> Result<Realization, String> {
    let grid = segment_grid(n, h).map_err(|e| e.to_string())?;
    let points = grid_points(n, h).map_err(|e| e.to_string())?;
    let integer_idx: Vec<usize> = (0..points.len()).filter(|&i| points[i].is_integer()).collect();
    if integer_idx.len() != 2 * n as usize + 1 {
        return Err(format!("step {} does not divide 1", rational::format(h)));
    }
    Realization::new(grid.clone(), integer_idx, (0..grid.len()).collect()).map_err(|e| e.to_string())
}

/// The L1 plane containing the grid `{(x, 0)}`, the apex `(0, 1)` and the
/// shifted grid `{(x, 1/2)}`. Subset A is grid plus apex, subset B is the
/// shifted grid.
pub fn rtilde_realization(n: u32, h: &Rational) -> Result<Realization, String> {
    let points = grid_points(n, h).map_err(|e| e.to_string())?;
    let mut coords: Vec<(Rational, Rational)> = points.iter().map(|x| (x.clone(), rational::zero())).collect();
    coords.push((rational::zero(), rational::one()));
    let apex = coords.len();
    coords.extend(points.iter().map(|x| (x.clone(), rational::half())));
    let labels: Vec<String> = coords
        .iter()
        .map(|(x, y)| format!("({},{})", rational::format(x), rational::format(y)))
        .collect();
    let matrix = coords
        .iter()
        .map(|p| coords.iter().map(|q| constructions::l1(p, q)).collect())
        .collect();
    let ambient = space::validate(labels, matrix).map_err(|e| e.to_string())?;
    let total = ambient.len();
    Realization::new(ambient, (0..apex).collect(), (apex..total).collect()).map_err(|e| e.to_string())
}

fn hausdorff_check(
    id: &'static str,
    name: &'static str,
    anchor: &'static str,
    claim: String,
    realization: Result<Realization, String>,
) -> CheckEntry {
    let (values, verdict, notes) = match realization {
        Ok(r) => {
            let h = hausdorff_in_ambient(&r);
            let verdict = if h == rational::half() { Verdict::Pass } else { Verdict::Fail };
            (
                vec![
                    text("ambient points", r.ambient().len().to_string()),
                    value("hausdorff", &h),
                    value("expected", &rational::half()),
                ],
                verdict,
                vec![],
            )
        }
        Err(e) => (vec![], Verdict::Fail, vec![e]),
    };
    CheckEntry { id, name, anchor, claim, values, verdict, notes }
}

fn check_d(params: &VerifyParams) -> CheckEntry {
    hausdorff_check(
        "d",
        "integers in segment",
        "|ℤ, ℝ| ≤ 1/2 via the embedding ℤ ⊂ ℝ",
        format!(
            "integers({n}) inside segment_grid({n}, {h}) are at Hausdorff distance exactly 1/2",
            n = params.n,
            h = rational::format(&params.h)
        ),
        integer_realization(params.n, &params.h),
    )
}

fn check_e(params: &VerifyParams) -> CheckEntry {
    hausdorff_check(
        "e",
        "rtilde against shifted line",
        "|ℝ̃, ℝ| ≤ 1/2 via ℝ̃ ⊂ (ℝ², L1) and ℝ as y = 1/2",
        format!(
            "rtilde_grid({n}, {h}) and the grid on y = 1/2 are at L1 Hausdorff distance exactly 1/2",
            n = params.n,
            h = rational::format(&params.h)
        ),
        rtilde_realization(params.n, &params.h),
    )
}

fn check_f(_params: &VerifyParams) -> CheckEntry {
    const TRIALS: usize = 50;
    let mut rng = random::rng(VERIFY_SEED ^ 0xf);
    let mut failures = Vec::new();
    let mut tight = 0usize;
    for trial in 0..TRIALS {
        let x = random::random_space(&mut rng, 6, 6);
        let y = random::random_space(&mut rng, 6, 6);
        let r = random::random_correspondence(&mut rng, x.len(), y.len());
        let dis = distortion(&x, &y, &r).expect("generated for these spaces");
        for i in 0..x.len() {
            let diam = image_diameter(&x, &y, &r, i).expect("generated for these spaces");
            if diam > dis {
                failures.push(format!("trial {trial}, point {i}: {} > {}", rational::format(&diam), rational::format(&dis)));
            }
            if diam == dis && dis.is_positive() {
                tight += 1;
            }
        }
    }
    CheckEntry {
        id: "f",
        name: "image diameter",
        anchor: "diam R(x) ≤ dis R",
        claim: format!("{TRIALS} random correspondences between random spaces of at most 6 points"),
        values: vec![
            text("correspondences", TRIALS.to_string()),
            text("violations", failures.len().to_string()),
            text("tight images", tight.to_string()),
        ],
        verdict: if failures.is_empty() { Verdict::Pass } else { Verdict::Fail },
        notes: failures,
    }
}

fn check_g(_params: &VerifyParams) -> CheckEntry {
    const TRIALS: usize = 10;
    const SIZES: [usize; 3] = [1, 3, 7];
    let mut rng = random::rng(VERIFY_SEED ^ 0x9);
    let mut failures = Vec::new();
    let mut widest = rational::zero();
    for trial in 0..TRIALS {
        let x = random::random_space(&mut rng, 6, 6);
        let m = SIZES[trial % SIZES.len()];
        let base = trial % x.len();
        match simplex_extend(&x, base, m) {
            Ok(ext) => {
                let r = Realization::new(ext.clone(), (0..x.len()).collect(), (0..ext.len()).collect())
                    .expect("indices in range");
                let h = hausdorff_in_ambient(&r);
                if h > rational::one() {
                    failures.push(format!("trial {trial}: hausdorff {}", rational::format(&h)));
                }
                widest = widest.max(h);
            }
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    CheckEntry {
        id: "g",
        name: "simplex extension",
        anchor: "X ∪ Δ lies in the closed 1-neighborhood of X",
        claim: format!("{TRIALS} random spaces extended by simplices of size 1, 3, 7 stay metric and within Hausdorff distance 1"),
        values: vec![text("extensions", TRIALS.to_string()), value("largest hausdorff", &widest)],
        verdict: if failures.is_empty() { Verdict::Pass } else { Verdict::Fail },
        notes: failures,
    }
}

fn search_values(result: &GhResult) -> Vec<NamedValue> {
    let mut values = vec![value("value", &result.value)];
    if let SolveStatus::LowerUpper { lower, upper } = &result.status {
        values.push(value("lower", lower));
        values.push(value("upper", upper));
    }
    let pairs: Vec<String> = result.witness.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    values.push(text("witness", pairs.join(" ")));
    values
}

fn regression_check(
    params: &VerifyParams,
    x: Result<FiniteMetricSpace, String>,
    y: Result<FiniteMetricSpace, String>,
    pinned: Option<Rational>,
    mut notes: Vec<String>,
) -> (Vec<NamedValue>, Verdict, Vec<String>) {
    let (x, y) = match (x, y) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return (vec![], Verdict::Fail, vec![e]),
    };
    let options = ExactOptions {
        budget: Some(params.budget),
        deterministic: params.deterministic,
        ..ExactOptions::default()
    };
    let result = gh_exact_with(&x, &y, &options);
    let mut values = vec![text("sizes", format!("{} x {}", x.len(), y.len()))];
    values.extend(search_values(&result));
    let mut verdict = Verdict::Informational;
    if !result.is_exact() {
        verdict = Verdict::Fail;
        notes.push("search budget exhausted".into());
    }
    match pinned {
        Some(expected) => {
            values.push(value("pinned", &expected));
            if result.is_exact() && result.value != expected {
                verdict = Verdict::Fail;
                notes.push("value differs from the pinned regression constant".into());
            }
        }
        None => notes.push("no pinned constant for these parameters".into()),
    }
    (values, verdict, notes)
}

fn check_h(params: &VerifyParams) -> CheckEntry {
    let (n, h) = (params.n, &params.h);
    let (values, verdict, notes) = regression_check(
        params,
        integers(n).map_err(|e| e.to_string()),
        rtilde_grid(n, h).map_err(|e| e.to_string()),
        pinned_rtilde(n, h),
        vec![
            "the lower bound 2/3 holds for ℤ and ℝ̃ over the unbounded real line; \
             truncated grids only approach it and need not attain it"
                .into(),
        ],
    );
    CheckEntry {
        id: "h",
        name: "integers vs rtilde",
        anchor: "|ℝ̃, ℤ| ≥ 2/3 > 1/2",
        claim: format!("exact distance between integers({n}) and rtilde_grid({n}, {})", rational::format(h)),
        values,
        verdict,
        notes,
    }
}

fn check_i(params: &VerifyParams) -> CheckEntry {
    let (n, h) = (params.n, &params.h);
    let d = gap_radius(n);
    let (mut values, verdict, notes) = regression_check(
        params,
        segment_grid(n, h).map_err(|e| e.to_string()),
        gapped_segment(n, &rational::zero(), &d, h).map_err(|e| e.to_string()),
        pinned_gap(n, h),
        vec![
            "the gap bound relies on connectedness of the unbounded real line; \
             truncated grids only approach it and need not attain it"
                .into(),
        ],
    );
    values.insert(0, value("gap radius", &d));
    CheckEntry {
        id: "i",
        name: "segment vs gapped segment",
        anchor: "a space near ℝ contains an interval of diameter 2d",
        claim: format!(
            "exact distance between segment_grid({n}, {h}) and the same grid with (-{d}, {d}) removed",
            h = rational::format(h),
            d = rational::format(&d)
        ),
        values,
        verdict,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_have_ten_entries() {
        assert_eq!(scaling_suite().len(), 10);
        assert_eq!(pair_suite().len(), 10);
        assert!(scaling_suite().iter().all(|(_, x)| x.len() <= 6));
        assert!(pair_suite().iter().all(|(_, x, y)| x.len() <= 5 && y.len() <= 5));
    }

    #[test]
    fn realizations_at_defaults() {
        let d = integer_realization(2, &ratio(1, 2)).unwrap();
        assert_eq!(hausdorff_in_ambient(&d), ratio(1, 2));
        let e = rtilde_realization(2, &ratio(1, 2)).unwrap();
        assert_eq!(hausdorff_in_ambient(&e), ratio(1, 2));
        assert!(integer_realization(2, &ratio(2, 3)).is_err());
    }

    #[test]
    fn pinned_lookup() {
        assert_eq!(pinned_gap(2, &ratio(1, 2)), Some(ratio(3, 4)));
        assert_eq!(pinned_rtilde(2, &int(1)), Some(ratio(1, 2)));
        assert_eq!(pinned_gap(7, &int(1)), None);
        assert_eq!(gap_radius(1), ratio(1, 2));
        assert_eq!(gap_radius(3), int(1));
    }

    #[test]
    fn default_report_passes() {
        let report = verify_paper(&VerifyParams::default());
        let ids: Vec<&str> = report.checks.iter().map(|c| c.id).collect();
        assert_eq!(ids, ["a", "b", "c", "d", "e", "f", "g", "h", "i"]);
        assert!(report.passed(), "{}", report.to_text());
        for id in ["a", "b", "c", "d", "e", "f", "g"] {
            assert_eq!(report.check(id).unwrap().verdict, Verdict::Pass);
        }
        for id in ["h", "i"] {
            assert_eq!(report.check(id).unwrap().verdict, Verdict::Informational);
        }
    }

    #[test]
    fn budget_exhaustion_fails_checks() {
        let params = VerifyParams { budget: 1, ..VerifyParams::default() };
        let report = verify_paper(&params);
        assert!(report.checks.iter().any(|c| c.verdict == Verdict::Fail));
    }
}
