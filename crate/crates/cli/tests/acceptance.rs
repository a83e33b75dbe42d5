//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails. Run with `--nocapture` to see the lines.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use ghcloud::cloud::{check_ultrametric, dist_to_point};
use ghcloud::constructions::{gapped_segment, integers, rtilde_grid, segment_grid};
use ghcloud::random::{random_correspondence, random_space, rng};
use ghcloud::rational::{self, int, ratio};
use ghcloud::space::{one_point, simplex_extend, validate};
use ghcloud::verify::{self, verify_paper, Verdict, VerifyParams};
use ghcloud::{distortion, gh_exact, gh_lower_bound, gh_oracle, gh_upper_bound_greedy, hausdorff_in_ambient, image_diameter, Realization};
use std::process::Command;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail.into())
    }
}

fn oracle_equivalence() -> Outcome {
    const PAIRS: u64 = 240;
    let start = Instant::now();
    for seed in 0..PAIRS {
        let mut r = rng(1_000 + seed);
        let x = random_space(&mut r, 4, 6);
        let y = random_space(&mut r, 4, 6);
        let exact = gh_exact(&x, &y, None);
        let oracle = gh_oracle(&x, &y).map_err(|e| e.to_string())?;
        ensure(
            exact.is_exact() && exact.value == oracle.value,
            format!("seed {seed}: exact {} vs oracle {}", rational::format(&exact.value), rational::format(&oracle.value)),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!("{PAIRS} pairs agree in {elapsed:.2?}"))
}

fn distance_to_point() -> Outcome {
    let mut r = rng(2_000);
    for k in 0..50 {
        let x = random_space(&mut r, 6, 6);
        let value = gh_exact(&x, &one_point(), None).value;
        ensure(value == dist_to_point(&x), format!("space {k}: {}", rational::format(&value)))?;
    }
    Ok("50 spaces: |X, Δ₁| = diam X / 2".into())
}

fn scaling_and_homogeneity(report: &verify::VerifyReport) -> Outcome {
    for id in ["a", "b"] {
        let check = report.check(id).ok_or(format!("missing check {id}"))?;
        ensure(check.verdict == Verdict::Pass, format!("check {id}: {:?}", check.notes))?;
    }
    let a = report.check("a").unwrap().values.len();
    let b = report.check("b").unwrap().values.len();
    Ok(format!("{a} scaling and {b} homogeneity cases exact"))
}

fn ultrametric() -> Outcome {
    let mut r = rng(4_000);
    for k in 0..50 {
        let x = random_space(&mut r, 5, 6);
        let y = random_space(&mut r, 5, 6);
        check_ultrametric(&x, &y, None).map_err(|e| format!("pair {k}: {e}"))?;
    }
    Ok("50 pairs satisfy the ultrametric inequality".into())
}

fn hausdorff_realizations() -> Outcome {
    let h = ratio(1, 2);
    let d = hausdorff_in_ambient(&verify::integer_realization(2, &h)?);
    let e = hausdorff_in_ambient(&verify::rtilde_realization(2, &h)?);
    ensure(d == h && e == h, format!("integers {}, rtilde {}", rational::format(&d), rational::format(&e)))?;
    Ok("both realizations at exactly 1/2".into())
}

fn image_diameter_property() -> Outcome {
    let mut r = rng(6_000);
    for k in 0..500 {
        let x = random_space(&mut r, 6, 6);
        let y = random_space(&mut r, 6, 6);
        let c = random_correspondence(&mut r, x.len(), y.len());
        let dis = distortion(&x, &y, &c).map_err(|e| e.to_string())?;
        for i in 0..x.len() {
            let diam = image_diameter(&x, &y, &c, i).map_err(|e| e.to_string())?;
            ensure(diam <= dis, format!("correspondence {k}, point {i}"))?;
        }
    }
    Ok("500 correspondences".into())
}

fn simplex_extension() -> Outcome {
    let mut r = rng(7_000);
    let mut searched = 0;
    for k in 0..20 {
        let x = random_space(&mut r, 6, 6);
        for m in [1, 3, 7] {
            let ext = simplex_extend(&x, k % x.len(), m).map_err(|e| e.to_string())?;
            ensure(validate(ext.labels().to_vec(), ext.matrix().to_vec()).is_ok(), format!("space {k}, m {m}: not metric"))?;
            let realization = Realization::new(ext.clone(), (0..x.len()).collect(), (0..ext.len()).collect())
                .map_err(|e| e.to_string())?;
            let bound = hausdorff_in_ambient(&realization);
            ensure(bound <= rational::one(), format!("space {k}, m {m}: hausdorff {}", rational::format(&bound)))?;
            if x.len() + m <= 8 {
                let exact = gh_exact(&x, &ext, None).value;
                ensure(exact <= bound, format!("space {k}, m {m}: exact above certificate"))?;
                searched += 1;
            }
        }
    }
    Ok(format!("60 extensions within 1; {searched} confirmed by exact search"))
}

fn desk_regressions(report: &verify::VerifyReport) -> Outcome {
    // Frozen from the clique oracle (common::clique_gh) and cross-checked by
    // brute force over all function pairs.
    let rtilde_value = ratio(1, 2);
    let gap_value = ratio(1, 2);

    let x = integers(2).unwrap();
    let y = rtilde_grid(2, &int(1)).unwrap();
    ensure(common::clique_gh(&x, &y) == rtilde_value, "oracle disagrees with frozen rtilde constant")?;
    ensure(gh_exact(&x, &y, None).value == rtilde_value, "solver disagrees on integers(2) vs rtilde_grid(2, 1)")?;
    ensure(verify::pinned_rtilde(2, &int(1)) == Some(rtilde_value.clone()), "library pin differs")?;

    let x = segment_grid(3, &int(1)).unwrap();
    let y = gapped_segment(3, &int(0), &int(1), &int(1)).unwrap();
    ensure(common::clique_gh(&x, &y) == gap_value, "oracle disagrees with frozen gap constant")?;
    ensure(gh_exact(&x, &y, None).value == gap_value, "solver disagrees on segment_grid(3, 1) vs gapped")?;
    ensure(verify::pinned_gap(3, &int(1)) == Some(gap_value.clone()), "library pin differs")?;

    for id in ["h", "i"] {
        let check = report.check(id).ok_or(format!("missing check {id}"))?;
        ensure(check.verdict == Verdict::Informational, format!("check {id} is {:?}", check.verdict))?;
        ensure(
            check.notes.iter().any(|n| n.contains("unbounded real line") && n.contains("approach") && n.contains("need not attain")),
            format!("check {id} lacks the truncation statement"),
        )?;
    }
    Ok(format!(
        "integers(2)/rtilde_grid(2,1) = {}, segment_grid(3,1)/gapped = {}",
        rational::format(&rtilde_value),
        rational::format(&gap_value)
    ))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("ghcloud-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("report{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_ghcloud"))
            .args(["verify", "paper", "--deterministic", "--report"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.success(), format!("run {run} exited with {status}"))?;
        reports.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(reports[0] == reports[1], "reports differ")?;
    Ok(format!("two runs, {} identical bytes", reports[0].len()))
}

fn bound_sandwich() -> Outcome {
    let mut r = rng(10_000);
    for k in 0..100 {
        let x = random_space(&mut r, 5, 6);
        let y = random_space(&mut r, 5, 6);
        let lower = gh_lower_bound(&x, &y);
        let exact = gh_exact(&x, &y, None).value;
        let (upper, _) = gh_upper_bound_greedy(&x, &y, 8);
        ensure(lower <= exact && exact <= upper, format!("pair {k}"))?;
    }
    Ok("100 pairs: lower <= exact <= greedy".into())
}

#[test]
fn acceptance_criteria() {
    let report = verify_paper(&VerifyParams::default());
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 oracle equivalence", oracle_equivalence()),
        ("2 distance to a point", distance_to_point()),
        ("3 scaling and homogeneity", scaling_and_homogeneity(&report)),
        ("4 ultrametric inequality", ultrametric()),
        ("5 hausdorff realizations", hausdorff_realizations()),
        ("6 image diameter", image_diameter_property()),
        ("7 simplex extension", simplex_extension()),
        ("8 desk-scale regressions", desk_regressions(&report)),
        ("9 deterministic reports", determinism()),
        ("10 bound sandwich", bound_sandwich()),
    ];
    let mut failed = 0;
    for (name, outcome) in &criteria {
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
