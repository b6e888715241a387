//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p granulens --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use granulens::entropy::{conditional, granular_entropy, joint, shannon, Distribution};
use granulens::eval::{compare_runs, CompareOptions, EvalReport, RankBy};
use granulens::output::curve_to_csv;
use granulens::reduction::{exhaustive_reducts, greedy_reduct};
use granulens::rough::{approximate, dependency, regions, ConceptSet, Fraction};
use granulens::svg::emit_svg;
use granulens::sweep::{convergence_summary, sweep_with, SweepOptions};
use granulens::{load_table, Column, GranulationScheme, InformationTable, Partition};
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration) -> Check {
    if elapsed < limit {
        Ok(format!("{:.2}s", elapsed.as_secs_f64()))
    } else {
        Err(format!(
            "took {:.2}s, limit {:.0}s",
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        ))
    }
}

const SMALL: TableShape = TableShape {
    max_n: 32,
    max_attrs: 5,
    max_classes: 4,
};

/// AC-1: approximate/regions equal the literal set-builder oracle.
fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = rng(1);
    for case in 0..500 {
        let t = random_table(&mut rng, SMALL);
        let scheme = random_scheme(&mut rng, &t, 4);
        let view = t.discretize(&scheme).map_err(|e| e.to_string())?;
        let attrs = random_subset(&mut rng, &t);
        let idx = t.resolve_conditions(&attrs).unwrap();
        let p = view.partition_by(&attrs).map_err(|e| e.to_string())?;

        let concept: BTreeSet<usize> = (0..t.n()).filter(|_| rng.gen_bool(0.5)).collect();
        let got = approximate(
            &p,
            &ConceptSet::from_indices(t.n(), concept.iter().copied()).unwrap(),
        )
        .unwrap();
        let want = oracle_approx(&view, &idx, &concept);
        ensure!(
            got.lower == want.lower && got.upper == want.upper && got.boundary == want.boundary,
            "case {case}: approximate differs from oracle"
        );

        let r = regions(&p, t.decision_labels()).unwrap();
        let (pos, bnd) = oracle_regions(&view, &idx);
        ensure!(
            r.positive == pos && r.boundary_overall == bnd,
            "case {case}: regions differ from oracle"
        );
        for class in t.decision_labels().classes() {
            let c: BTreeSet<usize> = (0..t.n())
                .filter(|&i| t.decision_labels().class_of(i) == class)
                .collect();
            let want = oracle_approx(&view, &idx, &c);
            let got = &r.per_class[class];
            ensure!(
                got.lower == want.lower && got.upper == want.upper && got.boundary == want.boundary,
                "case {case}: per-class approximation of {class} differs"
            );
        }
    }
    within(start.elapsed(), Duration::from_secs(10)).map(|t| format!("500 tables, {t}"))
}

/// AC-2: H(D|P) <= BF·log2(k) and H = 0 <=> BF = 0 <=> γ = 1.
fn entropy_boundary_bound() -> Check {
    let start = Instant::now();
    let mut rng = rng(2);
    let one = Fraction::from_integer(1);
    for case in 0..1000 {
        let t = random_table(&mut rng, SMALL);
        let view = t.discretize(&random_scheme(&mut rng, &t, 5)).unwrap();
        let attrs = random_subset(&mut rng, &t);
        let p = view.partition_by(&attrs).unwrap();
        let r = granular_entropy(&p, t.decision_labels()).unwrap();
        let bf = *r.boundary_fraction.numer() as f64 / *r.boundary_fraction.denom() as f64;
        let k = r.class_count as f64;
        if r.class_count >= 2 {
            ensure!(
                r.conditional_bits <= bf * k.log2() + 1e-9,
                "case {case}: H = {} exceeds BF·log2(k) = {}",
                r.conditional_bits,
                bf * k.log2()
            );
        }
        let h_zero = r.conditional_bits < 1e-12;
        let bf_zero = r.boundary_fraction == Fraction::from_integer(0);
        let gamma_one = r.gamma == one;
        ensure!(
            h_zero == bf_zero && bf_zero == gamma_one,
            "case {case}: zero-equivalence broken (H {}, BF {bf}, γ {})",
            r.conditional_bits,
            r.gamma
        );
        ensure!(
            r.gamma + r.boundary_fraction == one,
            "case {case}: γ + BF != 1"
        );
    }
    within(start.elapsed(), Duration::from_secs(10)).map(|t| format!("1000 pairs, {t}"))
}

/// AC-3: Raising the bits level refines the partition and never raises H or BF.
fn refinement_monotonicity() -> Check {
    let start = Instant::now();
    let mut rng = rng(3);
    for case in 0..500 {
        let t = random_table(&mut rng, SMALL);
        let attrs = random_subset(&mut rng, &t);
        let b = rng.gen_range(0..6);
        let b2 = rng.gen_range(b + 1..=8);
        let coarse = t
            .discretize(&GranulationScheme::uniform(&t, &attrs, b).unwrap())
            .unwrap()
            .partition_by(&attrs)
            .unwrap();
        let fine = t
            .discretize(&GranulationScheme::uniform(&t, &attrs, b2).unwrap())
            .unwrap()
            .partition_by(&attrs)
            .unwrap();
        ensure!(
            fine.refines(&coarse),
            "case {case}: level {b2} does not refine level {b}"
        );
        let labels = t.decision_labels();
        let hc = conditional(labels.codes(), &coarse).unwrap();
        let hf = conditional(labels.codes(), &fine).unwrap();
        ensure!(hf <= hc + 1e-9, "case {case}: H rose from {hc} to {hf}");
        let gc = dependency(&coarse, labels).unwrap();
        let gf = dependency(&fine, labels).unwrap();
        ensure!(gf >= gc, "case {case}: boundary fraction rose");
    }
    within(start.elapsed(), Duration::from_secs(10)).map(|t| format!("500 cases, {t}"))
}

/// AC-4: Hand-derived TOY-8 curve.
fn toy8_golden() -> Check {
    let curve =
        sweep_with(&toy8(), &["a2"], 0, 3, &SweepOptions::default()).map_err(|e| e.to_string())?;
    let expected = [(0.954434, 1.0), (0.405639, 0.5), (0.25, 0.25), (0.0, 0.0)];
    ensure!(
        curve.points.len() == 4,
        "expected 4 points, got {}",
        curve.points.len()
    );
    for (p, (h, bf)) in curve.points.iter().zip(expected) {
        ensure!(
            (p.conditional_bits - h).abs() <= 1e-6 && (p.boundary_fraction - bf).abs() <= 1e-6,
            "level {}: got ({}, {}), expected ({h}, {bf})",
            p.bits_level,
            p.conditional_bits,
            p.boundary_fraction
        );
    }
    Ok("4 levels within 1e-6".into())
}

/// AC-5: Titanic-shaped data: both curves decay monotonically to (almost) zero.
fn titanic_convergence() -> Check {
    let start = Instant::now();
    let t = load_table(TITANIC.as_bytes(), "Survived", None).map_err(|e| e.to_string())?;
    ensure!(t.n() == 200, "expected 200 rows, got {}", t.n());
    let attrs = ["Pclass", "Sex", "Age", "Fare"];
    let curve =
        sweep_with(&t, &attrs, 0, 8, &SweepOptions::default()).map_err(|e| e.to_string())?;
    let s = convergence_summary(&curve).unwrap();
    ensure!(
        s.monotonicity_violations == 0,
        "{} monotonicity violations",
        s.monotonicity_violations
    );
    for w in curve.points.windows(2) {
        ensure!(
            w[1].conditional_bits <= w[0].conditional_bits + 1e-9
                && w[1].boundary_fraction <= w[0].boundary_fraction + 1e-9,
            "curve rises at level {}",
            w[1].bits_level
        );
    }
    let last = curve.points.last().unwrap();
    ensure!(
        last.boundary_fraction <= 0.05,
        "terminal boundary fraction {}",
        last.boundary_fraction
    );
    let raw_blocks = t
        .raw_partition(&t.resolve_conditions(&attrs).unwrap())
        .block_count();
    within(start.elapsed(), Duration::from_secs(2)).map(|time| {
        format!(
            "terminal H {:.4}, BF {:.4}, {} of {raw_blocks} raw blocks separated, {time}",
            last.conditional_bits, last.boundary_fraction, last.block_count
        )
    })
}

/// AC-6: Greedy reducts are γ-preserving, removal-minimal and contain an exact reduct.
fn reduct_correctness() -> Check {
    let start = Instant::now();
    let mut rng = rng(6);
    for case in 0..200 {
        let t = random_consistent_table(&mut rng, 8);
        let numeric = numeric_attrs(&t);
        let view = t
            .discretize(&GranulationScheme::uniform(&t, &numeric, 2).unwrap())
            .unwrap();
        let labels = t.decision_labels();
        let r = greedy_reduct(&view, labels).map_err(|e| e.to_string())?;
        ensure!(
            r.gamma_full == Fraction::from_integer(1),
            "case {case}: generated table is not consistent"
        );
        ensure!(
            r.gamma_selected == r.gamma_full,
            "case {case}: greedy misses γ_full"
        );
        for drop in &r.selected {
            let rest: Vec<&String> = r.selected.iter().filter(|a| *a != drop).collect();
            let g = dependency(&view.partition_by(&rest).unwrap(), labels).unwrap();
            ensure!(
                g < r.gamma_full,
                "case {case}: `{drop}` is redundant in {:?}",
                r.selected
            );
        }
        let all = exhaustive_reducts(&view, labels, 8).unwrap();
        ensure!(
            all.iter()
                .any(|red| red.iter().all(|a| r.selected.contains(a))),
            "case {case}: no exact reduct inside {:?}",
            r.selected
        );
    }
    within(start.elapsed(), Duration::from_secs(30)).map(|t| format!("200 tables, {t}"))
}

/// AC-7: H(D|P) = H(D,P) − H(P).
fn chain_rule() -> Check {
    let mut rng = rng(7);
    for case in 0..1000 {
        let n = rng.gen_range(1..=200);
        let k = rng.gen_range(1..=6);
        let blocks = rng.gen_range(1..=n);
        let labels: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let ids: Vec<u32> = (0..n).map(|_| rng.gen_range(0..blocks as u32)).collect();
        let p = Partition::from_block_ids(ids);
        let direct = conditional(&labels, &p).unwrap();
        let h_p = shannon(&Distribution::from_tokens(p.block_ids())).unwrap();
        let via = joint(&labels, p.block_ids()).unwrap() - h_p;
        ensure!(
            (direct - via).abs() <= 1e-9,
            "case {case}: {direct} vs {via}"
        );
    }
    Ok("1000 inputs within 1e-9".into())
}

fn report(id: String, accuracy: f64, bf: Fraction, h: f64, blocks: usize) -> EvalReport {
    EvalReport {
        run_id: id,
        accuracy,
        model_conditional_bits: h,
        model_boundary_fraction: bf,
        model_gamma: Fraction::from_integer(1) - bf,
        block_count: blocks,
        used_fallback_partition: false,
    }
}

/// AC-8: Verdict stays in the tolerance band, ignores input order, and matches
/// the worked examples.
fn verdict_soundness() -> Check {
    let opts = CompareOptions::default();
    let ex = |a: (f64, Fraction), b: (f64, Fraction), ids: (&str, &str)| {
        compare_runs(
            &[
                report(ids.0.into(), a.0, a.1, 0.0, 1),
                report(ids.1.into(), b.0, b.1, 0.0, 1),
            ],
            &opts,
        )
        .unwrap()
        .selected
    };
    ensure!(
        ex(
            (0.80, Fraction::new(1, 10)),
            (0.80, Fraction::new(3, 10)),
            ("A", "B")
        ) == "A",
        "example 1"
    );
    ensure!(
        ex(
            (0.90, Fraction::new(2, 5)),
            (0.80, Fraction::new(0, 1)),
            ("A", "B")
        ) == "A",
        "example 2"
    );
    ensure!(
        ex(
            (0.5, Fraction::new(1, 2)),
            (0.5, Fraction::new(1, 2)),
            ("b", "a")
        ) == "a",
        "example 3"
    );

    let mut rng = rng(8);
    for case in 0..1000 {
        let count = rng.gen_range(1..=12);
        let mut reports: Vec<EvalReport> = (0..count)
            .map(|i| {
                let den = rng.gen_range(1..=20u64);
                report(
                    format!("run{i:02}"),
                    f64::from(rng.gen_range(60..=100u32)) / 100.0,
                    Fraction::new(rng.gen_range(0..=den), den),
                    f64::from(rng.gen_range(0..=8u32)) / 8.0,
                    rng.gen_range(1..=50),
                )
            })
            .collect();
        let tolerance = [0.0, 0.005, 0.02, 0.1][rng.gen_range(0..4)];
        let rank_by = if rng.gen_bool(0.5) {
            RankBy::BoundaryFirst
        } else {
            RankBy::EntropyFirst
        };
        let opts = CompareOptions { tolerance, rank_by };
        let v = compare_runs(&reports, &opts).unwrap();
        let best = reports.iter().map(|r| r.accuracy).fold(f64::MIN, f64::max);
        let chosen = reports.iter().find(|r| r.run_id == v.selected).unwrap();
        ensure!(
            chosen.accuracy >= best - tolerance,
            "case {case}: selected run outside the band"
        );
        ensure!(
            v.ranked[0].run_id == v.selected,
            "case {case}: selected is not ranked first"
        );
        reports.shuffle(&mut rng);
        let again = compare_runs(&reports, &opts).unwrap();
        ensure!(again == v, "case {case}: verdict depends on input order");
    }
    Ok("3 examples + 1000 random lists".into())
}

/// AC-9: 50,000 × 20 sweep over 11 levels, single-threaded, and parallel parity.
fn sweep_performance() -> Check {
    let mut rng = rng(9);
    let n = 50_000;
    let mut columns: Vec<(String, Column)> = (0..20)
        .map(|j| {
            let scale = f64::from(j + 1);
            let col = (0..n)
                .map(|_| Some(rng.gen_range(0.0..scale * 100.0)))
                .collect();
            (format!("x{j}"), Column::Numeric(col))
        })
        .collect();
    let d = (0..n)
        .map(|_| Some(format!("k{}", rng.gen_range(0..3))))
        .collect();
    columns.push(("d".into(), Column::Categorical(d)));
    let t = InformationTable::from_columns(columns, "d").map_err(|e| e.to_string())?;
    let attrs = t.condition_attributes();

    let start = Instant::now();
    let single = SweepOptions {
        threads: Some(1),
        table_id: "synthetic".into(),
    };
    let serial = sweep_with(&t, &attrs, 0, 10, &single).map_err(|e| e.to_string())?;
    let time = within(start.elapsed(), Duration::from_secs(10))?;

    let parallel = SweepOptions {
        threads: Some(4),
        table_id: "synthetic".into(),
    };
    let par = sweep_with(&t, &attrs, 0, 10, &parallel).map_err(|e| e.to_string())?;
    ensure!(
        curve_to_csv(&serial.points).unwrap() == curve_to_csv(&par.points).unwrap(),
        "parallel curve CSV differs"
    );
    ensure!(
        emit_svg(&serial).unwrap() == emit_svg(&par).unwrap(),
        "parallel SVG differs"
    );
    ensure!(serial == par, "parallel curve differs");
    Ok(format!("single-threaded {time}, 4-thread output identical"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "AC-1 oracle equivalence of approximations and regions",
            oracle_equivalence,
        ),
        (
            "AC-2 entropy-boundary bound and zero-equivalence",
            entropy_boundary_bound,
        ),
        ("AC-3 refinement monotonicity", refinement_monotonicity),
        ("AC-4 TOY-8 golden sweep", toy8_golden),
        ("AC-5 Titanic-shaped convergence", titanic_convergence),
        ("AC-6 reduct correctness", reduct_correctness),
        ("AC-7 chain rule", chain_rule),
        ("AC-8 verdict determinism and soundness", verdict_soundness),
        (
            "AC-9 sweep performance and parallel parity",
            sweep_performance,
        ),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
