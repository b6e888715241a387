//! Score replayable model-run files against their table and pick one
//! configuration with the tolerance-band rule.
//!
//! cargo run --example evaluate_model_runs

use granulens::eval::{compare_runs, evaluate_run, load_run, CompareOptions, ModelRun, RankBy};
use granulens::load_table;
use granulens::rough::to_f64;

const TOY8: &str = include_str!("../data/toy8.csv");

fn main() -> granulens::Result<()> {
    let table = load_table(TOY8.as_bytes(), "d", None)?;
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data/runs");

    let mut reports = Vec::new();
    for name in ["toy8_tree_deep", "toy8_tree_shallow", "toy8_majority"] {
        let file = std::fs::File::open(format!("{dir}/{name}.csv"))?;
        let run = load_run(file, &table, name)?;
        reports.push(evaluate_run(&table, &run)?);
    }
    // runs can also be built in memory
    let lookup = ModelRun::new(
        "a1_lookup",
        ["0", "0", "0", "0", "1", "1", "1", "1"]
            .map(String::from)
            .to_vec(),
        Some(
            ["P", "P", "Q", "Q", "R", "R", "R", "R"]
                .map(String::from)
                .to_vec(),
        ),
    );
    reports.push(evaluate_run(&table, &lookup)?);

    for r in &reports {
        println!(
            "{:<13} accuracy {:.3}  boundary {:.3}  H {:.3}  blocks {}{}",
            r.run_id,
            r.accuracy,
            to_f64(&r.model_boundary_fraction),
            r.model_conditional_bits,
            r.block_count,
            if r.used_fallback_partition {
                "  (grouped by prediction)"
            } else {
                ""
            }
        );
    }

    for (tolerance, rank_by) in [
        (0.005, RankBy::BoundaryFirst),
        (0.2, RankBy::BoundaryFirst),
        (0.2, RankBy::EntropyFirst),
    ] {
        let v = compare_runs(&reports, &CompareOptions { tolerance, rank_by })?;
        let band: Vec<&str> = v
            .ranked
            .iter()
            .filter(|r| r.candidate)
            .map(|r| r.run_id.as_str())
            .collect();
        println!(
            "tolerance {tolerance}, {rank_by:?}: band {band:?} -> {}",
            v.selected
        );
    }
    Ok(())
}
