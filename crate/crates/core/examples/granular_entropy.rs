//! Shannon, joint and conditional entropy, and the per-granule report that
//! sits next to the boundary fraction.
//!
//! cargo run --example granular_entropy

use granulens::entropy::{conditional, granular_entropy, joint, shannon, Distribution};
use granulens::rough::to_f64;
use granulens::{load_table, GranulationScheme};

const TOY8: &str = include_str!("../data/toy8.csv");

fn main() -> granulens::Result<()> {
    println!(
        "H(1/2, 1/2)      = {}",
        shannon(&Distribution::from_counts([1, 1]))?
    );
    println!(
        "H(3/8, 5/8)      = {:.6}",
        shannon(&Distribution::from_counts([3, 5]))?
    );
    println!(
        "H(1/2,1/4,1/8,1/8) = {}",
        shannon(&Distribution::from_counts([4, 2, 1, 1]))?
    );

    let table = load_table(TOY8.as_bytes(), "d", None)?;
    let labels = table.decision_labels();
    let view = table.discretize(&GranulationScheme::new().with_bits("a2", 2))?;
    let p = view.partition_by(&["a2"])?;

    let direct = conditional(labels.codes(), &p)?;
    let chain =
        joint(labels.codes(), p.block_ids())? - shannon(&Distribution::from_tokens(p.block_ids()))?;
    println!("H(d | a2@2) = {direct:.6} (chain rule gives {chain:.6})");

    let report = granular_entropy(&p, labels)?;
    for b in &report.per_block {
        println!(
            "  block {}: weight {:.3}, H = {:.6}",
            b.block, b.weight, b.entropy_bits
        );
    }
    let bf = to_f64(&report.boundary_fraction);
    println!(
        "conditional {:.6} <= boundary fraction {bf:.3} * log2({}) = {:.6}",
        report.conditional_bits,
        report.class_count,
        bf * (report.class_count as f64).log2()
    );
    Ok(())
}
