//! Load a CSV, look at the inferred schema and watch the partition refine as
//! the numeric attributes get more bits.
//!
//! cargo run --example load_and_partition

use granulens::{load_table, GranulationScheme};

fn main() -> granulens::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/titanic_synthetic.csv");
    let table = load_table(std::fs::File::open(path)?, "Survived", None)?;

    println!(
        "{} objects, decision `{}`",
        table.n(),
        table.decision_name()
    );
    for attr in table.attributes() {
        match attr.observed_range {
            Some((lo, hi)) => println!("  {:<12} {:?} [{lo}, {hi}]", attr.name, attr.kind),
            None => println!("  {:<12} {:?}", attr.name, attr.kind),
        }
    }

    let attrs = ["Pclass", "Sex", "Age"];
    let mut previous = None;
    for bits in 0..=6 {
        let scheme = GranulationScheme::uniform(&table, &attrs, bits)?;
        let partition = table.discretize(&scheme)?.partition_by(&attrs)?;
        let refines = previous.as_ref().is_none_or(|p| partition.refines(p));
        println!(
            "bits {bits}: {:>3} blocks, refines previous level: {refines}",
            partition.block_count()
        );
        previous = Some(partition);
    }

    // bits can also differ per attribute
    let scheme = GranulationScheme::new()
        .with_bits("Age", 3)
        .with_bits("Fare", 1);
    let p = table
        .discretize(&scheme)?
        .partition_by(&["Sex", "Age", "Fare"])?;
    println!("Sex + Age@3 + Fare@1: {} blocks", p.block_count());
    Ok(())
}
