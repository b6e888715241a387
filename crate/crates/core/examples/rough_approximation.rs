//! Lower and upper approximations of a decision class, and the positive and
//! boundary regions of the whole decision.
//!
//! cargo run --example rough_approximation

use granulens::rough::{approximate, regions, to_f64, ConceptSet};
use granulens::{load_table, GranulationScheme};

const TOY8: &str = include_str!("../data/toy8.csv");

fn main() -> granulens::Result<()> {
    let table = load_table(TOY8.as_bytes(), "d", None)?;
    let labels = table.decision_labels();

    let coarse = table
        .discretize(&GranulationScheme::new())?
        .partition_by(&["a1"])?;
    let concept = ConceptSet::for_class(labels, "1")?;
    let a = approximate(&coarse, &concept)?;
    println!("blocks under a1: {:?}", coarse.blocks());
    println!(
        "class 1: lower {:?}, upper {:?}, boundary {:?}",
        a.lower, a.upper, a.boundary
    );
    println!("accuracy alpha = {}", a.accuracy_alpha);

    // the boundary is the same for a concept and its complement
    let c = approximate(&coarse, &concept.complement())?;
    assert_eq!(a.boundary, c.boundary);

    for bits in 0..=3 {
        let view = table.discretize(&GranulationScheme::new().with_bits("a2", bits))?;
        let r = regions(&view.partition_by(&["a2"])?, labels)?;
        println!(
            "a2 @ {bits} bits: positive {:?}, boundary {:?}, gamma {} ({:.3})",
            r.positive,
            r.boundary_overall,
            r.gamma,
            to_f64(&r.gamma)
        );
    }
    Ok(())
}
