//! Greedy and exhaustive positive-region reducts, plus the information-gain
//! ranking, at a fixed granularity.
//!
//! cargo run --example attribute_reduction

use granulens::reduction::{entropy_rank, exhaustive_reducts, greedy_reduct};
use granulens::rough::to_f64;
use granulens::{load_table, GranulationScheme, InformationTable};

fn report(table: &InformationTable, bits: u32) -> granulens::Result<()> {
    let attrs = table.condition_attributes();
    let labels = table.decision_labels();
    let view = table.discretize(&GranulationScheme::uniform(table, &attrs, bits)?)?;
    let r = greedy_reduct(&view, labels)?;
    println!("bits {bits}: gamma(all) = {:.3}", to_f64(&r.gamma_full));
    if r.inconsistent_fallback {
        println!("  conflicting objects remain, keeping all attributes");
    } else {
        for step in &r.trace {
            println!(
                "  + {:<8} gamma {:.3}, H(D|P) {:.3}",
                step.attribute, step.gamma, step.conditional_bits
            );
        }
        println!("  greedy: {:?}, pruned {:?}", r.selected, r.pruned);
        println!(
            "  all reducts: {:?}",
            exhaustive_reducts(&view, labels, attrs.len())?
        );
    }
    for g in entropy_rank(&view, labels)?.iter().take(3) {
        println!("  gain {:<8} {:.4}", g.attribute, g.information_gain);
    }
    Ok(())
}

fn main() -> granulens::Result<()> {
    let toy8 = load_table(include_str!("../data/toy8.csv").as_bytes(), "d", None)?;
    println!("TOY-8");
    report(&toy8, 3)?;

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/titanic_synthetic.csv");
    // drop identifiers such as Name and Ticket, which separate every passenger
    let attrs = ["Pclass", "Sex", "Age", "SibSp", "Parch", "Fare", "Embarked"];
    let titanic = load_table(std::fs::File::open(path)?, "Survived", None)?.project(&attrs)?;
    println!("Titanic-shaped sample");
    for bits in [2, 8] {
        report(&titanic, bits)?;
    }
    Ok(())
}
