//! Entropy and boundary curves over 0..8 bits on the Titanic-shaped sample,
//! written as CSV and SVG next to the system temp dir.
//!
//! cargo run --example granularity_sweep [OUT_DIR]

use granulens::load_table;
use granulens::output::{curve_to_csv, write_atomic};
use granulens::svg::emit_svg;
use granulens::sweep::{convergence_summary, sweep_with, SweepOptions};

fn main() -> granulens::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/titanic_synthetic.csv");
    let table = load_table(std::fs::File::open(path)?, "Survived", None)?;
    let attrs = ["Pclass", "Sex", "Age", "Fare"];
    let options = SweepOptions {
        threads: None,
        table_id: "titanic_synthetic".into(),
    };
    let curve = sweep_with(&table, &attrs, 0, 8, &options)?;

    println!("bits blocks    H(D|P)  boundary");
    for p in &curve.points {
        println!(
            "{:>4} {:>6} {:>9.6} {:>9.6}",
            p.bits_level, p.block_count, p.conditional_bits, p.boundary_fraction
        );
    }
    let summary = convergence_summary(&curve)?;
    println!("violations: {}", summary.monotonicity_violations);
    if let Some(level) = curve.level_where_boundary_below(0.1) {
        println!("boundary fraction drops below 0.1 at {level} bits");
    }

    let dir = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, Into::into);
    let csv = dir.join("titanic_curve.csv");
    let svg = dir.join("titanic_curve.svg");
    write_atomic(&csv, &curve_to_csv(&curve.points)?)?;
    write_atomic(&svg, emit_svg(&curve)?.as_bytes())?;
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
