//! Granular analysis of tabular data and model runs.
//!
//! A table is granulated into indiscernibility classes (blocks) by discretizing
//! its numeric attributes into `2^b` equal-width bins. On top of a partition the
//! crate computes:
//!
//! * rough approximations, boundary regions and the dependency degree `γ`
//!   ([`rough`]);
//! * Shannon, joint and conditional entropy, and the granule-wise entropy
//!   report that ties entropy to the boundary region ([`entropy`]);
//! * entropy/boundary curves over increasing precision ([`sweep`]);
//! * positive-region reducts and information-gain ranking ([`reduction`]);
//! * metrics for externally trained model runs and a deterministic verdict
//!   for picking one configuration ([`eval`]).
//!
//! ```
//! use granulens::{load_table, GranulationScheme, sweep};
//!
//! let csv = "a1,a2,d\nP,0.5,0\nP,1.5,0\nQ,2.5,0\nQ,3.5,1\nR,4.5,1\nR,5.5,1\nR,6.5,1\nR,7.5,1\n";
//! let table = load_table(csv.as_bytes(), "d", None).unwrap();
//! let view = table.discretize(&GranulationScheme::new().with_bits("a2", 1)).unwrap();
//! assert_eq!(view.partition_by(&["a2"]).unwrap().block_count(), 2);
//!
//! let curve = sweep::sweep(&table, &["a2"], 0, 3).unwrap();
//! assert_eq!(curve.points.last().unwrap().boundary_fraction, 0.0);
//! ```

pub mod cli;
pub mod entropy;
mod error;
pub mod eval;
pub mod output;
pub mod reduction;
pub mod rough;
pub mod svg;
pub mod sweep;
pub mod table;

pub use error::{Error, Result};
pub use table::{
    load_table, AttrKind, AttributeSpec, Column, DiscreteView, GranulationScheme, InformationTable,
    Labels, Partition, SchemaHints,
};
