//! Entropy and boundary trajectories over exponentially growing precision.
//!
//! Level `b` cuts every numeric attribute of the sweep into `2^b` equal-width
//! bins. Because bin widths halve exactly from one level to the next, each
//! level's partition refines the previous one, so both channels can only fall.

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::granular_entropy;
use crate::error::{Error, Result};
use crate::rough::to_f64;
use crate::table::{AttrKind, GranulationScheme, InformationTable, MAX_BITS};

/// Tolerance used when judging monotonicity of a curve.
pub const MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub bits_level: u32,
    pub block_count: usize,
    pub conditional_bits: f64,
    pub normalized_conditional: f64,
    pub boundary_fraction: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    pub points: Vec<SweepPoint>,
    pub attrs: Vec<String>,
    pub table_id: String,
    /// First level whose partition equals the raw-value partition; finer levels
    /// cannot separate anything more.
    pub saturated_at: Option<u32>,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Worker count; `None` uses the global pool, `Some(1)` runs inline.
    pub threads: Option<usize>,
    pub table_id: String,
}

/// Sweeps levels `bits_from..=bits_to` with default options.
pub fn sweep<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    bits_from: u32,
    bits_to: u32,
) -> Result<SweepCurve> {
    sweep_with(table, attrs, bits_from, bits_to, &SweepOptions::default())
}

pub fn sweep_with<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    bits_from: u32,
    bits_to: u32,
    options: &SweepOptions,
) -> Result<SweepCurve> {
    if bits_from > bits_to || bits_to > MAX_BITS {
        return Err(Error::InvalidArgument(format!(
            "bits range {bits_from}..{bits_to} must satisfy 0 <= from <= to <= {MAX_BITS}"
        )));
    }
    let idx = table.resolve_conditions(attrs)?;
    let numeric: Vec<&str> = idx
        .iter()
        .map(|&j| &table.attributes()[j])
        .filter(|a| a.kind == AttrKind::Numeric)
        .map(|a| a.name.as_str())
        .collect();

    let level = |b: u32| -> Result<SweepPoint> {
        let mut scheme = GranulationScheme::new();
        for name in &numeric {
            scheme.set_bits(*name, b);
        }
        let partition = table.discretize(&scheme)?.partition_by_indices(&idx);
        let report = granular_entropy(&partition, table.decision_labels())?;
        Ok(SweepPoint {
            bits_level: b,
            block_count: partition.block_count(),
            conditional_bits: report.conditional_bits,
            normalized_conditional: report.normalized_conditional,
            boundary_fraction: to_f64(&report.boundary_fraction),
            gamma: to_f64(&report.gamma),
        })
    };

    let levels: Vec<u32> = (bits_from..=bits_to).collect();
    let points: Vec<SweepPoint> = match options.threads {
        Some(1) => levels.into_iter().map(level).collect::<Result<_>>()?,
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(|| levels.into_par_iter().map(level).collect::<Result<_>>())?,
        None => levels.into_par_iter().map(level).collect::<Result<_>>()?,
    };

    let finest = table.raw_partition(&idx).block_count();
    let saturated_at = points
        .iter()
        .find(|p| p.block_count == finest)
        .map(|p| p.bits_level);

    Ok(SweepCurve {
        points,
        attrs: idx
            .iter()
            .map(|&j| table.attributes()[j].name.clone())
            .collect(),
        table_id: options.table_id.clone(),
        saturated_at,
    })
}

impl SweepCurve {
    /// First level whose boundary fraction is at most `threshold`.
    pub fn level_where_boundary_below(&self, threshold: f64) -> Option<u32> {
        self.points
            .iter()
            .find(|p| p.boundary_fraction <= threshold)
            .map(|p| p.bits_level)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSummary {
    /// Adjacent point pairs where the level does not increase or either channel
    /// rises by more than [`MONOTONE_TOL`].
    pub monotonicity_violations: usize,
    pub terminal_entropy: f64,
    pub terminal_boundary: f64,
}

pub fn convergence_summary(curve: &SweepCurve) -> Result<ConvergenceSummary> {
    let last = curve
        .points
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty curve".into()))?;
    let monotonicity_violations = curve
        .points
        .windows(2)
        .filter(|w| {
            w[1].bits_level <= w[0].bits_level
                || w[1].conditional_bits > w[0].conditional_bits + MONOTONE_TOL
                || w[1].boundary_fraction > w[0].boundary_fraction + MONOTONE_TOL
        })
        .count();
    Ok(ConvergenceSummary {
        monotonicity_violations,
        terminal_entropy: last.conditional_bits,
        terminal_boundary: last.boundary_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::load_table;

    fn toy8() -> InformationTable {
        load_table(include_str!("../data/toy8.csv").as_bytes(), "d", None).unwrap()
    }

    #[test]
    fn toy8_sweep_points() {
        let curve = sweep(&toy8(), &["a2"], 0, 3).unwrap();
        let expected = [
            (0, 1, 0.954434, 1.0),
            (1, 2, 0.405639, 0.5),
            (2, 4, 0.25, 0.25),
            (3, 8, 0.0, 0.0),
        ];
        assert_eq!(curve.points.len(), 4);
        for (p, (b, blocks, h, bf)) in curve.points.iter().zip(expected) {
            assert_eq!(p.bits_level, b);
            assert_eq!(p.block_count, blocks);
            assert!((p.conditional_bits - h).abs() < 1e-6, "{p:?}");
            assert_eq!(p.boundary_fraction, bf);
            assert_eq!(p.gamma, 1.0 - bf);
        }
        assert_eq!(curve.saturated_at, Some(3));
        assert_eq!(curve.attrs, ["a2"]);
    }

    #[test]
    fn toy8_convergence() {
        let curve = sweep(&toy8(), &["a2"], 0, 3).unwrap();
        let s = convergence_summary(&curve).unwrap();
        assert_eq!(s.monotonicity_violations, 0);
        assert_eq!(s.terminal_entropy, 0.0);
        assert_eq!(s.terminal_boundary, 0.0);
        assert_eq!(curve.level_where_boundary_below(0.3), Some(2));
        assert_eq!(curve.level_where_boundary_below(-1.0), None);
    }

    #[test]
    fn shuffled_curve_has_violations() {
        let mut curve = sweep(&toy8(), &["a2"], 0, 3).unwrap();
        curve.points.reverse();
        assert!(convergence_summary(&curve).unwrap().monotonicity_violations > 0);

        curve.points.truncate(1);
        assert_eq!(
            convergence_summary(&curve).unwrap().monotonicity_violations,
            0
        );
        curve.points.clear();
        assert!(convergence_summary(&curve).is_err());
    }

    #[test]
    fn constant_decision_is_flat_zero() {
        let t = load_table("x,d\n1,a\n2,a\n3,a\n".as_bytes(), "d", None).unwrap();
        let curve = sweep(&t, &["x"], 0, 4).unwrap();
        assert!(curve
            .points
            .iter()
            .all(|p| p.conditional_bits == 0.0 && p.boundary_fraction == 0.0));
    }

    #[test]
    fn coarsest_level_only() {
        let t = toy8();
        let curve = sweep(&t, &["a2"], 0, 0).unwrap();
        assert_eq!(curve.points.len(), 1);
        assert!((curve.points[0].conditional_bits - 0.954434).abs() < 1e-6);
        assert_eq!(curve.points[0].boundary_fraction, 1.0);
    }

    #[test]
    fn invalid_ranges_and_attrs() {
        let t = toy8();
        assert!(sweep(&t, &["a2"], 3, 2).is_err());
        assert!(sweep(&t, &["a2"], 0, 25).is_err());
        assert!(matches!(
            sweep(&t, &["zz"], 0, 1),
            Err(Error::UnknownAttribute(_))
        ));
        let none: [&str; 0] = [];
        let base = sweep(&t, &none, 0, 2).unwrap();
        assert!(base.points.iter().all(|p| p.block_count == 1));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let t = toy8();
        let one = SweepOptions {
            threads: Some(1),
            ..Default::default()
        };
        let four = SweepOptions {
            threads: Some(4),
            ..Default::default()
        };
        assert_eq!(
            sweep_with(&t, &["a1", "a2"], 0, 5, &one).unwrap(),
            sweep_with(&t, &["a1", "a2"], 0, 5, &four).unwrap()
        );
    }
}
