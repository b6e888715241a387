//! Evaluation of externally trained model runs.
//!
//! A run file lists, for every object of a table, the predicted class and
//! optionally the granule the model put it in (tree leaf, cluster, neighborhood).
//! The granules define a partition of the universe; its boundary fraction and
//! conditional entropy sit next to plain accuracy in the [`EvalReport`].
//!
//! ```text
//! # run_id=dt_depth4 meta=max_depth=4
//! object_index,predicted,granule
//! 0,0,leaf3
//! 1,0,leaf3
//! ...
//! ```

use std::cmp::Ordering;
use std::io::Read;

use serde::Serialize;

use crate::entropy::granular_entropy;
use crate::error::{Error, Result};
use crate::rough::{serialize_fraction, Fraction};
use crate::table::{InformationTable, Partition};

/// Default accuracy band for [`compare_runs`].
pub const DEFAULT_TOLERANCE: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRun {
    pub run_id: String,
    pub meta: Option<String>,
    /// Predicted class token per object, indexed by object.
    pub predicted: Vec<String>,
    pub granule: Option<Vec<String>>,
}

impl ModelRun {
    pub fn new(
        run_id: impl Into<String>,
        predicted: Vec<String>,
        granule: Option<Vec<String>>,
    ) -> Self {
        ModelRun {
            run_id: run_id.into(),
            meta: None,
            predicted,
            granule,
        }
    }
}

fn run_error(line: u64, message: impl Into<String>) -> Error {
    Error::RunFile {
        line,
        message: message.into(),
    }
}

/// Parses `# run_id=<text> meta=<text>`.
fn parse_directive(line: &str) -> (Option<String>, Option<String>) {
    let body = line.trim_start_matches('#');
    let (head, meta) = match body.find("meta=") {
        Some(at) => (&body[..at], Some(body[at + 5..].trim().to_owned())),
        None => (body, None),
    };
    let run_id = head
        .find("run_id=")
        .and_then(|at| head[at + 7..].split_whitespace().next().map(str::to_owned));
    (run_id, meta.filter(|m| !m.is_empty()))
}

/// Reads a run file against `table`. `default_run_id` (typically the file
/// stem) is used unless the file carries a `# run_id=` directive.
pub fn load_run<R: Read>(
    mut input: R,
    table: &InformationTable,
    default_run_id: &str,
) -> Result<ModelRun> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;

    let mut run_id = default_run_id.to_owned();
    let mut meta = None;
    let mut body = text.as_str();
    let mut offset = 0;
    if body.starts_with('#') {
        let (first, rest) = body.split_once('\n').unwrap_or((body, ""));
        let (id, m) = parse_directive(first.trim_end());
        if let Some(id) = id {
            run_id = id;
        }
        meta = m;
        body = rest;
        offset = 1;
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(body.as_bytes());
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| run_error(offset + 1, "missing header row"))??;

    let mut col_index = None;
    let mut col_pred = None;
    let mut col_gran = None;
    for (j, name) in header.iter().enumerate() {
        let slot = match name {
            "object_index" => &mut col_index,
            "predicted" => &mut col_pred,
            "granule" => &mut col_gran,
            other => {
                return Err(run_error(
                    offset + 1,
                    format!("unexpected column `{other}`"),
                ))
            }
        };
        if slot.replace(j).is_some() {
            return Err(run_error(offset + 1, format!("duplicate column `{name}`")));
        }
    }
    let (col_index, col_pred) = match (col_index, col_pred) {
        (Some(i), Some(p)) => (i, p),
        _ => {
            return Err(run_error(
                offset + 1,
                "header must contain `object_index` and `predicted`",
            ))
        }
    };

    let n = table.n();
    let mut predicted: Vec<Option<String>> = vec![None; n];
    let mut granule: Vec<Option<String>> = vec![None; n];
    let mut rows = 0usize;
    for record in records {
        let record = record?;
        let line = offset + record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(run_error(
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        let raw = &record[col_index];
        if raw.is_empty() {
            return Err(run_error(line, "missing object_index"));
        }
        let idx: usize = raw.parse().map_err(|_| {
            run_error(
                line,
                format!("object_index `{raw}` is not a non-negative integer"),
            )
        })?;
        if idx >= n {
            return Err(run_error(
                line,
                format!("object_index {idx} out of range for {n} objects"),
            ));
        }
        if predicted[idx].is_some() {
            return Err(run_error(line, format!("duplicate object_index {idx}")));
        }
        let pred = &record[col_pred];
        if pred.is_empty() {
            return Err(run_error(line, "column `predicted` is empty"));
        }
        predicted[idx] = Some(pred.to_owned());
        if let Some(g) = col_gran {
            if record[g].is_empty() {
                return Err(run_error(line, "column `granule` is empty"));
            }
            granule[idx] = Some(record[g].to_owned());
        }
        rows += 1;
    }
    if rows != n {
        return Err(run_error(
            offset + 1,
            format!("run has {rows} rows but the table has {n} objects"),
        ));
    }

    Ok(ModelRun {
        run_id,
        meta,
        predicted: predicted.into_iter().flatten().collect(),
        granule: col_gran.map(|_| granule.into_iter().flatten().collect()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub run_id: String,
    pub accuracy: f64,
    pub model_conditional_bits: f64,
    #[serde(serialize_with = "serialize_fraction")]
    pub model_boundary_fraction: Fraction,
    #[serde(serialize_with = "serialize_fraction")]
    pub model_gamma: Fraction,
    pub block_count: usize,
    /// The run had no granule column; blocks are groups of equal predictions.
    pub used_fallback_partition: bool,
}

/// Accuracy against the decision column plus rough/entropy metrics of the
/// model-induced partition.
pub fn evaluate_run(table: &InformationTable, run: &ModelRun) -> Result<EvalReport> {
    let n = table.n();
    let check = |len: usize| {
        if len == n {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                expected: n,
                found: len,
            })
        }
    };
    check(run.predicted.len())?;
    let labels = table.decision_labels();
    let correct = run
        .predicted
        .iter()
        .enumerate()
        .filter(|(i, p)| labels.class_of(*i) == p.as_str())
        .count();

    let partition = match &run.granule {
        Some(g) => {
            check(g.len())?;
            Partition::from_keys(g)
        }
        None => Partition::from_keys(&run.predicted),
    };
    let report = granular_entropy(&partition, labels)?;
    Ok(EvalReport {
        run_id: run.run_id.clone(),
        accuracy: correct as f64 / n as f64,
        model_conditional_bits: report.conditional_bits,
        model_boundary_fraction: report.boundary_fraction,
        model_gamma: report.gamma,
        block_count: partition.block_count(),
        used_fallback_partition: run.granule.is_none(),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankBy {
    /// boundary fraction, then conditional entropy
    #[default]
    BoundaryFirst,
    /// conditional entropy, then boundary fraction
    EntropyFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub tolerance: f64,
    pub rank_by: RankBy,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            tolerance: DEFAULT_TOLERANCE,
            rank_by: RankBy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedRun {
    pub run_id: String,
    /// Within the accuracy band of the best run.
    pub candidate: bool,
    pub accuracy: f64,
    #[serde(serialize_with = "serialize_fraction")]
    pub boundary_fraction: Fraction,
    pub conditional_bits: f64,
    pub block_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    pub ranked: Vec<RankedRun>,
    pub selected: String,
    pub tolerance_used: f64,
    pub rank_by: RankBy,
}

fn rank_order(a: &RankedRun, b: &RankedRun, rank_by: RankBy) -> Ordering {
    let by_bf = a.boundary_fraction.cmp(&b.boundary_fraction);
    let by_h = a.conditional_bits.total_cmp(&b.conditional_bits);
    let tail = || {
        a.block_count
            .cmp(&b.block_count)
            .then_with(|| a.run_id.cmp(&b.run_id))
            .then_with(|| b.accuracy.total_cmp(&a.accuracy))
    };
    match (a.candidate, b.candidate) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => match rank_by {
            RankBy::BoundaryFirst => by_bf.then(by_h).then_with(tail),
            RankBy::EntropyFirst => by_h.then(by_bf).then_with(tail),
        },
        (false, false) => b
            .accuracy
            .total_cmp(&a.accuracy)
            .then_with(|| a.run_id.cmp(&b.run_id))
            .then(by_bf)
            .then(by_h)
            .then(a.block_count.cmp(&b.block_count)),
    }
}

/// Picks one configuration: among runs within `tolerance` of the best
/// accuracy, the one with the smallest boundary fraction, then conditional
/// entropy, then block count, then run id. Runs outside the band follow by
/// accuracy.
pub fn compare_runs(reports: &[EvalReport], options: &CompareOptions) -> Result<ComparisonVerdict> {
    if reports.is_empty() {
        return Err(Error::InvalidArgument("no runs to compare".into()));
    }
    let tolerance = options.tolerance;
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tolerance} must be a non-negative number"
        )));
    }
    let mut ids = std::collections::HashSet::new();
    if let Some(dup) = reports.iter().find(|r| !ids.insert(r.run_id.as_str())) {
        return Err(Error::InvalidArgument(format!(
            "run id `{}` appears more than once",
            dup.run_id
        )));
    }
    let best = reports
        .iter()
        .map(|r| r.accuracy)
        .fold(f64::NEG_INFINITY, f64::max);
    let threshold = best - tolerance;
    let mut ranked: Vec<RankedRun> = reports
        .iter()
        .map(|r| RankedRun {
            run_id: r.run_id.clone(),
            candidate: r.accuracy >= threshold,
            accuracy: r.accuracy,
            boundary_fraction: r.model_boundary_fraction,
            conditional_bits: r.model_conditional_bits,
            block_count: r.block_count,
        })
        .collect();
    ranked.sort_by(|a, b| rank_order(a, b, options.rank_by));
    Ok(ComparisonVerdict {
        selected: ranked[0].run_id.clone(),
        ranked,
        tolerance_used: tolerance,
        rank_by: options.rank_by,
    })
}
