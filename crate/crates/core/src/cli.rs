//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 on a data error. A
//! human-readable summary goes to standard output; machine-readable results are
//! written only to `--out` (and `--svg`) paths, each through a temporary file
//! so a failed run never leaves a partial output behind.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entropy::{granular_entropy, shannon, Distribution};
use crate::error::{Error, Result};
use crate::eval::{compare_runs, evaluate_run, load_run, CompareOptions, EvalReport, RankBy};
use crate::output::{curve_to_csv, fmt_real, write_atomic};
use crate::reduction::{entropy_rank, exhaustive_reducts, greedy_reduct, MAX_EXHAUSTIVE_ATTRS};
use crate::rough::{approximate, regions, to_f64, ConceptSet};
use crate::svg::emit_svg;
use crate::sweep::{convergence_summary, sweep_with, SweepOptions};
use crate::table::{
    load_table, AttrKind, GranulationScheme, InformationTable, SchemaHints, MAX_BITS,
};

/// Environment fallback for `--threads`.
pub const THREADS_ENV: &str = "GRANULENS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "granulens",
    version,
    about = "Granular rough-set and entropy analysis of datasets and model runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Show attributes, kinds, ranges and the decision distribution
    Inspect {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rough approximations: the region report, or one class with --class
    Rough {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        gran: GranArgs,
        /// Decision class to approximate
        #[arg(long = "class")]
        class: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Granule-wise entropy of the decision
    Entropy {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        gran: GranArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Entropy and boundary fraction over a range of bits levels
    Sweep {
        #[command(flatten)]
        table: TableArgs,
        /// Condition attributes (comma separated; "" for none; default: all)
        #[arg(long, value_delimiter = ',')]
        attrs: Option<Vec<String>>,
        /// Inclusive range of bits levels, `FROM..TO` or a single level
        #[arg(long, value_parser = parse_bits_range, default_value = "0..8")]
        bits: (u32, u32),
        /// Also render the curve as an SVG chart
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Worker threads (default: $GRANULENS_THREADS, then all cores)
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Attribute reduction and information-gain ranking at a fixed bits level
    Reduce {
        #[command(flatten)]
        table: TableArgs,
        /// Bits applied to every numeric condition attribute
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=MAX_BITS as i64))]
        bits: u32,
        /// Per-attribute override `NAME=BITS` (repeatable)
        #[arg(long = "bits-for", value_parser = parse_bits_for)]
        bits_for: Vec<(String, u32)>,
        /// Also enumerate all reducts (at most --max-attrs attributes)
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = MAX_EXHAUSTIVE_ATTRS)]
        max_attrs: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Accuracy and rough/entropy metrics of model-run files
    Evaluate {
        #[command(flatten)]
        table: TableArgs,
        /// Run file `object_index,predicted[,granule]` (repeatable)
        #[arg(long = "run", required = true)]
        runs: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rank model runs and select one configuration
    ///
    /// Runs whose accuracy is within --tolerance of the best accuracy are
    /// candidates. Candidates are ordered by boundary fraction, then
    /// conditional entropy, then block count, then run id (ascending); with
    /// --rank-by entropy-first the first two keys swap. The first candidate
    /// is selected. Remaining runs follow by accuracy, then run id.
    Compare {
        #[command(flatten)]
        table: TableArgs,
        /// Run file `object_index,predicted[,granule]` (repeatable)
        #[arg(long = "run", required = true)]
        runs: Vec<PathBuf>,
        /// Width of the accuracy band below the best run
        #[arg(long, default_value_t = crate::eval::DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Which tie-break key comes first inside the band
        #[arg(long = "rank-by", value_enum, default_value = "boundary-first")]
        rank_by: RankByArg,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Input CSV with a header row
    input: PathBuf,
    /// Name of the decision column
    #[arg(long)]
    decision: String,
    /// Force these columns numeric
    #[arg(long, value_delimiter = ',')]
    numeric: Vec<String>,
    /// Force these columns categorical
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
}

#[derive(Debug, Args)]
struct GranArgs {
    /// Condition attributes (comma separated; "" for none; default: all)
    #[arg(long, value_delimiter = ',')]
    attrs: Option<Vec<String>>,
    /// Bits applied to every numeric attribute among --attrs
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=MAX_BITS as i64))]
    bits: u32,
    /// Per-attribute override `NAME=BITS` (repeatable)
    #[arg(long = "bits-for", value_parser = parse_bits_for)]
    bits_for: Vec<(String, u32)>,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Machine-readable output file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: from the --out extension, else csv)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RankByArg {
    BoundaryFirst,
    EntropyFirst,
}

impl From<RankByArg> for RankBy {
    fn from(r: RankByArg) -> Self {
        match r {
            RankByArg::BoundaryFirst => RankBy::BoundaryFirst,
            RankByArg::EntropyFirst => RankBy::EntropyFirst,
        }
    }
}

fn parse_bits_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let (from, to) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let from: u32 = from
        .parse()
        .map_err(|_| format!("invalid bits level `{from}`"))?;
    let to: u32 = to
        .parse()
        .map_err(|_| format!("invalid bits level `{to}`"))?;
    if from > to || to > MAX_BITS {
        return Err(format!(
            "bits range must satisfy 0 <= FROM <= TO <= {MAX_BITS}"
        ));
    }
    Ok((from, to))
}

fn parse_bits_for(s: &str) -> std::result::Result<(String, u32), String> {
    let (name, bits) = s.split_once('=').ok_or("expected NAME=BITS")?;
    let bits: u32 = bits.parse().map_err(|_| format!("invalid bits `{bits}`"))?;
    if bits > MAX_BITS {
        return Err(format!("bits must be at most {MAX_BITS}"));
    }
    Ok((name.to_owned(), bits))
}

/// Runs the CLI with process stdout/stderr and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Runs the CLI writing the summary to `stdout` and diagnostics to `stderr`.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            if let Err(e) = outcome.commit(stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Everything a command produces; nothing touches disk until it all succeeded.
#[derive(Default)]
struct Outcome {
    summary: String,
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outcome {
    fn line(&mut self, s: impl AsRef<str>) {
        self.summary.push_str(s.as_ref());
        self.summary.push('\n');
    }

    fn commit(self, stdout: &mut dyn Write) -> Result<()> {
        for (path, bytes) in &self.files {
            write_atomic(path, bytes)?;
        }
        stdout.write_all(self.summary.as_bytes())?;
        Ok(())
    }
}

impl OutArgs {
    fn format(&self) -> Format {
        self.format.unwrap_or_else(|| match &self.out {
            Some(p)
                if p.extension()
                    .is_some_and(|e| e.eq_ignore_ascii_case("json")) =>
            {
                Format::Json
            }
            _ => Format::Csv,
        })
    }

    /// Queues the output file, rendering only when `--out` was given.
    fn emit<J, C>(&self, outcome: &mut Outcome, json: J, csv: C) -> Result<()>
    where
        J: FnOnce() -> Result<serde_json::Value>,
        C: FnOnce() -> Result<Vec<u8>>,
    {
        let Some(path) = &self.out else {
            return Ok(());
        };
        let bytes = match self.format() {
            Format::Json => {
                let mut b = serde_json::to_vec_pretty(&json()?)?;
                b.push(b'\n');
                b
            }
            Format::Csv => csv()?,
        };
        outcome.files.push((path.clone(), bytes));
        Ok(())
    }
}

fn csv_bytes<R: AsRef<[String]>>(
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.as_ref())?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn to_json<T: Serialize>(value: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(value)?)
}

fn set_str(set: &[usize]) -> String {
    let items: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

impl TableArgs {
    fn load(&self) -> Result<InformationTable> {
        let mut hints = SchemaHints::new();
        for n in &self.numeric {
            hints.insert(n.clone(), AttrKind::Numeric);
        }
        for c in &self.categorical {
            hints.insert(c.clone(), AttrKind::Categorical);
        }
        let file = std::fs::File::open(&self.input).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", self.input.display()),
            ))
        })?;
        load_table(std::io::BufReader::new(file), &self.decision, Some(&hints))
    }
}

fn resolve_attrs(table: &InformationTable, attrs: &Option<Vec<String>>) -> Vec<String> {
    match attrs {
        Some(list) => list.iter().filter(|a| !a.is_empty()).cloned().collect(),
        None => table
            .condition_attributes()
            .into_iter()
            .map(str::to_owned)
            .collect(),
    }
}

impl GranArgs {
    fn scheme(&self, table: &InformationTable, attrs: &[String]) -> Result<GranulationScheme> {
        let mut scheme = GranulationScheme::uniform(table, attrs, self.bits)?;
        for (name, b) in &self.bits_for {
            scheme.set_bits(name.clone(), *b);
        }
        Ok(scheme)
    }
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("{THREADS_ENV}={v} is not a positive integer"))
            }),
        _ => Ok(None),
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn evaluate_files(table: &InformationTable, runs: &[PathBuf]) -> Result<Vec<EvalReport>> {
    runs.iter()
        .map(|path| {
            let file = std::fs::File::open(path).map_err(|e| {
                Error::Io(std::io::Error::new(
                    e.kind(),
                    format!("{}: {e}", path.display()),
                ))
            })?;
            let run = load_run(std::io::BufReader::new(file), table, &file_stem(path))
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            evaluate_run(table, &run)
        })
        .collect()
}

fn execute(command: Command) -> Result<Outcome> {
    let mut o = Outcome::default();
    match command {
        Command::Inspect { table, out } => {
            let t = table.load()?;
            let labels = t.decision_labels();
            let counts: Vec<u64> = {
                let mut c = vec![0u64; labels.class_count()];
                for &code in labels.codes() {
                    c[code as usize] += 1;
                }
                c
            };
            let h = shannon(&Distribution::from_counts(counts.iter().copied()))?;
            o.line(format!("objects: {}", t.n()));
            o.line(format!(
                "decision: {} (H = {} bits)",
                t.decision_name(),
                fmt_real(h)
            ));
            for (class, count) in labels.classes().iter().zip(&counts) {
                o.line(format!("  class {class}: {count}"));
            }
            for (j, a) in t.attributes().iter().enumerate() {
                if j == t.decision_index() {
                    continue;
                }
                match (a.kind, a.observed_range) {
                    (AttrKind::Numeric, Some((lo, hi))) => o.line(format!(
                        "{}: numeric [{}, {}]",
                        a.name,
                        fmt_real(lo),
                        fmt_real(hi)
                    )),
                    (AttrKind::Numeric, None) => {
                        o.line(format!("{}: numeric (all missing)", a.name))
                    }
                    (AttrKind::Categorical, _) => o.line(format!(
                        "{}: categorical, {} levels",
                        a.name,
                        t.levels(j).map_or(0, <[_]>::len)
                    )),
                }
            }
            let classes: BTreeMap<&str, u64> = labels
                .classes()
                .iter()
                .map(String::as_str)
                .zip(counts.iter().copied())
                .collect();
            out.emit(
                &mut o,
                || {
                    Ok(serde_json::json!({
                        "n": t.n(),
                        "decision": t.decision_name(),
                        "decision_entropy_bits": h,
                        "classes": classes,
                        "attributes": to_json(&t.attributes())?,
                    }))
                },
                || {
                    let rows = t.attributes().iter().enumerate().map(|(j, a)| {
                        let (lo, hi) = a
                            .observed_range
                            .map_or((String::new(), String::new()), |(l, h)| {
                                (fmt_real(l), fmt_real(h))
                            });
                        vec![
                            a.name.clone(),
                            match a.kind {
                                AttrKind::Numeric => "numeric".into(),
                                AttrKind::Categorical => "categorical".into(),
                            },
                            lo,
                            hi,
                            t.levels(j).map_or(String::new(), |l| l.len().to_string()),
                            (j == t.decision_index()).to_string(),
                        ]
                    });
                    csv_bytes(&["name", "kind", "min", "max", "levels", "decision"], rows)
                },
            )?;
        }

        Command::Rough {
            table,
            gran,
            class,
            out,
        } => {
            let t = table.load()?;
            let attrs = resolve_attrs(&t, &gran.attrs);
            let view = t.discretize(&gran.scheme(&t, &attrs)?)?;
            let partition = view.partition_by(&attrs)?;
            let labels = t.decision_labels();
            o.line(format!(
                "attributes: {{{}}}, blocks: {}",
                attrs.join(","),
                partition.block_count()
            ));
            match class {
                Some(class) => {
                    let concept = ConceptSet::for_class(labels, &class)?;
                    let a = approximate(&partition, &concept)?;
                    o.line(format!("class {class}"));
                    o.line(format!("  lower    = {}", set_str(&a.lower)));
                    o.line(format!("  upper    = {}", set_str(&a.upper)));
                    o.line(format!("  boundary = {}", set_str(&a.boundary)));
                    o.line(format!("  alpha    = {:.6}", to_f64(&a.accuracy_alpha)));
                    out.emit(
                        &mut o,
                        || {
                            let mut v = to_json(&a)?;
                            v["class"] = serde_json::Value::String(class.clone());
                            Ok(v)
                        },
                        || {
                            let rows = (0..t.n()).map(|i| {
                                vec![
                                    i.to_string(),
                                    partition.block_of(i).to_string(),
                                    concept.contains(i).to_string(),
                                    a.lower.binary_search(&i).is_ok().to_string(),
                                    a.upper.binary_search(&i).is_ok().to_string(),
                                    a.boundary.binary_search(&i).is_ok().to_string(),
                                ]
                            });
                            csv_bytes(
                                &[
                                    "object_index",
                                    "block",
                                    "in_concept",
                                    "lower",
                                    "upper",
                                    "boundary",
                                ],
                                rows,
                            )
                        },
                    )?;
                }
                None => {
                    let r = regions(&partition, labels)?;
                    o.line(format!("positive = {}", set_str(&r.positive)));
                    o.line(format!("boundary = {}", set_str(&r.boundary_overall)));
                    o.line(format!("gamma = {:.6}", to_f64(&r.gamma)));
                    o.line(format!(
                        "boundary_fraction = {:.6}",
                        to_f64(&r.boundary_fraction)
                    ));
                    for (c, a) in &r.per_class {
                        o.line(format!(
                            "  class {c}: |lower| = {}, |upper| = {}, alpha = {:.6}",
                            a.lower.len(),
                            a.upper.len(),
                            to_f64(&a.accuracy_alpha)
                        ));
                    }
                    out.emit(
                        &mut o,
                        || to_json(&r),
                        || {
                            let rows = (0..t.n()).map(|i| {
                                let region = if r.positive.binary_search(&i).is_ok() {
                                    "positive"
                                } else {
                                    "boundary"
                                };
                                vec![
                                    i.to_string(),
                                    partition.block_of(i).to_string(),
                                    labels.class_of(i).to_owned(),
                                    region.to_owned(),
                                ]
                            });
                            csv_bytes(&["object_index", "block", "class", "region"], rows)
                        },
                    )?;
                }
            }
        }

        Command::Entropy { table, gran, out } => {
            let t = table.load()?;
            let attrs = resolve_attrs(&t, &gran.attrs);
            let view = t.discretize(&gran.scheme(&t, &attrs)?)?;
            let partition = view.partition_by(&attrs)?;
            let r = granular_entropy(&partition, t.decision_labels())?;
            o.line(format!(
                "attributes: {{{}}}, blocks: {}",
                attrs.join(","),
                partition.block_count()
            ));
            o.line(format!(
                "conditional_bits = {}",
                fmt_real(r.conditional_bits)
            ));
            o.line(format!(
                "normalized_conditional = {}",
                fmt_real(r.normalized_conditional)
            ));
            o.line(format!(
                "boundary_fraction = {}",
                fmt_real(to_f64(&r.boundary_fraction))
            ));
            o.line(format!("classes = {}", r.class_count));
            out.emit(
                &mut o,
                || to_json(&r),
                || {
                    let rows = r.per_block.iter().map(|b| {
                        vec![
                            b.block.to_string(),
                            partition.block(b.block).len().to_string(),
                            fmt_real(b.weight),
                            fmt_real(b.entropy_bits),
                        ]
                    });
                    csv_bytes(&["block", "size", "weight", "entropy_bits"], rows)
                },
            )?;
        }

        Command::Sweep {
            table,
            attrs,
            bits: (from, to),
            svg,
            threads,
            out,
        } => {
            let t = table.load()?;
            let attrs = resolve_attrs(&t, &attrs);
            let threads = match threads {
                Some(0) => return Err(Error::InvalidArgument("--threads must be positive".into())),
                Some(n) => Some(n),
                None => threads_from_env()?,
            };
            let options = SweepOptions {
                threads,
                table_id: table.input.display().to_string(),
            };
            let curve = sweep_with(&t, &attrs, from, to, &options)?;
            let summary = convergence_summary(&curve)?;
            o.line(format!("attributes: {{{}}}", attrs.join(",")));
            o.line("bits  blocks  conditional_bits  normalized  boundary_fraction");
            for p in &curve.points {
                o.line(format!(
                    "{:>4}  {:>6}  {:>16}  {:>10.6}  {:>17.6}",
                    p.bits_level,
                    p.block_count,
                    format!("{:.6}", p.conditional_bits),
                    p.normalized_conditional,
                    p.boundary_fraction
                ));
            }
            o.line(format!(
                "monotonicity violations: {}; terminal entropy {:.6}, terminal boundary {:.6}",
                summary.monotonicity_violations,
                summary.terminal_entropy,
                summary.terminal_boundary
            ));
            if let Some(b) = curve.saturated_at {
                o.line(format!("saturated at bits level {b}"));
            }
            out.emit(
                &mut o,
                || {
                    let mut v = to_json(&curve)?;
                    v["summary"] = to_json(&summary)?;
                    Ok(v)
                },
                || curve_to_csv(&curve.points),
            )?;
            if let Some(path) = svg {
                o.files.push((path, emit_svg(&curve)?.into_bytes()));
            }
        }

        Command::Reduce {
            table,
            bits,
            bits_for,
            exhaustive,
            max_attrs,
            out,
        } => {
            let t = table.load()?;
            let conds: Vec<String> = t
                .condition_attributes()
                .into_iter()
                .map(str::to_owned)
                .collect();
            let mut scheme = GranulationScheme::uniform(&t, &conds, bits)?;
            for (name, b) in bits_for {
                scheme.set_bits(name, b);
            }
            let view = t.discretize(&scheme)?;
            let labels = t.decision_labels();
            let greedy = greedy_reduct(&view, labels)?;
            let rank = entropy_rank(&view, labels)?;
            let all = if exhaustive {
                Some(exhaustive_reducts(&view, labels, max_attrs)?)
            } else {
                None
            };
            o.line(format!(
                "greedy reduct: {{{}}} (gamma {:.6} of {:.6}){}",
                greedy.selected.join(","),
                to_f64(&greedy.gamma_selected),
                to_f64(&greedy.gamma_full),
                if greedy.inconsistent_fallback {
                    "; table is inconsistent, all attributes kept"
                } else {
                    ""
                }
            ));
            for step in &greedy.trace {
                o.line(format!(
                    "  + {}: gamma {:.6}, H(D|P) {:.6}",
                    step.attribute, step.gamma, step.conditional_bits
                ));
            }
            if !greedy.pruned.is_empty() {
                o.line(format!("  pruned: {}", greedy.pruned.join(",")));
            }
            if let Some(all) = &all {
                o.line(format!("all reducts ({}):", all.len()));
                for r in all {
                    o.line(format!("  {{{}}}", r.join(",")));
                }
            }
            o.line("information gain:");
            for g in &rank {
                o.line(format!("  {}: {:.6}", g.attribute, g.information_gain));
            }
            out.emit(
                &mut o,
                || {
                    Ok(serde_json::json!({
                        "greedy": to_json(&greedy)?,
                        "exhaustive": all,
                        "entropy_rank": to_json(&rank)?,
                    }))
                },
                || {
                    let rows = rank.iter().map(|g| {
                        vec![
                            g.attribute.clone(),
                            fmt_real(g.information_gain),
                            greedy.selected.contains(&g.attribute).to_string(),
                        ]
                    });
                    csv_bytes(&["attribute", "information_gain", "selected"], rows)
                },
            )?;
        }

        Command::Evaluate { table, runs, out } => {
            let t = table.load()?;
            let reports = evaluate_files(&t, &runs)?;
            for r in &reports {
                o.line(summarize_report(r));
            }
            out.emit(&mut o, || to_json(&reports), || reports_csv(&reports))?;
        }

        Command::Compare {
            table,
            runs,
            tolerance,
            rank_by,
            out,
        } => {
            let t = table.load()?;
            let reports = evaluate_files(&t, &runs)?;
            let verdict = compare_runs(
                &reports,
                &CompareOptions {
                    tolerance,
                    rank_by: rank_by.into(),
                },
            )?;
            for (i, r) in verdict.ranked.iter().enumerate() {
                o.line(format!(
                    "{:>2}. {}{} accuracy {:.6}, boundary {:.6}, H {:.6}, blocks {}",
                    i + 1,
                    r.run_id,
                    if r.candidate { "" } else { " (outside band)" },
                    r.accuracy,
                    to_f64(&r.boundary_fraction),
                    r.conditional_bits,
                    r.block_count
                ));
            }
            o.line(format!("selected: {}", verdict.selected));
            out.emit(
                &mut o,
                || to_json(&verdict),
                || {
                    let rows = verdict.ranked.iter().enumerate().map(|(i, r)| {
                        vec![
                            (i + 1).to_string(),
                            r.run_id.clone(),
                            r.candidate.to_string(),
                            fmt_real(r.accuracy),
                            fmt_real(to_f64(&r.boundary_fraction)),
                            fmt_real(r.conditional_bits),
                            r.block_count.to_string(),
                            (r.run_id == verdict.selected && i == 0).to_string(),
                        ]
                    });
                    csv_bytes(
                        &[
                            "rank",
                            "run_id",
                            "candidate",
                            "accuracy",
                            "boundary_fraction",
                            "conditional_bits",
                            "block_count",
                            "selected",
                        ],
                        rows,
                    )
                },
            )?;
        }
    }
    Ok(o)
}

fn summarize_report(r: &EvalReport) -> String {
    format!(
        "{}: accuracy {:.6}, H(D|model) {:.6}, boundary {:.6}, gamma {:.6}, blocks {}{}",
        r.run_id,
        r.accuracy,
        r.model_conditional_bits,
        to_f64(&r.model_boundary_fraction),
        to_f64(&r.model_gamma),
        r.block_count,
        if r.used_fallback_partition {
            " (prediction blocks)"
        } else {
            ""
        }
    )
}

fn reports_csv(reports: &[EvalReport]) -> Result<Vec<u8>> {
    let rows = reports.iter().map(|r| {
        vec![
            r.run_id.clone(),
            fmt_real(r.accuracy),
            fmt_real(r.model_conditional_bits),
            fmt_real(to_f64(&r.model_boundary_fraction)),
            fmt_real(to_f64(&r.model_gamma)),
            r.block_count.to_string(),
            r.used_fallback_partition.to_string(),
        ]
    });
    csv_bytes(
        &[
            "run_id",
            "accuracy",
            "model_conditional_bits",
            "model_boundary_fraction",
            "model_gamma",
            "block_count",
            "used_fallback_partition",
        ],
        rows,
    )
}
