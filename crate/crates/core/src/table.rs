//! Information tables, equal-width granulation and indiscernibility partitions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported precision: `2^24` bins per numeric attribute.
pub const MAX_BITS: u32 = 24;

/// Per-attribute kind overrides applied while loading a CSV.
pub type SchemaHints = HashMap<String, AttrKind>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrKind {
    Categorical,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttrKind,
    /// `[min, max]` over the non-missing values of a numeric attribute.
    pub observed_range: Option<(f64, f64)>,
}

/// Raw column data used to build a table in memory.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

impl Column {
    fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ColumnData {
    Numeric(Vec<Option<f64>>),
    /// Ordinal codes in first-occurrence order; a `None` level is the MISSING token.
    Categorical {
        codes: Vec<u32>,
        levels: Vec<Option<String>>,
    },
}

impl ColumnData {
    fn categorical<I, S>(cells: I) -> Self
    where
        I: IntoIterator<Item = Option<S>>,
        S: AsRef<str>,
    {
        let mut index: HashMap<Option<String>, u32> = HashMap::new();
        let mut levels = Vec::new();
        let codes = cells
            .into_iter()
            .map(|cell| {
                let key = cell.map(|s| s.as_ref().to_owned());
                *index.entry(key.clone()).or_insert_with(|| {
                    levels.push(key);
                    (levels.len() - 1) as u32
                })
            })
            .collect();
        ColumnData::Categorical { codes, levels }
    }
}

/// A cell value as seen by callers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value<'a> {
    Category(&'a str),
    Number(f64),
    Missing,
}

/// Writes the cell as it would appear in an input CSV (`?` for MISSING).
impl fmt::Display for Value<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Category(s) => f.write_str(s),
            Value::Number(v) => write!(f, "{v}"),
            Value::Missing => f.write_str("?"),
        }
    }
}

/// Per-object class tokens, stored as dense first-occurrence ordinals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    codes: Vec<u32>,
    classes: Vec<String>,
}

impl Labels {
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut index: HashMap<String, u32> = HashMap::new();
        let mut classes = Vec::new();
        let codes = tokens
            .into_iter()
            .map(|t| {
                let t = t.as_ref();
                if let Some(&c) = index.get(t) {
                    return c;
                }
                let c = classes.len() as u32;
                classes.push(t.to_owned());
                index.insert(t.to_owned(), c);
                c
            })
            .collect();
        Labels { codes, classes }
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    /// Distinct class tokens in first-occurrence order.
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, object: usize) -> &str {
        &self.classes[self.codes[object] as usize]
    }

    pub fn code_of(&self, token: &str) -> Option<u32> {
        self.classes
            .iter()
            .position(|c| c == token)
            .map(|c| c as u32)
    }
}

/// A universe of objects described by condition attributes and one decision.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationTable {
    attributes: Vec<AttributeSpec>,
    columns: Vec<ColumnData>,
    decision: usize,
    labels: Labels,
    n: usize,
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

fn parse_real(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads a header-first CSV into an [`InformationTable`].
///
/// A column is numeric iff every non-missing cell parses as a finite real,
/// unless `hints` says otherwise. Empty cells and `?` are MISSING. The decision
/// column is always categorical and must be total.
pub fn load_table<R: Read>(
    input: R,
    decision_name: &str,
    hints: Option<&SchemaHints>,
) -> Result<InformationTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r?,
        None => return Err(Error::Empty("no header row".into())),
    };
    let names: Vec<String> = header.iter().map(str::to_owned).collect();
    if names.iter().all(String::is_empty) {
        return Err(Error::Empty("blank header row".into()));
    }
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(Error::DuplicateAttribute(name.clone()));
        }
    }
    let decision = names
        .iter()
        .position(|n| n == decision_name)
        .ok_or_else(|| Error::MissingDecision(decision_name.to_owned()))?;
    if let Some(hints) = hints {
        for (name, kind) in hints {
            if !names.contains(name) {
                return Err(Error::UnknownAttribute(name.clone()));
            }
            if name == decision_name && *kind == AttrKind::Numeric {
                return Err(Error::InvalidArgument(format!(
                    "decision column `{name}` cannot be declared numeric"
                )));
            }
        }
    }

    let width = names.len();
    let mut raw: Vec<Vec<String>> = vec![Vec::new(); width];
    let mut lines = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        // a fully blank trailing line is not a row
        if record.len() == 1 && record[0].is_empty() && width > 1 {
            continue;
        }
        if record.len() != width {
            return Err(Error::RaggedRow {
                line,
                expected: width,
                found: record.len(),
            });
        }
        for (col, cell) in raw.iter_mut().zip(record.iter()) {
            col.push(cell.to_owned());
        }
        lines.push(line);
    }
    if lines.is_empty() {
        return Err(Error::Empty("no data rows".into()));
    }

    let mut columns = Vec::with_capacity(width);
    for (j, cells) in raw.into_iter().enumerate() {
        let name = &names[j];
        if j == decision {
            if let Some(i) = cells.iter().position(|c| is_missing(c)) {
                return Err(Error::MissingDecisionValue {
                    line: lines[i],
                    column: name.clone(),
                });
            }
            columns.push(Column::Categorical(cells.into_iter().map(Some).collect()));
            continue;
        }
        let kind = match hints.and_then(|h| h.get(name)) {
            Some(kind) => *kind,
            None => {
                let mut present = cells.iter().filter(|c| !is_missing(c)).peekable();
                if present.peek().is_some() && present.all(|c| parse_real(c).is_some()) {
                    AttrKind::Numeric
                } else {
                    AttrKind::Categorical
                }
            }
        };
        let column = match kind {
            AttrKind::Categorical => Column::Categorical(
                cells
                    .into_iter()
                    .map(|c| if is_missing(&c) { None } else { Some(c) })
                    .collect(),
            ),
            AttrKind::Numeric => {
                let mut values = Vec::with_capacity(cells.len());
                for (i, c) in cells.iter().enumerate() {
                    if is_missing(c) {
                        values.push(None);
                    } else {
                        values.push(Some(parse_real(c).ok_or_else(|| Error::Unparsable {
                            line: lines[i],
                            column: name.clone(),
                            value: c.clone(),
                        })?));
                    }
                }
                Column::Numeric(values)
            }
        };
        columns.push(column);
    }

    InformationTable::from_columns(names.into_iter().zip(columns).collect(), decision_name)
}

impl InformationTable {
    /// Builds a table from in-memory columns. The decision must be a total
    /// categorical column.
    pub fn from_columns(columns: Vec<(String, Column)>, decision_name: &str) -> Result<Self> {
        let n = columns.first().map_or(0, |(_, c)| c.len());
        if n == 0 {
            return Err(Error::Empty("table has no objects".into()));
        }
        let decision = columns
            .iter()
            .position(|(name, _)| name == decision_name)
            .ok_or_else(|| Error::MissingDecision(decision_name.to_owned()))?;

        let mut attributes = Vec::with_capacity(columns.len());
        let mut data = Vec::with_capacity(columns.len());
        let mut labels = None;
        for (j, (name, column)) in columns.into_iter().enumerate() {
            if attributes.iter().any(|a: &AttributeSpec| a.name == name) {
                return Err(Error::DuplicateAttribute(name));
            }
            if column.len() != n {
                return Err(Error::UniverseMismatch {
                    expected: n,
                    found: column.len(),
                });
            }
            match column {
                Column::Numeric(values) => {
                    if j == decision {
                        return Err(Error::InvalidArgument(format!(
                            "decision column `{name}` must be categorical"
                        )));
                    }
                    if values.iter().flatten().any(|v| !v.is_finite()) {
                        return Err(Error::InvalidArgument(format!(
                            "numeric column `{name}` holds a non-finite value"
                        )));
                    }
                    let observed_range = values.iter().flatten().fold(None, |acc, &v| match acc {
                        None => Some((v, v)),
                        Some((lo, hi)) => Some((f64::min(lo, v), f64::max(hi, v))),
                    });
                    attributes.push(AttributeSpec {
                        name,
                        kind: AttrKind::Numeric,
                        observed_range,
                    });
                    data.push(ColumnData::Numeric(values));
                }
                Column::Categorical(cells) => {
                    if j == decision {
                        if cells.iter().any(Option::is_none) {
                            return Err(Error::MissingDecisionValue {
                                line: 0,
                                column: name,
                            });
                        }
                        labels = Some(Labels::from_tokens(cells.iter().flatten()));
                    }
                    attributes.push(AttributeSpec {
                        name,
                        kind: AttrKind::Categorical,
                        observed_range: None,
                    });
                    data.push(ColumnData::categorical(cells));
                }
            }
        }

        Ok(InformationTable {
            attributes,
            columns: data,
            decision,
            labels: labels.expect("decision column is categorical"),
            n,
        })
    }

    /// Number of objects in the universe.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeSpec> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_owned()))
    }

    pub fn decision_name(&self) -> &str {
        &self.attributes[self.decision].name
    }

    pub fn decision_index(&self) -> usize {
        self.decision
    }

    pub fn decision_labels(&self) -> &Labels {
        &self.labels
    }

    /// Condition attribute names in declaration order.
    pub fn condition_attributes(&self) -> Vec<&str> {
        self.attributes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != self.decision)
            .map(|(_, a)| a.name.as_str())
            .collect()
    }

    pub fn value(&self, object: usize, attr: usize) -> Value<'_> {
        match &self.columns[attr] {
            ColumnData::Numeric(v) => v[object].map_or(Value::Missing, Value::Number),
            ColumnData::Categorical { codes, levels } => match &levels[codes[object] as usize] {
                Some(s) => Value::Category(s),
                None => Value::Missing,
            },
        }
    }

    /// Distinct categories of a categorical attribute (MISSING included as `None`).
    pub fn levels(&self, attr: usize) -> Option<&[Option<String>]> {
        match &self.columns[attr] {
            ColumnData::Categorical { levels, .. } => Some(levels),
            ColumnData::Numeric(_) => None,
        }
    }

    /// A table with only the given condition attributes (in that order) and
    /// the decision, over the same objects.
    pub fn project<S: AsRef<str>>(&self, attrs: &[S]) -> Result<InformationTable> {
        let mut keep = self.resolve_conditions(attrs)?;
        keep.push(self.decision);
        Ok(InformationTable {
            attributes: keep.iter().map(|&j| self.attributes[j].clone()).collect(),
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            decision: keep.len() - 1,
            labels: self.labels.clone(),
            n: self.n,
        })
    }

    /// Validates a list of condition attribute names and resolves their indices.
    pub fn resolve_conditions<S: AsRef<str>>(&self, attrs: &[S]) -> Result<Vec<usize>> {
        attrs
            .iter()
            .map(|a| {
                let j = self.index_of(a.as_ref())?;
                if j == self.decision {
                    Err(Error::DecisionAsCondition(a.as_ref().to_owned()))
                } else {
                    Ok(j)
                }
            })
            .collect()
    }

    pub fn discretize(&self, scheme: &GranulationScheme) -> Result<DiscreteView<'_>> {
        discretize(self, scheme)
    }

    /// Partition induced by raw cell identity on `attrs` (no binning), the finest
    /// granulation any scheme can reach.
    pub fn raw_partition(&self, attrs: &[usize]) -> Partition {
        let keys: Vec<Vec<u64>> = (0..self.n)
            .map(|i| {
                attrs
                    .iter()
                    .map(|&j| match &self.columns[j] {
                        ColumnData::Numeric(v) => v[i].map_or(u64::MAX, |x| (x + 0.0).to_bits()),
                        ColumnData::Categorical { codes, .. } => u64::from(codes[i]),
                    })
                    .collect()
            })
            .collect();
        Partition::from_keys(keys)
    }
}

/// Bits per numeric attribute. Unnamed numeric attributes use `b = 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GranulationScheme {
    bits: BTreeMap<String, u32>,
}

impl GranulationScheme {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_bits(mut self, name: impl Into<String>, bits: u32) -> Self {
        self.bits.insert(name.into(), bits);
        self
    }

    pub fn set_bits(&mut self, name: impl Into<String>, bits: u32) {
        self.bits.insert(name.into(), bits);
    }

    /// Assigns `bits` to every numeric attribute among `attrs`; categorical
    /// attributes are skipped since they granulate by identity.
    pub fn uniform<S: AsRef<str>>(
        table: &InformationTable,
        attrs: &[S],
        bits: u32,
    ) -> Result<Self> {
        let mut scheme = Self::new();
        for &j in &table.resolve_conditions(attrs)? {
            let spec = &table.attributes[j];
            if spec.kind == AttrKind::Numeric {
                scheme.set_bits(spec.name.clone(), bits);
            }
        }
        Ok(scheme)
    }

    pub fn bits_for(&self, name: &str) -> u32 {
        self.bits.get(name).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.bits.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Equal-width bin of `v` over `[lo, hi]` split into `2^bits` bins.
///
/// The top edge `v = hi` is clamped into the last bin; a degenerate range maps
/// everything to bin 0.
pub fn bin_code(v: f64, lo: f64, hi: f64, bits: u32) -> u32 {
    let bins = 1u32 << bits;
    if hi <= lo {
        return 0;
    }
    let width = (hi - lo) / f64::from(bins);
    let raw = ((v - lo) / width).floor();
    if raw <= 0.0 {
        0
    } else if raw >= f64::from(bins) {
        bins - 1
    } else {
        raw as u32
    }
}

/// A table with every attribute encoded as integer codes under a scheme.
#[derive(Debug, Clone)]
pub struct DiscreteView<'a> {
    table: &'a InformationTable,
    bits: Vec<Option<u32>>,
    codes: Vec<Vec<u32>>,
    cardinality: Vec<u64>,
}

/// Encodes `table` under `scheme`.
pub fn discretize<'a>(
    table: &'a InformationTable,
    scheme: &GranulationScheme,
) -> Result<DiscreteView<'a>> {
    for (name, bits) in scheme.iter() {
        let j = table.index_of(name)?;
        if table.attributes[j].kind != AttrKind::Numeric {
            return Err(Error::NotNumeric(name.to_owned()));
        }
        if bits > MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "bits for `{name}` is {bits}, above the maximum of {MAX_BITS}"
            )));
        }
    }

    let mut bits = Vec::with_capacity(table.attributes.len());
    let mut codes = Vec::with_capacity(table.attributes.len());
    let mut cardinality = Vec::with_capacity(table.attributes.len());
    for (spec, column) in table.attributes.iter().zip(&table.columns) {
        match column {
            ColumnData::Numeric(values) => {
                let b = scheme.bits_for(&spec.name);
                let missing = 1u32 << b;
                let col = match spec.observed_range {
                    Some((lo, hi)) => values
                        .iter()
                        .map(|v| v.map_or(missing, |v| bin_code(v, lo, hi, b)))
                        .collect(),
                    None => vec![missing; values.len()],
                };
                bits.push(Some(b));
                codes.push(col);
                cardinality.push(u64::from(missing) + 1);
            }
            ColumnData::Categorical { codes: c, levels } => {
                bits.push(None);
                codes.push(c.clone());
                cardinality.push(levels.len() as u64);
            }
        }
    }
    Ok(DiscreteView {
        table,
        bits,
        codes,
        cardinality,
    })
}

impl<'a> DiscreteView<'a> {
    pub fn table(&self) -> &'a InformationTable {
        self.table
    }

    pub fn code(&self, object: usize, attr: usize) -> u32 {
        self.codes[attr][object]
    }

    pub fn column(&self, attr: usize) -> &[u32] {
        &self.codes[attr]
    }

    /// Bits used for an attribute, `None` for categorical ones.
    pub fn bits(&self, attr: usize) -> Option<u32> {
        self.bits[attr]
    }

    /// Indiscernibility partition over the named condition attributes.
    pub fn partition_by<S: AsRef<str>>(&self, attrs: &[S]) -> Result<Partition> {
        let idx = self.table.resolve_conditions(attrs)?;
        Ok(self.partition_by_indices(&idx))
    }

    /// Same as [`partition_by`](Self::partition_by) over pre-resolved indices.
    pub fn partition_by_indices(&self, attrs: &[usize]) -> Partition {
        let n = self.table.n;
        let mut block_of = vec![0u32; n];
        let mut count = usize::from(n > 0);
        let mut index: HashMap<u64, u32> = HashMap::new();
        for &j in attrs {
            if count == n {
                break;
            }
            let card = self.cardinality[j];
            let col = &self.codes[j];
            index.clear();
            for (block, &code) in block_of.iter_mut().zip(col) {
                let key = u64::from(*block) * card + u64::from(code);
                let next = index.len() as u32;
                *block = *index.entry(key).or_insert(next);
            }
            count = index.len();
        }
        Partition::from_block_ids(block_of)
    }
}

/// Free-function form of [`DiscreteView::partition_by`].
pub fn partition_by<S: AsRef<str>>(view: &DiscreteView<'_>, attrs: &[S]) -> Result<Partition> {
    view.partition_by(attrs)
}

/// Equivalence classes of the universe `0..n`. Block ids follow the first
/// occurrence of each block in object order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    block_of: Vec<u32>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups objects with equal keys.
    pub fn from_keys<K, I>(keys: I) -> Self
    where
        K: Hash + Eq,
        I: IntoIterator<Item = K>,
    {
        let mut index: HashMap<K, u32> = HashMap::new();
        let ids = keys
            .into_iter()
            .map(|k| {
                let next = index.len() as u32;
                *index.entry(k).or_insert(next)
            })
            .collect();
        Self::from_block_ids(ids)
    }

    /// Builds a partition from arbitrary block labels, renumbering them by first
    /// occurrence.
    pub fn from_block_ids(ids: Vec<u32>) -> Self {
        let mut remap: HashMap<u32, u32> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let block_of = ids
            .into_iter()
            .enumerate()
            .map(|(i, id)| {
                let b = *remap.entry(id).or_insert_with(|| {
                    blocks.push(Vec::new());
                    (blocks.len() - 1) as u32
                });
                blocks[b as usize].push(i);
                b
            })
            .collect();
        Partition { block_of, blocks }
    }

    pub fn single_block(n: usize) -> Self {
        Self::from_block_ids(vec![0; n])
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_block_ids((0..n as u32).collect())
    }

    /// Size of the universe.
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &[usize] {
        &self.blocks[id]
    }

    pub fn block_of(&self, object: usize) -> usize {
        self.block_of[object] as usize
    }

    /// Block id of every object.
    pub fn block_ids(&self) -> &[u32] {
        &self.block_of
    }

    /// True when every block of `self` lies inside one block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.len() == coarser.len()
            && self.blocks.iter().all(|b| {
                let target = coarser.block_of[b[0]];
                b.iter().all(|&i| coarser.block_of[i] == target)
            })
    }

    /// True when all objects are pairwise discernible.
    pub fn is_discrete(&self) -> bool {
        self.block_count() == self.len()
    }
}
