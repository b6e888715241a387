//! Lower and upper approximations, boundary regions and the dependency degree.
//!
//! All cardinalities are kept as exact fractions; floats only enter through
//! [`Fraction`] conversions at the reporting edge.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::table::{Labels, Partition};

/// Exact ratio of object counts.
pub type Fraction = Ratio<u64>;

pub(crate) fn fraction(num: usize, den: usize) -> Fraction {
    if den == 0 {
        Fraction::from_integer(1)
    } else {
        Fraction::new(num as u64, den as u64)
    }
}

pub fn to_f64(f: &Fraction) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}

pub(crate) fn serialize_fraction<S: Serializer>(
    f: &Fraction,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(to_f64(f))
}

/// A target concept `X ⊆ U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptSet {
    members: Vec<bool>,
    label: Option<String>,
}

impl ConceptSet {
    pub fn from_indices<I: IntoIterator<Item = usize>>(
        universe: usize,
        members: I,
    ) -> Result<Self> {
        let mut mask = vec![false; universe];
        for i in members {
            *mask.get_mut(i).ok_or_else(|| {
                Error::InvalidArgument(format!("object {i} is outside a universe of {universe}"))
            })? = true;
        }
        Ok(ConceptSet {
            members: mask,
            label: None,
        })
    }

    pub fn from_predicate(universe: usize, pred: impl Fn(usize) -> bool) -> Self {
        ConceptSet {
            members: (0..universe).map(pred).collect(),
            label: None,
        }
    }

    /// The decision class `class` as a concept.
    pub fn for_class(labels: &Labels, class: &str) -> Result<Self> {
        let code = labels
            .code_of(class)
            .ok_or_else(|| Error::InvalidArgument(format!("no decision class `{class}`")))?;
        Ok(ConceptSet {
            members: labels.codes().iter().map(|&c| c == code).collect(),
            label: Some(class.to_owned()),
        })
    }

    pub fn complement(&self) -> Self {
        ConceptSet {
            members: self.members.iter().map(|m| !m).collect(),
            label: None,
        }
    }

    pub fn universe_len(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, object: usize) -> bool {
        self.members[object]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&i| self.members[i])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoughApproximation {
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
    pub boundary: Vec<usize>,
    /// `|lower| / |upper|`, or 1 when the upper approximation is empty.
    #[serde(serialize_with = "serialize_fraction")]
    pub accuracy_alpha: Fraction,
}

impl RoughApproximation {
    fn from_sets(mut lower: Vec<usize>, mut upper: Vec<usize>) -> Self {
        lower.sort_unstable();
        upper.sort_unstable();
        let boundary = difference(&upper, &lower);
        let accuracy_alpha = fraction(lower.len(), upper.len());
        RoughApproximation {
            lower,
            upper,
            boundary,
            accuracy_alpha,
        }
    }
}

/// `a \ b` for sorted slices.
fn difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len().saturating_sub(b.len()));
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

fn check_universe(partition: &Partition, len: usize) -> Result<()> {
    if partition.len() != len {
        return Err(Error::UniverseMismatch {
            expected: partition.len(),
            found: len,
        });
    }
    Ok(())
}

/// Lower, upper and boundary sets of `concept` under `partition`.
pub fn approximate(partition: &Partition, concept: &ConceptSet) -> Result<RoughApproximation> {
    check_universe(partition, concept.universe_len())?;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for block in partition.blocks() {
        let inside = block.iter().filter(|&&i| concept.contains(i)).count();
        if inside == block.len() {
            lower.extend_from_slice(block);
        }
        if inside > 0 {
            upper.extend_from_slice(block);
        }
    }
    Ok(RoughApproximation::from_sets(lower, upper))
}

/// Three-region decomposition of the universe against every decision class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub per_class: BTreeMap<String, RoughApproximation>,
    /// Union of the per-class lower approximations.
    pub positive: Vec<usize>,
    /// Union of the per-class boundaries, i.e. objects in mixed blocks.
    pub boundary_overall: Vec<usize>,
    pub negative_by_class: BTreeMap<String, Vec<usize>>,
    #[serde(serialize_with = "serialize_fraction")]
    pub gamma: Fraction,
    #[serde(serialize_with = "serialize_fraction")]
    pub boundary_fraction: Fraction,
}

/// Distinct classes present in each block, in ascending code order.
fn block_classes(partition: &Partition, codes: &[u32], class_count: usize) -> Vec<Vec<u32>> {
    let mut seen = vec![usize::MAX; class_count];
    partition
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, block)| {
            let mut present = Vec::new();
            for &i in block {
                let c = codes[i] as usize;
                if seen[c] != b {
                    seen[c] = b;
                    present.push(c as u32);
                }
            }
            present.sort_unstable();
            present
        })
        .collect()
}

pub fn regions(partition: &Partition, labels: &Labels) -> Result<RegionReport> {
    check_universe(partition, labels.len())?;
    if labels.is_empty() {
        return Err(Error::InvalidArgument("empty label set".into()));
    }
    let k = labels.class_count();
    let present = block_classes(partition, labels.codes(), k);

    let mut lower: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut positive = Vec::new();
    let mut boundary_overall = Vec::new();
    for (block, classes) in partition.blocks().iter().zip(&present) {
        if let [only] = classes[..] {
            lower[only as usize].extend_from_slice(block);
            positive.extend_from_slice(block);
        } else {
            boundary_overall.extend_from_slice(block);
        }
        for &c in classes {
            upper[c as usize].extend_from_slice(block);
        }
    }
    positive.sort_unstable();
    boundary_overall.sort_unstable();

    let n = labels.len();
    let mut per_class = BTreeMap::new();
    let mut negative_by_class = BTreeMap::new();
    for (c, (lo, up)) in lower.into_iter().zip(upper).enumerate() {
        let approx = RoughApproximation::from_sets(lo, up);
        let negative = difference(&(0..n).collect::<Vec<_>>(), &approx.upper);
        let name = labels.classes()[c].clone();
        negative_by_class.insert(name.clone(), negative);
        per_class.insert(name, approx);
    }

    Ok(RegionReport {
        gamma: fraction(positive.len(), n),
        boundary_fraction: fraction(boundary_overall.len(), n),
        per_class,
        positive,
        boundary_overall,
        negative_by_class,
    })
}

/// Number of objects lying in blocks that hold a single class.
pub(crate) fn positive_count(partition: &Partition, codes: &[u32]) -> usize {
    partition
        .blocks()
        .iter()
        .filter(|block| {
            let first = codes[block[0]];
            block.iter().all(|&i| codes[i] == first)
        })
        .map(Vec::len)
        .sum()
}

/// Dependency degree `γ = |POS| / |U|` of the decision on `partition`.
pub fn dependency(partition: &Partition, labels: &Labels) -> Result<Fraction> {
    check_universe(partition, labels.len())?;
    if labels.is_empty() {
        return Err(Error::InvalidArgument("empty label set".into()));
    }
    Ok(fraction(
        positive_count(partition, labels.codes()),
        labels.len(),
    ))
}
