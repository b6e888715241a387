//! Shannon, joint and conditional entropy (in bits) over label vectors and
//! partitions.

use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rough::{self, serialize_fraction, Fraction};
use crate::table::{Labels, Partition};

/// Category counts of a finite distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    counts: Vec<u64>,
    total: u64,
}

impl Distribution {
    pub fn from_counts<I: IntoIterator<Item = u64>>(counts: I) -> Self {
        let counts: Vec<u64> = counts.into_iter().collect();
        let total = counts.iter().sum();
        Distribution { counts, total }
    }

    /// Counts occurrences of each distinct token.
    pub fn from_tokens<T, I>(tokens: I) -> Self
    where
        T: Hash + Eq,
        I: IntoIterator<Item = T>,
    {
        let (codes, k) = dense_codes(tokens);
        Self::from_counts(histogram(&codes, k))
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of categories with a nonzero count.
    pub fn support(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

fn dense_codes<T, I>(tokens: I) -> (Vec<u32>, usize)
where
    T: Hash + Eq,
    I: IntoIterator<Item = T>,
{
    let mut index: HashMap<T, u32> = HashMap::new();
    let codes = tokens
        .into_iter()
        .map(|t| {
            let next = index.len() as u32;
            *index.entry(t).or_insert(next)
        })
        .collect();
    (codes, index.len())
}

fn histogram(codes: &[u32], k: usize) -> Vec<u64> {
    let mut counts = vec![0u64; k];
    for &c in codes {
        counts[c as usize] += 1;
    }
    counts
}

/// Sum with a fixed pairwise reduction tree so results do not depend on how
/// the terms were produced.
pub(crate) fn pairwise_sum(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        n if n <= 8 => terms.iter().sum(),
        n => {
            let (a, b) = terms.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `-Σ p log2 p` over nonzero counts; `total` must be positive.
fn entropy_bits(counts: impl IntoIterator<Item = u64>, total: u64) -> f64 {
    let total = total as f64;
    let h: f64 = counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    if h > 0.0 {
        h
    } else {
        0.0
    }
}

/// Shannon entropy `H = -Σ p_i log2 p_i` with `0·log 0 = 0`.
pub fn shannon(dist: &Distribution) -> Result<f64> {
    if dist.total == 0 {
        return Err(Error::InvalidArgument(
            "entropy of an empty distribution".into(),
        ));
    }
    Ok(entropy_bits(dist.counts.iter().copied(), dist.total))
}

/// Joint entropy `H(X, Y)` of two aligned label vectors.
pub fn joint<T: Hash + Eq, U: Hash + Eq>(x: &[T], y: &[U]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::UniverseMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    shannon(&Distribution::from_tokens(x.iter().zip(y)))
}

/// Per-block entropies of dense `codes` in block-id order.
fn block_entropies(codes: &[u32], k: usize, partition: &Partition) -> Vec<f64> {
    let mut counts = vec![0u64; k];
    let mut touched = Vec::new();
    partition
        .blocks()
        .iter()
        .map(|block| {
            for &i in block {
                let c = codes[i] as usize;
                if counts[c] == 0 {
                    touched.push(c);
                }
                counts[c] += 1;
            }
            let h = entropy_bits(touched.iter().map(|&c| counts[c]), block.len() as u64);
            for c in touched.drain(..) {
                counts[c] = 0;
            }
            h
        })
        .collect()
}

fn weighted_sum(entropies: &[f64], partition: &Partition) -> f64 {
    let n = partition.len() as f64;
    let terms: Vec<f64> = partition
        .blocks()
        .iter()
        .zip(entropies)
        .map(|(b, h)| b.len() as f64 / n * h)
        .collect();
    pairwise_sum(&terms)
}

/// Conditional entropy `H(labels | given) = Σ_B |B|/|U| · H(labels on B)`.
pub fn conditional<T: Hash + Eq>(labels: &[T], given: &Partition) -> Result<f64> {
    if labels.len() != given.len() {
        return Err(Error::UniverseMismatch {
            expected: given.len(),
            found: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::InvalidArgument(
            "entropy of an empty universe".into(),
        ));
    }
    let (codes, k) = dense_codes(labels);
    Ok(weighted_sum(&block_entropies(&codes, k, given), given))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockEntropy {
    pub block: usize,
    /// `|B| / |U|`
    pub weight: f64,
    pub entropy_bits: f64,
}

/// Entropy of the decision inside every granule, next to the boundary region
/// of the same partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GranularEntropyReport {
    pub per_block: Vec<BlockEntropy>,
    pub conditional_bits: f64,
    #[serde(serialize_with = "serialize_fraction")]
    pub boundary_fraction: Fraction,
    #[serde(serialize_with = "serialize_fraction")]
    pub gamma: Fraction,
    pub class_count: usize,
    /// `conditional_bits / log2(k)` for `k ≥ 2` classes, otherwise 0.
    pub normalized_conditional: f64,
}

pub fn granular_entropy(partition: &Partition, labels: &Labels) -> Result<GranularEntropyReport> {
    let gamma = rough::dependency(partition, labels)?;
    let boundary_fraction = Fraction::from_integer(1) - gamma;
    let k = labels.class_count();
    let entropies = block_entropies(labels.codes(), k, partition);
    let conditional_bits = weighted_sum(&entropies, partition);
    let n = partition.len() as f64;
    let per_block = partition
        .blocks()
        .iter()
        .zip(&entropies)
        .enumerate()
        .map(|(block, (members, &entropy_bits))| BlockEntropy {
            block,
            weight: members.len() as f64 / n,
            entropy_bits,
        })
        .collect();
    let normalized_conditional = if k >= 2 {
        conditional_bits / (k as f64).log2()
    } else {
        0.0
    };
    Ok(GranularEntropyReport {
        per_block,
        conditional_bits,
        boundary_fraction,
        gamma,
        class_count: k,
        normalized_conditional,
    })
}
