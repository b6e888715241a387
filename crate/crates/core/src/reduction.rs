//! Attribute reduction.
//!
//! A reduct is a minimal set of condition attributes whose partition keeps the
//! dependency degree of the full attribute set. [`greedy_reduct`] finds one by
//! forward selection plus backward pruning; [`exhaustive_reducts`] lists all of
//! them for small attribute counts.

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{conditional, shannon, Distribution};
use crate::error::{Error, Result};
use crate::rough::{dependency, serialize_fraction, to_f64, Fraction};
use crate::table::{DiscreteView, Labels};

/// Upper limit on attributes for exhaustive enumeration.
pub const MAX_EXHAUSTIVE_ATTRS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductStep {
    pub attribute: String,
    pub gamma: f64,
    pub conditional_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductResult {
    pub selected: Vec<String>,
    #[serde(serialize_with = "serialize_fraction")]
    pub gamma_selected: Fraction,
    #[serde(serialize_with = "serialize_fraction")]
    pub gamma_full: Fraction,
    /// Forward-selection steps, before pruning.
    pub trace: Vec<ReductStep>,
    /// Attributes dropped by the backward pass.
    pub pruned: Vec<String>,
    /// Set when the table is inconsistent (`γ_full < 1`) and every attribute
    /// is returned.
    pub inconsistent_fallback: bool,
}

struct Evaluator<'v, 'a> {
    view: &'v DiscreteView<'a>,
    labels: &'v Labels,
}

impl Evaluator<'_, '_> {
    fn gamma(&self, attrs: &[usize]) -> Fraction {
        let p = self.view.partition_by_indices(attrs);
        dependency(&p, self.labels).expect("labels checked against the view")
    }

    fn gamma_and_entropy(&self, attrs: &[usize]) -> (Fraction, f64) {
        let p = self.view.partition_by_indices(attrs);
        let g = dependency(&p, self.labels).expect("labels checked against the view");
        let h = conditional(self.labels.codes(), &p).expect("labels checked against the view");
        (g, h)
    }
}

fn setup<'v, 'a>(
    view: &'v DiscreteView<'a>,
    labels: &'v Labels,
) -> Result<(Evaluator<'v, 'a>, Vec<usize>)> {
    let table = view.table();
    if labels.len() != table.n() {
        return Err(Error::UniverseMismatch {
            expected: table.n(),
            found: labels.len(),
        });
    }
    let conds = table.resolve_conditions(&table.condition_attributes())?;
    if conds.is_empty() {
        return Err(Error::InvalidArgument("no condition attributes".into()));
    }
    Ok((Evaluator { view, labels }, conds))
}

fn names(view: &DiscreteView<'_>, attrs: &[usize]) -> Vec<String> {
    attrs
        .iter()
        .map(|&j| view.table().attributes()[j].name.clone())
        .collect()
}

/// Forward selection by γ gain (ties: lower conditional entropy, then
/// declaration order), stopped at `γ_full`, followed by a reverse-order prune.
pub fn greedy_reduct(view: &DiscreteView<'_>, labels: &Labels) -> Result<ReductResult> {
    let (eval, conds) = setup(view, labels)?;
    let gamma_full = eval.gamma(&conds);
    let one = Fraction::from_integer(1);

    if gamma_full < one {
        return Ok(ReductResult {
            selected: names(view, &conds),
            gamma_selected: gamma_full,
            gamma_full,
            trace: Vec::new(),
            pruned: Vec::new(),
            inconsistent_fallback: true,
        });
    }

    let mut selected: Vec<usize> = Vec::new();
    let mut current = eval.gamma(&selected);
    let mut trace = Vec::new();
    while current < gamma_full {
        let remaining: Vec<usize> = conds
            .iter()
            .copied()
            .filter(|a| !selected.contains(a))
            .collect();
        let scored: Vec<(Fraction, f64)> = remaining
            .par_iter()
            .map(|&a| {
                let mut trial = selected.clone();
                trial.push(a);
                eval.gamma_and_entropy(&trial)
            })
            .collect();
        // remaining is in declaration order, so the first maximum wins ties
        let mut best = 0;
        for i in 1..scored.len() {
            let (g, h) = scored[i];
            let (bg, bh) = scored[best];
            if g > bg || (g == bg && h < bh) {
                best = i;
            }
        }
        let (g, h) = scored[best];
        selected.push(remaining[best]);
        current = g;
        trace.push(ReductStep {
            attribute: view.table().attributes()[remaining[best]].name.clone(),
            gamma: to_f64(&g),
            conditional_bits: h,
        });
    }

    let mut pruned = Vec::new();
    for pos in (0..selected.len()).rev() {
        let mut without = selected.clone();
        let dropped = without.remove(pos);
        if eval.gamma(&without) == gamma_full {
            selected = without;
            pruned.push(view.table().attributes()[dropped].name.clone());
        }
    }

    Ok(ReductResult {
        selected: names(view, &selected),
        gamma_selected: eval.gamma(&selected),
        gamma_full,
        trace,
        pruned,
        inconsistent_fallback: false,
    })
}

/// All `k`-subsets of `0..m` in lexicographic order.
fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(combo.clone());
        let Some(i) = (0..k).rev().find(|&i| combo[i] < m - k + i) else {
            return out;
        };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Every ⊆-minimal attribute subset reaching `γ_full`, by size and then
/// lexicographically in declaration order.
pub fn exhaustive_reducts(
    view: &DiscreteView<'_>,
    labels: &Labels,
    max_attrs: usize,
) -> Result<Vec<Vec<String>>> {
    if max_attrs > MAX_EXHAUSTIVE_ATTRS {
        return Err(Error::InvalidArgument(format!(
            "max_attrs {max_attrs} exceeds {MAX_EXHAUSTIVE_ATTRS}"
        )));
    }
    let (eval, conds) = setup(view, labels)?;
    if conds.len() > max_attrs {
        return Err(Error::InvalidArgument(format!(
            "{} condition attributes exceed the limit of {max_attrs}",
            conds.len()
        )));
    }
    let gamma_full = eval.gamma(&conds);
    let mut found: Vec<u32> = Vec::new();
    let mut reducts = Vec::new();
    for size in 0..=conds.len() {
        for combo in combinations(conds.len(), size) {
            let mask = combo.iter().fold(0u32, |m, &i| m | (1 << i));
            if found.iter().any(|&f| f & !mask == 0) {
                continue;
            }
            let attrs: Vec<usize> = combo.iter().map(|&i| conds[i]).collect();
            if eval.gamma(&attrs) == gamma_full {
                found.push(mask);
                reducts.push(names(view, &attrs));
            }
        }
    }
    Ok(reducts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributeGain {
    pub attribute: String,
    pub information_gain: f64,
}

/// Information gain `H(D) − H(D | a)` of every condition attribute, highest
/// first, ties in declaration order.
pub fn entropy_rank(view: &DiscreteView<'_>, labels: &Labels) -> Result<Vec<AttributeGain>> {
    let (eval, conds) = setup(view, labels)?;
    let h_d = shannon(&Distribution::from_tokens(labels.codes()))?;
    let mut gains: Vec<AttributeGain> = conds
        .iter()
        .map(|&a| {
            let (_, h) = eval.gamma_and_entropy(&[a]);
            AttributeGain {
                attribute: view.table().attributes()[a].name.clone(),
                information_gain: (h_d - h).max(0.0),
            }
        })
        .collect();
    gains.sort_by(|a, b| b.information_gain.total_cmp(&a.information_gain));
    Ok(gains)
}
