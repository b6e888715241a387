//! Random table generators and brute-force oracles shared by the integration
//! suites. Nothing here calls `partition_by`, `approximate` or `regions`.

#![allow(dead_code)]

use std::collections::BTreeSet;

use granulens::{Column, DiscreteView, GranulationScheme, InformationTable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOY8: &str = include_str!("../../data/toy8.csv");
pub const TITANIC: &str = include_str!("../../data/titanic_synthetic.csv");

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn toy8() -> InformationTable {
    granulens::load_table(TOY8.as_bytes(), "d", None).unwrap()
}

#[derive(Debug, Clone, Copy)]
pub struct TableShape {
    pub max_n: usize,
    pub max_attrs: usize,
    pub max_classes: usize,
}

/// A random table with numeric (some missing) and categorical condition
/// attributes `c0..` and decision `d`.
pub fn random_table(rng: &mut impl Rng, shape: TableShape) -> InformationTable {
    let n = rng.gen_range(1..=shape.max_n);
    let m = rng.gen_range(1..=shape.max_attrs);
    let k = rng.gen_range(1..=shape.max_classes);
    let mut columns = Vec::new();
    for j in 0..m {
        let name = format!("c{j}");
        if rng.gen_bool(0.6) {
            let spread: f64 = rng.gen_range(1.0..100.0);
            let missing = rng.gen_bool(0.3);
            let values = (0..n)
                .map(|_| {
                    if missing && rng.gen_bool(0.15) {
                        None
                    } else if rng.gen_bool(0.2) {
                        // repeated values make duplicates likely
                        Some(f64::from(rng.gen_range(0..4u8)))
                    } else {
                        Some(rng.gen_range(-spread..spread))
                    }
                })
                .collect();
            columns.push((name, Column::Numeric(values)));
        } else {
            let levels = rng.gen_range(1..=4u8);
            let cells = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.1) {
                        None
                    } else {
                        Some(format!("v{}", rng.gen_range(0..levels)))
                    }
                })
                .collect();
            columns.push((name, Column::Categorical(cells)));
        }
    }
    let d = (0..n)
        .map(|_| Some(format!("k{}", rng.gen_range(0..k))))
        .collect();
    columns.push(("d".to_owned(), Column::Categorical(d)));
    InformationTable::from_columns(columns, "d").unwrap()
}

/// A table whose decision is a function of the discrete condition codes, so
/// `γ_full = 1`.
pub fn random_consistent_table(rng: &mut impl Rng, max_attrs: usize) -> InformationTable {
    let n = rng.gen_range(2..=40);
    let m = rng.gen_range(1..=max_attrs);
    let k = rng.gen_range(2..=3);
    let mut tuples: Vec<Vec<u8>> = Vec::with_capacity(n);
    let arity: Vec<u8> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
    for _ in 0..n {
        tuples.push(arity.iter().map(|&a| rng.gen_range(0..a)).collect());
    }
    // a random function of a random subset of the attributes
    let relevant: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
    let salt: u64 = rng.gen();
    let label = |t: &[u8]| {
        let mut h = salt;
        for &j in &relevant {
            h = h
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(u64::from(t[j]) + 1);
        }
        format!("k{}", (h >> 33) % k as u64)
    };
    let mut columns: Vec<(String, Column)> = (0..m)
        .map(|j| {
            let name = format!("c{j}");
            if j % 2 == 0 {
                let cells = tuples.iter().map(|t| Some(format!("v{}", t[j]))).collect();
                (name, Column::Categorical(cells))
            } else {
                let cells = tuples
                    .iter()
                    .map(|t| Some(f64::from(t[j]) * 10.0))
                    .collect();
                (name, Column::Numeric(cells))
            }
        })
        .collect();
    columns.push((
        "d".to_owned(),
        Column::Categorical(tuples.iter().map(|t| Some(label(t))).collect()),
    ));
    InformationTable::from_columns(columns, "d").unwrap()
}

pub fn numeric_attrs(table: &InformationTable) -> Vec<String> {
    table
        .attributes()
        .iter()
        .filter(|a| a.kind == granulens::AttrKind::Numeric)
        .map(|a| a.name.clone())
        .collect()
}

/// Random bits in `0..=max_bits` for every numeric attribute.
pub fn random_scheme(
    rng: &mut impl Rng,
    table: &InformationTable,
    max_bits: u32,
) -> GranulationScheme {
    let mut s = GranulationScheme::new();
    for a in numeric_attrs(table) {
        s.set_bits(a, rng.gen_range(0..=max_bits));
    }
    s
}

pub fn random_subset(rng: &mut impl Rng, table: &InformationTable) -> Vec<String> {
    let mut attrs: Vec<String> = table
        .condition_attributes()
        .into_iter()
        .filter(|_| rng.gen_bool(0.6))
        .map(str::to_owned)
        .collect();
    attrs.shuffle(rng);
    attrs
}

/// Code tuple of an object over attribute indices, read straight from the view.
fn tuple(view: &DiscreteView<'_>, attrs: &[usize], x: usize) -> Vec<u32> {
    attrs.iter().map(|&j| view.code(x, j)).collect()
}

/// `[x]`: every object indiscernible from `x`, by pairwise comparison.
pub fn equivalence_class(view: &DiscreteView<'_>, attrs: &[usize], x: usize) -> BTreeSet<usize> {
    let tx = tuple(view, attrs, x);
    (0..view.table().n())
        .filter(|&y| tuple(view, attrs, y) == tx)
        .collect()
}

#[derive(Debug, PartialEq, Eq)]
pub struct OracleApprox {
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
    pub boundary: Vec<usize>,
}

/// `{x ∈ U | [x] ⊆ X}`, `{x ∈ U | [x] ∩ X ≠ ∅}` and their difference, literally.
pub fn oracle_approx(
    view: &DiscreteView<'_>,
    attrs: &[usize],
    concept: &BTreeSet<usize>,
) -> OracleApprox {
    let n = view.table().n();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for x in 0..n {
        let class = equivalence_class(view, attrs, x);
        if class.is_subset(concept) {
            lower.push(x);
        }
        if !class.is_disjoint(concept) {
            upper.push(x);
        }
    }
    let boundary = upper
        .iter()
        .copied()
        .filter(|x| !lower.contains(x))
        .collect();
    OracleApprox {
        lower,
        upper,
        boundary,
    }
}

/// Positive region and overall boundary from the per-class oracle.
pub fn oracle_regions(view: &DiscreteView<'_>, attrs: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let labels = view.table().decision_labels();
    let mut positive = BTreeSet::new();
    let mut boundary = BTreeSet::new();
    for class in labels.classes() {
        let concept: BTreeSet<usize> = (0..labels.len())
            .filter(|&i| labels.class_of(i) == class)
            .collect();
        let a = oracle_approx(view, attrs, &concept);
        positive.extend(a.lower);
        boundary.extend(a.boundary);
    }
    (
        positive.into_iter().collect(),
        boundary.into_iter().collect(),
    )
}

/// Entropy in bits of raw counts.
pub fn entropy_of(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum()
}
