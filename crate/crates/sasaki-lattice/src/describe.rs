//! Partial descriptions: total assignments of a non-bottom member to every
//! finite boolean subalgebra, characterized by two equivalent coherence
//! conditions, and their round-trip with proper Sasaki filters.
//!
//! Condition (E1): `B1 ⊆ B2` implies `d(B1) = pi_B1(d(B2))`.
//! Condition (E2): for all pairs, `d(B1) <= pi_B1(d(B2))`.
//!
//! The image of a coherent description is a proper Sasaki filter, and a
//! proper Sasaki filter induces the description `B -> min(F ∩ B)`; the two
//! constructions are mutually inverse.

use crate::filter::{check_sasaki_filter, FilterViolation, SasakiFilter, SfLattice};
use crate::measure::{fba_to_measurement, pi_b, sem, FbaFamily};
use crate::oml::Element;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

/// Ceiling on exhaustive table enumeration before sampling kicks in.
pub const DEFAULT_TABLE_LIMIT: u64 = 1_000_000;
/// Sample size used once the table space exceeds the exhaustive limit.
pub const DEFAULT_SAMPLE_COUNT: u64 = 100_000;
/// Fixed seed for the sampling fallback.
pub const DEFAULT_SAMPLE_SEED: u64 = 0xD15C;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescribeError {
    #[error("assignment table has {got} entries for {expected} subalgebras")]
    LengthMismatch { expected: usize, got: usize },
    #[error("assigned value for subalgebra {fba} is not one of its members")]
    ValueNotInFba { fba: usize },
    #[error("assigned value for subalgebra {fba} is bottom")]
    ValueIsBot { fba: usize },
    #[error("description image is not a proper Sasaki filter")]
    InvalidDescription { violation: FilterViolation },
    #[error("filter contains bottom; no description is induced")]
    ImproperFilter,
    #[error("trace on subalgebra {fba} has no least element")]
    NoMinimum { fba: usize },
}

/// A total assignment over the enumerated subalgebra family. Pointwise
/// validity (membership, non-bottom) is enforced on construction; the
/// coherence conditions are checked by [`validate_e1`] / [`validate_e2`].
#[derive(Debug, Clone)]
pub struct PartialDescription {
    family: Arc<FbaFamily>,
    values: Vec<usize>,
}

impl PartialEq for PartialDescription {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(self.family.base(), other.family.base()) && self.values == other.values
    }
}

impl Eq for PartialDescription {}

impl PartialDescription {
    pub fn new(family: Arc<FbaFamily>, values: Vec<usize>) -> Result<Self, DescribeError> {
        if values.len() != family.len() {
            return Err(DescribeError::LengthMismatch {
                expected: family.len(),
                got: values.len(),
            });
        }
        let bot = family.base().bot().index();
        for (i, (&v, fba)) in values.iter().zip(family.fbas()).enumerate() {
            if fba.indices().binary_search(&v).is_err() {
                return Err(DescribeError::ValueNotInFba { fba: i });
            }
            if v == bot {
                return Err(DescribeError::ValueIsBot { fba: i });
            }
        }
        Ok(PartialDescription { family, values })
    }

    pub fn family(&self) -> &Arc<FbaFamily> {
        &self.family
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Assigned element for the subalgebra at family index `i`.
    pub fn value(&self, i: usize) -> Element {
        self.family.base().element(self.values[i])
    }

    /// Measurement form of the assignment: the outcomes of the subalgebra's
    /// atom measurement lying below the assigned value.
    pub fn measurement_view(&self, i: usize) -> Vec<Element> {
        let base = self.family.base();
        let d = self.value(i);
        fba_to_measurement(&self.family.fbas()[i])
            .outcomes()
            .into_iter()
            .filter(|&o| base.leq(o, d))
            .collect()
    }
}

/// Witness for a failed coherence condition: the subalgebra pair, the
/// assigned value of the smaller one, and the projected value it was
/// compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionWitness {
    pub b1: usize,
    pub b2: usize,
    pub assigned: usize,
    pub projected: usize,
}

/// First (E1) violation in canonical order, if any: an inclusion
/// `B1 ⊆ B2` with `d(B1) != pi_B1(d(B2))`.
pub fn validate_e1(d: &PartialDescription) -> Option<ConditionWitness> {
    let base = d.family.base();
    for &(i, j) in d.family.inclusion_pairs() {
        let projected = pi_b(&d.family.fbas()[i], base.element(d.values[j]));
        if projected.index() != d.values[i] {
            return Some(ConditionWitness {
                b1: i,
                b2: j,
                assigned: d.values[i],
                projected: projected.index(),
            });
        }
    }
    None
}

/// First (E2) violation in canonical order, if any: a pair with
/// `d(B1) ≰ pi_B1(d(B2))`.
pub fn validate_e2(d: &PartialDescription) -> Option<ConditionWitness> {
    let base = d.family.base();
    for i in 0..d.family.len() {
        for j in 0..d.family.len() {
            let projected = pi_b(&d.family.fbas()[i], base.element(d.values[j]));
            if !base.leq(base.element(d.values[i]), projected) {
                return Some(ConditionWitness {
                    b1: i,
                    b2: j,
                    assigned: d.values[i],
                    projected: projected.index(),
                });
            }
        }
    }
    None
}

/// Checks `d(⟦d(B)⟧) = d(B)` for every subalgebra; returns the first
/// failing family index.
pub fn check_sem_lemma(d: &PartialDescription) -> Option<usize> {
    let base = d.family.base();
    for i in 0..d.family.len() {
        let x = base.element(d.values[i]);
        let generated = sem(base, x);
        let pos = d
            .family
            .position(&generated)
            .expect("singly generated subalgebras are enumerated");
        if d.values[pos] != d.values[i] {
            return Some(i);
        }
    }
    None
}

/// All pointwise-valid assignment tables, visited in odometer order over
/// the non-bottom members of each subalgebra.
fn table_space(family: &FbaFamily) -> Vec<Vec<usize>> {
    let bot = family.base().bot().index();
    family
        .fbas()
        .iter()
        .map(|b| {
            b.indices()
                .iter()
                .copied()
                .filter(|&v| v != bot)
                .collect()
        })
        .collect()
}

/// Result of scanning assignment tables for the E1/E2 equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub tables_checked: u64,
    pub exhaustive: bool,
    pub mismatches: u64,
    /// Value table of the first mismatch, if any.
    pub first_mismatch: Option<Vec<usize>>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0
    }
}

/// Scans every pointwise-valid assignment table (or a seeded uniform
/// sample when the space exceeds `limit`) and compares the verdicts of
/// (E1) and (E2) on each.
pub fn check_e1_iff_e2(
    family: &Arc<FbaFamily>,
    limit: Option<u64>,
    samples: Option<u64>,
    seed: Option<u64>,
) -> EquivalenceReport {
    let limit = limit.unwrap_or(DEFAULT_TABLE_LIMIT);
    let digits = table_space(family);
    let total: Option<u64> = digits
        .iter()
        .try_fold(1u64, |acc, d| acc.checked_mul(d.len() as u64));
    let exhaustive = total.is_some_and(|t| t <= limit);

    let mut tables_checked = 0;
    let mut mismatches = 0;
    let mut first_mismatch = None;
    let mut consider = |values: Vec<usize>| {
        let d = PartialDescription::new(Arc::clone(family), values.clone())
            .expect("tables are pointwise valid by construction");
        tables_checked += 1;
        if validate_e1(&d).is_none() != validate_e2(&d).is_none() {
            mismatches += 1;
            if first_mismatch.is_none() {
                first_mismatch = Some(values);
            }
        }
    };

    if exhaustive {
        let mut counters = vec![0usize; digits.len()];
        loop {
            consider(
                counters
                    .iter()
                    .zip(&digits)
                    .map(|(&c, d)| d[c])
                    .collect(),
            );
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                counters[pos] += 1;
                if counters[pos] < digits[pos].len() {
                    break;
                }
                counters[pos] = 0;
            }
            if counters.iter().all(|&c| c == 0) {
                break;
            }
        }
    } else {
        let samples = samples.unwrap_or(DEFAULT_SAMPLE_COUNT);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(DEFAULT_SAMPLE_SEED));
        for _ in 0..samples {
            consider(
                digits
                    .iter()
                    .map(|d| d[rng.gen_range(0..d.len())])
                    .collect(),
            );
        }
    }
    EquivalenceReport { tables_checked, exhaustive, mismatches, first_mismatch }
}

/// Every pointwise-valid table that also satisfies (E1), in odometer order.
pub fn enumerate_valid_descriptions(family: &Arc<FbaFamily>) -> Vec<PartialDescription> {
    let digits = table_space(family);
    let mut out = Vec::new();
    let mut counters = vec![0usize; digits.len()];
    loop {
        let values: Vec<usize> = counters.iter().zip(&digits).map(|(&c, d)| d[c]).collect();
        let d = PartialDescription::new(Arc::clone(family), values)
            .expect("tables are pointwise valid by construction");
        if validate_e1(&d).is_none() {
            out.push(d);
        }
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            counters[pos] += 1;
            if counters[pos] < digits[pos].len() {
                break;
            }
            counters[pos] = 0;
        }
        if counters.iter().all(|&c| c == 0) {
            break;
        }
    }
    out
}

/// Image of a description, verified to be a proper Sasaki filter.
/// Properness is automatic: assigned values are never bottom.
pub fn description_to_filter(d: &PartialDescription) -> Result<SasakiFilter, DescribeError> {
    let base = d.family.base();
    let image: BTreeSet<usize> = d.values.iter().copied().collect();
    let members: Vec<Element> = image.iter().map(|&i| base.element(i)).collect();
    let filter = check_sasaki_filter(base, &members)
        .map_err(|violation| DescribeError::InvalidDescription { violation })?;
    debug_assert!(filter.is_proper());
    Ok(filter)
}

/// The description induced by a proper filter: `B -> min(F ∩ B)`.
pub fn filter_to_description(
    family: &Arc<FbaFamily>,
    f: &SasakiFilter,
) -> Result<PartialDescription, DescribeError> {
    if !f.is_proper() {
        return Err(DescribeError::ImproperFilter);
    }
    let base = family.base();
    let mut values = Vec::with_capacity(family.len());
    for (i, fba) in family.fbas().iter().enumerate() {
        let trace: Vec<usize> = fba
            .indices()
            .iter()
            .copied()
            .filter(|&x| f.indices().binary_search(&x).is_ok())
            .collect();
        let min = trace
            .iter()
            .copied()
            .find(|&m| trace.iter().all(|&t| base.leq_idx(m, t)))
            .ok_or(DescribeError::NoMinimum { fba: i })?;
        values.push(min);
    }
    PartialDescription::new(Arc::clone(family), values)
}

/// Outcome of the two round-trip identities over a whole lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    pub proper_filters: usize,
    pub valid_descriptions: usize,
    /// SF-lattice indices of filters that fail `F -> d_F -> F(d_F) = F`.
    pub filter_failures: Vec<usize>,
    /// Description indices failing `d -> F(d) -> d_{F(d)} = d`.
    pub description_failures: Vec<usize>,
}

impl RoundtripReport {
    pub fn ok(&self) -> bool {
        self.filter_failures.is_empty() && self.description_failures.is_empty()
    }
}

/// Runs both round-trip identities over every enumerated proper filter and
/// every valid description.
pub fn roundtrip_check(family: &Arc<FbaFamily>, sf: &SfLattice) -> RoundtripReport {
    let mut filter_failures = Vec::new();
    let mut proper_filters = 0;
    for (i, f) in sf.filters().iter().enumerate() {
        if !f.is_proper() {
            continue;
        }
        proper_filters += 1;
        let ok = filter_to_description(family, f)
            .and_then(|d| description_to_filter(&d))
            .map(|back| &back == f)
            .unwrap_or(false);
        if !ok {
            filter_failures.push(i);
        }
    }
    let descriptions = enumerate_valid_descriptions(family);
    let mut description_failures = Vec::new();
    for (i, d) in descriptions.iter().enumerate() {
        let ok = description_to_filter(d)
            .and_then(|f| filter_to_description(family, &f))
            .map(|back| &back == d)
            .unwrap_or(false);
        if !ok {
            description_failures.push(i);
        }
    }
    RoundtripReport {
        proper_filters,
        valid_descriptions: descriptions.len(),
        filter_failures,
        description_failures,
    }
}

/// Convenience: the description with every subalgebra assigned top.
pub fn constant_top(family: &Arc<FbaFamily>) -> PartialDescription {
    let top = family.base().top().index();
    PartialDescription::new(Arc::clone(family), vec![top; family.len()])
        .expect("top is a non-bottom member of every subalgebra")
}
