//! Finite measurements and finite boolean subalgebras over a validated
//! lattice.
//!
//! A finite measurement is a set of outcomes `{e_1, ..., e_n}` with every
//! `e_i` above bottom, pairwise orthogonal (`e_i <= e_j'`), and joining to
//! top. Measurements are ordered by refinement: `M` is finer than `M2`
//! when every outcome of `M` lies below some outcome of `M2`; the witness
//! outcome is unique, giving the projection map between comparable
//! measurements.
//!
//! Finite boolean subalgebras correspond bijectively to measurements: the
//! subalgebra generated by a measurement collects all joins of outcome
//! subsets, and the atoms of a subalgebra recover the measurement.

use crate::oml::{Element, FiniteOml};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

/// Default ceiling on lattice size for the exponential enumerations.
pub const DEFAULT_ENUM_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("outcome set contains bottom")]
    ContainsBot,
    #[error("outcomes {x} and {y} are not orthogonal")]
    NotPairwiseOrthogonal { x: usize, y: usize },
    #[error("outcomes do not join to top")]
    JoinNotTop,
    #[error("measurements live on different lattices")]
    BaseMismatch,
    #[error("not finer: outcome {outcome} lies below no coarse outcome")]
    NotFiner { outcome: usize },
    #[error("elements {x} and {y} are not comparable")]
    NotComparable { x: usize, y: usize },
    #[error("lattice has {size} elements; enumeration capped at {cap} (override with a larger cap)")]
    TooLarge { size: usize, cap: usize },
    #[error("set is not closed under {op} at {x}, {y}")]
    NotClosed { op: &'static str, x: usize, y: usize },
    #[error("elements {x} and {y} do not commute")]
    NotCommuting { x: usize, y: usize },
    #[error("set does not contain both bounds")]
    MissingBounds,
}

/// A validated finite measurement; outcomes are stored sorted by index.
#[derive(Debug, Clone)]
pub struct FiniteMeasurement {
    base: Arc<FiniteOml>,
    outcomes: Vec<usize>,
}

impl PartialEq for FiniteMeasurement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.base, &other.base) && self.outcomes == other.outcomes
    }
}

impl Eq for FiniteMeasurement {}

impl FiniteMeasurement {
    pub fn base(&self) -> &Arc<FiniteOml> {
        &self.base
    }

    pub fn outcomes(&self) -> Vec<Element> {
        self.outcomes.iter().map(|&i| self.base.element(i)).collect()
    }

    pub fn outcome_indices(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

/// A validated finite boolean subalgebra; elements are stored sorted.
#[derive(Debug, Clone)]
pub struct BooleanSubalgebra {
    base: Arc<FiniteOml>,
    elems: Vec<usize>,
}

impl PartialEq for BooleanSubalgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.base, &other.base) && self.elems == other.elems
    }
}

impl Eq for BooleanSubalgebra {}

impl BooleanSubalgebra {
    pub fn base(&self) -> &Arc<FiniteOml> {
        &self.base
    }

    pub fn elements(&self) -> Vec<Element> {
        self.elems.iter().map(|&i| self.base.element(i)).collect()
    }

    pub fn indices(&self) -> &[usize] {
        &self.elems
    }

    pub fn contains(&self, e: Element) -> bool {
        self.elems.binary_search(&e.index()).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `B1` is a subalgebra of `B2` iff its element set is a subset.
    pub fn subset_of(&self, other: &BooleanSubalgebra) -> bool {
        Arc::ptr_eq(&self.base, &other.base)
            && self.elems.iter().all(|i| other.elems.binary_search(i).is_ok())
    }

    /// Atoms of the subalgebra: minimal members above bottom.
    pub fn atoms(&self) -> Vec<Element> {
        let l = &self.base;
        self.elems
            .iter()
            .map(|&i| l.element(i))
            .filter(|&x| {
                x != l.bot()
                    && !self
                        .elems
                        .iter()
                        .map(|&j| l.element(j))
                        .any(|y| y != l.bot() && y != x && l.leq(y, x))
            })
            .collect()
    }
}

/// Checks the three measurement conditions in order and reports the first
/// failure. The outcome list is read as a set.
pub fn validate_measurement(
    base: &Arc<FiniteOml>,
    outcomes: &[Element],
) -> Result<FiniteMeasurement, MeasureError> {
    let set: BTreeSet<usize> = outcomes
        .iter()
        .map(|&e| {
            // Route through the lattice so cross-lattice handles panic.
            base.leq(e, e);
            e.index()
        })
        .collect();
    let sorted: Vec<usize> = set.into_iter().collect();
    for &i in &sorted {
        if base.element(i) == base.bot() {
            return Err(MeasureError::ContainsBot);
        }
    }
    for (k, &i) in sorted.iter().enumerate() {
        for &j in &sorted[k + 1..] {
            let (x, y) = (base.element(i), base.element(j));
            if !base.leq(x, base.ortho(y)) {
                return Err(MeasureError::NotPairwiseOrthogonal { x: i, y: j });
            }
        }
    }
    let join = sorted
        .iter()
        .fold(base.bot(), |acc, &i| base.join(acc, base.element(i)));
    if join != base.top() {
        return Err(MeasureError::JoinNotTop);
    }
    Ok(FiniteMeasurement { base: Arc::clone(base), outcomes: sorted })
}

/// `m` is finer than `coarse`: every outcome lies below some coarse outcome.
pub fn finer_than(
    m: &FiniteMeasurement,
    coarse: &FiniteMeasurement,
) -> Result<bool, MeasureError> {
    if !Arc::ptr_eq(&m.base, &coarse.base) {
        return Err(MeasureError::BaseMismatch);
    }
    let l = &m.base;
    Ok(m.outcomes.iter().all(|&e| {
        coarse
            .outcomes
            .iter()
            .any(|&f| l.leq(l.element(e), l.element(f)))
    }))
}

/// The projection between comparable measurements: each fine outcome maps
/// to the unique coarse outcome above it. Uniqueness holds because two
/// distinct coarse outcomes are orthogonal, so anything below both is
/// bottom.
pub fn refinement_map(
    m: &FiniteMeasurement,
    coarse: &FiniteMeasurement,
) -> Result<BTreeMap<Element, Element>, MeasureError> {
    if !Arc::ptr_eq(&m.base, &coarse.base) {
        return Err(MeasureError::BaseMismatch);
    }
    let l = &m.base;
    let mut map = BTreeMap::new();
    for &e in &m.outcomes {
        let above: Vec<usize> = coarse
            .outcomes
            .iter()
            .copied()
            .filter(|&f| l.leq(l.element(e), l.element(f)))
            .collect();
        match above.as_slice() {
            [] => return Err(MeasureError::NotFiner { outcome: e }),
            [f] => {
                map.insert(l.element(e), l.element(*f));
            }
            _ => unreachable!("distinct orthogonal outcomes share no non-bottom lower bound"),
        }
    }
    Ok(map)
}

/// The boolean subalgebra generated by a measurement: all joins of outcome
/// subsets.
pub fn measurement_to_fba(m: &FiniteMeasurement) -> BooleanSubalgebra {
    let l = &m.base;
    let k = m.outcomes.len();
    assert!(k < 64, "measurement too large to expand");
    let mut elems = BTreeSet::new();
    for mask in 0..1u64 << k {
        let join = (0..k)
            .filter(|&b| mask >> b & 1 == 1)
            .fold(l.bot(), |acc, b| l.join(acc, l.element(m.outcomes[b])));
        elems.insert(join.index());
    }
    BooleanSubalgebra { base: Arc::clone(l), elems: elems.into_iter().collect() }
}

/// The measurement formed by the atoms of a boolean subalgebra.
pub fn fba_to_measurement(b: &BooleanSubalgebra) -> FiniteMeasurement {
    let mut outcomes: Vec<usize> = b.atoms().iter().map(|e| e.index()).collect();
    outcomes.sort_unstable();
    FiniteMeasurement { base: Arc::clone(&b.base), outcomes }
}

/// Validates that `elems` is a finite boolean subalgebra: bounds present,
/// closed under meet/join/ortho, and pairwise commuting.
pub fn validate_fba(
    base: &Arc<FiniteOml>,
    elems: &[Element],
) -> Result<BooleanSubalgebra, MeasureError> {
    let set: BTreeSet<usize> = elems
        .iter()
        .map(|&e| {
            base.leq(e, e);
            e.index()
        })
        .collect();
    if !set.contains(&base.bot().index()) || !set.contains(&base.top().index()) {
        return Err(MeasureError::MissingBounds);
    }
    for &i in &set {
        let o = base.ortho(base.element(i)).index();
        if !set.contains(&o) {
            return Err(MeasureError::NotClosed { op: "ortho", x: i, y: i });
        }
    }
    for &i in &set {
        for &j in &set {
            let (x, y) = (base.element(i), base.element(j));
            if !set.contains(&base.meet(x, y).index()) {
                return Err(MeasureError::NotClosed { op: "meet", x: i, y: j });
            }
            if !set.contains(&base.join(x, y).index()) {
                return Err(MeasureError::NotClosed { op: "join", x: i, y: j });
            }
            if !base.commutes(x, y) {
                return Err(MeasureError::NotCommuting { x: i, y: j });
            }
        }
    }
    Ok(BooleanSubalgebra { base: Arc::clone(base), elems: set.into_iter().collect() })
}

/// Least member of `b` above `x` (the projection onto the subalgebra).
/// Always defined: top is a candidate and candidates are meet-closed.
pub fn pi_b(b: &BooleanSubalgebra, x: Element) -> Element {
    let l = &b.base;
    b.elems
        .iter()
        .map(|&i| l.element(i))
        .filter(|&y| l.leq(x, y))
        .fold(l.top(), |acc, y| l.meet(acc, y))
}

/// The subalgebra `{bot, x, x', top}` generated by one element.
pub fn sem(base: &Arc<FiniteOml>, x: Element) -> BooleanSubalgebra {
    let elems: BTreeSet<usize> = [base.bot(), x, base.ortho(x), base.top()]
        .into_iter()
        .map(|e| e.index())
        .collect();
    BooleanSubalgebra { base: Arc::clone(base), elems: elems.into_iter().collect() }
}

/// The subalgebra generated by a comparable pair `x <= y`:
/// `{bot, x, y /\ x', y', x \/ y', x', y, top}`, with coinciding members
/// deduplicated.
pub fn sem2(
    base: &Arc<FiniteOml>,
    x: Element,
    y: Element,
) -> Result<BooleanSubalgebra, MeasureError> {
    if !base.leq(x, y) {
        return Err(MeasureError::NotComparable { x: x.index(), y: y.index() });
    }
    let (xp, yp) = (base.ortho(x), base.ortho(y));
    let elems: BTreeSet<usize> = [
        base.bot(),
        x,
        base.meet(y, xp),
        yp,
        base.join(x, yp),
        xp,
        y,
        base.top(),
    ]
    .into_iter()
    .map(|e| e.index())
    .collect();
    Ok(BooleanSubalgebra { base: Arc::clone(base), elems: elems.into_iter().collect() })
}

fn check_cap(base: &FiniteOml, cap: Option<usize>) -> Result<(), MeasureError> {
    let cap = cap.unwrap_or(DEFAULT_ENUM_CAP);
    if base.element_count() > cap {
        return Err(MeasureError::TooLarge { size: base.element_count(), cap });
    }
    Ok(())
}

/// All finite measurements of the lattice, in lexicographic order of their
/// sorted outcome index lists.
pub fn enumerate_measurements(
    base: &Arc<FiniteOml>,
    cap: Option<usize>,
) -> Result<Vec<FiniteMeasurement>, MeasureError> {
    check_cap(base, cap)?;
    let l = base;
    let n = l.element_count();
    let bot = l.bot();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();

    fn dfs(
        l: &FiniteOml,
        n: usize,
        start: usize,
        join: Element,
        chosen: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if join == l.top() && !chosen.is_empty() {
            found.push(chosen.clone());
            // No further outcome can be orthogonal to a join of top.
            return;
        }
        for i in start..n {
            let e = l.element(i);
            if e == l.bot() {
                continue;
            }
            if chosen
                .iter()
                .all(|&c| l.leq(l.element(c), l.ortho(e)))
            {
                chosen.push(i);
                dfs(l, n, i + 1, l.join(join, e), chosen, found);
                chosen.pop();
            }
        }
    }
    dfs(l, n, 0, bot, &mut chosen, &mut found);
    Ok(found
        .into_iter()
        .map(|outcomes| FiniteMeasurement { base: Arc::clone(base), outcomes })
        .collect())
}

/// The enumerated finite boolean subalgebras of one lattice, canonically
/// ordered by (size, element indices), with their strict inclusion pairs.
#[derive(Debug, Clone)]
pub struct FbaFamily {
    base: Arc<FiniteOml>,
    fbas: Vec<BooleanSubalgebra>,
    inclusions: Vec<(usize, usize)>,
}

impl FbaFamily {
    pub fn base(&self) -> &Arc<FiniteOml> {
        &self.base
    }

    pub fn fbas(&self) -> &[BooleanSubalgebra] {
        &self.fbas
    }

    pub fn len(&self) -> usize {
        self.fbas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fbas.is_empty()
    }

    /// Pairs `(i, j)` with `i != j` and `fbas[i]` a subalgebra of `fbas[j]`.
    pub fn inclusion_pairs(&self) -> &[(usize, usize)] {
        &self.inclusions
    }

    pub fn position(&self, b: &BooleanSubalgebra) -> Option<usize> {
        self.fbas.iter().position(|f| f == b)
    }
}

/// All finite boolean subalgebras, obtained from the measurement
/// enumeration through the generated-subalgebra bijection.
pub fn enumerate_fbas(
    base: &Arc<FiniteOml>,
    cap: Option<usize>,
) -> Result<FbaFamily, MeasureError> {
    let measurements = enumerate_measurements(base, cap)?;
    let mut fbas: Vec<BooleanSubalgebra> =
        measurements.iter().map(measurement_to_fba).collect();
    fbas.sort_by(|a, b| (a.elems.len(), &a.elems).cmp(&(b.elems.len(), &b.elems)));
    fbas.dedup();
    let mut inclusions = Vec::new();
    for i in 0..fbas.len() {
        for j in 0..fbas.len() {
            if i != j && fbas[i].subset_of(&fbas[j]) {
                inclusions.push((i, j));
            }
        }
    }
    Ok(FbaFamily { base: Arc::clone(base), fbas, inclusions })
}
