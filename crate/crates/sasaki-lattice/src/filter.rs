//! Sasaki filters and the lattice SF(L) they form under reverse inclusion.
//!
//! A Sasaki filter is a nonempty subset of a lattice that is upward closed
//! and stable under the Sasaki projection of any member onto any other. A
//! filter is proper when it avoids bottom. Under reverse inclusion
//! (`F1 <= F2` iff `F2` is a subset of `F1`) the filters form a bounded
//! lattice with `{top}` greatest and the whole lattice least; join is set
//! intersection and meet is the generated filter of the union. The atoms
//! of this lattice — the maximal proper filters — are the partial states.

use crate::measure::FbaFamily;
use crate::oml::{Element, FiniteOml};
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("lattice has {size} elements; filter enumeration capped at {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("filters live on different lattices")]
    BaseMismatch,
}

/// First defect found when checking the filter conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterViolation {
    Empty,
    /// `x` is a member, `x <= y`, but `y` is missing.
    NotUpwardClosed { x: usize, y: usize },
    /// Both members, but the projection of `x` onto `y` is missing.
    NotStable { x: usize, y: usize },
}

/// A verified Sasaki filter; members are stored sorted by index.
#[derive(Debug, Clone)]
pub struct SasakiFilter {
    base: Arc<FiniteOml>,
    members: Vec<usize>,
}

impl PartialEq for SasakiFilter {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.base, &other.base) && self.members == other.members
    }
}

impl Eq for SasakiFilter {}

impl SasakiFilter {
    pub fn base(&self) -> &Arc<FiniteOml> {
        &self.base
    }

    pub fn members(&self) -> Vec<Element> {
        self.members.iter().map(|&i| self.base.element(i)).collect()
    }

    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, e: Element) -> bool {
        self.members.binary_search(&e.index()).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Proper: bottom is not a member.
    pub fn is_proper(&self) -> bool {
        self.members.binary_search(&self.base.bot().index()).is_err()
    }

    pub fn subset_of(&self, other: &SasakiFilter) -> bool {
        Arc::ptr_eq(&self.base, &other.base)
            && self.members.iter().all(|i| other.members.binary_search(i).is_ok())
    }
}

/// Checks the filter conditions on an arbitrary index set, reporting the
/// first violation in ascending index order.
pub fn check_sasaki_filter_indices(
    base: &FiniteOml,
    set: &BTreeSet<usize>,
) -> Result<(), FilterViolation> {
    if set.is_empty() {
        return Err(FilterViolation::Empty);
    }
    for &x in set {
        for y in 0..base.element_count() {
            if base.leq_idx(x, y) && !set.contains(&y) {
                return Err(FilterViolation::NotUpwardClosed { x, y });
            }
        }
    }
    for &x in set {
        for &y in set {
            let s = base.sasaki_idx(x, y);
            if !set.contains(&s) {
                return Err(FilterViolation::NotStable { x, y });
            }
        }
    }
    Ok(())
}

/// Element-level wrapper around [`check_sasaki_filter_indices`].
pub fn check_sasaki_filter(
    base: &Arc<FiniteOml>,
    set: &[Element],
) -> Result<SasakiFilter, FilterViolation> {
    let idx: BTreeSet<usize> = set
        .iter()
        .map(|&e| {
            base.leq(e, e);
            e.index()
        })
        .collect();
    check_sasaki_filter_indices(base, &idx)?;
    Ok(SasakiFilter { base: Arc::clone(base), members: idx.into_iter().collect() })
}

pub fn is_sasaki_filter(base: &Arc<FiniteOml>, set: &[Element]) -> bool {
    check_sasaki_filter(base, set).is_ok()
}

/// The up-set of `x`; proper exactly when `x` is not bottom.
pub fn principal_filter(base: &Arc<FiniteOml>, x: Element) -> SasakiFilter {
    let members = (0..base.element_count())
        .filter(|&y| base.leq(x, base.element(y)))
        .collect();
    SasakiFilter { base: Arc::clone(base), members }
}

/// Least Sasaki filter containing the seed: alternate upward closure and
/// pairwise projections to a fixpoint. The empty seed yields `{top}`.
pub fn generate_filter(base: &Arc<FiniteOml>, seed: &[Element]) -> SasakiFilter {
    let n = base.element_count();
    let mut set: BTreeSet<usize> = seed
        .iter()
        .map(|&e| {
            base.leq(e, e);
            e.index()
        })
        .collect();
    set.insert(base.top().index());
    loop {
        let mut grew = false;
        let snapshot: Vec<usize> = set.iter().copied().collect();
        for &x in &snapshot {
            for y in 0..n {
                if base.leq_idx(x, y) && set.insert(y) {
                    grew = true;
                }
            }
        }
        let snapshot: Vec<usize> = set.iter().copied().collect();
        for &x in &snapshot {
            for &y in &snapshot {
                if set.insert(base.sasaki_idx(x, y)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    SasakiFilter { base: Arc::clone(base), members: set.into_iter().collect() }
}

/// SF(L): every Sasaki filter of one lattice, sorted by (size, members).
/// Index 0 is always `{top}` (the greatest element under reverse
/// inclusion) and the last index is the whole lattice (the least).
#[derive(Debug, Clone)]
pub struct SfLattice {
    base: Arc<FiniteOml>,
    filters: Vec<SasakiFilter>,
}

impl SfLattice {
    pub fn base(&self) -> &Arc<FiniteOml> {
        &self.base
    }

    pub fn filters(&self) -> &[SasakiFilter] {
        &self.filters
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn position(&self, f: &SasakiFilter) -> Option<usize> {
        self.filters.iter().position(|g| g == f)
    }

    /// Reverse-inclusion order between filters by list position.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.filters[j].subset_of(&self.filters[i])
    }

    pub fn greatest(&self) -> &SasakiFilter {
        &self.filters[0]
    }

    pub fn least(&self) -> &SasakiFilter {
        self.filters.last().expect("nonempty")
    }
}

/// Default cap shared with the measurement enumerations.
pub use crate::measure::DEFAULT_ENUM_CAP;

/// Enumerates every Sasaki filter by generating the upward-closed sets
/// from their antichains of minimal elements, then keeping the
/// projection-stable ones.
pub fn enumerate_filters(
    base: &Arc<FiniteOml>,
    cap: Option<usize>,
) -> Result<SfLattice, FilterError> {
    let n = base.element_count();
    let cap = cap.unwrap_or(DEFAULT_ENUM_CAP);
    if n > cap {
        return Err(FilterError::TooLarge { size: n, cap });
    }
    let up_sets: Vec<BTreeSet<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| base.leq_idx(x, y)).collect())
        .collect();

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut antichain: Vec<usize> = Vec::new();

    fn dfs(
        base: &FiniteOml,
        up_sets: &[BTreeSet<usize>],
        start: usize,
        antichain: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if !antichain.is_empty() {
            let mut set = BTreeSet::new();
            for &m in antichain.iter() {
                set.extend(up_sets[m].iter().copied());
            }
            if stable(base, &set) {
                found.push(set.into_iter().collect());
            }
        }
        for i in start..up_sets.len() {
            if antichain
                .iter()
                .all(|&m| !base.leq_idx(m, i) && !base.leq_idx(i, m))
            {
                antichain.push(i);
                dfs(base, up_sets, i + 1, antichain, found);
                antichain.pop();
            }
        }
    }

    fn stable(base: &FiniteOml, set: &BTreeSet<usize>) -> bool {
        set.iter()
            .all(|&x| set.iter().all(|&y| set.contains(&base.sasaki_idx(x, y))))
    }

    dfs(base, &up_sets, 0, &mut antichain, &mut found);
    found.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let filters = found
        .into_iter()
        .map(|members| SasakiFilter { base: Arc::clone(base), members })
        .collect();
    Ok(SfLattice { base: Arc::clone(base), filters })
}

fn same_base(base: &Arc<FiniteOml>, family: &[SasakiFilter]) -> Result<(), FilterError> {
    if family.iter().all(|f| Arc::ptr_eq(&f.base, base)) {
        Ok(())
    } else {
        Err(FilterError::BaseMismatch)
    }
}

/// Join in SF(L) = intersection; the empty family joins to the least
/// element, which is the whole lattice.
pub fn sf_join(
    base: &Arc<FiniteOml>,
    family: &[SasakiFilter],
) -> Result<SasakiFilter, FilterError> {
    same_base(base, family)?;
    let members: Vec<usize> = (0..base.element_count())
        .filter(|&i| family.iter().all(|f| f.members.binary_search(&i).is_ok()))
        .collect();
    Ok(SasakiFilter { base: Arc::clone(base), members })
}

/// Meet in SF(L) = the filter generated by the union; the empty family
/// meets to the greatest element `{top}`.
pub fn sf_meet(
    base: &Arc<FiniteOml>,
    family: &[SasakiFilter],
) -> Result<SasakiFilter, FilterError> {
    same_base(base, family)?;
    let union: Vec<Element> = family
        .iter()
        .flat_map(|f| f.members())
        .collect();
    Ok(generate_filter(base, &union))
}

/// Atoms of SF(L) under reverse inclusion: the maximal proper filters.
/// These are the partial states.
pub fn sf_atoms(sfl: &SfLattice) -> Vec<SasakiFilter> {
    sfl.filters
        .iter()
        .filter(|f| {
            f.is_proper()
                && !sfl
                    .filters
                    .iter()
                    .any(|g| g.is_proper() && *f != g && f.subset_of(g))
        })
        .cloned()
        .collect()
}

/// Outcome of the principal-trace characterization on one candidate set:
/// the filter conditions on one side, and on the other whether the trace
/// on every finite boolean subalgebra is a principal filter of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub filter_ok: bool,
    pub filter_witness: Option<FilterViolation>,
    pub trace_ok: bool,
    /// Index (into the family) of the first subalgebra with a
    /// non-principal trace.
    pub trace_witness: Option<usize>,
}

impl TraceReport {
    pub fn agrees(&self) -> bool {
        self.filter_ok == self.trace_ok
    }
}

/// `S ∩ B` as a principal filter of `B`: some member is the minimum of
/// the trace and every `B`-element above it belongs to the trace.
fn trace_is_principal(base: &FiniteOml, set: &BTreeSet<usize>, fba: &[usize]) -> bool {
    let trace: Vec<usize> = fba
        .iter()
        .copied()
        .filter(|i| set.contains(i))
        .collect();
    let min = trace
        .iter()
        .copied()
        .find(|&m| trace.iter().all(|&t| base.leq_idx(m, t)));
    match min {
        None => false,
        Some(m) => fba
            .iter()
            .all(|&y| !base.leq_idx(m, y) || trace.contains(&y)),
    }
}

/// Evaluates both sides of the principal-trace characterization for an
/// arbitrary candidate set.
pub fn check_principal_trace(
    base: &Arc<FiniteOml>,
    set: &BTreeSet<usize>,
    family: &FbaFamily,
) -> TraceReport {
    let filter_result = check_sasaki_filter_indices(base, set);
    let mut trace_witness = None;
    for (i, fba) in family.fbas().iter().enumerate() {
        if !trace_is_principal(base, set, fba.indices()) {
            trace_witness = Some(i);
            break;
        }
    }
    TraceReport {
        filter_ok: filter_result.is_ok(),
        filter_witness: filter_result.err(),
        trace_ok: trace_witness.is_none(),
        trace_witness,
    }
}

/// Empirical behaviour of the embedding `x -> x↑` into SF(L).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedReport {
    pub injective: bool,
    /// `x <= y` iff `x↑ <=_SF y↑`, both directions over all pairs.
    pub order_preserving: bool,
    /// `(x ∨ y)↑ = x↑ ∩ y↑` over all pairs.
    pub join_identity: bool,
    pub meet_pairs_total: usize,
    pub meet_pairs_preserved: usize,
    /// First pair with `(x ∧ y)↑ ≠ sf_meet(x↑, y↑)`, if any.
    pub meet_counterexample: Option<(usize, usize)>,
}

impl EmbedReport {
    pub fn meet_preserving(&self) -> bool {
        self.meet_pairs_preserved == self.meet_pairs_total
    }
}

/// Measures injectivity, order preservation, the join identity, and the
/// (not asserted) meet behaviour of `x -> x↑` over all element pairs.
pub fn embed_up_properties(base: &Arc<FiniteOml>) -> EmbedReport {
    let n = base.element_count();
    let ups: Vec<SasakiFilter> = (0..n)
        .map(|i| principal_filter(base, base.element(i)))
        .collect();
    let mut injective = true;
    let mut order_preserving = true;
    let mut join_identity = true;
    let mut meet_pairs_preserved = 0;
    let mut meet_counterexample = None;
    for x in 0..n {
        for y in 0..n {
            if x != y && ups[x] == ups[y] {
                injective = false;
            }
            // Reverse inclusion: x↑ <= y↑ iff y↑ ⊆ x↑.
            if base.leq_idx(x, y) != ups[y].subset_of(&ups[x]) {
                order_preserving = false;
            }
            let join_up = principal_filter(base, base.element(base.join_idx(x, y)));
            let inter = sf_join(base, &[ups[x].clone(), ups[y].clone()]).expect("same base");
            if join_up != inter {
                join_identity = false;
            }
            let meet_up = principal_filter(base, base.element(base.meet_idx(x, y)));
            let gen = sf_meet(base, &[ups[x].clone(), ups[y].clone()]).expect("same base");
            if meet_up == gen {
                meet_pairs_preserved += 1;
            } else if meet_counterexample.is_none() {
                meet_counterexample = Some((x, y));
            }
        }
    }
    EmbedReport {
        injective,
        order_preserving,
        join_identity,
        meet_pairs_total: n * n,
        meet_pairs_preserved,
        meet_counterexample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{boolean_algebra, mo};
    use crate::measure::enumerate_fbas;

    fn arc(l: FiniteOml) -> Arc<FiniteOml> {
        Arc::new(l)
    }

    #[test]
    fn filter_condition_examples() {
        let l = arc(mo(2).unwrap());
        assert!(is_sasaki_filter(&l, &[l.top()]));
        // {a, b, top}: projections land on the members themselves.
        assert!(is_sasaki_filter(&l, &[l.element(1), l.element(3), l.top()]));
        let err = check_sasaki_filter(&l, &[l.element(1), l.element(2), l.top()]).unwrap_err();
        assert_eq!(err, FilterViolation::NotStable { x: 1, y: 2 });
        assert_eq!(
            check_sasaki_filter(&l, &[]).unwrap_err(),
            FilterViolation::Empty
        );
        assert_eq!(
            check_sasaki_filter(&l, &[l.element(1)]).unwrap_err(),
            FilterViolation::NotUpwardClosed { x: 1, y: 5 }
        );
    }

    #[test]
    fn principal_filter_examples() {
        let l = arc(mo(2).unwrap());
        assert_eq!(principal_filter(&l, l.top()).indices(), [5]);
        let up_a = principal_filter(&l, l.element(1));
        assert_eq!(up_a.indices(), [1, 5]);
        assert!(up_a.is_proper());
        let up_bot = principal_filter(&l, l.bot());
        assert_eq!(up_bot.len(), 6);
        assert!(!up_bot.is_proper());
    }

    #[test]
    fn up_sets_are_filters_and_generation_matches() {
        for l in [arc(mo(3).unwrap()), arc(boolean_algebra(3).unwrap())] {
            for x in l.elements() {
                let up = principal_filter(&l, x);
                assert!(is_sasaki_filter(&l, &up.members()));
                assert_eq!(generate_filter(&l, &[x]), up);
            }
        }
    }

    #[test]
    fn generation_examples() {
        let l = arc(mo(2).unwrap());
        let all = generate_filter(&l, &[l.element(1), l.element(2)]);
        assert_eq!(all.len(), 6);
        assert!(!all.is_proper());
        assert_eq!(generate_filter(&l, &[]).indices(), [5]);
    }

    #[test]
    fn generation_is_a_closure_operator() {
        let l = arc(mo(2).unwrap());
        let n = l.element_count();
        let subsets: Vec<Vec<Element>> = (0..1u32 << n)
            .map(|mask| {
                (0..n)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| l.element(i))
                    .collect()
            })
            .collect();
        for s in &subsets {
            let g = generate_filter(&l, s);
            for e in s {
                assert!(g.contains(*e));
            }
            assert_eq!(generate_filter(&l, &g.members()), g);
            assert!(is_sasaki_filter(&l, &g.members()));
        }
        // Monotone over nested pairs.
        for (i, s1) in subsets.iter().enumerate() {
            for (j, s2) in subsets.iter().enumerate() {
                if i & j == i {
                    assert!(generate_filter(&l, s1).subset_of(&generate_filter(&l, s2)));
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_and_bounds() {
        let b1 = arc(boolean_algebra(1).unwrap());
        assert_eq!(enumerate_filters(&b1, None).unwrap().len(), 2);

        let b2 = arc(boolean_algebra(2).unwrap());
        let sf = enumerate_filters(&b2, None).unwrap();
        let sets: Vec<_> = sf.filters().iter().map(|f| f.indices().to_vec()).collect();
        assert_eq!(sets, vec![vec![3], vec![1, 3], vec![2, 3], vec![0, 1, 2, 3]]);

        let m2 = arc(mo(2).unwrap());
        let sf = enumerate_filters(&m2, None).unwrap();
        let sets: Vec<_> = sf.filters().iter().map(|f| f.indices().to_vec()).collect();
        assert_eq!(
            sets,
            vec![
                vec![5],
                vec![1, 5],
                vec![2, 5],
                vec![3, 5],
                vec![4, 5],
                vec![1, 3, 5],
                vec![1, 4, 5],
                vec![2, 3, 5],
                vec![2, 4, 5],
                vec![0, 1, 2, 3, 4, 5],
            ]
        );
        assert_eq!(sf.greatest().indices(), [5]);
        assert_eq!(sf.least().len(), 6);
        assert_eq!(sf.filters().iter().filter(|f| f.is_proper()).count(), 9);

        let m3 = arc(mo(3).unwrap());
        let sf3 = enumerate_filters(&m3, None).unwrap();
        assert_eq!(sf3.len(), 28);
        assert_eq!(sf3.filters().iter().filter(|f| f.is_proper()).count(), 27);

        let b3 = arc(boolean_algebra(3).unwrap());
        let sfb = enumerate_filters(&b3, None).unwrap();
        assert_eq!(sfb.len(), 8);

        let big = arc(boolean_algebra(7).unwrap());
        assert_eq!(
            enumerate_filters(&big, None).unwrap_err(),
            FilterError::TooLarge { size: 128, cap: 64 }
        );
    }

    #[test]
    fn enumeration_matches_brute_force_subset_scan() {
        for l in [arc(mo(2).unwrap()), arc(boolean_algebra(2).unwrap())] {
            let n = l.element_count();
            let mut brute: Vec<Vec<usize>> = Vec::new();
            for mask in 0..1u32 << n {
                let set: BTreeSet<usize> =
                    (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                if check_sasaki_filter_indices(&l, &set).is_ok() {
                    brute.push(set.into_iter().collect());
                }
            }
            brute.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            let fast: Vec<_> = enumerate_filters(&l, None)
                .unwrap()
                .filters()
                .iter()
                .map(|f| f.indices().to_vec())
                .collect();
            assert_eq!(fast, brute);
        }
    }

    #[test]
    fn intersections_of_filters_are_filters() {
        for l in [arc(mo(2).unwrap()), arc(boolean_algebra(2).unwrap())] {
            let sf = enumerate_filters(&l, None).unwrap();
            for f in sf.filters() {
                for g in sf.filters() {
                    let j = sf_join(&l, &[f.clone(), g.clone()]).unwrap();
                    assert!(is_sasaki_filter(&l, &j.members()));
                    assert!(sf.position(&j).is_some());
                    for h in sf.filters() {
                        let t =
                            sf_join(&l, &[f.clone(), g.clone(), h.clone()]).unwrap();
                        assert!(is_sasaki_filter(&l, &t.members()));
                    }
                }
            }
        }
    }

    #[test]
    fn sf_join_and_meet_examples() {
        let l = arc(mo(2).unwrap());
        let up_a = principal_filter(&l, l.element(1));
        let up_b = principal_filter(&l, l.element(3));
        let up_a1 = principal_filter(&l, l.element(2));
        let join = sf_join(&l, &[up_a.clone(), up_b.clone()]).unwrap();
        assert_eq!(join.indices(), [5]);
        assert_eq!(join, principal_filter(&l, l.top()));
        let meet = sf_meet(&l, &[up_a.clone(), up_a1]).unwrap();
        assert_eq!(meet.len(), 6);
        assert_eq!(sf_join(&l, &[up_a.clone(), up_a.clone()]).unwrap(), up_a);
        // Empty-family conventions: least and greatest of SF.
        assert_eq!(sf_join(&l, &[]).unwrap().len(), 6);
        assert_eq!(sf_meet(&l, &[]).unwrap().indices(), [5]);

        let other = arc(mo(2).unwrap());
        let foreign = principal_filter(&other, other.element(1));
        assert_eq!(
            sf_join(&l, &[foreign]).unwrap_err(),
            FilterError::BaseMismatch
        );
    }

    #[test]
    fn sf_meet_agrees_with_abstract_greatest_lower_bound() {
        // The abstract meet is the intersection of every filter lying
        // below both arguments in reverse inclusion, i.e. containing both.
        for l in [arc(mo(2).unwrap()), arc(boolean_algebra(2).unwrap())] {
            let sf = enumerate_filters(&l, None).unwrap();
            for f in sf.filters() {
                for g in sf.filters() {
                    let constructive = sf_meet(&l, &[f.clone(), g.clone()]).unwrap();
                    let bounds: Vec<SasakiFilter> = sf
                        .filters()
                        .iter()
                        .filter(|h| f.subset_of(h) && g.subset_of(h))
                        .cloned()
                        .collect();
                    let abstract_meet = sf_join(&l, &bounds).unwrap();
                    assert_eq!(constructive, abstract_meet);
                }
            }
        }
    }

    #[test]
    fn atoms_of_sf() {
        let l = arc(mo(2).unwrap());
        let sf = enumerate_filters(&l, None).unwrap();
        let atoms = sf_atoms(&sf);
        let sets: Vec<_> = atoms.iter().map(|f| f.indices().to_vec()).collect();
        assert_eq!(
            sets,
            vec![vec![1, 3, 5], vec![1, 4, 5], vec![2, 3, 5], vec![2, 4, 5]]
        );

        let b2 = arc(boolean_algebra(2).unwrap());
        let sfb = enumerate_filters(&b2, None).unwrap();
        let sets: Vec<_> = sf_atoms(&sfb).iter().map(|f| f.indices().to_vec()).collect();
        assert_eq!(sets, vec![vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn every_proper_filter_extends_to_an_atom() {
        for l in [arc(mo(3).unwrap()), arc(boolean_algebra(3).unwrap())] {
            let sf = enumerate_filters(&l, None).unwrap();
            let atoms = sf_atoms(&sf);
            for f in sf.filters().iter().filter(|f| f.is_proper()) {
                assert!(atoms.iter().any(|a| f.subset_of(a)));
            }
        }
    }

    #[test]
    fn choice_filters_are_the_atoms_of_mo() {
        for k in 1..=3usize {
            let l = arc(mo(k).unwrap());
            let sf = enumerate_filters(&l, None).unwrap();
            let atoms = sf_atoms(&sf);
            assert_eq!(atoms.len(), 1 << k);
            for f in &atoms {
                for i in 1..=k {
                    let has = [2 * i - 1, 2 * i]
                        .iter()
                        .filter(|&&x| f.indices().contains(&x))
                        .count();
                    assert_eq!(has, 1, "exactly one of each complementary pair");
                }
                assert_eq!(f.len(), k + 1);
            }
        }
    }

    #[test]
    fn principal_trace_characterization_on_mo2() {
        let l = arc(mo(2).unwrap());
        let family = enumerate_fbas(&l, None).unwrap();
        let n = l.element_count();
        for mask in 0..1u32 << n {
            let set: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let report = check_principal_trace(&l, &set, &family);
            assert!(
                report.agrees(),
                "set {set:?}: filter_ok={} trace_ok={}",
                report.filter_ok,
                report.trace_ok
            );
        }
    }

    #[test]
    fn embedding_report_shapes() {
        let m3 = arc(mo(3).unwrap());
        let r = embed_up_properties(&m3);
        assert!(r.injective);
        assert!(r.order_preserving);
        assert!(r.join_identity);
        // Meet preservation fails on a lantern: two atoms from different
        // pairs generate a choice filter, not the whole lattice.
        assert!(!r.meet_preserving());
        assert_eq!(r.meet_counterexample, Some((1, 3)));

        let b3 = arc(boolean_algebra(3).unwrap());
        let r = embed_up_properties(&b3);
        assert!(r.injective && r.order_preserving && r.join_identity);
        assert!(r.meet_preserving());
    }
}
