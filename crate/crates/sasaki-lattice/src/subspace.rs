//! Exact subspace lattices over the rationals and Gaussian rationals.
//!
//! A [`Subspace`] is stored as the reduced row-echelon basis of its row
//! span; that form is unique, so structural equality decides subspace
//! equality. Meet, join, and orthocomplement are computed by exact
//! elimination; the Sasaki projection `(x ∨ y⊥) ∧ y` has an independent
//! cross-check as the span of orthogonal projections of basis vectors.
//!
//! The module also hosts the concrete constructions this library exists
//! to check at desk scale: a non-principal Sasaki filter built from
//! pairwise non-orthogonal vectors, a saturation probe for the
//! atom-forcing behaviour of filters containing an atom, and the
//! two-dimensional choice-filter test.

use crate::scalar::{cmp_scalar, conj, format_row, int, parse_scalar, Rat, Scalar, ScalarParseError};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("construction requires dimension >= 3, got {dim}")]
    DimTooSmall { dim: usize },
    #[error("precondition violated: {detail}")]
    PrecondViolated { detail: String },
    #[error("malformed pair list: {detail}")]
    MalformedPairs { detail: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ScalarParseError },
    #[error("no vectors in input")]
    EmptyInput,
}

/// A subspace of `Q^d` or `Q(i)^d` in canonical reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    dim: usize,
    rows: Vec<Vec<Scalar>>,
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.rows.len().cmp(&other.rows.len()))
            .then_with(|| {
                for (a, b) in self.rows.iter().zip(&other.rows) {
                    for (x, y) in a.iter().zip(b) {
                        let c = cmp_scalar(x, y);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                }
                Ordering::Equal
            })
    }
}

/// In-place Gauss-Jordan elimination to reduced row-echelon form with
/// zero rows dropped. Exact; pivots are normalized to one.
fn rref(mut rows: Vec<Vec<Scalar>>, dim: usize) -> Vec<Vec<Scalar>> {
    let mut pivot_row = 0;
    for col in 0..dim {
        let Some(src) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let p = rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x = x.clone() / p.clone();
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..dim {
                    let sub = f.clone() * rows[pivot_row][c].clone();
                    rows[r][c] = rows[r][c].clone() - sub;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

/// Conjugate-linear-in-the-first-argument inner product.
pub fn inner(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter()
        .zip(v)
        .fold(Scalar::zero(), |acc, (a, b)| acc + conj(a) * b.clone())
}

impl Subspace {
    /// Canonicalizes the span of the given vectors.
    pub fn new(dim: usize, vectors: &[Vec<Scalar>]) -> Result<Subspace, SubspaceError> {
        for v in vectors {
            if v.len() != dim {
                return Err(SubspaceError::DimMismatch { expected: dim, got: v.len() });
            }
        }
        Ok(Subspace { dim, rows: rref(vectors.to_vec(), dim) })
    }

    pub fn zero(dim: usize) -> Subspace {
        Subspace { dim, rows: Vec::new() }
    }

    pub fn full(dim: usize) -> Subspace {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        Subspace { dim, rows }
    }

    pub fn span_of(dim: usize, vector: &[Scalar]) -> Result<Subspace, SubspaceError> {
        Subspace::new(dim, &[vector.to_vec()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn is_zero_space(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn formatted_rows(&self) -> Vec<String> {
        self.rows.iter().map(|r| format_row(r)).collect()
    }

    /// `self <= other` in the subspace order (containment).
    pub fn leq(&self, other: &Subspace) -> Result<bool, SubspaceError> {
        check_dims(self, other)?;
        let mut stacked = other.rows.clone();
        stacked.extend(self.rows.iter().cloned());
        Ok(rref(stacked, self.dim).len() == other.rank())
    }
}

fn check_dims(a: &Subspace, b: &Subspace) -> Result<(), SubspaceError> {
    if a.dim != b.dim {
        return Err(SubspaceError::DimMismatch { expected: a.dim, got: b.dim });
    }
    Ok(())
}

/// Join: span of the stacked bases.
pub fn sub_join(a: &Subspace, b: &Subspace) -> Result<Subspace, SubspaceError> {
    check_dims(a, b)?;
    let mut rows = a.rows.clone();
    rows.extend(b.rows.iter().cloned());
    Ok(Subspace { dim: a.dim, rows: rref(rows, a.dim) })
}

/// Null space of the homogeneous system with the given constraint rows,
/// via the free columns of the reduced form.
fn nullspace(constraints: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    let r = rref(constraints.to_vec(), cols);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    for (i, row) in r.iter().enumerate() {
        if let Some(c) = row.iter().position(|x| !x.is_zero()) {
            pivot_of_col[c] = Some(i);
        }
    }
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_of_col[f].is_some() {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[f] = Scalar::one();
        for (c, pr) in pivot_of_col.iter().enumerate() {
            if let Some(i) = pr {
                v[c] = -r[*i][f].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Orthocomplement: null space of the conjugated basis rows.
pub fn sub_ortho(a: &Subspace) -> Subspace {
    let constraints: Vec<Vec<Scalar>> = a
        .rows
        .iter()
        .map(|row| row.iter().map(conj).collect())
        .collect();
    Subspace { dim: a.dim, rows: rref(nullspace(&constraints, a.dim), a.dim) }
}

/// Meet by the kernel method: solve for coefficient pairs `(α, β)` with
/// `Σ α_i a_i = Σ β_j b_j`; each solution yields an intersection vector.
pub fn sub_meet(a: &Subspace, b: &Subspace) -> Result<Subspace, SubspaceError> {
    check_dims(a, b)?;
    let (ra, rb) = (a.rank(), b.rank());
    if ra == 0 || rb == 0 {
        return Ok(Subspace::zero(a.dim));
    }
    // One constraint row per ambient coordinate.
    let mut constraints = Vec::with_capacity(a.dim);
    for k in 0..a.dim {
        let mut row = Vec::with_capacity(ra + rb);
        for i in 0..ra {
            row.push(a.rows[i][k].clone());
        }
        for j in 0..rb {
            row.push(-b.rows[j][k].clone());
        }
        constraints.push(row);
    }
    let combos = nullspace(&constraints, ra + rb);
    let vectors: Vec<Vec<Scalar>> = combos
        .iter()
        .map(|alpha_beta| {
            let mut v = vec![Scalar::zero(); a.dim];
            for (i, coef) in alpha_beta[..ra].iter().enumerate() {
                for k in 0..a.dim {
                    v[k] = v[k].clone() + coef.clone() * a.rows[i][k].clone();
                }
            }
            v
        })
        .collect();
    Ok(Subspace { dim: a.dim, rows: rref(vectors, a.dim) })
}

/// Sasaki projection by the lattice formula `(x ∨ y⊥) ∧ y`.
pub fn sub_sasaki(x: &Subspace, y: &Subspace) -> Result<Subspace, SubspaceError> {
    check_dims(x, y)?;
    sub_meet(&sub_join(x, &sub_ortho(y))?, y)
}

/// Orthogonal (unnormalized) basis of the row span, by Gram-Schmidt.
fn orthogonal_basis(rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for v in rows {
        let mut g = v.clone();
        for prev in &basis {
            let coef = inner(prev, &g) / inner(prev, prev);
            for k in 0..g.len() {
                g[k] = g[k].clone() - coef.clone() * prev[k].clone();
            }
        }
        if g.iter().any(|x| !x.is_zero()) {
            basis.push(g);
        }
    }
    basis
}

/// Sasaki projection computed the second way: the span of the orthogonal
/// projections onto `y` of `x`'s basis vectors. Used as an independent
/// cross-check of [`sub_sasaki`].
pub fn sasaki_by_projection(x: &Subspace, y: &Subspace) -> Result<Subspace, SubspaceError> {
    check_dims(x, y)?;
    let ortho = orthogonal_basis(&y.rows);
    let images: Vec<Vec<Scalar>> = x
        .rows
        .iter()
        .map(|v| {
            let mut img = vec![Scalar::zero(); x.dim];
            for g in &ortho {
                let coef = inner(g, v) / inner(g, g);
                for k in 0..x.dim {
                    img[k] = img[k].clone() + coef.clone() * g[k].clone();
                }
            }
            img
        })
        .collect();
    Ok(Subspace { dim: x.dim, rows: rref(images, x.dim) })
}

/// Report for the non-principal filter construction in dimension `d`:
/// `f_0 = e_0`, `f_i = e_0 + e_i` (pairwise non-orthogonal), and the
/// coatoms `G_i = (span f_i)⊥`. The family `{full} ∪ {G_i}` is a proper
/// Sasaki filter whose members have zero common meet, so no ray lies
/// below all of them and the filter is not principal.
#[derive(Debug, Clone)]
pub struct NonprincipalReport {
    pub dim: usize,
    pub f_vectors: Vec<Vec<Scalar>>,
    pub coatoms: Vec<Subspace>,
    /// Inner products `⟨f_i, f_j⟩` for `i < j` (all must be nonzero).
    pub gram_offdiag: Vec<Scalar>,
    pub pairwise_nonorthogonal: bool,
    /// `G_i & G_j = G_j` for every `i != j`.
    pub sasaki_absorbs: bool,
    pub meet_of_all: Subspace,
    pub meet_is_zero: bool,
}

impl NonprincipalReport {
    pub fn filter_ok(&self) -> bool {
        self.pairwise_nonorthogonal && self.sasaki_absorbs
    }

    pub fn ok(&self) -> bool {
        self.filter_ok() && self.meet_is_zero
    }
}

/// Builds the construction witnessing a non-principal partial state in
/// dimension `d >= 3`. Vectors are kept unnormalized; spans and
/// orthogonality are scale-invariant, so the rational arithmetic is exact.
pub fn nonprincipal_construction(d: usize) -> Result<NonprincipalReport, SubspaceError> {
    if d < 3 {
        return Err(SubspaceError::DimTooSmall { dim: d });
    }
    let mut f_vectors = Vec::with_capacity(d);
    let e = |k: usize| -> Vec<Scalar> {
        (0..d)
            .map(|j| if j == k { Scalar::one() } else { Scalar::zero() })
            .collect()
    };
    f_vectors.push(e(0));
    for i in 1..d {
        let mut f = e(0);
        f[i] = Scalar::one();
        f_vectors.push(f);
    }
    let mut gram_offdiag = Vec::new();
    let mut pairwise_nonorthogonal = true;
    for i in 0..d {
        for j in i + 1..d {
            let g = inner(&f_vectors[i], &f_vectors[j]);
            if g.is_zero() {
                pairwise_nonorthogonal = false;
            }
            gram_offdiag.push(g);
        }
    }
    let coatoms: Vec<Subspace> = f_vectors
        .iter()
        .map(|f| sub_ortho(&Subspace::span_of(d, f).expect("basis vector")))
        .collect();
    let mut sasaki_absorbs = true;
    for (i, gi) in coatoms.iter().enumerate() {
        for (j, gj) in coatoms.iter().enumerate() {
            if i != j && sub_sasaki(gi, gj)? != *gj {
                sasaki_absorbs = false;
            }
        }
    }
    let mut meet_of_all = Subspace::full(d);
    for g in &coatoms {
        meet_of_all = sub_meet(&meet_of_all, g)?;
    }
    let meet_is_zero = meet_of_all.is_zero_space();
    Ok(NonprincipalReport {
        dim: d,
        f_vectors,
        coatoms,
        gram_offdiag,
        pairwise_nonorthogonal,
        sasaki_absorbs,
        meet_of_all,
        meet_is_zero,
    })
}

/// Outcome of the atom-forcing saturation probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// The zero space appeared after this many saturation rounds.
    ReachedBot { rounds: usize },
    /// No zero space within the round cap (`saturated` reports whether a
    /// fixpoint was reached before the cap, in which case more rounds
    /// cannot change the answer).
    Inconclusive { rounds: usize, family_size: usize, saturated: bool },
}

/// Default number of saturation rounds for the probe.
pub const DEFAULT_PROBE_DEPTH: usize = 16;

/// Saturates `{a, x}` under Sasaki projections and pairwise joins, up to
/// `depth_cap` rounds, watching for the zero space. `a` must be a ray not
/// contained in `x`, in ambient dimension at least 3.
pub fn probe_atom_forcing(
    a: &Subspace,
    x: &Subspace,
    depth_cap: usize,
) -> Result<ProbeOutcome, SubspaceError> {
    check_dims(a, x)?;
    if a.ambient_dim() < 3 {
        return Err(SubspaceError::PrecondViolated {
            detail: format!("ambient dimension {} < 3", a.ambient_dim()),
        });
    }
    if a.rank() != 1 {
        return Err(SubspaceError::PrecondViolated {
            detail: format!("probe atom must have rank 1, got {}", a.rank()),
        });
    }
    if a.leq(x)? {
        return Err(SubspaceError::PrecondViolated {
            detail: "atom is contained in the other subspace".to_string(),
        });
    }
    let mut family: Vec<Subspace> = vec![a.clone(), x.clone()];
    family.sort();
    family.dedup();
    for round in 1..=depth_cap {
        let mut fresh: Vec<Subspace> = Vec::new();
        for u in &family {
            for v in &family {
                let s = sub_sasaki(u, v)?;
                if family.binary_search(&s).is_err() {
                    fresh.push(s);
                }
                let j = sub_join(u, v)?;
                if family.binary_search(&j).is_err() {
                    fresh.push(j);
                }
            }
        }
        fresh.sort();
        fresh.dedup();
        if fresh.is_empty() {
            return Ok(ProbeOutcome::Inconclusive {
                rounds: round - 1,
                family_size: family.len(),
                saturated: true,
            });
        }
        family.extend(fresh);
        family.sort();
        family.dedup();
        if family.iter().any(Subspace::is_zero_space) {
            return Ok(ProbeOutcome::ReachedBot { rounds: round });
        }
    }
    Ok(ProbeOutcome::Inconclusive {
        rounds: depth_cap,
        family_size: family.len(),
        saturated: false,
    })
}

/// Checks a one-per-pair choice of rays in a two-dimensional space: the
/// chosen rays together with the full space must form a Sasaki filter,
/// which holds exactly when no two distinct chosen rays are orthogonal.
pub fn dim2_choice_check(
    pairs: &[(Subspace, Subspace)],
    choice: &[Subspace],
) -> Result<bool, SubspaceError> {
    if pairs.is_empty() {
        return Err(SubspaceError::MalformedPairs { detail: "no pairs given".into() });
    }
    if choice.len() != pairs.len() {
        return Err(SubspaceError::MalformedPairs {
            detail: format!("{} choices for {} pairs", choice.len(), pairs.len()),
        });
    }
    let dim = pairs[0].0.ambient_dim();
    if dim != 2 {
        return Err(SubspaceError::MalformedPairs {
            detail: format!("ambient dimension {dim} is not 2"),
        });
    }
    for (i, (p, q)) in pairs.iter().enumerate() {
        if p.ambient_dim() != dim || q.ambient_dim() != dim {
            return Err(SubspaceError::MalformedPairs {
                detail: format!("pair {i} has mismatched ambient dimension"),
            });
        }
        if p.rank() != 1 || q.rank() != 1 {
            return Err(SubspaceError::MalformedPairs {
                detail: format!("pair {i} is not a pair of rays"),
            });
        }
        if sub_ortho(p) != *q {
            return Err(SubspaceError::MalformedPairs {
                detail: format!("pair {i} is not mutually orthogonal"),
            });
        }
        if choice[i] != *p && choice[i] != *q {
            return Err(SubspaceError::MalformedPairs {
                detail: format!("choice {i} is not a member of its pair"),
            });
        }
    }
    // The candidate set: chosen rays plus the full space. Upward closure
    // is automatic (the up-set of a ray in dimension 2 is itself and the
    // full space); stability reduces to membership of every projection.
    let mut members: Vec<Subspace> = choice.to_vec();
    members.push(Subspace::full(2));
    members.sort();
    members.dedup();
    for u in &members {
        for v in &members {
            let s = sub_sasaki(u, v)?;
            if members.binary_search(&s).is_err() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Result of the randomized dual-route Sasaki comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialsReport {
    pub trials: usize,
    pub mismatches: usize,
    pub first_mismatch_trial: Option<usize>,
}

impl TrialsReport {
    pub fn all_equal(&self) -> bool {
        self.mismatches == 0
    }
}

fn random_subspace(rng: &mut ChaCha8Rng, dim: usize) -> Subspace {
    let rank = rng.gen_range(0..=dim);
    let vectors: Vec<Vec<Scalar>> = (0..rank)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let num = rng.gen_range(-5i64..=5);
                    let den = rng.gen_range(1i64..=3);
                    Scalar::new(Rat::new(num.into(), den.into()), Rat::zero())
                })
                .collect()
        })
        .collect();
    Subspace::new(dim, &vectors).expect("dimensions consistent by construction")
}

/// Runs seeded random trials comparing the lattice-formula Sasaki
/// projection with the orthogonal-projection route, over dimensions 2-4.
/// Trials derive independent per-index seeds, so the outcome does not
/// depend on the parallel schedule.
pub fn sasaki_projection_trials(count: usize, seed: u64) -> TrialsReport {
    let outcomes: Vec<bool> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let dim = rng.gen_range(2..=4);
            let x = random_subspace(&mut rng, dim);
            let y = random_subspace(&mut rng, dim);
            sub_sasaki(&x, &y).expect("same ambient dimension")
                == sasaki_by_projection(&x, &y).expect("same ambient dimension")
        })
        .collect();
    let mismatches = outcomes.iter().filter(|&&ok| !ok).count();
    TrialsReport {
        trials: count,
        mismatches,
        first_mismatch_trial: outcomes.iter().position(|&ok| !ok),
    }
}

/// Parses whitespace-separated scalar entries, one vector per line, with
/// `#` comments. Blank lines split the input into blocks (one subspace
/// per block).
pub fn parse_vector_blocks(text: &str) -> Result<Vec<Vec<Vec<Scalar>>>, SubspaceError> {
    let mut blocks: Vec<Vec<Vec<Scalar>>> = Vec::new();
    let mut current: Vec<Vec<Scalar>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        let v: Result<Vec<Scalar>, SubspaceError> = line
            .split_whitespace()
            .map(|tok| {
                parse_scalar(tok)
                    .map_err(|source| SubspaceError::Parse { line: lineno + 1, source })
            })
            .collect();
        current.push(v?);
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    if blocks.is_empty() {
        return Err(SubspaceError::EmptyInput);
    }
    Ok(blocks)
}

/// Reads one subspace from a whole file (all non-blank lines form the
/// basis), validating a common vector length.
pub fn parse_subspace(text: &str) -> Result<Subspace, SubspaceError> {
    let blocks = parse_vector_blocks(text)?;
    let vectors: Vec<Vec<Scalar>> = blocks.into_iter().flatten().collect();
    let dim = vectors[0].len();
    Subspace::new(dim, &vectors)
}

/// Convenience for integer test data.
pub fn span_ints(dim: usize, rows: &[&[i64]]) -> Subspace {
    let vectors: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect();
    Subspace::new(dim, &vectors).expect("consistent test data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gaussian, rational};

    fn line(dim: usize, v: &[i64]) -> Subspace {
        span_ints(dim, &[v])
    }

    #[test]
    fn rref_is_canonical() {
        let a = span_ints(2, &[&[2, 4], &[1, 2]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(a, span_ints(2, &[&[1, 2]]));
        let b = span_ints(3, &[&[0, 1, 1], &[1, 0, 0]]);
        let c = span_ints(3, &[&[1, 1, 1], &[1, 0, 0]]);
        assert_eq!(b, c);
    }

    #[test]
    fn join_meet_ortho_examples() {
        let ex = line(3, &[1, 0, 0]);
        let ey = line(3, &[0, 1, 0]);
        let j = sub_join(&ex, &ey).unwrap();
        assert_eq!(j, span_ints(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(sub_ortho(&Subspace::full(3)), Subspace::zero(3));
        assert_eq!(sub_ortho(&Subspace::zero(3)), Subspace::full(3));
        assert_eq!(sub_meet(&ex, &ey).unwrap(), Subspace::zero(3));
        let p = span_ints(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(sub_meet(&p, &j).unwrap(), p);
        assert_eq!(
            sub_meet(&p, &span_ints(3, &[&[0, 1, 0], &[0, 0, 1]])).unwrap(),
            ey
        );
        assert!(matches!(
            sub_join(&ex, &line(2, &[1, 0])),
            Err(SubspaceError::DimMismatch { .. })
        ));
    }

    #[test]
    fn ortho_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let dim = rng.gen_range(2..=4);
            let a = random_subspace(&mut rng, dim);
            let o = sub_ortho(&a);
            assert_eq!(sub_ortho(&o), a);
            assert_eq!(a.rank() + o.rank(), dim);
            assert_eq!(sub_meet(&a, &o).unwrap(), Subspace::zero(dim));
            assert_eq!(sub_join(&a, &o).unwrap(), Subspace::full(dim));
            for v in a.basis() {
                for w in o.basis() {
                    assert!(inner(v, w).is_zero());
                }
            }
        }
    }

    #[test]
    fn meet_agrees_with_de_morgan_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let dim = rng.gen_range(2..=4);
            let a = random_subspace(&mut rng, dim);
            let b = random_subspace(&mut rng, dim);
            let direct = sub_meet(&a, &b).unwrap();
            let dual = sub_ortho(&sub_join(&sub_ortho(&a), &sub_ortho(&b)).unwrap());
            assert_eq!(direct, dual);
        }
    }

    #[test]
    fn orthomodular_law_on_nested_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..60 {
            let dim = rng.gen_range(2..=4);
            let y = random_subspace(&mut rng, dim);
            let x = sub_meet(&y, &random_subspace(&mut rng, dim)).unwrap();
            assert!(x.leq(&y).unwrap());
            let recomposed =
                sub_join(&x, &sub_meet(&y, &sub_ortho(&x)).unwrap()).unwrap();
            assert_eq!(recomposed, y);
        }
    }

    #[test]
    fn sasaki_examples() {
        let x = line(2, &[1, 1]);
        let y = line(2, &[1, 0]);
        assert_eq!(sub_sasaki(&x, &y).unwrap(), y);
        assert_eq!(sasaki_by_projection(&x, &y).unwrap(), y);
        let any = span_ints(3, &[&[1, 2, 3]]);
        assert_eq!(sub_sasaki(&any, &Subspace::full(3)).unwrap(), any);
        assert_eq!(
            sub_sasaki(&any, &sub_ortho(&any)).unwrap(),
            Subspace::zero(3)
        );
    }

    #[test]
    fn gaussian_arithmetic_is_exact() {
        let v = vec![gaussian(rational(1, 1), rational(0, 1)), gaussian(rational(0, 1), rational(1, 1))];
        let s = Subspace::new(2, &[v.clone()]).unwrap();
        let o = sub_ortho(&s);
        assert_eq!(o.rank(), 1);
        assert!(inner(&v, &o.basis()[0]).is_zero());
        assert_eq!(sub_ortho(&o), s);
        assert_eq!(sub_meet(&s, &o).unwrap(), Subspace::zero(2));
        assert_eq!(sub_join(&s, &o).unwrap(), Subspace::full(2));
    }

    #[test]
    fn dual_route_sasaki_sample() {
        let r = sasaki_projection_trials(200, 0xA5A5);
        assert!(r.all_equal(), "{r:?}");
        // Determinism across runs.
        assert_eq!(r, sasaki_projection_trials(200, 0xA5A5));
    }

    #[test]
    fn nonprincipal_dimension_three_exactly() {
        let r = nonprincipal_construction(3).unwrap();
        assert!(r.ok());
        assert_eq!(r.coatoms[0], span_ints(3, &[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(r.coatoms[1], span_ints(3, &[&[1, -1, 0], &[0, 0, 1]]));
        assert_eq!(r.coatoms[2], span_ints(3, &[&[1, 0, -1], &[0, 1, 0]]));
        // Unnormalized inner products: 1 for every pair.
        for g in &r.gram_offdiag {
            assert_eq!(*g, Scalar::one());
        }
        assert!(r.meet_of_all.is_zero_space());
    }

    #[test]
    fn nonprincipal_higher_dimensions_and_bounds() {
        for d in [4, 5] {
            let r = nonprincipal_construction(d).unwrap();
            assert!(r.ok(), "dimension {d}: {r:?}");
            assert_eq!(r.coatoms.len(), d);
            for g in &r.coatoms {
                assert_eq!(g.rank(), d - 1);
            }
        }
        assert!(matches!(
            nonprincipal_construction(2),
            Err(SubspaceError::DimTooSmall { dim: 2 })
        ));
    }

    #[test]
    fn probe_orthogonal_pair_reaches_bottom_immediately() {
        let a = line(3, &[1, 0, 0]);
        let x = line(3, &[0, 1, 0]);
        assert_eq!(
            probe_atom_forcing(&a, &x, DEFAULT_PROBE_DEPTH).unwrap(),
            ProbeOutcome::ReachedBot { rounds: 1 }
        );
    }

    #[test]
    fn probe_non_orthogonal_lines_saturate_without_bottom() {
        // The family {a, x} closes at {a, x, a ∨ x}: each projection of
        // one member onto another is already a member, so the saturation
        // is a fixpoint and the probe reports it cannot decide.
        let a = line(3, &[1, 0, 0]);
        let x = line(3, &[1, 1, 0]);
        let outcome = probe_atom_forcing(&a, &x, DEFAULT_PROBE_DEPTH).unwrap();
        assert_eq!(
            outcome,
            ProbeOutcome::Inconclusive { rounds: 1, family_size: 3, saturated: true }
        );
    }

    #[test]
    fn probe_ray_against_plane_saturates_small() {
        let a = line(3, &[1, 1, 1]);
        let x = span_ints(3, &[&[1, 0, 0], &[0, 1, 0]]);
        match probe_atom_forcing(&a, &x, DEFAULT_PROBE_DEPTH).unwrap() {
            ProbeOutcome::Inconclusive { saturated, family_size, .. } => {
                assert!(saturated);
                assert!(family_size <= 6, "family stays tiny, got {family_size}");
            }
            other => panic!("expected saturation, got {other:?}"),
        }
    }

    #[test]
    fn probe_preconditions() {
        let a = line(3, &[1, 0, 0]);
        assert!(matches!(
            probe_atom_forcing(&a, &Subspace::full(3), 4),
            Err(SubspaceError::PrecondViolated { .. })
        ));
        let plane = span_ints(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(matches!(
            probe_atom_forcing(&plane, &a, 4),
            Err(SubspaceError::PrecondViolated { .. })
        ));
        let a2 = line(2, &[1, 0]);
        assert!(matches!(
            probe_atom_forcing(&a2, &line(2, &[1, 1]), 4),
            Err(SubspaceError::PrecondViolated { .. })
        ));
        // Depth zero performs no rounds.
        assert_eq!(
            probe_atom_forcing(&a, &line(3, &[1, 1, 0]), 0).unwrap(),
            ProbeOutcome::Inconclusive { rounds: 0, family_size: 2, saturated: false }
        );
    }

    #[test]
    fn dim2_choice_examples() {
        let e0 = line(2, &[1, 0]);
        let e1 = line(2, &[0, 1]);
        let d0 = line(2, &[1, 1]);
        let d1 = line(2, &[1, -1]);
        assert!(dim2_choice_check(&[(e0.clone(), e1.clone())], &[e0.clone()]).unwrap());
        assert!(dim2_choice_check(
            &[(e0.clone(), e1.clone()), (d0.clone(), d1.clone())],
            &[e0.clone(), d0.clone()],
        )
        .unwrap());
        // Taking both members of one pair is never a filter.
        assert!(!dim2_choice_check(
            &[(e0.clone(), e1.clone()), (e1.clone(), e0.clone())],
            &[e0.clone(), e1.clone()],
        )
        .unwrap());
        assert!(matches!(
            dim2_choice_check(&[(e0.clone(), d0.clone())], &[e0.clone()]),
            Err(SubspaceError::MalformedPairs { .. })
        ));
        assert!(matches!(
            dim2_choice_check(&[(e0.clone(), e1.clone())], &[d1.clone()]),
            Err(SubspaceError::MalformedPairs { .. })
        ));
    }

    #[test]
    fn closed_families_validate_as_orthomodular_lattices() {
        // Close a small family of subspaces of Q^3 under meet, join, and
        // ortho, then feed the finite containment table to the validator.
        let seeds = vec![line(3, &[1, 0, 0]), line(3, &[1, 1, 1])];
        let mut family: Vec<Subspace> = vec![Subspace::zero(3), Subspace::full(3)];
        family.extend(seeds);
        family.sort();
        family.dedup();
        for _ in 0..6 {
            let mut fresh = Vec::new();
            for a in &family {
                for b in &family {
                    for s in [
                        sub_meet(a, b).unwrap(),
                        sub_join(a, b).unwrap(),
                        sub_ortho(a),
                    ] {
                        if family.binary_search(&s).is_err() {
                            fresh.push(s);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            family.extend(fresh);
            family.sort();
            family.dedup();
        }
        assert_eq!(family.len(), 12, "closure of two generic lines");
        let n = family.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if family[i].leq(&family[j]).unwrap() {
                    pairs.push((i, j));
                }
            }
        }
        let ortho = family
            .iter()
            .map(|s| {
                family
                    .iter()
                    .position(|t| *t == sub_ortho(s))
                    .expect("closure contains complements")
            })
            .collect();
        let raw = crate::oml::RawOml { n, leq_pairs: pairs, ortho, labels: None };
        assert!(crate::oml::verify_oml(raw).is_ok());
    }

    #[test]
    fn parsing_vectors_and_blocks() {
        let text = "1 0 0\n0 1/2 0   # comment\n\n0 0 1\n";
        let blocks = parse_vector_blocks(text).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].len(), 2);
        assert_eq!(blocks[0][1][1], gaussian(rational(1, 2), rational(0, 1)));
        let s = parse_subspace("1 0 0\n1 1 0\n").unwrap();
        assert_eq!(s, span_ints(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert!(matches!(
            parse_vector_blocks("abc\n"),
            Err(SubspaceError::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_vector_blocks("# only\n"), Err(SubspaceError::EmptyInput)));
    }
}
