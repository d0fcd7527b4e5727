//! Finite orthomodular lattices.
//!
//! A [`FiniteOml`] is a validated bounded lattice with an orthocomplement:
//! an involutive, order-reversing map `x -> x'` with `x /\ x' = 0` and
//! `x \/ x' = 1`, satisfying the orthomodular law
//!
//! ```text
//! x <= y   implies   y = x \/ (y /\ x')
//! ```
//!
//! Values of this type are only produced by [`verify_oml`], which checks the
//! axioms exhaustively and reports the first violation with a witness, so
//! downstream code may assume every lattice operation is total.
//!
//! The order is stored as a dense bit matrix. Meets and joins are found by
//! scanning bounds; for larger lattices the full operation tables are kept
//! from validation time.

use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

/// Lattices at or above this size keep their meet/join tables.
const TABLE_MIN: usize = 16;

/// Hard ceiling on lattice size; keeps validation at desk scale.
pub const MAX_ELEMENTS: usize = 512;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Handle to an element of one particular lattice.
///
/// Elements remember which lattice they belong to; using an element with a
/// different lattice is a programming error and panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    lattice: u64,
    index: usize,
}

impl Element {
    pub fn index(&self) -> usize {
        self.index
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosetDefect {
    Antisymmetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Meet,
    Join,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthoDefect {
    NotAPermutation,
    NotInvolutive,
    NotAntitone,
    MeetNotBot,
    JoinNotTop,
}

/// First axiom violation found by [`verify_oml`], with element witnesses.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmlViolation {
    #[error("inconsistent input tables: {detail}")]
    BadDimensions { detail: String },
    #[error("not a poset ({defect:?}): elements {x} and {y}")]
    NotAPoset { defect: PosetDefect, x: usize, y: usize },
    #[error("not a lattice: {kind:?} of {x} and {y} does not exist")]
    NotALattice { kind: BoundKind, x: usize, y: usize },
    #[error("trivial lattice: bottom equals top")]
    TrivialLattice,
    #[error("not an orthocomplementation ({defect:?}) at {x}{}", y.map(|v| format!(", {v}")).unwrap_or_default())]
    NotAnOrthocomplementation {
        defect: OrthoDefect,
        x: usize,
        y: Option<usize>,
    },
    #[error("orthomodular law fails: x = {x} <= y = {y} but x \\/ (y /\\ x') != y")]
    NotOrthomodular { x: usize, y: usize },
}

/// Dense square bit matrix; row-major, 64 entries per word.
#[derive(Clone, PartialEq, Eq)]
struct BitMat {
    n: usize,
    w: usize,
    bits: Vec<u64>,
}

impl BitMat {
    fn new(n: usize) -> Self {
        let w = n.div_ceil(64);
        BitMat { n, w, bits: vec![0; n * w] }
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.w + j / 64] |= 1u64 << (j % 64);
    }

    fn test(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.w + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.w..(i + 1) * self.w]
    }

    fn or_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.w, dst * self.w);
        for k in 0..self.w {
            let v = self.bits[s + k];
            self.bits[d + k] |= v;
        }
    }

    fn transitive_close(&mut self) {
        for k in 0..self.n {
            for i in 0..self.n {
                if self.test(i, k) {
                    self.or_row_into(k, i);
                }
            }
        }
    }

    fn transpose(&self) -> BitMat {
        let mut t = BitMat::new(self.n);
        for i in 0..self.n {
            for j in bits_of(self.row(i), self.n) {
                t.set(j, i);
            }
        }
        t
    }
}

fn bits_of(words: &[u64], n: usize) -> impl Iterator<Item = usize> + '_ {
    words
        .iter()
        .enumerate()
        .flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
        .filter(move |&i| i < n)
}

fn and_rows(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// Unvalidated order data. `leq_pairs` may list covering pairs or any
/// relation whose reflexive-transitive closure is the intended order.
#[derive(Debug, Clone)]
pub struct RawOml {
    pub n: usize,
    pub leq_pairs: Vec<(usize, usize)>,
    pub ortho: Vec<usize>,
    pub labels: Option<Vec<String>>,
}

/// A validated finite orthomodular lattice.
pub struct FiniteOml {
    id: u64,
    n: usize,
    up: BitMat,
    down: BitMat,
    ortho: Vec<usize>,
    labels: Option<Vec<String>>,
    bot: usize,
    top: usize,
    tables: Option<(Vec<usize>, Vec<usize>)>,
}

impl PartialEq for FiniteOml {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.up == other.up
            && self.ortho == other.ortho
            && self.labels == other.labels
    }
}

impl Eq for FiniteOml {}

impl std::fmt::Debug for FiniteOml {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteOml")
            .field("n", &self.n)
            .field("bot", &self.bot)
            .field("top", &self.top)
            .finish()
    }
}

/// Checks every axiom of a finite orthomodular lattice and builds the
/// validated value. Violations carry the first witness in scan order
/// (lowest indices first).
pub fn verify_oml(raw: RawOml) -> Result<FiniteOml, OmlViolation> {
    let n = raw.n;
    if n == 0 {
        return Err(OmlViolation::TrivialLattice);
    }
    if n > MAX_ELEMENTS {
        return Err(OmlViolation::BadDimensions {
            detail: format!("{n} elements exceeds the {MAX_ELEMENTS}-element ceiling"),
        });
    }
    if raw.ortho.len() != n {
        return Err(OmlViolation::BadDimensions {
            detail: format!("ortho table has length {}, expected {n}", raw.ortho.len()),
        });
    }
    if let Some(labels) = &raw.labels {
        if labels.len() != n {
            return Err(OmlViolation::BadDimensions {
                detail: format!("label table has length {}, expected {n}", labels.len()),
            });
        }
    }
    for &(i, j) in &raw.leq_pairs {
        if i >= n || j >= n {
            return Err(OmlViolation::BadDimensions {
                detail: format!("order pair ({i}, {j}) out of range for {n} elements"),
            });
        }
    }

    let mut up = BitMat::new(n);
    for i in 0..n {
        up.set(i, i);
    }
    for &(i, j) in &raw.leq_pairs {
        up.set(i, j);
    }
    up.transitive_close();

    for x in 0..n {
        for y in x + 1..n {
            if up.test(x, y) && up.test(y, x) {
                return Err(OmlViolation::NotAPoset {
                    defect: PosetDefect::Antisymmetry,
                    x,
                    y,
                });
            }
        }
    }

    let down = up.transpose();
    let mut meet = vec![0usize; n * n];
    let mut join = vec![0usize; n * n];
    for x in 0..n {
        for y in x..n {
            let m = bound(&down, x, y)
                .ok_or(OmlViolation::NotALattice { kind: BoundKind::Meet, x, y })?;
            let j = bound(&up, x, y)
                .ok_or(OmlViolation::NotALattice { kind: BoundKind::Join, x, y })?;
            meet[x * n + y] = m;
            meet[y * n + x] = m;
            join[x * n + y] = j;
            join[y * n + x] = j;
        }
    }

    let bot = (0..n).fold(0, |acc, x| meet[acc * n + x]);
    let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
    if bot == top {
        return Err(OmlViolation::TrivialLattice);
    }

    let ortho = raw.ortho;
    let mut seen = vec![false; n];
    for &o in &ortho {
        if o >= n || seen[o] {
            return Err(OmlViolation::NotAnOrthocomplementation {
                defect: OrthoDefect::NotAPermutation,
                x: o.min(n - 1),
                y: None,
            });
        }
        seen[o] = true;
    }
    for x in 0..n {
        if ortho[ortho[x]] != x {
            return Err(OmlViolation::NotAnOrthocomplementation {
                defect: OrthoDefect::NotInvolutive,
                x,
                y: None,
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if up.test(x, y) && !up.test(ortho[y], ortho[x]) {
                return Err(OmlViolation::NotAnOrthocomplementation {
                    defect: OrthoDefect::NotAntitone,
                    x,
                    y: Some(y),
                });
            }
        }
    }
    for x in 0..n {
        if meet[x * n + ortho[x]] != bot {
            return Err(OmlViolation::NotAnOrthocomplementation {
                defect: OrthoDefect::MeetNotBot,
                x,
                y: None,
            });
        }
        if join[x * n + ortho[x]] != top {
            return Err(OmlViolation::NotAnOrthocomplementation {
                defect: OrthoDefect::JoinNotTop,
                x,
                y: None,
            });
        }
    }

    for x in 0..n {
        for y in 0..n {
            if x != y && up.test(x, y) {
                let rel = meet[y * n + ortho[x]];
                if join[x * n + rel] != y {
                    return Err(OmlViolation::NotOrthomodular { x, y });
                }
            }
        }
    }

    let tables = if n >= TABLE_MIN { Some((meet, join)) } else { None };
    Ok(FiniteOml {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        n,
        up,
        down,
        ortho,
        labels: raw.labels,
        bot,
        top,
        tables,
    })
}

/// Greatest lower bound of `x` and `y` in the preorder given by `down`
/// rows (or least upper bound when given `up` rows).
fn bound(rows: &BitMat, x: usize, y: usize) -> Option<usize> {
    let cand = and_rows(rows.row(x), rows.row(y));
    let found = bits_of(&cand, rows.n).find(|&c| rows.row(c) == cand.as_slice());
    found
}

impl FiniteOml {
    fn chk(&self, e: Element) -> usize {
        assert_eq!(
            e.lattice, self.id,
            "element belongs to a different lattice"
        );
        debug_assert!(e.index < self.n);
        e.index
    }

    fn el(&self, index: usize) -> Element {
        Element { lattice: self.id, index }
    }

    pub fn element_count(&self) -> usize {
        self.n
    }

    /// Handle for the element at `index`; panics when out of range.
    pub fn element(&self, index: usize) -> Element {
        assert!(index < self.n, "element index {index} out of range");
        self.el(index)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.n).map(|i| self.el(i))
    }

    pub fn bot(&self) -> Element {
        self.el(self.bot)
    }

    pub fn top(&self) -> Element {
        self.el(self.top)
    }

    pub fn label(&self, e: Element) -> String {
        let i = self.chk(e);
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn leq(&self, x: Element, y: Element) -> bool {
        self.up.test(self.chk(x), self.chk(y))
    }

    pub fn lt(&self, x: Element, y: Element) -> bool {
        x != y && self.leq(x, y)
    }

    pub(crate) fn leq_idx(&self, x: usize, y: usize) -> bool {
        self.up.test(x, y)
    }

    pub(crate) fn ortho_idx(&self, x: usize) -> usize {
        self.ortho[x]
    }

    pub(crate) fn bot_idx(&self) -> usize {
        self.bot
    }

    pub(crate) fn top_idx(&self) -> usize {
        self.top
    }

    pub(crate) fn meet_idx(&self, x: usize, y: usize) -> usize {
        match &self.tables {
            Some((meet, _)) => meet[x * self.n + y],
            None => bound(&self.down, x, y).expect("validated lattice"),
        }
    }

    pub(crate) fn join_idx(&self, x: usize, y: usize) -> usize {
        match &self.tables {
            Some((_, join)) => join[x * self.n + y],
            None => bound(&self.up, x, y).expect("validated lattice"),
        }
    }

    pub(crate) fn sasaki_idx(&self, x: usize, y: usize) -> usize {
        self.meet_idx(self.join_idx(x, self.ortho[y]), y)
    }

    pub fn meet(&self, x: Element, y: Element) -> Element {
        self.el(self.meet_idx(self.chk(x), self.chk(y)))
    }

    pub fn join(&self, x: Element, y: Element) -> Element {
        self.el(self.join_idx(self.chk(x), self.chk(y)))
    }

    pub fn ortho(&self, x: Element) -> Element {
        self.el(self.ortho[self.chk(x)])
    }

    /// Sasaki projection of `x` onto `y`: `(x \/ y') /\ y`.
    pub fn sasaki(&self, x: Element, y: Element) -> Element {
        self.el(self.sasaki_idx(self.chk(x), self.chk(y)))
    }

    /// Compatibility: `x = (x /\ y) \/ (x /\ y')`.
    pub fn commutes(&self, x: Element, y: Element) -> bool {
        let (xi, yi) = (self.chk(x), self.chk(y));
        let a = self.meet_idx(xi, yi);
        let b = self.meet_idx(xi, self.ortho[yi]);
        self.join_idx(a, b) == xi
    }

    /// `y` covers `x`: `x < y` with nothing strictly between.
    pub fn covers(&self, x: Element, y: Element) -> bool {
        let (xi, yi) = (self.chk(x), self.chk(y));
        self.covers_idx(xi, yi)
    }

    fn covers_idx(&self, x: usize, y: usize) -> bool {
        x != y
            && self.up.test(x, y)
            && !(0..self.n)
                .any(|z| z != x && z != y && self.up.test(x, z) && self.up.test(z, y))
    }

    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if self.covers_idx(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn is_atom(&self, e: Element) -> bool {
        let i = self.chk(e);
        self.covers_idx(self.bot, i)
    }

    pub fn atoms(&self) -> Vec<Element> {
        (0..self.n)
            .filter(|&i| self.covers_idx(self.bot, i))
            .map(|i| self.el(i))
            .collect()
    }

    pub fn coatoms(&self) -> Vec<Element> {
        (0..self.n)
            .filter(|&i| self.covers_idx(i, self.top))
            .map(|i| self.el(i))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationEncoding {
    Covers,
    Full,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    n: usize,
    relation: String,
    leq: Vec<[usize; 2]>,
    ortho: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum LatticeIoError {
    #[error("malformed lattice file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown relation encoding `{0}` (expected `covers` or `full`)")]
    UnknownEncoding(String),
    #[error(transparent)]
    Invalid(#[from] OmlViolation),
}

impl FiniteOml {
    pub fn to_json(&self, encoding: RelationEncoding) -> String {
        let leq = match encoding {
            RelationEncoding::Covers => self.cover_pairs(),
            RelationEncoding::Full => {
                let mut pairs = Vec::new();
                for x in 0..self.n {
                    for y in 0..self.n {
                        if self.up.test(x, y) {
                            pairs.push((x, y));
                        }
                    }
                }
                pairs
            }
        };
        let doc = LatticeJson {
            n: self.n,
            relation: match encoding {
                RelationEncoding::Covers => "covers".into(),
                RelationEncoding::Full => "full".into(),
            },
            leq: leq.into_iter().map(|(a, b)| [a, b]).collect(),
            ortho: self.ortho.clone(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<FiniteOml, LatticeIoError> {
        let doc: LatticeJson = serde_json::from_str(text)?;
        match doc.relation.as_str() {
            "covers" | "full" => {}
            other => return Err(LatticeIoError::UnknownEncoding(other.to_string())),
        }
        let raw = RawOml {
            n: doc.n,
            leq_pairs: doc.leq.into_iter().map(|[a, b]| (a, b)).collect(),
            ortho: doc.ortho,
            labels: doc.labels,
        };
        Ok(verify_oml(raw)?)
    }

    /// Encoding used when a file read back should serialize byte-identically.
    pub fn relation_encoding_of(text: &str) -> Result<RelationEncoding, LatticeIoError> {
        let doc: LatticeJson = serde_json::from_str(text)?;
        match doc.relation.as_str() {
            "covers" => Ok(RelationEncoding::Covers),
            "full" => Ok(RelationEncoding::Full),
            other => Err(LatticeIoError::UnknownEncoding(other.to_string())),
        }
    }
}

/// The six-element hexagon: `0 < x < y < 1` with `y' < x'`. An ortholattice
/// that is not orthomodular; used as the canonical rejection case.
pub fn hexagon_raw() -> RawOml {
    RawOml {
        n: 6,
        leq_pairs: vec![(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)],
        ortho: vec![5, 4, 3, 2, 1, 0],
        labels: Some(
            ["0", "x", "y", "y'", "x'", "1"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        ),
    }
}
