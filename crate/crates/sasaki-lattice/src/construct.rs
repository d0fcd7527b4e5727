//! Constructors for the standard finite orthomodular lattices: boolean
//! algebras `2^k`, the lantern lattices `MO(k)`, and pastings of boolean
//! blocks described by Greechie diagrams.
//!
//! Every constructor funnels its output through [`verify_oml`], so an `Ok`
//! result is always a fully validated lattice.

use crate::oml::{verify_oml, FiniteOml, OmlViolation, RawOml, MAX_ELEMENTS};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Largest supported block in a Greechie diagram (subset enumeration is
/// exponential in block size).
const MAX_BLOCK: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("parameter k = {k} outside supported range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("diagram has no blocks")]
    EmptyDiagram,
    #[error("block {block} has fewer than 2 atoms")]
    BlockTooSmall { block: usize },
    #[error("block {block} has {size} atoms; at most {MAX_BLOCK} supported")]
    BlockTooLarge { block: usize, size: usize },
    #[error("block {block} lists atom `{atom}` twice")]
    DuplicateAtom { block: usize, atom: String },
    #[error("blocks {first} and {second} share more than one atom")]
    BlocksOverlap { first: usize, second: usize },
    #[error("pasted diagram is not an orthomodular lattice: {violation}")]
    PastingNotOrthomodular { violation: OmlViolation },
    #[error("pasting produced an inconsistent orthocomplement")]
    InconsistentOrtho,
}

/// The powerset lattice of a `k`-element set, elements indexed by subset
/// mask, with set complement as orthocomplement.
pub fn boolean_algebra(k: usize) -> Result<FiniteOml, ConstructError> {
    let max = MAX_ELEMENTS.ilog2() as usize;
    if k == 0 || k > max {
        return Err(ConstructError::KOutOfRange { k, max });
    }
    let n = 1usize << k;
    let full = n - 1;
    let mut pairs = Vec::new();
    for m in 0..n {
        for b in 0..k {
            if m >> b & 1 == 0 {
                pairs.push((m, m | 1 << b));
            }
        }
    }
    let labels = (0..n)
        .map(|m| {
            if m == 0 {
                "0".to_string()
            } else if m == full {
                "1".to_string()
            } else {
                (0..k)
                    .filter(|b| m >> b & 1 == 1)
                    .map(|b| (b'a' + b as u8) as char)
                    .collect()
            }
        })
        .collect();
    let raw = RawOml {
        n,
        leq_pairs: pairs,
        ortho: (0..n).map(|m| full ^ m).collect(),
        labels: Some(labels),
    };
    verify_oml(raw).map_err(|violation| ConstructError::PastingNotOrthomodular { violation })
}

/// `MO(k)`: bottom, top, and `k` complementary atom pairs `a_i, a_i'`;
/// distinct non-paired atoms are incomparable.
pub fn mo(k: usize) -> Result<FiniteOml, ConstructError> {
    let max = (MAX_ELEMENTS - 2) / 2;
    if k == 0 || k > max {
        return Err(ConstructError::KOutOfRange { k, max });
    }
    let n = 2 * k + 2;
    let top = n - 1;
    let mut pairs = Vec::new();
    let mut ortho = vec![0; n];
    let mut labels = vec![String::new(); n];
    labels[0] = "0".into();
    labels[top] = "1".into();
    ortho[0] = top;
    ortho[top] = 0;
    for i in 1..=k {
        let (a, a1) = (2 * i - 1, 2 * i);
        pairs.push((0, a));
        pairs.push((0, a1));
        pairs.push((a, top));
        pairs.push((a1, top));
        ortho[a] = a1;
        ortho[a1] = a;
        labels[a] = format!("a{i}");
        labels[a1] = format!("a{i}'");
    }
    let raw = RawOml { n, leq_pairs: pairs, ortho, labels: Some(labels) };
    verify_oml(raw).map_err(|violation| ConstructError::PastingNotOrthomodular { violation })
}

/// A Greechie diagram: boolean blocks given as lists of atom labels, to be
/// pasted along shared atoms. Well-formedness (block sizes, overlap of at
/// most one atom) is checked on construction; whether the pasting is
/// orthomodular is decided later by [`from_greechie`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreechieDiagram {
    blocks: Vec<Vec<String>>,
}

impl GreechieDiagram {
    pub fn new(blocks: Vec<Vec<String>>) -> Result<Self, ConstructError> {
        if blocks.is_empty() {
            return Err(ConstructError::EmptyDiagram);
        }
        for (i, block) in blocks.iter().enumerate() {
            if block.len() < 2 {
                return Err(ConstructError::BlockTooSmall { block: i });
            }
            if block.len() > MAX_BLOCK {
                return Err(ConstructError::BlockTooLarge { block: i, size: block.len() });
            }
            let mut seen = BTreeSet::new();
            for atom in block {
                if !seen.insert(atom) {
                    return Err(ConstructError::DuplicateAtom {
                        block: i,
                        atom: atom.clone(),
                    });
                }
            }
        }
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                let a: BTreeSet<_> = blocks[i].iter().collect();
                let shared = blocks[j].iter().filter(|x| a.contains(x)).count();
                if shared > 1 {
                    return Err(ConstructError::BlocksOverlap { first: i, second: j });
                }
            }
        }
        Ok(GreechieDiagram { blocks })
    }

    /// One block per line, whitespace-separated atom labels; `#` starts a
    /// comment; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, ConstructError> {
        let mut blocks = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            let atoms: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            if !atoms.is_empty() {
                blocks.push(atoms);
            }
        }
        GreechieDiagram::new(blocks)
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    /// Sorted union of all block atoms.
    pub fn atoms(&self) -> Vec<String> {
        let set: BTreeSet<_> = self.blocks.iter().flatten().cloned().collect();
        set.into_iter().collect()
    }
}

/// Pastes the diagram's boolean blocks along their shared atoms.
///
/// Elements are block subsets deduplicated by the set of diagram atoms
/// lying below them: the empty subset is bottom, a full block is top, and
/// a subset missing exactly one atom `m` of its block is the complement of
/// `m`, hence lies above every atom sharing a block with `m`. Whether the
/// glued poset is an orthomodular lattice is decided by [`verify_oml`];
/// any violation is reported with its witness.
pub fn from_greechie(g: &GreechieDiagram) -> Result<FiniteOml, ConstructError> {
    let atom_labels = g.atoms();
    let atom_id: BTreeMap<&str, usize> = atom_labels
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let blocks: Vec<Vec<usize>> = g
        .blocks
        .iter()
        .map(|b| {
            let mut ids: Vec<usize> = b.iter().map(|s| atom_id[s.as_str()]).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    let num_atoms = atom_labels.len();
    let all: BTreeSet<usize> = (0..num_atoms).collect();

    // below[m] = atoms sharing a block with m, i.e. the atoms below m's
    // orthocomplement.
    let mut below = vec![BTreeSet::new(); num_atoms];
    for block in &blocks {
        for &m in block {
            for &x in block {
                if x != m {
                    below[m].insert(x);
                }
            }
        }
    }

    let key_of = |block: &[usize], mask: u32| -> BTreeSet<usize> {
        let size = block.len();
        let members: BTreeSet<usize> = (0..size)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| block[i])
            .collect();
        if members.is_empty() {
            BTreeSet::new()
        } else if members.len() == size {
            all.clone()
        } else if members.len() == size - 1 {
            let missing = block.iter().find(|m| !members.contains(m)).unwrap();
            below[*missing].clone()
        } else {
            members
        }
    };

    // Canonical element order: bottom, atoms by label, the rest by
    // (height proxy, members), top last.
    let mut keys: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for block in &blocks {
        for mask in 0..1u32 << block.len() {
            keys.insert(key_of(block, mask));
        }
    }
    let mut ordered: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
    let mut middle: Vec<&BTreeSet<usize>> = keys
        .iter()
        .filter(|k| !k.is_empty() && **k != all)
        .collect();
    middle.sort_by_key(|k| (k.len(), k.iter().copied().collect::<Vec<_>>()));
    ordered.extend(middle.into_iter().cloned());
    ordered.push(all.clone());
    let index: BTreeMap<&BTreeSet<usize>, usize> =
        ordered.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let n = ordered.len();

    let mut pairs = BTreeSet::new();
    let mut ortho: Vec<Option<usize>> = vec![None; n];
    for block in &blocks {
        let size = block.len();
        let full = (1u32 << size) - 1;
        for mask in 0..=full {
            let e = index[&key_of(block, mask)];
            for b in 0..size {
                if mask >> b & 1 == 0 {
                    pairs.insert((e, index[&key_of(block, mask | 1 << b)]));
                }
            }
            let o = index[&key_of(block, full ^ mask)];
            match ortho[e] {
                None => ortho[e] = Some(o),
                Some(prev) if prev == o => {}
                Some(_) => return Err(ConstructError::InconsistentOrtho),
            }
        }
    }
    let ortho: Vec<usize> = ortho
        .into_iter()
        .collect::<Option<_>>()
        .ok_or(ConstructError::InconsistentOrtho)?;

    let labels = ordered
        .iter()
        .map(|key| {
            if key.is_empty() {
                "0".to_string()
            } else if *key == all {
                "1".to_string()
            } else if key.len() == 1 {
                atom_labels[*key.first().unwrap()].clone()
            } else if let Some(m) = (0..num_atoms).find(|&m| below[m] == *key) {
                format!("{}'", atom_labels[m])
            } else {
                key.iter()
                    .map(|&x| atom_labels[x].as_str())
                    .collect::<Vec<_>>()
                    .join("+")
            }
        })
        .collect();

    let raw = RawOml {
        n,
        leq_pairs: pairs.into_iter().collect(),
        ortho,
        labels: Some(labels),
    };
    verify_oml(raw).map_err(|violation| ConstructError::PastingNotOrthomodular { violation })
}
