//! Partial assignments `p: S -> {0,1}` over `[n]`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::Word;

/// A 0/1 labeling of a support set `S ⊆ [n]`.
///
/// Ordering, equality and hashing use `(n, sorted support, values)`, which is
/// the canonical key for orbit deduplication.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment {
    n: usize,
    entries: BTreeMap<usize, bool>,
}

impl PartialAssignment {
    pub fn new(n: usize, entries: impl IntoIterator<Item = (usize, bool)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyArity);
        }
        let mut map = BTreeMap::new();
        for (pos, v) in entries {
            if pos == 0 || pos > n {
                return Err(Error::PositionOutOfRange { position: pos, n });
            }
            if map.insert(pos, v).is_some() {
                return Err(Error::DuplicatePosition(pos));
            }
        }
        Ok(PartialAssignment { n, entries: map })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    /// Parallel `support`/`values` arrays, as in the pattern JSON document.
    pub fn from_parts(n: usize, support: &[usize], values: &[bool]) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::Parse(format!(
                "support has {} positions but values has {}",
                support.len(),
                values.len()
            )));
        }
        Self::new(n, support.iter().copied().zip(values.iter().copied()))
    }

    /// The full assignment given by a word.
    pub fn from_word(x: &Word) -> Self {
        PartialAssignment { n: x.len(), entries: x.bits().enumerate().map(|(i, b)| (i + 1, b)).collect() }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// Support size `k = |S|`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn values(&self) -> Vec<bool> {
        self.entries.values().copied().collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.entries.iter().map(|(&p, &v)| (p, v))
    }

    pub fn value(&self, pos: usize) -> Option<bool> {
        self.entries.get(&pos).copied()
    }

    /// Number of support positions mapped to 1.
    pub fn weight(&self) -> usize {
        self.entries.values().filter(|&&v| v).count()
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.weight()
    }

    /// `p ⊆ x`: the word agrees with `p` on its support.
    pub fn extends(&self, x: &Word) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, found: x.len() });
        }
        Ok(self.entries.iter().all(|(&p, &v)| x.get_raw(p - 1) == v))
    }

    /// Restriction to the positions of `keep` that lie in the support.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        PartialAssignment {
            n: self.n,
            entries: self.entries.iter().filter(|(p, _)| keep.contains(p)).map(|(&p, &v)| (p, v)).collect(),
        }
    }

    /// The sub-assignment with `pos` removed from the support.
    pub fn without(&self, pos: usize) -> Self {
        let mut q = self.clone();
        q.entries.remove(&pos);
        q
    }

    pub fn is_disjoint(&self, other: &PartialAssignment) -> bool {
        self.entries.keys().all(|p| !other.entries.contains_key(p))
    }

    /// Extends `p` to a full word, filling positions outside the support with `fill`.
    pub fn pad(&self, fill: bool) -> Word {
        Word::from_fn(self.n, |pos| self.value(pos).unwrap_or(fill)).expect("arity is non-zero")
    }
}

impl fmt::Debug for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}↦{}", *v as u8)?;
        }
        write!(f, "}}/{}", self.n)
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct AssignmentRepr {
    n: usize,
    support: Vec<usize>,
    values: Vec<u8>,
}

impl serde::Serialize for PartialAssignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AssignmentRepr { n: self.n, support: self.support(), values: self.values().iter().map(|&v| v as u8).collect() }
            .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for PartialAssignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AssignmentRepr::deserialize(d)?;
        if let Some(bad) = r.values.iter().find(|&&v| v > 1) {
            return Err(serde::de::Error::custom(format!("value {bad} is not a bit")));
        }
        let values: Vec<bool> = r.values.iter().map(|&v| v == 1).collect();
        PartialAssignment::from_parts(r.n, &r.support, &values).map_err(serde::de::Error::custom)
    }
}
