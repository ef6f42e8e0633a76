//! Fixed-arity bit strings with 1-based positions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An element of `{0,1}^n`. Position 1 is the leftmost character of the
/// textual form and the most significant digit of [`Word::to_index`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    n: usize,
    // bit (i - 1) holds position i
    limbs: Vec<u64>,
}

fn limbs_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl Word {
    pub fn zeros(n: usize) -> Result<Word> {
        if n == 0 {
            return Err(Error::EmptyArity);
        }
        Ok(Word { n, limbs: vec![0; limbs_for(n)] })
    }

    pub fn ones(n: usize) -> Result<Word> {
        Word::from_fn(n, |_| true)
    }

    /// Builds a word from a per-position predicate (`pos` is 1-based).
    pub fn from_fn(n: usize, mut bit: impl FnMut(usize) -> bool) -> Result<Word> {
        let mut w = Word::zeros(n)?;
        for pos in 1..=n {
            if bit(pos) {
                w.set_raw(pos - 1, true);
            }
        }
        Ok(w)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Word> {
        Word::from_fn(bits.len(), |pos| bits[pos - 1])
    }

    /// Inverse of [`Word::to_index`]; requires `n <= 64`.
    pub fn from_index(n: usize, index: u64) -> Result<Word> {
        if n > 64 {
            return Err(Error::Parameter(format!("index form needs n <= 64, got {n}")));
        }
        Word::from_fn(n, |pos| (index >> (n - pos)) & 1 == 1)
    }

    /// Numeric value with position 1 as the most significant digit.
    pub fn to_index(&self) -> Option<u64> {
        if self.n > 64 {
            return None;
        }
        Some((1..=self.n).fold(0u64, |acc, pos| (acc << 1) | self.get_raw(pos - 1) as u64))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, pos: usize) -> Result<bool> {
        self.check(pos)?;
        Ok(self.get_raw(pos - 1))
    }

    /// `x^i`: the word with position `pos` switched.
    pub fn flip_bit(&self, pos: usize) -> Result<Word> {
        self.check(pos)?;
        let mut w = self.clone();
        w.toggle_raw(pos - 1);
        Ok(w)
    }

    /// `x^A`: every listed position switched. Repeated positions are an error.
    pub fn flip_block(&self, block: &[usize]) -> Result<Word> {
        let mut w = self.clone();
        let mut seen = vec![false; self.n];
        for &pos in block {
            self.check(pos)?;
            if std::mem::replace(&mut seen[pos - 1], true) {
                return Err(Error::DuplicatePosition(pos));
            }
            w.toggle_raw(pos - 1);
        }
        Ok(w)
    }

    /// `cs_l(x) = x_{l+1} ... x_n x_1 ... x_l`, with `l` reduced mod n.
    pub fn cyclic_shift(&self, shift: usize) -> Word {
        let l = shift % self.n;
        let mut w = Word { n: self.n, limbs: vec![0; self.limbs.len()] };
        for i in 0..self.n {
            if self.get_raw((i + l) % self.n) {
                w.set_raw(i, true);
            }
        }
        w
    }

    /// `supp(x)` in ascending order.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.n).filter(|&pos| self.get_raw(pos - 1)).collect()
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn support_and_weight(&self) -> (Vec<usize>, usize) {
        (self.support(), self.weight())
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.n).map(move |i| self.get_raw(i))
    }

    fn check(&self, pos: usize) -> Result<()> {
        if pos == 0 || pos > self.n {
            Err(Error::PositionOutOfRange { position: pos, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn get_raw(&self, i: usize) -> bool {
        (self.limbs[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_raw(&mut self, i: usize, v: bool) {
        let mask = 1u64 << (i % 64);
        if v {
            self.limbs[i / 64] |= mask;
        } else {
            self.limbs[i / 64] &= !mask;
        }
    }

    #[inline]
    pub(crate) fn toggle_raw(&mut self, i: usize) {
        self.limbs[i / 64] ^= 1u64 << (i % 64);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses a string of `0`/`1`; spaces and underscores are ignored.
    fn from_str(s: &str) -> Result<Word> {
        let bits = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '_'))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in word"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_bits(&bits)
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
