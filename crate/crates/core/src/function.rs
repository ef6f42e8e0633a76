//! The evaluation contract and the dense truth-table representation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::word::Word;

/// Largest arity for which exhaustive operations will build a truth table.
pub const DEFAULT_DENSE_LIMIT: usize = 24;

/// A total, deterministic map `{0,1}^n -> {0,1}`.
pub trait BooleanFunction: Send + Sync {
    fn arity(&self) -> usize;

    /// Evaluates on a word of the right arity. Callers are responsible for the
    /// arity check; use [`BooleanFunction::evaluate`] for a checked call.
    fn eval(&self, x: &Word) -> bool;

    /// Evaluates on the word whose [`Word::to_index`] is `index` (`n <= 64`).
    fn eval_index(&self, index: u64) -> bool {
        self.eval(&Word::from_index(self.arity(), index).expect("arity <= 64"))
    }

    fn evaluate(&self, x: &Word) -> Result<bool> {
        if x.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: x.len() });
        }
        Ok(self.eval(x))
    }
}

impl<F: BooleanFunction + ?Sized> BooleanFunction for &F {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &Word) -> bool {
        (**self).eval(x)
    }
    fn eval_index(&self, index: u64) -> bool {
        (**self).eval_index(index)
    }
}

impl<F: BooleanFunction + ?Sized> BooleanFunction for Box<F> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &Word) -> bool {
        (**self).eval(x)
    }
    fn eval_index(&self, index: u64) -> bool {
        (**self).eval_index(index)
    }
}

/// Adapter turning a closure over words into a [`BooleanFunction`].
pub struct FnFunction<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&Word) -> bool + Send + Sync> FnFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnFunction { n, f }
    }
}

impl<F: Fn(&Word) -> bool + Send + Sync> BooleanFunction for FnFunction<F> {
    fn arity(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &Word) -> bool {
        (self.f)(x)
    }
}

/// The textbook symmetric functions, mostly useful as test subjects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Constant(usize, bool),
    And(usize),
    Or(usize),
    Parity(usize),
}

impl BooleanFunction for Elementary {
    fn arity(&self) -> usize {
        match *self {
            Elementary::Constant(n, _) | Elementary::And(n) | Elementary::Or(n) | Elementary::Parity(n) => n,
        }
    }

    fn eval(&self, x: &Word) -> bool {
        let w = x.weight();
        match *self {
            Elementary::Constant(_, v) => v,
            Elementary::And(n) => w == n,
            Elementary::Or(_) => w > 0,
            Elementary::Parity(_) => w % 2 == 1,
        }
    }
}

/// Dense table of all `2^n` values, indexed by word value with position 1 as
/// the most significant digit.
#[derive(Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    limbs: Vec<u64>,
}

impl TruthTable {
    /// Enumerates every word of `f` (in parallel, merged in index order).
    pub fn build<F: BooleanFunction + ?Sized>(f: &F, dense_limit: usize) -> Result<TruthTable> {
        let n = f.arity();
        check_dense(n, dense_limit)?;
        let size = 1u64 << n;
        let limbs = (0..size.div_ceil(64))
            .into_par_iter()
            .map(|limb| {
                let base = limb * 64;
                let end = (base + 64).min(size);
                (base..end).fold(0u64, |acc, idx| acc | ((f.eval_index(idx) as u64) << (idx - base)))
            })
            .collect();
        Ok(TruthTable { n, limbs })
    }

    /// Table from explicit values in index order.
    pub fn from_values(n: usize, values: &[bool]) -> Result<TruthTable> {
        if n == 0 {
            return Err(Error::EmptyArity);
        }
        check_dense(n, 63)?;
        if values.len() as u64 != 1u64 << n {
            return Err(Error::Parse(format!("expected {} table entries, found {}", 1u64 << n, values.len())));
        }
        let mut limbs = vec![0u64; values.len().div_ceil(64)];
        for (i, &v) in values.iter().enumerate() {
            if v {
                limbs[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(TruthTable { n, limbs })
    }

    pub fn len(&self) -> u64 {
        1u64 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, index: u64) -> bool {
        (self.limbs[(index / 64) as usize] >> (index % 64)) & 1 == 1
    }

    pub(crate) fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn values(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> u64 {
        self.limbs.iter().map(|l| l.count_ones() as u64).sum()
    }

    /// Index mask that flips position `pos` (1-based).
    #[inline]
    pub fn position_mask(&self, pos: usize) -> u64 {
        1u64 << (self.n - pos)
    }
}

impl BooleanFunction for TruthTable {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Word) -> bool {
        self.get(x.to_index().expect("dense tables have n <= 63"))
    }

    fn eval_index(&self, index: u64) -> bool {
        self.get(index)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, ones={})", self.n, self.count_ones())
    }
}

/// Text form: `n=<arity>` on the first line, then `2^n` characters of `0`/`1`
/// in index order, newline-terminated.
impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for v in self.values() {
            f.write_str(if v { "1" } else { "0" })?;
        }
        writeln!(f)
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<TruthTable> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty truth-table file".into()))?;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}, expected n=<arity>")))?;
        let body = lines.next().unwrap_or("").trim();
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after the table line".into()));
        }
        let values = body
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in table"))),
            })
            .collect::<Result<Vec<_>>>()?;
        TruthTable::from_values(n, &values)
    }
}

pub(crate) fn check_dense(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyArity)
    } else if n > limit {
        Err(Error::DenseLimitExceeded { n, limit })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn or_table_is_msb_first() {
        let t = TruthTable::build(&Elementary::Or(2), DEFAULT_DENSE_LIMIT).unwrap();
        assert_eq!(t.values().collect::<Vec<_>>(), vec![false, true, true, true]);
    }

    #[test]
    fn constant_zero_table() {
        let t = TruthTable::build(&Elementary::Constant(3, false), DEFAULT_DENSE_LIMIT).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(t.count_ones(), 0);
    }

    #[test]
    fn position_one_is_most_significant() {
        let first = FnFunction::new(3, |x: &Word| x.get(1).unwrap());
        let t = TruthTable::build(&first, DEFAULT_DENSE_LIMIT).unwrap();
        assert_eq!(t.to_string(), "n=3\n00001111\n");
    }

    #[test]
    fn dense_limit_is_enforced() {
        assert_eq!(
            TruthTable::build(&Elementary::Or(30), DEFAULT_DENSE_LIMIT),
            Err(Error::DenseLimitExceeded { n: 30, limit: 24 })
        );
        assert!(TruthTable::build(&Elementary::Or(10), 8).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let t = TruthTable::build(&Elementary::Parity(4), DEFAULT_DENSE_LIMIT).unwrap();
        let back: TruthTable = t.to_string().parse().unwrap();
        assert_eq!(back, t);
        assert!("n=2\n011\n".parse::<TruthTable>().is_err());
        assert!("m=2\n0111\n".parse::<TruthTable>().is_err());
        assert!("n=2\n01x1\n".parse::<TruthTable>().is_err());
    }

    #[test]
    fn lookup_matches_evaluator_on_random_words() {
        use rand::{Rng, SeedableRng};
        let f = FnFunction::new(14, |x: &Word| {
            let s = x.support();
            s.iter().sum::<usize>() % 3 == 0 && x.get(2).unwrap()
        });
        let t = TruthTable::build(&f, DEFAULT_DENSE_LIMIT).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let x = Word::from_fn(14, |_| rng.gen()).unwrap();
            assert_eq!(t.eval(&x), f.eval(&x));
        }
    }
}
