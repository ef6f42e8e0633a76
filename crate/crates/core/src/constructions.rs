//! Function families: minterm closures `p^G`, the block pattern and the
//! cyclic function built from it, the cyclic variant of Rubinstein's
//! function, and the witness words used to pin down their sensitivities.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::PartialAssignment;
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::perm::{cyclic_group, GeneratedGroup, Permutation};
use crate::word::Word;

/// Smallest block size for which the pattern's last block is well formed.
pub const MIN_BLOCK_SIZE: usize = 8;

/// Orbit size above which `random_minterm_transitive` falls back to a reflection.
const RANDOM_ORBIT_LIMIT: usize = 256;

/// How the orbit of the defining minterm is produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// Shifts by the n-cycle, evaluated on the fly.
    Cyclic,
    /// Any transitive group; the orbit is materialized.
    Generated(GeneratedGroup),
}

/// `p^G`: 1 on exactly the words that extend some G-shift of `p`.
#[derive(Clone, Debug)]
pub struct OrbitPattern {
    n: usize,
    minterm: PartialAssignment,
    symmetry: Symmetry,
    block_size: Option<usize>,
    members: Vec<PartialAssignment>,
    // (0-based position, value) of the minterm, for cyclic evaluation
    entries: Vec<(usize, bool)>,
    // (mask, value) per orbit member in index space when n <= 64
    index_masks: Option<Vec<(u64, u64)>>,
}

impl OrbitPattern {
    /// `p^cyc` without materializing the orbit.
    pub fn cyclic(p: PartialAssignment) -> Result<OrbitPattern> {
        if p.is_empty() {
            return Err(Error::EmptySupport);
        }
        let n = p.arity();
        let entries: Vec<(usize, bool)> = p.entries().map(|(s, v)| (s - 1, v)).collect();
        let index_masks = (n <= 64).then(|| {
            let mut masks: Vec<(u64, u64)> =
                (0..n).map(|l| index_mask(n, entries.iter().map(|&(s, v)| ((s + l) % n + 1, v)))).collect();
            masks.sort_unstable();
            masks.dedup();
            masks
        });
        Ok(OrbitPattern {
            n,
            minterm: p,
            symmetry: Symmetry::Cyclic,
            block_size: None,
            members: vec![],
            entries,
            index_masks,
        })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// The defining minterm `p`.
    pub fn minterm(&self) -> &PartialAssignment {
        &self.minterm
    }

    /// Support size of the minterm.
    pub fn k(&self) -> usize {
        self.minterm.len()
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }

    /// Block size when built by [`new_function`].
    pub fn block_size(&self) -> Option<usize> {
        self.block_size
    }

    /// The group whose shifts of `p` define the function.
    pub fn group(&self) -> Result<GeneratedGroup> {
        match &self.symmetry {
            Symmetry::Cyclic => cyclic_group(self.n),
            Symmetry::Generated(g) => Ok(g.clone()),
        }
    }

    /// The orbit `{p^π}` in breadth-first order.
    pub fn orbit(&self) -> Result<Vec<PartialAssignment>> {
        match &self.symmetry {
            Symmetry::Cyclic => self.group()?.assignment_orbit(&self.minterm),
            Symmetry::Generated(_) => Ok(self.members.clone()),
        }
    }

    fn cyclic_match_at(&self, x: &Word, shift: usize) -> bool {
        self.entries.iter().all(|&(s, v)| {
            let mut i = s + shift;
            if i >= self.n {
                i -= self.n;
            }
            x.get_raw(i) == v
        })
    }
}

fn index_mask(n: usize, entries: impl Iterator<Item = (usize, bool)>) -> (u64, u64) {
    entries.fold((0, 0), |(mask, value), (pos, v)| {
        let bit = 1u64 << (n - pos);
        (mask | bit, if v { value | bit } else { value })
    })
}

impl BooleanFunction for OrbitPattern {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Word) -> bool {
        match self.symmetry {
            Symmetry::Cyclic => (0..self.n).any(|l| self.cyclic_match_at(x, l)),
            Symmetry::Generated(_) => self.members.iter().any(|q| q.entries().all(|(s, v)| x.get_raw(s - 1) == v)),
        }
    }

    fn eval_index(&self, index: u64) -> bool {
        match &self.index_masks {
            Some(masks) => masks.iter().any(|&(m, v)| index & m == v),
            None => self.eval(&Word::from_index(self.n, index).expect("n <= 64")),
        }
    }
}

/// `p^G` for a transitive group given by generators.
pub fn minterm_closure(p: &PartialAssignment, group: &GeneratedGroup) -> Result<OrbitPattern> {
    if p.arity() != group.degree() {
        return Err(Error::ArityMismatch { expected: group.degree(), found: p.arity() });
    }
    if p.is_empty() {
        return Err(Error::EmptySupport);
    }
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let members = group.assignment_orbit(p)?;
    let n = p.arity();
    let index_masks = (n <= 64).then(|| members.iter().map(|q| index_mask(n, q.entries())).collect());
    Ok(OrbitPattern {
        n,
        minterm: p.clone(),
        symmetry: Symmetry::Generated(group.clone()),
        block_size: None,
        entries: p.entries().map(|(s, v)| (s - 1, v)).collect(),
        members,
        index_masks,
    })
}

/// The fixed positions of the block pattern
/// `1 1 0^{k-2} (11111 *^{k-5})^{k-2} 11111 *^{k-8} 111` on `[k²]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSpec {
    k: usize,
    fixed: Vec<(usize, bool)>,
}

impl PatternSpec {
    pub fn new(k: usize) -> Result<PatternSpec> {
        if k < MIN_BLOCK_SIZE {
            return Err(Error::Parameter(format!("k ≥ {MIN_BLOCK_SIZE} required")));
        }
        let mut fixed: Vec<(usize, bool)> = (1..=k).map(|pos| (pos, pos <= 2)).collect();
        for block in 2..=k {
            let start = (block - 1) * k;
            fixed.extend((1..=5).map(|off| (start + off, true)));
        }
        fixed.extend((k * k - 2..=k * k).map(|pos| (pos, true)));
        Ok(PatternSpec { k, fixed })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `(position, bit)` pairs in ascending position order.
    pub fn fixed_positions(&self) -> &[(usize, bool)] {
        &self.fixed
    }

    pub fn fixed_count(&self) -> usize {
        self.fixed.len()
    }

    pub fn zero_count(&self) -> usize {
        self.fixed.iter().filter(|(_, v)| !v).count()
    }

    pub fn weight(&self) -> usize {
        self.fixed.iter().filter(|(_, v)| *v).count()
    }

    /// The pattern placed on positions `1..=k²` of `[n]`.
    pub fn embed(&self, n: usize) -> Result<PartialAssignment> {
        if self.k * self.k > n {
            return Err(Error::Parameter(format!("k² ≤ n required (k={}, n={n})", self.k)));
        }
        PartialAssignment::new(n, self.fixed.iter().copied())
    }
}

/// `g` on `k²` bits: 1 iff every fixed position of the pattern matches.
#[derive(Clone, Debug)]
pub struct AuxiliaryG {
    spec: PatternSpec,
}

impl AuxiliaryG {
    pub fn spec(&self) -> &PatternSpec {
        &self.spec
    }
}

impl BooleanFunction for AuxiliaryG {
    fn arity(&self) -> usize {
        self.spec.k * self.spec.k
    }

    fn eval(&self, x: &Word) -> bool {
        self.spec.fixed.iter().all(|&(pos, v)| x.get_raw(pos - 1) == v)
    }
}

pub fn auxiliary_g(k: usize) -> Result<(AuxiliaryG, PatternSpec)> {
    let spec = PatternSpec::new(k)?;
    Ok((AuxiliaryG { spec: spec.clone() }, spec))
}

/// The cyclic function: 1 iff some cyclic window of length `k²` satisfies `g`.
pub fn new_function(n: usize, k: usize) -> Result<OrbitPattern> {
    let p = PatternSpec::new(k)?.embed(n)?;
    let mut f = OrbitPattern::cyclic(p)?;
    f.block_size = Some(k);
    Ok(f)
}

fn integer_cube_root(n: usize) -> usize {
    let mut r = (n as f64).cbrt() as usize;
    while r.pow(3) > n {
        r -= 1;
    }
    while (r + 1).pow(3) <= n {
        r += 1;
    }
    r
}

pub fn theorem31_block_size(n: usize) -> Result<usize> {
    if n < 512 {
        return Err(Error::Parameter(format!("n ≥ 512 required (got {n})")));
    }
    Ok(integer_cube_root(n).max(MIN_BLOCK_SIZE))
}

pub fn theorem32_block_size(n: usize) -> Result<usize> {
    if n < 64 {
        return Err(Error::Parameter(format!("n ≥ 64 required (got {n})")));
    }
    Ok(n.isqrt())
}

/// Balances `s¹ = Θ(k)` against `s⁰ = Θ(n/k²)`: `k = max(8, ⌊n^{1/3}⌋)`.
pub fn theorem31_function(n: usize) -> Result<OrbitPattern> {
    new_function(n, theorem31_block_size(n)?)
}

/// `k = ⌊√n⌋`, so that `s⁰·s¹ = Θ(√n)`.
pub fn theorem32_function(n: usize) -> Result<OrbitPattern> {
    new_function(n, theorem32_block_size(n)?)
}

/// The pattern on the first `k²` bits with every free position 0, then zeros.
pub fn witness_one(n: usize, k: usize) -> Result<Word> {
    Ok(PatternSpec::new(k)?.embed(n)?.pad(false))
}

/// A 0-input whose sensitive bits are exactly the cleared second bits of
/// `m = ⌊n/k²⌋` back-to-back copies of the pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroWitness {
    pub word: Word,
    pub sensitive: Vec<usize>,
    pub m: usize,
    pub r: usize,
}

pub fn witness_zero(n: usize, k: usize) -> Result<ZeroWitness> {
    let spec = PatternSpec::new(k)?;
    spec.embed(n)?;
    let window = k * k;
    let m = n / window;
    let mut ones = vec![false; window];
    for &(pos, v) in spec.fixed_positions() {
        ones[pos - 1] = v;
    }
    ones[1] = false;
    let word = Word::from_fn(n, |pos| pos <= m * window && ones[(pos - 1) % window])?;
    let sensitive = (0..m).map(|j| j * window + 2).collect();
    Ok(ZeroWitness { word, sensitive, m, r: n - m * window })
}

/// Cyclic variant of Rubinstein's function on `k²` bits: `f(x) = 1` iff some
/// cyclic shift `x'` has a k-bit block holding exactly two ones, adjacent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rubinstein {
    k: usize,
}

impl Rubinstein {
    pub fn k(&self) -> usize {
        self.k
    }

    fn block_hit(block: u64) -> bool {
        block.count_ones() == 2 && block & (block >> 1) != 0
    }

    /// `f'`: OR over the fixed blocks of `g`.
    fn blocks_hit(&self, shifted: u64) -> bool {
        let n = self.k * self.k;
        let kmask = (1u64 << self.k) - 1;
        (1..=self.k).any(|j| Self::block_hit((shifted >> (n - j * self.k)) & kmask))
    }
}

pub fn rubinstein_cyclic(k: usize) -> Result<Rubinstein> {
    if k < 2 {
        return Err(Error::Parameter("k ≥ 2 required".into()));
    }
    Ok(Rubinstein { k })
}

impl BooleanFunction for Rubinstein {
    fn arity(&self) -> usize {
        self.k * self.k
    }

    fn eval(&self, x: &Word) -> bool {
        let n = self.arity();
        if let Some(idx) = x.to_index() {
            return self.eval_index(idx);
        }
        (0..n).any(|l| {
            (0..self.k).any(|j| {
                let ones: Vec<usize> = (0..self.k).filter(|&i| x.get_raw((l + j * self.k + i) % n)).collect();
                ones.len() == 2 && ones[1] == ones[0] + 1
            })
        })
    }

    fn eval_index(&self, index: u64) -> bool {
        let n = self.arity() as u32;
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        (0..n).any(|l| {
            let rotated = if l == 0 { index } else { ((index << l) | (index >> (n - l))) & full };
            self.blocks_hit(rotated)
        })
    }
}

/// Seeded random `p^G`: a uniformly random support of size `k` with random
/// values, under the n-cycle and, on a coin flip, a random involution.
pub fn random_minterm_transitive(n: usize, k: usize, seed: u64) -> Result<OrbitPattern> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::Parameter(format!("1 ≤ k ≤ n required (n={n}, k={k})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support: Vec<usize> = rand::seq::index::sample(&mut rng, n, k).into_iter().map(|i| i + 1).collect();
    support.sort_unstable();
    let p = PartialAssignment::new(n, support.into_iter().map(|s| (s, rng.gen::<bool>())))?;
    let mut generators = vec![Permutation::n_cycle(n)?];
    if n >= 3 && rng.gen_bool(0.5) {
        let mut points: Vec<usize> = (1..=n).collect();
        points.shuffle(&mut rng);
        let pairs = rng.gen_range(1..=n / 2);
        let mut image: Vec<usize> = (1..=n).collect();
        for pair in points.chunks(2).take(pairs) {
            image[pair[0] - 1] = pair[1];
            image[pair[1] - 1] = pair[0];
        }
        let centre = rng.gen_range(0..n);
        let candidate = GeneratedGroup::new(vec![generators[0].clone(), Permutation::new(image)?])?
            .with_orbit_cap(RANDOM_ORBIT_LIMIT);
        let extra = match candidate.assignment_orbit(&p) {
            Ok(_) => candidate.generators()[1].clone(),
            Err(Error::OrbitCapExceeded { .. }) => {
                Permutation::new((0..n).map(|j| (centre + n - j) % n + 1).collect())?
            }
            Err(e) => return Err(e),
        };
        generators.push(extra);
    }
    minterm_closure(&p, &GeneratedGroup::new(generators)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{Elementary, TruthTable, DEFAULT_DENSE_LIMIT};

    fn pa(n: usize, e: &[(usize, u8)]) -> PartialAssignment {
        PartialAssignment::new(n, e.iter().map(|&(p, v)| (p, v == 1))).unwrap()
    }

    fn adjacent_ones_cyclic(x: &Word) -> bool {
        let n = x.len();
        let b: Vec<bool> = x.bits().collect();
        (0..n).any(|i| b[i] && b[(i + 1) % n])
    }

    #[test]
    fn closure_of_single_one_is_or() {
        let f = minterm_closure(&pa(3, &[(1, 1)]), &cyclic_group(3).unwrap()).unwrap();
        let or = TruthTable::build(&Elementary::Or(3), DEFAULT_DENSE_LIMIT).unwrap();
        assert_eq!(TruthTable::build(&f, DEFAULT_DENSE_LIMIT).unwrap(), or);
    }

    #[test]
    fn closure_of_adjacent_pair_matches_naive_predicate() {
        let p = pa(4, &[(1, 1), (2, 1)]);
        let closed = minterm_closure(&p, &cyclic_group(4).unwrap()).unwrap();
        let lazy = OrbitPattern::cyclic(p).unwrap();
        for idx in 0..16u64 {
            let x = Word::from_index(4, idx).unwrap();
            assert_eq!(closed.eval(&x), adjacent_ones_cyclic(&x), "{x}");
            assert_eq!(lazy.eval(&x), adjacent_ones_cyclic(&x), "{x}");
            assert_eq!(lazy.eval_index(idx), lazy.eval(&x));
        }
    }

    #[test]
    fn closure_preconditions() {
        let swap = GeneratedGroup::new(vec![Permutation::from_cycles(3, &[&[1, 2]]).unwrap()]).unwrap();
        assert_eq!(minterm_closure(&pa(3, &[(1, 1)]), &swap).unwrap_err(), Error::Intransitive);
        assert_eq!(minterm_closure(&pa(3, &[]), &cyclic_group(3).unwrap()).unwrap_err(), Error::EmptySupport);
        assert!(matches!(
            minterm_closure(&pa(4, &[(1, 1)]), &cyclic_group(3).unwrap()),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn pattern_spec_counts() {
        for k in 8..=32 {
            let spec = PatternSpec::new(k).unwrap();
            assert_eq!(spec.fixed_count(), 6 * k - 2);
            assert_eq!(spec.zero_count(), k - 2);
            assert_eq!(spec.weight(), 5 * k);
        }
        assert!(PatternSpec::new(7).is_err());
    }

    #[test]
    fn auxiliary_g_examples() {
        let (g, spec) = auxiliary_g(8).unwrap();
        assert_eq!(spec.fixed_count(), 46);
        let z: Word = format!("11000000{}11111111", "11111000".repeat(6)).parse().unwrap();
        assert!(g.eval(&z));
        assert!(!g.eval(&z.flip_bit(1).unwrap()));
        // free positions are ignored
        assert!(g.eval(&z.flip_bit(14).unwrap()));
        assert_eq!(auxiliary_g(5).unwrap_err(), Error::Parameter("k ≥ 8 required".into()));
    }

    fn longest_zero_runs(bits: &[bool]) -> Vec<usize> {
        let mut runs = vec![];
        let mut cur = 0;
        for &b in bits {
            if b {
                if cur > 0 {
                    runs.push(cur);
                }
                cur = 0;
            } else {
                cur += 1;
            }
        }
        if cur > 0 {
            runs.push(cur);
        }
        runs
    }

    #[test]
    fn witness_one_zero_runs() {
        for k in 8..=20 {
            let x = witness_one(k * k, k).unwrap();
            assert_eq!(x.weight(), 5 * k);
            let runs = longest_zero_runs(&x.bits().collect::<Vec<_>>());
            assert_eq!(runs.iter().filter(|&&r| r == k - 2).count(), 1, "k={k}");
            assert!(runs.iter().all(|&r| r <= k - 2));
            assert_eq!(runs.iter().filter(|&&r| r >= k - 4).count(), 1, "k={k}");
        }
    }

    #[test]
    fn new_function_examples() {
        let f = new_function(512, 8).unwrap();
        assert!(f.eval(&witness_one(512, 8).unwrap()));
        assert!(!f.eval(&Word::zeros(512).unwrap()));
        let padded = witness_one(65, 8).unwrap();
        assert!(!padded.get(65).unwrap());
        assert!(new_function(65, 8).unwrap().eval(&padded));
        assert!(new_function(63, 8).is_err());
        assert!(new_function(100, 7).is_err());
    }

    #[test]
    fn block_size_rules() {
        assert_eq!(theorem31_block_size(512).unwrap(), 8);
        assert_eq!(theorem31_block_size(513).unwrap(), 8);
        assert_eq!(theorem31_block_size(1000).unwrap(), 10);
        assert_eq!(theorem31_block_size(999).unwrap(), 9);
        assert!(theorem31_block_size(100).is_err());
        assert_eq!(theorem32_block_size(64).unwrap(), 8);
        assert_eq!(theorem32_block_size(100).unwrap(), 10);
        assert_eq!(theorem32_block_size(101).unwrap(), 10);
        assert!(theorem32_block_size(63).is_err());
        assert_eq!(theorem31_function(1000).unwrap().block_size(), Some(10));
    }

    #[test]
    fn witness_zero_layout() {
        let w = witness_zero(512, 8).unwrap();
        assert_eq!(w.m, 8);
        assert_eq!(w.sensitive, vec![2, 66, 130, 194, 258, 322, 386, 450]);
        assert!(!new_function(512, 8).unwrap().eval(&w.word));
        let w = witness_zero(100, 10).unwrap();
        assert_eq!((w.m, w.r, w.sensitive.len()), (1, 0, 1));
        let w = witness_zero(101, 10).unwrap();
        assert_eq!((w.m, w.r), (1, 1));
    }

    #[test]
    fn rubinstein_examples() {
        let f = rubinstein_cyclic(4).unwrap();
        assert_eq!(f.arity(), 16);
        assert!(f.eval(&"0110 0000 0000 0000".parse().unwrap()));
        assert!(!f.eval(&Word::zeros(16).unwrap()));
        assert!(f.eval(&"1000 0000 0000 0001".parse().unwrap()));
        assert!(rubinstein_cyclic(1).is_err());
    }

    #[test]
    fn random_instances_are_deterministic() {
        let a = random_minterm_transitive(10, 3, 1).unwrap();
        let b = random_minterm_transitive(10, 3, 1).unwrap();
        assert_eq!(a.minterm(), b.minterm());
        assert_eq!(a.symmetry(), b.symmetry());
        assert_eq!(TruthTable::build(&a, 24).unwrap(), TruthTable::build(&b, 24).unwrap());
        for seed in 0..40 {
            let f = random_minterm_transitive(12, 1 + (seed as usize % 12), seed).unwrap();
            assert_eq!(f.k(), 1 + (seed as usize % 12));
            assert!(f.group().unwrap().is_transitive());
        }
        assert!(random_minterm_transitive(5, 6, 0).is_err());
    }
}
