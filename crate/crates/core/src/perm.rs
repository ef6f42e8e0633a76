//! Permutations of `[n]`, generated groups and breadth-first orbits.
//!
//! Groups are only ever held as generator lists. Every orbit question is
//! answered by closing a starting object under the generators, so groups of
//! exponential order cost no more than the orbit being asked about.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::assignment::PartialAssignment;
use crate::error::{Error, Result};
use crate::word::Word;

/// Default ceiling on the number of members an orbit enumeration may produce.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// A bijection of `[n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // 0-based: image[i] = π(i + 1) - 1
    image: Vec<usize>,
}

impl Permutation {
    /// From one-line notation with 1-based images: `image[i-1] = π(i)`.
    pub fn new(image: Vec<usize>) -> Result<Permutation> {
        let n = image.len();
        if n == 0 {
            return Err(Error::EmptyArity);
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n {
                return Err(Error::NotAPermutation { n, reason: format!("image {v} out of range") });
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::NotAPermutation { n, reason: format!("image {v} repeated") });
            }
        }
        Ok(Permutation { image: image.into_iter().map(|v| v - 1).collect() })
    }

    pub fn identity(n: usize) -> Result<Permutation> {
        Permutation::new((1..=n).collect())
    }

    /// The n-cycle `i ↦ (i mod n) + 1`.
    pub fn n_cycle(n: usize) -> Result<Permutation> {
        Permutation::new((1..=n).map(|i| i % n + 1).collect())
    }

    /// Product of the given disjoint-or-not cycles, applied right to left.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Permutation> {
        let mut acc = Permutation::identity(n)?;
        for cycle in cycles.iter().rev() {
            let mut image: Vec<usize> = (1..=n).collect();
            for (idx, &a) in cycle.iter().enumerate() {
                let b = cycle[(idx + 1) % cycle.len()];
                if a == 0 || a > n || b == 0 || b > n {
                    return Err(Error::NotAPermutation { n, reason: format!("cycle entry out of range in {cycle:?}") });
                }
                image[a - 1] = b;
            }
            acc = Permutation::new(image)?.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// `π(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] + 1
    }

    /// One-line notation, 1-based.
    pub fn image(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.same_degree(other.degree())?;
        Ok(Permutation { image: other.image.iter().map(|&i| self.image[i]).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `p^π` with `p^π(i) = p(π⁻¹ i)`: support `S^π`, values carried along.
    pub fn apply_to_assignment(&self, p: &PartialAssignment) -> Result<PartialAssignment> {
        self.same_degree(p.arity())?;
        PartialAssignment::new(p.arity(), p.entries().map(|(s, v)| (self.apply(s), v)))
    }

    /// `x^π`, treating the word as a full assignment.
    pub fn apply_to_word(&self, x: &Word) -> Result<Word> {
        self.same_degree(x.len())?;
        let inv = self.inverse();
        Word::from_fn(x.len(), |i| x.get_raw(inv.image[i - 1]))
    }

    fn same_degree(&self, n: usize) -> Result<()> {
        if n != self.degree() {
            Err(Error::ArityMismatch { expected: self.degree(), found: n })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.image())
    }
}

/// A permutation group given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedGroup {
    n: usize,
    generators: Vec<Permutation>,
    orbit_cap: usize,
}

impl GeneratedGroup {
    pub fn new(generators: Vec<Permutation>) -> Result<GeneratedGroup> {
        let n = generators.first().ok_or(Error::NoGenerators)?.degree();
        if let Some(bad) = generators.iter().find(|g| g.degree() != n) {
            return Err(Error::ArityMismatch { expected: n, found: bad.degree() });
        }
        Ok(GeneratedGroup { n, generators, orbit_cap: DEFAULT_ORBIT_CAP })
    }

    pub fn with_orbit_cap(mut self, cap: usize) -> Self {
        self.orbit_cap = cap;
        self
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn orbit_cap(&self) -> usize {
        self.orbit_cap
    }

    /// Orbit of a single point, in breadth-first order.
    pub fn point_orbit(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = vec![start];
        seen[start - 1] = true;
        let mut head = 0;
        while head < order.len() {
            let i = order[head];
            head += 1;
            for g in &self.generators {
                let j = g.apply(i);
                if !std::mem::replace(&mut seen[j - 1], true) {
                    order.push(j);
                }
            }
        }
        order
    }

    /// True iff the orbit of point 1 is all of `[n]`.
    pub fn is_transitive(&self) -> bool {
        self.point_orbit(1).len() == self.n
    }

    /// `{p^π | π ∈ G}` by breadth-first closure from `p`: generators are tried
    /// in list order and the queue is FIFO, so the returned order is fixed.
    pub fn assignment_orbit(&self, p: &PartialAssignment) -> Result<Vec<PartialAssignment>> {
        if p.arity() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, found: p.arity() });
        }
        let mut seen: HashSet<PartialAssignment> = HashSet::from([p.clone()]);
        let mut order = vec![p.clone()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(idx) = queue.pop_front() {
            for g in &self.generators {
                let next = g.apply_to_assignment(&order[idx])?;
                if seen.insert(next.clone()) {
                    if order.len() == self.orbit_cap {
                        return Err(Error::OrbitCapExceeded { cap: self.orbit_cap });
                    }
                    order.push(next);
                    queue.push_back(order.len() - 1);
                }
            }
        }
        Ok(order)
    }
}

/// The group of cyclic shifts, generated by the n-cycle `i ↦ (i mod n) + 1`.
pub fn cyclic_group(n: usize) -> Result<GeneratedGroup> {
    GeneratedGroup::new(vec![Permutation::n_cycle(n)?])
}
