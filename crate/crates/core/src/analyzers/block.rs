//! Block sensitivity by minimal-block enumeration and branch-and-bound packing.
//!
//! Blocks are bit masks over positions: bit `p - 1` stands for position `p`.
//! Any optimal packing can be shrunk to one made of inclusion-minimal
//! sensitive blocks, so only those are enumerated. They are produced level by
//! level (size ascending, then lexicographic): a set survives to the next
//! level only if flipping it leaves `f` unchanged and all its one-smaller
//! subsets survived, and a candidate whose flip changes `f` while all its
//! one-smaller subsets survived is minimal.

use std::collections::HashSet;

use rayon::prelude::*;

use super::sensitivity::{require_dense, sensitivity_at_index};
use super::{Budget, MeasureReport, Method};
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, TruthTable};
use crate::word::Word;

/// Per-point ceiling on search nodes (enumeration plus packing).
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

/// Largest arity accepted by [`global_block_sensitivity`] by default.
pub const DEFAULT_BLOCK_SEARCH_LIMIT: usize = 16;

// dense membership bitmaps up to this arity, hashing above it
const DENSE_MEMBERSHIP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockLimits {
    /// Maximum block size `ℓ`; `None` means unrestricted.
    pub block_cap: Option<usize>,
    pub node_cap: u64,
}

impl Default for BlockLimits {
    fn default() -> Self {
        BlockLimits { block_cap: None, node_cap: DEFAULT_NODE_CAP }
    }
}

/// Pairwise disjoint blocks, each of which flips `f` at `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPacking {
    pub base: Word,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSearch {
    pub value: usize,
    pub packing: BlockPacking,
    /// The node budget ran out; `value` is a lower bound.
    pub exhausted: bool,
    pub nodes: u64,
    pub minimal_blocks: usize,
}

/// Reusable membership storage for repeated searches at the same arity.
pub struct BlockScratch {
    dense: Vec<u64>,
    touched: Vec<u64>,
    sparse: HashSet<u64>,
}

impl BlockScratch {
    pub fn new(n: usize) -> Self {
        let dense = if n <= DENSE_MEMBERSHIP { vec![0; (1usize << n).div_ceil(64)] } else { vec![] };
        BlockScratch { dense, touched: vec![], sparse: HashSet::new() }
    }

    fn insert(&mut self, set: u64) {
        if self.dense.is_empty() {
            self.sparse.insert(set);
        } else {
            self.dense[(set / 64) as usize] |= 1 << (set % 64);
            self.touched.push(set);
        }
    }

    fn contains(&self, set: u64) -> bool {
        if self.dense.is_empty() {
            self.sparse.contains(&set)
        } else {
            (self.dense[(set / 64) as usize] >> (set % 64)) & 1 == 1
        }
    }

    fn clear(&mut self) {
        for set in self.touched.drain(..) {
            self.dense[(set / 64) as usize] = 0;
        }
        self.sparse.clear();
    }
}

fn mask_to_positions(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| (mask >> b) & 1 == 1).map(|b| b + 1).collect()
}

struct Search<'a> {
    node_cap: u64,
    nodes: u64,
    exhausted: bool,
    scratch: &'a mut BlockScratch,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            self.exhausted = true;
        }
        !self.exhausted
    }

    /// Inclusion-minimal sensitive blocks of size at most `cap`.
    fn minimal_blocks(&mut self, n: usize, cap: usize, sensitive: impl Fn(u64) -> bool) -> Vec<u64> {
        let mut minimal = vec![];
        let mut level = vec![0u64];
        self.scratch.insert(0);
        'levels: for _ in 1..=cap {
            let mut next = vec![];
            for &set in &level {
                let start = 64 - set.leading_zeros() as usize;
                for j in start..n {
                    let cand = set | (1 << j);
                    let mut rest = set;
                    let mut closed = true;
                    while rest != 0 {
                        let bit = rest & rest.wrapping_neg();
                        if !self.scratch.contains(cand ^ bit) {
                            closed = false;
                            break;
                        }
                        rest ^= bit;
                    }
                    if !closed {
                        continue;
                    }
                    if !self.tick() {
                        break 'levels;
                    }
                    if sensitive(cand) {
                        minimal.push(cand);
                    } else {
                        self.scratch.insert(cand);
                        next.push(cand);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            level = next;
        }
        self.scratch.clear();
        minimal
    }

    /// Maximum number of pairwise disjoint blocks; `blocks` sorted by size.
    fn pack(&mut self, blocks: &[u64]) -> Vec<u64> {
        let mut best = vec![];
        let mut used = 0u64;
        for &b in blocks {
            if b & used == 0 {
                best.push(b);
                used |= b;
            }
        }
        let mut chosen = vec![];
        self.branch(blocks.to_vec(), &mut chosen, &mut best);
        best
    }

    fn branch(&mut self, candidates: Vec<u64>, chosen: &mut Vec<u64>, best: &mut Vec<u64>) {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        if candidates.is_empty() || !self.tick() {
            return;
        }
        let coverable = candidates.iter().fold(0u64, |acc, b| acc | b);
        let smallest = candidates.iter().map(|b| b.count_ones()).min().unwrap_or(1);
        if chosen.len() + (coverable.count_ones() / smallest) as usize <= best.len() {
            return;
        }
        let pivot = coverable & coverable.wrapping_neg();
        for &b in candidates.iter().filter(|&&b| b & pivot != 0) {
            let rest: Vec<u64> = candidates.iter().copied().filter(|&c| c & b == 0).collect();
            chosen.push(b);
            self.branch(rest, chosen, best);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
        let rest: Vec<u64> = candidates.into_iter().filter(|&c| c & pivot == 0).collect();
        self.branch(rest, chosen, best);
    }
}

fn run_search(
    n: usize,
    limits: &BlockLimits,
    scratch: &mut BlockScratch,
    sensitive: impl Fn(u64) -> bool,
) -> (Vec<u64>, usize, bool, u64) {
    let cap = limits.block_cap.unwrap_or(n).min(n);
    let mut search = Search { node_cap: limits.node_cap, nodes: 0, exhausted: false, scratch };
    let minimal = search.minimal_blocks(n, cap, sensitive);
    let packing = search.pack(&minimal);
    (packing, minimal.len(), search.exhausted, search.nodes)
}

fn check_block_arity(n: usize) -> Result<()> {
    if n > 64 {
        Err(Error::Parameter(format!("block search supports n ≤ 64, got {n}")))
    } else {
        Ok(())
    }
}

/// `bs(f, x)`, or `bs_ℓ(f, x)` when `limits.block_cap = Some(ℓ)`, with one
/// optimal packing.
pub fn block_sensitivity_at<F: BooleanFunction + ?Sized>(f: &F, x: &Word, limits: &BlockLimits) -> Result<BlockSearch> {
    let n = x.len();
    check_block_arity(n)?;
    let fx = f.evaluate(x)?;
    let mut scratch = BlockScratch::new(n);
    let (packing, minimal_blocks, exhausted, nodes) = run_search(n, limits, &mut scratch, |mask| {
        let mut y = x.clone();
        for b in 0..n {
            if (mask >> b) & 1 == 1 {
                y.toggle_raw(b);
            }
        }
        f.eval(&y) != fx
    });
    Ok(BlockSearch {
        value: packing.len(),
        packing: BlockPacking { base: x.clone(), blocks: packing.into_iter().map(mask_to_positions).collect() },
        exhausted,
        nodes,
        minimal_blocks,
    })
}

/// Table-backed variant of [`block_sensitivity_at`] for the word with value `index`.
pub fn block_sensitivity_at_index(
    table: &TruthTable,
    index: u64,
    limits: &BlockLimits,
    scratch: &mut BlockScratch,
) -> BlockSearch {
    let n = table.arity();
    let fx = table.get(index);
    let shift = 64 - n as u32;
    let (packing, minimal_blocks, exhausted, nodes) =
        run_search(n, limits, scratch, |mask| table.get(index ^ (mask.reverse_bits() >> shift)) != fx);
    BlockSearch {
        value: packing.len(),
        packing: BlockPacking {
            base: Word::from_index(n, index).expect("dense arity"),
            blocks: packing.into_iter().map(mask_to_positions).collect(),
        },
        exhausted,
        nodes,
        minimal_blocks,
    }
}

const PRUNE_CHUNK: usize = 4096;

/// `bs(f) = max_x bs(f, x)` (or `bs_ℓ(f)`), smallest maximizing word as witness.
pub fn global_block_sensitivity(table: &TruthTable, limits: &BlockLimits, arity_limit: usize) -> Result<MeasureReport> {
    require_dense(table, arity_limit)?;
    let n = table.arity();
    // Singleton blocks are sensitive bits and every other block has two or
    // more positions, so bs(f, x) <= s + (n - s) / 2.
    let bound = |s: usize| s + (n - s) / 2;
    let mut order: Vec<(usize, u64)> =
        (0..table.len()).into_par_iter().map(|idx| (bound(sensitivity_at_index(table, idx)), idx)).collect();
    order.par_sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let merge = |a: (usize, u64, bool), b: (usize, u64, bool)| {
        let ex = a.2 || b.2;
        let pick = if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a };
        (pick.0, pick.1, ex)
    };
    let mut best = (0, u64::MAX, false);
    for chunk in order.chunks(PRUNE_CHUNK) {
        if chunk[0].0 < best.0 {
            break;
        }
        let floor = best.0;
        let found = chunk
            .par_iter()
            .filter(|(ub, _)| *ub >= floor)
            .map_init(
                || BlockScratch::new(n),
                |scratch, &(_, idx)| {
                    let r = block_sensitivity_at_index(table, idx, limits, scratch);
                    (r.value, idx, r.exhausted)
                },
            )
            .reduce(|| (0, u64::MAX, false), merge);
        best = merge(best, found);
    }
    let (value, index, exhausted) = best;
    let measure = match limits.block_cap {
        Some(l) if l < n => format!("bs_{l}"),
        _ => "bs".to_string(),
    };
    Ok(MeasureReport {
        measure,
        value,
        witness: Some(Word::from_index(n, index).expect("dense arity")),
        method: Method::BlockSearch,
        budget: Budget { dense_limit: arity_limit, block_cap: limits.block_cap, node_cap: limits.node_cap },
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{Elementary, DEFAULT_DENSE_LIMIT};

    fn bs(f: &impl BooleanFunction, x: &str) -> BlockSearch {
        block_sensitivity_at(f, &x.parse().unwrap(), &BlockLimits::default()).unwrap()
    }

    #[test]
    fn or_at_zero_uses_singletons() {
        let r = bs(&Elementary::Or(4), "0000");
        assert_eq!(r.value, 4);
        assert_eq!(r.packing.blocks, vec![vec![1], vec![2], vec![3], vec![4]]);
        assert!(!r.exhausted);
    }

    #[test]
    fn and_at_ones() {
        assert_eq!(bs(&Elementary::And(3), "111").value, 3);
        assert_eq!(bs(&Elementary::And(3), "000").value, 1);
    }

    #[test]
    fn blocks_are_minimal_and_sensitive() {
        // 1 iff at least two ones among three bits
        let maj = crate::function::FnFunction::new(3, |x: &Word| x.weight() >= 2);
        let r = bs(&maj, "000");
        assert_eq!(r.value, 1);
        assert_eq!(r.minimal_blocks, 3);
        let x: Word = "000".parse().unwrap();
        for b in &r.packing.blocks {
            assert_ne!(maj.eval(&x.flip_block(b).unwrap()), maj.eval(&x));
        }
    }

    #[test]
    fn capped_search_reports_lower_bound() {
        let t = TruthTable::build(&Elementary::Parity(10), DEFAULT_DENSE_LIMIT).unwrap();
        let mut scratch = BlockScratch::new(10);
        let limits = BlockLimits { block_cap: None, node_cap: 3 };
        let r = block_sensitivity_at_index(&t, 0, &limits, &mut scratch);
        assert!(r.exhausted);
        assert!(r.value <= 10);
        let full = block_sensitivity_at_index(&t, 0, &BlockLimits::default(), &mut scratch);
        assert_eq!(full.value, 10);
        assert!(!full.exhausted);
    }

    #[test]
    fn table_and_evaluator_paths_agree() {
        let f = crate::function::FnFunction::new(7, |x: &Word| {
            let s = x.support();
            s.len() == 2 && s[1] - s[0] <= 2 || s.len() >= 5
        });
        let t = TruthTable::build(&f, DEFAULT_DENSE_LIMIT).unwrap();
        let mut scratch = BlockScratch::new(7);
        for idx in 0..t.len() {
            let x = Word::from_index(7, idx).unwrap();
            let a = block_sensitivity_at(&f, &x, &BlockLimits::default()).unwrap();
            let b = block_sensitivity_at_index(&t, idx, &BlockLimits::default(), &mut scratch);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn global_parity_and_capped_measure_name() {
        let t = TruthTable::build(&Elementary::Parity(4), DEFAULT_DENSE_LIMIT).unwrap();
        let r = global_block_sensitivity(&t, &BlockLimits::default(), DEFAULT_BLOCK_SEARCH_LIMIT).unwrap();
        assert_eq!((r.measure.as_str(), r.value), ("bs", 4));
        let capped = BlockLimits { block_cap: Some(2), ..BlockLimits::default() };
        assert_eq!(global_block_sensitivity(&t, &capped, 16).unwrap().measure, "bs_2");
        let big = TruthTable::build(&Elementary::Or(17), DEFAULT_DENSE_LIMIT).unwrap();
        assert!(global_block_sensitivity(&big, &BlockLimits::default(), 16).is_err());
    }
}
