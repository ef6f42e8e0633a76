use rayon::prelude::*;

use super::{Budget, MeasureReport, Method};
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, TruthTable};
use crate::word::Word;

/// Positions `i` with `f(x) != f(x^i)`, ascending.
pub fn sensitive_positions<F: BooleanFunction + ?Sized>(f: &F, x: &Word) -> Result<Vec<usize>> {
    let fx = f.evaluate(x)?;
    let mut y = x.clone();
    let mut out = vec![];
    for i in 0..x.len() {
        y.toggle_raw(i);
        if f.eval(&y) != fx {
            out.push(i + 1);
        }
        y.toggle_raw(i);
    }
    Ok(out)
}

/// `s(f, x)` by `n` evaluations on the single-bit neighbours of `x`.
pub fn sensitivity_at<F: BooleanFunction + ?Sized>(f: &F, x: &Word) -> Result<usize> {
    Ok(sensitive_positions(f, x)?.len())
}

pub fn sensitivity_at_index(table: &TruthTable, index: u64) -> usize {
    let n = table.arity();
    let fx = table.get(index);
    (0..n).filter(|&b| table.get(index ^ (1 << b)) != fx).count()
}

/// `s`, `s⁰` and `s¹`. A class with no member (constant functions) reports 0
/// without a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensitivityProfile {
    pub s: MeasureReport,
    pub s0: MeasureReport,
    pub s1: MeasureReport,
}

#[derive(Clone, Copy, Debug, Default)]
struct Best {
    // (value, index); None when the class is empty
    zero: Option<(usize, u64)>,
    one: Option<(usize, u64)>,
}

fn better(a: Option<(usize, u64)>, b: Option<(usize, u64)>) -> Option<(usize, u64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
    }
}

const IN_LIMB: [(u64, u32); 6] = [
    (0x5555_5555_5555_5555, 1),
    (0x3333_3333_3333_3333, 2),
    (0x0F0F_0F0F_0F0F_0F0F, 4),
    (0x00FF_00FF_00FF_00FF, 8),
    (0x0000_FFFF_0000_FFFF, 16),
    (0x0000_0000_FFFF_FFFF, 32),
];

/// Sensitivity of the 64 entries of one limb, as bit-sliced counters.
#[allow(clippy::needless_range_loop)]
fn limb_scan(table: &TruthTable, limb: u64) -> Best {
    let n = table.arity();
    let len = table.len();
    let base = limb * 64;
    let word_at = |l: u64| table.limbs()[l as usize];
    let w = word_at(limb);
    // planes[p] holds bit p of every entry's count; n <= 63 needs 6 planes
    let mut planes = [0u64; 6];
    for b in 0..n {
        let diff = if b < 6 {
            let (m, s) = IN_LIMB[b];
            w ^ (((w >> s) & m) | ((w & m) << s))
        } else {
            w ^ word_at(limb ^ (1 << (b - 6)))
        };
        let mut carry = diff;
        for plane in planes.iter_mut() {
            let next = *plane & carry;
            *plane ^= carry;
            carry = next;
            if carry == 0 {
                break;
            }
        }
    }
    let mut best = Best::default();
    for j in 0..64u64.min(len - base) {
        let count = planes.iter().enumerate().map(|(p, plane)| (((plane >> j) & 1) as usize) << p).sum();
        let slot = if (w >> j) & 1 == 1 { &mut best.one } else { &mut best.zero };
        *slot = better(*slot, Some((count, base + j)));
    }
    best
}

/// Exact `s`, `s⁰`, `s¹` over all `2^n` words. Witnesses are the smallest
/// word value attaining each maximum.
pub fn global_sensitivity(table: &TruthTable) -> SensitivityProfile {
    let n = table.arity();
    let limbs = table.len().div_ceil(64);
    let best = (0..limbs)
        .into_par_iter()
        .map(|l| limb_scan(table, l))
        .reduce(Best::default, |a, b| Best { zero: better(a.zero, b.zero), one: better(a.one, b.one) });
    let budget = Budget { dense_limit: n, ..Budget::default() };
    let report = |measure: &str, slot: Option<(usize, u64)>| MeasureReport {
        measure: measure.to_string(),
        value: slot.map_or(0, |(v, _)| v),
        witness: slot.map(|(_, idx)| Word::from_index(n, idx).expect("dense arity")),
        method: Method::Exhaustive,
        budget,
        exhausted: false,
    };
    SensitivityProfile {
        s: report("s", better(best.zero, best.one)),
        s0: report("s0", best.zero),
        s1: report("s1", best.one),
    }
}

pub(crate) fn require_dense(table: &TruthTable, limit: usize) -> Result<()> {
    if table.arity() > limit {
        Err(Error::DenseLimitExceeded { n: table.arity(), limit })
    } else {
        Ok(())
    }
}
