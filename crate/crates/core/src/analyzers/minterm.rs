use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::sensitivity::global_sensitivity;
use crate::assignment::PartialAssignment;
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, TruthTable};

/// Evaluation budget for [`verify_minterm`].
pub const DEFAULT_MINTERM_BUDGET: u64 = 1 << 26;

/// Positions `i` with `f(x) != f(x^i)` for at least one word `x`.
pub fn effective_variables(table: &TruthTable) -> BTreeSet<usize> {
    let n = table.arity();
    (1..=n)
        .filter(|&pos| {
            let m = table.position_mask(pos);
            (0..table.len()).any(|idx| idx & m == 0 && table.get(idx) != table.get(idx | m))
        })
        .collect()
}

/// True iff `p` is a 1-certificate of `f` and no sub-assignment with one
/// support position dropped is.
///
/// Costs `(|S| + 1) · 2^{n - |S|}` evaluations; larger requests fail with
/// [`Error::BudgetExceeded`].
pub fn verify_minterm<F: BooleanFunction + ?Sized>(f: &F, p: &PartialAssignment, budget: u64) -> Result<bool> {
    let n = f.arity();
    if p.arity() != n {
        return Err(Error::ArityMismatch { expected: n, found: p.arity() });
    }
    let free: Vec<usize> = (1..=n).filter(|pos| p.value(*pos).is_none()).collect();
    if free.len() >= 63 || (p.len() as u64 + 1).saturating_mul(1u64 << free.len()) > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    let base = p.pad(false);
    let extensions = 1u64 << free.len();
    // evaluates the extension selected by `bits`, with `flip` (0-based) switched
    let value = |bits: u64, flip: Option<usize>| -> bool {
        let mut x = base.clone();
        for (j, &pos) in free.iter().enumerate() {
            if (bits >> j) & 1 == 1 {
                x.toggle_raw(pos - 1);
            }
        }
        if let Some(i) = flip {
            x.toggle_raw(i);
        }
        f.eval(&x)
    };
    let value_indexed = base.to_index().map(|b| {
        let masks: Vec<u64> = free.iter().map(|&pos| 1u64 << (n - pos)).collect();
        (b, masks)
    });
    let eval = |bits: u64, flip: Option<usize>| -> bool {
        match &value_indexed {
            Some((b, masks)) => {
                let mut idx = *b;
                for (j, m) in masks.iter().enumerate() {
                    if (bits >> j) & 1 == 1 {
                        idx ^= m;
                    }
                }
                if let Some(i) = flip {
                    idx ^= 1u64 << (n - 1 - i);
                }
                f.eval_index(idx)
            }
            None => value(bits, flip),
        }
    };
    if !(0..extensions).all(|bits| eval(bits, None)) {
        return Ok(false);
    }
    Ok(p.support().into_iter().all(|s| (0..extensions).any(|bits| !eval(bits, Some(s - 1)))))
}

/// Both sides of `s(f) ≥ ½ log n' − ½ log log n' + ½` over the `n'`
/// effective variables, logarithms base 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimonCheck {
    pub holds: bool,
    pub lhs: usize,
    pub rhs: f64,
    pub effective: usize,
}

pub fn simon_bound_check(table: &TruthTable) -> Result<SimonCheck> {
    let effective = effective_variables(table).len();
    if effective < 2 {
        return Err(Error::NotApplicable(format!("{effective} effective variables; need at least 2")));
    }
    let lg = (effective as f64).log2();
    let rhs = 0.5 * lg - 0.5 * lg.log2() + 0.5;
    let lhs = global_sensitivity(table).s.value;
    Ok(SimonCheck { holds: lhs as f64 >= rhs, lhs, rhs, effective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::OrbitPattern;
    use crate::function::{Elementary, FnFunction, DEFAULT_DENSE_LIMIT};
    use crate::word::Word;

    fn table(f: &impl BooleanFunction) -> TruthTable {
        TruthTable::build(f, DEFAULT_DENSE_LIMIT).unwrap()
    }

    fn pa(n: usize, e: &[(usize, u8)]) -> PartialAssignment {
        PartialAssignment::new(n, e.iter().map(|&(p, v)| (p, v == 1))).unwrap()
    }

    #[test]
    fn effective_variable_examples() {
        assert!(effective_variables(&table(&Elementary::Constant(5, true))).is_empty());
        assert_eq!(effective_variables(&table(&Elementary::Or(4))), (1..=4).collect());
        let ignores_third = FnFunction::new(4, |x: &Word| x.get(1).unwrap() ^ x.get(4).unwrap());
        assert_eq!(effective_variables(&table(&ignores_third)), BTreeSet::from([1, 4]));
    }

    #[test]
    fn don_t_care_inside_window_is_not_effective() {
        // window 1?1 on a 3-cycle: the middle bit never matters
        let cyc = OrbitPattern::cyclic(pa(3, &[(1, 1), (3, 1)])).unwrap();
        let eff = effective_variables(&table(&cyc));
        assert_eq!(eff.len(), 3);
        let rigid = FnFunction::new(12, |x: &Word| x.get(1).unwrap() && x.get(3).unwrap());
        assert_eq!(effective_variables(&table(&rigid)), BTreeSet::from([1, 3]));
    }

    #[test]
    fn minterm_examples() {
        let p = pa(6, &[(1, 1), (2, 1)]);
        let f = OrbitPattern::cyclic(p.clone()).unwrap();
        assert!(verify_minterm(&f, &p, DEFAULT_MINTERM_BUDGET).unwrap());
        let bigger = pa(6, &[(1, 1), (2, 1), (4, 0)]);
        assert!(!verify_minterm(&f, &bigger, DEFAULT_MINTERM_BUDGET).unwrap());
        assert!(!verify_minterm(&Elementary::And(3), &pa(3, &[(1, 1)]), DEFAULT_MINTERM_BUDGET).unwrap());
        assert!(verify_minterm(&Elementary::And(3), &pa(3, &[(1, 1), (2, 1), (3, 1)]), 100).unwrap());
        assert!(matches!(
            verify_minterm(&Elementary::And(30), &pa(30, &[(1, 1)]), 1000),
            Err(Error::BudgetExceeded(1000))
        ));
    }

    #[test]
    fn minterm_check_on_wide_word_path() {
        let f = FnFunction::new(70, |x: &Word| x.get(1).unwrap() && x.get(2).unwrap());
        let q = PartialAssignment::new(70, (1..=70).map(|i| (i, i <= 2))).unwrap();
        assert!(!verify_minterm(&f, &q, DEFAULT_MINTERM_BUDGET).unwrap());
        assert!(verify_minterm(&f, &pa(70, &[(1, 1), (2, 1)]), 1 << 4).is_err());
    }

    #[test]
    fn simon_examples() {
        let c = simon_bound_check(&table(&Elementary::Or(8))).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, 8);
        assert!((c.rhs - (1.5 - 0.5 * 3f64.log2() + 0.5)).abs() < 1e-12);
        assert!(simon_bound_check(&table(&Elementary::Parity(4))).unwrap().holds);
        let dictator = FnFunction::new(3, |x: &Word| x.get(2).unwrap());
        assert!(matches!(simon_bound_check(&table(&dictator)), Err(Error::NotApplicable(_))));
    }
}
