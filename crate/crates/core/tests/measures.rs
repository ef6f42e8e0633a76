use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use senslab::analyzers::{
    block_sensitivity_at, block_sensitivity_at_index, effective_variables, global_block_sensitivity,
    global_sensitivity, sensitivity_at, simon_bound_check, BlockLimits, BlockScratch,
};
use senslab::constructions::random_minterm_transitive;
use senslab::{BooleanFunction, Elementary, TruthTable, Word};

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> (TruthTable, Vec<bool>) {
    let p = rng.gen_range(0.1..0.9);
    let values: Vec<bool> = (0..1usize << n).map(|_| rng.gen_bool(p)).collect();
    (TruthTable::from_values(n, &values).unwrap(), values)
}

/// `(s, s0, s1)` straight from the definition.
fn naive_profile(values: &[bool], n: usize) -> (usize, usize, usize) {
    let (mut s0, mut s1) = (0, 0);
    for (x, &v) in values.iter().enumerate() {
        let c = (0..n).filter(|b| values[x ^ (1 << b)] != v).count();
        if v {
            s1 = s1.max(c);
        } else {
            s0 = s0.max(c);
        }
    }
    (s0.max(s1), s0, s1)
}

#[test]
fn optimized_scan_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let (t, values) = random_table(&mut rng, n);
        let p = global_sensitivity(&t);
        assert_eq!((p.s.value, p.s0.value, p.s1.value), naive_profile(&values, n));
        let w = p.s.witness.unwrap();
        assert_eq!(sensitivity_at(&t, &w).unwrap(), p.s.value);
    }
}

#[test]
fn optimized_scan_matches_definition_on_wide_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [13, 15, 16] {
        let (t, values) = random_table(&mut rng, n);
        let p = global_sensitivity(&t);
        assert_eq!((p.s.value, p.s0.value, p.s1.value), naive_profile(&values, n));
    }
}

#[test]
fn witness_is_smallest_maximizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let n = rng.gen_range(2..=9);
        let (t, values) = random_table(&mut rng, n);
        let sens: Vec<usize> =
            (0..values.len()).map(|x| (0..n).filter(|b| values[x ^ (1 << b)] != values[x]).count()).collect();
        let best = *sens.iter().max().unwrap();
        let first = sens.iter().position(|&c| c == best).unwrap() as u64;
        assert_eq!(global_sensitivity(&t).s.witness.unwrap().to_index(), Some(first));
        let bs = global_block_sensitivity(&t, &BlockLimits::default(), 16).unwrap();
        let mut scratch = BlockScratch::new(n);
        let per_point: Vec<usize> = (0..t.len())
            .map(|x| block_sensitivity_at_index(&t, x, &BlockLimits::default(), &mut scratch).value)
            .collect();
        let bs_best = *per_point.iter().max().unwrap();
        assert_eq!(bs.value, bs_best);
        assert_eq!(bs.witness.unwrap().to_index(), Some(per_point.iter().position(|&v| v == bs_best).unwrap() as u64));
    }
}

fn relabel(values: &[bool], n: usize, perm: &[usize]) -> Vec<bool> {
    // g(x) = f(y) where bit perm[b] of x becomes bit b of y
    (0..values.len())
        .map(|x| {
            let y = (0..n).filter(|&b| (x >> perm[b]) & 1 == 1).fold(0, |acc, b| acc | (1 << b));
            values[y]
        })
        .collect()
}

#[test]
fn measures_are_invariant_under_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let n = rng.gen_range(2..=10);
        let (t, values) = random_table(&mut rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let g = TruthTable::from_values(n, &relabel(&values, n, &perm)).unwrap();
        let (a, b) = (global_sensitivity(&t), global_sensitivity(&g));
        assert_eq!((a.s.value, a.s0.value, a.s1.value), (b.s.value, b.s0.value, b.s1.value));
        if n <= 8 {
            let limits = BlockLimits::default();
            assert_eq!(
                global_block_sensitivity(&t, &limits, 16).unwrap().value,
                global_block_sensitivity(&g, &limits, 16).unwrap().value
            );
        }
        assert_eq!(effective_variables(&t).len(), effective_variables(&g).len());
    }
}

#[test]
fn capped_block_sensitivity_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let n = rng.gen_range(2..=10);
        let (t, _) = random_table(&mut rng, n);
        let mut scratch = BlockScratch::new(n);
        for _ in 0..8 {
            let x = rng.gen_range(0..t.len());
            let by_cap: Vec<usize> = (1..=n)
                .map(|l| {
                    let limits = BlockLimits { block_cap: Some(l), ..BlockLimits::default() };
                    block_sensitivity_at_index(&t, x, &limits, &mut scratch).value
                })
                .collect();
            assert!(by_cap.windows(2).all(|w| w[0] <= w[1]), "{by_cap:?}");
            let full = block_sensitivity_at_index(&t, x, &BlockLimits::default(), &mut scratch);
            assert_eq!(by_cap[n - 1], full.value);
            let word = Word::from_index(n, x).unwrap();
            assert_eq!(by_cap[0], sensitivity_at(&t, &word).unwrap());
            // the packing is a real one
            let fx = t.get(x);
            let mut used = vec![false; n + 1];
            for block in &full.packing.blocks {
                assert_ne!(t.eval(&word.flip_block(block).unwrap()), fx);
                for &p in block {
                    assert!(!std::mem::replace(&mut used[p], true));
                }
            }
        }
    }
}

#[test]
fn elementary_function_values() {
    for n in 1..=8 {
        for (f, s, bs) in [(Elementary::And(n), n, n), (Elementary::Or(n), n, n), (Elementary::Parity(n), n, n)] {
            let t = TruthTable::build(&f, 24).unwrap();
            assert_eq!(global_sensitivity(&t).s.value, s);
            assert_eq!(global_block_sensitivity(&t, &BlockLimits::default(), 16).unwrap().value, bs);
        }
        let t = TruthTable::build(&Elementary::Constant(n, true), 24).unwrap();
        assert_eq!(global_sensitivity(&t).s.value, 0);
        assert!(effective_variables(&t).is_empty());
    }
}

#[test]
fn simon_bound_for_or() {
    let t = TruthTable::build(&Elementary::Or(8), 24).unwrap();
    let c = simon_bound_check(&t).unwrap();
    assert!(c.holds);
    assert_eq!((c.lhs, c.effective), (8, 8));
    assert!((c.rhs - (1.5 - 0.5 * 3f64.log2() + 0.5)).abs() < 1e-12);
}

#[test]
fn transitive_functions_have_polynomially_bounded_block_sensitivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for seed in 0..40 {
        let n = rng.gen_range(4..=16);
        let k = rng.gen_range(1..=n);
        let f = random_minterm_transitive(n, k, seed).unwrap();
        let t = TruthTable::build(&f, 24).unwrap();
        let s = global_sensitivity(&t).s.value;
        let bs = global_block_sensitivity(&t, &BlockLimits::default(), 16).unwrap();
        assert!(!bs.exhausted);
        assert!(bs.value <= 64 * s.pow(3), "n={n} k={k}: bs={} s={s}", bs.value);
        worst = worst.max(bs.value as f64 / (s.pow(3) as f64));
    }
    eprintln!("largest bs/s^3 observed: {worst:.4}");
}

#[test]
fn pointwise_search_on_wide_words() {
    // OR on 40 bits at zero: every position is its own block
    let f = Elementary::Or(40);
    let r = block_sensitivity_at(&f, &Word::zeros(40).unwrap(), &BlockLimits::default()).unwrap();
    assert_eq!(r.value, 40);
    // AND at zero: one block, the whole input, found only after every smaller subset
    let r = block_sensitivity_at(&Elementary::And(14), &Word::zeros(14).unwrap(), &BlockLimits::default()).unwrap();
    assert_eq!((r.value, r.exhausted), (1, false));
    let limits = BlockLimits { block_cap: None, node_cap: 100_000 };
    let r = block_sensitivity_at(&Elementary::And(40), &Word::zeros(40).unwrap(), &limits).unwrap();
    assert!(r.exhausted);
    assert_eq!(r.value, 0);
}

#[test]
fn node_cap_flags_lower_bound() {
    let f = Elementary::Parity(20);
    let limits = BlockLimits { block_cap: None, node_cap: 5 };
    let r = block_sensitivity_at(&f, &Word::zeros(20).unwrap(), &limits).unwrap();
    assert!(r.exhausted);
    assert!(r.value <= 20);
}
