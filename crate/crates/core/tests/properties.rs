use proptest::prelude::*;
use stopset_core::codes::{build, CodeFamily, Construction, Family, ParityCheckMatrix};
use stopset_core::decode::{incorrigible_by_codewords, incorrigible_by_rank, peel_mask, ErasurePattern, MlOracle};
use stopset_core::gf2::{BitMatrix, BitVector};
use stopset_core::stopping::{exhaustive_ssd, is_stopping_mask, StoppingCounter};

fn matrix_from_masks(n: usize, rows: &[u64]) -> ParityCheckMatrix {
    let rows = rows
        .iter()
        .map(|&r| BitVector::from_u64(n, r).unwrap())
        .collect();
    ParityCheckMatrix::external(BitMatrix::from_rows(n, rows).unwrap(), None).unwrap()
}

fn small_matrix() -> impl Strategy<Value = (usize, Vec<u64>)> {
    (2usize..=10).prop_flat_map(|n| (Just(n), prop::collection::vec(0u64..(1 << n), 1..8)))
}

fn largest_stopping_subset(rows: &[u64], e: u64) -> u64 {
    let mut best = 0u64;
    let mut s = e;
    loop {
        if is_stopping_mask(rows, s) && s.count_ones() > best.count_ones() {
            best = s;
        }
        if s == 0 {
            return best;
        }
        s = (s - 1) & e;
    }
}

fn family() -> impl Strategy<Value = CodeFamily> {
    (prop::sample::select(Family::ALL.to_vec()), 2u32..=4).prop_map(|(f, m)| CodeFamily::new(f, m).unwrap())
}

proptest! {
    #[test]
    fn stopping_sets_closed_under_union((n, rows) in small_matrix(), a in any::<u64>(), b in any::<u64>()) {
        let full = (1u64 << n) - 1;
        let (a, b) = (a & full, b & full);
        if is_stopping_mask(&rows, a) && is_stopping_mask(&rows, b) {
            prop_assert!(is_stopping_mask(&rows, a | b));
        }
    }

    #[test]
    fn peel_residual_is_largest_stopping_subset((n, rows) in small_matrix(), e in any::<u64>()) {
        let e = e & ((1u64 << n) - 1);
        let r = peel_mask(&rows, e);
        prop_assert!(is_stopping_mask(&rows, r));
        prop_assert_eq!(r & !e, 0);
        let best = largest_stopping_subset(&rows, e);
        prop_assert_eq!(r, best);
    }

    #[test]
    fn count_ranges_add_up((n, rows) in small_matrix(), cut in any::<u64>()) {
        let h = matrix_from_masks(n, &rows);
        let counter = StoppingCounter::new(&h).unwrap();
        let total = counter.total();
        let cut = cut % (total + 1);
        let mut split = counter.count_range(0..cut);
        for (x, y) in split.iter_mut().zip(counter.count_range(cut..total)) {
            *x += y;
        }
        prop_assert_eq!(split, counter.count_all());
    }

    #[test]
    fn ssd_ignores_row_order_and_duplicates((n, rows) in small_matrix(), dup in any::<prop::sample::Index>()) {
        let base = exhaustive_ssd(&matrix_from_masks(n, &rows)).unwrap();
        let mut shuffled: Vec<u64> = rows.iter().rev().copied().collect();
        shuffled.push(rows[dup.index(rows.len())]);
        prop_assert_eq!(base, exhaustive_ssd(&matrix_from_masks(n, &shuffled)).unwrap());
    }

    #[test]
    fn rank_and_codeword_tests_agree(f in family(), e in any::<u64>()) {
        let n = f.n();
        let mask = e & ((1u64 << n) - 1);
        let pattern = ErasurePattern::from_mask(n, mask).unwrap();
        let by_rank = incorrigible_by_rank(f, &pattern).unwrap();
        prop_assert_eq!(by_rank, incorrigible_by_codewords(f, &pattern).unwrap());
        let oracle = MlOracle::new(f).unwrap();
        prop_assert_eq!(by_rank, oracle.by_rank(mask));
    }

    #[test]
    fn optimal_construction_peels_like_ml(f in family(), e in any::<u64>()) {
        let n = f.n();
        let mask = e & ((1u64 << n) - 1);
        let h = build(f, f.family().optimal_construction()).unwrap();
        let rows = h.matrix().row_masks().unwrap();
        let oracle = MlOracle::new(f).unwrap();
        prop_assert_eq!(peel_mask(&rows, mask) != 0, oracle.by_rank(mask));
    }

    #[test]
    fn hstar_residual_is_never_smaller(f in family(), e in any::<u64>()) {
        let n = f.n();
        let mask = e & ((1u64 << n) - 1);
        let full = build(f, Construction::FullRank).unwrap().matrix().row_masks().unwrap();
        let star = build(f, Construction::HStar).unwrap().matrix().row_masks().unwrap();
        let r_full = peel_mask(&full, mask);
        let r_star = peel_mask(&star, mask);
        prop_assert_eq!(r_star & !r_full, 0);
    }
}
