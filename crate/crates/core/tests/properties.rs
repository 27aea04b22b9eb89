use std::collections::HashSet;

use horn_core::parabolic::{destabilizing_positions, ParabolicData};
use horn_core::pointcount::{
    count_solutions, enumerate_grassmannian, gaussian_binomial, random_flags,
};
use horn_core::probe::{
    certify_nonzero, hom_space, FlagBasis, Matrix, PrimeField, ProbeFlags, ProbeVerdict,
};
use horn_core::{HornEngine, LrOracle, Mode, ProblemTuple, SchubertIndex};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn subset(n: usize, k: usize) -> impl Strategy<Value = SchubertIndex> {
    proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), k)
        .prop_map(move |v| SchubertIndex::new(n, v).unwrap())
}

fn problem(max_n: usize, max_s: usize) -> impl Strategy<Value = ProblemTuple> {
    (2..=max_n, 1..=max_s)
        .prop_flat_map(|(n, s)| (Just(n), 1..n, Just(s)))
        .prop_flat_map(|(n, r, s)| proptest::collection::vec(subset(n, r), s))
        .prop_map(|indices| ProblemTuple::new(indices).unwrap())
}

fn gaussian_by_recurrence(n: usize, k: usize, q: u128) -> u128 {
    if k == 0 || k == n {
        return 1;
    }
    if k > n {
        return 0;
    }
    gaussian_by_recurrence(n - 1, k - 1, q) + q.pow(k as u32) * gaussian_by_recurrence(n - 1, k, q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_binomial_matches_recurrence(n in 0..12usize, k in 0..12usize, q in prop_oneof![Just(2u64), Just(3), Just(5)]) {
        prop_assert_eq!(gaussian_binomial(n, k, q), gaussian_by_recurrence(n, k, q as u128));
    }

    #[test]
    fn matrix_inverse_and_rank_nullity(m in 1..7usize, k in 1..7usize, seed in any::<u64>(), p in prop_oneof![Just(2u64), Just(3), Just(32003)]) {
        let field = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix::random(field, m, k, &mut rng);
        let null = a.nullspace();
        prop_assert_eq!(a.rank() + null.cols(), k);
        prop_assert!(a.mul(&null).is_zero());
        let sq = Matrix::random(field, m, m, &mut rng);
        if let Some(inv) = sq.inverse() {
            prop_assert_eq!(sq.mul(&inv), Matrix::identity(field, m));
        } else {
            prop_assert!(sq.rank() < m);
        }
    }

    #[test]
    fn slopes_scale_and_keep_their_argmax(p in problem(6, 3), factor in 2..=3i64) {
        let engine = HornEngine::default();
        let data = ParabolicData::from_problem(&p);
        let scaled = data.scaled(factor);
        let f = Rational64::from_integer(factor);
        prop_assert_eq!(scaled.total_slope(), data.total_slope() * f);
        let plain = destabilizing_positions(&data, &engine).unwrap();
        let big = destabilizing_positions(&scaled, &engine).unwrap();
        prop_assert_eq!(plain.len(), big.len());
        for (a, b) in plain.iter().zip(&big) {
            prop_assert_eq!(&a.ktuple, &b.ktuple);
            prop_assert_eq!(a.slope * f, b.slope);
        }
        let top = |v: &[horn_core::parabolic::SlopeReport]| v.iter().map(|c| c.slope).max();
        prop_assert_eq!(top(&plain).map(|x| x * f), top(&big));
    }

    #[test]
    fn probe_agrees_with_oracle(p in problem(7, 3), seed in any::<u64>()) {
        let oracle = LrOracle::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = PrimeField::default();
        let flags = ProbeFlags::random(&p, field, &mut rng);
        let h = hom_space(&p, &flags.on_v, &flags.on_q).unwrap();
        prop_assert!(h.observed_rank as i64 >= p.expected_dim());
        let report = certify_nonzero(&p, 3, field, &mut rng);
        if report.verdict == ProbeVerdict::CertifiedNonzero {
            prop_assert!(oracle.is_nonzero_product(&p));
        }
        let engine = HornEngine::default();
        prop_assert_eq!(engine.horn_decide(&p, Mode::B).unwrap().nonzero, oracle.is_nonzero_product(&p));
    }

    #[test]
    fn count_is_invariant_under_change_of_basis(seed in any::<u64>(), which in 0..3usize) {
        let p: ProblemTuple = ["2,4;2,4;2,4;2,4@4", "1,4;2,4;2,4@4", "1,3;2,4@4"][which].parse().unwrap();
        let field = PrimeField::new(3).unwrap();
        let g = enumerate_grassmannian(2, 4, 3).unwrap();
        let flags = random_flags(&p, field, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        let change = horn_core::probe::random_flag(4, field, &mut rng).basis().clone();
        let moved: Vec<FlagBasis> = flags.iter().map(|e| e.transform(&change).unwrap()).collect();
        let before = count_solutions(&p, &flags, &g).unwrap();
        let after = count_solutions(&p, &moved, &g).unwrap();
        prop_assert_eq!(before.count, after.count);
        prop_assert_eq!(before.histogram, after.histogram);
    }
}

#[test]
fn point_labels_are_nonvanishing_labels() {
    let engine = HornEngine::default();
    for (r, n, s) in [(2, 4, 3), (2, 5, 3), (3, 6, 3), (3, 6, 2)] {
        let b: HashSet<_> = engine
            .enumerate_inequalities(r, n, s, Mode::B)
            .unwrap()
            .into_iter()
            .collect();
        let c = engine.enumerate_inequalities(r, n, s, Mode::C).unwrap();
        assert!(c.len() <= b.len());
        assert!(c.iter().all(|label| b.contains(label)));
    }
}
