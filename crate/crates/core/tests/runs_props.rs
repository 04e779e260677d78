use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use symfam::combinatorics::binomial;
use symfam::runs::{self, RunCountMode, RunCountReport};
use symfam::symmetry::{verify_symmetric_witness, GroupWitness};

#[test]
fn run_family_intersecting_and_symmetric() {
    for n in 1..=20usize {
        for k in 1..=n {
            let (f, c) = runs::build_and_count_f(n, k).unwrap();
            assert_eq!(f.len() as u128, c);
            assert!(f.is_intersecting(), "F({n},{k})");
            if !f.is_empty() {
                assert!(verify_symmetric_witness(&f, &GroupWitness::rotations(n)).unwrap());
            }
            assert_eq!(c > 0, runs::nonempty_f_predicate(n, k), "({n},{k})");
        }
    }
}

#[test]
fn run_counts_against_lemma_bounds() {
    for n in 1..=16usize {
        for k in 0..=n {
            for l in 1..=n {
                let z = runs::count_run_constrained(n, k, l, RunCountMode::ZeroRunAtLeast).unwrap();
                assert!(z.consistent());
                assert!(BigUint::from(z.exact()) <= binomial((n - l) as u64, k as u64) * n);
                if 2 * k <= n {
                    let r = runs::count_run_constrained(n, k, l, RunCountMode::NoRunOfLength).unwrap();
                    if let RunCountReport::NoRunOfLength { guarantee_applies: true, exact, .. } = r {
                        assert!(2 * exact >= u128::try_from(binomial(n as u64, k as u64)).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn chain_never_exceeds_exact_count() {
    for n in 4..=120usize {
        for k in 1..=n / 2 {
            if let Some(b) = runs::constructive_lower_bound(n, k).unwrap().bound() {
                let exact = runs::count_f_by_runs(n, k).unwrap();
                assert!(*b <= BigRational::from_integer(BigInt::from(exact)), "({n},{k})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn composition_count_matches_sweep((n, k) in (1usize..=22).prop_flat_map(|n| (Just(n), 1..=n))) {
        let swept = runs::count_f_enumerated(n, k, u128::MAX).unwrap();
        prop_assert_eq!(runs::count_f_by_runs(n, k).unwrap(), BigUint::from(swept));
    }
}
