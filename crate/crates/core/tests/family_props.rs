use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use symfam::combinatorics::binomial;
use symfam::family::io::{read_family, write_family, FamilyDocument};
use symfam::family::measure::biased_measure_of_upset;
use symfam::family::{superset_extension, tensor_product, translates_family};
use symfam::symmetry::{GroupWitness, Permutation};
use symfam::{SetFamily, SubsetMask};

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Random k-uniform family on [n] given as bit patterns.
fn uniform_family(max_n: usize) -> impl Strategy<Value = SetFamily> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, k)| {
            let set = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k);
            (Just(n), Just(k), proptest::collection::vec(set, 1..12))
        })
        .prop_map(|(n, k, sets)| {
            SetFamily::uniform(n, k, sets.into_iter().map(|s| SubsetMask::from_zero_based(n, s).unwrap()))
                .unwrap()
        })
}

/// Random intersecting family: every member contains the point 0.
fn intersecting_family(max_n: usize) -> impl Strategy<Value = SetFamily> {
    uniform_family(max_n).prop_map(|f| {
        let (n, k) = (f.n(), f.k().unwrap());
        let members = f.iter().map(|m| {
            if m.contains(0) {
                m.clone()
            } else {
                // swap the smallest element for 0
                let mut e = m.to_zero_based();
                e[0] = 0;
                SubsetMask::from_zero_based(n, e).unwrap()
            }
        });
        SetFamily::uniform(n, k, members.collect::<Vec<_>>()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_keeps_intersecting(a in intersecting_family(5), b in intersecting_family(5)) {
        prop_assert!(a.is_intersecting() && b.is_intersecting());
        let t = tensor_product(&a, &b).unwrap();
        prop_assert!(t.is_intersecting());
        prop_assert_eq!(t.len(), a.len() * b.len());
        prop_assert_eq!(t.n(), a.n() * b.n());
    }

    #[test]
    fn measure_monotone_in_p(f in uniform_family(9)) {
        let grid: Vec<BigRational> = (0..=8).map(|i| ratio(i, 8)).collect();
        let values: Vec<BigRational> = grid
            .iter()
            .map(|p| biased_measure_of_upset(&f, p).unwrap().value)
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        prop_assert_eq!(&values[8], &ratio(1, 1));
    }

    #[test]
    fn intersecting_upset_has_half_measure_at_most_half(f in intersecting_family(14)) {
        prop_assume!(2 * f.k().unwrap() <= f.n());
        let mu = biased_measure_of_upset(&f, &ratio(1, 2)).unwrap().value;
        prop_assert!(mu <= ratio(1, 2));
    }

    #[test]
    fn translates_fixed_by_rotation(n in 1usize..40, seed in any::<u64>()) {
        let elems: Vec<usize> = (0..n).filter(|i| (seed >> (i % 64)) & 1 == 1).collect();
        prop_assume!(!elems.is_empty());
        let s = SubsetMask::from_zero_based(n, elems).unwrap();
        let f = translates_family(&s).unwrap();
        prop_assert!(Permutation::rotation(n, 1).fixes(&f));
    }

    #[test]
    fn superset_extension_local_lym(f in uniform_family(10), extra in 0usize..4) {
        let (n, k) = (f.n(), f.k().unwrap());
        let l = (k + extra).min(n);
        let ext = superset_extension(&f, l).unwrap();
        // the size gain needs C(n,l) >= C(n,k)
        if l <= n - k {
            prop_assert!(ext.len() >= f.len());
        }
        // |ext| C(n,k) >= |A| C(n,l)
        let lhs = binomial(n as u64, k as u64) * ext.len();
        let rhs = binomial(n as u64, l as u64) * f.len();
        prop_assert!(lhs >= rhs);
        prop_assert!(ext.iter().all(|x| f.iter().any(|a| a.is_subset_of(x))));
    }

    #[test]
    fn document_round_trip(f in uniform_family(12)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.json");
        let w = GroupWitness::rotations(f.n());
        write_family(&path, &f, Some(&w)).unwrap();
        let (g, w2) = read_family(&path).unwrap();
        prop_assert_eq!(&g, &f);
        let a = FamilyDocument::from_family(&f, Some(&w)).to_canonical_string();
        let b = FamilyDocument::from_family(&g, w2.as_ref()).to_canonical_string();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn wide_ground_sets_round_trip() {
    let n = 150;
    let s = SubsetMask::from_zero_based(n, [0, 1, 5, 77, 149]).unwrap();
    let f = translates_family(&s).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.json");
    write_family(&path, &f, None).unwrap();
    let (g, w) = read_family(&path).unwrap();
    assert_eq!(f, g);
    assert!(w.is_none());
}
