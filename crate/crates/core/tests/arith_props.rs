use proptest::prelude::*;
use symfam::arith::{self, DEFAULT_SEARCH_BUDGET};
use symfam::family::translates_family;
use symfam::SubsetMask;

fn residues() -> impl Strategy<Value = (usize, SubsetMask)> {
    (1usize..=30).prop_flat_map(|n| {
        (Just(n), proptest::collection::vec(any::<bool>(), n)).prop_map(|(n, bits)| {
            let mut s: Vec<usize> = (0..n).filter(|&i| bits[i]).collect();
            if s.is_empty() {
                s.push(0);
            }
            (n, SubsetMask::from_zero_based(n, s).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cover_iff_translates_intersect((n, s) in residues()) {
        let cover = arith::is_difference_cover(&s, n).unwrap();
        prop_assert_eq!(cover, translates_family(&s).unwrap().is_intersecting());
    }
}

#[test]
fn cover_searches_respect_counting_bounds() {
    for n in 1..=50usize {
        let r = arith::min_difference_cover(n, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(r.exhaustive, "n = {n}");
        let h = r.h;
        assert!(h * (h - 1) + 1 >= n, "n = {n}, h = {h}");
        let lower = ((1.0 + (4.0 * n as f64 - 3.0).sqrt()) / 2.0).ceil() as usize;
        assert!(lower <= h);
        assert!(arith::is_difference_cover(&r.witness_mask(), n).unwrap());
        // consistency with the published covering constant; not a certified bound
        if n >= 2 {
            assert!(h as f64 <= 1.1527 * (n as f64).sqrt() + 1.0, "n = {n}, h = {h}");
        }
    }
}

#[test]
fn sidon_witnesses_obey_counting_bound() {
    for n in 1..=40usize {
        let r = arith::sidon_max(n, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(r.exhaustive);
        let k = r.size;
        assert!(k * (k.saturating_sub(1)) < n.max(1), "n = {n}, size = {k}");
        let w = SubsetMask::from_zero_based(n, r.witness.iter().copied()).unwrap();
        assert!(arith::is_sidon(&w, n).unwrap());
    }
}

#[test]
fn tensor_candidates_never_exceed_factor_products() {
    for n in 4..=60usize {
        let g = arith::g_bounds(n).unwrap();
        assert!(g.lower <= g.upper.value, "n = {n}");
        for c in g.candidates.iter().filter(|c| c.source.starts_with("tensor(")) {
            let dims = &c.source["tensor(".len()..c.source.len() - 1];
            let (a, b) = dims.split_once('x').unwrap();
            let (a, b): (usize, usize) = (a.parse().unwrap(), b.parse().unwrap());
            assert_eq!(a * b, n);
            let ua = arith::g_bounds(a).unwrap().upper.value;
            let ub = arith::g_bounds(b).unwrap().upper.value;
            assert!(c.value <= ua * ub, "n = {n}: {} > {ua}*{ub}", c.value);
        }
    }
}
