//! Superset counts above projective planes and maximality of intersecting
//! families.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::field::prime_power;
use crate::bounds::{BoundReport, Provenance};
use crate::combinatorics::{binomial, binomial_u128, k_subsets};
use crate::error::{Error, Result};
use crate::family::{SetFamily, SubsetMask, DEFAULT_MATERIALIZE_BUDGET};

/// Both Bonferroni-type lower bounds on the number of `k`-subsets of
/// `[q^2+q+1]` containing a line of a projective plane of order `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSupersetBound {
    pub q: u64,
    pub k: u64,
    pub n: u64,
    /// `D·C(n-q-1, k-q-1) - C(D,2)·C(n-2q-1, k-2q-1)`, always a lower bound.
    pub first: BigInt,
    /// `(D/2)·C(n-q-1, k-q-1)`.
    pub second: BigRational,
    /// Whether `second` is implied by `first` (and hence a valid bound).
    pub second_certified: bool,
}

impl LineSupersetBound {
    pub fn report(&self) -> BoundReport {
        let first = BigRational::from_integer(self.first.clone());
        BoundReport::new(
            "line-superset",
            Provenance::CertifiedBound,
            self.first.to_f64().unwrap_or(f64::INFINITY),
        )
        .input("q", self.q as f64)
        .input("k", self.k as f64)
        .input("n", self.n as f64)
        .component("second", self.second.to_f64().unwrap_or(f64::INFINITY))
        .component("second_certified", if self.second_certified { 1.0 } else { 0.0 })
        .exact(first)
    }
}

fn binom_signed(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        BigInt::zero()
    } else {
        BigInt::from(binomial(n, k as u64))
    }
}

pub fn line_superset_bound(q: u64, k: u64) -> Result<LineSupersetBound> {
    if prime_power(q).is_none() {
        return Err(Error::invalid(format!("{q} is not a prime power")));
    }
    let d = q;
    let n = q * q + q + 1;
    if k < d + 1 || k > n {
        return Err(Error::invalid(format!("need {} <= k <= {n}, got {k}", d + 1)));
    }
    let dd = BigInt::from(n);
    let main = binom_signed(n - d - 1, k as i64 - d as i64 - 1);
    let pairs = BigInt::from(binomial(n, 2));
    let pair_term = binom_signed(n - 2 * d - 1, k as i64 - 2 * d as i64 - 1);
    let first = &dd * &main - pairs * pair_term;
    let second = BigRational::new(dd * main, BigInt::from(2));
    let second_certified = BigRational::from_integer(first.clone()) >= second;
    Ok(LineSupersetBound {
        q,
        k,
        n,
        first,
        second,
        second_certified,
    })
}

/// `true` iff no `k`-set outside the `k`-uniform intersecting family `a`
/// meets every member of `a`.
pub fn is_maximal_intersecting(a: &SetFamily) -> Result<bool> {
    is_maximal_intersecting_with_budget(a, DEFAULT_MATERIALIZE_BUDGET)
}

pub fn is_maximal_intersecting_with_budget(a: &SetFamily, budget: u128) -> Result<bool> {
    let n = a.n();
    let k = a
        .k()
        .ok_or_else(|| Error::invalid("maximality needs a nonempty uniform family"))?;
    if !a.is_intersecting() {
        return Err(Error::invalid("family is not intersecting"));
    }
    let needed = binomial_u128(n as u64, k as u64).unwrap_or(u128::MAX);
    if needed > budget || n > 64 {
        return Err(Error::BudgetExceeded {
            what: "k-sets to scan for maximality",
            needed,
            budget,
        });
    }
    let members: Vec<u64> = a.iter().map(|s| s.as_u64().expect("n <= 64")).collect();
    let extendable = k_subsets(n, k).any(|y| {
        members.iter().all(|&x| x & y != 0)
            && !a.contains(&SubsetMask::from_u64(n, y).expect("n <= 64"))
    });
    Ok(!extendable)
}

/// Exact number of `k`-subsets of `[n]` containing a member of `a`.
pub fn superset_count(a: &SetFamily, k: usize) -> Result<BigUint> {
    Ok(BigUint::from(crate::family::superset_extension(a, k)?.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pg_flat_family;

    #[test]
    fn bonferroni_values() {
        let b = line_superset_bound(2, 3).unwrap();
        assert_eq!(b.first, BigInt::from(7));
        let b = line_superset_bound(2, 4).unwrap();
        assert_eq!(b.first, BigInt::from(28));
        let b = line_superset_bound(3, 5).unwrap();
        assert_eq!(b.first, BigInt::from(117));
        assert!(line_superset_bound(2, 2).is_err());
        assert!(line_superset_bound(6, 8).is_err());
    }

    #[test]
    fn bounds_below_exact_counts() {
        for q in [2u64, 3] {
            let lines = pg_flat_family(1, q).unwrap();
            let n = q * q + q + 1;
            for k in q + 1..=n {
                let b = line_superset_bound(q, k).unwrap();
                let exact = BigInt::from(superset_count(&lines, k as usize).unwrap());
                assert!(b.first <= exact, "q={q} k={k}");
                if b.second_certified {
                    assert!(b.second <= BigRational::from_integer(exact), "q={q} k={k}");
                }
            }
        }
    }

    #[test]
    fn maximality() {
        assert!(is_maximal_intersecting(&pg_flat_family(1, 2).unwrap()).unwrap());
        assert!(is_maximal_intersecting(&pg_flat_family(1, 3).unwrap()).unwrap());
        let single = SetFamily::from_one_based(7, &[&[1, 2, 3]]).unwrap();
        assert!(!is_maximal_intersecting(&single).unwrap());
        let bad = SetFamily::from_one_based(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert!(is_maximal_intersecting(&bad).is_err());
    }
}
