//! Exact p-biased measure of upward closures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SetFamily;
use crate::error::{Error, Result};

/// Default largest ground set for the full `2^n` sweep.
pub const DEFAULT_MEASURE_CAP: usize = 24;

/// Largest number of minimal sets for the inclusion–exclusion route.
pub const INCLUSION_EXCLUSION_MAX: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasedMeasureResult {
    pub p: BigRational,
    pub value: BigRational,
}

/// Indicator of the upward closure of `sets` over `{0,1}^n`, indexed by mask.
pub fn upset_indicator(n: usize, sets: &[u64]) -> Vec<bool> {
    assert!(n < 32, "upset table needs n < 32");
    let size = 1usize << n;
    let mut up = vec![false; size];
    for &s in sets {
        up[s as usize] = true;
    }
    for b in 0..n {
        let bit = 1usize << b;
        for x in 0..size {
            if x & bit == 0 && up[x] {
                up[x | bit] = true;
            }
        }
    }
    up
}

/// Number of upset members on each level `0..=n`.
pub fn upset_level_counts(f: &SetFamily, cap: usize) -> Result<Vec<u64>> {
    let n = f.n();
    if n > cap || n >= 32 {
        return Err(Error::MeasureCapExceeded { n, cap: cap.min(31) });
    }
    let bits: Vec<u64> = f.iter().map(|s| s.as_u64().expect("n < 32")).collect();
    let up = upset_indicator(n, &bits);
    let mut counts = vec![0u64; n + 1];
    for (x, &inside) in up.iter().enumerate() {
        if inside {
            counts[x.count_ones() as usize] += 1;
        }
    }
    Ok(counts)
}

fn check_p(p: &BigRational) -> Result<()> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(Error::invalid("bias p must lie in [0, 1]"));
    }
    Ok(())
}

fn pow(base: &BigRational, e: usize) -> BigRational {
    num_traits::pow(base.clone(), e)
}

/// Exact `μ_p(F↑)` by a sweep over all `2^n` subsets, with the default cap.
pub fn biased_measure_of_upset(f: &SetFamily, p: &BigRational) -> Result<BiasedMeasureResult> {
    biased_measure_of_upset_with_cap(f, p, DEFAULT_MEASURE_CAP)
}

pub fn biased_measure_of_upset_with_cap(
    f: &SetFamily,
    p: &BigRational,
    cap: usize,
) -> Result<BiasedMeasureResult> {
    check_p(p)?;
    let counts = upset_level_counts(f, cap)?;
    Ok(BiasedMeasureResult {
        p: p.clone(),
        value: measure_from_level_counts(&counts, p),
    })
}

/// `Σ_l counts[l] · p^l (1-p)^(n-l)` with `n = counts.len() - 1`.
pub fn measure_from_level_counts(counts: &[u64], p: &BigRational) -> BigRational {
    let n = counts.len() - 1;
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for (l, &c) in counts.iter().enumerate() {
        if c != 0 {
            total += pow(p, l) * pow(&q, n - l) * BigRational::from_integer(BigInt::from(c));
        }
    }
    total
}

/// Inclusion–exclusion over the inclusion-minimal members:
/// `μ_p(F↑) = Σ_{∅≠G} (-1)^{|G|+1} p^{|∪G|}`.
pub fn biased_measure_inclusion_exclusion(
    f: &SetFamily,
    p: &BigRational,
) -> Result<BiasedMeasureResult> {
    check_p(p)?;
    let minimal: Vec<_> = f
        .iter()
        .filter(|x| !f.iter().any(|y| y != *x && y.is_subset_of(x)))
        .cloned()
        .collect();
    if minimal.len() > INCLUSION_EXCLUSION_MAX {
        return Err(Error::BudgetExceeded {
            what: "inclusion-exclusion terms",
            needed: 1u128 << minimal.len(),
            budget: 1u128 << INCLUSION_EXCLUSION_MAX,
        });
    }
    let n = f.n();
    // coefficient of p^j, accumulated over all nonempty subfamilies
    let mut coeff = vec![0i64; n + 1];
    fn walk(
        minimal: &[super::SubsetMask],
        start: usize,
        acc: Option<&super::SubsetMask>,
        depth: usize,
        coeff: &mut [i64],
    ) {
        for i in start..minimal.len() {
            let u = match acc {
                Some(a) => a.union(&minimal[i]),
                None => minimal[i].clone(),
            };
            let sign = if depth.is_multiple_of(2) { 1 } else { -1 };
            coeff[u.len()] += sign;
            walk(minimal, i + 1, Some(&u), depth + 1, coeff);
        }
    }
    walk(&minimal, 0, None, 0, &mut coeff);
    let mut value = BigRational::zero();
    for (j, &c) in coeff.iter().enumerate() {
        if c != 0 {
            value += pow(p, j) * BigRational::from_integer(BigInt::from(c));
        }
    }
    Ok(BiasedMeasureResult { p: p.clone(), value })
}
