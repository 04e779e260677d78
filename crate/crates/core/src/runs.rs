//! The cyclic run family: `k`-subsets of `Z_n` whose characteristic string has
//! a longer cyclic run of ones than of zeros.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bounds::{run_family_exponent_factor, BoundReport, Provenance};
use crate::combinatorics::{binomial, binomial_u128, k_subsets_with_top};
use crate::error::{Error, Result};
use crate::family::mask::{low_bits, rotate_u64};
use crate::family::{SetFamily, SubsetMask};

/// Default number of subsets a materializing sweep may visit.
pub const DEFAULT_BUILD_BUDGET: u128 = 100_000_000;
/// Default number of subsets a count-only sweep may visit.
pub const DEFAULT_COUNT_BUDGET: u128 = 20_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunSymbol {
    One,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RunProfile {
    pub n: usize,
    pub ones_run: usize,
    pub zeros_run: usize,
}

impl RunProfile {
    pub fn of(s: &SubsetMask) -> Self {
        RunProfile {
            n: s.n(),
            ones_run: longest_cyclic_run(s, RunSymbol::One),
            zeros_run: longest_cyclic_run(s, RunSymbol::Zero),
        }
    }

    #[inline]
    pub fn of_u64(bits: u64, n: usize) -> Self {
        RunProfile {
            n,
            ones_run: longest_ones_u64(bits, n),
            zeros_run: longest_ones_u64(!bits & low_bits(n), n),
        }
    }

    /// Membership test for the run family.
    pub fn ones_dominate(&self) -> bool {
        self.ones_run > self.zeros_run
    }
}

/// Longest cyclic run of ones in the low `n` bits.
#[inline]
pub fn longest_ones_u64(bits: u64, n: usize) -> usize {
    let full = low_bits(n);
    if bits == full {
        return n;
    }
    if bits == 0 {
        return 0;
    }
    // Rotate so the lowest zero lands on the top position; no run then wraps.
    let z = bits.trailing_ones() as usize;
    let shift = (n - (z + 1)) % n;
    let mut x = rotate_u64(bits, n, shift);
    let mut len = 0;
    while x != 0 {
        x &= x >> 1;
        len += 1;
    }
    len
}

pub fn longest_cyclic_run(s: &SubsetMask, symbol: RunSymbol) -> usize {
    let n = s.n();
    let target = match symbol {
        RunSymbol::One => s.clone(),
        RunSymbol::Zero => s.complement(),
    };
    if let Some(bits) = target.as_u64() {
        return longest_ones_u64(bits, n);
    }
    let count = target.len();
    if count == n || count == 0 {
        return count;
    }
    let start = (0..n).find(|&i| !target.contains(i)).expect("some gap") + 1;
    let (mut best, mut cur) = (0, 0);
    for step in 0..n {
        if target.contains((start + step) % n) {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || k > n {
        return Err(Error::invalid(format!("need 0 <= k <= n and n >= 1, got n = {n}, k = {k}")));
    }
    if n > 64 {
        return Err(Error::invalid("subset sweeps are limited to n <= 64"));
    }
    Ok(())
}

fn check_budget(n: usize, k: usize, budget: u128, what: &'static str) -> Result<()> {
    let needed = binomial_u128(n as u64, k as u64).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { what, needed, budget });
    }
    Ok(())
}

/// Parallel sweep of the `k`-subsets of `Z_n`, summing `f` over them.
fn sweep_count<F>(n: usize, k: usize, f: F) -> u128
where
    F: Fn(u64) -> bool + Sync,
{
    if k == 0 {
        return f(0) as u128;
    }
    (k - 1..n)
        .into_par_iter()
        .map(|top| k_subsets_with_top(top, k).filter(|&b| f(b)).count() as u128)
        .sum()
}

/// Materializes the run family and its size.
pub fn build_and_count_f(n: usize, k: usize) -> Result<(SetFamily, u128)> {
    build_and_count_f_with_budget(n, k, DEFAULT_BUILD_BUDGET)
}

pub fn build_and_count_f_with_budget(n: usize, k: usize, budget: u128) -> Result<(SetFamily, u128)> {
    check_nk(n, k)?;
    if let Err(Error::BudgetExceeded { needed, budget, .. }) =
        check_budget(n, k, budget, "run family")
    {
        return Err(Error::BudgetExceeded {
            what: "run family (use the count-only mode)",
            needed,
            budget,
        });
    }
    let bits: Vec<u64> = if k == 0 {
        Vec::new()
    } else {
        (k - 1..n)
            .into_par_iter()
            .flat_map_iter(|top| {
                k_subsets_with_top(top, k).filter(move |&b| RunProfile::of_u64(b, n).ones_dominate())
            })
            .collect()
    };
    let count = bits.len() as u128;
    let members = bits
        .into_iter()
        .map(|b| SubsetMask::from_u64(n, b))
        .collect::<Result<Vec<_>>>()?;
    Ok((SetFamily::uniform(n, k, members)?, count))
}

/// `|F(n,k)|` by a count-only sweep (no family is stored).
pub fn count_f_enumerated(n: usize, k: usize, budget: u128) -> Result<u128> {
    check_nk(n, k)?;
    check_budget(n, k, budget, "run family count")?;
    Ok(sweep_count(n, k, |b| RunProfile::of_u64(b, n).ones_dominate()))
}

/// `F(n,k)` is nonempty exactly when `n <= k + ⌊k/2⌋·⌈k/2⌉`.
///
/// With a longest ones run of length `a + 1` there are at most `k - a` runs of
/// each symbol, and every zero run has length at most `a`, so
/// `n - k <= a(k - a)`; the best `a` is `⌊k/2⌋`.
pub fn nonempty_f_predicate(n: usize, k: usize) -> bool {
    n <= k + (k / 2) * k.div_ceil(2)
}

/// The condition `n <= ⌊k/2⌋² + k`. Sufficient for `F(n,k)` to be nonempty,
/// and necessary only for even `k`: `F(5,3)` contains `11100`.
pub fn floor_square_bound(n: usize, k: usize) -> bool {
    let h = k / 2;
    n <= h * h + k
}

/// Number of compositions of `total` into `parts` parts, each in `1..=cap`.
fn bounded_compositions(total: usize, parts: usize, cap: usize, choose: &PascalTable) -> BigUint {
    // inclusion–exclusion on the parts exceeding the cap
    if parts == 0 {
        return if total == 0 { BigUint::from(1u8) } else { BigUint::zero() };
    }
    if total < parts {
        return BigUint::zero();
    }
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for j in 0..=parts {
        let Some(rest) = total.checked_sub(j * cap + 1) else { break };
        if rest + 1 < parts {
            break;
        }
        let term = choose.get(parts, j) * choose.get(rest, parts - 1);
        if j % 2 == 0 {
            plus += term;
        } else {
            minus += term;
        }
    }
    plus - minus
}

struct PascalTable {
    rows: Vec<Vec<BigUint>>,
}

impl PascalTable {
    fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = vec![BigUint::from(1u8); i + 1];
            for j in 1..i {
                row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
            }
            rows.push(row);
        }
        PascalTable { rows }
    }

    fn get(&self, n: usize, k: usize) -> BigUint {
        if k > n {
            BigUint::zero()
        } else {
            self.rows[n][k].clone()
        }
    }
}

/// Cyclic strings (positions labelled) with `k` ones, `0 < k < n`, all runs of
/// ones at most `a` long and all runs of zeros at most `b` long.
fn bounded_run_strings(n: usize, k: usize, a: usize, b: usize, choose: &PascalTable) -> BigUint {
    let mut total = BigUint::zero();
    for r in 1..=k.min(n - k) {
        let ones = bounded_compositions(k, r, a, choose);
        if ones.is_zero() {
            continue;
        }
        let zeros = bounded_compositions(n - k, r, b, choose);
        // each string with r runs of ones arises r times: once per run chosen
        // to start at the recorded position
        let (q, rem) = (ones * zeros * n).div_rem(&BigUint::from(r));
        debug_assert!(rem.is_zero());
        total += q;
    }
    total
}

/// Exact `|F(n,k)|` for any `n`, by counting run compositions.
pub fn count_f_by_runs(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || k > n {
        return Err(Error::invalid(format!("need 0 <= k <= n, got n = {n}, k = {k}")));
    }
    if k == n {
        return Ok(BigUint::from(1u8));
    }
    if k == 0 {
        return Ok(BigUint::zero());
    }
    let choose = PascalTable::new(n);
    let mut total = BigUint::zero();
    for l in 1..=k {
        // longest ones run exactly l, longest zeros run below l
        let upto = bounded_run_strings(n, k, l, l - 1, &choose);
        let below = bounded_run_strings(n, k, l - 1, l - 1, &choose);
        total += upto - below;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunCountMode {
    /// Strings with some run of zeros of length at least `l`.
    ZeroRunAtLeast,
    /// Strings with no run of either symbol of length `l` or more.
    NoRunOfLength,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunCountReport {
    ZeroRunAtLeast {
        exact: u128,
        /// `n·C(n-l, k)`
        bound: BigUint,
    },
    NoRunOfLength {
        exact: u128,
        /// `(log n + 2 log 2)/(log n - log(n-k))`
        threshold: f64,
        /// `k <= n/2` and `l` meets the threshold
        guarantee_applies: bool,
        /// `C(n,k)/2`
        guarantee: BigRational,
    },
}

impl RunCountReport {
    pub fn exact(&self) -> u128 {
        match self {
            RunCountReport::ZeroRunAtLeast { exact, .. } => *exact,
            RunCountReport::NoRunOfLength { exact, .. } => *exact,
        }
    }

    /// Whether the exact count respects the proven inequality that applies.
    pub fn consistent(&self) -> bool {
        match self {
            RunCountReport::ZeroRunAtLeast { exact, bound } => BigUint::from(*exact) <= *bound,
            RunCountReport::NoRunOfLength {
                exact,
                guarantee_applies,
                guarantee,
                ..
            } => !guarantee_applies || BigRational::from_integer((*exact).into()) >= *guarantee,
        }
    }
}

/// `(log n + 2 log 2)/(log n - log(n-k))`.
pub fn run_length_threshold(n: usize, k: usize) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    (nf.ln() + 2.0 * std::f64::consts::LN_2) / (nf.ln() - (nf - kf).ln())
}

pub fn count_run_constrained(n: usize, k: usize, l: usize, mode: RunCountMode) -> Result<RunCountReport> {
    count_run_constrained_with_budget(n, k, l, mode, DEFAULT_COUNT_BUDGET)
}

pub fn count_run_constrained_with_budget(
    n: usize,
    k: usize,
    l: usize,
    mode: RunCountMode,
    budget: u128,
) -> Result<RunCountReport> {
    check_nk(n, k)?;
    if l == 0 || l > n {
        return Err(Error::invalid(format!("need 1 <= l <= n, got l = {l}")));
    }
    check_budget(n, k, budget, "run-constrained count")?;
    Ok(match mode {
        RunCountMode::ZeroRunAtLeast => RunCountReport::ZeroRunAtLeast {
            exact: sweep_count(n, k, |b| RunProfile::of_u64(b, n).zeros_run >= l),
            bound: binomial((n - l) as u64, k as u64) * BigUint::from(n),
        },
        RunCountMode::NoRunOfLength => {
            let threshold = run_length_threshold(n, k);
            RunCountReport::NoRunOfLength {
                exact: sweep_count(n, k, |b| {
                    let p = RunProfile::of_u64(b, n);
                    p.ones_run < l && p.zeros_run < l
                }),
                threshold,
                guarantee_applies: 2 * k <= n && l as f64 >= threshold,
                guarantee: BigRational::new(binomial(n as u64, k as u64).into(), 2.into()),
            }
        }
    })
}

/// Result of the constructive lower-bound chain for `|F(n,k)|`.
#[derive(Clone, Debug, PartialEq)]
pub enum LowerBoundChain {
    Applicable {
        /// Length of the single longest run of ones in the counted strings.
        l0: usize,
        /// `(n/2)·C(n-l0-2, k-l0)`, a proven lower bound on `|F(n,k)|`.
        bound: BigRational,
        report: BoundReport,
    },
    Inapplicable {
        reason: String,
    },
}

impl LowerBoundChain {
    pub fn bound(&self) -> Option<&BigRational> {
        match self {
            LowerBoundChain::Applicable { bound, .. } => Some(bound),
            LowerBoundChain::Inapplicable { .. } => None,
        }
    }
}

/// Does `l0` satisfy `l0 - 1 >= (log(n-l0-2) + 2 log 2)/(log(n-l0-2) - log(n-k-2))`?
fn l0_condition(n: usize, k: usize, l0: usize) -> bool {
    let rest = (n - l0 - 2) as f64;
    let zeros = (n - k - 2) as f64;
    let rhs = (rest.ln() + 2.0 * std::f64::consts::LN_2) / (rest.ln() - zeros.ln());
    (l0 - 1) as f64 >= rhs
}

/// Smallest `l0 >= 2` meeting the run-length condition, if any. The condition
/// only makes sense for `l0 < k` (positive denominator) and `n - k - 2 >= 1`.
pub fn select_l0(n: usize, k: usize) -> Option<usize> {
    if n < k + 3 {
        return None;
    }
    (2..k).find(|&l0| l0_condition(n, k, l0))
}

pub fn constructive_lower_bound(n: usize, k: usize) -> Result<LowerBoundChain> {
    if k == 0 || 2 * k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n/2, got n = {n}, k = {k}")));
    }
    let Some(l0) = select_l0(n, k) else {
        return Ok(LowerBoundChain::Inapplicable {
            reason: format!("no l0 in 2..{k} satisfies the run-length condition"),
        });
    };
    if 2 * l0 >= n || k < l0 {
        return Ok(LowerBoundChain::Inapplicable {
            reason: format!("l0 = {l0} must satisfy l0 < n/2 and l0 <= k"),
        });
    }
    let rest = binomial((n - l0 - 2) as u64, (k - l0) as u64);
    let bound = BigRational::new((rest * BigUint::from(n)).into(), 2.into());
    let factor = run_family_exponent_factor(n as u64, k as u64);
    let layer = binomial(n as u64, k as u64).to_f64().unwrap_or(f64::INFINITY);
    let report = BoundReport::new("run-family-constructive", Provenance::CertifiedBound, bound.to_f64().unwrap_or(f64::INFINITY))
        .input("n", n as f64)
        .input("k", k as f64)
        .component("l0", l0 as f64)
        .component("exponent-factor", factor)
        .component("exponent-factor-times-layer", factor * layer);
    Ok(LowerBoundChain::Applicable { l0, bound, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(n: usize, one_based: &[usize]) -> SubsetMask {
        SubsetMask::from_one_based(n, one_based.iter().copied()).unwrap()
    }

    #[test]
    fn run_lengths() {
        let s = mask(8, &[1, 2, 3, 6]);
        assert_eq!(longest_cyclic_run(&s, RunSymbol::One), 3);
        assert_eq!(longest_cyclic_run(&s, RunSymbol::Zero), 2);
        let full = SubsetMask::full(5).unwrap();
        assert_eq!(RunProfile::of(&full), RunProfile { n: 5, ones_run: 5, zeros_run: 0 });
        let wrap = mask(6, &[1, 6]);
        assert_eq!(longest_cyclic_run(&wrap, RunSymbol::One), 2);
        assert_eq!(longest_cyclic_run(&wrap, RunSymbol::Zero), 4);
    }

    #[test]
    fn wide_run_lengths_match_narrow() {
        let s = SubsetMask::from_zero_based(100, (0..5).chain(97..100).chain(40..45)).unwrap();
        assert_eq!(longest_cyclic_run(&s, RunSymbol::One), 8);
        assert_eq!(longest_cyclic_run(&s, RunSymbol::Zero), 52);
    }

    #[test]
    fn run_family_small_cases() {
        assert_eq!(build_and_count_f(3, 2).unwrap().1, 3);
        assert_eq!(build_and_count_f(5, 2).unwrap().1, 0);
        assert_eq!(build_and_count_f(4, 3).unwrap().1, 4);
        assert_eq!(build_and_count_f(6, 6).unwrap().1, 1);
        assert_eq!(build_and_count_f(6, 0).unwrap().1, 0);
        assert!(matches!(
            build_and_count_f_with_budget(20, 10, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn nonemptiness_formula() {
        assert!(nonempty_f_predicate(8, 4));
        assert!(!nonempty_f_predicate(9, 4));
        assert!(nonempty_f_predicate(3, 2));
        assert!(nonempty_f_predicate(5, 3));
        assert!(!floor_square_bound(5, 3));
        assert!(nonempty_f_predicate(11, 5) && !nonempty_f_predicate(12, 5));
        for n in 1..=16 {
            for k in 1..=n {
                let (_, c) = build_and_count_f(n, k).unwrap();
                assert_eq!(c > 0, nonempty_f_predicate(n, k), "({n},{k})");
                if k % 2 == 0 {
                    assert_eq!(floor_square_bound(n, k), nonempty_f_predicate(n, k));
                }
            }
        }
    }

    #[test]
    fn composition_counter_matches_enumeration() {
        for n in 1..=16 {
            for k in 0..=n {
                let e = count_f_enumerated(n, k, DEFAULT_COUNT_BUDGET).unwrap();
                assert_eq!(count_f_by_runs(n, k).unwrap(), BigUint::from(e), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn run_constrained_examples() {
        let r = count_run_constrained(6, 3, 3, RunCountMode::ZeroRunAtLeast).unwrap();
        // 000111 and its rotations
        assert_eq!(r.exact(), 6);
        assert!(r.consistent());
        for n in 2..=10 {
            for k in 1..n {
                let r = count_run_constrained(n, k, 1, RunCountMode::NoRunOfLength).unwrap();
                assert_eq!(r.exact(), 0);
            }
        }
        let t = run_length_threshold(8, 4);
        let l0 = t.ceil() as usize;
        let r = count_run_constrained(8, 4, l0, RunCountMode::NoRunOfLength).unwrap();
        let RunCountReport::NoRunOfLength { exact, guarantee_applies, .. } = r else { panic!() };
        assert!(guarantee_applies);
        assert!(exact >= 35);
    }

    #[test]
    fn chain_examples() {
        assert!(matches!(
            constructive_lower_bound(9, 3).unwrap(),
            LowerBoundChain::Inapplicable { .. }
        ));
        assert!(matches!(
            constructive_lower_bound(20, 10).unwrap(),
            LowerBoundChain::Inapplicable { .. }
        ));
        let LowerBoundChain::Applicable { l0, bound, .. } = constructive_lower_bound(48, 24).unwrap()
        else {
            panic!("chain applies at (48, 24)")
        };
        assert_eq!(l0, 14);
        let exact = count_f_by_runs(48, 24).unwrap();
        assert!(bound <= BigRational::from_integer(exact.into()));
        assert!(constructive_lower_bound(10, 6).is_err());
    }
}
