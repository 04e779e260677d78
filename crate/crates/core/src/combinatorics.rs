//! Small exact-counting helpers shared by the enumeration modules.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial with signed arguments: zero whenever `k < 0` or `k > n` or `n < 0`.
pub fn binomial_signed(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        BigUint::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

/// Binomial as `u128`, or `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    binomial(n, k).to_u128()
}

/// Next larger integer with the same popcount (Gosper's hack).
#[inline]
pub fn next_same_popcount(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    (((r ^ x) >> 2) / c) | r
}

/// Iterates every `k`-subset of `{0..n}` (n <= 64) as a bit mask, in increasing
/// integer order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 64);
    let mut cur = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(crate::family::mask::low_bits(k))
    };
    let limit_bit = if n == 64 { None } else { Some(1u64 << n) };
    std::iter::from_fn(move || {
        let x = cur?;
        cur = if x == 0 || (k == 64) {
            None
        } else {
            let nx = next_same_popcount(x);
            match limit_bit {
                // overflow out of the top bit wraps to a smaller value
                Some(lim) if nx >= lim || nx <= x => None,
                None if nx <= x => None,
                _ => Some(nx),
            }
        };
        Some(x)
    })
}

/// Iterates the `k`-subsets of `{0..n}` whose highest element is `top`.
/// Splitting by `top` partitions the layer for parallel sweeps.
pub fn k_subsets_with_top(top: usize, k: usize) -> impl Iterator<Item = u64> {
    debug_assert!(k >= 1 && top < 64);
    k_subsets(top, k - 1).map(move |low| low | (1u64 << top))
}

/// Sorted `k`-combinations of `0..n` as index vectors, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
