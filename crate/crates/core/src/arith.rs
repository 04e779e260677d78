//! Difference covers and Sidon sets in `Z_n`, and the bounds on `g(n)`, the
//! least `k` admitting a symmetric intersecting `k`-uniform family on `[n]`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::Provenance;
use crate::error::{Error, Result};
use crate::family::SubsetMask;
use crate::geometry::prime_power;
use crate::geometry::field::is_prime;
use crate::runs::nonempty_f_predicate;

/// Default node budget for the cover and Sidon searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000_000;

/// Interval between progress callbacks, in nodes.
pub const PROGRESS_INTERVAL: u64 = 10_000_000;

const FLUSH: u64 = 4096;

fn residues(s: &SubsetMask, n: usize) -> Result<Vec<usize>> {
    if s.n() != n {
        return Err(Error::invalid(format!("set lives in Z_{}, not Z_{n}", s.n())));
    }
    Ok(s.to_zero_based())
}

/// `true` iff `S - S` is all of `Z_n`.
pub fn is_difference_cover(s: &SubsetMask, n: usize) -> Result<bool> {
    let el = residues(s, n)?;
    if el.is_empty() {
        return Err(Error::invalid("empty set"));
    }
    let mut seen = vec![false; n];
    for &a in &el {
        for &b in &el {
            seen[(a + n - b) % n] = true;
        }
    }
    Ok(seen.into_iter().all(|x| x))
}

/// `true` iff every nonzero residue arises as `a - b` for at most one ordered
/// pair of elements.
pub fn is_sidon(s: &SubsetMask, n: usize) -> Result<bool> {
    let el = residues(s, n)?;
    let mut seen = vec![false; n];
    for &a in &el {
        for &b in &el {
            if a != b {
                let d = (a + n - b) % n;
                if std::mem::replace(&mut seen[d], true) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `true` iff every nonzero residue arises as a difference exactly once.
pub fn is_perfect_difference_set(s: &SubsetMask) -> bool {
    let n = s.n();
    let k = s.len();
    k * (k - 1) + 1 == n && is_sidon(s, n).unwrap_or(false)
}

/// Least `h` with `h(h-1) + 1 >= n`.
pub fn cover_counting_bound(n: usize) -> usize {
    let mut h = 1;
    while h * (h - 1) + 1 < n {
        h += 1;
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSearchResult {
    pub n: usize,
    /// Smallest cover size found.
    pub h: usize,
    pub witness: Vec<usize>,
    pub nodes_explored: u64,
    /// `true` when every size below `h` was refuted.
    pub exhaustive: bool,
    /// Every size below this was refuted.
    pub lower_bound: usize,
}

impl CoverSearchResult {
    pub fn witness_mask(&self) -> SubsetMask {
        SubsetMask::from_zero_based(self.n, self.witness.iter().copied()).expect("valid witness")
    }
}

struct Counter<'a> {
    shared: &'a AtomicU64,
    stop: &'a AtomicBool,
    budget: u64,
    local: u64,
    progress: Option<&'a (dyn Fn(u64) + Sync)>,
}

impl Counter<'_> {
    /// Counts a node; `false` once the budget is spent.
    #[inline]
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local >= FLUSH {
            let before = self.shared.fetch_add(self.local, Ordering::Relaxed);
            let after = before + self.local;
            self.local = 0;
            if let Some(cb) = self.progress {
                if before / PROGRESS_INTERVAL != after / PROGRESS_INTERVAL {
                    cb(after);
                }
            }
            if after > self.budget {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        self.shared.fetch_add(self.local, Ordering::Relaxed);
        self.local = 0;
    }
}

enum Outcome {
    Found(Vec<usize>),
    Refuted,
    OutOfBudget,
}

struct CoverDfs<'a> {
    n: usize,
    target: usize,
    set: Vec<usize>,
    count: Vec<u32>,
    covered: usize,
    counter: Counter<'a>,
}

impl CoverDfs<'_> {
    fn push(&mut self, x: usize) {
        let n = self.n;
        for i in 0..self.set.len() {
            let s = self.set[i];
            for d in [(x + n - s) % n, (s + n - x) % n] {
                if self.count[d] == 0 {
                    self.covered += 1;
                }
                self.count[d] += 1;
            }
        }
        self.set.push(x);
    }

    fn pop(&mut self) {
        let n = self.n;
        let x = self.set.pop().unwrap();
        for i in 0..self.set.len() {
            let s = self.set[i];
            for d in [(x + n - s) % n, (s + n - x) % n] {
                self.count[d] -= 1;
                if self.count[d] == 0 {
                    self.covered -= 1;
                }
            }
        }
    }

    /// Depth-first search in ascending element order.
    fn run(&mut self) -> Outcome {
        if !self.counter.tick() {
            return Outcome::OutOfBudget;
        }
        let c = self.set.len();
        if c == self.target {
            return if self.covered == self.n {
                Outcome::Found(self.set.clone())
            } else {
                Outcome::Refuted
            };
        }
        let r = self.target - c;
        // each new element adds at most 2 differences per element present
        if self.covered + r * (2 * c + r - 1) < self.n {
            return Outcome::Refuted;
        }
        let last = *self.set.last().unwrap();
        for x in last + 1..=self.n - r {
            self.push(x);
            let out = self.run();
            self.pop();
            match out {
                Outcome::Refuted => {}
                other => return other,
            }
        }
        Outcome::Refuted
    }
}

fn cover_stratum(
    n: usize,
    size: usize,
    shared: &AtomicU64,
    stop: &AtomicBool,
    budget: u64,
    progress: Option<&(dyn Fn(u64) + Sync)>,
) -> Outcome {
    // a cover contains two consecutive residues, so {0, 1} may be assumed
    let make = |prefix: &[usize]| {
        let mut dfs = CoverDfs {
            n,
            target: size,
            set: Vec::with_capacity(size),
            count: vec![0; n],
            covered: 1,
            counter: Counter {
                shared,
                stop,
                budget,
                local: 0,
                progress,
            },
        };
        dfs.count[0] = 1;
        for &x in prefix {
            dfs.push(x);
        }
        dfs
    };
    if size <= 2 {
        let mut dfs = make(&[0]);
        let out = dfs.run();
        dfs.counter.flush();
        return out;
    }
    let outs: Vec<Outcome> = (2..=n - (size - 2))
        .into_par_iter()
        .map(|third| {
            let mut dfs = make(&[0, 1, third]);
            let out = dfs.run();
            dfs.counter.flush();
            out
        })
        .collect();
    // any cover settles the stratum; the first in branch order is the
    // lexicographically least unless the budget cut an earlier branch short
    let mut budget_hit = false;
    for out in outs {
        match out {
            Outcome::Found(w) => return Outcome::Found(w),
            Outcome::OutOfBudget => budget_hit = true,
            Outcome::Refuted => {}
        }
    }
    if budget_hit {
        Outcome::OutOfBudget
    } else {
        Outcome::Refuted
    }
}

/// `{0..a-1} ∪ {a, 2a, ..., ba}` with `ba >= n/2`: every difference up to
/// `n/2` is `jb - i`.
pub fn construct_difference_cover(n: usize) -> Vec<usize> {
    if n <= 2 {
        return (0..n).collect();
    }
    let half = n / 2;
    let mut best: Option<Vec<usize>> = None;
    for a in 1..=half.max(1) {
        let b = half.div_ceil(a);
        let mut s: Vec<usize> = (0..a).chain((1..=b).map(|j| j * a)).filter(|&x| x < n).collect();
        s.sort_unstable();
        s.dedup();
        if best.as_ref().is_none_or(|bst| s.len() < bst.len()) {
            best = Some(s);
        }
    }
    best.unwrap()
}

/// Smallest difference cover of `Z_n`, lexicographically least among
/// covers of that size.
pub fn min_difference_cover(n: usize, budget: u64) -> Result<CoverSearchResult> {
    min_difference_cover_with_progress(n, budget, None)
}

pub fn min_difference_cover_with_progress(
    n: usize,
    budget: u64,
    progress: Option<&(dyn Fn(u64) + Sync)>,
) -> Result<CoverSearchResult> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if n == 1 {
        return Ok(CoverSearchResult {
            n,
            h: 1,
            witness: vec![0],
            nodes_explored: 0,
            exhaustive: true,
            lower_bound: 1,
        });
    }
    let shared = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let mut size = cover_counting_bound(n).max(2);
    loop {
        match cover_stratum(n, size, &shared, &stop, budget, progress) {
            Outcome::Found(w) => {
                return Ok(CoverSearchResult {
                    n,
                    h: size,
                    witness: w,
                    nodes_explored: shared.load(Ordering::Relaxed),
                    exhaustive: true,
                    lower_bound: size,
                })
            }
            Outcome::Refuted => size += 1,
            Outcome::OutOfBudget => {
                let w = construct_difference_cover(n);
                return Ok(CoverSearchResult {
                    n,
                    h: w.len(),
                    witness: w,
                    nodes_explored: shared.load(Ordering::Relaxed),
                    exhaustive: false,
                    lower_bound: size,
                });
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SidonResult {
    pub n: usize,
    pub size: usize,
    pub witness: Vec<usize>,
    pub nodes_explored: u64,
    /// `true` when sets of size `size + 1` were refuted.
    pub exhaustive: bool,
}

struct SidonDfs<'a> {
    n: usize,
    target: usize,
    set: Vec<usize>,
    used: Vec<bool>,
    counter: Counter<'a>,
}

impl SidonDfs<'_> {
    fn try_push(&mut self, x: usize) -> bool {
        let n = self.n;
        let mut diffs = Vec::with_capacity(2 * self.set.len());
        for &s in &self.set {
            let (d1, d2) = ((x + n - s) % n, (s + n - x) % n);
            if d1 == d2 || self.used[d1] || self.used[d2] || diffs.contains(&d1) || diffs.contains(&d2)
            {
                return false;
            }
            diffs.push(d1);
            diffs.push(d2);
        }
        for d in diffs {
            self.used[d] = true;
        }
        self.set.push(x);
        true
    }

    fn pop(&mut self) {
        let n = self.n;
        let x = self.set.pop().unwrap();
        for &s in &self.set {
            self.used[(x + n - s) % n] = false;
            self.used[(s + n - x) % n] = false;
        }
    }

    fn run(&mut self) -> Outcome {
        if !self.counter.tick() {
            return Outcome::OutOfBudget;
        }
        let c = self.set.len();
        if c == self.target {
            return Outcome::Found(self.set.clone());
        }
        let r = self.target - c;
        let last = *self.set.last().unwrap();
        for x in last + 1..=self.n.saturating_sub(r) {
            if !self.try_push(x) {
                continue;
            }
            let out = self.run();
            self.pop();
            match out {
                Outcome::Refuted => {}
                other => return other,
            }
        }
        Outcome::Refuted
    }
}

/// Largest `k` with `k(k-1) <= n-1`.
pub fn sidon_counting_bound(n: usize) -> usize {
    let mut k = 1;
    while (k + 1) * k < n {
        k += 1;
    }
    k
}

/// Maximum size of a Sidon set in `Z_n` with the lexicographically least
/// witness (which contains 0).
pub fn sidon_max(n: usize, budget: u64) -> Result<SidonResult> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let shared = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let mut best = vec![0];
    let top = sidon_counting_bound(n);
    for size in 2..=top {
        let mut dfs = SidonDfs {
            n,
            target: size,
            set: vec![0],
            used: vec![false; n],
            counter: Counter {
                shared: &shared,
                stop: &stop,
                budget,
                local: 0,
                progress: None,
            },
        };
        let out = dfs.run();
        dfs.counter.flush();
        match out {
            Outcome::Found(w) => best = w,
            Outcome::Refuted => {
                return Ok(SidonResult {
                    n,
                    size: best.len(),
                    witness: best,
                    nodes_explored: shared.load(Ordering::Relaxed),
                    exhaustive: true,
                })
            }
            Outcome::OutOfBudget => {
                return Ok(SidonResult {
                    n,
                    size: best.len(),
                    witness: best,
                    nodes_explored: shared.load(Ordering::Relaxed),
                    exhaustive: false,
                })
            }
        }
    }
    Ok(SidonResult {
        n,
        size: best.len(),
        witness: best,
        nodes_explored: shared.load(Ordering::Relaxed),
        exhaustive: true,
    })
}

/// One upper bound on `g(n)` and the construction behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GUpper {
    pub value: usize,
    pub source: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GBounds {
    pub n: usize,
    pub lower: usize,
    pub lower_source: String,
    /// The best (smallest) upper bound.
    pub upper: GUpper,
    /// Every upper bound considered.
    pub candidates: Vec<GUpper>,
    pub exact: Option<usize>,
    /// The difference cover search behind the cover candidate.
    pub cover: CoverSearchResult,
}

/// `(q^e - 1)/(q - 1)` if it fits.
fn q_sum(q: u64, e: u32) -> Option<u64> {
    Some((q.checked_pow(e)? - 1) / (q - 1))
}

/// Geometric constructions living on exactly `n` points, as (size, source).
fn geometric_uppers(n: usize) -> Vec<GUpper> {
    let n = n as u64;
    let mut out = Vec::new();
    let push = |out: &mut Vec<GUpper>, v: u64, s: String| {
        out.push(GUpper {
            value: v as usize,
            source: s,
            provenance: Provenance::CertifiedBound,
        })
    };
    let mut q = 2u64;
    while q * q < n {
        if prime_power(q).is_some() {
            for r in 1u32.. {
                let Some(pts) = q_sum(q, 2 * r + 1) else { break };
                let Some(da) = q_sum(q, 2 * r).and_then(|x| x.checked_mul(q)) else { break };
                if da > n {
                    break;
                }
                let k = q_sum(q, r + 1).unwrap();
                if pts == n {
                    push(&mut out, k, format!("projective-flats(r={r},q={q})"));
                }
                if da == n {
                    push(&mut out, k, format!("dual-affine-flats(r={r},q={q})"));
                }
            }
        }
        q += 1;
    }
    out
}

struct GContext {
    budget: u64,
    memo: HashMap<usize, Vec<GUpper>>,
    covers: HashMap<usize, CoverSearchResult>,
}

impl GContext {
    fn uppers(&mut self, n: usize) -> Result<Vec<GUpper>> {
        if let Some(v) = self.memo.get(&n) {
            return Ok(v.clone());
        }
        let mut c = vec![GUpper {
            value: n / 2 + 1,
            source: "half-layer".into(),
            provenance: Provenance::CertifiedBound,
        }];
        if let Some(k) = (1..=n).find(|&k| nonempty_f_predicate(n, k)) {
            c.push(GUpper {
                value: k,
                source: "run-family".into(),
                provenance: Provenance::CertifiedBound,
            });
        }
        let cover = min_difference_cover(n, self.budget)?;
        c.push(GUpper {
            value: cover.h,
            source: "difference-cover".into(),
            provenance: if cover.exhaustive {
                Provenance::CertifiedBound
            } else {
                Provenance::NonExhaustive
            },
        });
        c.extend(geometric_uppers(n));
        for a in 2..n {
            if a * a > n {
                break;
            }
            if !n.is_multiple_of(a) {
                continue;
            }
            let b = n / a;
            let ua = best(&self.uppers(a)?).value;
            let ub = best(&self.uppers(b)?).value;
            c.push(GUpper {
                value: ua * ub,
                source: format!("tensor({a}x{b})"),
                provenance: Provenance::CertifiedBound,
            });
        }
        self.covers.insert(n, cover);
        self.memo.insert(n, c.clone());
        Ok(c)
    }
}

fn best(c: &[GUpper]) -> GUpper {
    c.iter()
        .min_by_key(|u| u.value)
        .cloned()
        .expect("at least one candidate")
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn g_bounds(n: usize) -> Result<GBounds> {
    g_bounds_with_budget(n, DEFAULT_SEARCH_BUDGET)
}

/// Certified bounds on `g(n)`. The lower bound is `⌊√n⌋ + 1`, raised to
/// `h(Z_n)` for prime `n` when the cover search closes.
pub fn g_bounds_with_budget(n: usize, budget: u64) -> Result<GBounds> {
    if n < 2 {
        return Err(Error::invalid("g(n) needs n >= 2"));
    }
    let mut ctx = GContext {
        budget,
        memo: HashMap::new(),
        covers: HashMap::new(),
    };
    let candidates = ctx.uppers(n)?;
    let upper = best(&candidates);
    let mut lower = isqrt(n) + 1;
    let mut lower_source = "sqrt".to_string();
    let cover = ctx.covers.remove(&n).expect("cover search ran");
    // for prime n a symmetric intersecting k-family yields a k-element cover
    if is_prime(n as u64) && cover.exhaustive && cover.h > lower {
        lower = cover.h;
        lower_source = "prime-difference-cover".into();
    }
    let exact = (lower == upper.value).then_some(lower);
    Ok(GBounds {
        n,
        lower,
        lower_source,
        upper,
        candidates,
        exact,
        cover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(n: usize, s: &[usize]) -> SubsetMask {
        SubsetMask::from_zero_based(n, s.iter().copied()).unwrap()
    }

    #[test]
    fn cover_examples() {
        assert!(is_difference_cover(&mask(7, &[0, 1, 3]), 7).unwrap());
        assert!(is_difference_cover(&mask(6, &[0, 1, 3]), 6).unwrap());
        assert!(!is_difference_cover(&mask(2, &[0]), 2).unwrap());
        assert!(is_difference_cover(&mask(2, &[0]), 3).is_err());
    }

    #[test]
    fn sidon_examples() {
        assert!(is_sidon(&mask(7, &[0, 1, 3]), 7).unwrap());
        assert!(!is_sidon(&mask(7, &[0, 1, 2]), 7).unwrap());
        let r = sidon_max(7, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!((r.size, r.exhaustive), (3, true));
        assert_eq!(r.witness, vec![0, 1, 3]);
        assert_eq!(sidon_max(2, 100).unwrap().size, 1);
        assert_eq!(sidon_max(1, 100).unwrap().size, 1);
    }

    #[test]
    fn small_min_covers() {
        let r = min_difference_cover(7, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!((r.h, r.exhaustive), (3, true));
        assert_eq!(r.witness, vec![0, 1, 3]);
        assert_eq!(min_difference_cover(2, 100).unwrap().h, 2);
        assert_eq!(min_difference_cover(1, 100).unwrap().h, 1);
        // Z_13 has the perfect difference set {0,1,3,9}
        assert_eq!(min_difference_cover(13, DEFAULT_SEARCH_BUDGET).unwrap().h, 4);
    }

    #[test]
    fn min_cover_against_brute_force() {
        for n in 2..=16usize {
            let brute = (1u32..1 << n)
                .filter(|b| {
                    let s: Vec<usize> = (0..n).filter(|i| b >> i & 1 == 1).collect();
                    is_difference_cover(&mask(n, &s), n).unwrap()
                })
                .map(|b| b.count_ones() as usize)
                .min()
                .unwrap();
            let r = min_difference_cover(n, DEFAULT_SEARCH_BUDGET).unwrap();
            assert_eq!(r.h, brute, "n = {n}");
            assert!(is_difference_cover(&r.witness_mask(), n).unwrap());
        }
    }

    #[test]
    fn budget_exhaustion_falls_back() {
        let r = min_difference_cover(60, 10).unwrap();
        assert!(!r.exhaustive);
        assert!(is_difference_cover(&r.witness_mask(), 60).unwrap());
        assert!(r.lower_bound <= r.h);
    }

    #[test]
    fn constructed_covers_are_covers() {
        for n in 1..200 {
            let s = construct_difference_cover(n);
            assert!(is_difference_cover(&mask(n, &s), n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn g_examples() {
        let g7 = g_bounds(7).unwrap();
        assert_eq!(g7.exact, Some(3));
        let g12 = g_bounds(12).unwrap();
        assert_eq!((g12.lower, g12.upper.value), (4, 4));
        assert!(g12
            .candidates
            .iter()
            .any(|u| u.value == 4 && u.source.starts_with("dual-affine")));
        let g49 = g_bounds(49).unwrap();
        assert!(g49.candidates.iter().any(|u| u.source == "tensor(7x7)" && u.value == 9));
        for n in 2..40 {
            let g = g_bounds(n).unwrap();
            assert!(g.lower <= g.upper.value, "n = {n}");
        }
    }
}
