//! Exact maximum rotation-invariant intersecting families.
//!
//! A rotation-invariant `k`-uniform family is a union of rotation orbits of
//! `k`-subsets of `Z_n`. It is intersecting iff every orbit in it is
//! internally intersecting and every two of its orbits cross-intersect, so
//! the maximum is a maximum-weight clique on the internally intersecting
//! orbits, weighted by orbit size.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_u128, k_subsets, k_subsets_with_top};
use crate::error::{Error, Result};
use crate::family::mask::rotate_u64;
use crate::family::{SetFamily, SubsetMask, DEFAULT_MATERIALIZE_BUDGET};
use crate::geometry::field::is_prime;

/// Default work budget for the clique search. A search node costs one unit
/// per candidate vertex it considers.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 2_000_000_000;

/// Ground sets above this size are out of reach of the orbit sweep.
pub const MAX_ORACLE_N: usize = 64;

/// Largest orbit graph the clique search will build (the adjacency matrix is dense).
pub const MAX_ORACLE_VERTICES: usize = 8192;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecklaceOrbit {
    pub n: usize,
    pub k: usize,
    /// Least member of the orbit as an integer bit vector.
    pub representative: u64,
    pub size: usize,
    pub internally_intersecting: bool,
}

impl NecklaceOrbit {
    pub fn representative_mask(&self) -> SubsetMask {
        SubsetMask::from_u64(self.n, self.representative).expect("n <= 64")
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.size).map(|j| rotate_u64(self.representative, self.n, j))
    }

    /// Every member of `self` meets every member of `other`.
    pub fn cross_intersects(&self, other: &NecklaceOrbit) -> bool {
        other.members().all(|y| y & self.representative != 0)
    }
}

/// Least rotation of `x` and the orbit size.
fn canonical(x: u64, n: usize) -> (u64, usize) {
    let mut best = x;
    let mut period = n;
    for j in 1..n {
        let r = rotate_u64(x, n, j);
        if r == x {
            period = j;
            break;
        }
        best = best.min(r);
    }
    (best, period)
}

/// Orbits of the vertices under multiplication by the units of `Z_n`. A unit
/// maps rotation orbits to rotation orbits of the same size and preserves
/// intersections, so it is an automorphism of the compatibility graph.
fn multiplier_classes(n: usize, verts: &[NecklaceOrbit]) -> Vec<Vec<usize>> {
    let index: HashMap<u64, usize> = verts
        .iter()
        .enumerate()
        .map(|(i, o)| (o.representative, i))
        .collect();
    let units: Vec<usize> = (2..n).filter(|&a| a.gcd(&n) == 1).collect();
    let mut seen = vec![false; verts.len()];
    let mut out = Vec::new();
    for i in 0..verts.len() {
        if seen[i] {
            continue;
        }
        let mut class = vec![i];
        seen[i] = true;
        let x = verts[i].representative;
        for &a in &units {
            let mut y = 0u64;
            for e in (0..n).filter(|e| x >> e & 1 == 1) {
                y |= 1 << (a * e % n);
            }
            let j = index[&canonical(y, n).0];
            if !seen[j] {
                seen[j] = true;
                class.push(j);
            }
        }
        out.push(class);
    }
    out
}

fn check_params(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if n > MAX_ORACLE_N {
        return Err(Error::Capacity {
            what: "oracle ground set",
            needed: n as u128,
            limit: MAX_ORACLE_N as u128,
        });
    }
    Ok(())
}

/// Rotation orbits of the `k`-subsets of `Z_n`, sorted by representative.
pub fn cyclic_orbit_decomposition(n: usize, k: usize) -> Result<Vec<NecklaceOrbit>> {
    cyclic_orbit_decomposition_with_budget(n, k, DEFAULT_MATERIALIZE_BUDGET)
}

pub fn cyclic_orbit_decomposition_with_budget(
    n: usize,
    k: usize,
    budget: u128,
) -> Result<Vec<NecklaceOrbit>> {
    check_params(n, k)?;
    let needed = binomial_u128(n as u64, k as u64).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "k-subsets to sweep",
            needed,
            budget,
        });
    }
    let mut orbits: Vec<NecklaceOrbit> = (k - 1..n)
        .into_par_iter()
        .flat_map_iter(|top| {
            k_subsets_with_top(top, k).filter_map(move |x| {
                let (rep, size) = canonical(x, n);
                (rep == x).then(|| NecklaceOrbit {
                    n,
                    k,
                    representative: x,
                    size,
                    internally_intersecting: (0..size).all(|j| rotate_u64(x, n, j) & x != 0),
                })
            })
        })
        .collect();
    orbits.sort_unstable_by_key(|o| o.representative);
    Ok(orbits)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub n: usize,
    pub k: usize,
    pub value: BigUint,
    /// Representatives of the orbits making up the witness.
    pub orbits: Vec<NecklaceOrbit>,
    /// The witness family, when small enough to materialize.
    pub witness: Option<SetFamily>,
    /// The value is `s(n,k)` itself: `n` is prime, or `2k > n`.
    pub exact_for_all_symmetric: bool,
    /// `false` when the clique search ran out of budget.
    pub exhaustive: bool,
    pub nodes_explored: u64,
}

fn union_family(n: usize, k: usize, orbits: &[NecklaceOrbit]) -> Result<SetFamily> {
    let members = orbits
        .iter()
        .flat_map(|o| o.members())
        .map(|b| SubsetMask::from_u64(n, b))
        .collect::<Result<Vec<_>>>()?;
    SetFamily::uniform(n, k, members)
}

/// Small fixed-width bitset over clique vertices.
#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.count_ones() as u64).sum()
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }
    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

struct Graph {
    weight: Vec<u64>,
    adj: Vec<Bits>,
}

impl Graph {
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].0[v / 64] >> (v % 64) & 1 == 1
    }

    /// Greedy colouring of `cand` in index order. Returns the vertices class by
    /// class, each paired with the sum of the heaviest weights of its class and
    /// all earlier classes; any clique inside a prefix of the list weighs at
    /// most the bound at the prefix's last vertex.
    fn colour_order(&self, cand: &Bits) -> Vec<(usize, u64)> {
        let mut left = cand.clone();
        let mut out = Vec::new();
        let mut total = 0;
        while !left.is_empty() {
            let mut q = left.clone();
            let start = out.len();
            let mut heaviest = 0;
            while let Some(v) = q.first() {
                q.clear(v);
                left.clear(v);
                q.and_not_assign(&self.adj[v]);
                heaviest = heaviest.max(self.weight[v]);
                out.push((v, 0));
            }
            total += heaviest;
            for e in &mut out[start..] {
                e.1 = total;
            }
        }
        out
    }

    fn colour_bound(&self, cand: &Bits) -> u64 {
        self.colour_order(cand).last().map_or(0, |e| e.1)
    }
}

struct Search<'a> {
    g: &'a Graph,
    incumbent: &'a AtomicU64,
    nodes: &'a AtomicU64,
    work: &'a AtomicU64,
    stop: &'a AtomicBool,
    budget: u64,
    local: u64,
    local_work: u64,
    best_weight: u64,
    best: Vec<usize>,
    stack: Vec<usize>,
}

impl Search<'_> {
    fn tick(&mut self, cost: u64) -> bool {
        self.local += 1;
        self.local_work += cost + 1;
        if self.local >= 1024 || self.local_work >= 1 << 16 {
            let total = self.flush();
            if total > self.budget {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn flush(&mut self) -> u64 {
        self.nodes.fetch_add(self.local, Ordering::Relaxed);
        let total = self.work.fetch_add(self.local_work, Ordering::Relaxed) + self.local_work;
        self.local = 0;
        self.local_work = 0;
        total
    }

    fn record(&mut self, weight: u64) {
        if weight > self.best_weight {
            self.best_weight = weight;
            self.best = self.stack.clone();
            self.incumbent.fetch_max(weight, Ordering::Relaxed);
        }
    }

    /// Maximum-weight search below the current stack; improves `best` strictly.
    fn expand(&mut self, cand: Bits, weight: u64) {
        if !self.tick(cand.count()) {
            return;
        }
        let order = self.g.colour_order(&cand);
        if order.is_empty() {
            self.record(weight);
            return;
        }
        let mut cand = cand;
        for &(v, bound) in order.iter().rev() {
            let target = self.incumbent.load(Ordering::Relaxed).max(self.best_weight);
            if weight + bound <= target {
                return;
            }
            self.stack.push(v);
            self.expand(cand.and(&self.g.adj[v]), weight + self.g.weight[v]);
            self.stack.pop();
            cand.clear(v);
            if self.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    /// First clique of weight at least `target` in lexicographic order of
    /// vertex index lists.
    fn lex_first(&mut self, cand: &Bits, weight: u64, target: u64) -> Option<Vec<usize>> {
        if !self.tick(cand.count()) {
            return None;
        }
        if weight >= target {
            return Some(self.stack.clone());
        }
        if weight + self.g.colour_bound(cand) < target {
            return None;
        }
        for v in cand.iter() {
            let mut next = cand.and(&self.g.adj[v]);
            // keep the list increasing
            for u in next.iter().filter(|&u| u < v).collect::<Vec<_>>() {
                next.0[u / 64] &= !(1 << (u % 64));
            }
            self.stack.push(v);
            let r = self.lex_first(&next, weight + self.g.weight[v], target);
            self.stack.pop();
            if r.is_some() || self.stop.load(Ordering::Relaxed) {
                return r;
            }
        }
        None
    }
}

/// Maximum total size of an intersecting union of rotation orbits of
/// `k`-subsets of `Z_n`.
pub fn s_cyclic(n: usize, k: usize) -> Result<OracleResult> {
    s_cyclic_with_budget(n, k, DEFAULT_CLIQUE_BUDGET)
}

pub fn s_cyclic_with_budget(n: usize, k: usize, budget: u64) -> Result<OracleResult> {
    check_params(n, k)?;
    let prime = is_prime(n as u64);
    if 2 * k > n {
        // every two k-sets meet: the whole layer
        let layer = binomial(n as u64, k as u64);
        let small = binomial_u128(n as u64, k as u64).unwrap_or(u128::MAX)
            <= DEFAULT_MATERIALIZE_BUDGET;
        let (orbits, witness) = if small {
            let orbits = cyclic_orbit_decomposition(n, k)?;
            let w = union_family(n, k, &orbits)?;
            (orbits, Some(w))
        } else {
            (Vec::new(), None)
        };
        return Ok(OracleResult {
            n,
            k,
            value: layer,
            orbits,
            witness,
            exact_for_all_symmetric: true,
            exhaustive: true,
            nodes_explored: 0,
        });
    }
    let all = cyclic_orbit_decomposition(n, k)?;
    let verts: Vec<NecklaceOrbit> = all.into_iter().filter(|o| o.internally_intersecting).collect();
    let m = verts.len();
    if m > MAX_ORACLE_VERTICES {
        return Err(Error::Capacity {
            what: "internally intersecting orbits",
            needed: m as u128,
            limit: MAX_ORACLE_VERTICES as u128,
        });
    }
    let adj: Vec<Bits> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut row = Bits::new(m);
            (0..m)
                .filter(|&j| j != i && verts[i].cross_intersects(&verts[j]))
                .for_each(|j| row.set(j));
            row
        })
        .collect();
    let g = Graph {
        weight: verts.iter().map(|o| o.size as u64).collect(),
        adj,
    };

    // phase 1: the optimum, on a copy of the graph relabelled so that heavy,
    // high-degree vertices come first
    let degree: Vec<u32> = g.adj.iter().map(|a| a.0.iter().map(|w| w.count_ones()).sum()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse((g.weight[v], degree[v])), v));
    let greedy = {
        let mut chosen: Vec<usize> = Vec::new();
        for &v in &order {
            if chosen.iter().all(|&u| g.adjacent(u, v)) {
                chosen.push(v);
            }
        }
        chosen.iter().map(|&v| g.weight[v]).sum::<u64>()
    };
    let mut rank = vec![0; m];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let h = Graph {
        weight: order.iter().map(|&v| g.weight[v]).collect(),
        adj: order
            .iter()
            .map(|&v| {
                let mut b = Bits::new(m);
                g.adj[v].iter().for_each(|u| b.set(rank[u]));
                b
            })
            .collect(),
    };
    let incumbent = AtomicU64::new(greedy);
    let nodes = AtomicU64::new(0);
    let work = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    // Some optimal clique meets every class; branch on one representative per
    // class, dropping the classes already handled.
    let mut classes: Vec<Vec<usize>> = multiplier_classes(n, &verts)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|v| rank[v]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    classes.sort_unstable();
    let mut roots = Vec::with_capacity(classes.len());
    let mut alive = Bits::new(m);
    (0..m).for_each(|v| alive.set(v));
    for c in &classes {
        roots.push((c[0], alive.and(&h.adj[c[0]])));
        c.iter().for_each(|&v| alive.clear(v));
    }
    let results: Vec<(u64, Vec<usize>)> = roots
        .into_par_iter()
        .map(|(v, cand)| {
            if stop.load(Ordering::Relaxed) {
                return (0, Vec::new());
            }
            let mut s = Search {
                g: &h,
                incumbent: &incumbent,
                nodes: &nodes,
                work: &work,
                stop: &stop,
                budget,
                local: 0,
                local_work: 0,
                best_weight: 0,
                best: Vec::new(),
                stack: vec![v],
            };
            s.expand(cand, h.weight[v]);
            s.flush();
            (s.best_weight, s.best.iter().map(|&x| order[x]).collect())
        })
        .collect();
    let optimum = results.iter().map(|r| r.0).max().unwrap_or(0).max(greedy);
    let mut exhaustive = !stop.load(Ordering::Relaxed);

    // phase 2: the lexicographically least optimal clique
    let mut witness_ids = None;
    if optimum > 0 && exhaustive {
        let mut s = Search {
            g: &g,
            incumbent: &incumbent,
            nodes: &nodes,
            work: &work,
            stop: &stop,
            budget,
            local: 0,
            local_work: 0,
            best_weight: 0,
            best: Vec::new(),
            stack: Vec::new(),
        };
        let mut full = Bits::new(m);
        (0..m).for_each(|v| full.set(v));
        witness_ids = s.lex_first(&full, 0, optimum);
        s.flush();
        if stop.load(Ordering::Relaxed) {
            exhaustive = false;
        }
    }
    let ids = match witness_ids {
        Some(ids) => ids,
        None => {
            // best clique found, or the greedy one
            let best = results
                .into_iter()
                .max_by_key(|r| r.0)
                .filter(|r| r.0 >= greedy)
                .map(|r| r.1);
            best.unwrap_or_else(|| {
                let mut chosen: Vec<usize> = Vec::new();
                for &v in &order {
                    if chosen.iter().all(|&u| g.adjacent(u, v)) {
                        chosen.push(v);
                    }
                }
                chosen
            })
        }
    };
    let mut ids = ids;
    ids.sort_unstable();
    let orbits: Vec<NecklaceOrbit> = ids.iter().map(|&i| verts[i].clone()).collect();
    let value: u64 = orbits.iter().map(|o| o.size as u64).sum();
    let witness = union_family(n, k, &orbits)?;
    Ok(OracleResult {
        n,
        k,
        value: BigUint::from(value),
        orbits,
        witness: Some(witness),
        exact_for_all_symmetric: prime && exhaustive,
        exhaustive,
        nodes_explored: nodes.load(Ordering::Relaxed),
    })
}

/// All `k`-subsets of `Z_n` (n <= 64) as masks, for small sanity sweeps.
pub fn layer(n: usize, k: usize) -> impl Iterator<Item = u64> {
    k_subsets(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{verify_symmetric_witness, GroupWitness};

    #[test]
    fn orbit_examples() {
        let o = cyclic_orbit_decomposition(7, 3).unwrap();
        assert_eq!(o.len(), 5);
        assert!(o.iter().all(|x| x.size == 7));
        let o = cyclic_orbit_decomposition(4, 2).unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o[0].representative_mask().to_one_based(), vec![1, 2]);
        assert_eq!(o[0].size, 4);
        assert_eq!(o[1].representative_mask().to_one_based(), vec![1, 3]);
        assert_eq!(o[1].size, 2);
        let o = cyclic_orbit_decomposition(5, 5).unwrap();
        assert_eq!((o.len(), o[0].size), (1, 1));
    }

    #[test]
    fn orbit_sizes_sum_to_layer() {
        for n in 1..=14usize {
            for k in 1..=n {
                let total: usize = cyclic_orbit_decomposition(n, k).unwrap().iter().map(|o| o.size).sum();
                assert_eq!(BigUint::from(total), binomial(n as u64, k as u64));
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let r = s_cyclic(7, 3).unwrap();
        assert_eq!(r.value, BigUint::from(7u32));
        assert!(r.exact_for_all_symmetric && r.exhaustive);
        let w = r.witness.unwrap();
        assert!(w.is_intersecting());
        assert!(verify_symmetric_witness(&w, &GroupWitness::rotations(7)).unwrap());

        assert_eq!(s_cyclic(5, 2).unwrap().value, BigUint::from(0u32));
        assert_eq!(s_cyclic(5, 3).unwrap().value, BigUint::from(10u32));
        assert_eq!(s_cyclic(13, 4).unwrap().value, BigUint::from(13u32));
    }

    #[test]
    fn witness_matches_value() {
        for n in 2..=12usize {
            for k in 1..=n {
                let r = s_cyclic(n, k).unwrap();
                let w = r.witness.unwrap();
                assert_eq!(BigUint::from(w.len()), r.value, "n={n} k={k}");
                assert!(w.is_intersecting());
            }
        }
    }
}
