//! Permutations of the ground set, group witnesses, and symmetry checks.
//!
//! A family is symmetric when its automorphism group is transitive. Two
//! routes decide that here: [`verify_symmetric_witness`] checks a supplied
//! generating set (generators fix the family, orbit of point 1 is everything),
//! and [`automorphism_transitivity_search`] finds automorphisms from scratch by
//! backtracking, for small ground sets.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{SetFamily, SubsetMask};

pub const DEFAULT_SEARCH_CAP: usize = 12;
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A bijection of `{0..n}`; `images[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn from_zero_based(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::invalid(format!("not a permutation: {images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let zero = images
            .iter()
            .map(|&x| {
                if x == 0 {
                    Err(Error::invalid("permutation images are 1-based"))
                } else {
                    Ok((x - 1) as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_zero_based(zero)
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// `i ↦ i + shift (mod n)`.
    pub fn rotation(n: usize, shift: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| ((i + shift) % n) as u32).collect(),
        }
    }

    /// `i ↦ -i (mod n)`.
    pub fn reflection(n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| ((n - i) % n) as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn apply_set(&self, s: &SubsetMask) -> SubsetMask {
        let mut out = SubsetMask::empty(s.n()).expect("same ground set");
        for i in s.iter() {
            out.insert(self.apply(i));
        }
        out
    }

    pub fn apply_family(&self, f: &SetFamily) -> SetFamily {
        let members: Vec<SubsetMask> = f.iter().map(|s| self.apply_set(s)).collect();
        match f.k() {
            Some(k) => SetFamily::uniform(f.n(), k, members),
            None => SetFamily::new(f.n(), members),
        }
        .expect("image of a well-formed family")
    }

    /// `true` iff the permutation maps `f` onto itself.
    pub fn fixes(&self, f: &SetFamily) -> bool {
        f.iter().all(|s| f.contains(&self.apply_set(s)))
    }
}

/// A generating set for a permutation group on `{0..n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupWitness {
    n: usize,
    generators: Vec<Permutation>,
}

impl GroupWitness {
    pub fn new(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::invalid("group witness needs at least one generator"));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != n) {
            return Err(Error::invalid(format!(
                "generator of degree {} in a witness of degree {n}",
                g.degree()
            )));
        }
        Ok(GroupWitness { n, generators })
    }

    /// The cyclic group generated by `i ↦ i + 1`.
    pub fn rotations(n: usize) -> Self {
        GroupWitness {
            n,
            generators: vec![Permutation::rotation(n, 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Orbit of `point` under the generated group, by breadth-first closure.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([point]);
        seen[point] = true;
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|&i| seen[i]).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.n
    }

    /// Every element of the generated group, identity first.
    pub fn enumerate_group(&self, cap: usize) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(self.n);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut elems = vec![id];
        let mut head = 0;
        while head < elems.len() {
            let cur = elems[head].clone();
            head += 1;
            for g in &self.generators {
                let next = g.compose(&cur);
                if seen.insert(next.clone()) {
                    if elems.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    elems.push(next);
                }
            }
        }
        Ok(elems)
    }
}

/// `true` iff every generator maps `a` onto itself and the generated group is
/// transitive on the ground set.
pub fn verify_symmetric_witness(a: &SetFamily, w: &GroupWitness) -> Result<bool> {
    if w.n() != a.n() {
        return Err(Error::invalid(format!(
            "witness degree {} differs from ground set size {}",
            w.n(),
            a.n()
        )));
    }
    Ok(w.generators().iter().all(|g| g.fixes(a)) && w.is_transitive())
}

/// Outcome of the exhaustive automorphism search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityReport {
    pub transitive: bool,
    /// For each target `j`, the lexicographically least automorphism sending
    /// point 1 to `j`, if any.
    pub witnesses: Vec<Option<Permutation>>,
}

impl TransitivityReport {
    /// The found automorphisms as a group witness, if the family is symmetric.
    pub fn group_witness(&self, n: usize) -> Option<GroupWitness> {
        if !self.transitive {
            return None;
        }
        let gens: Vec<Permutation> = self.witnesses.iter().flatten().cloned().collect();
        GroupWitness::new(n, gens).ok()
    }
}

pub fn automorphism_transitivity_search(a: &SetFamily) -> Result<TransitivityReport> {
    automorphism_transitivity_search_with_cap(a, DEFAULT_SEARCH_CAP)
}

pub fn automorphism_transitivity_search_with_cap(
    a: &SetFamily,
    cap: usize,
) -> Result<TransitivityReport> {
    let n = a.n();
    if n > cap || n > 64 {
        return Err(Error::SearchCapExceeded { n, cap: cap.min(64) });
    }
    let search = AutSearch::new(a);
    let witnesses: Vec<Option<Permutation>> = (0..n)
        .into_par_iter()
        .map(|j| search.least_with_first_image(j))
        .collect();
    Ok(TransitivityReport {
        transitive: witnesses.iter().all(Option::is_some),
        witnesses,
    })
}

struct AutSearch {
    n: usize,
    members: HashSet<u64>,
    degree: Vec<usize>,
    codegree: Vec<Vec<usize>>,
    /// members grouped by their largest element
    closing_at: Vec<Vec<u64>>,
}

impl AutSearch {
    fn new(a: &SetFamily) -> Self {
        let n = a.n();
        let bits: Vec<u64> = a.iter().map(|s| s.as_u64().expect("n <= 64")).collect();
        let mut codegree = vec![vec![0; n]; n];
        let mut closing_at = vec![Vec::new(); n];
        for &b in &bits {
            let elems: Vec<usize> = (0..n).filter(|&i| b >> i & 1 == 1).collect();
            for &i in &elems {
                for &j in &elems {
                    codegree[i][j] += 1;
                }
            }
            if let Some(&top) = elems.last() {
                closing_at[top].push(b);
            }
        }
        AutSearch {
            n,
            members: bits.iter().copied().collect(),
            degree: (0..n).map(|i| codegree[i][i]).collect(),
            codegree,
            closing_at,
        }
    }

    fn least_with_first_image(&self, target: usize) -> Option<Permutation> {
        if self.degree[0] != self.degree[target] {
            return None;
        }
        let mut images = vec![u32::MAX; self.n];
        let mut used = vec![false; self.n];
        images[0] = target as u32;
        used[target] = true;
        if !self.consistent(0, &images) {
            return None;
        }
        self.extend(1, &mut images, &mut used)
            .then_some(Permutation { images })
    }

    fn extend(&self, i: usize, images: &mut [u32], used: &mut [bool]) -> bool {
        if i == self.n {
            return true;
        }
        for c in 0..self.n {
            if used[c] || self.degree[c] != self.degree[i] {
                continue;
            }
            images[i] = c as u32;
            if self.consistent(i, images) {
                used[c] = true;
                if self.extend(i + 1, images, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        images[i] = u32::MAX;
        false
    }

    /// Checks the constraints that become decidable once point `i` is placed.
    fn consistent(&self, i: usize, images: &[u32]) -> bool {
        let ci = images[i] as usize;
        for a in 0..=i {
            if self.codegree[i][a] != self.codegree[ci][images[a] as usize] {
                return false;
            }
        }
        self.closing_at[i].iter().all(|&m| {
            let mut img = 0u64;
            let mut b = m;
            while b != 0 {
                let e = b.trailing_zeros() as usize;
                b &= b - 1;
                img |= 1 << images[e];
            }
            self.members.contains(&img)
        })
    }
}

/// Exact mean of `|x ∩ σ(x)|` over every element `σ` of the group generated
/// by `w`. For a transitive group this is `|x|² / n`.
pub fn average_intersection_identity(x: &SubsetMask, w: &GroupWitness) -> Result<BigRational> {
    average_intersection_identity_with_cap(x, w, DEFAULT_GROUP_CAP)
}

pub fn average_intersection_identity_with_cap(
    x: &SubsetMask,
    w: &GroupWitness,
    cap: usize,
) -> Result<BigRational> {
    if x.n() != w.n() {
        return Err(Error::invalid("set and witness have different ground sets"));
    }
    let orbit = w.orbit(0).len();
    if orbit != w.n() {
        return Err(Error::NotTransitive { orbit, n: w.n() });
    }
    let group = w.enumerate_group(cap)?;
    let total: usize = group
        .par_iter()
        .map(|g| x.intersection_len(&g.apply_set(x)))
        .sum();
    Ok(BigRational::new(BigInt::from(total), BigInt::from(group.len())))
}

/// Generators acting on the tensor ground set `[n]×[m]` (element `i*m + j`,
/// 0-based): each generator of `a` acts on the first coordinate, each
/// generator of `b` on the second. Transitive when both factors are.
pub fn product_witness(a: &GroupWitness, b: &GroupWitness) -> Result<GroupWitness> {
    let (n, m) = (a.n(), b.n());
    let mut gens = Vec::new();
    for g in a.generators() {
        let images = (0..n * m)
            .map(|x| (g.apply(x / m) * m + x % m) as u32)
            .collect();
        gens.push(Permutation::from_zero_based(images)?);
    }
    for h in b.generators() {
        let images = (0..n * m)
            .map(|x| (x / m * m + h.apply(x % m)) as u32)
            .collect();
        gens.push(Permutation::from_zero_based(images)?);
    }
    GroupWitness::new(n * m, gens)
}
