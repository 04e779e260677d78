//! Subsets of `[n]`, families of them, and the family-level constructions
//! (translates, tensor products, superset extensions).

pub mod io;
pub mod mask;
pub mod measure;

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::combinatorics::{binomial_u128, combinations};
use crate::error::{Error, Result};
pub use mask::{SubsetMask, MAX_GROUND_SET};

/// Default cap on the number of sets a constructor may materialize.
pub const DEFAULT_MATERIALIZE_BUDGET: u128 = 100_000_000;

/// Largest ground set for which the intersecting test uses an upset table.
const UPSET_TABLE_MAX_N: usize = 22;

/// A deduplicated family of subsets of a common ground set, kept in ascending
/// integer order of the membership vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    k: Option<usize>,
    members: Vec<SubsetMask>,
}

impl SetFamily {
    /// Builds a family, inferring `k` when the (nonempty) family is uniform.
    pub fn new(n: usize, members: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let members = canonicalize(n, members)?;
        let k = match members.first() {
            Some(first) => {
                let k = first.len();
                members.iter().all(|m| m.len() == k).then_some(k)
            }
            None => None,
        };
        Ok(SetFamily { n, k, members })
    }

    /// Builds a `k`-uniform family, rejecting members of any other size.
    pub fn uniform(
        n: usize,
        k: usize,
        members: impl IntoIterator<Item = SubsetMask>,
    ) -> Result<Self> {
        if k > n {
            return Err(Error::invalid(format!("uniformity {k} exceeds n = {n}")));
        }
        let members = canonicalize(n, members)?;
        if let Some(bad) = members.iter().find(|m| m.len() != k) {
            return Err(Error::invalid(format!(
                "member {:?} has size {}, expected {k}",
                bad.to_one_based(),
                bad.len()
            )));
        }
        Ok(SetFamily {
            n,
            k: Some(k),
            members,
        })
    }

    pub fn empty(n: usize) -> Self {
        SetFamily {
            n,
            k: None,
            members: Vec::new(),
        }
    }

    /// Convenience constructor from 1-based element lists.
    pub fn from_one_based(n: usize, sets: &[&[usize]]) -> Result<Self> {
        let masks = sets
            .iter()
            .map(|s| SubsetMask::from_one_based(n, s.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, masks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SubsetMask> {
        self.members.iter()
    }

    pub fn contains(&self, s: &SubsetMask) -> bool {
        self.members.binary_search(s).is_ok()
    }

    /// `true` iff every two members (including a member with itself) meet.
    pub fn is_intersecting(&self) -> bool {
        let m = &self.members;
        if m.iter().any(|s| s.is_empty()) {
            return false;
        }
        if m.len() <= 1 {
            return true;
        }
        if self.n <= UPSET_TABLE_MAX_N && m.len() > 512 {
            // A family is intersecting iff no member's complement lies in its upset.
            let n = self.n;
            let bits: Vec<u64> = m.iter().map(|s| s.as_u64().unwrap()).collect();
            let up = measure::upset_indicator(n, &bits);
            let full = mask::low_bits(n);
            return bits.iter().all(|&x| !up[(full & !x) as usize]);
        }
        m.par_iter()
            .enumerate()
            .all(|(i, a)| m[i + 1..].iter().all(|b| a.intersects(b)))
    }

    /// Members that contain element `i` (0-based), per point.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for s in &self.members {
            for i in s.iter() {
                d[i] += 1;
            }
        }
        d
    }
}

fn canonicalize(n: usize, members: impl IntoIterator<Item = SubsetMask>) -> Result<Vec<SubsetMask>> {
    let mut v: Vec<SubsetMask> = members.into_iter().collect();
    if let Some(bad) = v.iter().find(|m| m.n() != n) {
        return Err(Error::invalid(format!(
            "member over ground set {} in family over {n}",
            bad.n()
        )));
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// All cyclic translates `S + j` of a subset of `Z_n`.
pub fn translates_family(s: &SubsetMask) -> Result<SetFamily> {
    if s.is_empty() {
        return Err(Error::invalid("translates of the empty set"));
    }
    let n = s.n();
    SetFamily::uniform(n, s.len(), (0..n).map(|j| s.rotate(j)))
}

/// Tensor product: `x ⊗ y` has element `(i-1)m + j` (1-based) whenever
/// `i ∈ x` and `j ∈ y`.
pub fn tensor_product(a: &SetFamily, b: &SetFamily) -> Result<SetFamily> {
    let (n, m) = (a.n(), b.n());
    let nm = n
        .checked_mul(m)
        .filter(|&v| v <= MAX_GROUND_SET)
        .ok_or(Error::Capacity {
            what: "tensor product ground set",
            needed: n as u128 * m as u128,
            limit: MAX_GROUND_SET as u128,
        })?;
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            let mut z = SubsetMask::empty(nm)?;
            for i in x.iter() {
                for j in y.iter() {
                    z.insert(i * m + j);
                }
            }
            out.push(z);
        }
    }
    let k = match (a.k(), b.k()) {
        (Some(k), Some(l)) => Some(k * l),
        _ => None,
    };
    match k {
        Some(k) => SetFamily::uniform(nm, k, out),
        None => SetFamily::new(nm, out),
    }
}

/// The `l`-sets containing at least one member of the `k`-uniform family `a`.
pub fn superset_extension(a: &SetFamily, l: usize) -> Result<SetFamily> {
    let n = a.n();
    if a.is_empty() {
        return Ok(SetFamily::empty(n));
    }
    let k = a
        .k()
        .ok_or_else(|| Error::invalid("superset extension needs a uniform family"))?;
    if l < k || l > n {
        return Err(Error::invalid(format!("need k <= l <= n, got k = {k}, l = {l}, n = {n}")));
    }
    let per = binomial_u128((n - k) as u64, (l - k) as u64).unwrap_or(u128::MAX);
    let needed = per.saturating_mul(a.len() as u128);
    if needed > DEFAULT_MATERIALIZE_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "superset extension",
            needed,
            budget: DEFAULT_MATERIALIZE_BUDGET,
        });
    }
    let mut out = BTreeSet::new();
    for x in a.iter() {
        let outside: Vec<usize> = x.complement().iter().collect();
        for extra in combinations(outside.len(), l - k) {
            let mut y = x.clone();
            for e in extra {
                y.insert(outside[e]);
            }
            out.insert(y);
        }
    }
    SetFamily::uniform(n, l, out)
}
