//! Singer difference sets and Singer cycles.

use super::field::{prime_power, FiniteField};
use super::linalg;
use super::space::{IncidenceSpace, SpaceKind};
use crate::error::{Error, Result};
use crate::family::SubsetMask;
use crate::symmetry::Permutation;

/// Cap on the number of companion polynomials tried by [`singer_cycle`].
const SINGER_CYCLE_SEARCH_CAP: u64 = 1_000_000;

/// A perfect difference set in `Z_{q^2+q+1}` for a prime power `q`:
/// the discrete logarithms (mod `q^2+q+1`) of the nonzero elements of
/// `GF(q^3)` with zero trace to `GF(q)`, translated to the rotation with the
/// lexicographically least sorted element list.
pub fn singer_difference_set(q: u64) -> Result<SubsetMask> {
    let (p, m) = prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
    let big = FiniteField::new(p, 3 * m)?;
    let n = (q * q + q + 1) as usize;
    let trace = |x: u32| {
        let a = big.pow(x, q);
        let b = big.pow(a, q);
        big.add(big.add(x, a), b)
    };
    let mut d: Vec<usize> = (0..n as u64)
        .filter(|&i| trace(big.exp(i)) == 0)
        .map(|i| i as usize)
        .collect();
    if d.len() != q as usize + 1 {
        return Err(Error::Construction(format!(
            "trace kernel gave {} points, expected {}",
            d.len(),
            q + 1
        )));
    }
    d.sort_unstable();
    let best = (0..n)
        .map(|j| {
            let mut r: Vec<usize> = d.iter().map(|&x| (x + n - j) % n).collect();
            r.sort_unstable();
            r
        })
        .min()
        .expect("n > 0");
    SubsetMask::from_zero_based(n, best)
}

/// A collineation of `PG(d, q)` permuting the points in a single cycle,
/// induced by the companion matrix of the least suitable monic polynomial of
/// degree `d + 1`.
pub fn singer_cycle(space: &IncidenceSpace) -> Result<Permutation> {
    if space.kind() != SpaceKind::Projective {
        return Err(Error::invalid("Singer cycles act on projective spaces"));
    }
    let f = space.field();
    let q = f.order();
    let len = space.dim() + 1;
    let tries = (q as u64).checked_pow(len as u32).unwrap_or(u64::MAX);
    if tries > SINGER_CYCLE_SEARCH_CAP {
        return Err(Error::BudgetExceeded {
            what: "companion polynomial search",
            needed: tries as u128,
            budget: SINGER_CYCLE_SEARCH_CAP as u128,
        });
    }
    let n = space.n();
    for low in linalg::all_vectors(q, len) {
        if low[0] == 0 {
            continue;
        }
        // companion matrix: e_i -> e_{i+1}, e_{len-1} -> -Σ low_i e_i
        let mut c = vec![vec![0u32; len]; len];
        for i in 0..len - 1 {
            c[i + 1][i] = 1;
        }
        for (i, &a) in low.iter().enumerate() {
            c[i][len - 1] = f.neg(a);
        }
        let images: Vec<u32> = (0..n)
            .map(|i| {
                let v = linalg::normalize(f, &linalg::mat_vec(f, &c, space.point(i)))
                    .expect("companion matrix is invertible");
                space.label(&v).expect("image is a point") as u32
            })
            .collect();
        let mut cur = 0usize;
        let mut steps = 0;
        loop {
            cur = images[cur] as usize;
            steps += 1;
            if cur == 0 {
                break;
            }
        }
        if steps == n {
            return Permutation::from_zero_based(images);
        }
    }
    Err(Error::Construction("no Singer cycle found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_perfect_difference_set;
    use crate::family::translates_family;

    #[test]
    fn small_singer_sets() {
        let d2 = singer_difference_set(2).unwrap();
        assert_eq!(d2.n(), 7);
        assert_eq!(d2.len(), 3);
        assert_eq!(d2.to_zero_based()[0], 0);
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let d = singer_difference_set(q).unwrap();
            assert_eq!(d.n() as u64, q * q + q + 1);
            assert!(is_perfect_difference_set(&d), "q = {q}");
            assert!(translates_family(&d).unwrap().is_intersecting());
        }
        assert!(singer_difference_set(6).is_err());
    }

    #[test]
    fn singer_cycle_labels_lines_as_difference_sets() {
        for (d, q) in [(2usize, 2u64), (2, 3), (2, 4)] {
            let space = IncidenceSpace::projective(d, q).unwrap();
            let cyc = singer_cycle(&space).unwrap();
            let n = space.n();
            // point reached after i steps from point 0 gets label i
            let mut relabel = vec![0usize; n];
            let mut cur = 0;
            for i in 0..n {
                relabel[cur] = i;
                cur = cyc.apply(cur);
            }
            let lines = space.flat_family(1).unwrap();
            let line = &lines.members()[0];
            let labels = line.iter().map(|p| relabel[p]);
            let s = SubsetMask::from_zero_based(n, labels).unwrap();
            assert!(is_perfect_difference_set(&s));
        }
    }
}
