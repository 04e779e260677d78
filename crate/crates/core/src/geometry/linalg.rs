//! Vectors, matrices and subspace enumeration over a finite field.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::field::FiniteField;
use crate::combinatorics::combinations;

pub type Vector = Vec<u32>;

/// Rows of a matrix in reduced row echelon form.
pub type Basis = Vec<Vector>;

/// Gaussian binomial `[a choose b]_q`, the number of `b`-dimensional
/// subspaces of `GF(q)^a`.
pub fn gaussian_binomial(a: u64, b: u64, q: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::one();
    for i in 0..b {
        let num = q.pow((a - i) as u32) - 1u32;
        let den = q.pow((i + 1) as u32) - 1u32;
        acc = acc * num / den;
    }
    acc
}

pub fn dot(f: &FiniteField, a: &[u32], b: &[u32]) -> u32 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn scale(f: &FiniteField, c: u32, v: &[u32]) -> Vector {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn add_vec(f: &FiniteField, a: &[u32], b: &[u32]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// `Σ coeffs[i] * rows[i]` in `GF(q)^dim`.
pub fn combine(f: &FiniteField, coeffs: &[u32], rows: &[Vector], dim: usize) -> Vector {
    let mut v = vec![0; dim];
    for (c, r) in coeffs.iter().zip(rows) {
        if *c == 0 {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(r) {
            *x = f.add(*x, f.mul(*c, y));
        }
    }
    v
}

/// Scales a nonzero vector so that its last nonzero coordinate is 1.
pub fn normalize(f: &FiniteField, v: &[u32]) -> Option<Vector> {
    let last = *v.iter().rev().find(|&&x| x != 0)?;
    let inv = f.inv(last)?;
    Some(scale(f, inv, v))
}

/// Matrix-vector product with `m` given by rows.
pub fn mat_vec(f: &FiniteField, m: &[Vector], v: &[u32]) -> Vector {
    m.iter().map(|row| dot(f, row, v)).collect()
}

pub fn transpose(m: &[Vector]) -> Vec<Vector> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn identity(dim: usize) -> Vec<Vector> {
    (0..dim)
        .map(|i| (0..dim).map(|j| u32::from(i == j)).collect())
        .collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert(f: &FiniteField, m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    let mut a: Vec<Vector> = m
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().copied().chain(e).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = f.inv(a[col][col])?;
        a[col] = scale(f, inv, &a[col]);
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let c = f.neg(a[r][col]);
                let pivot_row = a[col].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Pivot column of each row of an RREF basis.
pub fn pivots(basis: &[Vector]) -> Vec<usize> {
    basis
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("zero row in basis"))
        .collect()
}

/// Basis of `{x : <x, w> = 0 for every row w}`.
pub fn orthogonal_complement(f: &FiniteField, basis: &[Vector], dim: usize) -> Vec<Vector> {
    let piv = pivots(basis);
    (0..dim)
        .filter(|c| !piv.contains(c))
        .map(|free| {
            let mut v = vec![0; dim];
            v[free] = 1;
            for (row, &p) in basis.iter().zip(&piv) {
                v[p] = f.neg(row[free]);
            }
            v
        })
        .collect()
}

/// Iterates all coefficient vectors in `GF(q)^len` in mixed-radix order.
pub fn all_vectors(q: u32, len: usize) -> impl Iterator<Item = Vector> {
    let total = (q as u64).pow(len as u32);
    (0..total).map(move |mut code| {
        (0..len)
            .map(|_| {
                let d = (code % q as u64) as u32;
                code /= q as u64;
                d
            })
            .collect()
    })
}

/// Coefficient vectors of length `len` whose last nonzero entry is 1: one
/// per projective point of the span.
pub fn projective_coefficients(q: u32, len: usize) -> impl Iterator<Item = Vector> {
    (0..len).flat_map(move |last| {
        all_vectors(q, last).map(move |mut v| {
            v.push(1);
            v.resize(len, 0);
            v
        })
    })
}

/// Every `t`-dimensional subspace of `GF(q)^dim`, as RREF bases.
pub fn subspaces(f: &FiniteField, dim: usize, t: usize) -> Vec<Basis> {
    let q = f.order();
    let mut out = Vec::new();
    if t > dim {
        return out;
    }
    for piv in combinations(dim, t) {
        // free slots: (row, col) with col > pivot of row and col not a pivot
        let slots: Vec<(usize, usize)> = (0..t)
            .flat_map(|r| {
                let piv = &piv;
                (piv[r] + 1..dim)
                    .filter(move |c| !piv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        for fill in all_vectors(q, slots.len()) {
            let mut rows = vec![vec![0u32; dim]; t];
            for (r, &p) in piv.iter().enumerate() {
                rows[r][p] = 1;
            }
            for (&(r, c), &x) in slots.iter().zip(&fill) {
                rows[r][c] = x;
            }
            out.push(rows);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 1, 2), BigUint::from(7u32));
        assert_eq!(gaussian_binomial(5, 2, 2), BigUint::from(155u32));
        assert_eq!(gaussian_binomial(4, 2, 3), BigUint::from(130u32));
        assert_eq!(gaussian_binomial(4, 0, 3), BigUint::from(1u32));
        assert_eq!(gaussian_binomial(2, 3, 3), BigUint::zero());
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for q in [2u64, 3, 4] {
            let f = FiniteField::of_order(q).unwrap();
            for dim in 1..=4usize {
                for t in 0..=dim {
                    if q == 4 && dim == 4 {
                        continue;
                    }
                    let got = subspaces(&f, dim, t).len();
                    assert_eq!(
                        BigUint::from(got),
                        gaussian_binomial(dim as u64, t as u64, q),
                        "q={q} dim={dim} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn complement_is_orthogonal() {
        let f = FiniteField::of_order(3).unwrap();
        for b in subspaces(&f, 4, 2) {
            let perp = orthogonal_complement(&f, &b, 4);
            assert_eq!(perp.len(), 2);
            for u in &b {
                for w in &perp {
                    assert_eq!(dot(&f, u, w), 0);
                }
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = FiniteField::of_order(5).unwrap();
        let m = vec![vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 2]];
        let inv = invert(&f, &m).unwrap();
        for (i, row) in m.iter().enumerate() {
            for j in 0..3 {
                let col: Vec<u32> = inv.iter().map(|r| r[j]).collect();
                assert_eq!(dot(&f, row, &col), u32::from(i == j));
            }
        }
        assert!(invert(&f, &[vec![1, 2], vec![2, 4]]).is_none());
    }

    #[test]
    fn projective_coefficient_count() {
        assert_eq!(projective_coefficients(3, 3).count(), 13);
        assert_eq!(projective_coefficients(2, 1).count(), 1);
    }
}
