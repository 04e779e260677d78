//! Projective, affine and dual-affine spaces over `GF(q)`, their flats, and
//! collineation witnesses.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{prime_power, FiniteField};
use super::linalg::{self, Basis, Vector};
use crate::error::{Error, Result};
use crate::family::{SetFamily, SubsetMask, MAX_GROUND_SET};
use crate::symmetry::{verify_symmetric_witness, GroupWitness, Permutation};

/// Largest extension degree accepted for the coordinate field.
pub const MAX_FIELD_DEGREE: u32 = 8;

/// Cap on the number of flats materialized by one call.
pub const MAX_FLATS: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    /// `PG(d, q)`: points are 1-dimensional subspaces of `GF(q)^{d+1}`.
    Projective,
    /// `AG(d, q)`: points are vectors of `GF(q)^d`.
    Affine,
    /// `DA(d, q)`: points are the affine hyperplanes of `AG(d, q)`.
    DualAffine,
}

/// A flat of a space. For affine and dual-affine spaces the data describe an
/// affine flat `offset + span(basis)` of `AG(d, q)`; in the dual-affine case
/// the flat is the set of hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub dim: usize,
    pub basis: Basis,
    pub offset: Option<Vector>,
}

#[derive(Clone, Debug)]
pub struct IncidenceSpace {
    kind: SpaceKind,
    dim: usize,
    field: FiniteField,
    points: Vec<Vector>,
    index: HashMap<Vector, usize>,
}

/// The coordinate field for a geometry over `GF(q)`.
pub fn geometry_field(q: u64) -> Result<FiniteField> {
    let (_, m) = prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
    if m > MAX_FIELD_DEGREE {
        return Err(Error::invalid(format!(
            "q = {q} has extension degree {m} > {MAX_FIELD_DEGREE}"
        )));
    }
    FiniteField::of_order(q)
}

fn point_capacity(needed: u128) -> Result<()> {
    if needed > MAX_GROUND_SET as u128 {
        return Err(Error::Capacity {
            what: "number of points",
            needed,
            limit: MAX_GROUND_SET as u128,
        });
    }
    Ok(())
}

impl IncidenceSpace {
    pub fn new(kind: SpaceKind, dim: usize, q: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("space dimension must be positive"));
        }
        let field = geometry_field(q)?;
        let qq = q as u128;
        let needed = match kind {
            SpaceKind::Projective => (0..=dim as u32).map(|i| qq.saturating_pow(i)).sum(),
            SpaceKind::Affine => qq.saturating_pow(dim as u32),
            SpaceKind::DualAffine => {
                qq.saturating_mul((0..dim as u32).map(|i| qq.saturating_pow(i)).sum())
            }
        };
        point_capacity(needed)?;
        let qf = field.order();
        let mut points: Vec<Vector> = match kind {
            SpaceKind::Projective => linalg::projective_coefficients(qf, dim + 1).collect(),
            SpaceKind::Affine => linalg::all_vectors(qf, dim).collect(),
            SpaceKind::DualAffine => linalg::projective_coefficients(qf, dim)
                .flat_map(|a| {
                    (0..qf).map(move |b| {
                        let mut v = a.clone();
                        v.push(b);
                        v
                    })
                })
                .collect(),
        };
        points.sort_unstable();
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(IncidenceSpace {
            kind,
            dim,
            field,
            points,
            index,
        })
    }

    pub fn projective(dim: usize, q: u64) -> Result<Self> {
        Self::new(SpaceKind::Projective, dim, q)
    }

    pub fn affine(dim: usize, q: u64) -> Result<Self> {
        Self::new(SpaceKind::Affine, dim, q)
    }

    pub fn dual_affine(dim: usize, q: u64) -> Result<Self> {
        Self::new(SpaceKind::DualAffine, dim, q)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    /// Number of points; labels are `0..n` in lexicographic order of the
    /// coordinate vectors.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Coordinates of a point. Projective points have last nonzero coordinate
    /// 1; dual-affine points are `(a, b)` for the hyperplane `a.x = b` with
    /// `a` normalized the same way.
    pub fn point(&self, label: usize) -> &[u32] {
        &self.points[label]
    }

    pub fn label(&self, coords: &[u32]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Largest flat dimension.
    pub fn max_flat_dim(&self) -> usize {
        match self.kind {
            SpaceKind::Projective | SpaceKind::Affine => self.dim,
            SpaceKind::DualAffine => self.dim - 1,
        }
    }

    /// Number of `t`-flats.
    pub fn flat_count(&self, t: usize) -> BigUint {
        let (d, q) = (self.dim as u64, self.q());
        if t > self.max_flat_dim() {
            return BigUint::from(0u32);
        }
        let t = t as u64;
        match self.kind {
            SpaceKind::Projective => linalg::gaussian_binomial(d + 1, t + 1, q),
            SpaceKind::Affine => {
                linalg::gaussian_binomial(d, t, q) * BigUint::from(q).pow((d - t) as u32)
            }
            SpaceKind::DualAffine => {
                let a = d - 1 - t;
                linalg::gaussian_binomial(d, a, q) * BigUint::from(q).pow((d - a) as u32)
            }
        }
    }

    /// Every `t`-flat, in enumeration order.
    pub fn flats(&self, t: usize) -> Result<Vec<Flat>> {
        if t > self.max_flat_dim() {
            return Err(Error::invalid(format!(
                "{t}-flats do not exist in a space of dimension {}",
                self.dim
            )));
        }
        let count = self.flat_count(t).to_u128().unwrap_or(u128::MAX);
        if count > MAX_FLATS {
            return Err(Error::Capacity {
                what: "number of flats",
                needed: count,
                limit: MAX_FLATS,
            });
        }
        let f = &self.field;
        let out = match self.kind {
            SpaceKind::Projective => linalg::subspaces(f, self.dim + 1, t + 1)
                .into_iter()
                .map(|basis| Flat {
                    dim: t,
                    basis,
                    offset: None,
                })
                .collect(),
            SpaceKind::Affine => self.affine_flats(t, t),
            SpaceKind::DualAffine => self.affine_flats(self.dim - 1 - t, t),
        };
        Ok(out)
    }

    fn affine_flats(&self, linear_dim: usize, label_dim: usize) -> Vec<Flat> {
        let d = self.dim;
        let q = self.field.order();
        let mut out = Vec::new();
        for basis in linalg::subspaces(&self.field, d, linear_dim) {
            let piv = linalg::pivots(&basis);
            let free: Vec<usize> = (0..d).filter(|c| !piv.contains(c)).collect();
            for vals in linalg::all_vectors(q, free.len()) {
                let mut x0 = vec![0; d];
                for (&c, &v) in free.iter().zip(&vals) {
                    x0[c] = v;
                }
                out.push(Flat {
                    dim: label_dim,
                    basis: basis.clone(),
                    offset: Some(x0),
                });
            }
        }
        out
    }

    /// The point labels incident with a flat.
    pub fn flat_points(&self, flat: &Flat) -> Result<SubsetMask> {
        let f = &self.field;
        let q = f.order();
        let mut s = SubsetMask::empty(self.n())?;
        let lookup = |v: &[u32]| -> Result<usize> {
            self.label(v)
                .ok_or_else(|| Error::Construction(format!("vector {v:?} is not a point")))
        };
        match self.kind {
            SpaceKind::Projective => {
                for c in linalg::projective_coefficients(q, flat.basis.len()) {
                    let v = linalg::combine(f, &c, &flat.basis, self.dim + 1);
                    let v = linalg::normalize(f, &v)
                        .ok_or_else(|| Error::Construction("dependent flat basis".into()))?;
                    s.insert(lookup(&v)?);
                }
            }
            SpaceKind::Affine => {
                let x0 = flat.offset.as_deref().unwrap_or(&[]);
                for c in linalg::all_vectors(q, flat.basis.len()) {
                    let v = linalg::combine(f, &c, &flat.basis, self.dim);
                    let v = if x0.is_empty() { v } else { linalg::add_vec(f, &v, x0) };
                    s.insert(lookup(&v)?);
                }
            }
            SpaceKind::DualAffine => {
                let zero = vec![0; self.dim];
                let x0 = flat.offset.as_deref().unwrap_or(&zero);
                let perp = linalg::orthogonal_complement(f, &flat.basis, self.dim);
                for c in linalg::projective_coefficients(q, perp.len()) {
                    let a = linalg::combine(f, &c, &perp, self.dim);
                    let mut a = linalg::normalize(f, &a)
                        .ok_or_else(|| Error::Construction("dependent normal basis".into()))?;
                    let b = linalg::dot(f, &a, x0);
                    a.push(b);
                    s.insert(lookup(&a)?);
                }
            }
        }
        Ok(s)
    }

    /// The family of point sets of all `t`-flats.
    pub fn flat_family(&self, t: usize) -> Result<SetFamily> {
        let flats = self.flats(t)?;
        let members = flats
            .par_iter()
            .map(|fl| self.flat_points(fl))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(self.n(), members)
    }

    /// The flat dimension whose family the default witness is checked
    /// against.
    pub fn natural_flat_dim(&self) -> usize {
        (self.dim / 2).min(self.max_flat_dim())
    }

    fn apply_map(&self, map: &AffineMap, label: usize) -> Result<usize> {
        let f = &self.field;
        let p = &self.points[label];
        let image = match self.kind {
            SpaceKind::Projective => linalg::normalize(f, &linalg::mat_vec(f, &map.m, p))
                .ok_or_else(|| Error::Construction("singular generator".into()))?,
            SpaceKind::Affine => linalg::add_vec(f, &linalg::mat_vec(f, &map.m, p), &map.c),
            SpaceKind::DualAffine => {
                let d = self.dim;
                let a = linalg::mat_vec(f, &map.inv_t, &p[..d]);
                let b = f.add(p[d], linalg::dot(f, &a, &map.c));
                let last = *a
                    .iter()
                    .rev()
                    .find(|&&x| x != 0)
                    .ok_or_else(|| Error::Construction("singular generator".into()))?;
                let s = f.inv(last).expect("nonzero");
                let mut v = linalg::scale(f, s, &a);
                v.push(f.mul(s, b));
                v
            }
        };
        self.label(&image)
            .ok_or_else(|| Error::Construction(format!("image {image:?} is not a point")))
    }
}

/// `x -> m x + c`, with `inv_t = (m^{-1})^T` for the action on hyperplanes.
struct AffineMap {
    m: Vec<Vector>,
    inv_t: Vec<Vector>,
    c: Vector,
}

fn generator_maps(space: &IncidenceSpace) -> Result<Vec<AffineMap>> {
    let f = &space.field;
    let dim = match space.kind {
        SpaceKind::Projective => space.dim + 1,
        _ => space.dim,
    };
    // omega^t for t < m span GF(q) over the prime field
    let scalars: Vec<u32> = (0..f.degree() as u64).map(|t| f.exp(t)).collect();
    let mut mats = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            for &s in &scalars {
                let mut m = linalg::identity(dim);
                m[i][j] = s;
                mats.push(m);
            }
        }
    }
    if f.order() > 2 {
        let mut m = linalg::identity(dim);
        m[0][0] = f.primitive();
        mats.push(m);
    }
    let zero = vec![0; space.dim];
    let mut maps = Vec::new();
    for m in mats {
        let inv = linalg::invert(f, &m)
            .ok_or_else(|| Error::Construction("singular generator".into()))?;
        maps.push(AffineMap {
            inv_t: linalg::transpose(&inv),
            m,
            c: zero.clone(),
        });
    }
    if space.kind != SpaceKind::Projective {
        for i in 0..space.dim {
            for &s in &scalars {
                let mut c = zero.clone();
                c[i] = s;
                maps.push(AffineMap {
                    m: linalg::identity(dim),
                    inv_t: linalg::identity(dim),
                    c,
                });
            }
        }
    }
    Ok(maps)
}

/// Generators of the collineation group acting on point labels:
/// elementary transvections and a diagonal scaling (plus translations in the
/// affine cases). Transitivity and preservation of the flats of
/// [`IncidenceSpace::natural_flat_dim`] are checked before returning.
pub fn geometry_symmetry_witness(space: &IncidenceSpace) -> Result<GroupWitness> {
    let family = space.flat_family(space.natural_flat_dim())?;
    geometry_symmetry_witness_for(space, &family)
}

/// As [`geometry_symmetry_witness`], checked against a caller-supplied
/// family over the same point labels.
pub fn geometry_symmetry_witness_for(
    space: &IncidenceSpace,
    family: &SetFamily,
) -> Result<GroupWitness> {
    if family.n() != space.n() {
        return Err(Error::invalid("family and space have different ground sets"));
    }
    let gens = generator_maps(space)?
        .par_iter()
        .map(|map| {
            let images = (0..space.n())
                .map(|i| space.apply_map(map, i).map(|j| j as u32))
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_zero_based(images)
        })
        .collect::<Result<Vec<_>>>()?;
    let w = GroupWitness::new(space.n(), gens)?;
    if !verify_symmetric_witness(family, &w)? {
        return Err(Error::Construction(
            "collineation generators fail to preserve the flats or act transitively".into(),
        ));
    }
    Ok(w)
}

fn check_rank(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    Ok(())
}

/// The `r`-flats of `PG(2r, q)`.
pub fn pg_flat_family(r: usize, q: u64) -> Result<SetFamily> {
    check_rank(r)?;
    IncidenceSpace::projective(2 * r, q)?.flat_family(r)
}

/// `pg_flat_family` together with a verified collineation witness.
pub fn pg_flat_family_with_witness(r: usize, q: u64) -> Result<(SetFamily, GroupWitness)> {
    check_rank(r)?;
    let space = IncidenceSpace::projective(2 * r, q)?;
    let fam = space.flat_family(r)?;
    let w = geometry_symmetry_witness_for(&space, &fam)?;
    Ok((fam, w))
}

/// The `r`-flats of `DA(2r, q)`: for each `(r-1)`-flat of `AG(2r, q)`, the
/// hyperplanes through it.
pub fn dual_affine_family(r: usize, q: u64) -> Result<SetFamily> {
    check_rank(r)?;
    IncidenceSpace::dual_affine(2 * r, q)?.flat_family(r)
}

pub fn dual_affine_family_with_witness(r: usize, q: u64) -> Result<(SetFamily, GroupWitness)> {
    check_rank(r)?;
    let space = IncidenceSpace::dual_affine(2 * r, q)?;
    let fam = space.flat_family(r)?;
    let w = geometry_symmetry_witness_for(&space, &fam)?;
    Ok((fam, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_binom(n: u64, q: u64) -> u64 {
        (q.pow(n as u32) - 1) / (q - 1)
    }

    #[test]
    fn point_counts() {
        assert_eq!(IncidenceSpace::projective(2, 2).unwrap().n(), 7);
        assert_eq!(IncidenceSpace::projective(4, 2).unwrap().n(), 31);
        assert_eq!(IncidenceSpace::affine(2, 3).unwrap().n(), 9);
        assert_eq!(IncidenceSpace::dual_affine(2, 3).unwrap().n(), 12);
        assert_eq!(IncidenceSpace::dual_affine(4, 2).unwrap().n(), 30);
    }

    #[test]
    fn fano_plane_from_flats() {
        let f = pg_flat_family(1, 2).unwrap();
        assert_eq!((f.n(), f.k(), f.len()), (7, Some(3), 7));
        assert!(f.is_intersecting());
        // every pair of points lies on exactly one line
        for a in 0..7 {
            for b in a + 1..7 {
                let c = f.iter().filter(|s| s.contains(a) && s.contains(b)).count();
                assert_eq!(c, 1);
            }
        }
    }

    #[test]
    fn pg_family_parameters() {
        for (r, q) in [(1u64, 2u64), (1, 3), (1, 4), (2, 2), (1, 5)] {
            let (f, w) = pg_flat_family_with_witness(r as usize, q).unwrap();
            let n = q_binom(2 * r + 1, q);
            assert_eq!(f.n() as u64, n);
            assert_eq!(f.k(), Some(q_binom(r + 1, q) as usize));
            assert_eq!(
                BigUint::from(f.len()),
                linalg::gaussian_binomial(2 * r + 1, r + 1, q)
            );
            assert!(f.is_intersecting());
            assert!(verify_symmetric_witness(&f, &w).unwrap());
        }
    }

    #[test]
    fn dual_affine_parameters() {
        for (r, q) in [(1u64, 2u64), (1, 3), (1, 4), (2, 2)] {
            let (f, w) = dual_affine_family_with_witness(r as usize, q).unwrap();
            assert_eq!(f.n() as u64, q * q_binom(2 * r, q));
            assert_eq!(f.k(), Some(q_binom(r + 1, q) as usize));
            assert!(f.is_intersecting());
            assert!(verify_symmetric_witness(&f, &w).unwrap());
        }
    }

    #[test]
    fn affine_lines() {
        let s = IncidenceSpace::affine(2, 3).unwrap();
        let lines = s.flat_family(1).unwrap();
        assert_eq!(lines.len(), 12);
        assert_eq!(lines.k(), Some(3));
        assert!(!lines.is_intersecting());
        geometry_symmetry_witness(&s).unwrap();
    }

    #[test]
    fn rejects_bad_q() {
        assert!(pg_flat_family(1, 6).is_err());
        assert!(pg_flat_family(0, 2).is_err());
        assert!(geometry_field(512).is_err());
    }
}
