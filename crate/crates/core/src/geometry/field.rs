//! Finite fields `GF(p^m)` with log/antilog tables.
//!
//! Elements are encoded as integers `Σ c_i p^i` where `c_0 + c_1 x + ...` is
//! the polynomial residue modulo the defining polynomial; `0` and `1` are the
//! additive and multiplicative identities.

use crate::error::{Error, Result};

/// Largest field order supported.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    /// low coefficients `c_0..c_{m-1}` of the monic modulus `x^m + Σ c_i x^i`
    modulus: Vec<u32>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, m))` when `q = p^m` for a prime `p` and `m >= 1`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomial over `GF(p)`, lowest coefficient first.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    // den is monic
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd && !r.is_empty() {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Monic polynomial of degree `deg` with low coefficients given by `code`.
fn monic(code: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut v = digits(code, p, deg);
    v.push(1);
    v
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = (f.len() - 1) as u32;
    for d in 1..=m / 2 {
        for code in 0..p.pow(d) {
            let g = monic(code, p, d);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// `GF(q)` for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q)
            .ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        Self::new(p, m)
    }

    /// `GF(p^m)` defined by the least monic irreducible polynomial of degree
    /// `m` (low coefficients read as a base-`p` integer).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p as u64) || m == 0 {
            return Err(Error::invalid(format!("GF({p}^{m}) is not a field order")));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_FIELD_ORDER as u64).ok_or(
            Error::Capacity {
                what: "field order",
                needed: (p as u128).saturating_pow(m),
                limit: MAX_FIELD_ORDER as u128,
            },
        )? as u32;
        let modulus_full = (0..p.pow(m))
            .map(|code| monic(code, p, m))
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists in every degree");
        let modulus = modulus_full[..m as usize].to_vec();
        let mut field = FiniteField {
            p,
            m,
            q,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let primitive = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| field.slow_pow(g, order / r) != 1 || order == 1)
                    && field.slow_pow(g, order) == 1
            })
            .ok_or_else(|| Error::Construction("no primitive element found".into()))?;
        field.primitive = primitive;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1;
        for i in 0..order as u32 {
            if log[x as usize] != u32::MAX {
                return Err(Error::Construction(format!(
                    "element {primitive} repeats before order {order}"
                )));
            }
            exp.push(x);
            log[x as usize] = i;
            x = field.slow_mul(x, primitive);
        }
        field.exp = exp;
        field.log = log;
        Ok(field)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (p, m) = (self.p, self.m as usize);
        let da = digits(a, p, self.m);
        let db = digits(b, p, self.m);
        let mut prod = vec![0u32; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let mut f = self.modulus.clone();
        f.push(1);
        let mut r = poly_rem(&prod, &f, p);
        r.resize(m, 0);
        undigits(&r, p)
    }

    fn slow_pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, a);
            }
            a = self.slow_mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients `c_0..c_{m-1}, 1` of the defining polynomial.
    pub fn modulus(&self) -> Vec<u32> {
        let mut f = self.modulus.clone();
        f.push(1);
        f
    }

    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 * (e % (self.q as u64 - 1));
        self.exp[(l % (self.q as u64 - 1)) as usize]
    }

    /// Discrete logarithm base the primitive element.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// `primitive^e`.
    pub fn exp(&self, e: u64) -> u32 {
        self.exp[(e % (self.q as u64 - 1)) as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u32) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = self.q as u64 - 1;
        Some(if l == 0 { 1 } else { n / num_integer::gcd(n, l) })
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_parsing() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn small_fields_have_expected_moduli() {
        // x^2 + x + 1 is the only irreducible quadratic over GF(2)
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), vec![1, 1, 1]);
        // x^2 + 1 is the least irreducible quadratic over GF(3)
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), vec![1, 0, 1]);
        // x^3 + x + 1 over GF(2)
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), vec![1, 1, 0, 1]);
        // GF(p) is defined by x, with the least primitive root as generator
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f7.modulus(), vec![0, 1]);
        assert_eq!(f7.primitive(), 3);
    }

    #[test]
    fn primitive_element_has_full_order() {
        for (p, m) in [(2, 1), (2, 4), (3, 3), (5, 2), (7, 2), (2, 8)] {
            let f = FiniteField::new(p, m).unwrap();
            assert_eq!(
                f.multiplicative_order(f.primitive()),
                Some(f.order() as u64 - 1),
                "GF({p}^{m})"
            );
        }
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(FiniteField::of_order(6).is_err());
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(2, 17).is_err());
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = FiniteField::new(3, 2).unwrap();
        for a in 0..3 {
            assert_eq!(f.pow(a, 3), a);
        }
        // every element satisfies a^q = a
        for a in f.elements() {
            assert_eq!(f.pow(a, 9), a);
        }
    }
}
