use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest ground set a mask may describe.
pub const MAX_GROUND_SET: usize = 1 << 16;

/// Two inline words cover every ground set up to 128 points without allocating.
type Words = SmallVec<[u64; 2]>;

/// A subset of a ground set of size `n`, stored as a membership bit vector.
///
/// Bit `i` stands for element `i` of `Z_n` (0-based) and for element `i + 1`
/// of `[n]` (1-based). Conversions between the two conventions happen only in
/// the `*_one_based` constructors and accessors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    n: usize,
    words: Words,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl SubsetMask {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("ground set must be nonempty"));
        }
        if n > MAX_GROUND_SET {
            return Err(Error::Capacity {
                what: "subset mask",
                needed: n as u128,
                limit: MAX_GROUND_SET as u128,
            });
        }
        Ok(SubsetMask {
            n,
            words: smallvec::smallvec![0; word_count(n)],
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut m = Self::empty(n)?;
        for w in m.words.iter_mut() {
            *w = u64::MAX;
        }
        m.clear_tail();
        Ok(m)
    }

    /// Builds a mask from 0-based elements of `Z_n`.
    pub fn from_zero_based<I: IntoIterator<Item = usize>>(n: usize, elems: I) -> Result<Self> {
        let mut m = Self::empty(n)?;
        for e in elems {
            if e >= n {
                return Err(Error::invalid(format!("element {e} outside Z_{n}")));
            }
            m.insert(e);
        }
        Ok(m)
    }

    /// Builds a mask from 1-based elements of `[n]`.
    pub fn from_one_based<I: IntoIterator<Item = usize>>(n: usize, elems: I) -> Result<Self> {
        let mut m = Self::empty(n)?;
        for e in elems {
            if e == 0 || e > n {
                return Err(Error::invalid(format!("element {e} outside [1, {n}]")));
            }
            m.insert(e - 1);
        }
        Ok(m)
    }

    /// Mask whose low `n` bits are `bits`. Requires `n <= 64`.
    pub fn from_u64(n: usize, bits: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::invalid("from_u64 needs n <= 64"));
        }
        if n < 64 && bits >> n != 0 {
            return Err(Error::invalid(format!("bits beyond position {n}")));
        }
        let mut m = Self::empty(n)?;
        m.words[0] = bits;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Low word, i.e. the whole mask when `n <= 64`.
    pub fn as_u64(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.words[0])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.n && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
        out
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.clear_tail();
        out
    }

    /// 0-based elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    pub fn to_zero_based(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Cyclic translate `S + shift` in `Z_n`.
    pub fn rotate(&self, shift: usize) -> Self {
        let shift = shift % self.n;
        if let Some(bits) = self.as_u64() {
            return SubsetMask::from_u64(self.n, rotate_u64(bits, self.n, shift))
                .expect("rotation stays in range");
        }
        let mut out = SubsetMask::empty(self.n).expect("same n");
        for i in self.iter() {
            out.insert((i + shift) % self.n);
        }
        out
    }

    fn clear_tail(&mut self) {
        let r = self.n % 64;
        if r != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << r) - 1;
        }
    }
}

/// Rotates the low `n` bits of `bits` up by `shift` positions (cyclically).
#[inline]
pub fn rotate_u64(bits: u64, n: usize, shift: usize) -> u64 {
    debug_assert!(n <= 64 && shift < n);
    if shift == 0 {
        return bits;
    }
    let full = low_bits(n);
    ((bits << shift) | (bits >> (n - shift))) & full
}

#[inline]
pub fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Ord for SubsetMask {
    /// Compares the masks as unsigned integers; ground-set size breaks ties.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask(n={}, {:?})", self.n, self.to_one_based())
    }
}
