//! Dense subsets of `Z/NZ` on 64-bit blocks.
//!
//! Sumsets are unions of bit rotations, one rotation per element of the
//! smaller operand, so `A+B` costs `O(min(|A|,|B|) * N/64)` words.

use super::ZnError;
use crate::ratio::Ratio;
use num::BigInt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZnSet {
    n: u64,
    words: Vec<u64>,
}

#[inline]
fn word_count(n: u64) -> usize {
    ((n as usize) + WORD - 1) / WORD
}

impl ZnSet {
    pub fn empty(n: u64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        ZnSet {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub fn full(n: u64) -> Self {
        let mut s = ZnSet::empty(n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.mask_tail();
        s
    }

    pub fn singleton(n: u64, x: u64) -> Self {
        let mut s = ZnSet::empty(n);
        s.insert(x);
        s
    }

    pub fn from_elems<I: IntoIterator<Item = u64>>(n: u64, elems: I) -> Self {
        let mut s = ZnSet::empty(n);
        for x in elems {
            s.insert(x);
        }
        s
    }

    /// Build from integers, reducing mod N (negatives wrap).
    pub fn from_ints<I: IntoIterator<Item = i64>>(n: u64, elems: I) -> Self {
        let mut s = ZnSet::empty(n);
        for x in elems {
            s.insert(x.rem_euclid(n as i64) as u64);
        }
        s
    }

    #[inline]
    fn mask_tail(&mut self) {
        let used = (self.n as usize) % WORD;
        if used != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << used) - 1;
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn insert(&mut self, x: u64) {
        let x = x % self.n;
        self.words[(x as usize) / WORD] |= 1u64 << ((x as usize) % WORD);
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        let x = x % self.n;
        self.words[(x as usize) / WORD] & (1u64 << ((x as usize) % WORD)) != 0
    }

    #[inline]
    pub fn contains_int(&self, x: i64) -> bool {
        self.contains(x.rem_euclid(self.n as i64) as u64)
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as u64;
                    bits &= bits - 1;
                    Some(i as u64 * WORD as u64 + b)
                }
            })
        })
    }

    pub fn elems(&self) -> Vec<u64> {
        self.iter().collect()
    }

    fn check_same(&self, other: &ZnSet) -> Result<(), ZnError> {
        if self.n != other.n {
            Err(ZnError::ModulusMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn union(&self, other: &ZnSet) -> Result<ZnSet, ZnError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (o, w) in out.words.iter_mut().zip(&other.words) {
            *o |= w;
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &ZnSet) -> Result<ZnSet, ZnError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (o, w) in out.words.iter_mut().zip(&other.words) {
            *o &= w;
        }
        Ok(out)
    }

    pub fn is_subset(&self, other: &ZnSet) -> Result<bool, ZnError> {
        self.check_same(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    /// OR `other` rotated left by `s` residues into `self`.
    fn or_rotated(&mut self, other: &ZnSet, s: u64) {
        let n = self.n as usize;
        let s = (s % self.n) as usize;
        if s == 0 {
            for (o, w) in self.words.iter_mut().zip(&other.words) {
                *o |= w;
            }
            return;
        }
        or_shifted_left(&other.words, s, &mut self.words);
        or_shifted_right(&other.words, n - s, &mut self.words);
        self.mask_tail();
    }

    /// Translate: `A + a`.
    pub fn translate(&self, a: u64) -> ZnSet {
        let mut out = ZnSet::empty(self.n);
        out.or_rotated(self, a);
        out
    }

    /// `{a + b mod N : a in A, b in B}`.
    pub fn sumset(&self, other: &ZnSet) -> Result<ZnSet, ZnError> {
        self.check_same(other)?;
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = ZnSet::empty(self.n);
        for a in small.iter() {
            out.or_rotated(big, a);
        }
        Ok(out)
    }

    /// `{-a mod N : a in A}`.
    pub fn neg(&self) -> ZnSet {
        let mut out = ZnSet::empty(self.n);
        for a in self.iter() {
            out.insert((self.n - a) % self.n);
        }
        out
    }

    /// `A - B = A + (-B)`.
    pub fn diffset(&self, other: &ZnSet) -> Result<ZnSet, ZnError> {
        self.sumset(&other.neg())
    }

    /// `{c*a mod N}`.
    pub fn dilate(&self, c: i64) -> ZnSet {
        let n = self.n as i128;
        let c = (c as i128).rem_euclid(n) as u128;
        let mut out = ZnSet::empty(self.n);
        for a in self.iter() {
            out.insert(((a as u128 * c) % self.n as u128) as u64);
        }
        out
    }

    /// `kA = A + ... + A` (k summands); `0A = {0}`.
    pub fn iterated(&self, k: u32) -> Result<ZnSet, ZnError> {
        if k == 0 {
            return Ok(ZnSet::singleton(self.n, 0));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.sumset(self)?;
        }
        Ok(acc)
    }
}

fn or_shifted_left(src: &[u64], s: usize, dst: &mut [u64]) {
    let (ws, bs) = (s / WORD, s % WORD);
    if bs == 0 {
        for i in 0..src.len() {
            if i + ws < dst.len() {
                dst[i + ws] |= src[i];
            }
        }
    } else {
        for i in 0..src.len() {
            if i + ws < dst.len() {
                dst[i + ws] |= src[i] << bs;
            }
            if i + ws + 1 < dst.len() {
                dst[i + ws + 1] |= src[i] >> (WORD - bs);
            }
        }
    }
}

fn or_shifted_right(src: &[u64], s: usize, dst: &mut [u64]) {
    let (ws, bs) = (s / WORD, s % WORD);
    for j in 0..dst.len() {
        let lo = src.get(j + ws).copied().unwrap_or(0);
        let hi = src.get(j + ws + 1).copied().unwrap_or(0);
        let v = if bs == 0 {
            lo
        } else {
            (lo >> bs) | (hi << (WORD - bs))
        };
        dst[j] |= v;
    }
}

/// `|A+A| / |A|` as an exact rational.
pub fn doubling_constant(a: &ZnSet) -> Result<Ratio, ZnError> {
    if a.is_empty() {
        return Err(ZnError::EmptySet);
    }
    let aa = a.sumset(a)?;
    Ok(Ratio::new(BigInt::from(aa.len()), BigInt::from(a.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio_int;

    #[test]
    fn sumset_small() {
        // {0,1} + {0,2} in Z/8Z
        let a = ZnSet::from_elems(8, [0, 1]);
        let b = ZnSet::from_elems(8, [0, 2]);
        let s = a.sumset(&b).unwrap();
        assert_eq!(s.elems(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn zero_is_identity() {
        let z = ZnSet::singleton(11, 0);
        let b = ZnSet::from_elems(11, [1, 4, 9]);
        assert_eq!(z.sumset(&b).unwrap(), b);
    }

    #[test]
    fn diffset_covers_group() {
        // {0,1,3} - {0,1,3} = Z/7Z: all 9 pairwise differences.
        let a = ZnSet::from_elems(7, [0, 1, 3]);
        let d = a.diffset(&a).unwrap();
        assert_eq!(d.len(), 7);
    }

    #[test]
    fn full_group_doubling_is_one() {
        let g = ZnSet::full(5);
        assert_eq!(doubling_constant(&g).unwrap(), ratio_int(1));
    }

    #[test]
    fn doubling_rejects_empty() {
        let e = ZnSet::empty(5);
        assert!(matches!(doubling_constant(&e), Err(ZnError::EmptySet)));
    }

    #[test]
    fn modulus_mismatch_detected() {
        let a = ZnSet::full(5);
        let b = ZnSet::full(6);
        assert!(a.sumset(&b).is_err());
    }

    #[test]
    fn rotation_matches_naive_translation() {
        for n in [1u64, 7, 64, 65, 127, 130] {
            let a = ZnSet::from_elems(n, (0..n).filter(|x| x % 3 == 1));
            for s in [0, 1, 5, n - 1] {
                let fast = a.translate(s);
                let naive = ZnSet::from_elems(n, a.iter().map(|x| (x + s) % n));
                assert_eq!(fast, naive, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn dilate_preserves_size_when_coprime() {
        let a = ZnSet::from_elems(12, [0, 1, 5, 7]);
        assert_eq!(a.dilate(5).len(), a.len());
        assert_eq!(a.dilate(7).len(), a.len());
    }

    #[test]
    fn iterated_zero_is_origin() {
        let a = ZnSet::from_elems(9, [2, 5]);
        assert_eq!(a.iterated(0).unwrap(), ZnSet::singleton(9, 0));
        assert_eq!(a.iterated(1).unwrap(), a);
    }
}
