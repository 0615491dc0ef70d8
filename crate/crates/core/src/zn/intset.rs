//! Finite subsets of `Z`, interval-normalized for window-bitset sumsets.

use super::ZnError;
use crate::ratio::Ratio;
use num::BigInt;

/// Widest window (in bits) a single sumset result may occupy.
const WINDOW_CAP: i64 = 1 << 27;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntSet {
    elems: Vec<i64>, // sorted, deduplicated
}

impl IntSet {
    pub fn new<I: IntoIterator<Item = i64>>(elems: I) -> Self {
        let mut v: Vec<i64> = elems.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IntSet { elems: v }
    }

    pub fn empty() -> Self {
        IntSet { elems: Vec::new() }
    }

    pub fn singleton(x: i64) -> Self {
        IntSet { elems: vec![x] }
    }

    pub fn interval(lo: i64, hi: i64) -> Self {
        IntSet {
            elems: (lo..=hi).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.elems
    }

    pub fn min(&self) -> Option<i64> {
        self.elems.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.elems.last().copied()
    }

    pub fn diameter(&self) -> i64 {
        match (self.min(), self.max()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn translate(&self, t: i64) -> IntSet {
        IntSet {
            elems: self.elems.iter().map(|x| x + t).collect(),
        }
    }

    pub fn neg(&self) -> IntSet {
        let mut v: Vec<i64> = self.elems.iter().map(|x| -x).collect();
        v.reverse();
        IntSet { elems: v }
    }

    pub fn dilate(&self, c: i64) -> IntSet {
        IntSet::new(self.elems.iter().map(|x| x * c))
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        IntSet::new(self.iter().chain(other.iter()))
    }

    /// `{a + b : a in A, b in B}` via a window bitset over the hull.
    pub fn sumset(&self, other: &IntSet) -> Result<IntSet, ZnError> {
        if self.is_empty() || other.is_empty() {
            return Ok(IntSet::empty());
        }
        let lo = self.min().unwrap() + other.min().unwrap();
        let hi = self.max().unwrap() + other.max().unwrap();
        let width = hi - lo + 1;
        if width > WINDOW_CAP {
            return Err(ZnError::DeskCapExceeded(format!(
                "sumset window of {width} bits exceeds cap {WINDOW_CAP}"
            )));
        }
        let nwords = (width as usize + 63) / 64;
        let b_lo = other.min().unwrap();
        let b_width = (other.max().unwrap() - b_lo + 1) as usize;
        let mut b_bits = vec![0u64; (b_width + 63) / 64];
        for b in other.iter() {
            let i = (b - b_lo) as usize;
            b_bits[i / 64] |= 1 << (i % 64);
        }
        let mut out = vec![0u64; nwords];
        for a in self.iter() {
            let shift = (a - self.min().unwrap()) as usize;
            let (ws, bs) = (shift / 64, shift % 64);
            for i in 0..b_bits.len() {
                if i + ws < out.len() {
                    out[i + ws] |= if bs == 0 { b_bits[i] } else { b_bits[i] << bs };
                }
                if bs != 0 && i + ws + 1 < out.len() {
                    out[i + ws + 1] |= b_bits[i] >> (64 - bs);
                }
            }
        }
        let mut elems = Vec::new();
        for (i, &w) in out.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as i64;
                bits &= bits - 1;
                let v = lo + i as i64 * 64 + b;
                if v <= hi {
                    elems.push(v);
                }
            }
        }
        Ok(IntSet { elems })
    }

    pub fn diffset(&self, other: &IntSet) -> Result<IntSet, ZnError> {
        self.sumset(&other.neg())
    }

    /// `kA`; `0A = {0}`.
    pub fn iterated(&self, k: u32) -> Result<IntSet, ZnError> {
        if k == 0 {
            return Ok(IntSet::singleton(0));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.sumset(self)?;
        }
        Ok(acc)
    }
}

/// `|A+A| / |A|` as an exact rational.
pub fn doubling_constant(a: &IntSet) -> Result<Ratio, ZnError> {
    if a.is_empty() {
        return Err(ZnError::EmptySet);
    }
    let aa = a.sumset(a)?;
    Ok(Ratio::new(BigInt::from(aa.len()), BigInt::from(a.len())))
}
