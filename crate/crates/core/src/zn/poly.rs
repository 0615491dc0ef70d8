//! `Z[a]` for a formal transcendental `a`: integer-coefficient
//! polynomials with exact coefficientwise equality, and finite sets of
//! them. Models real sets `A + a.A` without any floating point.

use super::ZnError;
use std::collections::BTreeSet;
use std::fmt;

/// Element of `Z[a]`: coefficients `(c_0, ..., c_m)`, no trailing zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Hash)]
pub struct PolyInt {
    coeffs: Vec<i64>,
}

impl PolyInt {
    pub fn zero() -> Self {
        PolyInt { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        PolyInt::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyInt { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficient of `a^j` (0 beyond the degree).
    pub fn coeff(&self, j: usize) -> i64 {
        self.coeffs.get(j).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, other: &PolyInt) -> PolyInt {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|j| self.coeff(j) + other.coeff(j))
            .collect();
        PolyInt::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> PolyInt {
        PolyInt {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &PolyInt) -> PolyInt {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> PolyInt {
        if k == 0 {
            return PolyInt::zero();
        }
        PolyInt {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiply by `a`: shift coefficients up one slot.
    pub fn mul_alpha(&self) -> PolyInt {
        if self.is_zero() {
            return PolyInt::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0);
        coeffs.extend_from_slice(&self.coeffs);
        PolyInt { coeffs }
    }
}

impl fmt::Display for PolyInt {
    /// Compact form used by the set text format: `1+2a^1`, `-a^2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if self.coeff(0) != 0 {
            write!(f, "{}", self.coeff(0))?;
            first = false;
        }
        for j in 1..self.coeffs.len() {
            let c = self.coeff(j);
            if c == 0 {
                continue;
            }
            if !first && c > 0 {
                write!(f, "+")?;
            }
            match c {
                1 => write!(f, "a^{j}")?,
                -1 => write!(f, "-a^{j}")?,
                _ => write!(f, "{c}a^{j}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Finite subset of `Z[a]`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PolySet {
    elems: BTreeSet<PolyInt>,
}

impl PolySet {
    pub fn new<I: IntoIterator<Item = PolyInt>>(elems: I) -> Self {
        PolySet {
            elems: elems.into_iter().collect(),
        }
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(ints: I) -> Self {
        PolySet::new(ints.into_iter().map(PolyInt::constant))
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, p: &PolyInt) -> bool {
        self.elems.contains(p)
    }

    pub fn insert(&mut self, p: PolyInt) {
        self.elems.insert(p);
    }

    pub fn iter(&self) -> impl Iterator<Item = &PolyInt> + '_ {
        self.elems.iter()
    }

    pub fn first(&self) -> Option<&PolyInt> {
        self.elems.iter().next()
    }

    pub fn union(&self, other: &PolySet) -> PolySet {
        PolySet {
            elems: self.elems.union(&other.elems).cloned().collect(),
        }
    }

    pub fn sumset(&self, other: &PolySet) -> Result<PolySet, ZnError> {
        let cap: usize = 1 << 24;
        if self.len().saturating_mul(other.len()) > cap {
            return Err(ZnError::DeskCapExceeded(format!(
                "poly sumset of {}x{} elements exceeds cap",
                self.len(),
                other.len()
            )));
        }
        let mut elems = BTreeSet::new();
        for a in &self.elems {
            for b in &other.elems {
                elems.insert(a.add(b));
            }
        }
        Ok(PolySet { elems })
    }

    pub fn neg(&self) -> PolySet {
        PolySet {
            elems: self.elems.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn diffset(&self, other: &PolySet) -> Result<PolySet, ZnError> {
        self.sumset(&other.neg())
    }

    /// `a.X`: multiply every element by the transcendental.
    pub fn mul_alpha(&self) -> PolySet {
        PolySet {
            elems: self.elems.iter().map(|p| p.mul_alpha()).collect(),
        }
    }

    pub fn translate(&self, t: &PolyInt) -> PolySet {
        PolySet {
            elems: self.elems.iter().map(|p| p.add(t)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_algebra() {
        // (1+a) + a*(1+a) = 1 + 2a + a^2
        let p = PolyInt::from_coeffs(vec![1, 1]);
        let q = p.add(&p.mul_alpha());
        assert_eq!(q.coeffs(), &[1, 2, 1]);
    }

    #[test]
    fn alpha_annihilates_zero() {
        assert!(PolyInt::zero().mul_alpha().is_zero());
    }

    #[test]
    fn coefficient_distinctness() {
        // A = {0,1}: A + a.A = {0, 1, a, 1+a}, size |A|^2.
        let a = PolySet::from_ints([0, 1]);
        let s = a.sumset(&a.mul_alpha()).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn display_round_trip_examples() {
        assert_eq!(PolyInt::from_coeffs(vec![1, 2]).to_string(), "1+2a^1");
        assert_eq!(PolyInt::from_coeffs(vec![0, -1]).to_string(), "-a^1");
        assert_eq!(PolyInt::zero().to_string(), "0");
        assert_eq!(PolyInt::from_coeffs(vec![-2, 0, 3]).to_string(), "-2+3a^2");
    }
}
