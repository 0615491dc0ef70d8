//! Finite subsets of `Z^d` with fixed dimension.

use super::ZnError;
use std::collections::BTreeSet;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VecSet {
    dim: usize,
    elems: BTreeSet<Vec<i64>>,
}

impl VecSet {
    pub fn new<I: IntoIterator<Item = Vec<i64>>>(dim: usize, elems: I) -> Result<Self, ZnError> {
        let elems: BTreeSet<Vec<i64>> = elems.into_iter().collect();
        if let Some(bad) = elems.iter().find(|v| v.len() != dim) {
            return Err(ZnError::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(VecSet { dim, elems })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.elems.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<i64>> + '_ {
        self.elems.iter()
    }

    /// Per-coordinate minimum over the set; `None` when empty.
    pub fn coordinate_min(&self) -> Option<Vec<i64>> {
        let mut it = self.elems.iter();
        let mut acc = it.next()?.clone();
        for v in it {
            for (a, &x) in acc.iter_mut().zip(v) {
                *a = (*a).min(x);
            }
        }
        Some(acc)
    }

    pub fn translate(&self, t: &[i64]) -> VecSet {
        let elems = self
            .elems
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        VecSet {
            dim: self.dim,
            elems,
        }
    }

    pub fn sumset(&self, other: &VecSet) -> Result<VecSet, ZnError> {
        if self.dim != other.dim {
            return Err(ZnError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut elems = BTreeSet::new();
        for a in &self.elems {
            for b in &other.elems {
                elems.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>());
            }
        }
        Ok(VecSet {
            dim: self.dim,
            elems,
        })
    }

    pub fn neg(&self) -> VecSet {
        VecSet {
            dim: self.dim,
            elems: self
                .elems
                .iter()
                .map(|v| v.iter().map(|x| -x).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_are_coordinatewise() {
        let a = VecSet::new(2, [vec![0, 1], vec![2, 3]]).unwrap();
        let b = VecSet::new(2, [vec![1, 0]]).unwrap();
        let s = a.sumset(&b).unwrap();
        assert!(s.contains(&[1, 1]));
        assert!(s.contains(&[3, 3]));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn dim_mismatch_rejected() {
        assert!(VecSet::new(2, [vec![1]]).is_err());
    }
}
