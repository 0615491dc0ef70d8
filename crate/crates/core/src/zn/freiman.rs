//! Freiman homomorphism/isomorphism verification by multiset
//! enumeration.
//!
//! A bijection `phi` is a Freiman k-isomorphism when, for all k-element
//! multisets, equality of domain sums holds iff equality of image sums
//! holds. We enumerate each multiset once, record `sum -> image sum`,
//! and check the correspondence is a well-defined injection. The
//! enumeration count is `C(n+k-1, k)` and is capped by a tuple budget.

use super::ZnError;
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_TUPLE_BUDGET: u64 = 10_000_000;

/// Finite injective map between two additive universes.
#[derive(Clone, Debug)]
pub struct FreimanMap<D, R> {
    pairs: Vec<(D, R)>,
}

impl<D: Ord + Clone, R: Ord + Clone> FreimanMap<D, R> {
    /// Build from pairs; fails unless the map is injective both ways.
    pub fn new(mut pairs: Vec<(D, R)>) -> Result<Self, ZnError> {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let dom_ok = pairs.windows(2).all(|w| w[0].0 != w[1].0);
        let rng: BTreeSet<&R> = pairs.iter().map(|(_, r)| r).collect();
        if !dom_ok || rng.len() != pairs.len() {
            return Err(ZnError::NotInjective);
        }
        Ok(FreimanMap { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(D, R)] {
        &self.pairs
    }

    pub fn domain(&self) -> impl Iterator<Item = &D> + '_ {
        self.pairs.iter().map(|(d, _)| d)
    }

    pub fn image(&self) -> impl Iterator<Item = &R> + '_ {
        self.pairs.iter().map(|(_, r)| r)
    }

    pub fn apply(&self, d: &D) -> Option<&R> {
        self.pairs
            .binary_search_by(|(k, _)| k.cmp(d))
            .ok()
            .map(|i| &self.pairs[i].1)
    }

    pub fn preimage(&self, r: &R) -> Option<&D> {
        self.pairs.iter().find(|(_, v)| v == r).map(|(d, _)| d)
    }

    pub fn inverse(&self) -> FreimanMap<R, D> {
        let pairs = self.pairs.iter().map(|(d, r)| (r.clone(), d.clone())).collect();
        FreimanMap::new(pairs).expect("inverse of injection is injective")
    }
}

fn multiset_count(n: u64, k: u32) -> u128 {
    // C(n+k-1, k), saturating high.
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc.saturating_mul(n as u128 + i);
        acc /= i + 1;
    }
    acc
}

/// True iff `phi` preserves equality of k-fold sums in both directions.
///
/// `add_d`/`add_r` supply the ambient additions (residue arithmetic
/// closes over the modulus, vectors add coordinatewise, and so on).
pub fn is_freiman_isomorphism<D, R>(
    map: &FreimanMap<D, R>,
    k: u32,
    budget: u64,
    add_d: &dyn Fn(&D, &D) -> D,
    add_r: &dyn Fn(&R, &R) -> R,
) -> Result<bool, ZnError>
where
    D: Ord + Clone,
    R: Ord + Clone,
{
    assert!(k >= 2, "order must be at least 2");
    if map.is_empty() {
        return Ok(true);
    }
    let needed = multiset_count(map.len() as u64, k);
    if needed > budget as u128 {
        return Err(ZnError::TupleBudgetExceeded { needed, budget });
    }

    // sum over the domain -> sum over the image, per multiset
    let mut table: BTreeMap<D, R> = BTreeMap::new();
    let pairs = map.pairs();
    // Depth-first over nondecreasing index tuples, carrying partial sums.
    let mut stack: Vec<(usize, D, R)> = Vec::with_capacity(k as usize);
    let mut start = 0usize;
    loop {
        if stack.len() == k as usize {
            let (_, sd, sr) = stack.last().unwrap();
            match table.get(sd) {
                Some(prev) if prev != sr => return Ok(false),
                Some(_) => {}
                None => {
                    table.insert(sd.clone(), sr.clone());
                }
            }
            // Backtrack to the next branch.
            let (i, _, _) = stack.pop().unwrap();
            start = i + 1;
            while start >= pairs.len() {
                match stack.pop() {
                    Some((j, _, _)) => start = j + 1,
                    None => {
                        // Injectivity: distinct domain sums need distinct image sums.
                        let images: BTreeSet<&R> = table.values().collect();
                        return Ok(images.len() == table.len());
                    }
                }
            }
            continue;
        }
        let (d, r) = &pairs[start];
        let (sd, sr) = match stack.last() {
            Some((_, pd, pr)) => (add_d(pd, d), add_r(pr, r)),
            None => (d.clone(), r.clone()),
        };
        stack.push((start, sd, sr));
    }
}

/// Convenience: integer-to-integer maps.
pub fn is_freiman_isomorphism_int(
    map: &FreimanMap<i64, i64>,
    k: u32,
    budget: u64,
) -> Result<bool, ZnError> {
    is_freiman_isomorphism(map, k, budget, &|a, b| a + b, &|a, b| a + b)
}

/// Convenience: integers into residues mod `n`.
pub fn is_freiman_isomorphism_mod(
    map: &FreimanMap<i64, i64>,
    n: u64,
    k: u32,
    budget: u64,
) -> Result<bool, ZnError> {
    let m = n as i64;
    is_freiman_isomorphism(map, k, budget, &|a, b| a + b, &move |a, b| {
        (a + b).rem_euclid(m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map_of(dom: &[i64], f: impl Fn(i64) -> i64) -> FreimanMap<i64, i64> {
        FreimanMap::new(dom.iter().map(|&d| (d, f(d))).collect()).unwrap()
    }

    #[test]
    fn affine_maps_pass_any_order() {
        let m = map_of(&[0, 1, 2, 3], |x| 2 * x + 5);
        assert!(is_freiman_isomorphism_int(&m, 8, DEFAULT_TUPLE_BUDGET).unwrap());
    }

    #[test]
    fn identity_passes() {
        let m = map_of(&[0, 3, 17, 40], |x| x);
        for k in [2, 3, 8] {
            assert!(is_freiman_isomorphism_int(&m, k, DEFAULT_TUPLE_BUDGET).unwrap());
        }
    }

    #[test]
    fn order_map_to_non_progression_fails() {
        // {0,1,2} -> {0,1,3}: 0+2 = 1+1 but 0+3 != 1+1.
        let m = FreimanMap::new(vec![(0, 0), (1, 1), (2, 3)]).unwrap();
        assert!(!is_freiman_isomorphism_int(&m, 2, DEFAULT_TUPLE_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let m = map_of(&(0..32).collect::<Vec<i64>>(), |x| x);
        let res = is_freiman_isomorphism_int(&m, 8, 100);
        assert!(matches!(res, Err(ZnError::TupleBudgetExceeded { .. })));
    }

    #[test]
    fn non_injective_rejected_at_construction() {
        assert!(FreimanMap::new(vec![(0, 1), (1, 1)]).is_err());
        assert!(FreimanMap::new(vec![(0, 1), (0, 2)]).is_err());
    }

    #[test]
    fn wraparound_mod_map_fails() {
        // x mod 5 on {0,1,4}: 4+1 = 0+0 mod 5 but 5 != 0 in Z.
        let m = FreimanMap::new(vec![(0, 0), (1, 1), (4, 4)]).unwrap();
        assert!(!is_freiman_isomorphism_mod(&m, 5, 2, DEFAULT_TUPLE_BUDGET).unwrap());
    }
}
