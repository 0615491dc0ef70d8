//! Symmetric multidimensional progressions inside Bohr sets.
//!
//! The intersection `B(G, (d_g))` contains a symmetric progression of
//! dimension `|G|` and size at least `prod(d_g/|G|) N`. The search here
//! is constructive: a greedy pass splits each radius evenly across the
//! dimensions (triangle inequality keeps every signed combination
//! inside), and an exhaustive pass over generator tuples takes over
//! when greedy output is clearly improvable. The returned progression
//! is always re-verified element by element.

use super::spec::{bohr_set, norm_numer, BohrSpec};
use crate::ratio::{self, Ratio};
use crate::zn::ZnSet;
use num::BigInt;
use serde::Serialize;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ProgressionError {
    #[error("progression extraction limited to {cap} dimensions, got {dim}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("progression extraction needs at least one frequency")]
    EmptyFrequencySet,
    #[error("enumeration of {size} elements exceeds cap {cap}")]
    EnumerationCapExceeded { size: u128, cap: u128 },
}

/// `{base + sum l_i g_i}` with `l_i` in `[-L_i, L_i]` (symmetric) or
/// `[0, L_i)` otherwise; optionally reduced mod N.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiProgression {
    pub base: i64,
    pub generators: Vec<i64>,
    pub lengths: Vec<u64>,
    pub symmetric: bool,
    pub modulus: Option<u64>,
}

pub const ENUM_CAP: u128 = 1 << 24;

impl MultiProgression {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// `prod(2L+1)` (symmetric) or `prod(max(L,1))`: enumeration count
    /// before collisions.
    pub fn nominal_size(&self) -> u128 {
        self.lengths
            .iter()
            .map(|&l| {
                if self.symmetric {
                    2 * l as u128 + 1
                } else {
                    (l as u128).max(1)
                }
            })
            .product()
    }

    /// Distinct elements, sorted. Errors above [`ENUM_CAP`].
    pub fn enumerate(&self) -> Result<Vec<i64>, ProgressionError> {
        let nominal = self.nominal_size();
        if nominal > ENUM_CAP {
            return Err(ProgressionError::EnumerationCapExceeded {
                size: nominal,
                cap: ENUM_CAP,
            });
        }
        let mut vals = vec![self.base];
        for (&g, &l) in self.generators.iter().zip(&self.lengths) {
            let range: Vec<i64> = if self.symmetric {
                (-(l as i64)..=l as i64).collect()
            } else {
                (0..l.max(1) as i64).collect()
            };
            let mut next = Vec::with_capacity(vals.len() * range.len());
            for v in &vals {
                for c in &range {
                    next.push(v + c * g);
                }
            }
            vals = next;
        }
        if let Some(n) = self.modulus {
            for v in vals.iter_mut() {
                *v = v.rem_euclid(n as i64);
            }
        }
        vals.sort_unstable();
        vals.dedup();
        Ok(vals)
    }

    pub fn size(&self) -> Result<u64, ProgressionError> {
        Ok(self.enumerate()?.len() as u64)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtractReport {
    pub dim: usize,
    pub size: u64,
    pub bound: String,
    pub bound_f64: f64,
    /// Whether the size reached the product lower bound.
    pub met: bool,
    /// Element-by-element containment in the Bohr set.
    pub verified: bool,
    pub method: &'static str,
}

/// Largest `L` such that `k*g` stays in `inside` for all `0 <= k <= L`.
fn ray_length(inside: &ZnSet, g: u64, n: u64) -> u64 {
    let mut k = 1u64;
    while k <= n {
        let x = ((k as u128 * g as u128) % n as u128) as u64;
        if !inside.contains(x) {
            break;
        }
        k += 1;
    }
    k - 1
}

/// Search for a symmetric progression of dimension `|G|` inside
/// `B(spec)`. Trivial frequencies should be dropped by the caller
/// beforehand ([`BohrSpec::without_trivial`]).
pub fn extract_progression(
    spec: &BohrSpec,
    dim_cap: usize,
) -> Result<(MultiProgression, ExtractReport), ProgressionError> {
    let d = spec.dim();
    if d == 0 {
        return Err(ProgressionError::EmptyFrequencySet);
    }
    if d > dim_cap {
        return Err(ProgressionError::DimensionCapExceeded { dim: d, cap: dim_cap });
    }
    let n = spec.modulus();
    let full = bohr_set(spec);
    let budget_spec = spec.scaled(&Ratio::new(BigInt::from(1), BigInt::from(d as u64)));
    let budget = bohr_set(&budget_spec);

    // Candidates ordered by norm vector, then by value.
    let mut candidates: Vec<u64> = (1..n).collect();
    candidates.sort_by_key(|&x| {
        let key: Vec<u64> = spec.freqs().iter().map(|&r| norm_numer(n, r, x)).collect();
        (key, x)
    });

    // Greedy: per-dimension radius budget, longest ray first.
    let mut gens: Vec<i64> = Vec::new();
    let mut lens: Vec<u64> = Vec::new();
    let mut used = ZnSet::singleton(n, 0);
    for _slot in 0..d {
        let mut best: Option<(u64, u64)> = None; // (g, L)
        for &g in &candidates {
            if used.contains(g) {
                continue;
            }
            let l = ray_length(&budget, g, n);
            if l >= 1 && best.map_or(true, |(_, bl)| l > bl) {
                best = Some((g, l));
            }
        }
        match best {
            Some((g, l)) => {
                gens.push(g as i64);
                lens.push(l);
                used.insert(g);
            }
            None => {
                gens.push(0);
                lens.push(0);
            }
        }
    }
    let mut prog = MultiProgression {
        base: 0,
        generators: gens,
        lengths: lens,
        symmetric: true,
        modulus: Some(n),
    };
    let mut method = "greedy";

    let bound = spec
        .radii()
        .iter()
        .fold(Ratio::from_integer(BigInt::from(n)), |acc, r| acc * r)
        / Ratio::from_integer(BigInt::from((d as u64).pow(d as u32)));
    let mut size = prog.size()?;

    // Exhaustive fallback whenever greedy is clearly improvable and the
    // tuple space is small.
    let missed = Ratio::from_integer(BigInt::from(size)) < bound;
    let improvable = size < full.len();
    let members: Vec<u64> = full.iter().filter(|&x| x != 0).collect();
    if (missed || improvable) && tuple_space(members.len(), d) <= 1 << 15 {
        if let Some(better) = exhaustive_search(&members, d, n, &full, size) {
            prog = better;
            size = prog.size()?;
            method = "exhaustive";
        }
    }

    let verified = prog
        .enumerate()?
        .iter()
        .all(|&x| full.contains(x.rem_euclid(n as i64) as u64));
    let met = Ratio::from_integer(BigInt::from(size)) >= bound;
    let report = ExtractReport {
        dim: d,
        size,
        bound: ratio::format_ratio(&bound),
        bound_f64: ratio::to_f64(&bound),
        met,
        verified,
        method,
    };
    Ok((prog, report))
}

fn tuple_space(m: usize, d: usize) -> u128 {
    (m as u128).saturating_pow(d as u32)
}

/// Try all generator combinations (with repetition) and grow lengths
/// round-robin while containment in `full` holds. Returns the largest
/// verified progression strictly better than `beat`.
fn exhaustive_search(
    members: &[u64],
    d: usize,
    n: u64,
    full: &ZnSet,
    beat: u64,
) -> Option<MultiProgression> {
    let full_len = full.len();
    let mut best: Option<(u64, MultiProgression)> = None;
    let mut tuple = vec![0usize; d];
    loop {
        // Combinations with repetition: nondecreasing index tuples.
        if tuple.windows(2).all(|w| w[0] <= w[1]) {
            let gens: Vec<i64> = tuple.iter().map(|&i| members[i] as i64).collect();
            if let Some(p) = grow_lengths(&gens, n, full) {
                let s = p.size().ok()?;
                let cur = best.as_ref().map_or(beat, |(bs, _)| *bs);
                if s > cur {
                    // A progression inside B can never beat |B| itself.
                    if s == full_len {
                        return Some(p);
                    }
                    best = Some((s, p));
                }
            }
        }
        // Advance odometer.
        let mut i = d;
        loop {
            if i == 0 {
                return best.map(|(_, p)| p);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < members.len() {
                break;
            }
            tuple[i] = 0;
        }
    }
}

fn grow_lengths(gens: &[i64], n: u64, full: &ZnSet) -> Option<MultiProgression> {
    let d = gens.len();
    let mut p = MultiProgression {
        base: 0,
        generators: gens.to_vec(),
        lengths: vec![1; d],
        symmetric: true,
        modulus: Some(n),
    };
    if !contained(&p, n, full) {
        return None;
    }
    // Round-robin growth; stop growing a coordinate once it fails.
    let mut frozen = vec![false; d];
    while frozen.iter().any(|f| !f) {
        for i in 0..d {
            if frozen[i] {
                continue;
            }
            p.lengths[i] += 1;
            if p.nominal_size() > 1 << 14 || !contained(&p, n, full) {
                p.lengths[i] -= 1;
                frozen[i] = true;
            }
        }
    }
    Some(p)
}

fn contained(p: &MultiProgression, n: u64, full: &ZnSet) -> bool {
    match p.enumerate() {
        Ok(elems) => elems
            .iter()
            .all(|&x| full.contains(x.rem_euclid(n as i64) as u64)),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    #[test]
    fn one_dimensional_ray() {
        // N=101, G={1}, d=1/10: P = {k : |k| <= 10}, 21 elements.
        let spec = BohrSpec::uniform(101, &[1], ratio(1, 10));
        let (p, r) = extract_progression(&spec, 3).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(r.size, 21);
        assert!(r.met, "21 >= 10.1");
        assert!(r.verified);
        let elems = p.enumerate().unwrap();
        assert!(elems.contains(&0));
        assert_eq!(elems.len(), 21);
    }

    #[test]
    fn empty_frequency_set_rejected() {
        let spec = BohrSpec::uniform(12, &[], ratio(1, 4));
        assert!(matches!(
            extract_progression(&spec, 3),
            Err(ProgressionError::EmptyFrequencySet)
        ));
    }

    #[test]
    fn dimension_cap_enforced() {
        let spec = BohrSpec::uniform(64, &[1, 3, 5, 7], ratio(1, 4));
        assert!(matches!(
            extract_progression(&spec, 3),
            Err(ProgressionError::DimensionCapExceeded { dim: 4, cap: 3 })
        ));
    }

    #[test]
    fn two_frequency_pair_found() {
        // N=35, G={5,7}, d=1/5: the 9-element Bohr set is itself a
        // (1,1)-progression on a suitable generator pair.
        let spec = BohrSpec::uniform(35, &[5, 7], ratio(1, 5));
        let (p, r) = extract_progression(&spec, 3).unwrap();
        assert_eq!(p.dim(), 2);
        assert!(r.verified);
        assert!(r.met);
        assert_eq!(r.size, 9, "progression should fill the whole Bohr set");
    }

    #[test]
    fn progression_enumeration_dedups() {
        let p = MultiProgression {
            base: 0,
            generators: vec![2, 4],
            lengths: vec![2, 1],
            symmetric: true,
            modulus: Some(8),
        };
        let elems = p.enumerate().unwrap();
        // 2Z/8Z only
        assert_eq!(elems, vec![0, 2, 4, 6]);
    }
}
