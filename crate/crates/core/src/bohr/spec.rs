//! Bohr sets with exact rational radii.
//!
//! `B(freqs, radii) = {x : ||r*x/N|| <= radius_r for all r}` where
//! `||t||` is the distance from `t` to the nearest integer. Membership
//! reduces to the integer comparison `min(rx mod N, N - rx mod N) <=
//! floor(radius * N)`, so set construction never touches floating
//! point.

use crate::exec;
use crate::fourier::{self, DensityMeasure};
use crate::ratio::{self, Ratio};
use crate::zn::ZnSet;
use num::traits::{One, Signed};
use num::BigInt;
use serde::Serialize;

/// Frequency set with one exact radius per frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct BohrSpec {
    n: u64,
    freqs: Vec<u64>,
    radii: Vec<Ratio>,
}

/// `min(v mod N, N - v mod N)` for `v = r*x`: the norm numerator.
#[inline]
pub fn norm_numer(n: u64, r: u64, x: u64) -> u64 {
    let v = ((r as u128 * x as u128) % n as u128) as u64;
    v.min(n - v)
}

impl BohrSpec {
    /// Uniform radius on every frequency. Radii must lie in `(0, 1]`.
    pub fn uniform(n: u64, freqs: &[u64], delta: Ratio) -> Self {
        let freqs = normalize_freqs(n, freqs);
        let radii = vec![delta; freqs.len()];
        let s = BohrSpec { n, freqs, radii };
        s.validate();
        s
    }

    pub fn per_frequency(n: u64, entries: Vec<(u64, Ratio)>) -> Self {
        let mut entries: Vec<(u64, Ratio)> =
            entries.into_iter().map(|(r, d)| (r % n, d)).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        // Duplicate frequencies keep the tighter radius.
        let mut freqs: Vec<u64> = Vec::new();
        let mut radii: Vec<Ratio> = Vec::new();
        for (r, d) in entries {
            if freqs.last() == Some(&r) {
                let last = radii.last_mut().unwrap();
                if d < *last {
                    *last = d;
                }
            } else {
                freqs.push(r);
                radii.push(d);
            }
        }
        let s = BohrSpec { n, freqs, radii };
        s.validate();
        s
    }

    /// Intersection of two specs as one spec over the union of frequencies.
    pub fn merged(&self, other: &BohrSpec) -> BohrSpec {
        assert_eq!(self.n, other.n);
        let entries = self
            .freqs
            .iter()
            .cloned()
            .zip(self.radii.iter().cloned())
            .chain(other.freqs.iter().cloned().zip(other.radii.iter().cloned()))
            .collect();
        BohrSpec::per_frequency(self.n, entries)
    }

    /// Same membership with the vacuous trivial frequency removed.
    pub fn without_trivial(&self) -> BohrSpec {
        let entries: Vec<(u64, Ratio)> = self
            .freqs
            .iter()
            .cloned()
            .zip(self.radii.iter().cloned())
            .filter(|(r, _)| *r != 0)
            .collect();
        BohrSpec::per_frequency(self.n, entries)
    }

    fn validate(&self) {
        assert!(self.n >= 1);
        for d in &self.radii {
            assert!(d.is_positive(), "radius must be positive");
            assert!(
                *d <= Ratio::from_integer(BigInt::one()),
                "radius must be <= 1"
            );
        }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn freqs(&self) -> &[u64] {
        &self.freqs
    }

    pub fn radii(&self) -> &[Ratio] {
        &self.radii
    }

    pub fn dim(&self) -> usize {
        self.freqs.len()
    }

    pub fn radius_of(&self, freq: u64) -> Option<&Ratio> {
        self.freqs
            .iter()
            .position(|&f| f == freq)
            .map(|i| &self.radii[i])
    }

    /// With every radius scaled by `factor` (clamped above at 1).
    pub fn scaled(&self, factor: &Ratio) -> BohrSpec {
        let one = Ratio::from_integer(BigInt::one());
        let entries = self
            .freqs
            .iter()
            .cloned()
            .zip(self.radii.iter().map(|d| {
                let r = d * factor;
                if r > one {
                    one.clone()
                } else {
                    r
                }
            }))
            .collect();
        BohrSpec::per_frequency(self.n, entries)
    }

    /// Integer thresholds `floor(radius * N)`, one per frequency.
    pub fn thresholds(&self) -> Vec<u64> {
        self.radii
            .iter()
            .map(|d| ratio::floor_mul(d, self.n))
            .collect()
    }

    pub fn member(&self, x: u64) -> bool {
        self.freqs
            .iter()
            .zip(self.thresholds())
            .all(|(&r, t)| norm_numer(self.n, r, x) <= t)
    }
}

/// Exact Bohr set: always symmetric and containing 0.
pub fn bohr_set(spec: &BohrSpec) -> ZnSet {
    let n = spec.n;
    let thresholds = spec.thresholds();
    let freqs = spec.freqs.clone();
    let hits = exec::map_indexed(n as usize, |x| {
        freqs
            .iter()
            .zip(&thresholds)
            .all(|(&r, &t)| norm_numer(n, r, x as u64) <= t)
    });
    ZnSet::from_elems(
        n,
        hits.iter()
            .enumerate()
            .filter(|(_, &h)| h)
            .map(|(x, _)| x as u64),
    )
}

/// Uniform probability measure on the Bohr set of `spec`.
pub fn bohr_measure(spec: &BohrSpec) -> DensityMeasure {
    DensityMeasure::uniform_on(&bohr_set(spec))
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeBoundReport {
    pub size: u64,
    pub bound: String,
    pub bound_f64: f64,
    pub pass: bool,
}

/// Compare `|B|` against the product lower bound `prod(radii) * N`.
pub fn size_lower_bound_check(spec: &BohrSpec) -> SizeBoundReport {
    let size = bohr_set(spec).len();
    let mut bound = Ratio::from_integer(BigInt::from(spec.n));
    for d in &spec.radii {
        bound *= d;
    }
    let pass = Ratio::from_integer(BigInt::from(size)) >= bound;
    SizeBoundReport {
        size,
        bound: ratio::format_ratio(&bound),
        bound_f64: ratio::to_f64(&bound),
        pass,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnihilatorReport {
    /// `2^5 |freqs| kappa^-1 delta'/delta`
    pub bound: f64,
    pub worst: f64,
    pub worst_witness: Option<(u64, u64)>,
    pub spectrum_size: usize,
    pub inner_size: u64,
    pub pass: bool,
}

/// Check that every frequency in `Spec_kappa(beta_{G,delta})` moves
/// slowly on `B(G, delta')`: `|1 - e(r x / N)| <= 2^5 |G| kappa^-1
/// delta'/delta` for all such `r` and all `x` in the narrower set.
/// Expects `B(G, delta)` regular (caller-established).
pub fn approximate_annihilator_check(
    n: u64,
    freqs: &[u64],
    delta: &Ratio,
    delta_prime: &Ratio,
    kappa: f64,
    tol: f64,
) -> AnnihilatorReport {
    assert!(kappa > 0.0);
    let outer = BohrSpec::uniform(n, freqs, delta.clone());
    let beta = bohr_measure(&outer);
    let table = fourier::transform_measure(&beta);
    let mut spectrum = table.spectrum(kappa, tol);
    symmetrize(&mut spectrum, n);
    let inner = bohr_set(&BohrSpec::uniform(n, freqs, delta_prime.clone()));
    let bound = 32.0 * freqs.len() as f64 / kappa * ratio::to_f64(&(delta_prime / delta));
    let mut worst = 0.0f64;
    let mut witness = None;
    for &r in &spectrum {
        for x in inner.iter() {
            let v = fourier::one_minus_character_abs(n, r, x);
            if v > worst {
                worst = v;
                witness = Some((r, x));
            }
        }
    }
    AnnihilatorReport {
        bound,
        worst,
        worst_witness: witness,
        spectrum_size: spectrum.len(),
        inner_size: inner.len(),
        pass: worst <= bound + tol,
    }
}

/// Close a frequency list under negation and 0-inclusion, sorted.
pub fn symmetrize(freqs: &mut Vec<u64>, n: u64) {
    let mut all: Vec<u64> = freqs
        .iter()
        .flat_map(|&r| [r % n, (n - r % n) % n])
        .collect();
    all.push(0);
    all.sort_unstable();
    all.dedup();
    *freqs = all;
}

fn normalize_freqs(n: u64, freqs: &[u64]) -> Vec<u64> {
    let mut v: Vec<u64> = freqs.iter().map(|&r| r % n).collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    #[test]
    fn twelve_one_quarter() {
        let spec = BohrSpec::uniform(12, &[1], ratio(1, 4));
        let b = bohr_set(&spec);
        assert_eq!(b.elems(), vec![0, 1, 2, 3, 9, 10, 11]);
        assert_eq!(b.len(), 7);
    }

    #[test]
    fn huge_radius_gives_whole_group() {
        // ||t|| never exceeds 1/2, so radius >= 1/2 is no constraint.
        let spec = BohrSpec::uniform(10, &[3, 7], ratio(1, 2));
        assert_eq!(bohr_set(&spec).len(), 10);
        let spec = BohrSpec::uniform(10, &[3, 7], ratio(1, 1));
        assert_eq!(bohr_set(&spec).len(), 10);
    }

    #[test]
    fn two_frequency_intersection() {
        let spec = BohrSpec::uniform(12, &[1, 3], ratio(1, 4));
        let b = bohr_set(&spec);
        assert_eq!(b.elems(), vec![0, 1, 3, 9, 11]);
    }

    #[test]
    fn always_symmetric_with_zero() {
        for (n, freqs, d) in [
            (17u64, vec![2u64, 5], ratio(1, 7)),
            (24, vec![3], ratio(1, 9)),
            (5, vec![1, 2, 3], ratio(1, 3)),
        ] {
            let b = bohr_set(&BohrSpec::uniform(n, &freqs, d));
            assert!(b.contains(0));
            for x in b.iter() {
                assert!(b.contains((n - x) % n));
            }
        }
    }

    #[test]
    fn size_bound_examples() {
        let r = size_lower_bound_check(&BohrSpec::uniform(12, &[1], ratio(1, 4)));
        assert_eq!(r.size, 7);
        assert!(r.pass);
        // Empty frequency set: bound is N itself.
        let r = size_lower_bound_check(&BohrSpec::uniform(12, &[], ratio(1, 4)));
        assert_eq!(r.size, 12);
        assert!(r.pass);
        let r = size_lower_bound_check(&BohrSpec::uniform(101, &[1, 10], ratio(1, 10)));
        assert!(r.pass, "size {} bound {}", r.size, r.bound);
    }

    #[test]
    fn merged_takes_tighter_radius() {
        let a = BohrSpec::uniform(20, &[1, 3], ratio(1, 4));
        let b = BohrSpec::uniform(20, &[3, 7], ratio(1, 8));
        let m = a.merged(&b);
        assert_eq!(m.freqs(), &[1, 3, 7]);
        assert_eq!(m.radius_of(3), Some(&ratio(1, 8)));
    }

    #[test]
    fn trivial_frequency_is_vacuous() {
        let with = BohrSpec::per_frequency(15, vec![(0, ratio(1, 15)), (2, ratio(1, 5))]);
        let without = with.without_trivial();
        assert_eq!(bohr_set(&with), bohr_set(&without));
        assert_eq!(without.dim(), 1);
    }

    #[test]
    fn annihilator_trivial_cases() {
        // bound >= 2 is vacuous: |1 - e(t)| <= 2 always.
        let r = approximate_annihilator_check(32, &[1], &ratio(1, 4), &ratio(1, 4), 0.01, 1e-9);
        assert!(r.bound >= 2.0);
        assert!(r.pass);
    }
}
