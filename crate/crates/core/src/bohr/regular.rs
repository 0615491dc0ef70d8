//! Regularity of Bohr sets and regular-value search, both exact.
//!
//! A uniform-radius Bohr set `B(G, delta)` is regular when
//!
//! ```text
//! 1 - 2^4 |G| |eta|  <=  |B(G, (1+eta) delta)| / |B(G, delta)|  <=  1 + 2^4 |G| |eta|
//! ```
//!
//! for every `eta` with `|G||eta| <= 2^-4`. Since `t -> |B(G,t)|` is a
//! right-continuous step function whose breakpoints all lie among the
//! norm values `m/N`, the condition over real `eta` reduces to finitely
//! many exact rational comparisons: the upper inequality binds exactly
//! at each breakpoint in the window, the lower one just below each.

use super::spec::{norm_numer, BohrSpec};
use crate::ratio::Ratio;
use num::traits::Signed;
use num::BigInt;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RegularityError {
    #[error("no regular value in [{lo}, {hi}) among {candidates} candidates for |G|={dim}, N={n}")]
    NoRegularValue {
        n: u64,
        dim: usize,
        lo: String,
        hi: String,
        candidates: usize,
    },
    #[error("regularity needs at least one frequency")]
    EmptyFrequencySet,
}

/// Sorted maximal norm numerators `max_r min(rx mod N, N - rx mod N)`,
/// one entry per group element. `|B(G, t)| = #{x : m(x) <= t N}`.
pub struct NormProfile {
    n: u64,
    dim: usize,
    sorted: Vec<u64>,
}

impl NormProfile {
    pub fn new(n: u64, freqs: &[u64]) -> Self {
        let mut sorted: Vec<u64> = (0..n)
            .map(|x| {
                freqs
                    .iter()
                    .map(|&r| norm_numer(n, r, x))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        sorted.sort_unstable();
        NormProfile {
            n,
            dim: freqs.len(),
            sorted,
        }
    }

    /// `#{x : m(x) <= bound}`.
    pub fn count_leq(&self, bound: u64) -> u64 {
        self.sorted.partition_point(|&m| m <= bound) as u64
    }

    /// `|B(G, t)|` for a rational radius `t`.
    pub fn size_at(&self, t: &Ratio) -> u64 {
        if t.is_negative() {
            return 0;
        }
        self.count_leq(crate::ratio::floor_mul(t, self.n))
    }

    /// Distinct norm values `v` with `lo < v/N <= hi` (exact bounds).
    fn breaks_in(&self, lo: &Ratio, hi: &Ratio, include_lo: bool) -> Vec<u64> {
        let n = BigInt::from(self.n);
        let mut out = Vec::new();
        let mut prev = None;
        for &v in &self.sorted {
            if prev == Some(v) {
                continue;
            }
            prev = Some(v);
            let vr = Ratio::new(BigInt::from(v), n.clone());
            let above = if include_lo { vr >= *lo } else { vr > *lo };
            if above && vr <= *hi {
                out.push(v);
            }
        }
        out
    }

    pub fn is_regular(&self, delta: &Ratio) -> bool {
        assert!(self.dim >= 1, "regularity needs |G| >= 1");
        let window = Ratio::new(BigInt::from(1), BigInt::from(16 * self.dim as u64));
        let sixteen_dim = Ratio::from_integer(BigInt::from(16 * self.dim as u64));
        let one = Ratio::from_integer(BigInt::from(1));
        let r0 = self.size_at(delta);
        debug_assert!(r0 > 0, "Bohr sets contain 0");
        let r0_q = Ratio::from_integer(BigInt::from(r0));

        // Upper side: at each breakpoint v in (delta, (1+w) delta],
        // require R(v) <= R0 (1 + 16|G| (v/(N delta) - 1)).
        let hi = delta * (&one + &window);
        for v in self.breaks_in(delta, &hi, false) {
            let eta = Ratio::new(BigInt::from(v), BigInt::from(self.n)) / delta - &one;
            let allowed = &r0_q * (&one + &sixteen_dim * &eta);
            if Ratio::from_integer(BigInt::from(self.count_leq(v))) > allowed {
                return false;
            }
        }

        // Lower side: just below each breakpoint v in ((1-w) delta, delta],
        // require R(v-) >= R0 (1 - 16|G| (1 - v/(N delta))).
        let lo = delta * (&one - &window);
        for v in self.breaks_in(&lo, delta, false) {
            let s = &one - Ratio::new(BigInt::from(v), BigInt::from(self.n)) / delta;
            let allowed = &r0_q * (&one - &sixteen_dim * &s);
            let below = if v == 0 { 0 } else { self.count_leq(v - 1) };
            if Ratio::from_integer(BigInt::from(below)) < allowed {
                return false;
            }
        }
        true
    }

    /// Candidate radii for the regular-value scan: midpoints of the
    /// partition of `[delta, 2 delta)` induced by the breakpoints.
    pub fn candidates(&self, delta: &Ratio) -> Vec<Ratio> {
        let two = Ratio::from_integer(BigInt::from(2));
        let hi = delta * &two;
        let mut bounds = vec![delta.clone()];
        for v in self.breaks_in(delta, &hi, false) {
            let vr = Ratio::new(BigInt::from(v), BigInt::from(self.n));
            if vr < hi {
                bounds.push(vr);
            }
        }
        bounds.push(hi);
        bounds
            .windows(2)
            .filter(|w| w[0] < w[1])
            .map(|w| (&w[0] + &w[1]) / &two)
            .collect()
    }
}

/// Exact regularity test for a uniform-radius spec.
pub fn is_regular(spec: &BohrSpec) -> Result<bool, RegularityError> {
    if spec.dim() == 0 {
        return Err(RegularityError::EmptyFrequencySet);
    }
    let delta = assert_uniform(spec);
    Ok(NormProfile::new(spec.modulus(), spec.freqs()).is_regular(&delta))
}

/// First regular radius in `[delta, 2 delta)`, scanning breakpoint
/// midpoints in ascending order.
pub fn regular_value(n: u64, freqs: &[u64], delta: &Ratio) -> Result<Ratio, RegularityError> {
    let spec = BohrSpec::uniform(n, freqs, clamp_one(delta.clone()));
    if spec.dim() == 0 {
        return Err(RegularityError::EmptyFrequencySet);
    }
    let profile = NormProfile::new(n, spec.freqs());
    let cands = profile.candidates(delta);
    for c in &cands {
        if profile.is_regular(c) {
            return Ok(c.clone());
        }
    }
    Err(RegularityError::NoRegularValue {
        n,
        dim: spec.dim(),
        lo: crate::ratio::format_ratio(delta),
        hi: crate::ratio::format_ratio(&(delta * Ratio::from_integer(BigInt::from(2)))),
        candidates: cands.len(),
    })
}

fn clamp_one(r: Ratio) -> Ratio {
    let one = Ratio::from_integer(BigInt::from(1));
    if r > one {
        one
    } else {
        r
    }
}

fn assert_uniform(spec: &BohrSpec) -> Ratio {
    let first = spec.radii()[0].clone();
    assert!(
        spec.radii().iter().all(|d| *d == first),
        "regularity is defined for uniform radii"
    );
    first
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    #[test]
    fn whole_group_regime_is_regular() {
        // Radius far above 1/2: the ratio is identically 1 on the window.
        let spec = BohrSpec::uniform(50, &[7], ratio(9, 10));
        assert!(is_regular(&spec).unwrap());
    }

    #[test]
    fn jump_at_radius_is_irregular() {
        // N=6, G={1}: |B| jumps from 3 to 5 at t = 1/3. A radius just
        // below the jump with the breakpoint inside its window fails.
        let profile = NormProfile::new(6, &[1]);
        assert_eq!(profile.size_at(&ratio(33, 100)), 3);
        assert_eq!(profile.size_at(&ratio(1, 3)), 5);
        assert!(!profile.is_regular(&ratio(33, 100)));
        // And a radius exactly at a jump fails from the lower side.
        assert!(!profile.is_regular(&ratio(1, 3)));
    }

    #[test]
    fn regular_value_101() {
        let d = regular_value(101, &[1], &ratio(1, 10)).unwrap();
        assert!(d >= ratio(1, 10) && d < ratio(2, 10));
        let spec = BohrSpec::uniform(101, &[1], d);
        assert!(is_regular(&spec).unwrap());
    }

    #[test]
    fn regular_value_two_freqs() {
        let d = regular_value(64, &[1, 3], &ratio(1, 20)).unwrap();
        assert!(d >= ratio(1, 20) && d < ratio(1, 10));
        assert!(is_regular(&BohrSpec::uniform(64, &[1, 3], d)).unwrap());
    }

    #[test]
    fn trivial_frequency_set_whole_group() {
        // G = {0}: B is the whole group at every radius; no breakpoints.
        let spec = BohrSpec::uniform(32, &[0], ratio(1, 7));
        assert!(is_regular(&spec).unwrap());
        let d = regular_value(32, &[0], &ratio(1, 7)).unwrap();
        assert_eq!(d, ratio(3, 14)); // midpoint of [1/7, 2/7)
    }

    #[test]
    fn empty_frequency_set_rejected() {
        let spec = BohrSpec::uniform(32, &[], ratio(1, 7));
        assert!(matches!(
            is_regular(&spec),
            Err(RegularityError::EmptyFrequencySet)
        ));
    }

    #[test]
    fn profile_counts_match_bohr_sets() {
        use super::super::spec::bohr_set;
        let n = 60;
        let freqs = [1u64, 7];
        let profile = NormProfile::new(n, &freqs);
        for d in [ratio(1, 10), ratio(1, 4), ratio(3, 7), ratio(1, 60)] {
            let direct = bohr_set(&BohrSpec::uniform(n, &freqs, d.clone())).len();
            assert_eq!(profile.size_at(&d), direct, "d={d}");
        }
    }
}
