//! `S`-dissociativity of frequency sets.
//!
//! A set `L` of frequencies is `S`-dissociated when no nonzero sign
//! pattern `m : L -> {-1,0,1}` has `sum m_l * l` landing in `S` (a
//! symmetric set containing 0). The witness search enumerates sign
//! patterns in ternary counter order, least significant trit on the
//! smallest frequency, so the reported violation is canonical. The
//! greedy builder instead maintains pattern counts per residue, which
//! turns each addability test into one pass over `S`.

use crate::bohr::symmetrize;
use crate::exec;
use crate::zn::ZnSet;
use serde::Serialize;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DissociationError {
    #[error("|L| = {len} exceeds the enumeration cap {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
}

pub const DEFAULT_CAP: usize = 16;

/// Obstruction set `S` plus the frequency set under test.
#[derive(Clone, Debug)]
pub struct DissociationContext {
    s: ZnSet,
    lambda: Vec<u64>,
    cap: usize,
}

impl DissociationContext {
    /// `S` is symmetrized and 0 is inserted (it is a neighborhood of
    /// the trivial frequency by definition).
    pub fn new(s: &ZnSet, lambda: &[u64], cap: usize) -> Self {
        let n = s.modulus();
        let mut sym = s.clone();
        sym.insert(0);
        let sym = sym.union(&sym.neg()).expect("same modulus");
        let mut lambda: Vec<u64> = lambda.iter().map(|&l| l % n).collect();
        lambda.sort_unstable();
        lambda.dedup();
        DissociationContext {
            s: sym,
            lambda,
            cap,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.s.modulus()
    }

    pub fn obstruction(&self) -> &ZnSet {
        &self.s
    }

    pub fn lambda(&self) -> &[u64] {
        &self.lambda
    }
}

/// Outcome of a dissociativity test; the witness is the first violating
/// pattern in ternary counter order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Verdict {
    Dissociated,
    Violated { pattern: Vec<i8>, sum: u64 },
}

impl Verdict {
    pub fn is_dissociated(&self) -> bool {
        matches!(self, Verdict::Dissociated)
    }
}

/// Trit decode: counter digit 0 -> 0, 1 -> +1, 2 -> -1.
#[inline]
fn trit(digit: u64) -> i8 {
    match digit {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Signed contribution of frequency `l` with sign `s`, mod n.
#[inline]
fn signed(n: u64, l: u64, s: i8) -> u64 {
    match s {
        1 => l,
        -1 => (n - l) % n,
        _ => 0,
    }
}

/// Enumerate all nonzero sign patterns; the first whose signed sum
/// lands in `S` is returned as the witness.
pub fn is_dissociated(ctx: &DissociationContext) -> Result<Verdict, DissociationError> {
    let k = ctx.lambda.len();
    if k > ctx.cap {
        return Err(DissociationError::CapExceeded {
            len: k,
            cap: ctx.cap,
        });
    }
    if k == 0 {
        return Ok(Verdict::Dissociated);
    }
    let n = ctx.modulus();
    let total: u64 = 3u64.pow(k as u32);
    // Partition the counter range across workers; each chunk scans in
    // order, so the first hit over ordered chunks is the global first.
    let chunk: u64 = 1 << 12;
    let chunks = ((total - 1) + chunk - 1) / chunk;
    let hit = exec::find_first_indexed(chunks as usize, |ci| {
        let lo = 1 + ci as u64 * chunk;
        let hi = (lo + chunk).min(total);
        let mut digits = decode_ternary(lo, k);
        let mut sum = pattern_sum(n, &ctx.lambda, &digits);
        let mut c = lo;
        loop {
            if ctx.s.contains(sum) {
                let pattern: Vec<i8> = digits.iter().map(|&d| trit(d)).collect();
                return Some(Verdict::Violated { pattern, sum });
            }
            c += 1;
            if c >= hi {
                return None;
            }
            // Ternary odometer with incremental sum update.
            for (i, d) in digits.iter_mut().enumerate() {
                sum = (sum + n - signed(n, ctx.lambda[i], trit(*d)) % n) % n;
                *d += 1;
                if *d == 3 {
                    *d = 0;
                    sum = (sum + signed(n, ctx.lambda[i], trit(*d))) % n;
                } else {
                    sum = (sum + signed(n, ctx.lambda[i], trit(*d))) % n;
                    break;
                }
            }
        }
    });
    Ok(hit.unwrap_or(Verdict::Dissociated))
}

fn decode_ternary(mut c: u64, k: usize) -> Vec<u64> {
    let mut digits = vec![0u64; k];
    for d in digits.iter_mut() {
        *d = c % 3;
        c /= 3;
    }
    digits
}

fn pattern_sum(n: u64, lambda: &[u64], digits: &[u64]) -> u64 {
    let mut sum = 0u64;
    for (&l, &d) in lambda.iter().zip(digits) {
        sum = (sum + signed(n, l, trit(d))) % n;
    }
    sum
}

/// `<L> = {sum of all sign patterns}`, built by set dynamic
/// programming in `O(|L| N)` words.
pub fn span(n: u64, lambda: &[u64], cap: usize) -> Result<ZnSet, DissociationError> {
    if lambda.len() > cap {
        return Err(DissociationError::CapExceeded {
            len: lambda.len(),
            cap,
        });
    }
    let mut s = ZnSet::singleton(n, 0);
    for &l in lambda {
        let plus = s.translate(l % n);
        let minus = s.translate((n - l % n) % n);
        s = s.union(&plus).unwrap().union(&minus).unwrap();
    }
    Ok(s)
}

/// Pattern counts per residue over the current frequency set; counting
/// sidesteps the 3^k enumeration during greedy growth.
struct PatternCounts {
    n: u64,
    counts: Vec<u64>,
}

impl PatternCounts {
    fn new(n: u64) -> Self {
        let mut counts = vec![0; n as usize];
        counts[0] = 1; // the zero pattern
        PatternCounts { n, counts }
    }

    fn add_frequency(&mut self, l: u64) {
        let n = self.n;
        let old = self.counts.clone();
        for x in 0..n as usize {
            let plus = ((x as u64 + n - l % n) % n) as usize;
            let minus = ((x as u64 + l % n) % n) as usize;
            self.counts[x] = old[x] + old[plus] + old[minus];
        }
    }

    /// Number of patterns `m` over the current set with `l + m.L in S`.
    fn extensions_into(&self, s: &ZnSet, l: u64) -> u64 {
        let n = self.n;
        s.iter()
            .map(|t| self.counts[((t + n - l % n) % n) as usize])
            .sum()
    }
}

/// Greedy maximal `S`-dissociated subset, scanning `candidates` in the
/// given order. The result cannot be extended by any scanned candidate.
pub fn greedy_maximal_dissociated(
    candidates: &[u64],
    s: &ZnSet,
    cap: usize,
) -> Result<Vec<u64>, DissociationError> {
    let n = s.modulus();
    let mut sym = s.clone();
    sym.insert(0);
    let sym = sym.union(&sym.neg()).unwrap();
    let mut counts = PatternCounts::new(n);
    let mut chosen: Vec<u64> = Vec::new();
    for &g in candidates {
        let g = g % n;
        if chosen.contains(&g) || chosen.contains(&((n - g) % n)) {
            continue;
        }
        if counts.extensions_into(&sym, g) == 0 {
            if chosen.len() + 1 > cap {
                return Err(DissociationError::CapExceeded {
                    len: chosen.len() + 1,
                    cap,
                });
            }
            chosen.push(g);
            counts.add_frequency(g);
        }
    }
    Ok(chosen)
}

/// Dissociativity via pattern counting: each element in turn must not
/// be reachable as `s - (signed sum of the previous ones)`. Exact, and
/// polynomial in `N` instead of `3^|L|`.
pub fn is_dissociated_by_counting(lambda: &[u64], s: &ZnSet) -> bool {
    let n = s.modulus();
    let mut sym = s.clone();
    sym.insert(0);
    let sym = sym.union(&sym.neg()).unwrap();
    let mut counts = PatternCounts::new(n);
    for &l in lambda {
        if counts.extensions_into(&sym, l % n) != 0 {
            return false;
        }
        counts.add_frequency(l % n);
    }
    true
}

/// True iff no candidate outside `lambda` can be added while keeping
/// `S`-dissociativity (used to re-check greedy maximality).
pub fn is_maximal_within(
    lambda: &[u64],
    candidates: &[u64],
    s: &ZnSet,
) -> Result<bool, DissociationError> {
    let n = s.modulus();
    let mut sym = s.clone();
    sym.insert(0);
    let sym = sym.union(&sym.neg()).unwrap();
    let mut counts = PatternCounts::new(n);
    for &l in lambda {
        counts.add_frequency(l % n);
    }
    for &g in candidates {
        let g = g % n;
        if lambda.contains(&g) || lambda.contains(&((n - g) % n)) {
            continue;
        }
        if counts.extensions_into(&sym, g) == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentReport {
    pub bound: f64,
    pub worst: f64,
    pub worst_witness: Option<(u64, u64)>,
    pub pass: bool,
    /// `L subset of <Lambda> + S`, when the span fits under the cap.
    pub span_check: Option<bool>,
    pub intersection_size: u64,
}

/// Verify that a maximal dissociated subset controls the whole large
/// set: every `g` in `script_l` satisfies `|1 - e(gx/N)| <= 2^5 |G|
/// kappa^-1 delta'/delta + 2^4 |L| eps` on `B(G,delta') ∩ B(L,eps)`,
/// and structurally `script_l ⊆ <lambda> + S`.
#[allow(clippy::too_many_arguments)]
pub fn containment_check(
    n: u64,
    gamma: &[u64],
    delta: &crate::ratio::Ratio,
    delta_prime: &crate::ratio::Ratio,
    lambda: &[u64],
    eps: &crate::ratio::Ratio,
    kappa: f64,
    script_l: &[u64],
    cap: usize,
    tol: f64,
) -> Result<ContainmentReport, DissociationError> {
    use crate::bohr::{bohr_measure, bohr_set, BohrSpec};

    let outer = BohrSpec::uniform(n, gamma, delta.clone());
    let beta = bohr_measure(&outer);
    let table = crate::fourier::transform_measure(&beta);
    let mut s_freqs = table.spectrum(kappa, tol);
    symmetrize(&mut s_freqs, n);
    let s_set = ZnSet::from_elems(n, s_freqs.iter().copied());

    // Hypotheses: lambda S-dissociated and maximal within script_l.
    // The counting route is exact and has no pattern-count cap.
    if !is_dissociated_by_counting(lambda, &s_set) {
        return Err(DissociationError::HypothesisViolation(
            "lambda is not S-dissociated".into(),
        ));
    }
    if !is_maximal_within(lambda, script_l, &s_set)? {
        return Err(DissociationError::HypothesisViolation(
            "lambda is not maximal within the large spectrum".into(),
        ));
    }

    let mut lambda_sym = lambda.to_vec();
    symmetrize(&mut lambda_sym, n);
    let lambda_nonzero: Vec<u64> = lambda_sym.iter().copied().filter(|&l| l != 0).collect();

    let inner_g = bohr_set(&BohrSpec::uniform(n, gamma, delta_prime.clone()));
    let inner_l = if lambda_nonzero.is_empty() {
        ZnSet::full(n)
    } else {
        bohr_set(&BohrSpec::uniform(n, &lambda_nonzero, eps.clone()))
    };
    let inter = inner_g.intersect(&inner_l).unwrap();

    let bound = 32.0 * gamma.len() as f64 / kappa
        * crate::ratio::to_f64(&(delta_prime / delta))
        + 16.0 * lambda.len() as f64 * crate::ratio::to_f64(eps);

    let mut worst = 0.0f64;
    let mut witness = None;
    for &g in script_l {
        for x in inter.iter() {
            let v = crate::fourier::one_minus_character_abs(n, g, x);
            if v > worst {
                worst = v;
                witness = Some((g, x));
            }
        }
    }

    let span_check = match span(n, lambda, cap) {
        Ok(sp) => {
            let reach = sp.sumset(&s_set).unwrap();
            Some(script_l.iter().all(|&g| reach.contains(g)))
        }
        Err(DissociationError::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };

    Ok(ContainmentReport {
        bound,
        worst,
        worst_witness: witness,
        pass: worst <= bound + tol,
        span_check,
        intersection_size: inter.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_set(n: u64) -> ZnSet {
        ZnSet::singleton(n, 0)
    }

    #[test]
    fn pair_is_dissociated_mod_seven() {
        let ctx = DissociationContext::new(&zero_set(7), &[1, 2], DEFAULT_CAP);
        assert!(is_dissociated(&ctx).unwrap().is_dissociated());
    }

    #[test]
    fn triple_with_relation_is_not() {
        // 1 + 2 - 3 = 0.
        let ctx = DissociationContext::new(&zero_set(7), &[1, 2, 3], DEFAULT_CAP);
        match is_dissociated(&ctx).unwrap() {
            Verdict::Violated { pattern, sum } => {
                assert_eq!(sum, 0);
                let recon: i64 = pattern
                    .iter()
                    .zip([1i64, 2, 3])
                    .map(|(&s, l)| s as i64 * l)
                    .sum();
                assert_eq!(recon.rem_euclid(7), 0);
                assert!(pattern.iter().any(|&s| s != 0));
            }
            v => panic!("expected violation, got {v:?}"),
        }
    }

    #[test]
    fn empty_set_is_vacuously_dissociated() {
        let ctx = DissociationContext::new(&zero_set(7), &[], DEFAULT_CAP);
        assert!(is_dissociated(&ctx).unwrap().is_dissociated());
    }

    #[test]
    fn cap_is_enforced() {
        let lambda: Vec<u64> = (1..=20).collect();
        let ctx = DissociationContext::new(&zero_set(1009), &lambda, 16);
        assert!(matches!(
            is_dissociated(&ctx),
            Err(DissociationError::CapExceeded { len: 20, cap: 16 })
        ));
    }

    #[test]
    fn span_covers_z9() {
        let sp = span(9, &[1, 3], DEFAULT_CAP).unwrap();
        assert_eq!(sp.len(), 9);
    }

    #[test]
    fn span_trivial_cases() {
        assert_eq!(span(5, &[], DEFAULT_CAP).unwrap().elems(), vec![0]);
        assert_eq!(span(5, &[1], DEFAULT_CAP).unwrap().elems(), vec![0, 1, 4]);
    }

    #[test]
    fn greedy_drops_dependent_candidate() {
        let s = zero_set(7);
        let lam = greedy_maximal_dissociated(&[1, 2, 3], &s, DEFAULT_CAP).unwrap();
        assert_eq!(lam, vec![1, 2]);
        assert!(is_maximal_within(&lam, &[1, 2, 3], &s).unwrap());
    }

    #[test]
    fn greedy_rejects_candidates_inside_s() {
        let s = ZnSet::from_elems(11, [0, 1, 10]);
        let lam = greedy_maximal_dissociated(&[1, 10], &s, DEFAULT_CAP).unwrap();
        assert!(lam.is_empty());
    }

    #[test]
    fn greedy_single_candidate_outside_s() {
        let s = zero_set(11);
        let lam = greedy_maximal_dissociated(&[4], &s, DEFAULT_CAP).unwrap();
        assert_eq!(lam, vec![4]);
    }

    #[test]
    fn greedy_agrees_with_enumeration() {
        // Every greedy prefix must be dissociated per the enumerative
        // test, and the result maximal.
        let n = 64;
        let s = ZnSet::from_elems(n, [0, 1, 63, 5, 59]);
        let candidates: Vec<u64> = (1..n).collect();
        let lam = greedy_maximal_dissociated(&candidates, &s, DEFAULT_CAP).unwrap();
        let ctx = DissociationContext::new(&s, &lam, DEFAULT_CAP);
        assert!(is_dissociated(&ctx).unwrap().is_dissociated());
        assert!(is_maximal_within(&lam, &candidates, &s).unwrap());
        // Cross-check maximality with the enumerative oracle.
        for &g in &candidates {
            if lam.contains(&g) || lam.contains(&(n - g)) {
                continue;
            }
            let mut ext = lam.clone();
            ext.push(g);
            let ctx = DissociationContext::new(&s, &ext, DEFAULT_CAP);
            assert!(
                !is_dissociated(&ctx).unwrap().is_dissociated(),
                "greedy missed {g}"
            );
        }
    }

    #[test]
    fn witness_is_first_in_counter_order() {
        // lambda = {2, 3} in Z/5: counter order tests patterns over
        // (2,3): c=1 -> (+,0) sum 2; c=2 -> (-,0) sum 3; c=3 -> (0,+)
        // sum 3 ... with S = {3} the first hit is c=2: pattern (-1, 0).
        let s = ZnSet::from_elems(5, [3]);
        let ctx = DissociationContext::new(&s, &[2, 3], DEFAULT_CAP);
        match is_dissociated(&ctx).unwrap() {
            Verdict::Violated { pattern, sum } => {
                // S symmetrized to {0,2,3}; first hit is c=1: (+1,0) sum 2.
                assert_eq!(pattern, vec![1, 0]);
                assert_eq!(sum, 2);
            }
            v => panic!("expected violation, got {v:?}"),
        }
    }
}
