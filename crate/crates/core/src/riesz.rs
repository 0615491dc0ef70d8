//! Riesz products over symmetric frequency sets and the simultaneous
//! density-increment step.
//!
//! For a hermitian assignment `w` on a symmetric set `L`, the product
//! runs over the pairs `{l, -l}`:
//!
//! ```text
//! p_w(x) = prod (1 + Re(w(l) e(lx/N)))
//! ```
//!
//! Each factor lies in `[0, 2]`, so `p_w >= 0` pointwise, and when the
//! pair representatives are classically dissociated the product has
//! uniform mean 1.

use crate::bohr::{bohr_measure, bohr_set, is_regular, regular_value, BohrSpec};
use crate::dissociation::is_dissociated_by_counting;
use crate::exec;
use crate::fourier::{self, DensityMeasure};
use crate::ratio::{self, Ratio};
use crate::report::IneqRecord;
use crate::rng;
use crate::zn::ZnSet;
use num::complex::Complex64;
use num::BigInt;
use serde::Serialize;
use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum RieszError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error(transparent)]
    Regularity(#[from] crate::bohr::RegularityError),
}

/// Hermitian map from a symmetric frequency set into the unit disc,
/// stored one entry per `{l, -l}` pair.
#[derive(Clone, Debug)]
pub struct RieszAssignment {
    n: u64,
    /// Representatives in `(0, N/2]`; a self-paired `N/2` carries a
    /// real weight.
    reps: Vec<(u64, Complex64)>,
}

impl RieszAssignment {
    /// Build from per-frequency weights; the domain must be symmetric,
    /// `w(-l) = conj(w(l))`, and `|w| <= 1`. Frequency 0 is rejected.
    pub fn new(n: u64, entries: &[(u64, Complex64)]) -> Result<Self, RieszError> {
        let mut map = std::collections::BTreeMap::new();
        for &(l, w) in entries {
            let l = l % n;
            if l == 0 {
                return Err(RieszError::HypothesisViolation(
                    "trivial frequency cannot join a Riesz product".into(),
                ));
            }
            if w.norm() > 1.0 + 1e-12 {
                return Err(RieszError::HypothesisViolation(format!(
                    "|w({l})| = {} exceeds 1",
                    w.norm()
                )));
            }
            if map.insert(l, w).is_some() {
                return Err(RieszError::HypothesisViolation(format!(
                    "duplicate frequency {l}"
                )));
            }
        }
        let mut reps = Vec::new();
        for (&l, &w) in &map {
            let neg = (n - l) % n;
            if l == neg {
                // Self-paired (N/2): hermitian forces a real weight.
                if w.im.abs() > 1e-12 {
                    return Err(RieszError::HypothesisViolation(format!(
                        "self-paired frequency {l} needs a real weight"
                    )));
                }
                reps.push((l, w));
            } else if l < neg {
                let wn = map.get(&neg).ok_or_else(|| {
                    RieszError::HypothesisViolation(format!(
                        "frequency set not symmetric: missing {neg}"
                    ))
                })?;
                if (w - wn.conj()).norm() > 1e-9 {
                    return Err(RieszError::HypothesisViolation(format!(
                        "not hermitian at pair ({l}, {neg})"
                    )));
                }
                reps.push((l, w));
            }
        }
        Ok(RieszAssignment { n, reps })
    }

    /// All-zero assignment on the pairs of `lambda` (product is 1).
    pub fn zero(n: u64, lambda: &[u64]) -> Result<Self, RieszError> {
        let entries: Vec<(u64, Complex64)> = lambda
            .iter()
            .map(|&l| (l % n, Complex64::new(0.0, 0.0)))
            .collect();
        RieszAssignment::new(n, &entries)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// Pair representatives with their weights.
    pub fn reps(&self) -> &[(u64, Complex64)] {
        &self.reps
    }

    /// The full symmetric frequency set (both signs), sorted.
    pub fn lambda(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .reps
            .iter()
            .flat_map(|&(l, _)| [l, (self.n - l) % self.n])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Symmetric set size `|L|` (pairs count twice, `N/2` once).
    pub fn lambda_len(&self) -> usize {
        self.lambda().len()
    }
}

/// Evaluate the Riesz product pointwise on `Z/NZ`.
pub fn riesz_product(assignment: &RieszAssignment) -> Vec<f64> {
    let n = assignment.n;
    let reps = assignment.reps.clone();
    exec::map_indexed(n as usize, |x| {
        let mut p = 1.0;
        for &(l, w) in &reps {
            let ch = fourier::character(n, l, x as u64);
            p *= 1.0 + (w * ch).re;
        }
        p
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma32Report {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Integral estimate for a dissociated Riesz product:
/// `int p_w dbeta_{G, delta+delta''} <= 1 + 2^7 (|G||L| delta'/delta)^(1/2)`.
///
/// Hypotheses checked: `B(G, delta)` regular; the pair representatives
/// of the assignment `Spec_{1/3}(beta_{G,delta'})`-dissociated;
/// `delta'' <= delta'`.
pub fn lemma32_check(
    n: u64,
    gamma: &[u64],
    delta: &Ratio,
    delta_prime: &Ratio,
    delta_second: &Ratio,
    assignment: &RieszAssignment,
    tol: f64,
) -> Result<Lemma32Report, RieszError> {
    if delta_second > delta_prime {
        return Err(RieszError::HypothesisViolation(
            "delta'' must not exceed delta'".into(),
        ));
    }
    let outer = BohrSpec::uniform(n, gamma, delta.clone());
    if !is_regular(&outer).map_err(RieszError::Regularity)? {
        return Err(RieszError::HypothesisViolation(
            "base Bohr set is not regular".into(),
        ));
    }
    let narrow = BohrSpec::uniform(n, gamma, delta_prime.clone());
    let s_table = fourier::transform_measure(&bohr_measure(&narrow));
    let mut s_freqs = s_table.spectrum(1.0 / 3.0, tol);
    crate::bohr::symmetrize(&mut s_freqs, n);
    let s_set = ZnSet::from_elems(n, s_freqs);
    let rep_freqs: Vec<u64> = assignment.reps.iter().map(|&(l, _)| l).collect();
    if !is_dissociated_by_counting(&rep_freqs, &s_set) {
        return Err(RieszError::HypothesisViolation(
            "assignment pairs are not Spec_{1/3}-dissociated".into(),
        ));
    }

    let p = riesz_product(assignment);
    let widened = BohrSpec::uniform(n, gamma, clamp_one(delta + delta_second));
    let beta = bohr_measure(&widened);
    let lhs = beta.integrate(&p);
    let ratio_dd = ratio::to_f64(&(delta_prime / delta));
    let rhs = 1.0
        + 128.0 * (gamma.len() as f64 * assignment.lambda_len() as f64 * ratio_dd).sqrt();
    Ok(Lemma32Report {
        lhs,
        rhs,
        pass: lhs <= rhs + tol,
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

#[derive(Clone, Debug, Serialize)]
pub struct IncrementReport {
    pub gamma_prime: Vec<u64>,
    pub delta_second: String,
    pub delta_second_f64: f64,
    /// `||1_A * beta_{G', delta''}||_inf`
    pub achieved: f64,
    /// `alpha (1 + rho^2 |L| / 2^12 (1 + log(1/alpha)))`
    pub target: f64,
    pub met: bool,
    /// Selected pair representatives.
    pub phi_selected: Vec<u64>,
    pub alpha: f64,
    /// Whether `|L|` met the stated lower bound (reported, not fatal).
    pub lambda_size_met: bool,
    pub lipschitz_pass: bool,
    pub warnings: Vec<String>,
    pub ineqs: Vec<IneqRecord>,
}

pub struct IncrementOptions {
    /// Override for the selection-size bound (defaults to the stated
    /// `rho |L| / 2^5 (1 + log(1/alpha))`, floored at 1).
    pub phi_cap_override: Option<usize>,
    pub tol: f64,
}

impl Default for IncrementOptions {
    fn default() -> Self {
        IncrementOptions {
            phi_cap_override: None,
            tol: crate::TOL,
        }
    }
}

/// Simultaneous density increment: given a dissociated symmetric set of
/// large coefficients of `1_A dbeta_{G,delta}`, choose phases aligning
/// every coefficient, select a small subset of the induced cosine
/// factors maximizing the Riesz-weighted mass of `A`, and report the
/// sup of `1_A * beta_{G', delta''}` against the target increment.
///
/// The subset selection is exhaustive up to 12 factors and greedy
/// beyond; the report records achieved vs. target rather than assuming
/// the existential bound.
pub fn density_increment(
    n: u64,
    gamma: &[u64],
    delta: &Ratio,
    a: &ZnSet,
    rho: f64,
    delta_prime: &Ratio,
    lambda: &[u64],
    opts: &IncrementOptions,
) -> Result<IncrementReport, RieszError> {
    let tol = opts.tol;
    let mut warnings = Vec::new();
    let mut ineqs = Vec::new();
    if !(0.0 < rho && rho <= 1.0) {
        return Err(RieszError::HypothesisViolation(format!(
            "rho = {rho} outside (0, 1]"
        )));
    }

    let host_spec = BohrSpec::uniform(n, gamma, delta.clone());
    if !is_regular(&host_spec).map_err(RieszError::Regularity)? {
        return Err(RieszError::HypothesisViolation(
            "host Bohr set is not regular".into(),
        ));
    }
    let host = bohr_set(&host_spec);
    if !a.is_subset(&host).unwrap_or(false) {
        return Err(RieszError::HypothesisViolation(
            "A must lie inside the host Bohr set".into(),
        ));
    }
    if a.is_empty() {
        return Err(RieszError::HypothesisViolation("A is empty".into()));
    }
    let alpha = a.len() as f64 / host.len() as f64;
    let log_term = 1.0 + (1.0 / alpha).ln();

    // Symmetric lambda, coefficient condition |coef(l)| >= rho*alpha.
    let mut lam: Vec<u64> = lambda.iter().map(|&l| l % n).collect();
    lam.sort_unstable();
    lam.dedup();
    if lam.iter().any(|&l| l == 0) {
        return Err(RieszError::HypothesisViolation(
            "lambda must avoid the trivial frequency".into(),
        ));
    }
    for &l in &lam {
        if !lam.contains(&((n - l) % n)) {
            return Err(RieszError::HypothesisViolation(format!(
                "lambda not symmetric: missing -{l}"
            )));
        }
    }
    let beta = DensityMeasure::uniform_on(&host);
    let coeffs = fourier::weighted_indicator_transform(a, &beta).expect("same modulus");
    for &l in &lam {
        let c = coeffs.abs(l);
        if c < rho * alpha - tol {
            return Err(RieszError::HypothesisViolation(format!(
                "|coef({l})| = {c:.3e} below rho*alpha = {:.3e}",
                rho * alpha
            )));
        }
    }

    // delta' bracket with the desk clamp at 1/N.
    let base = rho * alpha / (2.0 * (1.0 + gamma.len() as f64));
    let u = base.powi(64) * ratio::to_f64(delta);
    let inv_n = 1.0 / n as f64;
    let (lo, hi) = ((2.0 * u).max(inv_n), (4.0 * u).max(inv_n));
    if 2.0 * u < inv_n {
        warnings.push(format!(
            "delta' bracket underflowed ({:.3e}); clamped at 1/N",
            2.0 * u
        ));
    }
    let dp = ratio::to_f64(delta_prime);
    if !(lo - tol..=hi + tol).contains(&dp) {
        return Err(RieszError::HypothesisViolation(format!(
            "delta' = {dp:.3e} outside clamped bracket [{lo:.3e}, {hi:.3e}]"
        )));
    }

    // Size hypothesis: reported, not enforced (desk instances are small).
    let required = 128.0 / rho * log_term;
    let lambda_size_met = lam.len() as f64 >= required;
    ineqs.push(IneqRecord::new(
        "increment-lambda-size",
        lam.len() as f64,
        required,
        lambda_size_met,
    ));
    if !lambda_size_met {
        warnings.push(format!(
            "|lambda| = {} below stated bound {required:.1}",
            lam.len()
        ));
    }

    // Dissociativity of the pair representatives w.r.t. Spec_{1/3} of
    // the narrowed measure.
    let narrow_spec = BohrSpec::uniform(n, gamma, delta_prime.clone());
    let s_table = fourier::transform_measure(&bohr_measure(&narrow_spec));
    let mut s_freqs = s_table.spectrum(1.0 / 3.0, tol);
    crate::bohr::symmetrize(&mut s_freqs, n);
    let s_set = ZnSet::from_elems(n, s_freqs);
    let reps_only: Vec<u64> = lam.iter().copied().filter(|&l| 2 * l <= n).collect();
    if !is_dissociated_by_counting(&reps_only, &s_set) {
        return Err(RieszError::HypothesisViolation(
            "lambda is not Spec_{1/3}-dissociated".into(),
        ));
    }

    // Phase choice: w(l) * coef(l) = |coef(l)|.
    let entries: Vec<(u64, Complex64)> = lam
        .iter()
        .map(|&l| {
            let c = coeffs.value(l);
            let w = if c.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                c.conj() / c.norm()
            };
            (l, w)
        })
        .collect();
    let assignment = RieszAssignment::new(n, &entries)?;
    let reps = assignment.reps().to_vec();

    // Candidate factors, one per pair; select at most `cap` of them
    // maximizing the Riesz-weighted mass of A under beta.
    let phi_cap = opts.phi_cap_override.unwrap_or_else(|| {
        ((rho * lam.len() as f64 / (32.0 * log_term)).floor() as usize).max(1)
    });
    let factors: Vec<(u64, Vec<f64>)> = reps
        .iter()
        .map(|&(l, w)| {
            let f = exec::map_indexed(n as usize, |x| {
                1.0 + (w * fourier::character(n, l, x as u64)).re
            });
            (l, f)
        })
        .collect();
    let weighted_mass = |subset: &[usize]| -> f64 {
        a.iter()
            .map(|x| {
                let mut p = beta.weight(x);
                for &i in subset {
                    p *= factors[i].1[x as usize];
                }
                p
            })
            .sum()
    };
    let selected: Vec<usize> = if factors.len() <= 12 {
        // Exhaustive over subsets of size <= cap, size then lex order;
        // strict improvement keeps the first (smallest) optimum.
        let mut best: (f64, Vec<usize>) = (weighted_mass(&[]), Vec::new());
        let m = factors.len();
        for mask in 1u32..(1 << m) {
            if (mask.count_ones() as usize) > phi_cap {
                continue;
            }
            let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let v = weighted_mass(&subset);
            if v > best.0 + tol
                || ((v - best.0).abs() <= tol && better_order(&subset, &best.1))
            {
                best = (v, subset);
            }
        }
        best.1
    } else {
        let mut chosen: Vec<usize> = Vec::new();
        let mut current = weighted_mass(&[]);
        while chosen.len() < phi_cap {
            let mut cand: Option<(f64, usize)> = None;
            for i in 0..factors.len() {
                if chosen.contains(&i) {
                    continue;
                }
                let mut trial = chosen.clone();
                trial.push(i);
                let v = weighted_mass(&trial);
                if cand.as_ref().map_or(true, |&(cv, _)| v > cv + tol) {
                    cand = Some((v, i));
                }
            }
            match cand {
                Some((v, i)) if v > current + tol => {
                    chosen.push(i);
                    current = v;
                }
                _ => break,
            }
        }
        chosen.sort_unstable();
        chosen
    };

    let phi_selected: Vec<u64> = selected.iter().map(|&i| factors[i].0).collect();
    let lambda_prime: Vec<u64> = phi_selected
        .iter()
        .flat_map(|&l| [l, (n - l) % n])
        .collect();
    let mut gamma_prime: Vec<u64> = gamma.iter().copied().chain(lambda_prime).collect();
    gamma_prime.sort_unstable();
    gamma_prime.dedup();

    // delta'' from the stated lower bound, regularized for G'.
    let dd_target = base.powi(64) * ratio::to_f64(delta);
    let (dd_clamped, clamped) = ratio::clamp_radius(&ratio::from_f64_exact(dd_target.max(0.0)), n);
    if clamped {
        warnings.push(format!(
            "delta'' target underflowed ({dd_target:.3e}); clamped at 1/N"
        ));
    }
    let delta_second = regular_value(n, &gamma_prime, &dd_clamped)?;
    let dd_f64 = ratio::to_f64(&delta_second);

    // Width-vs-increment condition from the construction.
    let width_lhs = 32.0 * lam.len() as f64 * dd_f64;
    let width_rhs = alpha * rho * rho / (1024.0 * log_term);
    ineqs.push(IneqRecord::new(
        "increment-width-bound",
        width_lhs,
        width_rhs,
        width_lhs <= width_rhs + tol,
    ));

    // Achieved sup of 1_A * beta_{G', delta''}.
    let inner_spec = BohrSpec::uniform(n, &gamma_prime, delta_second.clone());
    let inner_measure = bohr_measure(&inner_spec);
    let conv = fourier::convolve_fn_measure(&fourier::indicator(a), &inner_measure);
    let achieved = fourier::sup_norm(&conv);
    let target = alpha * (1.0 + rho * rho * lam.len() as f64 / (4096.0 * log_term));
    let met = achieved >= target - tol;
    ineqs.push(IneqRecord::new(
        "increment-achieved-vs-target",
        achieved,
        target,
        met,
    ));

    // Pointwise Lipschitz control of the selected product on the new
    // Bohr set, via the telescoping bound with per-prefix products.
    let lipschitz_pass = lipschitz_check(
        n,
        &factors,
        &selected,
        &reps,
        &inner_measure,
        dd_f64,
        tol,
        &mut warnings,
    );

    Ok(IncrementReport {
        gamma_prime,
        delta_second: ratio::format_ratio(&delta_second),
        delta_second_f64: dd_f64,
        achieved,
        target,
        met,
        phi_selected,
        alpha,
        lambda_size_met,
        lipschitz_pass,
        warnings,
        ineqs,
    })
}

fn better_order(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// `|p(x+y) - p(x)| <= 2^4 delta'' sum_j p_j(x)` for `y` in the new
/// Bohr set, where `p_j` is the product with factor `j` removed, the
/// earlier ones evaluated at `x+y` and the later ones at `x`.
#[allow(clippy::too_many_arguments)]
fn lipschitz_check(
    n: u64,
    factors: &[(u64, Vec<f64>)],
    selected: &[usize],
    _reps: &[(u64, Complex64)],
    inner: &DensityMeasure,
    delta_second: f64,
    tol: f64,
    warnings: &mut Vec<String>,
) -> bool {
    if selected.is_empty() {
        return true;
    }
    let ys: Vec<u64> = inner.support().iter().collect();
    let sample: Vec<u64> = if ys.len() * n as usize > 1 << 22 {
        warnings.push("lipschitz check sampled to 64 shifts".into());
        ys.iter().copied().take(64).collect()
    } else {
        ys
    };
    for &y in &sample {
        for x in 0..n {
            let px = product_at(factors, selected, x);
            let pxy = product_at(factors, selected, (x + y) % n);
            let mut rhs = 0.0;
            for (j, _) in selected.iter().enumerate() {
                let mut term = 1.0;
                for (i, &fi) in selected.iter().enumerate() {
                    if i < j {
                        term *= factors[fi].1[((x + y) % n) as usize];
                    } else if i > j {
                        term *= factors[fi].1[x as usize];
                    }
                }
                rhs += term;
            }
            if (pxy - px).abs() > 16.0 * delta_second * rhs + tol {
                return false;
            }
        }
    }
    true
}

fn product_at(factors: &[(u64, Vec<f64>)], selected: &[usize], x: u64) -> f64 {
    selected
        .iter()
        .map(|&i| factors[i].1[x as usize])
        .product()
}

/// Deterministic random hermitian assignment for tests and suites.
pub fn random_assignment(
    n: u64,
    reps: &[u64],
    seed: u64,
) -> Result<RieszAssignment, RieszError> {
    let mut g = rng::SplitMix64::new(seed);
    let mut entries = Vec::new();
    for &l in reps {
        let r = g.unit_f64();
        let th = 2.0 * std::f64::consts::PI * g.unit_f64();
        let l = l % n;
        let w = if l == (n - l) % n {
            Complex64::new(2.0 * r - 1.0, 0.0)
        } else {
            Complex64::from_polar(r, th)
        };
        entries.push((l, w));
        let neg = (n - l) % n;
        if neg != l {
            entries.push((neg, w.conj()));
        }
    }
    RieszAssignment::new(n, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;
    use crate::TOL;

    #[test]
    fn zero_assignment_gives_constant_one() {
        let a = RieszAssignment::zero(16, &[1, 15]).unwrap();
        let p = riesz_product(&a);
        assert!(p.iter().all(|&v| (v - 1.0).abs() < TOL));
    }

    #[test]
    fn single_pair_cosine() {
        // w = 1 on {l, -l}: p(x) = 1 + cos(2 pi l x / N); uniform mean 1.
        let n = 20u64;
        let a = RieszAssignment::new(
            n,
            &[(3, Complex64::new(1.0, 0.0)), (17, Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let p = riesz_product(&a);
        for x in 0..n {
            let expect = 1.0 + (2.0 * std::f64::consts::PI * 3.0 * x as f64 / n as f64).cos();
            assert!((p[x as usize] - expect).abs() < TOL);
        }
        let mean: f64 = p.iter().sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < TOL);
    }

    #[test]
    fn dissociated_pairs_have_mean_one() {
        // {1,3} classically dissociated mod 16: all signed sums nonzero.
        let n = 16u64;
        let a = RieszAssignment::new(
            n,
            &[
                (1, Complex64::new(1.0, 0.0)),
                (15, Complex64::new(1.0, 0.0)),
                (3, Complex64::new(1.0, 0.0)),
                (13, Complex64::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        let p = riesz_product(&a);
        assert!(p.iter().all(|&v| v >= -1e-12));
        let mean: f64 = p.iter().sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < TOL, "mean = {mean}");
    }

    #[test]
    fn nonnegativity_on_random_assignments() {
        for seed in 0..20 {
            let n = 64;
            let a = random_assignment(n, &[1, 5, 9, 32], seed).unwrap();
            let p = riesz_product(&a);
            assert!(p.iter().all(|&v| v >= -1e-12));
        }
    }

    #[test]
    fn hermitian_violations_rejected() {
        let n = 12u64;
        // Missing the partner frequency.
        assert!(RieszAssignment::new(n, &[(1, Complex64::new(0.5, 0.0))]).is_err());
        // Non-conjugate pair.
        assert!(RieszAssignment::new(
            n,
            &[
                (1, Complex64::new(0.0, 0.5)),
                (11, Complex64::new(0.0, 0.5))
            ]
        )
        .is_err());
        // Self-paired with imaginary part.
        assert!(RieszAssignment::new(n, &[(6, Complex64::new(0.0, 0.5))]).is_err());
        // Outside the disc.
        assert!(RieszAssignment::new(
            n,
            &[
                (1, Complex64::new(1.5, 0.0)),
                (11, Complex64::new(1.5, 0.0))
            ]
        )
        .is_err());
    }

    #[test]
    fn lemma32_zero_assignment() {
        // w = 0: lhs = 1 <= rhs always. Frequencies 40 and 51 sit far
        // outside Spec_{1/3} of the interval-like Bohr measure, so the
        // dissociativity hypothesis holds.
        let n = 128u64;
        let delta = regular_value(n, &[1], &ratio(1, 8)).unwrap();
        let a = RieszAssignment::zero(n, &[40, 88, 51, 77]).unwrap();
        let r = lemma32_check(n, &[1], &delta, &delta, &delta, &a, TOL).unwrap();
        assert!((r.lhs - 1.0).abs() < TOL);
        assert!(r.pass);
    }

    #[test]
    fn lemma32_empty_lambda() {
        let n = 64u64;
        let delta = regular_value(n, &[1], &ratio(1, 8)).unwrap();
        let a = RieszAssignment::new(n, &[]).unwrap();
        let r = lemma32_check(n, &[1], &delta, &ratio(1, 64), &ratio(1, 64), &a, TOL).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn lemma32_rejects_bad_widths() {
        let n = 64u64;
        let delta = regular_value(n, &[1], &ratio(1, 8)).unwrap();
        let a = RieszAssignment::zero(n, &[5, 59]).unwrap();
        let res = lemma32_check(n, &[1], &delta, &ratio(1, 64), &ratio(1, 32), &a, TOL);
        assert!(matches!(res, Err(RieszError::HypothesisViolation(_))));
    }

    #[test]
    fn increment_on_evens() {
        // A = evens in Z/16, G = {0}, delta = 1: the pair at 8 has
        // |coef(8)| = alpha = 1/2, and narrowing to G' = {0,8} puts
        // full mass on the evens: achieved sup = 1.
        let n = 16u64;
        let a: ZnSet = ZnSet::from_elems(n, (0..n).filter(|x| x % 2 == 0));
        let report = density_increment(
            n,
            &[0],
            &ratio(1, 1),
            &a,
            1.0,
            &ratio(1, 16),
            &[8],
            &IncrementOptions::default(),
        )
        .unwrap();
        assert_eq!(report.phi_selected, vec![8]);
        assert!(report.gamma_prime.contains(&8));
        assert!((report.achieved - 1.0).abs() < 1e-9, "{}", report.achieved);
        assert!(!report.lambda_size_met);
        assert!(report.achieved >= report.alpha - TOL);
        assert!(report.lipschitz_pass);
    }

    #[test]
    fn increment_rejects_small_coefficients() {
        // A = full host: all nontrivial coefficients vanish.
        let n = 16u64;
        let a = ZnSet::full(n);
        let res = density_increment(
            n,
            &[0],
            &ratio(1, 1),
            &a,
            0.5,
            &ratio(1, 16),
            &[8],
            &IncrementOptions::default(),
        );
        assert!(matches!(res, Err(RieszError::HypothesisViolation(_))));
    }

    #[test]
    fn increment_rejects_oversized_rho() {
        // rho so large that rho*alpha exceeds every nontrivial
        // coefficient: hypothesis violation.
        let n = 16u64;
        let a = ZnSet::from_elems(n, [0, 1, 2, 3, 4, 5, 8, 11]);
        let res = density_increment(
            n,
            &[0],
            &ratio(1, 1),
            &a,
            1.0,
            &ratio(1, 16),
            &[8],
            &IncrementOptions::default(),
        );
        assert!(matches!(res, Err(RieszError::HypothesisViolation(_))));
    }
}
