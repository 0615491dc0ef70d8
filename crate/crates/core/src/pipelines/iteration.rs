//! One step of the structure dichotomy.
//!
//! Inputs: a regular host `B(G, delta)`, a set `A` inside it with
//! relative density `alpha`, and a companion set `B` with
//! `|A+B| <= K|B|`. The step narrows the host, collects the large
//! spectrum `L = {g : |(1_A dbeta)^(g)| >= alpha/(2 sqrt K)}`, and
//! extracts a greedy maximal dissociated subset. A small subset lands
//! in the certified branch; a large one funds a simultaneous density
//! increment.

use crate::bohr::{bohr_measure, bohr_set, regular_value, symmetrize, BohrSpec};
use crate::dissociation::greedy_maximal_dissociated;
use crate::fourier;
use crate::ratio::{self, Ratio};
use crate::report::IneqRecord;
use crate::riesz::{density_increment, IncrementOptions, IncrementReport};
use crate::zn::ZnSet;
use num::BigInt;
use serde::Serialize;

use super::PipelineError;

#[derive(Clone, Debug)]
pub struct IterationOptions {
    pub dissociation_cap: usize,
    pub tol: f64,
}

impl Default for IterationOptions {
    fn default() -> Self {
        IterationOptions {
            dissociation_cap: crate::dissociation::DEFAULT_CAP,
            tol: crate::TOL,
        }
    }
}

/// Certified containment `B(G, delta'') ∩ B(L, eps) ⊆ (A-A)+(B-B)`.
#[derive(Clone, Debug, Serialize)]
pub struct StructureCertificate {
    pub gamma: Vec<u64>,
    pub delta_second: String,
    pub delta_second_f64: f64,
    pub lambda: Vec<u64>,
    pub eps: String,
    pub eps_f64: f64,
    pub verified: bool,
    /// First element of the intersection outside the difference body.
    pub failure_witness: Option<u64>,
    pub intersection_size: u64,
    pub difference_body_size: u64,
}

impl StructureCertificate {
    pub fn intersection_spec(&self, n: u64) -> BohrSpec {
        let d = ratio::parse_ratio(&self.delta_second).expect("stored exact");
        let e = ratio::parse_ratio(&self.eps).expect("stored exact");
        let a = BohrSpec::uniform(n, &self.gamma, d);
        if self.lambda.is_empty() {
            a
        } else {
            a.merged(&BohrSpec::uniform(n, &self.lambda, e))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum IterationOutcome {
    /// Certified structure; terminal.
    Case1(StructureCertificate),
    /// Density increment; the loop continues on `(gamma_prime, delta'')`.
    Case2 {
        gamma_prime: Vec<u64>,
        delta_second: String,
        new_density: f64,
        report: IncrementReport,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub alpha: f64,
    pub k_used: f64,
    pub host_size: u64,
    pub spectrum_size: usize,
    pub lambda_size: usize,
    pub branch_threshold: f64,
    pub case: u8,
    pub delta_prime: String,
    pub warnings: Vec<String>,
    pub ineqs: Vec<IneqRecord>,
}

/// Run one dichotomy step. `a` must lie inside `B(gamma, delta)`
/// (pre-established regular); `k` bounds `|A+B|/|B|`.
pub fn iteration_step(
    a: &ZnSet,
    b: &ZnSet,
    gamma: &[u64],
    delta: &Ratio,
    k: &Ratio,
    opts: &IterationOptions,
) -> Result<(IterationOutcome, StepRecord), PipelineError> {
    let n = a.modulus();
    let tol = opts.tol;
    let mut warnings = Vec::new();
    let mut ineqs = Vec::new();

    if b.is_empty() || a.is_empty() {
        return Err(PipelineError::InvalidInput("A and B must be nonempty".into()));
    }
    // Pre: |A+B| <= K|B|, exact.
    let ab = a.sumset(b)?;
    let k_min = Ratio::new(BigInt::from(ab.len()), BigInt::from(b.len()));
    if *k < k_min {
        return Err(PipelineError::HypothesisViolation(format!(
            "|A+B|/|B| = {} exceeds supplied K = {}",
            ratio::format_ratio(&k_min),
            ratio::format_ratio(k)
        )));
    }
    let k_f = ratio::to_f64(k);

    let host_spec = BohrSpec::uniform(n, gamma, delta.clone());
    let host = bohr_set(&host_spec);
    if !a.is_subset(&host)? {
        return Err(PipelineError::HypothesisViolation(
            "A must lie inside the host Bohr set".into(),
        ));
    }
    let alpha = a.len() as f64 / host.len() as f64;
    let log_term = 1.0 + (1.0 / alpha).ln();

    // Narrowing radius: 2 (alpha / 4 sqrt(K) (1+|G|))^(2^6) * delta,
    // clamped at 1/N, then regularized.
    let base = alpha / (4.0 * k_f.sqrt() * (1.0 + gamma.len() as f64));
    let target = 2.0 * base.powi(64) * ratio::to_f64(delta);
    let (clamped, did_clamp) = ratio::clamp_radius(&ratio::from_f64_exact(target.max(0.0)), n);
    if did_clamp {
        warnings.push(format!(
            "narrowing radius underflowed ({target:.3e}); clamped at 1/N"
        ));
    }
    let delta_prime = regular_value(n, gamma, &clamped)?;

    // Large spectrum of 1_A dbeta and the obstruction spectrum.
    let beta = bohr_measure(&host_spec);
    let coeffs = fourier::weighted_indicator_transform(a, &beta)?;
    let threshold = alpha / (2.0 * k_f.sqrt());
    let script_l: Vec<u64> = coeffs.spectrum(threshold, tol);

    let narrow = BohrSpec::uniform(n, gamma, delta_prime.clone());
    let s_table = fourier::transform_measure(&bohr_measure(&narrow));
    let mut s_freqs = s_table.spectrum(1.0 / 3.0, tol);
    symmetrize(&mut s_freqs, n);
    let s_set = ZnSet::from_elems(n, s_freqs);

    // Candidates by descending coefficient, frequency ascending on ties.
    let mut candidates = script_l.clone();
    candidates.sort_by(|&x, &y| {
        coeffs
            .abs(y)
            .partial_cmp(&coeffs.abs(x))
            .unwrap()
            .then(x.cmp(&y))
    });
    let lambda = greedy_maximal_dissociated(&candidates, &s_set, opts.dissociation_cap)?;

    let branch_threshold = 256.0 * k_f.powf(0.75) * log_term;
    ineqs.push(IneqRecord::leq(
        "iteration-lambda-vs-threshold",
        lambda.len() as f64,
        branch_threshold,
        tol,
    ));

    if lambda.len() as f64 <= branch_threshold + tol {
        // Certified branch.
        let dd_exact = &delta_prime
            / Ratio::from_integer(BigInt::from(1024 * (1 + gamma.len() as u64)));
        let (delta_second, c1) = ratio::clamp_radius(&dd_exact, n);
        if c1 {
            warnings.push("delta'' clamped at 1/N".into());
        }
        let eps_target = 1.0 / (32768.0 * k_f * log_term);
        let (eps, c2) = ratio::clamp_radius(&ratio::from_f64_exact(eps_target), n);
        if c2 {
            warnings.push(format!("eps underflowed ({eps_target:.3e}); clamped at 1/N"));
        }

        let mut lambda_sym = lambda.clone();
        symmetrize(&mut lambda_sym, n);
        let lambda_nonzero: Vec<u64> =
            lambda_sym.iter().copied().filter(|&l| l != 0).collect();
        let inter = {
            let g_part = bohr_set(&BohrSpec::uniform(n, gamma, delta_second.clone()));
            if lambda_nonzero.is_empty() {
                g_part
            } else {
                let l_part = bohr_set(&BohrSpec::uniform(n, &lambda_nonzero, eps.clone()));
                g_part.intersect(&l_part)?
            }
        };
        let body = a.diffset(a)?.sumset(&b.diffset(b)?)?;
        let verified = inter.is_subset(&body)?;
        let failure_witness = if verified {
            None
        } else {
            inter.iter().find(|&x| !body.contains(x))
        };
        let cert = StructureCertificate {
            gamma: gamma.to_vec(),
            delta_second: ratio::format_ratio(&delta_second),
            delta_second_f64: ratio::to_f64(&delta_second),
            lambda: lambda.clone(),
            eps: ratio::format_ratio(&eps),
            eps_f64: ratio::to_f64(&eps),
            verified,
            failure_witness,
            intersection_size: inter.len(),
            difference_body_size: body.len(),
        };
        let record = StepRecord {
            alpha,
            k_used: k_f,
            host_size: host.len(),
            spectrum_size: script_l.len(),
            lambda_size: lambda.len(),
            branch_threshold,
            case: 1,
            delta_prime: ratio::format_ratio(&delta_prime),
            warnings,
            ineqs,
        };
        Ok((IterationOutcome::Case1(cert), record))
    } else {
        // Increment branch: trim the dissociated set to the stated cap,
        // dropping the lowest-coefficient tail, then symmetrize.
        let cap2 = (512.0 * k_f.powf(0.75) * log_term).floor() as usize;
        let trimmed: Vec<u64> = lambda.iter().copied().take(cap2.max(1)).collect();
        let mut lam_sym = trimmed.clone();
        symmetrize(&mut lam_sym, n);
        let lam_sym: Vec<u64> = lam_sym.into_iter().filter(|&l| l != 0).collect();
        let rho = 1.0 / (2.0 * k_f.sqrt());
        let report = density_increment(
            n,
            gamma,
            delta,
            a,
            rho,
            &delta_prime,
            &lam_sym,
            &IncrementOptions {
                phi_cap_override: None,
                tol,
            },
        )?;
        let record = StepRecord {
            alpha,
            k_used: k_f,
            host_size: host.len(),
            spectrum_size: script_l.len(),
            lambda_size: lambda.len(),
            branch_threshold,
            case: 2,
            delta_prime: ratio::format_ratio(&delta_prime),
            warnings,
            ineqs,
        };
        let gamma_prime = report.gamma_prime.clone();
        let delta_second = report.delta_second.clone();
        let new_density = report.achieved;
        Ok((
            IterationOutcome::Case2 {
                gamma_prime,
                delta_second,
                new_density,
                report,
            },
            record,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{ratio, ratio_int};

    #[test]
    fn whole_group_terminates_in_case1() {
        // A = B = Z/NZ, K = 1: the spectrum degenerates and the trivial
        // certificate covers the whole group.
        let n = 16u64;
        let g = ZnSet::full(n);
        let (out, rec) = iteration_step(
            &g,
            &g,
            &[0],
            &ratio_int(1),
            &ratio_int(1),
            &IterationOptions::default(),
        )
        .unwrap();
        assert_eq!(rec.case, 1);
        match out {
            IterationOutcome::Case1(cert) => {
                assert!(cert.verified);
                assert_eq!(cert.difference_body_size, n);
            }
            _ => panic!("expected case 1"),
        }
    }

    #[test]
    fn evens_certificate() {
        // A = B = evens in Z/16: spectrum {0, 8}, lambda = {8}, and
        // B({8}, eps) = evens = (A-A)+(B-B).
        let n = 16u64;
        let evens = ZnSet::from_elems(n, (0..n).filter(|x| x % 2 == 0));
        let (out, rec) = iteration_step(
            &evens,
            &evens,
            &[0],
            &ratio_int(1),
            &ratio_int(1),
            &IterationOptions::default(),
        )
        .unwrap();
        assert_eq!(rec.case, 1);
        assert_eq!(rec.spectrum_size, 2);
        match out {
            IterationOutcome::Case1(cert) => {
                assert_eq!(cert.lambda, vec![8]);
                assert!(cert.verified);
                assert_eq!(cert.intersection_size, 8);
            }
            _ => panic!("expected case 1"),
        }
    }

    #[test]
    fn oversized_k_claim_rejected() {
        let n = 16u64;
        let a = ZnSet::from_elems(n, [0, 1, 2, 3]);
        let res = iteration_step(
            &a,
            &a,
            &[0],
            &ratio_int(1),
            &ratio(1, 2),
            &IterationOptions::default(),
        );
        assert!(matches!(res, Err(PipelineError::HypothesisViolation(_))));
    }
}
