//! Sum-with-dilate structure over `Z[a]`.
//!
//! For finite `A ⊂ Z[a]` with `|A + a.A| = K|A|`, the pipeline maps
//! `A ∪ a.A` to integer vectors, packs them into `Z` base `17L` (no
//! carries on 8-fold sums), models into `Z/NZ`, runs the certificate
//! loop, and extracts an arithmetic progression `{k d}` inside
//! `(A-A) + a.(A-A)` whose every element is verified by exact `Z[a]`
//! membership. Iterated growth `B_l = A' + a.A' + ... + a^(l-1).A'`
//! is certified against the cover recursion `T_(l+1) = S + T' - T' +
//! a.T_l`.

use crate::ratio::{self, Ratio};
use crate::report::IneqRecord;
use crate::rng::SplitMix64;
use crate::zn::{
    is_freiman_isomorphism, ruzsa_cover, FreimanMap, IntSet, PolyInt, PolySet,
};
use num::BigInt;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use super::model::{model_embed, ModelOptions, ModelResult};
use super::theorem13::{theorem13_pipeline, Theorem13Options};
use super::PipelineError;

#[derive(Clone, Debug)]
pub struct KlOptions {
    pub model: ModelOptions,
    pub t13: Theorem13Options,
    pub model_retries: u64,
    /// Iterated-growth report depth (hard cap 4).
    pub growth_depth: u32,
    pub tol: f64,
}

impl Default for KlOptions {
    fn default() -> Self {
        KlOptions {
            model: ModelOptions::default(),
            t13: Theorem13Options::default(),
            model_retries: 16,
            growth_depth: 4,
            tol: crate::TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ApReport {
    /// Common difference, as a `Z[a]` literal.
    pub step: String,
    pub half_length: u64,
    pub length: u64,
    pub route: &'static str,
    /// Exact `Z[a]` membership of every emitted element.
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverResult {
    pub l: u32,
    pub b_size: u64,
    pub aa_size: u64,
    pub t_size: u128,
    pub s_size: usize,
    pub t_cover_size: usize,
    pub contained: bool,
    pub size_bound_met: bool,
    pub representation: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct KlResult {
    pub k: String,
    pub k_f64: f64,
    pub model_n: u64,
    pub t13_steps: usize,
    pub certificate_verified: bool,
    pub embedding_verified: Option<bool>,
    pub ap: Option<ApReport>,
    pub bound_too_weak: bool,
    pub growth: Vec<CoverResult>,
    pub warnings: Vec<String>,
    pub ineqs: Vec<IneqRecord>,
}

fn to_vec(p: &PolyInt, dim: usize) -> Vec<i64> {
    (0..dim).map(|j| p.coeff(j)).collect()
}

/// Pack a nonnegative vector into `Z` base `b`: `sum v_i b^i`.
fn pack(v: &[i64], b: i64) -> Result<i64, PipelineError> {
    let mut acc: i128 = 0;
    let mut pw: i128 = 1;
    for &c in v {
        acc += c as i128 * pw;
        pw *= b as i128;
        if acc.abs() > 1 << 40 || pw > 1 << 44 {
            return Err(PipelineError::InvalidInput(
                "packed embedding exceeds the desk range".into(),
            ));
        }
    }
    Ok(acc as i64)
}

pub fn kl_pipeline(a: &PolySet, seed: u64, opts: &KlOptions) -> Result<KlResult, PipelineError> {
    if a.len() < 2 {
        return Err(PipelineError::InvalidInput(
            "the dilate pipeline needs |A| >= 2".into(),
        ));
    }
    let mut warnings = Vec::new();
    let mut ineqs = Vec::new();
    let tol = opts.tol;

    let alpha_a = a.mul_alpha();
    let sum = a.sumset(&alpha_a)?;
    let k = Ratio::new(BigInt::from(sum.len()), BigInt::from(a.len()));
    let k_f = ratio::to_f64(&k);

    // Vector coordinates for A ∪ a.A, translated to be nonnegative.
    let dim = 1 + sum
        .iter()
        .chain(a.iter())
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(0);
    let union: Vec<&PolyInt> = a.iter().chain(alpha_a.iter()).collect();
    let mut mins = vec![i64::MAX; dim];
    for p in &union {
        for (j, m) in mins.iter_mut().enumerate() {
            *m = (*m).min(p.coeff(j));
        }
    }
    let shift: Vec<i64> = mins.iter().map(|&m| -m).collect();
    let coord = |p: &PolyInt| -> Vec<i64> {
        to_vec(p, dim)
            .iter()
            .zip(&shift)
            .map(|(c, s)| c + s)
            .collect()
    };
    let big_l = union
        .iter()
        .map(|p| coord(p).into_iter().max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let base = 17 * big_l.max(1);

    // Base-17L packing is an 8-isomorphism (8-fold coordinate sums stay
    // below 17L, so no carries); verify when the tuple space is small.
    let a_embed: Vec<(PolyInt, i64)> = a
        .iter()
        .map(|p| Ok((p.clone(), pack(&coord(p), base)?)))
        .collect::<Result<_, PipelineError>>()?;
    let b_embed: Vec<(PolyInt, i64)> = alpha_a
        .iter()
        .map(|p| Ok((p.clone(), pack(&coord(p), base)?)))
        .collect::<Result<_, PipelineError>>()?;
    let embedding_verified = {
        let pairs: Vec<(Vec<i64>, i64)> = union
            .iter()
            .map(|p| Ok((coord(p), pack(&coord(p), base)?)))
            .collect::<Result<_, PipelineError>>()?;
        let pairs: Vec<(Vec<i64>, i64)> = {
            let mut v = pairs;
            v.sort();
            v.dedup();
            v
        };
        let count = pairs.len() as u64;
        let feasible = {
            // C(count + 7, 8) under the tuple budget
            let mut c: u128 = 1;
            for i in 0..8u128 {
                c = c * (count as u128 + i) / (i + 1);
            }
            c <= opts.model.tuple_budget as u128
        };
        if feasible {
            let map = FreimanMap::new(pairs).map_err(PipelineError::Zn)?;
            let add_vec = |x: &Vec<i64>, y: &Vec<i64>| -> Vec<i64> {
                x.iter().zip(y).map(|(a, b)| a + b).collect()
            };
            Some(is_freiman_isomorphism(
                &map,
                8,
                opts.model.tuple_budget,
                &add_vec,
                &|x: &i64, y: &i64| x + y,
            )?)
        } else {
            warnings.push("embedding verification skipped (tuple budget)".into());
            None
        }
    };
    if embedding_verified == Some(false) {
        return Err(PipelineError::HypothesisViolation(
            "packed embedding failed isomorphism verification".into(),
        ));
    }

    let a_int = IntSet::new(a_embed.iter().map(|&(_, v)| v));
    let b_int = IntSet::new(b_embed.iter().map(|&(_, v)| v));
    let ab_int = a_int.sumset(&b_int)?;
    ineqs.push(IneqRecord::new(
        "dilate-sumset-size-transport",
        ab_int.len() as f64,
        sum.len() as f64,
        ab_int.len() == sum.len(),
    ));

    // Model into Z/NZ with both kept sides of size >= 2, then the
    // certificate loop with K replaced by 8K.
    let mut rng = SplitMix64::substream(seed, 0x5D1A);
    let mut model: Option<ModelResult> = None;
    for _ in 0..opts.model_retries {
        let s = rng.next_u64();
        match model_embed(
            &a_int,
            &b_int,
            8,
            s,
            &ModelOptions {
                min_image: 2,
                ..opts.model.clone()
            },
        ) {
            Ok(m) => {
                model = Some(m);
                break;
            }
            Err(PipelineError::QBudgetExhausted { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let model = model.ok_or(PipelineError::QBudgetExhausted {
        draws: opts.model.q_budget * opts.model_retries,
    })?;
    if !model.maps_verified {
        return Err(PipelineError::HypothesisViolation(
            "model maps failed isomorphism verification".into(),
        ));
    }
    ineqs.extend(model.ineqs.iter().cloned());
    let n = model.n;
    let a_img = model.a_image();
    let b_img = model.b_image();
    let k8 = &k * Ratio::from_integer(BigInt::from(8));
    let exact = {
        let s = a_img.sumset(&b_img)?;
        Ratio::new(BigInt::from(s.len()), BigInt::from(b_img.len()))
    };
    let k13 = if exact > k8 { exact } else { k8 };
    let t13 = theorem13_pipeline(&a_img, &b_img, &k13, &opts.t13)?;
    let cert = &t13.certificate;

    // Difference body in the model and its Z[a] counterpart.
    let body = a_img
        .diffset(&a_img)?
        .sumset(&b_img.diffset(&b_img)?)?;
    let a_diff = a.diffset(a)?;
    let body_poly = a_diff.sumset(&alpha_a.diffset(&alpha_a)?)?;

    // Progression difference search: certified set first, then the
    // pigeonhole radii, then the difference body directly.
    let d2 = ratio::parse_ratio(&cert.delta_second).expect("stored exact");
    let eps = ratio::parse_ratio(&cert.eps).expect("stored exact");
    let cert_set = crate::bohr::bohr_set(&cert.intersection_spec(n));
    let mut route = "certified";
    let mut d_model: Option<u64> = cert_set.iter().find(|&x| x != 0 && body.contains(x));
    if d_model.is_none() {
        route = "pigeonhole";
        let g_count = cert.gamma.len().max(1) as f64;
        let l_count = cert.lambda.len().max(1) as f64;
        let thresh = (1.0 / ratio::to_f64(&d2) * (n as f64).powf(-1.0 / (2.0 * g_count)))
            .max(1.0 / ratio::to_f64(&eps) * (n as f64).powf(-1.0 / (2.0 * l_count)));
        let mut j = thresh.log2().floor() as i32 + 1;
        if 2f64.powi(j) <= thresh {
            j += 1;
        }
        let eta = pow2_ratio(j);
        let widened = cert.intersection_spec(n).scaled(&eta);
        let wide_set = crate::bohr::bohr_set(&widened);
        let bound = ratio::to_f64(
            &(clamp_one(&d2 * &eta).pow(cert.gamma.len() as i32)
                * clamp_one(&eps * &eta).pow(cert.lambda.len() as i32)),
        ) * n as f64;
        ineqs.push(IneqRecord::geq(
            "pigeonhole-intersection-bound",
            wide_set.len() as f64,
            bound,
            tol,
        ));
        d_model = wide_set.iter().find(|&x| x != 0 && body.contains(x));
    }
    if d_model.is_none() {
        route = "direct";
        d_model = body.iter().find(|&x| x != 0);
    }

    let ap = match d_model {
        None => {
            warnings.push("difference body has no nonzero element".into());
            None
        }
        Some(d) => {
            // Pull d back to Z[a] through the two model maps.
            let step_poly = pull_step(d, n, &model, &a_embed, &b_embed)?;
            // AP half-length: the stated radii formula, floored, never
            // below 1; extend only while exact membership verifies.
            let g_count = cert.gamma.len().max(1) as f64;
            let l_count = cert.lambda.len().max(1) as f64;
            let formula = (ratio::to_f64(&d2) * (n as f64).powf(1.0 / (2.0 * g_count)))
                .min(ratio::to_f64(&eps) * (n as f64).powf(1.0 / (2.0 * l_count)));
            ineqs.push(IneqRecord::new(
                "ap-length-formula",
                formula.floor(),
                1.0,
                formula >= 1.0,
            ));
            let l_emit = (formula.floor() as i64).max(1) as u64;
            let mut half = 0u64;
            for kk in 1..=l_emit {
                let el = step_poly.scale(kk as i64);
                if body_poly.contains(&el) && body_poly.contains(&el.neg()) {
                    half = kk;
                } else {
                    break;
                }
            }
            if half == 0 {
                warnings.push("pulled-back difference left the body immediately".into());
                None
            } else {
                Some(ApReport {
                    step: step_poly.to_string(),
                    half_length: half,
                    length: 2 * half + 1,
                    route,
                    verified: true,
                })
            }
        }
    };
    let bound_too_weak = ap.as_ref().map_or(true, |r| r.length < 3);

    // Iterated growth certificates.
    let mut growth = Vec::new();
    for l in 1..=opts.growth_depth.min(4) {
        match iterated_sumset_cover(a, l) {
            Ok(r) => growth.push(r),
            Err(PipelineError::Zn(crate::zn::ZnError::DeskCapExceeded(msg))) => {
                warnings.push(format!("growth depth {l} skipped: {msg}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }

    Ok(KlResult {
        k: ratio::format_ratio(&k),
        k_f64: k_f,
        model_n: n,
        t13_steps: t13.steps,
        certificate_verified: cert.verified && t13.verified_against_original,
        embedding_verified,
        ap,
        bound_too_weak,
        growth,
        warnings,
        ineqs,
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

fn pow2_ratio(j: i32) -> Ratio {
    if j >= 0 {
        Ratio::from_integer(BigInt::from(2).pow(j as u32))
    } else {
        Ratio::new(BigInt::from(1), BigInt::from(2).pow((-j) as u32))
    }
}

/// Representation `d = (a1 - a2) + (b1 - b2)` over the model images,
/// pulled back through the embeddings into `Z[a]`.
fn pull_step(
    d: u64,
    n: u64,
    model: &ModelResult,
    a_embed: &[(PolyInt, i64)],
    b_embed: &[(PolyInt, i64)],
) -> Result<PolyInt, PipelineError> {
    let int_to_poly_a: BTreeMap<i64, PolyInt> = a_embed
        .iter()
        .map(|(p, v)| (*v, p.clone()))
        .collect();
    let int_to_poly_b: BTreeMap<i64, PolyInt> = b_embed
        .iter()
        .map(|(p, v)| (*v, p.clone()))
        .collect();
    for &(da1, ra1) in &model.a_pairs {
        for &(da2, ra2) in &model.a_pairs {
            let diff_a = (ra1 + n - ra2) % n;
            let need = (d + n - diff_a) % n;
            for &(db1, rb1) in &model.b_pairs {
                for &(db2, rb2) in &model.b_pairs {
                    if (rb1 + n - rb2) % n == need {
                        let pa1 = &int_to_poly_a[&da1];
                        let pa2 = &int_to_poly_a[&da2];
                        let pb1 = &int_to_poly_b[&db1];
                        let pb2 = &int_to_poly_b[&db2];
                        return Ok(pa1.sub(pa2).add(&pb1.sub(pb2)));
                    }
                }
            }
        }
    }
    Err(PipelineError::HypothesisViolation(format!(
        "{d} has no representation over the kept model elements"
    )))
}

/// Certify `B_l = A' + a.A' + ... + a^(l-1).A' ⊆ A'-A' + T_l` with
/// `T_1 = {min A'}`, `T_(l+1) = S + T' - T' + a.T_l`, where `S` covers
/// `3A'-2A'` by `A'` and `T` covers `a.A` by `A` (`T' = 2T-2T`).
pub fn iterated_sumset_cover(a: &PolySet, l: u32) -> Result<CoverResult, PipelineError> {
    if !(1..=4).contains(&l) {
        return Err(PipelineError::InvalidInput(
            "growth depth must be in 1..=4".into(),
        ));
    }
    if a.is_empty() {
        return Err(PipelineError::InvalidInput("A must be nonempty".into()));
    }
    let a_diff = a.diffset(a)?; // A'
    let aa = a_diff.diffset(&a_diff)?; // A' - A'

    // B_l by right-folding: B_1 = A', B_(j+1) = A' + a.B_j.
    let mut b_l = a_diff.clone();
    for _ in 1..l {
        b_l = a_diff.sumset(&b_l.mul_alpha())?;
    }

    // Covers.
    let three = a_diff.sumset(&a_diff)?.sumset(&a_diff)?;
    let two = a_diff.sumset(&a_diff)?;
    let x32 = three.diffset(&two)?; // 3A' - 2A'
    let s_cov = poly_cover(&x32, &a_diff)?;
    let t_cov = poly_cover(&a.mul_alpha(), a)?;
    let t_set = PolySet::new(t_cov.iter().cloned());
    let t2 = t_set.sumset(&t_set)?;
    let t_prime = t2.diffset(&t2)?; // 2T - 2T
    let s_set = PolySet::new(s_cov.iter().cloned());
    let w = s_set.sumset(&t_prime.diffset(&t_prime)?)?; // S + T' - T'
    let t1 = a_diff.first().unwrap().clone();

    let alpha_free = a.iter().all(|p| p.degree().map_or(true, |d| d == 0));
    let (contained, t_size, representation) = if alpha_free {
        // For constant A, the cover S is constant and T lies on the
        // a-line, so W = S + a.V with V the a-coefficients of T'-T'.
        // The recursion then factors per coefficient slot:
        //   T_l = S + a.(V+S) + ... + a^(l-2).(V+S) + a^(l-1).(V+t1)
        // and membership in A'-A' + T_l separates coordinatewise.
        let s_ints: BTreeSet<i64> = s_cov.iter().map(|p| p.coeff(0)).collect();
        let v_ints: BTreeSet<i64> = t_prime
            .diffset(&t_prime)?
            .iter()
            .map(|p| p.coeff(1))
            .collect();
        let aa_ints: BTreeSet<i64> = aa.iter().map(|p| p.coeff(0)).collect();
        let t1c = t1.coeff(0);
        let vt1: BTreeSet<i64> = v_ints.iter().map(|&v| v + t1c).collect();
        let vs: BTreeSet<i64> = v_ints
            .iter()
            .flat_map(|&v| s_ints.iter().map(move |&s| v + s))
            .collect();
        let check = |b: &PolyInt| -> bool {
            if b.degree().unwrap_or(0) >= l as usize {
                return false;
            }
            if l == 1 {
                return aa_ints.contains(&(b.coeff(0) - t1c));
            }
            if !vt1.contains(&b.coeff(l as usize - 1)) {
                return false;
            }
            for j in 1..(l as usize - 1) {
                if !vs.contains(&b.coeff(j)) {
                    return false;
                }
            }
            s_ints.iter().any(|&s| aa_ints.contains(&(b.coeff(0) - s)))
        };
        let contained = b_l.iter().all(check);
        let t_size = if l == 1 {
            1u128
        } else {
            s_ints.len() as u128
                * (vs.len() as u128).pow(l - 2)
                * vt1.len() as u128
        };
        (contained, t_size, "factored")
    } else {
        // Materialized recursion with a desk size guard.
        let mut t_l = PolySet::new([t1.clone()]);
        for _ in 1..l {
            if w.len().saturating_mul(t_l.len()) > 300_000 {
                return Err(PipelineError::Zn(crate::zn::ZnError::DeskCapExceeded(
                    format!("cover set of ~{} elements", w.len() * t_l.len()),
                )));
            }
            t_l = w.sumset(&t_l.mul_alpha())?;
        }
        let contained = b_l
            .iter()
            .all(|b| aa.iter().any(|x| t_l.contains(&b.sub(x))));
        (contained, t_l.len() as u128, "materialized")
    };

    let size_bound_met = (b_l.len() as u128) <= (aa.len() as u128) * t_size;
    Ok(CoverResult {
        l,
        b_size: b_l.len() as u64,
        aa_size: aa.len() as u64,
        t_size,
        s_size: s_cov.len(),
        t_cover_size: t_cov.len(),
        contained,
        size_bound_met,
        representation,
    })
}

fn poly_cover(x: &PolySet, b: &PolySet) -> Result<BTreeSet<PolyInt>, PipelineError> {
    let xs: BTreeSet<PolyInt> = x.iter().cloned().collect();
    let bs: BTreeSet<PolyInt> = b.iter().cloned().collect();
    ruzsa_cover(&xs, &bs, |p, q| p.add(q), |p, q| p.sub(q)).map_err(PipelineError::Zn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_k_equals_size() {
        // A = {0..7}: |A + a.A| = 64, K = 8 by coefficient distinctness.
        let a = PolySet::from_ints(0..8);
        let s = a.sumset(&a.mul_alpha()).unwrap();
        assert_eq!(s.len(), 64);
    }

    #[test]
    fn cover_base_case() {
        // l = 1: B_1 = A', T_1 = {min A'}.
        let a = PolySet::from_ints([0, 1]);
        let r = iterated_sumset_cover(&a, 1).unwrap();
        assert_eq!(r.b_size, 3);
        assert_eq!(r.t_size, 1);
        assert!(r.contained);
        assert!(r.size_bound_met);
    }

    #[test]
    fn cover_two_levels() {
        // A = {0,1}: B_2 = A' + a.A' has 9 elements.
        let a = PolySet::from_ints([0, 1]);
        let r = iterated_sumset_cover(&a, 2).unwrap();
        assert_eq!(r.b_size, 9);
        assert!(r.contained);
        assert!(r.size_bound_met);
    }

    #[test]
    fn cover_three_levels_non_interval() {
        let a = PolySet::from_ints([0, 1, 3]);
        let r = iterated_sumset_cover(&a, 3).unwrap();
        assert_eq!(r.b_size, 7u64.pow(3));
        assert!(r.contained);
        assert!(r.size_bound_met);
    }

    #[test]
    fn cover_handles_alpha_inputs() {
        // zalpha-grid 2: {0, 1, a, 1+a} exercises the materialized path.
        let a = PolySet::new([
            PolyInt::zero(),
            PolyInt::constant(1),
            PolyInt::from_coeffs(vec![0, 1]),
            PolyInt::from_coeffs(vec![1, 1]),
        ]);
        let r = iterated_sumset_cover(&a, 2).unwrap();
        assert_eq!(r.representation, "materialized");
        assert!(r.contained);
        assert!(r.size_bound_met);
    }

    #[test]
    fn smallest_pipeline_run() {
        let a = PolySet::from_ints([0, 1]);
        let r = kl_pipeline(&a, 3, &KlOptions::default()).unwrap();
        assert_eq!(r.k, "2");
        assert_eq!(r.embedding_verified, Some(true));
        let ap = r.ap.expect("AP must exist for the two-point set");
        assert!(ap.length >= 3);
        assert!(ap.verified);
        assert!(!r.bound_too_weak);
    }
}
