//! Discrete Fourier analysis on `Z/NZ` by direct summation.
//!
//! Conventions: for a function `f`, `f^(r) = (1/N) * sum_x f(x) e(-rx/N)`;
//! for a measure `mu`, `mu^(r) = sum_x mu(x) e(-rx/N)` (no `1/N`).
//! Inversion: `f(x) = sum_r f^(r) e(rx/N)`. Parseval:
//! `sum_r |f^(r)|^2 = (1/N) sum_x |f(x)|^2`. With these choices the
//! coefficient of a weighted indicator at `r = 0` is its total mass.
//!
//! Direct `O(N^2)` summation is the reference path; it is exact enough
//! (desk-scale `N`) that everything downstream compares against [`crate::TOL`].

use crate::exec;
use crate::zn::ZnSet;
use num::complex::Complex64;

/// `e(-2*pi*i*k/n)` for `k = 0..n`, shared by all transforms.
fn conj_roots(n: u64) -> Vec<Complex64> {
    let step = -2.0 * std::f64::consts::PI / n as f64;
    (0..n)
        .map(|k| Complex64::from_polar(1.0, step * k as f64))
        .collect()
}

/// Character value `e(r*x/N)`.
pub fn character(n: u64, r: u64, x: u64) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * ((r as u128 * x as u128) % n as u128) as f64 / n as f64;
    Complex64::from_polar(1.0, t)
}

/// `|1 - e(r*x/N)|`, the quantity annihilator checks bound.
pub fn one_minus_character_abs(n: u64, r: u64, x: u64) -> f64 {
    (Complex64::new(1.0, 0.0) - character(n, r, x)).norm()
}

/// Nonnegative weights on `Z/NZ` summing to 1, with exact support.
#[derive(Clone, Debug)]
pub struct DensityMeasure {
    n: u64,
    weights: Vec<f64>,
    support: ZnSet,
}

impl DensityMeasure {
    /// Normalizes the given nonnegative weights to total mass 1.
    pub fn from_weights(n: u64, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), n as usize);
        assert!(weights.iter().all(|&w| w >= 0.0), "weights must be >= 0");
        let total: f64 = weights.iter().sum();
        assert!(total > 0.0, "measure must have positive mass");
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let support = ZnSet::from_elems(
            n,
            weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(i, _)| i as u64),
        );
        let m = DensityMeasure {
            n,
            weights,
            support,
        };
        debug_assert!((m.total_mass() - 1.0).abs() < 1e-12);
        m
    }

    /// Uniform probability measure on a nonempty set.
    pub fn uniform_on(set: &ZnSet) -> Self {
        assert!(!set.is_empty(), "uniform measure needs a nonempty set");
        let n = set.modulus();
        let w = 1.0 / set.len() as f64;
        let mut weights = vec![0.0; n as usize];
        for x in set.iter() {
            weights[x as usize] = w;
        }
        DensityMeasure {
            n,
            weights,
            support: set.clone(),
        }
    }

    pub fn uniform(n: u64) -> Self {
        DensityMeasure::uniform_on(&ZnSet::full(n))
    }

    pub fn point_mass(n: u64, x: u64) -> Self {
        DensityMeasure::uniform_on(&ZnSet::singleton(n, x))
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn weight(&self, x: u64) -> f64 {
        self.weights[(x % self.n) as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support(&self) -> &ZnSet {
        &self.support
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Mass of a set under this measure.
    pub fn mass_of(&self, set: &ZnSet) -> f64 {
        set.iter().map(|x| self.weights[x as usize]).sum()
    }

    /// `integral f dmu`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.n as usize);
        self.support
            .iter()
            .map(|x| f[x as usize] * self.weights[x as usize])
            .sum()
    }
}

/// Fourier coefficients indexed by frequency `r = 0..N`.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    n: u64,
    coeffs: Vec<Complex64>,
}

impl CoeffTable {
    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn value(&self, r: u64) -> Complex64 {
        self.coeffs[(r % self.n) as usize]
    }

    pub fn abs(&self, r: u64) -> f64 {
        self.value(r).norm()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Frequencies with `|coeff| >= kappa - tol`, ascending.
    pub fn spectrum(&self, kappa: f64, tol: f64) -> Vec<u64> {
        assert!(kappa > 0.0, "spectrum threshold must be positive");
        (0..self.n)
            .filter(|&r| self.abs(r) >= kappa - tol)
            .collect()
    }
}

/// Averaged transform of a complex function.
pub fn transform(f: &[Complex64]) -> CoeffTable {
    let n = f.len() as u64;
    let roots = conj_roots(n);
    let coeffs = exec::map_indexed(n as usize, |r| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, v) in f.iter().enumerate() {
            acc += v * roots[((r as u64 * x as u64) % n) as usize];
        }
        acc / n as f64
    });
    CoeffTable { n, coeffs }
}

pub fn transform_real(f: &[f64]) -> CoeffTable {
    let fc: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&fc)
}

/// Summed transform of a measure (no `1/N`); only the support is scanned.
pub fn transform_measure(mu: &DensityMeasure) -> CoeffTable {
    let n = mu.modulus();
    let roots = conj_roots(n);
    let pts: Vec<(u64, f64)> = mu.support().iter().map(|x| (x, mu.weight(x))).collect();
    let coeffs = exec::map_indexed(n as usize, |r| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, w) in &pts {
            acc += w * roots[((r as u64 * x) % n) as usize];
        }
        acc
    });
    CoeffTable { n, coeffs }
}

/// Transform of `1_A dbeta`: `r -> sum_{x in A} beta(x) e(-rx/N)`.
/// The coefficient at `r = 0` is the relative density of `A` under `beta`.
pub fn weighted_indicator_transform(
    a: &ZnSet,
    beta: &DensityMeasure,
) -> Result<CoeffTable, crate::zn::ZnError> {
    if a.modulus() != beta.modulus() {
        return Err(crate::zn::ZnError::ModulusMismatch {
            left: a.modulus(),
            right: beta.modulus(),
        });
    }
    let n = a.modulus();
    let roots = conj_roots(n);
    let pts: Vec<(u64, f64)> = a
        .intersect(beta.support())?
        .iter()
        .map(|x| (x, beta.weight(x)))
        .collect();
    let coeffs = exec::map_indexed(n as usize, |r| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, w) in &pts {
            acc += w * roots[((r as u64 * x) % n) as usize];
        }
        acc
    });
    Ok(CoeffTable { n, coeffs })
}

/// `f(x) = sum_r f^(r) e(rx/N)`.
pub fn inverse_transform(table: &CoeffTable) -> Vec<Complex64> {
    let n = table.n;
    let roots = conj_roots(n);
    exec::map_indexed(n as usize, |x| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, c) in table.coeffs.iter().enumerate() {
            // e(rx/N) = conj(e(-rx/N))
            acc += c * roots[((r as u64 * x as u64) % n) as usize].conj();
        }
        acc
    })
}

/// `(f * mu)(x) = sum_y f(x-y) mu(y)`; for `f = 1_A` values lie in `[0,1]`.
pub fn convolve_fn_measure(f: &[f64], mu: &DensityMeasure) -> Vec<f64> {
    let n = mu.modulus();
    assert_eq!(f.len(), n as usize);
    let pts: Vec<(u64, f64)> = mu.support().iter().map(|y| (y, mu.weight(y))).collect();
    exec::map_indexed(n as usize, |x| {
        let mut acc = 0.0;
        for &(y, w) in &pts {
            let idx = (x as u64 + n - y % n) % n;
            acc += f[idx as usize] * w;
        }
        acc
    })
}

/// Averaged convolution of two functions: `(1/N) sum_y f(x-y) g(y)`.
pub fn convolve_fn_fn(f: &[f64], g: &[f64]) -> Vec<f64> {
    let n = f.len();
    assert_eq!(g.len(), n);
    exec::map_indexed(n, |x| {
        let mut acc = 0.0;
        for (y, gv) in g.iter().enumerate() {
            let idx = (x + n - y) % n;
            acc += f[idx] * gv;
        }
        acc / n as f64
    })
}

/// Convolution of probability measures is again a probability measure.
pub fn convolve_measures(mu: &DensityMeasure, nu: &DensityMeasure) -> DensityMeasure {
    let n = mu.modulus();
    assert_eq!(n, nu.modulus());
    let w = convolve_fn_measure(mu.weights(), nu);
    DensityMeasure::from_weights(n, w)
}

/// Indicator of a set as a dense `f64` vector.
pub fn indicator(set: &ZnSet) -> Vec<f64> {
    let mut f = vec![0.0; set.modulus() as usize];
    for x in set.iter() {
        f[x as usize] = 1.0;
    }
    f
}

pub fn sup_norm(f: &[f64]) -> f64 {
    f.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Index attaining the sup, lowest first (deterministic tie-break).
pub fn argmax(f: &[f64]) -> usize {
    let mut best = 0usize;
    for (i, &v) in f.iter().enumerate() {
        if v > f[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TOL;

    #[test]
    fn uniform_measure_transform_is_delta() {
        let mu = DensityMeasure::uniform(12);
        let t = transform_measure(&mu);
        assert!((t.abs(0) - 1.0).abs() < TOL);
        for r in 1..12 {
            assert!(t.abs(r) < TOL, "r={r}");
        }
    }

    #[test]
    fn point_mass_transform_is_flat() {
        let mu = DensityMeasure::point_mass(9, 0);
        let t = transform_measure(&mu);
        for r in 0..9 {
            assert!((t.abs(r) - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn two_point_indicator_transform() {
        // f = 1_A, A = {0,4}, N = 8: f^(r) = (1 + (-1)^r)/8.
        let a = ZnSet::from_elems(8, [0, 4]);
        let t = transform_real(&indicator(&a));
        for r in 0..8u64 {
            let expect = if r % 2 == 0 { 0.25 } else { 0.0 };
            assert!((t.abs(r) - expect).abs() < TOL, "r={r}");
        }
    }

    #[test]
    fn weighted_indicator_mass_at_zero() {
        let n = 16;
        let evens = ZnSet::from_elems(n, (0..n).step_by(2).map(|x| x as u64));
        let beta = DensityMeasure::uniform(n as u64);
        let t = weighted_indicator_transform(&evens, &beta).unwrap();
        assert!((t.value(0).re - 0.5).abs() < TOL);
        assert!((t.abs(8) - 0.5).abs() < TOL);
        for r in (1..16u64).filter(|&r| r != 8) {
            assert!(t.abs(r) < TOL, "r={r}");
        }
    }

    #[test]
    fn empty_indicator_is_zero() {
        let beta = DensityMeasure::uniform(8);
        let t = weighted_indicator_transform(&ZnSet::empty(8), &beta).unwrap();
        for r in 0..8 {
            assert!(t.abs(r) < TOL);
        }
    }

    #[test]
    fn spectrum_of_point_mass_is_everything() {
        let t = transform_measure(&DensityMeasure::point_mass(10, 0));
        assert_eq!(t.spectrum(0.5, TOL).len(), 10);
        let u = transform_measure(&DensityMeasure::uniform(10));
        assert_eq!(u.spectrum(0.5, TOL), vec![0]);
    }

    #[test]
    fn convolution_identities() {
        let n = 16u64;
        let a = ZnSet::from_elems(n, [1, 5, 6, 11]);
        let f = indicator(&a);
        // Identity: f * delta_0 = f.
        let conv = convolve_fn_measure(&f, &DensityMeasure::point_mass(n, 0));
        for x in 0..n as usize {
            assert!((conv[x] - f[x]).abs() < TOL);
        }
        // 1_G * mu = 1.
        let ones = indicator(&ZnSet::full(n));
        let conv = convolve_fn_measure(&ones, &DensityMeasure::uniform_on(&a));
        assert!(conv.iter().all(|&v| (v - 1.0).abs() < TOL));
        // 1_evens * uniform = 1/2 everywhere.
        let evens = ZnSet::from_elems(n, (0..n).filter(|x| x % 2 == 0));
        let conv = convolve_fn_measure(&indicator(&evens), &DensityMeasure::uniform(n));
        assert!(conv.iter().all(|&v| (v - 0.5).abs() < TOL));
    }

    #[test]
    fn convolution_theorem_numerically() {
        let n = 24u64;
        let a = ZnSet::from_elems(n, [0, 1, 5, 17, 20]);
        let b = ZnSet::from_elems(n, [2, 3, 9]);
        let f = indicator(&a);
        let mu = DensityMeasure::uniform_on(&b);
        let conv = convolve_fn_measure(&f, &mu);
        let lhs = transform_real(&conv);
        let fh = transform_real(&f);
        let muh = transform_measure(&mu);
        for r in 0..n {
            let rhs = fh.value(r) * muh.value(r);
            assert!((lhs.value(r) - rhs).norm() < TOL, "r={r}");
        }
    }

    #[test]
    fn quadruple_convolution_spectral_identity() {
        // f = 1_B * (1_A dbeta) * 1_{-B} * (1_{-A} dbeta) evaluated at 0
        // equals sum_r |1_B^(r)|^2 |(1_A dbeta)^(r)|^2, and dominates
        // alpha^2 beta / K when |A+B| <= K|B|.
        let n = 32u64;
        let a = ZnSet::from_elems(n, (0..8).map(|x| x as u64));
        let b = ZnSet::from_elems(n, (0..12).map(|x| x as u64));
        let host = ZnSet::full(n);
        let beta_measure = DensityMeasure::uniform_on(&host);
        let alpha = a.len() as f64 / host.len() as f64;
        let beta_density = b.len() as f64 / n as f64;

        // Direct convolution route, all in function normalization: the
        // weighted indicator g(x) = 1_A(x) beta(x) * N behaves as a
        // function whose average transform matches the measure transform.
        let mut g = vec![0.0; n as usize];
        for x in a.iter() {
            g[x as usize] = beta_measure.weight(x) * n as f64;
        }
        let ib = indicator(&b);
        let ib_neg = indicator(&b.neg());
        let mut g_neg = vec![0.0; n as usize];
        for x in 0..n as usize {
            g_neg[x] = g[((n as usize - x) % n as usize) % n as usize];
        }
        let conv = convolve_fn_fn(&convolve_fn_fn(&convolve_fn_fn(&ib, &g), &ib_neg), &g_neg);
        let f0 = conv[0];

        let bh = transform_real(&ib);
        let gh = weighted_indicator_transform(&a, &beta_measure).unwrap();
        let spectral: f64 = (0..n).map(|r| bh.abs(r).powi(2) * gh.abs(r).powi(2)).sum();
        assert!((f0 - spectral).abs() < TOL, "{f0} vs {spectral}");

        let ab = a.sumset(&b).unwrap();
        let k = ab.len() as f64 / b.len() as f64;
        assert!(f0 >= alpha * alpha * beta_density / k - TOL);
    }

    #[test]
    fn round_trip_and_parseval_random() {
        let mut rng = crate::rng::SplitMix64::new(99);
        for &n in &[1u64, 2, 17, 64, 129] {
            let f: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.unit_f64() - 0.5, rng.unit_f64() - 0.5))
                .collect();
            let t = transform(&f);
            let back = inverse_transform(&t);
            for (u, v) in f.iter().zip(&back) {
                assert!((u - v).norm() < 1e-9);
            }
            let lhs: f64 = t.coeffs().iter().map(|c| c.norm_sqr()).sum();
            let rhs: f64 = f.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
            assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0));
        }
    }
}
