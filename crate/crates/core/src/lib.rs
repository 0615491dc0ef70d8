//! Exact machinery for sumset structure analysis at desk scale.
//!
//! The crate is organized around a handful of interlocking toolkits:
//!
//! * [`zn`] — exact set algebra over `Z/NZ`, `Z`, `Z^d` and `Z[a]`
//!   (a formal transcendental), plus Freiman-isomorphism verification
//!   and greedy Ruzsa covering.
//! * [`fourier`] — discrete Fourier analysis on `Z/NZ`: transforms of
//!   functions and measures, large spectra, convolution.
//! * [`bohr`] — Bohr sets with exact rational radii, regularity testing
//!   and regular-value search, approximate annihilators, and
//!   multidimensional progression extraction.
//! * [`dissociation`] — `S`-dissociativity, spans of signed sums and
//!   greedy maximal dissociated subsets.
//! * [`riesz`] — Riesz products, the integral estimate for dissociated
//!   spectra, and the simultaneous density-increment step.
//! * [`pipelines`] — the iteration lemma, the sumset structure loop,
//!   the Freiman progression pipeline and the Konyagin–Łaba pipeline,
//!   each ending in an exhaustively verified certificate.
//!
//! Everything that decides a certificate is computed in exact integer
//! or rational arithmetic; floating point appears only in Fourier
//! coefficients and is always compared with the additive tolerance
//! [`TOL`].

pub mod bohr;
pub mod dissociation;
pub mod exec;
pub mod fourier;
pub mod pipelines;
pub mod ratio;
pub mod report;
pub mod riesz;
pub mod rng;
pub mod zn;

/// Global additive comparison tolerance for floating-point thresholds.
pub const TOL: f64 = 1e-9;

pub use ratio::Ratio;
