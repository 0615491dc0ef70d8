//! End-to-end structure pipelines.
//!
//! * [`iteration`] — one step of the dichotomy: either a certified Bohr
//!   intersection inside `(A-A)+(B-B)`, or a density increment on a
//!   narrower Bohr set.
//! * [`theorem13`] — the iteration loop over translates, ending in an
//!   exhaustively verified structure certificate.
//! * [`model`] — the randomized Freiman model: embed bounded integer
//!   sets into `Z/NZ` by a verified k-isomorphism.
//! * [`freiman`] — small-doubling integer sets inside a multidimensional
//!   progression, via model + certificate + progression extraction +
//!   covering pullback.
//! * [`kl`] — sum-with-dilate structure over `Z[a]`: an arithmetic
//!   progression inside `(A-A) + a.(A-A)` plus iterated growth
//!   certificates.

pub mod freiman;
pub mod iteration;
pub mod kl;
pub mod model;
pub mod theorem13;

pub use freiman::{freiman_pipeline, FreimanOptions, FreimanResult};
pub use iteration::{iteration_step, IterationOptions, IterationOutcome, StepRecord, StructureCertificate};
pub use kl::{iterated_sumset_cover, kl_pipeline, CoverResult, KlOptions, KlResult};
pub use model::{model_embed, ModelOptions, ModelResult};
pub use theorem13::{theorem13_pipeline, verify_certificate, Theorem13Options, Theorem13Result};

use thiserror::Error;

#[derive(Error, Debug)]
pub enum PipelineError {
    #[error(transparent)]
    Zn(#[from] crate::zn::ZnError),
    #[error(transparent)]
    Regularity(#[from] crate::bohr::RegularityError),
    #[error(transparent)]
    Progression(#[from] crate::bohr::ProgressionError),
    #[error(transparent)]
    Dissociation(#[from] crate::dissociation::DissociationError),
    #[error(transparent)]
    Riesz(#[from] crate::riesz::RieszError),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("iteration cap of {cap} steps exceeded")]
    StepCapExceeded { cap: usize },
    #[error("density increment stalled at step {step} (gain {gain:.3e})")]
    Stalled { step: usize, gain: f64 },
    #[error("no admissible multiplier after {draws} draws")]
    QBudgetExhausted { draws: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
