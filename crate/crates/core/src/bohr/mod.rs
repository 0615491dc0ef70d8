//! Bohr sets: exact construction, regularity, approximate annihilators,
//! and progression extraction.

pub mod progression;
pub mod regular;
mod spec;

pub use progression::{extract_progression, ExtractReport, MultiProgression, ProgressionError};
pub use regular::{is_regular, regular_value, NormProfile, RegularityError};
pub use spec::{
    approximate_annihilator_check, bohr_measure, bohr_set, norm_numer, size_lower_bound_check,
    symmetrize, AnnihilatorReport, BohrSpec, SizeBoundReport,
};
