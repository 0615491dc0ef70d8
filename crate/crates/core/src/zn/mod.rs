//! Exact arithmetic and set algebra over `Z/NZ`, `Z`, `Z^d` and `Z[a]`,
//! Freiman isomorphism verification, and greedy Ruzsa covering.

mod cover;
mod freiman;
mod intset;
mod poly;
pub mod text;
mod vecset;
mod znset;

pub use cover::{ruzsa_cover, ruzsa_cover_int, verify_cover};
pub use freiman::{
    is_freiman_isomorphism, is_freiman_isomorphism_int, is_freiman_isomorphism_mod, FreimanMap,
    DEFAULT_TUPLE_BUDGET,
};
pub use intset::{doubling_constant as doubling_constant_int, IntSet};
pub use poly::{PolyInt, PolySet};
pub use text::SetLiteral;
pub use vecset::VecSet;
pub use znset::{doubling_constant, ZnSet};

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ZnError {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("map is not injective")]
    NotInjective,
    #[error("tuple budget exceeded: {needed} multisets > budget {budget}")]
    TupleBudgetExceeded { needed: u128, budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("desk-scale cap exceeded: {0}")]
    DeskCapExceeded(String),
}
