//! Shared building blocks for implicit-derivative formulas.
//!
//! This crate holds the pieces that both the combinatorial construction
//! (`implicit-jet`) and the brute-force differentiator (`implicit-jet-oracle`)
//! need to agree on: sparse multiplicity maps over two-component vector keys,
//! and the elementary-form term types `ElemMonomial` / `ElemFormula`.
//!
//! It intentionally contains no enumeration or coefficient logic, so the
//! oracle can depend on it without seeing the construction it checks.

mod elementary;
mod multiplicities;

pub use elementary::{ElemFormula, ElemMonomial};
pub use multiplicities::{Multiplicities, VectorKey};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
