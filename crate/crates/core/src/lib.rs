//! Closed-form higher derivatives of implicit functions.
//!
//! For `y(x)` defined by `f(x, y) = 0` with `f_y != 0`, this crate builds
//! `y^{(n)}` exactly in two shapes:
//!
//! * the Δ-form, a signed sum over vector partitions `α ∈ A_n` of products of
//!   blocks `Δ_l f_{y^r} = Σ_j (-1)^j binom(l,j) f_{x^{l-j} y^{r+j}} f_x^j f_y^{l-j}`
//!   over `f_y^{n+h}`;
//! * the elementary form, a signed sum over `γ ∈ B_n` of monomials in raw
//!   partials over `f_y^k`.
//!
//! Module map: [`partitions`] enumerates the index sets, [`coeffs`] computes
//! their coefficients, [`formula`] builds and renders formulas, [`numeric`]
//! evaluates them on derivative jets, and [`verify`] runs the identity suites
//! behind the CLI.

pub mod coeffs;
pub mod error;
pub mod formula;
pub mod numeric;
pub mod partitions;
pub mod verify;

pub use error::{Error, Result};
pub use implicit_jet_oracle as oracle;
pub use implicit_jet_symbolic::{ElemFormula, ElemMonomial, Multiplicities, VectorKey};
