//! Exact certification of N-integrality for generalized hypergeometric
//! series `F_{α,β}`, their canonical q-coordinates and mirror maps.
//!
//! Modules, bottom-up:
//! - [`exact`]: rationals, p-adic valuations, Dwork's map, Morita's Γ_p;
//! - [`christol`]: the order ≼, ξ step functions, N-integrality and window tests;
//! - [`constants`]: λ_p, the Eisenstein constant, rescalings and root exponents;
//! - [`series`]: truncated exact power series (F, G, q, S, exp/log/roots, inversion);
//! - [`valuation`]: δ/Δ step functions and closed valuation formulas;
//! - [`congruence`]: formal congruences, the Frobenius-twisted expansion check and the full criterion.

pub mod christol;
pub mod congruence;
pub mod constants;
pub mod error;
pub mod exact;
pub mod series;
pub mod valuation;

pub use christol::ParamPair;
pub use error::{Error, Result};
pub use exact::{Rational, Valuation};
pub use series::TruncatedSeries;

