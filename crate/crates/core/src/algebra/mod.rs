//! Exact scalar and polynomial arithmetic, residues, truncated series.

mod bipoly;
mod complex_poly;
mod scalar;
mod series;
mod unipoly;

pub use bipoly::{BiPoly, Chart, Exponent};
pub use complex_poly::ComplexPoly;
pub use scalar::ExactComplex;
pub use series::{SeriesBivariate, DEFAULT_SERIES_ORDER};
pub use unipoly::{laurent_residue, LaurentTail, UniPoly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("series has vanishing constant term")]
    NotAUnit,
}

/// Value of `f` at `(x, y)`.
pub fn poly_eval(f: &BiPoly, x: &ExactComplex, y: &ExactComplex) -> ExactComplex {
    f.eval(x, y)
}

/// Pullback along one blowup chart: `(mult, strict)` with `π*f = E^mult·strict`.
pub fn poly_pullback_blowup(f: &BiPoly, chart: Chart) -> Result<(u32, BiPoly), AlgebraError> {
    f.pullback_blowup(chart)
}

/// `U^c` to `U`'s truncation order.
pub fn series_unit_power(u: &SeriesBivariate, c: num_complex::Complex64) -> Result<SeriesBivariate, AlgebraError> {
    u.unit_power(c)
}
