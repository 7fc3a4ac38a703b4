//! Renormalization combinatorics for scalar φ³ theory.
//!
//! Truncated series groups, combinatorial Hopf algebras and their characters,
//! Feynman graph generation with symmetry factors, the graph Hopf algebra with
//! its Z-factor series, BPHZ subtraction with cutoff quadrature, and Green's
//! function expansions. Algebraic code is generic over a [`Ring`] scalar.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod error;
pub mod ring;
pub mod series;
pub mod hopf;
pub mod graphs;
pub mod ck;
pub mod bphz;
pub mod greens;

pub use error::{Error, Result};
pub use ring::{Poly, Rational, Ring};
pub use series::{SeriesKind, TruncatedSeries};

/// Exact series with rational coefficients.
pub type RatSeries = TruncatedSeries<Rational>;
/// Series whose coefficients are polynomials in named symbols.
pub type PolySeries = TruncatedSeries<Poly>;
/// Floating-point series.
pub type F64Series = TruncatedSeries<f64>;
