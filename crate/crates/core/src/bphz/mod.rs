//! Subtraction of subdivergences under a momentum cutoff.
//!
//! Integrands are exact: rational combinations of propagator powers
//! `1/(ℓ² + m²)ⁿ` and scalar products, with `m = 1`. Taylor operators act on
//! them symbolically; only the final loop integrals are numeric.

pub mod engine;
pub mod integrand;
pub mod ladder;
pub mod momentum;
pub mod quadrature;
pub mod rota_baxter;

pub use engine::{
    standard_presentation, AStarCReport, Bphz, CountertermData, CountertermValue, ExternalMomenta, NumericBphz,
    RegulatorConfig,
};
pub use integrand::{build_integrand, graph_integrand, taylor_subtract, Factor, Integrand, Term};
pub use ladder::{fit_linear, renormalization_ladder, tail_slope, LinearFit, LadderReport};
pub use momentum::{route_momenta, Momentum, MomentumRouting};
pub use quadrature::{configure_threads_from_env, Estimate, NodeSet, QuadratureMethod, QuadratureSpec};
