//! Coverage of ISAC cellular networks under distance-dependent blockage.
//!
//! Two independent paths compute the same quantities: [`analytic`] evaluates
//! the coverage integrals and their closed-form special cases by adaptive
//! quadrature, and [`montecarlo`] simulates Poisson networks snapshot by
//! snapshot. [`experiments`] drives parameter sweeps over both and writes CSV.

pub mod analytic;
pub mod channel;
pub mod experiments;
pub mod montecarlo;
pub mod specfun;
