//! Outer bounds on the capacity regions of Gaussian two-user channels with
//! generalized feedback.
//!
//! Three channel models are covered:
//!
//! * [`mac_nf`]: multiple-access channel where each transmitter observes the
//!   channel output through its own additive Gaussian noise (plus the
//!   common-feedback variant),
//! * [`mac_uc`]: multiple-access channel with user cooperation, where each
//!   transmitter overhears a noisy copy of the other transmitter's input,
//! * [`ic_uc`]: the interference-channel analogue of `mac_uc`.
//!
//! For each model the crate evaluates the dependence-balance outer bound and
//! the classical cut-set bound as families of rate polytopes, and
//! [`regions`] turns those families into sampled Pareto frontiers.
//! [`covariance`] provides an independent log-determinant mutual-information
//! oracle over the full joint Gaussian system; [`verify`] cross-checks every
//! closed form against it.
//!
//! All information quantities are in bits unless a function says otherwise.

// `!(x >= 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covariance;
pub mod error;
pub mod ic_uc;
pub mod mac_nf;
pub mod mac_uc;
mod par;
pub mod regions;
pub mod sampling;
pub mod verify;

pub use covariance::{
    build_joint_system, delta, gaussian_cmi, lambda_bound, ChannelParams, CorrelationTriple,
    JointGaussianSystem, ModelKind, Var,
};
pub use error::{Error, Result};
pub use regions::{
    frontier_subset, max_sum_rate, polytope_max_r2, union_frontier, Constraint, RatePolytope,
    RegionFrontier,
};

/// Largest correlation magnitude used by grid sweeps. Exact ±1 is reached
/// only through the analytic limits in the per-model modules.
pub const RHO_MAX: f64 = 1.0 - 1e-6;

/// `½·log₂(1 + snr)`, the capacity of a real AWGN channel at the given SNR.
#[inline]
pub fn half_log2_1p(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

/// Ratio `num / den` where `den` may be `+∞` (a link that is pure noise).
#[inline]
pub(crate) fn over(num: f64, den: f64) -> f64 {
    if den.is_infinite() {
        0.0
    } else {
        num / den
    }
}
