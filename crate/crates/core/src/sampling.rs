//! Seeded random channel configurations for the verification suites.
//!
//! Every draw gets its own ChaCha stream keyed by `(seed, suite, index)`, so
//! results do not depend on how draws are split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covariance::{lambda_bound, CorrelationTriple};
use crate::ic_uc::IcUcParams;
use crate::mac_nf::MacNfParams;
use crate::mac_uc::MacUcParams;

/// Largest correlation magnitude drawn, keeping covariances well conditioned.
pub const CORR_LIMIT: f64 = 0.95;

/// Independent generator for draw `index` of stream `suite`.
pub fn rng_for(seed: u64, suite: u32, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite as u64) << 32) | index as u64);
    rng
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Noise variance, log-uniform on `[1e-2, 1e2]`.
pub fn variance<R: Rng>(rng: &mut R) -> f64 {
    log_uniform(rng, 1e-2, 1e2)
}

/// Transmit power, uniform on `[0.1, 10]`.
pub fn power<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.1..10.0)
}

/// Power gain, uniform on `[0, 4]`.
pub fn gain<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.0..4.0)
}

/// Uniform on the valid set `Δ ≥ 0` within `[-0.95, 0.95]³`, by rejection.
pub fn triple<R: Rng>(rng: &mut R) -> CorrelationTriple {
    loop {
        let r12 = rng.gen_range(-CORR_LIMIT..=CORR_LIMIT);
        let r1 = rng.gen_range(-CORR_LIMIT..=CORR_LIMIT);
        let r2 = rng.gen_range(-CORR_LIMIT..=CORR_LIMIT);
        if let Ok(t) = CorrelationTriple::new(r12, r1, r2) {
            return t;
        }
    }
}

/// `ρ₁ₜ, ρ₂ₜ ∈ [0, 0.95]` with `ρ₁₂ = ρ₁ₜρ₂ₜ`.
pub fn markov_triple<R: Rng>(rng: &mut R) -> CorrelationTriple {
    CorrelationTriple::markov(rng.gen_range(0.0..=CORR_LIMIT), rng.gen_range(0.0..=CORR_LIMIT))
}

/// With probability ½ a Markov triple, otherwise `ρ₁₂` uniform on its valid
/// interval (still capped at 0.95 in magnitude).
pub fn mixed_triple<R: Rng>(rng: &mut R) -> CorrelationTriple {
    let base = markov_triple(rng);
    if rng.gen_bool(0.5) {
        return base;
    }
    let lam = lambda_bound(base.rho1t, base.rho2t);
    let lo = (base.rho12 - lam).max(-CORR_LIMIT);
    let hi = (base.rho12 + lam).min(CORR_LIMIT);
    CorrelationTriple {
        rho12: rng.gen_range(lo..=hi),
        ..base
    }
}

pub fn mac_nf<R: Rng>(rng: &mut R) -> MacNfParams {
    MacNfParams::distinct(power(rng), power(rng), variance(rng), variance(rng), variance(rng))
}

pub fn mac_nf_common<R: Rng>(rng: &mut R) -> MacNfParams {
    MacNfParams::common(power(rng), power(rng), variance(rng), variance(rng))
}

pub fn mac_uc<R: Rng>(rng: &mut R) -> MacUcParams {
    MacUcParams {
        p1: power(rng),
        p2: power(rng),
        sigma_z2: variance(rng),
        sigma_z1_2: variance(rng),
        sigma_z2_2: variance(rng),
        h10: gain(rng),
        h20: gain(rng),
        h12: gain(rng),
        h21: gain(rng),
    }
}

pub fn ic_uc<R: Rng>(rng: &mut R) -> IcUcParams {
    IcUcParams {
        p1: power(rng),
        p2: power(rng),
        sigma_n1_2: variance(rng),
        sigma_n2_2: variance(rng),
        sigma_z1_2: variance(rng),
        sigma_z2_2: variance(rng),
        a: gain(rng),
        b: gain(rng),
        h12: gain(rng),
        h21: gain(rng),
    }
}
