//! Gaussian MAC with user cooperation.
//!
//! Transmitter 1 overhears `Y_F₁ = √h₂₁·X₂ + Z₁` and transmitter 2 overhears
//! `Y_F₂ = √h₁₂·X₁ + Z₂`. For jointly Gaussian inputs the dependence-balance
//! constraint holds exactly when `ρ₁₂ = ρ₁ₜρ₂ₜ`, so the bound is a union over
//! `(ρ₁ₜ, ρ₂ₜ) ∈ [0, 1]²` alone.

use serde::{Deserialize, Serialize};

use crate::error::{nonnegative_finite, positive, positive_finite, Result};
use crate::regions::{monotone_family_frontier, RatePolytope, RegionFrontier, SweepGrid};
use crate::{half_log2_1p, over, RHO_MAX};

/// Channel parameters. Cooperation variances may be `+∞` (link absent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacUcParams {
    pub p1: f64,
    pub p2: f64,
    pub sigma_z2: f64,
    pub sigma_z1_2: f64,
    pub sigma_z2_2: f64,
    pub h10: f64,
    pub h20: f64,
    pub h12: f64,
    pub h21: f64,
}

impl MacUcParams {
    /// All powers, variances and gains equal to one.
    pub fn unit() -> Self {
        Self {
            p1: 1.0,
            p2: 1.0,
            sigma_z2: 1.0,
            sigma_z1_2: 1.0,
            sigma_z2_2: 1.0,
            h10: 1.0,
            h20: 1.0,
            h12: 1.0,
            h21: 1.0,
        }
    }

    /// Both cooperation noise variances set to `s`.
    pub fn with_coop_noise(self, s: f64) -> Self {
        Self {
            sigma_z1_2: s,
            sigma_z2_2: s,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive_finite("p1", self.p1)?;
        positive_finite("p2", self.p2)?;
        positive_finite("sigma_z2", self.sigma_z2)?;
        positive("sigma_z1_2", self.sigma_z1_2)?;
        positive("sigma_z2_2", self.sigma_z2_2)?;
        nonnegative_finite("h10", self.h10)?;
        nonnegative_finite("h20", self.h20)?;
        nonnegative_finite("h12", self.h12)?;
        nonnegative_finite("h21", self.h21)?;
        Ok(())
    }

    /// SNR per unit of `X₁` power seen jointly by the receiver and transmitter 2.
    fn k1(&self) -> f64 {
        self.h10 / self.sigma_z2 + over(self.h12, self.sigma_z2_2)
    }

    fn k2(&self) -> f64 {
        self.h20 / self.sigma_z2 + over(self.h21, self.sigma_z1_2)
    }
}

pub fn f1_uc(rho1t: f64, p: &MacUcParams) -> f64 {
    (1.0 - rho1t * rho1t) * p.p1 * p.k1()
}

pub fn f2_uc(rho2t: f64, p: &MacUcParams) -> f64 {
    (1.0 - rho2t * rho2t) * p.p2 * p.k2()
}

/// `β = (h₁₂h₂₁σ_Z² + h₂₀h₁₂σ_Z₁² + h₁₀h₂₁σ_Z₂²)/(σ_Z²σ_Z₁²σ_Z₂²)`, written per
/// term so that an infinite cooperation variance drops its terms.
pub fn beta_uc(p: &MacUcParams) -> f64 {
    let (s, s1, s2) = (p.sigma_z2, p.sigma_z1_2, p.sigma_z2_2);
    over(over(p.h12 * p.h21, s1), s2)
        + over(p.h20 * p.h12, s * s2)
        + over(p.h10 * p.h21, s * s1)
}

pub fn f3_uc(rho1t: f64, rho2t: f64, p: &MacUcParams) -> f64 {
    f1_uc(rho1t, p)
        + f2_uc(rho2t, p)
        + (1.0 - rho1t * rho1t) * (1.0 - rho2t * rho2t) * p.p1 * p.p2 * beta_uc(p)
}

pub fn f4_uc(rho1t: f64, rho2t: f64, p: &MacUcParams) -> f64 {
    receiver_snr(rho1t * rho2t, p)
}

/// Receiver SNR of `√h₁₀X₁ + √h₂₀X₂` at input correlation `ρ`.
fn receiver_snr(rho: f64, p: &MacUcParams) -> f64 {
    (p.h10 * p.p1 + p.h20 * p.p2 + 2.0 * rho * (p.h10 * p.h20 * p.p1 * p.p2).sqrt()) / p.sigma_z2
}

pub fn db_polytope_uc(rho1t: f64, rho2t: f64, p: &MacUcParams) -> RatePolytope {
    RatePolytope::pentagon(
        half_log2_1p(f1_uc(rho1t, p)),
        half_log2_1p(f2_uc(rho2t, p)),
        half_log2_1p(f3_uc(rho1t, rho2t, p)).min(half_log2_1p(f4_uc(rho1t, rho2t, p))),
    )
}

/// Dependence-balance family over the `(ρ₁ₜ, ρ₂ₜ)` grid.
pub fn db_region_uc(p: &MacUcParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    p.validate()?;
    grid.validate()?;
    let corr = grid.corr_values();
    Ok(crate::par::flat_map_collect(&corr, |&a| {
        corr.iter().map(|&b| db_polytope_uc(a, b, p)).collect()
    }))
}

/// Cut-set pentagon for input correlation `ρ`.
pub fn cutset_polytope_uc(rho: f64, p: &MacUcParams) -> RatePolytope {
    let c = 1.0 - rho * rho;
    RatePolytope::pentagon(
        half_log2_1p(c * p.p1 * p.k1()),
        half_log2_1p(c * p.p2 * p.k2()),
        half_log2_1p(receiver_snr(rho, p)),
    )
}

/// Correlations for the cut-set sweeps: the fine grid, `1-1e-6`, and every
/// product `ρ₁ₜρ₂ₜ` of the dependence-balance grid, so that each sampled
/// dependence-balance polytope has its cut-set counterpart in the family.
pub(crate) fn cutset_rhos(grid: &SweepGrid) -> Vec<f64> {
    let corr = grid.corr_values();
    let mut rhos = grid.fine_values(RHO_MAX);
    rhos.extend(corr.iter().flat_map(|&a| corr.iter().map(move |&b| a * b)));
    rhos.sort_by(f64::total_cmp);
    rhos.dedup();
    rhos
}

pub fn cutset_region_uc(p: &MacUcParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    p.validate()?;
    grid.validate()?;
    Ok(cutset_rhos(grid)
        .into_iter()
        .map(|r| cutset_polytope_uc(r, p))
        .collect())
}

/// Exact cut-set frontier on `r1_grid`.
pub fn cutset_frontier_uc(p: &MacUcParams, r1_grid: &[f64]) -> Result<RegionFrontier> {
    p.validate()?;
    monotone_family_frontier(|r| cutset_polytope_uc(r, p), 0.0, 1.0, r1_grid)
}

/// Capacity region without cooperation: direct links only, independent inputs.
pub fn nocoop_capacity(p: &MacUcParams) -> RatePolytope {
    let s = p.sigma_z2;
    RatePolytope::pentagon(
        half_log2_1p(p.h10 * p.p1 / s),
        half_log2_1p(p.h20 * p.p2 / s),
        half_log2_1p((p.h10 * p.p1 + p.h20 * p.p2) / s),
    )
}

/// Sum rate with fully coherent inputs.
pub fn total_coop_line(p: &MacUcParams) -> f64 {
    half_log2_1p(receiver_snr(1.0, p))
}
