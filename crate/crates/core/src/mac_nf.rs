//! Gaussian MAC with noisy feedback.
//!
//! Transmitter `k` observes `Y_Fk = Y + Z_k`, or a single common signal
//! `Y_F = Y + V` in the common-feedback variant. Inputs are parameterized by
//! `(ρ₁ₜ, ρ₂ₜ, α)` with `ρ₁₂ = ρ₁ₜρ₂ₜ + α`, and the dependence-balance
//! constraint becomes `g(α) ≥ 0` for a function `g` that is strictly
//! decreasing on `[0, λ]`. Its root `α*` bounds the admissible offsets.

use serde::{Deserialize, Serialize};

use crate::covariance::{lambda_bound, CorrelationTriple};
use crate::error::{positive_finite, Error, Result};
use crate::regions::{monotone_family_frontier, RatePolytope, RegionFrontier, SweepGrid};
use crate::{half_log2_1p, over, RHO_MAX};

/// Feedback configuration. Variances may be `0` (noiseless) or `+∞` (no feedback).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Feedback {
    Distinct { sigma_z1_2: f64, sigma_z2_2: f64 },
    Common { sigma_v2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacNfParams {
    pub p1: f64,
    pub p2: f64,
    pub sigma_z2: f64,
    pub feedback: Feedback,
}

/// Noise terms of the dependence-balance constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NfEffectiveNoise {
    /// `σ_Z² + σ_Z₁²σ_Z₂²/(σ_Z₁²+σ_Z₂²)`, or `σ_Z² + σ_V²` for common feedback.
    pub eta_eff: f64,
    /// `σ_Z₁²σ_Z₂² + σ_Z²(σ_Z₁²+σ_Z₂²)`.
    pub eta: f64,
}

impl MacNfParams {
    pub fn distinct(p1: f64, p2: f64, sigma_z2: f64, sigma_z1_2: f64, sigma_z2_2: f64) -> Self {
        Self {
            p1,
            p2,
            sigma_z2,
            feedback: Feedback::Distinct {
                sigma_z1_2,
                sigma_z2_2,
            },
        }
    }

    pub fn common(p1: f64, p2: f64, sigma_z2: f64, sigma_v2: f64) -> Self {
        Self {
            p1,
            p2,
            sigma_z2,
            feedback: Feedback::Common { sigma_v2 },
        }
    }

    /// Unit powers and noise with both feedback variances equal to `s`.
    pub fn unit(s: f64) -> Self {
        Self::distinct(1.0, 1.0, 1.0, s, s)
    }

    pub fn validate(&self) -> Result<()> {
        positive_finite("p1", self.p1)?;
        positive_finite("p2", self.p2)?;
        positive_finite("sigma_z2", self.sigma_z2)?;
        let fb = match self.feedback {
            Feedback::Distinct {
                sigma_z1_2,
                sigma_z2_2,
            } => vec![("sigma_z1_2", sigma_z1_2), ("sigma_z2_2", sigma_z2_2)],
            Feedback::Common { sigma_v2 } => vec![("sigma_v2", sigma_v2)],
        };
        for (field, v) in fb {
            if !(v >= 0.0) {
                return Err(Error::InvalidParams {
                    field,
                    value: v,
                    reason: "feedback variance must be >= 0 (inf for no feedback)",
                });
            }
        }
        Ok(())
    }

    pub fn effective_noise(&self) -> NfEffectiveNoise {
        let sz = self.sigma_z2;
        match self.feedback {
            Feedback::Distinct {
                sigma_z1_2: s1,
                sigma_z2_2: s2,
            } => {
                let parallel = if s1.is_infinite() {
                    s2
                } else if s2.is_infinite() {
                    s1
                } else if s1 + s2 == 0.0 {
                    0.0
                } else {
                    s1 * s2 / (s1 + s2)
                };
                NfEffectiveNoise {
                    eta_eff: sz + parallel,
                    eta: s1 * s2 + sz * (s1 + s2),
                }
            }
            Feedback::Common { sigma_v2 } => NfEffectiveNoise {
                eta_eff: sz + sigma_v2,
                eta: sz + sigma_v2,
            },
        }
    }

    /// The same channel with feedback noise `sigma` on every feedback link.
    pub fn with_feedback_noise(&self, sigma: f64) -> Self {
        let feedback = match self.feedback {
            Feedback::Distinct { .. } => Feedback::Distinct {
                sigma_z1_2: sigma,
                sigma_z2_2: sigma,
            },
            Feedback::Common { .. } => Feedback::Common { sigma_v2: sigma },
        };
        Self { feedback, ..*self }
    }
}

/// `Var(X₁ | X₂, T)`. Evaluated as `P₁((1-ρ₁ₜ²) - α²/(1-ρ₂ₜ²))`, which stays
/// finite as `ρ₂ₜ → ±1` where the direct `ΔP₁/(1-ρ₂ₜ²)` form is `0/0`.
pub fn f1_nf(rho: &CorrelationTriple, p: &MacNfParams) -> f64 {
    cond_var(rho.rho1t, rho.rho2t, rho.alpha(), p.p1)
}

/// `Var(X₂ | X₁, T)`.
pub fn f2_nf(rho: &CorrelationTriple, p: &MacNfParams) -> f64 {
    cond_var(rho.rho2t, rho.rho1t, rho.alpha(), p.p2)
}

/// `Var(X₁ + X₂ | T)`.
pub fn f3_nf(rho: &CorrelationTriple, p: &MacNfParams) -> f64 {
    let (a, b) = (rho.rho1t, rho.rho2t);
    ((1.0 - a * a) * p.p1 + (1.0 - b * b) * p.p2 + 2.0 * rho.alpha() * (p.p1 * p.p2).sqrt())
        .max(0.0)
}

fn cond_var(own: f64, other: f64, alpha: f64, power: f64) -> f64 {
    let d = (1.0 - other * other).max(1e-12);
    (power * ((1.0 - own * own) - alpha * alpha / d)).max(0.0)
}

/// `f₃ ≤ f₁ + f₂ + f₁f₂/η_eff`.
pub fn db_feasible_nf(rho: &CorrelationTriple, p: &MacNfParams) -> bool {
    let f1 = f1_nf(rho, p);
    let f2 = f2_nf(rho, p);
    let eta = p.effective_noise().eta_eff;
    f3_nf(rho, p) <= f1 + f2 + over(f1 * f2, eta) + 1e-12
}

/// Rate pentagon `{½log(1+f₁/σ²), ½log(1+f₂/σ²), ½log(1+f₃/σ²)}`.
pub fn rate_polytope_nf(rho: &CorrelationTriple, p: &MacNfParams) -> RatePolytope {
    let sz = p.sigma_z2;
    RatePolytope::pentagon(
        half_log2_1p(f1_nf(rho, p) / sz),
        half_log2_1p(f2_nf(rho, p) / sz),
        half_log2_1p(f3_nf(rho, p) / sz),
    )
}

fn check_alpha(alpha: f64, lambda: f64) -> Result<()> {
    if (-1e-12..=lambda + 1e-12).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::DomainError { alpha, lambda })
    }
}

/// `g(α) = f₁ + f₂ + f₁f₂/η_eff - f₃` at `ρ₁₂ = ρ₁ₜρ₂ₜ + α`.
pub fn g_alpha(alpha: f64, rho1t: f64, rho2t: f64, p: &MacNfParams) -> Result<f64> {
    check_alpha(alpha, lambda_bound(rho1t, rho2t))?;
    let rho = CorrelationTriple {
        rho12: rho1t * rho2t + alpha,
        rho1t,
        rho2t,
    };
    let f1 = f1_nf(&rho, p);
    let f2 = f2_nf(&rho, p);
    let eta = p.effective_noise().eta_eff;
    Ok(f1 + f2 + over(f1 * f2, eta) - f3_nf(&rho, p))
}

/// Closed-form `dg/dα`.
pub fn dg_dalpha(alpha: f64, rho1t: f64, rho2t: f64, p: &MacNfParams) -> Result<f64> {
    let lambda = lambda_bound(rho1t, rho2t);
    check_alpha(alpha, lambda)?;
    let d1 = (1.0 - rho2t * rho2t).max(1e-12);
    let d2 = (1.0 - rho1t * rho1t).max(1e-12);
    let eta = p.effective_noise().eta_eff;
    let shrink = if lambda > 0.0 {
        1.0 - (alpha / lambda).powi(2)
    } else {
        0.0
    };
    Ok(-2.0 * alpha * (p.p1 / d1 + p.p2 / d2)
        - over(4.0 * alpha * p.p1 * p.p2 * shrink, eta)
        - 2.0 * (p.p1 * p.p2).sqrt())
}

/// Largest admissible offset `α*`: `λ` if `g(λ) ≥ 0`, otherwise the root of `g`
/// found by bisection to an interval width of `1e-12`. The returned value
/// is the feasible end of the final bracket.
pub fn alpha_star(rho1t: f64, rho2t: f64, p: &MacNfParams) -> Result<f64> {
    let lambda = lambda_bound(rho1t, rho2t);
    if lambda <= 1e-9 {
        return Err(Error::DegenerateGeometry { lambda });
    }
    if g_alpha(lambda, rho1t, rho2t, p)? >= 0.0 {
        return Ok(lambda);
    }
    let (mut lo, mut hi) = (0.0, lambda);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g_alpha(mid, rho1t, rho2t, p)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn alpha_star_or_zero(rho1t: f64, rho2t: f64, p: &MacNfParams) -> Result<f64> {
    match alpha_star(rho1t, rho2t, p) {
        Err(Error::DegenerateGeometry { .. }) => Ok(0.0),
        r => r,
    }
}

/// Admissible offsets for one `(ρ₁ₜ, ρ₂ₜ)`: the fine grid up to `α*`, plus `α*`.
fn alpha_values(alpha_max: f64, grid: &SweepGrid) -> Vec<f64> {
    grid.fine_values(alpha_max)
}

/// Dependence-balance family over `ρ₁ₜ, ρ₂ₜ ∈ [0, 1)` and `ρ₁₂ ∈ [ρ₁ₜρ₂ₜ, ρ₁ₜρ₂ₜ + α*]`.
///
/// Offsets below `ρ₁ₜρ₂ₜ` are dominated and the admissible set above it is
/// an interval, so this covers the whole admissible set up to symmetry.
pub fn db_region_nf(p: &MacNfParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    p.validate()?;
    grid.validate()?;
    let corr = grid.corr_values();
    let pairs: Vec<(f64, f64)> = corr
        .iter()
        .flat_map(|&a| corr.iter().map(move |&b| (a, b)))
        .collect();
    let per_pair = crate::par::map_collect(&pairs, |&(a, b)| -> Result<Vec<RatePolytope>> {
        let amax = alpha_star_or_zero(a, b, p)?;
        Ok(alpha_values(amax, grid)
            .into_iter()
            .map(|al| {
                rate_polytope_nf(
                    &CorrelationTriple {
                        rho12: a * b + al,
                        rho1t: a,
                        rho2t: b,
                    },
                    p,
                )
            })
            .collect())
    });
    let mut out = Vec::new();
    for r in per_pair {
        out.extend(r?);
    }
    Ok(out)
}

/// Common-feedback family; identical construction with `η_eff = σ_Z² + σ_V²`.
pub fn db_region_nf_common(p: &MacNfParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    match p.feedback {
        Feedback::Common { .. } => db_region_nf(p, grid),
        Feedback::Distinct { .. } => Err(Error::InvalidParams {
            field: "feedback",
            value: f64::NAN,
            reason: "common-feedback region needs a single sigma_v2",
        }),
    }
}

/// Dependence-balance family by direct search: `ρ₁ₜ, ρ₂ₜ` over the mirrored
/// grid, `ρ₁₂` over the whole valid interval, filtered by [`db_feasible_nf`].
pub fn db_region_nf_bruteforce(p: &MacNfParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    p.validate()?;
    grid.validate()?;
    let corr = grid.symmetric_corr_values();
    let pairs: Vec<(f64, f64)> = corr
        .iter()
        .flat_map(|&a| corr.iter().map(move |&b| (a, b)))
        .collect();
    let ts = crate::regions::linspace(-1.0, 1.0, 2 * grid.fine_samples - 1);
    Ok(crate::par::flat_map_collect(&pairs, |&(a, b)| {
        let lambda = lambda_bound(a, b);
        ts.iter()
            .map(|t| CorrelationTriple {
                rho12: a * b + lambda * t,
                rho1t: a,
                rho2t: b,
            })
            .filter(|rho| db_feasible_nf(rho, p))
            .map(|rho| rate_polytope_nf(&rho, p))
            .collect()
    }))
}

/// Cut-set pentagon for input correlation `ρ`.
pub fn cutset_polytope_nf(rho: f64, p: &MacNfParams) -> RatePolytope {
    let sz = p.sigma_z2;
    let c = 1.0 - rho * rho;
    RatePolytope::pentagon(
        half_log2_1p(c * p.p1 / sz),
        half_log2_1p(c * p.p2 / sz),
        half_log2_1p((p.p1 + p.p2 + 2.0 * rho * (p.p1 * p.p2).sqrt()) / sz),
    )
}

/// Correlation at which the cut-set sum bound meets the sum of the
/// individual bounds (noiseless-feedback boundary).
pub fn ozarow_rho(p: &MacNfParams) -> Result<f64> {
    let noiseless = MacNfParams::distinct(p.p1, p.p2, p.sigma_z2, 0.0, 0.0);
    alpha_star(0.0, 0.0, &noiseless)
}

/// Cut-set family over `ρ ∈ [0, 1)`; independent of the feedback noise.
pub fn cutset_region_nf(p: &MacNfParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    p.validate()?;
    grid.validate()?;
    let mut rhos = grid.fine_values(RHO_MAX);
    rhos.push(ozarow_rho(p)?);
    rhos.sort_by(f64::total_cmp);
    rhos.dedup();
    Ok(rhos.into_iter().map(|r| cutset_polytope_nf(r, p)).collect())
}

/// Exact cut-set frontier on `r1_grid` (the sampled family only approaches
/// it from below between its correlation samples).
pub fn cutset_frontier_nf(p: &MacNfParams, r1_grid: &[f64]) -> Result<RegionFrontier> {
    p.validate()?;
    monotone_family_frontier(|r| cutset_polytope_nf(r, p), 0.0, 1.0, r1_grid)
}

/// Exact noiseless-feedback frontier: the cut-set family up to `ρ*`.
pub fn ozarow_frontier(p: &MacNfParams, r1_grid: &[f64]) -> Result<RegionFrontier> {
    p.validate()?;
    let rho_star = ozarow_rho(p)?;
    monotone_family_frontier(|r| cutset_polytope_nf(r, p), 0.0, rho_star, r1_grid)
}

/// Capacity region without feedback (independent inputs).
pub fn nofeedback_capacity(p: &MacNfParams) -> RatePolytope {
    cutset_polytope_nf(0.0, p)
}

/// Cut-set family restricted to correlations where the sum bound does not
/// exceed the sum of the individual bounds.
pub fn ozarow_reference(p: &MacNfParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    p.validate()?;
    grid.validate()?;
    let rho_star = ozarow_rho(p)?;
    Ok(grid
        .fine_values(rho_star)
        .into_iter()
        .map(|r| cutset_polytope_nf(r, p))
        .collect())
}
