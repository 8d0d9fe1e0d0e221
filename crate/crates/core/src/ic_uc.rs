//! Gaussian interference channel with user cooperation.
//!
//! Receivers see `Y₁ = X₁ + √b·X₂ + N₁` and `Y₂ = √a·X₁ + X₂ + N₂`; the
//! transmitters overhear each other as in the cooperative MAC. As there, the
//! dependence-balance bound is a union over `(ρ₁ₜ, ρ₂ₜ)` with `ρ₁₂ = ρ₁ₜρ₂ₜ`.

use serde::{Deserialize, Serialize};

use crate::error::{nonnegative_finite, positive, positive_finite, Error, Result};
use crate::mac_uc::cutset_rhos;
use crate::regions::{max_sum_rate, RatePolytope, SweepGrid};
use crate::{half_log2_1p, over};

/// Channel parameters. Cooperation variances may be `+∞` (link absent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcUcParams {
    pub p1: f64,
    pub p2: f64,
    pub sigma_n1_2: f64,
    pub sigma_n2_2: f64,
    pub sigma_z1_2: f64,
    pub sigma_z2_2: f64,
    /// Power gain from transmitter 1 to receiver 2.
    pub a: f64,
    /// Power gain from transmitter 2 to receiver 1.
    pub b: f64,
    pub h12: f64,
    pub h21: f64,
}

impl IcUcParams {
    pub fn unit() -> Self {
        Self {
            p1: 1.0,
            p2: 1.0,
            sigma_n1_2: 1.0,
            sigma_n2_2: 1.0,
            sigma_z1_2: 1.0,
            sigma_z2_2: 1.0,
            a: 1.0,
            b: 1.0,
            h12: 1.0,
            h21: 1.0,
        }
    }

    /// Both cooperation gains set to `h`.
    pub fn with_coop_gain(self, h: f64) -> Self {
        Self {
            h12: h,
            h21: h,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive_finite("p1", self.p1)?;
        positive_finite("p2", self.p2)?;
        positive_finite("sigma_n1_2", self.sigma_n1_2)?;
        positive_finite("sigma_n2_2", self.sigma_n2_2)?;
        positive("sigma_z1_2", self.sigma_z1_2)?;
        positive("sigma_z2_2", self.sigma_z2_2)?;
        nonnegative_finite("a", self.a)?;
        nonnegative_finite("b", self.b)?;
        nonnegative_finite("h12", self.h12)?;
        nonnegative_finite("h21", self.h21)?;
        Ok(())
    }

    /// Squared norm of the SNR-normalized signature of `X₁` across
    /// `(Y₁, Y₂, Y_F₂)`.
    fn u1(&self) -> f64 {
        1.0 / self.sigma_n1_2 + self.a / self.sigma_n2_2 + over(self.h12, self.sigma_z2_2)
    }

    fn u2(&self) -> f64 {
        self.b / self.sigma_n1_2 + 1.0 / self.sigma_n2_2 + over(self.h21, self.sigma_z1_2)
    }

    /// `(1-√(ab))²/(σ_N₁²σ_N₂²)`: what the two receivers see jointly beyond
    /// the sum of their individual views.
    fn receiver_cross(&self) -> f64 {
        (1.0 - (self.a * self.b).sqrt()).powi(2) / (self.sigma_n1_2 * self.sigma_n2_2)
    }

    fn k1(&self, rho: f64) -> f64 {
        (self.p1 + self.b * self.p2 + 2.0 * rho * (self.b * self.p1 * self.p2).sqrt())
            / self.sigma_n1_2
    }

    fn k2(&self, rho: f64) -> f64 {
        (self.a * self.p1 + self.p2 + 2.0 * rho * (self.a * self.p1 * self.p2).sqrt())
            / self.sigma_n2_2
    }
}

pub fn beta_ic(p: &IcUcParams) -> f64 {
    let (n1, n2, s1, s2) = (p.sigma_n1_2, p.sigma_n2_2, p.sigma_z1_2, p.sigma_z2_2);
    over(over(p.h12 * p.h21, s1), s2)
        + p.receiver_cross()
        + over(p.h12, s2) * (1.0 / n2 + p.b / n1)
        + over(p.h21, s1) * (1.0 / n1 + p.a / n2)
}

/// The six dependence-balance SNR terms `f₁ … f₆` at `(ρ₁ₜ, ρ₂ₜ)`.
pub fn f_ic_all(rho1t: f64, rho2t: f64, p: &IcUcParams) -> [f64; 6] {
    let rho = rho1t * rho2t;
    let c1 = 1.0 - rho1t * rho1t;
    let c2 = 1.0 - rho2t * rho2t;
    let f1 = p.k1(rho);
    let f2 = p.k2(rho);
    let f3 = c1 * p.p1 * p.u1();
    let f4 = c2 * p.p2 * p.u2();
    let f5 = f1 + f2 + (1.0 - rho * rho) * p.p1 * p.p2 * p.receiver_cross();
    let f6 = f3 + f4 + c1 * c2 * p.p1 * p.p2 * beta_ic(p);
    [f1, f2, f3, f4, f5, f6]
}

/// `fᵢ` for `i ∈ 1..=6`.
pub fn f_ic(i: usize, rho1t: f64, rho2t: f64, p: &IcUcParams) -> Result<f64> {
    if !(1..=6).contains(&i) {
        return Err(Error::InvalidParams {
            field: "i",
            value: i as f64,
            reason: "index must be in 1..=6",
        });
    }
    Ok(f_ic_all(rho1t, rho2t, p)[i - 1])
}

pub fn db_polytope_ic(rho1t: f64, rho2t: f64, p: &IcUcParams) -> RatePolytope {
    let r = f_ic_all(rho1t, rho2t, p).map(half_log2_1p);
    RatePolytope::pentagon(r[0].min(r[2]), r[1].min(r[3]), r[4].min(r[5]))
}

pub fn db_region_ic(p: &IcUcParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    p.validate()?;
    grid.validate()?;
    let corr = grid.corr_values();
    Ok(crate::par::flat_map_collect(&corr, |&a| {
        corr.iter().map(|&b| db_polytope_ic(a, b, p)).collect()
    }))
}

/// The five cut-set SNR terms at input correlation `ρ`: `k₁`, `k₂`, the two
/// single-user terms with every other output, and the joint receiver term.
pub fn cutset_terms_ic(rho: f64, p: &IcUcParams) -> [f64; 5] {
    let c = 1.0 - rho * rho;
    let k1 = p.k1(rho);
    let k2 = p.k2(rho);
    [
        k1,
        k2,
        c * p.p1 * p.u1(),
        c * p.p2 * p.u2(),
        k1 + k2 + c * p.p1 * p.p2 * p.receiver_cross(),
    ]
}

pub fn cutset_polytope_ic(rho: f64, p: &IcUcParams) -> RatePolytope {
    let r = cutset_terms_ic(rho, p).map(half_log2_1p);
    RatePolytope::pentagon(r[0].min(r[2]), r[1].min(r[3]), r[4])
}

pub fn cutset_region_ic(p: &IcUcParams, grid: &SweepGrid) -> Result<Vec<RatePolytope>> {
    p.validate()?;
    grid.validate()?;
    Ok(cutset_rhos(grid)
        .into_iter()
        .map(|r| cutset_polytope_ic(r, p))
        .collect())
}

/// Dependence-balance polytope with independent inputs and the cooperation
/// links removed.
pub fn nocoop_polytope_ic(p: &IcUcParams) -> RatePolytope {
    db_polytope_ic(0.0, 0.0, &p.with_coop_gain(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumRatePoint {
    pub h: f64,
    pub db_sum: f64,
    pub cs_sum: f64,
}

/// Maximum sum rates of both bounds with `h₁₂ = h₂₁ = h` for every `h`.
pub fn sumrate_vs_h(
    template: &IcUcParams,
    h_values: &[f64],
    grid: &SweepGrid,
) -> Result<Vec<SumRatePoint>> {
    if h_values.iter().any(|h| !(*h >= 0.0)) {
        return Err(Error::InvalidParams {
            field: "h",
            value: h_values.iter().copied().find(|h| !(*h >= 0.0)).unwrap_or(f64::NAN),
            reason: "cooperation gains must be >= 0",
        });
    }
    if h_values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidGrid("h values must be ascending"));
    }
    h_values
        .iter()
        .map(|&h| {
            let p = template.with_coop_gain(h);
            Ok(SumRatePoint {
                h,
                db_sum: max_sum_rate(&db_region_ic(&p, grid)?)?,
                cs_sum: max_sum_rate(&cutset_region_ic(&p, grid)?)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{build_joint_system, CorrelationTriple, Var};
    use approx::assert_abs_diff_eq;

    #[test]
    fn symmetric_gains_cancel_cross_term() {
        let p = IcUcParams::unit();
        let f = f_ic_all(0.4, 0.7, &p);
        assert_eq!(f[4], f[0] + f[1]);
    }

    #[test]
    fn unit_values_with_strong_cooperation() {
        let p = IcUcParams::unit().with_coop_gain(2.0);
        assert_eq!(beta_ic(&p), 12.0);
        assert_eq!(f_ic(3, 0.0, 0.0, &p).unwrap(), 4.0);
        assert!(f_ic(7, 0.0, 0.0, &p).is_err());
        assert!(f_ic(0, 0.0, 0.0, &p).is_err());
    }

    #[test]
    fn cutset_at_zero_correlation() {
        let q = cutset_polytope_ic(0.0, &IcUcParams::unit());
        assert_abs_diff_eq!(q.r1_max, 0.5 * 3f64.log2(), epsilon = 1e-15);
        assert_abs_diff_eq!(q.sum_max, 0.5 * 5f64.log2(), epsilon = 1e-15);
    }

    #[test]
    fn no_crosstalk_no_cooperation_is_two_links() {
        let p = IcUcParams {
            a: 0.0,
            b: 0.0,
            p1: 3.0,
            ..IcUcParams::unit().with_coop_gain(0.0)
        };
        let want = half_log2_1p(3.0);
        assert_abs_diff_eq!(cutset_polytope_ic(0.0, &p).r1_max, want, epsilon = 1e-15);
        assert_abs_diff_eq!(db_polytope_ic(0.0, 0.0, &p).r1_max, want, epsilon = 1e-15);
    }

    #[test]
    fn vanishing_cooperation_leaves_receiver_term() {
        let p = IcUcParams {
            a: 0.5,
            b: 0.5,
            ..IcUcParams::unit().with_coop_gain(1e-9)
        };
        assert_abs_diff_eq!(beta_ic(&p), 0.25, epsilon = 1e-8);
    }

    #[test]
    fn joint_receiver_term_matches_oracle() {
        let p = IcUcParams::unit();
        let sys = build_joint_system(&p.into(), &CorrelationTriple::markov(0.0, 0.0)).unwrap();
        let i = sys
            .cmi(&[Var::X1, Var::X2], &[Var::Y1, Var::Y2], &[])
            .unwrap();
        assert_abs_diff_eq!(i, 0.5 * 5f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn sweep_rejects_unsorted_or_negative() {
        let g = SweepGrid::new(0.2, 11);
        let p = IcUcParams::unit();
        assert!(sumrate_vs_h(&p, &[1.0, 0.5], &g).is_err());
        assert!(sumrate_vs_h(&p, &[-1.0], &g).is_err());
        let s = sumrate_vs_h(&p, &[0.0, 1.0], &g).unwrap();
        assert!(s.iter().all(|x| x.db_sum <= x.cs_sum + 1e-12));
    }
}
