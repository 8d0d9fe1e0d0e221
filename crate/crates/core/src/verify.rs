//! Verification suites: closed forms against the log-determinant oracle,
//! dependence-balance gap signs, the `α*` solver, the entropy-power bound on
//! the feedback entropy, and fast-path versus brute-force regions.
//!
//! Each suite draws seeded random configurations (see [`crate::sampling`])
//! and records the worst deviation together with the first failing draw.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::covariance::{
    build_joint_system, build_joint_system_with_pt, lambda_bound, ChannelParams,
    CorrelationTriple, JointGaussianSystem, Var,
};
use crate::error::{Error, Result};
use crate::ic_uc::{cutset_terms_ic, f_ic_all, IcUcParams};
use crate::mac_nf::{
    alpha_star, db_feasible_nf, db_region_nf, db_region_nf_bruteforce, dg_dalpha, f1_nf, f2_nf,
    f3_nf, g_alpha, Feedback, MacNfParams,
};
use crate::mac_uc::{f1_uc, f2_uc, f3_uc, f4_uc, MacUcParams};
use crate::regions::{linspace, union_frontier_par, RatePolytope, SweepGrid, DEFAULT_R1_POINTS};
use crate::{half_log2_1p, sampling};

/// Closed form versus oracle tolerance, bits.
pub const ORACLE_TOL: f64 = 1e-9;
/// Tolerance for a zero dependence-balance gap, bits.
pub const GAP_TOL: f64 = 1e-9;
/// Correlation offset below which a triple counts as Markov.
pub const MARKOV_TOL: f64 = 1e-6;
/// Agreement between `α*` and the scan-and-refine oracle.
pub const ALPHA_TOL: f64 = 1e-9;
/// Grid-scan step of the `α*` oracle.
pub const ALPHA_SCAN_STEP: f64 = 1e-5;
/// Relative agreement of `dg/dα` with a centered difference.
pub const DERIV_REL_TOL: f64 = 1e-6;
pub const DERIV_STEP: f64 = 1e-6;
/// Slack allowed in the entropy-power inequality, nats.
pub const EPI_TOL: f64 = 1e-12;
/// Allowed change of any information quantity when `P_T` is scaled.
pub const SCALING_TOL: f64 = 1e-10;

/// `I(A;B|C) = gap` of the dependence-balance constraint:
/// `I(X₁;X₂|Y_F,T) - I(X₁;X₂|T)` in bits.
pub fn db_gap(params: &ChannelParams, rho: &CorrelationTriple) -> Result<f64> {
    let sys = build_joint_system(params, rho)?;
    gap_of(&sys)
}

fn gap_of(sys: &JointGaussianSystem) -> Result<f64> {
    let mut cond = sys.feedback_vars();
    cond.push(Var::T);
    Ok(sys.cmi(&[Var::X1], &[Var::X2], &cond)? - sys.cmi(&[Var::X1], &[Var::X2], &[Var::T])?)
}

/// Quantities entering the entropy-power lower bound on `h(Y_F₁, Y_F₂ | T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpiCheckInput {
    /// `h(Y | T)` in nats.
    pub h_y_given_t: f64,
    pub sigma_z1_2: f64,
    pub sigma_z2_2: f64,
}

impl EpiCheckInput {
    /// `κ = (σ_Z₁² + σ_Z₂²)/(σ_Z₁²σ_Z₂²)`.
    pub fn kappa(&self) -> f64 {
        (self.sigma_z1_2 + self.sigma_z2_2) / (self.sigma_z1_2 * self.sigma_z2_2)
    }

    /// `μ = σ_Z₂²/(σ_Z₁² + σ_Z₂²)`.
    pub fn mu(&self) -> f64 {
        self.sigma_z2_2 / (self.sigma_z1_2 + self.sigma_z2_2)
    }

    /// `½ln((2πe)²σ_Z₁²σ_Z₂² + 2πe(σ_Z₁²+σ_Z₂²)e^{2h(Y|T)})`.
    pub fn lower_bound(&self) -> f64 {
        let c = 2.0 * PI * E;
        let (s1, s2) = (self.sigma_z1_2, self.sigma_z2_2);
        0.5 * (c * c * s1 * s2 + c * (s1 + s2) * (2.0 * self.h_y_given_t).exp()).ln()
    }

    /// The same bound through the scalar entropy-power inequality applied to
    /// `Y + V` with `V = (μZ₁ + (1-μ)Z₂)` of variance `1/κ`, plus the entropy
    /// of the independent difference `Z₁ - Z₂`.
    pub fn lower_bound_via_scalar_epi(&self) -> f64 {
        let c = 2.0 * PI * E;
        let (s1, s2) = (self.sigma_z1_2, self.sigma_z2_2);
        let entropy_power = (2.0 * self.h_y_given_t).exp() + c / self.kappa();
        0.5 * entropy_power.ln() + 0.5 * (c * (s1 + s2)).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpiCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Exact `h(Y_F₁,Y_F₂|T)` against its entropy-power lower bound, in nats.
pub fn epi_lower_bound_check(p: &MacNfParams, rho: &CorrelationTriple) -> Result<EpiCheck> {
    let (s1, s2) = match p.feedback {
        Feedback::Distinct {
            sigma_z1_2,
            sigma_z2_2,
        } => (sigma_z1_2, sigma_z2_2),
        Feedback::Common { .. } => {
            return Err(Error::InvalidParams {
                field: "feedback",
                value: f64::NAN,
                reason: "the entropy-power check needs two feedback links",
            })
        }
    };
    let sys = build_joint_system(&(*p).into(), rho)?;
    let lhs = sys.conditional_entropy_nats(&[Var::Yf1, Var::Yf2], &[Var::T])?;
    let input = EpiCheckInput {
        h_y_given_t: sys.conditional_entropy_nats(&[Var::Y], &[Var::T])?,
        sigma_z1_2: s1,
        sigma_z2_2: s2,
    };
    let rhs = input.lower_bound();
    Ok(EpiCheck {
        lhs,
        rhs,
        ok: lhs >= rhs - EPI_TOL,
    })
}

/// Largest frontier gap between the fast dependence-balance sweep and the
/// brute-force search, with the `R₁` spacing it was sampled at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FastpathGap {
    pub max_gap: f64,
    pub r1_step: f64,
}

pub fn fastpath_equivalence(p: &MacNfParams, grid: &SweepGrid) -> Result<FastpathGap> {
    let fast = db_region_nf(p, grid)?;
    let brute = db_region_nf_bruteforce(p, grid)?;
    let hi = fast
        .iter()
        .chain(&brute)
        .map(RatePolytope::r1_extent)
        .fold(0.0, f64::max);
    let r1 = linspace(0.0, hi, DEFAULT_R1_POINTS);
    let a = union_frontier_par(&fast, &r1)?;
    let b = union_frontier_par(&brute, &r1)?;
    Ok(FastpathGap {
        max_gap: a.gap(&b),
        r1_step: hi / (DEFAULT_R1_POINTS - 1) as f64,
    })
}

/// Independent evaluation of `g(α)` through `Δ` directly.
fn g_reference(alpha: f64, a: f64, b: f64, p: &MacNfParams) -> f64 {
    let r12 = a * b + alpha;
    let d = 1.0 - r12 * r12 - a * a - b * b + 2.0 * a * b * r12;
    let f1 = d * p.p1 / (1.0 - b * b);
    let f2 = d * p.p2 / (1.0 - a * a);
    let f3 = (1.0 - a * a) * p.p1 + (1.0 - b * b) * p.p2 + 2.0 * (r12 - a * b) * (p.p1 * p.p2).sqrt();
    let eta = match p.feedback {
        Feedback::Distinct {
            sigma_z1_2,
            sigma_z2_2,
        } => p.sigma_z2 + 1.0 / (1.0 / sigma_z1_2 + 1.0 / sigma_z2_2),
        Feedback::Common { sigma_v2 } => p.sigma_z2 + sigma_v2,
    };
    f1 + f2 + f1 * f2 / eta - f3
}

/// Root of `g` by a `1e-5` scan for the first sign change, refined with the
/// Illinois variant of regula falsi.
pub fn alpha_star_scan(a: f64, b: f64, p: &MacNfParams) -> f64 {
    let lam = lambda_bound(a, b);
    let g = |x: f64| g_reference(x, a, b, p);
    let steps = (lam / ALPHA_SCAN_STEP).ceil() as usize;
    let mut lo = 0.0;
    let mut hi = lam;
    for k in 1..=steps {
        let x = (k as f64 * ALPHA_SCAN_STEP).min(lam);
        if g(x) < 0.0 {
            hi = x;
            break;
        }
        lo = x;
    }
    if g(hi) >= 0.0 {
        return hi;
    }
    let (mut glo, mut ghi) = (g(lo), g(hi));
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= 1e-15 {
            break;
        }
        let x = (lo * ghi - hi * glo) / (ghi - glo);
        let gx = g(x);
        if gx >= 0.0 {
            lo = x;
            glo = gx;
            if side == 1 {
                ghi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            ghi = gx;
            if side == -1 {
                glo *= 0.5;
            }
            side = -1;
        }
        if gx == 0.0 {
            return x;
        }
    }
    lo
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub draws: usize,
    pub passed: usize,
    pub tolerance: f64,
    /// Largest observed deviation (meaning depends on the suite).
    pub worst: f64,
    pub first_failure: Option<Failure>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.draws
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub index: u32,
    pub params: Option<ChannelParams>,
    pub rho: Option<CorrelationTriple>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub n: usize,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

/// One draw's outcome.
struct Outcome {
    err: f64,
    ok: bool,
    params: Option<ChannelParams>,
    rho: Option<CorrelationTriple>,
    detail: String,
}

impl Outcome {
    fn within(err: f64, tol: f64, params: ChannelParams, rho: CorrelationTriple, detail: String) -> Self {
        Self {
            err,
            ok: err <= tol,
            params: Some(params),
            rho: Some(rho),
            detail,
        }
    }
}

fn run_suite<F>(name: &str, id: u32, seed: u64, draws: usize, tolerance: f64, f: F) -> SuiteResult
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Result<Outcome> + Sync + Send,
{
    let idx: Vec<u32> = (0..draws as u32).collect();
    let outcomes = crate::par::map_collect(&idx, |&i| {
        let mut rng = sampling::rng_for(seed, id, i);
        f(&mut rng)
    });
    let mut passed = 0;
    let mut worst = 0.0f64;
    let mut first_failure = None;
    for (i, o) in outcomes.into_iter().enumerate() {
        let o = o.unwrap_or_else(|e| Outcome {
            err: f64::INFINITY,
            ok: false,
            params: None,
            rho: None,
            detail: e.to_string(),
        });
        if o.err.is_nan() {
            worst = f64::NAN;
        } else if !worst.is_nan() {
            worst = worst.max(o.err);
        }
        if o.ok {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(Failure {
                index: i as u32,
                params: o.params,
                rho: o.rho,
                detail: o.detail,
            });
        }
    }
    SuiteResult {
        name: name.to_string(),
        draws,
        passed,
        tolerance,
        worst,
        first_failure,
    }
}

fn max_abs_diff(pairs: &[(f64, f64)]) -> (f64, usize) {
    pairs
        .iter()
        .enumerate()
        .map(|(i, (a, b))| ((a - b).abs(), i))
        .fold((0.0, 0), |acc, x| if x.0 > acc.0 || x.0.is_nan() { x } else { acc })
}

fn nf_rates_vs_oracle(p: &MacNfParams, rho: &CorrelationTriple) -> Result<Vec<(f64, f64)>> {
    let sys = build_joint_system(&(*p).into(), rho)?;
    let t = Var::T;
    Ok(vec![
        (half_log2_1p(f1_nf(rho, p) / p.sigma_z2), sys.cmi(&[Var::X1], &[Var::Y], &[Var::X2, t])?),
        (half_log2_1p(f2_nf(rho, p) / p.sigma_z2), sys.cmi(&[Var::X2], &[Var::Y], &[Var::X1, t])?),
        (
            half_log2_1p(f3_nf(rho, p) / p.sigma_z2),
            sys.cmi(&[Var::X1, Var::X2], &[Var::Y], &[t])?,
        ),
    ])
}

/// Dependence-balance bounds of the cooperative MAC at `ρ₁₂ = ρ₁ₜρ₂ₜ`.
fn uc_db_vs_oracle(p: &MacUcParams, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let sys = build_joint_system(&(*p).into(), &CorrelationTriple::markov(a, b))?;
    use Var::*;
    Ok(vec![
        (half_log2_1p(f1_uc(a, p)), sys.cmi(&[X1], &[Y, Yf2], &[X2, T])?),
        (half_log2_1p(f2_uc(b, p)), sys.cmi(&[X2], &[Y, Yf1], &[X1, T])?),
        (half_log2_1p(f3_uc(a, b, p)), sys.cmi(&[X1, X2], &[Y, Yf1, Yf2], &[T])?),
        (half_log2_1p(f4_uc(a, b, p)), sys.cmi(&[X1, X2], &[Y], &[])?),
    ])
}

/// Cut-set bounds of the cooperative MAC at input correlation `ρ`.
fn uc_cs_vs_oracle(p: &MacUcParams, rho: f64) -> Result<Vec<(f64, f64)>> {
    let sys = build_joint_system(&(*p).into(), &CorrelationTriple::new(rho, 0.0, 0.0)?)?;
    let q = crate::mac_uc::cutset_polytope_uc(rho, p);
    use Var::*;
    Ok(vec![
        (q.r1_max, sys.cmi(&[X1], &[Y, Yf2], &[X2])?),
        (q.r2_max, sys.cmi(&[X2], &[Y, Yf1], &[X1])?),
        (q.sum_max, sys.cmi(&[X1, X2], &[Y], &[])?),
    ])
}

fn ic_db_vs_oracle(p: &IcUcParams, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let sys = build_joint_system(&(*p).into(), &CorrelationTriple::markov(a, b))?;
    let f = f_ic_all(a, b, p).map(half_log2_1p);
    use Var::*;
    Ok(vec![
        (f[0], sys.cmi(&[X1, X2], &[Y1], &[])?),
        (f[1], sys.cmi(&[X1, X2], &[Y2], &[])?),
        (f[2], sys.cmi(&[X1], &[Y1, Y2, Yf2], &[X2, T])?),
        (f[3], sys.cmi(&[X2], &[Y1, Y2, Yf1], &[X1, T])?),
        (f[4], sys.cmi(&[X1, X2], &[Y1, Y2], &[])?),
        (f[5], sys.cmi(&[X1, X2], &[Y1, Y2, Yf1, Yf2], &[T])?),
    ])
}

fn ic_cs_vs_oracle(p: &IcUcParams, rho: f64) -> Result<Vec<(f64, f64)>> {
    let sys = build_joint_system(&(*p).into(), &CorrelationTriple::new(rho, 0.0, 0.0)?)?;
    let k = cutset_terms_ic(rho, p).map(half_log2_1p);
    use Var::*;
    Ok(vec![
        (k[0], sys.cmi(&[X1, X2], &[Y1], &[])?),
        (k[1], sys.cmi(&[X1, X2], &[Y2], &[])?),
        (k[2], sys.cmi(&[X1], &[Y1, Y2, Yf2], &[X2])?),
        (k[3], sys.cmi(&[X2], &[Y1, Y2, Yf1], &[X1])?),
        (k[4], sys.cmi(&[X1, X2], &[Y1, Y2], &[])?),
    ])
}

fn oracle_outcome(pairs: Vec<(f64, f64)>, params: ChannelParams, rho: CorrelationTriple, what: &str) -> Outcome {
    let (err, i) = max_abs_diff(&pairs);
    Outcome::within(
        err,
        ORACLE_TOL,
        params,
        rho,
        format!("{what} bound #{}: closed form {} vs oracle {}", i + 1, pairs[i].0, pairs[i].1),
    )
}

/// Closed-form rates of the feedback MAC against the oracle.
pub fn suite_oracle_mac_nf(seed: u64, n: usize) -> SuiteResult {
    run_suite("oracle_mac_nf", 1, seed, n, ORACLE_TOL, |rng| {
        let p = if rand::Rng::gen_bool(rng, 0.5) {
            sampling::mac_nf(rng)
        } else {
            sampling::mac_nf_common(rng)
        };
        let rho = sampling::triple(rng);
        Ok(oracle_outcome(nf_rates_vs_oracle(&p, &rho)?, p.into(), rho, "rate"))
    })
}

pub fn suite_oracle_mac_uc(seed: u64, n: usize) -> SuiteResult {
    run_suite("oracle_mac_uc", 2, seed, n, ORACLE_TOL, |rng| {
        let p = sampling::mac_uc(rng);
        let m = sampling::markov_triple(rng);
        let rho = rand::Rng::gen_range(rng, 0.0..=sampling::CORR_LIMIT);
        let mut pairs = uc_db_vs_oracle(&p, m.rho1t, m.rho2t)?;
        pairs.extend(uc_cs_vs_oracle(&p, rho)?);
        Ok(oracle_outcome(pairs, p.into(), m, "db(1-4)/cut-set(5-7)"))
    })
}

pub fn suite_oracle_ic_uc(seed: u64, n: usize) -> SuiteResult {
    run_suite("oracle_ic_uc", 3, seed, n, ORACLE_TOL, |rng| {
        let p = sampling::ic_uc(rng);
        let m = sampling::markov_triple(rng);
        let rho = rand::Rng::gen_range(rng, 0.0..=sampling::CORR_LIMIT);
        let mut pairs = ic_db_vs_oracle(&p, m.rho1t, m.rho2t)?;
        pairs.extend(ic_cs_vs_oracle(&p, rho)?);
        Ok(oracle_outcome(pairs, p.into(), m, "db(1-6)/cut-set(7-11)"))
    })
}

/// `db_feasible_nf` agrees with the sign of the oracle gap.
pub fn suite_db_gap_mac_nf(seed: u64, n: usize) -> SuiteResult {
    run_suite("db_gap_mac_nf", 4, seed, n, GAP_TOL, |rng| {
        let p = if rand::Rng::gen_bool(rng, 0.5) {
            sampling::mac_nf(rng)
        } else {
            sampling::mac_nf_common(rng)
        };
        let rho = sampling::triple(rng);
        let gap = db_gap(&p.into(), &rho)?;
        let feasible = db_feasible_nf(&rho, &p);
        let agree = feasible == (gap >= -GAP_TOL);
        Ok(Outcome {
            err: if agree { 0.0 } else { gap.abs() },
            ok: agree,
            params: Some(p.into()),
            rho: Some(rho),
            detail: format!("closed-form feasible = {feasible}, oracle gap = {gap:e}"),
        })
    })
}

fn markov_suite(name: &str, id: u32, seed: u64, n: usize, draw: fn(&mut rand_chacha::ChaCha8Rng) -> ChannelParams) -> SuiteResult {
    run_suite(name, id, seed, n, GAP_TOL, move |rng| {
        let p = draw(rng);
        let rho = sampling::mixed_triple(rng);
        let gap = db_gap(&p, &rho)?;
        let markov = rho.alpha().abs() <= MARKOV_TOL;
        let zero_gap = gap.abs() <= GAP_TOL;
        Ok(Outcome {
            err: if markov { gap.abs() } else { 0.0 },
            ok: markov == zero_gap,
            params: Some(p),
            rho: Some(rho),
            detail: format!("|rho12 - rho1t*rho2t| = {:e}, gap = {gap:e}", rho.alpha().abs()),
        })
    })
}

/// Zero dependence-balance gap exactly for Markov triples (cooperative MAC).
pub fn suite_markov_mac_uc(seed: u64, n: usize) -> SuiteResult {
    markov_suite("markov_mac_uc", 5, seed, n, |r| sampling::mac_uc(r).into())
}

pub fn suite_markov_ic_uc(seed: u64, n: usize) -> SuiteResult {
    markov_suite("markov_ic_uc", 6, seed, n, |r| sampling::ic_uc(r).into())
}

/// Bisection `α*` against the scan-and-refine oracle.
pub fn suite_alpha_star(seed: u64, n: usize) -> SuiteResult {
    run_suite("alpha_star", 7, seed, n, ALPHA_TOL, |rng| {
        let p = sampling::mac_nf(rng);
        let t = sampling::triple(rng);
        let got = alpha_star(t.rho1t, t.rho2t, &p)?;
        let want = alpha_star_scan(t.rho1t, t.rho2t, &p);
        Ok(Outcome::within(
            (got - want).abs(),
            ALPHA_TOL,
            p.into(),
            CorrelationTriple::markov(t.rho1t, t.rho2t),
            format!("bisection {got} vs scan {want}"),
        ))
    })
}

/// Closed-form `dg/dα` against a centered difference.
pub fn suite_dg_dalpha(seed: u64, n: usize) -> SuiteResult {
    run_suite("dg_dalpha", 8, seed, n, DERIV_REL_TOL, |rng| {
        let p = sampling::mac_nf(rng);
        let t = sampling::triple(rng);
        let (a, b) = (t.rho1t, t.rho2t);
        let lam = lambda_bound(a, b);
        let h = DERIV_STEP;
        let x = rand::Rng::gen_range(rng, h..=lam - h);
        let fd = (g_alpha(x + h, a, b, &p)? - g_alpha(x - h, a, b, &p)?) / (2.0 * h);
        let d = dg_dalpha(x, a, b, &p)?;
        let rel = (fd - d).abs() / d.abs().max(f64::MIN_POSITIVE);
        Ok(Outcome::within(
            rel,
            DERIV_REL_TOL,
            p.into(),
            CorrelationTriple {
                rho12: a * b + x,
                rho1t: a,
                rho2t: b,
            },
            format!("closed form {d} vs difference {fd}"),
        ))
    })
}

/// Exact feedback entropy against the entropy-power lower bound. `err` is
/// the shortfall `rhs - lhs` (negative slack counts as zero).
pub fn suite_epi(seed: u64, n: usize) -> SuiteResult {
    run_suite("epi_lower_bound", 9, seed, n, EPI_TOL, |rng| {
        let p = sampling::mac_nf(rng);
        let rho = sampling::triple(rng);
        let c = epi_lower_bound_check(&p, &rho)?;
        Ok(Outcome {
            err: (c.rhs - c.lhs).abs(),
            ok: c.ok,
            params: Some(p.into()),
            rho: Some(rho),
            detail: format!("lhs {} vs rhs {}", c.lhs, c.rhs),
        })
    })
}

/// Scaling `P_T` by 100 leaves every information quantity unchanged.
pub fn suite_t_scaling(seed: u64, n: usize) -> SuiteResult {
    run_suite("t_scaling", 10, seed, n, SCALING_TOL, |rng| {
        let params: ChannelParams = match rand::Rng::gen_range(rng, 0..3) {
            0 => sampling::mac_nf(rng).into(),
            1 => sampling::mac_uc(rng).into(),
            _ => sampling::ic_uc(rng).into(),
        };
        let rho = sampling::triple(rng);
        let a = build_joint_system_with_pt(&params, &rho, 1.0)?;
        let b = build_joint_system_with_pt(&params, &rho, 100.0)?;
        let fb = a.feedback_vars();
        let outs: Vec<Var> = a.labels()[3..].to_vec();
        let mut given_t = fb.clone();
        given_t.push(Var::T);
        let queries: Vec<(Vec<Var>, Vec<Var>, Vec<Var>)> = vec![
            (vec![Var::X1], vec![Var::X2], vec![Var::T]),
            (vec![Var::X1], vec![Var::X2], given_t),
            (vec![Var::X1], outs.clone(), vec![Var::X2, Var::T]),
            (vec![Var::X2], outs.clone(), vec![Var::X1, Var::T]),
            (vec![Var::X1, Var::X2], outs, vec![Var::T]),
        ];
        let mut err = 0.0f64;
        for (x, y, z) in &queries {
            err = err.max((a.cmi(x, y, z)? - b.cmi(x, y, z)?).abs());
        }
        Ok(Outcome::within(err, SCALING_TOL, params, rho, "P_T = 1 vs 100".into()))
    })
}

/// Fast sweep against brute force at unit parameters with feedback noise 1.
pub fn suite_fastpath(_seed: u64, _n: usize) -> SuiteResult {
    let p = MacNfParams::unit(1.0);
    run_suite("fastpath_vs_bruteforce", 11, 0, 1, 2.0, move |_| {
        let g = fastpath_equivalence(&p, &SweepGrid::feedback_default())?;
        let steps = g.max_gap / g.r1_step;
        Ok(Outcome {
            err: steps,
            ok: steps <= 2.0,
            params: Some(p.into()),
            rho: None,
            detail: format!("max gap {} bits, r1 step {}", g.max_gap, g.r1_step),
        })
    })
}

/// Every suite with `n` draws (`10·n` for the entropy-power check).
pub fn run_all(seed: u64, n: usize) -> Result<VerifyReport> {
    if n == 0 {
        return Err(Error::InvalidGrid("n must be ≥ 1"));
    }
    let suites = vec![
        suite_oracle_mac_nf(seed, n),
        suite_oracle_mac_uc(seed, n),
        suite_oracle_ic_uc(seed, n),
        suite_db_gap_mac_nf(seed, n),
        suite_markov_mac_uc(seed, n),
        suite_markov_ic_uc(seed, n),
        suite_alpha_star(seed, n),
        suite_dg_dalpha(seed, n),
        suite_epi(seed, 10 * n),
        suite_t_scaling(seed, n),
        suite_fastpath(seed, n),
    ];
    Ok(VerifyReport {
        seed,
        n,
        passed: suites.iter().all(SuiteResult::ok),
        suites,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kappa_mu_identities() {
        let e = EpiCheckInput {
            h_y_given_t: 0.7,
            sigma_z1_2: 2.0,
            sigma_z2_2: 5.0,
        };
        assert_abs_diff_eq!(e.mu() * e.kappa(), 1.0 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!((1.0 - e.mu()) * e.kappa(), 1.0 / 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.lower_bound(), e.lower_bound_via_scalar_epi(), epsilon = 1e-12);
    }

    #[test]
    fn epi_is_tight_for_gaussian_inputs() {
        let c = epi_lower_bound_check(&MacNfParams::unit(1.0), &CorrelationTriple::markov(0.0, 0.0))
            .unwrap();
        assert!(c.ok);
        assert_abs_diff_eq!(c.lhs, c.rhs, epsilon = 1e-12);
    }

    #[test]
    fn epi_near_full_correlation() {
        let rho = CorrelationTriple::markov(crate::RHO_MAX, crate::RHO_MAX);
        let c = epi_lower_bound_check(&MacNfParams::unit(1.0), &rho).unwrap();
        assert!(c.ok && c.lhs.is_finite() && c.rhs.is_finite());
    }

    #[test]
    fn gap_examples() {
        let uc: ChannelParams = MacUcParams::unit().into();
        assert!(db_gap(&uc, &CorrelationTriple::markov(0.4, 0.3)).unwrap().abs() <= 1e-9);

        let p = MacNfParams::unit(1.0);
        let (a, b) = (0.2, 0.5);
        let al = alpha_star(a, b, &p).unwrap();
        let at_root = CorrelationTriple {
            rho12: a * b + al,
            rho1t: a,
            rho2t: b,
        };
        assert!(db_gap(&p.into(), &at_root).unwrap().abs() <= 1e-6);

        let lam = lambda_bound(a, b);
        let corner = CorrelationTriple {
            rho12: a * b + lam * (1.0 - 1e-9),
            ..at_root
        };
        assert!(db_gap(&p.into(), &corner).unwrap() < 0.0);
    }

    #[test]
    fn scan_oracle_reference_value() {
        let r = alpha_star_scan(0.0, 0.0, &MacNfParams::unit(1.0));
        assert!((r - 0.2391).abs() < 1e-3);
    }

    #[test]
    fn zero_draws_rejected() {
        assert_eq!(run_all(1, 0), Err(Error::InvalidGrid("n must be ≥ 1")));
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let a = run_all(42, 20).unwrap();
        for s in &a.suites {
            assert!(s.ok(), "{s:?}");
        }
        let b = run_all(42, 20).unwrap();
        assert_eq!(a, b);
    }
}
