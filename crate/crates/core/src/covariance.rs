//! Covariance parameterization of the input triple `(T, X₁, X₂)` and the
//! log-determinant mutual-information oracle.
//!
//! The oracle builds the full joint covariance of the inputs and every channel
//! output from the linear channel equations, then evaluates conditional mutual
//! informations through Schur complements. It shares no code with the closed
//! forms in the per-model modules, which is what makes it useful as a check.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{nonnegative_finite, positive_finite, Error, Result};
use crate::ic_uc::IcUcParams;
use crate::mac_nf::{Feedback, MacNfParams};
use crate::mac_uc::MacUcParams;

/// Tolerance below zero accepted for `Δ` before a triple is rejected.
pub const DELTA_TOL: f64 = 1e-12;

/// Rounding slack for conditional mutual information, in bits.
pub const CMI_CLAMP: f64 = 1e-9;

/// Determinants at or below this are treated as singular.
const SINGULAR_DET: f64 = 1e-300;

/// Correlations of a candidate covariance matrix `Q` of `(X₁, X₂, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTriple {
    pub rho12: f64,
    pub rho1t: f64,
    pub rho2t: f64,
}

impl CorrelationTriple {
    /// Checked constructor: every component in `[-1, 1]` and `Δ ≥ -1e-12`.
    pub fn new(rho12: f64, rho1t: f64, rho2t: f64) -> Result<Self> {
        for (field, v) in [("rho12", rho12), ("rho1t", rho1t), ("rho2t", rho2t)] {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams {
                    field,
                    value: v,
                    reason: "correlation must lie in [-1, 1]",
                });
            }
        }
        let rho = Self {
            rho12,
            rho1t,
            rho2t,
        };
        let d = rho.delta();
        if d < -DELTA_TOL {
            return Err(Error::InvalidCorrelation { delta: d });
        }
        Ok(rho)
    }

    /// The triple with `ρ₁₂ = ρ₁ₜρ₂ₜ`, i.e. `X₁ → T → X₂` for Gaussian inputs.
    pub fn markov(rho1t: f64, rho2t: f64) -> Self {
        Self {
            rho12: rho1t * rho2t,
            rho1t,
            rho2t,
        }
    }

    pub fn delta(&self) -> f64 {
        delta(self)
    }

    /// Half-width of the feasible `ρ₁₂` interval around `ρ₁ₜρ₂ₜ`.
    pub fn lambda(&self) -> f64 {
        lambda_bound(self.rho1t, self.rho2t)
    }

    /// Offset `ρ₁₂ - ρ₁ₜρ₂ₜ`.
    pub fn alpha(&self) -> f64 {
        self.rho12 - self.rho1t * self.rho2t
    }
}

/// `det(Q) / (P₁P₂P_T)`; nonnegative exactly when `Q` is a valid covariance.
pub fn delta(rho: &CorrelationTriple) -> f64 {
    let CorrelationTriple {
        rho12: r12,
        rho1t: r1,
        rho2t: r2,
    } = *rho;
    1.0 - r12 * r12 - r1 * r1 - r2 * r2 + 2.0 * r1 * r2 * r12
}

/// `λ = √((1-ρ₁ₜ²)(1-ρ₂ₜ²))`.
pub fn lambda_bound(rho1t: f64, rho2t: f64) -> f64 {
    ((1.0 - rho1t * rho1t) * (1.0 - rho2t * rho2t)).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    MacNf,
    MacNfCommon,
    MacUc,
    IcUc,
}

/// Channel parameters for any of the supported models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChannelParams {
    MacNf(MacNfParams),
    MacUc(MacUcParams),
    IcUc(IcUcParams),
}

impl ChannelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ChannelParams::MacNf(p) => match p.feedback {
                Feedback::Distinct { .. } => ModelKind::MacNf,
                Feedback::Common { .. } => ModelKind::MacNfCommon,
            },
            ChannelParams::MacUc(_) => ModelKind::MacUc,
            ChannelParams::IcUc(_) => ModelKind::IcUc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelParams::MacNf(p) => p.validate(),
            ChannelParams::MacUc(p) => p.validate(),
            ChannelParams::IcUc(p) => p.validate(),
        }
    }
}

impl From<MacNfParams> for ChannelParams {
    fn from(p: MacNfParams) -> Self {
        ChannelParams::MacNf(p)
    }
}

impl From<MacUcParams> for ChannelParams {
    fn from(p: MacUcParams) -> Self {
        ChannelParams::MacUc(p)
    }
}

impl From<IcUcParams> for ChannelParams {
    fn from(p: IcUcParams) -> Self {
        ChannelParams::IcUc(p)
    }
}

/// Named random variables of a joint system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    X1,
    X2,
    /// MAC receiver output.
    Y,
    /// IC receiver outputs.
    Y1,
    Y2,
    /// Feedback / overheard signal at transmitter 1 and 2.
    Yf1,
    Yf2,
    /// Common feedback signal shared by both transmitters.
    Yf,
}

impl Var {
    pub fn label(self) -> &'static str {
        match self {
            Var::T => "T",
            Var::X1 => "X1",
            Var::X2 => "X2",
            Var::Y => "Y",
            Var::Y1 => "Y1",
            Var::Y2 => "Y2",
            Var::Yf1 => "YF1",
            Var::Yf2 => "YF2",
            Var::Yf => "YF",
        }
    }
}

/// Full joint covariance of `(T, X₁, X₂, outputs…)`.
#[derive(Debug, Clone)]
pub struct JointGaussianSystem {
    labels: Vec<Var>,
    cov: DMatrix<f64>,
}

impl JointGaussianSystem {
    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Var] {
        &self.labels
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn index(&self, v: Var) -> Option<usize> {
        self.labels.iter().position(|&l| l == v)
    }

    /// Covariance entry between two named variables.
    ///
    /// # Panics
    /// If either variable is not part of this system.
    pub fn covariance(&self, a: Var, b: Var) -> f64 {
        self.cov[(self.expect_index(a), self.expect_index(b))]
    }

    fn expect_index(&self, v: Var) -> usize {
        self.index(v)
            .unwrap_or_else(|| panic!("{} is not part of this system", v.label()))
    }

    fn indices(&self, vars: &[Var]) -> Vec<usize> {
        vars.iter().map(|&v| self.expect_index(v)).collect()
    }

    /// The feedback observations used in the dependence-balance constraint.
    pub fn feedback_vars(&self) -> Vec<Var> {
        if self.index(Var::Yf).is_some() {
            vec![Var::Yf]
        } else {
            vec![Var::Yf1, Var::Yf2]
        }
    }

    /// `I(A; B | C)` in bits for named variable sets.
    pub fn cmi(&self, a: &[Var], b: &[Var], c: &[Var]) -> Result<f64> {
        gaussian_cmi(self, &self.indices(a), &self.indices(b), &self.indices(c))
    }

    /// Differential entropy `h(A | C)` in nats.
    pub fn conditional_entropy_nats(&self, a: &[Var], c: &[Var]) -> Result<f64> {
        let cond = conditional_covariance(&self.cov, &self.indices(a), &self.indices(c))?;
        let ld = log_det(&cond)?;
        let n = a.len() as f64;
        Ok(0.5 * (n * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() + ld))
    }

    /// Conditional covariance matrix of `A` given `C`.
    pub fn conditional_cov(&self, a: &[Var], c: &[Var]) -> Result<DMatrix<f64>> {
        conditional_covariance(&self.cov, &self.indices(a), &self.indices(c))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.cov.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Symmetric and positive semi-definite within `1e-10·trace`.
    pub fn is_psd(&self) -> bool {
        let sym = (&self.cov - self.cov.transpose()).abs().max() <= 1e-12 * self.cov.abs().max();
        sym && self.min_eigenvalue() >= -1e-10 * self.cov.trace()
    }
}

/// Builds the joint system with the auxiliary power `P_T = 1`.
pub fn build_joint_system(
    params: &ChannelParams,
    rho: &CorrelationTriple,
) -> Result<JointGaussianSystem> {
    build_joint_system_with_pt(params, rho, 1.0)
}

/// An output variable and its coefficients over the noise basis.
type OutputRow = (Var, Vec<f64>);

/// Builds the joint system for an arbitrary auxiliary power `P_T`.
pub fn build_joint_system_with_pt(
    params: &ChannelParams,
    rho: &CorrelationTriple,
    p_t: f64,
) -> Result<JointGaussianSystem> {
    let rho = CorrelationTriple::new(rho.rho12, rho.rho1t, rho.rho2t)?;
    positive_finite("p_t", p_t)?;

    // Each variable is a linear combination of the basis (T, X1, X2, noises…).
    let (p1, p2, noise, outputs): (f64, f64, Vec<f64>, Vec<OutputRow>) = match params {
        ChannelParams::MacNf(p) => {
            p.validate()?;
            positive_finite("p1", p.p1)?;
            positive_finite("p2", p.p2)?;
            positive_finite("sigma_z2", p.sigma_z2)?;
            // basis: T X1 X2 Z Z1 Z2   (or T X1 X2 Z V for common feedback)
            match p.feedback {
                Feedback::Distinct { sigma_z1_2, sigma_z2_2 } => {
                    positive_finite("sigma_z1_2", sigma_z1_2)?;
                    positive_finite("sigma_z2_2", sigma_z2_2)?;
                    let y = vec![0.0, 1.0, 1.0, 1.0, 0.0, 0.0];
                    let yf1 = vec![0.0, 1.0, 1.0, 1.0, 1.0, 0.0];
                    let yf2 = vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0];
                    (
                        p.p1,
                        p.p2,
                        vec![p.sigma_z2, sigma_z1_2, sigma_z2_2],
                        vec![(Var::Y, y), (Var::Yf1, yf1), (Var::Yf2, yf2)],
                    )
                }
                Feedback::Common { sigma_v2 } => {
                    positive_finite("sigma_v2", sigma_v2)?;
                    let y = vec![0.0, 1.0, 1.0, 1.0, 0.0];
                    let yf = vec![0.0, 1.0, 1.0, 1.0, 1.0];
                    (
                        p.p1,
                        p.p2,
                        vec![p.sigma_z2, sigma_v2],
                        vec![(Var::Y, y), (Var::Yf, yf)],
                    )
                }
            }
        }
        ChannelParams::MacUc(p) => {
            positive_finite("p1", p.p1)?;
            positive_finite("p2", p.p2)?;
            positive_finite("sigma_z2", p.sigma_z2)?;
            positive_finite("sigma_z1_2", p.sigma_z1_2)?;
            positive_finite("sigma_z2_2", p.sigma_z2_2)?;
            for (f, v) in [("h10", p.h10), ("h20", p.h20), ("h12", p.h12), ("h21", p.h21)] {
                nonnegative_finite(f, v)?;
            }
            // basis: T X1 X2 Z Z1 Z2
            let y = vec![0.0, p.h10.sqrt(), p.h20.sqrt(), 1.0, 0.0, 0.0];
            let yf1 = vec![0.0, 0.0, p.h21.sqrt(), 0.0, 1.0, 0.0];
            let yf2 = vec![0.0, p.h12.sqrt(), 0.0, 0.0, 0.0, 1.0];
            (
                p.p1,
                p.p2,
                vec![p.sigma_z2, p.sigma_z1_2, p.sigma_z2_2],
                vec![(Var::Y, y), (Var::Yf1, yf1), (Var::Yf2, yf2)],
            )
        }
        ChannelParams::IcUc(p) => {
            positive_finite("p1", p.p1)?;
            positive_finite("p2", p.p2)?;
            positive_finite("sigma_n1_2", p.sigma_n1_2)?;
            positive_finite("sigma_n2_2", p.sigma_n2_2)?;
            positive_finite("sigma_z1_2", p.sigma_z1_2)?;
            positive_finite("sigma_z2_2", p.sigma_z2_2)?;
            for (f, v) in [("a", p.a), ("b", p.b), ("h12", p.h12), ("h21", p.h21)] {
                nonnegative_finite(f, v)?;
            }
            // basis: T X1 X2 N1 N2 Z1 Z2
            let y1 = vec![0.0, 1.0, p.b.sqrt(), 1.0, 0.0, 0.0, 0.0];
            let y2 = vec![0.0, p.a.sqrt(), 1.0, 0.0, 1.0, 0.0, 0.0];
            let yf1 = vec![0.0, 0.0, p.h21.sqrt(), 0.0, 0.0, 1.0, 0.0];
            let yf2 = vec![0.0, p.h12.sqrt(), 0.0, 0.0, 0.0, 0.0, 1.0];
            (
                p.p1,
                p.p2,
                vec![p.sigma_n1_2, p.sigma_n2_2, p.sigma_z1_2, p.sigma_z2_2],
                vec![(Var::Y1, y1), (Var::Y2, y2), (Var::Yf1, yf1), (Var::Yf2, yf2)],
            )
        }
    };

    let nb = 3 + noise.len();
    let mut basis = DMatrix::<f64>::zeros(nb, nb);
    let sd = [p_t.sqrt(), p1.sqrt(), p2.sqrt()];
    let corr = [
        [1.0, rho.rho1t, rho.rho2t],
        [rho.rho1t, 1.0, rho.rho12],
        [rho.rho2t, rho.rho12, 1.0],
    ];
    for i in 0..3 {
        for j in 0..3 {
            basis[(i, j)] = corr[i][j] * sd[i] * sd[j];
        }
    }
    for (k, &v) in noise.iter().enumerate() {
        basis[(3 + k, 3 + k)] = v;
    }

    let mut labels = vec![Var::T, Var::X1, Var::X2];
    let mut rows: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            let mut r = vec![0.0; nb];
            r[i] = 1.0;
            r
        })
        .collect();
    for (v, r) in outputs {
        debug_assert_eq!(r.len(), nb);
        labels.push(v);
        rows.push(r);
    }
    let a = DMatrix::from_fn(rows.len(), nb, |i, j| rows[i][j]);
    let mut cov = &a * basis * a.transpose();
    // Exact symmetry; the product is symmetric only up to rounding.
    let n = cov.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            cov[(i, j)] = m;
            cov[(j, i)] = m;
        }
    }
    Ok(JointGaussianSystem { labels, cov })
}

fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Schur complement `Σ_AA - Σ_AC Σ_CC⁻¹ Σ_CA`.
fn conditional_covariance(cov: &DMatrix<f64>, a: &[usize], c: &[usize]) -> Result<DMatrix<f64>> {
    let saa = submatrix(cov, a, a);
    if c.is_empty() {
        return Ok(saa);
    }
    let scc = submatrix(cov, c, c);
    let sca = submatrix(cov, c, a);
    log_det(&scc)?;
    let chol = scc.clone().cholesky().ok_or(Error::SingularConditioning {
        det: scc.determinant(),
    })?;
    let solved = chol.solve(&sca);
    let mut out = saa - sca.transpose() * solved;
    let n = out.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (out[(i, j)] + out[(j, i)]);
            out[(i, j)] = m;
            out[(j, i)] = m;
        }
    }
    Ok(out)
}

fn log_det(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    match m.clone().cholesky() {
        Some(ch) => {
            let ld: f64 = ch.l_dirty().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
            if ld > SINGULAR_DET.ln() {
                Ok(ld)
            } else {
                Err(Error::SingularConditioning { det: ld.exp() })
            }
        }
        None => Err(Error::SingularConditioning {
            det: m.determinant(),
        }),
    }
}

/// `I(A; B | C)` in bits, from `½·log₂(det Σ_{A|C} / det Σ_{A|B,C})`.
///
/// Index sets must be disjoint. Values in `(-1e-9, 0)` are clamped to zero;
/// anything more negative is reported as an error since it can only come
/// from an inconsistent covariance.
pub fn gaussian_cmi(sys: &JointGaussianSystem, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    debug_assert!(
        a.iter().all(|i| !b.contains(i) && !c.contains(i)) && b.iter().all(|i| !c.contains(i)),
        "index sets must be disjoint"
    );
    let given_c = conditional_covariance(&sys.cov, a, c)?;
    let bc: Vec<usize> = b.iter().chain(c).copied().collect();
    let given_bc = conditional_covariance(&sys.cov, a, &bc)?;
    let nats = 0.5 * (log_det(&given_c)? - log_det(&given_bc)?);
    let bits = nats / std::f64::consts::LN_2;
    if bits >= 0.0 {
        Ok(bits)
    } else if bits > -CMI_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeInformation { value: bits })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mac_nf::MacNfParams;
    use crate::mac_uc::MacUcParams;
    use approx::assert_abs_diff_eq;

    fn unit_nf() -> ChannelParams {
        MacNfParams::distinct(1.0, 1.0, 1.0, 1.0, 1.0).into()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&CorrelationTriple::markov(0.0, 0.0)), 1.0);
        let r = CorrelationTriple {
            rho12: 0.5,
            rho1t: 0.0,
            rho2t: 0.0,
        };
        assert_abs_diff_eq!(delta(&r), 0.75, epsilon = 1e-15);
        let m = CorrelationTriple::markov(0.6, 0.8);
        assert_abs_diff_eq!(m.rho12, 0.48, epsilon = 1e-15);
        assert_abs_diff_eq!(delta(&m), 0.2304, epsilon = 1e-14);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_bound(0.0, 0.0), 1.0);
        assert_eq!(lambda_bound(1.0, 0.3), 0.0);
        assert_abs_diff_eq!(lambda_bound(0.6, 0.8), 0.48, epsilon = 1e-15);
    }

    #[test]
    fn rejects_invalid_triples() {
        assert!(matches!(
            CorrelationTriple::new(1.0, 0.0, 0.9),
            Err(Error::InvalidCorrelation { .. })
        ));
        assert!(CorrelationTriple::new(1.5, 0.0, 0.0).is_err());
        assert!(CorrelationTriple::new(0.48, 0.6, 0.8).is_ok());
    }

    #[test]
    fn mac_nf_system_entries() {
        let sys = build_joint_system(&unit_nf(), &CorrelationTriple::markov(0.0, 0.0)).unwrap();
        assert_eq!(sys.dimension(), 6);
        assert_abs_diff_eq!(sys.covariance(Var::Y, Var::Y), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.covariance(Var::Yf1, Var::Yf1), 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.covariance(Var::Yf2, Var::Yf2), 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.covariance(Var::Y, Var::Yf1), 3.0, epsilon = 1e-14);
        assert!(sys.is_psd());
    }

    #[test]
    fn mac_uc_system_entries() {
        let p = MacUcParams::unit();
        let sys = build_joint_system(&p.into(), &CorrelationTriple::markov(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(sys.covariance(Var::Y, Var::Y), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.covariance(Var::Yf1, Var::Yf1), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.covariance(Var::Y, Var::Yf1), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ic_uc_system_entries() {
        let p = crate::ic_uc::IcUcParams::unit();
        let sys = build_joint_system(&p.into(), &CorrelationTriple::markov(0.0, 0.0)).unwrap();
        assert_eq!(sys.dimension(), 7);
        assert_abs_diff_eq!(sys.covariance(Var::Y1, Var::Y1), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.covariance(Var::Y2, Var::Y2), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.covariance(Var::Y1, Var::Y2), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn cmi_examples() {
        let sys = build_joint_system(&unit_nf(), &CorrelationTriple::markov(0.0, 0.0)).unwrap();
        assert_eq!(sys.cmi(&[Var::X1], &[Var::X2], &[]).unwrap(), 0.0);
        assert_abs_diff_eq!(
            sys.cmi(&[Var::X1], &[Var::Y], &[Var::X2]).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn singular_conditioning_is_reported() {
        // X1 and X2 perfectly correlated: conditioning on both is singular.
        let sys = build_joint_system(
            &unit_nf(),
            &CorrelationTriple {
                rho12: 1.0,
                rho1t: 0.0,
                rho2t: 0.0,
            },
        )
        .unwrap();
        let r = sys.cmi(&[Var::Y], &[Var::T], &[Var::X1, Var::X2]);
        assert!(matches!(r, Err(Error::SingularConditioning { .. })), "{r:?}");
    }

    #[test]
    fn rejects_nonpositive_noise() {
        let p: ChannelParams = MacNfParams::distinct(1.0, 1.0, 1.0, 0.0, 1.0).into();
        assert!(matches!(
            build_joint_system(&p, &CorrelationTriple::markov(0.0, 0.0)),
            Err(Error::InvalidParams { .. })
        ));
    }

    #[test]
    fn chain_rule_rewrite_of_dependence_balance() {
        // I(X1;X2|YF,T) - I(X1;X2|T) = I(X1;YF|X2,T) - I(X1;YF|T)
        let sys = build_joint_system(&unit_nf(), &CorrelationTriple::new(0.3, 0.4, -0.2).unwrap())
            .unwrap();
        let yf = [Var::Yf1, Var::Yf2];
        let lhs = sys.cmi(&[Var::X1], &[Var::X2], &[Var::Yf1, Var::Yf2, Var::T]).unwrap()
            - sys.cmi(&[Var::X1], &[Var::X2], &[Var::T]).unwrap();
        let rhs = sys.cmi(&[Var::X1], &yf, &[Var::X2, Var::T]).unwrap()
            - sys.cmi(&[Var::X1], &yf, &[Var::T]).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
    }
}
