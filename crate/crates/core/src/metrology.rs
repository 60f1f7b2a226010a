//! Quantum Fisher information and the precision limits built on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{Mode, PhotonMoments};
use crate::interferometer::{probe_state, Backend, InterferometerConfig};

/// Relative disagreement between the two QFI routes treated as a bug.
const QFI_CONSISTENCY_TOL: f64 = 1e-6;

/// Coefficients of the normally ordered characteristic function of the
/// phase-encoding arm b of the probe.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CFCoefficients {
    /// `cosh²r sinh²g`
    pub delta1: f64,
    /// `γ + β cosh g`
    pub delta2: Complex64,
    /// `sinh 2r sinh²g / 4`
    pub delta3: f64,
}

impl CFCoefficients {
    pub fn new(cfg: &InterferometerConfig) -> Self {
        let sh2 = cfg.g1.sinh().powi(2);
        CFCoefficients {
            delta1: cfg.r.cosh().powi(2) * sh2,
            delta2: cfg.gamma_amplitude() + cfg.beta_amplitude() * cfg.g1.cosh(),
            delta3: 0.25 * (2.0 * cfg.r).sinh() * sh2,
        }
    }

    /// `Γ₁ = Δ₁ + |Δ₂|²` and
    /// `Γ₂ = |Δ₂|⁴ + 4Δ₁|Δ₂|² + 2Δ₁² + 4Δ₃² − 2Δ₃(e^{−iθ}Δ₂*² + e^{iθ}Δ₂²)`,
    /// with `θ = θ_ξ − 2θ₁`.
    pub fn moments(&self, theta: f64) -> PhotonMoments {
        let (d1, d2, d3) = (self.delta1, self.delta2, self.delta3);
        let m2 = d2.norm_sqr();
        let cross = (Complex64::from_polar(1.0, theta) * d2 * d2).re;
        let gamma1 = d1 + m2;
        let gamma2 = m2 * m2 + 4.0 * d1 * m2 + 2.0 * d1 * d1 + 4.0 * d3 * d3 - 4.0 * d3 * cross;
        PhotonMoments::from_gammas(gamma1, gamma2)
    }
}

/// Characteristic-function route to the arm-b photon moments of the probe.
pub fn cf_moments(cfg: &InterferometerConfig) -> Result<(CFCoefficients, PhotonMoments)> {
    cfg.validate()?;
    cfg.require_balanced("the characteristic-function moments")?;
    let c = CFCoefficients::new(cfg);
    Ok((c, c.moments(cfg.theta_xi - 2.0 * cfg.theta1)))
}

/// Arm-b photon moments of the probe from the Gaussian engine.
pub fn probe_moments(cfg: &InterferometerConfig) -> Result<PhotonMoments> {
    Ok(probe_state(cfg, Backend::Gaussian)?.photon_moments(Mode::B))
}

/// `F = 4(Γ₂ + Γ₁ − Γ₁²)`, the variance of `n_b` times four.
pub fn qfi_from_moments(m: PhotonMoments) -> f64 {
    (4.0 * m.variance).max(0.0)
}

/// Ideal QFI of the probe. Both routes are evaluated; the Gaussian-engine
/// value is returned.
pub fn qfi_ideal(cfg: &InterferometerConfig) -> Result<f64> {
    let (_, cf) = cf_moments(cfg)?;
    let engine = qfi_from_moments(probe_moments(cfg)?);
    let cf = qfi_from_moments(cf);
    if (engine - cf).abs() > QFI_CONSISTENCY_TOL * engine.abs().max(1.0) {
        return Err(Error::Consistency {
            what: "qfi (gaussian engine vs characteristic function)",
            left: engine,
            right: cf,
        });
    }
    Ok(engine)
}

/// `1/√(νF)`.
pub fn qcrb(f: f64, nu: u32) -> Result<f64> {
    if !(f > 0.0) || nu == 0 {
        return Err(Error::Domain(format!("the Cramér-Rao bound needs F > 0 and ν ≥ 1 (F = {f}, ν = {nu})")));
    }
    Ok(1.0 / (nu as f64 * f).sqrt())
}

/// `(1/√N, 1/N)`.
pub fn sql_hl(n_total: f64) -> Result<(f64, f64)> {
    if !(n_total > 0.0) || !n_total.is_finite() {
        return Err(Error::Domain(format!("photon number {n_total} must be positive")));
    }
    Ok((1.0 / n_total.sqrt(), 1.0 / n_total))
}

/// Loss model of the lossy QFI: transmission `eta` on arm b and the
/// variational parameter `lambda` of the Kraus family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossyQfiParams {
    pub eta: f64,
    pub lambda: f64,
}

impl LossyQfiParams {
    pub fn new(eta: f64, lambda: f64) -> Result<Self> {
        check_eta(eta)?;
        if !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda = {lambda} must be finite")));
        }
        Ok(LossyQfiParams { eta, lambda })
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::Domain(format!("transmission η = {eta} outside [0, 1]")))
    }
}

/// `C_Q = 4(η + ηλ − λ)²⟨Δ²n⟩ + 4η(1 − η)(1 + λ)²⟨n⟩`.
pub fn cq_from_moments(m: PhotonMoments, p: LossyQfiParams) -> f64 {
    let LossyQfiParams { eta, lambda } = p;
    4.0 * (eta + eta * lambda - lambda).powi(2) * m.variance
        + 4.0 * eta * (1.0 - eta) * (1.0 + lambda).powi(2) * m.mean
}

pub fn cq_upper_bound(cfg: &InterferometerConfig, eta: f64, lambda: f64) -> Result<f64> {
    let p = LossyQfiParams::new(eta, lambda)?;
    Ok(cq_from_moments(probe_moments(cfg)?, p))
}

pub fn lambda_opt_from_moments(m: PhotonMoments, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("the optimal λ needs 0 < η ≤ 1, got {eta}")));
    }
    let denom = (1.0 - eta) * m.variance + eta * m.mean;
    if !(denom > 0.0) {
        return Err(Error::Domain("the optimal λ is undefined for a vacuum probe".into()));
    }
    Ok(m.variance / denom - 1.0)
}

/// `λ_opt = ⟨Δ²n⟩ / [(1 − η)⟨Δ²n⟩ + η⟨n⟩] − 1`.
pub fn lambda_opt(cfg: &InterferometerConfig, eta: f64) -> Result<f64> {
    lambda_opt_from_moments(probe_moments(cfg)?, eta)
}

/// `F_L = 4ηFΓ₁ / [(1 − η)F + 4ηΓ₁]`.
pub fn qfi_lossy_from_moments(f: f64, gamma1: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if eta == 1.0 {
        return Ok(f);
    }
    let denom = (1.0 - eta) * f + 4.0 * eta * gamma1;
    if f == 0.0 || denom <= 0.0 {
        return Ok(0.0);
    }
    Ok(4.0 * eta * f * gamma1 / denom)
}

pub fn qfi_lossy(cfg: &InterferometerConfig, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    let f = qfi_ideal(cfg)?;
    qfi_lossy_from_moments(f, probe_moments(cfg)?.gamma1, eta)
}

/// `log₁₀ Δφ_{L-QCRB}(cfg, η) − log₁₀ Δφ_QCRB(cfg without displacement, η = 1)`.
/// Negative where the displaced lossy scheme beats the ideal plain one.
pub fn qcrb_gap(cfg: &InterferometerConfig, eta: f64) -> Result<f64> {
    let lossy = qfi_lossy(cfg, eta)?;
    let plain = qfi_ideal(&cfg.with_gamma(0.0))?;
    if !(lossy > 0.0 && plain > 0.0) {
        return Err(Error::Domain("the QCRB gap needs both Fisher informations positive".into()));
    }
    Ok(qcrb(lossy, cfg.nu)?.log10() - qcrb(plain, cfg.nu)?.log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(g: f64, r: f64, beta: f64, gamma: f64) -> InterferometerConfig {
        InterferometerConfig::figure(g, r, beta, gamma)
    }

    #[test]
    fn cf_without_amplification_is_coherent() {
        let (c, m) = cf_moments(&cfg(0.0, 0.7, 1.0, 0.5)).unwrap();
        assert_eq!((c.delta1, c.delta3), (0.0, 0.0));
        let sum = Complex64::new(0.0, 1.5);
        assert!((c.delta2 - sum).norm() < 1e-15);
        assert!((m.gamma1 - 2.25).abs() < 1e-14);
        assert!((m.variance - m.mean).abs() < 1e-12);
    }

    #[test]
    fn cf_of_two_mode_squeezed_vacuum() {
        let (c, m) = cf_moments(&cfg(1.0, 0.0, 0.0, 0.0)).unwrap();
        let sh2 = 1.0f64.sinh().powi(2);
        assert!((c.delta1 - sh2).abs() < 1e-14 && (m.gamma1 - sh2).abs() < 1e-14);
        assert!((m.variance - sh2 * 1.0f64.cosh().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn cf_matches_engine_at_general_angles() {
        let c = InterferometerConfig {
            theta1: 0.4,
            theta2: 0.4 + std::f64::consts::PI,
            theta_xi: 1.1,
            theta_beta: -0.3,
            theta_gamma: 2.0,
            ..cfg(0.8, 0.6, 1.3, 0.9)
        };
        let (_, cf) = cf_moments(&c).unwrap();
        let engine = probe_moments(&c).unwrap();
        assert!((cf.gamma1 - engine.gamma1).abs() < 1e-10);
        assert!((cf.gamma2 - engine.gamma2).abs() < 1e-9 * engine.gamma2);
    }

    #[test]
    fn qfi_examples() {
        assert_eq!(qfi_ideal(&InterferometerConfig::default()).unwrap(), 0.0);
        let f = qfi_ideal(&cfg(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((f - 2.0f64.sinh().powi(2)).abs() < 1e-10);
        assert!((f - 13.154116).abs() < 1e-6);
        assert!((qfi_ideal(&cfg(0.0, 0.0, 1.0, 0.0)).unwrap() - 4.0).abs() < 1e-12);
        let unbalanced = InterferometerConfig { g2: 0.1, ..cfg(1.0, 0.0, 0.0, 0.0) };
        assert!(matches!(qfi_ideal(&unbalanced), Err(Error::Unsupported(_))));
    }

    #[test]
    fn limits() {
        assert_eq!(qcrb(1.0, 1).unwrap(), 1.0);
        assert_eq!(qcrb(4.0, 1).unwrap(), 0.5);
        assert!((qcrb(2.0f64.sinh().powi(2), 1).unwrap() - 0.275720).abs() < 1e-6);
        assert!(qcrb(0.0, 1).is_err());
        assert_eq!(sql_hl(1.0).unwrap(), (1.0, 1.0));
        let (s, h) = sql_hl(100.0).unwrap();
        assert!((s - 0.1).abs() < 1e-15 && (h - 0.01).abs() < 1e-15);
        assert!(sql_hl(0.0).is_err());
    }

    #[test]
    fn variational_bound_examples() {
        let c = cfg(1.0, 1.0, 1.0, 1.0);
        let f = qfi_ideal(&c).unwrap();
        for lambda in [-1.5, 0.0, 0.7] {
            assert!((cq_upper_bound(&c, 1.0, lambda).unwrap() - f).abs() < 1e-9 * f);
        }
        assert_eq!(cq_upper_bound(&c, 0.0, 0.0).unwrap(), 0.0);
        // at η = 0 the λ = −1 member keeps the full ideal term
        assert!((cq_upper_bound(&c, 0.0, -1.0).unwrap() - f).abs() < 1e-9 * f);
        assert!(cq_upper_bound(&c, 1.1, 0.0).is_err());

        let m = probe_moments(&c).unwrap();
        assert!((lambda_opt(&c, 1.0).unwrap() - (m.variance / m.mean - 1.0)).abs() < 1e-14);
        let coherent = cfg(0.0, 0.0, 1.5, 0.0);
        for eta in [0.1, 0.5, 1.0] {
            assert!(lambda_opt(&coherent, eta).unwrap().abs() < 1e-12);
        }
        assert!(lambda_opt(&InterferometerConfig::default(), 0.5).is_err());

        for eta in [0.2, 0.6, 0.95] {
            let lo = lambda_opt(&c, eta).unwrap();
            let bound = cq_upper_bound(&c, eta, lo).unwrap();
            let fl = qfi_lossy(&c, eta).unwrap();
            assert!((bound - fl).abs() < 1e-10 * fl.max(1.0));
        }
    }

    #[test]
    fn lossy_qfi_endpoints() {
        let c = cfg(1.0, 1.0, 1.0, 1.0);
        assert_eq!(qfi_lossy(&c, 1.0).unwrap(), qfi_ideal(&c).unwrap());
        assert_eq!(qfi_lossy(&c, 0.0).unwrap(), 0.0);
        assert_eq!(qfi_lossy(&InterferometerConfig::default(), 0.5).unwrap(), 0.0);
        let mut last = 0.0;
        for gamma in [0.0, 1.0, 2.0, 3.0] {
            let fl = qfi_lossy(&c.with_gamma(gamma), 0.6).unwrap();
            assert!(fl > last);
            last = fl;
        }
    }

    #[test]
    fn qcrb_gap_examples() {
        assert!(qcrb_gap(&cfg(1.0, 1.0, 1.0, 0.0), 1.0).unwrap().abs() < 1e-14);
        assert!(qcrb_gap(&cfg(1.0, 1.0, 1.0, 0.5), 1.0).unwrap() < 0.0);
        let mut last = f64::INFINITY;
        for k in 0..=30 {
            let gap = qcrb_gap(&cfg(1.0, 1.0, 1.0, k as f64 * 0.1), 0.8).unwrap();
            assert!(gap < last);
            last = gap;
        }
        assert!(qcrb_gap(&InterferometerConfig::default(), 0.5).is_err());
    }
}
