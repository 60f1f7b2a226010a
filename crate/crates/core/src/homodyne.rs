//! Homodyne detection of the amplitude quadrature of arm a.
//!
//! The lossy variants put a beam splitter of transmissivity `T` on both arms
//! between the phase shift and OPA₂.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::Mode;
use crate::interferometer::{evolve_full, transfer_coefficients, Backend, InterferometerConfig};

/// Slope magnitude at or below which a phase point carries no signal.
pub const EPS_SLOPE: f64 = 1e-12;

/// Quantities shared by the variance, slope and sensitivity closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomodyneIntermediates {
    pub u: Complex64,
    pub v: Complex64,
    pub theta_u: f64,
    /// `θ_ξ + 2θ_U`
    pub delta: f64,
    /// `φ + θ_β − θ₁`
    pub big_theta1: f64,
    /// `φ + θ_γ − θ₁`
    pub big_theta2: f64,
    /// `|β| sinh g cosh g sin Θ₁`
    pub lambda1: f64,
    /// `|γ| sinh g sin Θ₂`
    pub lambda2: f64,
}

impl HomodyneIntermediates {
    pub fn new(cfg: &InterferometerConfig) -> Result<Self> {
        cfg.validate()?;
        cfg.require_balanced("the homodyne closed forms")?;
        let t = transfer_coefficients(cfg);
        let (s, c) = (cfg.g1.sinh(), cfg.g1.cosh());
        let theta_u = t.y.arg();
        let big_theta1 = cfg.phi + cfg.theta_beta - cfg.theta1;
        let big_theta2 = cfg.phi + cfg.theta_gamma - cfg.theta1;
        Ok(HomodyneIntermediates {
            u: t.y,
            v: t.z,
            theta_u,
            delta: cfg.theta_xi + 2.0 * theta_u,
            big_theta1,
            big_theta2,
            lambda1: cfg.beta * s * c * big_theta1.sin(),
            lambda2: cfg.gamma * s * big_theta2.sin(),
        })
    }
}

/// `⟨X⟩ = √2 Re(W₁ − Z β*)`.
pub fn output_signal(cfg: &InterferometerConfig) -> Result<f64> {
    cfg.validate()?;
    let t = transfer_coefficients(cfg);
    Ok(std::f64::consts::SQRT_2 * (t.w1 - t.z * cfg.beta_amplitude().conj()).re)
}

/// Output signal behind loss `t` on both arms; the loss only rescales the means.
pub fn output_signal_lossy(cfg: &InterferometerConfig, t: f64) -> Result<f64> {
    check_transmissivity(t, false)?;
    Ok(t.sqrt() * output_signal(cfg)?)
}

/// `Δ²X = [|U|²(cosh 2r − sinh 2r cos Δ) + |V|²] / 2`.
pub fn signal_variance(cfg: &InterferometerConfig) -> Result<f64> {
    let h = HomodyneIntermediates::new(cfg)?;
    let r2 = 2.0 * cfg.r;
    Ok(0.5 * (h.u.norm_sqr() * (r2.cosh() - r2.sinh() * h.delta.cos()) + h.v.norm_sqr()))
}

/// `∂⟨X⟩/∂φ = −√2(Λ₁ + Λ₂)`.
pub fn signal_slope(cfg: &InterferometerConfig) -> Result<f64> {
    let h = HomodyneIntermediates::new(cfg)?;
    Ok(-std::f64::consts::SQRT_2 * (h.lambda1 + h.lambda2))
}

fn nonzero_slope(slope: f64) -> Result<f64> {
    if slope.abs() <= EPS_SLOPE || !slope.is_finite() {
        Err(Error::DivergentSensitivity(format!("signal slope {slope:e} carries no phase information")))
    } else {
        Ok(slope)
    }
}

fn check_transmissivity(t: f64, strictly_positive: bool) -> Result<()> {
    let ok = if strictly_positive { t > 0.0 && t <= 1.0 } else { (0.0..=1.0).contains(&t) };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("transmissivity T = {t} outside the allowed range")))
    }
}

/// Error-propagation sensitivity `√Δ²X / |∂⟨X⟩/∂φ|`.
pub fn phase_sensitivity(cfg: &InterferometerConfig) -> Result<f64> {
    let slope = nonzero_slope(signal_slope(cfg)?)?;
    Ok(signal_variance(cfg)?.sqrt() / slope.abs())
}

fn optimal_denominator(cfg: &InterferometerConfig) -> Result<f64> {
    cfg.validate()?;
    cfg.require_balanced("the optimal-point sensitivity")?;
    if !cfg.has_figure_angles() {
        return Err(Error::Unsupported(
            "the optimal-point closed form needs θ₁ = θ_ξ = 0 and θ_β = θ_γ = π/2".into(),
        ));
    }
    let s = cfg.g1.sinh();
    let d = 2.0 * cfg.beta * s * cfg.g1.cosh() + 2.0 * cfg.gamma * s;
    if d <= EPS_SLOPE {
        return Err(Error::DivergentSensitivity("no signal at the optimal point".into()));
    }
    Ok(d)
}

/// `e^{−r} / (2|β| sinh g cosh g + 2|γ| sinh g)`, the sensitivity at `φ = 0`.
pub fn phase_sensitivity_optimal(cfg: &InterferometerConfig) -> Result<f64> {
    Ok((-cfg.r).exp() / optimal_denominator(cfg)?)
}

/// `√[(Δφ)² + (1 − T) cosh 2g / (4T(Λ₁ + Λ₂)²)]`.
pub fn phase_sensitivity_lossy(cfg: &InterferometerConfig, t: f64) -> Result<f64> {
    check_transmissivity(t, true)?;
    let h = HomodyneIntermediates::new(cfg)?;
    let lambda = h.lambda1 + h.lambda2;
    nonzero_slope(std::f64::consts::SQRT_2 * lambda)?;
    let ideal = phase_sensitivity(cfg)?;
    let extra = (1.0 - t) * (2.0 * cfg.g1).cosh() / (4.0 * t * lambda * lambda);
    Ok((ideal * ideal + extra).sqrt())
}

/// Lossy sensitivity at `φ = 0` for the figure angles.
pub fn phase_sensitivity_lossy_optimal(cfg: &InterferometerConfig, t: f64) -> Result<f64> {
    check_transmissivity(t, true)?;
    let d = optimal_denominator(cfg)?;
    let ideal = (-cfg.r).exp() / d;
    // d = 2 sinh g (|β| cosh g + |γ|), so 4(Λ₁ + Λ₂)² = d²
    let extra = (1.0 - t) * (2.0 * cfg.g1).cosh() / (t * d * d);
    Ok((ideal * ideal + extra).sqrt())
}

/// Sensitivity from the Gaussian engine: full pipeline variance and a central
/// finite-difference slope of the output mean.
pub fn phase_sensitivity_numeric(cfg: &InterferometerConfig, loss: Option<f64>, step: f64) -> Result<f64> {
    let mean_at = |phi: f64| -> Result<f64> {
        Ok(evolve_full(&cfg.with_phi(phi), loss, Backend::Gaussian)?.quadrature_moments(Mode::A).0)
    };
    let (_, var) = evolve_full(cfg, loss, Backend::Gaussian)?.quadrature_moments(Mode::A);
    let slope = (mean_at(cfg.phi + step)? - mean_at(cfg.phi - step)?) / (2.0 * step);
    Ok(var.sqrt() / nonzero_slope(slope)?.abs())
}

/// Grid `φ_i = start + (stop − start) i / (count − 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl PhaseGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        PhaseGrid { start, stop, count }
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }
}

/// Grid minimizer of the (lossy, when `loss` is set) sensitivity. Divergent
/// points are skipped; near-ties go to the smallest `|φ|`.
pub fn find_optimal_phase(cfg: &InterferometerConfig, loss: Option<f64>, grid: PhaseGrid) -> Result<(f64, f64)> {
    if grid.count < 3 {
        return Err(Error::Domain(format!("phase grid needs at least 3 points, got {}", grid.count)));
    }
    let mut best: Option<(f64, f64)> = None;
    for i in 0..grid.count {
        let phi = grid.point(i);
        let c = cfg.with_phi(phi);
        let value = match loss {
            Some(t) => phase_sensitivity_lossy(&c, t),
            None => phase_sensitivity(&c),
        };
        let value = match value {
            Ok(v) => v,
            Err(Error::DivergentSensitivity(_)) => continue,
            Err(e) => return Err(e),
        };
        best = match best {
            None => Some((phi, value)),
            Some((bphi, bval)) => {
                let tie = (value - bval).abs() <= 1e-12 * bval.abs();
                if (tie && phi.abs() < bphi.abs()) || (!tie && value < bval) {
                    Some((phi, value))
                } else {
                    Some((bphi, bval))
                }
            }
        };
    }
    best.ok_or(Error::NoSignal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn cfg(g: f64, r: f64, beta: f64, gamma: f64) -> InterferometerConfig {
        InterferometerConfig::figure(g, r, beta, gamma)
    }

    #[test]
    fn signal_examples() {
        assert!(output_signal(&cfg(1.0, 1.0, 1.0, 1.0)).unwrap().abs() < 1e-14);
        for phi in [0.0, 0.4, 2.0] {
            assert_eq!(output_signal(&cfg(1.0, 1.0, 0.0, 0.0).with_phi(phi)).unwrap(), 0.0);
        }
    }

    #[test]
    fn intermediates() {
        let h = HomodyneIntermediates::new(&cfg(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!(h.v.norm() < 1e-15);
        let c = cfg(0.7, 1.0, 1.3, 0.4).with_phi(0.9);
        let h = HomodyneIntermediates::new(&c).unwrap();
        let (s, ch) = (0.7f64.sinh(), 0.7f64.cosh());
        let v2 = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -0.9)).norm_sqr() * s * s * ch * ch;
        assert!((h.v.norm_sqr() - v2).abs() < 1e-14);
        assert!((h.lambda1 - 1.3 * s * ch * (0.9 + FRAC_PI_2).sin()).abs() < 1e-14);
        assert!((h.lambda2 - 0.4 * s * (0.9 + FRAC_PI_2).sin()).abs() < 1e-14);
    }

    #[test]
    fn variance_examples() {
        assert!((signal_variance(&cfg(1.0, 1.0, 1.0, 1.0)).unwrap() - 0.0676676).abs() < 1e-7);
        assert!((signal_variance(&cfg(1.0, 0.0, 1.0, 1.0)).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn slope_examples() {
        assert_eq!(signal_slope(&cfg(0.0, 1.0, 1.0, 1.0)).unwrap(), 0.0);
        let expected = -SQRT_2 * (1.0f64.cosh() + 1.0) * 1.0f64.sinh();
        assert!((signal_slope(&cfg(1.0, 1.0, 1.0, 1.0)).unwrap() - expected).abs() < 1e-13);
        assert!((expected + 4.226563).abs() < 1e-6);
        assert_eq!(signal_slope(&cfg(1.0, 1.0, 0.0, 0.0).with_phi(0.3)).unwrap(), 0.0);
    }

    #[test]
    fn sensitivity_examples() {
        let d0 = phase_sensitivity(&cfg(1.0, 1.0, 1.0, 0.0)).unwrap();
        assert!((d0 - (-1.0f64).exp() / 2.0f64.sinh()).abs() < 1e-14);
        assert!((d0 - 0.101432).abs() < 1e-6);
        let d1 = phase_sensitivity(&cfg(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((d1 - 0.061547).abs() < 1e-6);
        let flat = InterferometerConfig { theta_beta: 0.0, theta_gamma: 0.0, ..cfg(1.0, 1.0, 1.0, 1.0) };
        assert!(matches!(phase_sensitivity(&flat), Err(Error::DivergentSensitivity(_))));
    }

    #[test]
    fn optimal_point_forms() {
        for gamma in [0.0, 0.5, 2.0, 5.0] {
            let c = cfg(1.3, 0.7, 1.1, gamma);
            let closed = phase_sensitivity_optimal(&c).unwrap();
            assert!((closed - phase_sensitivity(&c).unwrap()).abs() < 1e-12 * closed);
            for t in [0.3, 0.6, 1.0] {
                let lo = phase_sensitivity_lossy_optimal(&c, t).unwrap();
                assert!((lo - phase_sensitivity_lossy(&c, t).unwrap()).abs() < 1e-12 * lo);
            }
            assert_eq!(phase_sensitivity_lossy_optimal(&c, 1.0).unwrap(), closed);
        }
        let ratio = phase_sensitivity_optimal(&cfg(2.0, 1.0, 1.0, 5.0)).unwrap()
            / phase_sensitivity_optimal(&cfg(2.0, 1.0, 1.0, 0.0)).unwrap();
        assert!((ratio - 0.4294).abs() < 1e-4);

        assert!(matches!(phase_sensitivity_optimal(&cfg(0.0, 1.0, 1.0, 1.0)), Err(Error::DivergentSensitivity(_))));
        assert!(matches!(phase_sensitivity_optimal(&cfg(1.0, 1.0, 0.0, 0.0)), Err(Error::DivergentSensitivity(_))));
        let off = InterferometerConfig { theta_xi: 0.2, ..cfg(1.0, 1.0, 1.0, 1.0) };
        assert!(matches!(phase_sensitivity_optimal(&off), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lossy_domain() {
        let c = cfg(1.0, 1.0, 1.0, 1.0);
        assert!(matches!(phase_sensitivity_lossy(&c, 0.0), Err(Error::Domain(_))));
        assert!(matches!(phase_sensitivity_lossy_optimal(&c, 1.5), Err(Error::Domain(_))));
        assert_eq!(phase_sensitivity_lossy(&c.with_phi(0.3), 1.0).unwrap(), phase_sensitivity(&c.with_phi(0.3)).unwrap());
        assert!(phase_sensitivity_lossy(&c, 0.6).unwrap() > phase_sensitivity(&c).unwrap());
    }

    #[test]
    fn optimum_on_a_grid() {
        let grid = PhaseGrid::new(-1.0, 1.0, 2001);
        for gamma in [0.0, 1.0, 2.0, 3.0] {
            let c = cfg(1.0, 1.0, 1.0, gamma);
            assert_eq!(find_optimal_phase(&c, None, grid).unwrap().0, 0.0);
            assert_eq!(find_optimal_phase(&c, Some(0.6), grid).unwrap().0, 0.0);
        }
        let dark = cfg(1.0, 1.0, 0.0, 0.0);
        assert!(matches!(find_optimal_phase(&dark, None, grid), Err(Error::NoSignal)));
        assert!(find_optimal_phase(&dark, None, PhaseGrid::new(0.0, 1.0, 2)).is_err());
    }

    #[test]
    fn engine_cross_checks() {
        let c = cfg(1.0, 1.0, 1.0, 1.0).with_phi(0.3);
        let out = evolve_full(&c, None, Backend::Gaussian).unwrap();
        let (mean, var) = out.quadrature_moments(Mode::A);
        assert!((output_signal(&c).unwrap() - mean).abs() < 1e-10);
        assert!((signal_variance(&c).unwrap() - var).abs() < 1e-10);

        let c = cfg(1.0, 1.0, 1.0, 1.0).with_phi(0.2);
        let numeric = phase_sensitivity_numeric(&c, Some(0.6), 1e-5).unwrap();
        assert!((phase_sensitivity_lossy(&c, 0.6).unwrap() - numeric).abs() < 1e-8);
        let lossy = evolve_full(&c, Some(0.6), Backend::Gaussian).unwrap();
        assert!((output_signal_lossy(&c, 0.6).unwrap() - lossy.quadrature_moments(Mode::A).0).abs() < 1e-12);
    }
}
