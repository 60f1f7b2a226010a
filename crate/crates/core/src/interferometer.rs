//! The displacement-assisted SU(1,1) interferometer.
//!
//! Squeezed vacuum enters arm a and a coherent state arm b. OPA₁ entangles the
//! arms, both arms are displaced by the same `γ`, arm b picks up the phase
//! `φ`, and OPA₂ recombines them before homodyne detection on arm a.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockState, Generator, DEFAULT_TAIL_TOL};
use crate::gaussian::{GaussianState, Mode, PhotonMoments};

const ANGLE_TOL: f64 = 1e-12;

/// True when `a` and `b` are the same angle modulo 2π.
pub fn same_angle(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d < ANGLE_TOL || TAU - d < ANGLE_TOL
}

/// Full parameter set of one experiment. Angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferometerConfig {
    pub g1: f64,
    pub g2: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// squeezing magnitude of the arm-a input
    pub r: f64,
    pub theta_xi: f64,
    /// coherent amplitude of the arm-b input
    pub beta: f64,
    pub theta_beta: f64,
    /// strength of the local displacement
    pub gamma: f64,
    pub theta_gamma: f64,
    pub phi: f64,
    /// number of repeated trials
    pub nu: u32,
}

impl Default for InterferometerConfig {
    /// Balanced with the figure conventions (`θ₁ = 0`, `θ₂ = π`, `θ_ξ = 0`,
    /// `θ_β = θ_γ = π/2`) and every magnitude zero.
    fn default() -> Self {
        InterferometerConfig {
            g1: 0.0,
            g2: 0.0,
            theta1: 0.0,
            theta2: PI,
            r: 0.0,
            theta_xi: 0.0,
            beta: 0.0,
            theta_beta: FRAC_PI_2,
            gamma: 0.0,
            theta_gamma: FRAC_PI_2,
            phi: 0.0,
            nu: 1,
        }
    }
}

impl InterferometerConfig {
    /// Balanced interferometer, `g₁ = g₂ = g` and `θ₂ = θ₁ + π`, other fields default.
    pub fn balanced(g: f64, theta1: f64) -> Self {
        InterferometerConfig {
            g1: g,
            g2: g,
            theta1,
            theta2: theta1 + PI,
            ..Default::default()
        }
    }

    /// Balanced, figure angles, `φ = 0`.
    pub fn figure(g: f64, r: f64, beta: f64, gamma: f64) -> Self {
        InterferometerConfig {
            r,
            beta,
            gamma,
            ..Self::balanced(g, 0.0)
        }
    }

    pub fn with_phi(self, phi: f64) -> Self {
        InterferometerConfig { phi, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        InterferometerConfig { gamma, ..self }
    }

    /// Sets both gains.
    pub fn with_g(self, g: f64) -> Self {
        InterferometerConfig { g1: g, g2: g, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g1", self.g1),
            ("g2", self.g2),
            ("r", self.r),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!("{name} = {v} must be finite and non-negative")));
            }
        }
        for (name, v) in [
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("theta_xi", self.theta_xi),
            ("theta_beta", self.theta_beta),
            ("theta_gamma", self.theta_gamma),
            ("phi", self.phi),
        ] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} = {v} must be finite")));
            }
        }
        if self.nu == 0 {
            return Err(Error::Domain("nu must be at least 1".into()));
        }
        Ok(())
    }

    pub fn is_balanced(&self) -> bool {
        self.g1 == self.g2 && same_angle(self.theta2 - self.theta1, PI)
    }

    /// `θ₁ = 0`, `θ_ξ = 0` and `θ_β = θ_γ = π/2`: the angles every figure uses.
    pub fn has_figure_angles(&self) -> bool {
        same_angle(self.theta1, 0.0)
            && same_angle(self.theta_xi, 0.0)
            && same_angle(self.theta_beta, FRAC_PI_2)
            && same_angle(self.theta_gamma, FRAC_PI_2)
    }

    pub(crate) fn require_balanced(&self, what: &str) -> Result<()> {
        if self.is_balanced() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} requires g1 = g2 and theta2 − theta1 = π")))
        }
    }

    pub fn beta_amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.beta, self.theta_beta)
    }

    pub fn gamma_amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.gamma, self.theta_gamma)
    }

    /// Mean photon number of the input, `|β|² + sinh²r`.
    pub fn input_photon_number(&self) -> f64 {
        self.beta * self.beta + self.r.sinh().powi(2)
    }
}

/// Coefficients of `a₂ = W₁ + Y a₀ − Z b₀†` and `b₂ = W₂ + e^{iφ}(Y b₀ − Z a₀†)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferCoefficients {
    pub y: Complex64,
    pub z: Complex64,
    pub w1: Complex64,
    pub w2: Complex64,
}

impl TransferCoefficients {
    pub fn new(cfg: &InterferometerConfig) -> Self {
        let (c1, s1) = (cfg.g1.cosh(), cfg.g1.sinh());
        let (c2, s2) = (cfg.g2.cosh(), cfg.g2.sinh());
        let e = |angle: f64| Complex64::from_polar(1.0, angle);
        let gamma = cfg.gamma_amplitude();
        let phi = cfg.phi;
        TransferCoefficients {
            y: c1 * c2 + e(cfg.theta2 - cfg.theta1 - phi) * s1 * s2,
            z: e(cfg.theta1) * s1 * c2 + e(cfg.theta2 - phi) * c1 * s2,
            w1: gamma * c2 - gamma.conj() * e(cfg.theta2 - phi) * s2,
            w2: gamma * e(phi) * c2 - gamma.conj() * e(cfg.theta2) * s2,
        }
    }
}

pub fn transfer_coefficients(cfg: &InterferometerConfig) -> TransferCoefficients {
    TransferCoefficients::new(cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Gaussian,
    Fock { cutoff: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineState {
    Gaussian(GaussianState),
    Fock(FockState),
}

impl PipelineState {
    pub fn photon_moments(&self, mode: Mode) -> PhotonMoments {
        match self {
            PipelineState::Gaussian(s) => s.photon_moments(mode),
            PipelineState::Fock(s) => s.photon_moments(mode),
        }
    }

    pub fn quadrature_moments(&self, mode: Mode) -> (f64, f64) {
        match self {
            PipelineState::Gaussian(s) => s.quadrature_moments(mode),
            PipelineState::Fock(s) => s.quadrature_moments(mode),
        }
    }

    pub fn total_photon_number(&self) -> f64 {
        self.photon_moments(Mode::A).mean + self.photon_moments(Mode::B).mean
    }

    pub fn as_gaussian(&self) -> Option<&GaussianState> {
        match self {
            PipelineState::Gaussian(s) => Some(s),
            PipelineState::Fock(_) => None,
        }
    }
}

fn gaussian_probe(cfg: &InterferometerConfig) -> GaussianState {
    GaussianState::prepare_input(cfg.r, cfg.theta_xi, cfg.beta, cfg.theta_beta)
        .apply_two_mode_squeezer(cfg.g1, cfg.theta1)
        .apply_displacement(Mode::A, cfg.gamma, cfg.theta_gamma)
        .apply_displacement(Mode::B, cfg.gamma, cfg.theta_gamma)
}

fn fock_after_opa1(cfg: &InterferometerConfig, cutoff: usize) -> Result<FockState> {
    FockState::prepare_input(cfg.r, cfg.theta_xi, cfg.beta, cfg.theta_beta, cutoff)?
        .apply(Generator::TwoModeSqueezer { g: cfg.g1, theta: cfg.theta1 })
}

fn ldo(cfg: &InterferometerConfig, mode: Mode) -> Generator {
    Generator::Displacement {
        mode,
        magnitude: cfg.gamma,
        theta: cfg.theta_gamma,
    }
}

/// State after OPA₁ and both displacements, right before the phase shift.
pub fn probe_state(cfg: &InterferometerConfig, backend: Backend) -> Result<PipelineState> {
    cfg.validate()?;
    match backend {
        Backend::Gaussian => Ok(PipelineState::Gaussian(gaussian_probe(cfg))),
        Backend::Fock { cutoff } => {
            let s = fock_after_opa1(cfg, cutoff)?
                .apply(ldo(cfg, Mode::A))?
                .apply(ldo(cfg, Mode::B))?;
            Ok(PipelineState::Fock(s))
        }
    }
}

/// Output state: OPA₁ → displacements → phase on b → optional loss of
/// transmissivity `loss` on both arms → OPA₂.
pub fn evolve_full(
    cfg: &InterferometerConfig,
    loss: Option<f64>,
    backend: Backend,
) -> Result<PipelineState> {
    cfg.validate()?;
    if let Some(t) = loss {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("transmissivity {t} outside [0, 1]")));
        }
    }
    match backend {
        Backend::Gaussian => {
            let mut s = gaussian_probe(cfg).apply_phase(Mode::B, cfg.phi);
            if let Some(t) = loss {
                s = s.apply_loss(Mode::A, t)?.apply_loss(Mode::B, t)?;
            }
            Ok(PipelineState::Gaussian(s.apply_two_mode_squeezer(cfg.g2, cfg.theta2)))
        }
        Backend::Fock { .. } => {
            if loss.is_some() {
                return Err(Error::Unsupported(
                    "photon loss needs the Gaussian backend; the Fock oracle is lossless".into(),
                ));
            }
            let PipelineState::Fock(probe) = probe_state(cfg, backend)? else {
                unreachable!()
            };
            let out = probe
                .apply(Generator::Phase { mode: Mode::B, phi: cfg.phi })?
                .apply(Generator::TwoModeSqueezer { g: cfg.g2, theta: cfg.theta2 })?;
            Ok(PipelineState::Fock(out))
        }
    }
}

/// True where the closed form for the probe's total photon number is exact:
/// `θ_γ = θ_β` and `θ_β + θ_γ − θ₁ = π`. Away from it the `|γ||β|` cross term
/// carries angle factors the closed form drops.
pub fn closed_form_photon_number_applies(cfg: &InterferometerConfig) -> bool {
    cfg.is_balanced()
        && same_angle(cfg.theta_gamma, cfg.theta_beta)
        && same_angle(cfg.theta_beta + cfg.theta_gamma - cfg.theta1, PI)
}

/// `N̄_in cosh 2g + 2 sinh²g + 2|γ||β|(cosh g + sinh g) + 2|γ|²`.
pub fn closed_form_photon_number(cfg: &InterferometerConfig) -> f64 {
    let g = cfg.g1;
    cfg.input_photon_number() * (2.0 * g).cosh()
        + 2.0 * g.sinh().powi(2)
        + 2.0 * cfg.gamma * cfg.beta * (g.cosh() + g.sinh())
        + 2.0 * cfg.gamma * cfg.gamma
}

/// Total mean photon number inside the interferometer (in the probe state).
///
/// Uses the closed form where it is exact and the Gaussian probe otherwise.
pub fn total_mean_photon_number(cfg: &InterferometerConfig) -> Result<f64> {
    cfg.validate()?;
    cfg.require_balanced("the total photon number")?;
    if closed_form_photon_number_applies(cfg) {
        Ok(closed_form_photon_number(cfg))
    } else {
        Ok(gaussian_probe(cfg).total_photon_number())
    }
}

/// Single-mode moments of the probe: photon moments and `(⟨X⟩, Δ²X)` per arm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeMoments {
    pub photons: [PhotonMoments; 2],
    pub quadratures: [(f64, f64); 2],
    /// Largest tail weight seen along the Fock pipeline; zero for the Gaussian backend.
    pub tail_mass: f64,
    pub cutoff: usize,
}

impl ProbeMoments {
    pub fn photons(&self, mode: Mode) -> PhotonMoments {
        self.photons[mode.index()]
    }

    pub fn quadrature(&self, mode: Mode) -> (f64, f64) {
        self.quadratures[mode.index()]
    }
}

pub fn gaussian_probe_moments(cfg: &InterferometerConfig) -> ProbeMoments {
    let s = gaussian_probe(cfg);
    ProbeMoments {
        photons: [s.photon_moments(Mode::A), s.photon_moments(Mode::B)],
        quadratures: [s.quadrature_moments(Mode::A), s.quadrature_moments(Mode::B)],
        tail_mass: 0.0,
        cutoff: 0,
    }
}

/// Probe moments from the Fock oracle.
///
/// A displacement on one arm leaves the reduced state of the other arm
/// untouched, so arm a is read from the state displaced on a only and arm b
/// from the state displaced on b only. Each of those stays close to the band
/// `|n_a − n_b| ≲ const` that OPA₁ produces, which keeps large cutoffs cheap.
pub fn fock_probe_moments(cfg: &InterferometerConfig, cutoff: usize) -> Result<ProbeMoments> {
    cfg.validate()?;
    let opa = fock_after_opa1(cfg, cutoff)?;
    let arm_a = opa.apply(ldo(cfg, Mode::A))?;
    let arm_b = opa.apply(ldo(cfg, Mode::B))?;
    Ok(ProbeMoments {
        photons: [arm_a.photon_moments(Mode::A), arm_b.photon_moments(Mode::B)],
        quadratures: [arm_a.quadrature_moments(Mode::A), arm_b.quadrature_moments(Mode::B)],
        tail_mass: opa.tail_mass().max(arm_a.tail_mass()).max(arm_b.tail_mass()),
        cutoff,
    })
}

// The Chernoff estimate overshoots the true tail by orders of magnitude, so it
// is aimed above the tolerance that the measured tail must then meet.
const PREDICTION_TOL: f64 = 1e-7;

/// Tail weight a grid of `cutoff` levels must stay under. Besides
/// `DEFAULT_TAIL_TOL` itself, truncation shifts a second factorial moment by
/// about `tail × cutoff²`, which must stay below `DEFAULT_TAIL_TOL` relative
/// to `max(1, Γ₂)` of the smallest mode.
pub fn required_tail(cutoff: usize, gamma2: f64) -> f64 {
    let d = cutoff as f64;
    DEFAULT_TAIL_TOL * (gamma2.max(1.0) / (d * d)).min(1.0)
}

fn smallest_gamma2(moments: impl IntoIterator<Item = PhotonMoments>) -> f64 {
    moments.into_iter().map(|m| m.gamma2).fold(f64::INFINITY, f64::min)
}

/// Smallest cutoff (a multiple of 8) at which the Chernoff estimate of the
/// weight in the top tenth of the levels of every mode of `states` meets
/// [`required_tail`], with the estimate aimed `PREDICTION_TOL / DEFAULT_TAIL_TOL` high.
fn predicted_cutoff(states: &[GaussianState], gamma2: f64, max_cutoff: usize) -> usize {
    let reach = |tol: f64| {
        states
            .iter()
            .flat_map(|s| [Mode::A, Mode::B].map(|m| s.photon_number_reach(m, tol)))
            .fold(0.0, f64::max)
    };
    let mut d = 16.0f64;
    for _ in 0..6 {
        let tol = PREDICTION_TOL / DEFAULT_TAIL_TOL * required_tail(d as usize, gamma2);
        let next = (reach(tol) / 0.9).ceil().max(16.0);
        if !(next > d) {
            break;
        }
        d = next.min(max_cutoff as f64);
    }
    (d as usize).div_ceil(8).saturating_mul(8).min(max_cutoff)
}

fn next_cutoff(cutoff: usize, max_cutoff: usize) -> Option<usize> {
    (cutoff < max_cutoff).then(|| ((cutoff * 5 / 4).div_ceil(8) * 8).min(max_cutoff))
}

fn gaussian_after_opa1(cfg: &InterferometerConfig) -> GaussianState {
    GaussianState::prepare_input(cfg.r, cfg.theta_xi, cfg.beta, cfg.theta_beta).apply_two_mode_squeezer(cfg.g1, cfg.theta1)
}

/// Runs `attempt` from `cutoff`, growing it by a quarter until the tail weight
/// meets [`required_tail`]. `tail` gives the tail weight and the smallest `Γ₂`.
fn grow_until_resolved<T>(
    mut cutoff: usize,
    max_cutoff: usize,
    mut attempt: impl FnMut(usize) -> Result<T>,
    tail: impl Fn(&T) -> (f64, f64),
) -> Result<T> {
    loop {
        let next = next_cutoff(cutoff, max_cutoff);
        match attempt(cutoff) {
            Ok(v) => {
                let (tail_mass, gamma2) = tail(&v);
                let limit = required_tail(cutoff, gamma2);
                if tail_mass < limit {
                    return Ok(v);
                }
                if next.is_none() {
                    return Err(Error::Truncation { tail_mass, limit, cutoff });
                }
            }
            Err(e @ Error::Truncation { .. }) if next.is_none() => return Err(e),
            Err(Error::Truncation { .. }) => {}
            Err(e) => return Err(e),
        }
        cutoff = next.unwrap_or(max_cutoff);
    }
}

/// Runs [`fock_probe_moments`] at growing cutoffs, starting from a Gaussian
/// prediction, and returns the first whose tail weight meets [`required_tail`].
pub fn fock_probe_moments_auto(cfg: &InterferometerConfig, max_cutoff: usize) -> Result<ProbeMoments> {
    cfg.validate()?;
    let probe = gaussian_probe(cfg);
    let gamma2 = smallest_gamma2([Mode::A, Mode::B].map(|m| probe.photon_moments(m)));
    let start = predicted_cutoff(&[gaussian_after_opa1(cfg), probe], gamma2, max_cutoff);
    grow_until_resolved(start, max_cutoff, |d| fock_probe_moments(cfg, d), |m| {
        (m.tail_mass, smallest_gamma2(m.photons))
    })
}

/// Full lossless Fock pipeline at the first cutoff, grown as in
/// [`fock_probe_moments_auto`], whose output tail weight meets [`required_tail`].
pub fn fock_output_auto(cfg: &InterferometerConfig, max_cutoff: usize) -> Result<FockState> {
    cfg.validate()?;
    let out = evolve_full(cfg, None, Backend::Gaussian)?.as_gaussian().expect("Gaussian backend").clone();
    let gamma2 = smallest_gamma2([Mode::A, Mode::B].map(|m| out.photon_moments(m)));
    let start = predicted_cutoff(&[gaussian_after_opa1(cfg), gaussian_probe(cfg), out], gamma2, max_cutoff);
    grow_until_resolved(
        start,
        max_cutoff,
        |d| match evolve_full(cfg, None, Backend::Fock { cutoff: d })? {
            PipelineState::Fock(s) => Ok(s),
            PipelineState::Gaussian(_) => unreachable!("Fock backend"),
        },
        |s| (s.tail_mass(), smallest_gamma2([Mode::A, Mode::B].map(|m| s.photon_moments(m)))),
    )
}
