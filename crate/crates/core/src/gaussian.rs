//! Two-mode Gaussian states in the quadrature picture.
//!
//! Quadratures follow `X = (a + a†)/√2`, `P = (a − a†)/(i√2)`, so the vacuum
//! has variance 1/2 in every quadrature. Mean and covariance are indexed as
//! `(x_a, p_a, x_b, p_b)`; the symplectic form is the direct sum of
//! `[[0, 1], [−1, 0]]` blocks.
//!
//! Every unitary acts through its Heisenberg-picture Bogoliubov map
//! `α' = M α + N α†`, converted to a real symplectic matrix.

use nalgebra::{Matrix4, SMatrix, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// One of the two interferometer arms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    pub(crate) fn offset(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 2,
        }
    }

    pub(crate) fn index(self) -> usize {
        self.offset() / 2
    }
}

/// Normally ordered photon-number moments of a single mode.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhotonMoments {
    /// `⟨b†b⟩`
    pub gamma1: f64,
    /// `⟨b†²b²⟩`
    pub gamma2: f64,
    /// `⟨n⟩`, identical to `gamma1`.
    pub mean: f64,
    /// `⟨Δ²n⟩ = Γ₂ + Γ₁ − Γ₁²`
    pub variance: f64,
}

impl PhotonMoments {
    pub fn from_gammas(gamma1: f64, gamma2: f64) -> Self {
        PhotonMoments {
            gamma1,
            gamma2,
            mean: gamma1,
            variance: gamma2 + gamma1 - gamma1 * gamma1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: Vector4<f64>,
    cov: Matrix4<f64>,
}

/// The 4×4 symplectic form in `(x_a, p_a, x_b, p_b)` ordering.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut omega = Matrix4::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    omega
}

/// Real symplectic matrix of the Bogoliubov map `α'_j = Σ_k M_jk α_k + N_jk α_k†`.
pub fn bogoliubov_symplectic(m: [[Complex64; 2]; 2], n: [[Complex64; 2]; 2]) -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    for j in 0..2 {
        for k in 0..2 {
            let plus = m[j][k] + n[j][k];
            let minus = m[j][k] - n[j][k];
            s[(2 * j, 2 * k)] = plus.re;
            s[(2 * j, 2 * k + 1)] = -minus.im;
            s[(2 * j + 1, 2 * k)] = plus.im;
            s[(2 * j + 1, 2 * k + 1)] = minus.re;
        }
    }
    s
}

/// Symplectic matrix of `exp(g e^{−iθ} ab − g e^{iθ} a†b†)`.
pub fn two_mode_squeezer_matrix(g: f64, theta: f64) -> Matrix4<f64> {
    let zero = Complex64::new(0.0, 0.0);
    let ch = Complex64::new(g.cosh(), 0.0);
    let cross = -Complex64::from_polar(g.sinh(), theta);
    bogoliubov_symplectic([[ch, zero], [zero, ch]], [[zero, cross], [cross, zero]])
}

/// Symplectic matrix of the single-mode squeezer `exp[(ξ* a² − ξ a†²)/2]`, `ξ = r e^{iθ}`.
pub fn squeezer_matrix(mode: Mode, r: f64, theta: f64) -> Matrix4<f64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[one, zero], [zero, one]];
    let mut n = [[zero, zero], [zero, zero]];
    let i = mode.index();
    m[i][i] = Complex64::new(r.cosh(), 0.0);
    n[i][i] = -Complex64::from_polar(r.sinh(), theta);
    bogoliubov_symplectic(m, n)
}

/// Symplectic matrix of the phase shifter `exp(iφ n̂)` on `mode`.
pub fn phase_matrix(mode: Mode, phi: f64) -> Matrix4<f64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[one, zero], [zero, one]];
    m[mode.index()][mode.index()] = Complex64::from_polar(1.0, phi);
    bogoliubov_symplectic(m, [[zero, zero], [zero, zero]])
}

impl GaussianState {
    pub fn vacuum() -> Self {
        GaussianState {
            mean: Vector4::zeros(),
            cov: Matrix4::identity() * 0.5,
        }
    }

    /// Builds a state from raw moments; the covariance is symmetrized.
    pub fn from_moments(mean: Vector4<f64>, cov: Matrix4<f64>) -> Self {
        let cov = (cov + cov.transpose()) * 0.5;
        GaussianState { mean, cov }
    }

    /// Squeezed vacuum `ξ = r e^{iθ_ξ}` in mode a, coherent `|β⟩` in mode b.
    pub fn prepare_input(r: f64, theta_xi: f64, beta_mag: f64, theta_beta: f64) -> Self {
        Self::vacuum()
            .apply_symplectic(&squeezer_matrix(Mode::A, r, theta_xi))
            .apply_displacement(Mode::B, beta_mag, theta_beta)
    }

    pub fn mean(&self) -> &Vector4<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix4<f64> {
        &self.cov
    }

    /// `mean → S mean`, `cov → S cov Sᵀ`.
    pub fn apply_symplectic(&self, s: &Matrix4<f64>) -> Self {
        Self::from_moments(s * self.mean, s * self.cov * s.transpose())
    }

    pub fn apply_two_mode_squeezer(&self, g: f64, theta: f64) -> Self {
        self.apply_symplectic(&two_mode_squeezer_matrix(g, theta))
    }

    pub fn apply_displacement(&self, mode: Mode, magnitude: f64, theta: f64) -> Self {
        let mut out = self.clone();
        let o = mode.offset();
        out.mean[o] += std::f64::consts::SQRT_2 * magnitude * theta.cos();
        out.mean[o + 1] += std::f64::consts::SQRT_2 * magnitude * theta.sin();
        out
    }

    pub fn apply_phase(&self, mode: Mode, phi: f64) -> Self {
        self.apply_symplectic(&phase_matrix(mode, phi))
    }

    /// Pure-loss channel of transmissivity `t`: a beam splitter coupling `mode`
    /// to vacuum, with the ancilla traced out.
    pub fn apply_loss(&self, mode: Mode, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("transmissivity {t} outside [0, 1]")));
        }
        let o = mode.offset();
        let amp = t.sqrt();
        let mut scale = Vector4::repeat(1.0);
        scale[o] = amp;
        scale[o + 1] = amp;

        let mean = self.mean.component_mul(&scale);
        let mut cov = self.cov;
        for i in 0..4 {
            for j in 0..4 {
                cov[(i, j)] *= scale[i] * scale[j];
            }
        }
        cov[(o, o)] += 0.5 * (1.0 - t);
        cov[(o + 1, o + 1)] += 0.5 * (1.0 - t);
        Ok(Self::from_moments(mean, cov))
    }

    /// `(⟨X⟩, Δ²X)` of the amplitude quadrature of `mode`.
    pub fn quadrature_moments(&self, mode: Mode) -> (f64, f64) {
        let o = mode.offset();
        (self.mean[o], self.cov[(o, o)])
    }

    /// Photon-number moments via Gaussian moment factorization.
    pub fn photon_moments(&self, mode: Mode) -> PhotonMoments {
        let o = mode.offset();
        let (vxx, vpp, vxp) = (self.cov[(o, o)], self.cov[(o + 1, o + 1)], self.cov[(o, o + 1)]);
        let mu = Complex64::new(self.mean[o], self.mean[o + 1]) / std::f64::consts::SQRT_2;
        // ⟨δb†δb⟩ and ⟨δb δb⟩
        let thermal = 0.5 * (vxx + vpp - 1.0);
        let anomalous = Complex64::new(0.5 * (vxx - vpp), vxp);

        let mu2 = mu.norm_sqr();
        let gamma1 = mu2 + thermal;
        let gamma2 = mu2 * mu2
            + 4.0 * mu2 * thermal
            + 2.0 * (mu.conj() * mu.conj() * anomalous).re
            + 2.0 * thermal * thermal
            + anomalous.norm_sqr();
        PhotonMoments::from_gammas(gamma1, gamma2)
    }

    /// A level `N` with `P(n ≥ N) ≤ tol` for the photon number of `mode`, from
    /// the Chernoff bound `P(n ≥ N) ≤ ⟨zⁿ⟩ z^{−N}` minimized over `z > 1`.
    pub fn photon_number_reach(&self, mode: Mode, tol: f64) -> f64 {
        let o = mode.offset();
        // P-function covariance and mean, so that ⟨zⁿ⟩ = E[exp((z − 1)|α|²)]
        let sxx = self.cov[(o, o)] - 0.5;
        let spp = self.cov[(o + 1, o + 1)] - 0.5;
        let sxp = self.cov[(o, o + 1)];
        let (mx, mp) = (self.mean[o], self.mean[o + 1]);
        let lmax = 0.5 * (sxx + spp) + (0.25 * (sxx - spp).powi(2) + sxp * sxp).sqrt();
        let z_span = if lmax > 1e-12 { (1.0 / lmax).min(1e3) } else { 1e3 };
        let mut best = f64::INFINITY;
        // z − 1 on a log grid from 1e-4 up to just below the pole at 1 + 1/λmax
        for k in 0..400 {
            let z = 1.0 + 1e-4 * (0.999 * z_span / 1e-4).powf(k as f64 / 399.0);
            let s = 1.0 - z;
            // I + sΣ
            let (a, b, d) = (1.0 + s * sxx, s * sxp, 1.0 + s * spp);
            let det = a * d - b * b;
            if det <= 0.0 || a <= 0.0 {
                continue;
            }
            let quad = (d * mx * mx - 2.0 * b * mx * mp + a * mp * mp) / det;
            let log_gen = -0.5 * det.ln() - 0.5 * s * quad;
            best = best.min((log_gen - tol.ln()) / z.ln());
        }
        best
    }

    pub fn total_photon_number(&self) -> f64 {
        self.photon_moments(Mode::A).mean + self.photon_moments(Mode::B).mean
    }

    pub fn det_cov(&self) -> f64 {
        self.cov.determinant()
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + (i/2)Ω`.
    /// Physical states have it at or above zero.
    pub fn uncertainty_margin(&self) -> f64 {
        let half_omega = symplectic_form() * 0.5;
        // Real embedding of A + iB: [[A, −B], [B, A]].
        let mut real = SMatrix::<f64, 8, 8>::zeros();
        real.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.cov);
        real.fixed_view_mut::<4, 4>(4, 4).copy_from(&self.cov);
        real.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-half_omega));
        real.fixed_view_mut::<4, 4>(4, 0).copy_from(&half_omega);
        SymmetricEigen::new(real).eigenvalues.min()
    }
}
