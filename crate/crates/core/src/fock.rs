//! Brute-force truncated Fock-space simulation of two bosonic modes.
//!
//! This is the reference the Gaussian engine is checked against, so it shares
//! no code with it: states are explicit amplitude grids, unitaries are the
//! exponentials of their generators restricted to the truncated basis.
//!
//! Every generator used here is tridiagonal along some chain of basis states
//! (a row or column of the grid for a displacement, a diagonal with fixed
//! `n_a − n_b` for the two-mode squeezer). `exp(G) v` is evaluated per chain
//! with a Chebyshev expansion, sliced in time so that each slice only touches
//! the part of the chain the amplitude has actually reached.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{Mode, PhotonMoments};

pub const DEFAULT_TAIL_TOL: f64 = 1e-8;

/// A unitary together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Generator {
    /// `exp(g e^{−iθ} ab − g e^{iθ} a†b†)`
    TwoModeSqueezer { g: f64, theta: f64 },
    /// `exp(γ c† − γ* c)` on `mode`, `γ = magnitude · e^{iθ}`
    Displacement { mode: Mode, magnitude: f64, theta: f64 },
    /// `exp(iφ c†c)` on `mode`
    Phase { mode: Mode, phi: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    cutoff: usize,
    tail_tol: f64,
    // row-major over (n_a, n_b)
    amps: Vec<Complex64>,
}

impl FockState {
    fn zeros(cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::Domain(format!("cutoff {cutoff} below 2")));
        }
        Ok(FockState {
            cutoff,
            tail_tol: DEFAULT_TAIL_TOL,
            amps: vec![Complex64::new(0.0, 0.0); cutoff * cutoff],
        })
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::basis(cutoff, 0, 0)
    }

    /// The number state `|n_a, n_b⟩`.
    pub fn basis(cutoff: usize, na: usize, nb: usize) -> Result<Self> {
        let mut s = Self::zeros(cutoff)?;
        if na >= cutoff || nb >= cutoff {
            return Err(Error::Domain(format!("|{na},{nb}⟩ outside cutoff {cutoff}")));
        }
        s.amps[na * cutoff + nb] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Product state from single-mode amplitude lists (truncated to the cutoff).
    pub fn product(cutoff: usize, mode_a: &[Complex64], mode_b: &[Complex64]) -> Result<Self> {
        let mut s = Self::zeros(cutoff)?;
        for (na, &ca) in mode_a.iter().take(cutoff).enumerate() {
            for (nb, &cb) in mode_b.iter().take(cutoff).enumerate() {
                s.amps[na * cutoff + nb] = ca * cb;
            }
        }
        Ok(s)
    }

    /// Squeezed vacuum in mode a times a coherent state in mode b, expanded in
    /// the number basis. The truncated state is not renormalized.
    pub fn prepare_input(
        r: f64,
        theta_xi: f64,
        beta_mag: f64,
        theta_beta: f64,
        cutoff: usize,
    ) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::Domain(format!("cutoff {cutoff} below 2")));
        }
        Self::product(
            cutoff,
            &squeezed_vacuum_amplitudes(r, theta_xi, cutoff),
            &coherent_amplitudes(Complex64::from_polar(beta_mag, theta_beta), cutoff),
        )
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn amplitude(&self, na: usize, nb: usize) -> Complex64 {
        self.amps[na * self.cutoff + nb]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Probability weight on the top tenth of the basis of either mode.
    pub fn tail_mass(&self) -> f64 {
        let d = self.cutoff;
        let start = d - d.div_ceil(10).max(1);
        let mut tail = 0.0;
        for na in 0..d {
            let row = &self.amps[na * d..(na + 1) * d];
            if na >= start {
                tail += row.iter().map(|c| c.norm_sqr()).sum::<f64>();
            } else {
                tail += row[start..].iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
        }
        tail
    }

    /// Applies the unitary and fails if the result has piled more than
    /// `10 × tail_tol` of weight into the top of the basis.
    ///
    /// The truncated generator is anti-Hermitian, so its exponential keeps the
    /// norm; inadequate cutoffs show up as weight reflected off the basis edge,
    /// which is what the tail measures.
    pub fn apply(&self, generator: Generator) -> Result<Self> {
        let out = self.apply_unchecked(generator);
        let limit = 10.0 * self.tail_tol;
        let tail = out.tail_mass();
        let leak = self.norm_sqr() - out.norm_sqr();
        if tail > limit || leak > limit {
            return Err(Error::Truncation {
                tail_mass: tail.max(leak),
                limit,
                cutoff: self.cutoff,
            });
        }
        Ok(out)
    }

    pub fn apply_unchecked(&self, generator: Generator) -> Self {
        let mut out = self.clone();
        match generator {
            Generator::Phase { mode, phi } => out.apply_phase(mode, phi),
            Generator::Displacement { mode, magnitude, theta } => {
                out.apply_displacement(mode, Complex64::from_polar(magnitude, theta))
            }
            Generator::TwoModeSqueezer { g, theta } => {
                out.apply_two_mode_squeezer(Complex64::from_polar(g, theta))
            }
        }
        out
    }

    fn apply_phase(&mut self, mode: Mode, phi: f64) {
        let d = self.cutoff;
        let phases: Vec<Complex64> = (0..d).map(|n| Complex64::from_polar(1.0, phi * n as f64)).collect();
        for na in 0..d {
            for nb in 0..d {
                let n = if mode == Mode::A { na } else { nb };
                self.amps[na * d + nb] *= phases[n];
            }
        }
    }

    fn apply_displacement(&mut self, mode: Mode, gamma: Complex64) {
        if gamma.norm() == 0.0 {
            return;
        }
        let d = self.cutoff;
        let sqrt = sqrt_table(d + 1);
        // (G v)[n] = γ √n v[n−1] − γ* √(n+1) v[n+1]; the gauge v[n] = e^{i n arg γ} w[n]
        // makes the chain operator real.
        let amp = gamma.norm();
        let lower: Vec<f64> = (0..d).map(|n| amp * sqrt[n]).collect();
        let upper: Vec<f64> = (0..d).map(|n| if n + 1 < d { -amp * sqrt[n + 1] } else { 0.0 }).collect();
        let gauge = phase_table(gamma.arg(), d);
        let (start_step, step) = match mode {
            Mode::A => (1, d),
            Mode::B => (d, 1),
        };
        let mut buf = vec![Complex64::new(0.0, 0.0); d];
        let mut workspace = ChebyshevWorkspace::default();
        for chain in 0..d {
            let start = chain * start_step;
            gather(&self.amps, start, step, &mut buf);
            if expm_chain_gauged(&mut buf, &lower, &upper, &gauge, DISPLACEMENT_SLICE, &mut workspace) {
                scatter(&mut self.amps, start, step, &buf);
            }
        }
    }

    fn apply_two_mode_squeezer(&mut self, zeta: Complex64) {
        if zeta.norm() == 0.0 {
            return;
        }
        let d = self.cutoff;
        let mut buf = Vec::with_capacity(d);
        let mut lower = Vec::with_capacity(d);
        let mut upper = Vec::with_capacity(d);
        let mut workspace = ChebyshevWorkspace::default();
        let amp = zeta.norm();
        let gauge = phase_table(zeta.arg(), d);
        // chain k holds |j + ka, j + kb⟩ with n_a − n_b = ka − kb
        for diff in -(d as isize - 1)..(d as isize) {
            let (ka, kb) = if diff >= 0 { (diff as usize, 0) } else { (0, (-diff) as usize) };
            let len = d - ka.max(kb);
            let start = ka * d + kb;
            buf.resize(len, Complex64::new(0.0, 0.0));
            gather(&self.amps, start, d + 1, &mut buf);
            if buf.iter().all(|c| c.norm_sqr() == 0.0) {
                continue;
            }
            // (G v)[j] = −ζ c(j) v[j−1] + ζ* c(j+1) v[j+1],  c(j) = √((j+ka)(j+kb)),
            // real after the gauge v[j] = e^{i j arg ζ} w[j]
            let c = |j: usize| (((j + ka) * (j + kb)) as f64).sqrt();
            lower.clear();
            upper.clear();
            for j in 0..len {
                lower.push(-amp * c(j));
                upper.push(if j + 1 < len { amp * c(j + 1) } else { 0.0 });
            }
            if expm_chain_gauged(&mut buf, &lower, &upper, &gauge[..len], SQUEEZER_SLICE, &mut workspace) {
                scatter(&mut self.amps, start, d + 1, &buf);
            }
        }
    }

    /// `Γ₁`, `Γ₂` and the number variance of `mode`, summed over the grid.
    pub fn photon_moments(&self, mode: Mode) -> PhotonMoments {
        let d = self.cutoff;
        let mut g1 = 0.0;
        let mut g2 = 0.0;
        for na in 0..d {
            for nb in 0..d {
                let p = self.amps[na * d + nb].norm_sqr();
                let n = if mode == Mode::A { na } else { nb } as f64;
                g1 += n * p;
                g2 += n * (n - 1.0) * p;
            }
        }
        PhotonMoments::from_gammas(g1, g2)
    }

    /// `(⟨X⟩, Δ²X)` for `X = (c + c†)/√2` on `mode`.
    pub fn quadrature_moments(&self, mode: Mode) -> (f64, f64) {
        let d = self.cutoff;
        let sqrt = sqrt_table(d + 1);
        let (start_step, step) = match mode {
            Mode::A => (1, d),
            Mode::B => (d, 1),
        };
        let mut mean = 0.0;
        let mut second = 0.0;
        let mut buf = vec![Complex64::new(0.0, 0.0); d];
        for chain in 0..d {
            gather(&self.amps, chain * start_step, step, &mut buf);
            // X ψ including the component pushed to |d⟩
            for n in 0..=d {
                let mut x = Complex64::new(0.0, 0.0);
                if n > 0 {
                    x += buf[n - 1] * sqrt[n];
                }
                if n + 1 < d {
                    x += buf[n + 1] * sqrt[n + 1];
                }
                x /= std::f64::consts::SQRT_2;
                if n < d {
                    mean += (buf[n].conj() * x).re;
                }
                second += x.norm_sqr();
            }
        }
        (mean, second - mean * mean)
    }
}

/// Number-basis amplitudes of `S(ξ)|0⟩`, `ξ = r e^{iθ}`.
pub fn squeezed_vacuum_amplitudes(r: f64, theta: f64, cutoff: usize) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); cutoff];
    let ratio = -Complex64::from_polar(r.tanh(), theta);
    let mut c = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    let mut n = 0usize;
    while 2 * n < cutoff {
        amps[2 * n] = c;
        let k = 2 * n;
        c *= ratio * (((k + 1) * (k + 2)) as f64).sqrt() / (2.0 * (n + 1) as f64);
        n += 1;
    }
    amps
}

/// Number-basis amplitudes of the coherent state `|α⟩`.
pub fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(cutoff);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..cutoff {
        amps.push(c);
        c *= alpha / ((n + 1) as f64).sqrt();
    }
    amps
}

fn phase_table(theta: f64, len: usize) -> Vec<Complex64> {
    (0..len).map(|n| Complex64::from_polar(1.0, theta * n as f64)).collect()
}

/// `expm_chain` conjugated by the diagonal `gauge`.
fn expm_chain_gauged(
    v: &mut [Complex64],
    lower: &[f64],
    upper: &[f64],
    gauge: &[Complex64],
    slice: f64,
    ws: &mut ChebyshevWorkspace,
) -> bool {
    for (x, g) in v.iter_mut().zip(gauge) {
        *x *= g.conj();
    }
    let touched = expm_chain(v, lower, upper, slice, ws);
    for (x, g) in v.iter_mut().zip(gauge) {
        *x *= g;
    }
    touched
}

fn sqrt_table(len: usize) -> Vec<f64> {
    (0..len).map(|n| (n as f64).sqrt()).collect()
}

fn gather(amps: &[Complex64], start: usize, step: usize, out: &mut [Complex64]) {
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = amps[start + j * step];
    }
}

fn scatter(amps: &mut [Complex64], start: usize, step: usize, src: &[Complex64]) {
    for (j, &c) in src.iter().enumerate() {
        amps[start + j * step] = c;
    }
}

// Amplitudes below this magnitude at the edge of a chain's support are dropped.
const TRIM: f64 = 1e-20;
// Target `ν τ` per time slice. Displacement row norms grow like √n, so long
// slices cost little extra window; squeezer rows grow like n.
const SQUEEZER_SLICE: f64 = 160.0;
const DISPLACEMENT_SLICE: f64 = 150.0;

#[derive(Default)]
struct ChebyshevWorkspace {
    prev: Vec<f64>,
    cur: Vec<f64>,
    acc: Vec<f64>,
    lo: Vec<f64>,
    up: Vec<f64>,
}

fn support(v: &[Complex64]) -> Option<(usize, usize)> {
    let lo = v.iter().position(|c| c.norm() > TRIM)?;
    let hi = v.iter().rposition(|c| c.norm() > TRIM)?;
    Some((lo, hi))
}

/// Replaces `v` by `exp(G) v` where `(G v)[j] = lower[j] v[j−1] + upper[j] v[j+1]`
/// and `G` is real antisymmetric. Returns false when `v` was left untouched.
fn expm_chain(
    v: &mut [Complex64],
    lower: &[f64],
    upper: &[f64],
    slice: f64,
    ws: &mut ChebyshevWorkspace,
) -> bool {
    let len = v.len();
    let Some((mut lo, mut hi)) = support(v) else {
        return false;
    };
    v[..lo].fill(Complex64::new(0.0, 0.0));
    v[hi + 1..].fill(Complex64::new(0.0, 0.0));
    let row_norm = |j: usize| lower[j].abs() + upper[j].abs();

    let mut remaining = 1.0f64;
    while remaining > 0.0 {
        // Spectral bound over the reachable window; grow the margin until the
        // expansion length fits inside it.
        let mut margin = 16;
        let (w_lo, w_hi, nu, tau, coeffs) = loop {
            let w_lo = lo.saturating_sub(margin);
            let w_hi = (hi + margin).min(len - 1);
            let nu = (w_lo..=w_hi).map(row_norm).fold(0.0, f64::max);
            if nu == 0.0 {
                return true;
            }
            let tau = remaining.min(slice / nu);
            let coeffs = bessel_j_series(nu * tau);
            if coeffs.len() <= margin || (w_lo == 0 && w_hi == len - 1) {
                break (w_lo, w_hi, nu, tau, coeffs);
            }
            margin = coeffs.len() + 8;
        };
        chebyshev_slice(&mut v[w_lo..=w_hi], &lower[w_lo..=w_hi], &upper[w_lo..=w_hi], nu, &coeffs, ws);
        // the last slice absorbs rounding in `remaining`
        remaining = if tau >= remaining { 0.0 } else { remaining - tau };

        match support(&v[w_lo..=w_hi]) {
            Some((a, b)) => {
                lo = w_lo + a;
                hi = w_lo + b;
                v[w_lo..lo].fill(Complex64::new(0.0, 0.0));
                v[hi + 1..=w_hi].fill(Complex64::new(0.0, 0.0));
            }
            None => {
                v.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
                return true;
            }
        }
    }
    true
}

/// `v ← Σ_k c_k J_k(x) u_k` with `u_0 = v`, `u_1 = A v`, `u_{k+1} = 2 A u_k + u_{k−1}`,
/// `A = G/ν`; this is the Jacobi–Anger expansion of `exp(x A)` for antisymmetric `A`.
///
/// `A` is real, so the work runs on interleaved `(re, im)` pairs as one real
/// stencil of reach 2, padded with two zeros at each end.
fn chebyshev_slice(
    v: &mut [Complex64],
    lower: &[f64],
    upper: &[f64],
    nu: f64,
    bessel: &[f64],
    ws: &mut ChebyshevWorkspace,
) {
    let n = v.len();
    let m = 2 * n;
    let inv_nu = 1.0 / nu;
    ws.lo.clear();
    ws.up.clear();
    for j in 0..n {
        let l = if j > 0 { lower[j] * inv_nu } else { 0.0 };
        let u = if j + 1 < n { upper[j] * inv_nu } else { 0.0 };
        ws.lo.extend([l, l]);
        ws.up.extend([u, u]);
    }
    for buf in [&mut ws.prev, &mut ws.cur] {
        buf.clear();
        buf.resize(m + 4, 0.0);
    }
    ws.acc.clear();
    ws.acc.resize(m, 0.0);
    for (j, c) in v.iter().enumerate() {
        ws.prev[2 + 2 * j] = c.re;
        ws.prev[3 + 2 * j] = c.im;
    }

    let j0 = bessel[0];
    let j1 = 2.0 * bessel.get(1).copied().unwrap_or(0.0);
    {
        let (p, c) = (&ws.prev, &mut ws.cur[2..m + 2]);
        let terms = c.iter_mut().zip(ws.acc.iter_mut()).zip(p[..m].iter().zip(&p[4..])).zip(&p[2..m + 2]);
        for ((((c, a), (&below, &above)), &here), (&l, &u)) in terms.zip(ws.lo.iter().zip(&ws.up)) {
            *c = below * l + above * u;
            *a = here * j0 + *c * j1;
        }
    }
    for x in ws.lo.iter_mut().chain(ws.up.iter_mut()) {
        *x *= 2.0;
    }
    // u_{k+1} overwrites u_{k−1} in place: entry j of the new vector needs only
    // entry j of the old one.
    let ChebyshevWorkspace { prev, cur, acc, lo, up } = ws;
    recurrence(prev, cur, acc, lo, up, &bessel[2.min(bessel.len())..]);
    for (j, c) in v.iter_mut().enumerate() {
        *c = Complex64::new(ws.acc[2 * j], ws.acc[2 * j + 1]);
    }
}

/// Runs `u_{k+1} = 2A u_k + u_{k−1}` for every weight, accumulating `2 J_k u_k`.
/// The two vectors swap roles each step.
#[inline(always)]
fn recurrence_body(
    prev: &mut [f64],
    cur: &mut [f64],
    acc: &mut [f64],
    lo: &[f64],
    up: &[f64],
    weights: &[f64],
) {
    let m = acc.len();
    let (mut a, mut b) = (prev, cur);
    for &jk in weights {
        let w = 2.0 * jk;
        let (c, p) = (&*b, &mut a[2..m + 2]);
        let terms = p.iter_mut().zip(acc.iter_mut()).zip(c[..m].iter().zip(&c[4..]));
        for (((p, acc), (&below, &above)), (&l, &u)) in terms.zip(lo.iter().zip(up)) {
            let next = below * l + above * u + *p;
            *p = next;
            *acc += next * w;
        }
        std::mem::swap(&mut a, &mut b);
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2,fma")]
unsafe fn recurrence_avx2(
    prev: &mut [f64],
    cur: &mut [f64],
    acc: &mut [f64],
    lo: &[f64],
    up: &[f64],
    weights: &[f64],
) {
    recurrence_body(prev, cur, acc, lo, up, weights)
}

fn recurrence(prev: &mut [f64], cur: &mut [f64], acc: &mut [f64], lo: &[f64], up: &[f64], weights: &[f64]) {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("avx2") && std::arch::is_x86_feature_detected!("fma") {
        // SAFETY: the CPU supports the enabled features.
        return unsafe { recurrence_avx2(prev, cur, acc, lo, up, weights) };
    }
    recurrence_body(prev, cur, acc, lo, up, weights)
}

/// `J_0(x), J_1(x), …` up to the last order above 1e-20, by Miller's backward
/// recurrence normalized with `J_0 + 2 Σ J_2k = 1`.
pub(crate) fn bessel_j_series(x: f64) -> Vec<f64> {
    if x == 0.0 {
        return vec![1.0];
    }
    let top = (x + 12.0 * x.cbrt() + 50.0).ceil() as usize;
    let top = top + top % 2;
    let mut vals = vec![0.0f64; top + 2];
    vals[top] = 1e-300;
    for k in (1..=top).rev() {
        vals[k - 1] = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().step_by(2).skip(1).sum::<f64>();
    let mut out: Vec<f64> = vals[..=top].iter().map(|v| v / norm).collect();
    while out.len() > 1 && out.last().is_some_and(|v| v.abs() < 1e-20) && (out.len() as f64) > x {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn bessel_values() {
        let j = bessel_j_series(1.0);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-15);
        let j = bessel_j_series(40.0);
        // J_0(40), J_40(40) from standard tables
        assert!((j[0] - 0.007_366_890_584_237_291).abs() < 1e-14);
        assert!((j[40] - 0.130_780_545_285_166_2).abs() < 1e-12, "{}", j[40]);
        assert!(j.len() > 60 && j.len() < 130);
    }

    #[test]
    fn cutoff_below_two_is_rejected() {
        assert!(matches!(FockState::prepare_input(0.0, 0.0, 0.0, 0.0, 1), Err(Error::Domain(_))));
        assert!(FockState::vacuum(1).is_err());
    }

    #[test]
    fn prepare_input_cases() {
        let v = FockState::prepare_input(0.0, 0.0, 0.0, 0.0, 8).unwrap();
        assert_eq!(v, FockState::vacuum(8).unwrap());

        let sq = FockState::prepare_input(1.0, 0.0, 0.0, 0.0, 200).unwrap();
        for na in (1..40).step_by(2) {
            assert_eq!(sq.amplitude(na, 0), Complex64::new(0.0, 0.0));
        }
        let coh = FockState::prepare_input(0.0, 0.0, 1.0, 0.0, 40).unwrap();
        assert!((coh.photon_moments(Mode::B).mean - 1.0).abs() < 1e-10);
        assert!(coh.norm_sqr() <= 1.0);
    }

    #[test]
    fn phase_is_diagonal() {
        let s = FockState::prepare_input(0.5, 0.2, 1.2, 0.4, 24).unwrap();
        let phi = 0.73;
        let p = s.apply(Generator::Phase { mode: Mode::B, phi }).unwrap();
        for na in 0..24 {
            for nb in 0..24 {
                let expect = s.amplitude(na, nb) * Complex64::from_polar(1.0, phi * nb as f64);
                assert!((p.amplitude(na, nb) - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn two_mode_squeezed_vacuum_photon_numbers() {
        let s = FockState::vacuum(256)
            .unwrap()
            .apply(Generator::TwoModeSqueezer { g: 1.0, theta: 0.0 })
            .unwrap();
        let sh2 = 1.0f64.sinh().powi(2);
        assert!((s.photon_moments(Mode::A).mean - sh2).abs() < 1e-10);
        assert!((s.photon_moments(Mode::B).mean - sh2).abs() < 1e-10);
        assert!((s.photon_moments(Mode::B).variance - sh2 * 1.0f64.cosh().powi(2)).abs() < 1e-9);
        // textbook amplitudes (−tanh g)^n / cosh g on the diagonal
        let th = 1.0f64.tanh();
        for n in 0..10 {
            let expect = (-th).powi(n as i32) / 1.0f64.cosh();
            assert!((s.amplitude(n, n).re - expect).abs() < 1e-12);
            assert!(s.amplitude(n, n).im.abs() < 1e-12);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn displacement_of_vacuum() {
        let s = FockState::vacuum(64)
            .unwrap()
            .apply(Generator::Displacement { mode: Mode::A, magnitude: 1.0, theta: 0.0 })
            .unwrap();
        assert!((s.photon_moments(Mode::A).mean - 1.0).abs() < 1e-10);
        let expect = coherent_amplitudes(Complex64::new(1.0, 0.0), 64);
        for n in 0..20 {
            assert!((s.amplitude(n, 0) - expect[n]).norm() < 1e-13);
        }
    }

    #[test]
    fn number_state_moments() {
        let s = FockState::basis(8, 0, 1).unwrap();
        let m = s.photon_moments(Mode::B);
        assert_eq!((m.gamma1, m.gamma2, m.variance), (1.0, 0.0, 0.0));
        let v = FockState::vacuum(8).unwrap().photon_moments(Mode::A);
        assert_eq!((v.gamma1, v.gamma2, v.variance), (0.0, 0.0, 0.0));
    }

    #[test]
    fn coherent_second_factorial_moment() {
        let coh = FockState::prepare_input(0.0, 0.0, 1.0, 0.0, 40).unwrap();
        assert!((coh.photon_moments(Mode::B).gamma2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_cases() {
        let (m, v) = FockState::vacuum(8).unwrap().quadrature_moments(Mode::A);
        assert!(m.abs() < 1e-15 && (v - 0.5).abs() < 1e-15);
        let coh = FockState::prepare_input(0.0, 0.0, 1.0, FRAC_PI_2, 40).unwrap();
        assert!(coh.quadrature_moments(Mode::B).0.abs() < 1e-14);
        let sq = FockState::prepare_input(1.0, 0.0, 0.0, 0.0, 200).unwrap();
        let (_, var) = sq.quadrature_moments(Mode::A);
        assert!((var - (-2.0f64).exp() / 2.0).abs() < 1e-8);
    }

    #[test]
    fn tail_mass_cases() {
        assert_eq!(FockState::vacuum(16).unwrap().tail_mass(), 0.0);

        let tmsv = |d| FockState::vacuum(d).unwrap().apply_unchecked(Generator::TwoModeSqueezer { g: 2.0, theta: 0.0 });
        let small = tmsv(20).tail_mass();
        assert!(small > 1e-8);
        let big = tmsv(512).tail_mass();
        assert!(big < 1e-8, "{big}");
        // the checked path refuses the inadequate cutoff
        let err = FockState::vacuum(20).unwrap().apply(Generator::TwoModeSqueezer { g: 2.0, theta: 0.0 });
        assert!(matches!(err, Err(Error::Truncation { .. })));
    }

    #[test]
    fn tail_mass_shrinks_with_cutoff() {
        let mut last = f64::INFINITY;
        for d in [16, 24, 32, 48, 64, 96] {
            let s = FockState::prepare_input(0.8, 0.3, 1.5, 0.2, d)
                .unwrap()
                .apply_unchecked(Generator::TwoModeSqueezer { g: 0.6, theta: 0.0 });
            let t = s.tail_mass();
            assert!(t <= last * (1.0 + 1e-12), "cutoff {d}: {t} > {last}");
            last = t;
        }
    }

    #[test]
    fn generators_preserve_norm() {
        let s = FockState::prepare_input(0.5, 0.1, 1.0, 0.3, 48).unwrap();
        let n0 = s.norm_sqr();
        for generator in [
            Generator::TwoModeSqueezer { g: 0.4, theta: 0.7 },
            Generator::Displacement { mode: Mode::A, magnitude: 0.9, theta: -0.4 },
            Generator::Displacement { mode: Mode::B, magnitude: 1.1, theta: 2.0 },
        ] {
            let out = s.apply_unchecked(generator);
            assert!((out.norm_sqr() - n0).abs() < 1e-12, "{generator:?}");
        }
    }
}
