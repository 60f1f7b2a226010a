//! Self-check suites: Fock oracle against the Gaussian engine, closed forms
//! against their general counterparts, and the lossless limits.

use std::fmt;

use crate::error::Result;
use crate::fock::DEFAULT_TAIL_TOL;
use crate::gaussian::Mode;
use crate::homodyne::{self, PhaseGrid};
use crate::interferometer::{
    closed_form_photon_number, evolve_full, fock_output_auto, fock_probe_moments_auto, gaussian_probe_moments,
    probe_state, Backend, InterferometerConfig,
};
use crate::metrology;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Oracle,
    ClosedForm,
    Limits,
}

impl std::str::FromStr for CheckMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(CheckMode::Oracle),
            "closed-form" | "closed_form" => Ok(CheckMode::ClosedForm),
            "limits" => Ok(CheckMode::Limits),
            other => Err(crate::Error::Domain(format!("unknown check `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Records the worst relative deviation of a group of comparisons.
struct Worst {
    name: String,
    tol: f64,
    worst: f64,
    at: String,
    error: Option<String>,
}

impl Worst {
    fn new(name: &str, tol: f64) -> Self {
        Worst { name: name.into(), tol, worst: 0.0, at: String::new(), error: None }
    }

    /// `|a − b| / max(1, |b|)` in units of `scale × tol`.
    fn rel(&mut self, a: f64, b: f64, scale: f64, at: &str) {
        let dev = (a - b).abs() / b.abs().max(1.0) / (scale * self.tol);
        if !(dev <= self.worst) {
            self.worst = dev;
            self.at = format!("{at} ({a} vs {b})");
        }
    }

    fn abs(&mut self, a: f64, b: f64, at: &str) {
        let dev = (a - b).abs() / self.tol;
        if !(dev <= self.worst) {
            self.worst = dev;
            self.at = format!("{at} ({a} vs {b})");
        }
    }

    fn fail(&mut self, at: &str, e: impl fmt::Display) {
        if self.error.is_none() {
            self.error = Some(format!("{at}: {e}"));
        }
    }

    fn line(self) -> CheckLine {
        match self.error {
            Some(e) => CheckLine { name: self.name, pass: false, detail: e },
            None => CheckLine {
                name: self.name,
                pass: self.worst <= 1.0,
                detail: format!("worst {:.3} of tolerance {:e} at {}", self.worst, self.tol, self.at),
            },
        }
    }
}

fn figure(g: f64, r: f64, beta: f64, gamma: f64) -> InterferometerConfig {
    InterferometerConfig::figure(g, r, beta, gamma)
}

fn label(c: &InterferometerConfig) -> String {
    format!("g={} r={} beta={} gamma={} phi={}", c.g1, c.r, c.beta, c.gamma, c.phi)
}

/// Parameter points drawn from the figure presets.
pub(crate) fn preset_points() -> Vec<InterferometerConfig> {
    let mut out = Vec::new();
    for gamma in [0.0, 1.0, 2.0, 3.0] {
        out.push(figure(1.0, 1.0, 1.0, gamma));
    }
    for beta in [1.0, 2.0, 3.0] {
        out.push(figure(2.0, 1.0, beta, 0.0));
        out.push(figure(2.0, 1.0, beta, 5.0));
    }
    for g in [0.5, 1.0, 2.0] {
        out.push(figure(g, 1.0, 3.0, 2.5));
    }
    out.push(figure(0.24, 1.0, 1.0, 1.0));
    out
}

pub fn check(mode: CheckMode) -> Vec<CheckLine> {
    match mode {
        CheckMode::Oracle => oracle(),
        CheckMode::ClosedForm => closed_form(),
        CheckMode::Limits => limits(),
    }
}

/// Fock oracle against the Gaussian engine at a single configuration.
pub fn oracle_point(c: &InterferometerConfig) -> CheckLine {
    let mut probe = Worst::new("probe moments, Fock vs Gaussian", DEFAULT_TAIL_TOL);
    compare_probe(&mut probe, c);
    probe.line()
}

fn compare_probe(probe: &mut Worst, c: &InterferometerConfig) {
    let at = label(c);
    let g = gaussian_probe_moments(c);
    match fock_probe_moments_auto(c, 4096) {
        Ok(f) => {
            let scale = (10.0 * f.tail_mass / DEFAULT_TAIL_TOL).max(1.0);
            let (fb, gb) = (f.photons(Mode::B), g.photons(Mode::B));
            probe.rel(fb.gamma1, gb.gamma1, scale, &format!("{at} Γ1"));
            probe.rel(fb.gamma2, gb.gamma2, scale, &format!("{at} Γ2"));
            let (fx, gx) = (f.quadrature(Mode::A), g.quadrature(Mode::A));
            probe.rel(fx.0, gx.0, scale, &format!("{at} <X>"));
            probe.rel(fx.1, gx.1, scale, &format!("{at} Var X"));
        }
        Err(e) => probe.fail(&at, e),
    }
}

fn oracle() -> Vec<CheckLine> {
    let mut probe = Worst::new("probe moments, Fock vs Gaussian", DEFAULT_TAIL_TOL);
    for c in preset_points() {
        compare_probe(&mut probe, &c);
    }

    let mut output = Worst::new("output moments, Fock vs Gaussian", DEFAULT_TAIL_TOL);
    for c in [
        figure(0.3, 0.5, 1.0, 1.0).with_phi(0.3),
        figure(0.5, 0.3, 0.5, 1.0).with_phi(-0.7),
        figure(0.4, 0.4, 1.0, 0.0).with_phi(1.2),
    ] {
        let at = label(&c);
        let g = match evolve_full(&c, None, Backend::Gaussian) {
            Ok(s) => s,
            Err(e) => {
                output.fail(&at, e);
                continue;
            }
        };
        match fock_output_auto(&c, 256) {
            Ok(f) => {
                let scale = (10.0 * f.tail_mass() / DEFAULT_TAIL_TOL).max(1.0);
                let (fx, gx) = (f.quadrature_moments(Mode::A), g.quadrature_moments(Mode::A));
                output.rel(fx.0, gx.0, scale, &format!("{at} <X>"));
                output.rel(fx.1, gx.1, scale, &format!("{at} Var X"));
                let (fa, ga) = (f.photon_moments(Mode::A), g.photon_moments(Mode::A));
                output.rel(fa.gamma2, ga.gamma2, scale, &format!("{at} Γ2(a)"));
            }
            Err(e) => output.fail(&at, e),
        }
    }
    vec![probe.line(), output.line()]
}

fn closed_form() -> Vec<CheckLine> {
    let mut eq_limit = Worst::new("optimal-point sensitivity vs general form at φ = 1e-8", 1e-6);
    let mut eq_lossy = Worst::new("lossy optimal-point sensitivity vs general lossy form at φ = 0", 1e-12);
    let mut photons = Worst::new("closed-form photon number vs Gaussian probe", 1e-10);
    let mut variance = Worst::new("homodyne variance vs Gaussian engine", 1e-6);
    let mut slope = Worst::new("homodyne slope vs finite difference", 1e-6);
    let mut qfi = Worst::new("QFI, characteristic function vs Gaussian engine", 1e-9);

    for c in preset_points() {
        let at = label(&c);
        let mut run = || -> Result<()> {
            let opt = homodyne::phase_sensitivity_optimal(&c)?;
            eq_limit.rel(homodyne::phase_sensitivity(&c.with_phi(1e-8))? / opt, 1.0, 1.0, &at);
            for t in [0.3, 0.6, 0.9] {
                let closed = homodyne::phase_sensitivity_lossy_optimal(&c, t)?;
                eq_lossy.rel(homodyne::phase_sensitivity_lossy(&c, t)? / closed, 1.0, 1.0, &at);
            }
            let backend = probe_state(&c, Backend::Gaussian)?.total_photon_number();
            photons.rel(closed_form_photon_number(&c) / backend, 1.0, 1.0, &at);
            let (_, cf) = metrology::cf_moments(&c)?;
            let engine = metrology::probe_moments(&c)?;
            qfi.rel(4.0 * cf.variance / (4.0 * engine.variance), 1.0, 1.0, &at);
            for phi in [-0.8, 0.0, 0.35, 1.3] {
                let p = c.with_phi(phi);
                let (_, var) = evolve_full(&p, None, Backend::Gaussian)?.quadrature_moments(Mode::A);
                variance.abs(homodyne::signal_variance(&p)?, var, &at);
                let h = 1e-6;
                let fd = (homodyne::output_signal(&p.with_phi(phi + h))? - homodyne::output_signal(&p.with_phi(phi - h))?)
                    / (2.0 * h);
                slope.abs(homodyne::signal_slope(&p)?, fd, &at);
            }
            Ok(())
        };
        if let Err(e) = run() {
            eq_limit.fail(&at, e);
        }
    }
    vec![eq_limit.line(), eq_lossy.line(), photons.line(), variance.line(), slope.line(), qfi.line()]
}

fn limits() -> Vec<CheckLine> {
    let mut exact = Worst::new("lossless reductions (T = 1, η = 1)", f64::MIN_POSITIVE);
    let mut vacuum = Worst::new("identity interferometer returns its input", 1e-12);
    let mut phase = Worst::new("optimal phase at φ = 0 with and without loss", 1e-12);
    for c in preset_points() {
        let at = label(&c);
        let mut run = || -> Result<()> {
            for phi in [0.0, 0.4] {
                let p = c.with_phi(phi);
                exact.abs(homodyne::phase_sensitivity_lossy(&p, 1.0)?, homodyne::phase_sensitivity(&p)?, &at);
            }
            exact.abs(
                homodyne::phase_sensitivity_lossy_optimal(&c, 1.0)?,
                homodyne::phase_sensitivity_optimal(&c)?,
                &at,
            );
            let f = metrology::qfi_ideal(&c)?;
            exact.abs(metrology::qfi_lossy(&c, 1.0)?, f, &at);
            exact.abs(metrology::qfi_lossy(&c, 0.0)?, 0.0, &at);
            let m = metrology::probe_moments(&c)?;
            for lambda in [-1.0, 0.0, 2.0] {
                let cq = metrology::cq_upper_bound(&c, 1.0, lambda)?;
                exact.abs(cq, 4.0 * m.variance, &at);
            }
            let (opt, _) = homodyne::find_optimal_phase(&c, Some(0.6), PhaseGrid::new(-1.0, 1.0, 201))?;
            phase.abs(opt, 0.0, &at);
            let (opt, _) = homodyne::find_optimal_phase(&c, None, PhaseGrid::new(-1.0, 1.0, 201))?;
            phase.abs(opt, 0.0, &at);
            Ok(())
        };
        if let Err(e) = run() {
            exact.fail(&at, e);
        }
        let identity = InterferometerConfig { gamma: 0.0, g1: 0.0, g2: 0.0, ..c }.with_phi(0.0);
        match (
            evolve_full(&identity, None, Backend::Gaussian),
            probe_state(&identity, Backend::Gaussian),
        ) {
            (Ok(out), Ok(input)) => {
                let (a, b) = (out.as_gaussian().unwrap(), input.as_gaussian().unwrap());
                vacuum.abs((a.mean() - b.mean()).abs().max(), 0.0, &at);
                vacuum.abs((a.cov() - b.cov()).abs().max(), 0.0, &at);
            }
            (Err(e), _) | (_, Err(e)) => vacuum.fail(&at, e),
        }
    }
    vec![exact.line(), vacuum.line(), phase.line()]
}
