//! Parameter sweeps over the interferometer and their CSV rendering.

mod check;
mod config;
mod presets;
mod properties;

pub use check::{check, oracle_point, CheckLine, CheckMode};
pub use config::{parse_real, Settings};
pub use presets::{figure_preset, FIGURE_IDS};
pub use properties::figure_properties;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::homodyne;
use crate::interferometer::{total_mean_photon_number, InterferometerConfig};
use crate::metrology;

/// Anything a sweep axis can move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    /// both gains at once
    G,
    G1,
    G2,
    Theta1,
    Theta2,
    R,
    ThetaXi,
    Beta,
    ThetaBeta,
    Gamma,
    ThetaGamma,
    Phi,
    Eta,
    T,
}

impl Param {
    pub const ALL: [Param; 14] = [
        Param::G,
        Param::G1,
        Param::G2,
        Param::Theta1,
        Param::Theta2,
        Param::R,
        Param::ThetaXi,
        Param::Beta,
        Param::ThetaBeta,
        Param::Gamma,
        Param::ThetaGamma,
        Param::Phi,
        Param::Eta,
        Param::T,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::G => "g",
            Param::G1 => "g1",
            Param::G2 => "g2",
            Param::Theta1 => "theta1",
            Param::Theta2 => "theta2",
            Param::R => "r",
            Param::ThetaXi => "theta_xi",
            Param::Beta => "beta",
            Param::ThetaBeta => "theta_beta",
            Param::Gamma => "gamma",
            Param::ThetaGamma => "theta_gamma",
            Param::Phi => "phi",
            Param::Eta => "eta",
            Param::T => "T",
        }
    }

    pub fn set(self, p: &mut Point, v: f64) {
        let c = &mut p.cfg;
        match self {
            Param::G => {
                c.g1 = v;
                c.g2 = v;
            }
            Param::G1 => c.g1 = v,
            Param::G2 => c.g2 = v,
            Param::Theta1 => c.theta1 = v,
            Param::Theta2 => c.theta2 = v,
            Param::R => c.r = v,
            Param::ThetaXi => c.theta_xi = v,
            Param::Beta => c.beta = v,
            Param::ThetaBeta => c.theta_beta = v,
            Param::Gamma => c.gamma = v,
            Param::ThetaGamma => c.theta_gamma = v,
            Param::Phi => c.phi = v,
            Param::Eta => p.eta = v,
            Param::T => p.t = v,
        }
    }

    /// Parameters moved by this one (so not "fixed" in the CSV header).
    fn covers(self) -> &'static [Param] {
        match self {
            Param::G => &[Param::G1, Param::G2],
            Param::G1 => &[Param::G1],
            Param::G2 => &[Param::G2],
            Param::Theta1 => &[Param::Theta1],
            Param::Theta2 => &[Param::Theta2],
            Param::R => &[Param::R],
            Param::ThetaXi => &[Param::ThetaXi],
            Param::Beta => &[Param::Beta],
            Param::ThetaBeta => &[Param::ThetaBeta],
            Param::Gamma => &[Param::Gamma],
            Param::ThetaGamma => &[Param::ThetaGamma],
            Param::Phi => &[Param::Phi],
            Param::Eta => &[Param::Eta],
            Param::T => &[Param::T],
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace('-', "_");
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown parameter `{s}`")))
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One evaluation point: the interferometer plus the two loss models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub cfg: InterferometerConfig,
    /// transmission of the QFI loss model (arm b)
    pub eta: f64,
    /// transmissivity of the homodyne loss model (both arms)
    pub t: f64,
}

impl Default for Point {
    fn default() -> Self {
        Point {
            cfg: InterferometerConfig::default(),
            eta: 1.0,
            t: 1.0,
        }
    }
}

impl Point {
    pub fn new(cfg: InterferometerConfig) -> Self {
        Point { cfg, ..Default::default() }
    }

    pub fn get(&self, p: Param) -> f64 {
        let c = &self.cfg;
        match p {
            Param::G | Param::G1 => c.g1,
            Param::G2 => c.g2,
            Param::Theta1 => c.theta1,
            Param::Theta2 => c.theta2,
            Param::R => c.r,
            Param::ThetaXi => c.theta_xi,
            Param::Beta => c.beta,
            Param::ThetaBeta => c.theta_beta,
            Param::Gamma => c.gamma,
            Param::ThetaGamma => c.theta_gamma,
            Param::Phi => c.phi,
            Param::Eta => self.eta,
            Param::T => self.t,
        }
    }

    pub fn with(mut self, p: Param, v: f64) -> Self {
        p.set(&mut self, v);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        for (name, v) in [("eta", self.eta), ("T", self.t)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuantityKind {
    F,
    FL,
    Qcrb,
    LQcrb,
    Sql,
    Hl,
    NTotal,
    Dphi,
    DphiL,
    Signal,
    SignalL,
    GapDelta,
}

impl QuantityKind {
    pub const ALL: [QuantityKind; 12] = [
        QuantityKind::F,
        QuantityKind::FL,
        QuantityKind::Qcrb,
        QuantityKind::LQcrb,
        QuantityKind::Sql,
        QuantityKind::Hl,
        QuantityKind::NTotal,
        QuantityKind::Dphi,
        QuantityKind::DphiL,
        QuantityKind::Signal,
        QuantityKind::SignalL,
        QuantityKind::GapDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QuantityKind::F => "F",
            QuantityKind::FL => "F_L",
            QuantityKind::Qcrb => "QCRB",
            QuantityKind::LQcrb => "L-QCRB",
            QuantityKind::Sql => "SQL",
            QuantityKind::Hl => "HL",
            QuantityKind::NTotal => "N_total",
            QuantityKind::Dphi => "dphi",
            QuantityKind::DphiL => "dphi_L",
            QuantityKind::Signal => "signal",
            QuantityKind::SignalL => "signal_L",
            QuantityKind::GapDelta => "gap_delta",
        }
    }

    /// Linear value at `p`.
    pub fn evaluate(self, p: &Point) -> Result<f64> {
        let c = &p.cfg;
        match self {
            QuantityKind::F => metrology::qfi_ideal(c),
            QuantityKind::FL => metrology::qfi_lossy(c, p.eta),
            QuantityKind::Qcrb => bound(metrology::qfi_ideal(c)?, c.nu),
            QuantityKind::LQcrb => bound(metrology::qfi_lossy(c, p.eta)?, c.nu),
            QuantityKind::Sql => Ok(metrology::sql_hl(total_mean_photon_number(c)?)?.0),
            QuantityKind::Hl => Ok(metrology::sql_hl(total_mean_photon_number(c)?)?.1),
            QuantityKind::NTotal => total_mean_photon_number(c),
            QuantityKind::Dphi => homodyne::phase_sensitivity(c),
            QuantityKind::DphiL => homodyne::phase_sensitivity_lossy(c, p.t),
            QuantityKind::Signal => homodyne::output_signal(c),
            QuantityKind::SignalL => homodyne::output_signal_lossy(c, p.t),
            QuantityKind::GapDelta => metrology::qcrb_gap(c, p.eta),
        }
    }
}

// A vanishing Fisher information is an infinite bound, not a failure.
fn bound(f: f64, nu: u32) -> Result<f64> {
    if f == 0.0 {
        Ok(f64::INFINITY)
    } else {
        metrology::qcrb(f, nu)
    }
}

/// A requested output column, optionally as `log10_<name>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quantity {
    pub kind: QuantityKind,
    pub log10: bool,
}

impl Quantity {
    pub fn linear(kind: QuantityKind) -> Self {
        Quantity { kind, log10: false }
    }

    pub fn log(kind: QuantityKind) -> Self {
        Quantity { kind, log10: true }
    }

    /// Column value; divergent sensitivities become `inf`.
    pub fn evaluate(&self, p: &Point) -> Result<f64> {
        let v = match self.kind.evaluate(p) {
            Err(Error::DivergentSensitivity(_)) => f64::INFINITY,
            other => other?,
        };
        Ok(if self.log10 { v.log10() } else { v })
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log10 {
            f.write_str("log10_")?;
        }
        f.write_str(self.kind.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (log10, base) = match s.strip_prefix("log10_") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        QuantityKind::ALL
            .into_iter()
            .find(|k| k.name() == base)
            .map(|kind| Quantity { kind, log10 })
            .ok_or_else(|| Error::Domain(format!("unknown quantity `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxisValues {
    /// `count` evenly spaced points from `start` to `stop` inclusive.
    Range { start: f64, stop: f64, count: usize },
    List(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: AxisValues,
}

impl Axis {
    pub fn range(param: Param, start: f64, stop: f64, count: usize) -> Self {
        Axis { param, values: AxisValues::Range { start, stop, count } }
    }

    pub fn list(param: Param, values: &[f64]) -> Self {
        Axis { param, values: AxisValues::List(values.to_vec()) }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.values {
            AxisValues::Range { start, stop, count } => {
                if *count < 2 {
                    return Err(Error::Domain(format!("axis {} needs at least 2 points", self.param)));
                }
                if !(start.is_finite() && stop.is_finite() && start <= stop) {
                    return Err(Error::Domain(format!("axis {} needs finite start ≤ stop", self.param)));
                }
            }
            AxisValues::List(v) => {
                if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Domain(format!("axis {} needs finite values", self.param)));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        match &self.values {
            AxisValues::Range { count, .. } => *count,
            AxisValues::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, i: usize) -> f64 {
        match &self.values {
            AxisValues::Range { start, stop, count } => {
                if i + 1 == *count {
                    *stop
                } else {
                    start + (stop - start) * i as f64 / (*count - 1) as f64
                }
            }
            AxisValues::List(v) => v[i],
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: Point,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub quantities: Vec<Quantity>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.axis1.validate()?;
        if let Some(a) = &self.axis2 {
            a.validate()?;
            if a.param == self.axis1.param {
                return Err(Error::Domain("the two axes must differ".into()));
            }
        }
        if self.quantities.is_empty() {
            return Err(Error::Domain("no quantity requested".into()));
        }
        Ok(())
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec![self.axis1.param.to_string()];
        if let Some(a) = &self.axis2 {
            cols.push(a.param.to_string());
        }
        cols.extend(self.quantities.iter().map(|q| q.to_string()));
        cols
    }

    /// `key=value` pairs of every parameter no axis moves.
    pub fn fixed_parameters(&self) -> String {
        let mut moved: Vec<Param> = self.axis1.param.covers().to_vec();
        if let Some(a) = &self.axis2 {
            moved.extend_from_slice(a.param.covers());
        }
        let mut out: Vec<String> = Param::ALL
            .into_iter()
            .filter(|p| *p != Param::G && !moved.contains(p))
            .map(|p| format!("{}={}", p, format_value(self.base.get(p))))
            .collect();
        out.push(format!("nu={}", self.base.cfg.nu));
        out.join(" ")
    }
}

/// Evaluated sweep. Rows run over axis 1 fastest, axis 2 outermost.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub fixed: String,
    pub rows: Vec<Vec<f64>>,
    /// One line per point whose evaluation failed (rendered as `nan`).
    pub notes: Vec<String>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# {}\n# {}\n", self.columns.join(","), self.fixed);
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let outer: Vec<Option<f64>> = match &spec.axis2 {
        Some(a) => a.values().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for v2 in outer {
        for v1 in spec.axis1.values() {
            let mut p = spec.base.with(spec.axis1.param, v1);
            let mut row = vec![v1];
            if let (Some(a), Some(v2)) = (&spec.axis2, v2) {
                p = p.with(a.param, v2);
                row.push(v2);
            }
            for q in &spec.quantities {
                let value = match p.validate().and_then(|_| q.evaluate(&p)) {
                    Ok(v) => v,
                    Err(e) => {
                        let at = row.iter().map(|v| format_value(*v)).collect::<Vec<_>>().join(",");
                        notes.push(format!("{q} at ({at}): {e}"));
                        f64::NAN
                    }
                };
                row.push(value);
            }
            rows.push(row);
        }
    }
    Ok(Table {
        columns: spec.columns(),
        fixed: spec.fixed_parameters(),
        rows,
        notes,
    })
}

/// `%.15g`-style rendering with `inf`, `-inf` and `nan` tokens.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..15).contains(&exp) {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(1.0), "1");
        assert_eq!(format_value(-2.5), "-2.5");
        assert_eq!(format_value(0.1), "0.1");
        assert_eq!(format_value(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(format_value(1e-7), "1e-07");
        assert_eq!(format_value(1.5e20), "1.5e+20");
        assert_eq!(format_value(123456.0), "123456");
        assert_eq!(format_value(0.000123), "0.000123");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_value(f64::NAN), "nan");
        assert_eq!(format_value(9.999999999999999999), "10");
    }

    #[test]
    fn names_round_trip() {
        for p in Param::ALL {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
        }
        assert_eq!("theta-xi".parse::<Param>().unwrap(), Param::ThetaXi);
        for k in QuantityKind::ALL {
            for q in [Quantity::linear(k), Quantity::log(k)] {
                assert_eq!(q.to_string().parse::<Quantity>().unwrap(), q);
            }
        }
        assert!("bogus".parse::<Quantity>().is_err());
    }

    #[test]
    fn axis_points() {
        let a = Axis::range(Param::Gamma, 0.0, 5.0, 11);
        assert_eq!(a.values()[2], 1.0);
        assert_eq!(*a.values().last().unwrap(), 5.0);
        assert!(Axis::range(Param::Gamma, 0.0, 5.0, 1).validate().is_err());
        assert!(Axis::range(Param::Gamma, 5.0, 0.0, 3).validate().is_err());
    }

    #[test]
    fn sweep_rows_and_tokens() {
        let spec = SweepSpec {
            base: Point::new(InterferometerConfig::figure(1.0, 1.0, 0.0, 0.0)),
            axis1: Axis::range(Param::Phi, 0.0, 1.0, 3),
            axis2: Some(Axis::list(Param::Gamma, &[0.0, 1.0])),
            quantities: vec![Quantity::linear(QuantityKind::Dphi), Quantity::log(QuantityKind::F)],
        };
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.columns, ["phi", "gamma", "dphi", "log10_F"]);
        assert_eq!(t.rows.len(), 6);
        assert!(t.rows[..3].iter().all(|r| r[2].is_infinite()));
        assert!(t.rows[3..].iter().all(|r| r[2].is_finite()));
        let csv = t.to_csv();
        assert!(csv.starts_with("# phi,gamma,dphi,log10_F\n# g1=1 g2=1 theta1=0 "));
        assert!(!t.fixed.contains(" phi=") && !t.fixed.contains(" gamma="));
        assert!(csv.lines().nth(2).unwrap().starts_with("0,0,inf,"));
        assert_eq!(csv, run_sweep(&spec).unwrap().to_csv());
    }

    #[test]
    fn failures_become_nan_with_a_note() {
        let spec = SweepSpec {
            base: Point::new(InterferometerConfig::figure(1.0, 1.0, 1.0, 1.0)),
            axis1: Axis::list(Param::G2, &[1.0, 0.5]),
            axis2: None,
            quantities: vec![Quantity::linear(QuantityKind::F)],
        };
        let t = run_sweep(&spec).unwrap();
        assert!(t.rows[0][1].is_finite() && t.rows[1][1].is_nan());
        assert_eq!(t.notes.len(), 1);
    }
}
