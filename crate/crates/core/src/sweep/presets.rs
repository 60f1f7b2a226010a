//! Sweeps behind each figure. Unless noted the angles are `φ = θ_ξ = θ₁ = 0`,
//! `θ₂ = π`, `θ_β = θ_γ = π/2`, and curve families sit on the second axis.

use super::{Axis, Param, Point, Quantity, QuantityKind, SweepSpec};
use crate::error::{Error, Result};
use crate::interferometer::InterferometerConfig;

pub const FIGURE_IDS: [&str; 23] = [
    "2a", "2b", "2c", "2d", "3a", "3b", "4a", "4b", "4c", "4d", "5a", "5b", "6a", "6b", "6c", "6d", "7a", "7b", "8",
    "10a", "10b", "11a", "11b",
];

const GAMMAS: [f64; 4] = [0.0, 1.0, 2.0, 3.0];
const BETAS: [f64; 3] = [1.0, 2.0, 3.0];

fn spec(base: Point, axis1: Axis, axis2: Option<Axis>, quantities: Vec<Quantity>) -> SweepSpec {
    SweepSpec { base, axis1, axis2, quantities }
}

fn at(g: f64, r: f64, beta: f64, gamma: f64) -> Point {
    Point::new(InterferometerConfig::figure(g, r, beta, gamma))
}

use QuantityKind::*;

pub fn figure_preset(id: &str) -> Result<SweepSpec> {
    let log = Quantity::log;
    let lin = Quantity::linear;
    let gammas = Some(Axis::list(Param::Gamma, &GAMMAS));
    let betas = Some(Axis::list(Param::Beta, &BETAS));
    let g_axis = Axis::range(Param::G, 0.0, 2.0, 101);
    let gamma_axis = Axis::range(Param::Gamma, 0.0, 5.0, 101);
    let phi_axis = Axis::range(Param::Phi, -1.0, 1.0, 201);
    let eta_axis = Axis::range(Param::Eta, 0.05, 1.0, 96);

    Ok(match id.trim().trim_start_matches("fig") {
        // QFI and QCRB against g, and against |γ|
        "2a" => spec(at(0.0, 1.0, 1.0, 0.0), g_axis, gammas, vec![log(F)]),
        "2b" => spec(at(2.0, 1.0, 0.0, 0.0), gamma_axis, betas, vec![log(F)]),
        "2c" => spec(at(0.0, 1.0, 1.0, 0.0), g_axis, gammas, vec![log(Qcrb)]),
        "2d" => spec(at(2.0, 1.0, 0.0, 0.0), gamma_axis, betas, vec![log(Qcrb)]),
        // homodyne sensitivity and output signal against φ
        "3a" => spec(at(1.0, 1.0, 1.0, 0.0), phi_axis, gammas, vec![log(Dphi)]),
        "3b" => spec(at(1.0, 1.0, 1.0, 0.0), phi_axis, gammas, vec![lin(Signal)]),
        // sensitivity at φ = 0 against g, |β|, |γ|
        "4a" => spec(at(0.0, 1.0, 1.0, 0.0), Axis::range(Param::G, 0.05, 2.0, 40), gammas, vec![log(Dphi)]),
        "4b" => spec(at(1.0, 1.0, 0.0, 0.0), Axis::range(Param::Beta, 0.0, 3.0, 61), gammas, vec![log(Dphi)]),
        "4c" => spec(at(2.0, 1.0, 0.0, 0.0), gamma_axis, betas, vec![log(Dphi)]),
        "4d" => spec(
            at(0.0, 1.0, 3.0, 0.0),
            gamma_axis,
            Some(Axis::list(Param::G, &[0.5, 1.0, 2.0])),
            vec![log(Dphi)],
        ),
        // against the SQL and HL
        "5a" => spec(
            at(0.0, 1.0, 1.0, 1.0),
            Axis::range(Param::G, 0.05, 2.0, 40),
            None,
            vec![lin(Dphi), lin(Sql), lin(Hl)],
        ),
        "5b" => spec(at(1.0, 1.0, 1.0, 0.0), gamma_axis, None, vec![lin(Dphi), lin(Sql), lin(Hl)]),
        // lossy QFI and QCRB
        "6a" => spec(
            at(1.0, 1.0, 1.0, 0.0),
            Axis::range(Param::Eta, 0.05, 1.0, 20),
            Some(Axis::range(Param::Gamma, 0.0, 3.0, 31)),
            vec![log(FL)],
        ),
        "6b" => spec(at(1.0, 1.0, 1.0, 0.0), eta_axis, gammas, vec![log(FL)]),
        "6c" => spec(
            at(1.0, 1.0, 1.0, 0.0),
            Axis::range(Param::Eta, 0.05, 1.0, 20),
            Some(Axis::range(Param::Gamma, 0.0, 3.0, 31)),
            vec![log(LQcrb)],
        ),
        "6d" => spec(at(1.0, 1.0, 1.0, 0.0), eta_axis, gammas, vec![log(LQcrb)]),
        "7a" => spec(
            at(0.0, 1.0, 0.0, 1.0).with(Param::Eta, 0.6),
            Axis::range(Param::Beta, 0.0, 3.0, 31),
            Some(Axis::range(Param::G, 0.0, 2.0, 21)),
            vec![log(FL)],
        ),
        "7b" => spec(
            at(0.0, 1.0, 0.0, 1.0).with(Param::Eta, 0.6),
            Axis::range(Param::Beta, 0.0, 3.0, 31),
            Some(Axis::range(Param::G, 0.0, 2.0, 21)),
            vec![log(LQcrb)],
        ),
        "8" => spec(
            at(1.0, 1.0, 1.0, 0.0),
            Axis::range(Param::Eta, 0.05, 1.0, 20),
            Some(Axis::range(Param::Gamma, 0.0, 3.0, 31)),
            vec![lin(GapDelta)],
        ),
        // homodyne under loss
        "10a" => spec(
            at(1.0, 1.0, 1.0, 0.0).with(Param::T, 0.6),
            phi_axis,
            Some(Axis::list(Param::Gamma, &[0.0, 1.0, 2.0])),
            vec![log(Dphi), log(DphiL)],
        ),
        "10b" => spec(
            at(1.0, 1.0, 1.0, 0.0).with(Param::T, 0.6),
            phi_axis,
            Some(Axis::list(Param::Gamma, &[0.0, 1.0, 2.0])),
            vec![lin(Signal), lin(SignalL)],
        ),
        "11a" => spec(at(1.0, 1.0, 1.0, 0.0), Axis::range(Param::T, 0.05, 1.0, 96), gammas, vec![log(DphiL)]),
        "11b" => spec(
            at(0.0, 1.0, 1.0, 0.0).with(Param::T, 0.6),
            Axis::range(Param::G, 0.05, 2.0, 40),
            gammas,
            vec![log(Dphi), log(DphiL)],
        ),
        other => return Err(Error::Domain(format!("unknown figure `{other}`"))),
    })
}
