//! Phase estimation with a displacement-assisted SU(1,1) interferometer.
//!
//! Two optical parametric amplifiers with a local displacement of both arms
//! in between, a phase shift on arm b and homodyne detection on arm a. The
//! crate evaluates the quantum Fisher information and Cramér–Rao bound, the
//! homodyne phase sensitivity, and their photon-loss counterparts, each as a
//! closed form backed by an exact Gaussian phase-space simulation, with a
//! truncated Fock-space simulator as an independent oracle.

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod homodyne;
pub mod interferometer;
pub mod metrology;
pub mod sweep;

pub use error::{Error, Result};
pub use fock::{FockState, Generator};
pub use gaussian::{GaussianState, Mode, PhotonMoments};
pub use interferometer::{Backend, InterferometerConfig, PipelineState, TransferCoefficients};
