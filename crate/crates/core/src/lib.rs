//! Collective light-matter dynamics of molecular ensembles in a single-mode
//! cavity at leading order in the inverse number of molecules.
//!
//! * [`model`]: molecules, cavity, drive and disorder descriptions.
//! * [`mapping`]: dense check of the pseudoparticle operator algebra.
//! * [`photon`]: retarded cavity propagator and auxiliary oscillator.
//! * [`meanfield`]: density-matrix propagation in the self-consistent cavity field.
//! * [`exact`]: driven Tavis-Cummings reference in the permutation-symmetric basis.
//! * [`spectra`]: photon Green's function, Rabi poles and disorder averaging.

pub mod error;
pub mod exact;
pub mod linalg;
pub mod mapping;
pub mod meanfield;
pub mod model;
pub mod photon;
pub mod quad;
pub mod spectra;
pub mod special;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use num_complex::Complex64 as C64;
