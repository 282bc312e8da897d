//! Linear stability laboratory for lattice Boltzmann BGK (LBGK) models.
//!
//! The crate covers the full chain from the discrete velocity set to
//! empirical cross-checks:
//!
//! * [`lattice`]: D1Q3 / D2Q9 velocity sets and moments.
//! * [`equilibrium`]: pressure closures (isotropic and asymptotically free),
//!   product-form and second-order polynomial equilibria, and the
//!   equilibrium Jacobian with respect to the populations.
//! * [`modes`]: hydrodynamic-limit analytics (mode speeds, attenuation
//!   rates, viscosity factor, compressibility error, renormalized
//!   relaxation, D2Q9 viscosity matrix).
//! * [`stability`]: Fourier-space linearized operator, eigen-solver,
//!   Schur–Cohn test, root loci, stability-domain sweeps and dispersion fits.
//! * [`simulator`]: periodic time-stepped LBGK for empirical validation.
//! * [`cli`]: the `lbstab` command line front end.
//!
//! Lattice units are used throughout (`δr = δt = 1`).

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod modes;
pub mod simulator;
pub mod stability;

pub use error::{LbError, Result};
pub use lattice::{FlowState, Lattice, Populations};
