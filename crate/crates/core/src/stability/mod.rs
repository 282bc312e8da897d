//! Linear (von Neumann) stability of the LBGK update.

pub mod charpoly;
pub mod dispersion;
pub mod eigen;
pub mod locus;
pub mod operator;
pub mod qr;
pub mod roots;
pub mod schur_cohn;
pub mod sweep;

/// Spectral-radius slack: conserved modes sit exactly on the unit circle.
pub const STABILITY_TOL: f64 = 1e-9;

pub use charpoly::{cubic_from_traces, faddeev_leverrier};
pub use dispersion::{dispersion_fit, DispersionFit};
pub use eigen::{eigenvalues, spectral_radius, StabilityReport};
pub use locus::{root_locus, LocusPoint};
pub use operator::{char_poly_d1q3, linearized_operator, LinearizedOperator};
pub use roots::polynomial_roots;
pub use schur_cohn::{schur_cohn, schur_cohn_cubic};
pub use sweep::{
    log_space, max_radius_on_grid, max_stable_velocity, stability_domain, stable_on_grid, KGrid,
    StabilityDomain, SweepOptions, SweepOutcome,
};
