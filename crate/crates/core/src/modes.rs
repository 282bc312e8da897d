//! Hydrodynamic-limit analytics of the one-dimensional LBGK.
//!
//! Everything here is a closed-form function of the pressure closure
//! `π*(u)` and its derivative. The two mode speeds
//! `c± = u + π*'/2 ± √(π*'²/4 + π*)` act as the coupling parameters: the
//! attenuation rates, the viscosity factor and the necessary stability
//! condition are all expressed through them.

use crate::equilibrium::PressureModel;
use crate::error::{LbError, Result};
use crate::lattice::CS2;

/// Relaxation parameter and kinematic viscosity, tied by
/// `ν = ς² (1/(2β) - 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityMap {
    pub beta: f64,
    pub nu: f64,
}

impl ViscosityMap {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(LbError::InvalidParameter(format!(
                "relaxation parameter beta must lie in (0, 1], got {beta}"
            )));
        }
        Ok(Self {
            beta,
            nu: CS2 * (0.5 / beta - 0.5),
        })
    }

    pub fn from_nu(nu: f64) -> Result<Self> {
        if !(nu >= 0.0) || !nu.is_finite() {
            return Err(LbError::InvalidParameter(format!(
                "viscosity must be finite and non-negative, got {nu}"
            )));
        }
        Ok(Self {
            beta: CS2 / (2.0 * nu + CS2),
            nu,
        })
    }
}

/// Bundle of coupling parameters at a given flow velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAnalysis {
    pub u: f64,
    pub pi_star: f64,
    pub dpi_star: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
    /// Viscosity factor.
    pub a: f64,
    /// Compressibility error.
    pub b: f64,
    pub r_plus: f64,
    pub r_minus: f64,
}

impl ModeAnalysis {
    pub fn new(pm: PressureModel, u: f64) -> Result<Self> {
        let (pi_star, dpi_star) = pm.eval(u)?;
        let (c_plus, c_minus) = modes_from_pressure(u, pi_star, dpi_star)?;
        let (r_plus, r_minus) = attenuation_rates(c_plus, c_minus)?;
        Ok(Self {
            u,
            pi_star,
            dpi_star,
            c_plus,
            c_minus,
            sigma_plus: c_plus - u,
            sigma_minus: c_minus - u,
            a: viscosity_factor_from_pressure(u, pi_star, dpi_star),
            b: compressibility_error_from_pressure(u, pi_star, dpi_star),
            r_plus,
            r_minus,
        })
    }

    pub fn necessary_condition(&self) -> bool {
        necessary_condition(self.c_plus, self.c_minus)
    }
}

fn modes_from_pressure(u: f64, pi: f64, dpi: f64) -> Result<(f64, f64)> {
    let discriminant = 0.25 * dpi * dpi + pi;
    if discriminant < 0.0 {
        return Err(LbError::LossOfHyperbolicity { u, discriminant });
    }
    let root = discriminant.sqrt();
    let centre = u + 0.5 * dpi;
    Ok((centre + root, centre - root))
}

/// Mode speeds `(c+, c-)` with `c+ ≥ c-`.
pub fn eigen_modes(pm: PressureModel, u: f64) -> Result<(f64, f64)> {
    let (pi, dpi) = pm.eval(u)?;
    modes_from_pressure(u, pi, dpi)
}

/// `R± = ±c± (3ς² - c±²) / (ς² (c+ - c-))`.
pub fn attenuation_rates(c_plus: f64, c_minus: f64) -> Result<(f64, f64)> {
    let gap = c_plus - c_minus;
    if gap == 0.0 {
        return Err(LbError::DegenerateModes(c_plus));
    }
    let denom = CS2 * gap;
    Ok((
        c_plus * (3.0 * CS2 - c_plus * c_plus) / denom,
        -c_minus * (3.0 * CS2 - c_minus * c_minus) / denom,
    ))
}

fn viscosity_factor_from_pressure(u: f64, pi: f64, dpi: f64) -> f64 {
    (3.0 * CS2 - 3.0 * u * u - pi - dpi * (3.0 * u + dpi)) / (2.0 * CS2)
}

fn compressibility_error_from_pressure(u: f64, pi: f64, dpi: f64) -> f64 {
    -(3.0 * u + dpi) * pi + 3.0 * u * CS2 - u * u * u
}

pub fn viscosity_factor(pm: PressureModel, u: f64) -> Result<f64> {
    let (pi, dpi) = pm.eval(u)?;
    Ok(viscosity_factor_from_pressure(u, pi, dpi))
}

/// Viscosity factor written through the mode speeds,
/// `(3ς² - c+² - c-² - c+ c-) / (2ς²)`.
pub fn viscosity_factor_from_modes(c_plus: f64, c_minus: f64) -> f64 {
    (3.0 * CS2 - c_plus * c_plus - c_minus * c_minus - c_plus * c_minus) / (2.0 * CS2)
}

pub fn compressibility_error(pm: PressureModel, u: f64) -> Result<f64> {
    let (pi, dpi) = pm.eval(u)?;
    Ok(compressibility_error_from_pressure(u, pi, dpi))
}

/// Relaxation parameter that absorbs the viscosity factor into the
/// viscosity: `β* = ς²A / (2ν + ς²A)`.
pub fn renormalized_beta(a: f64, nu: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(LbError::NonPositiveViscosityFactor(a));
    }
    if !(nu >= 0.0) {
        return Err(LbError::InvalidParameter(format!(
            "viscosity must be non-negative, got {nu}"
        )));
    }
    Ok(CS2 * a / (2.0 * nu + CS2 * a))
}

/// `0 ≤ c+ ≤ 1` and `-1 ≤ c- ≤ 0`.
pub fn necessary_condition(c_plus: f64, c_minus: f64) -> bool {
    (0.0..=1.0).contains(&c_plus) && (-1.0..=0.0).contains(&c_minus)
}

/// Smallest `u ∈ [0, 1]` at which the necessary condition fails, bisected to
/// `tol`; `None` when it holds at `u = 1`. Assumes it holds at rest.
pub fn critical_velocity(pm: PressureModel, tol: f64) -> Result<Option<f64>> {
    if !(tol > 0.0) {
        return Err(LbError::InvalidParameter(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    let holds = |u: f64| ModeAnalysis::new(pm, u).map(|m| m.necessary_condition());
    if holds(1.0)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// D2Q9 viscosity matrix, indexed `[row][col]` with `0 = x`, `1 = y`:
///
/// ```text
/// | A(u_x)         π*(u_x)/ς² |
/// | π*(u_y)/ς²     A(u_y)     |
/// ```
///
/// Entry `(x, y)` multiplies `∂_x u_y` in the non-equilibrium shear stress,
/// so it carries the pressure of the x component.
pub fn d2q9_viscosity_matrix(pm: PressureModel, u: [f64; 2]) -> Result<[[f64; 2]; 2]> {
    Ok([
        [viscosity_factor(pm, u[0])?, pm.pi_star(u[0])? / CS2],
        [pm.pi_star(u[1])? / CS2, viscosity_factor(pm, u[1])?],
    ])
}
