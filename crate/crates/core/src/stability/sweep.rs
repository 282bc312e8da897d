//! Stability-domain sweeps: maximal stable flow velocity versus viscosity.

use rayon::prelude::*;
use std::f64::consts::TAU;

use super::operator::LinearizedOperator;
use crate::equilibrium::EquilibriumModel;
use crate::error::{LbError, Result};
use crate::lattice::Lattice;
use crate::modes::ViscosityMap;

/// Wave numbers `κ_j` along a fixed direction (degrees from the x axis).
#[derive(Debug, Clone, PartialEq)]
pub struct KGrid {
    pub magnitudes: Vec<f64>,
    pub angle_deg: f64,
}

impl KGrid {
    /// `κ_j = 2πj/n`, `j = 0..n`, covering `[0, 2π)`.
    pub fn uniform(n: usize, angle_deg: f64) -> Self {
        Self {
            magnitudes: (0..n).map(|j| TAU * j as f64 / n as f64).collect(),
            angle_deg,
        }
    }

    /// `κ_j = 2π(j + 1/2)/n`: uniform, excluding `κ = 0` and `κ = π`.
    pub fn midpoints(n: usize, angle_deg: f64) -> Self {
        Self {
            magnitudes: (0..n).map(|j| TAU * (j as f64 + 0.5) / n as f64).collect(),
            angle_deg,
        }
    }

    /// Uniform grid with twice the density (original points plus midpoints).
    pub fn refined(&self) -> Self {
        Self::uniform(2 * self.magnitudes.len(), self.angle_deg)
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn vector(&self, j: usize, dim: usize) -> Vec<f64> {
        direction(self.magnitudes[j], self.angle_deg, dim)
    }
}

fn direction(magnitude: f64, angle_deg: f64, dim: usize) -> Vec<f64> {
    if dim == 1 || angle_deg == 0.0 {
        let mut v = vec![0.0; dim];
        v[0] = magnitude;
        return v;
    }
    let t = angle_deg.to_radians();
    vec![magnitude * t.cos(), magnitude * t.sin()]
}

fn velocity(speed: f64, angle_deg: f64, dim: usize) -> Vec<f64> {
    direction(speed, angle_deg, dim)
        .into_iter()
        .map(|x| x.clamp(-1.0, 1.0))
        .collect()
}

/// Spectral-radius verdict over a whole k grid; `Ok(false)` at the first
/// unstable wave vector.
pub fn stable_on_grid(
    lat: &Lattice,
    model: EquilibriumModel,
    u: &[f64],
    beta: f64,
    grid: &KGrid,
) -> Result<bool> {
    for j in 0..grid.len() {
        let op = LinearizedOperator::new(lat, model, 1.0, u, beta, &grid.vector(j, lat.dim()))?;
        if !op.report()?.stable {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest spectral radius over a k grid.
pub fn max_radius_on_grid(
    lat: &Lattice,
    model: EquilibriumModel,
    u: &[f64],
    beta: f64,
    grid: &KGrid,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 0..grid.len() {
        let op = LinearizedOperator::new(lat, model, 1.0, u, beta, &grid.vector(j, lat.dim()))?;
        worst = worst.max(op.report()?.spectral_radius);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// Points of the base k grid (uniform in `[0, 2π)`).
    pub k_points: usize,
    /// Bisection tolerance on the velocity magnitude.
    pub tol: f64,
    /// Direction of the wave vector, degrees from the x axis (D2 only).
    pub k_angle_deg: f64,
    /// Direction of the base flow, degrees from the x axis (D2 only).
    pub u_angle_deg: f64,
    /// Number of equal steps of the coarse velocity scan on `[0, 1]`.
    pub coarse_steps: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            k_points: 64,
            tol: 1e-3,
            k_angle_deg: 0.0,
            u_angle_deg: 0.0,
            coarse_steps: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOutcome {
    pub u_max: f64,
    /// Final `(stable, unstable)` bracket; `(1, 1)` when the whole box is stable.
    pub bracket: (f64, f64),
}

/// Largest flow speed `u_max ∈ [0, 1]` below which every sampled speed is
/// stable for every k on the grid.
///
/// A coarse scan from `u = 0` locates the first unstable sample; the
/// bracket between it and the last stable sample is then bisected on a
/// k grid of twice the density.
pub fn max_stable_velocity(
    lat: &Lattice,
    model: EquilibriumModel,
    nu: f64,
    opts: &SweepOptions,
) -> Result<SweepOutcome> {
    let beta = ViscosityMap::from_nu(nu)?.beta;
    if opts.k_points == 0 || opts.coarse_steps == 0 || !(opts.tol > 0.0) {
        return Err(LbError::InvalidParameter(
            "sweep needs k_points > 0, coarse_steps > 0 and tol > 0".into(),
        ));
    }
    let grid = KGrid::uniform(opts.k_points, opts.k_angle_deg);
    let dim = lat.dim();
    let stable = |s: f64, g: &KGrid| {
        stable_on_grid(lat, model, &velocity(s, opts.u_angle_deg, dim), beta, g)
    };

    if stable(1.0, &grid)? {
        return Ok(SweepOutcome {
            u_max: 1.0,
            bracket: (1.0, 1.0),
        });
    }
    if !stable(0.0, &grid)? {
        if nu > 0.0 {
            return Err(LbError::Internal(format!(
                "{model} unstable at rest with nu = {nu}"
            )));
        }
        return Ok(SweepOutcome {
            u_max: 0.0,
            bracket: (0.0, 0.0),
        });
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    for j in 1..opts.coarse_steps {
        let s = j as f64 / opts.coarse_steps as f64;
        if stable(s, &grid)? {
            lo = s;
        } else {
            hi = s;
            break;
        }
    }
    let fine = grid.refined();
    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        if stable(mid, &fine)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SweepOutcome {
        u_max: lo,
        bracket: (lo, hi),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainRow {
    pub model: EquilibriumModel,
    pub nu: f64,
    pub outcome: SweepOutcome,
}

/// Maximal attainable flow velocity per model and viscosity.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityDomain {
    pub rows: Vec<DomainRow>,
    pub options: SweepOptions,
}

impl StabilityDomain {
    pub fn rows_for(&self, model: EquilibriumModel) -> impl Iterator<Item = &DomainRow> {
        self.rows.iter().filter(move |r| r.model == model)
    }
}

/// Evaluates every `(model, ν)` pair concurrently; rows come back in
/// model-major, viscosity-minor input order.
pub fn stability_domain(
    lat: &Lattice,
    models: &[EquilibriumModel],
    nus: &[f64],
    opts: &SweepOptions,
) -> Result<StabilityDomain> {
    let jobs: Vec<(EquilibriumModel, f64)> = models
        .iter()
        .flat_map(|&m| nus.iter().map(move |&nu| (m, nu)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(model, nu)| {
            max_stable_velocity(lat, model, nu, opts).map(|outcome| DomainRow {
                model,
                nu,
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityDomain {
        rows,
        options: opts.clone(),
    })
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let mut v: Vec<f64> = (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect();
            v[0] = lo;
            v[n - 1] = hi;
            v
        }
    }
}
