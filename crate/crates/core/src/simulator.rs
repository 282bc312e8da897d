//! Time-stepped LBGK on periodic grids.
//!
//! One step is collide-then-stream:
//! `f_i(r + c_i, t + 1) = f_i + 2β (f_i^eq - f_i)` evaluated at `(r, t)`.
//! Populations are stored as one contiguous plane per velocity; node `n`
//! sits at `x = n % Nx`, `y = n / Nx`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::equilibrium::EquilibriumModel;
use crate::error::{LbError, Result};
use crate::lattice::Lattice;

/// Outcome of a single [`SimulationGrid::step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Ok,
    /// A population or moment became NaN or infinite.
    NonFinite {
        step: u64,
    },
    /// Some node left the model range `|u_α| ≤ 1`.
    VelocityOutOfRange {
        step: u64,
    },
}

impl StepStatus {
    pub fn is_ok(self) -> bool {
        self == Self::Ok
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::NonFinite { .. } => "non-finite",
            Self::VelocityOutOfRange { .. } => "velocity-out-of-range",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationGrid {
    lattice: Lattice,
    extents: Vec<usize>,
    planes: Vec<Vec<f64>>,
    steps: u64,
}

impl SimulationGrid {
    /// Grid with every population set to zero. `extents` is `[N]` or `[Nx, Ny]`.
    pub fn zeros(extents: &[usize]) -> Result<Self> {
        let lattice = Lattice::new(extents.len())?;
        if extents.iter().any(|&e| e == 0) {
            return Err(LbError::InvalidParameter(format!(
                "grid extents must be positive, got {extents:?}"
            )));
        }
        let nodes = extents.iter().product();
        Ok(Self {
            planes: vec![vec![0.0; nodes]; lattice.q()],
            lattice,
            extents: extents.to_vec(),
            steps: 0,
        })
    }

    /// Grid filled with `f^eq(ρ(r), u(r))` from a per-node state function.
    pub fn from_fields<F>(extents: &[usize], model: EquilibriumModel, state: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> (f64, Vec<f64>),
    {
        let mut grid = Self::zeros(extents)?;
        let q = grid.lattice.q();
        let nx = grid.extents[0];
        let mut feq = vec![0.0; q];
        for n in 0..grid.nodes() {
            let (rho, u) = state(n % nx, n / nx);
            if !(rho > 0.0) {
                return Err(LbError::InvalidParameter(format!(
                    "density must be positive, got {rho} at node {n}"
                )));
            }
            model.fill(&grid.lattice, rho, &u, &mut feq)?;
            for (i, &v) in feq.iter().enumerate() {
                grid.planes[i][n] = v;
            }
        }
        Ok(grid)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn nodes(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Population plane of velocity `i`.
    pub fn plane(&self, i: usize) -> &[f64] {
        &self.planes[i]
    }

    pub fn plane_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.planes[i]
    }

    /// Populations of node `n`.
    pub fn node(&self, n: usize) -> Vec<f64> {
        self.planes.iter().map(|p| p[n]).collect()
    }

    /// `(ρ, u)` at node `n`.
    pub fn moments_at(&self, n: usize) -> (f64, Vec<f64>) {
        let d = self.dim();
        let mut rho = 0.0;
        let mut j = vec![0.0; d];
        for (i, plane) in self.planes.iter().enumerate() {
            let f = plane[n];
            rho += f;
            for (a, ja) in j.iter_mut().enumerate() {
                *ja += f64::from(self.lattice.c(i, a)) * f;
            }
        }
        (rho, j.into_iter().map(|x| x / rho).collect())
    }

    pub fn total_mass(&self) -> f64 {
        self.planes.iter().map(|p| p.iter().sum::<f64>()).sum()
    }

    pub fn total_momentum(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|a| {
                self.planes
                    .iter()
                    .enumerate()
                    .map(|(i, p)| f64::from(self.lattice.c(i, a)) * p.iter().sum::<f64>())
                    .sum()
            })
            .collect()
    }

    /// `|Σ_r ρ(r) e^{-i k x}|` with `k = 2πm / Nx`.
    pub fn density_mode_amplitude(&self, m: usize) -> f64 {
        self.fourier_x(m, |grid, n| grid.moments_at(n).0)
    }

    /// `|Σ_r u_y(r) e^{-i k x}|` with `k = 2πm / Nx`; zero in one dimension.
    pub fn shear_mode_amplitude(&self, m: usize) -> f64 {
        if self.dim() < 2 {
            return 0.0;
        }
        self.fourier_x(m, |grid, n| grid.moments_at(n).1[1])
    }

    fn fourier_x<F: Fn(&Self, usize) -> f64>(&self, m: usize, field: F) -> f64 {
        let nx = self.extents[0];
        let k = TAU * m as f64 / nx as f64;
        (0..self.nodes())
            .map(|n| field(self, n) * Complex64::from_polar(1.0, -k * (n % nx) as f64))
            .sum::<Complex64>()
            .norm()
    }

    /// Relaxation `f ← f + 2β (f^eq - f)` at every node. The grid is left
    /// untouched when any node is non-finite or out of range.
    pub fn collide(&mut self, beta: f64, model: EquilibriumModel) -> Result<StepStatus> {
        let post = self.collided(beta, model)?;
        match post {
            Ok(scratch) => {
                let q = self.lattice.q();
                for (i, plane) in self.planes.iter_mut().enumerate() {
                    for (n, v) in plane.iter_mut().enumerate() {
                        *v = scratch[n * q + i];
                    }
                }
                Ok(StepStatus::Ok)
            }
            Err(status) => Ok(status),
        }
    }

    /// One collide-then-stream update. On a flagged status the grid and the
    /// step counter are unchanged.
    pub fn step(&mut self, beta: f64, model: EquilibriumModel) -> Result<StepStatus> {
        let scratch = match self.collided(beta, model)? {
            Ok(s) => s,
            Err(status) => return Ok(status),
        };
        let q = self.lattice.q();
        let nx = self.extents[0];
        let ny = self.extents.get(1).copied().unwrap_or(1);
        for i in 0..q {
            let cx = self.lattice.c(i, 0) as isize;
            let cy = if self.dim() > 1 {
                self.lattice.c(i, 1) as isize
            } else {
                0
            };
            let plane = &mut self.planes[i];
            for y in 0..ny {
                let ty = (y as isize + cy).rem_euclid(ny as isize) as usize;
                for x in 0..nx {
                    let tx = (x as isize + cx).rem_euclid(nx as isize) as usize;
                    plane[ty * nx + tx] = scratch[(y * nx + x) * q + i];
                }
            }
        }
        self.steps += 1;
        Ok(StepStatus::Ok)
    }

    /// Post-collision populations in node-major order, or the failure status.
    fn collided(
        &self,
        beta: f64,
        model: EquilibriumModel,
    ) -> Result<std::result::Result<Vec<f64>, StepStatus>> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(LbError::InvalidParameter(format!(
                "relaxation parameter beta must lie in (0, 1], got {beta}"
            )));
        }
        let q = self.lattice.q();
        let d = self.dim();
        let lat = &self.lattice;
        let planes = &self.planes;
        let mut scratch = vec![0.0; self.nodes() * q];
        // 0: ok, 1: out of range, 2: non-finite.
        let flag = scratch
            .par_chunks_mut(q)
            .enumerate()
            .map(|(n, out)| {
                let mut rho = 0.0;
                let mut j = [0.0; 2];
                for (i, plane) in planes.iter().enumerate() {
                    let f = plane[n];
                    out[i] = f;
                    rho += f;
                    for (a, ja) in j.iter_mut().enumerate().take(d) {
                        *ja += f64::from(lat.c(i, a)) * f;
                    }
                }
                let u = [j[0] / rho, j[1] / rho];
                if !rho.is_finite() || !u[..d].iter().all(|x| x.is_finite()) {
                    return 2;
                }
                if !(rho > 0.0) || u[..d].iter().any(|x| x.abs() > 1.0) {
                    return 1;
                }
                let mut feq = [0.0; 9];
                if model.fill(lat, rho, &u[..d], &mut feq[..q]).is_err() {
                    return 1;
                }
                for (o, fe) in out.iter_mut().zip(&feq[..q]) {
                    *o += 2.0 * beta * (fe - *o);
                }
                0
            })
            .max()
            .unwrap_or(0);
        Ok(match flag {
            0 => Ok(scratch),
            1 => Err(StepStatus::VelocityOutOfRange { step: self.steps }),
            _ => Err(StepStatus::NonFinite { step: self.steps }),
        })
    }
}

/// D1 grid at `f^eq(ρ₀ + ε cos(2πmx/N), u₀)`.
pub fn init_uniform_perturbed(
    n: usize,
    rho0: f64,
    u0: f64,
    eps: f64,
    m: usize,
    model: EquilibriumModel,
) -> Result<SimulationGrid> {
    init_perturbed(&[n], rho0, &[u0], eps, m, model)
}

/// Uniform flow `u₀` with density `ρ₀ + ε cos(2πmx/Nx)`, on a D1 or D2 grid.
pub fn init_perturbed(
    extents: &[usize],
    rho0: f64,
    u0: &[f64],
    eps: f64,
    m: usize,
    model: EquilibriumModel,
) -> Result<SimulationGrid> {
    if u0.len() != extents.len() {
        return Err(LbError::LengthMismatch {
            expected: extents.len(),
            got: u0.len(),
        });
    }
    let nx = extents.first().copied().unwrap_or(0);
    check_mode(m, nx)?;
    if !(rho0 > 0.0) || !(eps.abs() < rho0) {
        return Err(LbError::InvalidParameter(format!(
            "need rho0 > 0 and |eps| < rho0, got rho0 = {rho0}, eps = {eps}"
        )));
    }
    let k = TAU * m as f64 / nx as f64;
    SimulationGrid::from_fields(extents, model, |x, _| {
        (rho0 + eps * (k * x as f64).cos(), u0.to_vec())
    })
}

/// D2 grid with unit density and `u = (u₀, ε sin(2πmx/Nx))`.
pub fn init_shear_wave(
    nx: usize,
    ny: usize,
    u0: f64,
    eps: f64,
    m: usize,
    model: EquilibriumModel,
) -> Result<SimulationGrid> {
    check_mode(m, nx)?;
    if !(eps.abs() <= 0.01) {
        return Err(LbError::InvalidParameter(format!(
            "shear amplitude must satisfy |eps| <= 0.01, got {eps}"
        )));
    }
    let k = TAU * m as f64 / nx as f64;
    SimulationGrid::from_fields(&[nx, ny], model, |x, _| {
        (1.0, vec![u0, eps * (k * x as f64).sin()])
    })
}

fn check_mode(m: usize, n: usize) -> Result<()> {
    if m == 0 || m >= n {
        return Err(LbError::InvalidParameter(format!(
            "mode index must satisfy 1 <= m < N, got m = {m}, N = {n}"
        )));
    }
    Ok(())
}

/// Minimum series length accepted by [`measure_growth_rate`].
pub const MIN_SERIES_LEN: usize = 32;

/// Least-squares slope of `ln a_t` against `t`, after dropping the first
/// quarter of the series as a transient.
pub fn measure_growth_rate(series: &[f64]) -> Result<f64> {
    if series.len() < MIN_SERIES_LEN {
        return Err(LbError::GrowthRate(format!(
            "need at least {MIN_SERIES_LEN} samples, got {}",
            series.len()
        )));
    }
    let skip = series.len() / 4;
    let tail = &series[skip..];
    if let Some(bad) = tail.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(LbError::GrowthRate(format!(
            "amplitude {bad} is not positive and finite after the transient"
        )));
    }
    let n = tail.len() as f64;
    let t_mean = (skip as f64 + (series.len() - 1) as f64) / 2.0;
    let y_mean = tail.iter().map(|a| a.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (j, a) in tail.iter().enumerate() {
        let dt = (skip + j) as f64 - t_mean;
        sxy += dt * (a.ln() - y_mean);
        sxx += dt * dt;
    }
    Ok(sxy / sxx)
}

/// Seeded-mode growth measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthMeasurement {
    /// Per-step log growth of the seeded density mode.
    pub sigma: f64,
    pub steps: u64,
    pub status: StepStatus,
    pub amplitudes: Vec<f64>,
}

/// Parameters of a seeded D1 growth run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRun {
    pub model: EquilibriumModel,
    pub n: usize,
    pub u0: f64,
    pub beta: f64,
    pub eps: f64,
    pub mode: usize,
    pub max_steps: u64,
}

impl GrowthRun {
    /// Runs until `max_steps`, a flagged step, or the mode amplitude passing
    /// `0.01 N`, then fits the log growth of the density mode.
    pub fn measure(&self) -> Result<GrowthMeasurement> {
        let mut grid =
            init_uniform_perturbed(self.n, 1.0, self.u0, self.eps, self.mode, self.model)?;
        let cap = 0.01 * self.n as f64;
        let mut amplitudes = vec![grid.density_mode_amplitude(self.mode)];
        let mut status = StepStatus::Ok;
        while grid.steps() < self.max_steps {
            status = grid.step(self.beta, self.model)?;
            if !status.is_ok() {
                break;
            }
            let a = grid.density_mode_amplitude(self.mode);
            amplitudes.push(a);
            if !(a < cap) {
                break;
            }
        }
        Ok(GrowthMeasurement {
            sigma: measure_growth_rate(&amplitudes)?,
            steps: grid.steps(),
            status,
            amplitudes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::ViscosityMap;

    #[test]
    fn growth_rate_examples() {
        let geo: Vec<f64> = (0..200).map(|t| 3.0 * 0.99f64.powi(t)).collect();
        assert!((measure_growth_rate(&geo).unwrap() - 0.99f64.ln()).abs() < 1e-9);
        assert!(measure_growth_rate(&[2.5; 64]).unwrap().abs() < 1e-15);
        assert!(measure_growth_rate(&[1.0; 31]).is_err());
        let mut dead = vec![1.0; 64];
        dead[50] = 0.0;
        assert!(measure_growth_rate(&dead).is_err());
        // Non-positive values inside the skipped transient are ignored.
        let mut early = vec![1.0; 64];
        early[3] = -1.0;
        assert!(measure_growth_rate(&early).is_ok());
    }

    #[test]
    fn uniform_equilibrium_is_fixed_point() {
        for model in EquilibriumModel::ALL {
            for (extents, u) in [(vec![16], vec![0.3]), (vec![8, 6], vec![-0.2, 0.1])] {
                let mut grid = init_perturbed(&extents, 1.1, &u, 0.0, 1, model).unwrap();
                let before = grid.clone();
                for _ in 0..10 {
                    assert!(grid.step(0.9, model).unwrap().is_ok());
                }
                for i in 0..grid.lattice().q() {
                    for (a, b) in grid.plane(i).iter().zip(before.plane(i)) {
                        assert!((a - b).abs() < 1e-15, "{model}");
                    }
                }
            }
        }
    }

    #[test]
    fn relaxation_substitutions() {
        let model = EquilibriumModel::product_af();
        let mut base = init_uniform_perturbed(8, 1.0, 0.1, 0.0, 1, model).unwrap();
        base.plane_mut(0)[3] += 0.05;
        base.plane_mut(1)[3] -= 0.02;
        let f = base.node(3);
        let (rho, u) = base.moments_at(3);
        let mut feq = vec![0.0; 3];
        model.fill(base.lattice(), rho, &u, &mut feq).unwrap();
        // 2β = 1 replaces f by f^eq; 2β = 1/2 averages the two.
        for (beta, weight) in [(0.5, 1.0), (0.25, 0.5)] {
            let mut grid = base.clone();
            assert!(grid.collide(beta, model).unwrap().is_ok());
            let post = grid.node(3);
            for i in 0..3 {
                let want = (1.0 - weight) * f[i] + weight * feq[i];
                assert!((post[i] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn streaming_moves_along_links() {
        let mut grid = SimulationGrid::zeros(&[4, 3]).unwrap();
        // Velocity 8 is (+1, +1).
        grid.plane_mut(8)[0] = 1.0;
        // β = 1/2 keeps half of the pulse on its own link after collision.
        let model = EquilibriumModel::product_iso();
        for i in 0..9 {
            for n in 0..12 {
                grid.plane_mut(i)[n] += 1.0;
            }
        }
        let mass = grid.total_mass();
        grid.step(0.5, model).unwrap();
        assert!((grid.total_mass() - mass).abs() < 1e-12);
        assert_eq!(grid.steps(), 1);
        let lat = Lattice::d2q9();
        let moved = grid.plane(8)[1 * 4 + 1];
        let stayed = grid.plane(8)[0];
        assert!(moved > stayed);
        assert_eq!(lat.velocity(8), &[1, 1]);
    }

    #[test]
    fn flags_out_of_range_without_mutating() {
        let model = EquilibriumModel::product_iso();
        let mut grid = init_uniform_perturbed(8, 1.0, 0.0, 0.0, 1, model).unwrap();
        grid.plane_mut(0)[5] = 0.0;
        grid.plane_mut(1)[5] = -0.5;
        grid.plane_mut(2)[5] = 1.0;
        let before = grid.clone();
        assert_eq!(
            grid.step(0.8, model).unwrap(),
            StepStatus::VelocityOutOfRange { step: 0 }
        );
        assert_eq!(grid, before);
        grid.plane_mut(1)[2] = f64::NAN;
        assert_eq!(
            grid.step(0.8, model).unwrap(),
            StepStatus::NonFinite { step: 0 }
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        let model = EquilibriumModel::product_iso();
        assert!(init_uniform_perturbed(16, 1.0, 0.0, 1e-6, 0, model).is_err());
        assert!(init_uniform_perturbed(16, 1.0, 0.0, 1e-6, 16, model).is_err());
        assert!(init_uniform_perturbed(16, 1.0, 1.5, 1e-6, 1, model).is_err());
        assert!(init_shear_wave(16, 4, 0.0, 0.1, 1, model).is_err());
        assert!(SimulationGrid::zeros(&[4, 4, 4]).is_err());
        let mut grid = init_uniform_perturbed(16, 1.0, 0.0, 0.0, 1, model).unwrap();
        assert!(grid.step(0.0, model).is_err());
        assert!(grid.step(1.5, model).is_err());
    }

    #[test]
    fn seeded_amplitude_scales_with_eps() {
        let model = EquilibriumModel::product_af();
        let a = init_uniform_perturbed(128, 1.0, 0.2, 1e-6, 1, model).unwrap();
        let b = init_uniform_perturbed(128, 1.0, 0.2, 2e-6, 1, model).unwrap();
        let (ra, rb) = (a.density_mode_amplitude(1), b.density_mode_amplitude(1));
        assert!((ra - 64e-6).abs() < 1e-12);
        assert!((rb / ra - 2.0).abs() < 1e-7);
        assert!(a.density_mode_amplitude(2) < 1e-12);
    }

    #[test]
    fn shear_wave_viscosity_at_rest() {
        let beta = 0.8;
        let nu = ViscosityMap::from_beta(beta).unwrap().nu;
        let (nx, m) = (128, 1);
        let model = EquilibriumModel::product_iso();
        let mut grid = init_shear_wave(nx, 2, 0.0, 1e-4, m, model).unwrap();
        let mut amps = vec![grid.shear_mode_amplitude(m)];
        for _ in 0..2000 {
            assert!(grid.step(beta, model).unwrap().is_ok());
            amps.push(grid.shear_mode_amplitude(m));
        }
        let k = TAU * m as f64 / nx as f64;
        let nu_eff = -measure_growth_rate(&amps).unwrap() / (k * k);
        assert!(
            (nu_eff / nu - 1.0).abs() < 0.01,
            "nu_eff = {nu_eff}, nu = {nu}"
        );
    }
}
