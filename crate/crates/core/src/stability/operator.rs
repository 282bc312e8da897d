//! Fourier-space linearization of the LBGK update.
//!
//! A perturbation `δf_i(r) = f̂_i e^{i k·r}` evolves by one collide-then-stream
//! step as `f̂ ← L f̂` with
//! `L_ij = e^{-i k·c_i} [(1 - 2β) δ_ij + 2β J_ij]`, `J` the equilibrium
//! Jacobian at the base state.

use num_complex::Complex64;

use super::charpoly::cubic_from_traces;
use super::eigen::{spectral_radius, StabilityReport};
use crate::equilibrium::EquilibriumModel;
use crate::error::{LbError, Result};
use crate::lattice::{FlowState, Lattice};
use crate::matrix::CMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorParams {
    pub dim: usize,
    pub model: EquilibriumModel,
    pub rho: f64,
    pub u: Vec<f64>,
    pub beta: f64,
    pub k: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedOperator {
    pub matrix: CMatrix,
    pub params: OperatorParams,
}

impl LinearizedOperator {
    pub fn new(
        lat: &Lattice,
        model: EquilibriumModel,
        rho: f64,
        u: &[f64],
        beta: f64,
        k: &[f64],
    ) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(LbError::InvalidParameter(format!(
                "relaxation parameter beta must lie in (0, 1], got {beta}"
            )));
        }
        if k.len() != lat.dim() {
            return Err(LbError::LengthMismatch {
                expected: lat.dim(),
                got: k.len(),
            });
        }
        if k.iter().any(|x| !x.is_finite()) {
            return Err(LbError::InvalidParameter(
                "wave vector must be finite".into(),
            ));
        }
        let state = FlowState::new(rho, u)?;
        let jac = model.jacobian(lat, &state)?;
        let q = lat.q();
        let mut matrix = CMatrix::zeros(q);
        for i in 0..q {
            let phase: f64 = (0..lat.dim()).map(|a| k[a] * f64::from(lat.c(i, a))).sum();
            let shift = Complex64::from_polar(1.0, -phase);
            for j in 0..q {
                let mut v = 2.0 * beta * jac[(i, j)];
                if i == j {
                    v += 1.0 - 2.0 * beta;
                }
                matrix[(i, j)] = shift * v;
            }
        }
        Ok(Self {
            matrix,
            params: OperatorParams {
                dim: lat.dim(),
                model,
                rho,
                u: u.to_vec(),
                beta,
                k: k.to_vec(),
            },
        })
    }

    pub fn report(&self) -> Result<StabilityReport> {
        spectral_radius(&self.matrix)
    }

    /// Monic characteristic cubic `[a0, a1, a2, 1]` of a D1Q3 operator.
    pub fn char_poly_d1q3(&self) -> Result<[Complex64; 4]> {
        if self.params.dim != 1 {
            return Err(LbError::InvalidParameter(format!(
                "cubic characteristic polynomial needs a D1Q3 operator, got D={}",
                self.params.dim
            )));
        }
        Ok(cubic_from_traces(&self.matrix))
    }
}

pub fn linearized_operator(
    lat: &Lattice,
    model: EquilibriumModel,
    rho: f64,
    u: &[f64],
    beta: f64,
    k: &[f64],
) -> Result<LinearizedOperator> {
    LinearizedOperator::new(lat, model, rho, u, beta, k)
}

pub fn char_poly_d1q3(op: &LinearizedOperator) -> Result<[Complex64; 4]> {
    op.char_poly_d1q3()
}
