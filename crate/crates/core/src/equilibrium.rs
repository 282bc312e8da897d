//! Pressure closures and equilibrium populations.
//!
//! Product-form equilibria factor over axes,
//! `f_i = ρ ∏_α Ψ_{c_iα}(u_α, P_α)` with `P_α = π*(u_α) + u_α²`, where the
//! per-axis triplet is `Ψ_0 = 1 - P`, `Ψ_{±1} = (±ξ + P) / 2`. The closure
//! `π*` is either the isotropic `ς²` or the asymptotically free pressure
//! `π* = ς²(2√(1 + (u/ς)²) - 1 - (u/ς)²)`, which vanishes at `|u| = 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{LbError, Result};
use crate::lattice::{check_velocity, FlowState, Lattice, Populations, CS2};
use crate::matrix::RealMatrix;

/// Closure for the diagonal equilibrium pressure at unit density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PressureModel {
    Isotropic,
    AsymptoticallyFree,
}

impl PressureModel {
    /// `(π*(u), ∂_u π*(u))`.
    pub fn eval(self, u: f64) -> Result<(f64, f64)> {
        match self {
            Self::Isotropic => pressure_isotropic(u),
            Self::AsymptoticallyFree => pressure_af(u),
        }
    }

    pub fn pi_star(self, u: f64) -> Result<f64> {
        Ok(self.eval(u)?.0)
    }

    #[inline]
    fn eval_unchecked(self, u: f64) -> (f64, f64) {
        match self {
            Self::Isotropic => (CS2, 0.0),
            Self::AsymptoticallyFree => {
                let s = (1.0 + u * u / CS2).sqrt();
                (CS2 * (2.0 * s - 1.0) - u * u, 2.0 * u / s - 2.0 * u)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Isotropic => "isotropic",
            Self::AsymptoticallyFree => "asymptotically-free",
        }
    }
}

fn check_scalar_velocity(u: f64) -> Result<()> {
    check_velocity(&[u])
}

/// Isotropic closure: `(ς², 0)` for every `|u| ≤ 1`.
pub fn pressure_isotropic(u: f64) -> Result<(f64, f64)> {
    check_scalar_velocity(u)?;
    Ok(PressureModel::Isotropic.eval_unchecked(u))
}

/// Asymptotically free closure and its analytic derivative
/// `∂_u π* = 2u / √(1 + 3u²) - 2u`.
pub fn pressure_af(u: f64) -> Result<(f64, f64)> {
    check_scalar_velocity(u)?;
    Ok(PressureModel::AsymptoticallyFree.eval_unchecked(u))
}

/// Per-axis factors `(Ψ_{-1}, Ψ_0, Ψ_{+1})` for first moment `ξ` and
/// second moment `P`.
#[inline]
pub fn psi_triplet(xi: f64, p: f64) -> [f64; 3] {
    [0.5 * (p - xi), 1.0 - p, 0.5 * (p + xi)]
}

/// Derivatives of the triplet along a velocity component when
/// `ξ = u` and `dP/du = dp`.
#[inline]
fn psi_triplet_du(dp: f64) -> [f64; 3] {
    [0.5 * (dp - 1.0), -dp, 0.5 * (dp + 1.0)]
}

/// Equilibrium family used by the LBGK collision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumModel {
    ProductForm(PressureModel),
    SecondOrderPolynomial,
}

impl EquilibriumModel {
    pub const ALL: [EquilibriumModel; 3] = [
        EquilibriumModel::SecondOrderPolynomial,
        EquilibriumModel::ProductForm(PressureModel::Isotropic),
        EquilibriumModel::ProductForm(PressureModel::AsymptoticallyFree),
    ];

    pub const fn product_iso() -> Self {
        Self::ProductForm(PressureModel::Isotropic)
    }

    pub const fn product_af() -> Self {
        Self::ProductForm(PressureModel::AsymptoticallyFree)
    }

    /// Short selector used on the command line and in CSV output.
    pub fn tag(self) -> &'static str {
        match self {
            Self::SecondOrderPolynomial => "poly2",
            Self::ProductForm(PressureModel::Isotropic) => "product-iso",
            Self::ProductForm(PressureModel::AsymptoticallyFree) => "product-af",
        }
    }

    /// Pressure closure backing the hydrodynamic analysis. The second-order
    /// polynomial equilibrium carries the isotropic pressure.
    pub fn pressure(self) -> PressureModel {
        match self {
            Self::ProductForm(pm) => pm,
            Self::SecondOrderPolynomial => PressureModel::Isotropic,
        }
    }

    pub fn equilibrium(self, lat: &Lattice, state: &FlowState) -> Result<Populations> {
        let mut out = vec![0.0; lat.q()];
        self.fill(lat, state.rho, &state.u, &mut out)?;
        Ok(Populations::new(out))
    }

    /// Writes `f^eq(ρ, u)` into `out` (length Q).
    pub fn fill(self, lat: &Lattice, rho: f64, u: &[f64], out: &mut [f64]) -> Result<()> {
        lat.check_len(out.len())?;
        if u.len() != lat.dim() {
            return Err(LbError::LengthMismatch {
                expected: lat.dim(),
                got: u.len(),
            });
        }
        check_velocity(u)?;
        match self {
            Self::ProductForm(pm) => fill_product(lat, pm, rho, u, out),
            Self::SecondOrderPolynomial => fill_poly2(lat, rho, u, out),
        }
        Ok(())
    }

    /// `J_ij = ∂f_i^eq / ∂f_j` through the conserved moments:
    /// `∂f_i/∂ρ + Σ_α ∂f_i/∂u_α (c_jα - u_α) / ρ`.
    pub fn jacobian(self, lat: &Lattice, state: &FlowState) -> Result<RealMatrix> {
        state.validate()?;
        if state.dim() != lat.dim() {
            return Err(LbError::LengthMismatch {
                expected: lat.dim(),
                got: state.dim(),
            });
        }
        let q = lat.q();
        let d = lat.dim();
        let rho = state.rho;
        let u = &state.u;
        // Columns of ∂f/∂(ρ, u_α).
        let mut d_rho = vec![0.0; q];
        let mut d_u = vec![vec![0.0; q]; d];
        match self {
            Self::ProductForm(pm) => {
                let mut psi = [[0.0; 3]; 2];
                let mut dpsi = [[0.0; 3]; 2];
                for a in 0..d {
                    let (pi, dpi) = pm.eval_unchecked(u[a]);
                    psi[a] = psi_triplet(u[a], pi + u[a] * u[a]);
                    dpsi[a] = psi_triplet_du(dpi + 2.0 * u[a]);
                }
                for i in 0..q {
                    let idx: Vec<usize> = (0..d).map(|a| (lat.c(i, a) + 1) as usize).collect();
                    d_rho[i] = (0..d).map(|a| psi[a][idx[a]]).product();
                    for (a, col) in d_u.iter_mut().enumerate() {
                        col[i] = rho
                            * (0..d)
                                .map(|b| {
                                    if a == b {
                                        dpsi[b][idx[b]]
                                    } else {
                                        psi[b][idx[b]]
                                    }
                                })
                                .product::<f64>();
                    }
                }
            }
            Self::SecondOrderPolynomial => {
                let usq: f64 = u.iter().map(|x| x * x).sum();
                for i in 0..q {
                    let w = rest_weight(lat, i);
                    let cu: f64 = (0..d).map(|a| f64::from(lat.c(i, a)) * u[a]).sum();
                    d_rho[i] =
                        w * (1.0 + cu / CS2 + cu * cu / (2.0 * CS2 * CS2) - usq / (2.0 * CS2));
                    for (a, col) in d_u.iter_mut().enumerate() {
                        let c = f64::from(lat.c(i, a));
                        col[i] = rho * w * (c / CS2 + cu * c / (CS2 * CS2) - u[a] / CS2);
                    }
                }
            }
        }
        let mut jac = RealMatrix::zeros(q);
        for i in 0..q {
            for j in 0..q {
                let mut v = d_rho[i];
                for a in 0..d {
                    v += d_u[a][i] * (f64::from(lat.c(j, a)) - u[a]) / rho;
                }
                jac[(i, j)] = v;
            }
        }
        Ok(jac)
    }
}

impl fmt::Display for EquilibriumModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for EquilibriumModel {
    type Err = LbError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poly2" => Ok(Self::SecondOrderPolynomial),
            "product-iso" | "iso" => Ok(Self::product_iso()),
            "product-af" | "af" => Ok(Self::product_af()),
            other => Err(LbError::InvalidParameter(format!(
                "unknown model '{other}' (expected poly2, product-iso or product-af)"
            ))),
        }
    }
}

/// Tensor-product rest weight: per-axis `{1/6, 2/3, 1/6}`.
#[inline]
fn rest_weight(lat: &Lattice, i: usize) -> f64 {
    const W: [f64; 3] = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
    (0..lat.dim())
        .map(|a| W[(lat.c(i, a) + 1) as usize])
        .product()
}

#[inline]
fn fill_product(lat: &Lattice, pm: PressureModel, rho: f64, u: &[f64], out: &mut [f64]) {
    let mut psi = [[1.0; 3]; 2];
    for (a, &ua) in u.iter().enumerate() {
        let (pi, _) = pm.eval_unchecked(ua);
        psi[a] = psi_triplet(ua, pi + ua * ua);
    }
    for (i, f) in out.iter_mut().enumerate() {
        let mut v = rho;
        for (a, p) in psi.iter().enumerate().take(u.len()) {
            v *= p[(lat.c(i, a) + 1) as usize];
        }
        *f = v;
    }
}

#[inline]
fn fill_poly2(lat: &Lattice, rho: f64, u: &[f64], out: &mut [f64]) {
    let usq: f64 = u.iter().map(|x| x * x).sum();
    for (i, f) in out.iter_mut().enumerate() {
        let cu: f64 = u
            .iter()
            .enumerate()
            .map(|(a, &ua)| f64::from(lat.c(i, a)) * ua)
            .sum();
        *f = rho
            * rest_weight(lat, i)
            * (1.0 + cu / CS2 + cu * cu / (2.0 * CS2 * CS2) - usq / (2.0 * CS2));
    }
}

/// Product-form equilibrium for the given closure.
pub fn equilibrium_product(
    lat: &Lattice,
    pm: PressureModel,
    state: &FlowState,
) -> Result<Populations> {
    EquilibriumModel::ProductForm(pm).equilibrium(lat, state)
}

/// Second-order polynomial equilibrium with tensor-product rest weights.
/// Populations are not guaranteed non-negative.
pub fn equilibrium_poly2(lat: &Lattice, state: &FlowState) -> Result<Populations> {
    EquilibriumModel::SecondOrderPolynomial.equilibrium(lat, state)
}

pub fn equilibrium_jacobian(
    model: EquilibriumModel,
    lat: &Lattice,
    state: &FlowState,
) -> Result<RealMatrix> {
    model.jacobian(lat, state)
}
