//! First-neighbor lattices `DdQ3^d` built as tensor products of `{-1, 0, 1}`.
//!
//! Velocity ordering is lexicographic over the per-axis index `-1, 0, +1`,
//! with the x axis most significant:
//!
//! | D | index: velocity |
//! |---|-----------------|
//! | 1 | 0:(-1) 1:(0) 2:(+1) |
//! | 2 | 0:(-1,-1) 1:(-1,0) 2:(-1,+1) 3:(0,-1) 4:(0,0) 5:(0,+1) 6:(+1,-1) 7:(+1,0) 8:(+1,+1) |
//!
//! With this ordering the rest velocity sits at `(Q - 1) / 2` and the
//! opposite of velocity `i` is `Q - 1 - i`.

use crate::error::{LbError, Result};

/// Lattice speed of sound squared, `ς² = 1/3`.
pub const CS2: f64 = 1.0 / 3.0;

/// Discrete velocity set.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    dim: usize,
    velocities: Vec<[i32; 2]>,
}

impl Lattice {
    /// Builds the `D`-fold tensor-product velocity set, `D ∈ {1, 2}`.
    pub fn new(dim: usize) -> Result<Self> {
        let velocities = match dim {
            1 => vec![[-1, 0], [0, 0], [1, 0]],
            2 => {
                let mut v = Vec::with_capacity(9);
                for cx in -1..=1 {
                    for cy in -1..=1 {
                        v.push([cx, cy]);
                    }
                }
                v
            }
            d => return Err(LbError::UnsupportedDimension(d)),
        };
        Ok(Self { dim, velocities })
    }

    pub fn d1q3() -> Self {
        Self::new(1).expect("D1Q3 is always available")
    }

    pub fn d2q9() -> Self {
        Self::new(2).expect("D2Q9 is always available")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of discrete velocities, `3^D`.
    pub fn q(&self) -> usize {
        self.velocities.len()
    }

    /// Velocity component `α` of link `i`.
    #[inline]
    pub fn c(&self, i: usize, alpha: usize) -> i32 {
        self.velocities[i][alpha]
    }

    /// Velocity `i` as a slice of length `D`.
    pub fn velocity(&self, i: usize) -> &[i32] {
        &self.velocities[i][..self.dim]
    }

    pub fn sound_speed(&self) -> f64 {
        CS2.sqrt()
    }

    pub fn rest_index(&self) -> usize {
        (self.q() - 1) / 2
    }

    pub fn opposite(&self, i: usize) -> usize {
        self.q() - 1 - i
    }

    /// Zeroth and first moments: `ρ = Σ f_i`, `j_α = Σ c_iα f_i`.
    pub fn moments(&self, f: &Populations) -> Result<(f64, Vec<f64>)> {
        self.check_len(f.len())?;
        let mut rho = 0.0;
        let mut mom = vec![0.0; self.dim];
        for (i, &fi) in f.iter().enumerate() {
            rho += fi;
            for (a, m) in mom.iter_mut().enumerate() {
                *m += f64::from(self.c(i, a)) * fi;
            }
        }
        Ok((rho, mom))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.q() {
            return Err(LbError::LengthMismatch {
                expected: self.q(),
                got: len,
            });
        }
        Ok(())
    }
}

/// Alias kept for call sites that read better as a free function.
pub fn build_lattice(dim: usize) -> Result<Lattice> {
    Lattice::new(dim)
}

/// Population values of one node, one entry per discrete velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct Populations(pub Vec<f64>);

impl Populations {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Deref for Populations {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Populations {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Macroscopic state `(ρ, u)` of a node.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub rho: f64,
    pub u: Vec<f64>,
}

impl FlowState {
    /// Validated constructor: `ρ > 0` and `|u_α| ≤ 1`.
    pub fn new(rho: f64, u: &[f64]) -> Result<Self> {
        let s = Self { rho, u: u.to_vec() };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(LbError::InvalidParameter(format!(
                "density must be positive and finite, got {}",
                self.rho
            )));
        }
        check_velocity(&self.u)
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }
}

pub(crate) fn check_velocity(u: &[f64]) -> Result<()> {
    for (component, &value) in u.iter().enumerate() {
        if !(value.abs() <= 1.0) {
            return Err(LbError::VelocityOutOfRange { component, value });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1q3_velocities() {
        let lat = build_lattice(1).unwrap();
        assert_eq!(lat.q(), 3);
        let v: Vec<i32> = (0..3).map(|i| lat.c(i, 0)).collect();
        assert_eq!(v, vec![-1, 0, 1]);
        assert_eq!(lat.rest_index(), 1);
    }

    #[test]
    fn d2q9_tensor_product() {
        let lat = build_lattice(2).unwrap();
        assert_eq!(lat.q(), 9);
        let rest = (0..9).filter(|&i| lat.velocity(i) == [0, 0]).count();
        assert_eq!(rest, 1);
        assert_eq!(lat.velocity(lat.rest_index()), &[0, 0]);
        for cx in -1..=1 {
            for cy in -1..=1 {
                let n = (0..9).filter(|&i| lat.velocity(i) == [cx, cy]).count();
                assert_eq!(n, 1);
            }
        }
    }

    #[test]
    fn unsupported_dimension() {
        assert_eq!(build_lattice(3), Err(LbError::UnsupportedDimension(3)));
        assert!(build_lattice(0).is_err());
    }

    #[test]
    fn closed_under_negation_and_isotropic() {
        for d in 1..=2 {
            let lat = build_lattice(d).unwrap();
            for i in 0..lat.q() {
                let j = lat.opposite(i);
                for a in 0..d {
                    assert_eq!(lat.c(j, a), -lat.c(i, a));
                }
            }
            for a in 0..d {
                let s: i32 = (0..lat.q()).map(|i| lat.c(i, a)).sum();
                assert_eq!(s, 0);
                for b in 0..d {
                    let s2: i32 = (0..lat.q()).map(|i| lat.c(i, a) * lat.c(i, b)).sum();
                    if a == b {
                        assert!(s2 > 0);
                    } else {
                        assert_eq!(s2, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn moments_simple() {
        let lat = Lattice::d1q3();
        let (rho, j) = lat
            .moments(&Populations::new(vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]))
            .unwrap();
        assert!((rho - 1.0).abs() < 1e-15);
        assert!(j[0].abs() < 1e-15);
        let (rho, j) = lat.moments(&Populations::new(vec![0.0, 0.0, 1.0])).unwrap();
        assert_eq!((rho, j[0]), (1.0, 1.0));
    }

    #[test]
    fn moments_length_mismatch() {
        let lat = Lattice::d2q9();
        let err = lat.moments(&Populations::new(vec![0.0; 3])).unwrap_err();
        assert_eq!(
            err,
            LbError::LengthMismatch {
                expected: 9,
                got: 3
            }
        );
    }

    #[test]
    fn flow_state_validation() {
        assert!(FlowState::new(1.0, &[1.0, -1.0]).is_ok());
        assert!(FlowState::new(0.0, &[0.0]).is_err());
        assert!(matches!(
            FlowState::new(1.0, &[0.2, 1.2]),
            Err(LbError::VelocityOutOfRange { component: 1, .. })
        ));
        assert!(FlowState::new(1.0, &[f64::NAN]).is_err());
    }
}
