//! Root loci of the D1Q3 characteristic cubic.

use num_complex::Complex64;

use super::eigen::sort_by_modulus;
use super::operator::LinearizedOperator;
use super::roots::polynomial_roots;
use crate::equilibrium::EquilibriumModel;
use crate::error::Result;
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq)]
pub struct LocusPoint {
    pub k: f64,
    /// Roots sorted by decreasing modulus.
    pub roots: Vec<Complex64>,
}

impl LocusPoint {
    pub fn max_modulus(&self) -> f64 {
        self.roots.first().map_or(0.0, |z| z.norm())
    }
}

pub fn root_locus(
    model: EquilibriumModel,
    u: f64,
    beta: f64,
    k_grid: &[f64],
) -> Result<Vec<LocusPoint>> {
    let lat = Lattice::d1q3();
    k_grid
        .iter()
        .map(|&k| {
            let op = LinearizedOperator::new(&lat, model, 1.0, &[u], beta, &[k])?;
            let mut roots = polynomial_roots(&op.char_poly_d1q3()?)?;
            sort_by_modulus(&mut roots);
            Ok(LocusPoint { k, roots })
        })
        .collect()
}
