//! Simultaneous polynomial root finding (Aberth–Ehrlich) with Newton
//! polishing and cluster averaging.
//!
//! Coefficients are stored in ascending order: `coeffs[j]` multiplies `z^j`.

use num_complex::Complex64;

use crate::error::{LbError, Result};

/// Iteration cap for the Aberth sweep.
pub const MAX_ITERATIONS: usize = 500;

/// Maximum accepted relative residual `|p(z)| / Σ|a_j||z|^j` per root.
pub const RESIDUAL_TOL: f64 = 1e-10;

const NEWTON_POLISH_STEPS: usize = 3;

/// `(p(z), p'(z), Σ|a_j||z|^j)` by Horner's rule.
#[inline]
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let az = z.norm();
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        scale = scale * az + a.norm();
    }
    (p, dp, scale)
}

pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Relative residual `|p(z)| / Σ|a_j||z|^j`.
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (p, _, scale) = eval_with_derivative(coeffs, z);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Normwise backward error `|p(z)| / (max_j |a_j| · Σ|z|^j)`. Unlike the
/// componentwise residual it stays meaningful at roots near zero, where the
/// low-order coefficients are pure rounding.
pub fn backward_error(coeffs: &[Complex64], z: Complex64) -> f64 {
    let norm = coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if norm == 0.0 {
        return 0.0;
    }
    let az = z.norm();
    let powers: f64 = (0..coeffs.len()).map(|j| az.powi(j as i32)).sum();
    eval(coeffs, z).norm() / (norm * powers)
}

/// All roots of the polynomial. Leading zeros are not allowed.
///
/// Roots belonging to a cluster whose inclusion disks overlap are replaced
/// by the cluster centroid: the mean of a root cluster is well conditioned
/// while the individual members of a perturbed multiple root are not.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() == 0.0) {
        coeffs.pop();
    }
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    for c in &mut coeffs {
        *c /= lead;
    }
    if degree == 1 {
        return Ok(vec![-coeffs[0]]);
    }

    let mut roots = initial_guesses(&coeffs);
    let mut converged = vec![false; degree];
    let eps = f64::EPSILON;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && converged.iter().any(|c| !c) {
        iterations += 1;
        for i in 0..degree {
            if converged[i] {
                continue;
            }
            let z = roots[i];
            let (p, dp, scale) = eval_with_derivative(&coeffs, z);
            if p.norm() <= 4.0 * degree as f64 * eps * scale {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| 1.0 / (z - zj))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // Derivative vanished; nudge off the critical point.
                roots[i] = z + Complex64::new(1e-8, 1e-8) * (1.0 + z.norm());
                continue;
            }
            roots[i] = z - step;
            if step.norm() <= eps * roots[i].norm() {
                converged[i] = true;
            }
        }
    }

    for z in roots.iter_mut() {
        newton_polish(&coeffs, z);
    }
    average_clusters(&coeffs, &mut roots);

    let residuals: Vec<f64> = roots
        .iter()
        .map(|&z| relative_residual(&coeffs, z))
        .collect();
    if residuals.iter().any(|&r| !(r <= RESIDUAL_TOL)) {
        return Err(LbError::RootFinderNonConvergence {
            iterations,
            residuals,
        });
    }
    Ok(roots)
}

fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    // Geometric mean of the root moduli, bounded away from zero.
    let a0 = coeffs[0].norm();
    let radius = if a0 > 0.0 {
        a0.powf(1.0 / n as f64).max(0.1)
    } else {
        1.0
    };
    let centre = -coeffs[n - 1] / n as f64;
    (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            centre + Complex64::from_polar(radius, theta)
        })
        .collect()
}

fn newton_polish(coeffs: &[Complex64], z: &mut Complex64) {
    let (mut p, mut dp, _) = eval_with_derivative(coeffs, *z);
    for _ in 0..NEWTON_POLISH_STEPS {
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            return;
        }
        let candidate = *z - p / dp;
        let (pc, dpc, _) = eval_with_derivative(coeffs, candidate);
        if pc.norm() < p.norm() {
            *z = candidate;
            p = pc;
            dp = dpc;
        } else {
            return;
        }
    }
}

/// Merges roots whose inclusion disks overlap. For a monic polynomial the
/// disk around `z_i` has radius `n (|p(z_i)| + e_i) / |∏_{j≠i} (z_i - z_j)|`,
/// with `e_i` the Horner rounding bound; a connected union of `m` disks
/// holds exactly `m` roots.
fn average_clusters(coeffs: &[Complex64], roots: &mut [Complex64]) {
    let n = roots.len();
    let eps = f64::EPSILON;
    let radii: Vec<f64> = (0..n)
        .map(|i| {
            let (p, _, scale) = eval_with_derivative(coeffs, roots[i]);
            let denom: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (roots[i] - roots[j]).norm())
                .product();
            let num = n as f64 * (p.norm() + 4.0 * n as f64 * eps * scale);
            if denom == 0.0 {
                f64::INFINITY
            } else {
                num / denom
            }
        })
        .collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radii[i] + radii[j] {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    for members in groups.into_iter().filter(|g| g.len() > 1) {
        merge_group(coeffs, roots, members);
    }
}

/// Replaces a group by its refined centre when that centre is a root to
/// working accuracy. Chained disks can join unrelated clusters; such a group
/// fails the residual test and is split at its longest single-linkage edge.
fn merge_group(coeffs: &[Complex64], roots: &mut [Complex64], members: Vec<usize>) {
    if members.len() < 2 {
        return;
    }
    let centroid: Complex64 =
        members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
    let centre = refine_multiple(coeffs, centroid, members.len());
    if is_multiple_root(coeffs, centre, members.len()) {
        for &i in &members {
            roots[i] = centre;
        }
        return;
    }
    let (left, right) = split_longest_edge(roots, &members);
    merge_group(coeffs, roots, left);
    merge_group(coeffs, roots, right);
}

/// Whether `p^(j)(z)` vanishes to working accuracy for every `j < m`. Testing
/// `p` alone accepts the centroid of two distinct nearby clusters.
fn is_multiple_root(coeffs: &[Complex64], z: Complex64, m: usize) -> bool {
    let mut d = coeffs.to_vec();
    for _ in 0..m {
        if d.len() < 2 {
            return true;
        }
        if backward_error(&d, z) > RESIDUAL_TOL {
            return false;
        }
        d = derivative(&d);
    }
    true
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, &a)| a * j as f64)
        .collect()
}

/// Two components left after removing the longest edge of the minimum
/// spanning tree over `members`.
fn split_longest_edge(roots: &[Complex64], members: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = members.len();
    let dist = |a: usize, b: usize| (roots[members[a]] - roots[members[b]]).norm();
    // Prim's algorithm; `link[v]` is the tree neighbour of `v`.
    let mut in_tree = vec![false; m];
    let mut best = vec![f64::INFINITY; m];
    let mut link = vec![0; m];
    in_tree[0] = true;
    for v in 1..m {
        best[v] = dist(0, v);
    }
    let mut order = vec![0];
    for _ in 1..m {
        let v = (0..m)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("a vertex remains outside the tree");
        in_tree[v] = true;
        order.push(v);
        for w in 0..m {
            if !in_tree[w] && dist(v, w) < best[w] {
                best[w] = dist(v, w);
                link[w] = v;
            }
        }
    }
    let cut = (1..m)
        .max_by(|&a, &b| best[a].total_cmp(&best[b]))
        .expect("group has at least two members");
    // Vertices added after `cut` whose tree path reaches `cut` form one side.
    let mut side = vec![false; m];
    side[cut] = true;
    for &v in &order {
        if v != cut && v != 0 && side[link[v]] {
            side[v] = true;
        }
    }
    let (a, b): (Vec<usize>, Vec<usize>) = (0..m).partition(|&v| side[v]);
    (
        a.into_iter().map(|v| members[v]).collect(),
        b.into_iter().map(|v| members[v]).collect(),
    )
}

/// A root of multiplicity `m` is a simple root of `p^(m-1)`; Newton on that
/// derivative sharpens the cluster centre.
fn refine_multiple(coeffs: &[Complex64], start: Complex64, m: usize) -> Complex64 {
    let mut d = coeffs.to_vec();
    for _ in 1..m {
        d = derivative(&d);
    }
    if d.len() < 2 {
        return start;
    }
    let mut z = start;
    let (mut q, mut dq, _) = eval_with_derivative(&d, z);
    for _ in 0..8 {
        if dq.norm() == 0.0 || q.norm() == 0.0 {
            break;
        }
        let candidate = z - q / dq;
        let (qc, dqc, _) = eval_with_derivative(&d, candidate);
        if qc.norm() >= q.norm() {
            break;
        }
        z = candidate;
        q = qc;
        dq = dqc;
    }
    z
}
