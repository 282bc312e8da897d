//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::f64::consts::TAU;
use std::time::Instant;

use common::*;
use lbstab::equilibrium::{pressure_af, EquilibriumModel, PressureModel};
use lbstab::modes::{critical_velocity, eigen_modes, necessary_condition, ModeAnalysis};
use lbstab::simulator::{init_shear_wave, measure_growth_rate, GrowthRun};
use lbstab::stability::sweep::{log_space, stability_domain, SweepOptions};
use lbstab::stability::{
    dispersion_fit, eigenvalues, polynomial_roots, root_locus, schur_cohn_cubic,
    LinearizedOperator, STABILITY_TOL,
};
use lbstab::Lattice;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_asymptotic_freedom() -> Outcome {
    let (p_plus, d_plus) = pressure_af(1.0).map_err(|e| e.to_string())?;
    let (p_minus, d_minus) = pressure_af(-1.0).map_err(|e| e.to_string())?;
    // ∂π*(∓1) = ±1.
    let err = [p_plus, p_minus, d_minus - 1.0, d_plus + 1.0]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    check(
        err <= 1e-12,
        format!("pi*(+-1) = ({p_plus:e}, {p_minus:e}), dpi*(-1, +1) = ({d_minus}, {d_plus})"),
    )
}

fn c2_renormalizability() -> Outcome {
    let n = 10_000;
    let (mut max_b, mut min_a) = (0.0f64, f64::INFINITY);
    for j in 0..n {
        let u = -1.0 + 2.0 * j as f64 / (n - 1) as f64;
        let m =
            ModeAnalysis::new(PressureModel::AsymptoticallyFree, u).map_err(|e| e.to_string())?;
        // Independent evaluation from the definition of the closure.
        let (pi, dpi) = af_pressure(u);
        let b = -(3.0 * u + dpi) * pi + 3.0 * u * CS2 - u.powi(3);
        let a = (3.0 * CS2 - 3.0 * u * u - pi - dpi * (3.0 * u + dpi)) / (2.0 * CS2);
        max_b = max_b.max(m.b.abs()).max(b.abs());
        min_a = min_a.min(m.a).min(a);
    }
    check(
        max_b < 1e-12 && min_a >= -1e-12,
        format!("{n} points: max |B| = {max_b:e}, min A = {min_a:e}"),
    )
}

fn c3_critical_velocity() -> Outcome {
    let holds = |u: f64| {
        let (cp, cm) = eigen_modes(PressureModel::Isotropic, u).expect("isotropic modes exist");
        necessary_condition(cp, cm)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let want = 1.0 - 1.0 / 3f64.sqrt();
    let lib = critical_velocity(PressureModel::Isotropic, 1e-9)
        .map_err(|e| e.to_string())?
        .unwrap_or(f64::NAN);
    check(
        (lo - want).abs() < 1e-6 && (lib - want).abs() < 1e-6,
        format!("first violation at u = {lo:.9} (library {lib:.9}), 1 - 1/sqrt(3) = {want:.9}"),
    )
}

fn c4_root_locus() -> Outcome {
    let ks: Vec<f64> = (0..256).map(|j| TAU * j as f64 / 256.0).collect();
    let max_mod = |model| -> Result<f64, String> {
        Ok(root_locus(model, 1.0, 0.9994, &ks)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|p| p.max_modulus())
            .fold(0.0, f64::max))
    };
    let af = max_mod(EquilibriumModel::product_af())?;
    let iso = max_mod(EquilibriumModel::product_iso())?;
    check(
        af <= 1.0 + 1e-9 && iso > 1.0,
        format!("max|lambda|: AF = {af:.15}, isotropic = {iso:.6}"),
    )
}

fn c5_wavenumber_independence() -> Outcome {
    let lat = Lattice::d1q3();
    let n_grid = 50;
    let ks: Vec<f64> = (0..64).map(|j| TAU * (j as f64 + 0.5) / 64.0).collect();
    let (mut mixed, mut disagreements, mut af_unstable, mut unstable_points) = (0, 0, 0, 0);
    for model in EquilibriumModel::ALL {
        for iu in 0..n_grid {
            let u = -1.0 + 2.0 * iu as f64 / (n_grid - 1) as f64;
            for ib in 0..n_grid {
                let beta = (ib as f64 + 0.5) / n_grid as f64;
                let mut verdicts = Vec::with_capacity(ks.len());
                for &k in &ks {
                    let op = LinearizedOperator::new(&lat, model, 1.0, &[u], beta, &[k])
                        .map_err(|e| e.to_string())?;
                    let spectral = op.report().map_err(|e| e.to_string())?.stable;
                    let sc = schur_cohn_cubic(&op.char_poly_d1q3().map_err(|e| e.to_string())?);
                    if spectral != sc {
                        disagreements += 1;
                    }
                    verdicts.push(spectral);
                }
                if verdicts.iter().any(|&v| v != verdicts[0]) {
                    mixed += 1;
                }
                if !verdicts[0] {
                    unstable_points += 1;
                    if model == EquilibriumModel::product_af() {
                        af_unstable += 1;
                    }
                }
            }
        }
    }
    check(
        mixed == 0 && disagreements == 0 && af_unstable == 0,
        format!(
            "50x50 (u, beta) x 64 k, 3 models: {mixed} mixed verdicts, {disagreements} Schur-Cohn/spectral \
             disagreements, {unstable_points} unstable points, {af_unstable} AF unstable"
        ),
    )
}

fn c6_fig3() -> Outcome {
    let nus = log_space(1e-5, 1e-1, 12);
    let opts = SweepOptions::default();
    let domain = stability_domain(&Lattice::d2q9(), &EquilibriumModel::ALL, &nus, &opts)
        .map_err(|e| e.to_string())?;
    let u_of = |model| -> Vec<f64> { domain.rows_for(model).map(|r| r.outcome.u_max).collect() };
    let af = u_of(EquilibriumModel::product_af());
    let iso = u_of(EquilibriumModel::product_iso());
    let poly = u_of(EquilibriumModel::SecondOrderPolynomial);
    let bound = 1.0 - 1.0 / 3f64.sqrt() + 1e-3;
    let af_ok = af.iter().all(|u| (u - 1.0).abs() <= 1e-3);
    let iso_bound = iso.iter().all(|&u| u <= bound);
    // Non-increasing as ν decreases: along ascending ν, u_max never drops.
    let iso_mono = iso.windows(2).all(|w| w[0] <= w[1] + 1e-12);
    let order = poly.iter().zip(&iso).all(|(p, i)| p <= i);
    check(
        af_ok && iso_bound && iso_mono && order,
        format!(
            "AF min {:.4}; iso range [{:.4}, {:.4}] (bound {bound:.4}); poly2 range [{:.4}, {:.4}]; \
             iso monotone {iso_mono}; poly2 <= iso {order}",
            af.iter().cloned().fold(f64::INFINITY, f64::min),
            iso.iter().cloned().fold(f64::INFINITY, f64::min),
            iso.iter().cloned().fold(0.0, f64::max),
            poly.iter().cloned().fold(f64::INFINITY, f64::min),
            poly.iter().cloned().fold(0.0, f64::max),
        ),
    )
}

fn c7_dispersion() -> Outcome {
    let beta = 0.9;
    let nu = CS2 * (0.5 / beta - 0.5);
    let ks: Vec<f64> = (0..9).map(|j| 0.01 + 0.005 * j as f64).collect();
    let cases = [
        (EquilibriumModel::product_iso(), 0.0),
        (EquilibriumModel::product_iso(), 0.2),
        (EquilibriumModel::product_af(), 0.0),
        (EquilibriumModel::product_af(), 0.5),
        (EquilibriumModel::product_af(), 0.9),
    ];
    let (mut worst_c, mut worst_r) = (0.0f64, 0.0f64);
    for (model, u) in cases {
        let fit = dispersion_fit(model, u, beta, &ks).map_err(|e| e.to_string())?;
        let m = ModeAnalysis::new(model.pressure(), u).map_err(|e| e.to_string())?;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        worst_c = worst_c
            .max(rel(fit.c_plus, m.c_plus))
            .max(rel(fit.c_minus, m.c_minus));
        worst_r = worst_r
            .max(rel(fit.nu_r_plus, nu * m.r_plus))
            .max(rel(fit.nu_r_minus, nu * m.r_minus));
    }
    check(
        worst_c < 1e-3 && worst_r < 1e-2,
        format!(
            "5 cases, k in [0.01, 0.05]: max rel. error c = {worst_c:.2e}, nu R = {worst_r:.2e}"
        ),
    )
}

fn c8_growth() -> Outcome {
    let iso = EquilibriumModel::product_iso();
    let af = EquilibriumModel::product_af();
    let configs = [
        (iso, 0.45, 0.9, 35),
        (iso, 0.45, 0.6, 93),
        (iso, 0.5, 0.55, 94),
        (iso, 0.43, 0.95, 35),
        (iso, 0.35, 0.8, 10),
        (af, 0.5, 0.6, 8),
        (af, 0.7, 0.8, 16),
        (af, 0.6, 0.75, 12),
        (af, -0.6, 0.75, 12),
        (af, 0.9, 0.7, 6),
    ];
    let lat = Lattice::d1q3();
    let mut worst = 0.0f64;
    let mut unstable_iso = 0;
    for (model, u, beta, m) in configs {
        let k = TAU * m as f64 / 128.0;
        let op = LinearizedOperator::new(&lat, model, 1.0, &[u], beta, &[k])
            .map_err(|e| e.to_string())?;
        let rho = op.report().map_err(|e| e.to_string())?.spectral_radius;
        let run = GrowthRun {
            model,
            n: 128,
            u0: u,
            beta,
            eps: 1e-6,
            mode: m,
            max_steps: 2000,
        };
        let g = run.measure().map_err(|e| e.to_string())?;
        let rel = (g.sigma - rho.ln()).abs() / rho.ln().abs();
        worst = worst.max(rel);
        if model == iso && rho > 1.0 {
            unstable_iso += 1;
        }
    }
    check(
        worst < 0.02 && unstable_iso >= 1,
        format!("10 configs ({unstable_iso} unstable isotropic): max rel. deviation {worst:.2e}"),
    )
}

fn c9_shear_viscosity() -> Outcome {
    let beta = 0.8;
    let nu = CS2 * (1.0 / (2.0 * beta) - 0.5);
    let (nx, m) = (128, 1);
    let model = EquilibriumModel::product_iso();
    let mut grid = init_shear_wave(nx, 4, 0.0, 1e-4, m, model).map_err(|e| e.to_string())?;
    let mut amps = vec![grid.shear_mode_amplitude(m)];
    for _ in 0..4000 {
        if !grid.step(beta, model).map_err(|e| e.to_string())?.is_ok() {
            return Err("flagged step".into());
        }
        amps.push(grid.shear_mode_amplitude(m));
    }
    let k = TAU * m as f64 / nx as f64;
    let nu_eff = -measure_growth_rate(&amps).map_err(|e| e.to_string())? / (k * k);
    let also = -tail_slope(&amps, amps.len() / 4) / (k * k);
    let rel = (nu_eff / nu - 1.0).abs();
    check(
        rel < 0.01 && (also / nu - 1.0).abs() < 0.01,
        format!("nu_eff = {nu_eff:.6}, nu(beta) = {nu:.6}, rel. error {rel:.2e}"),
    )
}

fn c10_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut sc_disagree = 0;
    let mut near_circle = 0;
    for i in 0..100_000 {
        let coeffs: [Complex64; 4] = match i % 3 {
            0 => {
                let mut c = [Complex64::new(1.0, 0.0); 4];
                for z in c.iter_mut().take(3) {
                    *z = random_complex(&mut rng) * 1.5;
                }
                c
            }
            1 => {
                let r = [0, 1, 2].map(|_| {
                    Complex64::from_polar(rng.gen_range(0.3..1.3), rng.gen_range(0.0..TAU))
                });
                cubic_from_roots(r)
            }
            _ => {
                // Roots exactly on the unit circle are stable.
                let r = [0, 1, 2].map(|j| {
                    let modulus = if j == 0 { 1.0 } else { rng.gen_range(0.2..1.0) };
                    Complex64::from_polar(modulus, rng.gen_range(0.0..TAU))
                });
                cubic_from_roots(r)
            }
        };
        let roots = companion_roots(&coeffs).ok_or("companion Schur failed")?;
        let max_mod = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if (max_mod - 1.0).abs() < 1e-12 {
            near_circle += 1;
        }
        if schur_cohn_cubic(&coeffs) != (max_mod <= 1.0 + STABILITY_TOL) {
            sc_disagree += 1;
        }
    }
    let mut worst_companion = 0.0f64;
    let mut worst_schur = 0.0f64;
    for _ in 0..1000 {
        let a = random_matrix(&mut rng, 9);
        let ours = eigenvalues(&a).map_err(|e| e.to_string())?;
        let companion =
            companion_roots(&interpolated_charpoly(&a)).ok_or("companion Schur failed")?;
        let schur = schur_eigenvalues(&a).ok_or("Schur failed")?;
        worst_companion = worst_companion.max(multiset_distance(&ours, &companion));
        worst_schur = worst_schur.max(multiset_distance(&ours, &schur));
        // The library root finder on the same polynomial must agree too.
        let lib = polynomial_roots(&interpolated_charpoly(&a)).map_err(|e| e.to_string())?;
        worst_companion = worst_companion.max(multiset_distance(&lib, &companion));
    }
    check(
        sc_disagree == 0 && worst_companion < 1e-8 && worst_schur < 1e-8,
        format!(
            "1e5 cubics ({near_circle} with a root on the circle): {sc_disagree} disagreements; \
             1e3 9x9: companion {worst_companion:.2e}, Schur {worst_schur:.2e}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 asymptotic freedom", c1_asymptotic_freedom),
        ("2 renormalizability", c2_renormalizability),
        ("3 isotropic critical velocity", c3_critical_velocity),
        ("4 D1Q3 root locus at beta=0.9994, u=1", c4_root_locus),
        (
            "5 D1Q3 wave-number independence",
            c5_wavenumber_independence,
        ),
        ("6 D2Q9 maximal velocity vs viscosity", c6_fig3),
        ("7 dispersion and dissipation", c7_dispersion),
        ("8 spectral vs simulated growth", c8_growth),
        ("9 shear-wave viscosity", c9_shear_viscosity),
        ("10 oracle equivalence", c10_oracles),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({secs:.2}s)"),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{name}] {detail} ({secs:.2}s)");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
