//! Command-line front end.
//!
//! Every subcommand renders its CSV into memory and hands it to a single
//! writer at the end of [`run`], so output files are written from one place
//! and re-runs are byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::equilibrium::{pressure_af, EquilibriumModel, PressureModel};
use crate::error::LbError;
use crate::lattice::{Lattice, CS2};
use crate::modes::{
    attenuation_rates, critical_velocity, viscosity_factor_from_modes, ModeAnalysis, ViscosityMap,
};
use crate::simulator::{init_perturbed, init_shear_wave, SimulationGrid, StepStatus};
use crate::stability::sweep::{log_space, stability_domain, KGrid, SweepOptions};
use crate::stability::{root_locus, LinearizedOperator, LocusPoint, STABILITY_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_UNSTABLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "lbstab",
    version,
    about = "Linear stability and simulation toolkit for LBGK with product-form equilibria"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mode speeds, viscosity factor, compressibility error and attenuation rates over u.
    Modes(ModesArgs),
    /// Sign map of the attenuation rates and viscosity factor over (c+, c-).
    Fig1(Fig1Args),
    /// Roots of the D1Q3 characteristic polynomial along k.
    RootLocus(RootLocusArgs),
    /// Maximal stable flow velocity versus viscosity on D2Q9.
    Fig3(Fig3Args),
    /// Time-stepped LBGK run with a seeded perturbation.
    Simulate(SimulateArgs),
    /// Runs the invariant suite and reports one line per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Relaxation {
    /// Relaxation parameter in (0, 1].
    #[arg(long, conflicts_with = "nu")]
    pub beta: Option<f64>,
    /// Kinematic viscosity (lattice units), converted to beta.
    #[arg(long)]
    pub nu: Option<f64>,
}

impl Relaxation {
    fn resolve(&self, default_beta: Option<f64>) -> Result<ViscosityMap, CliError> {
        match (self.beta, self.nu, default_beta) {
            (Some(b), None, _) => Ok(ViscosityMap::from_beta(b)?),
            (None, Some(nu), _) => Ok(ViscosityMap::from_nu(nu)?),
            (None, None, Some(b)) => Ok(ViscosityMap::from_beta(b)?),
            (None, None, None) => Err(CliError::Config("one of --beta or --nu is required".into())),
            (Some(_), Some(_), _) => Err(CliError::Config(
                "--beta and --nu are mutually exclusive".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VelocityRange {
    /// Single flow velocity.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["u_min", "u_max", "u_steps"])]
    pub u: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub u_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 201)]
    pub u_steps: usize,
}

impl VelocityRange {
    fn values(&self) -> Result<Vec<f64>, CliError> {
        if let Some(u) = self.u {
            check_unit_box("u", u)?;
            return Ok(vec![u]);
        }
        check_unit_box("u-min", self.u_min)?;
        check_unit_box("u-max", self.u_max)?;
        if self.u_steps == 0 || self.u_min > self.u_max {
            return Err(CliError::Config(format!(
                "empty velocity range [{}, {}] with {} steps",
                self.u_min, self.u_max, self.u_steps
            )));
        }
        Ok(linspace(self.u_min, self.u_max, self.u_steps))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ModesArgs {
    #[arg(long, value_parser = parse_model, default_value = "product-af")]
    pub model: EquilibriumModel,
    #[command(flatten)]
    pub velocity: VelocityRange,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Fig1Args {
    /// Cells per axis on [-1.5, 1.5].
    #[arg(long, default_value_t = 61)]
    pub cells: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RootLocusArgs {
    #[arg(long, value_parser = parse_model, default_value = "product-af")]
    pub model: EquilibriumModel,
    #[command(flatten)]
    pub relaxation: Relaxation,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub u: f64,
    /// Points of the uniform k grid on [0, 2π).
    #[arg(long, default_value_t = 256)]
    pub k_points: usize,
    /// Lattice dimension; only 1 is supported.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Also write an SVG scatter of the roots against the unit circle.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Fig3Args {
    /// Restrict to one model; all three by default.
    #[arg(long, value_parser = parse_model)]
    pub model: Option<EquilibriumModel>,
    #[arg(long, default_value_t = 1e-5)]
    pub nu_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    pub nu_max: f64,
    #[arg(long, default_value_t = 12)]
    pub nu_steps: usize,
    #[arg(long, default_value_t = 64)]
    pub k_points: usize,
    /// Direction of k in degrees from the x axis.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub angle: f64,
    /// Bisection tolerance on u.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Seed {
    /// Density perturbation `ε cos(2πmx/Nx)`.
    Density,
    /// Transverse velocity `u_y = ε sin(2πmx/Nx)` (D2 only).
    Shear,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_model, default_value = "product-af")]
    pub model: EquilibriumModel,
    #[command(flatten)]
    pub relaxation: Relaxation,
    /// Base flow velocity along x.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub u: f64,
    /// Grid extents `N` or `Nx,Ny`.
    #[arg(long, value_parser = parse_grid, default_value = "128")]
    pub grid: GridExtents,
    #[arg(long, default_value_t = 2000)]
    pub steps: u64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value_t = 1)]
    pub mode_index: usize,
    #[arg(long, value_enum, default_value_t = Seed::Density)]
    pub seed: Seed,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_model(s: &str) -> Result<EquilibriumModel, String> {
    s.parse::<EquilibriumModel>().map_err(|e| e.to_string())
}

/// Grid extents `[N]` or `[Nx, Ny]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridExtents(pub Vec<usize>);

fn parse_grid(s: &str) -> Result<GridExtents, String> {
    let dims: Vec<usize> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad extent {p:?}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    if dims.is_empty() || dims.len() > 2 || dims.contains(&0) {
        return Err(format!(
            "grid must be N or Nx,Ny with positive extents, got {s:?}"
        ));
    }
    Ok(GridExtents(dims))
}

fn check_unit_box(name: &str, u: f64) -> Result<(), CliError> {
    if !(u.abs() <= 1.0) {
        return Err(CliError::Config(format!(
            "{name} must lie in [-1, 1], got {u}"
        )));
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(LbError),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(..) => EXIT_CONFIG,
            Self::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Numerical(e) => write!(f, "numerical failure: {e}"),
            Self::Io(p, e) => write!(f, "cannot write {}: {e}", p.display()),
        }
    }
}

impl From<LbError> for CliError {
    fn from(e: LbError) -> Self {
        match e {
            LbError::InvalidParameter(_)
            | LbError::VelocityOutOfRange { .. }
            | LbError::LengthMismatch { .. }
            | LbError::UnsupportedDimension(_) => Self::Config(e.to_string()),
            other => Self::Numerical(other),
        }
    }
}

/// Rendered result of a subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub svg: Option<(PathBuf, String)>,
    pub exit_code: i32,
}

impl Report {
    fn ok(csv: String) -> Self {
        Self {
            csv,
            svg: None,
            exit_code: EXIT_OK,
        }
    }
}

/// Parses `args`, executes, writes outputs and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = match &cli.command {
        Command::Modes(a) => &a.output.out,
        Command::Fig1(a) => &a.output.out,
        Command::RootLocus(a) => &a.output.out,
        Command::Fig3(a) => &a.output.out,
        Command::Simulate(a) => &a.output.out,
        Command::Verify(a) => &a.output.out,
    }
    .clone();
    match execute(&cli.command) {
        Ok(report) => {
            if let Err(e) = emit(&report, out.as_deref()) {
                eprintln!("{e}");
                return e.exit_code();
            }
            report.exit_code
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &report.csv).map_err(|e| CliError::Io(path.to_path_buf(), e))?
        }
        None => print!("{}", report.csv),
    }
    if let Some((path, svg)) = &report.svg {
        std::fs::write(path, svg).map_err(|e| CliError::Io(path.clone(), e))?;
    }
    Ok(())
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Modes(a) => cmd_modes(a),
        Command::Fig1(a) => cmd_fig1(a),
        Command::RootLocus(a) => cmd_root_locus(a),
        Command::Fig3(a) => cmd_fig3(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(_) => Ok(cmd_verify()),
    }
}

fn banner(what: &str, model: &str, vm: Option<ViscosityMap>) {
    match vm {
        Some(v) => eprintln!("lbstab {what}: model={model} beta={} nu={}", v.beta, v.nu),
        None => eprintln!("lbstab {what}: model={model}"),
    }
}

pub fn cmd_modes(a: &ModesArgs) -> Result<Report, CliError> {
    let pm = a.model.pressure();
    banner("modes", a.model.tag(), None);
    let mut csv = String::from(
        "u[dx/dt],pi_star[dx^2/dt^2],dpi_star[dx/dt],c_plus[dx/dt],c_minus[dx/dt],\
         A[1],B[dx^3/dt^3],R_plus[1],R_minus[1]\n",
    );
    for u in a.velocity.values()? {
        let m = ModeAnalysis::new(pm, u)?;
        let fields = [
            u, m.pi_star, m.dpi_star, m.c_plus, m.c_minus, m.a, m.b, m.r_plus, m.r_minus,
        ];
        // `+ 0.0` folds -0 into 0.
        let line: Vec<String> = fields.iter().map(|x| (x + 0.0).to_string()).collect();
        writeln!(csv, "{}", line.join(",")).expect("writing to a String cannot fail");
    }
    Ok(Report::ok(csv))
}

/// Values within this band of zero are reported with sign 0.
pub const SIGN_BAND: f64 = 1e-9;

fn band_sign(x: f64) -> i32 {
    if x.abs() <= SIGN_BAND {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

pub fn cmd_fig1(a: &Fig1Args) -> Result<Report, CliError> {
    if a.cells < 2 {
        return Err(CliError::Config(
            "fig1 needs at least 2 cells per axis".into(),
        ));
    }
    banner("fig1", "-", None);
    let mut csv = String::from(
        "kind,c_plus[dx/dt],c_minus[dx/dt],sign_R_plus,sign_R_minus,sign_A,\
         in_necessary_box,in_cfl_box,on_boundary\n",
    );
    let axis = linspace(-1.5, 1.5, a.cells);
    for &cp in &axis {
        for &cm in &axis {
            let (sp, sm) = match attenuation_rates(cp, cm) {
                Ok((rp, rm)) => (band_sign(rp), band_sign(rm)),
                Err(_) => (0, 0),
            };
            let sa = band_sign(viscosity_factor_from_modes(cp, cm));
            let necessary = (0.0..=1.0).contains(&cp) && (-1.0..=0.0).contains(&cm);
            let cfl = cp.abs() <= 1.0 && cm.abs() <= 1.0;
            let boundary = sp == 0 || sm == 0 || sa == 0;
            writeln!(
                csv,
                "cell,{cp},{cm},{sp},{sm},{sa},{},{},{}",
                u8::from(necessary),
                u8::from(cfl),
                u8::from(boundary)
            )
            .expect("writing to a String cannot fail");
        }
    }
    for (cp, cm) in [(0.0, -1.0), (1.0, -1.0), (1.0, 0.0), (0.0, 0.0)] {
        writeln!(csv, "necessary_box_corner,{cp},{cm},,,,,,")
            .expect("writing to a String cannot fail");
    }
    for (cp, cm) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
        writeln!(csv, "cfl_box_corner,{cp},{cm},,,,,,").expect("writing to a String cannot fail");
    }
    Ok(Report::ok(csv))
}

pub fn cmd_root_locus(a: &RootLocusArgs) -> Result<Report, CliError> {
    if a.dim != 1 {
        return Err(CliError::Config(format!(
            "root locus is defined for D1Q3 only, got dimension {}",
            a.dim
        )));
    }
    if a.k_points == 0 {
        return Err(CliError::Config("--k-points must be positive".into()));
    }
    check_unit_box("u", a.u)?;
    let vm = a.relaxation.resolve(Some(0.9994))?;
    banner("root-locus", a.model.tag(), Some(vm));
    let ks = KGrid::uniform(a.k_points, 0.0).magnitudes;
    let locus = root_locus(a.model, a.u, vm.beta, &ks)?;
    let mut csv = String::from("k[1/dx],root,re_lambda[1],im_lambda[1],abs_lambda[1]\n");
    for p in &locus {
        for (j, z) in p.roots.iter().enumerate() {
            writeln!(csv, "{},{},{},{},{}", p.k, j + 1, z.re, z.im, z.norm())
                .expect("writing to a String cannot fail");
        }
    }
    let svg = a.svg.as_ref().map(|path| (path.clone(), locus_svg(&locus)));
    Ok(Report {
        csv,
        svg,
        exit_code: EXIT_OK,
    })
}

/// Minimal scatter of the roots in the complex plane with the unit circle.
pub fn locus_svg(locus: &[LocusPoint]) -> String {
    let mut s = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.6 -1.6 3.2 3.2\" width=\"480\" height=\"480\">\n\
         <rect x=\"-1.6\" y=\"-1.6\" width=\"3.2\" height=\"3.2\" fill=\"white\"/>\n\
         <line x1=\"-1.5\" y1=\"0\" x2=\"1.5\" y2=\"0\" stroke=\"#999\" stroke-width=\"0.005\"/>\n\
         <line x1=\"0\" y1=\"-1.5\" x2=\"0\" y2=\"1.5\" stroke=\"#999\" stroke-width=\"0.005\"/>\n\
         <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.008\"/>\n",
    );
    for p in locus {
        for z in &p.roots {
            let colour = if z.norm() > 1.0 + STABILITY_TOL {
                "#d62728"
            } else {
                "#1f77b4"
            };
            writeln!(
                s,
                "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"0.012\" fill=\"{colour}\"/>",
                z.re, -z.im
            )
            .expect("writing to a String cannot fail");
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn cmd_fig3(a: &Fig3Args) -> Result<Report, CliError> {
    if !(a.nu_min > 0.0 && a.nu_min <= a.nu_max) || a.nu_steps == 0 {
        return Err(CliError::Config(format!(
            "need 0 < nu-min <= nu-max and nu-steps > 0, got [{}, {}] x {}",
            a.nu_min, a.nu_max, a.nu_steps
        )));
    }
    let models: Vec<EquilibriumModel> = match a.model {
        Some(m) => vec![m],
        None => EquilibriumModel::ALL.to_vec(),
    };
    let opts = SweepOptions {
        k_points: a.k_points,
        tol: a.tol,
        k_angle_deg: a.angle,
        ..SweepOptions::default()
    };
    banner(
        "fig3",
        &models.iter().map(|m| m.tag()).collect::<Vec<_>>().join("+"),
        None,
    );
    let nus = log_space(a.nu_min, a.nu_max, a.nu_steps);
    let domain = stability_domain(&Lattice::d2q9(), &models, &nus, &opts)?;
    let mut csv = String::from("model,nu[dx^2/dt],beta[1],u_max[dx/dt],u_unstable[dx/dt]\n");
    for row in &domain.rows {
        let beta = ViscosityMap::from_nu(row.nu)?.beta;
        writeln!(
            csv,
            "{},{},{},{},{}",
            row.model.tag(),
            row.nu,
            beta,
            row.outcome.u_max,
            row.outcome.bracket.1
        )
        .expect("writing to a String cannot fail");
    }
    Ok(Report::ok(csv))
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<Report, CliError> {
    let vm = a.relaxation.resolve(None)?;
    check_unit_box("u", a.u)?;
    banner("simulate", a.model.tag(), Some(vm));
    let mut grid: SimulationGrid = match a.seed {
        Seed::Density => {
            let mut u0 = vec![0.0; a.grid.0.len()];
            u0[0] = a.u;
            init_perturbed(&a.grid.0, 1.0, &u0, a.eps, a.mode_index, a.model)?
        }
        Seed::Shear => {
            if a.grid.0.len() != 2 {
                return Err(CliError::Config("shear seeding needs --grid Nx,Ny".into()));
            }
            init_shear_wave(a.grid.0[0], a.grid.0[1], a.u, a.eps, a.mode_index, a.model)?
        }
    };
    let amplitude = |g: &SimulationGrid| match a.seed {
        Seed::Density => g.density_mode_amplitude(a.mode_index),
        Seed::Shear => g.shear_mode_amplitude(a.mode_index),
    };
    let mut csv = String::from(
        "step,mode_amplitude[1],total_mass[1],total_momentum_x[dx/dt],total_momentum_y[dx/dt],status\n",
    );
    let row = |g: &SimulationGrid, status: StepStatus, csv: &mut String| {
        let mom = g.total_momentum();
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            g.steps(),
            amplitude(g),
            g.total_mass(),
            mom[0],
            mom.get(1).copied().unwrap_or(0.0),
            status.label()
        )
        .expect("writing to a String cannot fail");
    };
    row(&grid, StepStatus::Ok, &mut csv);
    while grid.steps() < a.steps {
        let status = grid.step(vm.beta, a.model)?;
        row(&grid, status, &mut csv);
        if !status.is_ok() {
            eprintln!(
                "lbstab simulate: instability ({}) at step {}",
                status.label(),
                grid.steps()
            );
            return Ok(Report {
                csv,
                svg: None,
                exit_code: EXIT_UNSTABLE,
            });
        }
    }
    Ok(Report::ok(csv))
}

/// One named check of the invariant suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Fast invariant checks over every module.
pub fn verify_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, r: Result<(bool, String), LbError>| {
        let (passed, detail) = r.unwrap_or_else(|e| (false, e.to_string()));
        checks.push(Check {
            name,
            passed,
            detail,
        });
    };

    push(
        "asymptotic-freedom",
        (|| {
            let (p1, d1) = pressure_af(1.0)?;
            let (pm, dm) = pressure_af(-1.0)?;
            let err = p1
                .abs()
                .max(pm.abs())
                .max((d1 + 1.0).abs())
                .max((dm - 1.0).abs());
            Ok((err <= 1e-12, format!("max deviation {err:e}")))
        })(),
    );

    push(
        "renormalizability",
        (|| {
            let (mut worst_b, mut min_a) = (0.0f64, f64::INFINITY);
            for u in linspace(-1.0, 1.0, 2001) {
                let m = ModeAnalysis::new(PressureModel::AsymptoticallyFree, u)?;
                worst_b = worst_b.max(m.b.abs());
                min_a = min_a.min(m.a);
            }
            Ok((
                worst_b < 1e-12 && min_a >= -1e-12,
                format!("max |B| {worst_b:e}, min A {min_a:e}"),
            ))
        })(),
    );

    push(
        "isotropic-critical-velocity",
        (|| {
            let u = critical_velocity(PressureModel::Isotropic, 1e-9)?.unwrap_or(f64::NAN);
            let want = 1.0 - CS2.sqrt();
            Ok(((u - want).abs() < 1e-6, format!("u = {u}")))
        })(),
    );

    push(
        "conserved-spectrum-at-k0",
        (|| {
            let mut worst = 0.0f64;
            for lat in [Lattice::d1q3(), Lattice::d2q9()] {
                for model in EquilibriumModel::ALL {
                    let u = vec![0.3; lat.dim()];
                    let report =
                        LinearizedOperator::new(&lat, model, 1.0, &u, 0.7, &vec![0.0; lat.dim()])?
                            .report()?;
                    let ones = report
                        .eigenvalues
                        .iter()
                        .filter(|z| (*z - 1.0).norm() < 1e-10)
                        .count();
                    if ones != lat.dim() + 1 {
                        return Ok((
                            false,
                            format!("{model} D{}: {ones} unit eigenvalues", lat.dim()),
                        ));
                    }
                    for z in &report.eigenvalues[lat.dim() + 1..] {
                        worst = worst.max((z - (1.0 - 1.4)).norm());
                    }
                }
            }
            Ok((worst < 1e-10, format!("ghost deviation {worst:e}")))
        })(),
    );

    push(
        "root-locus-fig2",
        (|| {
            let ks = KGrid::uniform(256, 0.0).magnitudes;
            let max = |m| -> Result<f64, LbError> {
                Ok(root_locus(m, 1.0, 0.9994, &ks)?
                    .iter()
                    .map(LocusPoint::max_modulus)
                    .fold(0.0, f64::max))
            };
            let (af, iso) = (
                max(EquilibriumModel::product_af())?,
                max(EquilibriumModel::product_iso())?,
            );
            Ok((
                af <= 1.0 + STABILITY_TOL && iso > 1.0,
                format!("AF {af}, isotropic {iso}"),
            ))
        })(),
    );

    push(
        "simulator-fixed-point-and-conservation",
        (|| {
            let model = EquilibriumModel::product_af();
            let mut g = init_perturbed(&[16, 8], 1.0, &[0.4, 0.0], 1e-3, 2, model)?;
            let (m0, p0) = (g.total_mass(), g.total_momentum());
            for _ in 0..200 {
                if !g.step(0.9, model)?.is_ok() {
                    return Ok((false, "flagged step".into()));
                }
            }
            let dm = (g.total_mass() - m0).abs() / m0;
            let dp = (g.total_momentum()[0] - p0[0]).abs() / p0[0].abs();
            Ok((
                dm < 1e-10 && dp < 1e-10,
                format!("mass {dm:e}, momentum {dp:e}"),
            ))
        })(),
    );

    checks
}

pub fn cmd_verify() -> Report {
    banner("verify", "all", None);
    let checks = verify_suite();
    let mut csv = String::from("check,result,detail\n");
    for c in &checks {
        writeln!(
            csv,
            "{},{},\"{}\"",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail.replace('"', "'")
        )
        .expect("writing to a String cannot fail");
    }
    let exit_code = if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    };
    Report {
        csv,
        svg: None,
        exit_code,
    }
}
