//! Per-subcommand runners. Each produces ordered records for emission plus
//! optional artifact files (density profiles, field dumps, census JSON).

use std::io::Write;
use std::path::Path;

use rotovort_core as core;
use rotovort_core::{
    build_lattice, cell_energy, conjugate_field_check, detect_vortices, diamagnetic_check,
    gp_energy, gp_residual, minimize_gp, optimal_core_radius, predict_asymptotics, scaling_map,
    tf2d_flat, tf3d_with, ultrarapid_limit, ultrarapid_trial_3d, ComplexField2D, GpRegime,
    HarmonicRegime, InitState, LatticeKind, MinimizeOpts, PolarGrid, Region, RotationRegime,
    Tf3dOptions, TrapPotential3D,
};

use crate::config::{FormatCfg, GridCfg, InitCfg, RunConfig, ScatterCfg, SolverCfg, TrapCfg};
use crate::output::{emit, format_float, Record};
use crate::CliError;

fn require_block<'a, T>(block: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    block
        .as_ref()
        .ok_or_else(|| CliError::Config(vec![format!("missing \"{name}\" block in the config")]))
}

fn gas_of(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let gas = require_block(&cfg.gas, "gas")?;
    Ok((gas.epsilon, gas.omega))
}

pub fn scatter(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let pot = require_block(&cfg.pair_potential, "pair_potential")?.to_core();
    let sc = cfg.scatter.unwrap_or(ScatterCfg::default());
    let a = core::scattering_length(&pot, sc.r_max, sc.steps)?;
    let mut rec = Record::new()
        .float("scattering_length", a)
        .float("potential_range", pot.range())
        .float("r_max", sc.r_max)
        .int("steps", sc.steps as i64);
    if let Some(m) = &cfg.microscopic {
        let params = core::derive_params(a, m.particle_count, m.trap_scale, 0.0)?;
        let dilute = core::diluteness(params.density, a);
        rec = rec
            .float("coupling", params.coupling)
            .float("epsilon", params.epsilon)
            .float("density", params.density)
            .float("healing_length", core::healing_length(params.density, a)?)
            .float("diluteness", dilute.value)
            .bool("is_dilute", dilute.is_dilute)
            .float(
                "box_energy_per_particle",
                core::box_energy_per_particle(params.density, a),
            );
    }
    Ok(vec![rec])
}

pub fn tf2d(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<Vec<Record>, CliError> {
    let (eps, omega) = gas_of(cfg)?;
    let rec = tf2d_record(eps, omega)?;
    if let Some(dir) = out_dir {
        let sol = tf2d_flat(eps, omega)?;
        let mut file = create(dir, "tf2d_density.csv")?;
        writeln!(file, "x,y,rho")?;
        for i in 0..=512 {
            let r = i as f64 / 512.0;
            writeln!(
                file,
                "{},{},{}",
                format_float(r),
                format_float(0.0),
                format_float(sol.density(r))
            )?;
        }
    }
    Ok(vec![rec])
}

pub fn tf2d_record(eps: f64, omega: f64) -> Result<Record, CliError> {
    let sol = tf2d_flat(eps, omega)?;
    Ok(Record::new()
        .float("epsilon", eps)
        .float("omega", omega)
        .float("mu", sol.mu)
        .float("energy", sol.energy)
        .float("hole_radius", sol.hole_radius())
        .float("omega_hole", core::hole_threshold(eps))
        .text(
            "support",
            match sol.support {
                core::TfSupport2d::Disc => "disc",
                core::TfSupport2d::Annulus { .. } => "annulus",
            },
        ))
}

pub fn tf3d(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<Vec<Record>, CliError> {
    let trap = cfg.trap3d.unwrap_or_default().to_core();
    let t = require_block(&cfg.tf3d, "tf3d")?;
    let opts = Tf3dOptions {
        resolution: t.resolution.unwrap_or(0),
    };
    let sol = tf3d_with(&trap, t.coupling, t.omega, opts)?;
    if let Some(dir) = out_dir {
        let mut file = create(dir, "tf3d_density.csv")?;
        writeln!(file, "r,z,rho")?;
        if let core::tf3d::SupportBounds::RadialZ { r_max, z_max } = sol.bounds {
            let n = 128;
            for i in 0..n {
                let r = (i as f64 + 0.5) * r_max / n as f64;
                for k in 0..n {
                    let z = -z_max + (k as f64 + 0.5) * 2.0 * z_max / n as f64;
                    writeln!(
                        file,
                        "{},{},{}",
                        format_float(r),
                        format_float(z),
                        format_float(sol.density_rz(r, z))
                    )?;
                }
            }
        } else {
            let mut file = create(dir, "tf3d_density_xy.csv")?;
            writeln!(file, "x,y,rho")?;
            if let core::tf3d::SupportBounds::Cartesian { x_max, y_max, .. } = sol.bounds {
                let n = 128;
                for i in 0..n {
                    let x = -x_max + (i as f64 + 0.5) * 2.0 * x_max / n as f64;
                    for j in 0..n {
                        let y = -y_max + (j as f64 + 0.5) * 2.0 * y_max / n as f64;
                        writeln!(
                            file,
                            "{},{},{}",
                            format_float(x),
                            format_float(y),
                            format_float(sol.density(x, y, 0.0))
                        )?;
                    }
                }
            }
        }
    }
    Ok(vec![Record::new()
        .float("coupling", t.coupling)
        .float("omega", t.omega)
        .float("mu", sol.mu)
        .float("energy", sol.energy)
        .float("max_density", sol.max_density())])
}

pub fn regime(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let t = require_block(&cfg.tf3d, "tf3d")?;
    let trap = cfg.trap3d.unwrap_or_default();
    let s = match trap {
        TrapCfg::RadialZ { s, .. } | TrapCfg::Anisotropic { s, .. } => s,
    };
    let rep = scaling_map(t.coupling, t.omega, s)?;
    let lim = ultrarapid_limit(&trap.to_core())?;
    Ok(vec![Record::new()
        .float("coupling", t.coupling)
        .float("omega", t.omega)
        .float("s", s)
        .float("lambda", rep.lambda)
        .float("omega_eff", rep.omega_eff)
        .float("gamma", rep.gamma)
        .text(
            "regime",
            match rep.regime {
                RotationRegime::Slow => "slow",
                RotationRegime::Rapid => "rapid",
                RotationRegime::Ultrarapid => "ultrarapid",
            },
        )
        .float("w_min", lim.w_min)
        .float("r_omega", lim.r_omega)])
}

pub fn gp(cfg: &RunConfig, seed: u64, out_dir: Option<&Path>) -> Result<Vec<Record>, CliError> {
    let (eps, omega) = gas_of(cfg)?;
    let grid_cfg = cfg.grid.unwrap_or_default();
    let solver = cfg.solver.unwrap_or_default();
    let (rec, field) = gp_point(eps, omega, &grid_cfg, &solver, seed)?;
    if let Some(dir) = out_dir {
        dump_field(dir, &field)?;
        let census = detect_vortices(&field, 0.05)?;
        let mut file = create(dir, "census.json")?;
        let items: Vec<serde_json::Value> = census
            .vortices
            .iter()
            .map(|v| {
                serde_json::json!({
                    "x": v.x,
                    "y": v.y,
                    "d": v.winding,
                })
            })
            .collect();
        serde_json::to_writer_pretty(&mut file, &items).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(file)?;
    }
    Ok(vec![rec])
}

/// One GP minimization producing the standard record; shared with the sweep.
pub fn gp_point(
    eps: f64,
    omega: f64,
    grid_cfg: &GridCfg,
    solver: &SolverCfg,
    seed: u64,
) -> Result<(Record, ComplexField2D), CliError> {
    let grid = PolarGrid::new(grid_cfg.n_r, grid_cfg.n_theta)?;
    let init = match solver.init {
        InitCfg::Constant => InitState::Constant,
        InitCfg::TfPhaseNoise => InitState::TfPhaseNoise { seed },
        InitCfg::LatticeTrial => InitState::LatticeTrial,
    };
    let opts = MinimizeOpts {
        tau: solver.tau,
        tol: solver.tol,
        max_iters: solver.max_iters,
        ..MinimizeOpts::default()
    };
    let res = minimize_gp(grid, eps, omega, init, opts)?;
    let residual = gp_residual(&res.field)?;
    let census = detect_vortices(&res.field, 0.05)?;
    let tf = tf2d_flat(eps, omega)?;
    let dia = diamagnetic_check(&res.field);
    let record = Record::new()
        .float("epsilon", eps)
        .float("omega", omega)
        .int("n_r", res.field.grid.n_r as i64)
        .int("n_theta", res.field.grid.n_theta as i64)
        .float("energy_total", res.energy.total)
        .float("kinetic_covariant", res.energy.kinetic_covariant)
        .float("centrifugal", res.energy.centrifugal)
        .float("interaction", res.energy.interaction)
        .float("energy_tf", tf.energy)
        .float("mu", residual.mu)
        .float("residual", residual.residual_norm)
        .int("iterations", res.iterations as i64)
        .bool("converged", res.converged)
        .int("vortex_count", census.vortices.len() as i64)
        .int("total_winding", census.total_winding)
        .bool("diamagnetic_ok", dia.holds)
        .int("seed", res.seed.unwrap_or(seed) as i64);
    Ok((record, res.field))
}

fn dump_field(dir: &Path, field: &ComplexField2D) -> Result<(), CliError> {
    let mut file = create(dir, "field.csv")?;
    writeln!(file, "r,theta,re_psi,im_psi,density")?;
    let g = &field.grid;
    for i in 0..g.n_r {
        for j in 0..g.n_theta {
            let v = field.value(i, j);
            writeln!(
                file,
                "{},{},{},{},{}",
                format_float(g.radius(i)),
                format_float(g.theta(j)),
                format_float(v.re),
                format_float(v.im),
                format_float(v.norm_sqr())
            )?;
        }
    }
    Ok(())
}

pub fn lattice(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<Vec<Record>, CliError> {
    let (eps, omega) = gas_of(cfg)?;
    let (rec, points) = lattice_record(cfg, eps, omega)?;
    if let Some(dir) = out_dir {
        let mut file = create(dir, "lattice_points.json")?;
        let items: Vec<serde_json::Value> = points
            .iter()
            .map(|p| serde_json::json!({"x": p.0, "y": p.1}))
            .collect();
        serde_json::to_writer_pretty(&mut file, &items).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(file)?;
    }
    Ok(vec![rec])
}

pub fn lattice_record(
    cfg: &RunConfig,
    eps: f64,
    omega: f64,
) -> Result<(Record, Vec<(f64, f64)>), CliError> {
    let lat_cfg = cfg.lattice.unwrap_or_default();
    let grid_cfg = cfg.grid.unwrap_or_default();
    let tf = tf2d_flat(eps, omega)?;
    let region = match tf.support {
        core::TfSupport2d::Disc => Region::Disc { radius: 1.0 },
        core::TfSupport2d::Annulus { r_hole } => Region::Annulus {
            r_inner: r_hole,
            r_outer: 1.0,
        },
    };
    let built = match build_lattice(omega, region, lat_cfg.kind.to_core()) {
        Ok(l) => l,
        Err(core::CoreError::DegenerateLattice(_)) => core::VortexLattice::empty(region, omega),
        Err(e) => return Err(e.into()),
    };
    let t = match lat_cfg.core_radius {
        Some(t) => t,
        None => optimal_core_radius(eps, omega)?,
    };
    let trial = core::lattice_trial(eps, omega, &built, t)?;
    let grid = PolarGrid::new(grid_cfg.n_r, grid_cfg.n_theta)?;
    let energy = gp_energy(&trial.to_field(grid)?)?;
    let kept: Vec<(f64, f64)> = trial
        .lattice()
        .map(|l| l.points.iter().map(|p| (p.re, p.im)).collect())
        .unwrap_or_default();
    let cell = cell_energy(t, omega).ok();
    let mut rec = Record::new()
        .float("epsilon", eps)
        .float("omega", omega)
        .int("points", kept.len() as i64)
        .float("cell_area", built.cell_area)
        .float("spacing", built.spacing())
        .float("core_radius", t)
        .float("energy_trial", energy.total)
        .float("energy_tf", tf.energy)
        .float("excess", energy.total - tf.energy);
    if let Some(c) = cell {
        rec = rec.float("cell_energy", c.closed_form);
    }
    Ok((rec, kept))
}

pub fn giant(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let (eps, omega) = gas_of(cfg)?;
    Ok(vec![giant_record(cfg, eps, omega)?])
}

pub fn giant_record(cfg: &RunConfig, eps: f64, omega: f64) -> Result<Record, CliError> {
    let grid_cfg = cfg.grid.unwrap_or_default();
    let trial = core::giant_vortex_trial(eps, omega)?;
    let grid = PolarGrid::new(grid_cfg.n_r, grid_cfg.n_theta)?;
    let energy = gp_energy(&trial.to_field(grid)?)?;
    let tf = tf2d_flat(eps, omega)?;
    Ok(Record::new()
        .float("epsilon", eps)
        .float("omega", omega)
        .int("winding", trial.winding())
        .float("energy_trial", energy.total)
        .float("energy_tf", tf.energy)
        .float("excess", energy.total - tf.energy)
        .float("hole_radius", tf.hole_radius()))
}

pub fn asympt(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let (eps, omega) = gas_of(cfg)?;
    Ok(vec![asympt_record(eps, omega)?])
}

pub fn asympt_record(eps: f64, omega: f64) -> Result<Record, CliError> {
    let p = predict_asymptotics(eps, omega)?;
    let mut rec = Record::new()
        .float("epsilon", eps)
        .float("omega", omega)
        .text(
            "regime",
            match p.regime {
                GpRegime::FiniteVortices => "finite_vortices",
                GpRegime::LatticeRegimeA => "lattice_a",
                GpRegime::LatticeRegimeB => "lattice_b",
                GpRegime::GiantVortexRegime => "giant_vortex",
            },
        )
        .float("subleading", p.subleading.unwrap_or(f64::NAN))
        .float("omega_first", p.omega_first)
        .float("omega_hole", p.omega_hole)
        .float("omega_giant", p.omega_giant);
    if let Some(d) = p.finite_count {
        rec = rec.int("finite_count", d as i64);
    }
    Ok(rec)
}

pub fn harmonic(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let h = require_block(&cfg.harmonic, "harmonic")?;
    let est = core::harmonic_estimates(
        h.omega_osc,
        h.omega,
        h.particle_count,
        h.scattering_length,
    )?;
    Ok(vec![Record::new()
        .float("omega_osc", est.omega_osc)
        .float("omega", est.omega)
        .float("omega_c", est.omega_c)
        .float("radius", est.radius)
        .float("particles_per_vortex", est.particles_per_vortex)
        .float("ratio_argument", est.ratio_argument)
        .text(
            "regime_heuristic",
            match est.regime {
                HarmonicRegime::GpExpected => "gp_expected",
                HarmonicRegime::FqheExpected => "fqhe_expected",
                HarmonicRegime::Indeterminate => "indeterminate",
            },
        )])
}

/// The `check` subcommand: a quick battery of the crate's structural
/// invariants. Prints one line per check and returns whether all passed.
pub fn check(out: &mut dyn Write) -> Result<bool, CliError> {
    let mut all_ok = true;
    let mut report = |name: &str, ok: bool, detail: String| -> Result<(), CliError> {
        all_ok &= ok;
        writeln!(
            out,
            "{}  {name}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        )
        .map_err(CliError::from)
    };

    let grid = PolarGrid::new(64, 128)?;
    let w = grid.total_weight();
    report(
        "grid weights sum to disc area",
        (w - std::f64::consts::PI).abs() < 1e-10,
        format!("total weight {w:.15}"),
    )?;

    let field = ComplexField2D::constant(grid.clone(), 0.1, 40.0)?;
    let e = gp_energy(&field)?;
    let cancel = (e.kinetic_covariant + e.centrifugal).abs();
    report(
        "constant-field kinetic/centrifugal cancellation",
        cancel < 1e-10,
        format!("|kinetic + centrifugal| = {cancel:.3e}"),
    )?;

    let mut dia_ok = true;
    for seed in 0..10u64 {
        let f = noise_field(grid.clone(), 0.1, 10.0, seed);
        dia_ok &= diamagnetic_check(&f).holds;
    }
    report("diamagnetic inequality on noise fields", dia_ok, "10 seeded fields".into())?;

    let mut cell_ok = true;
    for k in 0..10 {
        let omega = 2.0 + 37.0 * k as f64;
        let t = 0.3 * omega.powf(-0.5);
        let ce = cell_energy(t, omega)?;
        cell_ok &= (ce.closed_form - ce.quadrature).abs() < 1e-10;
    }
    report("cell energy closed form vs quadrature", cell_ok, "10 samples".into())?;

    let tf = tf2d_flat(0.1, 10.0)?;
    let norm = core::numerics::integrate_gl(
        |r| tf.density(r) * 2.0 * std::f64::consts::PI * r,
        0.0,
        1.0,
        256,
        10,
    );
    report(
        "TF density normalization",
        (norm - 1.0).abs() < 1e-8,
        format!("quadrature norm {norm:.12}"),
    )?;

    let lat = core::VortexLattice::from_points(
        vec![core::Complex64::new(0.3, 0.1), core::Complex64::new(-0.4, 0.2)],
        10.0,
        Region::Disc { radius: 1.0 },
        LatticeKind::Triangular,
    )?;
    let conj = conjugate_field_check(&lat, &[(0.6, 0.0), (0.0, -0.7), (0.5, 0.5)], 1e-4)?;
    report(
        "conjugate-field identity",
        conj.max_relative_error < 1e-5,
        format!("max relative error {:.3e}", conj.max_relative_error),
    )?;

    let trap = TrapPotential3D::RadialZ { c_r: 1.0, c_z: 1.0, s: 4.0 };
    let rep = ultrarapid_trial_3d(&trap, 100.0, 0.1, 32)?;
    report(
        "ultrarapid bump energy dominates w_min",
        rep.scaled_energy >= rep.w_min,
        format!("scaled energy {:.6} vs w_min {:.6}", rep.scaled_energy, rep.w_min),
    )?;

    Ok(all_ok)
}

fn noise_field(grid: PolarGrid, eps: f64, omega: f64, seed: u64) -> ComplexField2D {
    // deterministic splitmix-style generator, good enough for check fields
    let mut state = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let x = (state >> 11) as f64 / (1u64 << 53) as f64;
        x - 0.5
    };
    let values = (0..grid.len())
        .map(|_| core::Complex64::new(next(), next()))
        .collect();
    let mut f = ComplexField2D {
        grid,
        values,
        epsilon: eps,
        omega,
    };
    f.normalize();
    f
}

/// Writes records to `<dir>/results.<ext>` or stdout when no directory given.
pub fn emit_records(
    records: &[Record],
    columns: &[String],
    format: FormatCfg,
    out_dir: Option<&Path>,
) -> Result<(), CliError> {
    match out_dir {
        Some(dir) => {
            let name = match format {
                FormatCfg::Csv => "results.csv",
                FormatCfg::Json => "results.json",
            };
            let mut file = create(dir, name)?;
            emit(&mut file, records, columns, format)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock, records, columns, format)
        }
    }
}

fn create(dir: &Path, name: &str) -> Result<std::io::BufWriter<std::fs::File>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let file = std::fs::File::create(&path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    Ok(std::io::BufWriter::new(file))
}
