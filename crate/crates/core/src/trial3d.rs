//! Upper-bound trial energies for the 3D GP functional in anharmonic traps.
//!
//! The moderate-rotation trial combines the regularized TF amplitude with a
//! triangular lattice of straight vortex lines parallel to the rotation axis;
//! the line phases partly neutralize the vector potential, which is what
//! brings the kinetic cost down to the subleading order. The amplitude is
//! rotationally symmetric, so every angular average is precomputed on an
//! (r, theta) grid and the energy reduces to an (r, z) quadrature.
//!
//! The ultrarapid trial concentrates a smooth compactly supported bump at a
//! minimum of W = V - r^2/4 with the rigid-rotation phase, and is evaluated
//! directly in the rotation-scaled variables.

use crate::error::{require, CoreError, Result};
use crate::lattice::{build_lattice, LatticeKind, Region};
use crate::numerics::integrate_gl;
use crate::scaling::ultrarapid_limit;
use crate::tf3d::{effective_potential_min, tf3d, SupportBounds, TrapPotential3D};

use crate::numerics::{smooth_plus, smooth_plus_prime};

#[derive(Debug, Clone, Copy)]
pub struct Trial3dOptions {
    /// Radial quadrature nodes.
    pub n_r: usize,
    /// Axial quadrature nodes (half domain).
    pub n_z: usize,
    /// Angular nodes for the lattice averages.
    pub n_theta: usize,
    /// Vortex core radius; defaults to the healing length at peak density.
    pub core_radius: Option<f64>,
}

impl Default for Trial3dOptions {
    fn default() -> Self {
        Trial3dOptions {
            n_r: 768,
            n_z: 384,
            n_theta: 1024,
            core_radius: None,
        }
    }
}

/// Energy report of the vortex-line lattice trial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexLineTrial3d {
    pub energy: f64,
    pub tf_energy: f64,
    /// energy - tf_energy; positive, since the TF energy is the infimum
    /// without the kinetic term.
    pub gap: f64,
    pub vortex_count: usize,
    pub core_radius: f64,
}

/// GP energy of the vortex-line lattice trial at (g, Omega) in a rotationally
/// symmetric trap. Requires a RadialZ trap so the amplitude is a function of
/// (r, z) and the angular reduction applies.
pub fn vortex_line_trial_3d(
    trap: &TrapPotential3D,
    g: f64,
    omega: f64,
    opts: Trial3dOptions,
) -> Result<VortexLineTrial3d> {
    let TrapPotential3D::RadialZ { .. } = trap else {
        return Err(CoreError::Geometry(
            "vortex-line trial needs a rotationally symmetric (RadialZ) trap".into(),
        ));
    };
    require(g > 0.0, "coupling g must be positive")?;
    require(omega >= 0.0, "Omega must be nonnegative")?;

    let sol = tf3d(trap, g, omega)?;
    let q = 0.25 * omega * omega;
    let m0 = effective_potential_min(trap, omega);
    let mu_hat = sol.mu - m0;
    let (r_sup, _z_sup) = match sol.bounds {
        SupportBounds::RadialZ { r_max, z_max } => (r_max, z_max),
        _ => unreachable!(),
    };

    // Regularization level: the healing length at peak density relative to
    // the cloud radius sets the smoothing fraction, as in the 2D floor.
    let xi = mu_hat.powf(-0.5);
    let eta = mu_hat * (xi / r_sup).min(0.5);

    // Enlarged bounds containing the smoothed support {mu + q r^2 - V > -eta}.
    let bounds = crate::tf3d::support_bounds(trap, omega, sol.mu + eta)?;
    let (r_bb, z_bb) = match bounds {
        SupportBounds::RadialZ { r_max, z_max } => (r_max, z_max),
        _ => unreachable!(),
    };

    // Vortex lattice of straight lines through the z = 0 support disc.
    let (points, core_radius) = if omega > 0.0 {
        let spacing_cap = {
            let cell = 2.0 * std::f64::consts::PI / omega;
            0.45 * (cell * 2.0 / 3f64.sqrt()).sqrt()
        };
        let t = opts.core_radius.unwrap_or(xi).min(spacing_cap);
        let region = Region::Disc { radius: r_bb };
        let lattice = match build_lattice(omega, region, LatticeKind::Triangular) {
            Ok(mut l) => {
                l.points.retain(|p| region.contains_disc(p.re, p.im, t));
                l.points
            }
            Err(CoreError::DegenerateLattice(_)) => Vec::new(),
            Err(e) => return Err(e),
        };
        (lattice, t)
    } else {
        (Vec::new(), 0.0)
    };

    // Angular averages of the core cutoff f and the lattice phase gradient.
    let n_r = opts.n_r;
    let dr = r_bb / n_r as f64;
    let n_th = opts.n_theta;
    let dth = 2.0 * std::f64::consts::PI / n_th as f64;
    let mut avg_f2 = vec![1.0; n_r];
    let mut avg_f4 = vec![1.0; n_r];
    let mut avg_grad_f2 = vec![0.0; n_r];
    let mut avg_f_dr_f = vec![0.0; n_r];
    let mut avg_phase = vec![0.0; n_r];
    for i in 0..n_r {
        let r = (i as f64 + 0.5) * dr;
        if points.is_empty() {
            avg_phase[i] = q * r * r; // |0 - A|^2 = (Omega r / 2)^2
            continue;
        }
        let (mut f2, mut f4, mut g2, mut fdr, mut ph) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for l in 0..n_th {
            let th = (l as f64 + 0.5) * dth;
            let (x, y) = (r * th.cos(), r * th.sin());
            let mut f = 1.0;
            let mut grad_f = (0.0, 0.0);
            let mut grad_phi = (0.0, 0.0);
            for p in &points {
                let dx = x - p.re;
                let dy = y - p.im;
                let d2 = dx * dx + dy * dy;
                let d = d2.sqrt();
                if d < core_radius {
                    f *= d / core_radius;
                    if d > 0.0 {
                        // cores do not overlap, so at most one factor is active
                        grad_f = (dx / (d * core_radius), dy / (d * core_radius));
                    }
                }
                if d2 > 0.0 {
                    grad_phi.0 -= dy / d2;
                    grad_phi.1 += dx / d2;
                }
            }
            let vx = grad_phi.0 + 0.5 * omega * y;
            let vy = grad_phi.1 - 0.5 * omega * x;
            f2 += f * f;
            f4 += f * f * f * f;
            g2 += grad_f.0 * grad_f.0 + grad_f.1 * grad_f.1;
            let e_r = (th.cos(), th.sin());
            fdr += f * (grad_f.0 * e_r.0 + grad_f.1 * e_r.1);
            ph += f * f * (vx * vx + vy * vy);
        }
        let inv = 1.0 / n_th as f64;
        avg_f2[i] = f2 * inv;
        avg_f4[i] = f4 * inv;
        avg_grad_f2[i] = g2 * inv;
        avg_f_dr_f[i] = fdr * inv;
        avg_phase[i] = ph * inv;
    }

    // (r, z) quadrature of the assembled energy density.
    let n_z = opts.n_z;
    let dz = z_bb / n_z as f64;
    let amp_sq = |r: f64, z: f64| -> f64 {
        smooth_plus(sol.mu + q * r * r - trap.value(r, 0.0, z), eta) / (2.0 * g)
    };
    let amp_sq_grad = |r: f64, z: f64| -> (f64, f64) {
        let t_val = sol.mu + q * r * r - trap.value(r, 0.0, z);
        let p = smooth_plus_prime(t_val, eta) / (2.0 * g);
        let (dv_r, dv_z) = trap_gradient_rz(trap, r, z);
        (p * (2.0 * q * r - dv_r), p * (-dv_z))
    };

    let mut norm = 0.0;
    let mut quadratic = 0.0;
    let mut quartic = 0.0;
    for i in 0..n_r {
        let r = (i as f64 + 0.5) * dr;
        let w_r = 2.0 * 2.0 * std::f64::consts::PI * r * dr * dz; // both z signs
        for k in 0..n_z {
            let z = (k as f64 + 0.5) * dz;
            let u = amp_sq(r, z);
            if u <= 0.0 {
                continue;
            }
            let (du_r, du_z) = amp_sq_grad(r, z);
            // |grad amp|^2 = |grad amp^2|^2 / (4 amp^2)
            let grad_amp_sq = (du_r * du_r + du_z * du_z) / (4.0 * u);
            let kinetic = grad_amp_sq * avg_f2[i]
                + du_r * avg_f_dr_f[i]
                + u * avg_grad_f2[i]
                + u * avg_phase[i];
            let potential = (trap.value(r, 0.0, z) - q * r * r) * u * avg_f2[i];
            quadratic += w_r * (kinetic + potential);
            quartic += w_r * g * u * u * avg_f4[i];
            norm += w_r * u * avg_f2[i];
        }
    }
    let energy = quadratic / norm + quartic / (norm * norm);
    Ok(VortexLineTrial3d {
        energy,
        tf_energy: sol.energy,
        gap: energy - sol.energy,
        vortex_count: points.len(),
        core_radius,
    })
}

fn trap_gradient_rz(trap: &TrapPotential3D, r: f64, z: f64) -> (f64, f64) {
    match *trap {
        TrapPotential3D::RadialZ { c_r, c_z, s } => (
            s * c_r * r.powf(s - 1.0),
            s * c_z * z.abs().powf(s - 1.0) * z.signum(),
        ),
        _ => unreachable!("vortex-line trial is RadialZ only"),
    }
}

/// Terms of the scaled delta-bump trial energy at ultrarapid rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltrarapidTrial3d {
    /// Omega^(-2s/(s-2)) E[psi_delta]; always >= w_min.
    pub scaled_energy: f64,
    pub w_min: f64,
    /// Scaled bump gradient energy (diverges like delta^-2 as delta -> 0).
    pub kinetic_term: f64,
    /// Residual rigid-rotation term, quarter of the planar second moment.
    pub planar_term: f64,
    /// ∫ W h, always >= w_min.
    pub potential_term: f64,
    /// gamma ∫ h^2 (coupling fixed to g = 1).
    pub interaction_term: f64,
}

/// Evaluates the scaled GP energy of the concentrated bump trial
/// psi = sqrt(h_delta(x - x0)) exp(i Omega x . (e_z ^ x0) / 2) with x0 a
/// minimizer of W = V - r^2/4, working directly in the rotation-scaled
/// variables. `n_box` controls the 3D midpoint resolution over the bump.
pub fn ultrarapid_trial_3d(
    trap: &TrapPotential3D,
    omega: f64,
    delta: f64,
    n_box: usize,
) -> Result<UltrarapidTrial3d> {
    trap.validate()?;
    require(omega > 0.0, "Omega must be positive")?;
    require(delta > 0.0, "delta must be positive")?;
    require(n_box >= 16, "need at least 16 quadrature nodes per axis")?;
    let limit = ultrarapid_limit(trap)?;
    if delta > 0.5 * limit.r_omega {
        return Err(CoreError::Argument(format!(
            "bump width {delta} exceeds half the minimizer radius {}",
            limit.r_omega
        )));
    }
    let s = trap.degree();
    let x0 = match &limit.minimizers {
        crate::scaling::MinimizerSet::Circle { radius } => [*radius, 0.0, 0.0],
        crate::scaling::MinimizerSet::Points(p) => p[0],
    };

    // Unnormalized bump e(rho) = exp(-1/(1 - rho^2/delta^2)).
    let bump = |rho: f64| -> f64 {
        let u = rho * rho / (delta * delta);
        if u >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - u)).exp()
        }
    };
    // |grad sqrt(h)|^2 = h * rho^2 / delta^4 / (1 - u)^4
    let four_pi = 4.0 * std::f64::consts::PI;
    let n_h = integrate_gl(|rho| bump(rho) * four_pi * rho * rho, 0.0, delta, 64, 12);
    let kinetic_raw = integrate_gl(
        |rho| {
            let u = rho * rho / (delta * delta);
            if u >= 1.0 {
                return 0.0;
            }
            bump(rho) * (rho / (delta * delta)).powi(2) / (1.0 - u).powi(4) * four_pi * rho * rho
        },
        0.0,
        delta,
        64,
        12,
    );

    // 3D midpoint over the bump cube for the anisotropy-sensitive terms.
    let mut planar_raw = 0.0;
    let mut pot_raw = 0.0;
    let mut int_raw = 0.0;
    let h_step = 2.0 * delta / n_box as f64;
    let vol = h_step * h_step * h_step;
    for i in 0..n_box {
        let dx = -delta + (i as f64 + 0.5) * h_step;
        for j in 0..n_box {
            let dy = -delta + (j as f64 + 0.5) * h_step;
            for k in 0..n_box {
                let dz = -delta + (k as f64 + 0.5) * h_step;
                let rho = (dx * dx + dy * dy + dz * dz).sqrt();
                let h = bump(rho);
                if h == 0.0 {
                    continue;
                }
                let x = x0[0] + dx;
                let y = x0[1] + dy;
                let z = x0[2] + dz;
                let w_val = trap.value(x, y, z) - 0.25 * (x * x + y * y);
                planar_raw += h * (dx * dx + dy * dy) * vol;
                pot_raw += h * w_val * vol;
                int_raw += h * h * vol;
            }
        }
    }

    let omega_prime = omega.powf((s + 2.0) / (s - 2.0));
    let gamma = omega.powf(-2.0 * (s + 3.0) / (s - 2.0));
    let kinetic_term = kinetic_raw / n_h / (omega_prime * omega_prime);
    let planar_term = 0.25 * planar_raw / n_h;
    let potential_term = pot_raw / n_h;
    let interaction_term = gamma * int_raw / (n_h * n_h);
    Ok(UltrarapidTrial3d {
        scaled_energy: kinetic_term + planar_term + potential_term + interaction_term,
        w_min: limit.w_min,
        kinetic_term,
        planar_term,
        potential_term,
        interaction_term,
    })
}
