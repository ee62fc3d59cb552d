//! Upper-bound trial states on the flat disc trap: the vortex-lattice ansatz
//! (product phase, linear core ramps, regularized TF amplitude) and the giant
//! vortex with all vorticity concentrated at the center.

use num_complex::Complex64;

use crate::error::{require, CoreError, Result};
use crate::field::ComplexField2D;
use crate::grid::PolarGrid;
use crate::lattice::VortexLattice;
use crate::tf2d::Tf2dSolution;

/// Floor-regularized TF density: rho_reg = (rho_TF + eta^2) / (1 + pi eta^2)
/// with eta = epsilon * max sqrt(rho_TF). The floor keeps sqrt(rho_reg)
/// Lipschitz across the support boundary with a single tunable scale. Used
/// by the lattice ansatz, whose phase gradients are local to the cores.
#[derive(Debug, Clone, Copy)]
pub struct RegularizedTf2d {
    tf: Tf2dSolution,
    eta_sq: f64,
    norm: f64,
}

pub fn regularized_density(tf: &Tf2dSolution) -> RegularizedTf2d {
    let eta_sq = tf.epsilon * tf.epsilon * tf.max_density();
    RegularizedTf2d {
        tf: *tf,
        eta_sq,
        norm: 1.0 / (1.0 + std::f64::consts::PI * eta_sq),
    }
}

impl RegularizedTf2d {
    pub fn density(&self, r: f64) -> f64 {
        if r > 1.0 {
            return 0.0;
        }
        (self.tf.density(r) + self.eta_sq) * self.norm
    }

    pub fn tf(&self) -> &Tf2dSolution {
        &self.tf
    }

    pub fn eta_sq(&self) -> f64 {
        self.eta_sq
    }

    /// d/dr sqrt(rho_reg), defined except at the support kinks.
    pub fn sqrt_density_derivative(&self, r: f64) -> f64 {
        let inside = match self.tf.support {
            crate::tf2d::TfSupport2d::Disc => r <= 1.0,
            crate::tf2d::TfSupport2d::Annulus { r_hole } => r >= r_hole && r <= 1.0,
        };
        if !inside {
            return 0.0;
        }
        let drho = 0.5 * self.tf.epsilon.powi(2) * 0.5 * self.tf.omega.powi(2) * r * self.norm;
        drho / (2.0 * self.density(r).sqrt())
    }
}

/// Edge-tapered TF density for the giant vortex: the positive part in the TF
/// profile is replaced by its C1 smoothing at level eta, so the density still
/// vanishes in the hole (a floor there would pick up the k^2/r^2 phase cost)
/// while sqrt(rho) stays Lipschitz across the hole edge.
#[derive(Debug, Clone, Copy)]
pub struct TaperedTf2d {
    tf: Tf2dSolution,
    eta_level: f64,
    norm: f64,
}

pub fn tapered_density(tf: &Tf2dSolution) -> TaperedTf2d {
    // argument of the positive part: mu + Omega^2 r^2 / 4, largest at the wall
    let arg_max = tf.mu + 0.25 * tf.omega * tf.omega;
    let eta_level = (tf.epsilon * arg_max).min(0.5 * arg_max);
    let mut t = TaperedTf2d {
        tf: *tf,
        eta_level,
        norm: 1.0,
    };
    let total = crate::numerics::integrate_gl(
        |r| t.density(r) * 2.0 * std::f64::consts::PI * r,
        0.0,
        1.0,
        512,
        8,
    );
    t.norm = 1.0 / total;
    t
}

impl TaperedTf2d {
    pub fn density(&self, r: f64) -> f64 {
        if r > 1.0 {
            return 0.0;
        }
        let arg = self.tf.mu + 0.25 * self.tf.omega * self.tf.omega * r * r;
        0.5 * self.tf.epsilon * self.tf.epsilon
            * crate::numerics::smooth_plus(arg, self.eta_level)
            * self.norm
    }
}

/// The amplitude profile carried by a trial state.
#[derive(Debug, Clone, Copy)]
pub enum TrialDensity {
    Floored(RegularizedTf2d),
    Tapered(TaperedTf2d),
}

impl TrialDensity {
    pub fn density(&self, r: f64) -> f64 {
        match self {
            TrialDensity::Floored(d) => d.density(r),
            TrialDensity::Tapered(d) => d.density(r),
        }
    }
}

#[derive(Debug, Clone)]
pub enum TrialKind {
    Lattice(VortexLattice),
    GiantVortex { winding: i64 },
}

/// A variational trial state; materializes to a [`ComplexField2D`] on demand.
#[derive(Debug, Clone)]
pub struct TrialState {
    pub kind: TrialKind,
    pub epsilon: f64,
    pub omega: f64,
    pub density: TrialDensity,
}

/// Lattice ansatz psi = f * sqrt(rho_reg) * exp(i phi): phi is the product
/// phase over the vortices, f ramps linearly from 0 to 1 across each core of
/// radius `t`. Vortices whose core disc crosses the clip region boundary are
/// dropped, so the normalization bookkeeping stays exact.
pub fn lattice_trial(
    epsilon: f64,
    omega: f64,
    lattice: &VortexLattice,
    t: f64,
) -> Result<TrialState> {
    require(t > 0.0, "core radius must be positive")?;
    if omega > 0.0 {
        require(
            t < omega.powf(-0.5),
            "core radius must be small against the cell radius 1/sqrt(Omega)",
        )?;
    }
    let tf = crate::tf2d::tf2d_flat(epsilon, omega)?;
    let mut clipped = lattice.clone();
    clipped.core_radius = t;
    clipped
        .points
        .retain(|p| lattice.region.contains_disc(p.re, p.im, t));
    if clipped.points.len() > 1 {
        let min_dist = clipped.min_pair_distance();
        if min_dist <= 2.0 * t {
            return Err(CoreError::Argument(format!(
                "vortex cores of radius {t} overlap (min pair distance {min_dist})"
            )));
        }
    }
    Ok(TrialState {
        kind: TrialKind::Lattice(clipped),
        epsilon,
        omega,
        density: TrialDensity::Floored(regularized_density(&tf)),
    })
}

/// Giant-vortex ansatz psi = sqrt(rho_reg(r)) exp(i floor(Omega/2) theta).
pub fn giant_vortex_trial(epsilon: f64, omega: f64) -> Result<TrialState> {
    require(omega > 0.0, "Omega must be positive")?;
    let tf = crate::tf2d::tf2d_flat(epsilon, omega)?;
    Ok(TrialState {
        kind: TrialKind::GiantVortex {
            winding: (omega / 2.0).floor() as i64,
        },
        epsilon,
        omega,
        density: TrialDensity::Tapered(tapered_density(&tf)),
    })
}

impl TrialState {
    pub fn lattice(&self) -> Option<&VortexLattice> {
        match &self.kind {
            TrialKind::Lattice(l) => Some(l),
            _ => None,
        }
    }

    pub fn winding(&self) -> i64 {
        match &self.kind {
            TrialKind::Lattice(l) => l.points.len() as i64,
            TrialKind::GiantVortex { winding } => *winding,
        }
    }

    /// Samples the trial state on a grid and normalizes.
    pub fn to_field(&self, grid: PolarGrid) -> Result<ComplexField2D> {
        let density = self.density;
        match &self.kind {
            TrialKind::GiantVortex { winding } => {
                let k = *winding as f64;
                ComplexField2D::from_fn(grid, self.epsilon, self.omega, move |x, y| {
                    let r = (x * x + y * y).sqrt();
                    Complex64::from_polar(density.density(r).sqrt(), k * y.atan2(x))
                })
            }
            TrialKind::Lattice(lattice) => {
                let points = lattice.points.clone();
                let t = lattice.core_radius;
                ComplexField2D::from_fn(grid, self.epsilon, self.omega, move |x, y| {
                    let r = (x * x + y * y).sqrt();
                    let mut amp = density.density(r).sqrt();
                    let mut phase = 0.0;
                    for p in &points {
                        let dx = x - p.re;
                        let dy = y - p.im;
                        let d = (dx * dx + dy * dy).sqrt();
                        if d < t {
                            amp *= d / t;
                        }
                        phase += dy.atan2(dx);
                    }
                    Complex64::from_polar(amp, phase)
                })
            }
        }
    }
}
