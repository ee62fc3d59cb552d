//! Closed-form Thomas-Fermi minimizer of the rotating flat-trap functional on
//! the unit disc: the density is the positive part of an inverted parabola,
//! flat at rest and annular once the rotation exceeds the hole threshold.

use crate::error::{require, Result};

/// Hole threshold constant: the density at the center first vanishes at
/// Omega = OMEGA_HOLE / epsilon.
pub const OMEGA_HOLE: f64 = 2.256758334191025; // 4 / sqrt(pi)

/// Support of the 2D Thomas-Fermi density on the unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TfSupport2d {
    Disc,
    Annulus { r_hole: f64 },
}

/// Exact minimizer of the flat-trap TF functional at given (epsilon, Omega).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tf2dSolution {
    pub epsilon: f64,
    pub omega: f64,
    /// Chemical potential fixing the normalization.
    pub mu: f64,
    /// Minimal TF energy.
    pub energy: f64,
    pub support: TfSupport2d,
}

impl Tf2dSolution {
    /// rho(r) = (eps^2 / 2) [mu + Omega^2 r^2 / 4]_+ inside the disc, 0 outside.
    pub fn density(&self, r: f64) -> f64 {
        if r > 1.0 {
            return 0.0;
        }
        let val = self.mu + 0.25 * self.omega * self.omega * r * r;
        0.5 * self.epsilon * self.epsilon * val.max(0.0)
    }

    /// The density is largest at the trap wall.
    pub fn max_density(&self) -> f64 {
        self.density(1.0)
    }

    pub fn hole_radius(&self) -> f64 {
        match self.support {
            TfSupport2d::Disc => 0.0,
            TfSupport2d::Annulus { r_hole } => r_hole,
        }
    }

    /// Interaction integral eps^-2 ∫ rho^2, in closed form.
    pub fn interaction_integral(&self) -> f64 {
        let eps2 = self.epsilon * self.epsilon;
        let q = 0.25 * self.omega * self.omega;
        let u_h = self.hole_radius().powi(2);
        // ∫ rho^2 dA = pi (eps^2/2)^2 ∫_{u_h}^{1} (mu + q u)^2 du, expanded so
        // small q does not cancel against mu^3 terms
        let span1 = 1.0 - u_h;
        let span2 = 1.0 - u_h * u_h;
        let span3 = 1.0 - u_h * u_h * u_h;
        let integral =
            self.mu * self.mu * span1 + q * self.mu * span2 + q * q * span3 / 3.0;
        std::f64::consts::PI * (eps2 / 2.0) * (eps2 / 2.0) * integral / eps2
    }
}

/// Minimizes ∫_{|r|<=1} { -Omega^2 r^2 rho / 4 + eps^-2 rho^2 } over
/// probability densities, in closed form.
pub fn tf2d_flat(epsilon: f64, omega: f64) -> Result<Tf2dSolution> {
    require(epsilon > 0.0, "epsilon must be positive")?;
    require(omega >= 0.0, "Omega must be nonnegative")?;
    let eps2 = epsilon * epsilon;
    let om2 = omega * omega;
    let pi = std::f64::consts::PI;

    let threshold = OMEGA_HOLE / epsilon;
    if omega <= threshold {
        // Parabolic profile covering the whole disc.
        let mu = 2.0 / (pi * eps2) - om2 / 8.0;
        // ∫ r^2 rho dA in closed form
        let second_moment = pi * eps2 * (mu / 4.0 + om2 / 24.0);
        let energy = 0.5 * mu - om2 / 8.0 * second_moment;
        Ok(Tf2dSolution {
            epsilon,
            omega,
            mu,
            energy,
            support: TfSupport2d::Disc,
        })
    } else {
        // Annular profile: normalization forces 1 - r_hole^2 = 4 / (sqrt(pi) eps Omega).
        let u_h = 1.0 - 4.0 / (pi.sqrt() * epsilon * omega);
        let mu = -om2 * u_h / 4.0;
        let second_moment =
            pi * eps2 * om2 / 8.0 * (1.0 / 3.0 - u_h / 2.0 + u_h * u_h * u_h / 6.0);
        let energy = 0.5 * mu - om2 / 8.0 * second_moment;
        Ok(Tf2dSolution {
            epsilon,
            omega,
            mu,
            energy,
            support: TfSupport2d::Annulus { r_hole: u_h.sqrt() },
        })
    }
}

/// Rotation at which the flat-trap TF density develops a hole.
pub fn hole_threshold(epsilon: f64) -> f64 {
    OMEGA_HOLE / epsilon
}
