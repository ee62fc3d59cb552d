//! Thomas-Fermi theory for rotating anharmonic traps in 3D: the density is
//! the positive part of the inverted effective potential, the chemical
//! potential is fixed by normalization, and the energy follows by quadrature.
//!
//! All brackets, bounding boxes and tolerances are built from closed-form
//! scale-covariant quantities, so solutions at parameters related by the
//! scaling relations collapse onto each other to root-finder precision rather
//! than quadrature precision.

use crate::error::{require, CoreError, Result};
use crate::numerics::bisect_increasing;

/// Homogeneous trap potential of degree s > 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrapPotential3D {
    /// V = c_r r^s + c_z |z|^s with r the distance from the rotation axis.
    RadialZ { c_r: f64, c_z: f64, s: f64 },
    /// V = c_x |x|^s + c_y |y|^s + c_z |z|^s.
    Anisotropic { c_x: f64, c_y: f64, c_z: f64, s: f64 },
}

impl TrapPotential3D {
    pub fn degree(&self) -> f64 {
        match self {
            TrapPotential3D::RadialZ { s, .. } => *s,
            TrapPotential3D::Anisotropic { s, .. } => *s,
        }
    }

    pub fn value(&self, x: f64, y: f64, z: f64) -> f64 {
        match *self {
            TrapPotential3D::RadialZ { c_r, c_z, s } => {
                let r = (x * x + y * y).sqrt();
                c_r * r.powf(s) + c_z * z.abs().powf(s)
            }
            TrapPotential3D::Anisotropic { c_x, c_y, c_z, s } => {
                c_x * x.abs().powf(s) + c_y * y.abs().powf(s) + c_z * z.abs().powf(s)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (coeffs, s): (Vec<f64>, f64) = match *self {
            TrapPotential3D::RadialZ { c_r, c_z, s } => (vec![c_r, c_z], s),
            TrapPotential3D::Anisotropic { c_x, c_y, c_z, s } => (vec![c_x, c_y, c_z], s),
        };
        require(
            coeffs.iter().all(|c| *c > 0.0),
            "trap coefficients must be positive",
        )?;
        require(s > 2.0, "trap degree must exceed 2 (anharmonic)")?;
        Ok(())
    }
}

/// min over t >= 0 of c t^s - q t^2, together with its location.
/// q = 0 gives (0, 0); otherwise the minimum sits at t = (2q/(s c))^(1/(s-2)).
pub(crate) fn planar_well_min(c: f64, s: f64, q: f64) -> (f64, f64) {
    if q <= 0.0 {
        return (0.0, 0.0);
    }
    let t = (2.0 * q / (s * c)).powf(1.0 / (s - 2.0));
    (c * t.powf(s) - q * t * t, t)
}

/// Infimum of the effective potential V - Omega^2 r^2 / 4.
pub fn effective_potential_min(trap: &TrapPotential3D, omega: f64) -> f64 {
    let q = 0.25 * omega * omega;
    match *trap {
        TrapPotential3D::RadialZ { c_r, s, .. } => planar_well_min(c_r, s, q).0,
        TrapPotential3D::Anisotropic { c_x, c_y, s, .. } => {
            planar_well_min(c_x, s, q).0 + planar_well_min(c_y, s, q).0
        }
    }
}

/// Support bounding box of the TF density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportBounds {
    RadialZ { r_max: f64, z_max: f64 },
    Cartesian { x_max: f64, y_max: f64, z_max: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Tf3dOptions {
    /// Quadrature nodes per axis (half-domain).
    pub resolution: usize,
}

impl Default for Tf3dOptions {
    fn default() -> Self {
        Tf3dOptions { resolution: 0 } // 0 = per-geometry default
    }
}

/// TF minimizer for a 3D anharmonic trap at coupling g and rotation Omega.
#[derive(Debug, Clone)]
pub struct Tf3dSolution {
    pub trap: TrapPotential3D,
    pub g: f64,
    pub omega: f64,
    pub mu: f64,
    pub energy: f64,
    pub bounds: SupportBounds,
}

impl Tf3dSolution {
    /// rho(x) = (1/2g) [mu + Omega^2 r^2/4 - V(x)]_+
    pub fn density(&self, x: f64, y: f64, z: f64) -> f64 {
        let q = 0.25 * self.omega * self.omega;
        let val = self.mu + q * (x * x + y * y) - self.trap.value(x, y, z);
        val.max(0.0) / (2.0 * self.g)
    }

    /// Density in cylindrical coordinates (only meaningful for RadialZ traps).
    pub fn density_rz(&self, r: f64, z: f64) -> f64 {
        self.density(r, 0.0, z)
    }

    pub fn max_density(&self) -> f64 {
        (self.mu - effective_potential_min(&self.trap, self.omega)) / (2.0 * self.g)
    }
}

/// Largest root of c t^s - q t^2 = level (level > min of the left side),
/// found by doubling and bisection from the well minimum.
fn outer_root(c: f64, s: f64, q: f64, level: f64) -> Result<f64> {
    if q == 0.0 {
        require(level >= 0.0, "level below potential minimum")?;
        return Ok((level / c).powf(1.0 / s));
    }
    let (m, t_min) = planar_well_min(c, s, q);
    if level < m {
        return Err(CoreError::Solver(format!(
            "support level {level:e} below well minimum {m:e}"
        )));
    }
    let f = |t: f64| c * t.powf(s) - q * t * t - level;
    let mut hi = t_min.max(1e-300);
    let mut k = 0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        k += 1;
        if k > 2000 {
            return Err(CoreError::Solver("support radius doubling diverged".into()));
        }
    }
    bisect_increasing(f, t_min.min(hi / 2.0), hi, 1e-13, 300)
}

pub(crate) fn support_bounds(trap: &TrapPotential3D, omega: f64, mu: f64) -> Result<SupportBounds> {
    let q = 0.25 * omega * omega;
    match *trap {
        TrapPotential3D::RadialZ { c_r, c_z, s } => {
            let m_r = planar_well_min(c_r, s, q).0;
            let r_max = outer_root(c_r, s, q, mu)?;
            let z_max = ((mu - m_r).max(0.0) / c_z).powf(1.0 / s);
            Ok(SupportBounds::RadialZ { r_max, z_max })
        }
        TrapPotential3D::Anisotropic { c_x, c_y, c_z, s } => {
            let m_x = planar_well_min(c_x, s, q).0;
            let m_y = planar_well_min(c_y, s, q).0;
            let x_max = outer_root(c_x, s, q, mu - m_y)?;
            let y_max = outer_root(c_y, s, q, mu - m_x)?;
            let z_max = ((mu - m_x - m_y).max(0.0) / c_z).powf(1.0 / s);
            Ok(SupportBounds::Cartesian { x_max, y_max, z_max })
        }
    }
}

/// Precomputed quadrature nodes: weight and the profile X = Omega^2 r^2/4 - V,
/// so that the normalization is (1/2g) sum w [mu + X]_+ .
struct QuadNodes {
    weights: Vec<f64>,
    profile: Vec<f64>,
}

fn quad_nodes(trap: &TrapPotential3D, omega: f64, bounds: &SupportBounds, res: usize) -> QuadNodes {
    let q = 0.25 * omega * omega;
    let mut weights = Vec::new();
    let mut profile = Vec::new();
    match (bounds, trap) {
        (SupportBounds::RadialZ { r_max, z_max }, _) => {
            let n = if res > 0 { res } else { 512 };
            let dr = r_max / n as f64;
            let dz = z_max / n as f64;
            weights.reserve(n * n);
            profile.reserve(n * n);
            for i in 0..n {
                let r = (i as f64 + 0.5) * dr;
                // factor 2 for the z < 0 half
                let w_r = 2.0 * 2.0 * std::f64::consts::PI * r * dr * dz;
                for k in 0..n {
                    let z = (k as f64 + 0.5) * dz;
                    weights.push(w_r);
                    profile.push(q * r * r - trap.value(r, 0.0, z));
                }
            }
        }
        (SupportBounds::Cartesian { x_max, y_max, z_max }, _) => {
            let n = if res > 0 { res } else { 80 };
            let dx = x_max / n as f64;
            let dy = y_max / n as f64;
            let dz = z_max / n as f64;
            let w = 8.0 * dx * dy * dz; // even in every coordinate
            weights.reserve(n * n * n);
            profile.reserve(n * n * n);
            for i in 0..n {
                let x = (i as f64 + 0.5) * dx;
                for j in 0..n {
                    let y = (j as f64 + 0.5) * dy;
                    for k in 0..n {
                        let z = (k as f64 + 0.5) * dz;
                        weights.push(w);
                        profile.push(q * (x * x + y * y) - trap.value(x, y, z));
                    }
                }
            }
        }
    }
    QuadNodes { weights, profile }
}

impl QuadNodes {
    fn norm(&self, mu: f64, g: f64) -> f64 {
        let mut acc = 0.0;
        for (w, x) in self.weights.iter().zip(&self.profile) {
            let v = mu + x;
            if v > 0.0 {
                acc += w * v;
            }
        }
        acc / (2.0 * g)
    }

    /// E = ∫ V rho - (Omega^2 r^2/4) rho + g rho^2 = ∫ (-X) rho + g rho^2.
    fn energy(&self, mu: f64, g: f64) -> f64 {
        let mut acc = 0.0;
        for (w, x) in self.weights.iter().zip(&self.profile) {
            let v = mu + x;
            if v > 0.0 {
                let rho = v / (2.0 * g);
                acc += w * (-x * rho + g * rho * rho);
            }
        }
        acc
    }
}

pub fn tf3d(trap: &TrapPotential3D, g: f64, omega: f64) -> Result<Tf3dSolution> {
    tf3d_with(trap, g, omega, Tf3dOptions::default())
}

pub fn tf3d_with(
    trap: &TrapPotential3D,
    g: f64,
    omega: f64,
    opts: Tf3dOptions,
) -> Result<Tf3dSolution> {
    trap.validate()?;
    require(g > 0.0, "coupling g must be positive")?;
    require(omega >= 0.0, "Omega must be nonnegative")?;

    let s = trap.degree();
    let m0 = effective_potential_min(trap, omega);
    // Characteristic TF energy scale. Both terms rescale by the same factor
    // under the interaction-dominated and the rotation-dominated scaling
    // maps, so brackets (and hence quadrature grids) map onto each other
    // exactly and the scaling collapses hold to root-finder precision.
    let e_scale = g.powf(s / (s + 3.0)) + omega.powf(2.0 * s / (s - 2.0));

    // Find an upper chemical potential by doubling, then freeze the grid.
    let mut delta = e_scale;
    let mut mu_hi = m0 + delta;
    let mut nodes = quad_nodes(trap, omega, &support_bounds(trap, omega, mu_hi)?, opts.resolution);
    let mut k = 0;
    while nodes.norm(mu_hi, g) < 1.0 {
        delta *= 2.0;
        mu_hi = m0 + delta;
        nodes = quad_nodes(trap, omega, &support_bounds(trap, omega, mu_hi)?, opts.resolution);
        k += 1;
        if k > 200 {
            return Err(CoreError::Solver(format!(
                "normalization bracket diverged: N({mu_hi:e}) = {:e}",
                nodes.norm(mu_hi, g)
            )));
        }
    }

    let mu = bisect_increasing(
        |m| nodes.norm(m, g) - 1.0,
        m0,
        mu_hi,
        1e-13,
        300,
    )
    .map_err(|e| {
        CoreError::Solver(format!(
            "chemical potential bracket [{m0:e}, {mu_hi:e}] failed: {e}"
        ))
    })?;

    let energy = nodes.energy(mu, g);
    let bounds = support_bounds(trap, omega, mu)?;
    Ok(Tf3dSolution {
        trap: *trap,
        g,
        omega,
        mu,
        energy,
        bounds,
    })
}
