//! Discretized condensate wave function on the polar grid, and the
//! per-term breakdown of its GP energy.

use num_complex::Complex64;

use crate::error::{require, CoreError, Result};
use crate::grid::PolarGrid;

/// Complex order parameter psi on a [`PolarGrid`], carrying its (epsilon,
/// Omega) parameters. Normalized so that the weighted sum of |psi|^2 is 1.
#[derive(Debug, Clone)]
pub struct ComplexField2D {
    pub grid: PolarGrid,
    pub values: Vec<Complex64>,
    pub epsilon: f64,
    pub omega: f64,
}

impl ComplexField2D {
    pub fn constant(grid: PolarGrid, epsilon: f64, omega: f64) -> Result<Self> {
        let mut f = ComplexField2D {
            values: vec![Complex64::new(1.0, 0.0); grid.len()],
            grid,
            epsilon,
            omega,
        };
        f.validate_params()?;
        f.normalize();
        Ok(f)
    }

    /// Samples `f(x, y)` at the grid nodes and normalizes.
    pub fn from_fn(
        grid: PolarGrid,
        epsilon: f64,
        omega: f64,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.n_r {
            for j in 0..grid.n_theta {
                let (x, y) = grid.node_xy(i, j);
                values.push(f(x, y));
            }
        }
        let mut field = ComplexField2D {
            grid,
            values,
            epsilon,
            omega,
        };
        field.validate_params()?;
        require(
            field.values.iter().all(|v| v.re.is_finite() && v.im.is_finite()),
            "field contains non-finite samples",
        )?;
        field.normalize();
        Ok(field)
    }

    fn validate_params(&self) -> Result<()> {
        require(self.epsilon > 0.0, "epsilon must be positive")?;
        require(self.omega >= 0.0, "Omega must be nonnegative")
    }

    /// Weighted L2 norm squared.
    pub fn norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.grid.n_r {
            let w = self.grid.weight(i);
            let row = &self.values[self.grid.index(i, 0)..self.grid.index(i, 0) + self.grid.n_theta];
            let mut ring = 0.0;
            for v in row {
                ring += v.norm_sqr();
            }
            acc += w * ring;
        }
        acc
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sq().sqrt();
        if n > 0.0 {
            let inv = 1.0 / n;
            for v in &mut self.values {
                *v *= inv;
            }
        }
    }

    pub fn density_max(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn phase(&self, i: usize, j: usize) -> f64 {
        let v = self.value(i, j);
        v.im.atan2(v.re)
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if self.values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(CoreError::NonFinite("field contains NaN or infinity".into()));
        }
        Ok(())
    }
}

/// Term-by-term GP energy of a field or trial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// ∫ |(i grad + A) psi|^2
    pub kinetic_covariant: f64,
    /// ∫ V |psi|^2 (zero for the flat trap)
    pub trap: f64,
    /// -(Omega^2/4) ∫ r^2 |psi|^2
    pub centrifugal: f64,
    /// eps^-2 ∫ |psi|^4
    pub interaction: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub(crate) fn assemble(kinetic_covariant: f64, trap: f64, centrifugal: f64, interaction: f64) -> Self {
        EnergyBreakdown {
            kinetic_covariant,
            trap,
            centrifugal,
            interaction,
            total: kinetic_covariant + trap + centrifugal + interaction,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_is_normalized() {
        let f = ComplexField2D::constant(PolarGrid::new(32, 64).unwrap(), 0.1, 0.0).unwrap();
        assert!((f.norm_sq() - 1.0).abs() < 1e-12);
        let expected = 1.0 / std::f64::consts::PI.sqrt();
        assert!((f.value(3, 5).re - expected).abs() < 1e-12);
    }

    #[test]
    fn breakdown_total_is_sum_of_parts() {
        let b = EnergyBreakdown::assemble(1.5, 0.0, -0.5, 2.25);
        assert!((b.total - 3.25).abs() < 1e-15);
    }

    #[test]
    fn from_fn_rejects_nan() {
        let g = PolarGrid::new(16, 8).unwrap();
        let r = ComplexField2D::from_fn(g, 0.1, 0.0, |x, _| {
            Complex64::new(if x > 0.0 { f64::NAN } else { 1.0 }, 0.0)
        });
        assert!(r.is_err());
    }
}
