//! Cell-centered polar grid on the unit disc. The innermost ring sits at
//! r = dr/2 so no node touches the coordinate singularity, the angular nodes
//! are staggered by half a cell so neither coordinate axis carries a node
//! line, and the midpoint weights r dr dtheta sum to the disc area exactly.

use crate::error::{require, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub dr: f64,
    pub dtheta: f64,
    radii: Vec<f64>,
}

impl PolarGrid {
    pub fn new(n_r: usize, n_theta: usize) -> Result<Self> {
        require(n_r >= 16, "need at least 16 radial rings")?;
        require(n_theta >= 8 && n_theta % 2 == 0, "n_theta must be even and >= 8")?;
        let dr = 1.0 / n_r as f64;
        let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
        let radii = (0..n_r).map(|i| (i as f64 + 0.5) * dr).collect();
        Ok(PolarGrid {
            n_r,
            n_theta,
            dr,
            dtheta,
            radii,
        })
    }

    /// The production default resolution: an epsilon = 0.025 vortex core
    /// spans about six radial cells.
    pub fn default_resolution() -> Self {
        PolarGrid::new(256, 512).expect("default grid is valid")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    #[inline]
    pub fn theta(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dtheta
    }

    /// Midpoint quadrature weight of every node on ring i.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.radii[i] * self.dr * self.dtheta
    }

    pub fn node_xy(&self, i: usize, j: usize) -> (f64, f64) {
        let r = self.radii[i];
        let th = self.theta(j);
        (r * th.cos(), r * th.sin())
    }

    pub fn total_weight(&self) -> f64 {
        (0..self.n_r).map(|i| self.weight(i) * self.n_theta as f64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_disc_area() {
        for (nr, nt) in [(16, 8), (64, 128), (256, 512), (100, 30)] {
            let g = PolarGrid::new(nr, nt).unwrap();
            assert!(
                (g.total_weight() - std::f64::consts::PI).abs() < 1e-10,
                "{nr}x{nt}: {}",
                g.total_weight()
            );
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(PolarGrid::new(8, 64).is_err());
        assert!(PolarGrid::new(32, 33).is_err());
        assert!(PolarGrid::new(32, 4).is_err());
    }

    #[test]
    fn rings_are_cell_centered() {
        let g = PolarGrid::new(20, 16).unwrap();
        assert!((g.radius(0) - 0.025).abs() < 1e-15);
        assert!((g.radius(19) - 0.975).abs() < 1e-15);
    }
}
