//! Vortex lattice geometry with per-vortex cell area 2 pi / Omega, the
//! logarithmic cell energy, the optimal core radius, and the Cauchy-Riemann
//! identity between the lattice phase and its conjugate "electrostatic"
//! potential.

use num_complex::Complex64;

use crate::error::{require, CoreError, Result};
use crate::numerics::{integrate_gl_log, wrap_phase};

/// Planar support region used for lattice clipping and trial densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disc { radius: f64 },
    Annulus { r_inner: f64, r_outer: f64 },
}

impl Region {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let r2 = x * x + y * y;
        match *self {
            Region::Disc { radius } => r2 <= radius * radius,
            Region::Annulus { r_inner, r_outer } => {
                r2 >= r_inner * r_inner && r2 <= r_outer * r_outer
            }
        }
    }

    /// Whether a disc of radius `t` centered at (x, y) lies entirely inside.
    pub fn contains_disc(&self, x: f64, y: f64, t: f64) -> bool {
        let r = (x * x + y * y).sqrt();
        match *self {
            Region::Disc { radius } => r + t <= radius,
            Region::Annulus { r_inner, r_outer } => r - t >= r_inner && r + t <= r_outer,
        }
    }

    /// Anchor point for the deterministic lattice translation.
    pub fn centroid(&self) -> (f64, f64) {
        (0.0, 0.0)
    }

    pub fn outer_radius(&self) -> f64 {
        match *self {
            Region::Disc { radius } => radius,
            Region::Annulus { r_outer, .. } => r_outer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Triangular,
    Square,
}

/// A finite vortex lattice clipped to a region. Every vortex carries one
/// lattice cell of area 2 pi / Omega.
#[derive(Debug, Clone, PartialEq)]
pub struct VortexLattice {
    pub points: Vec<Complex64>,
    pub kind: LatticeKind,
    pub cell_area: f64,
    /// Core radius; zero until a trial state assigns one.
    pub core_radius: f64,
    pub region: Region,
}

impl VortexLattice {
    /// A lattice with no points (used by trial states below the first-vortex
    /// threshold).
    pub fn empty(region: Region, omega: f64) -> Self {
        VortexLattice {
            points: Vec::new(),
            kind: LatticeKind::Triangular,
            cell_area: if omega > 0.0 { 2.0 * std::f64::consts::PI / omega } else { f64::INFINITY },
            core_radius: 0.0,
            region,
        }
    }

    /// Assembles a lattice from explicit points (e.g. random configurations
    /// for the conjugate-field check). No spacing invariant is implied.
    pub fn from_points(points: Vec<Complex64>, omega: f64, region: Region, kind: LatticeKind) -> Result<Self> {
        require(omega > 0.0, "Omega must be positive")?;
        Ok(VortexLattice {
            points,
            kind,
            cell_area: 2.0 * std::f64::consts::PI / omega,
            core_radius: 0.0,
            region,
        })
    }

    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.cell_area
    }

    /// Primitive lattice spacing consistent with the cell area.
    pub fn spacing(&self) -> f64 {
        match self.kind {
            LatticeKind::Triangular => (self.cell_area * 2.0 / 3f64.sqrt()).sqrt(),
            LatticeKind::Square => self.cell_area.sqrt(),
        }
    }

    pub fn min_pair_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (k, p) in self.points.iter().enumerate() {
            for q in &self.points[k + 1..] {
                best = best.min((p - q).norm());
            }
        }
        best
    }
}

/// Generates the lattice whose per-vortex cell area is exactly 2 pi / Omega,
/// anchored so one lattice point sits at the region centroid, clipped to the
/// points inside the region.
pub fn build_lattice(omega: f64, region: Region, kind: LatticeKind) -> Result<VortexLattice> {
    require(omega > 0.0, "Omega must be positive")?;
    let cell_area = 2.0 * std::f64::consts::PI / omega;
    let spacing = match kind {
        LatticeKind::Triangular => (cell_area * 2.0 / 3f64.sqrt()).sqrt(),
        LatticeKind::Square => cell_area.sqrt(),
    };
    let (a1, a2) = match kind {
        LatticeKind::Triangular => (
            (spacing, 0.0),
            (0.5 * spacing, 0.5 * 3f64.sqrt() * spacing),
        ),
        LatticeKind::Square => ((spacing, 0.0), (0.0, spacing)),
    };
    let (cx, cy) = region.centroid();
    let reach = region.outer_radius() + spacing;
    let n_max = (2.0 * reach / spacing).ceil() as i64 + 2;
    let mut points = Vec::new();
    for m in -n_max..=n_max {
        for n in -n_max..=n_max {
            let x = cx + m as f64 * a1.0 + n as f64 * a2.0;
            let y = cy + m as f64 * a1.1 + n as f64 * a2.1;
            if x * x + y * y > reach * reach {
                continue;
            }
            if region.contains(x, y) {
                points.push(Complex64::new(x, y));
            }
        }
    }
    if points.is_empty() {
        return Err(CoreError::DegenerateLattice(format!(
            "no lattice point of cell area {cell_area:.3e} fits the region"
        )));
    }
    // deterministic ordering independent of loop order details
    points.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(VortexLattice {
        points,
        kind,
        cell_area,
        core_radius: 0.0,
        region,
    })
}

/// Closed form pi |log(t^2 Omega)| of the cell energy together with the
/// direct quadrature of its defining integral 2 pi ∫_t^{1/sqrt(Omega)} dr/r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellEnergy {
    pub closed_form: f64,
    pub quadrature: f64,
}

pub fn cell_energy(t: f64, omega: f64) -> Result<CellEnergy> {
    require(omega > 0.0, "Omega must be positive")?;
    require(t > 0.0, "core radius must be positive")?;
    let upper = omega.powf(-0.5);
    if t >= upper {
        return Err(CoreError::Argument(format!(
            "core radius {t} must lie below the cell radius {upper}"
        )));
    }
    let closed_form = std::f64::consts::PI * (t * t * omega).ln().abs();
    let quadrature = integrate_gl_log(
        |r| 2.0 * std::f64::consts::PI / r,
        t,
        upper,
        32,
        12,
    );
    Ok(CellEnergy {
        closed_form,
        quadrature,
    })
}

/// The error-optimal vortex core radius: the healing length for moderate
/// rotation, shrunk by the boundary-layer compression beyond Omega ~ 1/eps.
pub fn optimal_core_radius(epsilon: f64, omega: f64) -> Result<f64> {
    require(epsilon > 0.0, "epsilon must be positive")?;
    require(omega > 0.0, "Omega must be positive")?;
    Ok(if omega <= 1.0 / epsilon {
        epsilon
    } else {
        (epsilon / omega).sqrt()
    })
}

/// Result of the Cauchy-Riemann identity check between the lattice phase
/// gradient and its conjugate field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateFieldReport {
    pub max_relative_error: f64,
    pub accepted: usize,
    /// Samples rejected for sitting within two finite-difference cells of a vortex.
    pub rejected: Vec<(f64, f64)>,
}

/// Checks |grad phi - (Omega r / 2) e_theta|^2 = |grad chi - (Omega r / 2) e_r|^2
/// by central finite differences of step `h` at the given sample points,
/// where phi is the lattice phase and chi its conjugate harmonic potential.
///
/// Samples closer than 300 h to a vortex are rejected and reported: the
/// truncation error of the squared gradients grows like (h/d)^2, so that
/// guard (about two cells of the default field grid at h = 1e-4) keeps the
/// check meaningful at the 1e-5 level.
pub fn conjugate_field_check(
    lattice: &VortexLattice,
    samples: &[(f64, f64)],
    h: f64,
) -> Result<ConjugateFieldReport> {
    require(h > 0.0, "finite-difference step must be positive")?;
    require(!samples.is_empty(), "need at least one sample point")?;
    let omega = lattice.omega();

    let phase = |x: f64, y: f64| -> f64 {
        lattice
            .points
            .iter()
            .map(|p| (y - p.im).atan2(x - p.re))
            .sum()
    };
    let log_pot = |x: f64, y: f64| -> f64 {
        lattice
            .points
            .iter()
            .map(|p| ((x - p.re).powi(2) + (y - p.im).powi(2)).sqrt().ln())
            .sum()
    };

    let mut max_rel: f64 = 0.0;
    let mut rejected = Vec::new();
    let mut accepted = 0;
    for &(x, y) in samples {
        let too_close = lattice
            .points
            .iter()
            .any(|p| ((x - p.re).powi(2) + (y - p.im).powi(2)).sqrt() <= 300.0 * h);
        if too_close {
            rejected.push((x, y));
            continue;
        }
        accepted += 1;
        // wrapped central differences for the multivalued phase
        let dphi_x = wrap_phase(phase(x + h, y) - phase(x - h, y)) / (2.0 * h);
        let dphi_y = wrap_phase(phase(x, y + h) - phase(x, y - h)) / (2.0 * h);
        let dchi_x = (log_pot(x + h, y) - log_pot(x - h, y)) / (2.0 * h);
        let dchi_y = (log_pot(x, y + h) - log_pot(x, y - h)) / (2.0 * h);

        // e_theta = (-y, x)/r scaled by Omega r / 2 gives Omega/2 (-y, x)
        let lhs = (dphi_x + 0.5 * omega * y).powi(2) + (dphi_y - 0.5 * omega * x).powi(2);
        let rhs = (dchi_x - 0.5 * omega * x).powi(2) + (dchi_y - 0.5 * omega * y).powi(2);
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        max_rel = max_rel.max((lhs - rhs).abs() / scale);
    }
    require(accepted > 0, "all sample points were rejected")?;
    Ok(ConjugateFieldReport {
        max_relative_error: max_rel,
        accepted,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cell_area_matches_spacing_invariant() {
        let lat = build_lattice(100.0, Region::Disc { radius: 1.0 }, LatticeKind::Triangular).unwrap();
        let spacing = lat.spacing();
        assert!((spacing * spacing * 3f64.sqrt() / 2.0 - lat.cell_area).abs() < 1e-10);
        // closed form (4 pi / (sqrt(3) Omega))^(1/2) at Omega = 100
        assert!((spacing - (4.0 * std::f64::consts::PI / (3f64.sqrt() * 100.0)).sqrt()).abs() < 1e-12);
        assert!((spacing - 0.2694).abs() < 1e-4);
        // nearest neighbors realize the primitive spacing
        assert!((lat.min_pair_distance() - spacing).abs() < 1e-10);

        let sq = build_lattice(100.0, Region::Disc { radius: 1.0 }, LatticeKind::Square).unwrap();
        assert!((sq.spacing().powi(2) - sq.cell_area).abs() < 1e-12);
    }

    #[test]
    fn point_count_tracks_area_over_cell_area() {
        // Omega = 2: cell area pi, unit disc area pi -> one point at the centroid
        let lat = build_lattice(2.0, Region::Disc { radius: 1.0 }, LatticeKind::Triangular).unwrap();
        assert!(!lat.points.is_empty() && lat.points.len() <= 2);

        let lat = build_lattice(100.0, Region::Disc { radius: 1.0 }, LatticeKind::Triangular).unwrap();
        let n = lat.points.len() as f64;
        assert!((n - 50.0).abs() <= 5.0, "count {n} not within 10% of 50");
    }

    #[test]
    fn degenerate_region_errors() {
        let res = build_lattice(0.5, Region::Annulus { r_inner: 0.95, r_outer: 1.0 }, LatticeKind::Triangular);
        assert!(matches!(res, Err(CoreError::DegenerateLattice(_))));
    }

    #[test]
    fn cell_energy_examples_and_identity() {
        let ce = cell_energy(0.01, 100.0).unwrap();
        let expected = std::f64::consts::PI * 100f64.ln();
        assert!((ce.closed_form - expected).abs() < 1e-12);
        assert!((ce.closed_form - 14.468).abs() < 1e-3);
        assert!((ce.closed_form - ce.quadrature).abs() < 1e-10);

        let ce = cell_energy(0.02, 100.0).unwrap();
        assert!((ce.closed_form - std::f64::consts::PI * 0.04f64.ln().abs()).abs() < 1e-12);
        assert!((ce.closed_form - 10.112).abs() < 1e-3);

        assert!(cell_energy(0.1, 100.0).is_err()); // t at the cell radius
        assert!(cell_energy(0.2, 100.0).is_err());
    }

    #[test]
    fn cell_energy_identity_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let omega = 0.5 * 1000f64.powf(rng.random::<f64>());
            let ratio = 1e-3 + 0.95 * rng.random::<f64>();
            let t = ratio * omega.powf(-0.5);
            let ce = cell_energy(t, omega).unwrap();
            assert!(
                (ce.closed_form - ce.quadrature).abs() < 1e-10,
                "t={t} omega={omega}: {} vs {}",
                ce.closed_form,
                ce.quadrature
            );
        }
    }

    #[test]
    fn optimal_core_radius_branches_and_continuity() {
        assert!((optimal_core_radius(0.1, 5.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((optimal_core_radius(0.1, 10.0).unwrap() - 0.1).abs() < 1e-15);
        let above = optimal_core_radius(0.1, 10.0 + 1e-9).unwrap();
        assert!((above - 0.1).abs() < 1e-9);
        assert!((optimal_core_radius(0.1, 1000.0).unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn conjugate_identity_single_vortex_and_no_vortex() {
        let lat = VortexLattice::from_points(
            vec![Complex64::new(0.0, 0.0)],
            4.0,
            Region::Disc { radius: 1.0 },
            LatticeKind::Triangular,
        )
        .unwrap();
        let rep = conjugate_field_check(&lat, &[(0.5, 0.0), (0.0, 0.5), (-0.3, 0.4)], 1e-4).unwrap();
        assert!(rep.max_relative_error < 1e-6, "{}", rep.max_relative_error);

        // no vortices: both sides reduce to (Omega r / 2)^2
        let lat = VortexLattice::from_points(vec![], 4.0, Region::Disc { radius: 1.0 }, LatticeKind::Triangular).unwrap();
        let rep = conjugate_field_check(&lat, &[(0.5, 0.2)], 1e-4).unwrap();
        assert!(rep.max_relative_error < 1e-9);
    }

    #[test]
    fn conjugate_identity_random_lattice_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let points: Vec<Complex64> = (0..10)
            .map(|_| {
                let r = 0.8 * rng.random::<f64>().sqrt();
                let th = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                Complex64::from_polar(r, th)
            })
            .collect();
        let lat = VortexLattice::from_points(points, 30.0, Region::Disc { radius: 1.0 }, LatticeKind::Triangular).unwrap();
        let samples: Vec<(f64, f64)> = (0..300)
            .map(|_| {
                let r = 0.95 * rng.random::<f64>().sqrt();
                let th = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                (r * th.cos(), r * th.sin())
            })
            .filter(|&(x, y)| {
                lat.points
                    .iter()
                    .all(|p| ((x - p.re).powi(2) + (y - p.im).powi(2)).sqrt() > 0.065)
            })
            .take(100)
            .collect();
        assert_eq!(samples.len(), 100);
        let fine = conjugate_field_check(&lat, &samples, 1e-4).unwrap();
        assert!(fine.max_relative_error < 1e-5, "{}", fine.max_relative_error);
        let coarse = conjugate_field_check(&lat, &samples, 2e-4).unwrap();
        let ratio = coarse.max_relative_error / fine.max_relative_error;
        assert!(
            ratio > 2.5 && ratio < 6.0,
            "error does not decay at second order: ratio {ratio}"
        );
    }

    #[test]
    fn samples_near_vortices_are_rejected() {
        let lat = VortexLattice::from_points(
            vec![Complex64::new(0.2, 0.0)],
            4.0,
            Region::Disc { radius: 1.0 },
            LatticeKind::Triangular,
        )
        .unwrap();
        let rep = conjugate_field_check(&lat, &[(0.2, 1e-5), (0.7, 0.0)], 1e-4).unwrap();
        assert_eq!(rep.accepted, 1);
        assert_eq!(rep.rejected.len(), 1);
        // all samples rejected -> error
        assert!(conjugate_field_check(&lat, &[(0.2, 1e-5)], 1e-4).is_err());
    }
}
