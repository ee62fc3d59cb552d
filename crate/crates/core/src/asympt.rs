//! Regime classification and subleading-energy predictions for the flat-trap
//! GP theory, with the crossover markers between finitely many vortices, the
//! lattice regimes, and the giant vortex.

use crate::error::{require, Result};
use crate::tf2d::OMEGA_HOLE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpRegime {
    /// Omega = O(|log eps|): finitely many vortices.
    FiniteVortices,
    /// 1/eps <~ Omega << 1/(eps^2 |log eps|): lattice, subleading (Omega/2)|log eps|.
    LatticeRegimeA,
    /// |log eps| << Omega << 1/eps: lattice, subleading (Omega/2)|log(eps^2 Omega)|.
    LatticeRegimeB,
    /// Omega beyond 1/(eps^2 |log eps|): giant vortex.
    GiantVortexRegime,
}

/// Predicted regime, subleading energy and crossover markers at (eps, Omega).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPrediction {
    pub regime: GpRegime,
    /// Predicted E_GP - E_TF in the lattice regimes; None elsewhere.
    pub subleading: Option<f64>,
    /// First-vortex marker pi |log eps| (unit disc).
    pub omega_first: f64,
    /// Hole marker (4/sqrt(pi)) / eps.
    pub omega_hole: f64,
    /// Giant-vortex marker 1/(eps^2 |log eps|).
    pub omega_giant: f64,
    /// Vortex-count window index when finitely many vortices are expected.
    pub finite_count: Option<u64>,
}

/// Classifies (eps, Omega) against the crossover markers. The finite-vortex
/// window uses the counting rule
/// |log eps| + (d-1) log|log eps| < Omega/pi <= |log eps| + d log|log eps|;
/// the regime is labeled FiniteVortices through the d = 1 window.
pub fn predict_asymptotics(epsilon: f64, omega: f64) -> Result<AsymptoticPrediction> {
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)")?;
    require(omega >= 0.0, "Omega must be nonnegative")?;
    let log_eps = -epsilon.ln();
    let omega_first = std::f64::consts::PI * log_eps;
    let omega_hole = OMEGA_HOLE / epsilon;
    let omega_giant = 1.0 / (epsilon * epsilon * log_eps);

    let window = log_eps.ln().max(0.0);
    let finite_boundary = std::f64::consts::PI * (log_eps + window);

    let (regime, subleading, finite_count) = if omega <= finite_boundary {
        let d = if omega <= omega_first {
            0
        } else if window > 0.0 {
            ((omega / std::f64::consts::PI - log_eps) / window).ceil() as u64
        } else {
            1
        };
        (GpRegime::FiniteVortices, None, Some(d))
    } else if omega < 1.0 / epsilon {
        let sub = 0.5 * omega * (epsilon * epsilon * omega).ln().abs();
        (GpRegime::LatticeRegimeB, Some(sub), None)
    } else if omega <= omega_giant {
        (GpRegime::LatticeRegimeA, Some(0.5 * omega * log_eps), None)
    } else {
        (GpRegime::GiantVortexRegime, None, None)
    };

    Ok(AsymptoticPrediction {
        regime,
        subleading,
        omega_first,
        omega_hole,
        omega_giant,
        finite_count,
    })
}

/// Effective condensate radius and first-vortex velocity for a homogeneous
/// trap V ~ r^s: R ~ eps^(-2/(s+2)), Omega_1 ~ R^-2 |log eps|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousTrapEstimate {
    pub radius: f64,
    pub omega_first: f64,
}

pub fn homogeneous_radius(epsilon: f64, s: f64) -> Result<HomogeneousTrapEstimate> {
    require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]")?;
    require(s > 0.0, "trap degree must be positive")?;
    let radius = epsilon.powf(-2.0 / (s + 2.0));
    let log_eps = -epsilon.ln();
    Ok(HomogeneousTrapEstimate {
        radius,
        omega_first: epsilon.powf(4.0 / (s + 2.0)) * log_eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_a_example() {
        let p = predict_asymptotics(0.01, 200.0).unwrap();
        assert_eq!(p.regime, GpRegime::LatticeRegimeA);
        let expected = 100.0 * (-0.01f64.ln());
        assert!((p.subleading.unwrap() - expected).abs() < 1e-9);
        assert!((p.subleading.unwrap() - 460.517).abs() < 1e-3);
    }

    #[test]
    fn regime_b_example() {
        let p = predict_asymptotics(0.01, 20.0).unwrap();
        assert_eq!(p.regime, GpRegime::LatticeRegimeB);
        let expected = 10.0 * (1e-4f64 * 20.0).ln().abs();
        assert!((p.subleading.unwrap() - expected).abs() < 1e-9);
        assert!((p.subleading.unwrap() - 62.146).abs() < 1e-3);
    }

    #[test]
    fn finite_vortices_example() {
        let p = predict_asymptotics(0.01, 2.0).unwrap();
        assert_eq!(p.regime, GpRegime::FiniteVortices);
        assert_eq!(p.finite_count, Some(0));
        assert!((p.omega_first - 14.4676).abs() < 1e-3);
        // just above the first-vortex marker: one vortex expected
        let p = predict_asymptotics(0.01, 15.0).unwrap();
        assert_eq!(p.regime, GpRegime::FiniteVortices);
        assert_eq!(p.finite_count, Some(1));
    }

    #[test]
    fn giant_regime_beyond_marker() {
        let p = predict_asymptotics(0.01, 3000.0).unwrap();
        assert_eq!(p.regime, GpRegime::GiantVortexRegime);
        assert!(p.subleading.is_none());
    }

    #[test]
    fn markers_are_ordered_for_small_eps() {
        let mut eps = 0.199;
        while eps > 1e-4 {
            let p = predict_asymptotics(eps, 1.0).unwrap();
            assert!(
                p.omega_first < p.omega_hole && p.omega_hole < p.omega_giant,
                "markers out of order at eps = {eps}: {} {} {}",
                p.omega_first,
                p.omega_hole,
                p.omega_giant
            );
            eps *= 0.7;
        }
    }

    #[test]
    fn subleading_positive_in_lattice_regimes() {
        for &(eps, om) in &[(0.05, 10.0), (0.05, 30.0), (0.01, 150.0), (0.02, 60.0)] {
            let p = predict_asymptotics(eps, om).unwrap();
            if let Some(s) = p.subleading {
                assert!(s > 0.0, "eps={eps} om={om}");
            }
        }
    }

    #[test]
    fn homogeneous_radius_examples() {
        let e = homogeneous_radius(1e-3, 2.0).unwrap();
        assert!((e.radius - 1e-3f64.powf(-0.5)).abs() < 1e-9);
        assert!((e.radius - 31.6228).abs() < 1e-3);

        let e = homogeneous_radius(1.0, 7.0).unwrap();
        assert_eq!(e.radius, 1.0);
        assert_eq!(e.omega_first, 0.0);

        let e = homogeneous_radius(1e-2, 4.0).unwrap();
        assert!((e.radius - 10f64.powf(2.0 / 3.0)).abs() < 1e-9);
        assert!((e.radius - 4.6416).abs() < 1e-3);
    }
}
