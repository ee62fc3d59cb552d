//! Scaling relations of the 3D TF theory: the one-parameter family in the
//! effective rotation omega, the rotation-dominated gamma parametrization,
//! regime classification and the ultrarapid (gamma -> 0) limit.

use crate::error::{require, Result};
use crate::tf3d::{planar_well_min, tf3d, TrapPotential3D};

/// Default regime thresholds, one decade either side of omega ~ 1.
pub const OMEGA_SLOW_DEFAULT: f64 = 0.1;
pub const OMEGA_ULTRA_DEFAULT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationRegime {
    Slow,
    Rapid,
    Ultrarapid,
}

/// Rescaled parameters of the TF theory at coupling g, rotation Omega,
/// trap degree s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingReport {
    /// Length rescale lambda = g^(1/(s+3)).
    pub lambda: f64,
    /// Effective rotation omega = g^(-(s-2)/(2(s+3))) Omega.
    pub omega_eff: f64,
    /// gamma = omega^(-2(s+3)/(s-2)); infinite at omega = 0.
    pub gamma: f64,
    pub regime: RotationRegime,
}

pub fn scaling_map(g: f64, omega: f64, s: f64) -> Result<ScalingReport> {
    scaling_map_with(g, omega, s, OMEGA_SLOW_DEFAULT, OMEGA_ULTRA_DEFAULT)
}

pub fn scaling_map_with(
    g: f64,
    omega: f64,
    s: f64,
    omega_lo: f64,
    omega_hi: f64,
) -> Result<ScalingReport> {
    require(g > 0.0, "coupling g must be positive")?;
    require(omega >= 0.0, "Omega must be nonnegative")?;
    require(
        s > 2.0,
        "trap degree must exceed 2 (see harmonic_estimates for quadratic traps)",
    )?;
    require(omega_lo > 0.0 && omega_hi > omega_lo, "bad regime thresholds")?;
    let lambda = g.powf(1.0 / (s + 3.0));
    let omega_eff = g.powf(-(s - 2.0) / (2.0 * (s + 3.0))) * omega;
    let gamma = if omega_eff > 0.0 {
        omega_eff.powf(-2.0 * (s + 3.0) / (s - 2.0))
    } else {
        f64::INFINITY
    };
    let regime = if omega_eff < omega_lo {
        RotationRegime::Slow
    } else if omega_eff <= omega_hi {
        RotationRegime::Rapid
    } else {
        RotationRegime::Ultrarapid
    };
    Ok(ScalingReport {
        lambda,
        omega_eff,
        gamma,
        regime,
    })
}

/// The set of minimizers of W = V - r^2/4.
#[derive(Debug, Clone, PartialEq)]
pub enum MinimizerSet {
    /// A circle of the given radius in the z = 0 plane (rotationally
    /// symmetric traps).
    Circle { radius: f64 },
    /// A discrete symmetric set of points (anisotropic traps). The effective
    /// planar potential is separable, so the minima sit at (+-x*, +-y*, 0).
    Points(Vec<[f64; 3]>),
}

impl MinimizerSet {
    pub fn points(&self, samples: usize) -> Vec<[f64; 3]> {
        match self {
            MinimizerSet::Circle { radius } => (0..samples)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                    [radius * th.cos(), radius * th.sin(), 0.0]
                })
                .collect(),
            MinimizerSet::Points(p) => p.clone(),
        }
    }
}

/// Ultrarapid-rotation limit data: the infimum of W = V - r^2/4, the common
/// distance of its minimizers from the rotation axis, and the minimizer set.
#[derive(Debug, Clone, PartialEq)]
pub struct UltrarapidLimit {
    pub w_min: f64,
    pub r_omega: f64,
    pub minimizers: MinimizerSet,
}

/// Minimizes W = V - r^2/4 in closed form (the per-direction problems are
/// one-dimensional power-law wells).
pub fn ultrarapid_limit(trap: &TrapPotential3D) -> Result<UltrarapidLimit> {
    trap.validate()?;
    const Q: f64 = 0.25;
    match *trap {
        TrapPotential3D::RadialZ { c_r, s, .. } => {
            let (w_min, r) = planar_well_min(c_r, s, Q);
            Ok(UltrarapidLimit {
                w_min,
                r_omega: r,
                minimizers: MinimizerSet::Circle { radius: r },
            })
        }
        TrapPotential3D::Anisotropic { c_x, c_y, s, .. } => {
            let (m_x, x) = planar_well_min(c_x, s, Q);
            let (m_y, y) = planar_well_min(c_y, s, Q);
            let pts = vec![
                [x, y, 0.0],
                [-x, y, 0.0],
                [-x, -y, 0.0],
                [x, -y, 0.0],
            ];
            Ok(UltrarapidLimit {
                w_min: m_x + m_y,
                r_omega: (x * x + y * y).sqrt(),
                minimizers: MinimizerSet::Points(pts),
            })
        }
    }
}

/// One point of a gamma sweep toward the ultrarapid limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPoint {
    pub gamma: f64,
    /// E^TF at coupling gamma, rotation 1.
    pub energy: f64,
    /// |energy - w_min|.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSweep {
    pub w_min: f64,
    pub points: Vec<GammaPoint>,
    /// Whether the gap decreased monotonically along the sweep.
    pub monotone: bool,
}

/// Evaluates E^TF_{gamma,1} along a positive, decreasing gamma sweep and
/// reports the approach to the ultrarapid limit w_min.
pub fn tf_gamma_limit(trap: &TrapPotential3D, gammas: &[f64]) -> Result<GammaSweep> {
    require(!gammas.is_empty(), "gamma sweep must be nonempty")?;
    require(
        gammas.iter().all(|g| *g > 0.0),
        "gamma values must be positive",
    )?;
    require(
        gammas.windows(2).all(|w| w[1] < w[0]),
        "gamma values must be strictly decreasing",
    )?;
    let limit = ultrarapid_limit(trap)?;
    let mut points = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let sol = tf3d(trap, gamma, 1.0)?;
        points.push(GammaPoint {
            gamma,
            energy: sol.energy,
            gap: (sol.energy - limit.w_min).abs(),
        });
    }
    let monotone = points.windows(2).all(|w| w[1].gap < w[0].gap);
    Ok(GammaSweep {
        w_min: limit.w_min,
        points,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic() -> TrapPotential3D {
        TrapPotential3D::RadialZ { c_r: 1.0, c_z: 1.0, s: 4.0 }
    }

    #[test]
    fn scaling_map_examples() {
        let r = scaling_map(1e4, 10.0, 4.0).unwrap();
        assert!((r.omega_eff - 10.0 * 1e4_f64.powf(-2.0 / 14.0)).abs() < 1e-12);
        assert!((r.omega_eff - 2.6826957952797246).abs() < 1e-10);
        assert_eq!(r.regime, RotationRegime::Rapid);

        let r = scaling_map(1.0, 0.0, 3.0).unwrap();
        assert_eq!(r.lambda, 1.0);
        assert_eq!(r.omega_eff, 0.0);
        assert!(r.gamma.is_infinite());
        assert_eq!(r.regime, RotationRegime::Slow);

        let r = scaling_map(1e4, 1e3, 4.0).unwrap();
        assert!((r.omega_eff - 268.26957952797244).abs() < 1e-8);
        assert_eq!(r.regime, RotationRegime::Ultrarapid);
    }

    #[test]
    fn gamma_omega_inverse_relation() {
        for &(g, om, s) in &[(10.0, 3.0, 4.0), (1e3, 0.5, 3.0), (1e5, 40.0, 6.0)] {
            let r = scaling_map(g, om, s).unwrap();
            if r.omega_eff > 0.0 {
                let back = r.gamma * r.omega_eff.powf(2.0 * (s + 3.0) / (s - 2.0));
                assert!((back - 1.0).abs() < 1e-10, "g={g} om={om} s={s}");
            }
        }
    }

    #[test]
    fn rejects_subharmonic_degree() {
        assert!(scaling_map(1.0, 1.0, 2.0).is_err());
        assert!(scaling_map(1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn ultrarapid_quartic_closed_form() {
        let lim = ultrarapid_limit(&quartic()).unwrap();
        assert!((lim.r_omega - 0.125_f64.sqrt()).abs() < 1e-14);
        assert!((lim.w_min - (-1.0 / 64.0)).abs() < 1e-15);
        assert!(matches!(lim.minimizers, MinimizerSet::Circle { .. }));

        // dense grid-search oracle over (r, z)
        let mut best = f64::INFINITY;
        let mut best_r = 0.0;
        for i in 0..4000 {
            let r = i as f64 * 2.0 / 4000.0;
            for k in 0..40 {
                let z = k as f64 * 0.01;
                let w = quartic().value(r, 0.0, z) - 0.25 * r * r;
                if w < best {
                    best = w;
                    best_r = r;
                }
            }
        }
        assert!((best - lim.w_min).abs() < 1e-6);
        assert!((best_r - lim.r_omega).abs() < 1e-3);
    }

    #[test]
    fn ultrarapid_anisotropic_minima() {
        // V = |x|^4 + 2|y|^4 + |z|^4. The planar parts separate, so the minima
        // sit at (+-x*, +-y*, 0) with both coordinates nonzero; a dense grid
        // search confirms the four-point set and the common axis distance.
        let trap = TrapPotential3D::Anisotropic { c_x: 1.0, c_y: 2.0, c_z: 1.0, s: 4.0 };
        let lim = ultrarapid_limit(&trap).unwrap();
        let pts = match &lim.minimizers {
            MinimizerSet::Points(p) => p.clone(),
            _ => panic!("expected discrete minimizers"),
        };
        assert_eq!(pts.len(), 4);
        for p in &pts {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((r - lim.r_omega).abs() < 1e-10);
            let w = trap.value(p[0], p[1], p[2]) - 0.25 * r * r;
            assert!((w - lim.w_min).abs() < 1e-12);
        }
        // oracle: exhaustive planar grid search
        let mut best = f64::INFINITY;
        let mut arg = (0.0, 0.0);
        for i in -600..=600 {
            let x = i as f64 / 600.0;
            for j in -600..=600 {
                let y = j as f64 / 600.0;
                let w = trap.value(x, y, 0.0) - 0.25 * (x * x + y * y);
                if w < best {
                    best = w;
                    arg = (x, y);
                }
            }
        }
        assert!((best - lim.w_min).abs() < 1e-5);
        assert!(arg.0.abs() > 1e-3 && arg.1.abs() > 1e-3, "oracle found an axis minimum");
    }

    #[test]
    fn ultrarapid_large_degree_matches_root_find() {
        // V = r^s: stationarity s r^(s-1) = r/2.
        for s in [5.0, 9.0, 14.0] {
            let trap = TrapPotential3D::RadialZ { c_r: 1.0, c_z: 1.0, s };
            let lim = ultrarapid_limit(&trap).unwrap();
            // 1D bisection oracle on the increasing s r^(s-2) - 1/2
            let (mut lo, mut hi) = (1e-6_f64, 2.0_f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if s * mid.powf(s - 2.0) < 0.5 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r = 0.5 * (lo + hi);
            assert!((lim.r_omega - r).abs() < 1e-10, "s={s}: {} vs {r}", lim.r_omega);
        }
    }

    #[test]
    fn gamma_sweep_decreases_toward_w_min() {
        let sweep = tf_gamma_limit(&quartic(), &[1e-1, 1e-2, 1e-3]).unwrap();
        assert!(sweep.monotone, "gaps: {:?}", sweep.points);
        for p in &sweep.points {
            assert!(p.energy >= sweep.w_min);
        }
        assert!((sweep.w_min - (-1.0 / 64.0)).abs() < 1e-15);
    }

    #[test]
    fn gamma_sweep_validates_input() {
        assert!(tf_gamma_limit(&quartic(), &[]).is_err());
        assert!(tf_gamma_limit(&quartic(), &[0.1, 0.2]).is_err());
        assert!(tf_gamma_limit(&quartic(), &[0.1, -0.2]).is_err());
    }
}
