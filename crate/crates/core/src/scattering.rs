//! Two-body scattering inputs: scattering length from the zero-energy radial
//! equation, the dimensionless coupling, healing length and diluteness.
//!
//! Units are fixed to hbar = 2m = 1 throughout the crate, so the zero-energy
//! radial equation reads u'' = v(r) u / 2 with u(0) = 0, u'(0) = 1, and the
//! scattering length is read off the exterior solution u ~ c (r - a).

use crate::error::{require, CoreError, Result};
use crate::numerics::fit_line;

/// Radially symmetric, nonnegative, finite-range pair potential.
#[derive(Debug, Clone, PartialEq)]
pub enum PairPotential {
    /// Impenetrable core of radius `radius`.
    HardCore { radius: f64 },
    /// Constant barrier of `height` out to `range`, zero beyond.
    SquareBarrier { height: f64, range: f64 },
    /// Piecewise-linear radial samples `(r, v)`, zero beyond the last sample.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl PairPotential {
    /// Radius beyond which the potential vanishes.
    pub fn range(&self) -> f64 {
        match self {
            PairPotential::HardCore { radius } => *radius,
            PairPotential::SquareBarrier { range, .. } => *range,
            PairPotential::Tabulated { samples } => samples.last().map_or(0.0, |s| s.0),
        }
    }

    /// v(r). Hard cores are infinite inside the core radius.
    pub fn value(&self, r: f64) -> f64 {
        match self {
            PairPotential::HardCore { radius } => {
                if r < *radius {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            PairPotential::SquareBarrier { height, range } => {
                if r < *range {
                    *height
                } else {
                    0.0
                }
            }
            PairPotential::Tabulated { samples } => {
                if samples.is_empty() || r >= samples[samples.len() - 1].0 {
                    return 0.0;
                }
                if r <= samples[0].0 {
                    return samples[0].1;
                }
                let k = samples.partition_point(|s| s.0 <= r);
                let (r0, v0) = samples[k - 1];
                let (r1, v1) = samples[k];
                v0 + (v1 - v0) * (r - r0) / (r1 - r0)
            }
        }
    }

    /// v(r) with the interface value taken from inside the range, for
    /// integrating up to the boundary of a discontinuous potential.
    fn value_inside(&self, r: f64) -> f64 {
        match self {
            PairPotential::HardCore { .. } => f64::INFINITY,
            PairPotential::SquareBarrier { height, .. } => *height,
            PairPotential::Tabulated { samples } => {
                if let Some(last) = samples.last() {
                    if r >= last.0 {
                        return last.1;
                    }
                }
                self.value(r)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PairPotential::HardCore { radius } => require(*radius > 0.0, "hard-core radius must be positive"),
            PairPotential::SquareBarrier { height, range } => {
                require(*height >= 0.0, "barrier height must be nonnegative")?;
                require(*range > 0.0, "barrier range must be positive")
            }
            PairPotential::Tabulated { samples } => {
                require(!samples.is_empty(), "tabulated potential needs samples")?;
                require(
                    samples.windows(2).all(|w| w[1].0 > w[0].0),
                    "tabulated radii must be strictly increasing",
                )?;
                require(
                    samples.iter().all(|s| s.1 >= 0.0 && s.0 >= 0.0),
                    "tabulated potential must be nonnegative",
                )
            }
        }
    }
}

/// Microscopic and Gross-Pitaevskii parameters of the gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    /// Scattering length a.
    pub scattering_length: f64,
    /// Particle number N.
    pub particle_count: f64,
    /// Trap length scale L.
    pub trap_scale: f64,
    /// Mean density N / L^3.
    pub density: f64,
    /// Dimensionless coupling g = 4 pi a N / L.
    pub coupling: f64,
    /// epsilon = g^(-1/2), the vortex-core-to-trap size ratio.
    pub epsilon: f64,
    /// Angular velocity of the trap.
    pub omega: f64,
}

/// Fills the derived GP parameters from the microscopic inputs.
pub fn derive_params(a: f64, n: f64, l: f64, omega: f64) -> Result<GasParams> {
    require(a > 0.0, "scattering length must be positive")?;
    require(n > 0.0, "particle count must be positive")?;
    require(l > 0.0, "trap scale must be positive")?;
    require(omega >= 0.0, "angular velocity must be nonnegative")?;
    let coupling = 4.0 * std::f64::consts::PI * a * n / l;
    Ok(GasParams {
        scattering_length: a,
        particle_count: n,
        trap_scale: l,
        density: n / (l * l * l),
        coupling,
        epsilon: coupling.powf(-0.5),
        omega,
    })
}

/// Integrates the zero-energy scattering equation u'' = v u / 2 out to
/// `r_max` and extracts the scattering length from the exterior line
/// u = c (r - a), fitted over the last 10% of [range, r_max].
///
/// Hard-core potentials are handled analytically (a equals the core radius);
/// an infinite barrier cannot be integrated.
pub fn scattering_length(v: &PairPotential, r_max: f64, steps: usize) -> Result<f64> {
    v.validate()?;
    require(steps >= 1000, "need at least 1000 integration steps")?;
    let range = v.range();
    if r_max <= range {
        return Err(CoreError::Range(format!(
            "r_max = {r_max} does not reach past the potential range {range}"
        )));
    }
    if let PairPotential::HardCore { radius } = v {
        // Exterior solution 1 - radius/r, so a = radius exactly.
        return Ok(*radius);
    }

    // Two legs with the interface exactly at the potential range, so the RK4
    // steps never straddle the discontinuity of a square barrier. The inner
    // leg samples the interface from inside, where the potential is still on.
    let inner_steps = ((steps as f64 * range / r_max).ceil() as usize).max(64);
    let outer_steps = (steps.saturating_sub(inner_steps)).max(64);

    let mut u = 0.0_f64;
    let mut du = 1.0_f64;
    let rk4 = |r: f64, u: f64, du: f64, h: f64, pot: &dyn Fn(f64) -> f64| -> (f64, f64) {
        let f = |r: f64, u: f64| 0.5 * pot(r) * u;
        let (k1u, k1d) = (du, f(r, u));
        let (k2u, k2d) = (du + 0.5 * h * k1d, f(r + 0.5 * h, u + 0.5 * h * k1u));
        let (k3u, k3d) = (du + 0.5 * h * k2d, f(r + 0.5 * h, u + 0.5 * h * k2u));
        let (k4u, k4d) = (du + h * k3d, f(r + h, u + h * k3u));
        (
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            du + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
        )
    };

    let inside = |r: f64| v.value_inside(r);
    let outside = |_: f64| 0.0;
    let h_in = range / inner_steps as f64;
    for i in 0..inner_steps {
        let r = i as f64 * h_in;
        (u, du) = rk4(r, u, du, h_in, &inside);
    }

    // Exterior: v = 0, u stays exactly linear; record the last 10% and fit.
    let h_out = (r_max - range) / outer_steps as f64;
    let fit_start = range + 0.9 * (r_max - range);
    let mut rs = Vec::new();
    let mut us = Vec::new();
    for i in 0..outer_steps {
        let r = range + i as f64 * h_out;
        (u, du) = rk4(r, u, du, h_out, &outside);
        let r_next = r + h_out;
        if r_next >= fit_start {
            rs.push(r_next);
            us.push(u);
        }
    }
    if !u.is_finite() {
        return Err(CoreError::NonFinite("scattering integration diverged".into()));
    }
    let (slope, intercept) = fit_line(&rs, &us);
    if slope.abs() < 1e-300 {
        return Err(CoreError::Solver("exterior solution has zero slope".into()));
    }
    Ok(-intercept / slope)
}

/// Healing length (4 pi rho a)^(-1/2).
pub fn healing_length(rho: f64, a: f64) -> Result<f64> {
    require(rho > 0.0, "density must be positive")?;
    require(a > 0.0, "scattering length must be positive")?;
    Ok((4.0 * std::f64::consts::PI * rho * a).powf(-0.5))
}

/// The default diluteness threshold on a^3 rho.
pub const DILUTE_THRESHOLD: f64 = 1e-3;

/// Diluteness parameter a^3 rho together with the threshold verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diluteness {
    pub value: f64,
    pub is_dilute: bool,
}

pub fn diluteness(rho: f64, a: f64) -> Diluteness {
    diluteness_with_threshold(rho, a, DILUTE_THRESHOLD)
}

pub fn diluteness_with_threshold(rho: f64, a: f64, threshold: f64) -> Diluteness {
    debug_assert!(rho >= 0.0 && a >= 0.0);
    let value = a * a * a * rho;
    Diluteness {
        value,
        is_dilute: value < threshold,
    }
}

/// Leading-order ground state energy per particle of the dilute gas in a box,
/// 4 pi rho a.
pub fn box_energy_per_particle(rho: f64, a: f64) -> f64 {
    debug_assert!(rho >= 0.0 && a >= 0.0);
    4.0 * std::f64::consts::PI * rho * a
}

/// Closed-form square-barrier scattering length, used as the integrator
/// oracle: a = R0 (1 - tanh(kappa R0) / (kappa R0)) with kappa = sqrt(v0/2).
pub fn square_barrier_exact(height: f64, range: f64) -> f64 {
    if height == 0.0 {
        return 0.0;
    }
    let kappa = (height / 2.0).sqrt();
    range - (kappa * range).tanh() / kappa
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hard_core_is_analytic() {
        let v = PairPotential::HardCore { radius: 0.5 };
        assert_eq!(scattering_length(&v, 10.0, 2000).unwrap(), 0.5);
    }

    #[test]
    fn free_potential_has_zero_scattering_length() {
        let v = PairPotential::SquareBarrier { height: 0.0, range: 1.0 };
        let a = scattering_length(&v, 10.0, 4000).unwrap();
        assert!(a.abs() < 1e-10, "a = {a}");
    }

    #[test]
    fn square_barrier_matches_closed_form() {
        for v0 in [1.0, 8.0, 64.0] {
            let v = PairPotential::SquareBarrier { height: v0, range: 1.0 };
            let a = scattering_length(&v, 12.0, 20_000).unwrap();
            let exact = square_barrier_exact(v0, 1.0);
            assert!((a - exact).abs() < 1e-8, "v0 = {v0}: {a} vs {exact}");
        }
        // spot value: v0 = 8, R0 = 1 -> 1 - tanh(2)/2
        let spot = square_barrier_exact(8.0, 1.0);
        assert!((spot - (1.0 - 2.0_f64.tanh() / 2.0)).abs() < 1e-15);
        assert!((spot - 0.51798621).abs() < 1e-7);
    }

    #[test]
    fn square_barrier_monotone_in_height() {
        let mut last = -1.0;
        for k in 0..20 {
            let v0 = 0.5 * 1.5_f64.powi(k);
            let v = PairPotential::SquareBarrier { height: v0, range: 1.0 };
            let a = scattering_length(&v, 8.0, 4000).unwrap();
            assert!(a >= last, "a({v0}) = {a} < {last}");
            last = a;
        }
    }

    #[test]
    fn tabulated_matches_square_barrier() {
        // A plateau sampled densely approximates the square barrier.
        let samples: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let r = i as f64 / 400.0;
                (r, 8.0)
            })
            .collect();
        let v = PairPotential::Tabulated { samples };
        let a = scattering_length(&v, 12.0, 20_000).unwrap();
        assert!((a - square_barrier_exact(8.0, 1.0)).abs() < 1e-6);
    }

    #[test]
    fn argument_errors() {
        let v = PairPotential::SquareBarrier { height: 1.0, range: 1.0 };
        assert!(matches!(
            scattering_length(&v, 10.0, 10),
            Err(CoreError::Argument(_))
        ));
        assert!(matches!(
            scattering_length(&v, 0.5, 2000),
            Err(CoreError::Range(_))
        ));
        assert!(derive_params(0.0, 100.0, 1.0, 0.0).is_err());
        assert!(derive_params(0.01, 100.0, 1.0, -1.0).is_err());
        assert!(healing_length(0.0, 1.0).is_err());
    }

    #[test]
    fn derive_params_examples() {
        let p = derive_params(0.01, 1000.0, 1.0, 0.0).unwrap();
        assert!((p.coupling - 40.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((p.epsilon - 0.08920620580763855).abs() < 1e-12);
        assert!((p.density - 1000.0).abs() < 1e-12);

        let p = derive_params(1.0 / (4.0 * std::f64::consts::PI), 100.0, 1.0, 0.0).unwrap();
        assert!((p.coupling - 100.0).abs() < 1e-12);
        assert!((p.epsilon - 0.1).abs() < 1e-15);
    }

    #[test]
    fn healing_length_examples() {
        let inv4pi = 1.0 / (4.0 * std::f64::consts::PI);
        assert!((healing_length(inv4pi, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((healing_length(inv4pi, 4.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((healing_length(100.0 * inv4pi, 0.01).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diluteness_examples() {
        assert_eq!(diluteness(1.0, 0.0).value, 0.0);
        assert!(diluteness(1.0, 0.0).is_dilute);
        let d = diluteness(8.0, 0.5);
        assert!((d.value - 1.0).abs() < 1e-15);
        assert!(!d.is_dilute);
        // boundary: a^3 rho lands on the threshold and is not strictly below it
        let d = diluteness(1e6, 1e-3);
        assert!((d.value - 1e-3).abs() < 1e-16);
        assert!(!d.is_dilute);
    }

    #[test]
    fn box_energy_examples() {
        let inv4pi = 1.0 / (4.0 * std::f64::consts::PI);
        assert!((box_energy_per_particle(inv4pi, 1.0) - 1.0).abs() < 1e-14);
        assert_eq!(box_energy_per_particle(0.0, 1.0), 0.0);
        assert!((box_energy_per_particle(2.0, 3.0) - 24.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn scattering_length_bounded_by_range(
            v0 in 0.0f64..200.0,
            r0 in 0.05f64..2.0,
        ) {
            let v = PairPotential::SquareBarrier { height: v0, range: r0 };
            let a = scattering_length(&v, r0 + 6.0, 4000).unwrap();
            prop_assert!(a >= -1e-9, "a = {}", a);
            prop_assert!(a <= r0 + 1e-9, "a = {} > {}", a, r0);
        }

        #[test]
        fn healing_length_inverts_formula(
            rho in 1e-3f64..1e4,
            a in 1e-4f64..10.0,
        ) {
            let l = healing_length(rho, a).unwrap();
            let back = l * l * 4.0 * std::f64::consts::PI * rho * a;
            prop_assert!((back - 1.0).abs() < 1e-12);
        }

        #[test]
        fn epsilon_squares_to_inverse_coupling(
            a in 1e-4f64..1.0,
            n in 1.0f64..1e7,
            l in 0.1f64..10.0,
        ) {
            let p = derive_params(a, n, l, 0.0).unwrap();
            prop_assert!((p.epsilon * p.epsilon * p.coupling - 1.0).abs() < 1e-12);
        }
    }
}
