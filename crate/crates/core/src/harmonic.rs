//! Order-of-magnitude estimates for quadratic traps near the critical
//! rotation frequency sqrt(2) Omega_osc, where the effective potential loses
//! confinement. Proportionality constants are set to one; the regime flag is
//! a heuristic, not a proved statement.

use crate::error::{require, Result};

pub const K_GP_DEFAULT: f64 = 1e3;
pub const K_FQHE_DEFAULT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicRegime {
    GpExpected,
    FqheExpected,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicEstimates {
    pub omega_osc: f64,
    pub omega: f64,
    /// Critical frequency sqrt(2) Omega_osc.
    pub omega_c: f64,
    /// Effective condensate radius (N a / ((Omega_c - Omega) sqrt(Omega_c)))^(1/4).
    pub radius: f64,
    /// Particles per vortex, (N (1 - Omega/Omega_c) / (a sqrt(Omega_c)))^(1/2).
    pub particles_per_vortex: f64,
    /// The argument N (1 - Omega/Omega_c) / (a sqrt(Omega_c)) deciding the flag.
    pub ratio_argument: f64,
    pub regime: HarmonicRegime,
}

pub fn harmonic_estimates(omega_osc: f64, omega: f64, n: f64, a: f64) -> Result<HarmonicEstimates> {
    harmonic_estimates_with(omega_osc, omega, n, a, K_FQHE_DEFAULT, K_GP_DEFAULT)
}

pub fn harmonic_estimates_with(
    omega_osc: f64,
    omega: f64,
    n: f64,
    a: f64,
    k_lo: f64,
    k_hi: f64,
) -> Result<HarmonicEstimates> {
    require(omega_osc > 0.0, "trap frequency must be positive")?;
    require(n > 0.0 && a > 0.0, "N and a must be positive")?;
    require(omega >= 0.0, "Omega must be nonnegative")?;
    require(k_hi > k_lo && k_lo > 0.0, "bad regime thresholds")?;
    let omega_c = 2f64.sqrt() * omega_osc;
    require(
        omega < omega_c,
        "effective potential unbounded below at Omega >= sqrt(2) Omega_osc",
    )?;
    let radius = (n * a / ((omega_c - omega) * omega_c.sqrt())).powf(0.25);
    let ratio_argument = n * (1.0 - omega / omega_c) / (a * omega_c.sqrt());
    let regime = if ratio_argument > k_hi {
        HarmonicRegime::GpExpected
    } else if ratio_argument < k_lo {
        HarmonicRegime::FqheExpected
    } else {
        HarmonicRegime::Indeterminate
    };
    Ok(HarmonicEstimates {
        omega_osc,
        omega,
        omega_c,
        radius,
        particles_per_vortex: ratio_argument.sqrt(),
        ratio_argument,
        regime,
    })
}
