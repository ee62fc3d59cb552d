//! Numerical laboratory for rapidly rotating dilute Bose gases.
//!
//! The crate implements the variational machinery around the rotating
//! Gross-Pitaevskii functional at desk scale:
//!
//! * [`scattering`] - scattering length from the zero-energy radial equation,
//!   coupling, healing length and diluteness (units hbar = 2m = 1);
//! * [`tf2d`] / [`tf3d`] - closed-form Thomas-Fermi profiles on the flat disc
//!   trap and in 3D anharmonic traps, with hole formation and the chemical
//!   potential fixed by normalization;
//! * [`scaling`] - the one-parameter scaling family of the TF theory, regime
//!   classification, and the ultrarapid (rotation-dominated) limit;
//! * [`grid`], [`field`], [`gp`] - the discretized GP functional on a polar
//!   grid over the unit disc, its exact gradient, an energy-monotone
//!   normalized gradient flow, GP-equation residuals and the diamagnetic
//!   inequality;
//! * [`vortex`] - phase-winding vortex detection and discrete Stokes
//!   bookkeeping;
//! * [`lattice`], [`trial`], [`trial3d`] - vortex-lattice and giant-vortex
//!   trial states in 2D and 3D, cell energies and the conjugate-field
//!   identity;
//! * [`asympt`] - crossover markers and subleading-energy predictions;
//! * [`harmonic`] - closed-form estimates near the critical frequency of a
//!   quadratic trap.

pub mod asympt;
pub mod error;
pub mod field;
pub mod gp;
pub mod grid;
pub mod harmonic;
pub mod lattice;
pub mod numerics;
pub mod scaling;
pub mod scattering;
pub mod tf2d;
pub mod tf3d;
pub mod trial;
pub mod trial3d;
pub mod vortex;

pub use num_complex::Complex64;

pub use asympt::{predict_asymptotics, AsymptoticPrediction, GpRegime};
pub use error::{CoreError, Result};
pub use field::{ComplexField2D, EnergyBreakdown};
pub use gp::{
    diamagnetic_check, gp_energy, gp_gradient, gp_residual, minimize_from, minimize_gp,
    DiamagneticCheck, InitState, MinimizeOpts, MinimizeResult,
};
pub use grid::PolarGrid;
pub use harmonic::{harmonic_estimates, HarmonicEstimates, HarmonicRegime};
pub use lattice::{
    build_lattice, cell_energy, conjugate_field_check, optimal_core_radius, LatticeKind, Region,
    VortexLattice,
};
pub use scaling::{
    scaling_map, tf_gamma_limit, ultrarapid_limit, MinimizerSet, RotationRegime, ScalingReport,
    UltrarapidLimit,
};
pub use scattering::{
    box_energy_per_particle, derive_params, diluteness, healing_length, scattering_length,
    Diluteness, GasParams, PairPotential,
};
pub use tf2d::{hole_threshold, tf2d_flat, Tf2dSolution, TfSupport2d, OMEGA_HOLE};
pub use tf3d::{tf3d, tf3d_with, Tf3dOptions, Tf3dSolution, TrapPotential3D};
pub use trial::{
    giant_vortex_trial, lattice_trial, regularized_density, tapered_density, TrialDensity,
    TrialKind, TrialState,
};
pub use trial3d::{
    ultrarapid_trial_3d, vortex_line_trial_3d, Trial3dOptions, UltrarapidTrial3d, VortexLineTrial3d,
};
pub use vortex::{detect_vortices, loop_winding, Vortex, VortexCensus};
