//! Rotating GP functional on the flat unit-disc trap: energy evaluation with
//! the covariant derivative, its exact discrete gradient, a normalized
//! energy-monotone gradient flow, the GP-equation residual and the
//! diamagnetic inequality check.
//!
//! Discretization: link (midpoint) differences on the cell-centered polar
//! grid. Radial links carry the plain difference with the annular link
//! weight; azimuthal links carry the covariant difference
//! (psi_+ - psi_-)/(r dtheta) - i A (psi_+ + psi_-)/2, so a constant field
//! sees exactly |A psi|^2 (the centrifugal term cancels it identically) and
//! the diamagnetic inequality holds link by link. No link leaves the disc,
//! which is the natural Neumann condition at the wall; centered stencils were
//! rejected because their null phase modes (theta checkerboards) freeze
//! initialization noise into the minimizer. The flow applies the inverse of
//! I + tau * (exact quadratic part, diagonal per azimuthal mode) as a
//! positive-definite preconditioner; descent is enforced on the true energy
//! by step halving, exactly as for the plain flow.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{require, CoreError, Result};
use crate::field::{ComplexField2D, EnergyBreakdown};
use crate::grid::PolarGrid;
use crate::lattice::{build_lattice, optimal_core_radius, LatticeKind, Region, VortexLattice};
use crate::numerics::solve_banded5_pair;
use crate::tf2d::tf2d_flat;
use crate::trial::{lattice_trial, regularized_density};

/// Evaluates the four terms of the flat-trap GP functional.
pub fn gp_energy(field: &ComplexField2D) -> Result<EnergyBreakdown> {
    field.check_finite()?;
    Ok(energy_unchecked(field))
}

fn energy_unchecked(field: &ComplexField2D) -> EnergyBreakdown {
    let g = &field.grid;
    let (n_r, n_t) = (g.n_r, g.n_theta);
    let dr = g.dr;
    let dth = g.dtheta;
    let vals = &field.values;
    let inv_eps2 = 1.0 / (field.epsilon * field.epsilon);
    let om = field.omega;

    let mut kin = 0.0;
    let mut cent = 0.0;
    let mut inter = 0.0;
    for i in 0..n_r {
        let r = g.radius(i);
        let w = g.weight(i);
        let a = 0.5 * om * r;
        let row = i * n_t;
        let up = (i + 1) * n_t;
        // annular weight of the link between rings i and i+1
        let w_link = (i + 1) as f64 * dr * dr * dth;
        let inv_rdth = 1.0 / (r * dth);
        let mut ring_rad = 0.0;
        let mut ring_th = 0.0;
        let mut ring_cent = 0.0;
        let mut ring_int = 0.0;
        for j in 0..n_t {
            let jp = if j + 1 == n_t { 0 } else { j + 1 };
            let v = vals[row + j];
            if i + 1 < n_r {
                ring_rad += (vals[up + j] - v).norm_sqr();
            }
            let vp = vals[row + jp];
            let t_th = (vp - v) * inv_rdth - Complex64::new(0.0, 0.5 * a) * (vp + v);
            let rho = v.norm_sqr();
            ring_th += t_th.norm_sqr();
            ring_cent += r * r * rho;
            ring_int += rho * rho;
        }
        kin += w_link * ring_rad / (dr * dr) + w * ring_th;
        cent += w * ring_cent;
        inter += w * ring_int;
    }
    EnergyBreakdown::assemble(kin, 0.0, -0.25 * om * om * cent, inv_eps2 * inter)
}

/// Exact gradient of the discrete energy with respect to the field, in the
/// weighted inner product: the directional derivative of [`gp_energy`] along
/// delta is Re sum_k w_k conj(G_k) delta_k.
pub fn gp_gradient(field: &ComplexField2D) -> Result<Vec<Complex64>> {
    field.check_finite()?;
    Ok(gradient_unchecked(field))
}

fn gradient_unchecked(field: &ComplexField2D) -> Vec<Complex64> {
    let g = &field.grid;
    let (n_r, n_t) = (g.n_r, g.n_theta);
    let dth = g.dtheta;
    let vals = &field.values;
    let inv_eps2 = 1.0 / (field.epsilon * field.epsilon);
    let om = field.omega;

    // accumulate d E / d conj(psi) by scattering each link term, then
    // rescale to the weighted metric by 2 / w
    let mut acc = vec![Complex64::new(0.0, 0.0); vals.len()];

    for i in 0..n_r {
        let r = g.radius(i);
        let w = g.weight(i);
        let a = 0.5 * om * r;
        let row = i * n_t;
        let up = (i + 1) * n_t;
        let w_link = (i + 1) as f64 * dth;
        let inv_rdth = 1.0 / (r * dth);
        for j in 0..n_t {
            let jp = if j + 1 == n_t { 0 } else { j + 1 };
            let v = vals[row + j];

            // radial link (i, i+1)
            if i + 1 < n_r {
                let f = w_link * (vals[up + j] - v);
                acc[up + j] += f;
                acc[row + j] -= f;
            }

            // azimuthal covariant link (j, j+1)
            let vp = vals[row + jp];
            let t_th = (vp - v) * inv_rdth - Complex64::new(0.0, 0.5 * a) * (vp + v);
            let f = w * t_th;
            acc[row + jp] += f * Complex64::new(inv_rdth, 0.5 * a);
            acc[row + j] += f * Complex64::new(-inv_rdth, 0.5 * a);

            // centrifugal + interaction (diagonal)
            let rho = v.norm_sqr();
            acc[row + j] += w * (-0.25 * om * om * r * r + 2.0 * inv_eps2 * rho) * v;
        }
    }

    for i in 0..n_r {
        let scale = 2.0 / g.weight(i);
        for j in 0..n_t {
            acc[i * n_t + j] *= scale;
        }
    }
    acc
}

/// mu = <psi, H psi> and the weighted residual norm ||H psi - mu psi||.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpResidual {
    pub mu: f64,
    pub residual_norm: f64,
}

/// The GP equation residual of a (normalized) field. H psi is half the
/// energy gradient, so a converged minimizer has a small residual.
pub fn gp_residual(field: &ComplexField2D) -> Result<GpResidual> {
    let grad = gp_gradient(field)?;
    let g = &field.grid;
    let mut mu = 0.0;
    for i in 0..g.n_r {
        let w = g.weight(i);
        for j in 0..g.n_theta {
            let k = g.index(i, j);
            let h = 0.5 * grad[k];
            mu += w * (field.values[k].conj() * h).re;
        }
    }
    let mut res = 0.0;
    for i in 0..g.n_r {
        let w = g.weight(i);
        for j in 0..g.n_theta {
            let k = g.index(i, j);
            let h = 0.5 * grad[k];
            res += w * (h - mu * field.values[k]).norm_sqr();
        }
    }
    Ok(GpResidual {
        mu,
        residual_norm: res.sqrt(),
    })
}

/// Both sides of the diamagnetic inequality for a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamagneticCheck {
    /// ∫ |(grad - iA) psi|^2
    pub lhs: f64,
    /// ∫ |grad |psi||^2
    pub rhs: f64,
    pub holds: bool,
}

pub fn diamagnetic_check(field: &ComplexField2D) -> DiamagneticCheck {
    let lhs = energy_unchecked(field).kinetic_covariant;
    // gradient energy of the modulus over the same links, no vector potential
    let g = &field.grid;
    let (n_r, n_t) = (g.n_r, g.n_theta);
    let dth = g.dtheta;
    let moduli: Vec<f64> = field.values.iter().map(|v| v.norm()).collect();
    let mut rhs = 0.0;
    for i in 0..n_r {
        let r = g.radius(i);
        let w = g.weight(i);
        let w_link = (i + 1) as f64 * dth;
        let row = i * n_t;
        let up = (i + 1) * n_t;
        let mut ring_rad = 0.0;
        let mut ring_th = 0.0;
        for j in 0..n_t {
            let jp = if j + 1 == n_t { 0 } else { j + 1 };
            if i + 1 < n_r {
                let d = moduli[up + j] - moduli[row + j];
                ring_rad += d * d;
            }
            let d = (moduli[row + jp] - moduli[row + j]) / (r * dth);
            ring_th += d * d;
        }
        rhs += w_link * ring_rad + w * ring_th;
    }
    DiamagneticCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9 * lhs.abs(),
    }
}

/// Initial state for the minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitState {
    Constant,
    /// Regularized TF amplitude with independently seeded uniform phase noise
    /// per node; the noise lets symmetry-broken vortex states emerge.
    TfPhaseNoise { seed: u64 },
    /// Triangular-lattice trial state at the optimal core radius.
    LatticeTrial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOpts {
    /// Initial step; adapted upward on success and halved on any energy increase.
    pub tau: f64,
    /// Relative energy-change tolerance, required on 5 consecutive iterations.
    pub tol: f64,
    pub max_iters: usize,
    pub tau_max: f64,
}

impl Default for MinimizeOpts {
    fn default() -> Self {
        MinimizeOpts {
            tau: 0.1,
            tol: 1e-9,
            max_iters: 20_000,
            tau_max: 50.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub field: ComplexField2D,
    pub energy: EnergyBreakdown,
    pub iterations: usize,
    pub converged: bool,
    /// Seed actually used for noise initialization, echoed for reproducibility.
    pub seed: Option<u64>,
}

/// Builds the initial field for a minimization run.
pub fn initial_field(
    grid: PolarGrid,
    epsilon: f64,
    omega: f64,
    init: InitState,
) -> Result<ComplexField2D> {
    match init {
        InitState::Constant => ComplexField2D::constant(grid, epsilon, omega),
        InitState::TfPhaseNoise { seed } => {
            let tf = tf2d_flat(epsilon, omega)?;
            let reg = regularized_density(&tf);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut values = Vec::with_capacity(grid.len());
            for i in 0..grid.n_r {
                let amp = reg.density(grid.radius(i)).sqrt();
                for _ in 0..grid.n_theta {
                    let phase: f64 = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                    values.push(Complex64::from_polar(amp, phase));
                }
            }
            let mut f = ComplexField2D {
                grid,
                values,
                epsilon,
                omega,
            };
            f.normalize();
            Ok(f)
        }
        InitState::LatticeTrial => {
            let tf = tf2d_flat(epsilon, omega)?;
            let region = match tf.support {
                crate::tf2d::TfSupport2d::Disc => Region::Disc { radius: 1.0 },
                crate::tf2d::TfSupport2d::Annulus { r_hole } => Region::Annulus {
                    r_inner: r_hole,
                    r_outer: 1.0,
                },
            };
            let lattice = match build_lattice(omega, region, LatticeKind::Triangular) {
                Ok(l) => l,
                Err(CoreError::DegenerateLattice(_)) => VortexLattice::empty(region, omega),
                Err(e) => return Err(e),
            };
            let t = optimal_core_radius(epsilon, omega)?;
            let trial = lattice_trial(epsilon, omega, &lattice, t)?;
            trial.to_field(grid)
        }
    }
}

/// Normalized, energy-monotone gradient flow for the flat-trap GP functional.
///
/// Each iteration applies the inverse of I + tau L (L = the positive
/// quadratic part of the Hessian, diagonal per azimuthal mode) to the exact
/// gradient, steps, renormalizes, and halves tau until the energy does not
/// increase. Terminates once the relative energy change stays below `tol`
/// for 5 consecutive iterations, or at `max_iters` with `converged = false`.
pub fn minimize_gp(
    grid: PolarGrid,
    epsilon: f64,
    omega: f64,
    init: InitState,
    opts: MinimizeOpts,
) -> Result<MinimizeResult> {
    require(opts.tau > 0.0, "step tau must be positive")?;
    require(opts.tol > 0.0, "tolerance must be positive")?;
    let seed = match init {
        InitState::TfPhaseNoise { seed } => Some(seed),
        _ => None,
    };
    let field = initial_field(grid, epsilon, omega, init)?;
    minimize_from(field, opts, seed)
}

/// Runs the flow from a caller-supplied initial field.
pub fn minimize_from(
    mut field: ComplexField2D,
    opts: MinimizeOpts,
    seed: Option<u64>,
) -> Result<MinimizeResult> {
    field.check_finite()?;
    field.normalize();
    let mut energy = energy_unchecked(&field);
    let mut precon = Preconditioner::new(&field.grid, field.omega);
    let mut tau = opts.tau;
    let mut consecutive = 0usize;
    let mut iterations = 0usize;
    let mut converged = false;

    let mut candidate = field.clone();
    while iterations < opts.max_iters {
        iterations += 1;
        let mut grad = gradient_unchecked(&field);
        // Project out the norm direction: the sphere constraint makes the
        // radial component (2 mu psi) irrelevant and it otherwise dominates.
        let mut along = 0.0;
        for i in 0..field.grid.n_r {
            let w = field.grid.weight(i);
            for j in 0..field.grid.n_theta {
                let k = field.grid.index(i, j);
                along += w * (field.values[k].conj() * grad[k]).re;
            }
        }
        for k in 0..grad.len() {
            grad[k] -= along * field.values[k];
        }
        // Interaction curvature scale for the preconditioner diagonal.
        let c_int = 4.0 * field.density_max() / (field.epsilon * field.epsilon);
        let mut accepted = false;
        for _ in 0..60 {
            precon.apply_into(&grad, tau, c_int, &mut candidate.values);
            let n = candidate.values.len();
            for k in 0..n {
                candidate.values[k] = field.values[k] - tau * candidate.values[k];
            }
            candidate.normalize();
            let cand_energy = energy_unchecked(&candidate);
            if cand_energy.total <= energy.total {
                let rel = (energy.total - cand_energy.total).abs() / (cand_energy.total.abs() + 1.0);
                std::mem::swap(&mut field, &mut candidate);
                energy = cand_energy;
                consecutive = if rel < opts.tol { consecutive + 1 } else { 0 };
                tau = (tau * 1.25).min(opts.tau_max);
                accepted = true;
                break;
            }
            tau *= 0.5;
            if tau < 1e-18 {
                break;
            }
        }
        if !accepted {
            // No descent direction at floating precision: stationary.
            converged = true;
            break;
        }
        if consecutive >= 5 {
            converged = true;
            break;
        }
    }

    Ok(MinimizeResult {
        energy,
        iterations,
        converged,
        seed,
        field,
    })
}

/// Per-azimuthal-mode resolvent of the stiff quadratic part.
struct Preconditioner {
    n_r: usize,
    n_theta: usize,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
    /// The exact radial quadratic-form operator (2/w) D^T W D as five bands,
    /// band k holding entries A[i, i + k - 2]. Pentadiagonal because the
    /// centered first difference couples next-nearest rings.
    rad_bands: [Vec<f64>; 5],
    /// Exact azimuthal curvature 2 (sin(m dtheta)/dtheta / r - Omega r / 2)^2,
    /// flattened [m * n_r + i].
    theta_sym: Vec<f64>,
    scratch_fft: Vec<Complex64>,
    buf: Vec<Complex64>,
    col_re: Vec<f64>,
    col_im: Vec<f64>,
    bands_work: [Vec<f64>; 5],
    band_scratch: Vec<f64>,
}

impl Preconditioner {
    fn new(grid: &PolarGrid, omega: f64) -> Self {
        let (n_r, n_t) = (grid.n_r, grid.n_theta);
        let dr = grid.dr;
        let dth = grid.dtheta;
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(n_t);
        let fft_inv = planner.plan_fft_inverse(n_t);

        // Radial link Laplacian T = D^T W D, scaled to the weighted metric by
        // 2 / w_i; tridiagonal, stored with empty outer bands.
        let mut rad_bands = [
            vec![0.0; n_r],
            vec![0.0; n_r],
            vec![0.0; n_r],
            vec![0.0; n_r],
            vec![0.0; n_r],
        ];
        for i in 0..n_r {
            let w_i = grid.weight(i);
            let link_dn = if i > 0 { i as f64 * dr * dr * dth / (dr * dr) } else { 0.0 };
            let link_up = if i + 1 < n_r {
                (i + 1) as f64 * dr * dr * dth / (dr * dr)
            } else {
                0.0
            };
            rad_bands[2][i] = 2.0 * (link_dn + link_up) / w_i;
            if i > 0 {
                rad_bands[1][i] = -2.0 * link_dn / w_i;
            }
            if i + 1 < n_r {
                rad_bands[3][i] = -2.0 * link_up / w_i;
            }
        }

        let mut theta_sym = vec![0.0; n_t * n_r];
        for m in 0..n_t {
            let m_signed = if m <= n_t / 2 { m as f64 } else { m as f64 - n_t as f64 };
            let half = 0.5 * m_signed * dth;
            for i in 0..n_r {
                let r = grid.radius(i);
                let v = 2.0 * half.sin() / (r * dth) - 0.5 * omega * r * half.cos();
                theta_sym[m * n_r + i] = 2.0 * v * v;
            }
        }

        let scratch_len = fft_fwd
            .get_inplace_scratch_len()
            .max(fft_inv.get_inplace_scratch_len());
        Preconditioner {
            n_r,
            n_theta: n_t,
            fft_fwd,
            fft_inv,
            rad_bands,
            theta_sym,
            scratch_fft: vec![Complex64::new(0.0, 0.0); scratch_len],
            buf: vec![Complex64::new(0.0, 0.0); n_r * n_t],
            col_re: vec![0.0; n_r],
            col_im: vec![0.0; n_r],
            bands_work: [
                vec![0.0; n_r],
                vec![0.0; n_r],
                vec![0.0; n_r],
                vec![0.0; n_r],
                vec![0.0; n_r],
            ],
            band_scratch: Vec::new(),
        }
    }

    /// out = (I + tau (L + c_int))^-1 g
    fn apply_into(&mut self, g: &[Complex64], tau: f64, c_int: f64, out: &mut Vec<Complex64>) {
        let (n_r, n_t) = (self.n_r, self.n_theta);
        self.buf.copy_from_slice(g);
        for i in 0..n_r {
            self.fft_fwd
                .process_with_scratch(&mut self.buf[i * n_t..(i + 1) * n_t], &mut self.scratch_fft);
        }
        for m in 0..n_t {
            for i in 0..n_r {
                let v = self.buf[i * n_t + m];
                self.col_re[i] = v.re;
                self.col_im[i] = v.im;
                for k in 0..5 {
                    self.bands_work[k][i] = tau * self.rad_bands[k][i];
                }
                self.bands_work[2][i] += 1.0 + tau * (self.theta_sym[m * n_r + i] + c_int);
            }
            solve_banded5_pair(
                &self.bands_work,
                &mut self.col_re,
                &mut self.col_im,
                &mut self.band_scratch,
            );
            for i in 0..n_r {
                self.buf[i * n_t + m] = Complex64::new(self.col_re[i], self.col_im[i]);
            }
        }
        let scale = 1.0 / n_t as f64;
        for i in 0..n_r {
            self.fft_inv
                .process_with_scratch(&mut self.buf[i * n_t..(i + 1) * n_t], &mut self.scratch_fft);
        }
        out.clear();
        out.extend(self.buf.iter().map(|v| v * scale));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PolarGrid;

    fn grid(nr: usize, nt: usize) -> PolarGrid {
        PolarGrid::new(nr, nt).unwrap()
    }

    fn random_field(grid: PolarGrid, epsilon: f64, omega: f64, seed: u64) -> ComplexField2D {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<Complex64> = (0..grid.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let mut f = ComplexField2D {
            grid,
            values,
            epsilon,
            omega,
        };
        f.normalize();
        f
    }

    #[test]
    fn constant_field_energy_is_interaction_only() {
        for omega in [0.0, 3.0, 25.0, 100.0] {
            let f = ComplexField2D::constant(grid(64, 128), 0.1, omega).unwrap();
            let e = gp_energy(&f).unwrap();
            let expected = 100.0 / std::f64::consts::PI;
            assert!(
                (e.total - expected).abs() < 1e-10,
                "omega={omega}: {} vs {expected}",
                e.total
            );
            assert!(
                (e.kinetic_covariant + e.centrifugal).abs() < 1e-10,
                "cancellation failed at omega={omega}"
            );
        }
    }

    #[test]
    fn single_vortex_azimuthal_term_matches_radial_reduction() {
        // psi = F(r) e^{i theta}: the 2D azimuthal kinetic term must equal the
        // 1D sum over rings with the discrete symbol sin(dtheta)/dtheta.
        let g = grid(96, 192);
        let eps = 0.1;
        let om = 4.0;
        let f = ComplexField2D::from_fn(g.clone(), eps, om, |x, y| {
            let r = (x * x + y * y).sqrt();
            let amp = r / (r * r + 0.01).sqrt();
            Complex64::from_polar(amp, y.atan2(x))
        })
        .unwrap();
        let e = gp_energy(&f).unwrap();

        // independent radial reduction with the link stencils
        let half = 0.5 * g.dtheta;
        let mut azimuthal = 0.0;
        let mut radial = 0.0;
        for i in 0..g.n_r {
            let r = g.radius(i);
            let amp = f.value(i, 0).norm();
            let w = g.weight(i) * g.n_theta as f64;
            let sym = 2.0 * half.sin() / (g.dtheta * r) - 0.5 * om * r * half.cos();
            azimuthal += w * amp * amp * sym * sym;
            if i + 1 < g.n_r {
                let d = (f.value(i + 1, 0).norm() - amp) / g.dr;
                let w_link = (i + 1) as f64 * g.dr * g.dr * g.dtheta * g.n_theta as f64;
                radial += w_link * d * d;
            }
        }
        let expected = azimuthal + radial;
        assert!(
            ((e.kinetic_covariant - expected) / expected).abs() < 1e-9,
            "{} vs {expected}",
            e.kinetic_covariant
        );

        // and the continuum target 2 pi ∫ F^2 (1/r - Omega r/2)^2 r dr on a
        // fine grid is approached at the discretization level
        let cont: f64 = crate::numerics::integrate_gl(
            |r: f64| {
                let amp2 = r * r / (r * r + 0.01);
                amp2 * (1.0 / r - 0.5 * om * r).powi(2) * 2.0 * std::f64::consts::PI * r
            },
            0.0,
            1.0,
            256,
            10,
        );
        let norm: f64 = crate::numerics::integrate_gl(
            |r: f64| (r * r / (r * r + 0.01)) * 2.0 * std::f64::consts::PI * r,
            0.0,
            1.0,
            256,
            10,
        );
        assert!(
            (azimuthal - cont / norm).abs() / (cont / norm) < 0.02,
            "azimuthal {} vs continuum {}",
            azimuthal,
            cont / norm
        );
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = grid(24, 48);
        let f = random_field(g.clone(), 0.2, 3.0, 7);
        let grad = gp_gradient(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-5;
        for _ in 0..10 {
            let delta: Vec<Complex64> = (0..f.values.len())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let mut plus = f.clone();
            let mut minus = f.clone();
            for k in 0..delta.len() {
                plus.values[k] += h * delta[k];
                minus.values[k] -= h * delta[k];
            }
            let fd = (energy_unchecked(&plus).total - energy_unchecked(&minus).total) / (2.0 * h);
            let mut analytic = 0.0;
            for i in 0..g.n_r {
                let w = g.weight(i);
                for j in 0..g.n_theta {
                    let k = g.index(i, j);
                    analytic += w * (grad[k].conj() * delta[k]).re;
                }
            }
            assert!(
                (fd - analytic).abs() <= 1e-4 * analytic.abs().max(1e-3),
                "fd {fd} vs analytic {analytic}"
            );
        }
    }

    #[test]
    fn constant_is_exact_minimizer_at_rest() {
        let res = minimize_gp(
            grid(48, 96),
            0.1,
            0.0,
            InitState::Constant,
            MinimizeOpts::default(),
        )
        .unwrap();
        assert!(res.converged);
        assert!(res.iterations <= 10, "took {} iterations", res.iterations);
        assert!((res.energy.total - 100.0 / std::f64::consts::PI).abs() < 1e-8);
    }

    #[test]
    fn residual_of_constant_field() {
        let f = ComplexField2D::constant(grid(48, 96), 0.1, 0.0).unwrap();
        let r = gp_residual(&f).unwrap();
        assert!((r.mu - 200.0 / std::f64::consts::PI).abs() < 1e-9);
        assert!(r.residual_norm < 1e-10);
    }

    #[test]
    fn residual_decays_with_tolerance_and_random_fields_are_far() {
        let g = grid(48, 96);
        let run = |tol: f64| {
            minimize_from(
                initial_field(g.clone(), 0.15, 2.0, InitState::TfPhaseNoise { seed: 3 }).unwrap(),
                MinimizeOpts {
                    tol,
                    max_iters: 40_000,
                    ..MinimizeOpts::default()
                },
                Some(3),
            )
            .unwrap()
        };
        let res = run(1e-10);
        assert!(res.converged);
        let r = gp_residual(&res.field).unwrap();
        assert!(
            r.residual_norm < 10.0 * 1e-10_f64.sqrt() * r.mu.abs(),
            "residual {} vs mu {}",
            r.residual_norm,
            r.mu
        );
        let loose = run(1e-6);
        let r_loose = gp_residual(&loose.field).unwrap();
        assert!(r_loose.residual_norm > r.residual_norm);

        let noise = random_field(g, 0.15, 2.0, 99);
        let r_noise = gp_residual(&noise).unwrap();
        assert!(r_noise.residual_norm > 1e2 * r.residual_norm.max(1e-12));
    }

    #[test]
    fn energy_never_increases_along_the_flow() {
        // instrumented run: re-minimize step by step and track energies
        let g = grid(32, 64);
        let mut field = initial_field(g, 0.2, 8.0, InitState::TfPhaseNoise { seed: 21 }).unwrap();
        let mut last = gp_energy(&field).unwrap().total;
        for _ in 0..40 {
            let res = minimize_from(
                field.clone(),
                MinimizeOpts {
                    max_iters: 1,
                    tol: 1e-16,
                    ..MinimizeOpts::default()
                },
                None,
            )
            .unwrap();
            assert!(res.energy.total <= last + 1e-12 * last.abs());
            last = res.energy.total;
            field = res.field;
        }
    }

    #[test]
    fn tf_energy_is_a_lower_bound() {
        let g = grid(64, 128);
        let (eps, om) = (0.15, 8.0);
        let res = minimize_gp(
            g,
            eps,
            om,
            InitState::TfPhaseNoise { seed: 5 },
            MinimizeOpts {
                tol: 1e-10,
                max_iters: 60_000,
                ..MinimizeOpts::default()
            },
        )
        .unwrap();
        let tf = tf2d_flat(eps, om).unwrap();
        assert!(
            res.energy.total >= tf.energy,
            "GP {} below TF {}",
            res.energy.total,
            tf.energy
        );
    }

    #[test]
    fn diamagnetic_holds_for_random_and_real_fields() {
        for omega in [1.0, 10.0, 100.0] {
            for seed in 0..20 {
                let f = random_field(grid(32, 64), 0.1, omega, seed);
                let d = diamagnetic_check(&f);
                assert!(d.holds, "violated at omega={omega} seed={seed}");
            }
        }
        // real positive field: the cross term vanishes on every link, so
        // lhs - rhs equals the vector-potential energy on link midpoints
        // (which approximates ∫ A^2 psi^2)
        let g = grid(48, 96);
        let f = ComplexField2D::from_fn(g.clone(), 0.1, 6.0, |x, y| {
            Complex64::new(1.0 + 0.3 * x + 0.2 * y * y, 0.0)
        })
        .unwrap();
        let d = diamagnetic_check(&f);
        let mut a2_link = 0.0;
        let mut a2_node = 0.0;
        for i in 0..g.n_r {
            let r = g.radius(i);
            let w = g.weight(i);
            let a = 0.5 * 6.0 * r;
            for j in 0..g.n_theta {
                let jp = if j + 1 == g.n_theta { 0 } else { j + 1 };
                let mid = 0.5 * (f.value(i, j).re + f.value(i, jp).re);
                a2_link += w * a * a * mid * mid;
                a2_node += w * a * a * f.value(i, j).norm_sqr();
            }
        }
        assert!((d.lhs - d.rhs - a2_link).abs() < 1e-10 * d.lhs.abs());
        assert!((d.lhs - d.rhs - a2_node).abs() < 1e-3 * a2_node);
    }
}
