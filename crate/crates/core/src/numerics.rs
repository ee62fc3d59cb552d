//! Small numerical building blocks: Gauss-Legendre panels, bracketed
//! root finding, tridiagonal solves and least-squares lines.

use crate::error::{CoreError, Result};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence. Deterministic for a given order.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 2);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..(n + 1) / 2 {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p_{j}(x) via the three-term recurrence, p' from the standard identity.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature of `f` over [a, b] split into `panels`
/// equal panels of the given `order`.
pub fn integrate_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// Like [`integrate_gl`] but with panels spaced geometrically between a and b
/// (a, b > 0). Suited to integrands such as 1/r that vary over decades.
pub fn integrate_gl_log(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> f64 {
    assert!(a > 0.0 && b > a);
    let (nodes, weights) = gauss_legendre(order);
    let ratio = (b / a).powf(1.0 / panels as f64);
    let mut total = 0.0;
    let mut lo = a;
    for _ in 0..panels {
        let hi = lo * ratio;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
        lo = hi;
    }
    total
}

/// Bisection for the root of a monotone increasing `f` on [lo, hi], refined by
/// safeguarded secant steps. Converges to a relative bracket width `rel_tol`.
pub fn bisect_increasing(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo > 0.0 || fhi < 0.0 {
        return Err(CoreError::Solver(format!(
            "root not bracketed: f({lo:e}) = {flo:e}, f({hi:e}) = {fhi:e}"
        )));
    }
    for _ in 0..max_iter {
        let scale = lo.abs().max(hi.abs()).max(1e-300);
        if (hi - lo) <= rel_tol * scale {
            break;
        }
        // Secant proposal, clipped well inside the bracket; fall back to midpoint.
        let mut x = if (fhi - flo).abs() > 0.0 {
            lo - flo * (hi - lo) / (fhi - flo)
        } else {
            0.5 * (lo + hi)
        };
        let width = hi - lo;
        if !(x > lo + 0.05 * width && x < hi - 0.05 * width) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx < 0.0 {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Least-squares straight line y = slope * x + intercept.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Banded Gaussian elimination (bandwidth 2, no pivoting) for one real matrix
/// and two real right-hand sides. Bands are indexed band[k][i] = A[i, i+k-2]
/// for k = 0..5; out-of-range entries are ignored. The matrices solved here
/// are resolvents I + tau * (positive operator), safely dominant.
pub fn solve_banded5_pair(
    bands: &[Vec<f64>; 5],
    rhs_re: &mut [f64],
    rhs_im: &mut [f64],
    work: &mut Vec<f64>,
) {
    let n = rhs_re.len();
    work.clear();
    work.resize(5 * n, 0.0);
    // working copy, row-major bands
    for k in 0..5 {
        for i in 0..n {
            work[5 * i + k] = bands[k][i];
        }
    }
    // forward elimination of the two subdiagonals
    for i in 0..n {
        let piv = work[5 * i + 2];
        let inv = 1.0 / piv;
        for below in 1..=2usize.min(n - 1 - i) {
            let r = i + below;
            // entry A[r, i] sits in band index 2 - below
            let factor = work[5 * r + 2 - below] * inv;
            if factor == 0.0 {
                continue;
            }
            work[5 * r + 2 - below] = 0.0;
            // A[r, i+1] -= factor * A[i, i+1]; A[r, i+2] -= factor * A[i, i+2]
            for ahead in 1..=2usize.min(n - 1 - i) {
                let col = i + ahead;
                let src = work[5 * i + 2 + ahead];
                if src != 0.0 {
                    let dst = 2 + col as i64 - r as i64;
                    work[5 * r + dst as usize] -= factor * src;
                }
            }
            rhs_re[r] -= factor * rhs_re[i];
            rhs_im[r] -= factor * rhs_im[i];
        }
    }
    // back substitution
    for i in (0..n).rev() {
        let mut acc_re = rhs_re[i];
        let mut acc_im = rhs_im[i];
        for ahead in 1..=2usize.min(n - 1 - i) {
            let coef = work[5 * i + 2 + ahead];
            if coef != 0.0 {
                acc_re -= coef * rhs_re[i + ahead];
                acc_im -= coef * rhs_im[i + ahead];
            }
        }
        let inv = 1.0 / work[5 * i + 2];
        rhs_re[i] = acc_re * inv;
        rhs_im[i] = acc_im * inv;
    }
}

/// C1 compactly supported smoothing of the positive part: equal to t above
/// eta, a parabola on |t| < eta, zero below -eta. Used to regularize
/// square-rooted TF densities across their free boundary.
pub(crate) fn smooth_plus(t: f64, eta: f64) -> f64 {
    if t >= eta {
        t
    } else if t <= -eta {
        0.0
    } else {
        (t + eta) * (t + eta) / (4.0 * eta)
    }
}

pub(crate) fn smooth_plus_prime(t: f64, eta: f64) -> f64 {
    if t >= eta {
        1.0
    } else if t <= -eta {
        0.0
    } else {
        (t + eta) / (2.0 * eta)
    }
}

/// Wrap an angle difference into (-pi, pi].
pub fn wrap_phase(d: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut x = d % two_pi;
    if x <= -std::f64::consts::PI {
        x += two_pi;
    } else if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}
