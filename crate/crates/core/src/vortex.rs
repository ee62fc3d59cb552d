//! Vortex detection from the phase winding of the order parameter around
//! grid plaquettes, plus the discrete Stokes bookkeeping used to cross-check
//! total winding against boundary loops.
//!
//! Plaquettes whose corners all carry density above the floor report their
//! winding directly. A resolved vortex core dips below the floor around its
//! singular plaquette, so below-floor nodes are grouped into connected
//! components and each component reports the total winding of the plaquettes
//! it touches; components reaching the trap wall (noise-dominated boundary
//! layer, or the annular hole) are excluded.

use crate::error::{require, Result};
use crate::field::ComplexField2D;
use crate::numerics::wrap_phase;

/// One detected phase singularity (or tight same-sign cluster).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vortex {
    pub x: f64,
    pub y: f64,
    pub winding: i64,
}

/// All vortices found in the census region.
#[derive(Debug, Clone, PartialEq)]
pub struct VortexCensus {
    pub vortices: Vec<Vortex>,
    pub total_winding: i64,
}

impl VortexCensus {
    /// Vortices whose center lies within the given radius.
    pub fn within_radius(&self, r_max: f64) -> Vec<Vortex> {
        self.vortices
            .iter()
            .copied()
            .filter(|v| (v.x * v.x + v.y * v.y).sqrt() <= r_max)
            .collect()
    }

    /// Number of positive detections within the given radius.
    pub fn count_within(&self, r_max: f64) -> usize {
        self.within_radius(r_max)
            .iter()
            .filter(|v| v.winding > 0)
            .count()
    }
}

/// Winding number of the phase along ring `i` (counterclockwise), an exact
/// integer for any nonvanishing field.
pub fn loop_winding(field: &ComplexField2D, ring: usize) -> i64 {
    let g = &field.grid;
    let mut acc = 0.0;
    for j in 0..g.n_theta {
        let jp = if j + 1 == g.n_theta { 0 } else { j + 1 };
        acc += wrap_phase(field.phase(ring, jp) - field.phase(ring, j));
    }
    (acc / (2.0 * std::f64::consts::PI)).round() as i64
}

/// Sum of plaquette windings with centers in the annulus [r_in, r_out],
/// including the central disc when r_in = 0. By the discrete Stokes identity
/// this telescopes to the difference of boundary loop windings.
pub fn annulus_winding(field: &ComplexField2D, r_in: f64, r_out: f64) -> i64 {
    let g = &field.grid;
    let mut total = 0i64;
    if r_in <= 0.0 {
        total += loop_winding(field, 0);
    }
    for i in 0..g.n_r - 1 {
        let rc = 0.5 * (g.radius(i) + g.radius(i + 1));
        if rc < r_in || rc > r_out {
            continue;
        }
        for j in 0..g.n_theta {
            total += plaquette_winding(field, i, j);
        }
    }
    total
}

/// Counterclockwise phase winding of the plaquette between rings i, i+1 and
/// angles j, j+1.
fn plaquette_winding(field: &ComplexField2D, i: usize, j: usize) -> i64 {
    let g = &field.grid;
    let jp = if j + 1 == g.n_theta { 0 } else { j + 1 };
    let p00 = field.phase(i, j);
    let p10 = field.phase(i + 1, j);
    let p11 = field.phase(i + 1, jp);
    let p01 = field.phase(i, jp);
    let acc = wrap_phase(p10 - p00)
        + wrap_phase(p11 - p10)
        + wrap_phase(p01 - p11)
        + wrap_phase(p00 - p01);
    (acc / (2.0 * std::f64::consts::PI)).round() as i64
}

struct Components {
    label: Vec<u32>,
    count: usize,
}

/// 4-neighbor connected components of below-floor nodes, periodic in theta.
fn label_components(low: &[bool], n_r: usize, n_t: usize) -> Components {
    const NONE: u32 = u32::MAX;
    let mut label = vec![NONE; low.len()];
    let mut count = 0usize;
    let mut stack = Vec::new();
    for start in 0..low.len() {
        if !low[start] || label[start] != NONE {
            continue;
        }
        let id = count as u32;
        count += 1;
        stack.push(start);
        label[start] = id;
        while let Some(k) = stack.pop() {
            let (i, j) = (k / n_t, k % n_t);
            let mut push = |ni: usize, nj: usize| {
                let nk = ni * n_t + nj;
                if low[nk] && label[nk] == NONE {
                    label[nk] = id;
                    stack.push(nk);
                }
            };
            if i > 0 {
                push(i - 1, j);
            }
            if i + 1 < n_r {
                push(i + 1, j);
            }
            push(i, if j == 0 { n_t - 1 } else { j - 1 });
            push(i, if j + 1 == n_t { 0 } else { j + 1 });
        }
    }
    Components { label, count }
}

#[derive(Default, Clone)]
struct CompAccum {
    winding: i64,
    sum_x: f64,
    sum_y: f64,
    nodes: usize,
    touches_wall: bool,
    touches_center: bool,
}

/// Detects vortices from plaquette phase windings. `density_floor` is the
/// fraction of the peak density below which a node counts as inside a core
/// (or inside noise-dominated territory). Nearby same-sign detections within
/// one grid cell are merged.
pub fn detect_vortices(field: &ComplexField2D, density_floor: f64) -> Result<VortexCensus> {
    require(
        density_floor > 0.0 && density_floor < 1.0,
        "density floor must lie in (0, 1)",
    )?;
    let g = &field.grid;
    let (n_r, n_t) = (g.n_r, g.n_theta);
    let floor = density_floor * field.density_max();

    let low: Vec<bool> = field.values.iter().map(|v| v.norm_sqr() <= floor).collect();
    let comps = label_components(&low, n_r, n_t);
    let mut accum = vec![CompAccum::default(); comps.count];
    for i in 0..n_r {
        for j in 0..n_t {
            let k = i * n_t + j;
            if !low[k] {
                continue;
            }
            let a = &mut accum[comps.label[k] as usize];
            let (x, y) = g.node_xy(i, j);
            a.sum_x += x;
            a.sum_y += y;
            a.nodes += 1;
            a.touches_wall |= i == n_r - 1;
            a.touches_center |= i == 0;
        }
    }

    let mut raw: Vec<Vortex> = Vec::new();

    // central disc below the innermost ring
    if (0..n_t).all(|j| !low[j]) {
        let w = loop_winding(field, 0);
        if w != 0 {
            raw.push(Vortex { x: 0.0, y: 0.0, winding: w });
        }
    } else {
        // the center belongs to a low component; its loop winding seeds it
        let id = comps.label[(0..n_t).find(|&j| low[j]).unwrap()] as usize;
        accum[id].winding += loop_winding(field, 0);
    }

    for i in 0..n_r - 1 {
        for j in 0..n_t {
            let w = plaquette_winding(field, i, j);
            if w == 0 {
                continue;
            }
            let jp = if j + 1 == n_t { 0 } else { j + 1 };
            let corners = [i * n_t + j, i * n_t + jp, (i + 1) * n_t + j, (i + 1) * n_t + jp];
            match corners.iter().find(|&&k| low[k]) {
                None => {
                    // tight singularity in dense territory
                    let rc = 0.5 * (g.radius(i) + g.radius(i + 1));
                    let tc = g.theta(j) + 0.5 * g.dtheta;
                    raw.push(Vortex {
                        x: rc * tc.cos(),
                        y: rc * tc.sin(),
                        winding: w,
                    });
                }
                Some(&k) => {
                    accum[comps.label[k] as usize].winding += w;
                }
            }
        }
    }

    // resolved cores: small low-density components away from the wall
    let area_cap = (n_r * n_t) / 10;
    for a in &accum {
        if a.winding == 0 || a.touches_wall || a.nodes > area_cap {
            continue;
        }
        let (x, y) = if a.touches_center && a.nodes <= 4 * n_t {
            (0.0, 0.0)
        } else {
            (a.sum_x / a.nodes as f64, a.sum_y / a.nodes as f64)
        };
        raw.push(Vortex { x, y, winding: a.winding });
    }

    // merge same-sign detections within roughly one grid cell
    let merge_dist = g.dr.max(g.dtheta);
    let mut merged: Vec<Vortex> = Vec::new();
    for v in raw {
        if let Some(m) = merged.iter_mut().find(|m| {
            m.winding.signum() == v.winding.signum()
                && ((m.x - v.x).powi(2) + (m.y - v.y).powi(2)).sqrt() < merge_dist
        }) {
            m.winding += v.winding;
            m.x = 0.5 * (m.x + v.x);
            m.y = 0.5 * (m.y + v.y);
        } else {
            merged.push(v);
        }
    }

    let total_winding = merged.iter().map(|v| v.winding).sum();
    Ok(VortexCensus {
        vortices: merged,
        total_winding,
    })
}
