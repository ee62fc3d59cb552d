//! Sweep orchestration over an epsilon x omega grid: deterministic seeds per
//! point, optional worker threads with a single in-order writer, incremental
//! (crash-safe) CSV append, and per-point error records that never abort the
//! sweep.

use std::io::Write;
use std::path::Path;
use std::sync::mpsc;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::commands;
use crate::config::{FormatCfg, RunConfig};
use crate::output::{write_csv_header, write_csv_record, Record, Value};
use crate::{debug_log, warn_log, CliError};

/// Fixed column schema per sweep command, stable even when points fail.
pub fn sweep_columns(command: &str) -> Vec<String> {
    let mut cols: Vec<&str> = vec!["status", "epsilon", "omega"];
    match command {
        "gp" => cols.extend([
            "n_r",
            "n_theta",
            "energy_total",
            "kinetic_covariant",
            "centrifugal",
            "interaction",
            "energy_tf",
            "mu",
            "residual",
            "iterations",
            "converged",
            "vortex_count",
            "total_winding",
            "diamagnetic_ok",
            "seed",
        ]),
        "tf2d" => cols.extend(["mu", "energy", "hole_radius", "omega_hole", "support"]),
        "lattice" => cols.extend([
            "points",
            "cell_area",
            "spacing",
            "core_radius",
            "energy_trial",
            "energy_tf",
            "excess",
            "cell_energy",
        ]),
        "giant" => cols.extend([
            "winding",
            "energy_trial",
            "energy_tf",
            "excess",
            "hole_radius",
        ]),
        "asympt" => cols.extend([
            "regime",
            "subleading",
            "omega_first",
            "omega_hole",
            "omega_giant",
            "finite_count",
        ]),
        _ => {}
    }
    cols.push("error");
    cols.into_iter().map(String::from).collect()
}

fn run_point(
    command: &str,
    cfg: &RunConfig,
    eps: f64,
    omega: f64,
    seed: u64,
) -> Result<Record, CliError> {
    match command {
        "gp" => {
            let grid = cfg.grid.unwrap_or_default();
            let solver = cfg.solver.unwrap_or_default();
            let (rec, _) = commands::gp_point(eps, omega, &grid, &solver, seed)?;
            Ok(rec)
        }
        "tf2d" => commands::tf2d_record(eps, omega),
        "lattice" => commands::lattice_record(cfg, eps, omega).map(|(r, _)| r),
        "giant" => commands::giant_record(cfg, eps, omega),
        "asympt" => commands::asympt_record(eps, omega),
        other => Err(CliError::Config(vec![format!(
            "sweep command \"{other}\" unsupported"
        )])),
    }
}

fn decorate(status: &str, eps: f64, omega: f64, body: Option<Record>, error: &str) -> Record {
    let mut rec = Record::new().text("status", status);
    match body {
        Some(inner) => {
            rec.fields.extend(inner.fields);
        }
        None => {
            rec = rec.float("epsilon", eps).float("omega", omega);
        }
    }
    rec.fields.push(("error".to_string(), Value::Text(error.to_string())));
    rec
}

pub struct SweepOutcome {
    pub records: Vec<Record>,
    pub columns: Vec<String>,
    /// True when every point produced a converged, error-free record.
    pub clean: bool,
}

/// Runs the sweep described by `cfg.sweep`, writing records incrementally to
/// `<dir>/results.csv` (or buffering JSON lines) in sweep-grid order.
/// Points may execute on up to `jobs` worker threads; the writer keeps
/// grid order regardless, so outputs are byte-identical for a fixed seed.
pub fn run_sweep(
    cfg: &RunConfig,
    base_seed: u64,
    jobs: usize,
    out_dir: Option<&Path>,
) -> Result<SweepOutcome, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config(vec!["missing \"sweep\" block in the config".into()]))?;
    let command = sweep.command.clone();
    let columns = sweep_columns(&command);
    let format = cfg.output.clone().unwrap_or_default().format;

    let points: Vec<(usize, f64, f64)> = sweep
        .epsilon
        .iter()
        .flat_map(|&e| sweep.omega.iter().map(move |&o| (e, o)))
        .enumerate()
        .map(|(k, (e, o))| (k, e, o))
        .collect();

    let mut writer: Option<Box<dyn Write>> = match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
            let name = match format {
                FormatCfg::Csv => "results.csv",
                FormatCfg::Json => "results.jsonl",
            };
            let file = std::fs::File::create(dir.join(name))
                .map_err(|e| CliError::Io(e.to_string()))?;
            Some(Box::new(file))
        }
        None => None,
    };
    if let (Some(w), FormatCfg::Csv) = (writer.as_mut(), format) {
        write_csv_header(w, &columns)?;
        w.flush()?;
    }

    let jobs = jobs.max(1).min(points.len().max(1));
    let (tx, rx) = mpsc::channel::<(usize, Record, bool)>();
    let next = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            let tx = tx.clone();
            let points = &points;
            let cfg_ref = cfg;
            let cmd = command.as_str();
            let next = &next;
            scope.spawn(move || {
                loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= points.len() {
                        break;
                    }
                    let (idx, eps, omega) = points[k];
                    let seed = base_seed.wrapping_add(idx as u64);
                    let (rec, ok) = match run_point(cmd, cfg_ref, eps, omega, seed) {
                        Ok(body) => {
                            let converged = body
                                .get("converged")
                                .map(|v| matches!(v, Value::Bool(true)))
                                .unwrap_or(true);
                            (decorate("ok", eps, omega, Some(body), ""), converged)
                        }
                        Err(e) => {
                            let msg = match e {
                                CliError::Config(list) => list.join("; "),
                                CliError::Solver(m) | CliError::Io(m) => m,
                            };
                            warn_log!("point (eps {eps}, omega {omega}) failed: {msg}");
                            (decorate("error", eps, omega, None, &msg), false)
                        }
                    };
                    if tx.send((idx, rec, ok)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        // single writer, strictly in sweep-grid order
        let mut pending: std::collections::BTreeMap<usize, (Record, bool)> =
            std::collections::BTreeMap::new();
        let mut next_write = 0usize;
        let mut records = Vec::with_capacity(points.len());
        let mut clean = true;
        for (idx, rec, ok) in rx {
            pending.insert(idx, (rec, ok));
            while let Some((rec, ok)) = pending.remove(&next_write) {
                if let Some(w) = writer.as_mut() {
                    match format {
                        FormatCfg::Csv => {
                            write_csv_record(w, &columns, &rec)?;
                        }
                        FormatCfg::Json => {
                            let map: std::collections::BTreeMap<String, serde_json::Value> = rec
                                .fields
                                .iter()
                                .map(|(k, v)| (k.clone(), to_json(v)))
                                .collect();
                            writeln!(
                                w,
                                "{}",
                                serde_json::to_string(&map)
                                    .map_err(|e| CliError::Io(e.to_string()))?
                            )?;
                        }
                    }
                    w.flush()?;
                }
                clean &= ok;
                debug_log!("wrote sweep record {next_write}");
                records.push(rec);
                next_write += 1;
            }
        }
        Ok::<_, CliError>(SweepOutcome {
            records,
            columns,
            clean,
        })
    })
}

fn to_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Float(x) if x.is_finite() => {
            serde_json::from_str(&crate::output::format_float(*x)).unwrap_or(serde_json::Value::Null)
        }
        Value::Float(_) => serde_json::Value::Null,
        Value::Int(i) => serde_json::Value::from(*i),
        Value::Text(s) => serde_json::Value::from(s.as_str()),
        Value::Bool(b) => serde_json::Value::from(*b),
    }
}
