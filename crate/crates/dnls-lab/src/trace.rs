//! On-disk layout for evolution traces.
//!
//! A trace directory is the deterministic, human-inspectable record of one
//! evolution run:
//!
//! ```text
//! <dir>/
//!   meta.json      — configuration, parameters, grid, worst drift
//!   reports.csv    — one functional-report row per recorded time
//!   t_0.csv        — field snapshot at the first recorded time (t = 0)
//!   t_1.csv        — … one field-csv file per snapshot, indexed in order
//! ```
//!
//! Snapshot files use the field-csv format of [`crate::fieldcsv`], so any
//! snapshot can be fed back into the tool as initial data.  All floats are
//! rendered with 17 significant digits; writing the same trace twice produces
//! byte-identical files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolve::{EvolutionConfig, EvolutionTrace};
use crate::fieldcsv::{fmt_float, write_field};
use crate::jsonio::{Json, ObjBuilder};
use crate::params::Params;

/// Column order of `reports.csv`; the first column is the snapshot time.
pub const REPORT_COLUMNS: &str =
    "t,mass,momentum,energy,action,nehari,quadratic_part,nonlinear_part,positive_part";

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes a trace directory: `meta.json`, `reports.csv` and one
/// `t_<index>.csv` snapshot file per recorded time.
///
/// The directory is created if missing; existing files of the same names are
/// overwritten, so re-running a deterministic configuration reproduces the
/// directory byte for byte.
pub fn write_trace(
    dir: &Path,
    trace: &EvolutionTrace,
    config: &EvolutionConfig,
    params: Params,
) -> Result<()> {
    if trace.snapshots.is_empty() {
        return Err(Error::InvalidField {
            reason: "trace contains no snapshots".into(),
        });
    }
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;

    let meta_path = dir.join("meta.json");
    let mut meta = meta_json(trace, config, params).render();
    meta.push('\n');
    fs::write(&meta_path, meta).map_err(|e| io_error(&meta_path, e))?;

    let reports_path = dir.join("reports.csv");
    fs::write(&reports_path, reports_csv(trace)).map_err(|e| io_error(&reports_path, e))?;

    for (index, snapshot) in trace.snapshots.iter().enumerate() {
        write_field(&dir.join(format!("t_{index}.csv")), snapshot)?;
    }
    Ok(())
}

/// The `meta.json` document for a trace.
fn meta_json(trace: &EvolutionTrace, config: &EvolutionConfig, params: Params) -> Json {
    let grid = &trace.snapshots[0].grid;
    ObjBuilder::new()
        .field(
            "config",
            ObjBuilder::new()
                .field("t_end", config.t_end)
                .field("dt", config.dt)
                .field("dealias", config.dealias)
                .field("snapshot_stride", config.snapshot_stride)
                .field("equation_form", config.equation_form.name())
                .build(),
        )
        .field(
            "params",
            ObjBuilder::new()
                .field("omega", params.omega)
                .field("c", params.c)
                .field("regime", params.regime().name())
                .build(),
        )
        .field(
            "grid",
            ObjBuilder::new()
                .field("n_points", grid.n_points)
                .field("half_width", grid.half_width)
                .field("spacing", grid.spacing)
                .build(),
        )
        .field("snapshot_count", trace.snapshots.len())
        .field(
            "max_drift",
            ObjBuilder::new()
                .field("mass", trace.max_drift.mass)
                .field("momentum", trace.max_drift.momentum)
                .field("energy", trace.max_drift.energy)
                .build(),
        )
        .build()
}

/// The `reports.csv` text: header plus one row per recorded time.
fn reports_csv(trace: &EvolutionTrace) -> String {
    let mut out = String::with_capacity(trace.reports.len() * 200 + 100);
    out.push_str(REPORT_COLUMNS);
    out.push('\n');
    for (t, report) in trace.times.iter().zip(trace.reports.iter()) {
        let row = [
            *t,
            report.mass,
            report.momentum,
            report.energy,
            report.action,
            report.nehari,
            report.quadratic_part,
            report.nonlinear_part,
            report.positive_part,
        ];
        for (i, value) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&fmt_float(*value));
        }
        out.push('\n');
    }
    out
}
