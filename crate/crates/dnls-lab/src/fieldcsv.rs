//! The field-csv file format.
//!
//! A field is persisted as a CSV table with the exact header `x,re,im`, one
//! row per grid point, every float serialized with 17 significant digits
//! (`{:.16e}`), and LF line endings.  That many digits round-trips an IEEE
//! double exactly, so write-then-read is lossless and identical invocations
//! are byte-identical.
//!
//! The grid is not stored separately: on read it is inferred from the `x`
//! column, which must be uniformly spaced within a relative tolerance of
//! 1e−9 and start at the left edge `−L` of a periodic box whose point count
//! is a power of two.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec};

/// Relative tolerance on the uniformity of the `x` column.
const X_UNIFORMITY_TOL: f64 = 1e-9;

/// Serializes a float with 17 significant digits, enough to reproduce the
/// exact bit pattern on parse.
pub(crate) fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a field in the field-csv format.
pub fn format_field(f: &Field) -> String {
    let mut out = String::with_capacity(f.len() * 72 + 16);
    out.push_str("x,re,im\n");
    for (j, v) in f.values.iter().enumerate() {
        out.push_str(&fmt_float(f.grid.x(j)));
        out.push(',');
        out.push_str(&fmt_float(v.re));
        out.push(',');
        out.push_str(&fmt_float(v.im));
        out.push('\n');
    }
    out
}

/// Writes a field to `path` in the field-csv format.
pub fn write_field(path: &Path, f: &Field) -> Result<()> {
    fs::write(path, format_field(f)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a field from a field-csv file, inferring the grid from the `x`
/// column.
///
/// The header must be exactly `x,re,im`; every row must carry three parseable
/// floats; the `x` values must be uniformly spaced within 1e−9 relative and
/// describe a box `[−L, L)` with a power-of-two point count.  Violations are
/// reported as [`Error::Format`] with the offending line.
pub fn read_field(path: &Path) -> Result<Field> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_field(&text).map_err(|reason| Error::Format {
        path: path.display().to_string(),
        reason,
    })
}

/// Parses field-csv text; the error string names the offending line.
fn parse_field(text: &str) -> std::result::Result<Field, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim_end_matches('\r') == "x,re,im" => {}
        Some(header) => {
            return Err(format!("expected header `x,re,im`, found `{header}`"));
        }
        None => return Err("file is empty".into()),
    }

    let mut xs: Vec<f64> = Vec::new();
    let mut values: Vec<Complex64> = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue; // tolerate a trailing newline
        }
        let mut parts = line.split(',');
        let mut next_float = |name: &str| -> std::result::Result<f64, String> {
            let token = parts
                .next()
                .ok_or_else(|| format!("line {}: missing {name} column", i + 2))?;
            token
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("line {}: bad {name} value `{token}`: {e}", i + 2))
        };
        let x = next_float("x")?;
        let re = next_float("re")?;
        let im = next_float("im")?;
        if parts.next().is_some() {
            return Err(format!("line {}: expected exactly 3 columns", i + 2));
        }
        xs.push(x);
        values.push(Complex64::new(re, im));
    }

    let n = xs.len();
    if n < 2 {
        return Err(format!("need at least 2 data rows, found {n}"));
    }
    let x0 = xs[0];
    let spacing = (xs[n - 1] - x0) / (n - 1) as f64;
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(format!("x column is not increasing (spacing {spacing})"));
    }
    let span = spacing * n as f64;
    for (j, &x) in xs.iter().enumerate() {
        let expected = x0 + j as f64 * spacing;
        if (x - expected).abs() > X_UNIFORMITY_TOL * span {
            return Err(format!(
                "x column is not uniform at row {}: {x} vs expected {expected}",
                j + 1
            ));
        }
    }
    // The box convention is x₀ = −L with N·h = 2L.
    let half_width = -x0;
    if !(half_width > 0.0) {
        return Err(format!("first x value must be the left edge −L, found {x0}"));
    }
    if (span - 2.0 * half_width).abs() > X_UNIFORMITY_TOL * span {
        return Err(format!(
            "x column does not describe a box [−L, L): span {span} vs 2L = {}",
            2.0 * half_width
        ));
    }
    let grid = grid_for(n, half_width)?;
    Field::from_values(&grid, values).map_err(|e| e.to_string())
}

fn grid_for(n: usize, half_width: f64) -> std::result::Result<Arc<GridSpec>, String> {
    GridSpec::new(n, half_width).map_err(|e| e.to_string())
}
