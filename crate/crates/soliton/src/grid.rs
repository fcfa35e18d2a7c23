//! Comma-separated grid output.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::record::fmt17;

/// `n ≥ 2` equispaced points from `xmin` to `xmax` inclusive.
pub fn linspace(xmin: f64, xmax: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(CliError::Usage("grid needs n >= 2".into()));
    }
    if !(xmin.is_finite() && xmax.is_finite() && xmin < xmax) {
        return Err(CliError::Usage("grid needs finite xmin < xmax".into()));
    }
    let step = (xmax - xmin) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                xmax
            } else {
                xmin + step * i as f64
            }
        })
        .collect())
}

/// Evaluates `row` at every grid point in parallel, keeping the order.
pub fn tabulate<F>(xs: &[f64], row: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64) -> soliton_core::Result<Vec<f64>> + Sync,
{
    xs.par_iter()
        .map(|&x| row(x).map_err(CliError::from))
        .collect()
}

/// Header line then one LF-terminated row per entry.
pub fn render(header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::with_capacity(32 * rows.len() * rows.first().map_or(1, Vec::len));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt17(v)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
