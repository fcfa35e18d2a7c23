//! One function per subcommand. Each returns the text it produced so the
//! commands can be driven without a process boundary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use soliton_core::blaschke::{
    measure_to_product, mu_from_norming, product_to_measure, spectral_data_from_three,
};
use soliton_core::kdv::SolitonField;
use soliton_core::potential::eval_q;

use crate::error::{CliError, Result};
use crate::grid::{emit, linspace, render, tabulate};
use crate::record::{HerglotzRecord, SpectralRecord};
use crate::report::{verify, Level, Tolerances, VerificationReport};

/// Grid sampling parameters shared by the grid-producing commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectraMode {
    /// Dirichlet parameters → norming constants.
    Forward,
    /// Norming constants → Dirichlet parameters.
    Invert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HerglotzMode {
    /// Atoms and masses → zeros and poles.
    ToProduct,
    /// Zeros and poles → atoms and masses.
    ToMeasure,
}

/// Parses and validates a spectral record.
pub fn cmd_validate(path: &Path) -> Result<SpectralRecord> {
    let record = SpectralRecord::read(path)?;
    record.validate()?;
    Ok(record)
}

/// Rows `x,Q,q` of the potential.
pub fn cmd_potential(path: &Path, grid: GridSpec, out: Option<&Path>) -> Result<String> {
    let data = cmd_validate(path)?.spectral_data()?;
    let xs = linspace(grid.xmin, grid.xmax, grid.n)?;
    let rows = tabulate(&xs, |x| {
        let e = eval_q(&data, x)?;
        Ok(vec![x, e.big_q, e.q])
    })?;
    let text = render("x,Q,q", &rows);
    emit(out, &text)?;
    Ok(text)
}

/// Runs the checks for `level`; a failing check is an error after the
/// report has been written.
pub fn cmd_verify(
    path: &Path,
    level: Level,
    tol: &Tolerances,
    out: Option<&Path>,
) -> Result<VerificationReport> {
    let data = cmd_validate(path)?.spectral_data()?;
    let report = verify(&data, level, tol);
    emit(out, &report.render())?;
    if report.passed() {
        Ok(report)
    } else {
        Err(CliError::VerificationFailed {
            failed: report.failed(),
            total: report.checks.len(),
        })
    }
}

/// Times of the frames: `t0 + k (t1 − t0)/max(frames − 1, 1)`.
pub fn frame_times(t0: f64, t1: f64, frames: usize) -> Result<Vec<f64>> {
    if frames == 0 {
        return Err(CliError::Usage("need at least one frame".into()));
    }
    if !(t0.is_finite() && t1.is_finite() && t0 <= t1) {
        return Err(CliError::Usage("need finite t0 <= t1".into()));
    }
    let step = (t1 - t0) / (frames.max(2) - 1) as f64;
    Ok((0..frames).map(|k| t0 + step * k as f64).collect())
}

/// Writes `frame_0000.csv`, … with rows `x,u` into `outdir`.
pub fn cmd_kdv(
    path: &Path,
    t0: f64,
    t1: f64,
    frames: usize,
    grid: GridSpec,
    outdir: &Path,
) -> Result<Vec<PathBuf>> {
    let field = SolitonField::new(cmd_validate(path)?.spectral_data()?);
    let times = frame_times(t0, t1, frames)?;
    let xs = linspace(grid.xmin, grid.xmax, grid.n)?;
    fs::create_dir_all(outdir).map_err(|source| CliError::Write {
        path: outdir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let rows = tabulate(&xs, |x| Ok(vec![x, field.u(x, t)?]))?;
        let file = outdir.join(format!("frame_{k:04}.csv"));
        emit(Some(&file), &render("x,u", &rows))?;
        written.push(file);
    }
    Ok(written)
}

/// Converts between norming constants and Dirichlet parameters.
pub fn cmd_spectra(mode: SpectraMode, path: &Path, out: Option<&Path>) -> Result<String> {
    let record = SpectralRecord::read(path)?;
    let result = match mode {
        SpectraMode::Forward => {
            let three = record.three_spectra()?;
            let data = spectral_data_from_three(&three)?;
            SpectralRecord {
                m: Some(data.m().to_vec()),
                mu: Some(three.mu().to_vec()),
                ..record
            }
        }
        SpectraMode::Invert => {
            let data = record.spectral_data()?;
            let mu = if data.is_empty() {
                Vec::new()
            } else {
                mu_from_norming(&data)?.mu().to_vec()
            };
            SpectralRecord {
                mu: Some(mu),
                ..record
            }
        }
    };
    let text = result.render();
    emit(out, &text)?;
    Ok(text)
}

/// Converts between a Herglotz measure and its zero/pole sequence.
pub fn cmd_herglotz(mode: HerglotzMode, path: &Path, out: Option<&Path>) -> Result<String> {
    let record = HerglotzRecord::read(path)?;
    let text = match mode {
        HerglotzMode::ToProduct => {
            HerglotzRecord::render_sequence(&measure_to_product(&record.measure()?)?)
        }
        HerglotzMode::ToMeasure => {
            HerglotzRecord::render_measure(&product_to_measure(&record.sequence()?)?)
        }
    };
    emit(out, &text)?;
    Ok(text)
}
