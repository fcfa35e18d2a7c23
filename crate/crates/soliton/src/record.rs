//! Text records for spectral data and Herglotz measures.
//!
//! Records are small TOML documents of numeric arrays:
//!
//! ```toml
//! kappa = [1.0]
//! m = [2.0]
//! mu = [0.3333333333333333]
//! ```
//!
//! Output always renders 17 significant digits so a read/write cycle is
//! exact.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use soliton_core::blaschke::{HerglotzMeasure, ZeroPoleSequence};
use soliton_core::spectral_data::{validate, validate_kappa, validate_three};
use soliton_core::{SpectralData, ThreeSpectra};

use crate::error::{CliError, Result};

/// Accepts both `1` and `1.0` in numeric arrays.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
}

impl From<Number> for f64 {
    fn from(n: Number) -> f64 {
        match n {
            Number::Int(i) => i as f64,
            Number::Float(f) => f,
        }
    }
}

fn floats(v: Option<Vec<Number>>) -> Option<Vec<f64>> {
    v.map(|v| v.into_iter().map(f64::from).collect())
}

/// Renders `v` with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_array(out: &mut String, name: &str, values: &[f64]) {
    let items: Vec<String> = values.iter().map(|&v| fmt17(v)).collect();
    let _ = writeln!(out, "{name} = [{}]", items.join(", "));
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
        _ => CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
    })
}

fn parse_toml<'de, T: Deserialize<'de>>(text: &'de str, path: &Path) -> Result<T> {
    toml::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.message().to_string(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralFile {
    kappa: Vec<Number>,
    m: Option<Vec<Number>>,
    mu: Option<Vec<Number>>,
}

/// Bound states with optional norming constants and Dirichlet parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRecord {
    pub path: PathBuf,
    pub kappa: Vec<f64>,
    pub m: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
}

impl SpectralRecord {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let f: SpectralFile = parse_toml(text, path)?;
        Ok(Self {
            path: path.to_path_buf(),
            kappa: f.kappa.into_iter().map(f64::from).collect(),
            m: floats(f.m),
            mu: floats(f.mu),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?, path)
    }

    pub fn from_data(data: &SpectralData) -> Self {
        Self {
            path: PathBuf::new(),
            kappa: data.kappa().to_vec(),
            m: Some(data.m().to_vec()),
            mu: None,
        }
    }

    /// Checks every invariant of the fields that are present.
    pub fn validate(&self) -> Result<()> {
        validate_kappa(&self.kappa)?;
        if let Some(m) = &self.m {
            validate(&self.kappa, m)?;
        }
        if let Some(mu) = &self.mu {
            validate_three(&self.kappa, mu)?;
        }
        Ok(())
    }

    fn missing(&self, field: &str) -> CliError {
        CliError::Parse {
            path: self.path.clone(),
            message: format!("missing field `{field}`"),
        }
    }

    pub fn spectral_data(&self) -> Result<SpectralData> {
        let m = self.m.clone().ok_or_else(|| self.missing("m"))?;
        Ok(SpectralData::new(self.kappa.clone(), m)?)
    }

    pub fn three_spectra(&self) -> Result<ThreeSpectra> {
        let mu = self.mu.clone().ok_or_else(|| self.missing("mu"))?;
        Ok(ThreeSpectra::new(self.kappa.clone(), mu)?)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        push_array(&mut out, "kappa", &self.kappa);
        if let Some(m) = &self.m {
            push_array(&mut out, "m", m);
        }
        if let Some(mu) = &self.mu {
            push_array(&mut out, "mu", mu);
        }
        out
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HerglotzFile {
    xi: Option<Vec<Number>>,
    d: Option<Vec<Number>>,
    d0: Option<Number>,
    lambda: Option<Vec<Number>>,
}

/// Either side of the measure/product correspondence: atoms `xi` with
/// masses `d` (plus `d0` at the origin), or an alternating zero/pole list
/// `lambda`. Absent arrays read as empty.
#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzRecord {
    pub path: PathBuf,
    pub xi: Vec<f64>,
    pub d: Vec<f64>,
    pub d0: f64,
    pub lambda: Vec<f64>,
}

impl HerglotzRecord {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let f: HerglotzFile = parse_toml(text, path)?;
        Ok(Self {
            path: path.to_path_buf(),
            xi: floats(f.xi).unwrap_or_default(),
            d: floats(f.d).unwrap_or_default(),
            d0: f.d0.map_or(0.0, f64::from),
            lambda: floats(f.lambda).unwrap_or_default(),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?, path)
    }

    pub fn measure(&self) -> Result<HerglotzMeasure> {
        Ok(HerglotzMeasure::new(
            self.xi.clone(),
            self.d.clone(),
            self.d0,
        )?)
    }

    pub fn sequence(&self) -> Result<ZeroPoleSequence> {
        Ok(ZeroPoleSequence::new(self.lambda.clone())?)
    }

    pub fn render_measure(measure: &HerglotzMeasure) -> String {
        let mut out = String::new();
        push_array(&mut out, "xi", measure.xi());
        push_array(&mut out, "d", measure.d());
        let _ = writeln!(out, "d0 = {}", fmt17(measure.d0()));
        out
    }

    pub fn render_sequence(seq: &ZeroPoleSequence) -> String {
        let mut out = String::new();
        push_array(&mut out, "lambda", seq.lambda());
        out
    }
}
