//! Spectral data of reflectionless potentials and finite truncations of
//! infinite sequences.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Relative gap below which two consecutive κ's count as equal.
pub const KAPPA_MERGE_TOL: f64 = 1e-12;
/// Relative distance below which `|μ_j|` counts as sitting on a `κ_i`.
pub const SPECIAL_TOL: f64 = 1e-10;

/// Half-line selector: `Right` for objects normalised at `+∞` (`e₊`, `T_q⁺`),
/// `Left` for `−∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// Bound-state parameters `κ_1 > … > κ_N > 0` (eigenvalues `−κ_j²`) with
/// their right norming constants `m_j > 0`. `N = 0` is the zero potential.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    kappa: Vec<f64>,
    m: Vec<f64>,
}

impl SpectralData {
    pub fn new(kappa: Vec<f64>, m: Vec<f64>) -> Result<Self> {
        validate(&kappa, &m)?;
        Ok(Self { kappa, m })
    }

    pub fn empty() -> Self {
        Self {
            kappa: Vec::new(),
            m: Vec::new(),
        }
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn m(&self) -> &[f64] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    /// `α_j = κ_j / m_j`.
    pub fn alpha(&self) -> Vec<f64> {
        self.kappa.iter().zip(&self.m).map(|(k, m)| k / m).collect()
    }

    /// Data of the left shift `q_τ(x) = q(x + τ)`: `m_j ↦ m_j e^{−κ_j τ}`.
    pub fn shift(&self, tau: f64) -> Self {
        let m = self
            .kappa
            .iter()
            .zip(&self.m)
            .map(|(k, m)| m * (-k * tau).exp())
            .collect();
        Self {
            kappa: self.kappa.clone(),
            m,
        }
    }

    /// Positions where the isolated one-soliton with the same `(κ_j, m_j)`
    /// would be centred, `(1/2κ_j) ln(m_j²/2κ_j)`.
    pub fn soliton_centers(&self) -> Vec<f64> {
        self.kappa
            .iter()
            .zip(&self.m)
            .map(|(k, m)| (m * m / (2.0 * k)).ln() / (2.0 * k))
            .collect()
    }

    /// First `n` entries.
    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            kappa: self.kappa[..n].to_vec(),
            m: self.m[..n].to_vec(),
        }
    }
}

/// Positivity, finiteness and strict decrease of `κ`.
pub fn validate_kappa(kappa: &[f64]) -> Result<()> {
    for (i, &k) in kappa.iter().enumerate() {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::NonPositiveEntry {
                field: "kappa",
                index: i + 1,
            });
        }
        if i > 0 && k >= kappa[i - 1] * (1.0 - KAPPA_MERGE_TOL) {
            return Err(Error::NonDecreasingKappa { index: i + 1 });
        }
    }
    Ok(())
}

/// Checks the [`SpectralData`] invariants, reporting the first offending
/// (1-based) index.
pub fn validate(kappa: &[f64], m: &[f64]) -> Result<()> {
    if kappa.len() != m.len() {
        return Err(Error::LengthMismatch {
            field: "m",
            kappa: kappa.len(),
            other: m.len(),
        });
    }
    for i in 0..kappa.len() {
        validate_kappa(&kappa[..=i])?;
        if !(m[i].is_finite() && m[i] > 0.0) {
            return Err(Error::NonPositiveEntry {
                field: "m",
                index: i + 1,
            });
        }
    }
    Ok(())
}

/// Bound states `κ_n` together with the signed Dirichlet parameters `μ_n`:
/// `−μ_n²` is an eigenvalue of the right half-line operator when `μ_n > 0`
/// and of the left one when `μ_n < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeSpectra {
    kappa: Vec<f64>,
    mu: Vec<f64>,
}

impl ThreeSpectra {
    pub fn new(kappa: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        validate_three(&kappa, &mu)?;
        Ok(Self { kappa, mu })
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }
}

/// Checks genericity (no `|μ_j|` on a `κ_i`) and then strict interlacing
/// `κ_1 > |μ_1| > κ_2 > |μ_2| > … > κ_N > |μ_N| > 0`.
pub fn validate_three(kappa: &[f64], mu: &[f64]) -> Result<()> {
    validate_kappa(kappa)?;
    if kappa.len() != mu.len() {
        return Err(Error::LengthMismatch {
            field: "mu",
            kappa: kappa.len(),
            other: mu.len(),
        });
    }
    for (j, &mj) in mu.iter().enumerate() {
        if !mj.is_finite() {
            return Err(Error::InterlacingViolated { index: j + 1 });
        }
        if kappa
            .iter()
            .any(|&k| ((mj.abs() - k) / k).abs() < SPECIAL_TOL)
        {
            return Err(Error::SpecialPotential { index: j + 1 });
        }
    }
    for (j, &mj) in mu.iter().enumerate() {
        let upper = kappa[j];
        let lower = kappa.get(j + 1).copied().unwrap_or(0.0);
        let a = mj.abs();
        if !(a < upper && a > lower) {
            return Err(Error::InterlacingViolated { index: j + 1 });
        }
    }
    Ok(())
}

/// Truncation control for long finite stand-ins of infinite sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPolicy {
    pub tolerance: f64,
    pub max_terms: usize,
}

impl TailPolicy {
    pub fn new(tolerance: f64, max_terms: usize) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidParams("tail tolerance must be positive"));
        }
        if max_terms == 0 {
            return Err(Error::InvalidParams("max_terms must be positive"));
        }
        Ok(Self {
            tolerance,
            max_terms,
        })
    }
}

/// `4 Σ_{j>n} κ_j`: the trace-formula mass carried by the bound states
/// dropped when truncating at `n`. Used as a heuristic L¹ budget.
pub fn tail_bound(kappa: &[f64], n: usize) -> Result<f64> {
    if n > kappa.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: kappa.len(),
        });
    }
    Ok(4.0 * kappa[n..].iter().sum::<f64>())
}

/// Sequence families used to stand in for infinite spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// `κ_j = c·r^j`, `0 < r < 1`.
    Geometric { c: f64, r: f64 },
    /// `κ_j = c·j^{−p}`, `p > 1`.
    Power { c: f64, p: f64 },
}

impl Preset {
    fn term(&self, j: usize) -> f64 {
        match *self {
            Preset::Geometric { c, r } => c * r.powi(j as i32),
            Preset::Power { c, p } => c * (j as f64).powf(-p),
        }
    }

    /// Upper estimate of `4 Σ_{j>n} κ_j` for the infinite sequence.
    fn tail(&self, n: usize) -> f64 {
        match *self {
            Preset::Geometric { c, r } => 4.0 * c * r.powi(n as i32 + 1) / (1.0 - r),
            Preset::Power { c, p } => 4.0 * c * (n as f64).powf(1.0 - p) / (p - 1.0),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Preset::Geometric { c, r } => c > 0.0 && c.is_finite() && r > 0.0 && r < 1.0,
            Preset::Power { c, p } => c > 0.0 && c.is_finite() && p > 1.0 && p.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(
                "geometric needs c > 0, 0 < r < 1; power needs c > 0, p > 1",
            ))
        }
    }
}

/// How norming constants are attached to a generated κ-sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormingRule {
    /// `m_j = 1`.
    Unit,
    /// `α_j = κ_j/m_j` equal to the given value for every `j`.
    EqualAlpha(f64),
}

/// Builds a truncated sequence: the smallest `N ≥ 1` whose tail estimate
/// drops below the policy tolerance, capped at `max_terms`.
pub fn generate_sequence(
    preset: Preset,
    policy: &TailPolicy,
    rule: NormingRule,
) -> Result<SpectralData> {
    preset.check()?;
    if !(policy.tolerance > 0.0) || policy.max_terms == 0 {
        return Err(Error::InvalidParams("invalid tail policy"));
    }
    if let NormingRule::EqualAlpha(a) = rule {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParams("alpha must be positive"));
        }
    }
    let mut n = 1;
    while n < policy.max_terms && preset.tail(n) > policy.tolerance {
        n += 1;
    }
    let kappa: Vec<f64> = (1..=n).map(|j| preset.term(j)).collect();
    let m = kappa
        .iter()
        .map(|&k| match rule {
            NormingRule::Unit => 1.0,
            NormingRule::EqualAlpha(a) => k / a,
        })
        .collect();
    SpectralData::new(kappa, m).map_err(|_| Error::InvalidParams("sequence degenerates in f64"))
}
