//! Gram systems `M(x,t) = A² e^{2xK − 8tK³} + Γ` and their factorizations.
//!
//! The diagonal weights `d_j = α_j² e^{2κ_j x − 8κ_j³ t}` are carried as
//! logarithms. Coordinates whose log-weight exceeds [`LOG_DROP`] decouple
//! from the rest to working precision and are removed from the solve.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, ComplexLu, Dot2, DoubleDouble};
use crate::spectral_data::SpectralData;

/// Log-weight above which a coordinate is treated as decoupled.
pub const LOG_DROP: f64 = 700.0;

const REFINE_STEPS: usize = 2;

/// `ln(1 + e^y)` without overflow.
pub(crate) fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

/// `ln(e^a + e^b)`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// The Cauchy-type matrix `Γ_kl = κ_k κ_l / (κ_k + κ_l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl GammaMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.n + l]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|j| self.get(j, j)).sum()
    }
}

pub fn build_gamma(kappa: &[f64]) -> GammaMatrix {
    let n = kappa.len();
    let mut entries = vec![0.0; n * n];
    for k in 0..n {
        for l in k..n {
            let v = kappa[k] * kappa[l] / (kappa[k] + kappa[l]);
            entries[k * n + l] = v;
            entries[l * n + k] = v;
        }
    }
    GammaMatrix { n, entries }
}

/// `Γ⁻¹κ` in closed form: `v_j = 2 Π_{l≠j} (κ_j + κ_l)/(κ_j − κ_l)`.
pub fn gamma_inverse_kappa(kappa: &[f64]) -> Vec<f64> {
    (0..kappa.len())
        .map(|j| {
            let mut v = 2.0;
            for (l, &k) in kappa.iter().enumerate() {
                if l != j {
                    v *= (kappa[j] + k) / (kappa[j] - k);
                }
            }
            v
        })
        .collect()
}

fn log_gamma(kappa: &[f64], k: usize, l: usize) -> f64 {
    kappa[k].ln() + kappa[l].ln() - (kappa[k] + kappa[l]).ln()
}

/// `2 ln α_j` for every index.
pub(crate) fn log_alpha_sq(data: &SpectralData) -> Vec<f64> {
    data.kappa()
        .iter()
        .zip(data.m())
        .map(|(k, m)| 2.0 * (k.ln() - m.ln()))
        .collect()
}

/// An assembled and factorized Gram system at a point `(x, t)`.
#[derive(Debug, Clone)]
pub struct GramSystem {
    x: f64,
    t: f64,
    kappa: Vec<f64>,
    log_weight: Vec<f64>,
    active: Vec<usize>,
    log_scale: Vec<f64>,
    factor: Vec<f64>,
}

/// Assembles `M(x,t)` for `data` and factorizes its equilibrated form.
pub fn assemble(data: &SpectralData, x: f64, t: f64) -> Result<GramSystem> {
    let la = log_alpha_sq(data);
    let log_weight = data
        .kappa()
        .iter()
        .zip(&la)
        .map(|(&k, &a)| a + 2.0 * k * x - 8.0 * k * k * k * t)
        .collect();
    GramSystem::from_log_weights(data.kappa(), log_weight, x, t)
}

impl GramSystem {
    pub(crate) fn from_log_weights(
        kappa: &[f64],
        log_weight: Vec<f64>,
        x: f64,
        t: f64,
    ) -> Result<Self> {
        let n = kappa.len();
        let active: Vec<usize> = (0..n).filter(|&j| !(log_weight[j] > LOG_DROP)).collect();
        let log_scale: Vec<f64> = (0..n)
            .map(|j| 0.5 * log_add_exp(log_weight[j], log_gamma(kappa, j, j)))
            .collect();
        let na = active.len();
        let mut equilibrated = vec![0.0; na * na];
        for (a, &j) in active.iter().enumerate() {
            equilibrated[a * na + a] = 1.0;
            for (b, &k) in active.iter().enumerate().skip(a + 1) {
                let v = (log_gamma(kappa, j, k) - log_scale[j] - log_scale[k]).exp();
                equilibrated[a * na + b] = v;
                equilibrated[b * na + a] = v;
            }
        }
        let mut factor = equilibrated;
        cholesky(&mut factor, na).map_err(|a| Error::FactorizationFailure {
            index: active[a] + 1,
        })?;
        Ok(Self {
            x,
            t,
            kappa: kappa.to_vec(),
            log_weight,
            active,
            log_scale,
            factor,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.kappa.len()
    }

    /// `ln d_j(x,t)`.
    pub fn log_diag_weight(&self) -> &[f64] {
        &self.log_weight
    }

    /// `d_j(x,t)`; may overflow to infinity for decoupled coordinates.
    pub fn diag_weight(&self) -> Vec<f64> {
        self.log_weight.iter().map(|l| l.exp()).collect()
    }

    /// Whether coordinate `j` (0-based) takes part in the solve.
    pub fn is_active(&self, j: usize) -> bool {
        !(self.log_weight[j] > LOG_DROP)
    }

    /// Dense `M` in row-major order.
    pub fn matrix(&self) -> Vec<f64> {
        let n = self.dim();
        let mut m = build_gamma(&self.kappa).entries;
        for j in 0..n {
            m[j * n + j] += self.log_weight[j].exp();
        }
        m
    }

    /// Solves `M w = rhs` with one step of iterative refinement. Decoupled
    /// coordinates get `w_j = 0`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::LengthMismatch {
                field: "rhs",
                kappa: n,
                other: rhs.len(),
            });
        }
        let na = self.active.len();
        let c: Vec<f64> = self
            .active
            .iter()
            .map(|&j| rhs[j] * (-self.log_scale[j]).exp())
            .collect();
        let mut y = c;
        cholesky_solve(&self.factor, na, &mut y);
        let mut w = vec![0.0; n];
        for (a, &j) in self.active.iter().enumerate() {
            w[j] = y[a] * (-self.log_scale[j]).exp();
        }
        // Refinement against the unscaled matrix with residuals accumulated
        // in doubled precision; this removes the rounding noise of the
        // equilibrated entries, which otherwise varies from point to point.
        for _ in 0..REFINE_STEPS {
            let mut r: Vec<f64> = self
                .active
                .iter()
                .map(|&j| {
                    let mut acc = Dot2::new(rhs[j]);
                    acc.add_product(-self.log_weight[j].exp(), w[j]);
                    for &k in &self.active {
                        let kj = self.kappa[j];
                        let kk = self.kappa[k];
                        acc.add_product(-(kj * kk / (kj + kk)), w[k]);
                    }
                    acc.value() * (-self.log_scale[j]).exp()
                })
                .collect();
            cholesky_solve(&self.factor, na, &mut r);
            for (a, &j) in self.active.iter().enumerate() {
                w[j] += r[a] * (-self.log_scale[j]).exp();
            }
        }
        Ok(w)
    }

    /// `w = M⁻¹κ`.
    pub fn solve_kappa(&self) -> Result<Vec<f64>> {
        self.solve(&self.kappa)
    }

    /// `ln det` of the equilibrated active block `C_kl = M_kl/√(M_kk M_ll)`,
    /// from the Cholesky diagonal plus the first-order correction
    /// `tr((LLᵀ)⁻¹R)`, `R = C − LLᵀ`. The entries of `C` are formed in
    /// double-double arithmetic so `R` holds only the factorization error;
    /// without the correction the value carries rounding noise that finite
    /// differences amplify.
    fn log_det_factor(&self) -> f64 {
        let na = self.active.len();
        let raw = 2.0 * (0..na).map(|a| self.factor[a * na + a].ln()).sum::<f64>();
        if na < 2 {
            return raw;
        }
        let root: Vec<DoubleDouble> = self
            .active
            .iter()
            .map(|&j| {
                let k = self.kappa[j];
                DoubleDouble::sum(self.log_weight[j].exp(), 0.5 * k).sqrt()
            })
            .collect();
        let mut residual = vec![0.0; na * na];
        for a in 0..na {
            for b in 0..=a {
                let mut acc = if a == b {
                    Dot2::new(1.0)
                } else {
                    let (kj, kk) = (self.kappa[self.active[a]], self.kappa[self.active[b]]);
                    let c = root[a].mul(root[b]).divide(kj * kk / (kj + kk));
                    let mut acc = Dot2::new(c.hi);
                    acc.add_product(c.lo, 1.0);
                    acc
                };
                for c in 0..=b {
                    acc.add_product(-self.factor[a * na + c], self.factor[b * na + c]);
                }
                residual[a * na + b] = acc.value();
                residual[b * na + a] = acc.value();
            }
        }
        let mut correction = 0.0;
        for b in 0..na {
            let mut col: Vec<f64> = (0..na).map(|a| residual[a * na + b]).collect();
            cholesky_solve(&self.factor, na, &mut col);
            correction += col[b];
        }
        raw + correction
    }

    /// `ln det M`.
    pub fn log_det(&self) -> f64 {
        let n = self.dim();
        let diag: f64 = (0..n)
            .map(|j| {
                if self.is_active(j) {
                    2.0 * self.log_scale[j]
                } else {
                    log_add_exp(self.log_weight[j], log_gamma(&self.kappa, j, j))
                }
            })
            .sum();
        diag + self.log_det_factor()
    }

    /// `ln det(M D⁻¹)`, equal to `ln det(I + M_raw)` at `t = 0`.
    pub fn log_det_over_weights(&self) -> f64 {
        let n = self.dim();
        let diag: f64 = (0..n)
            .map(|j| softplus(log_gamma(&self.kappa, j, j) - self.log_weight[j]))
            .sum();
        diag + self.log_det_factor()
    }
}

/// `ln det(I + M_raw(x))` with `(M_raw)_kl = m_k m_l e^{−(κ_k+κ_l)x}/(κ_k+κ_l)`.
pub fn logdet_shift(data: &SpectralData, x: f64) -> Result<f64> {
    Ok(assemble(data, x, 0.0)?.log_det_over_weights())
}

/// Solves the Gram system continued to complex `(z, ζ)` without a domain
/// check; exponent `2zK − 8ζK³`.
pub(crate) fn solve_complex_unchecked(
    data: &SpectralData,
    z: Complex64,
    zeta: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let kappa = data.kappa();
    let n = kappa.len();
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            field: "rhs",
            kappa: n,
            other: rhs.len(),
        });
    }
    let la = log_alpha_sq(data);
    let lw: Vec<Complex64> = (0..n)
        .map(|j| {
            let k = kappa[j];
            la[j] + 2.0 * k * z - 8.0 * k * k * k * zeta
        })
        .collect();
    let active: Vec<usize> = (0..n).filter(|&j| !(lw[j].re > LOG_DROP)).collect();
    let na = active.len();
    let ls: Vec<f64> = (0..n)
        .map(|j| 0.5 * log_add_exp(lw[j].re, log_gamma(kappa, j, j)))
        .collect();
    let mut a = vec![Complex64::new(0.0, 0.0); na * na];
    for (p, &j) in active.iter().enumerate() {
        for (q, &k) in active.iter().enumerate() {
            let g = (log_gamma(kappa, j, k) - ls[j] - ls[k]).exp();
            a[p * na + q] = Complex64::new(g, 0.0);
        }
        a[p * na + p] += (lw[j] - 2.0 * ls[j]).exp();
    }
    let lu = ComplexLu::factor(a, na).map_err(|p| Error::SingularSystem {
        index: active[p] + 1,
    })?;
    let c: Vec<Complex64> = active.iter().map(|&j| rhs[j] * (-ls[j]).exp()).collect();
    let y = lu.solve(&c);
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for (p, &j) in active.iter().enumerate() {
        w[j] = y[p] * (-ls[j]).exp();
    }
    Ok(w)
}

/// Complex continuation of [`GramSystem::solve`]. `(z, ζ)` must satisfy
/// `|Im z| < π/(8κ_1)` and `|Im ζ| < π/(32κ_1³)`, where the continued
/// matrix is provably invertible.
pub fn solve_complex(
    data: &SpectralData,
    z: Complex64,
    zeta: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    if let Some(&k1) = data.kappa().first() {
        if !(z.im.abs() < PI / (8.0 * k1)) {
            return Err(Error::DomainViolation(
                "|Im z| must be below pi/(8 kappa_1)",
            ));
        }
        if !(zeta.im.abs() < PI / (32.0 * k1 * k1 * k1)) {
            return Err(Error::DomainViolation(
                "|Im zeta| must be below pi/(32 kappa_1^3)",
            ));
        }
    }
    solve_complex_unchecked(data, z, zeta, rhs)
}
