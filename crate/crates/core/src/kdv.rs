//! KdV multi-solitons `u(x,t) = 2 ∂_x κᵀM(x,t)⁻¹κ` and the
//! auxiliary potential function `φ(x,t) = κᵀ(A² e^{xK − tK³} + Γ)⁻¹κ`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gram::solve_complex_unchecked;
use crate::potential::field;
use crate::spectral_data::SpectralData;

/// Largest `|4κ³t|` accepted by [`evolve_spectral`].
pub const MAX_GROWTH_EXPONENT: f64 = 700.0;

/// Norming constants at time `t`: `m_j(t) = m_j e^{4κ_j³ t}`.
pub fn evolve_spectral(data: &SpectralData, t: f64) -> Result<SpectralData> {
    let mut m = Vec::with_capacity(data.len());
    for (j, (&k, &mj)) in data.kappa().iter().zip(data.m()).enumerate() {
        let e = 4.0 * k * k * k * t;
        if !(e.abs() <= MAX_GROWTH_EXPONENT) {
            return Err(Error::Overflow { index: j + 1 });
        }
        m.push(mj * e.exp());
    }
    SpectralData::new(data.kappa().to_vec(), m).map_err(|e| match e {
        Error::NonPositiveEntry { index, .. } => Error::Overflow { index },
        other => other,
    })
}

/// `u(x,t) = −4 Σ_j κ_j d_j(x,t) w_j²`, `w = M(x,t)⁻¹κ`.
pub fn eval_u(data: &SpectralData, x: f64, t: f64) -> Result<f64> {
    Ok(field(data, x, t)?.q)
}

/// `φ` on the real slice; equals `Q` evaluated at `(x/2, t/8)`.
pub fn eval_phi_real(data: &SpectralData, x: f64, t: f64) -> Result<f64> {
    Ok(field(data, 0.5 * x, 0.125 * t)?.big_q)
}

/// `φ(z, ζ)` continued into `|Im z| < π/(4κ_1)`, `|Im ζ| < π/(4κ_1³)`.
pub fn eval_phi(data: &SpectralData, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    if let Some(&k1) = data.kappa().first() {
        if !(z.im.abs() < PI / (4.0 * k1)) {
            return Err(Error::DomainViolation(
                "|Im z| must be below pi/(4 kappa_1)",
            ));
        }
        if !(zeta.im.abs() < PI / (4.0 * k1 * k1 * k1)) {
            return Err(Error::DomainViolation(
                "|Im zeta| must be below pi/(4 kappa_1^3)",
            ));
        }
    }
    let kappa: Vec<Complex64> = data
        .kappa()
        .iter()
        .map(|&k| Complex64::new(k, 0.0))
        .collect();
    let w = solve_complex_unchecked(data, 0.5 * z, 0.125 * zeta, &kappa)?;
    Ok(kappa.iter().zip(&w).map(|(k, w)| k * w).sum())
}

/// Five-point first and third derivatives in `x` and a central first
/// derivative in `t`, all with step `h`.
struct Stencil {
    value: f64,
    dx: f64,
    dxxx: f64,
    dt: f64,
}

fn stencil(f: impl Fn(f64, f64) -> Result<f64>, x: f64, t: f64, h: f64) -> Result<Stencil> {
    let m2 = f(x - 2.0 * h, t)?;
    let m1 = f(x - h, t)?;
    let p1 = f(x + h, t)?;
    let p2 = f(x + 2.0 * h, t)?;
    Ok(Stencil {
        value: f(x, t)?,
        dx: (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
        dxxx: (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h),
        dt: (f(x, t + h)? - f(x, t - h)?) / (2.0 * h),
    })
}

/// `|u_t − 6u u_x + u_xxx|` by finite differences of step `h`.
pub fn kdv_residual(data: &SpectralData, x: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParams("step must be positive"));
    }
    let s = stencil(|x, t| eval_u(data, x, t), x, t, h)?;
    Ok((s.dt - 6.0 * s.value * s.dx + s.dxxx).abs())
}

/// `|v_t − 3v_x² + v_xxx|` for `v = φ` on the real slice.
pub fn phi_residual(data: &SpectralData, x: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParams("step must be positive"));
    }
    let s = stencil(|x, t| eval_phi_real(data, x, t), x, t, h)?;
    Ok((s.dt - 3.0 * s.dx * s.dx + s.dxxx).abs())
}

/// Position of the minimum of `u(·, t)` on `[lo, hi]` by golden-section
/// search; meaningful when `u(·,t)` has a single trough there.
pub fn trough_position(data: &SpectralData, t: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let g = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let mut fa = eval_u(data, a, t)?;
    let mut fb = eval_u(data, b, t)?;
    while hi - lo > 1e-10 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = eval_u(data, a, t)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = eval_u(data, b, t)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A soliton field bound to its spectral data.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonField {
    data: SpectralData,
}

impl SolitonField {
    pub fn new(data: SpectralData) -> Self {
        Self { data }
    }

    pub fn data(&self) -> &SpectralData {
        &self.data
    }

    pub fn u(&self, x: f64, t: f64) -> Result<f64> {
        eval_u(&self.data, x, t)
    }

    pub fn phi(&self, z: Complex64, zeta: Complex64) -> Result<Complex64> {
        eval_phi(&self.data, z, zeta)
    }

    /// Samples `u(·, t)` on `n` equispaced points of `[xmin, xmax]`.
    pub fn frame(&self, t: f64, xmin: f64, xmax: f64, n: usize) -> Result<Vec<(f64, f64)>> {
        let step = if n > 1 {
            (xmax - xmin) / (n - 1) as f64
        } else {
            0.0
        };
        (0..n)
            .map(|i| {
                let x = xmin + step * i as f64;
                Ok((x, self.u(x, t)?))
            })
            .collect()
    }
}
