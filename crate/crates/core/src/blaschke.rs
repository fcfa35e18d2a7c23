//! Blaschke products, the three-spectra relation between norming constants
//! and Dirichlet data, and discrete Herglotz functions.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::ComplexLu;
use crate::potential::{eval_jost_left, eval_jost_right, jost_at_origin};
use crate::spectral_data::{Side, SpectralData, ThreeSpectra};

/// Points closer than this (relative) to a pole are refused.
const POLE_GAP: f64 = 1e-14;
/// Newton iteration cap for [`mu_from_norming`].
pub const NEWTON_MAX_ITER: usize = 200;
/// Convergence threshold on the log-residual in [`mu_from_norming`].
pub const NEWTON_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `ln(1 + δ)` accurate for small `δ`.
fn ln_1p_complex(d: Complex64) -> Complex64 {
    if d.norm() < 1e-4 {
        d * (1.0 - d * (0.5 - d * (1.0 / 3.0 - 0.25 * d)))
    } else {
        (1.0 + d).ln()
    }
}

/// `Π_n (z − λ_n)/(z − λ̄_n)`, accumulated as a sum of logarithms of
/// `1 − 2i Im λ_n / (z − λ̄_n)`.
pub fn blaschke(zeros: &[Complex64], z: Complex64) -> Result<Complex64> {
    let mut log = c(0.0);
    for l in zeros {
        let den = z - l.conj();
        if den.norm() <= POLE_GAP * (1.0 + l.norm()) {
            return Err(Error::PoleHit);
        }
        let delta = Complex64::new(0.0, -2.0 * l.im) / den;
        if (1.0 + delta).norm() == 0.0 {
            return Ok(c(0.0));
        }
        log += ln_1p_complex(delta);
    }
    Ok(log.exp())
}

/// Scattering coefficient `a(z) = Π_j (z − iκ_j)/(z + iκ_j)` of a
/// reflectionless potential.
pub fn scattering_a(kappa: &[f64], z: Complex64) -> Result<Complex64> {
    let zeros: Vec<Complex64> = kappa.iter().map(|&k| Complex64::new(0.0, k)).collect();
    blaschke(&zeros, z)
}

/// `i·ȧ(iκ_n) = (1/2κ_n) Π_{j≠n} (κ_n − κ_j)/(κ_n + κ_j)` for 1-based `n`;
/// its sign is `(−1)^{n−1}`.
pub fn a_dot(kappa: &[f64], n: usize) -> Result<f64> {
    if n == 0 || n > kappa.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: kappa.len(),
        });
    }
    let kn = kappa[n - 1];
    let mut v = 1.0 / (2.0 * kn);
    for (j, &k) in kappa.iter().enumerate() {
        if j != n - 1 {
            v *= (kn - k) / (kn + k);
        }
    }
    Ok(v)
}

/// `Σ_l ln|κ_n − μ_l| − ln|κ_n + μ_l|`, the log-modulus of
/// `B(iκ_n) = Π_l (κ_n − μ_l)/(κ_n + μ_l)`.
fn log_abs_b(kappa_n: f64, mu: &[f64]) -> f64 {
    mu.iter()
        .map(|&m| (kappa_n - m).abs().ln() - (kappa_n + m).abs().ln())
        .sum()
}

/// Norming constant `m_n` (1-based `n`) from
/// `m_n⁻² = i·ȧ(iκ_n) Π_l (κ_n − μ_l)/(κ_n + μ_l)`.
pub fn norming_from_three_spectra(three: &ThreeSpectra, n: usize) -> Result<f64> {
    let ad = a_dot(three.kappa(), n)?;
    let kn = three.kappa()[n - 1];
    let b: f64 = three.mu().iter().map(|&m| (kn - m) / (kn + m)).product();
    let radicand = ad * b;
    if !(radicand > 0.0 && radicand.is_finite()) {
        return Err(Error::NonPositiveRadicand { index: n });
    }
    Ok(1.0 / radicand.sqrt())
}

/// All norming constants, packaged as spectral data.
pub fn spectral_data_from_three(three: &ThreeSpectra) -> Result<SpectralData> {
    let m = (1..=three.len())
        .map(|n| norming_from_three_spectra(three, n))
        .collect::<Result<Vec<f64>>>()?;
    SpectralData::new(three.kappa().to_vec(), m)
}

/// Open interval `(lo, hi)` holding `|μ_n|` (0-based `n`).
fn mu_interval(kappa: &[f64], n: usize) -> (f64, f64) {
    (kappa.get(n + 1).copied().unwrap_or(0.0), kappa[n])
}

fn bisect(mut f: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-15 * mid.abs() {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Signed Dirichlet parameters located as sign changes of the half-line
/// Jost functions `ν ↦ e₊(0, iν)` and `ν ↦ e₋(0, −iν)` on each interval.
fn bracket_mu(data: &SpectralData) -> Result<Vec<f64>> {
    let kappa = data.kappa();
    let right = |nu: f64| -> Result<f64> {
        Ok(eval_jost_right(data, 0.0, Complex64::new(0.0, nu))?
            .value
            .re)
    };
    let left = |nu: f64| -> Result<f64> {
        Ok(eval_jost_left(data, 0.0, Complex64::new(0.0, -nu))?
            .value
            .re)
    };
    let mut mu = Vec::with_capacity(kappa.len());
    for n in 0..kappa.len() {
        let (lo, hi) = mu_interval(kappa, n);
        let lo = if lo == 0.0 {
            hi * 1e-10
        } else {
            lo * (1.0 + 1e-10)
        };
        let hi = hi * (1.0 - 1e-10);
        let fr = right(lo)? * right(hi)? < 0.0;
        let fl = left(lo)? * left(hi)? < 0.0;
        mu.push(match (fr, fl) {
            (true, false) => bisect(right, lo, hi)?,
            (false, true) => -bisect(left, lo, hi)?,
            _ => return Err(Error::SpecialPotential { index: n + 1 }),
        });
    }
    Ok(mu)
}

struct Feasible<'a> {
    kappa: &'a [f64],
    sign: Vec<f64>,
}

impl Feasible<'_> {
    fn mu(&self, s: &[f64]) -> Vec<f64> {
        (0..s.len())
            .map(|l| {
                let (lo, hi) = mu_interval(self.kappa, l);
                self.sign[l] * (lo + (hi - lo) * 0.5 * (1.0 + s[l].tanh()))
            })
            .collect()
    }

    fn dmu(&self, s: &[f64]) -> Vec<f64> {
        (0..s.len())
            .map(|l| {
                let (lo, hi) = mu_interval(self.kappa, l);
                let th = s[l].tanh();
                self.sign[l] * (hi - lo) * 0.5 * (1.0 - th * th)
            })
            .collect()
    }

    fn coords(&self, mu: &[f64]) -> Vec<f64> {
        (0..mu.len())
            .map(|l| {
                let (lo, hi) = mu_interval(self.kappa, l);
                let u =
                    (2.0 * (mu[l].abs() - lo) / (hi - lo) - 1.0).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                u.atanh()
            })
            .collect()
    }

    fn residual(&self, s: &[f64], target: &[f64]) -> Vec<f64> {
        let mu = self.mu(s);
        self.kappa
            .iter()
            .zip(target)
            .map(|(&k, t)| log_abs_b(k, &mu) - t)
            .collect()
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Damped Newton in the feasible coordinates; `None` when it stalls.
fn newton(space: &Feasible, mut s: Vec<f64>, target: &[f64]) -> Option<Vec<f64>> {
    let n = s.len();
    let mut r = space.residual(&s, target);
    for _ in 0..NEWTON_MAX_ITER {
        if max_abs(&r) < NEWTON_TOL {
            return Some(s);
        }
        let mu = space.mu(&s);
        let dmu = space.dmu(&s);
        let mut jac = vec![c(0.0); n * n];
        for (i, &k) in space.kappa.iter().enumerate() {
            for l in 0..n {
                jac[i * n + l] = c(-2.0 * k / (k * k - mu[l] * mu[l]) * dmu[l]);
            }
        }
        let lu = ComplexLu::factor(jac, n).ok()?;
        let rhs: Vec<Complex64> = r.iter().map(|v| c(-v)).collect();
        let step: Vec<f64> = lu.solve(&rhs).iter().map(|v| v.re).collect();
        let norm0 = max_abs(&r);
        let mut scale = 1.0;
        loop {
            let trial: Vec<f64> = s.iter().zip(&step).map(|(a, b)| a + scale * b).collect();
            let rt = space.residual(&trial, target);
            if rt.iter().all(|v| v.is_finite()) && max_abs(&rt) < norm0 {
                s = trial;
                r = rt;
                break;
            }
            scale *= 0.5;
            if scale < 1e-10 {
                return if norm0 < NEWTON_TOL * 10.0 {
                    Some(s)
                } else {
                    None
                };
            }
        }
    }
    (max_abs(&r) < NEWTON_TOL).then_some(s)
}

/// Recovers the signed Dirichlet parameters of the potential defined by
/// `data`, i.e. inverts [`norming_from_three_spectra`].
///
/// The starting point comes from sign changes of the half-line Jost
/// functions, which also fixes every sign; Newton on
/// `ln|B(iκ_n)| = ln(m_n⁻²/|iȧ(iκ_n)|)` then polishes it, with a homotopy in
/// the target as fallback. A potential whose Jost function vanishes at the
/// origin is reported as [`Error::SpecialPotential`].
pub fn mu_from_norming(data: &SpectralData) -> Result<ThreeSpectra> {
    if data.is_empty() {
        return Err(Error::InvalidParams("need at least one bound state"));
    }
    let kappa = data.kappa();
    let target = (1..=data.len())
        .map(|n| {
            let m = data.m()[n - 1];
            Ok(-2.0 * m.ln() - a_dot(kappa, n)?.abs().ln())
        })
        .collect::<Result<Vec<f64>>>()?;
    let start = bracket_mu(data)?;
    let space = Feasible {
        kappa,
        sign: start.iter().map(|m| m.signum()).collect(),
    };
    let s0 = space.coords(&start);
    let solved = newton(&space, s0.clone(), &target).or_else(|| {
        let base: Vec<f64> = kappa.iter().map(|&k| log_abs_b(k, &start)).collect();
        let mut s = s0;
        for step in 1..=10 {
            let th = step as f64 / 10.0;
            let t: Vec<f64> = base
                .iter()
                .zip(&target)
                .map(|(b, t)| (1.0 - th) * b + th * t)
                .collect();
            s = newton(&space, s, &t)?;
        }
        Some(s)
    });
    match solved {
        Some(s) => ThreeSpectra::new(kappa.to_vec(), space.mu(&s)),
        None => Err(Error::NewtonDivergence {
            iterations: NEWTON_MAX_ITER,
        }),
    }
}

/// Discrete measure `Σ d_j δ_{ξ_j} + d_0 δ_0` on the positive half-line.
#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzMeasure {
    xi: Vec<f64>,
    d: Vec<f64>,
    d0: f64,
}

impl HerglotzMeasure {
    pub fn new(xi: Vec<f64>, d: Vec<f64>, d0: f64) -> Result<Self> {
        if xi.len() != d.len() {
            return Err(Error::LengthMismatch {
                field: "d",
                kappa: xi.len(),
                other: d.len(),
            });
        }
        for (j, &x) in xi.iter().enumerate() {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::NonPositiveEntry {
                    field: "xi",
                    index: j + 1,
                });
            }
            if j > 0 && x >= xi[j - 1] {
                return Err(Error::InvalidParams("xi must be strictly decreasing"));
            }
            if !(d[j].is_finite() && d[j] > 0.0) {
                return Err(Error::NonPositiveEntry {
                    field: "d",
                    index: j + 1,
                });
            }
        }
        if !(d0.is_finite() && d0 >= 0.0) {
            return Err(Error::InvalidParams("d0 must be non-negative"));
        }
        Ok(Self { xi, d, d0 })
    }

    pub fn empty() -> Self {
        Self {
            xi: Vec::new(),
            d: Vec::new(),
            d0: 0.0,
        }
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }
}

/// `φ(z) = 1 − d_0/z + Σ_j d_j/(ξ_j − z)`.
pub fn herglotz_eval(measure: &HerglotzMeasure, z: Complex64) -> Result<Complex64> {
    let mut v = c(1.0);
    if measure.d0 > 0.0 {
        if z.norm() == 0.0 {
            return Err(Error::PoleHit);
        }
        v -= measure.d0 / z;
    }
    for (&x, &d) in measure.xi.iter().zip(&measure.d) {
        let den = x - z;
        if den.norm() <= POLE_GAP * x {
            return Err(Error::PoleHit);
        }
        v += d / den;
    }
    Ok(v)
}

fn herglotz_real(measure: &HerglotzMeasure, x: f64) -> f64 {
    let mut v = 1.0;
    if measure.d0 > 0.0 {
        v -= measure.d0 / x;
    }
    for (&xi, &d) in measure.xi.iter().zip(&measure.d) {
        v += d / (xi - x);
    }
    v
}

/// Zero of an increasing function on `(lo, hi)` by bisection.
fn increasing_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // Bisect down to adjacent floats, then keep the better endpoint.
    for _ in 0..2100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Zeros `η_1 > ξ_1 > η_2 > ξ_2 > …` of the real function `φ`, one per gap
/// between atoms plus one above `ξ_1`, and one in `(0, ξ_n)` when `d_0 > 0`.
pub fn herglotz_zeros(measure: &HerglotzMeasure) -> Result<Vec<f64>> {
    let xi = &measure.xi;
    let n = xi.len();
    let f = |x: f64| herglotz_real(measure, x);
    let mut eta = Vec::with_capacity(n + 1);
    if n == 0 {
        if measure.d0 > 0.0 {
            // 1 − d0/x vanishes at d0
            eta.push(measure.d0);
        }
        return Ok(eta);
    }
    let total: f64 = measure.d.iter().sum();
    let lo = xi[0] * (1.0 + 1e-15) + f64::MIN_POSITIVE;
    let mut hi = xi[0] + total;
    let mut tries = 0;
    while !(f(hi) > 0.0) {
        hi = xi[0] + 2.0 * (hi - xi[0]) + measure.d0;
        tries += 1;
        if tries > 200 {
            return Err(Error::BracketFailure { index: 1 });
        }
    }
    eta.push(increasing_root(f, lo, hi));
    let gaps = if measure.d0 > 0.0 { n } else { n - 1 };
    for k in 1..=gaps {
        let top = xi[k - 1];
        let bottom = xi.get(k).copied().unwrap_or(0.0);
        let nudge = |v: f64, dir: f64| v + dir * (4.0 * f64::EPSILON * v + (top - bottom) * 1e-15);
        let a = nudge(bottom, 1.0).max(f64::MIN_POSITIVE);
        let b = nudge(top, -1.0);
        let (fa, fb) = (f(a), f(b));
        if fa.is_nan() || fb.is_nan() {
            return Err(Error::BracketFailure { index: k + 1 });
        }
        // a zero closer to a pole than the representable inset
        eta.push(if fa >= 0.0 {
            a
        } else if fb <= 0.0 {
            b
        } else {
            increasing_root(f, a, b)
        });
    }
    Ok(eta)
}

/// Alternating zeros (odd positions) and poles (even positions)
/// `λ_1 > λ_2 > … > λ_{2n}` of `ψ(z) = Π_k (z − λ_{2k−1})/(z − λ_{2k})`.
/// Only the final pole may sit at `0`, which encodes a mass at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroPoleSequence {
    lambda: Vec<f64>,
}

impl ZeroPoleSequence {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if !lambda.len().is_multiple_of(2) {
            return Err(Error::InvalidParams(
                "zero/pole sequence needs an even number of entries",
            ));
        }
        let last = lambda.len().saturating_sub(1);
        for (j, &l) in lambda.iter().enumerate() {
            let ok = l.is_finite() && (l > 0.0 || (l == 0.0 && j == last));
            if !ok {
                return Err(Error::NonPositiveEntry {
                    field: "lambda",
                    index: j + 1,
                });
            }
            if j > 0 && l >= lambda[j - 1] {
                return Err(Error::InvalidParams("lambda must be strictly decreasing"));
            }
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn zeros(&self) -> impl Iterator<Item = f64> + '_ {
        self.lambda.iter().step_by(2).copied()
    }

    pub fn poles(&self) -> impl Iterator<Item = f64> + '_ {
        self.lambda.iter().skip(1).step_by(2).copied()
    }
}

/// `ψ_λ(z) = Π_k (z − λ_{2k−1})/(z − λ_{2k})`.
pub fn psi_eval(seq: &ZeroPoleSequence, z: Complex64) -> Result<Complex64> {
    let mut v = c(1.0);
    for (zero, pole) in seq.zeros().zip(seq.poles()) {
        let den = z - pole;
        if den.norm() <= POLE_GAP * pole.max(f64::MIN_POSITIVE) {
            return Err(Error::PoleHit);
        }
        v *= (z - zero) / den;
    }
    Ok(v)
}

/// Interleaves the zeros of `φ_ν` with its atoms.
pub fn measure_to_product(measure: &HerglotzMeasure) -> Result<ZeroPoleSequence> {
    let eta = herglotz_zeros(measure)?;
    let mut lambda = Vec::with_capacity(2 * eta.len());
    for (k, &e) in eta.iter().enumerate() {
        lambda.push(e);
        lambda.push(measure.xi.get(k).copied().unwrap_or(0.0));
    }
    ZeroPoleSequence::new(lambda)
}

/// Atoms at the poles with masses
/// `d_n = (λ_{2n−1} − λ_{2n}) Π_{k≠n} (λ_{2n} − λ_{2k−1})/(λ_{2n} − λ_{2k})`;
/// a pole at `0` becomes `d_0`.
pub fn product_to_measure(seq: &ZeroPoleSequence) -> Result<HerglotzMeasure> {
    let zeros: Vec<f64> = seq.zeros().collect();
    let poles: Vec<f64> = seq.poles().collect();
    let mut xi = Vec::with_capacity(poles.len());
    let mut d = Vec::with_capacity(poles.len());
    let mut d0 = 0.0;
    for (n, &p) in poles.iter().enumerate() {
        let mut mass = zeros[n] - p;
        for k in 0..poles.len() {
            if k != n {
                mass *= (p - zeros[k]) / (p - poles[k]);
            }
        }
        if p == 0.0 {
            d0 = mass;
        } else {
            xi.push(p);
            d.push(mass);
        }
    }
    HerglotzMeasure::new(xi, d, d0)
}

/// `R(z) = Π_j (z − κ_j²)/(z − μ_j²)`.
pub fn r_eval(three: &ThreeSpectra, z: Complex64) -> Result<Complex64> {
    let mut v = c(1.0);
    for (&k, &m) in three.kappa().iter().zip(three.mu()) {
        let den = z - m * m;
        if den.norm() <= POLE_GAP * m * m {
            return Err(Error::PoleHit);
        }
        v *= (z - k * k) / den;
    }
    Ok(v)
}

/// Residue masses `d_j = (κ_j² − μ_j²) Π_{l≠j} (μ_j² − κ_l²)/(μ_j² − μ_l²)`
/// of `R(z) = 1 + Σ_j d_j/(μ_j² − z)`; these are also the masses of `n_q`
/// at the signed points `μ_j`.
pub fn r_masses(three: &ThreeSpectra) -> Vec<f64> {
    let kappa = three.kappa();
    let mu = three.mu();
    (0..kappa.len())
        .map(|j| {
            let m2 = mu[j] * mu[j];
            let mut d = kappa[j] * kappa[j] - m2;
            for l in 0..kappa.len() {
                if l != j {
                    d *= (m2 - kappa[l] * kappa[l]) / (m2 - mu[l] * mu[l]);
                }
            }
            d
        })
        .collect()
}

/// `R` in its partial-fraction form `1 + Σ_j d_j/(μ_j² − z)`.
pub fn r_eval_sum(three: &ThreeSpectra, z: Complex64) -> Result<Complex64> {
    let mut v = c(1.0);
    for (&m, d) in three.mu().iter().zip(r_masses(three)) {
        let den = m * m - z;
        if den.norm() <= POLE_GAP * m * m {
            return Err(Error::PoleHit);
        }
        v += d / den;
    }
    Ok(v)
}

/// `n_q(z) = z + Σ_j d_j/(μ_j − z)` with the masses of [`r_masses`].
pub fn n_function(three: &ThreeSpectra, z: Complex64) -> Result<Complex64> {
    let mut v = z;
    for (&m, d) in three.mu().iter().zip(r_masses(three)) {
        let den = m - z;
        if den.norm() <= POLE_GAP * m.abs() {
            return Err(Error::PoleHit);
        }
        v += d / den;
    }
    Ok(v)
}

/// Weyl–Titchmarsh function `m_±(−z²)` for `Re z > 0`, as the logarithmic
/// derivative of the half-line Jost solution at the origin: the value from
/// the product over `(κ, μ)` and the derivative from the closed-form Jost
/// solution of the potential with these three spectra.
pub fn m_function(three: &ThreeSpectra, z: Complex64, side: Side) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::DomainViolation("m-function needs Re z > 0"));
    }
    let data = spectral_data_from_three(three)?;
    let lambda = Complex64::new(-z.im, z.re); // iz
    match side {
        Side::Right => {
            let value = jost_at_origin(three, lambda, Side::Right)?;
            let j = eval_jost_right(&data, 0.0, lambda)?;
            if value.norm() == 0.0 {
                return Err(Error::PoleHit);
            }
            Ok(j.derivative / value)
        }
        Side::Left => {
            let value = jost_at_origin(three, -lambda, Side::Left)?;
            let j = eval_jost_left(&data, 0.0, -lambda)?;
            if value.norm() == 0.0 {
                return Err(Error::PoleHit);
            }
            Ok(-j.derivative / value)
        }
    }
}

/// `m_±(−z²)` from `−m₊(−z²) = n_q(z)`, `m₋(−z²) = n_q(−z)`.
pub fn m_function_herglotz(three: &ThreeSpectra, z: Complex64, side: Side) -> Result<Complex64> {
    match side {
        Side::Right => Ok(-n_function(three, z)?),
        Side::Left => n_function(three, -z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT2: f64 = core::f64::consts::SQRT_2;

    fn ci(v: f64) -> Complex64 {
        Complex64::new(0.0, v)
    }

    fn three_strategy(max: usize) -> impl Strategy<Value = ThreeSpectra> {
        (1..=max)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(0.2f64..3.0, n),
                    prop::collection::vec(0.05f64..0.95, n),
                    prop::collection::vec(any::<bool>(), n),
                )
            })
            .prop_filter_map("separated", |(mut k, frac, signs)| {
                k.sort_by(|a, b| b.partial_cmp(a).unwrap());
                if k.windows(2).any(|p| p[0] / p[1] < 1.1) {
                    return None;
                }
                let mu: Vec<f64> = (0..k.len())
                    .map(|j| {
                        let lo = k.get(j + 1).copied().unwrap_or(0.0);
                        let v = lo + (k[j] - lo) * frac[j];
                        if signs[j] {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect();
                ThreeSpectra::new(k, mu).ok()
            })
    }

    fn measure_strategy() -> impl Strategy<Value = HerglotzMeasure> {
        (
            prop::collection::vec(0.1f64..10.0, 0..7),
            prop::collection::vec(0.01f64..3.0, 7),
            prop_oneof![Just(0.0), 0.01f64..1.0],
        )
            .prop_filter_map("distinct atoms", |(mut xi, d, d0)| {
                xi.sort_by(|a, b| b.partial_cmp(a).unwrap());
                if xi.windows(2).any(|p| p[0] - p[1] < 1e-3) {
                    return None;
                }
                let n = xi.len();
                HerglotzMeasure::new(xi, d[..n].to_vec(), d0).ok()
            })
    }

    #[test]
    fn blaschke_examples() {
        assert!(blaschke(&[ci(1.0)], ci(1.0)).unwrap().norm() < 1e-300);
        let v = blaschke(&[ci(1.0)], ci(2.0)).unwrap();
        assert!((v - 1.0 / 3.0).norm() < 1e-15);
        assert_eq!(blaschke(&[ci(1.0)], ci(-1.0)), Err(Error::PoleHit));
        let a = scattering_a(&[1.0], c(2.0)).unwrap();
        assert!((a - Complex64::new(2.0, -1.0) / Complex64::new(2.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn a_dot_examples() {
        assert_eq!(a_dot(&[1.0], 1).unwrap(), 0.5);
        assert!((a_dot(&[2.0, 1.0], 2).unwrap() + 1.0 / 6.0).abs() < 1e-16);
        assert!(matches!(
            a_dot(&[1.0], 2),
            Err(Error::IndexOutOfRange { .. })
        ));
        // derivative of the product at the zero, by a difference quotient
        let k = [1.7, 0.9, 0.4];
        for n in 1..=3 {
            let z0 = ci(k[n - 1]);
            let h = 1e-6;
            let fd = (scattering_a(&k, z0 + ci(h)).unwrap()
                - scattering_a(&k, z0 - ci(h)).unwrap())
                / ci(2.0 * h);
            assert!(((ci(1.0) * fd).re - a_dot(&k, n).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn three_spectra_examples() {
        let three = ThreeSpectra::new(vec![1.0], vec![1.0 / 3.0]).unwrap();
        assert!((norming_from_three_spectra(&three, 1).unwrap() - 2.0).abs() < 1e-15);
        let mirror = ThreeSpectra::new(vec![1.0], vec![-1.0 / 3.0]).unwrap();
        assert!((norming_from_three_spectra(&mirror, 1).unwrap() - 1.0).abs() < 1e-15);

        let d = SpectralData::new(vec![1.0], vec![2.0]).unwrap();
        let mu = mu_from_norming(&d).unwrap();
        assert!((mu.mu()[0] - 1.0 / 3.0).abs() < 1e-13);
        let d = SpectralData::new(vec![1.0], vec![1.0]).unwrap();
        assert!((mu_from_norming(&d).unwrap().mu()[0] + 1.0 / 3.0).abs() < 1e-13);

        let s1 = SpectralData::new(vec![1.0], vec![SQRT2]).unwrap();
        assert_eq!(
            mu_from_norming(&s1),
            Err(Error::SpecialPotential { index: 1 })
        );
    }

    #[test]
    fn r_function_examples() {
        let three = ThreeSpectra::new(vec![1.0], vec![1.0 / 3.0]).unwrap();
        assert!((r_masses(&three)[0] - 8.0 / 9.0).abs() < 1e-15);
        let z = Complex64::new(0.3, 0.7);
        let p = r_eval(&three, z).unwrap();
        assert!((p - (z - 1.0) / (z - 1.0 / 9.0)).norm() < 1e-15);
        assert!((p - r_eval_sum(&three, z).unwrap()).norm() < 1e-14);
        assert_eq!(r_eval(&three, c(1.0 / 9.0)), Err(Error::PoleHit));
    }

    #[test]
    fn free_m_function() {
        let free = ThreeSpectra::new(vec![], vec![]).unwrap();
        let z = Complex64::new(0.8, 0.3);
        assert!((m_function(&free, z, Side::Right).unwrap() + z).norm() < 1e-15);
        assert!((m_function_herglotz(&free, z, Side::Right).unwrap() + z).norm() < 1e-15);
        assert!((m_function(&free, z, Side::Left).unwrap() + z).norm() < 1e-15);
    }

    #[test]
    fn m_function_routes_agree_on_s2() {
        let three = ThreeSpectra::new(vec![1.0], vec![1.0 / 3.0]).unwrap();
        for z in [
            Complex64::new(0.5, 0.1),
            Complex64::new(2.0, -0.4),
            Complex64::new(0.2, 1.3),
            c(4.0),
            Complex64::new(0.9, 0.9),
        ] {
            for side in [Side::Right, Side::Left] {
                let a = m_function(&three, z, side).unwrap();
                let b = m_function_herglotz(&three, z, side).unwrap();
                assert!((a - b).norm() < 1e-8 * (1.0 + b.norm()), "{z} {side:?}");
            }
        }
    }

    #[test]
    fn herglotz_examples() {
        let nu = HerglotzMeasure::new(vec![1.0], vec![1.0], 0.0).unwrap();
        assert!((herglotz_eval(&nu, c(3.0)).unwrap() - 0.5).norm() < 1e-15);
        assert_eq!(
            herglotz_eval(&HerglotzMeasure::empty(), ci(2.0)).unwrap(),
            c(1.0)
        );
        let eta = herglotz_zeros(&nu).unwrap();
        assert_eq!(eta.len(), 1);
        assert!((eta[0] - 2.0).abs() < 1e-13);
        let scaled = HerglotzMeasure::new(vec![1.0], vec![2.5], 0.0).unwrap();
        assert!((herglotz_zeros(&scaled).unwrap()[0] - 3.5).abs() < 1e-12);

        let seq = measure_to_product(&nu).unwrap();
        assert!((seq.lambda()[0] - 2.0).abs() < 1e-13);
        assert_eq!(seq.lambda()[1], 1.0);
        let back = product_to_measure(&ZeroPoleSequence::new(vec![2.0, 1.0]).unwrap()).unwrap();
        assert_eq!(back.xi(), &[1.0]);
        assert_eq!(back.d(), &[1.0]);
        assert!(measure_to_product(&HerglotzMeasure::empty())
            .unwrap()
            .lambda()
            .is_empty());
        assert_eq!(
            psi_eval(&ZeroPoleSequence::new(vec![]).unwrap(), ci(1.0)).unwrap(),
            c(1.0)
        );
        assert!(ZeroPoleSequence::new(vec![2.0]).is_err());
        assert!(ZeroPoleSequence::new(vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn mass_at_origin() {
        let nu = HerglotzMeasure::new(vec![2.0, 1.0], vec![0.5, 0.3], 0.2).unwrap();
        let seq = measure_to_product(&nu).unwrap();
        assert_eq!(seq.lambda().len(), 6);
        assert_eq!(*seq.lambda().last().unwrap(), 0.0);
        let back = product_to_measure(&seq).unwrap();
        assert!((back.d0() - 0.2).abs() < 1e-12);
        let z = Complex64::new(0.4, 0.6);
        assert!((psi_eval(&seq, z).unwrap() - herglotz_eval(&nu, z).unwrap()).norm() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn blaschke_unimodular_on_real_line(
            im in prop::collection::vec(0.01f64..3.0, 0..10),
            k in -10.0f64..10.0,
            y in 0.001f64..5.0,
        ) {
            let zeros: Vec<Complex64> = im.iter().map(|&v| ci(v)).collect();
            prop_assert!((blaschke(&zeros, c(k)).unwrap().norm() - 1.0).abs() < 1e-13);
            prop_assert!(blaschke(&zeros, Complex64::new(k, y)).unwrap().norm() <= 1.0 + 1e-14);
        }

        #[test]
        fn a_dot_sign_alternates(raw in prop::collection::vec(0.01f64..5.0, 1..10)) {
            let mut k = raw;
            k.sort_by(|a, b| b.partial_cmp(a).unwrap());
            k.dedup();
            for n in 1..=k.len() {
                let v = a_dot(&k, n).unwrap();
                prop_assert_eq!(v > 0.0, n % 2 == 1);
            }
        }

        #[test]
        fn norming_mu_round_trip(three in three_strategy(4)) {
            let data = spectral_data_from_three(&three).unwrap();
            let back = mu_from_norming(&data).unwrap();
            for (a, b) in back.mu().iter().zip(three.mu()) {
                prop_assert!((a - b).abs() < 1e-9 * b.abs().max(1e-3), "{} vs {}", a, b);
            }
        }

        #[test]
        fn r_product_and_sum_agree(three in three_strategy(4), re in -5.0f64..5.0, im in 0.01f64..5.0) {
            let z = Complex64::new(re, im);
            let a = r_eval(&three, z).unwrap();
            let b = r_eval_sum(&three, z).unwrap();
            prop_assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
            for &k in three.kappa() {
                prop_assert!(r_eval(&three, c(k * k)).unwrap().norm() < 1e-12);
            }
        }

        #[test]
        fn r_links_the_m_functions(three in three_strategy(2), re in 0.1f64..3.0, im in -2.0f64..2.0) {
            let z = Complex64::new(re, im);
            let lhs = 2.0 * z * r_eval(&three, z * z).unwrap();
            let mp = m_function(&three, z, Side::Right).unwrap();
            let mm = m_function(&three, z, Side::Left).unwrap();
            prop_assert!((lhs + mp + mm).norm() < 1e-8 * (1.0 + lhs.norm()));
        }

        #[test]
        fn herglotz_upper_half_plane(nu in measure_strategy(), re in -10.0f64..10.0, im in 1e-3f64..10.0) {
            let v = herglotz_eval(&nu, Complex64::new(re, im)).unwrap();
            prop_assert!(v.im >= -1e-12);
        }

        #[test]
        fn zeros_interlace_and_round_trip(nu in measure_strategy(), re in -10.0f64..10.0, im in 0.01f64..10.0) {
            let eta = herglotz_zeros(&nu).unwrap();
            let xi = nu.xi();
            for (k, &e) in eta.iter().enumerate() {
                let above = if k == 0 { f64::INFINITY } else { xi[k - 1] };
                let below = xi.get(k).copied().unwrap_or(0.0);
                prop_assert!(e > below && e < above);
            }
            let seq = measure_to_product(&nu).unwrap();
            let z = Complex64::new(re, im);
            let a = psi_eval(&seq, z).unwrap();
            let b = herglotz_eval(&nu, z).unwrap();
            prop_assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
            let back = product_to_measure(&seq).unwrap();
            prop_assert_eq!(back.xi(), nu.xi());
            for (a, b) in back.d().iter().zip(nu.d()) {
                prop_assert!((a - b).abs() < 1e-9 * b.max(1.0));
            }
            prop_assert!((back.d0() - nu.d0()).abs() < 1e-9);
        }
    }
}
