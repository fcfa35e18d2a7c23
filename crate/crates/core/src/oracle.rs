//! Brute-force scattering data by direct integration of `−y″ + q y = λ² y`.
//!
//! Nothing here uses the closed-form machinery of the other modules; the
//! potential is only ever sampled pointwise. This makes the oracle an
//! independent check on those formulas.

use alloc::boxed::Box;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gram::log_add_exp;
use crate::kdv::{eval_u, evolve_spectral};
use crate::ode::Dopri5;
use crate::potential::JostValue;
use crate::spectral_data::{Side, SpectralData};

/// Number of geometric grid points in the bound-state scan.
pub const SCAN_POINTS: usize = 400;
/// Ratio between the top and bottom of the bound-state scan.
pub const SCAN_RANGE: f64 = 1e4;
/// Absolute width at which root bisection stops.
pub const ROOT_TOL: f64 = 1e-12;
/// Relative inset of interval endpoints in the Dirichlet scan.
pub const ENDPOINT_INSET: f64 = 1e-10;
/// Smallest `|k|` accepted for real-axis scattering.
pub const MIN_REAL_K: f64 = 0.1;

enum Source {
    Callable(Box<dyn Fn(f64) -> f64 + Send + Sync>),
    Grid {
        start: f64,
        step: f64,
        values: Vec<f64>,
    },
    Panels(Panels),
}

/// Degree of the per-panel Chebyshev interpolants.
const PANEL_DEGREE: usize = 16;

/// Piecewise polynomial interpolation through Chebyshev–Lobatto samples.
struct Panels {
    start: f64,
    width: f64,
    nodes: [f64; PANEL_DEGREE + 1],
    values: Vec<f64>,
}

impl Panels {
    fn node(j: usize) -> f64 {
        -(core::f64::consts::PI * j as f64 / PANEL_DEGREE as f64).cos()
    }

    fn tabulate(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, max_width: f64) -> Result<Self> {
        let count = ((b - a) / max_width).ceil().max(1.0) as usize;
        let width = (b - a) / count as f64;
        let nodes: [f64; PANEL_DEGREE + 1] = core::array::from_fn(Self::node);
        let mut values = Vec::with_capacity(count * (PANEL_DEGREE + 1));
        for p in 0..count {
            let mid = a + width * (p as f64 + 0.5);
            for &s in &nodes {
                values.push(f(mid + 0.5 * width * s)?);
            }
        }
        Ok(Self {
            start: a,
            width,
            nodes,
            values,
        })
    }

    fn eval(&self, x: f64) -> f64 {
        let count = self.values.len() / (PANEL_DEGREE + 1);
        let p = (((x - self.start) / self.width).floor().max(0.0) as usize).min(count - 1);
        let mid = self.start + self.width * (p as f64 + 0.5);
        let s = (x - mid) / (0.5 * self.width);
        let v = &self.values[p * (PANEL_DEGREE + 1)..(p + 1) * (PANEL_DEGREE + 1)];
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, &vj) in v.iter().enumerate() {
            let diff = s - self.nodes[j];
            if diff == 0.0 {
                return vj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == PANEL_DEGREE {
                w *= 0.5;
            }
            num += w * vj / diff;
            den += w / diff;
        }
        num / den
    }
}

/// A potential known only through point samples on `[−L, L]` and treated
/// as zero outside.
pub struct SampledPotential {
    source: Source,
    half_length: f64,
    decay_rate: f64,
    depth: f64,
}

impl core::fmt::Debug for SampledPotential {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SampledPotential")
            .field("half_length", &self.half_length)
            .field("decay_rate", &self.decay_rate)
            .field("depth", &self.depth)
            .finish_non_exhaustive()
    }
}

const PROBE_POINTS: usize = 4001;

impl SampledPotential {
    fn build(source: Source, half_length: f64, decay_rate: f64) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidParams("half length must be positive"));
        }
        if !(decay_rate > 0.0) {
            return Err(Error::InvalidParams("decay rate must be positive"));
        }
        let mut pot = Self {
            source,
            half_length,
            decay_rate,
            depth: 0.0,
        };
        let mut depth: f64 = 0.0;
        for i in 0..PROBE_POINTS {
            let x = -half_length + 2.0 * half_length * i as f64 / (PROBE_POINTS - 1) as f64;
            let q = pot.q(x);
            if !q.is_finite() {
                return Err(Error::InvalidParams(
                    "potential is not finite on the domain",
                ));
            }
            depth = depth.max(q.abs());
        }
        pot.depth = depth;
        Ok(pot)
    }

    /// Wraps a callable `q`; `decay_rate` is the slowest exponential decay
    /// rate of `q`, used for tail estimates.
    pub fn from_fn(
        q: impl Fn(f64) -> f64 + Send + Sync + 'static,
        half_length: f64,
        decay_rate: f64,
    ) -> Result<Self> {
        Self::build(Source::Callable(Box::new(q)), half_length, decay_rate)
    }

    /// Equispaced samples starting at `start`; the domain is the largest
    /// symmetric interval covered. Values in between use cubic Lagrange
    /// interpolation.
    pub fn from_grid(start: f64, step: f64, values: Vec<f64>, decay_rate: f64) -> Result<Self> {
        if !(step > 0.0) || values.len() < 4 {
            return Err(Error::InvalidParams(
                "grid needs a positive step and 4+ samples",
            ));
        }
        let end = start + step * (values.len() - 1) as f64;
        let half_length = (-start).min(end);
        Self::build(
            Source::Grid {
                start,
                step,
                values,
            },
            half_length,
            decay_rate,
        )
    }

    /// Like [`from_fn`](Self::from_fn) but samples `q` once on Chebyshev
    /// panels of width at most `panel_width` and interpolates in between.
    /// For analytic `q` and panels small against its strip of analyticity
    /// the interpolant agrees with `q` to rounding.
    pub fn tabulated(
        q: impl Fn(f64) -> Result<f64>,
        half_length: f64,
        decay_rate: f64,
        panel_width: f64,
    ) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite() && panel_width > 0.0) {
            return Err(Error::InvalidParams(
                "half length and panel width must be positive",
            ));
        }
        let panels = Panels::tabulate(&q, -half_length, half_length, panel_width)?;
        Self::build(Source::Panels(panels), half_length, decay_rate)
    }

    /// The potential of `data` sampled through `eval_q`, on a domain wide
    /// enough for its tails to fall below `1e−12` of its depth.
    pub fn from_spectral(data: &SpectralData) -> Result<Self> {
        Self::from_spectral_at(data, 0.0)
    }

    /// The KdV solution `u(·, t)` generated by `data`, sampled like
    /// [`from_spectral`](Self::from_spectral).
    pub fn from_spectral_at(data: &SpectralData, t: f64) -> Result<Self> {
        let Some(&kn) = data.kappa().last() else {
            return Self::zero();
        };
        let outer = evolve_spectral(data, t)?
            .soliton_centers()
            .iter()
            .fold(0.0f64, |a, c| a.max(c.abs()));
        let half_length = 12.0f64
            .max(30.0 / kn)
            .max(outer + 12.0)
            .max(outer + 15.0 / kn);
        let k1 = data.kappa()[0];
        let data = data.clone();
        Self::tabulated(
            move |x| eval_u(&data, x, t),
            half_length,
            kn,
            0.5f64.min(0.25 / k1),
        )
    }

    /// `q ≡ 0` on `[−12, 12]`.
    pub fn zero() -> Result<Self> {
        Self::from_fn(|_| 0.0, 12.0, 1.0)
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    /// `max |q|` over the sampled domain.
    pub fn depth(&self) -> f64 {
        self.depth
    }

    /// Upper bound for bound-state parameters: `κ² < max |q|`.
    pub fn kappa_bound(&self) -> f64 {
        (self.depth * 1.001).sqrt()
    }

    pub fn q(&self, x: f64) -> f64 {
        if x.abs() > self.half_length {
            return 0.0;
        }
        match &self.source {
            Source::Callable(f) => f(x),
            Source::Panels(p) => p.eval(x),
            Source::Grid {
                start,
                step,
                values,
            } => {
                let u = (x - start) / step;
                let last = values.len() - 1;
                let i = (u.floor() as isize - 1).clamp(0, last as isize - 3) as usize;
                let mut acc = 0.0;
                for a in 0..4 {
                    let mut l = 1.0;
                    for b in 0..4 {
                        if a != b {
                            l *= (u - (i + b) as f64) / (a as f64 - b as f64);
                        }
                    }
                    acc += l * values[i + a];
                }
                acc
            }
        }
    }

    /// Checks that `|q(±L)| ≤ 1e−12 max|q|`.
    pub fn check_domain(&self) -> Result<()> {
        let edge = self
            .q(-self.half_length)
            .abs()
            .max(self.q(self.half_length).abs());
        if edge <= 1e-12 * self.depth {
            Ok(())
        } else {
            Err(Error::DomainViolation(
                "potential has not decayed at the domain edge",
            ))
        }
    }

    fn solver(&self) -> Dopri5 {
        Dopri5 {
            max_step: 0.5f64.min(0.5 / self.depth.sqrt().max(1e-300)),
            ..Dopri5::default()
        }
    }
}

/// A solution at `x = 0` stored as `e^{log_scale} (value, derivative)`,
/// together with `e^{−2 log_scale} ∫|y|²` over the integrated range.
#[derive(Debug, Clone, Copy)]
struct Shot {
    value: Complex64,
    derivative: Complex64,
    log_scale: f64,
    norm: f64,
}

impl Shot {
    fn unscaled(&self) -> (Complex64, Complex64) {
        let s = self.log_scale.exp();
        (self.value * s, self.derivative * s)
    }
}

/// `W(f, g) = f′g − fg′` on scaled values.
fn wronskian(f: &Shot, g: &Shot) -> Complex64 {
    f.derivative * g.value - f.value * g.derivative
}

fn check_lambda(lambda: Complex64, side: Side) -> Result<()> {
    if lambda == Complex64::new(0.0, 0.0) || !lambda.is_finite() {
        return Err(Error::DomainViolation("lambda must be finite and nonzero"));
    }
    match side {
        Side::Right if lambda.im < 0.0 => Err(Error::DomainViolation(
            "right Jost solution needs Im lambda >= 0",
        )),
        Side::Left if lambda.im > 0.0 => Err(Error::DomainViolation(
            "left Jost solution needs Im lambda <= 0",
        )),
        _ => Ok(()),
    }
}

/// Integrates the Jost solution of `side` from the domain edge to `x = 0`.
fn shoot(pot: &SampledPotential, lambda: Complex64, side: Side) -> Result<Shot> {
    let l = pot.half_length;
    let (x0, dir) = match side {
        Side::Right => (l, -1.0),
        Side::Left => (-l, 1.0),
    };
    // e^{iλ x0} split into a unimodular phase and a real log-magnitude.
    let i_lambda = Complex64::new(0.0, 1.0) * lambda;
    let phase = Complex64::from_polar(1.0, lambda.re * x0);
    let mut log_scale = -lambda.im * x0;
    let solver = pot.solver();
    if lambda.re == 0.0 {
        let nu2 = lambda.im * lambda.im;
        let mut y = [1.0, -lambda.im, 0.0];
        solver.integrate(
            |x, y, d| {
                d[0] = y[1];
                d[1] = (pot.q(x) + nu2) * y[0];
                d[2] = -dir * y[0] * y[0];
            },
            x0,
            0.0,
            &mut y,
            |_, y| {
                let s = y[0].abs().max(y[1].abs());
                if s > 0.0 {
                    log_scale += s.ln();
                    y[0] /= s;
                    y[1] /= s;
                    y[2] /= s * s;
                }
            },
        )?;
        check_finite(&y)?;
        return Ok(Shot {
            value: Complex64::new(y[0], 0.0),
            derivative: Complex64::new(y[1], 0.0),
            log_scale,
            norm: y[2].abs(),
        });
    }
    let l2 = lambda * lambda;
    let d0 = i_lambda * phase;
    let mut y = [phase.re, phase.im, d0.re, d0.im, 0.0];
    solver.integrate(
        |x, y, d| {
            let p = pot.q(x) - l2.re;
            d[0] = y[2];
            d[1] = y[3];
            d[2] = p * y[0] + l2.im * y[1];
            d[3] = p * y[1] - l2.im * y[0];
            d[4] = -dir * (y[0] * y[0] + y[1] * y[1]);
        },
        x0,
        0.0,
        &mut y,
        |_, y| {
            let s = y[..4].iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if s > 0.0 {
                log_scale += s.ln();
                y[..4].iter_mut().for_each(|v| *v /= s);
                y[4] /= s * s;
            }
        },
    )?;
    check_finite(&y)?;
    Ok(Shot {
        value: Complex64::new(y[0], y[1]),
        derivative: Complex64::new(y[2], y[3]),
        log_scale,
        norm: y[4].abs(),
    })
}

fn check_finite(y: &[f64]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::ToleranceNotMet { x: 0.0 })
    }
}

/// The Jost solution of `side` and its derivative at `x = 0`, started from
/// `e^{iλx}` at the domain edge.
pub fn integrate_jost(pot: &SampledPotential, lambda: Complex64, side: Side) -> Result<JostValue> {
    check_lambda(lambda, side)?;
    let (value, derivative) = shoot(pot, lambda, side)?.unscaled();
    Ok(JostValue {
        x: 0.0,
        lambda,
        value,
        derivative,
    })
}

/// Scattering coefficients `(a(k), b(k))` at real `k` with `|k| ≥ 0.1`,
/// defined by `e₊(·,k) = a e₋(·,k) + b e₋(·,−k)`.
pub fn compute_ab(pot: &SampledPotential, k: f64) -> Result<(Complex64, Complex64)> {
    if !(k.abs() >= MIN_REAL_K) || !k.is_finite() {
        return Err(Error::DomainViolation("|k| must be at least 0.1"));
    }
    let kc = Complex64::new(k, 0.0);
    let plus = shoot(pot, kc, Side::Right)?;
    let minus_neg = shoot(pot, -kc, Side::Left)?;
    let minus_pos = shoot(pot, kc, Side::Left)?;
    let two_ik = Complex64::new(0.0, 2.0 * k);
    let a = wronskian(&plus, &minus_neg) * (plus.log_scale + minus_neg.log_scale).exp() / two_ik;
    let b = -wronskian(&plus, &minus_pos) * (plus.log_scale + minus_pos.log_scale).exp() / two_ik;
    Ok((a, b))
}

/// Sign-carrying scaled Wronskian `W(e₊(·,iκ), e₋(·,−iκ))` at `x = 0`.
fn bound_state_wronskian(pot: &SampledPotential, kappa: f64) -> Result<f64> {
    let plus = shoot(pot, Complex64::new(0.0, kappa), Side::Right)?;
    let minus = shoot(pot, Complex64::new(0.0, -kappa), Side::Left)?;
    Ok(wronskian(&plus, &minus).re)
}

fn bisect(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    mut flo: f64,
) -> Result<f64> {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
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

fn scan(pot: &SampledPotential, kappa_max: f64, points: usize) -> Result<Vec<f64>> {
    let ratio = SCAN_RANGE.powf(1.0 / (points - 1) as f64);
    let grid: Vec<f64> = (0..points)
        .map(|i| kappa_max / ratio.powi(i as i32))
        .collect();
    let mut found = Vec::new();
    let mut prev = (grid[0], bound_state_wronskian(pot, grid[0])?);
    for &k in &grid[1..] {
        let w = bound_state_wronskian(pot, k)?;
        if w == 0.0 {
            found.push(k);
        } else if prev.1 != 0.0 && (w > 0.0) != (prev.1 > 0.0) {
            found.push(bisect(|x| bound_state_wronskian(pot, x), k, prev.0, w)?);
        }
        prev = (k, w);
    }
    Ok(found)
}

/// Bound-state parameters in `(κ_max/10⁴, κ_max]`, strictly decreasing.
/// The scan is refined once before a count mismatch is reported.
pub fn find_bound_states(
    pot: &SampledPotential,
    kappa_max: f64,
    expected: usize,
) -> Result<Vec<f64>> {
    if !(kappa_max > 0.0 && kappa_max.is_finite()) {
        return Err(Error::InvalidParams("kappa_max must be positive"));
    }
    let mut found = scan(pot, kappa_max, SCAN_POINTS)?;
    if found.len() != expected {
        found = scan(pot, kappa_max, 4 * SCAN_POINTS)?;
    }
    if found.len() != expected {
        return Err(Error::CountMismatch {
            expected,
            found: found.len(),
        });
    }
    Ok(found)
}

/// Right and left norming constants at a located bound state `κ`.
fn norming_pair(pot: &SampledPotential, kappa: f64) -> Result<(f64, f64)> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParams("kappa must be positive"));
    }
    let plus = shoot(pot, Complex64::new(0.0, kappa), Side::Right)?;
    let minus = shoot(pot, Complex64::new(0.0, -kappa), Side::Left)?;
    let (yp, dp) = (plus.value.re, plus.derivative.re);
    let (ym, dm) = (minus.value.re, minus.derivative.re);
    // e₊ = C e₋; the scaled ratio is fitted on value and derivative.
    let c = (yp * ym + dp * dm) / (ym * ym + dm * dm);
    let log_c = c.abs().ln() + plus.log_scale - minus.log_scale;
    let l = pot.half_length;
    let log_tail = -2.0 * kappa * l - (2.0 * kappa).ln();
    // ln ∫|e₊|² over the line, including the analytic tails.
    let log_norm = [
        2.0 * plus.log_scale + plus.norm.ln(),
        2.0 * plus.log_scale + 2.0 * c.abs().ln() + minus.norm.ln(),
        log_tail,
        log_tail + 2.0 * log_c,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, log_add_exp);
    let m_plus = (-0.5 * log_norm).exp();
    let m_minus = (-0.5 * (log_norm - 2.0 * log_c)).exp();
    Ok((m_plus, m_minus))
}

/// `(∫|e₊(x,iκ)|² dx)^{−1/2}` with exponential tails beyond the domain.
pub fn norming_constant(pot: &SampledPotential, kappa: f64) -> Result<f64> {
    Ok(norming_pair(pot, kappa)?.0)
}

/// `(∫|e₋(x,−iκ)|² dx)^{−1/2}`.
pub fn norming_constant_left(pot: &SampledPotential, kappa: f64) -> Result<f64> {
    Ok(norming_pair(pot, kappa)?.1)
}

/// Signed Dirichlet parameters on `(κ_{n+1}, κ_n)` and `(0, κ_N)`: positive
/// where `e₊(0, iμ)` changes sign, negative where `e₋(0, −iμ)` does.
pub fn dirichlet_spectra(pot: &SampledPotential, kappa: &[f64]) -> Result<Vec<f64>> {
    let plus = |m: f64| Ok(shoot(pot, Complex64::new(0.0, m), Side::Right)?.value.re);
    let minus = |m: f64| Ok(shoot(pot, Complex64::new(0.0, -m), Side::Left)?.value.re);
    let mut out = Vec::with_capacity(kappa.len());
    for (i, &hi) in kappa.iter().enumerate() {
        let lo = kappa.get(i + 1).copied().unwrap_or(0.0);
        let inset = ENDPOINT_INSET * (hi - lo);
        let (a, b) = (lo + inset, hi - inset);
        let pa = plus(a)?;
        let pb = plus(b)?;
        let ma = minus(a)?;
        let mb = minus(b)?;
        let p_fires = (pa > 0.0) != (pb > 0.0);
        let m_fires = (ma > 0.0) != (mb > 0.0);
        let fired = p_fires as usize + m_fires as usize;
        if fired != 1 {
            return Err(Error::GenericityFailure {
                interval: i + 1,
                fired,
            });
        }
        if p_fires {
            out.push(bisect(plus, a, b, pa)?);
        } else {
            out.push(-bisect(minus, a, b, ma)?);
        }
    }
    Ok(out)
}

/// `max |b(k)/a(k)|` over `k_grid ⊂ [0.1, ∞)`.
pub fn reflection_sweep(pot: &SampledPotential, k_grid: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &k in k_grid {
        if !(k >= MIN_REAL_K) {
            return Err(Error::DomainViolation(
                "reflection grid must lie in [0.1, inf)",
            ));
        }
        let (a, b) = compute_ab(pot, k)?;
        worst = worst.max((b / a).norm());
    }
    Ok(worst)
}

/// Largest relative change of the Wronskian of two independent real-`k`
/// solutions integrated across the whole domain.
pub fn wronskian_drift(pot: &SampledPotential, k: f64) -> Result<f64> {
    if !(k.abs() >= MIN_REAL_K) {
        return Err(Error::DomainViolation("|k| must be at least 0.1"));
    }
    let l = pot.half_length;
    let k2 = k * k;
    // (cos kx, sin kx) at the left edge.
    let (s, c) = (k * -l).sin_cos();
    let mut y = [c, -k * s, s, k * c];
    let w0 = y[0] * y[3] - y[1] * y[2];
    let mut drift: f64 = 0.0;
    pot.solver().integrate(
        |x, y, d| {
            let p = pot.q(x) - k2;
            d[0] = y[1];
            d[1] = p * y[0];
            d[2] = y[3];
            d[3] = p * y[2];
        },
        -l,
        l,
        &mut y,
        |_, y| {
            let w = y[0] * y[3] - y[1] * y[2];
            drift = drift.max(((w - w0) / w0).abs());
        },
    )?;
    Ok(drift)
}

/// Everything the oracle can say about a sampled potential.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub kappa: Vec<f64>,
    pub m: Vec<f64>,
    /// `None` when some interval fails the genericity test.
    pub mu: Option<Vec<f64>>,
    pub max_reflection: f64,
    /// Bracket width of each located `κ̂`.
    pub kappa_error: f64,
    /// `max ||a|² − |b|² − 1|` over the reflection grid.
    pub unitarity_defect: f64,
    /// Wronskian drift at `k = 1`.
    pub wronskian_drift: f64,
}

/// Runs every oracle measurement on `pot`.
pub fn analyze(pot: &SampledPotential, expected: usize, k_grid: &[f64]) -> Result<OracleReport> {
    let kappa = if expected == 0 && pot.depth() == 0.0 {
        Vec::new()
    } else {
        find_bound_states(pot, pot.kappa_bound(), expected)?
    };
    let m = kappa
        .iter()
        .map(|&k| norming_constant(pot, k))
        .collect::<Result<Vec<_>>>()?;
    let mu = match dirichlet_spectra(pot, &kappa) {
        Ok(mu) => Some(mu),
        Err(Error::GenericityFailure { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut max_reflection: f64 = 0.0;
    let mut unitarity_defect: f64 = 0.0;
    for &k in k_grid {
        if !(k >= MIN_REAL_K) {
            return Err(Error::DomainViolation(
                "reflection grid must lie in [0.1, inf)",
            ));
        }
        let (a, b) = compute_ab(pot, k)?;
        max_reflection = max_reflection.max((b / a).norm());
        unitarity_defect = unitarity_defect.max((a.norm_sqr() - b.norm_sqr() - 1.0).abs());
    }
    Ok(OracleReport {
        kappa,
        m,
        mu,
        max_reflection,
        kappa_error: ROOT_TOL,
        unitarity_defect,
        wronskian_drift: wronskian_drift(pot, 1.0)?,
    })
}

/// `k = 0.3, 0.4, …, 5.0`, the default reflection grid.
pub fn default_k_grid() -> Vec<f64> {
    (3..=50).map(|i| 0.1 * i as f64).collect()
}
