//! The potential `q = 2Q'`, `Q(x) = κᵀ M(x,0)⁻¹ κ`, its Jost solutions and
//! the classical identities they satisfy.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::blaschke::a_dot;
use crate::error::{Error, Result};
use crate::gram::{assemble, gamma_inverse_kappa, logdet_shift, GramSystem};
use crate::linalg::Dot2;
use crate::quadrature::GaussLegendre;
use crate::spectral_data::{Side, SpectralData, ThreeSpectra};

/// Distance from `−iκ_j` at which a Jost evaluation is refused.
pub const POLE_TOL: f64 = 1e-12;

/// `Q`, `q` and the per-index terms `−4κ_j d_j w_j²` of `q` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialEvaluation {
    pub x: f64,
    pub big_q: f64,
    pub q: f64,
    pub contributions: Vec<f64>,
}

/// Evaluates `Q` and `q` at `(x, t)`; `t = 0` gives the potential itself.
pub(crate) fn field(data: &SpectralData, x: f64, t: f64) -> Result<PotentialEvaluation> {
    if data.is_empty() {
        return Ok(PotentialEvaluation {
            x,
            big_q: 0.0,
            q: 0.0,
            contributions: Vec::new(),
        });
    }
    let sys = assemble(data, x, t)?;
    let kappa = data.kappa();
    let w = sys.solve_kappa()?;
    let mut acc = Dot2::new(0.0);
    for (k, w) in kappa.iter().zip(&w) {
        acc.add_product(*k, *w);
    }
    let direct = acc.value();
    let total: f64 = 2.0 * kappa.iter().sum::<f64>();
    // Where Q sits near its upper limit it is recovered from the small
    // positive gap 2Σκ − Q = (Γ⁻¹κ)ᵀ D w instead, which keeps it accurate
    // and monotone on the flat left shoulder.
    let big_q = if direct > 0.5 * total {
        let v = gamma_inverse_kappa(kappa);
        let mut gap = Dot2::new(0.0);
        for j in (0..kappa.len()).filter(|&j| w[j] != 0.0) {
            gap.add_product(v[j] * sys.log_diag_weight()[j].exp(), w[j]);
        }
        total - gap.value()
    } else {
        direct
    };
    let contributions: Vec<f64> = kappa
        .iter()
        .zip(&w)
        .zip(sys.log_diag_weight())
        .map(|((k, w), lw)| {
            if *w == 0.0 {
                0.0
            } else {
                -4.0 * k * (lw + 2.0 * w.abs().ln()).exp()
            }
        })
        .collect();
    let q = contributions.iter().sum();
    Ok(PotentialEvaluation {
        x,
        big_q,
        q,
        contributions,
    })
}

/// `Q(x) = κᵀ M(x,0)⁻¹ κ`, decreasing from `2Σκ_j` to `0`.
pub fn eval_big_q(data: &SpectralData, x: f64) -> Result<f64> {
    Ok(field(data, x, 0.0)?.big_q)
}

/// `q(x) = −4 Σ_j κ_j d_j(x) w_j²` with `w = M(x,0)⁻¹ κ`.
pub fn eval_q(data: &SpectralData, x: f64) -> Result<PotentialEvaluation> {
    field(data, x, 0.0)
}

/// `q` as `−2 (ln det(I + M_raw))''`, differentiated with a five-point
/// stencil of step `h`.
pub fn eval_q_kaymoses(data: &SpectralData, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParams("step must be positive"));
    }
    if data.is_empty() {
        return Ok(0.0);
    }
    let f = |s: f64| logdet_shift(data, x + s * h);
    let second =
        (-f(2.0)? + 16.0 * f(1.0)? - 30.0 * f(0.0)? + 16.0 * f(-1.0)? - f(-2.0)?) / (12.0 * h * h);
    Ok(-2.0 * second)
}

/// A Jost solution and its `x`-derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostValue {
    pub x: f64,
    pub lambda: Complex64,
    pub value: Complex64,
    pub derivative: Complex64,
}

fn check_pole(data: &SpectralData, lambda: Complex64, sign: f64) -> Result<()> {
    for (j, &k) in data.kappa().iter().enumerate() {
        if (lambda + Complex64::new(0.0, sign * k)).norm() < POLE_TOL {
            return Err(Error::PoleAtLambda { index: j + 1 });
        }
    }
    Ok(())
}

/// Right Jost solution in closed form. With `ρ = −iλ`,
/// `e₊(x,λ) = e^{−ρx} f(x,ρ)`, `f = 1 − Σ_j κ_j w_j / (κ_j + ρ)`.
///
/// `f` is rewritten around the index `n` with `κ_n` closest to `ρ` using
/// `(Mw)_n = κ_n`, which removes the cancellation that otherwise destroys
/// `e₊(x, iκ_n)` for large negative `x`.
fn jost_right_parts(
    data: &SpectralData,
    x: f64,
    lambda: Complex64,
) -> Result<(Complex64, Complex64)> {
    let rho = Complex64::new(lambda.im, -lambda.re);
    let free = (-rho * x).exp();
    if data.is_empty() {
        return Ok((free, -rho * free));
    }
    let sys: GramSystem = assemble(data, x, 0.0)?;
    let kappa = data.kappa();
    let n = kappa.len();
    let lw = sys.log_diag_weight();
    let w = sys.solve_kappa()?;
    let rhs: Vec<f64> = (0..n)
        .map(|j| {
            if w[j] == 0.0 {
                0.0
            } else {
                2.0 * kappa[j] * lw[j].exp() * w[j]
            }
        })
        .collect();
    let wp: Vec<f64> = sys.solve(&rhs)?.into_iter().map(|v| -v).collect();

    let anchor = (0..n).filter(|&j| sys.is_active(j)).min_by(|&a, &b| {
        let da = (rho - kappa[a]).norm();
        let db = (rho - kappa[b]).norm();
        da.partial_cmp(&db).unwrap()
    });
    let Some(a) = anchor else {
        return Ok((free, -rho * free));
    };
    let ka = kappa[a];
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let den = (rho + kappa[j]) * (kappa[j] + ka);
        s0 += kappa[j] * w[j] / den;
        s1 += kappa[j] * wp[j] / den;
    }
    // e^{−ρx} d_a, combined in log space
    let lead = (lw[a] - rho * x).exp();
    let gap = ka - rho;
    let (tail_f, tail_fp) = if gap == Complex64::new(0.0, 0.0) {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (free * gap * s0, free * gap * s1)
    };
    let ef = lead * (w[a] / ka) - tail_f;
    let efp = lead * ((2.0 * ka * w[a] + wp[a]) / ka) - tail_fp;
    Ok((ef, efp - rho * ef))
}

/// `e₊(x, λ)` for `Im λ ≥ 0`, `λ ≠ 0`.
pub fn eval_jost_right(data: &SpectralData, x: f64, lambda: Complex64) -> Result<JostValue> {
    check_pole(data, lambda, 1.0)?;
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::DomainViolation("lambda must be nonzero"));
    }
    if lambda.im < 0.0 {
        return Err(Error::DomainViolation(
            "right Jost solution needs Im lambda >= 0",
        ));
    }
    let (value, derivative) = jost_right_parts(data, x, lambda)?;
    Ok(JostValue {
        x,
        lambda,
        value,
        derivative,
    })
}

/// Left norming constants `m_{j,−} = 1/(m_j |iȧ(iκ_j)|)`.
pub fn left_norming(data: &SpectralData) -> Result<Vec<f64>> {
    (1..=data.len())
        .map(|n| Ok(1.0 / (data.m()[n - 1] * a_dot(data.kappa(), n)?.abs())))
        .collect()
}

/// Spectral data of the reflected potential `x ↦ q(−x)`.
pub fn reflect(data: &SpectralData) -> Result<SpectralData> {
    SpectralData::new(data.kappa().to_vec(), left_norming(data)?)
}

/// `e₋(x, λ)` for `Im λ ≤ 0`, `λ ≠ 0`, from the right solution of the
/// reflected potential.
pub fn eval_jost_left(data: &SpectralData, x: f64, lambda: Complex64) -> Result<JostValue> {
    check_pole(data, lambda, -1.0)?;
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::DomainViolation("lambda must be nonzero"));
    }
    if lambda.im > 0.0 {
        return Err(Error::DomainViolation(
            "left Jost solution needs Im lambda <= 0",
        ));
    }
    let mirrored = reflect(data)?;
    let (value, derivative) = jost_right_parts(&mirrored, -x, -lambda)?;
    Ok(JostValue {
        x,
        lambda,
        value,
        derivative: -derivative,
    })
}

/// Half-line Jost function at the origin, `Π_n (λ − iμ_n)/(λ ± iκ_n)`.
pub fn jost_at_origin(three: &ThreeSpectra, lambda: Complex64, side: Side) -> Result<Complex64> {
    let sign = match side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    let mut value = Complex64::new(1.0, 0.0);
    for (j, (&k, &mu)) in three.kappa().iter().zip(three.mu()).enumerate() {
        let den = lambda + Complex64::new(0.0, sign * k);
        if den.norm() < POLE_TOL {
            return Err(Error::PoleAtLambda { index: j + 1 });
        }
        value *= (lambda - Complex64::new(0.0, mu)) / den;
    }
    Ok(value)
}

/// `−4 Σ_j κ_j m_j² |e₊(x, iκ_j)|²`.
pub fn sum_rule_q(data: &SpectralData, x: f64) -> Result<f64> {
    let mut q = 0.0;
    for (&k, &m) in data.kappa().iter().zip(data.m()) {
        let e = eval_jost_right(data, x, Complex64::new(0.0, k))?.value;
        q -= 4.0 * k * m * m * e.norm_sqr();
    }
    Ok(q)
}

/// Half-width of the window that holds the bulk of `q` and of the bound
/// states: `max(10, 30/κ_N)` beyond the farthest soliton centre.
pub(crate) fn window(data: &SpectralData) -> f64 {
    let Some(&kn) = data.kappa().last() else {
        return 10.0;
    };
    let spread = data
        .soliton_centers()
        .iter()
        .fold(0.0f64, |acc, c| acc.max(c.abs()));
    (30.0 / kn).max(10.0) + spread
}

fn panel(data: &SpectralData) -> f64 {
    data.kappa().first().map_or(0.5, |k1| (0.25 / k1).min(0.5))
}

/// `∫|q|` by composite Gauss–Legendre on a window plus the exponential
/// tails `2 m_j² e^{−2κ_j X}` (and the same with left norming constants).
pub fn trace_integral(data: &SpectralData) -> Result<f64> {
    if data.is_empty() {
        return Ok(0.0);
    }
    let big_x = window(data);
    let rule = GaussLegendre::new(16);
    let mut err = None;
    let bulk = rule.composite(
        |x| match eval_q(data, x) {
            Ok(e) => -e.q,
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        -big_x,
        big_x,
        panel(data),
    );
    if let Some(e) = err {
        return Err(e);
    }
    let left = left_norming(data)?;
    let tails: f64 = data
        .kappa()
        .iter()
        .zip(data.m().iter().zip(&left))
        .map(|(k, (mr, ml))| 2.0 * (mr * mr + ml * ml) * (-2.0 * k * big_x).exp())
        .sum();
    Ok(bulk + tails)
}

/// `∫|e₊(x, iκ_n)|² dx` (1-based `n`), which should equal `m_n⁻²`.
pub fn jost_norm_integral(data: &SpectralData, n: usize) -> Result<f64> {
    if n == 0 || n > data.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: data.len(),
        });
    }
    let k = data.kappa()[n - 1];
    let lambda = Complex64::new(0.0, k);
    let big_x = window(data);
    let rule = GaussLegendre::new(16);
    let mut err = None;
    let bulk = rule.composite(
        |x| match eval_jost_right(data, x, lambda) {
            Ok(j) => j.value.norm_sqr(),
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        -big_x,
        big_x,
        panel(data),
    );
    if let Some(e) = err {
        return Err(e);
    }
    // e₊ = C e₋ with |C|² = m₋²/m₊².
    let ml = left_norming(data)?[n - 1];
    let mr = data.m()[n - 1];
    let c2 = (ml / mr).powi(2);
    Ok(bulk + (1.0 + c2) * (-2.0 * k * big_x).exp() / (2.0 * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    const SQRT2: f64 = core::f64::consts::SQRT_2;

    fn s1() -> SpectralData {
        SpectralData::new(vec![1.0], vec![SQRT2]).unwrap()
    }

    fn s2() -> SpectralData {
        SpectralData::new(vec![1.0], vec![2.0]).unwrap()
    }

    fn sech2(x: f64) -> f64 {
        1.0 / x.cosh().powi(2)
    }

    fn ci(v: f64) -> Complex64 {
        Complex64::new(0.0, v)
    }

    fn data_strategy(max: usize) -> impl Strategy<Value = SpectralData> {
        (1..=max)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(0.3f64..2.0, n),
                    prop::collection::vec(-1.0f64..1.0, n),
                )
            })
            .prop_filter_map("distinct kappa", |(mut k, s)| {
                k.sort_by(|a, b| b.partial_cmp(a).unwrap());
                if k.windows(2).any(|p| p[0] < 1.25 * p[1]) {
                    return None;
                }
                let m = k
                    .iter()
                    .zip(&s)
                    .map(|(k, s)| (2.0 * k).sqrt() * (2.0 * s).exp())
                    .collect();
                SpectralData::new(k, m).ok()
            })
    }

    #[test]
    fn single_soliton_closed_forms() {
        for i in 0..=40 {
            let x = -10.0 + 0.5 * i as f64;
            let e = eval_q(&s1(), x).unwrap();
            assert!((e.q + 2.0 * sech2(x)).abs() < 1e-13);
            assert!((e.big_q - (1.0 - x.tanh())).abs() < 1e-13);
        }
        assert!((eval_q(&s2(), 0.0).unwrap().q + 16.0 / 9.0).abs() < 1e-14);
        let z = eval_q(&SpectralData::empty(), 3.0).unwrap();
        assert_eq!((z.big_q, z.q), (0.0, 0.0));
    }

    #[test]
    fn kaymoses_single_soliton() {
        let v = eval_q_kaymoses(&s1(), 0.0, 1e-3).unwrap();
        assert!((v + 2.0).abs() < 5e-6);
        assert_eq!(
            eval_q_kaymoses(&SpectralData::empty(), 0.0, 1e-3).unwrap(),
            0.0
        );
    }

    #[test]
    fn jost_single_soliton() {
        let free = eval_jost_right(&SpectralData::empty(), 0.7, Complex64::new(2.0, 0.5)).unwrap();
        let expect = (Complex64::i() * Complex64::new(2.0, 0.5) * 0.7).exp();
        assert!((free.value - expect).norm() < 1e-15);

        let j = eval_jost_right(&s1(), 0.0, ci(1.0)).unwrap();
        assert!((j.value - 0.5).norm() < 1e-15);
        for x in [-60.0, -20.0, -3.0, 0.4, 5.0, 30.0] {
            let j = eval_jost_right(&s1(), x, ci(1.0)).unwrap();
            let exact = 1.0 / (2.0 * x.cosh());
            assert!((j.value.re - exact).abs() < 1e-14 * exact, "x = {x}");
            let dexact = -x.sinh() / (2.0 * x.cosh().powi(2));
            assert!((j.derivative.re - dexact).abs() < 1e-13 * exact);
        }
        let l = left_norming(&s1()).unwrap();
        assert!((l[0] - SQRT2).abs() < 1e-15);
    }

    #[test]
    fn jost_errors() {
        assert!(matches!(
            eval_jost_right(&s1(), 0.0, Complex64::new(0.0, 0.0)),
            Err(Error::DomainViolation(_))
        ));
        assert!(matches!(
            eval_jost_right(&s1(), 0.0, ci(-1.0)),
            Err(Error::PoleAtLambda { index: 1 })
        ));
        assert!(matches!(
            eval_jost_left(&s1(), 0.0, ci(1.0)),
            Err(Error::PoleAtLambda { index: 1 })
        ));
        assert!(matches!(
            eval_jost_left(&s1(), 0.0, ci(0.5)),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn half_line_jost_products() {
        let three = ThreeSpectra::new(vec![1.0], vec![1.0 / 3.0]).unwrap();
        let v = jost_at_origin(&three, ci(1.0), Side::Right).unwrap();
        assert!((v - 1.0 / 3.0).norm() < 1e-15);
        let v = jost_at_origin(&three, ci(1.0 / 3.0), Side::Right).unwrap();
        assert!(v.norm() < 1e-16);
        let closed = eval_jost_right(&s2(), 0.0, ci(2.0)).unwrap().value;
        let product = jost_at_origin(&three, ci(2.0), Side::Right).unwrap();
        assert!((closed - product).norm() < 1e-10);
        // left side: e₋(0, −iν) = Π (ν + μ)/(ν + κ)
        let left = eval_jost_left(&s2(), 0.0, ci(-2.0)).unwrap().value;
        let product = jost_at_origin(&three, ci(-2.0), Side::Left).unwrap();
        assert!((left - product).norm() < 1e-10);
        assert!(matches!(
            jost_at_origin(&three, ci(-1.0), Side::Right),
            Err(Error::PoleAtLambda { index: 1 })
        ));
    }

    #[test]
    fn sum_rule_examples() {
        assert!((sum_rule_q(&s1(), 0.0).unwrap() + 2.0).abs() < 1e-14);
        assert_eq!(sum_rule_q(&SpectralData::empty(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn q_is_twice_derivative_of_big_q() {
        let d = SpectralData::new(vec![1.5, 0.8, 0.3], vec![0.5, 1.7, 0.4]).unwrap();
        let h = 1e-4;
        for i in 0..21 {
            let x = -8.0 + 0.8 * i as f64;
            let fd = (eval_big_q(&d, x + h).unwrap() - eval_big_q(&d, x - h).unwrap()) / (2.0 * h);
            let q = eval_q(&d, x).unwrap();
            assert!((q.q - 2.0 * fd).abs() < 1e-6);
            let s: f64 = q.contributions.iter().sum();
            assert!((s - q.q).abs() <= 1e-12 * q.q.abs());
        }
    }

    #[test]
    fn trace_formula_small() {
        for d in [
            s1(),
            s2(),
            SpectralData::new(vec![1.2, 0.5], vec![3.0, 0.2]).unwrap(),
        ] {
            let expect = 4.0 * d.kappa().iter().sum::<f64>();
            let v = trace_integral(&d).unwrap();
            assert!((v - expect).abs() < 1e-9 * expect);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn big_q_bounds_and_monotonicity(d in data_strategy(5)) {
            let top = 2.0 * d.kappa().iter().sum::<f64>();
            let kn = *d.kappa().last().unwrap();
            let mut prev = f64::INFINITY;
            for i in 0..=200 {
                let x = -30.0 + 0.3 * i as f64;
                let e = eval_q(&d, x).unwrap();
                prop_assert!(e.big_q >= 0.0 && e.big_q <= top, "x={} Q={} top={}", x, e.big_q, top);
                prop_assert!(e.big_q <= prev, "x={} Q={} prev={}", x, e.big_q, prev);
                prop_assert!(e.q < 0.0);
                prop_assert!(e.q.abs() <= 2.0 * d.kappa()[0].powi(2) * (1.0 + 1e-12));
                prev = e.big_q;
            }
            let far = eval_big_q(&d, -40.0 / kn - window(&d)).unwrap();
            prop_assert!((far - top).abs() < 1e-8);
        }

        #[test]
        fn sum_rules_match(d in data_strategy(3)) {
            let left = reflect(&d).unwrap();
            for i in 0..=100 {
                let x = -10.0 + 0.2 * i as f64;
                let q = eval_q(&d, x).unwrap().q;
                let s = sum_rule_q(&d, x).unwrap();
                prop_assert!((q - s).abs() <= 1e-9 * q.abs(), "x={} q={} s={}", x, q, s);
                let sl: f64 = d.kappa().iter().zip(left.m()).map(|(&k, &m)| {
                    let e = eval_jost_left(&d, x, ci(-k)).unwrap().value;
                    -4.0 * k * m * m * e.norm_sqr()
                }).sum();
                prop_assert!((q - sl).abs() <= 1e-9 * q.abs());
            }
        }

        #[test]
        fn reflection_symmetry(d in data_strategy(4)) {
            let r = reflect(&d).unwrap();
            for i in 0..=40 {
                let x = -10.0 + 0.5 * i as f64;
                let a = eval_q(&r, x).unwrap().q;
                let b = eval_q(&d, -x).unwrap().q;
                prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1e-300), "x={} a={} b={}", x, a, b);
            }
        }

        #[test]
        fn norm_integral_is_inverse_square_norming(d in data_strategy(3)) {
            for n in 1..=d.len() {
                let v = jost_norm_integral(&d, n).unwrap();
                let m = d.m()[n - 1];
                prop_assert!((v * m * m - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn jost_solves_the_equation(d in data_strategy(3), re in -3.0f64..3.0, im in 0.1f64..3.0, x in -4.0f64..4.0) {
            let lambda = Complex64::new(re, im);
            let h = 1e-4;
            let at = |s: f64| eval_jost_right(&d, x + s, lambda).unwrap();
            let mid = at(0.0);
            let dd = (at(h).derivative - at(-h).derivative) / (2.0 * h);
            let fd = (at(h).value - at(-h).value) / (2.0 * h);
            let q = eval_q(&d, x).unwrap().q;
            let resid = -dd + q * mid.value - lambda * lambda * mid.value;
            let scale = mid.value.norm() * (1.0 + q.abs() + lambda.norm_sqr());
            prop_assert!(resid.norm() < 1e-6 * scale);
            prop_assert!((fd - mid.derivative).norm() < 1e-6 * (mid.value.norm() + mid.derivative.norm()));
        }
    }

    #[test]
    fn wronskian_gives_scattering_coefficient() {
        let d = SpectralData::new(vec![1.4, 0.6], vec![0.9, 1.3]).unwrap();
        let k = 1.0;
        let r = eval_jost_right(&d, 0.3, Complex64::new(k, 0.0)).unwrap();
        let l = eval_jost_left(&d, 0.3, Complex64::new(-k, 0.0)).unwrap();
        let w = r.derivative * l.value - r.value * l.derivative;
        let a: Complex64 = d
            .kappa()
            .iter()
            .map(|&kj| (Complex64::new(k, -kj)) / Complex64::new(k, kj))
            .product();
        assert!((w - 2.0 * ci(k) * a).norm() < 1e-12);
    }
}
