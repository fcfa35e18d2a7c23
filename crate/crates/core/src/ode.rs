//! Adaptive Dormand–Prince 5(4) integration of first-order systems.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Step-size controlled integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Upper bound on `|h|`; keeps the stepper from jumping over features.
    pub max_step: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-13,
            max_steps: 1_000_000,
            max_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

impl Dopri5 {
    /// Advances `y` from `t0` to `t1` (either direction) under `y' = f(t, y)`.
    ///
    /// `after_step(t, y)` runs after every accepted step and may rescale the
    /// state in place, e.g. to keep growing solutions representable.
    pub fn integrate<F, H>(
        &self,
        mut f: F,
        t0: f64,
        t1: f64,
        y: &mut [f64],
        mut after_step: H,
    ) -> Result<OdeStats>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        H: FnMut(f64, &mut [f64]),
    {
        let n = y.len();
        let mut stats = OdeStats::default();
        if t0 == t1 {
            return Ok(stats);
        }
        let dir = (t1 - t0).signum();
        let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
        let mut stage = vec![0.0; n];
        let mut t = t0;
        f(t, y, &mut k[0]);
        let mut h = dir * self.initial_step(y, &k[0]).min((t1 - t0).abs());
        loop {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::ToleranceNotMet { x: t });
            }
            let last = (t + h - t1) * dir >= 0.0;
            if last {
                h = t1 - t;
            }
            for s in 0..6 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, a) in A[s].iter().enumerate() {
                        acc += h * a * k[j][i];
                    }
                    stage[i] = acc;
                }
                f(t + C[s] * h, &stage, &mut k[s + 1]);
            }
            // `stage` now holds the fifth-order solution.
            let mut err = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, c) in E.iter().enumerate() {
                    e += c * k[j][i];
                }
                let sc = self.atol + self.rtol * y[i].abs().max(stage[i].abs());
                err += (h * e / sc).powi(2);
            }
            let err = (err / n.max(1) as f64).sqrt();
            if err <= 1.0 {
                stats.accepted += 1;
                t = if last { t1 } else { t + h };
                y.copy_from_slice(&stage);
                after_step(t, y);
                if last {
                    return Ok(stats);
                }
                f(t, y, &mut k[0]);
            } else {
                stats.rejected += 1;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            let next =
                (h.abs() * if err <= 1.0 { factor } else { factor.min(1.0) }).min(self.max_step);
            if next <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::ToleranceNotMet { x: t });
            }
            h = dir * next;
        }
    }

    fn initial_step(&self, y: &[f64], dy: &[f64]) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for (a, b) in y.iter().zip(dy) {
            let sc = self.atol + self.rtol * a.abs();
            d0 += (a / sc).powi(2);
            d1 += (b / sc).powi(2);
        }
        let h = if d0 < 1e-10 || d1 < 1e-10 {
            1e-6
        } else {
            0.01 * (d0 / d1).sqrt()
        };
        h.min(self.max_step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let mut y = [1.0];
        let s = Dopri5::default()
            .integrate(|_, y, d| d[0] = y[0], 0.0, 2.0, &mut y, |_, _| {})
            .unwrap();
        assert!((y[0] - 2.0f64.exp()).abs() < 1e-10 * 2.0f64.exp());
        assert!(s.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        // y'' = −y from 10 down to 0 starting on (cos, −sin).
        let mut y = [10.0f64.cos(), -(10.0f64.sin())];
        Dopri5::default()
            .integrate(
                |_, y, d| {
                    d[0] = y[1];
                    d[1] = -y[0];
                },
                10.0,
                0.0,
                &mut y,
                |_, _| {},
            )
            .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9);
        assert!(y[1].abs() < 1e-9);
    }

    #[test]
    fn renormalization_hook_rescales() {
        let mut y = [1.0];
        let mut log_scale = 0.0;
        Dopri5::default()
            .integrate(
                |_, y, d| d[0] = 3.0 * y[0],
                0.0,
                400.0,
                &mut y,
                |_, y| {
                    let s = y[0].abs();
                    log_scale += s.ln();
                    y[0] /= s;
                },
            )
            .unwrap();
        assert!(((log_scale + y[0].ln()) - 1200.0).abs() < 1e-7 * 1200.0);
    }

    #[test]
    fn impossible_tolerance_is_reported() {
        let solver = Dopri5 {
            max_steps: 10,
            ..Dopri5::default()
        };
        let mut y = [1.0, 0.0];
        let r = solver.integrate(
            |_, y, d| {
                d[0] = y[1];
                d[1] = -y[0];
            },
            0.0,
            100.0,
            &mut y,
            |_, _| {},
        );
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
    }
}
