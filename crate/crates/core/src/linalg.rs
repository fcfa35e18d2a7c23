//! Small dense factorizations used by the Gram systems.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

/// Pivots (relative to the row scale) below this are treated as singular.
pub(crate) const PIVOT_FLOOR: f64 = 1e-14;

/// In-place lower Cholesky factor of a row-major symmetric matrix with unit
/// diagonal. On failure returns the 0-based index of the offending pivot.
pub(crate) fn cholesky(a: &mut [f64], n: usize) -> core::result::Result<(), usize> {
    for j in 0..n {
        let mut pivot = a[j * n + j];
        for k in 0..j {
            pivot -= a[j * n + k] * a[j * n + k];
        }
        if !(pivot >= PIVOT_FLOOR) {
            return Err(j);
        }
        let ljj = pivot.sqrt();
        a[j * n + j] = ljj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / ljj;
        }
        for i in j + 1..n {
            a[j * n + i] = 0.0;
        }
    }
    Ok(())
}

/// Solves `L Lᵀ y = b` in place.
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

#[cfg(test)]
pub(crate) fn sym_matvec(a: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|k| a[i * n + k] * x[k]).sum())
        .collect()
}

/// LU factorization with partial pivoting of a complex row-major matrix.
pub(crate) struct ComplexLu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl ComplexLu {
    /// On failure returns the 0-based column whose pivot fell below the
    /// floor relative to its original row scale.
    pub(crate) fn factor(mut a: Vec<Complex64>, n: usize) -> core::result::Result<Self, usize> {
        let row_scale: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|k| a[i * n + k].norm()).fold(0.0, f64::max))
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        for j in 0..n {
            let mut p = j;
            let mut best = -1.0;
            for i in j..n {
                let v = a[i * n + j].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best >= PIVOT_FLOOR * row_scale[perm[p]]) || best == 0.0 {
                return Err(j);
            }
            if p != j {
                for k in 0..n {
                    a.swap(j * n + k, p * n + k);
                }
                perm.swap(j, p);
            }
            let pivot = a[j * n + j];
            for i in j + 1..n {
                let f = a[i * n + j] / pivot;
                a[i * n + j] = f;
                for k in j + 1..n {
                    let v = a[j * n + k];
                    a[i * n + k] -= f * v;
                }
            }
        }
        Ok(Self { n, lu: a, perm })
    }

    pub(crate) fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let v = self.lu[i * n + k] * y[k];
                y[i] -= v;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let v = self.lu[i * n + k] * y[k];
                y[i] -= v;
            }
            y[i] /= self.lu[i * n + i];
        }
        y
    }
}


/// Dot-product accumulator carrying the rounding error of every product and
/// sum, giving results as if computed in twice the working precision.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Dot2 {
    hi: f64,
    lo: f64,
}

impl Dot2 {
    pub(crate) fn new(init: f64) -> Self {
        Self { hi: init, lo: 0.0 }
    }

    pub(crate) fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        let perr = a.mul_add(b, -p);
        self.add_pair(p, perr);
    }

    fn add_pair(&mut self, p: f64, perr: f64) {
        let s = self.hi + p;
        let z = s - self.hi;
        let serr = (self.hi - (s - z)) + (p - z);
        self.hi = s;
        self.lo += serr + perr;
    }

    pub(crate) fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DoubleDouble {
    pub(crate) hi: f64,
    pub(crate) lo: f64,
}

impl DoubleDouble {
    fn renormalize(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    pub(crate) fn sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let z = s - a;
        Self {
            hi: s,
            lo: (a - (s - z)) + (b - z),
        }
    }

    pub(crate) fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        Self::renormalize(p, e)
    }

    pub(crate) fn sqrt(self) -> Self {
        let s = self.hi.sqrt();
        if s == 0.0 {
            return Self { hi: 0.0, lo: 0.0 };
        }
        let p = s * s;
        let e = s.mul_add(s, -p);
        Self::renormalize(s, ((self.hi - p) - e + self.lo) / (2.0 * s))
    }

    /// `a / self`.
    pub(crate) fn divide(self, a: f64) -> Self {
        let q1 = a / self.hi;
        let p = q1 * self.hi;
        let e = q1.mul_add(self.hi, -p);
        let r = (a - p) - e - q1 * self.lo;
        Self::renormalize(q1, r / self.hi)
    }
}
