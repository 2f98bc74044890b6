//! Small dense complex linear algebra: LU determinants and Householder QR.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite"));
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Tr(self · rhs†) = Σ_ij self_ij · conj(rhs_ij).
    pub fn trace_mul_adjoint(&self, rhs: &ComplexMatrix) -> Complex64 {
        self.data.iter().zip(&rhs.data).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn det(&self) -> Complex64 {
        let mut work = self.data.clone();
        det_in_place(&mut work, self.n)
    }

    /// max_ij |(self† self − I)_ij|
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.adjoint().mul(self);
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Determinant by LU with partial pivoting; overwrites `a` (row-major, n×n).
pub fn det_in_place(a: &mut [Complex64], n: usize) -> Complex64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = ONE;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm_sqr().total_cmp(&a[j * n + k].norm_sqr()))
            .expect("nonempty pivot range");
        if a[pivot * n + k] == ZERO {
            return ZERO;
        }
        if pivot != k {
            for j in 0..n {
                a.swap(k * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a[k * n + k];
        det *= p;
        for i in k + 1..n {
            let factor = a[i * n + k] / p;
            if factor == ZERO {
                continue;
            }
            for j in k + 1..n {
                let sub = factor * a[k * n + j];
                a[i * n + j] -= sub;
            }
        }
    }
    det
}

/// Determinant and Σ_ij |(A⁻¹)_ij| by Gauss–Jordan elimination with partial
/// pivoting; the sum is infinite for a singular matrix.
pub fn det_with_inverse_sum(a: &[Complex64], n: usize) -> (Complex64, f64) {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut inv = vec![ZERO; n * n];
    for i in 0..n {
        inv[i * n + i] = ONE;
    }
    let mut det = ONE;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| m[i * n + k].norm_sqr().total_cmp(&m[j * n + k].norm_sqr()))
            .expect("nonempty pivot range");
        if m[pivot * n + k] == ZERO {
            return (ZERO, f64::INFINITY);
        }
        if pivot != k {
            for j in 0..n {
                m.swap(k * n + j, pivot * n + j);
                inv.swap(k * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = m[k * n + k];
        det *= p;
        let p_inv = ONE / p;
        for j in 0..n {
            m[k * n + j] *= p_inv;
            inv[k * n + j] *= p_inv;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = m[i * n + k];
            if factor == ZERO {
                continue;
            }
            for j in 0..n {
                let (sm, si) = (factor * m[k * n + j], factor * inv[k * n + j]);
                m[i * n + j] -= sm;
                inv[i * n + j] -= si;
            }
        }
    }
    (det, inv.iter().map(|z| z.norm()).sum())
}

/// Householder QR: returns `(Q, diag(R))` with `a = Q·R`, Q unitary.
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let n = a.n;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut v = vec![ZERO; n];
    for k in 0..n {
        let norm_x = libm::sqrt((k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>());
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        // reflect x onto −phase·‖x‖·e_k so that v avoids cancellation
        let alpha = -phase * norm_x;
        for i in k..n {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let v_norm_sqr: f64 = (k..n).map(|i| v[i].norm_sqr()).sum();
        if v_norm_sqr == 0.0 {
            continue;
        }
        // R ← (I − 2vv†/‖v‖²) R
        for j in k..n {
            let dot: Complex64 = (k..n).map(|i| v[i].conj() * r[(i, j)]).sum();
            let s = dot * (2.0 / v_norm_sqr);
            for i in k..n {
                let sub = v[i] * s;
                r[(i, j)] -= sub;
            }
        }
        // Q ← Q (I − 2vv†/‖v‖²)
        for i in 0..n {
            let dot: Complex64 = (k..n).map(|l| q[(i, l)] * v[l]).sum();
            let s = dot * (2.0 / v_norm_sqr);
            for l in k..n {
                let sub = s * v[l].conj();
                q[(i, l)] -= sub;
            }
        }
    }
    let diag = (0..n).map(|i| r[(i, i)]).collect();
    (q, diag)
}
