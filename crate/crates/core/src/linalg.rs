//! 2×2 complex matrices on the coin space and a closed-form Hermitian eigensolver.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major 2×2 complex matrix in the computational basis {|0⟩, |1⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: [C64; 2], b: [C64; 2]) -> Self {
        Mat2([
            [a[0] * b[0].conj(), a[0] * b[1].conj()],
            [a[1] * b[0].conj(), a[1] * b[1].conj()],
        ])
    }

    pub fn pauli_x() -> Self {
        Mat2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Mat2([[ZERO, -C64::i()], [C64::i(), ZERO]])
    }

    pub fn pauli_z() -> Self {
        Mat2([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn scale(&self, k: C64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adjoint()).norm() <= tol
    }

    /// Expectation ⟨v|M|v⟩ (real part only meaningful for Hermitian M).
    pub fn quadratic_form(&self, v: [C64; 2]) -> C64 {
        let mv = self.apply(v);
        v[0].conj() * mv[0] + v[1].conj() * mv[1]
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    /// Closed-form eigendecomposition of a Hermitian matrix.
    ///
    /// Only the Hermitian part ½(M + M†) is used. Eigenvectors come back with
    /// their first non-negligible component real and positive.
    pub fn hermitian_eigen(&self) -> HermitianEigen {
        let m = &self.0;
        let a = m[0][0].re;
        let d = m[1][1].re;
        let b = (m[0][1] + m[1][0].conj()) * 0.5;

        let mean = 0.5 * (a + d);
        let half_diff = 0.5 * (a - d);
        let radius = half_diff.hypot(b.norm());
        let upper = mean + radius;
        let lower = mean - radius;

        let scale = a.abs().max(d.abs()).max(b.norm()).max(f64::MIN_POSITIVE);
        let v_upper = if radius <= 1e-15 * scale {
            [ONE, ZERO]
        } else if half_diff >= 0.0 {
            // (λ - d, b*) is the better-conditioned column when a >= d.
            normalize([C64::from(upper - d), b.conj()])
        } else {
            normalize([b, C64::from(upper - a)])
        };
        let v_upper = canonical_phase(v_upper);
        let v_lower = canonical_phase([-v_upper[1].conj(), v_upper[0].conj()]);

        HermitianEigen {
            upper,
            lower,
            v_upper,
            v_lower,
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let mut r = self.0;
        for (i, row) in r.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x += o.0[i][j];
            }
        }
        Mat2(r)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + o.scale(-ONE)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let mut r = [[ZERO; 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(r)
    }
}

/// Eigenpairs of a 2×2 Hermitian matrix, larger eigenvalue first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianEigen {
    pub upper: f64,
    pub lower: f64,
    pub v_upper: [C64; 2],
    pub v_lower: [C64; 2],
}

pub(crate) fn normalize(v: [C64; 2]) -> [C64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Multiplies by a global phase so the first component with modulus above
/// 1e-12 becomes real and positive.
pub fn canonical_phase(v: [C64; 2]) -> [C64; 2] {
    let pivot = if v[0].norm() > 1e-12 { v[0] } else { v[1] };
    if pivot.norm() == 0.0 {
        return v;
    }
    let phase = pivot.conj() / pivot.norm();
    [v[0] * phase, v[1] * phase]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn residual(m: &Mat2, lambda: f64, v: [C64; 2]) -> f64 {
        let mv = m.apply(v);
        ((mv[0] - v[0] * lambda).norm_sqr() + (mv[1] - v[1] * lambda).norm_sqr()).sqrt()
    }

    #[test]
    fn diagonal_matrices() {
        let e = Mat2::new(c(-2.0, 0.0), ZERO, ZERO, c(3.0, 0.0)).hermitian_eigen();
        assert_eq!(e.upper, 3.0);
        assert_eq!(e.lower, -2.0);
        assert!((e.v_upper[1] - ONE).norm() < 1e-15);
        assert!((e.v_lower[0] - ONE).norm() < 1e-15);
    }

    #[test]
    fn degenerate_identity() {
        let e = Mat2::IDENTITY.scale(c(1.5, 0.0)).hermitian_eigen();
        assert_eq!(e.upper, 1.5);
        assert_eq!(e.lower, 1.5);
        assert_eq!(e.v_upper, [ONE, ZERO]);
    }

    #[test]
    fn pauli_y_eigenvectors() {
        let e = Mat2::pauli_y().hermitian_eigen();
        assert!((e.upper - 1.0).abs() < 1e-15 && (e.lower + 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.v_upper[0] - c(s, 0.0)).norm() < 1e-12);
        assert!((e.v_upper[1] - c(0.0, s)).norm() < 1e-12);
    }

    #[test]
    fn random_residuals() {
        let mut x = 0.123_f64;
        let mut next = || {
            x = (x * 9301.0 + 49297.0) % 233280.0;
            x / 233280.0 * 4.0 - 2.0
        };
        for _ in 0..500 {
            let m = Mat2::new(c(next(), 0.0), c(next(), next()), ZERO, c(next(), 0.0));
            let m = Mat2::new(m.0[0][0], m.0[0][1], m.0[0][1].conj(), m.0[1][1]);
            let e = m.hermitian_eigen();
            assert!(e.upper >= e.lower);
            assert!(residual(&m, e.upper, e.v_upper) < 1e-10);
            assert!(residual(&m, e.lower, e.v_lower) < 1e-10);
            let overlap = e.v_upper[0].conj() * e.v_lower[0] + e.v_upper[1].conj() * e.v_lower[1];
            assert!(overlap.norm() < 1e-12);
            assert!((e.upper + e.lower - m.trace().re).abs() < 1e-12);
        }
    }

    #[test]
    fn nearly_diagonal_is_stable() {
        let m = Mat2::new(c(5.0, 0.0), c(1e-9, 1e-9), c(1e-9, -1e-9), c(-5.0, 0.0));
        let e = m.hermitian_eigen();
        assert!(residual(&m, e.upper, e.v_upper) < 1e-12);
        assert!(residual(&m, e.lower, e.v_lower) < 1e-12);
    }
}
