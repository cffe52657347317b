// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// A 2x2 matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2<T = f64>(pub [[T; 2]; 2]);

impl<T> Matrix2<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    pub fn new(m00: T, m01: T, m10: T, m11: T) -> Self {
        Matrix2([[m00, m01], [m10, m11]])
    }

    pub fn det(&self) -> T {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1]
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        let [[a, b], [c, d]] = self.0;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    pub fn map<U>(&self, f: impl Fn(T) -> U) -> Matrix2<U> {
        let [[a, b], [c, d]] = self.0;
        Matrix2([[f(a), f(b)], [f(c), f(d)]])
    }
}

impl<T> Mul for Matrix2<T>
where
    T: Copy + Add<Output = T> + Mul<Output = T>,
{
    type Output = Matrix2<T>;

    fn mul(self, rhs: Self) -> Self {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Matrix2([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])
    }
}

impl Matrix2<f64> {
    pub const IDENTITY: Matrix2<f64> = Matrix2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|x| x * factor)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Both singular values, largest first.
    ///
    /// With p = |(m00 + m11, m01 - m10)| and q = |(m00 - m11, m01 + m10)| the
    /// singular values are (p + q)/2 and |p - q|/2; no squares of the entries are
    /// formed, so the result is accurate to a few ulps for any finite input.
    pub fn singular_values(&self) -> (f64, f64) {
        let [[a, b], [c, d]] = self.0;
        let p = (a + d).hypot(b - c);
        let q = (a - d).hypot(b + c);
        (0.5 * (p + q), 0.5 * (p - q).abs())
    }

    /// Spectral (operator 2-) norm.
    pub fn norm(&self) -> f64 {
        self.singular_values().0
    }

    pub fn to_complex(&self) -> Matrix2<Complex64> {
        self.map(|x| Complex64::new(x, 0.0))
    }
}

impl Matrix2<Complex64> {
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.norm()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|x| x * factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_rotation_is_one() {
        let m = Matrix2::new(0.0, -1.0, 1.0, 0.0);
        assert!((m.norm() - 1.0).abs() < 1e-15);
        assert_eq!(m.det(), 1.0);
    }

    #[test]
    fn singular_values_of_diagonal() {
        let m = Matrix2::new(-3.0, 0.0, 0.0, 0.5);
        let (s1, s2) = m.singular_values();
        assert!((s1 - 3.0).abs() < 1e-15);
        assert!((s2 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn norm_matches_eigenvalue_of_gram_matrix() {
        // sigma_max^2 is the top eigenvalue of M^T M.
        let m: Matrix2 = Matrix2::new(1.3, -0.7, 2.2, 0.4);
        let [[a, b], [c, d]] = m.0;
        let (g00, g01, g11) = (a * a + c * c, a * b + c * d, b * b + d * d);
        let tr = g00 + g11;
        let det = g00 * g11 - g01 * g01;
        let top = 0.5 * (tr + (tr * tr - 4.0 * det).sqrt());
        assert!((m.norm() - top.sqrt()).abs() < 1e-12 * top.sqrt());
    }

    #[test]
    fn norm_survives_huge_entries() {
        let m = Matrix2::new(1e300, 2e300, -1e300, 0.0);
        assert!(m.norm().is_finite());
        assert!(m.norm() > 2e300);
    }
}
