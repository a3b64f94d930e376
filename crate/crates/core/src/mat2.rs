//! Small fixed-size complex linear algebra for the per-mode 2x2 problems.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Two-component complex vector.
pub type Vec2 = [C64; 2];

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn sigma_z() -> Self {
        Mat2::new(ONE, ZERO, ZERO, -ONE)
    }

    pub fn swap() -> Self {
        Mat2::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
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
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

pub fn dot(a: &Vec2, b: &Vec2) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn norm_sqr(a: &Vec2) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr()
}

/// Bilinear (unconjugated) product, the natural pairing for complex-symmetric matrices.
pub fn bilinear(a: &Vec2, b: &Vec2) -> C64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn swap(v: &Vec2) -> Vec2 {
    [v[1], v[0]]
}

/// `sin(x)/x`, with a series near the origin.
pub fn sinc(x: C64) -> C64 {
    if x.norm() < 0.5 {
        let x2 = x * x;
        // terms up to x^14 / 15!
        let mut term = ONE;
        let mut sum = ONE;
        for n in 1..=7 {
            let d = (2 * n) as f64 * (2 * n + 1) as f64;
            term = -term * x2 / d;
            sum += term;
        }
        sum
    } else {
        x.sin() / x
    }
}

/// `(sin x - x) / x^3`, the cubic remainder of sine, stable for small `x`.
pub fn sin_cubic_remainder(x: C64) -> C64 {
    if x.norm() < 1.0 {
        let x2 = x * x;
        let mut term = C64::new(-1.0 / 6.0, 0.0);
        let mut sum = term;
        for n in 2..=10 {
            let d = (2 * n) as f64 * (2 * n + 1) as f64;
            term = -term * x2 / d;
            sum += term;
        }
        sum
    } else {
        (x.sin() - x) / (x * x * x)
    }
}

/// `(1 - e^{-x}) / x`, stable for small `x`.
pub fn one_minus_exp_over(x: C64) -> C64 {
    if x.norm() < 0.5 {
        let mut term = ONE;
        let mut sum = ONE;
        for n in 2..=18 {
            term = -term * x / n as f64;
            sum += term;
        }
        sum
    } else {
        (ONE - (-x).exp()) / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_match_direct_forms_at_the_switch() {
        for &x in &[C64::new(0.49, 0.1), C64::new(0.3, -0.35), C64::new(0.0, 0.49)] {
            assert!((sinc(x) - x.sin() / x).norm() < 1e-15);
            assert!((one_minus_exp_over(x) - (ONE - (-x).exp()) / x).norm() < 1e-14);
        }
        let x = C64::new(0.99, 0.05);
        let direct = (x.sin() - x) / (x * x * x);
        assert!((sin_cubic_remainder(x) - direct).norm() < 1e-14);
        assert!((sin_cubic_remainder(C64::new(1e-6, 0.0)) + 1.0 / 6.0).norm() < 1e-13);
    }

    #[test]
    fn products() {
        let m = Mat2::new(C64::new(1.0, 2.0), ONE, I, ZERO);
        let p = m * Mat2::identity();
        assert_eq!(p, m);
        let v = m.apply(&[ONE, I]);
        assert_eq!(v, [C64::new(1.0, 3.0), I]);
        assert_eq!(Mat2::swap() * Mat2::swap(), Mat2::identity());
    }
}
