//! Small fixed-size complex vectors and matrices.
//!
//! Every kernel in this crate is a 3×3, 3×4 or 4×4 complex matrix per
//! wavevector, so a const-generic array wrapper is all that is needed.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub type Vec3 = [Complex64; 3];

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real3(v: [f64; 3]) -> Vec3 {
    [c(v[0], 0.0), c(v[1], 0.0), c(v[2], 0.0)]
}

/// Bilinear product `a · b` (no conjugation).
pub fn dot(a: &Vec3, b: &Vec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Sesquilinear product `a · conj(b)`.
pub fn dot_conj(a: &Vec3, b: &Vec3) -> Complex64 {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj()
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: &Vec3, s: Complex64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add_scaled(acc: &mut Vec3, a: &Vec3, s: Complex64) {
    for k in 0..3 {
        acc[k] += a[k] * s;
    }
}

/// Euclidean norm of a complex 3-vector.
pub fn norm(a: &Vec3) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &Vec3) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<const R: usize, const C: usize>(pub [[Complex64; C]; R]);

pub type Mat3 = Mat<3, 3>;

impl<const R: usize, const C: usize> Mat<R, C> {
    pub fn zeros() -> Self {
        Mat([[ZERO; C]; R])
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for r in 0..R {
            for col in 0..C {
                m.0[r][col] = f(r, col);
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat<C, R> {
        Mat::from_fn(|r, col| self.0[col][r])
    }

    pub fn adjoint(&self) -> Mat<C, R> {
        Mat::from_fn(|r, col| self.0[col][r].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Mat::from_fn(|r, col| self.0[r][col] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Mat::from_fn(|r, col| self.0[r][col] * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn column(&self, col: usize) -> [Complex64; R] {
        std::array::from_fn(|r| self.0[r][col])
    }

    pub fn add_scaled(&mut self, other: &Self, s: Complex64) {
        for r in 0..R {
            for col in 0..C {
                self.0[r][col] += other.0[r][col] * s;
            }
        }
    }

    pub fn mul_vec(&self, v: &[Complex64; C]) -> [Complex64; R] {
        std::array::from_fn(|r| (0..C).map(|k| self.0[r][k] * v[k]).sum())
    }
}

impl<const N: usize> Mat<N, N> {
    pub fn identity() -> Self {
        Mat::from_fn(|r, col| if r == col { ONE } else { ZERO })
    }
}

impl Mat3 {
    /// Outer product `a ⊗ b` (no conjugation).
    pub fn outer(a: &Vec3, b: &Vec3) -> Self {
        Mat::from_fn(|r, col| a[r] * b[col])
    }

    pub fn diag(d: [Complex64; 3]) -> Self {
        Mat::from_fn(|r, col| if r == col { d[r] } else { ZERO })
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Mat::from_fn(|r, col| (self.0[r][col] + adj.0[r][col]) * 0.5)
    }
}

impl<const R: usize, const C: usize> Index<(usize, usize)> for Mat<R, C> {
    type Output = Complex64;
    fn index(&self, (r, col): (usize, usize)) -> &Complex64 {
        &self.0[r][col]
    }
}

impl<const R: usize, const C: usize> IndexMut<(usize, usize)> for Mat<R, C> {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut Complex64 {
        &mut self.0[r][col]
    }
}

impl<const R: usize, const K: usize, const C: usize> Mul<Mat<K, C>> for Mat<R, K> {
    type Output = Mat<R, C>;
    fn mul(self, rhs: Mat<K, C>) -> Mat<R, C> {
        Mat::from_fn(|r, col| (0..K).map(|k| self.0[r][k] * rhs.0[k][col]).sum())
    }
}

impl<const R: usize, const C: usize> Add for Mat<R, C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Mat::from_fn(|r, col| self.0[r][col] + rhs.0[r][col])
    }
}

impl<const R: usize, const C: usize> Sub for Mat<R, C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Mat::from_fn(|r, col| self.0[r][col] - rhs.0[r][col])
    }
}

impl<const R: usize, const C: usize> Neg for Mat<R, C> {
    type Output = Self;
    fn neg(self) -> Self {
        Mat::from_fn(|r, col| -self.0[r][col])
    }
}

/// Eigenvalues of a Hermitian 3×3 matrix in ascending order.
///
/// Uses the trigonometric solution of the (real) characteristic cubic; only
/// the upper triangle and the real diagonal are read.
pub fn hermitian_eigenvalues(a: &Mat3) -> [f64; 3] {
    let d = [a.0[0][0].re, a.0[1][1].re, a.0[2][2].re];
    let p1 = a.0[0][1].norm_sqr() + a.0[0][2].norm_sqr() + a.0[1][2].norm_sqr();
    let q = (d[0] + d[1] + d[2]) / 3.0;
    if p1 == 0.0 {
        let mut e = d;
        e.sort_by(f64::total_cmp);
        return e;
    }
    let p2 = (d[0] - q).powi(2) + (d[1] - q).powi(2) + (d[2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = Mat3::from_fn(|r, col| {
        let v = if r <= col { a.0[r][col] } else { a.0[col][r].conj() };
        if r == col {
            (c(v.re, 0.0) - q) / p
        } else {
            v / p
        }
    });
    let r = (b.det().re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let mid = 3.0 * q - hi - lo;
    [lo, mid, hi]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_of_parallel_vectors_vanishes() {
        let a = [c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)];
        let b = scale(&a, c(0.3, -1.1));
        assert!(max_abs(&cross(&a, &b)) < 1e-15);
    }

    #[test]
    fn matrix_product_matches_hand_computation() {
        let a = Mat::<2, 3>([[ONE, c(2.0, 0.0), ZERO], [ZERO, I, ONE]]);
        let b = Mat::<3, 2>([[ONE, ZERO], [ZERO, ONE], [I, I]]);
        let p = a * b;
        assert_eq!(p.0, [[ONE, c(2.0, 0.0)], [I, c(0.0, 2.0)]]);
    }

    #[test]
    fn eigenvalues_of_unitarily_rotated_diagonal() {
        // U = exp of a fixed skew-Hermitian generator via Cayley transform.
        let k = Mat([
            [c(0.0, 0.3), c(0.2, 0.1), c(-0.4, 0.0)],
            [c(-0.2, 0.1), c(0.0, -0.5), c(0.1, 0.7)],
            [c(0.4, 0.0), c(-0.1, 0.7), c(0.0, 0.2)],
        ]);
        // Cayley: U = (I - K)^{-1}(I + K); use the explicit inverse of a 3x3.
        let m = Mat3::identity() - k;
        let det = m.det();
        let inv = Mat3::from_fn(|r, col| {
            let (r1, r2) = ((col + 1) % 3, (col + 2) % 3);
            let (c1, c2) = ((r + 1) % 3, (r + 2) % 3);
            (m.0[r1][c1] * m.0[r2][c2] - m.0[r1][c2] * m.0[r2][c1]) / det
        });
        let u = inv * (Mat3::identity() + k);
        let unitary_gap = (u * u.adjoint() - Mat3::identity()).max_abs();
        assert!(unitary_gap < 1e-13, "{unitary_gap}");
        let d = Mat3::diag([c(-1.5, 0.0), c(0.25, 0.0), c(4.0, 0.0)]);
        let h = u * d * u.adjoint();
        let e = hermitian_eigenvalues(&h);
        for (got, want) in e.iter().zip([-1.5, 0.25, 4.0]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn eigenvalues_with_repeated_root() {
        let h = Mat([
            [c(2.0, 0.0), c(0.0, 1.0), ZERO],
            [c(0.0, -1.0), c(2.0, 0.0), ZERO],
            [ZERO, ZERO, c(3.0, 0.0)],
        ]);
        let e = hermitian_eigenvalues(&h);
        for (got, want) in e.iter().zip([1.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-7, "{e:?}");
        }
    }
}
