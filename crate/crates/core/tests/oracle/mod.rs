//! Reference computations that avoid the library's decompositions.

#![allow(dead_code)]

use nalgebra::DMatrix;
use spectral_spread::linalg::{c, CMatrix, HermitianMatrix, C64};

/// Coefficients `p[0..=n]` of `det(tI - A) = sum p[i] t^i` (Faddeev-LeVerrier).
pub fn charpoly(a: &CMatrix) -> Vec<C64> {
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    let mut p = vec![c(0.0, 0.0); n + 1];
    p[n] = c(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + &id * p[n - k + 1];
        p[n - k] = -(a * &m).trace() / k as f64;
    }
    p
}

fn horner(p: &[f64], t: f64) -> (f64, f64) {
    let (mut v, mut d) = (0.0, 0.0);
    for &coef in p.iter().rev() {
        d = d * t + v;
        v = v * t + coef;
    }
    (v, d)
}

/// Eigenvalues of a Hermitian matrix as roots of its characteristic
/// polynomial: companion-matrix eigenvalues, then Newton polishing.
pub fn eigenvalues_by_charpoly(a: &HermitianMatrix) -> Vec<f64> {
    let n = a.dim();
    let p: Vec<f64> = charpoly(a.matrix()).iter().map(|z| z.re).collect();
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -p[i];
    }
    let mut roots: Vec<f64> = comp.complex_eigenvalues().iter().map(|z| z.re).collect();
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let (v, d) = horner(&p, *r);
            if d == 0.0 {
                break;
            }
            let next = *r - v / d;
            if horner(&p, next).0.abs() < v.abs() {
                *r = next;
            } else {
                break;
            }
        }
    }
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}

/// Singular values from the Gram matrix of the smaller side, padded with
/// zeros to the number of columns.
pub fn singular_values_by_gram(b: &CMatrix) -> Vec<f64> {
    let gram = if b.nrows() >= b.ncols() { b.adjoint() * b } else { b * b.adjoint() };
    let g = HermitianMatrix::hermitian_part(&gram).expect("square");
    let mut s: Vec<f64> = eigenvalues_by_charpoly(&g).iter().map(|v| v.max(0.0).sqrt()).collect();
    s.resize(b.ncols(), 0.0);
    s
}

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `e^{iX}` by a Taylor series after scaling to norm <= 1/2, then squaring.
pub fn exp_i_by_series(x: &HermitianMatrix) -> CMatrix {
    let n = x.dim();
    let m = x.matrix() * c(0.0, 1.0);
    let norm = one_norm(&m);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = &m * c(0.5f64.powi(squarings as i32), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
