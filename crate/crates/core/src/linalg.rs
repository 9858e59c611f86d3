//! Dense Hermitian linear algebra: eigendecomposition, singular values,
//! spectral matrix exponential and the block constructors used throughout
//! the crate.
//!
//! The eigensolver is nalgebra's (Householder tridiagonalization + implicit
//! QR); singular values and vectors go through the same solver on the
//! Hermitian dilation. Everything above that layer works on sorted real
//! vectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SpreadError};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Relative asymmetry allowed before a matrix is rejected as non-Hermitian.
pub const HERMITIAN_REL_TOL: f64 = 1e-12;

const SOLVER_MAX_ITER: usize = 10_000;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a complex matrix from row-major real rows.
pub fn real_matrix(rows: &[Vec<f64>]) -> Result<CMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(SpreadError::Parse("ragged rows".into()));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |i, j| c(rows[i][j], 0.0)))
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    svd_values(m).0.first().copied().unwrap_or(0.0)
}

/// Stable 64-bit FNV-1a digest of the matrix bit pattern, used to identify
/// instances in diagnostics.
pub fn digest(m: &CMatrix) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(m.nrows() as u64);
    eat(m.ncols() as u64);
    for z in m.iter() {
        eat(z.re.to_bits());
        eat(z.im.to_bits());
    }
    format!("{h:016x}")
}

/// A complex square matrix equal to its conjugate transpose.
///
/// Construction accepts asymmetry up to `1e-12 * max|entry|` and stores the
/// exact Hermitian part `(A + A*)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(SpreadError::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SpreadError::NonFinite("Hermitian matrix"));
        }
        let adj = m.adjoint();
        let asymmetry = max_abs_entry(&(&m - &adj));
        let allowed = HERMITIAN_REL_TOL * max_abs_entry(&m);
        if asymmetry > allowed {
            return Err(SpreadError::NotHermitian { asymmetry, allowed });
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part `(M + M*)/2` of an arbitrary square matrix.
    pub fn hermitian_part(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(SpreadError::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        Ok(Self::symmetrized(m.clone()))
    }

    fn symmetrized(m: CMatrix) -> Self {
        let n = m.nrows();
        let mut out = m;
        for i in 0..n {
            out[(i, i)] = c(out[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Self(out)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(real_matrix(rows)?)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self(CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { C64::default() }))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn scalar(n: usize, a: f64) -> Self {
        Self(CMatrix::identity(n, n) * c(a, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale_by(&self, t: f64) -> Self {
        Self(&self.0 * c(t, 0.0))
    }

    /// `A - t I`.
    pub fn shifted(&self, t: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= c(t, 0.0);
        }
        Self(m)
    }

    /// `V* A V` for a (not necessarily square) `V`.
    pub fn congruence(&self, v: &CMatrix) -> Self {
        Self::symmetrized(v.adjoint() * &self.0 * v)
    }

    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    /// `max(1, ||A||)`, the scale all relative tolerances refer to.
    pub fn tol_scale(&self) -> f64 {
        self.spectral_norm().max(1.0)
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let spec = eigenvalues(self)?;
        Ok(spec.0.last().is_none_or(|&l| l >= -tol))
    }
}

/// Eigenvalues sorted non-increasingly.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(pub Vec<f64>);

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `lambda^up`, the non-decreasing view.
    pub fn ascending(&self) -> Vec<f64> {
        self.0.iter().rev().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Singular values sorted non-increasingly, always nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularValues(pub Vec<f64>);

impl SingularValues {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn largest(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }
}

#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub spectrum: Spectrum,
    /// Column `j` is a unit eigenvector for `spectrum.0[j]`.
    pub basis: CMatrix,
}

pub fn eig_hermitian(a: &HermitianMatrix) -> Result<Eigensystem> {
    let n = a.dim();
    if n == 0 {
        return Ok(Eigensystem { spectrum: Spectrum(Vec::new()), basis: CMatrix::zeros(0, 0) });
    }
    let eig = nalgebra::SymmetricEigen::try_new(a.0.clone(), f64::EPSILON, SOLVER_MAX_ITER)
        .ok_or_else(|| SpreadError::NoConvergence { digest: digest(&a.0) })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let basis = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(Eigensystem { spectrum: Spectrum(values), basis })
}

pub fn eigenvalues(a: &HermitianMatrix) -> Result<Spectrum> {
    Ok(eig_hermitian(a)?.spectrum)
}

/// Singular values of a `rows x cols` matrix, as the `cols` eigenvalues of
/// `|B| = (B*B)^{1/2}`; when `rows < cols` the tail is zero.
///
/// Computed from the Hermitian dilation `hat(B)`, whose spectrum is `±s_j`
/// padded with zeros. nalgebra's complex bidiagonal SVD occasionally returns
/// wrong factors when singular values cluster, the Hermitian solver does not.
pub fn svd_values(b: &CMatrix) -> SingularValues {
    let (rows, cols) = b.shape();
    let m = rows.min(cols);
    if m == 0 {
        return SingularValues(vec![0.0; cols]);
    }
    let mut values: Vec<f64> = match eigenvalues(&hat(b)) {
        Ok(l) => l.values()[..m].iter().map(|s| s.max(0.0)).collect(),
        Err(_) => gram_singular_values(b),
    };
    values.resize(cols, 0.0);
    SingularValues(values)
}

/// Thin SVD `B = U diag(s) V*` with `min(rows, cols)` columns, read off the
/// top eigenvectors `(u; v)/√2` of `hat(B)`. The factors are only meaningful
/// for positive singular values; callers needing the null space must check.
pub fn svd_factors(b: &CMatrix) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    let (rows, cols) = b.shape();
    let m = rows.min(cols);
    let eig = eig_hermitian(&hat(b))?;
    let scale = c(std::f64::consts::SQRT_2, 0.0);
    let u = eig.basis.view((0, 0), (rows, m)) * scale;
    let v = eig.basis.view((rows, 0), (cols, m)) * scale;
    let values = eig.spectrum.values()[..m].iter().map(|s| s.max(0.0)).collect();
    Ok((u, values, v))
}

fn gram_singular_values(b: &CMatrix) -> Vec<f64> {
    let gram = if b.nrows() < b.ncols() { b * b.adjoint() } else { b.adjoint() * b };
    let g = HermitianMatrix::symmetrized(gram);
    let mut values: Vec<f64> = nalgebra::SymmetricEigen::new(g.0)
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Applies a real function to a Hermitian matrix through its eigenbasis.
pub fn hermitian_function(a: &HermitianMatrix, f: impl Fn(f64) -> C64) -> Result<CMatrix> {
    let es = eig_hermitian(a)?;
    let v = &es.basis;
    let n = a.dim();
    let mut scaled = v.clone();
    for j in 0..n {
        let fj = f(es.spectrum.0[j]);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    Ok(scaled * v.adjoint())
}

/// `e^{iX}` for Hermitian `X`, computed spectrally.
pub fn unitary_exp(x: &HermitianMatrix) -> Result<CMatrix> {
    hermitian_function(x, |l| C64::from_polar(1.0, l))
}

/// General block diagonal `M1 (+) M2`.
pub fn block_diag(m1: &CMatrix, m2: &CMatrix) -> CMatrix {
    let (r1, c1) = m1.shape();
    let (r2, c2) = m2.shape();
    let mut out = CMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(m1);
    out.view_mut((r1, c1), (r2, c2)).copy_from(m2);
    out
}

/// `A1 (+) A2`.
pub fn direct_sum(a1: &HermitianMatrix, a2: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix(block_diag(&a1.0, &a2.0))
}

/// The block matrix `[[A1, B], [B*, A2]]`.
pub fn assemble_blocks(a1: &HermitianMatrix, b: &CMatrix, a2: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (k, r) = (a1.dim(), a2.dim());
    if b.shape() != (k, r) {
        return Err(SpreadError::DimensionMismatch(format!(
            "off-diagonal block is {}x{}, expected {k}x{r}",
            b.nrows(),
            b.ncols()
        )));
    }
    let mut out = block_diag(&a1.0, &a2.0);
    out.view_mut((0, k), (k, r)).copy_from(b);
    out.view_mut((k, 0), (r, k)).copy_from(&b.adjoint());
    Ok(HermitianMatrix(out))
}

/// `hat(E) = [[0, E], [E*, 0]]`; its spectrum is `(s(E), 0, ..., 0, -s^up(E))`.
pub fn hat(e: &CMatrix) -> HermitianMatrix {
    let (k, r) = e.shape();
    assemble_blocks(&HermitianMatrix::zeros(k), e, &HermitianMatrix::zeros(r))
        .expect("block shapes agree by construction")
}

/// `||M* M - I||_max`.
pub fn orthonormality_defect(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    let id = CMatrix::identity(m.ncols(), m.ncols());
    max_abs_entry(&(gram - id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_vec_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let a = HermitianMatrix::diagonal(&[1.0, 3.0, -2.0]);
        let es = eig_hermitian(&a).unwrap();
        assert_vec_close(es.spectrum.values(), &[3.0, 1.0, -2.0], 1e-14);
        assert_eq!(es.spectrum.ascending(), vec![-2.0, 1.0, 3.0]);
    }

    #[test]
    fn tao_matrix_spectrum() {
        let a = HermitianMatrix::from_real_rows(&[
            vec![2.0, 1.0, 0.0, 1.0],
            vec![1.0, 2.0, 1.0, 0.0],
            vec![0.0, 1.0, 3.0, 1.0],
            vec![1.0, 0.0, 1.0, 3.0],
        ])
        .unwrap();
        let l = eigenvalues(&a).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_vec_close(l.values(), &[3.0 + phi, 1.0 + phi, 3.0 - 1.0 / phi, 2.0 - phi], 1e-12);
    }

    #[test]
    fn eigensystem_residuals_complex() {
        let m = CMatrix::from_fn(5, 5, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.3));
        let a = HermitianMatrix::hermitian_part(&m).unwrap();
        let es = eig_hermitian(&a).unwrap();
        assert!(orthonormality_defect(&es.basis) < 1e-10);
        let scale = a.tol_scale();
        for j in 0..5 {
            let v = es.basis.column(j).into_owned();
            let r = a.matrix() * &v - &v * c(es.spectrum.0[j], 0.0);
            assert!(r.norm() < 1e-9 * scale);
        }
        assert!(es.spectrum.0.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_asymmetric_and_symmetrizes_noise() {
        let bad = real_matrix(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(bad), Err(SpreadError::NotHermitian { .. })));
        let noisy = real_matrix(&[vec![1.0, 2.0 + 1e-15], vec![2.0, 1.0]]).unwrap();
        let h = HermitianMatrix::new(noisy).unwrap();
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)].conj());
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(rect), Err(SpreadError::NotSquare { .. })));
    }

    #[test]
    fn singular_values_examples() {
        let swap = real_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_vec_close(svd_values(&swap).values(), &[1.0, 1.0], 1e-15);
        assert_eq!(svd_values(&CMatrix::zeros(2, 3)).values(), &[0.0, 0.0, 0.0]);
        // wide matrix: length follows the column count
        let wide = real_matrix(&[vec![3.0, 0.0, 0.0], vec![0.0, 0.0, 4.0]]).unwrap();
        assert_vec_close(svd_values(&wide).values(), &[4.0, 3.0, 0.0], 1e-14);
        assert_vec_close(svd_values(&wide.adjoint()).values(), &[4.0, 3.0], 1e-14);
    }

    #[test]
    fn exp_examples() {
        let u = unitary_exp(&HermitianMatrix::zeros(3)).unwrap();
        assert!(max_abs_entry(&(u - CMatrix::identity(3, 3))) < 1e-15);
        let u = unitary_exp(&HermitianMatrix::diagonal(&[std::f64::consts::PI, 0.0])).unwrap();
        assert_abs_diff_eq!(u[(0, 0)].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u[(1, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u[(0, 0)].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn direct_sum_and_hat() {
        let s = direct_sum(&HermitianMatrix::diagonal(&[5.0, 1.0]), &HermitianMatrix::diagonal(&[3.0, 3.0]));
        assert_vec_close(eigenvalues(&s).unwrap().values(), &[5.0, 3.0, 3.0, 1.0], 1e-14);
        let a = HermitianMatrix::diagonal(&[2.0, -1.0]);
        assert_eq!(direct_sum(&a, &HermitianMatrix::zeros(0)), a);

        let h = hat(&real_matrix(&[vec![2.0]]).unwrap());
        assert_vec_close(eigenvalues(&h).unwrap().values(), &[2.0, -2.0], 1e-14);
        let h = hat(&CMatrix::identity(2, 2));
        assert_vec_close(eigenvalues(&h).unwrap().values(), &[1.0, 1.0, -1.0, -1.0], 1e-14);
    }

    #[test]
    fn assemble_rejects_bad_block() {
        let r = assemble_blocks(&HermitianMatrix::zeros(2), &CMatrix::zeros(3, 2), &HermitianMatrix::zeros(2));
        assert!(matches!(r, Err(SpreadError::DimensionMismatch(_))));
    }
}
