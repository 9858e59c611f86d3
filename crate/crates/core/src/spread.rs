//! The spectral spread `Spr(A) = λ(A) + λ(-A)` and its nonnegative half
//! `Spr⁺(A)`, together with the structural relations it satisfies.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpreadError};
use crate::linalg::{
    direct_sum, eig_hermitian, eigenvalues, orthonormality_defect, svd_values, CMatrix, HermitianMatrix, Spectrum,
};
use crate::majorization::{
    abs, desc, entrywise_leq, majorizes, scale, sub, submajorizes, uin_norm, MajorizationReport, UinDescriptor,
    DEFAULT_REL_TOL,
};
use crate::outcome::{CheckOutcome, Role};
use crate::subspaces::Isometry;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadVector {
    /// `Spr(A)`: length `n`, non-increasing, `full[i] = -full[n-1-i]`.
    pub full: Vec<f64>,
    /// `Spr⁺(A)`: the first `⌊n/2⌋` entries of `full`.
    pub plus: Vec<f64>,
}

impl SpreadVector {
    pub fn from_spectrum(l: &Spectrum) -> Self {
        let n = l.len();
        let v = l.values();
        let full: Vec<f64> = (0..n).map(|i| v[i] - v[n - 1 - i]).collect();
        let plus = full[..n / 2].to_vec();
        Self { full, plus }
    }

    /// `|Spr(A)|↓`, which equals `Spr⁺(A ⊕ A)` up to a trailing zero.
    pub fn abs_desc(&self) -> Vec<f64> {
        desc(&abs(&self.full))
    }
}

pub fn spread(a: &HermitianMatrix) -> Result<SpreadVector> {
    Ok(SpreadVector::from_spectrum(&eigenvalues(a)?))
}

/// `Spr⁺(A1 ⊕ A2)`.
pub fn spread_plus_of_sum(a1: &HermitianMatrix, a2: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(spread(&direct_sum(a1, a2))?.plus)
}

/// Columns with orthonormality checked to `1e-10`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalSystem(CMatrix);

impl OrthonormalSystem {
    pub fn new(vectors: CMatrix) -> Result<Self> {
        let deviation = orthonormality_defect(&vectors);
        if deviation > 1e-10 {
            return Err(SpreadError::NotIsometry { deviation });
        }
        Ok(Self(vectors))
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.0.ncols() == 0
    }
}

#[derive(Clone, Debug)]
pub struct KyFanWitness {
    /// `sum_{i<=r} Spr_i(A)`.
    pub value: f64,
    pub xs: OrthonormalSystem,
    pub ys: OrthonormalSystem,
}

/// `sum_i <A x_i, x_i> - <A y_i, y_i>`.
pub fn rayleigh_difference(a: &HermitianMatrix, xs: &OrthonormalSystem, ys: &OrthonormalSystem) -> f64 {
    let tr = |v: &CMatrix| (v.adjoint() * a.matrix() * v).trace().re;
    tr(xs.vectors()) - tr(ys.vectors())
}

/// The partial sum `Spr_1 + ... + Spr_r` with the eigenvector systems that
/// attain the maximum of the Rayleigh-sum difference.
pub fn spread_kyfan_witness(a: &HermitianMatrix, r: usize) -> Result<KyFanWitness> {
    let n = a.dim();
    if r == 0 || r > n / 2 {
        return Err(SpreadError::InvalidInput(format!("r = {r} outside 1..={}", n / 2)));
    }
    let es = eig_hermitian(a)?;
    let sv = SpreadVector::from_spectrum(&es.spectrum);
    let value = sv.full[..r].iter().sum();
    let xs = es.basis.columns(0, r).into_owned();
    let ys = es.basis.columns(n - r, r).into_owned();
    Ok(KyFanWitness { value, xs: OrthonormalSystem::new(xs)?, ys: OrthonormalSystem::new(ys)? })
}

/// `s(A - λ_{k+1} I) ≺ Spr⁺(A)` with `k = ⌊n/2⌋` (1-based index).
pub fn centered_singular_check(a: &HermitianMatrix) -> Result<MajorizationReport> {
    let l = eigenvalues(a)?;
    let sv = SpreadVector::from_spectrum(&l);
    let n = a.dim();
    if n == 0 {
        return majorizes(&[], &[], None);
    }
    let center = l.values()[n / 2];
    majorizes(&centered_singular_values(&l, center), &sv.plus, None)
}

/// `s(A - cI)` from the spectrum, without another decomposition.
fn centered_singular_values(l: &Spectrum, center: f64) -> Vec<f64> {
    desc(&l.values().iter().map(|v| (v - center).abs()).collect::<Vec<_>>())
}

/// `½ Spr⁺(A ⊕ A) ≺_w s(A)`, plus the chain through `s(A - λ I)`
/// evaluated at both candidate centers `λ_{k+1}` and `λ_k`.
///
/// At `λ_{k+1}` (the median) both links are majorizations and are asserted.
/// At `λ_k` only the weak first link is guaranteed; for odd `n` the total of
/// `s(A - λ_k I)` exceeds that of `Spr⁺(A)`, so the majorization links are
/// recorded but not asserted.
pub fn half_spread_vs_singular_check(a: &HermitianMatrix) -> Result<CheckOutcome> {
    let n = a.dim();
    let l = eigenvalues(a)?;
    let sv = SpreadVector::from_spectrum(&l);
    let half_double = scale(&spread(&direct_sum(a, a))?.plus, 0.5);
    let s = svd_values(a.matrix()).0;

    let mut out = CheckOutcome::new("half_spread_vs_singular");
    out.assert_report("half_spread_vs_singular", submajorizes(&half_double, &s, None)?);
    out.value("half_spread_double", half_double.clone());
    out.value("singular_values", s);
    if n == 0 {
        return Ok(out);
    }
    let k = n / 2;
    let median = l.values()[k];
    let centered = centered_singular_values(&l, median);
    out.assert_report("chain_center_k_plus_1.lower", majorizes(&half_double, &centered, None)?);
    out.assert_report("chain_center_k_plus_1.upper", majorizes(&centered, &sv.plus, None)?);
    if k >= 1 {
        let centered_k = centered_singular_values(&l, l.values()[k - 1]);
        out.assert_report("chain_center_k.lower_weak", submajorizes(&half_double, &centered_k, None)?);
        out.observe_report("chain_center_k.lower", majorizes(&half_double, &centered_k, None)?);
        out.observe_report("chain_center_k.upper", majorizes(&centered_k, &sv.plus, None)?);
    } else {
        out.skip("chain_center_k", "n = 1 has no k-th eigenvalue with k = 0");
    }
    Ok(out)
}

/// `Spr⁺(Z*AZ) ≺_w Spr⁺(A)` and its entrywise form for an isometry `Z`.
pub fn compression_check(a: &HermitianMatrix, z: &Isometry) -> Result<CheckOutcome> {
    if z.ambient() != a.dim() {
        return Err(SpreadError::DimensionMismatch(format!(
            "isometry lives in C^{}, matrix is {}x{}",
            z.ambient(),
            a.dim(),
            a.dim()
        )));
    }
    let compressed = a.congruence(z.columns());
    let inner = spread(&compressed)?.plus;
    let outer = spread(a)?.plus;
    let tol = DEFAULT_REL_TOL * a.tol_scale();
    let mut out = CheckOutcome::new("compression");
    out.assert_report("compressed_spread", submajorizes(&inner, &outer, None)?);
    out.push_fact("compressed_spread_entrywise", Role::Asserted, entrywise_leq(&inner, &outer, tol));
    out.value("compressed_spread_plus", inner);
    out.value("spread_plus", outer);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct OrbitDiameter {
    /// `N(D_{Spr(A)})`.
    pub value: f64,
    /// A unitary attaining `N(A - U*AU) = value`.
    pub witness: CMatrix,
}

/// Diameter of the unitary orbit of `A` in the norm `N`, with the
/// order-reversing witness `U = V R V*` (`V` an eigenbasis, `R` the flip).
pub fn orbit_diameter(a: &HermitianMatrix, norm: &UinDescriptor) -> Result<OrbitDiameter> {
    let es = eig_hermitian(a)?;
    let n = a.dim();
    let sv = SpreadVector::from_spectrum(&es.spectrum);
    let v = &es.basis;
    let reversed = CMatrix::from_fn(n, n, |i, j| v[(i, n - 1 - j)]);
    let witness = &reversed * v.adjoint();
    Ok(OrbitDiameter { value: uin_norm(&sv.full, norm), witness })
}

/// `N(A - U*AU)`.
pub fn orbit_distance(a: &HermitianMatrix, u: &CMatrix, norm: &UinDescriptor) -> f64 {
    let conj = u.adjoint() * a.matrix() * u;
    uin_norm(&svd_values(&(a.matrix() - conj)).0, norm)
}

/// `Spr(A) - Spr(B) ≺ Spr(A - B) ≺ Spr(A) + Spr(B)`.
pub fn lidskii_spread_check(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<CheckOutcome> {
    if a.dim() != b.dim() {
        return Err(SpreadError::DimensionMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    let sa = spread(a)?.full;
    let sb = spread(b)?.full;
    let sd = spread(&a.sub(b))?.full;
    let mut out = CheckOutcome::new("lidskii_spread");
    out.assert_report("lower", majorizes(&sub(&sa, &sb), &sd, None)?);
    out.assert_report("upper", majorizes(&sd, &crate::majorization::add(&sa, &sb), None)?);
    Ok(out)
}
