//! Principal angles between subspaces, direct rotations, and the angle-side
//! spread inequalities for subspaces moved by `e^{iX}`.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;

use crate::ensemble::haar_unitary;
use crate::error::{Result, SpreadError};
use crate::linalg::{
    c, eig_hermitian, eigenvalues, orthonormality_defect, svd_values, unitary_exp, CMatrix, HermitianMatrix,
};
use crate::majorization::{add, entrywise_leq, scale, submajorizes, MajorizationReport};
use crate::outcome::{CheckOutcome, Role};
use crate::spread::spread;

const ISOMETRY_TOL: f64 = 1e-10;
/// Below this cosine a principal angle counts as `pi/2`.
const DEGENERATE_COS: f64 = 1e-10;

/// An `n x k` matrix with orthonormal columns, standing for its range.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry(CMatrix);

impl Isometry {
    pub fn new(columns: CMatrix) -> Result<Self> {
        let deviation = orthonormality_defect(&columns);
        if deviation > ISOMETRY_TOL || columns.ncols() > columns.nrows() {
            return Err(SpreadError::NotIsometry { deviation });
        }
        Ok(Self(columns))
    }

    /// Orthonormal basis of the span of `spanning`, which must have full
    /// column rank.
    pub fn orthonormalize(spanning: &CMatrix) -> Result<Self> {
        let (n, k) = spanning.shape();
        if k == 0 || k > n {
            return Err(SpreadError::InvalidInput(format!("cannot orthonormalize {k} vectors in C^{n}")));
        }
        let s = crate::linalg::svd_values(spanning).0;
        if !(s[k - 1] > 1e-12 * s[0]) {
            return Err(SpreadError::InvalidInput("spanning set is rank deficient".into()));
        }
        Self::new(spanning.clone().qr().q())
    }

    /// The first `k` columns of the identity.
    pub fn coordinate(n: usize, k: usize) -> Result<Self> {
        Self::new(CMatrix::identity(n, k))
    }

    pub fn columns(&self) -> &CMatrix {
        &self.0
    }

    pub fn ambient(&self) -> usize {
        self.0.nrows()
    }

    pub fn rank(&self) -> usize {
        self.0.ncols()
    }

    /// `W S` for a unitary `W`.
    pub fn moved_by(&self, w: &CMatrix) -> Result<Self> {
        Self::new(w * &self.0)
    }

    /// An isometry onto the orthogonal complement of the range.
    pub fn orth_complement(&self) -> Result<Self> {
        let n = self.ambient();
        let k = self.rank();
        let proj = CMatrix::identity(n, n) - &self.0 * self.0.adjoint();
        let es = eig_hermitian(&HermitianMatrix::hermitian_part(&proj)?)?;
        Self::new(es.basis.columns(0, n - k).into_owned())
    }
}

fn same_shape(s: &Isometry, t: &Isometry) -> Result<()> {
    if s.ambient() != t.ambient() || s.rank() != t.rank() {
        return Err(SpreadError::DimensionMismatch(format!(
            "subspaces of dimension {} in C^{} and {} in C^{}",
            s.rank(),
            s.ambient(),
            t.rank(),
            t.ambient()
        )));
    }
    Ok(())
}

/// Principal angles in radians, non-increasing, each in `[0, pi/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalAngles(pub Vec<f64>);

impl PrincipalAngles {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.to_degrees()).collect()
    }
}

/// `cos θ_j = s_{k-j+1}(S*T)`.
pub fn principal_angles_cos_form(s: &Isometry, t: &Isometry) -> Result<Vec<f64>> {
    same_shape(s, t)?;
    let sv = svd_values(&(s.columns().adjoint() * t.columns())).0;
    Ok(sv.iter().rev().map(|&x| x.clamp(-1.0, 1.0).acos()).collect())
}

/// `sin θ_j = s_j(T*S_perp)`.
pub fn principal_angles_sin_form(s: &Isometry, t: &Isometry) -> Result<Vec<f64>> {
    same_shape(s, t)?;
    let perp = s.orth_complement()?;
    let sv = svd_values(&(perp.columns().adjoint() * t.columns())).0;
    Ok(sv.iter().map(|&x| x.clamp(-1.0, 1.0).asin()).collect())
}

/// Principal angles from the cosine formula, with angles below `pi/4` taken
/// from the sine formula where `arccos` loses precision.
pub fn principal_angles(s: &Isometry, t: &Isometry) -> Result<PrincipalAngles> {
    let from_cos = principal_angles_cos_form(s, t)?;
    let from_sin = principal_angles_sin_form(s, t)?;
    let mut angles: Vec<f64> = from_cos
        .iter()
        .zip(&from_sin)
        .map(|(&ac, &as_)| if as_ < std::f64::consts::FRAC_PI_4 { as_ } else { ac })
        .collect();
    angles.sort_by(|a, b| b.total_cmp(a));
    Ok(PrincipalAngles(angles))
}

/// A direct rotation `U = e^{iZ}` carrying `range(S)` onto `range(T)`.
#[derive(Clone, Debug)]
pub struct DirectRotation {
    pub u: CMatrix,
    /// Hermitian logarithm with `λ(Z) = (Θ*, 0, ..., 0, -Θ*↑)`.
    pub z: HermitianMatrix,
    /// The strictly positive principal angles, non-increasing.
    pub positive_angles: Vec<f64>,
}

/// Builds the direct rotation from the SVD alignment of `S*T`: with
/// `S*T = W1 Σ W2*`, the columns `u_j` of `S W1` and `t_j` of `T W2` satisfy
/// `t_j = cos θ_j u_j + sin θ_j v_j` with orthonormal `v_j ⟂ range(S)`, and
/// `U` rotates each plane `span(u_j, v_j)` by `θ_j`, fixing the rest.
pub fn direct_rotation(s: &Isometry, t: &Isometry) -> Result<DirectRotation> {
    same_shape(s, t)?;
    let n = s.ambient();
    let k = s.rank();
    let m = s.columns().adjoint() * t.columns();
    let (w1, cosines, w2) = crate::linalg::svd_factors(&m)?;
    let min_cos = cosines.iter().copied().fold(f64::INFINITY, f64::min);
    if k > 0 && min_cos <= DEGENERATE_COS {
        return Err(SpreadError::DegeneratePair { min_cos });
    }
    let su = s.columns() * w1;
    let tv = t.columns() * w2;

    let mut u = CMatrix::identity(n, n);
    let mut z = CMatrix::zeros(n, n);
    let mut positive = Vec::new();
    for j in 0..k {
        let cos = cosines[j].min(1.0);
        let uj = su.column(j).into_owned();
        let w = tv.column(j) - &uj * c(cos, 0.0);
        let sin = w.norm();
        let theta = sin.atan2(cos);
        // below the noise of the factorization the plane is undefined
        if theta <= 1e-13 {
            continue;
        }
        let vj = w / c(sin, 0.0);
        let (ct, st) = (theta.cos(), theta.sin());
        let uu = &uj * uj.adjoint();
        let vv = &vj * vj.adjoint();
        let vu = &vj * uj.adjoint();
        let uv = &uj * vj.adjoint();
        u += (&uu + &vv) * c(ct - 1.0, 0.0) + (&vu - &uv) * c(st, 0.0);
        z += (&uv - &vu) * c(0.0, theta);
        positive.push(theta);
    }
    positive.sort_by(|a, b| b.total_cmp(a));
    Ok(DirectRotation { u, z: HermitianMatrix::hermitian_part(&z)?, positive_angles: positive })
}

/// The Davis-Kahan extremal property on random competitors: for unitaries
/// `V = U W` with `W` fixing `range(S)`,
/// `2 sin(θ_j/2) = s_j((1-U)S) <= s_j((1-V)S)`.
pub fn dk_minimality_check<R: Rng + ?Sized>(
    s: &Isometry,
    t: &Isometry,
    samples: usize,
    rng: &mut R,
) -> Result<CheckOutcome> {
    let rot = direct_rotation(s, t)?;
    let n = s.ambient();
    let k = s.rank();
    let id = CMatrix::identity(n, n);
    let restricted = |v: &CMatrix| svd_values(&((&id - v) * s.columns())).0;
    let base = restricted(&rot.u);
    let angles = principal_angles(s, t)?;
    let chord: Vec<f64> = angles.values().iter().map(|a| 2.0 * (a / 2.0).sin()).collect();

    let mut out = CheckOutcome::new("direct_rotation_minimality");
    let mut chord_fact = entrywise_leq(&base, &chord, 1e-8);
    let reverse = entrywise_leq(&chord, &base, 1e-8);
    chord_fact.holds &= reverse.holds;
    chord_fact.max_excess = chord_fact.max_excess.max(reverse.max_excess);
    out.push_fact("chordal_identity", Role::Asserted, chord_fact);

    let perp = s.orth_complement()?;
    let mut worst = f64::NEG_INFINITY;
    let mut holds = true;
    for _ in 0..samples {
        let q1 = haar_unitary(k, rng);
        let q2 = haar_unitary(n - k, rng);
        let w = s.columns() * q1 * s.columns().adjoint() + perp.columns() * q2 * perp.columns().adjoint();
        let v = &rot.u * w;
        let f = entrywise_leq(&base, &restricted(&v), 1e-9);
        holds &= f.holds;
        worst = worst.max(f.max_excess);
    }
    out.push_fact(
        "direct_rotation_is_minimal",
        Role::Asserted,
        crate::majorization::EntrywiseFact {
            holds,
            first_violation: None,
            max_excess: if worst.is_finite() { worst } else { 0.0 },
            tolerance: 1e-9,
        },
    );
    Ok(out)
}

fn moved_subspace(s: &Isometry, x: &HermitianMatrix) -> Result<Isometry> {
    if s.ambient() != x.dim() {
        return Err(SpreadError::DimensionMismatch(format!("subspace in C^{}, X is {}x{}", s.ambient(), x.dim(), x.dim())));
    }
    s.moved_by(&unitary_exp(x)?)
}

/// `Θ(S, e^{iX}S) ≺_w ½ Spr⁺(X)`.
pub fn angle_spread_check(s: &Isometry, x: &HermitianMatrix) -> Result<MajorizationReport> {
    let t = moved_subspace(s, x)?;
    let angles = principal_angles(s, &t)?;
    let half = scale(&spread(x)?.plus, 0.5);
    submajorizes(angles.values(), &half, None)
}

/// `s(Z) ≺_w ½|Spr(X)|↓ ≺_w s(X)` for the direct rotation `e^{iZ}` from `S`
/// onto `e^{iX}S`; when `λ(X) ⊂ [-pi, pi]` also `θ_j <= s_j(X)`.
pub fn rotation_bound_check(s: &Isometry, x: &HermitianMatrix) -> Result<CheckOutcome> {
    let t = moved_subspace(s, x)?;
    let rot = direct_rotation(s, &t)?;
    let sz = svd_values(rot.z.matrix()).0;
    let half_abs = scale(&spread(x)?.abs_desc(), 0.5);
    let sx = svd_values(x.matrix()).0;
    let mut out = CheckOutcome::new("rotation_bound");
    out.assert_report("rotation_log_vs_half_spread", submajorizes(&sz, &half_abs, None)?);
    out.assert_report("half_spread_vs_singular", submajorizes(&half_abs, &sx, None)?);

    let lx = eigenvalues(x)?;
    let in_range = lx.values().iter().all(|v| v.abs() <= std::f64::consts::PI);
    if in_range {
        let angles = principal_angles(s, &t)?;
        out.push_fact("angles_vs_singular_entrywise", Role::Asserted, entrywise_leq(angles.values(), &sx, 1e-8));
        out.push_fact("log_vs_singular_entrywise", Role::Observed, entrywise_leq(&sz, &sx, 1e-8));
    } else {
        out.skip("angles_vs_singular_entrywise", "spectrum of X leaves [-pi, pi]");
    }
    out.value("rotation_log_singular_values", sz);
    Ok(out)
}

/// `Θ(S1, S3) ≺_w Θ(S1, S2) + Θ(S2, S3)` (triangle inequality for angles).
pub fn angle_triangle_check(s1: &Isometry, s2: &Isometry, s3: &Isometry) -> Result<MajorizationReport> {
    let a13 = principal_angles(s1, s3)?;
    let a12 = principal_angles(s1, s2)?;
    let a23 = principal_angles(s2, s3)?;
    submajorizes(a13.values(), &add(a12.values(), a23.values()), None)
}

/// Whether all principal angles stay below `pi/2` by a margin.
pub fn is_nondegenerate(s: &Isometry, t: &Isometry) -> Result<bool> {
    Ok(principal_angles(s, t)?.values().first().is_none_or(|&a| a < FRAC_PI_2 - 1e-8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hat, max_abs_entry, real_matrix};

    fn planar(theta: f64) -> (Isometry, Isometry) {
        let s = Isometry::new(real_matrix(&[vec![1.0], vec![0.0]]).unwrap()).unwrap();
        let t = Isometry::new(real_matrix(&[vec![theta.cos()], vec![theta.sin()]]).unwrap()).unwrap();
        (s, t)
    }

    #[test]
    fn identical_subspaces_have_zero_angles() {
        let s = Isometry::coordinate(4, 2).unwrap();
        let a = principal_angles(&s, &s).unwrap();
        assert!(a.values().iter().all(|&x| x.abs() < 1e-14));
        let rot = direct_rotation(&s, &s).unwrap();
        assert!(max_abs_entry(&(rot.u - CMatrix::identity(4, 4))) < 1e-14);
        assert!(max_abs_entry(rot.z.matrix()) < 1e-14);
        assert!(rot.positive_angles.is_empty());
    }

    #[test]
    fn planar_rotation() {
        let theta = 0.7;
        let (s, t) = planar(theta);
        let a = principal_angles(&s, &t).unwrap();
        assert!((a.values()[0] - theta).abs() < 1e-14);
        let rot = direct_rotation(&s, &t).unwrap();
        let lz = eigenvalues(&rot.z).unwrap();
        assert!((lz.values()[0] - theta).abs() < 1e-14 && (lz.values()[1] + theta).abs() < 1e-14);
        let image = &rot.u * s.columns();
        assert!(max_abs_entry(&(image - t.columns())) < 1e-14);
    }

    #[test]
    fn right_angle_is_degenerate() {
        let (s, t) = planar(FRAC_PI_2);
        assert!(matches!(direct_rotation(&s, &t), Err(SpreadError::DegeneratePair { .. })));
        assert!(!is_nondegenerate(&s, &t).unwrap());
    }

    #[test]
    fn rejects_non_isometry() {
        let m = real_matrix(&[vec![1.0, 1.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(Isometry::new(m.clone()), Err(SpreadError::NotIsometry { .. })));
        let q = Isometry::orthonormalize(&m).unwrap();
        assert_eq!(q.rank(), 2);
        let dup = real_matrix(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert!(Isometry::orthonormalize(&dup).is_err());
    }

    #[test]
    fn mismatched_shapes() {
        let s = Isometry::coordinate(4, 2).unwrap();
        let t = Isometry::coordinate(4, 1).unwrap();
        assert!(matches!(principal_angles(&s, &t), Err(SpreadError::DimensionMismatch(_))));
        assert!(angle_spread_check(&s, &HermitianMatrix::zeros(3)).is_err());
    }

    #[test]
    fn zero_and_scalar_generators() {
        let s = Isometry::coordinate(5, 2).unwrap();
        let r = angle_spread_check(&s, &HermitianMatrix::zeros(5)).unwrap();
        assert!(r.verdict);
        let r = angle_spread_check(&s, &HermitianMatrix::scalar(5, 0.8)).unwrap();
        assert!(r.verdict && r.margins.iter().all(|m| m.abs() < 1e-12));
        let out = rotation_bound_check(&s, &HermitianMatrix::zeros(5)).unwrap();
        assert!(out.passed());
    }

    #[test]
    fn planar_generator_equality() {
        let theta = 0.9;
        let s = Isometry::coordinate(2, 1).unwrap();
        let x = hat(&real_matrix(&[vec![theta]]).unwrap());
        let out = rotation_bound_check(&s, &x).unwrap();
        assert!(out.passed());
        let sz = &out.values["rotation_log_singular_values"];
        assert!((sz[0] - theta).abs() < 1e-12 && (sz[1] - theta).abs() < 1e-12);
        for r in out.reports.values() {
            assert!(r.report.margins.iter().all(|m| m.abs() < 1e-12), "{:?}", r.report.margins);
        }
    }
}
