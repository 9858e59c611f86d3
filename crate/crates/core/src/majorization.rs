//! Majorization and submajorization of real vectors.
//!
//! `x ≺_w y` holds when every descending prefix sum of `x` is bounded by the
//! matching prefix sum of `y`; `x ≺ y` additionally requires equal totals.
//! Nonnegative vectors of different lengths are compared after appending
//! zeros to the shorter one. Signed vectors must have equal length.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpreadError};
use crate::linalg::{eigenvalues, svd_values, CMatrix, HermitianMatrix};

/// Relative factor of the default comparison tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Submajorized,
    Majorized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorizationReport {
    pub relation: Relation,
    pub verdict: bool,
    /// `margins[j] = sum_{i<=j} y_i - sum_{i<=j} x_i` on the sorted, padded vectors.
    pub margins: Vec<f64>,
    /// `sum(y) - sum(x)`.
    pub trace_gap: f64,
    pub tolerance: f64,
    /// Zeros appended to `x` and to `y`.
    pub padded_lengths: (usize, usize),
}

impl MajorizationReport {
    /// Smallest signed slack of the relation; negative beyond `-tolerance`
    /// means a violation.
    pub fn min_margin(&self) -> f64 {
        let m = self.margins.iter().copied().fold(f64::INFINITY, f64::min);
        let m = if m.is_finite() { m } else { 0.0 };
        match self.relation {
            Relation::Submajorized => m,
            Relation::Majorized => m.min(-self.trace_gap.abs()),
        }
    }

    /// 0-based index of the first prefix sum that fails.
    pub fn first_violation(&self) -> Option<usize> {
        self.margins.iter().position(|&m| m < -self.tolerance)
    }
}

/// `1e-9 * max(1, sum |y_i|)`.
pub fn default_tolerance(y: &[f64]) -> f64 {
    DEFAULT_REL_TOL * y.iter().map(|v| v.abs()).sum::<f64>().max(1.0)
}

fn check_finite(v: &[f64], what: &'static str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(SpreadError::NonFinite(what))
    }
}

/// `x ≺_w y`: is `x` submajorized by `y`?
pub fn submajorizes(x: &[f64], y: &[f64], tol: Option<f64>) -> Result<MajorizationReport> {
    compare(x, y, tol, Relation::Submajorized)
}

/// `x ≺ y`: is `x` majorized by `y`?
pub fn majorizes(x: &[f64], y: &[f64], tol: Option<f64>) -> Result<MajorizationReport> {
    compare(x, y, tol, Relation::Majorized)
}

fn compare(x: &[f64], y: &[f64], tol: Option<f64>, relation: Relation) -> Result<MajorizationReport> {
    check_finite(x, "left vector")?;
    check_finite(y, "right vector")?;
    if x.len() != y.len() && (x.iter().any(|&v| v < 0.0) || y.iter().any(|&v| v < 0.0)) {
        return Err(SpreadError::InvalidComparison(format!(
            "lengths {} and {} differ and a vector has a negative entry; zero padding is only defined for nonnegative vectors",
            x.len(),
            y.len()
        )));
    }
    let len = x.len().max(y.len());
    let padded_lengths = (len - x.len(), len - y.len());
    let xs = pad(&desc(x), len);
    let ys = pad(&desc(y), len);
    let tolerance = tol.unwrap_or_else(|| default_tolerance(y));

    let mut margins = Vec::with_capacity(len);
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        margins.push(sy - sx);
    }
    let trace_gap = y.iter().sum::<f64>() - x.iter().sum::<f64>();
    let sub = margins.iter().all(|&m| m >= -tolerance);
    let verdict = match relation {
        Relation::Submajorized => sub,
        Relation::Majorized => sub && trace_gap.abs() <= tolerance,
    };
    Ok(MajorizationReport { relation, verdict, margins, trace_gap, tolerance, padded_lengths })
}

/// Non-increasing rearrangement; equal values keep input order.
pub fn desc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Non-decreasing rearrangement.
pub fn asc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

pub fn pad(x: &[f64], len: usize) -> Vec<f64> {
    let mut v = x.to_vec();
    if v.len() < len {
        v.resize(len, 0.0);
    }
    v
}

pub fn ones(r: usize) -> Vec<f64> {
    vec![1.0; r]
}

/// Entrywise sum, truncated to the shorter length.
pub fn add(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// Entrywise difference, truncated to the shorter length.
pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Entrywise product, truncated to the shorter length.
pub fn mul(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a * b).collect()
}

/// Product of the descending rearrangements, truncated to the shorter length.
pub fn sorted_product(x: &[f64], y: &[f64]) -> Vec<f64> {
    mul(&desc(x), &desc(y))
}

pub fn scale(x: &[f64], t: f64) -> Vec<f64> {
    x.iter().map(|v| v * t).collect()
}

pub fn abs(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.abs()).collect()
}

/// Result of an entrywise comparison `x_i <= y_i` over the common length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntrywiseFact {
    pub holds: bool,
    /// 0-based index of the first violated entry.
    pub first_violation: Option<usize>,
    /// `max_i (x_i - y_i)`.
    pub max_excess: f64,
    pub tolerance: f64,
}

pub fn entrywise_leq(x: &[f64], y: &[f64], tol: f64) -> EntrywiseFact {
    let diffs: Vec<f64> = sub(x, y);
    let first_violation = diffs.iter().position(|&d| d > tol);
    let max_excess = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    EntrywiseFact {
        holds: first_violation.is_none(),
        first_violation,
        max_excess: if max_excess.is_finite() { max_excess } else { 0.0 },
        tolerance: tol,
    }
}

/// A unitarily invariant norm, identified by its symmetric gauge function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UinDescriptor {
    KyFan { k: usize },
    Schatten { p: f64 },
    Spectral,
}

impl UinDescriptor {
    pub fn ky_fan(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(SpreadError::InvalidInput("Ky Fan index must be >= 1".into()));
        }
        Ok(Self::KyFan { k })
    }

    pub fn schatten(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(SpreadError::InvalidInput(format!("Schatten exponent {p} < 1")));
        }
        Ok(Self::Schatten { p })
    }

    /// Ky Fan `1..=n`, Schatten `p in {1, 2, 4}` and the spectral norm.
    pub fn standard_family(n: usize) -> Vec<Self> {
        let mut v: Vec<Self> = (1..=n.max(1)).map(|k| Self::KyFan { k }).collect();
        v.extend([1.0, 2.0, 4.0].map(|p| Self::Schatten { p }));
        v.push(Self::Spectral);
        v
    }

    pub fn label(&self) -> String {
        match self {
            Self::KyFan { k } => format!("ky_fan({k})"),
            Self::Schatten { p } => format!("schatten({p})"),
            Self::Spectral => "spectral".into(),
        }
    }
}

/// `N(D_x)`: the norm of the diagonal matrix with diagonal `x`.
pub fn uin_norm(x: &[f64], norm: &UinDescriptor) -> f64 {
    let a = desc(&abs(x));
    match *norm {
        UinDescriptor::KyFan { k } => a.iter().take(k).sum(),
        UinDescriptor::Schatten { p } => {
            let m = a.first().copied().unwrap_or(0.0);
            if m == 0.0 {
                return 0.0;
            }
            // scaled to avoid overflow for large p
            m * a.iter().map(|v| (v / m).powf(p)).sum::<f64>().powf(1.0 / p)
        }
        UinDescriptor::Spectral => a.first().copied().unwrap_or(0.0),
    }
}

/// The pinching `sum_i P_i D P_i` for the coordinate block partition `blocks`.
pub fn pinch(d: &HermitianMatrix, blocks: &[usize]) -> Result<HermitianMatrix> {
    let n = d.dim();
    if blocks.iter().sum::<usize>() != n || blocks.contains(&0) {
        return Err(SpreadError::InvalidInput(format!("block partition {blocks:?} does not cover dimension {n}")));
    }
    let mut owner = Vec::with_capacity(n);
    for (idx, &b) in blocks.iter().enumerate() {
        owner.extend(std::iter::repeat_n(idx, b));
    }
    let m = CMatrix::from_fn(n, n, |i, j| if owner[i] == owner[j] { d.matrix()[(i, j)] } else { Default::default() });
    HermitianMatrix::new(m)
}

/// Weyl's singular value inequalities, valid for any square `C`, `D`.
pub fn weyl_singular_checks(c: &CMatrix, d: &CMatrix) -> Result<BTreeMap<String, MajorizationReport>> {
    if c.shape() != d.shape() || c.nrows() != c.ncols() {
        return Err(SpreadError::DimensionMismatch(format!("{:?} vs {:?}", c.shape(), d.shape())));
    }
    let sc = svd_values(c).0;
    let sd = svd_values(d).0;
    let mut out = BTreeMap::new();
    out.insert("weyl_singular_additive".into(), submajorizes(&svd_values(&(c + d)).0, &add(&sc, &sd), None)?);
    out.insert("weyl_singular_multiplicative".into(), submajorizes(&svd_values(&(c * d)).0, &mul(&sc, &sd), None)?);
    Ok(out)
}

/// The classical eigenvalue and singular value inequalities for a pair of
/// matrices. Eigenvalue-based relations need Hermitian input; `blocks` is the
/// coordinate partition used for the pinching relation.
pub fn classical_checks(c: &CMatrix, d: &CMatrix, blocks: &[usize]) -> Result<BTreeMap<String, MajorizationReport>> {
    let mut out = weyl_singular_checks(c, d)?;
    let hc = HermitianMatrix::new(c.clone()).map_err(|e| SpreadError::InvalidInput(format!("C: {e}")))?;
    let hd = HermitianMatrix::new(d.clone()).map_err(|e| SpreadError::InvalidInput(format!("D: {e}")))?;
    let lc = eigenvalues(&hc)?;
    let ld = eigenvalues(&hd)?;
    let l_sum = eigenvalues(&hc.add(&hd))?;
    let l_diff = eigenvalues(&hc.sub(&hd))?;

    out.insert("weyl_eigen_additive".into(), majorizes(&l_sum.0, &add(&lc.0, &ld.0), None)?);
    out.insert("lidskii_lower".into(), majorizes(&sub(&lc.0, &ld.0), &l_diff.0, None)?);
    out.insert("lidskii_upper".into(), majorizes(&l_diff.0, &sub(&lc.0, &ld.ascending()), None)?);
    let gaps = abs(&sub(&lc.0, &ld.0));
    out.insert("eigen_gap_vs_singular".into(), submajorizes(&gaps, &svd_values(&(c - d)).0, None)?);
    let pinched = eigenvalues(&pinch(&hd, blocks)?)?;
    out.insert("pinching".into(), majorizes(&pinched.0, &ld.0, None)?);
    Ok(out)
}
