//! Named checks for the block, difference, commutator and unitary-conjugate
//! spread inequalities, the fixed counterexamples, and the cross-validation
//! of the equivalent formulations.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpreadError};
use crate::linalg::{
    assemble_blocks, c, direct_sum, eigenvalues, hat, max_abs_entry, svd_values, unitary_exp, CMatrix,
    HermitianMatrix,
};
use crate::majorization::{
    entrywise_leq, scale, sorted_product, submajorizes, uin_norm, EntrywiseFact, MajorizationReport, UinDescriptor,
    DEFAULT_REL_TOL,
};
use crate::outcome::{CheckOutcome, Role};
use crate::spread::{spread, spread_plus_of_sum};
use crate::subspaces::{angle_spread_check, principal_angles, Isometry};

/// `λ_min >= -1e-10 * scale` counts as positive semidefinite.
pub const PSD_REL_TOL: f64 = 1e-10;

/// `A = [[A1, B], [B*, A2]]` with `A1` of size `k` and `A2` of size `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockHermitian {
    a1: HermitianMatrix,
    a2: HermitianMatrix,
    b: CMatrix,
    assembled: HermitianMatrix,
}

impl BlockHermitian {
    pub fn new(a1: HermitianMatrix, a2: HermitianMatrix, b: CMatrix) -> Result<Self> {
        let assembled = assemble_blocks(&a1, &b, &a2)?;
        Ok(Self { a1, a2, b, assembled })
    }

    /// Splits `A` after its first `k` coordinates.
    pub fn split(a: &HermitianMatrix, k: usize) -> Result<Self> {
        let n = a.dim();
        if k > n {
            return Err(SpreadError::DimensionMismatch(format!("cannot split dimension {n} at {k}")));
        }
        let m = a.matrix();
        let a1 = HermitianMatrix::new(m.view((0, 0), (k, k)).into_owned())?;
        let a2 = HermitianMatrix::new(m.view((k, k), (n - k, n - k)).into_owned())?;
        let b = m.view((0, k), (k, n - k)).into_owned();
        Self::new(a1, a2, b)
    }

    pub fn k(&self) -> usize {
        self.a1.dim()
    }

    pub fn r(&self) -> usize {
        self.a2.dim()
    }

    pub fn a1(&self) -> &HermitianMatrix {
        &self.a1
    }

    pub fn a2(&self) -> &HermitianMatrix {
        &self.a2
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn assembled(&self) -> &HermitianMatrix {
        &self.assembled
    }
}

fn entry_tol(scale: f64) -> f64 {
    DEFAULT_REL_TOL * scale.max(1.0)
}

fn is_psd(a: &HermitianMatrix) -> Result<bool> {
    a.is_psd(PSD_REL_TOL * a.tol_scale())
}

/// Norm-by-norm comparison `N(x) <= N(y)` over the standard family.
fn norm_fact(x: &[f64], y: &[f64], n: usize, tol: f64) -> EntrywiseFact {
    let family = UinDescriptor::standard_family(n);
    let lhs: Vec<f64> = family.iter().map(|nm| uin_norm(x, nm)).collect();
    let rhs: Vec<f64> = family.iter().map(|nm| uin_norm(y, nm)).collect();
    entrywise_leq(&lhs, &rhs, tol)
}

/// `2 s(B) ≺_w Spr⁺(A)`; for positive semidefinite `A` also the entrywise
/// bound `2 s_j(B) <= λ_j(A)` and the norm chain `2N(B) <= N(D_μ) <= N(A)`.
pub fn key_inequality_check(blk: &BlockHermitian) -> Result<CheckOutcome> {
    let a = blk.assembled();
    let l = eigenvalues(a)?;
    let plus = crate::spread::SpreadVector::from_spectrum(&l).plus;
    let twice = scale(&svd_values(blk.b()).0, 2.0);
    let tol = entry_tol(a.tol_scale());

    let mut out = CheckOutcome::new("key_inequality");
    out.assert_report("key_inequality", submajorizes(&twice, &plus, None)?);
    out.push_fact("spread_entrywise", Role::Observed, entrywise_leq(&twice, &plus, tol));
    if is_psd(a)? {
        out.push_fact("tao_entrywise", Role::Asserted, entrywise_leq(&twice, l.values(), tol));
        let sa = svd_values(a.matrix()).0;
        out.assert_report("tao_chain.upper", submajorizes(&plus, &sa, None)?);
        out.push_fact("norm_chain.lower", Role::Asserted, norm_fact(&twice, &plus, a.dim(), tol));
        out.push_fact("norm_chain.upper", Role::Asserted, norm_fact(&plus, &sa, a.dim(), tol));
        let mu_norm = uin_norm(&plus, &UinDescriptor::Schatten { p: 2.0 });
        let a_norm = uin_norm(&sa, &UinDescriptor::Schatten { p: 2.0 });
        out.value("schatten2_gap", vec![a_norm - mu_norm]);
    } else {
        out.skip("tao", "A is not positive semidefinite");
    }
    out.value("twice_singular_b", twice);
    out.value("spread_plus", plus);
    out.value("eigenvalues", l.0);
    Ok(out)
}

/// `Spr⁺(hat(B)) ≺_w Spr⁺(A)` and `Spr⁺(A1 ⊕ A2) ≺_w Spr⁺(A)`.
pub fn antidiagonal_check(blk: &BlockHermitian) -> Result<CheckOutcome> {
    let plus = spread(blk.assembled())?.plus;
    let anti = spread(&hat(blk.b()))?.plus;
    let diag = spread_plus_of_sum(blk.a1(), blk.a2())?;
    let mut out = CheckOutcome::new("antidiagonal");
    out.assert_report("antidiagonal", submajorizes(&anti, &plus, None)?);
    out.assert_report("block_diagonal", submajorizes(&diag, &plus, None)?);
    Ok(out)
}

fn same_dim(a1: &HermitianMatrix, a2: &HermitianMatrix) -> Result<()> {
    if a1.dim() != a2.dim() {
        return Err(SpreadError::DimensionMismatch(format!("{} vs {}", a1.dim(), a2.dim())));
    }
    Ok(())
}

/// `s(A1 - A2) ≺_w Spr⁺(A1 ⊕ A2)`, with the entrywise comparisons against
/// singular values of `A1 ⊕ A2`.
pub fn difference_check(a1: &HermitianMatrix, a2: &HermitianMatrix) -> Result<CheckOutcome> {
    same_dim(a1, a2)?;
    let sum = direct_sum(a1, a2);
    let d = svd_values(a1.sub(a2).matrix()).0;
    let plus = spread(&sum)?.plus;
    let s_sum = svd_values(sum.matrix()).0;
    let tol = entry_tol(sum.tol_scale());

    let mut out = CheckOutcome::new("difference");
    out.assert_report("difference", submajorizes(&d, &plus, None)?);
    out.push_fact("difference_entrywise", Role::Observed, entrywise_leq(&d, &plus, tol));
    out.push_fact("general_pair_entrywise", Role::Asserted, entrywise_leq(&d, &scale(&s_sum, 2.0), tol));
    if is_psd(a1)? && is_psd(a2)? {
        out.push_fact("zhan_entrywise", Role::Asserted, entrywise_leq(&d, &s_sum, tol));
        out.push_fact("spread_below_singular", Role::Asserted, entrywise_leq(&plus, &s_sum, tol));
    } else {
        out.skip("zhan", "A1 and A2 are not both positive semidefinite");
    }
    out.value("singular_difference", d);
    out.value("spread_plus_sum", plus);
    out.value("eigenvalues_sum", eigenvalues(&sum)?.0);
    Ok(out)
}

fn is_hermitian(x: &CMatrix) -> bool {
    x.nrows() == x.ncols() && max_abs_entry(&(x - x.adjoint())) <= 1e-12 * max_abs_entry(x)
}

/// `s(A1 X - X A2) ≺_w s(X) Spr⁺(A1 ⊕ A2)` and the special cases for
/// Hermitian or positive `X` and for positive `A1`, `A2`.
pub fn commutator_check(a1: &HermitianMatrix, a2: &HermitianMatrix, x: &CMatrix) -> Result<CheckOutcome> {
    same_dim(a1, a2)?;
    let n = a1.dim();
    if x.shape() != (n, n) {
        return Err(SpreadError::DimensionMismatch(format!("X is {}x{}, expected {n}x{n}", x.nrows(), x.ncols())));
    }
    let comm = a1.matrix() * x - x * a2.matrix();
    let sc = svd_values(&comm).0;
    let sx = svd_values(x).0;
    let sum = direct_sum(a1, a2);
    let plus_sum = spread(&sum)?.plus;

    let mut out = CheckOutcome::new("commutator");
    out.assert_report("commutator", submajorizes(&sc, &sorted_product(&sx, &plus_sum), None)?);

    let scale_a = a1.tol_scale().max(a2.tol_scale());
    let same_a = max_abs_entry(&(a1.matrix() - a2.matrix())) <= 1e-12 * scale_a;
    if same_a && is_hermitian(x) {
        let xh = HermitianMatrix::hermitian_part(x)?;
        let plus_x = spread(&xh)?.plus;
        out.assert_report("hermitian_commutator", submajorizes(&sc, &sorted_product(&plus_x, &plus_sum), None)?);
        if is_psd(&xh)? {
            let norm_x = sx.first().copied().unwrap_or(0.0);
            out.assert_report("positive_commutator", submajorizes(&sc, &scale(&plus_sum, 0.5 * norm_x), None)?);
        } else {
            out.skip("positive_commutator", "X is not positive semidefinite");
        }
    } else {
        out.skip("hermitian_commutator", "requires A1 = A2 and Hermitian X");
    }

    if is_psd(a1)? && is_psd(a2)? {
        let s_sum = svd_values(sum.matrix()).0;
        let norm_x = sx.first().copied().unwrap_or(0.0);
        out.assert_report("positive_pair", submajorizes(&sc, &sorted_product(&sx, &s_sum), None)?);
        let bound = scale(&s_sum, norm_x);
        out.assert_report("positive_pair_norm_form", submajorizes(&sc, &bound, None)?);
        out.push_fact("positive_pair_norms", Role::Asserted, norm_fact(&sc, &bound, 2 * n, entry_tol(scale_a * norm_x)));
    } else {
        out.skip("positive_pair", "A1 and A2 are not both positive semidefinite");
    }
    Ok(out)
}

/// With `U = e^{iX}`: `s(A - U*AU) ≺_w s(X) Spr⁺(A ⊕ A)` and
/// `s(A - U*AU) ≺_w s(A) Spr⁺(X ⊕ X)`.
pub fn unitary_conjugate_check(a: &HermitianMatrix, x: &HermitianMatrix) -> Result<CheckOutcome> {
    same_dim(a, x)?;
    let u = unitary_exp(x)?;
    let d = svd_values(&(a.matrix() - u.adjoint() * a.matrix() * &u)).0;
    let sx = svd_values(x.matrix()).0;
    let sa = svd_values(a.matrix()).0;
    let mut out = CheckOutcome::new("unitary_conjugate");
    out.assert_report("generator_bound", submajorizes(&d, &sorted_product(&sx, &spread_plus_of_sum(a, a)?), None)?);
    out.assert_report("matrix_bound", submajorizes(&d, &sorted_product(&sa, &spread_plus_of_sum(x, x)?), None)?);
    Ok(out)
}

/// `E = (A1 - A2)² + 4 Re(B)²` with `Re(B) = (B + B*)/2`.
fn weak_square_matrix(blk: &BlockHermitian) -> Result<HermitianMatrix> {
    let d = blk.a1().sub(blk.a2());
    let re_b = (blk.b() + blk.b().adjoint()) * c(0.5, 0.0);
    let e = d.matrix() * d.matrix() + &re_b * &re_b * c(4.0, 0.0);
    HermitianMatrix::hermitian_part(&e)
}

/// `λ((A1 - A2)² + 4 Re(B)²) ≺_w Spr⁺(A)²` (entrywise square) for square blocks.
pub fn weak_square_check(blk: &BlockHermitian) -> Result<CheckOutcome> {
    if blk.k() != blk.r() {
        return Err(SpreadError::DimensionMismatch(format!("blocks of size {} and {}", blk.k(), blk.r())));
    }
    let le = eigenvalues(&weak_square_matrix(blk)?)?;
    let plus = spread(blk.assembled())?.plus;
    let squared: Vec<f64> = plus.iter().map(|v| v * v).collect();
    let mut out = CheckOutcome::new("weak_square");
    out.assert_report("weak_square", submajorizes(le.values(), &squared, None)?);
    out.value("lhs_spectrum", le.0);
    out.value("spread_plus_squared", squared);
    Ok(out)
}

/// The 4x4 instance on which `λ(((A1-A2)² + 4B*B)^{1/2}) ≺_w Spr⁺(A)` fails,
/// with the weaker squared relation still holding.
pub fn conjtru_counterexample() -> Result<CheckOutcome> {
    let blk = crate::ensemble::conjtru_4x4();
    let plus = spread(blk.assembled())?.plus;
    let d = blk.a1().sub(blk.a2());
    let m = d.matrix() * d.matrix() + blk.b().adjoint() * blk.b() * c(4.0, 0.0);
    let root: Vec<f64> = eigenvalues(&HermitianMatrix::hermitian_part(&m)?)?
        .values()
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    let mut out = CheckOutcome::new("conjtru_counterexample");
    out.expect_violation("square_root_form", submajorizes(&root, &plus, None)?);
    out.value("spread_plus", plus.clone());
    out.value("square_root_spectrum", root.clone());
    out.value("traces", vec![plus.iter().sum(), root.iter().sum()]);
    out.absorb("weak_square", weak_square_check(&blk)?);
    Ok(out)
}

/// Shared inputs for the five equivalent formulations.
#[derive(Clone, Debug)]
pub struct EquivalenceInstance {
    pub a1: HermitianMatrix,
    pub a2: HermitianMatrix,
    pub b: CMatrix,
    pub x: CMatrix,
    pub generator: HermitianMatrix,
    pub subspace: Isometry,
}

pub const EQUIVALENCE_STATEMENTS: [&str; 5] =
    ["difference", "block_off_diagonal", "generalized_commutator", "unitary_conjugate", "subspace_angles"];

/// Evaluates the five formulations on one instance:
/// 1. `s(A1 - A2) ≺_w Spr⁺(A1 ⊕ A2)`
/// 2. `2 s(B) ≺_w Spr⁺([[A1, B], [B*, A2]])`
/// 3. `s(A1 X - X A2) ≺_w s(X) Spr⁺(A1 ⊕ A2)`
/// 4. `s(A1 - U*A1U) ≺_w s(G) Spr⁺(A1 ⊕ A1)` with `U = e^{iG}`
/// 5. `Θ(S, e^{iG}S) ≺_w ½ Spr⁺(G)`
pub fn equivalence_statements(inst: &EquivalenceInstance) -> Result<[MajorizationReport; 5]> {
    let diff = difference_check(&inst.a1, &inst.a2)?;
    let block = BlockHermitian::new(inst.a1.clone(), inst.a2.clone(), inst.b.clone())?;
    let key = key_inequality_check(&block)?;
    let comm = commutator_check(&inst.a1, &inst.a2, &inst.x)?;
    let conj = unitary_conjugate_check(&inst.a1, &inst.generator)?;
    let angles = angle_spread_check(&inst.subspace, &inst.generator)?;
    let take = |o: &CheckOutcome, name: &str| o.report(name).cloned().expect("report present");
    Ok([
        take(&diff, "difference"),
        take(&key, "key_inequality"),
        take(&comm, "commutator"),
        take(&conj, "generator_bound"),
        angles,
    ])
}

/// Per-statement summary of an equivalence campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceSummary {
    pub trials: usize,
    pub min_margins: [f64; 5],
    pub failures: [usize; 5],
}

impl EquivalenceSummary {
    pub fn all_passed(&self) -> bool {
        self.failures.iter().all(|&f| f == 0)
    }
}

/// Random shared instance of dimension `n` (generator normalized to
/// `||G|| <= pi/2`).
pub fn random_equivalence_instance<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> EquivalenceInstance {
    use crate::ensemble::{gaussian_hermitian, gaussian_matrix, haar_isometry};
    let a1 = gaussian_hermitian(n, 1.0, rng);
    let a2 = gaussian_hermitian(n, 1.0, rng);
    let b = gaussian_matrix(n, n, rng);
    let x = gaussian_matrix(n, n, rng);
    let g = gaussian_hermitian(n, 1.0, rng);
    let factor: f64 = rng.random_range(0.05..1.0) * std::f64::consts::FRAC_PI_2 / g.spectral_norm().max(1e-300);
    let k = rng.random_range(1..=n);
    EquivalenceInstance { a1, a2, b, x, generator: g.scale_by(factor), subspace: haar_isometry(n, k, rng) }
}

/// Runs the five formulations on `trials` seeded instances (dims 2..=8) and
/// records, per statement, the minimum margin and the failure count.
pub fn equivalence_crosscheck(seed: u64, trials: usize) -> Result<(CheckOutcome, EquivalenceSummary)> {
    use rand::Rng;
    let mut min_margins = [f64::INFINITY; 5];
    let mut failures = [0usize; 5];
    let mut worst: [Option<MajorizationReport>; 5] = Default::default();
    for t in 0..trials {
        let mut rng = crate::ensemble::trial_rng(seed, "equivalence", t as u64);
        let n = rng.random_range(2..=8);
        let inst = random_equivalence_instance(n, &mut rng);
        let reports = equivalence_statements(&inst)?;
        for (i, r) in reports.into_iter().enumerate() {
            if !r.verdict {
                failures[i] += 1;
            }
            let m = r.min_margin();
            let replace = match &worst[i] {
                None => true,
                Some(w) => (w.verdict && !r.verdict) || (w.verdict == r.verdict && m < min_margins[i]),
            };
            min_margins[i] = min_margins[i].min(m);
            if replace {
                worst[i] = Some(r);
            }
        }
    }
    let mut out = CheckOutcome::new("equivalence");
    for (i, w) in worst.into_iter().enumerate() {
        if let Some(r) = w {
            out.assert_report(&format!("{}.{}", i + 1, EQUIVALENCE_STATEMENTS[i]), r);
        }
    }
    let mm: Vec<f64> = min_margins.iter().map(|&m| if m.is_finite() { m } else { 0.0 }).collect();
    out.value("min_margins", mm.clone());
    let summary = EquivalenceSummary {
        trials,
        min_margins: [mm[0], mm[1], mm[2], mm[3], mm[4]],
        failures,
    };
    Ok((out, summary))
}

/// `|λ(S*AS) - λ(T*AT)| ≺_w (sin θ_i Spr⁺_i(A))_{i <= min(k, ⌊n/2⌋)}`,
/// recorded without asserting (open conjecture).
pub fn ritz_conjecture_probe(a: &HermitianMatrix, s: &Isometry, t: &Isometry) -> Result<CheckOutcome> {
    if s.ambient() != a.dim() || t.ambient() != a.dim() || s.rank() != t.rank() {
        return Err(SpreadError::DimensionMismatch(format!(
            "A is {n}x{n}, subspaces {}x{} and {}x{}",
            s.ambient(),
            s.rank(),
            t.ambient(),
            t.rank(),
            n = a.dim()
        )));
    }
    let ls = eigenvalues(&a.congruence(s.columns()))?;
    let lt = eigenvalues(&a.congruence(t.columns()))?;
    let lhs: Vec<f64> = ls.values().iter().zip(lt.values()).map(|(x, y)| (x - y).abs()).collect();
    let sines: Vec<f64> = principal_angles(s, t)?.values().iter().map(|v| v.sin()).collect();
    let rhs = crate::majorization::mul(&sines, &spread(a)?.plus);
    let mut out = CheckOutcome::new("ritz_conjecture_probe");
    out.observe_report("ritz", submajorizes(&lhs, &rhs, None)?);
    out.value("ritz_variation", lhs);
    out.value("sine_weighted_spread", rhs);
    Ok(out)
}

/// `max_i |2 s_i(B) - Spr⁺_i(A)|` for the square block instance.
pub fn hat_witness_deviation(blk: &BlockHermitian) -> Result<f64> {
    let twice = scale(&svd_values(blk.b()).0, 2.0);
    let plus = spread(blk.assembled())?.plus;
    if twice.len() != plus.len() {
        return Err(SpreadError::DimensionMismatch("hat witness needs square blocks".into()));
    }
    Ok(twice.iter().zip(&plus).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

/// `max_i |s_i(A1 - A2) - Spr⁺_i(A1 ⊕ A2)|`.
pub fn negation_pair_deviation(a1: &HermitianMatrix, a2: &HermitianMatrix) -> Result<f64> {
    same_dim(a1, a2)?;
    let d = svd_values(a1.sub(a2).matrix()).0;
    let plus = spread_plus_of_sum(a1, a2)?;
    Ok(d.iter().zip(&plus).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}
