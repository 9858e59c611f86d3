//! Seeded random matrices and the named fixed instances.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), a counter-based generator:
//! the 64-bit seed selects the key and an independent 64-bit stream index
//! selects the trial, so per-trial draws never depend on scheduling. Normal
//! deviates are `rand_distr::StandardNormal`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpreadError};
use crate::linalg::{c, CMatrix, HermitianMatrix, C64};
use crate::subspaces::Isometry;
use crate::suite::BlockHermitian;

pub type TrialRng = ChaCha8Rng;

/// FNV-1a over bytes; mixes a check name into the master seed.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn stream_rng(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for trial `trial` of check `check_id` under `master_seed`.
pub fn trial_rng(master_seed: u64, check_id: &str, trial: u64) -> TrialRng {
    stream_rng(master_seed ^ fnv1a(check_id.as_bytes()), trial)
}

/// Standard complex normal: `E|z|^2 = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // row-major fill keeps the draw order independent of storage layout
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_normal(rng);
        }
    }
    m
}

/// `scale * (G + G*)/2`.
pub fn gaussian_hermitian<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> HermitianMatrix {
    let g = gaussian_matrix(n, n, rng);
    HermitianMatrix::hermitian_part(&((&g + g.adjoint()) * c(0.5 * scale, 0.0))).expect("square")
}

/// `scale * G*G / n`.
pub fn random_psd<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> HermitianMatrix {
    let g = gaussian_matrix(n, n, rng);
    HermitianMatrix::hermitian_part(&(g.adjoint() * &g * c(scale / n.max(1) as f64, 0.0))).expect("square")
}

/// Haar unitary: QR of a complex Gaussian matrix with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let qr = gaussian_matrix(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn haar_isometry<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Isometry {
    let u = haar_unitary(n, rng);
    Isometry::new(u.columns(0, k).into_owned()).expect("columns of a unitary")
}

/// Random block instance `[[A1, B], [B*, A2]]` with Gaussian blocks.
pub fn random_block<R: Rng + ?Sized>(k: usize, r: usize, scale: f64, rng: &mut R) -> BlockHermitian {
    let a1 = gaussian_hermitian(k, scale, rng);
    let a2 = gaussian_hermitian(r, scale, rng);
    let b = gaussian_matrix(k, r, rng) * c(scale, 0.0);
    BlockHermitian::new(a1, a2, b).expect("block shapes agree by construction")
}

/// Hermitian with a spectrum drawn from `{-1, 0, 2}` (forcing repeats),
/// rotated by a Haar unitary.
pub fn repeated_spectrum<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> HermitianMatrix {
    let palette = [-1.0, 0.0, 2.0];
    let diag: Vec<f64> = (0..n).map(|_| palette[rng.random_range(0..palette.len())] * scale).collect();
    let u = haar_unitary(n, rng);
    HermitianMatrix::diagonal(&diag).congruence(&u.adjoint())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnsembleKind {
    GaussianHermitian,
    Psd,
    UnitaryHaar,
    Isometry { k: usize },
    Block { k: usize, r: usize },
    Structured { name: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    #[serde(flatten)]
    pub kind: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
    #[serde(default = "unit_scale")]
    pub scale: f64,
    #[serde(default)]
    pub stream: u64,
}

fn unit_scale() -> f64 {
    1.0
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64) -> Self {
        Self { kind, dim, seed, scale: 1.0, stream: 0 }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(SpreadError::InvalidInput("ensemble dim must be >= 1".into()));
        }
        if !(self.scale > 0.0) {
            return Err(SpreadError::InvalidInput("ensemble scale must be > 0".into()));
        }
        Ok(())
    }

    fn rng(&self) -> TrialRng {
        stream_rng(self.seed, self.stream)
    }
}

/// A generated or fixed instance.
#[derive(Clone, Debug)]
pub enum Instance {
    Hermitian(HermitianMatrix),
    Pair(HermitianMatrix, HermitianMatrix),
    Block(BlockHermitian),
    Unitary(CMatrix),
    Isometry(Isometry),
}

pub fn gen_hermitian(spec: &EnsembleSpec) -> Result<HermitianMatrix> {
    spec.validate()?;
    let mut rng = spec.rng();
    match spec.kind {
        EnsembleKind::GaussianHermitian => Ok(gaussian_hermitian(spec.dim, spec.scale, &mut rng)),
        EnsembleKind::Psd => Ok(random_psd(spec.dim, spec.scale, &mut rng)),
        _ => Err(SpreadError::InvalidInput(format!("{:?} is not a Hermitian ensemble", spec.kind))),
    }
}

pub fn gen_unitary_or_isometry(spec: &EnsembleSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = spec.rng();
    match spec.kind {
        EnsembleKind::UnitaryHaar => Ok(Instance::Unitary(haar_unitary(spec.dim, &mut rng))),
        EnsembleKind::Isometry { k } if k >= 1 && k <= spec.dim => {
            Ok(Instance::Isometry(haar_isometry(spec.dim, k, &mut rng)))
        }
        _ => Err(SpreadError::InvalidInput(format!("{:?} is not a unitary/isometry ensemble of dim {}", spec.kind, spec.dim))),
    }
}

pub fn generate(spec: &EnsembleSpec) -> Result<Instance> {
    match &spec.kind {
        EnsembleKind::GaussianHermitian | EnsembleKind::Psd => gen_hermitian(spec).map(Instance::Hermitian),
        EnsembleKind::UnitaryHaar | EnsembleKind::Isometry { .. } => gen_unitary_or_isometry(spec),
        EnsembleKind::Block { k, r } => {
            spec.validate()?;
            Ok(Instance::Block(random_block(*k, *r, spec.scale, &mut spec.rng())))
        }
        EnsembleKind::Structured { name } => gen_structured(name, spec.dim, spec.seed),
    }
}

pub const STRUCTURED_NAMES: [&str; 7] = [
    "hat_witness",
    "negation_pair",
    "scalar",
    "repeated_spectrum",
    "tao_4x4",
    "pair_2x2",
    "conjtru_4x4",
];

/// The 4x4 positive semidefinite matrix whose antidiagonal block has
/// `s(B) = (1, 1)` while `2 s_2(B) > Spr⁺_2(A)`.
pub fn tao_4x4() -> BlockHermitian {
    let a = HermitianMatrix::from_real_rows(&[
        vec![2.0, 1.0, 0.0, 1.0],
        vec![1.0, 2.0, 1.0, 0.0],
        vec![0.0, 1.0, 3.0, 1.0],
        vec![1.0, 0.0, 1.0, 3.0],
    ])
    .expect("symmetric");
    BlockHermitian::split(&a, 2).expect("4 = 2 + 2")
}

/// `A1 = [[3, 2], [2, 3]]`, `A2 = 3I`.
pub fn pair_2x2() -> (HermitianMatrix, HermitianMatrix) {
    let a1 = HermitianMatrix::from_real_rows(&[vec![3.0, 2.0], vec![2.0, 3.0]]).expect("symmetric");
    (a1, HermitianMatrix::scalar(2, 3.0))
}

/// The 4x4 instance on which `λ(((A1-A2)² + 4B*B)^{1/2}) ≺_w Spr⁺(A)` fails.
pub fn conjtru_4x4() -> BlockHermitian {
    let a = HermitianMatrix::from_real_rows(&[
        vec![1.0, 2.0, 1.0, 2.0],
        vec![2.0, 1.0, 1.0, 0.0],
        vec![1.0, 1.0, 2.0, 0.0],
        vec![2.0, 0.0, 0.0, 2.0],
    ])
    .expect("symmetric");
    BlockHermitian::split(&a, 2).expect("4 = 2 + 2")
}

/// Named sharp, degenerate or fixed instances. Random ones are seeded by `seed`.
pub fn gen_structured(name: &str, dim: usize, seed: u64) -> Result<Instance> {
    let mut rng = stream_rng(seed ^ fnv1a(name.as_bytes()), 0);
    let dim = dim.max(1);
    match name {
        "hat_witness" => {
            let k = (dim / 2).max(1);
            let b = gaussian_matrix(k, k, &mut rng);
            Ok(Instance::Block(BlockHermitian::new(HermitianMatrix::zeros(k), HermitianMatrix::zeros(k), b)?))
        }
        "negation_pair" => {
            let a1 = random_psd(dim, 1.0, &mut rng);
            let a2 = a1.scale_by(-1.0);
            Ok(Instance::Pair(a1, a2))
        }
        "scalar" => {
            let a: f64 = rng.sample(StandardNormal);
            Ok(Instance::Hermitian(HermitianMatrix::scalar(dim, a)))
        }
        "repeated_spectrum" => Ok(Instance::Hermitian(repeated_spectrum(dim, 1.0, &mut rng))),
        "tao_4x4" => Ok(Instance::Block(tao_4x4())),
        "pair_2x2" => {
            let (a1, a2) = pair_2x2();
            Ok(Instance::Pair(a1, a2))
        }
        "conjtru_4x4" => Ok(Instance::Block(conjtru_4x4())),
        other => Err(SpreadError::UnknownInstance(other.to_owned())),
    }
}
