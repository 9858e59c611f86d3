//! Spectral spread of Hermitian matrices: the spread vector, (sub)majorization
//! tests, principal angles and direct rotations, and numerical checks of the
//! inequalities relating them.

pub mod campaign;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod linalg;
pub mod majorization;
pub mod outcome;
pub mod spread;
pub mod subspaces;
pub mod suite;

pub use error::{Result, SpreadError};
pub use linalg::{CMatrix, HermitianMatrix, C64};
pub use majorization::MajorizationReport;
pub use outcome::CheckOutcome;
pub use spread::{spread, SpreadVector};
pub use subspaces::{principal_angles, Isometry};
