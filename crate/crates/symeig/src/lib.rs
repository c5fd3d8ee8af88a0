//! Structure-preserving spectral surgery on complex symplectic matrices and
//! symplectic matrix pencils.
//!
//! The central operation replaces one reciprocal eigenvalue pair
//! `(lambda, 1/lambda)` of a symplectic matrix `S` by a target pair
//! `(mu, 1/mu)` through a rank-two update `S + X R X^T J^T S` that keeps the
//! symplectic structure, every other eigenvalue, their Jordan chains and
//! their condition numbers intact. Companion modules provide certified
//! distance bounds for the update, Segre characteristic tracking, and the
//! analogous update for regular symplectic pencils `A - lambda B`.

use num_complex::Complex64;

// Links the system BLAS/LAPACK used by the `lapack` bindings.
extern crate openblas_src as _;

pub mod bounds;
pub mod catalog;
pub mod error;
pub mod generate;
pub mod io;
pub mod la;
pub mod pencil;
pub mod spectral;
pub mod structure;
pub mod surgery;

/// Complex scalar used throughout.
pub type C64 = Complex64;
/// Dense complex matrix (column-major).
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;

/// Shorthand complex constructor.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub use error::{Error, Result};
pub use generate::random_symplectic;
pub use structure::{j_matrix, star, symplecticity_residual, StructureJ, SympMatrix};
