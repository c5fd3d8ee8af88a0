//! The symplectic structure matrix `J`, residual checks, the star operator
//! and the validated symplectic matrix type.
//!
//! A matrix `S` of size `2n x 2n` is symplectic when `S^T J S = J` for the
//! skew block matrix `J = [0 I; -I 0]`. `J` is never materialized for
//! products; it acts by block row/column swaps with a sign, which is both
//! cheaper and exact.

use crate::error::{Error, Result};
use crate::{C64, CMatrix, CVector};
use std::sync::OnceLock;

/// Default relative tolerance accepted by the validating [`SympMatrix`]
/// constructor: `residual <= tol * (1 + ||S||_F^2)`.
pub const DEFAULT_TOL_SYMP: f64 = 1e-10;

/// The canonical skew structure matrix `J` of size `2n x 2n`, stored only by
/// its half dimension. Satisfies `J^T = -J = J^{-1}` and `J^2 = -I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureJ {
    dim_half: usize,
}

/// Builds the structure matrix for half dimension `n >= 1`.
pub fn j_matrix(n: usize) -> Result<StructureJ> {
    if n == 0 {
        return Err(Error::InvalidDimension("structure matrix needs n >= 1".into()));
    }
    Ok(StructureJ { dim_half: n })
}

impl StructureJ {
    pub fn dim_half(&self) -> usize {
        self.dim_half
    }

    pub fn dim(&self) -> usize {
        2 * self.dim_half
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "J is {0}x{0} but operand has dimension {1}",
                self.dim(),
                len
            )));
        }
        Ok(())
    }

    /// `J v`.
    pub fn apply_vec(&self, v: &CVector) -> Result<CVector> {
        self.check_len(v.len())?;
        let n = self.dim_half;
        let mut out = CVector::zeros(2 * n);
        for i in 0..n {
            out[i] = v[n + i];
            out[n + i] = -v[i];
        }
        Ok(out)
    }

    /// `J^T v = -J v`.
    pub fn apply_transpose_vec(&self, v: &CVector) -> Result<CVector> {
        Ok(-self.apply_vec(v)?)
    }

    /// `J M`: swaps the row blocks of `M` and negates the new lower block.
    pub fn apply_left(&self, m: &CMatrix) -> Result<CMatrix> {
        self.check_len(m.nrows())?;
        let n = self.dim_half;
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for j in 0..m.ncols() {
            for i in 0..n {
                out[(i, j)] = m[(n + i, j)];
                out[(n + i, j)] = -m[(i, j)];
            }
        }
        Ok(out)
    }

    /// `J^T M = -J M`.
    pub fn apply_transpose_left(&self, m: &CMatrix) -> Result<CMatrix> {
        Ok(-self.apply_left(m)?)
    }

    /// `M J`: swaps the column blocks of `M` and negates the new left block.
    pub fn apply_right(&self, m: &CMatrix) -> Result<CMatrix> {
        self.check_len(m.ncols())?;
        let n = self.dim_half;
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for j in 0..n {
            for i in 0..m.nrows() {
                out[(i, j)] = -m[(i, n + j)];
                out[(i, n + j)] = m[(i, j)];
            }
        }
        Ok(out)
    }

    /// Dense copy of `J`, for diagnostics and file output only.
    pub fn to_matrix(&self) -> CMatrix {
        let n = self.dim_half;
        let mut j = CMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = C64::new(1.0, 0.0);
            j[(n + i, i)] = C64::new(-1.0, 0.0);
        }
        j
    }
}

fn even_square_half(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidDimension(format!(
            "expected square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "expected even dimension >= 2, got {}",
            m.nrows()
        )));
    }
    Ok(m.nrows() / 2)
}

/// Frobenius norm of `S^T J S - J`; zero (up to rounding) iff `S` is symplectic.
pub fn symplecticity_residual(s: &CMatrix) -> Result<f64> {
    let n = even_square_half(s)?;
    let j = StructureJ { dim_half: n };
    let mut g = s.transpose() * j.apply_left(s)?;
    for i in 0..n {
        g[(i, n + i)] -= C64::new(1.0, 0.0);
        g[(n + i, i)] += C64::new(1.0, 0.0);
    }
    Ok(g.norm())
}

/// The star operator `S* = J^T S^T J`; equals `S^{-1}` for symplectic `S`.
///
/// In block terms, `[A B; C D]* = [D^T -B^T; -C^T A^T]`, so the result is an
/// exact rearrangement of the entries.
pub fn star(s: &CMatrix) -> Result<CMatrix> {
    let n = even_square_half(s)?;
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for k in 0..n {
            out[(i, k)] = s[(n + k, n + i)];
            out[(i, n + k)] = -s[(k, n + i)];
            out[(n + i, k)] = -s[(n + k, i)];
            out[(n + i, n + k)] = s[(k, i)];
        }
    }
    Ok(out)
}

/// A validated complex symplectic matrix.
///
/// Instances are immutable; the structure residual is computed lazily and
/// cached (idempotent, safe to race).
#[derive(Debug)]
pub struct SympMatrix {
    dim_half: usize,
    entries: CMatrix,
    residual: OnceLock<f64>,
}

impl Clone for SympMatrix {
    fn clone(&self) -> Self {
        SympMatrix {
            dim_half: self.dim_half,
            entries: self.entries.clone(),
            residual: self.residual.clone(),
        }
    }
}

impl SympMatrix {
    /// Validating constructor: accepts `entries` when
    /// `||S^T J S - J||_F <= tol * (1 + ||S||_F^2)`.
    pub fn new(entries: CMatrix, tol: f64) -> Result<Self> {
        let dim_half = even_square_half(&entries)?;
        let res = symplecticity_residual(&entries)?;
        let norm = entries.norm();
        // negated form so that a NaN residual fails the gate
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(res <= tol * (1.0 + norm * norm)) {
            return Err(Error::NumericalFailure {
                what: "symplecticity validation".into(),
                residual: res,
            });
        }
        let cell = OnceLock::new();
        let _ = cell.set(res);
        Ok(SympMatrix { dim_half, entries, residual: cell })
    }

    /// Validating constructor with the default tolerance [`DEFAULT_TOL_SYMP`].
    pub fn new_default(entries: CMatrix) -> Result<Self> {
        Self::new(entries, DEFAULT_TOL_SYMP)
    }

    pub fn dim_half(&self) -> usize {
        self.dim_half
    }

    pub fn dim(&self) -> usize {
        2 * self.dim_half
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// The structure matrix of matching size.
    pub fn j(&self) -> StructureJ {
        StructureJ { dim_half: self.dim_half }
    }

    /// Cached `||S^T J S - J||_F`.
    pub fn residual(&self) -> f64 {
        *self
            .residual
            .get_or_init(|| symplecticity_residual(&self.entries).expect("validated dimensions"))
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.entries.norm()
    }
}
