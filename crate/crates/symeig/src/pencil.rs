//! Symplectic matrix pencils `P(lambda) = A - lambda B` with `A J A^T = B J B^T`,
//! both regular: the pencil Rado update, the structure-preserving eigenvalue
//! surgery that only touches `A`, and QZ-backed reciprocal spectra.
//!
//! Generalized eigenvalues always come from the QZ factorization; `B^{-1} A`
//! is never formed except inside the equivalence test of the documented
//! algebraic forms, where `B` is well-conditioned by construction.

use crate::error::{Error, Result};
use crate::la;
use crate::spectral::{pair_values, EigenPair, NormalizedX, ReciprocalPair};
use crate::structure::{j_matrix, StructureJ};
use crate::surgery::UpdateCoeffs;
use crate::{C64, CMatrix};

/// Residual gate `||A J A^T - B J B^T||_F <= tol (1 + ||A||_F^2 + ||B||_F^2)`.
pub const PENCIL_RESIDUAL_TOL: f64 = 1e-8;
/// Regularity gate: reject factors with `sigma_min <= tol * sigma_max`.
pub const REGULARITY_TOL: f64 = 1e-12;

/// A validated regular symplectic pencil `A - lambda B`.
#[derive(Clone, Debug)]
pub struct SympPencil {
    a: CMatrix,
    b: CMatrix,
    residual: f64,
}

fn even_half(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "expected square even-dimensional matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows() / 2)
}

/// `||A J A^T - B J B^T||_F`.
pub fn pencil_residual(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let n = even_half(a)?;
    if b.nrows() != a.nrows() || b.ncols() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "pencil matrices differ: {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let j = j_matrix(n)?;
    let ga = a * j.apply_left(&a.transpose())?;
    let gb = b * j.apply_left(&b.transpose())?;
    Ok((ga - gb).norm())
}

fn regularity(m: &CMatrix, name: &str) -> Result<()> {
    let s = la::singular_values(m)?;
    let (smax, smin) = (s[0], s[s.len() - 1]);
    if smin <= REGULARITY_TOL * smax {
        return Err(Error::IllPosed(format!(
            "{name} is numerically singular (sigma_min/sigma_max = {:.3e})",
            smin / smax
        )));
    }
    Ok(())
}

impl SympPencil {
    /// Validating constructor: structure residual gate plus a nonsingularity
    /// check on both factors.
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        let residual = pencil_residual(&a, &b)?;
        let scale = 1.0 + a.norm_squared() + b.norm_squared();
        // negated form so that a NaN residual fails the gate
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(residual <= PENCIL_RESIDUAL_TOL * scale) {
            return Err(Error::NumericalFailure {
                what: "symplectic pencil validation".into(),
                residual,
            });
        }
        regularity(&a, "A")?;
        regularity(&b, "B")?;
        Ok(SympPencil { a, b, residual })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn dim_half(&self) -> usize {
        self.a.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn j(&self) -> StructureJ {
        j_matrix(self.dim_half()).expect("validated dimension")
    }
}

/// Rado update for a general regular pencil: `(A + B X C^T, B)`.
///
/// The eigenvalue matrix of the selected eigenvectors is recovered per column
/// from the Rayleigh quotients of `(A x, B x)` and validated against
/// `A X = B X L`. The shifted pencil carries the eigenvalues of
/// `L + C^T X` in place of the selected ones, all others unchanged.
pub fn pencil_rado(
    a: &CMatrix,
    b: &CMatrix,
    x: &CMatrix,
    c_mat: &CMatrix,
) -> Result<(CMatrix, CMatrix)> {
    if a.nrows() != a.ncols() || b.nrows() != b.ncols() || a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch("pencil matrices must be square and equal".into()));
    }
    let k = x.ncols();
    if x.nrows() != a.nrows() || c_mat.nrows() != a.nrows() || c_mat.ncols() != k {
        return Err(Error::DimensionMismatch(
            "X and C must be 2n x k for the pencil dimension".into(),
        ));
    }
    regularity(b, "B")?;
    // rank(X) = k
    let sx = la::singular_values(x)?;
    if sx[sx.len() - 1] <= 1e-12 * sx[0] {
        return Err(Error::InvalidValue("eigenvector matrix X is rank deficient".into()));
    }
    // per-column eigenvalues and the precondition A X = B X L
    let ax = a * x;
    let bx = b * x;
    let mut residual_sq = 0.0;
    for col in 0..k {
        let axc = ax.column(col);
        let bxc = bx.column(col);
        let denom = bxc.norm_squared();
        let lam = (bxc.adjoint() * axc)[(0, 0)] / C64::new(denom, 0.0);
        residual_sq += (axc - bxc * lam).norm_squared();
    }
    let scale = ax.norm() + bx.norm();
    if residual_sq.sqrt() > 1e-8 * scale.max(1.0) {
        return Err(Error::InvalidEigenpair { residual: residual_sq.sqrt() });
    }
    Ok((a + b * (x * c_mat.transpose()), b.clone()))
}

/// Structure-preserving pencil surgery: replaces `(lambda1, 1/lambda1)` by
/// `(mu, 1/mu)` while returning `B` unchanged:
///
/// ```text
/// A_hat = A + B X R diag(1/lambda1, lambda1) X^T J^T
/// ```
///
/// Preconditions: `A X = B X diag(lambda1, 1/lambda1)` and `X^T J X = J_2`.
pub fn pencil_apply_update(
    p: &SympPencil,
    x: &NormalizedX,
    coeffs: &UpdateCoeffs,
) -> Result<SympPencil> {
    let dim = p.dim();
    if x.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "X has {} rows but the pencil is {dim}x{dim}",
            x.dim()
        )));
    }
    let j = p.j();
    let lam = coeffs.lambda1;
    let one = C64::new(1.0, 0.0);

    // precondition A X = B X diag(lambda1, 1/lambda1)
    let ax = &p.a * &x.x;
    let bx = &p.b * &x.x;
    let mut lx = bx.clone();
    for i in 0..dim {
        lx[(i, 0)] *= lam;
        lx[(i, 1)] *= one / lam;
    }
    let pre = (&ax - &lx).norm();
    let pre_scale = ax.norm().max(lx.norm()).max(1.0);
    if pre > 1e-8 * pre_scale {
        return Err(Error::InvalidEigenpair { residual: pre });
    }
    let xres = x.structure_residual()?;
    if xres > 1e-8 {
        return Err(Error::InvalidEigenpair { residual: xres });
    }

    // B X (R diag(1/lambda1, lambda1)) X^T J^T
    let mut core = coeffs.r;
    core[(0, 0)] /= lam;
    core[(1, 0)] /= lam;
    core[(0, 1)] *= lam;
    core[(1, 1)] *= lam;
    let core_dyn = CMatrix::from_fn(2, 2, |i, k| core[(i, k)]);
    let xt_jt = j.apply_left(&x.x)?.transpose(); // (J X)^T = X^T J^T
    let a_hat = &p.a + &bx * (core_dyn * xt_jt);

    SympPencil::new(a_hat, p.b.clone()).map_err(|e| match e {
        Error::NumericalFailure { residual, .. } => Error::NumericalFailure {
            what: "pencil surgery output lost symplectic structure".into(),
            residual,
        },
        other => other,
    })
}

/// Generalized eigenvalues of the pencil with reciprocal pairing.
pub fn pencil_eigs(p: &SympPencil, tol_pair: f64) -> Result<Vec<EigenPair>> {
    let values = pencil_eigenvalues(p)?;
    pair_values(&values, tol_pair)
}

/// Raw generalized eigenvalues (QZ); errors if any eigenvalue is numerically
/// zero or infinite, which regularity rules out.
pub fn pencil_eigenvalues(p: &SympPencil) -> Result<Vec<C64>> {
    let g = la::generalized_eig(&p.a, &p.b)?;
    let mut values = Vec::with_capacity(p.dim());
    for (al, be) in g.alpha.iter().zip(g.beta.iter()) {
        if be.norm() <= 1e-14 * al.norm().max(1.0) {
            return Err(Error::IllPosed("pencil has a numerically infinite eigenvalue".into()));
        }
        let nu = al / be;
        if nu.norm() <= 1e-14 {
            return Err(Error::IllPosed("pencil has a numerically zero eigenvalue".into()));
        }
        values.push(nu);
    }
    Ok(values)
}

/// Selects a normalized update pair for `lambda1` from the pencil's
/// generalized eigenvectors; mirrors the matrix-level selection with
/// eigenspaces of `A - nu B`.
pub fn pencil_select_update_pair(
    p: &SympPencil,
    lambda1: C64,
    tol: f64,
) -> Result<ReciprocalPair> {
    let values = pencil_eigenvalues(p)?;
    let (idx, dist) = crate::spectral::nearest(&values, lambda1);
    if dist > tol * lambda1.norm().max(1.0) {
        return Err(Error::NotAnEigenvalue { lambda: lambda1, min_dist: dist });
    }
    let lam = values[idx];
    let one = C64::new(1.0, 0.0);
    let j = p.j();

    let self_reciprocal = (lam - one).norm().min((lam + one).norm()) <= tol;
    let space = |nu: C64| -> Result<CMatrix> {
        let shifted = &p.a - &p.b * nu;
        la::nullspace(&shifted, 1e-8)
    };
    let b1 = space(lam)?;
    if b1.ncols() == 0 {
        return Err(Error::NumericalFailure {
            what: "pencil eigenspace extraction".into(),
            residual: dist,
        });
    }
    let b2 = if self_reciprocal {
        if b1.ncols() < 2 {
            return Err(Error::NotApplicable(format!(
                "pencil eigenvalue {lam} equals its own reciprocal with a one-dimensional eigenspace"
            )));
        }
        b1.clone()
    } else {
        let (pidx, pdist) = crate::spectral::nearest(&values, one / lam);
        if pdist > tol * (one / lam).norm().max(1.0) {
            return Err(Error::PairingFailure { orphan: lam });
        }
        let b2 = space(values[pidx])?;
        if b2.ncols() == 0 {
            return Err(Error::NumericalFailure {
                what: "pencil partner eigenspace extraction".into(),
                residual: pdist,
            });
        }
        b2
    };

    let m = b1.transpose() * j.apply_left(&b2)?;
    let svd = la::svd(&m, true)?;
    let sigma = svd.s.first().copied().unwrap_or(0.0);
    if sigma < tol {
        return Err(Error::NotApplicable(format!(
            "max |x1^T J x2| = {sigma:.3e} over the pencil eigenspaces of {lam}"
        )));
    }
    let u1 = crate::CVector::from_fn(m.nrows(), |i, _| svd.u[(i, 0)].conj());
    let v1 = crate::CVector::from_fn(m.ncols(), |i, _| svd.vh[(0, i)].conj());
    let mut x1 = &b1 * u1;
    let mut x2 = &b2 * v1;
    x1 /= C64::new(x1.norm(), 0.0);
    x2 /= C64::new(x2.norm(), 0.0);
    let pairing = (x1.transpose() * j.apply_vec(&x2)?)[(0, 0)];
    Ok(ReciprocalPair { lambda: lam, x1, x2, pairing })
}
