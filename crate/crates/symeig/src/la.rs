//! Thin contract over the dense LAPACK kernels (zgeev, zggev, zgesvd, zgesv).
//!
//! Everything above this module works with [`CMatrix`] values; this is the
//! only place that talks to LAPACK directly. Matrices are column-major, so
//! `nalgebra` buffers are passed through without copying tricks.

use crate::error::{Error, Result};
use crate::{C64, CMatrix};

/// Eigendecomposition of a general complex matrix.
///
/// `right` columns are unit right eigenvectors (`A v = w v`); `left` columns,
/// when requested, are unit left eigenvectors in the LAPACK convention
/// (`u^H A = w u^H`).
pub struct EigDecomp {
    pub values: Vec<C64>,
    pub right: CMatrix,
    pub left: Option<CMatrix>,
}

/// Generalized eigendecomposition of a pencil `(A, B)`; eigenvalues are
/// `alpha[i] / beta[i]`.
pub struct GenEigDecomp {
    pub alpha: Vec<C64>,
    pub beta: Vec<C64>,
    pub right: CMatrix,
}

fn square_dim(a: &CMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidDimension(format!(
            "expected square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

/// Full eigendecomposition; set `want_left` to also get left eigenvectors.
pub fn eig(a: &CMatrix, want_left: bool) -> Result<EigDecomp> {
    let n = square_dim(a)?;
    if n == 0 {
        return Err(Error::InvalidDimension("empty matrix".into()));
    }
    let ni = n as i32;
    let mut data = a.as_slice().to_vec();
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut vr = vec![C64::new(0.0, 0.0); n * n];
    let mut vl = vec![C64::new(0.0, 0.0); if want_left { n * n } else { 1 }];
    let jobvl = if want_left { b'V' } else { b'N' };
    let ldvl = if want_left { ni } else { 1 };
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info = 0i32;

    // workspace query
    let mut query = [C64::new(0.0, 0.0)];
    unsafe {
        lapack::zgeev(
            jobvl, b'V', ni, &mut data, ni, &mut w, &mut vl, ldvl, &mut vr, ni, &mut query, -1,
            &mut rwork, &mut info,
        );
    }
    let lwork = query[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zgeev(
            jobvl, b'V', ni, &mut data, ni, &mut w, &mut vl, ldvl, &mut vr, ni, &mut work, lwork,
            &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgeev", info });
    }
    Ok(EigDecomp {
        values: w,
        right: CMatrix::from_vec(n, n, vr),
        left: want_left.then(|| CMatrix::from_vec(n, n, vl)),
    })
}

/// Eigenvalues only.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let n = square_dim(a)?;
    let ni = n as i32;
    let mut data = a.as_slice().to_vec();
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut vl_dummy = [C64::new(0.0, 0.0)];
    let mut vr_dummy = [C64::new(0.0, 0.0)];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info = 0i32;
    let mut query = [C64::new(0.0, 0.0)];
    unsafe {
        lapack::zgeev(
            b'N', b'N', ni, &mut data, ni, &mut w, &mut vl_dummy, 1, &mut vr_dummy, 1, &mut query,
            -1, &mut rwork, &mut info,
        );
    }
    let lwork = query[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zgeev(
            b'N', b'N', ni, &mut data, ni, &mut w, &mut vl_dummy, 1, &mut vr_dummy, 1, &mut work,
            lwork, &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgeev", info });
    }
    Ok(w)
}

/// Singular value decomposition `A = U diag(s) V^H`.
///
/// With `want_vectors == false` only `s` is filled; `u` and `vh` are empty.
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub vh: CMatrix,
}

pub fn svd(a: &CMatrix, want_vectors: bool) -> Result<Svd> {
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return Err(Error::InvalidDimension("empty matrix".into()));
    }
    let (mi, ni) = (m as i32, n as i32);
    let mn = m.min(n);
    let mut data = a.as_slice().to_vec();
    let mut s = vec![0.0f64; mn];
    let mut u = vec![C64::new(0.0, 0.0); if want_vectors { m * m } else { 1 }];
    let mut vt = vec![C64::new(0.0, 0.0); if want_vectors { n * n } else { 1 }];
    let (jobu, jobvt) = if want_vectors { (b'A', b'A') } else { (b'N', b'N') };
    let (ldu, ldvt) = if want_vectors { (mi, ni) } else { (1, 1) };
    let mut rwork = vec![0.0f64; 5 * mn];
    let mut info = 0i32;
    let mut query = [C64::new(0.0, 0.0)];
    unsafe {
        lapack::zgesvd(
            jobu, jobvt, mi, ni, &mut data, mi, &mut s, &mut u, ldu, &mut vt, ldvt, &mut query,
            -1, &mut rwork, &mut info,
        );
    }
    let lwork = query[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zgesvd(
            jobu, jobvt, mi, ni, &mut data, mi, &mut s, &mut u, ldu, &mut vt, ldvt, &mut work,
            lwork, &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgesvd", info });
    }
    if want_vectors {
        Ok(Svd {
            u: CMatrix::from_vec(m, m, u),
            s,
            vh: CMatrix::from_vec(n, n, vt),
        })
    } else {
        Ok(Svd { u: CMatrix::zeros(0, 0), s, vh: CMatrix::zeros(0, 0) })
    }
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(svd(a, false)?.s)
}

/// Numerical rank: number of singular values above `rel_tol * s_max`.
pub fn rank(a: &CMatrix, rel_tol: f64) -> Result<usize> {
    let s = singular_values(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > rel_tol * smax).count())
}

/// Orthonormal basis of the (right) nullspace at relative threshold `rel_tol`.
pub fn nullspace(a: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    let d = svd(a, true)?;
    let n = a.ncols();
    let smax = d.s.first().copied().unwrap_or(0.0);
    let rank = if smax == 0.0 {
        0
    } else {
        d.s.iter().filter(|&&x| x > rel_tol * smax).count()
    };
    // rows `rank..` of V^H span the nullspace; conjugate-transpose them back.
    let mut basis = CMatrix::zeros(n, n - rank);
    for (k, row) in (rank..n).enumerate() {
        for j in 0..n {
            basis[(j, k)] = d.vh[(row, j)].conj();
        }
    }
    Ok(basis)
}

/// Solve `A X = B` by LU with partial pivoting.
///
/// Uses the pure-Rust factorization: OpenBLAS's optimized `getrf` allocates
/// per-CPU job arrays on the caller's stack, which overflows the default
/// test-thread stack.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = square_dim(a)?;
    if b.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "solve: A is {n}x{n} but B has {} rows",
            b.nrows()
        )));
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::IllPosed("singular linear system".into()))
}

/// QZ-based generalized eigendecomposition of the pencil `A - lambda B`.
pub fn generalized_eig(a: &CMatrix, b: &CMatrix) -> Result<GenEigDecomp> {
    let n = square_dim(a)?;
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "pencil matrices differ: {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let ni = n as i32;
    let mut da = a.as_slice().to_vec();
    let mut db = b.as_slice().to_vec();
    let mut alpha = vec![C64::new(0.0, 0.0); n];
    let mut beta = vec![C64::new(0.0, 0.0); n];
    let mut vl = [C64::new(0.0, 0.0)];
    let mut vr = vec![C64::new(0.0, 0.0); n * n];
    let mut rwork = vec![0.0f64; 8 * n];
    let mut info = 0i32;
    let mut query = [C64::new(0.0, 0.0)];
    unsafe {
        lapack::zggev(
            b'N', b'V', ni, &mut da, ni, &mut db, ni, &mut alpha, &mut beta, &mut vl, 1, &mut vr,
            ni, &mut query, -1, &mut rwork, &mut info,
        );
    }
    let lwork = query[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zggev(
            b'N', b'V', ni, &mut da, ni, &mut db, ni, &mut alpha, &mut beta, &mut vl, 1, &mut vr,
            ni, &mut work, lwork, &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zggev", info });
    }
    Ok(GenEigDecomp { alpha, beta, right: CMatrix::from_vec(n, n, vr) })
}
