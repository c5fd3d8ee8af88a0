//! The rank-two eigenvalue surgery: coefficient matrices `R` realizing the
//! replacement `(lambda1, 1/lambda1) -> (mu, 1/mu)`, the update
//! `S_hat = S + X R X^T J^T S`, and its algebraic side checks.
//!
//! A coefficient matrix is admissible when its entries satisfy
//!
//! ```text
//! lambda1 r12 - r21 / lambda1 = d = (mu + 1/mu) - (lambda1 + 1/lambda1)
//! r12 - r21 + r11 r22 - r12 r21 = 0
//! ```
//!
//! The first condition pins the trace of the restricted 2x2 problem, the
//! second keeps the update symplectic. All admissible `R` are reached by the
//! parameterization `r12 = eta / lambda1`, `r21 = lambda1 (eta - d)` where
//! `eta` runs over the roots of a quadratic depending on `c = r11 r22`. For
//! `c = 0` the roots are `mu - lambda1` and `1/mu - lambda1`, giving the two
//! canonical zero-diagonal coefficient matrices.

use crate::error::{Error, Result};
use crate::spectral::NormalizedX;
use crate::structure::SympMatrix;
use crate::{C64, CMatrix};
use nalgebra::Matrix2;

/// Which admissible coefficient matrix a [`UpdateCoeffs`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffKind {
    /// Zero diagonal, root `eta_1 = mu - lambda1`: `S_hat` maps `x1` to `mu x1`.
    Canonical1,
    /// Zero diagonal, root `eta_2 = 1/mu - lambda1`: `S_hat` maps `x1` to `x1 / mu`.
    Canonical2,
    /// Nonzero diagonal entries `r11`, `r22`.
    General,
}

/// Canonical branch selector exposed by the higher-level operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    pub fn index(self) -> u8 {
        match self {
            Branch::One => 1,
            Branch::Two => 2,
        }
    }
}

/// An admissible 2x2 coefficient matrix together with the data that built it.
#[derive(Clone, Debug)]
pub struct UpdateCoeffs {
    pub r: Matrix2<C64>,
    pub lambda1: C64,
    pub mu: C64,
    /// Trace gap `(mu + 1/mu) - (lambda1 + 1/lambda1)`.
    pub d: C64,
    /// The quadratic root used for `r12`, `r21`.
    pub eta: C64,
    pub kind: CoeffKind,
}

impl UpdateCoeffs {
    /// Residuals of the two admissibility conditions, in order.
    pub fn condition_residuals(&self) -> (f64, f64) {
        let r = &self.r;
        let trace = (self.lambda1 * r[(0, 1)] - r[(1, 0)] / self.lambda1 - self.d).norm();
        let symp =
            (r[(0, 1)] - r[(1, 0)] + r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)]).norm();
        (trace, symp)
    }
}

fn require_nonzero(z: C64, name: &str) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(Error::InvalidValue(format!("{name} must be nonzero")));
    }
    Ok(())
}

/// Trace gap `d = (mu + 1/mu) - (lambda1 + 1/lambda1)`.
pub fn gap_d(lambda1: C64, mu: C64) -> Result<C64> {
    require_nonzero(lambda1, "lambda1")?;
    require_nonzero(mu, "mu")?;
    let one = C64::new(1.0, 0.0);
    Ok((mu + one / mu) - (lambda1 + one / lambda1))
}

/// Evaluates the root quadratic
/// `p(eta) = -eta^2 + eta (1/lambda1 + d - lambda1) + d lambda1 + c`.
fn eta_poly(eta: C64, lambda1: C64, d: C64, c_val: C64) -> C64 {
    -eta * eta + eta * (C64::new(1.0, 0.0) / lambda1 + d - lambda1) + d * lambda1 + c_val
}

/// Both roots of the quadratic for `c = r11 r22`, ordered so the first root
/// is the one closer to `mu - lambda1` (for `c = 0` the roots are exactly
/// `mu - lambda1` and `1/mu - lambda1`, in that order).
pub fn eta_roots(lambda1: C64, mu: C64, c_val: C64) -> Result<(C64, C64)> {
    let d = gap_d(lambda1, mu)?;
    if c_val.norm() == 0.0 {
        let one = C64::new(1.0, 0.0);
        return Ok((mu - lambda1, one / mu - lambda1));
    }
    // eta^2 - b eta - (d lambda1 + c) = 0 with b = 1/lambda1 + d - lambda1.
    let b = C64::new(1.0, 0.0) / lambda1 + d - lambda1;
    let q = d * lambda1 + c_val;
    let disc = (b * b + q * C64::new(4.0, 0.0)).sqrt();
    // pick the sign that avoids cancellation in b + disc
    let sd = if (b + disc).norm() >= (b - disc).norm() { disc } else { -disc };
    let big = (b + sd) * C64::new(0.5, 0.0);
    if big.norm() == 0.0 {
        // b = q = 0: the quadratic is -eta^2, a double root at zero
        return Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
    }
    let r1 = big;
    let r2 = -q / big;
    let anchor = mu - lambda1;
    if (r1 - anchor).norm() <= (r2 - anchor).norm() {
        Ok((r1, r2))
    } else {
        Ok((r2, r1))
    }
}

/// Builds the coefficient matrix
/// `R = [r11, eta/lambda1; lambda1 (eta - d), r22]` for a validated root.
pub fn build_r(eta: C64, r11: C64, r22: C64, lambda1: C64, mu: C64) -> Result<UpdateCoeffs> {
    let d = gap_d(lambda1, mu)?;
    let c_val = r11 * r22;
    let p = eta_poly(eta, lambda1, d, c_val);
    let scale = 1.0 + eta.norm_sqr() + (d * lambda1 + c_val).norm();
    if p.norm() > 1e-10 * scale {
        return Err(Error::InconsistentRoot { eta, residual: p.norm() });
    }
    let r = Matrix2::new(r11, eta / lambda1, lambda1 * (eta - d), r22);
    let kind = if r11.norm() == 0.0 && r22.norm() == 0.0 {
        let one = C64::new(1.0, 0.0);
        if (eta - (mu - lambda1)).norm() <= (eta - (one / mu - lambda1)).norm() {
            CoeffKind::Canonical1
        } else {
            CoeffKind::Canonical2
        }
    } else {
        CoeffKind::General
    };
    Ok(UpdateCoeffs { r, lambda1, mu, d, eta, kind })
}

/// The two canonical zero-diagonal coefficient matrices:
///
/// ```text
/// R1 = [0, (mu - lambda1)/lambda1; (mu - lambda1)/mu, 0]
/// R2 = [0, (1/lambda1 - mu)/mu;   lambda1 (1/lambda1 - mu), 0]
/// ```
pub fn canonical_r(lambda1: C64, mu: C64, branch: Branch) -> Result<UpdateCoeffs> {
    let d = gap_d(lambda1, mu)?;
    let one = C64::new(1.0, 0.0);
    let (r, eta, kind) = match branch {
        Branch::One => {
            let diff = mu - lambda1;
            let r = Matrix2::new(C64::new(0.0, 0.0), diff / lambda1, diff / mu, C64::new(0.0, 0.0));
            (r, diff, CoeffKind::Canonical1)
        }
        Branch::Two => {
            let diff = one / lambda1 - mu;
            let r = Matrix2::new(
                C64::new(0.0, 0.0),
                diff / mu,
                lambda1 * diff,
                C64::new(0.0, 0.0),
            );
            (r, one / mu - lambda1, CoeffKind::Canonical2)
        }
    };
    Ok(UpdateCoeffs { r, lambda1, mu, d, eta, kind })
}

/// The restricted 2x2 problem
/// `Omega = [l1 + l1 r12, -r11/l1; l1 r22, 1/l1 - r21/l1]`; its eigenvalues
/// are `mu` and `1/mu` for every admissible coefficient matrix.
pub fn omega(lambda1: C64, coeffs: &UpdateCoeffs) -> Matrix2<C64> {
    let r = &coeffs.r;
    let li = C64::new(1.0, 0.0) / lambda1;
    Matrix2::new(
        lambda1 + lambda1 * r[(0, 1)],
        -li * r[(0, 0)],
        lambda1 * r[(1, 1)],
        li - li * r[(1, 0)],
    )
}

/// Eigenvalues of a 2x2 complex matrix by the stabilized quadratic formula.
pub fn eig2(m: &Matrix2<C64>) -> (C64, C64) {
    let half_tr = (m[(0, 0)] + m[(1, 1)]) * C64::new(0.5, 0.0);
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (half_tr * half_tr - det).sqrt();
    let e1 = if (half_tr + disc).norm() >= (half_tr - disc).norm() {
        half_tr + disc
    } else {
        half_tr - disc
    };
    if e1.norm() == 0.0 {
        return (e1, half_tr * C64::new(2.0, 0.0) - e1);
    }
    (e1, det / e1)
}

/// Result of one surgery application.
#[derive(Clone, Debug)]
pub struct SurgeryResult {
    pub s_hat: SympMatrix,
    pub coeffs: UpdateCoeffs,
    pub x: NormalizedX,
    /// `||S_hat - S||_F`.
    pub delta_frobenius: f64,
}

/// Residual gate applied to every surgery output:
/// `||S_hat^T J S_hat - J||_F <= 1e-8 (1 + ||S_hat||_F^2)`.
pub const RESULT_RESIDUAL_TOL: f64 = 1e-8;

fn update_term(s: &SympMatrix, x: &NormalizedX, coeffs: &UpdateCoeffs) -> Result<CMatrix> {
    if x.dim() != s.dim() {
        return Err(Error::DimensionMismatch(format!(
            "X has {} rows but S is {}x{}",
            x.dim(),
            s.dim(),
            s.dim()
        )));
    }
    let j = s.j();
    // X R (X^T J^T S): the 2 x 2n core is formed first, so the update costs
    // O(n^2) beyond the single dense product with S.
    let xt_jt_s = x.x.transpose() * j.apply_transpose_left(s.entries())?;
    let r_dyn = CMatrix::from_fn(2, 2, |i, k| coeffs.r[(i, k)]);
    Ok(&x.x * (r_dyn * xt_jt_s))
}

/// Applies `S_hat = S + X R X^T J^T S` and verifies the structure gate.
pub fn apply_update(s: &SympMatrix, x: &NormalizedX, coeffs: &UpdateCoeffs) -> Result<SurgeryResult> {
    let delta = update_term(s, x, coeffs)?;
    let delta_frobenius = delta.norm();
    let s_hat = s.entries() + delta;
    let s_hat = SympMatrix::new(s_hat, RESULT_RESIDUAL_TOL).map_err(|e| match e {
        Error::NumericalFailure { residual, .. } => Error::NumericalFailure {
            what: "surgery output lost symplectic structure".into(),
            residual,
        },
        other => other,
    })?;
    Ok(SurgeryResult { s_hat, coeffs: coeffs.clone(), x: x.clone(), delta_frobenius })
}

/// `||X R X^T J^T S - S X R X^T J^T||_F`; vanishes exactly when the update
/// commutes with `S` (canonical coefficients, or any admissible `R` when
/// `lambda1 = +-1`).
pub fn commutator_residual(s: &SympMatrix, x: &NormalizedX, coeffs: &UpdateCoeffs) -> Result<f64> {
    let left = update_term(s, x, coeffs)?;
    let j = s.j();
    let xt_jt = x.x.transpose() * j.to_matrix().transpose();
    let r_dyn = CMatrix::from_fn(2, 2, |i, k| coeffs.r[(i, k)]);
    let right = s.entries() * (&x.x * (r_dyn * xt_jt));
    Ok((left - right).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::catalog;
    use crate::generate::random_symplectic;
    use crate::la;
    use crate::spectral::{eig_pairs, normalize_x, select_update_pair, DEFAULT_TOL_PAIR};

    #[test]
    fn gap_examples() {
        assert_eq!(gap_d(c(2.0, 0.0), c(2.0, 0.0)).unwrap(), c(0.0, 0.0));
        let d = gap_d(c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((d - c(5.0 / 6.0, 0.0)).norm() < 1e-15);
        // i + 1/i = 0 = -i + 1/(-i)
        let d0 = gap_d(c(0.0, 1.0), c(0.0, -1.0)).unwrap();
        assert!(d0.norm() < 1e-15);
        assert!(matches!(gap_d(c(0.0, 0.0), c(1.0, 0.0)), Err(Error::InvalidValue(_))));
    }

    #[test]
    fn gap_factored_form() {
        // d = (mu - lambda1)/lambda1 * (lambda1 - 1/mu)
        for (l, m) in [(c(2.0, 1.0), c(-0.3, 0.8)), (c(0.2, -0.1), c(5.0, 2.0))] {
            let d = gap_d(l, m).unwrap();
            let f = (m - l) / l * (l - C64::new(1.0, 0.0) / m);
            assert!((d - f).norm() <= 1e-14 * d.norm().max(1.0));
        }
    }

    #[test]
    fn eta_roots_zero_diagonal() {
        let (e1, e2) = eta_roots(c(2.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((e1 - c(1.0, 0.0)).norm() < 1e-15);
        assert!((e2 - c(-5.0 / 3.0, 0.0)).norm() < 1e-15);
        let (f1, f2) = eta_roots(c(2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(f1.norm() < 1e-15);
        assert!((f2 - c(-1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eta_roots_satisfy_quadratic() {
        let (l, m, cv) = (c(2.0, 0.0), c(3.0, 0.0), c(1.0, 0.0));
        let d = gap_d(l, m).unwrap();
        let (e1, e2) = eta_roots(l, m, cv).unwrap();
        for e in [e1, e2] {
            assert!(eta_poly(e, l, d, cv).norm() <= 1e-12);
        }
    }

    #[test]
    fn build_r_recovers_canonical_one() {
        let coeffs =
            build_r(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert_eq!(coeffs.kind, CoeffKind::Canonical1);
        assert!((coeffs.r[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        // r21 = lambda1 (eta - d) = 2 (1 - 5/6) = 1/3 = (mu - lambda1)/mu
        assert!((coeffs.r[(1, 0)] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(coeffs.r[(0, 0)].norm() == 0.0 && coeffs.r[(1, 1)].norm() == 0.0);
    }

    #[test]
    fn build_r_identity_surgery_is_zero() {
        let coeffs =
            build_r(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!(coeffs.r.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn build_r_general_conditions_hold() {
        let (l, m) = (c(2.0, 0.0), c(3.0, 0.0));
        let (e1, e2) = eta_roots(l, m, c(1.0, 0.0)).unwrap();
        for e in [e1, e2] {
            let coeffs = build_r(e, c(1.0, 0.0), c(1.0, 0.0), l, m).unwrap();
            assert_eq!(coeffs.kind, CoeffKind::General);
            let (t, s) = coeffs.condition_residuals();
            assert!(t <= 1e-12 && s <= 1e-12, "residuals {t} {s}");
        }
    }

    #[test]
    fn build_r_rejects_bogus_root() {
        assert!(matches!(
            build_r(c(10.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)),
            Err(Error::InconsistentRoot { .. })
        ));
    }

    #[test]
    fn canonical_displays() {
        let r1 = canonical_r(c(2.0, 0.0), c(3.0, 0.0), Branch::One).unwrap();
        assert!((r1.r[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((r1.r[(1, 0)] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);

        let r2 = canonical_r(c(2.0, 0.0), c(3.0, 0.0), Branch::Two).unwrap();
        assert!((r2.r[(0, 1)] - c(-5.0 / 6.0, 0.0)).norm() < 1e-15);
        assert!((r2.r[(1, 0)] - c(-5.0, 0.0)).norm() < 1e-15);

        let rid = canonical_r(c(2.0, 0.0), c(2.0, 0.0), Branch::One).unwrap();
        assert!(rid.r.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn canonical_agrees_with_parameterization() {
        for (l, m) in [(c(2.0, 1.0), c(-0.3, 0.8)), (c(0.2, -0.1), c(5.0, 2.0))] {
            let (e1, e2) = eta_roots(l, m, c(0.0, 0.0)).unwrap();
            let z = c(0.0, 0.0);
            let from_eta1 = build_r(e1, z, z, l, m).unwrap();
            let from_eta2 = build_r(e2, z, z, l, m).unwrap();
            let r1 = canonical_r(l, m, Branch::One).unwrap();
            let r2 = canonical_r(l, m, Branch::Two).unwrap();
            assert!((from_eta1.r - r1.r).norm() <= 1e-13 * r1.r.norm().max(1.0));
            assert!((from_eta2.r - r2.r).norm() <= 1e-13 * r2.r.norm().max(1.0));
        }
    }

    #[test]
    fn omega_spectrum_is_target_pair() {
        let zero = canonical_r(c(2.0, 0.0), c(2.0, 0.0), Branch::One).unwrap();
        let om = omega(c(2.0, 0.0), &zero);
        assert!((om[(0, 0)] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((om[(1, 1)] - c(0.5, 0.0)).norm() < 1e-15);

        let check = |coeffs: &UpdateCoeffs, tol: f64| {
            let om = omega(coeffs.lambda1, coeffs);
            let (a, b) = eig2(&om);
            let (da, db) = ((a - c(3.0, 0.0)).norm(), (b - c(1.0 / 3.0, 0.0)).norm());
            let (ea, eb) = ((a - c(1.0 / 3.0, 0.0)).norm(), (b - c(3.0, 0.0)).norm());
            assert!(da.max(db).min(ea.max(eb)) <= tol);
        };
        check(&canonical_r(c(2.0, 0.0), c(3.0, 0.0), Branch::One).unwrap(), 1e-12);
        let (e1, _) = eta_roots(c(2.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)).unwrap();
        check(&build_r(e1, c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)).unwrap(), 1e-10);
    }

    fn surgery(
        s: &SympMatrix,
        lambda1: C64,
        mu: C64,
        branch: Branch,
    ) -> (SurgeryResult, NormalizedX) {
        let pair = select_update_pair(s, lambda1, 1e-8).unwrap();
        let x = normalize_x(&pair).unwrap();
        let coeffs = canonical_r(pair.lambda, mu, branch).unwrap();
        (apply_update(s, &x, &coeffs).unwrap(), x)
    }

    #[test]
    fn zero_coefficients_leave_matrix_unchanged() {
        let s = catalog::diag_pairs(&[c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        let (res, _) = surgery(&s, c(2.0, 0.0), c(2.0, 0.0), Branch::One);
        assert_eq!(res.s_hat.entries(), s.entries());
        assert_eq!(res.delta_frobenius, 0.0);
    }

    #[test]
    fn example_diagonal_branch_one() {
        // diag(2, 5, 1/2, 1/5) with lambda1 = 2 -> mu = 3 becomes
        // diag(3, 5, 1/3, 1/5).
        let s = catalog::diag_pairs(&[c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        let (res, _) = surgery(&s, c(2.0, 0.0), c(3.0, 0.0), Branch::One);
        let expect = catalog::diag_pairs(&[c(3.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert!((res.s_hat.entries() - expect.entries()).norm() < 1e-12);
    }

    #[test]
    fn example_diagonal_branch_two() {
        // Same surgery through the second branch lands on
        // diag(1/3, 5, 3, 1/5).
        let s = catalog::diag_pairs(&[c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        let (res, _) = surgery(&s, c(2.0, 0.0), c(3.0, 0.0), Branch::Two);
        let expect = catalog::diag_pairs(&[c(1.0 / 3.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert!((res.s_hat.entries() - expect.entries()).norm() < 1e-12);
    }

    #[test]
    fn swap_target_exchanges_the_pair() {
        // mu = 1/lambda1 is allowed: branch 1 swaps the pair in place.
        let s = catalog::diag_pairs(&[c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        let (res, _) = surgery(&s, c(2.0, 0.0), c(0.5, 0.0), Branch::One);
        let expect = catalog::diag_pairs(&[c(0.5, 0.0), c(5.0, 0.0)]).unwrap();
        assert!((res.s_hat.entries() - expect.entries()).norm() < 1e-12);
    }

    #[test]
    fn surgery_at_negative_unit_eigenvalue() {
        // lambda1 = -1 has a two-dimensional eigenspace here and the update
        // moves the whole (-1, -1) pair to (mu, 1/mu).
        let minus = catalog::diag_pairs(&[c(-1.0, 0.0)]).unwrap();
        let rest = catalog::diag_pairs(&[c(2.0, 0.0)]).unwrap();
        let s = catalog::symplectic_direct_sum(&minus, &rest).unwrap();
        let mu = c(3.0, 0.0);
        let (res, _) = surgery(&s, c(-1.0, 0.0), mu, Branch::One);
        let mut got = la::eigenvalues(res.s_hat.entries()).unwrap();
        for e in [c(3.0, 0.0), c(1.0 / 3.0, 0.0), c(2.0, 0.0), c(0.5, 0.0)] {
            let (k, dist) = crate::spectral::nearest(&got, e);
            assert!(dist <= 1e-8, "unmatched eigenvalue {e}");
            got.remove(k);
        }
    }

    #[test]
    fn random_surgery_replaces_spectrum() {
        let s = random_symplectic(6, 5, 1.0).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        let lambda1 = pairs[0].lambda;
        let mu = c(1.7, 0.9);
        for branch in [Branch::One, Branch::Two] {
            let (res, _) = surgery(&s, lambda1, mu, branch);
            assert!(res.s_hat.residual() <= 1e-8 * (1.0 + res.s_hat.norm_frobenius().powi(2)));

            // multiset check: spectrum(S_hat) = spectrum(S) - {l1, 1/l1} + {mu, 1/mu}
            let mut expected: Vec<C64> = la::eigenvalues(s.entries()).unwrap();
            let (i1, _) = crate::spectral::nearest(&expected, lambda1);
            expected.remove(i1);
            let (i2, _) = crate::spectral::nearest(&expected, 1.0 / lambda1);
            expected.remove(i2);
            expected.push(mu);
            expected.push(C64::new(1.0, 0.0) / mu);

            let mut got = la::eigenvalues(res.s_hat.entries()).unwrap();
            for e in &expected {
                let (k, dist) = crate::spectral::nearest(&got, *e);
                assert!(dist <= 1e-6 * e.norm().max(1.0), "unmatched eigenvalue {e}");
                got.remove(k);
            }
        }
    }

    #[test]
    fn untouched_eigenvectors_stay_eigenvectors() {
        let s = random_symplectic(5, 23, 0.7).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        let lambda1 = pairs[0].lambda;
        let (res, _) = surgery(&s, lambda1, c(0.4, 1.1), Branch::One);
        let decomp = la::eig(s.entries(), false).unwrap();
        for (k, &lam) in decomp.values.iter().enumerate() {
            if (lam - lambda1).norm() < 1e-8 || (lam - 1.0 / lambda1).norm() < 1e-8 {
                continue;
            }
            let y = decomp.right.column(k).clone_owned();
            let r = (res.s_hat.entries() * &y - &y * lam).norm();
            assert!(r <= 1e-8 * s.norm_frobenius(), "residual {r} for untouched {lam}");
        }
    }

    #[test]
    fn canonical_branches_map_the_selected_eigenvectors() {
        let s = random_symplectic(4, 31, 0.6).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        let lambda1 = pairs[1].lambda;
        let mu = c(2.3, -0.4);
        let pair = select_update_pair(&s, lambda1, 1e-8).unwrap();
        let x = normalize_x(&pair).unwrap();
        let tol = 1e-8 * s.norm_frobenius();

        let res1 = apply_update(&s, &x, &canonical_r(pair.lambda, mu, Branch::One).unwrap()).unwrap();
        assert!((res1.s_hat.entries() * &pair.x1 - &pair.x1 * mu).norm() <= tol);
        assert!(
            (res1.s_hat.entries() * &pair.x2 - &pair.x2 * (C64::new(1.0, 0.0) / mu)).norm() <= tol
        );

        let res2 = apply_update(&s, &x, &canonical_r(pair.lambda, mu, Branch::Two).unwrap()).unwrap();
        assert!(
            (res2.s_hat.entries() * &pair.x1 - &pair.x1 * (C64::new(1.0, 0.0) / mu)).norm() <= tol
        );
        assert!((res2.s_hat.entries() * &pair.x2 - &pair.x2 * mu).norm() <= tol);
    }

    #[test]
    fn surgery_involution_restores_matrix() {
        let s = random_symplectic(5, 41, 0.8).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        let lambda1 = pairs[2].lambda;
        let mu = c(1.9, 0.6);
        let (fwd, _) = surgery(&s, lambda1, mu, Branch::One);
        let (back, _) = surgery(&fwd.s_hat, mu, lambda1, Branch::One);
        let err = (back.s_hat.entries() - s.entries()).norm();
        assert!(err <= 1e-8 * s.norm_frobenius(), "involution error {err}");
    }

    #[test]
    fn commutator_vanishes_for_canonical_updates() {
        let s = random_symplectic(5, 13, 1.0).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        let lambda1 = pairs[0].lambda;
        let pair = select_update_pair(&s, lambda1, 1e-8).unwrap();
        let x = normalize_x(&pair).unwrap();
        for branch in [Branch::One, Branch::Two] {
            let coeffs = canonical_r(pair.lambda, c(1.3, 0.4), branch).unwrap();
            let r = commutator_residual(&s, &x, &coeffs).unwrap();
            assert!(r <= 1e-10 * s.norm_frobenius(), "commutator {r}");
        }
    }

    #[test]
    fn commutator_detects_general_updates() {
        let s = random_symplectic(5, 13, 1.0).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        // pick an eigenvalue well away from +-1
        let lambda1 = pairs
            .iter()
            .map(|p| if p.lambda.norm() >= 1.0 { p.lambda } else { p.partner })
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap();
        let mu = c(1.3, 0.4);
        let pair = select_update_pair(&s, lambda1, 1e-8).unwrap();
        let x = normalize_x(&pair).unwrap();
        let (e1, _) = eta_roots(pair.lambda, mu, c(1.0, 0.0)).unwrap();
        let coeffs = build_r(e1, c(1.0, 0.0), c(1.0, 0.0), pair.lambda, mu).unwrap();
        let r = commutator_residual(&s, &x, &coeffs).unwrap();
        assert!(r > 1e-4 * s.norm_frobenius(), "commutator unexpectedly small: {r}");
    }

    #[test]
    fn commutator_vanishes_for_unit_eigenvalue() {
        // lambda1 = 1 on I_4: any admissible R commutes.
        let s = SympMatrix::new_default(CMatrix::identity(4, 4)).unwrap();
        let pair = select_update_pair(&s, c(1.0, 0.0), 1e-8).unwrap();
        let x = normalize_x(&pair).unwrap();
        let mu = c(1.6, 0.3);
        let (e1, e2) = eta_roots(pair.lambda, mu, c(0.25, 0.0)).unwrap();
        for eta in [e1, e2] {
            let coeffs = build_r(eta, c(0.5, 0.0), c(0.5, 0.0), pair.lambda, mu).unwrap();
            let r = commutator_residual(&s, &x, &coeffs).unwrap();
            assert!(r <= 1e-10, "commutator {r}");
            // the update itself must still work
            let res = apply_update(&s, &x, &coeffs).unwrap();
            assert!(res.s_hat.residual() <= 1e-10);
        }
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let s = catalog::diag_pairs(&[c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        let small = catalog::diag_pairs(&[c(2.0, 0.0)]).unwrap();
        let pair = select_update_pair(&small, c(2.0, 0.0), 1e-8).unwrap();
        let x = normalize_x(&pair).unwrap();
        let coeffs = canonical_r(c(2.0, 0.0), c(3.0, 0.0), Branch::One).unwrap();
        assert!(matches!(
            apply_update(&s, &x, &coeffs),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
