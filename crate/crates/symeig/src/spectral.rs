//! Eigenstructure extraction for symplectic matrices: reciprocal pairing of
//! the spectrum, selection of the eigenvector pair used by the update, Segre
//! characteristics, and eigenvalue condition numbers.

use crate::error::{Error, Result};
use crate::la;
use crate::structure::SympMatrix;
use crate::{C64, CMatrix, CVector};
use serde::Serialize;

/// Default tolerance on `|lambda * lambda' - 1|` when pairing eigenvalues.
pub const DEFAULT_TOL_PAIR: f64 = 1e-6;
/// Default relative singular value threshold for rank decisions.
pub const DEFAULT_TOL_RANK: f64 = 1e-8;
/// Relative threshold used when extracting eigenspaces as nullspaces.
const NULLSPACE_TOL: f64 = 1e-8;
/// Accepted residual `||S x - lambda x|| / ||S||_F` for extracted eigenpairs.
const EIG_RESIDUAL_TOL: f64 = 1e-8;

/// One reciprocal eigenvalue pair `(lambda, 1/lambda)` with unit eigenvectors
/// `x1` (for `lambda`) and `x2` (for `1/lambda`) and the pairing scalar
/// `x1^T J x2`.
#[derive(Clone, Debug)]
pub struct ReciprocalPair {
    pub lambda: C64,
    pub x1: CVector,
    pub x2: CVector,
    pub pairing: C64,
}

/// The `2n x 2` eigenvector matrix scaled so that `X^T J X = J_2`.
#[derive(Clone, Debug)]
pub struct NormalizedX {
    pub x: CMatrix,
    pub source: ReciprocalPair,
}

/// Segre characteristic: Jordan block sizes at `lambda` in nonincreasing order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegreChar {
    pub lambda: C64,
    pub sizes: Vec<usize>,
}

impl SegreChar {
    /// Algebraic multiplicity (sum of the block sizes).
    pub fn multiplicity(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// True when a trivial (length-one) Jordan chain exists, i.e. the update
    /// applies at this eigenvalue.
    pub fn has_trivial_chain(&self) -> bool {
        self.sizes.last() == Some(&1)
    }
}

/// A matched reciprocal pair in a computed spectrum. `lambda` and `partner`
/// are both computed eigenvalues; `product_error` is `|lambda * partner - 1|`.
/// `self_paired` marks a lone eigenvalue at `+-1` standing in for a pair.
#[derive(Clone, Copy, Debug)]
pub struct EigenPair {
    pub lambda: C64,
    pub partner: C64,
    pub product_error: f64,
    pub self_paired: bool,
}

/// Greedily matches a computed spectrum into reciprocal pairs.
///
/// Candidate index pairs are ranked by `|lambda_i * lambda_j - 1|` (ties by
/// index order) and accepted while below `tol_pair`. A leftover eigenvalue is
/// self-paired only when it sits within `tol_pair` of `+1` or `-1`; any other
/// orphan is an error.
pub fn pair_values(values: &[C64], tol_pair: f64) -> Result<Vec<EigenPair>> {
    let n = values.len();
    let mut cands: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let err = (values[i] * values[j] - C64::new(1.0, 0.0)).norm();
            if err <= tol_pair {
                cands.push((err, i, j));
            }
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for (err, i, j) in cands {
        if used[i] || used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        pairs.push(EigenPair {
            lambda: values[i],
            partner: values[j],
            product_error: err,
            self_paired: false,
        });
    }
    for i in 0..n {
        if used[i] {
            continue;
        }
        let v = values[i];
        let d1 = (v - C64::new(1.0, 0.0)).norm();
        let d2 = (v + C64::new(1.0, 0.0)).norm();
        if d1.min(d2) <= tol_pair {
            pairs.push(EigenPair {
                lambda: v,
                partner: v,
                product_error: (v * v - C64::new(1.0, 0.0)).norm(),
                self_paired: true,
            });
        } else {
            return Err(Error::PairingFailure { orphan: v });
        }
    }
    Ok(pairs)
}

/// Reciprocal pairing of the full spectrum of `S`.
pub fn eig_pairs(s: &SympMatrix, tol_pair: f64) -> Result<Vec<EigenPair>> {
    let values = la::eigenvalues(s.entries())?;
    pair_values(&values, tol_pair)
}

pub(crate) fn nearest(values: &[C64], target: C64) -> (usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    for (i, v) in values.iter().enumerate() {
        let d = (v - target).norm();
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

fn shifted(s: &CMatrix, lambda: C64) -> CMatrix {
    let mut m = s.clone();
    for i in 0..m.nrows() {
        m[(i, i)] -= lambda;
    }
    m
}

/// Selects unit eigenvectors `x1` for `lambda1` and `x2` for `1/lambda1`
/// maximizing `|x1^T J x2|` over the computed eigenspaces.
///
/// The maximizer is the leading singular triple of `B1^T J B2` where `B1`,
/// `B2` are orthonormal bases of the two eigenspaces; its singular value is
/// exactly the attainable maximum of the pairing scalar. A maximum below
/// `tol` means every candidate pairing vanishes numerically, i.e. the Segre
/// characteristic of `lambda1` carries no trivial chain and the update does
/// not apply.
pub fn select_update_pair(s: &SympMatrix, lambda1: C64, tol: f64) -> Result<ReciprocalPair> {
    let values = la::eigenvalues(s.entries())?;
    let (idx, dist) = nearest(&values, lambda1);
    if dist > tol * lambda1.norm().max(1.0) {
        return Err(Error::NotAnEigenvalue { lambda: lambda1, min_dist: dist });
    }
    let lam = values[idx];
    let j = s.j();

    let self_reciprocal =
        (lam - C64::new(1.0, 0.0)).norm().min((lam + C64::new(1.0, 0.0)).norm()) <= tol;

    let b1 = la::nullspace(&shifted(s.entries(), lam), NULLSPACE_TOL)?;
    if b1.ncols() == 0 {
        return Err(Error::NumericalFailure {
            what: "eigenspace extraction".into(),
            residual: dist,
        });
    }
    let b2 = if self_reciprocal {
        if b1.ncols() < 2 {
            return Err(Error::NotApplicable(format!(
                "eigenvalue {lam} equals its own reciprocal but its eigenspace is one-dimensional"
            )));
        }
        b1.clone()
    } else {
        let recip = C64::new(1.0, 0.0) / lam;
        let (pidx, pdist) = nearest(&values, recip);
        if pdist > tol * recip.norm().max(1.0) {
            return Err(Error::PairingFailure { orphan: lam });
        }
        let b2 = la::nullspace(&shifted(s.entries(), values[pidx]), NULLSPACE_TOL)?;
        if b2.ncols() == 0 {
            return Err(Error::NumericalFailure {
                what: "partner eigenspace extraction".into(),
                residual: pdist,
            });
        }
        b2
    };

    // Leading singular triple of B1^T J B2.
    let m = b1.transpose() * j.apply_left(&b2)?;
    let svd = la::svd(&m, true)?;
    let sigma = svd.s.first().copied().unwrap_or(0.0);
    if sigma < tol {
        return Err(Error::NotApplicable(format!(
            "max |x1^T J x2| = {sigma:.3e} over the eigenspaces of {lam}: \
             the Segre characteristic at this eigenvalue has no trivial Jordan chain"
        )));
    }
    let u1: CVector = CVector::from_fn(m.nrows(), |i, _| svd.u[(i, 0)].conj());
    let v1: CVector = CVector::from_fn(m.ncols(), |i, _| svd.vh[(0, i)].conj());
    let mut x1 = &b1 * u1;
    let mut x2 = &b2 * v1;
    x1 /= C64::new(x1.norm(), 0.0);
    x2 /= C64::new(x2.norm(), 0.0);

    let snorm = s.norm_frobenius();
    let r1 = (s.entries() * &x1 - &x1 * lam).norm();
    let r2 = (s.entries() * &x2 - &x2 * (C64::new(1.0, 0.0) / lam)).norm();
    if r1 > EIG_RESIDUAL_TOL * snorm || r2 > EIG_RESIDUAL_TOL * snorm {
        return Err(Error::NumericalFailure {
            what: "eigenvector residual".into(),
            residual: r1.max(r2) / snorm,
        });
    }

    let pairing = (x1.transpose() * j.apply_vec(&x2)?)[(0, 0)];
    Ok(ReciprocalPair { lambda: lam, x1, x2, pairing })
}

/// Segre characteristic of `lambda` recovered from the rank staircase
/// `r_k = rank((A - lambda I)^k)`: the number of Jordan blocks of size at
/// least `k` equals `r_{k-1} - r_k`. Ranks use singular value thresholding at
/// `tol_rank * sigma_max`, so the staircase is reliable for well-separated
/// desk-scale spectra only.
pub fn segre_characteristic(a: &CMatrix, lambda: C64, tol_rank: f64) -> Result<SegreChar> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidDimension(format!(
            "expected square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let dim = a.nrows();
    let mut m = shifted(a, lambda);
    let svals = la::singular_values(&m)?;
    let smax = svals[0];
    let smin = svals[dim - 1];
    if smax == 0.0 {
        // A = lambda I: dim trivial blocks.
        return Ok(SegreChar { lambda, sizes: vec![1; dim] });
    }
    if smin > tol_rank * smax {
        return Err(Error::NotAnEigenvalue { lambda, min_dist: smin });
    }
    m /= C64::new(smax, 0.0);

    let mut counts = Vec::new(); // counts[k-1] = number of blocks of size >= k
    let mut power = CMatrix::identity(dim, dim);
    let mut r_prev = dim;
    for _ in 1..=dim {
        power = &power * &m;
        let r = la::rank(&power, tol_rank)?;
        let blocks_ge = r_prev - r;
        if blocks_ge == 0 {
            break;
        }
        counts.push(blocks_ge);
        r_prev = r;
    }
    let mut sizes = Vec::new();
    for k in (1..=counts.len()).rev() {
        let exactly = counts[k - 1] - counts.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exactly));
    }
    Ok(SegreChar { lambda, sizes })
}

/// Condition number of the simple eigenvalue carried by `pair`:
/// `kappa = 1 / |x1^T J x2|`, which agrees with the classical
/// `||u|| ||v|| / |v^H u|` built from right/left eigenvectors.
pub fn eig_condition_number(s: &SympMatrix, pair: &ReciprocalPair) -> Result<f64> {
    let values = la::eigenvalues(s.entries())?;
    let tol = DEFAULT_TOL_PAIR * pair.lambda.norm().max(1.0);
    let multiplicity = values.iter().filter(|v| (*v - pair.lambda).norm() <= tol).count();
    if multiplicity != 1 {
        return Err(Error::NotSimple { lambda: pair.lambda, multiplicity });
    }
    Ok(1.0 / pair.pairing.norm())
}

/// Scales `[x1 x2]` by `1/sqrt(x1^T J x2)` (principal branch) so that
/// `X^T J X = J_2`.
pub fn normalize_x(pair: &ReciprocalPair) -> Result<NormalizedX> {
    let p = pair.pairing;
    if p.norm() == 0.0 {
        return Err(Error::NotApplicable("pairing scalar x1^T J x2 is zero".into()));
    }
    let dim = pair.x1.len();
    let scale = C64::new(1.0, 0.0) / p.sqrt();
    let mut x = CMatrix::zeros(dim, 2);
    for i in 0..dim {
        x[(i, 0)] = pair.x1[i] * scale;
        x[(i, 1)] = pair.x2[i] * scale;
    }
    let nx = NormalizedX { x, source: pair.clone() };
    let res = nx.structure_residual()?;
    if res > 1e-12 * (1.0 + 1.0 / p.norm()) {
        return Err(Error::NumericalFailure {
            what: "X^T J X = J_2 normalization".into(),
            residual: res,
        });
    }
    Ok(nx)
}

impl NormalizedX {
    /// `||X^T J X - J_2||_F`.
    pub fn structure_residual(&self) -> Result<f64> {
        let n = self.x.nrows() / 2;
        let j = crate::structure::j_matrix(n)?;
        let mut g = self.x.transpose() * j.apply_left(&self.x)?;
        g[(0, 1)] -= C64::new(1.0, 0.0);
        g[(1, 0)] += C64::new(1.0, 0.0);
        Ok(g.norm())
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::catalog;
    use crate::generate::random_symplectic;
    use crate::structure::j_matrix;

    #[test]
    fn pairs_of_diagonal() {
        let s = catalog::diag_pairs(&[c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let mut pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        pairs.sort_by(|a, b| {
            a.lambda.norm().max(1.0 / a.lambda.norm()).total_cmp(&b.lambda.norm().max(1.0 / b.lambda.norm()))
        });
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert!(p.product_error <= 1e-12);
            assert!(!p.self_paired);
        }
        let mags: Vec<f64> =
            pairs.iter().map(|p| p.lambda.norm().max(1.0 / p.lambda.norm())).collect();
        assert!((mags[0] - 2.0).abs() < 1e-12);
        assert!((mags[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pairs_of_identity_are_two_unit_pairs() {
        let s = SympMatrix::new_default(CMatrix::identity(4, 4)).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert!((p.lambda - c(1.0, 0.0)).norm() < 1e-12);
            assert!((p.partner - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn pairs_of_random_symplectic() {
        let s = random_symplectic(5, 3, 1.0).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        assert_eq!(pairs.len(), 5);
        for p in &pairs {
            assert!(p.product_error <= 1e-8, "pair error {}", p.product_error);
        }
    }

    #[test]
    fn unpairable_orphan_is_reported() {
        let s = random_symplectic(4, 9, 1.0).unwrap();
        match eig_pairs(&s, 1e-18) {
            Err(Error::PairingFailure { .. }) => {}
            other => panic!("expected pairing failure, got {:?}", other.map(|v| v.len())),
        }
    }

    #[test]
    fn select_on_diagonal_two_by_two() {
        let s = catalog::diag_pairs(&[c(2.0, 0.0)]).unwrap();
        let pair = select_update_pair(&s, c(2.0, 0.0), 1e-8).unwrap();
        assert!((pair.lambda - c(2.0, 0.0)).norm() < 1e-14);
        // x1 spans e1, x2 spans e2, and the pairing is 1 in modulus (the
        // selection scheme makes it real positive).
        assert!((pair.x1[0].norm() - 1.0).abs() < 1e-12);
        assert!((pair.x2[1].norm() - 1.0).abs() < 1e-12);
        assert!((pair.pairing - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn select_rejects_non_eigenvalue() {
        let s = catalog::diag_pairs(&[c(2.0, 0.0)]).unwrap();
        assert!(matches!(
            select_update_pair(&s, c(7.0, 0.0), 1e-8),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn select_fails_on_defective_pair() {
        // Only eigenvectors are e1 (for lambda) and e4 (for 1/lambda), and
        // e1^T J_4 e4 = 0, so the update cannot apply.
        let s = catalog::defective_pair(c(2.0, 0.0)).unwrap();
        assert!(matches!(
            select_update_pair(&s, c(2.0, 0.0), 1e-8),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn select_on_identity_finds_independent_vectors() {
        let s = SympMatrix::new_default(CMatrix::identity(4, 4)).unwrap();
        let pair = select_update_pair(&s, c(1.0, 0.0), 1e-8).unwrap();
        // Exhaustive search over canonical basis pairs attains |e_i^T J e_j| = 1,
        // and the SVD-based maximizer must reach the same value.
        assert!((pair.pairing.norm() - 1.0).abs() < 1e-12);
        let j = j_matrix(2).unwrap();
        let cross = (pair.x1.transpose() * j.apply_vec(&pair.x2).unwrap())[(0, 0)];
        assert!((cross - pair.pairing).norm() < 1e-14);
    }

    #[test]
    fn select_picks_trivial_chain_when_mixed() {
        // Segre ((2,1)): the maximizing pair must come from the trivial chains.
        let s = catalog::defective_plus_trivial(c(2.0, 0.0)).unwrap();
        let pair = select_update_pair(&s, c(2.0, 0.0), 1e-8).unwrap();
        assert!(pair.pairing.norm() > 0.9);
        let r = (s.entries() * &pair.x1 - &pair.x1 * pair.lambda).norm();
        assert!(r < 1e-10 * s.norm_frobenius());
    }

    #[test]
    fn segre_identity() {
        let a = CMatrix::identity(4, 4);
        let sc = segre_characteristic(&a, c(1.0, 0.0), DEFAULT_TOL_RANK).unwrap();
        assert_eq!(sc.sizes, vec![1, 1, 1, 1]);
        assert!(sc.has_trivial_chain());
    }

    #[test]
    fn segre_of_rank_update_counterexample() {
        // Unstructured rank-two update of I_4 with a ((2,1)) block structure.
        let a = catalog::rado_counterexample();
        let sc = segre_characteristic(&a, c(1.0, 0.0), DEFAULT_TOL_RANK).unwrap();
        assert_eq!(sc.sizes, vec![2, 1]);
    }

    #[test]
    fn segre_of_defective_pair() {
        // Rank staircase by hand: r0 = 4, r1 = 3, r2 = 2 => one block of size 2.
        let s = catalog::defective_pair(c(2.0, 0.0)).unwrap();
        let sc = segre_characteristic(s.entries(), c(2.0, 0.0), DEFAULT_TOL_RANK).unwrap();
        assert_eq!(sc.sizes, vec![2]);
        assert!(!sc.has_trivial_chain());
        assert_eq!(sc.multiplicity(), 2);
    }

    #[test]
    fn segre_rejects_non_eigenvalue() {
        let a = CMatrix::identity(4, 4);
        assert!(matches!(
            segre_characteristic(&a, c(5.0, 0.0), DEFAULT_TOL_RANK),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn segre_symmetry_between_reciprocal_eigenvalues() {
        for lam in [c(2.0, 0.0), c(0.5, 1.0)] {
            let s = catalog::defective_plus_trivial(lam).unwrap();
            let a = segre_characteristic(s.entries(), lam, DEFAULT_TOL_RANK).unwrap();
            let b = segre_characteristic(s.entries(), 1.0 / lam, DEFAULT_TOL_RANK).unwrap();
            assert_eq!(a.sizes, vec![2, 1]);
            assert_eq!(a.sizes, b.sizes);
        }
    }

    #[test]
    fn applicability_matches_trivial_chain_criterion() {
        // Applicable iff the Segre characteristic ends in 1.
        let lam = c(2.0, 0.0);
        let cases: Vec<(SympMatrix, bool)> = vec![
            (catalog::diag_pairs(&[lam, c(3.0, 0.0)]).unwrap(), true),
            (catalog::defective_pair(lam).unwrap(), false),
            (catalog::defective_plus_trivial(lam).unwrap(), true),
            (catalog::double_defective_pair(lam).unwrap(), false),
        ];
        for (s, expect) in cases {
            let segre = segre_characteristic(s.entries(), lam, DEFAULT_TOL_RANK).unwrap();
            assert_eq!(segre.has_trivial_chain(), expect);
            let got = select_update_pair(&s, lam, 1e-8);
            assert_eq!(got.is_ok(), expect, "matrix dim {}", s.dim());
        }
    }

    #[test]
    fn condition_number_of_diagonal_is_one() {
        let s = catalog::diag_pairs(&[c(2.0, 0.0)]).unwrap();
        let pair = select_update_pair(&s, c(2.0, 0.0), 1e-8).unwrap();
        let k = eig_condition_number(&s, &pair).unwrap();
        assert!((k - 1.0).abs() < 1e-12);
    }

    #[test]
    fn condition_number_matches_left_right_formula() {
        // Compare 1/|x1^T J x2| against ||u|| ||v|| / |v^H u| computed from an
        // independent full eigendecomposition with left vectors.
        let s = random_symplectic(4, 21, 0.8).unwrap();
        let pairs = eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap();
        let decomp = la::eig(s.entries(), true).unwrap();
        for p in &pairs {
            let pair = select_update_pair(&s, p.lambda, 1e-6).unwrap();
            let kappa = eig_condition_number(&s, &pair).unwrap();
            assert!(kappa >= 1.0 - 1e-10);

            let (idx, d) = nearest(&decomp.values, p.lambda);
            assert!(d < 1e-8);
            let u = decomp.right.column(idx).clone_owned();
            let v = decomp.left.as_ref().unwrap().column(idx).clone_owned();
            let denom = (v.adjoint() * &u)[(0, 0)].norm();
            let general = u.norm() * v.norm() / denom;
            assert!(
                (kappa - general).abs() <= 1e-10 * general,
                "kappa {kappa} vs general {general}"
            );
        }
    }

    #[test]
    fn condition_number_shared_within_pair() {
        let s = random_symplectic(5, 1, 1.0).unwrap();
        for p in eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap() {
            let a = select_update_pair(&s, p.lambda, 1e-6).unwrap();
            let b = select_update_pair(&s, p.partner, 1e-6).unwrap();
            let ka = eig_condition_number(&s, &a).unwrap();
            let kb = eig_condition_number(&s, &b).unwrap();
            assert!((ka - kb).abs() <= 1e-8 * ka);
        }
    }

    #[test]
    fn condition_number_rejects_multiple_eigenvalue() {
        let s = SympMatrix::new_default(CMatrix::identity(4, 4)).unwrap();
        let pair = select_update_pair(&s, c(1.0, 0.0), 1e-8).unwrap();
        assert!(matches!(eig_condition_number(&s, &pair), Err(Error::NotSimple { .. })));
    }

    #[test]
    fn left_eigenvector_identity() {
        // x2^T J^T S = lambda x2^T J^T whenever S x2 = x2 / lambda.
        let s = random_symplectic(5, 17, 1.0).unwrap();
        let j = s.j();
        for p in eig_pairs(&s, DEFAULT_TOL_PAIR).unwrap() {
            let pair = select_update_pair(&s, p.lambda, 1e-6).unwrap();
            let jt_x2 = j.apply_transpose_vec(&pair.x2).unwrap();
            let lhs = s.entries().transpose() * &jt_x2;
            let rhs = &jt_x2 * pair.lambda;
            assert!((lhs - rhs).norm() <= 1e-8 * s.norm_frobenius());
        }
    }

    fn unit(dim: usize, k: usize) -> CVector {
        let mut v = CVector::zeros(dim);
        v[k] = c(1.0, 0.0);
        v
    }

    #[test]
    fn normalize_trivial_basis_pair() {
        let pair = ReciprocalPair {
            lambda: c(2.0, 0.0),
            x1: unit(2, 0),
            x2: unit(2, 1),
            pairing: c(1.0, 0.0),
        };
        let nx = normalize_x(&pair).unwrap();
        assert!((nx.x.column(0).clone_owned() - unit(2, 0)).norm() < 1e-15);
        assert!((nx.x.column(1).clone_owned() - unit(2, 1)).norm() < 1e-15);
        assert!(nx.structure_residual().unwrap() <= 1e-12);
    }

    #[test]
    fn normalized_frobenius_matches_pairing_formula() {
        // ||X||_F^2 = 2 / |x1^T J x2| for unit eigenvector columns.
        let x2 = CVector::from_vec(vec![c((1.0f64 - 0.0625).sqrt(), 0.0), c(0.25, 0.0)]);
        let pair = ReciprocalPair {
            lambda: c(2.0, 0.0),
            x1: unit(2, 0),
            x2,
            pairing: c(0.25, 0.0),
        };
        let nx = normalize_x(&pair).unwrap();
        let f2 = nx.x.norm().powi(2);
        assert!((f2 - 8.0).abs() < 1e-12, "expected 2/0.25 = 8, got {f2}");
    }

    #[test]
    fn normalize_handles_negative_real_pairing() {
        // pairing -1: the principal square root contributes +-i but
        // X^T J X = J_2 still holds since X enters quadratically.
        let pair = ReciprocalPair {
            lambda: c(2.0, 0.0),
            x1: unit(2, 0),
            x2: -unit(2, 1),
            pairing: c(-1.0, 0.0),
        };
        let nx = normalize_x(&pair).unwrap();
        assert!(nx.structure_residual().unwrap() <= 1e-12);
    }

    #[test]
    fn normalize_rejects_zero_pairing() {
        let pair = ReciprocalPair {
            lambda: c(2.0, 0.0),
            x1: unit(4, 0),
            x2: unit(4, 3),
            pairing: c(0.0, 0.0),
        };
        assert!(matches!(normalize_x(&pair), Err(Error::NotApplicable(_))));
    }
}
