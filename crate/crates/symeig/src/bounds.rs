//! Distance certificates for the canonical surgery branches: a coarse bound
//! needing only the pairing scalar, a sharp lower/upper sandwich that also
//! uses `||S||_F`, and the exact closed-form Frobenius distance.
//!
//! Two different normalizations are in play and are kept separate on purpose:
//! the coarse bound uses `2 / |x1^T J x2|` while the sharp bounds use
//! `1 / (|x1^T J x2| ||S||_F)`. Mixing them up is a silent factor of
//! `2 ||S||_F`, so there is no shared "phi" accessor.

use crate::error::{Error, Result};
use crate::spectral::ReciprocalPair;
use crate::structure::SympMatrix;
use crate::surgery::Branch;
use crate::C64;

/// Distance certificate for one surgery branch. All distance fields are
/// relative to `||S||_F`.
#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub branch: Branch,
    pub lambda1: C64,
    pub mu: C64,
    /// `1 / (|x1^T J x2| ||S||_F)` (the sharp-bound normalization).
    pub phi: f64,
    pub coarse: f64,
    pub sharp_lower: f64,
    pub sharp_upper: f64,
    /// Real part of `lambda1 mu` (branch 1) or `conj(lambda1) mu` (branch 2);
    /// nonpositive means the lower/upper factors appear in their stated
    /// order, positive means they interchange.
    pub halfplane: f64,
    /// `||S_hat - S||_F / ||S||_F` from the closed formula.
    pub exact: f64,
}

impl BoundsReport {
    pub const CSV_HEADER: &'static str =
        "branch,abs_lambda1,abs_mu,rel_eig_change,coarse,sharp_lower,sharp_upper,exact";

    /// One CSV row matching [`Self::CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let rel = (self.lambda1 - self.mu).norm() / self.lambda1.norm();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.branch.index(),
            self.lambda1.norm(),
            self.mu.norm(),
            rel,
            self.coarse,
            self.sharp_lower,
            self.sharp_upper,
            self.exact
        )
    }
}

fn check_inputs(lambda1: C64, mu: C64, pairing: C64) -> Result<()> {
    if lambda1.norm() == 0.0 || mu.norm() == 0.0 {
        return Err(Error::InvalidValue("lambda1 and mu must be nonzero".into()));
    }
    if pairing.norm() == 0.0 {
        return Err(Error::NotApplicable("pairing scalar x1^T J x2 is zero".into()));
    }
    Ok(())
}

/// Coarse relative distance bound `||S_hat - S||_F / ||S||_F <= value`,
/// from `||R|| ||X||^2` with `||X||_F^2 = 2/|pairing|`:
///
/// branch 1: `(|lambda1 - mu| / |lambda1|) * (2/|pairing|) * sqrt(1 + |lambda1|^2/|mu|^2)`;
/// branch 2 replaces `lambda1` by `1/lambda1`.
pub fn coarse_bound(lambda1: C64, mu: C64, pairing: C64, branch: Branch) -> Result<f64> {
    check_inputs(lambda1, mu, pairing)?;
    let l = match branch {
        Branch::One => lambda1,
        Branch::Two => C64::new(1.0, 0.0) / lambda1,
    };
    let phi = 2.0 / pairing.norm();
    let rel = (l - mu).norm() / l.norm();
    Ok(rel * phi * (1.0 + l.norm_sqr() / mu.norm_sqr()).sqrt())
}

/// Sharp relative-distance sandwich `(lower, upper, halfplane)` with
/// `phi = 1 / (|pairing| ||S||_F)`.
///
/// Branch 1: with prefactor `|lambda1 - mu| / |lambda1|`, the lower factor is
/// `|lambda1 + 1/mu| phi` and the upper `|lambda1 - 1/mu| phi` whenever
/// `Re(lambda1 mu) <= 0`; for a positive real part the two interchange.
/// Branch 2 reads the same with `1/lambda1` in place of `lambda1` and the
/// half-plane test on `Re(conj(lambda1) mu)`.
pub fn sharp_bounds(
    lambda1: C64,
    mu: C64,
    pairing: C64,
    norm_s: f64,
    branch: Branch,
) -> Result<(f64, f64, f64)> {
    check_inputs(lambda1, mu, pairing)?;
    // negated form so that a NaN norm fails the gate
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(norm_s > 0.0) {
        return Err(Error::InvalidValue("norm_s must be positive".into()));
    }
    let phi = 1.0 / (pairing.norm() * norm_s);
    let (l, halfplane) = match branch {
        Branch::One => (lambda1, (lambda1 * mu).re),
        Branch::Two => (C64::new(1.0, 0.0) / lambda1, (lambda1.conj() * mu).re),
    };
    let mu_inv = C64::new(1.0, 0.0) / mu;
    let prefactor = (l - mu).norm() / l.norm();
    let plus = prefactor * (l + mu_inv).norm() * phi;
    let minus = prefactor * (l - mu_inv).norm() * phi;
    let (lower, upper) = if halfplane <= 0.0 { (plus, minus) } else { (minus, plus) };
    Ok((lower, upper, halfplane))
}

/// Exact absolute distance `||S_hat_j - S||_F` of a canonical branch from the
/// closed formula
///
/// ```text
/// |x1^T J x2|^2 ||S_hat - S||_F^2 =
///     |eta|^2 + |eta - d|^2 + 2 |x1^H x2|^2 Re(eta (conj(eta) - conj(d)))
/// ```
///
/// which needs only `lambda1`, `mu` and the two scalar products of the unit
/// eigenvectors.
pub fn exact_distance(lambda1: C64, mu: C64, pair: &ReciprocalPair, branch: Branch) -> Result<f64> {
    check_inputs(lambda1, mu, pair.pairing)?;
    let d = crate::surgery::gap_d(lambda1, mu)?;
    let one = C64::new(1.0, 0.0);
    let eta = match branch {
        Branch::One => mu - lambda1,
        Branch::Two => one / mu - lambda1,
    };
    let overlap = (pair.x1.adjoint() * &pair.x2)[(0, 0)]; // x1^H x2
    let cross = (eta * (eta.conj() - d.conj())).re;
    let sq = eta.norm_sqr() + (eta - d).norm_sqr() + 2.0 * overlap.norm_sqr() * cross;
    Ok(sq.max(0.0).sqrt() / pair.pairing.norm())
}

/// Assembles the full certificate for one branch of a prospective surgery on
/// `(S, pair)` targeting `mu`.
pub fn bounds_report(
    s: &SympMatrix,
    pair: &ReciprocalPair,
    mu: C64,
    branch: Branch,
) -> Result<BoundsReport> {
    let lambda1 = pair.lambda;
    let norm_s = s.norm_frobenius();
    let coarse = coarse_bound(lambda1, mu, pair.pairing, branch)?;
    let (sharp_lower, sharp_upper, halfplane) =
        sharp_bounds(lambda1, mu, pair.pairing, norm_s, branch)?;
    let exact = exact_distance(lambda1, mu, pair, branch)? / norm_s;
    Ok(BoundsReport {
        branch,
        lambda1,
        mu,
        phi: 1.0 / (pair.pairing.norm() * norm_s),
        coarse,
        sharp_lower,
        sharp_upper,
        halfplane,
        exact,
    })
}
