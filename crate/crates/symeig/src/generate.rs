//! Reproducible generation of test symplectic matrices.
//!
//! Matrices are built as `S = T D T^{-1}` where `D = diag(L, L^{-1})` carries
//! a prescribed spectrum and `T` is a product of elementary symplectic
//! factors: `[I W; 0 I]`, `[I 0; V I]` with `W = W^T`, `V = V^T`, and
//! `diag(G, G^{-T})` with diagonal `G`. Since `T` is symplectic by
//! construction, `T^{-1}` is obtained exactly via the star operator and `S`
//! is symplectic up to two matrix products of rounding.

use crate::error::Result;
use crate::structure::{star, SympMatrix};
use crate::{C64, CMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 step; used to derive independent substream seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit_complex(rng: &mut impl Rng) -> C64 {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::new(theta.cos(), theta.sin())
}

fn random_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random complex symmetric matrix with entries of size about `scale`.
fn random_symmetric(n: usize, scale: f64, rng: &mut impl Rng) -> CMatrix {
    let mut w = CMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..=i {
            let z = random_c64(rng) * C64::new(scale, 0.0);
            w[(i, k)] = z;
            w[(k, i)] = z;
        }
    }
    w
}

/// `[I W; 0 I]` for symmetric `W` (upper unipotent symplectic factor).
fn upper_factor(w: &CMatrix) -> CMatrix {
    let n = w.nrows();
    let mut m = CMatrix::identity(2 * n, 2 * n);
    for i in 0..n {
        for k in 0..n {
            m[(i, n + k)] = w[(i, k)];
        }
    }
    m
}

/// `[I 0; V I]` for symmetric `V` (lower unipotent symplectic factor).
fn lower_factor(v: &CMatrix) -> CMatrix {
    let n = v.nrows();
    let mut m = CMatrix::identity(2 * n, 2 * n);
    for i in 0..n {
        for k in 0..n {
            m[(n + i, k)] = v[(i, k)];
        }
    }
    m
}

/// `diag(g, g^{-T})` for a diagonal `g` given by its entries.
fn diagonal_factor(g: &[C64]) -> CMatrix {
    let n = g.len();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, i)] = g[i];
        m[(n + i, n + i)] = C64::new(1.0, 0.0) / g[i];
    }
    m
}

/// Spectrum magnitudes: log-spaced across `[10^-spread, 10^spread]` with the
/// extremes pinned so the spread is attained, and jittered in between.
fn spectrum(n: usize, spread: f64, rng: &mut impl Rng) -> Vec<C64> {
    let mut lambdas = Vec::with_capacity(n);
    for i in 0..n {
        let mut exp = if n == 1 {
            spread
        } else {
            -spread + 2.0 * spread * (i as f64) / ((n - 1) as f64)
        };
        let interior = n > 2 && i > 0 && i + 1 < n;
        if interior {
            let step = 2.0 * spread / ((n - 1) as f64);
            exp += rng.gen_range(-0.2..0.2) * step;
        }
        lambdas.push(unit_complex(rng) * C64::new(10f64.powf(exp), 0.0));
    }
    lambdas
}

/// Deterministic random symplectic matrix of size `2n x 2n`.
///
/// The eigenvalue magnitudes of the result spread over roughly
/// `[10^-spread, 10^spread]` (the reciprocal pairs fill in the other half of
/// the range). Bitwise identical output for identical `(n, seed, spread)`.
pub fn random_symplectic(n: usize, seed: u64, spread: f64) -> Result<SympMatrix> {
    crate::structure::j_matrix(n)?; // validates n >= 1
    let mut rng = ChaCha12Rng::seed_from_u64(mix_seed(seed, 0x5eed));

    let lambdas = spectrum(n, spread, &mut rng);
    let mut d = CMatrix::zeros(2 * n, 2 * n);
    for (i, l) in lambdas.iter().enumerate() {
        d[(i, i)] = *l;
        d[(n + i, n + i)] = C64::new(1.0, 0.0) / l;
    }

    // Mild mixing similarity; small factors keep the conditioning of T modest
    // so eigenvector extraction stays accurate downstream.
    let scale = 0.4 / (n as f64).sqrt();
    let g: Vec<C64> = (0..n)
        .map(|_| unit_complex(&mut rng) * C64::new(10f64.powf(rng.gen_range(-0.15..0.15)), 0.0))
        .collect();
    let t = upper_factor(&random_symmetric(n, scale, &mut rng))
        * lower_factor(&random_symmetric(n, scale, &mut rng))
        * diagonal_factor(&g)
        * upper_factor(&random_symmetric(n, scale, &mut rng));

    let s = &t * d * star(&t)?;
    SympMatrix::new_default(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::la;

    #[test]
    fn small_instance_is_tightly_symplectic() {
        let s = random_symplectic(1, 0, 0.0).unwrap();
        assert!(s.residual() <= 1e-12);
    }

    #[test]
    fn deterministic_bitwise() {
        let a = random_symplectic(10, 7, 2.0).unwrap();
        let b = random_symplectic(10, 7, 2.0).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn spectrum_spread_reaches_requested_ratio() {
        let s = random_symplectic(10, 7, 2.0).unwrap();
        let eigs = la::eigenvalues(s.entries()).unwrap();
        let mags: Vec<f64> = eigs.iter().map(|z| z.norm()).collect();
        let max = mags.iter().cloned().fold(0.0f64, f64::max);
        let min = mags.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min >= 1e2, "spread ratio {} too small", max / min);
    }

    #[test]
    fn residual_scales_with_instance() {
        for (n, seed, spread) in [(5, 1, 0.5), (20, 3, 2.0), (20, 4, 1.0)] {
            let s = random_symplectic(n, seed, spread).unwrap();
            let norm = s.norm_frobenius();
            assert!(
                s.residual() <= 1e-10 * norm.max(1.0),
                "residual {} too large for n={n} spread={spread}",
                s.residual()
            );
        }
    }

    #[test]
    fn determinant_modulus_near_one() {
        let s = random_symplectic(6, 11, 1.0).unwrap();
        let det = s.entries().clone().lu().determinant();
        assert!((det.norm() - 1.0).abs() < 1e-8);
    }
}
