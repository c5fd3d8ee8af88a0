//! Small matrices with prescribed Jordan structure, used by tests, the
//! experiment harness and as reproducible demo inputs.

use crate::error::Result;
use crate::structure::SympMatrix;
use crate::{C64, CMatrix};

/// `diag(L, L^{-1})` for `L = diag(lambdas)`; symplectic by construction.
pub fn diag_pairs(lambdas: &[C64]) -> Result<SympMatrix> {
    let n = lambdas.len();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for (i, l) in lambdas.iter().enumerate() {
        m[(i, i)] = *l;
        m[(n + i, n + i)] = C64::new(1.0, 0.0) / l;
    }
    SympMatrix::new_default(m)
}

/// The 4x4 symplectic matrix whose eigenvalue `lambda` carries a single
/// nontrivial Jordan chain (Segre characteristic `((2))`, same for
/// `1/lambda`):
///
/// ```text
/// [ l  1  0     0  ]
/// [ 0  l  0     0  ]
/// [ 0  0  1/l   0  ]
/// [ 0  0 -1/l^2 1/l]
/// ```
///
/// Its only eigenvectors are `e1` and `e4` with `e1^T J e4 = 0`, so the
/// structure-preserving update does not apply at `lambda`.
pub fn defective_pair(lambda: C64) -> Result<SympMatrix> {
    let li = C64::new(1.0, 0.0) / lambda;
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = lambda;
    m[(0, 1)] = C64::new(1.0, 0.0);
    m[(1, 1)] = lambda;
    m[(2, 2)] = li;
    m[(3, 2)] = -li * li;
    m[(3, 3)] = li;
    SympMatrix::new_default(m)
}

/// Direct sum of two symplectic matrices with respect to the block structure
/// of `J`: the `[A B; C D]` blocks of the summands are interleaved so the
/// result is symplectic for the larger `J`.
pub fn symplectic_direct_sum(s1: &SympMatrix, s2: &SympMatrix) -> Result<SympMatrix> {
    let (n1, n2) = (s1.dim_half(), s2.dim_half());
    let n = n1 + n2;
    let (a, b) = (s1.entries(), s2.entries());
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n1 {
        for k in 0..n1 {
            m[(i, k)] = a[(i, k)];
            m[(i, n + k)] = a[(i, n1 + k)];
            m[(n + i, k)] = a[(n1 + i, k)];
            m[(n + i, n + k)] = a[(n1 + i, n1 + k)];
        }
    }
    for i in 0..n2 {
        for k in 0..n2 {
            m[(n1 + i, n1 + k)] = b[(i, k)];
            m[(n1 + i, n + n1 + k)] = b[(i, n2 + k)];
            m[(n + n1 + i, n1 + k)] = b[(n2 + i, k)];
            m[(n + n1 + i, n + n1 + k)] = b[(n2 + i, n2 + k)];
        }
    }
    SympMatrix::new_default(m)
}

/// 6x6 symplectic matrix where `lambda` has Segre characteristic `((2, 1))`:
/// one nontrivial chain plus one trivial chain, so the update applies.
pub fn defective_plus_trivial(lambda: C64) -> Result<SympMatrix> {
    let defective = defective_pair(lambda)?;
    let trivial = diag_pairs(&[lambda])?;
    symplectic_direct_sum(&defective, &trivial)
}

/// 8x8 symplectic matrix where `lambda` has Segre characteristic `((2, 2))`:
/// two nontrivial chains and no trivial one, so the update does not apply.
pub fn double_defective_pair(lambda: C64) -> Result<SympMatrix> {
    let d = defective_pair(lambda)?;
    symplectic_direct_sum(&d, &d.clone())
}

/// The unstructured rank-two update of the identity
/// `I_4 + [e1 e2] [e1 e3]^T = diag(2, J_2(1), 1)`, whose eigenvalue 1 has
/// Segre characteristic `((2, 1))`. Not symplectic; returned as a plain
/// matrix for Segre staircase tests.
pub fn rado_counterexample() -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(0, 0)] = C64::new(2.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m
}
