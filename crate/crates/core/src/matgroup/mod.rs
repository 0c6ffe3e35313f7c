//! Small dense complex matrices (`n ≤ 4`) for `SL(n, ℂ)` and `SU(n)`:
//! sampling, Cartan and Schur decompositions, and the element taxonomy
//! (unitary / normal / elliptic / semisimple / regular).

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

mod hermitian;
mod kak;
mod mat;
mod sample;
mod schur;
mod svd;

pub use hermitian::{expm_hermitian, hermitian_eigen, powm_positive, HermitianEigen};
pub use kak::{kak_decompose, kak_interpolate, unitary_polar_factor, KakFactors};
pub use mat::{MatC, MAX_DIM};
pub use sample::{ginibre, hermitian_traceless, sample_sl, sample_su};
pub(crate) use sample::complex_normal;
pub use schur::{eig_decompose, schur, EigenDecomposition, Schur};
pub use svd::{condition_number, svd, Svd};

pub type C64 = num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatError {
    #[error("decomposition failed numerically")]
    NumericalFailure,
    #[error("iteration cap exceeded")]
    NoConvergence,
    #[error("matrix is not normal (defect {0:e})")]
    NotNormal(f64),
    #[error("zero eigenvalue")]
    ZeroEigenvalue,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

/// Default threshold for the classifier and the normality guard.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ElementClass {
    pub is_unitary: bool,
    pub is_normal: bool,
    pub is_elliptic: bool,
    pub is_semisimple: bool,
    /// Pairwise distinct eigenvalues.
    pub is_regular: bool,
    pub eigenvalues: Vec<C64>,
}

/// Flags `g` by thresholded tests. Semisimplicity is decided by the condition
/// number of the eigenvector matrix (`< 1/tol`).
pub fn classify_element(g: &MatC, tol: f64) -> Result<ElementClass, MatError> {
    let e = eig_decompose(g)?;
    let is_unitary = g.unitarity_defect() < tol;
    let is_normal = g.normality_defect() < tol;
    let mut gap = f64::INFINITY;
    for i in 0..e.values.len() {
        for j in i + 1..e.values.len() {
            gap = gap.min((e.values[i] - e.values[j]).norm());
        }
    }
    let is_semisimple = e.vector_condition < 1.0 / tol;
    let is_elliptic = is_semisimple && e.values.iter().all(|l| (l.norm() - 1.0).abs() < tol);
    Ok(ElementClass {
        is_unitary,
        is_normal,
        is_elliptic,
        is_semisimple,
        is_regular: gap > tol,
        eigenvalues: e.values,
    })
}

/// For normal `g = U·diag(λ)·U*`, returns `U·diag(λ/|λ|^t)·U*`: moduli are
/// pulled towards 1, reaching the unit circle at `t = 1`.
pub fn spectral_scale(g: &MatC, t: f64) -> Result<MatC, MatError> {
    let defect = g.normality_defect();
    if defect > DEFAULT_TOL * g.frobenius_norm_sq().max(1.0) {
        return Err(MatError::NotNormal(defect));
    }
    let s = schur(g)?;
    let n = g.dim();
    let mut d = [C64::new(0.0, 0.0); MAX_DIM];
    for i in 0..n {
        let l = s.t[(i, i)];
        let m = l.norm();
        if m == 0.0 || !m.is_finite() {
            return Err(MatError::ZeroEigenvalue);
        }
        d[i] = l / m.powf(t);
    }
    Ok(s.q * MatC::from_diag(&d[..n]) * s.q.adjoint())
}
