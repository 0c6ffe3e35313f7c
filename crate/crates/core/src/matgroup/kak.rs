//! Cartan decomposition `g = k·e^x·h*` and the gauge-free interpolation path.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::hermitian::hermitian_eigen;
use super::mat::MatC;
use super::svd::svd;
use super::{MatError, C64};

/// `g = k·diag(e^{x₁},…,e^{xₙ})·h*` with `k, h ∈ SU(n)`, `Σxᵢ = 0`, `x` descending.
#[derive(Debug, Clone, PartialEq)]
pub struct KakFactors {
    pub k: MatC,
    pub x: Vec<f64>,
    pub h: MatC,
}

impl KakFactors {
    /// `k·e^{t·x}·h*`; at `t = 1` this reconstructs `g`.
    pub fn path(&self, t: f64) -> MatC {
        let ex: Vec<f64> = self.x.iter().map(|x| (t * x).exp()).collect();
        self.k * MatC::from_real_diag(&ex) * self.h.adjoint()
    }
}

/// SVD-based KAK factorization. The determinant phases of the singular vector
/// bases are pushed into their first columns so both land in `SU(n)`.
pub fn kak_decompose(g: &MatC) -> Result<KakFactors, MatError> {
    let n = g.dim();
    let s = svd(g)?;
    let (mut k, mut h) = (s.u, s.v);
    let du = k.det();
    if du.norm() == 0.0 {
        return Err(MatError::NumericalFailure);
    }
    let alpha = du.conj() / du.norm();
    for i in 0..n {
        k[(i, 0)] *= alpha;
        h[(i, 0)] *= alpha;
    }
    // The smallest singular value carries the largest relative error; for
    // g ∈ SL(n) it is pinned down by the others through |det g| = 1.
    let mut sigma = s.sigma;
    let rest: f64 = sigma[..n - 1].iter().product();
    if rest > 0.0 && rest.is_finite() {
        sigma[n - 1] = 1.0 / rest;
    }
    let mut x: Vec<f64> = sigma[..n].iter().map(|s| s.ln()).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(MatError::NumericalFailure);
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
    Ok(KakFactors { k, x, h })
}

/// Unitary polar factor by scaled Newton iteration `X ← ½(γX + γ⁻¹X^{-*})`.
///
/// Works on `g` directly rather than on `g*g`, which squares the condition
/// number.
pub fn unitary_polar_factor(g: &MatC) -> Result<MatC, MatError> {
    let mut x = *g;
    for it in 0..100 {
        let xinv = x.inverse()?;
        let gamma = if it < 20 { (xinv.frobenius_norm() / x.frobenius_norm()).sqrt() } else { 1.0 };
        let next = (x.scale(C64::new(0.5 * gamma, 0.0))) + xinv.adjoint().scale(C64::new(0.5 / gamma, 0.0));
        let delta = next.dist(&x);
        x = next;
        if delta <= 1e-15 * x.frobenius_norm() {
            break;
        }
    }
    if x.unitarity_defect() > 1e-10 {
        return Err(MatError::NoConvergence);
    }
    Ok(x)
}

/// `g·(g*g)^{(t−1)/2}`: the path from `g` (at `t = 1`) to its unitary polar
/// factor (at `t = 0`). Evaluated as `Q·H^t` where `g = Q·H` is the polar
/// decomposition, which equals `k·e^{t·x}·h*` for every KAK factorization.
pub fn kak_interpolate(g: &MatC, t: f64) -> Result<MatC, MatError> {
    if t == 1.0 {
        return Ok(*g);
    }
    let q = unitary_polar_factor(g)?;
    let h = (q.adjoint() * *g).hermitian_part();
    let ht = hermitian_eigen(&h).apply(|s| s.max(f64::MIN_POSITIVE).powf(t));
    Ok(q * ht)
}
