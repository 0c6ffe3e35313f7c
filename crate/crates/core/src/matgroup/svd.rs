//! One-sided (Hestenes) Jacobi SVD for small complex matrices.

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use super::mat::{MatC, MAX_DIM};
use super::{MatError, C64};

const MAX_SWEEPS: usize = 80;

/// `A = U·diag(σ)·V*`, singular values descending.
#[derive(Debug, Clone, Copy)]
pub struct Svd {
    pub u: MatC,
    pub sigma: [f64; MAX_DIM],
    pub v: MatC,
}

fn col_dot(a: &MatC, p: usize, q: usize) -> C64 {
    let mut s = C64::zero();
    for i in 0..a.dim() {
        s += a[(i, p)].conj() * a[(i, q)];
    }
    s
}

fn col_norm_sq(a: &MatC, p: usize) -> f64 {
    (0..a.dim()).map(|i| a[(i, p)].norm_sqr()).sum()
}

/// Columns of `A·V` are mutually orthogonal on return; `V` is unitary.
fn orthogonalize_columns(a: &mut MatC, v: &mut MatC) -> Result<(), MatError> {
    let n = a.dim();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = col_norm_sq(a, p);
                let beta = col_norm_sq(a, q);
                let gamma = col_dot(a, p, q);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // [p, q] ← [p, q]·[[c, s·φ], [−s·φ̄, c]]
                let sp = phase * s;
                let spc = phase.conj() * s;
                for m in [&mut *a, &mut *v] {
                    for i in 0..n {
                        let (x, y) = (m[(i, p)], m[(i, q)]);
                        m[(i, p)] = x * c - y * spc;
                        m[(i, q)] = x * sp + y * c;
                    }
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(MatError::NumericalFailure)
}

/// Full SVD. Columns of `U` belonging to zero singular values are completed
/// to an orthonormal basis.
pub fn svd(m: &MatC) -> Result<Svd, MatError> {
    let n = m.dim();
    let mut a = *m;
    let mut v = MatC::identity(n);
    orthogonalize_columns(&mut a, &mut v)?;
    let mut sigma = [0.0; MAX_DIM];
    for j in 0..n {
        sigma[j] = col_norm_sq(&a, j).sqrt();
    }
    let mut order: [usize; MAX_DIM] = [0, 1, 2, 3];
    order[..n].sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let mut s_sorted = [0.0; MAX_DIM];
    let mut u = MatC::zeros(n);
    let mut vs = MatC::zeros(n);
    let smax = sigma[order[0]];
    let mut filled = 0;
    for (dst, &src) in order[..n].iter().enumerate() {
        s_sorted[dst] = sigma[src];
        vs.set_col(dst, &v.col(src));
        if sigma[src] > 1e-300 && sigma[src] > smax * 1e-15 {
            let mut c = a.col(src);
            for x in c.iter_mut().take(n) {
                *x /= sigma[src];
            }
            u.set_col(dst, &c);
            filled = dst + 1;
        }
    }
    complete_basis(&mut u, filled);
    Ok(Svd { u, sigma: s_sorted, v: vs })
}

/// Right singular vectors and singular values only (no `U`), for null spaces.
pub fn right_singular(m: &MatC) -> Result<([f64; MAX_DIM], MatC), MatError> {
    let s = svd(m)?;
    Ok((s.sigma, s.v))
}

/// Extends columns `0..filled` to an orthonormal basis by Gram–Schmidt over
/// the standard basis.
fn complete_basis(u: &mut MatC, filled: usize) {
    let n = u.dim();
    let mut k = filled;
    let mut e = 0;
    while k < n && e < n {
        let mut c = [C64::zero(); MAX_DIM];
        c[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for j in 0..k {
                let col = u.col(j);
                let mut d = C64::zero();
                for i in 0..n {
                    d += col[i].conj() * c[i];
                }
                for i in 0..n {
                    c[i] -= col[i] * d;
                }
            }
        }
        let nrm: f64 = c[..n].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            for x in c.iter_mut().take(n) {
                *x /= nrm;
            }
            u.set_col(k, &c);
            k += 1;
        }
        e += 1;
    }
}

/// `σ_max / σ_min`, infinite for singular input.
pub fn condition_number(m: &MatC) -> Result<f64, MatError> {
    let s = svd(m)?;
    let n = m.dim();
    let smin = s.sigma[n - 1];
    Ok(if smin > 0.0 { s.sigma[0] / smin } else { f64::INFINITY })
}
