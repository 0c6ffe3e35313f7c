//! Spectral calculus on Hermitian matrices via cyclic complex Jacobi rotations.

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use super::mat::{MatC, MAX_DIM};
use super::C64;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition `H = V·diag(λ)·V*` of a Hermitian matrix.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: [f64; MAX_DIM],
    /// Unitary matrix of eigenvectors, column `i` for `values[i]`.
    pub vectors: MatC,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.vectors.dim()
    }

    /// `V·diag(f(λ))·V*`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> MatC {
        let n = self.dim();
        let v = &self.vectors;
        let fl: [f64; MAX_DIM] = core::array::from_fn(|i| if i < n { f(self.values[i]) } else { 0.0 });
        let mut m = MatC::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = C64::zero();
                for k in 0..n {
                    s += v[(i, k)] * v[(j, k)].conj() * fl[k];
                }
                m[(i, j)] = s;
            }
        }
        m
    }
}

/// Jacobi eigensolver for Hermitian input. Only the Hermitian part of `h` is used.
pub fn hermitian_eigen(h: &MatC) -> HermitianEigen {
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = MatC::identity(n);
    let scale = a.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if a.off_diagonal_norm() <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }
    let mut values = [0.0; MAX_DIM];
    for i in 0..n {
        values[i] = a[(i, i)].re;
    }
    let mut order: [usize; MAX_DIM] = [0, 1, 2, 3];
    order[..n].sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut sorted = [0.0; MAX_DIM];
    let mut vecs = MatC::zeros(n);
    for (dst, &src) in order[..n].iter().enumerate() {
        sorted[dst] = values[src];
        vecs.set_col(dst, &v.col(src));
    }
    HermitianEigen { values: sorted, vectors: vecs }
}

/// One two-sided rotation annihilating `a[p][q]`.
fn rotate(a: &mut MatC, v: &mut MatC, p: usize, q: usize) {
    let apq = a[(p, q)];
    let off = apq.norm();
    if off == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // phase e^{-iφ} on column q makes the pivot real; then a real rotation
    let phase = apq / off;
    let theta = (aqq - app) / (2.0 * off);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J acts on columns p, q: J = [[c, s], [-s·conj(phase), c·conj(phase)]]
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;
    let n = a.dim();
    // A ← A·J
    for i in 0..n {
        let (x, y) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = x * jpp + y * jqp;
        a[(i, q)] = x * jpq + y * jqq;
    }
    // A ← J*·A
    for j in 0..n {
        let (x, y) = (a[(p, j)], a[(q, j)]);
        a[(p, j)] = jpp.conj() * x + jqp.conj() * y;
        a[(q, j)] = jpq.conj() * x + jqq.conj() * y;
    }
    a[(p, q)] = C64::zero();
    a[(q, p)] = C64::zero();
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for i in 0..n {
        let (x, y) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = x * jpp + y * jqp;
        v[(i, q)] = x * jpq + y * jqq;
    }
}

/// `exp(H)` for Hermitian `H`.
pub fn expm_hermitian(h: &MatC) -> MatC {
    hermitian_eigen(h).apply(|x| x.exp())
}

/// `H^s` for positive definite Hermitian `H`.
pub fn powm_positive(h: &MatC, s: f64) -> MatC {
    hermitian_eigen(h).apply(|x| x.max(0.0).powf(s))
}
