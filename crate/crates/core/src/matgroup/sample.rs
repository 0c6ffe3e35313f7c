//! Random elements of `SU(n)` and `SL(n, ℂ)`.

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use super::hermitian::expm_hermitian;
use super::mat::MatC;
use super::C64;

/// Standard complex Gaussian, `E|z|² = 1`.
pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MatC {
    let mut m = MatC::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = complex_normal(rng);
        }
    }
    m
}

/// Random Hermitian traceless matrix, off-diagonal entries of unit variance.
pub fn hermitian_traceless<R: Rng + ?Sized>(n: usize, rng: &mut R, scale: f64) -> MatC {
    let mut p = MatC::zeros(n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        p[(i, i)] = C64::new(d, 0.0);
        for j in i + 1..n {
            let z = complex_normal(rng);
            p[(i, j)] = z;
            p[(j, i)] = z.conj();
        }
    }
    let mean = p.trace().re / n as f64;
    for i in 0..n {
        p[(i, i)] -= C64::new(mean, 0.0);
    }
    p.scale(C64::new(scale, 0.0))
}

/// Haar-random element of `SU(n)`: Gram–Schmidt QR of a Ginibre matrix (which
/// yields the positive-diagonal `R`, i.e. the phase-corrected `Q`), divided by
/// the principal `n`-th root of its determinant.
pub fn sample_su<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MatC {
    let z = ginibre(n, rng);
    let mut q = MatC::zeros(n);
    for j in 0..n {
        let mut v = z.col(j);
        for _ in 0..2 {
            for k in 0..j {
                let qk = q.col(k);
                let mut d = C64::zero();
                for i in 0..n {
                    d += qk[i].conj() * v[i];
                }
                for i in 0..n {
                    v[i] -= qk[i] * d;
                }
            }
        }
        let nrm: f64 = v[..n].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut().take(n) {
            *x /= nrm;
        }
        q.set_col(j, &v);
    }
    let d = q.det();
    let root = C64::from_polar(1.0, d.arg() / n as f64);
    q.scale(root.conj())
}

/// `U·exp(P)` with `U` Haar on `SU(n)` and `P` Hermitian traceless of scale
/// `spread`. `U` is drawn first, so `spread = 0` reproduces [`sample_su`] for
/// the same generator state.
pub fn sample_sl<R: Rng + ?Sized>(n: usize, rng: &mut R, spread: f64) -> MatC {
    let u = sample_su(n, rng);
    let p = hermitian_traceless(n, rng, spread);
    u * expm_hermitian(&p)
}
