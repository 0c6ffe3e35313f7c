//! Complex Schur form by Householder–Hessenberg reduction and shifted QR,
//! plus eigenvector extraction.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use super::mat::{MatC, MAX_DIM};
use super::svd::{condition_number, right_singular};
use super::{MatError, C64};

/// `A = Q·T·Q*` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone, Copy)]
pub struct Schur {
    pub q: MatC,
    pub t: MatC,
}

fn hessenberg(a: &MatC) -> (MatC, MatC) {
    let n = a.dim();
    let mut h = *a;
    let mut q = MatC::identity(n);
    for k in 0..n.saturating_sub(2) {
        let mut x = [C64::zero(); MAX_DIM];
        let mut tail = 0.0;
        for i in k + 1..n {
            x[i] = h[(i, k)];
            if i > k + 1 {
                tail += x[i].norm_sqr();
            }
        }
        if tail == 0.0 {
            continue;
        }
        let alpha = (x[k + 1].norm_sqr() + tail).sqrt();
        let ph = if x[k + 1].norm() > 0.0 { x[k + 1] / x[k + 1].norm() } else { C64::one() };
        let mut v = x;
        v[k + 1] += ph * alpha;
        let vnorm_sq: f64 = v[k + 1..n].iter().map(|z| z.norm_sqr()).sum();
        // P = I − 2 v v* / (v* v)
        let mut p = MatC::identity(n);
        for i in k + 1..n {
            for j in k + 1..n {
                p[(i, j)] -= v[i] * v[j].conj() * (2.0 / vnorm_sq);
            }
        }
        h = p * h * p;
        q = q * p;
        for i in k + 2..n {
            h[(i, k)] = C64::zero();
        }
    }
    (h, q)
}

/// Givens `G* = [[c, s], [−s̄, c]]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let r = (ax * ax + y.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, C64::zero());
    }
    let ph = if ax > 0.0 { x / ax } else { C64::one() };
    (ax / r, ph * y.conj() / r)
}

/// Shifted QR iteration with Wilkinson shifts and periodic exceptional shifts.
pub fn schur(a: &MatC) -> Result<Schur, MatError> {
    let n = a.dim();
    let (mut h, mut q) = hessenberg(a);
    let cap = 500 * n * n;
    let mut iters = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let scale = if diag > 0.0 { diag } else { h.max_abs() };
            if sub <= f64::EPSILON * scale || sub < f64::MIN_POSITIVE {
                h[(l, l - 1)] = C64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        iters += 1;
        since_deflation += 1;
        if iters > cap {
            return Err(MatError::NoConvergence);
        }
        let mu = if since_deflation % 11 == 0 {
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.25 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        let mut rots: [(f64, C64); MAX_DIM] = [(1.0, C64::zero()); MAX_DIM];
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rots[k] = (c, s);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = C64::zero();
        }
        for k in l..hi {
            let (c, s) = rots[k];
            let rows = (k + 2).min(hi + 1);
            for i in 0..rows {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let (x, y) = (q[(i, k)], q[(i, k + 1)]);
                q[(i, k)] = x * c + y * s.conj();
                q[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = C64::zero();
        }
    }
    Ok(Schur { q, t: h })
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = d - b * c / (half + disc);
    let m2 = d - b * c / (half - disc);
    let pick = |m: C64| if m.is_nan() { d } else { m };
    let (m1, m2) = (pick(m1), pick(m2));
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Eigenvalues with eigenvectors (unit columns).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Sorted by descending modulus, then ascending argument.
    pub values: Vec<C64>,
    /// Column `i` is an eigenvector for `values[i]`. For a defective
    /// eigenvalue the available directions are repeated, so the matrix is
    /// singular exactly when the input is not diagonalizable.
    pub vectors: MatC,
    /// Condition number of `vectors` (infinite when defective).
    pub vector_condition: f64,
}

/// Relative size below which coalescing eigenvalues are examined as a cluster.
const CLUSTER_TOL: f64 = 1e-4;
/// Relative singular-value threshold for the null space of `A − μI`.
const NULL_TOL: f64 = 1e-7;

/// Eigen-decomposition via complex Schur form.
///
/// Simple eigenvalues get eigenvectors by back-substitution in `T`. Clusters of
/// nearly equal eigenvalues are treated as one eigenvalue `μ` (their mean):
/// its geometric multiplicity is read off the numerical null space of `A − μI`,
/// which tells diagonalizable repeated eigenvalues from Jordan blocks.
pub fn eig_decompose(a: &MatC) -> Result<EigenDecomposition, MatError> {
    let n = a.dim();
    let sch = schur(a)?;
    let t = sch.t;
    let raw: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let scale = a.frobenius_norm().max(1.0);

    // single-linkage clusters of the Schur diagonal
    let mut label: [usize; MAX_DIM] = [0, 1, 2, 3];
    for i in 0..n {
        for j in i + 1..n {
            if (raw[i] - raw[j]).norm() < CLUSTER_TOL * scale {
                let (li, lj) = (label[i], label[j]);
                for l in label.iter_mut().take(n) {
                    if *l == lj {
                        *l = li;
                    }
                }
            }
        }
    }

    let mut values = raw.clone();
    let mut cols: [[C64; MAX_DIM]; MAX_DIM] = [[C64::zero(); MAX_DIM]; MAX_DIM];
    let mut done = [false; MAX_DIM];
    for i in 0..n {
        if done[i] {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| label[j] == label[i]).collect();
        if members.len() > 1 {
            let mu = members.iter().map(|&j| raw[j]).sum::<C64>() / members.len() as f64;
            let shifted = *a - MatC::scalar(n, mu);
            let (sigma, v) = right_singular(&shifted)?;
            let null_dim = (0..n).filter(|&k| sigma[k] < NULL_TOL * scale).count();
            if null_dim > 0 {
                let k = members.len();
                for (slot, &m) in members.iter().enumerate() {
                    // null directions are the trailing right singular vectors
                    let which = n - 1 - (slot % null_dim.min(k));
                    cols[m] = v.col(which);
                    values[m] = mu;
                    done[m] = true;
                }
                continue;
            }
        }
        for &m in &members {
            cols[m] = back_substitute(&t, &sch.q, m, raw[m]);
            done[m] = true;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sort_key(values[i]).partial_cmp(&sort_key(values[j])).unwrap_or(core::cmp::Ordering::Equal));
    let sorted_vals: Vec<C64> = order.iter().map(|&i| values[i]).collect();
    let sorted_cols: [[C64; MAX_DIM]; MAX_DIM] =
        core::array::from_fn(|k| if k < n { cols[order[k]] } else { [C64::zero(); MAX_DIM] });
    let vectors = MatC::from_cols(&sorted_cols, n);
    let vector_condition = condition_number(&vectors)?;
    Ok(EigenDecomposition { values: sorted_vals, vectors, vector_condition })
}

/// Descending modulus (quantized so rounding noise does not reorder), then argument.
fn sort_key(z: C64) -> (i64, f64) {
    let m = (z.norm() * 1e9).round() as i64;
    let arg = if z.norm() == 0.0 { 0.0 } else { z.arg() };
    (-m, arg)
}

/// Eigenvector of `Q·T·Q*` for the eigenvalue `T[k][k]`, normalized.
fn back_substitute(t: &MatC, q: &MatC, k: usize, lambda: C64) -> [C64; MAX_DIM] {
    let n = t.dim();
    let smin = (f64::EPSILON * t.frobenius_norm()).max(f64::MIN_POSITIVE);
    let mut y = [C64::zero(); MAX_DIM];
    y[k] = C64::one();
    for i in (0..k).rev() {
        let mut s = C64::zero();
        for j in i + 1..=k {
            s += t[(i, j)] * y[j];
        }
        let mut d = t[(i, i)] - lambda;
        if d.norm() < smin {
            d = C64::new(smin, 0.0);
        }
        y[i] = -s / d;
    }
    let mut v = [C64::zero(); MAX_DIM];
    for i in 0..n {
        for j in 0..=k {
            v[i] += q[(i, j)] * y[j];
        }
    }
    let nrm: f64 = v[..n].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut().take(n) {
        *x /= nrm;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn check_pairs(a: &MatC, e: &EigenDecomposition) {
        for k in 0..a.dim() {
            let col = e.vectors.col(k);
            let mut r = 0.0;
            for i in 0..a.dim() {
                let mut s = -e.values[k] * col[i];
                for j in 0..a.dim() {
                    s += a[(i, j)] * col[j];
                }
                r += s.norm_sqr();
            }
            assert!(r.sqrt() < 1e-8, "residual {} for pair {k}", r.sqrt());
        }
    }

    #[test]
    fn schur_reconstructs() {
        let a = MatC::from_rows(&[
            &[c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0), c(1.0, 1.0)],
            &[c(-1.0, 0.0), c(2.0, -1.0), c(0.5, 0.5), c(0.0, 2.0)],
            &[c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 1.0), c(1.0, 0.0)],
            &[c(2.0, 0.0), c(0.0, -1.0), c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let s = schur(&a).unwrap();
        assert!(s.q.unitarity_defect() < 1e-13);
        assert!((s.q * s.t * s.q.adjoint()).dist(&a) < 1e-12);
        assert!(s.t.lower_norm_sq() == 0.0);
        let e = eig_decompose(&a).unwrap();
        check_pairs(&a, &e);
    }

    #[test]
    fn permutation_matrix_converges() {
        // the bare Wilkinson shift stalls on cyclic permutations
        let z = C64::zero();
        let o = C64::one();
        let p = MatC::from_rows(&[&[z, z, o], &[o, z, z], &[z, o, z]]);
        let e = eig_decompose(&p).unwrap();
        for v in &e.values {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        check_pairs(&p, &e);
    }

    #[test]
    fn diagonal_and_sorting() {
        let d = MatC::from_diag(&[c(1.0 / 3.0, 0.0), c(3.0, 0.0)]);
        let e = eig_decompose(&d).unwrap();
        assert!((e.values[0] - c(3.0, 0.0)).norm() < 1e-15);
        assert!((e.values[1] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        // 3 sits in the second slot, so its eigenvector is e₂
        assert!((e.vectors.col(0)[0]).norm() < 1e-15);
        assert!((e.vectors.col(1)[1]).norm() < 1e-15);
    }

    #[test]
    fn jordan_block_is_defective() {
        let j = MatC::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
        let e = eig_decompose(&j).unwrap();
        assert_eq!(e.values, alloc::vec![c(1.0, 0.0), c(1.0, 0.0)]);
        for k in 0..2 {
            let v = e.vectors.col(k);
            assert!(v[1].norm() < 1e-12 && (v[0].norm() - 1.0).abs() < 1e-12);
        }
        assert!(e.vector_condition > 1e12);
    }

    #[test]
    fn repeated_semisimple_is_not_defective() {
        let d = MatC::from_diag(&[c(0.5, 0.5), c(0.5, 0.5), c(1.0, -1.0)]);
        let g = MatC::from_rows(&[
            &[c(1.0, 0.0), c(0.3, 0.0), c(0.0, 0.2)],
            &[c(0.0, 0.0), c(1.0, 0.1), c(0.4, 0.0)],
            &[c(0.2, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let a = g * d * g.inverse().unwrap();
        let e = eig_decompose(&a).unwrap();
        check_pairs(&a, &e);
        assert!(e.vector_condition < 1e4);
    }
}
