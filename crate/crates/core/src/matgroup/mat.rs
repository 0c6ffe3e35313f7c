use core::fmt;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use super::{MatError, C64};

pub const MAX_DIM: usize = 4;

/// Dense complex `n×n` matrix with `n ≤ 4`, stored inline.
#[derive(Clone, Copy, PartialEq)]
pub struct MatC {
    n: usize,
    a: [[C64; MAX_DIM]; MAX_DIM],
}

impl MatC {
    /// Panics unless `1 ≤ n ≤ 4`.
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "matrix dimension {n} outside 1..=4");
        MatC { n, a: [[C64::zero(); MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, C64::one())
    }

    pub fn scalar(n: usize, z: C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i][i] = z;
        }
        m
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &z) in d.iter().enumerate() {
            m.a[i][i] = z;
        }
        m
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.a[i][i] = C64::new(x, 0.0);
        }
        m
    }

    /// Panics on ragged input; see [`MatC::try_from_rows`].
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "row {i} has wrong length");
            m.a[i][..n].copy_from_slice(r);
        }
        m
    }

    pub fn try_from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self, MatError> {
        let n = rows.len();
        if !(1..=MAX_DIM).contains(&n) || rows.iter().any(|r| r.as_ref().len() != n) {
            return Err(MatError::DimensionMismatch);
        }
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            m.a[i][..n].copy_from_slice(r.as_ref());
        }
        Ok(m)
    }

    /// Matrix whose columns are `cols[0..n]`.
    pub fn from_cols(cols: &[[C64; MAX_DIM]], n: usize) -> Self {
        let mut m = Self::zeros(n);
        for j in 0..n {
            for i in 0..n {
                m.a[i][j] = cols[j][i];
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.a[i][..self.n]
    }

    pub fn col(&self, j: usize) -> [C64; MAX_DIM] {
        let mut c = [C64::zero(); MAX_DIM];
        for i in 0..self.n {
            c[i] = self.a[i][j];
        }
        c
    }

    pub fn set_col(&mut self, j: usize, c: &[C64; MAX_DIM]) {
        for i in 0..self.n {
            self.a[i][j] = c[i];
        }
    }

    pub fn diag(&self) -> [C64; MAX_DIM] {
        let mut d = [C64::zero(); MAX_DIM];
        for i in 0..self.n {
            d[i] = self.a[i][i];
        }
        d
    }

    /// Conjugate transpose `g*`.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[j][i] = self.a[i][j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.a[i][i]).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.a[i][j].norm_sqr();
            }
        }
        s
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        let mut s = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                s = s.max(self.a[i][j].norm());
            }
        }
        s
    }

    /// `‖A − B‖_F`; panics on dimension mismatch.
    pub fn dist(&self, other: &MatC) -> f64 {
        (*self - *other).frobenius_norm()
    }

    pub fn scale(&self, z: C64) -> Self {
        let mut m = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] *= z;
            }
        }
        m
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &MatC) -> Self {
        *self * *other - *other * *self
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(C64::new(0.5, 0.0))
    }

    /// Sum of squared moduli strictly below the diagonal.
    pub fn lower_norm_sq(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                s += self.a[i][j].norm_sqr();
            }
        }
        s
    }

    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.a[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// LU factorization with partial pivoting. Returns the packed factors,
    /// the permutation and its sign.
    fn lu(&self) -> ([[C64; MAX_DIM]; MAX_DIM], [usize; MAX_DIM], f64) {
        let n = self.n;
        let mut a = self.a;
        let mut perm = [0, 1, 2, 3];
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k][k].norm();
            for i in k + 1..n {
                let v = a[i][k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                a.swap(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            let piv = a[k][k];
            if piv == C64::zero() {
                continue;
            }
            for i in k + 1..n {
                let f = a[i][k] / piv;
                a[i][k] = f;
                for j in k + 1..n {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
        }
        (a, perm, sign)
    }

    pub fn det(&self) -> C64 {
        match self.n {
            1 => self.a[0][0],
            2 => self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0],
            _ => {
                let (lu, _, sign) = self.lu();
                let mut d = C64::new(sign, 0.0);
                for i in 0..self.n {
                    d *= lu[i][i];
                }
                d
            }
        }
    }

    /// Inverse via LU; fails with `SingularMatrix` when a pivot is at
    /// rounding level relative to the entry scale.
    pub fn inverse(&self) -> Result<Self, MatError> {
        let n = self.n;
        let scale = self.max_abs();
        let (lu, perm, _) = self.lu();
        for i in 0..n {
            let p = lu[i][i].norm();
            if !(p > 4.0 * f64::EPSILON * scale) || !p.is_finite() {
                return Err(MatError::SingularMatrix);
            }
        }
        let mut inv = Self::zeros(n);
        for col in 0..n {
            // solve L U x = P e_col
            let mut x = [C64::zero(); MAX_DIM];
            for i in 0..n {
                let mut s = if perm[i] == col { C64::one() } else { C64::zero() };
                for j in 0..i {
                    s -= lu[i][j] * x[j];
                }
                x[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[i];
                for j in i + 1..n {
                    s -= lu[i][j] * x[j];
                }
                x[i] = s / lu[i][i];
            }
            for i in 0..n {
                inv.a[i][col] = x[i];
            }
        }
        Ok(inv)
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// `|det − 1| ≤ tol`.
    pub fn is_special_linear(&self, tol: f64) -> bool {
        (self.det() - C64::one()).norm() <= tol
    }

    /// `‖A*A − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Self::identity(self.n)).frobenius_norm()
    }

    /// `‖A*A − AA*‖_F`.
    pub fn normality_defect(&self) -> f64 {
        let adj = self.adjoint();
        (adj * *self - *self * adj).frobenius_norm()
    }

    /// Divides by the principal `n`-th root of the determinant.
    pub fn normalize_det(&self) -> Result<Self, MatError> {
        let d = self.det();
        if d.norm() == 0.0 || !d.norm().is_finite() {
            return Err(MatError::SingularMatrix);
        }
        let root = d.powf(1.0 / self.n as f64);
        Ok(self.scale(root.inv()))
    }
}

impl Index<(usize, usize)> for MatC {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.n && j < self.n);
        &self.a[i][j]
    }
}

impl IndexMut<(usize, usize)> for MatC {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.n && j < self.n);
        &mut self.a[i][j]
    }
}

impl Mul for MatC {
    type Output = MatC;
    fn mul(self, rhs: MatC) -> MatC {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut m = MatC::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i][k];
                for j in 0..n {
                    m.a[i][j] += aik * rhs.a[k][j];
                }
            }
        }
        m
    }
}

impl Add for MatC {
    type Output = MatC;
    fn add(self, rhs: MatC) -> MatC {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sum");
        let mut m = self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] += rhs.a[i][j];
            }
        }
        m
    }
}

impl AddAssign for MatC {
    fn add_assign(&mut self, rhs: MatC) {
        *self = *self + rhs;
    }
}

impl Sub for MatC {
    type Output = MatC;
    fn sub(self, rhs: MatC) -> MatC {
        assert_eq!(self.n, rhs.n, "dimension mismatch in difference");
        let mut m = self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] -= rhs.a[i][j];
            }
        }
        m
    }
}

impl Neg for MatC {
    type Output = MatC;
    fn neg(self) -> MatC {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl fmt::Debug for MatC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.n {
            l.entry(&self.row(i));
        }
        l.finish()
    }
}
