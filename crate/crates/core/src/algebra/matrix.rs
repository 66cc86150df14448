//! Dense matrices over an exact ring, Gaussian elimination over fields, and
//! the spectral kernels built on them.

use std::fmt;

use super::bipoly::BiPoly;
use super::poly::UniPoly;
use super::scalar::{Field, Rational, Ring};
use super::AlgebraError;

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
    zero: R,
}

impl<R: Ring> Matrix<R> {
    pub fn from_fn(rows: usize, cols: usize, zero: R, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data, zero }
    }

    /// Builds from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<R>>, zero: R) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::ShapeMismatch);
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect(), zero })
    }

    pub fn zeros(rows: usize, cols: usize, zero: R) -> Self {
        Matrix { rows, cols, data: vec![zero.clone(); rows * cols], zero }
    }

    pub fn identity(n: usize, zero: R) -> Self {
        let one = zero.one_like();
        Self::from_fn(n, n, zero.clone(), |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    /// Column matrix.
    pub fn column(v: Vec<R>, zero: R) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v, zero }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn zero_elem(&self) -> &R {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::vanishes)
    }

    pub fn map<S: Ring>(&self, zero: S, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), zero }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.zero.clone(), |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        Self::from_fn(self.rows, other.cols, self.zero.clone(), |i, j| {
            (0..self.cols).fold(self.zero.clone(), |acc, k| {
                let a = self.get(i, k);
                if a.vanishes() {
                    acc
                } else {
                    acc.add(&a.mul(other.get(k, j)))
                }
            })
        })
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        (0..e).fold(Self::identity(self.rows, self.zero.clone()), |acc, _| acc.mul(self))
    }

    pub fn trace(&self) -> R {
        (0..self.rows.min(self.cols)).fold(self.zero.clone(), |acc, i| acc.add(self.get(i, i)))
    }

    /// `self - c * I`
    pub fn sub_scalar(&self, c: &R) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.set(i, i, self.get(i, i).sub(c));
        }
        out
    }

    /// Matrix product `self * v` for a vector.
    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.zero.clone(), |acc, k| acc.add(&self.get(i, k).mul(&v[k])))
            })
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

impl<K: Field> Matrix<K> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).vanishes()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).vanishes() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<K>> {
        let (m, pivots) = self.rref();
        let one = self.zero.one_like();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.zero.clone(); self.cols];
                v[f] = one.clone();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(row, f).neg();
                }
                v
            })
            .collect()
    }

    /// Solves `self * X = rhs`; `None` when inconsistent. Free variables are
    /// set to zero.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "shape mismatch");
        let aug = Self::from_fn(self.rows, self.cols + rhs.cols, self.zero.clone(), |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        });
        let (m, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols, self.zero.clone());
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, m.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() || self.rank() != self.rows {
            return None;
        }
        self.solve(&Self::identity(self.rows, self.zero.clone()))
    }

    pub fn determinant(&self) -> K {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.zero.one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).vanishes()) else {
                return self.zero.clone();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.vanishes() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[R]> = (0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Characteristic polynomial `det(t I - M)` of a matrix over `Q[x]`, computed
/// by the Faddeev–LeVerrier recurrence. The coefficient of `t^(r-k)` equals
/// `(-1)^k tr(wedge^k M)`.
pub fn char_poly(m: &Matrix<UniPoly>) -> Result<BiPoly, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut coeffs = vec![UniPoly::zero(); n + 1];
    coeffs[n] = UniPoly::one();
    let identity = Matrix::identity(n, UniPoly::zero());
    let mut mk = Matrix::zeros(n, n, UniPoly::zero());
    for k in 1..=n {
        mk = m.mul(&mk).add(&identity.scale(&coeffs[n - k + 1]));
        let tr = m.mul(&mk).trace();
        coeffs[n - k] = tr.scale(&-Rational::from_integer((k as i64).into()).recip());
    }
    Ok(BiPoly::new(coeffs))
}

/// Companion matrix of a monic polynomial in `t`: the matrix of
/// multiplication by `t` on the basis `1, t, ..., t^(r-1)`.
pub fn companion_matrix(chi: &BiPoly) -> Result<Matrix<UniPoly>, AlgebraError> {
    if !chi.is_monic_in_t() {
        return Err(AlgebraError::NonMonic);
    }
    let r = chi.t_degree().unwrap_or(0);
    Ok(Matrix::from_fn(r, r, UniPoly::zero(), |i, j| {
        if j + 1 < r {
            if i == j + 1 {
                UniPoly::one()
            } else {
                UniPoly::zero()
            }
        } else {
            -&chi.coeff_t(i)
        }
    }))
}

/// Matrix of multiplication by `psi` on `Q[x][t]/(chi)` in the basis
/// `1, t, ..., t^(r-1)`; `chi` must be monic in `t`.
pub fn multiplication_matrix(psi: &BiPoly, chi: &BiPoly) -> Result<Matrix<UniPoly>, AlgebraError> {
    let r = chi.t_degree().ok_or(AlgebraError::ZeroPolynomial)?;
    let mut cols = Vec::with_capacity(r);
    let mut basis = BiPoly::one();
    for _ in 0..r {
        cols.push((psi * &basis).rem_t(chi)?);
        basis = &basis * &BiPoly::t();
    }
    Ok(Matrix::from_fn(r, r, UniPoly::zero(), |i, j| cols[j].coeff_t(i)))
}

/// Basis of `ker (M - y I)^r`; empty when `y` is not an eigenvalue.
pub fn generalized_eigenspace<K: Field>(m: &Matrix<K>, y: &K) -> Result<Vec<Vec<K>>, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let shifted = m.sub_scalar(y);
    Ok(shifted.pow(m.rows()).kernel())
}

/// `true` iff `M^r = 0`.
pub fn nilpotency_test<K: Ring>(m: &Matrix<K>) -> bool {
    m.is_square() && m.pow(m.rows()).is_zero()
}

/// Evaluates a polynomial matrix at a point of any ring receiving `Q`.
pub fn evaluate<K: Ring>(m: &Matrix<UniPoly>, x0: &K) -> Matrix<K> {
    m.map(x0.zero_like(), |p| p.eval_in(x0))
}

/// Restriction of `m` to the span of the given independent columns, written
/// in that basis. `None` if the span is not invariant.
pub fn restrict<K: Field>(m: &Matrix<K>, basis: &[Vec<K>]) -> Option<Matrix<K>> {
    let zero = m.zero_elem().clone();
    if basis.is_empty() {
        return Some(Matrix::zeros(0, 0, zero));
    }
    let b = Matrix::from_fn(m.rows(), basis.len(), zero, |i, j| basis[j][i].clone());
    b.solve(&m.mul(&b))
}
