//! Resultants as Sylvester-matrix determinants.

use num::traits::Zero;

use super::bipoly::BiPoly;
use super::poly::UniPoly;
use super::scalar::Rational;

/// Sylvester matrix of two coefficient lists given in ascending order.
fn sylvester<T: Clone>(p: &[T], q: &[T], zero: T) -> Vec<Vec<T>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in p.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in q.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Fraction-free (Bareiss) determinant over `Q[x]`.
pub fn bareiss_determinant(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = !sign;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}

/// Resultant of two univariate polynomials (zero if either vanishes).
pub fn resultant(p: &UniPoly, q: &UniPoly) -> Rational {
    if p.is_zero() || q.is_zero() {
        return Rational::zero();
    }
    let rows = sylvester(p.coeffs(), q.coeffs(), Rational::zero());
    let as_polys = rows
        .into_iter()
        .map(|r| r.into_iter().map(UniPoly::constant).collect())
        .collect();
    bareiss_determinant(as_polys).coeff(0)
}

/// Resultant with respect to `t`, a polynomial in `x`.
pub fn resultant_t(p: &BiPoly, q: &BiPoly) -> UniPoly {
    if p.is_zero() || q.is_zero() {
        return UniPoly::zero();
    }
    bareiss_determinant(sylvester(p.coeffs(), q.coeffs(), UniPoly::zero()))
}

/// `Res_t(chi, d chi / dt)`; vanishes identically iff `chi` has a repeated
/// factor over `Q(x)`.
pub fn discriminant_t(chi: &BiPoly) -> UniPoly {
    resultant_t(chi, &chi.derivative_t())
}
