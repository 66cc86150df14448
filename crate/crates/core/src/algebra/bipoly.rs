//! Polynomials in `x` and `t`, stored as polynomials in `t` with
//! coefficients in `Q[x]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::Zero;

use super::poly::{join_terms, power, UniPoly};
use super::scalar::{Rational, Ring};
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    /// `coeffs[k]` is the coefficient of `t^k`.
    coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    pub fn zero() -> Self {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_x(UniPoly::one())
    }

    /// Polynomial in `x` alone.
    pub fn from_x(p: UniPoly) -> Self {
        Self::new(vec![p])
    }

    /// Reads a univariate polynomial as a polynomial in `t`.
    pub fn from_t(p: &UniPoly) -> Self {
        Self::new(p.coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect())
    }

    pub fn t() -> Self {
        Self::new(vec![UniPoly::zero(), UniPoly::one()])
    }

    pub fn x() -> Self {
        Self::from_x(UniPoly::var())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_x(UniPoly::constant(c))
    }

    /// `p(x) * t^k`
    pub fn monomial_t(p: UniPoly, k: usize) -> Self {
        let mut coeffs = vec![UniPoly::zero(); k + 1];
        coeffs[k] = p;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn coeff_t(&self, k: usize) -> UniPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Largest `x`-degree among the coefficients (`None` for zero).
    pub fn x_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(UniPoly::degree).max()
    }

    pub fn is_monic_in_t(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == UniPoly::one())
    }

    /// `Some(p)` if the polynomial does not involve `t`.
    pub fn as_x_poly(&self) -> Option<UniPoly> {
        match self.coeffs.len() {
            0 => Some(UniPoly::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// `Some(c)` if the polynomial is a rational constant.
    pub fn as_constant(&self) -> Option<Rational> {
        let p = self.as_x_poly()?;
        if p.is_constant() {
            Some(p.coeff(0))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_x_poly(&self, p: &UniPoly) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * p).collect())
    }

    pub fn derivative_t(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rational::from_integer((k as i64).into())))
                .collect(),
        )
    }

    /// Specializes `x = x0`, giving a polynomial in `t`.
    pub fn eval_x(&self, x0: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.eval(x0)).collect())
    }

    /// Substitutes `t = p(x)`.
    pub fn eval_t(&self, p: &UniPoly) -> UniPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, c| &(&acc * p) + c)
    }

    /// Evaluates at `(x0, y)` inside a ring receiving the rationals.
    pub fn eval_point<K: Ring>(&self, x0: &Rational, y: &K) -> K {
        self.coeffs
            .iter()
            .rev()
            .fold(y.zero_like(), |acc, c| acc.mul(y).add(&y.embed(&c.eval(x0))))
    }

    /// Substitutes `x -> x + shift` in every coefficient.
    pub fn shift_x(&self, shift: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.shift(shift)).collect())
    }

    /// Regroups by powers of `x`: entry `i` is the coefficient of `x^i`,
    /// a polynomial in `t`.
    pub fn by_x_powers(&self) -> Vec<UniPoly> {
        let n = self.x_degree().map_or(0, |d| d + 1);
        (0..n)
            .map(|i| UniPoly::new(self.coeffs.iter().map(|c| c.coeff(i)).collect()))
            .collect()
    }

    /// Inverse of [`BiPoly::by_x_powers`].
    pub fn from_x_powers(parts: &[UniPoly]) -> Self {
        let n = parts.iter().filter_map(UniPoly::degree).max().map_or(0, |d| d + 1);
        Self::new(
            (0..n)
                .map(|k| UniPoly::new(parts.iter().map(|p| p.coeff(k)).collect()))
                .collect(),
        )
    }

    /// Division in `t` by a divisor whose leading `t`-coefficient is a nonzero
    /// rational constant.
    pub fn div_rem_t(&self, divisor: &BiPoly) -> Result<(BiPoly, BiPoly), AlgebraError> {
        let dd = divisor.t_degree().ok_or(AlgebraError::DivisionByZero)?;
        let lc = divisor.coeffs[dd].clone();
        if !lc.is_constant() {
            return Err(AlgebraError::NonMonic);
        }
        let lc_inv = lc.coeff(0).recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((BiPoly::zero(), self.clone()));
        }
        let mut quot = vec![UniPoly::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].scale(&lc_inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((BiPoly::new(quot), BiPoly::new(rem)))
    }

    pub fn rem_t(&self, divisor: &BiPoly) -> Result<BiPoly, AlgebraError> {
        Ok(self.div_rem_t(divisor)?.1)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Renders in the polynomial grammar: terms ordered by descending
    /// `t`-degree, then descending `x`-degree.
    pub fn display(&self) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            for (i, a) in c.coeffs().iter().enumerate().rev() {
                if a.is_zero() {
                    continue;
                }
                let mono = match (power("x", i), power("t", k)) {
                    (xs, ts) if xs.is_empty() => ts,
                    (xs, ts) if ts.is_empty() => xs,
                    (xs, ts) => format!("{xs}*{ts}"),
                };
                terms.push((a.clone(), mono));
            }
        }
        join_terms(&terms)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::new((0..n).map(|k| &self.coeff_t(k) + &rhs.coeff_t(k)).collect())
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::new((0..n).map(|k| &self.coeff_t(k) - &rhs.coeff_t(k)).collect())
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![UniPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::new(out)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Ring for BiPoly {
    fn zero_like(&self) -> Self {
        BiPoly::zero()
    }
    fn one_like(&self) -> Self {
        BiPoly::one()
    }
    fn vanishes(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn embed(&self, q: &Rational) -> Self {
        BiPoly::constant(q.clone())
    }
}

impl From<UniPoly> for BiPoly {
    fn from(p: UniPoly) -> Self {
        BiPoly::from_x(p)
    }
}
