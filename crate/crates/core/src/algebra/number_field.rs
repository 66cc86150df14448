//! Simple algebraic extensions `Q[t]/(m(t))` of the rationals.

use std::fmt;
use std::sync::Arc;

use num::traits::{One, Zero};

use super::factor::factor_rationals;
use super::poly::UniPoly;
use super::scalar::{Field, Rational, Ring};
use super::AlgebraError;

/// Field presented by a monic irreducible minimal polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    minimal_polynomial: UniPoly,
}

impl NumberField {
    /// Checks that `m` is monic and irreducible over the rationals.
    pub fn new(m: UniPoly) -> Result<Arc<Self>, AlgebraError> {
        if !m.is_monic() || m.degree() == Some(0) {
            return Err(AlgebraError::NonMonic);
        }
        let f = factor_rationals(&m)?;
        if f.factors.len() != 1 || f.factors[0].1 != 1 {
            return Err(AlgebraError::NotIrreducible);
        }
        Ok(Arc::new(NumberField { minimal_polynomial: m }))
    }

    /// For minimal polynomials produced by the factorization routines.
    pub(crate) fn from_irreducible(m: UniPoly) -> Arc<Self> {
        debug_assert!(m.is_monic());
        Arc::new(NumberField { minimal_polynomial: m })
    }

    /// The rationals themselves, presented as `Q[t]/(t)`.
    pub fn rationals() -> Arc<Self> {
        Self::from_irreducible(UniPoly::var())
    }

    pub fn minimal_polynomial(&self) -> &UniPoly {
        &self.minimal_polynomial
    }

    pub fn degree(&self) -> usize {
        self.minimal_polynomial.degree().unwrap_or(0)
    }

    /// The class of `t`, a root of the minimal polynomial.
    pub fn generator(self: &Arc<Self>) -> NumberFieldElement {
        NumberFieldElement::new(self.clone(), UniPoly::var())
    }

    pub fn element(self: &Arc<Self>, q: Rational) -> NumberFieldElement {
        NumberFieldElement::new(self.clone(), UniPoly::constant(q))
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[t]/({})", self.minimal_polynomial.display_in("t"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberFieldElement {
    field: Arc<NumberField>,
    /// Reduced modulo the minimal polynomial.
    representative: UniPoly,
}

impl NumberFieldElement {
    pub fn new(field: Arc<NumberField>, p: UniPoly) -> Self {
        let representative = p.rem(&field.minimal_polynomial).expect("nonzero modulus");
        NumberFieldElement { field, representative }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn representative(&self) -> &UniPoly {
        &self.representative
    }

    /// `Some(q)` when the element lies in the prime field.
    pub fn as_rational(&self) -> Option<Rational> {
        self.representative.is_constant().then(|| self.representative.coeff(0))
    }

    /// Matrix of multiplication by `self` on the power basis.
    fn multiplication_columns(&self) -> Vec<UniPoly> {
        let n = self.field.degree();
        (0..n)
            .map(|j| {
                (&self.representative * &UniPoly::monomial(Rational::one(), j))
                    .rem(&self.field.minimal_polynomial)
                    .expect("nonzero modulus")
            })
            .collect()
    }

    /// Field trace down to the rationals.
    pub fn trace(&self) -> Rational {
        self.multiplication_columns()
            .iter()
            .enumerate()
            .map(|(j, col)| col.coeff(j))
            .fold(Rational::zero(), |a, b| a + b)
    }

    fn with(&self, p: UniPoly) -> Self {
        NumberFieldElement::new(self.field.clone(), p)
    }
}

impl fmt::Debug for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] in {:?}", self.representative.display_in("t"), self.field)
    }
}

impl fmt::Display for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.representative.display_in("t"))
    }
}

impl Ring for NumberFieldElement {
    fn zero_like(&self) -> Self {
        self.with(UniPoly::zero())
    }
    fn one_like(&self) -> Self {
        self.with(UniPoly::one())
    }
    fn vanishes(&self) -> bool {
        self.representative.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        NumberFieldElement {
            field: self.field.clone(),
            representative: &self.representative + &other.representative,
        }
    }
    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        NumberFieldElement {
            field: self.field.clone(),
            representative: &self.representative - &other.representative,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        self.with(&self.representative * &other.representative)
    }
    fn neg(&self) -> Self {
        NumberFieldElement { field: self.field.clone(), representative: -&self.representative }
    }
    fn embed(&self, q: &Rational) -> Self {
        self.with(UniPoly::constant(q.clone()))
    }
}

impl Field for NumberFieldElement {
    fn inv(&self) -> Option<Self> {
        if self.representative.is_zero() {
            return None;
        }
        let (g, s, _) = self.representative.ext_gcd(&self.field.minimal_polynomial);
        // g = 1 because the modulus is irreducible
        debug_assert_eq!(g, UniPoly::one());
        Some(self.with(s))
    }
}
