//! The rational function field `Q(x)`.

use std::fmt;

use super::poly::UniPoly;
use super::scalar::{Field, Rational, Ring};

/// `numerator / denominator` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numerator: UniPoly,
    denominator: UniPoly,
}

impl RationalFunction {
    /// Panics if `den` is zero.
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_poly(UniPoly::zero());
        }
        let g = num.gcd(&den);
        let mut n = num.exact_div(&g).expect("gcd divides");
        let mut d = den.exact_div(&g).expect("gcd divides");
        let lc = d.leading().recip();
        n = n.scale(&lc);
        d = d.scale(&lc);
        RationalFunction { numerator: n, denominator: d }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RationalFunction { numerator: p, denominator: UniPoly::one() }
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.denominator
    }

    pub fn as_poly(&self) -> Option<&UniPoly> {
        (self.denominator == UniPoly::one()).then_some(&self.numerator)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == UniPoly::one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({})/({})", self.numerator, self.denominator)
        }
    }
}

impl Ring for RationalFunction {
    fn zero_like(&self) -> Self {
        Self::from_poly(UniPoly::zero())
    }
    fn one_like(&self) -> Self {
        Self::from_poly(UniPoly::one())
    }
    fn vanishes(&self) -> bool {
        self.numerator.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.denominator == other.denominator {
            return Self::new(&self.numerator + &other.numerator, self.denominator.clone());
        }
        Self::new(
            &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator),
            &self.denominator * &other.denominator,
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        Self::new(&self.numerator * &other.numerator, &self.denominator * &other.denominator)
    }
    fn neg(&self) -> Self {
        RationalFunction { numerator: -&self.numerator, denominator: self.denominator.clone() }
    }
    fn embed(&self, q: &Rational) -> Self {
        Self::from_poly(UniPoly::constant(q.clone()))
    }
}

impl Field for RationalFunction {
    fn inv(&self) -> Option<Self> {
        if self.numerator.is_zero() {
            None
        } else {
            Some(Self::new(self.denominator.clone(), self.numerator.clone()))
        }
    }
}

impl From<UniPoly> for RationalFunction {
    fn from(p: UniPoly) -> Self {
        Self::from_poly(p)
    }
}
