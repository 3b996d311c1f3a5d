use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{Rational, Sign};

/// Arithmetic in an ordered field whose elements may need work to compare
/// with zero (for example numbers represented in a tower of real algebraic
/// extensions).
///
/// Ring operations are syntactic. `is_zero`, `sign` and `inv` decide exact
/// facts about the represented real value and may update internal state of
/// the context, hence `&mut self`.
pub trait FieldCtx {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Cheap structural test; `true` implies the value is zero.
    fn is_syntactic_zero(&self, a: &Self::Elem) -> bool;

    fn is_zero(&mut self, a: &Self::Elem) -> bool;
    fn sign(&mut self, a: &Self::Elem) -> Sign;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&mut self, a: &Self::Elem) -> Self::Elem;
    /// For a nonzero element, rationals `0 < lo ≤ |a| ≤ hi`.
    fn magnitude_bounds(&mut self, a: &Self::Elem) -> (Rational, Rational);
    /// A rational `hi ≥ |a|`, for any element.
    fn magnitude_upper(&mut self, a: &Self::Elem) -> Rational {
        self.magnitude_bounds(a).1
    }
    /// Positive rational `c` such that `a / c` has coprime integer
    /// coefficients, when the representation has such a notion.
    fn content(&self, _a: &Self::Elem) -> Option<Rational> {
        None
    }
}

/// The rationals themselves.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalField;

impl FieldCtx for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn is_syntactic_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_zero(&mut self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn sign(&mut self, a: &Rational) -> Sign {
        Sign::of(a)
    }
    fn inv(&mut self, a: &Rational) -> Rational {
        a.recip()
    }
    fn magnitude_bounds(&mut self, a: &Rational) -> (Rational, Rational) {
        (a.abs(), a.abs())
    }
    fn content(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.abs())
    }
}
