//! Exact scalars: arbitrary-precision rationals and the ordered field
//! `Q(ε)` with `ε` a positive infinitesimal.
//!
//! Elements of `Q(ε)` are stored as reduced quotients of polynomials in `ε`.
//! Their sign is the sign of the lowest-order nonzero coefficient of the
//! numerator once the denominator has been normalized to have lowest-order
//! coefficient `1`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in canonical form (`gcd(num, den) = 1`, `den > 0`).
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Shorthand for the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sign of an element of an ordered field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(q: &Rational) -> Sign {
        if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn from_i8(v: i8) -> Sign {
        match v.cmp(&0) {
            Ordering::Less => Sign::Neg,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Pos,
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn negate(self) -> Sign {
        Sign::from_i8(-self.to_i8())
    }

    pub fn mul(self, other: Sign) -> Sign {
        Sign::from_i8(self.to_i8() * other.to_i8())
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Pos),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Minimal ring interface shared by numeric and symbolic matrix entries.
///
/// `div_int` must only be called when the division is exact in the ring,
/// which is always the case over a field of characteristic zero.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn div_int(&self, d: i64) -> Self;
    fn from_rational_like(&self, q: &Rational) -> Self;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn div_int(&self, d: i64) -> Self {
        self / int(d)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
}

/// Polynomial in `ε` with rational coefficients; `coeffs[i]` multiplies `ε^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsPoly {
    coeffs: Vec<Rational>,
}

impl EpsPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        EpsPoly { coeffs }
    }

    pub fn zero() -> Self {
        EpsPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        EpsPoly::new(vec![c])
    }

    /// The infinitesimal `ε` itself.
    pub fn eps() -> Self {
        EpsPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index and value of the lowest-order nonzero coefficient.
    pub fn lowest_term(&self) -> Option<(usize, &Rational)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        EpsPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> EpsPoly {
        EpsPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &EpsPoly) -> EpsPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &EpsPoly) -> EpsPoly {
        if self.is_zero() || other.is_zero() {
            return EpsPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EpsPoly::new(out)
    }

    pub fn scale(&self, q: &Rational) -> EpsPoly {
        EpsPoly::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn eval(&self, e: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * e + c)
    }

    fn div_rem(&self, d: &EpsPoly) -> (EpsPoly, EpsPoly) {
        let dd = d.coeffs.len() - 1;
        let lc = &d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (EpsPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = &rem[i] / lc;
            if q.is_zero() {
                continue;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &q * c;
            }
            quot[i - dd] = q;
        }
        (EpsPoly::new(quot), EpsPoly::new(rem))
    }

    fn gcd(a: &EpsPoly, b: &EpsPoly) -> EpsPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }
}

/// Element of `Q(ε)`: a reduced fraction of polynomials in `ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsRational {
    num: EpsPoly,
    den: EpsPoly,
}

impl EpsRational {
    /// Builds `num / den` in canonical form.
    pub fn new(num: EpsPoly, den: EpsPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(EpsRational::zero());
        }
        let g = EpsPoly::gcd(&num, &den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.lowest_term().expect("nonzero denominator").1.clone();
        let inv = Rational::one() / lead;
        num = num.scale(&inv);
        den = den.scale(&inv);
        Ok(EpsRational { num, den })
    }

    pub fn from_poly(p: EpsPoly) -> Self {
        EpsRational::new(p, EpsPoly::constant(Rational::one())).expect("unit denominator")
    }

    pub fn from_rational(q: Rational) -> Self {
        EpsRational::from_poly(EpsPoly::constant(q))
    }

    pub fn zero() -> Self {
        EpsRational { num: EpsPoly::zero(), den: EpsPoly::constant(Rational::one()) }
    }

    pub fn one() -> Self {
        EpsRational::from_rational(Rational::one())
    }

    pub fn eps() -> Self {
        EpsRational::from_poly(EpsPoly::eps())
    }

    pub fn numer(&self) -> &EpsPoly {
        &self.num
    }

    pub fn denom(&self) -> &EpsPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &EpsRational) -> EpsRational {
        EpsRational::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
            .expect("nonzero product of denominators")
    }

    pub fn sub(&self, o: &EpsRational) -> EpsRational {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> EpsRational {
        EpsRational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &EpsRational) -> EpsRational {
        EpsRational::new(self.num.mul(&o.num), self.den.mul(&o.den))
            .expect("nonzero product of denominators")
    }

    pub fn inv(&self) -> Result<EpsRational, ArithError> {
        EpsRational::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &EpsRational) -> Result<EpsRational, ArithError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Sign under the order making `ε` positive and smaller than every
    /// positive rational.
    pub fn sign(&self) -> Sign {
        match self.num.lowest_term() {
            None => Sign::Zero,
            Some((_, c)) => Sign::of(c),
        }
    }

    /// Exact value at `ε = e0`.
    pub fn substitute(&self, e0: &Rational) -> Result<Rational, ArithError> {
        let d = self.den.eval(e0);
        if d.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self.num.eval(e0) / d)
    }

    /// A rational `e* > 0` such that substituting any `0 < e < e*` yields a
    /// value with the same sign as `self`. `None` for zero.
    pub fn sign_threshold(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        Some(poly_sign_threshold(&self.num).min(poly_sign_threshold(&self.den)))
    }
}

/// For `p = ε^m (a_m + a_{m+1} ε + …)`, any `0 < e < min(1, |a_m| / Σ_{i>m} |a_i|)`
/// keeps the sign of `a_m`.
fn poly_sign_threshold(p: &EpsPoly) -> Rational {
    let (m, lead) = p.lowest_term().expect("nonzero polynomial");
    let tail: Rational = p.coeffs()[m + 1..].iter().map(|c| c.abs()).sum();
    if tail.is_zero() {
        Rational::one()
    } else {
        (lead.abs() / tail).min(Rational::one())
    }
}

impl PartialOrd for EpsRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EpsRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sub(other).sign() {
            Sign::Neg => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Pos => Ordering::Greater,
        }
    }
}

/// Sign of `x` under the infinitesimal order.
pub fn eps_sign(x: &EpsRational) -> Sign {
    x.sign()
}

/// Value of `x` at the concrete rational `ε = e0`.
pub fn eps_substitute(x: &EpsRational, e0: &Rational) -> Result<Rational, ArithError> {
    x.substitute(e0)
}

impl Scalar for EpsRational {
    fn zero_like(&self) -> Self {
        EpsRational::zero()
    }
    fn one_like(&self) -> Self {
        EpsRational::one()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn div_int(&self, d: i64) -> Self {
        self.mul(&EpsRational::from_rational(rat(1, d)))
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        EpsRational::from_rational(q.clone())
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*eps")?,
                _ => write!(f, "{c}*eps^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(c: &[i64]) -> EpsPoly {
        EpsPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn sign_of_eps_and_small_offsets() {
        assert_eq!(eps_sign(&EpsRational::eps()), Sign::Pos);
        let x = EpsRational::eps().sub(&EpsRational::from_rational(rat(1, 1000)));
        assert_eq!(eps_sign(&x), Sign::Neg);
    }

    #[test]
    fn sign_of_rational_function() {
        // (2ε² − ε)/(1 + ε)
        let x = EpsRational::new(ep(&[0, -1, 2]), ep(&[1, 1])).unwrap();
        assert_eq!(eps_sign(&x), Sign::Neg);
        for e in [rat(1, 1_000_000), rat(1, 1_000_000_000)] {
            assert!(eps_substitute(&x, &e).unwrap() < Rational::zero());
        }
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(eps_substitute(&EpsRational::eps(), &rat(1, 4)).unwrap(), rat(1, 4));
        let x = EpsRational::new(ep(&[1, -1]), ep(&[1, 1])).unwrap();
        assert_eq!(eps_substitute(&x, &rat(1, 3)).unwrap(), rat(1, 2));
        let y = EpsRational::from_poly(ep(&[0, -1, 2]));
        assert_eq!(eps_substitute(&y, &rat(1, 2)).unwrap(), Rational::zero());
    }

    #[test]
    fn substitution_division_by_zero() {
        // 1 / (1 − 2ε) at ε = 1/2
        let x = EpsRational::new(ep(&[1]), ep(&[1, -2])).unwrap();
        assert_eq!(eps_substitute(&x, &rat(1, 2)), Err(ArithError::DivisionByZero));
        assert_eq!(EpsRational::new(ep(&[1]), EpsPoly::zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn canonical_form_is_unique() {
        // (ε² − ε) / (2ε) == (ε − 1) / 2
        let a = EpsRational::new(ep(&[0, -1, 1]), ep(&[0, 2])).unwrap();
        let b = EpsRational::new(ep(&[-1, 1]), ep(&[2])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.denom().coeffs(), &[int(1)]);
    }

    #[test]
    fn eps_is_below_every_positive_rational() {
        for q in [rat(1, 1), rat(1, 1 << 20), rat(3, 7)] {
            assert!(EpsRational::eps() < EpsRational::from_rational(q));
            assert!(EpsRational::eps() > EpsRational::zero());
        }
    }

    #[test]
    fn threshold_guarantees_sign() {
        let x = EpsRational::new(ep(&[0, 0, 3, -40, 7]), ep(&[1, 5])).unwrap();
        let t = x.sign_threshold().unwrap();
        for frac in [rat(1, 2), rat(1, 4)] {
            let v = eps_substitute(&x, &(&t * frac)).unwrap();
            assert_eq!(Sign::of(&v), x.sign());
        }
    }
}
