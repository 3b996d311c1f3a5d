use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::arith::{Rational, Sign};
use crate::poly::uni::{self, RootLocation};
use crate::poly::{RationalField, UniPoly};

/// A real algebraic number: a squarefree defining polynomial over `Q` and an
/// interval isolating one of its roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    defpoly: UniPoly<Rational>,
    loc: RootLocation,
}

impl AlgebraicNumber {
    /// Checks that the location isolates exactly one root of the squarefree
    /// `defpoly`.
    pub fn new(defpoly: UniPoly<Rational>, loc: RootLocation) -> Option<Self> {
        if defpoly.squarefree().degree() != defpoly.degree() || defpoly.degree().unwrap_or(0) == 0 {
            return None;
        }
        let ok = match &loc {
            RootLocation::Exact(q) => defpoly.eval(q).is_zero(),
            RootLocation::Interval(lo, hi) => {
                lo < hi && !defpoly.eval(lo).is_zero() && !defpoly.eval(hi).is_zero() && defpoly.count_roots(lo, hi) == 1
            }
        };
        ok.then_some(AlgebraicNumber { defpoly, loc })
    }

    pub fn from_rational(q: Rational) -> Self {
        let defpoly = UniPoly::new(vec![-q.clone(), Rational::one()]);
        AlgebraicNumber { defpoly, loc: RootLocation::Exact(q) }
    }

    pub fn defpoly(&self) -> &UniPoly<Rational> {
        &self.defpoly
    }

    pub fn location(&self) -> &RootLocation {
        &self.loc
    }

    pub fn exact_rational(&self) -> Option<&Rational> {
        self.loc.exact()
    }

    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        uni::refine(&mut RationalField, self.defpoly.coeffs(), &mut self.loc);
    }

    pub fn approx(&self) -> f64 {
        self.loc.approx()
    }

    pub fn cmp(&mut self, other: &mut AlgebraicNumber) -> Ordering {
        uni::compare_roots(&mut RationalField, self.defpoly.coeffs(), &mut self.loc, other.defpoly.coeffs(), &mut other.loc)
    }

    /// Sign of `p` at this number.
    pub fn sign_of(&self, p: &UniPoly<Rational>) -> Sign {
        if let Some(q) = self.loc.exact() {
            return Sign::of(&p.eval(q));
        }
        if uni::is_common_root(&mut RationalField, self.defpoly.coeffs(), &self.loc, p.coeffs()) {
            return Sign::Zero;
        }
        let mut loc = self.loc.clone();
        loop {
            if let RootLocation::Interval(lo, hi) = &loc {
                let sp = p.squarefree();
                if sp.count_roots(lo, hi) == 0 && !p.eval(hi).is_zero() {
                    return Sign::of(&p.eval(hi));
                }
            } else if let RootLocation::Exact(q) = &loc {
                return Sign::of(&p.eval(q));
            }
            uni::refine(&mut RationalField, self.defpoly.coeffs(), &mut loc);
        }
    }
}
