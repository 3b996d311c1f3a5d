use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::PolyError;
use crate::arith::{Rational, Scalar};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms are kept in lexicographic order of exponent vectors, so the last
/// term is the lex-leading one with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, Rational>,
}

pub fn var_names(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect()
}

/// `prefix1, …, prefixN`.
pub fn indexed_vars(prefix: &str, n: usize, start: usize) -> Arc<[String]> {
    (start..start + n).map(|i| format!("{prefix}{i}")).collect()
}

impl MultiPoly {
    pub fn zero(vars: Arc<[String]>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<[String]>, c: Rational) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            let n = p.nvars();
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(vars: Arc<[String]>) -> Self {
        MultiPoly::constant(vars, Rational::one())
    }

    /// The variable with index `i`.
    pub fn var(vars: Arc<[String]>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        MultiPoly::monomial(vars, e, Rational::one())
    }

    pub fn monomial(vars: Arc<[String]>, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(vars: Arc<[String]>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MultiPoly::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    /// Lex-leading term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn same_vars(&self, other: &MultiPoly) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    fn check_vars(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.same_vars(other) {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Highest-index variable occurring in the polynomial.
    pub fn main_var(&self) -> Option<usize> {
        (0..self.nvars()).rev().find(|&v| self.degree_in(v) > 0)
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_vars(other)?;
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> MultiPoly {
        if q.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.vars.clone());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Value at a full rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= pow_rat(x, k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes a rational value for variable `v` (the variable stays in
    /// the variable list with degree zero).
    pub fn substitute_value(&self, v: usize, q: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v];
            e2[v] = 0;
            out.add_term(e2, c * pow_rat(q, k));
        }
        out
    }

    /// Substitutes the polynomial `p` (same variable list) for variable `v`.
    pub fn substitute(&self, v: usize, p: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_vars(p)?;
        let coeffs = self.coeffs_in(v);
        let mut acc = MultiPoly::zero(self.vars.clone());
        for c in coeffs.iter().rev() {
            acc = &(&acc * p) + c;
        }
        Ok(acc)
    }

    /// Coefficients with respect to `v`: `self = Σ coeffs[i] · v^i`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(self.vars.clone()); if self.is_zero() { 0 } else { d + 1 }];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: Arc<[String]>, v: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, q) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += k as u32;
                out.add_term(e2, q.clone());
            }
        }
        out
    }

    pub fn derivative(&self, v: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                out.add_term(e2, c * Rational::from_integer(BigInt::from(e[v])));
            }
        }
        out
    }

    /// Exact quotient `self / d`; fails when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_vars(d)?;
        let (de, dc) = d.leading_term().ok_or(PolyError::DivisionByZero)?;
        let (de, dc) = (de.clone(), dc.clone());
        if let Some(c) = d.constant_value() {
            return Ok(self.scale(&(Rational::one() / c)));
        }
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.vars.clone());
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return Err(PolyError::NotDivisible);
            }
            let qe: Monomial = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let qc = rc / &dc;
            let t = MultiPoly::monomial(self.vars.clone(), qe.clone(), qc.clone());
            rem = &rem - &(&t * d);
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }

    /// Prepends a variable `X0` and returns `X0² · p(X1/X0, …, Xk/X0)`.
    pub fn homogenize_deg2(&self, new_var: &str) -> Result<MultiPoly, PolyError> {
        let d = self.total_degree().unwrap_or(0);
        if d > 2 {
            return Err(PolyError::DegreeTooHigh { degree: d, max: 2 });
        }
        let vars: Arc<[String]> =
            std::iter::once(new_var.to_string()).chain(self.vars.iter().cloned()).collect();
        let terms = self.terms.iter().map(|(e, c)| {
            let deg: u32 = e.iter().sum();
            let mut e2 = Vec::with_capacity(e.len() + 1);
            e2.push(2 - deg);
            e2.extend_from_slice(e);
            (e2, c.clone())
        });
        Ok(MultiPoly::from_terms(vars, terms))
    }

    /// Drops variable `v` from the list after setting it to `q`.
    pub fn eliminate_var(&self, v: usize, q: &Rational) -> MultiPoly {
        let vars: Arc<[String]> =
            self.vars.iter().enumerate().filter(|(i, _)| *i != v).map(|(_, s)| s.clone()).collect();
        let sub = self.substitute_value(v, q);
        MultiPoly::from_terms(
            vars,
            sub.terms.into_iter().map(|(mut e, c)| {
                e.remove(v);
                (e, c)
            }),
        )
    }

    /// Re-expresses the polynomial over a new variable list via
    /// `map[i] = index in the new list of old variable i`.
    pub fn remap_vars(&self, vars: Arc<[String]>, map: &[usize]) -> MultiPoly {
        let n = vars.len();
        MultiPoly::from_terms(
            vars,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = vec![0; n];
                for (i, &k) in e.iter().enumerate() {
                    e2[map[i]] += k;
                }
                (e2, c.clone())
            }),
        )
    }

    /// Integer coefficients with unit content; sign chosen so the lex-leading
    /// coefficient is positive. Zero stays zero.
    pub fn primitive(&self) -> MultiPoly {
        let Some(c) = self.content() else {
            return self.clone();
        };
        let lead_neg = self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let s = if lead_neg { -Rational::one() / c } else { Rational::one() / c };
        self.scale(&s)
    }

    /// Like [`MultiPoly::primitive`] but only ever scales by a positive
    /// factor, so the sign of every value is preserved.
    pub fn positive_primitive(&self) -> MultiPoly {
        match self.content() {
            Some(c) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }

    /// Positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn content(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Some(Rational::new(num, den))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut m: Option<Monomial> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars()])
    }

    /// Divides out a monomial that divides every term.
    pub fn div_monomial(&self, m: &[u32]) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }
}

pub fn pow_rat(x: &Rational, k: u32) -> Rational {
    num_traits::pow(x.clone(), k as usize)
}

impl<'a> std::ops::Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("variable lists agree")
    }
}

impl<'a> std::ops::Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("variable lists agree")
    }
}

impl<'a> std::ops::Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("variable lists agree")
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

impl Scalar for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.vars.clone())
    }
    fn one_like(&self) -> Self {
        MultiPoly::one(self.vars.clone())
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
        MultiPoly::neg(self)
    }
    fn div_int(&self, d: i64) -> Self {
        self.scale(&crate::arith::rat(1, d))
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        MultiPoly::constant(self.vars.clone(), q.clone())
    }
}

fn fmt_monomial(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], k) })
        .collect();
    parts.join("*")
}

/// Canonical text form, parseable by [`super::parse_poly`]: terms by
/// descending total degree, then descending lex order.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono = fmt_monomial(&self.vars, e);
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars.join(","), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::poly::parse_poly;

    fn z(s: &str) -> MultiPoly {
        parse_poly(s, &var_names(&["Z1", "Z2"])).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&z("Z1 + Z2") * &z("Z1 - Z2"), z("Z1^2 - Z2^2"));
    }

    #[test]
    fn evaluates_cone_constant_coefficient() {
        let c0 = &z("Z1 + Z2").pow(2) * &z("Z2 - Z1");
        assert_eq!(c0.eval(&[int(-1), int(0)]).unwrap(), int(1));
    }

    #[test]
    fn substitute_t_zero_in_pencil_polynomial() {
        let vars = var_names(&["Z1", "Z2", "T"]);
        let f = parse_poly("T^3 + Z1*T^2 - Z2*T^2 - Z1^2*T - 2*Z1*Z2*T - Z2^2*T - Z1^3 - Z1^2*Z2 + Z1*Z2^2 + Z2^3", &vars)
            .unwrap();
        let c0 = parse_poly("(Z1 + Z2)", &vars);
        assert!(c0.is_err(), "parentheses are not part of the grammar");
        let s = MultiPoly::var(vars.clone(), 0);
        let t = MultiPoly::var(vars.clone(), 1);
        let expect = &(&s + &t).pow(2) * &(&t - &s);
        assert_eq!(f.substitute_value(2, &int(0)), expect);
    }

    #[test]
    fn variable_mismatch_is_reported() {
        let a = z("Z1");
        let b = parse_poly("X1", &var_names(&["X1"])).unwrap();
        assert!(matches!(a.try_add(&b), Err(PolyError::VariableMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(PolyError::VariableMismatch { .. })));
    }

    #[test]
    fn homogenization_examples() {
        let v = var_names(&["X1", "X2"]);
        let p = parse_poly("X1^2 + X2^2 - 1", &v).unwrap().homogenize_deg2("X0").unwrap();
        let hv = var_names(&["X0", "X1", "X2"]);
        assert_eq!(p, parse_poly("X1^2 + X2^2 - X0^2", &hv).unwrap());
        let q = parse_poly("X1 - 2", &var_names(&["X1"])).unwrap().homogenize_deg2("X0").unwrap();
        assert_eq!(q, parse_poly("X0*X1 - 2*X0^2", &var_names(&["X0", "X1"])).unwrap());
        assert_eq!(q.eliminate_var(0, &int(1)), parse_poly("X1 - 2", &var_names(&["X1"])).unwrap());
        let cubic = parse_poly("X1^3 - 1", &var_names(&["X1"])).unwrap();
        assert!(matches!(cubic.homogenize_deg2("X0"), Err(PolyError::DegreeTooHigh { .. })));
    }

    #[test]
    fn exact_division() {
        let a = z("Z1^2 - Z2^2");
        assert_eq!(a.exact_div(&z("Z1 - Z2")).unwrap(), z("Z1 + Z2"));
        assert_eq!(a.exact_div(&z("Z1 + 1")), Err(PolyError::NotDivisible));
    }

    #[test]
    fn primitive_normalization() {
        let p = z("-2/3*Z1 + 4/9*Z2");
        assert_eq!(p.primitive(), z("3*Z1 - 2*Z2"));
        assert_eq!(p.positive_primitive(), z("-3*Z1 + 2*Z2"));
        assert_eq!(z("6").primitive(), z("1"));
    }

    #[test]
    fn display_round_trips() {
        let p = z("-2/3*Z1*Z2 + Z1^2 - 5 + Z2");
        assert_eq!(p.to_string(), "Z1^2 - 2/3*Z1*Z2 + Z2 - 5");
        assert_eq!(z(&p.to_string()), p);
        assert_eq!(rat(1, 2).to_string(), "1/2");
    }
}
