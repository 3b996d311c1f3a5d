//! A tower `Q ⊂ Q(α_1) ⊂ Q(α_1, α_2) ⊂ ⋯` of real algebraic extensions.
//!
//! Level `j` adjoins one real root `α_j` of a monic squarefree polynomial
//! `m_j(y_j)` with coefficients in level `j − 1`, together with an
//! isolating interval. Elements are polynomials in `y_1, …, y_n` reduced
//! modulo the triangular set `m_1, …, m_j`.
//!
//! The defining polynomials need not be irreducible. A zero test that finds a
//! nontrivial gcd with `m_j` replaces `m_j` by whichever factor carries the
//! root, so every decision is exact for the represented point.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{int, Rational, Sign};
use crate::poly::uni::{self, RootLocation};
use crate::poly::{indexed_vars, FieldCtx, MultiPoly, UniPoly};

/// Bisections of the defining intervals tried before an exact zero test.
const ZERO_TEST_REFINEMENTS: usize = 8;
/// Cap on bisections per level between two evaluations in `separate`.
const MAX_REFINEMENT_ROUNDS: usize = 32;
/// Width, relative to the term magnitudes, above which a float enclosure
/// is limited by the generator intervals rather than by rounding.
const FLOAT_TRUST: f64 = 1e-9;

#[derive(Clone, Debug)]
struct Level {
    minpoly: Vec<MultiPoly>,
    lo: Rational,
    hi: Rational,
    sign_lo: Sign,
}

#[derive(Clone, Debug)]
pub struct Tower {
    vars: Arc<[String]>,
    levels: Vec<Level>,
}

#[derive(Clone, Debug)]
struct Iv {
    lo: Rational,
    hi: Rational,
}

impl Iv {
    fn point(q: Rational) -> Iv {
        Iv { lo: q.clone(), hi: q }
    }

    fn add(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Iv) -> Iv {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Iv { lo, hi }
    }

    fn scale(&self, q: &Rational) -> Iv {
        let a = &self.lo * q;
        let b = &self.hi * q;
        if a <= b {
            Iv { lo: a, hi: b }
        } else {
            Iv { lo: b, hi: a }
        }
    }

    fn pow(&self, k: u32) -> Iv {
        if k == 0 {
            return Iv::point(Rational::one());
        }
        let a = crate::poly::pow_rat(&self.lo, k);
        let b = crate::poly::pow_rat(&self.hi, k);
        if k % 2 == 1 || !self.lo.is_negative() {
            return Iv { lo: a, hi: b };
        }
        if !self.hi.is_positive() {
            return Iv { lo: b, hi: a };
        }
        Iv { lo: Rational::zero(), hi: a.max(b) }
    }

    fn excludes_zero(&self) -> Option<Sign> {
        if self.lo.is_positive() {
            Some(Sign::Pos)
        } else if self.hi.is_negative() {
            Some(Sign::Neg)
        } else {
            None
        }
    }
}

/// Interval with `f64` endpoints, rounded outward after every operation.
#[derive(Clone, Copy, Debug)]
struct Fiv {
    lo: f64,
    hi: f64,
}

impl Fiv {
    fn enclosing(q: &Rational) -> Fiv {
        let x = q.to_f64().unwrap_or(f64::NAN);
        Fiv { lo: x.next_down().next_down(), hi: x.next_up().next_up() }
    }

    fn add(self, o: Fiv) -> Fiv {
        Fiv { lo: (self.lo + o.lo).next_down(), hi: (self.hi + o.hi).next_up() }
    }

    fn mul(self, o: Fiv) -> Fiv {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Fiv { lo: lo.next_down(), hi: hi.next_up() }
    }

    fn excludes_zero(self) -> Option<Sign> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            None
        } else if self.lo > 0.0 {
            Some(Sign::Pos)
        } else if self.hi < 0.0 {
            Some(Sign::Neg)
        } else {
            None
        }
    }
}

fn rem_monic(e: &MultiPoly, v: usize, m: &[MultiPoly]) -> MultiPoly {
    let d = m.len() - 1;
    if (e.degree_in(v) as usize) < d {
        return e.clone();
    }
    let mut c = e.coeffs_in(v);
    for i in (d..c.len()).rev() {
        if c[i].is_zero() {
            continue;
        }
        let q = c[i].clone();
        for k in 0..d {
            c[i - d + k] = &c[i - d + k] - &(&q * &m[k]);
        }
        c[i] = MultiPoly::zero(e.vars().clone());
    }
    c.truncate(d);
    MultiPoly::from_coeffs_in(e.vars().clone(), v, &c)
}

impl Tower {
    /// An empty tower with room for `capacity` levels.
    pub fn new(capacity: usize) -> Self {
        Tower { vars: indexed_vars("y", capacity.max(1), 1), levels: Vec::new() }
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn capacity(&self) -> usize {
        self.vars.len()
    }

    pub fn constant(&self, q: Rational) -> MultiPoly {
        MultiPoly::constant(self.vars.clone(), q)
    }

    /// The generator `α_j` (1-based level).
    pub fn generator(&self, level: usize) -> MultiPoly {
        MultiPoly::var(self.vars.clone(), level - 1)
    }

    pub fn interval(&self, level: usize) -> (&Rational, &Rational) {
        let l = &self.levels[level - 1];
        (&l.lo, &l.hi)
    }

    pub fn minpoly(&self, level: usize) -> &[MultiPoly] {
        &self.levels[level - 1].minpoly
    }

    pub fn approx(&self, level: usize) -> f64 {
        use num_traits::ToPrimitive;
        let (lo, hi) = self.interval(level);
        ((lo + hi) / int(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// Context for arithmetic in level `level` (0 = rationals).
    pub fn ctx(&mut self, level: usize) -> LevelCtx<'_> {
        assert!(level <= self.depth());
        LevelCtx { tower: self, level }
    }

    pub fn top(&mut self) -> LevelCtx<'_> {
        let d = self.depth();
        self.ctx(d)
    }

    /// Adjoins the unique root in `(lo, hi)` of `minpoly`, a squarefree
    /// polynomial over the current top level whose value at `lo` and `hi` is
    /// nonzero. Returns the new level.
    pub fn push(&mut self, minpoly: Vec<MultiPoly>, lo: Rational, hi: Rational) -> usize {
        assert!(self.depth() < self.capacity(), "tower capacity exceeded");
        let top = self.depth();
        let m = uni::monic(&mut self.ctx(top), &minpoly);
        assert!(m.len() >= 2, "defining polynomial must be nonconstant");
        let sign_lo = uni::sign_at(&mut self.ctx(top), &m, &lo);
        debug_assert_ne!(sign_lo, Sign::Zero);
        self.levels.push(Level { minpoly: m, lo, hi, sign_lo });
        self.depth()
    }

    /// Remainder of `e` modulo `m_1, …, m_level`.
    pub fn reduce(&self, e: &MultiPoly, level: usize) -> MultiPoly {
        let mut e = e.clone();
        for j in (1..=level).rev() {
            e = rem_monic(&e, j - 1, &self.levels[j - 1].minpoly);
        }
        e
    }

    fn top_var_level(e: &MultiPoly, level: usize) -> usize {
        (1..=level).rev().find(|&j| e.degree_in(j - 1) > 0).unwrap_or(0)
    }

    fn interval_eval(&self, e: &MultiPoly) -> Iv {
        let mut acc = Iv::point(Rational::zero());
        for (exps, c) in e.terms() {
            let mut t = Iv::point(Rational::one());
            for (v, &k) in exps.iter().enumerate() {
                if k > 0 {
                    let l = &self.levels[v];
                    t = t.mul(&Iv { lo: l.lo.clone(), hi: l.hi.clone() }.pow(k));
                }
            }
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    /// Float enclosure of `e` and the sum of its term magnitudes.
    fn float_eval(&self, e: &MultiPoly) -> (Fiv, f64) {
        let gens: Vec<Fiv> =
            self.levels.iter().map(|l| Fiv { lo: Fiv::enclosing(&l.lo).lo, hi: Fiv::enclosing(&l.hi).hi }).collect();
        let mut acc = Fiv { lo: 0.0, hi: 0.0 };
        let mut size = 0.0;
        for (exps, c) in e.terms() {
            let mut t = Fiv::enclosing(c);
            for (v, &k) in exps.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(gens[v]);
                }
            }
            size += t.lo.abs().max(t.hi.abs());
            acc = acc.add(t);
        }
        (acc, size)
    }

    /// Sign of `e` if an interval evaluation already excludes zero. Exact
    /// rational intervals are tried only when rounding may account for the
    /// width of the float enclosure.
    fn excluded_sign(&self, e: &MultiPoly) -> Option<Sign> {
        let (f, size) = self.float_eval(e);
        if let Some(s) = f.excludes_zero() {
            return Some(s);
        }
        if size.is_finite() && f.hi - f.lo > FLOAT_TRUST * size {
            return None;
        }
        self.interval_eval(e).excludes_zero()
    }

    fn set_minpoly(&mut self, level: usize, m: Vec<MultiPoly>) {
        let lo = self.levels[level - 1].lo.clone();
        let sign_lo = uni::sign_at(&mut self.ctx(level - 1), &m, &lo);
        let l = &mut self.levels[level - 1];
        l.minpoly = m;
        l.sign_lo = sign_lo;
        for j in level + 1..=self.depth() {
            let reduced: Vec<MultiPoly> = self.levels[j - 1].minpoly.iter().map(|c| self.reduce(c, j - 1)).collect();
            self.levels[j - 1].minpoly = reduced;
        }
    }

    /// Halves the isolating interval of level `level`.
    pub fn refine(&mut self, level: usize) {
        let (lo, hi) = {
            let l = &self.levels[level - 1];
            (l.lo.clone(), l.hi.clone())
        };
        let mid = (&lo + &hi) / int(2);
        let m = self.levels[level - 1].minpoly.clone();
        let s = uni::sign_at(&mut self.ctx(level - 1), &m, &mid);
        let l = &mut self.levels[level - 1];
        if s == Sign::Zero {
            let quarter = (&hi - &lo) / int(4);
            l.lo = &mid - &quarter;
            l.hi = &mid + &quarter;
            let linear = vec![self.constant(-mid), MultiPoly::one(self.vars.clone())];
            self.set_minpoly(level, linear);
        } else if s == l.sign_lo {
            l.lo = mid;
        } else {
            l.hi = mid;
        }
    }

    /// Rational value of level `level` if its defining polynomial has become
    /// linear with a rational root.
    pub fn exact_value(&self, level: usize) -> Option<Rational> {
        let m = &self.levels[level - 1].minpoly;
        if m.len() == 2 {
            m[0].constant_value().map(|c| -c)
        } else {
            None
        }
    }

    /// Decides `e = 0` at `level`, splitting a minimal polynomial when
    /// `e` exposes a factor.
    fn is_zero_at(&mut self, e: &MultiPoly, level: usize) -> bool {
        let e = self.reduce(e, level);
        if e.is_zero() {
            return true;
        }
        if e.is_constant() {
            return false;
        }
        let j = Self::top_var_level(&e, level);
        for _ in 0..ZERO_TEST_REFINEMENTS {
            if self.excluded_sign(&e).is_some() {
                return false;
            }
            for l in 1..=j {
                self.refine(l);
            }
        }
        let coeffs = e.coeffs_in(j - 1);
        let m = self.levels[j - 1].minpoly.clone();
        let g = uni::gcd(&mut self.ctx(j - 1), &m, &coeffs);
        if g.len() <= 1 {
            return false;
        }
        self.split(j, g)
    }

    /// Replaces the minimal polynomial of level `j` by the proper factor `g`
    /// or its cofactor, whichever vanishes at `α_j`. True if `g` does.
    fn split(&mut self, j: usize, g: Vec<MultiPoly>) -> bool {
        let m = self.levels[j - 1].minpoly.clone();
        let (lo, hi) = {
            let l = &self.levels[j - 1];
            (l.lo.clone(), l.hi.clone())
        };
        let sl = uni::sign_at(&mut self.ctx(j - 1), &g, &lo);
        let sh = uni::sign_at(&mut self.ctx(j - 1), &g, &hi);
        if sl != sh {
            self.set_minpoly(j, g);
            true
        } else {
            let q = uni::div_rem(&mut self.ctx(j - 1), &m, &g).0;
            let q = uni::monic(&mut self.ctx(j - 1), &q);
            self.set_minpoly(j, q);
            false
        }
    }

    /// Interval of a nonzero element refined until it excludes zero.
    fn separate(&mut self, e: &MultiPoly, level: usize) -> (Sign, Iv) {
        let e = self.reduce(e, level);
        let j = Self::top_var_level(&e, level);
        let mut rounds = 1;
        loop {
            let iv = self.interval_eval(&e);
            if let Some(s) = iv.excludes_zero() {
                return (s, iv);
            }
            for _ in 0..rounds {
                for l in 1..=j {
                    self.refine(l);
                }
            }
            rounds = (rounds * 2).min(MAX_REFINEMENT_ROUNDS);
        }
    }

    fn sign_at_level(&mut self, e: &MultiPoly, level: usize) -> Sign {
        if let Some(c) = e.constant_value() {
            return Sign::of(&c);
        }
        let r = self.reduce(e, level);
        if let Some(s) = self.excluded_sign(&r) {
            return s;
        }
        if self.is_zero_at(e, level) {
            return Sign::Zero;
        }
        let j = Self::top_var_level(&r, level);
        let mut rounds = 1;
        loop {
            for _ in 0..rounds {
                for l in 1..=j {
                    self.refine(l);
                }
            }
            if let Some(s) = self.excluded_sign(&r) {
                return s;
            }
            rounds = (rounds * 2).min(MAX_REFINEMENT_ROUNDS);
        }
    }

    fn inv_at(&mut self, e: &MultiPoly, level: usize) -> MultiPoly {
        loop {
            let e = self.reduce(e, level);
            if let Some(c) = e.constant_value() {
                assert!(!c.is_zero(), "inverse of zero");
                return self.constant(c.recip());
            }
            let j = Self::top_var_level(&e, level);
            let coeffs = e.coeffs_in(j - 1);
            let m = self.levels[j - 1].minpoly.clone();
            let (g, s) = uni::gcd_cofactor(&mut self.ctx(j - 1), &coeffs, &m);
            if g.len() == 1 {
                let s = MultiPoly::from_coeffs_in(self.vars.clone(), j - 1, &s);
                return self.reduce(&s, j);
            }
            assert!(!self.split(j, g), "inverse of zero");
        }
    }

    /// A squarefree polynomial over `Q` with `α_level` as a root,
    /// together with an isolating interval for it.
    pub fn rational_defpoly(&mut self, level: usize) -> (UniPoly<Rational>, RootLocation) {
        let v = level - 1;
        let mut p = MultiPoly::from_coeffs_in(self.vars.clone(), v, &self.levels[v].minpoly);
        for j in (1..level).rev() {
            let mj = MultiPoly::from_coeffs_in(self.vars.clone(), j - 1, &self.levels[j - 1].minpoly);
            p = crate::poly::resultant(&mj, &p, j - 1).expect("same variables");
        }
        let coeffs: Vec<Rational> =
            p.coeffs_in(v).iter().map(|c| c.constant_value().expect("univariate norm")).collect();
        let q = UniPoly::new(coeffs).squarefree();
        if let Some(x) = self.exact_value(level) {
            return (q, RootLocation::Exact(x));
        }
        loop {
            let (lo, hi) = {
                let (a, b) = self.interval(level);
                (a.clone(), b.clone())
            };
            if !q.eval(&lo).is_zero() && !q.eval(&hi).is_zero() && q.count_roots(&lo, &hi) == 1 {
                return (q, RootLocation::Interval(lo, hi));
            }
            self.refine(level);
            if let Some(x) = self.exact_value(level) {
                return (q, RootLocation::Exact(x));
            }
        }
    }

    /// Compares `α_level` with a rational.
    pub fn cmp_rational(&mut self, level: usize, q: &Rational) -> Ordering {
        let d = &self.generator(level) - &self.constant(q.clone());
        match self.sign_at_level(&d, level) {
            Sign::Neg => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Pos => Ordering::Greater,
        }
    }
}

/// Field operations at one level of a [`Tower`].
pub struct LevelCtx<'a> {
    tower: &'a mut Tower,
    level: usize,
}

impl LevelCtx<'_> {
    pub fn level(&self) -> usize {
        self.level
    }
}

impl FieldCtx for LevelCtx<'_> {
    type Elem = MultiPoly;

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.tower.vars.clone())
    }
    fn one(&self) -> MultiPoly {
        MultiPoly::one(self.tower.vars.clone())
    }
    fn from_rational(&self, q: &Rational) -> MultiPoly {
        self.tower.constant(q.clone())
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a + b
    }
    fn sub(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a - b
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        if a.is_constant() || b.is_constant() {
            return a * b;
        }
        self.tower.reduce(&(a * b), self.level)
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        -a
    }
    fn is_syntactic_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }
    fn is_zero(&mut self, a: &MultiPoly) -> bool {
        self.tower.is_zero_at(a, self.level)
    }
    fn sign(&mut self, a: &MultiPoly) -> Sign {
        self.tower.sign_at_level(a, self.level)
    }
    fn inv(&mut self, a: &MultiPoly) -> MultiPoly {
        self.tower.inv_at(a, self.level)
    }
    fn magnitude_bounds(&mut self, a: &MultiPoly) -> (Rational, Rational) {
        if let Some(c) = a.constant_value() {
            return (c.abs(), c.abs());
        }
        let (_, iv) = self.tower.separate(a, self.level);
        let (x, y) = (iv.lo.abs(), iv.hi.abs());
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }
    fn magnitude_upper(&mut self, a: &MultiPoly) -> Rational {
        if self.is_zero(a) {
            return Rational::zero();
        }
        self.magnitude_bounds(a).1
    }
    fn content(&self, a: &MultiPoly) -> Option<Rational> {
        a.content()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn sqrt2_tower() -> Tower {
        let mut t = Tower::new(3);
        let m = vec![t.constant(int(-2)), t.constant(int(0)), t.constant(int(1))];
        t.push(m, int(1), int(2));
        t
    }

    #[test]
    fn signs_in_quadratic_extension() {
        let mut t = sqrt2_tower();
        let a = t.generator(1);
        let mut c = t.ctx(1);
        let sq = c.mul(&a, &a);
        assert_eq!(sq, c.from_rational(&int(2)));
        let d = c.sub(&a, &c.from_rational(&rat(1414, 1000)));
        assert_eq!(c.sign(&d), Sign::Pos);
        let d = c.sub(&a, &c.from_rational(&rat(1415, 1000)));
        assert_eq!(c.sign(&d), Sign::Neg);
        let inv = c.inv(&a);
        assert_eq!(c.mul(&inv, &a), c.one());
    }

    #[test]
    fn reducible_defining_polynomial_splits() {
        // (y^2 - 2)(y - 3) with the root sqrt(2) isolated in (1, 2).
        let mut t = Tower::new(2);
        let m: Vec<MultiPoly> = [6, -2, -3, 1].iter().map(|&c| t.constant(int(c))).collect();
        t.push(m, int(1), int(2));
        let a = t.generator(1);
        let mut c = t.ctx(1);
        let e = c.sub(&c.mul(&a, &a), &c.from_rational(&int(2)));
        assert!(c.is_zero(&e));
        assert_eq!(t.minpoly(1).len(), 3);
        let e3 = &t.generator(1) - &t.constant(int(3));
        assert!(!t.ctx(1).is_zero(&e3));
    }

    #[test]
    fn second_level_over_sqrt2() {
        // y2^2 - y1 with y1 = sqrt 2, root 2^(1/4) in (1, 2).
        let mut t = sqrt2_tower();
        let y1 = t.generator(1);
        let m = vec![-&y1, t.constant(int(0)), t.constant(int(1))];
        t.push(m, int(1), int(2));
        let y2 = t.generator(2);
        let mut c = t.ctx(2);
        let y2_4 = c.mul(&c.mul(&y2, &y2), &c.mul(&y2, &y2));
        assert!(c.is_zero(&c.sub(&y2_4, &c.from_rational(&int(2)))));
        let diff = c.sub(&c.mul(&y2, &y2), &y1);
        assert_eq!(c.sign(&diff), Sign::Zero);
        let d = c.sub(&y2, &c.from_rational(&rat(1189, 1000)));
        assert_eq!(c.sign(&d), Sign::Pos);
        let (q, loc) = t.rational_defpoly(2);
        assert_eq!(q, UniPoly::from_ints(&[-2, 0, 0, 0, 1]));
        assert!(q.count_roots(loc.lo(), loc.hi()) == 1);
    }

    #[test]
    fn refinement_detects_rational_root() {
        // (y - 3/2)(y + 5), root 3/2 isolated in (1, 2).
        let mut t = Tower::new(1);
        let m = vec![t.constant(rat(-15, 2)), t.constant(rat(7, 2)), t.constant(int(1))];
        t.push(m, int(1), int(2));
        t.refine(1);
        assert_eq!(t.exact_value(1), Some(rat(3, 2)));
        assert_eq!(t.cmp_rational(1, &rat(3, 2)), Ordering::Equal);
    }
}
