//! Dense univariate polynomials and the real-root machinery built on them:
//! Euclidean remainders, Sturm chains, squarefree parts and bisection-based
//! root isolation. Everything is generic over a [`FieldCtx`] so the same
//! code runs over `Q` and over towers of real algebraic extensions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{FieldCtx, RationalField};
use crate::arith::{int, rat, Rational, Sign};

/// Coefficients from the constant term upward.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T> UniPoly<T> {
    /// Wraps a coefficient vector verbatim (no trimming).
    pub fn from_raw(coeffs: Vec<T>) -> Self {
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the stored representation; `None` for the empty polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }
}

impl UniPoly<Rational> {
    /// Trims trailing zeros so the leading coefficient is nonzero.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    /// `∏ (x − r)`.
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut p = vec![Rational::one()];
        for r in roots {
            p = mul(&RationalField, &p, &[-r.clone(), Rational::one()]);
        }
        UniPoly::new(p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        eval_rat(&RationalField, &self.coeffs, x)
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(derivative(&RationalField, &self.coeffs))
    }

    pub fn add(&self, o: &Self) -> Self {
        UniPoly::new(add(&RationalField, &self.coeffs, &o.coeffs))
    }

    pub fn mul(&self, o: &Self) -> Self {
        UniPoly::new(mul(&RationalField, &self.coeffs, &o.coeffs))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let (q, r) = div_rem(&mut RationalField, &self.coeffs, &d.coeffs);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        UniPoly::new(gcd(&mut RationalField, &self.coeffs, &o.coeffs))
    }

    pub fn squarefree(&self) -> Self {
        UniPoly::new(squarefree(&mut RationalField, &self.coeffs))
    }

    pub fn sturm_chain(&self, q: &Self) -> Vec<Self> {
        sturm_chain(&mut RationalField, &self.coeffs, &q.coeffs).into_iter().map(UniPoly::new).collect()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        let chain = sturm_chain(&mut RationalField, &self.coeffs, &derivative(&RationalField, &self.coeffs));
        count_roots(&mut RationalField, &chain, a, b)
    }

    /// Isolating intervals for the distinct real roots, in increasing order.
    pub fn isolate_real_roots(&self) -> Vec<RootLocation> {
        let sf = self.squarefree();
        isolate(&mut RationalField, &sf.coeffs)
    }
}

impl fmt::Display for UniPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = super::var_names(&["x"]);
        let mp = super::MultiPoly::from_terms(
            vars,
            self.coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())),
        );
        write!(f, "{mp}")
    }
}

impl<T: fmt::Debug> fmt::Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

/// Location of an isolated real root: either an exact rational or an open
/// interval with rational endpoints (that are not roots) containing
/// exactly one root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLocation {
    Exact(Rational),
    Interval(Rational, Rational),
}

impl RootLocation {
    pub fn lo(&self) -> &Rational {
        match self {
            RootLocation::Exact(q) => q,
            RootLocation::Interval(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            RootLocation::Exact(q) => q,
            RootLocation::Interval(_, hi) => hi,
        }
    }

    pub fn width(&self) -> Rational {
        self.hi() - self.lo()
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            RootLocation::Exact(q) => Some(q),
            RootLocation::Interval(..) => None,
        }
    }

    /// Midpoint approximation.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((self.lo() + self.hi()) / int(2)).to_f64().unwrap_or(f64::NAN)
    }
}

// ---- generic coefficient-vector algorithms -------------------------------

/// Removes leading coefficients whose value is zero.
pub fn trim<C: FieldCtx>(ctx: &mut C, p: &mut Vec<C::Elem>) {
    while let Some(c) = p.last() {
        if ctx.is_zero(c) {
            p.pop();
        } else {
            break;
        }
    }
}

/// Removes leading coefficients that are structurally zero.
pub fn trim_syntactic<C: FieldCtx>(ctx: &C, p: &mut Vec<C::Elem>) {
    while p.last().is_some_and(|c| ctx.is_syntactic_zero(c)) {
        p.pop();
    }
}

pub fn add<C: FieldCtx>(ctx: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let n = a.len().max(b.len());
    let mut out: Vec<C::Elem> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => ctx.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim_syntactic(ctx, &mut out);
    out
}

pub fn sub<C: FieldCtx>(ctx: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let nb: Vec<C::Elem> = b.iter().map(|c| ctx.neg(c)).collect();
    add(ctx, a, &nb)
}

pub fn mul<C: FieldCtx>(ctx: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ctx.is_syntactic_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = ctx.mul(x, y);
            out[i + j] = ctx.add(&out[i + j], &t);
        }
    }
    trim_syntactic(ctx, &mut out);
    out
}

pub fn scale<C: FieldCtx>(ctx: &C, a: &[C::Elem], s: &C::Elem) -> Vec<C::Elem> {
    let mut out: Vec<C::Elem> = a.iter().map(|c| ctx.mul(c, s)).collect();
    trim_syntactic(ctx, &mut out);
    out
}

pub fn eval<C: FieldCtx>(ctx: &C, p: &[C::Elem], x: &C::Elem) -> C::Elem {
    p.iter().rev().fold(ctx.zero(), |acc, c| ctx.add(&ctx.mul(&acc, x), c))
}

pub fn eval_rat<C: FieldCtx>(ctx: &C, p: &[C::Elem], x: &Rational) -> C::Elem {
    eval(ctx, p, &ctx.from_rational(x))
}

pub fn derivative<C: FieldCtx>(ctx: &C, p: &[C::Elem]) -> Vec<C::Elem> {
    let mut out: Vec<C::Elem> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ctx.mul(c, &ctx.from_rational(&Rational::from_integer(BigInt::from(i)))))
        .collect();
    trim_syntactic(ctx, &mut out);
    out
}

/// Euclidean division. `b` must have a nonzero leading coefficient; the
/// remainder is returned trimmed.
pub fn div_rem<C: FieldCtx>(ctx: &mut C, a: &[C::Elem], b: &[C::Elem]) -> (Vec<C::Elem>, Vec<C::Elem>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let mut rem: Vec<C::Elem> = a.to_vec();
    trim(ctx, &mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let inv_lc = ctx.inv(&b[db]);
    let mut quot = vec![ctx.zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if ctx.is_syntactic_zero(&rem[i]) {
            continue;
        }
        let q = ctx.mul(&rem[i], &inv_lc);
        for (j, c) in b.iter().enumerate().take(db) {
            let t = ctx.mul(&q, c);
            rem[i - db + j] = ctx.sub(&rem[i - db + j], &t);
        }
        rem[i] = ctx.zero();
        quot[i - db] = q;
    }
    rem.truncate(db);
    trim(ctx, &mut rem);
    trim_syntactic(ctx, &mut quot);
    (quot, rem)
}

pub fn monic<C: FieldCtx>(ctx: &mut C, p: &[C::Elem]) -> Vec<C::Elem> {
    let mut p = p.to_vec();
    trim(ctx, &mut p);
    match p.last() {
        None => p,
        Some(lc) => {
            let inv = ctx.inv(lc);
            let n = p.len();
            let mut out: Vec<C::Elem> = p[..n - 1].iter().map(|c| ctx.mul(c, &inv)).collect();
            out.push(ctx.one());
            out
        }
    }
}

/// Divides by the positive rational content of all coefficients.
fn remove_content<C: FieldCtx>(ctx: &C, p: &mut [C::Elem]) {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in p.iter() {
        if ctx.is_syntactic_zero(c) {
            continue;
        }
        let Some(q) = ctx.content(c) else {
            return;
        };
        num = num.gcd(q.numer());
        den = den.lcm(q.denom());
    }
    if num.is_zero() || (num.is_one() && den.is_one()) {
        return;
    }
    let s = ctx.from_rational(&Rational::new(den, num));
    for c in p.iter_mut() {
        *c = ctx.mul(c, &s);
    }
}

/// A positive multiple of `rem(a, b)` computed without inverses, with its
/// rational content removed.
pub fn scaled_rem<C: FieldCtx>(ctx: &mut C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let mut rem: Vec<C::Elem> = a.to_vec();
    trim(ctx, &mut rem);
    if rem.len() <= db {
        return rem;
    }
    let lc = b[db].clone();
    let mut steps = 0;
    for i in (db..rem.len()).rev() {
        if ctx.is_syntactic_zero(&rem[i]) {
            continue;
        }
        let t = rem[i].clone();
        for c in rem[..i].iter_mut() {
            *c = ctx.mul(c, &lc);
        }
        for (j, c) in b.iter().enumerate().take(db) {
            let u = ctx.mul(&t, c);
            rem[i - db + j] = ctx.sub(&rem[i - db + j], &u);
        }
        rem[i] = ctx.zero();
        steps += 1;
    }
    rem.truncate(db);
    trim(ctx, &mut rem);
    if rem.is_empty() {
        return rem;
    }
    if steps % 2 == 1 && ctx.sign(&lc) == Sign::Neg {
        rem = rem.iter().map(|c| ctx.neg(c)).collect();
    }
    remove_content(ctx, &mut rem);
    rem
}

/// A greatest common divisor, not normalized.
pub fn gcd_unnormalized<C: FieldCtx>(ctx: &mut C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(ctx, &mut a);
    trim(ctx, &mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = scaled_rem(ctx, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Monic greatest common divisor.
pub fn gcd<C: FieldCtx>(ctx: &mut C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let g = gcd_unnormalized(ctx, a, b);
    monic(ctx, &g)
}

/// Returns `(g, s)` with `g = gcd(a, b)` monic and `s·a ≡ g (mod b)`.
pub fn gcd_cofactor<C: FieldCtx>(ctx: &mut C, a: &[C::Elem], b: &[C::Elem]) -> (Vec<C::Elem>, Vec<C::Elem>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(ctx, &mut r0);
    trim(ctx, &mut r1);
    let mut s0 = vec![ctx.one()];
    let mut s1: Vec<C::Elem> = Vec::new();
    while !r1.is_empty() {
        let (q, r) = div_rem(ctx, &r0, &r1);
        let s = sub(ctx, &s0, &mul(ctx, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    let Some(lc) = r0.last() else {
        return (r0, s0);
    };
    let inv = ctx.inv(lc);
    (scale(ctx, &r0, &inv), scale(ctx, &s0, &inv))
}

/// `q` with `c·a = q·b` for some nonzero `c`, when `b` divides `a`.
fn pseudo_quotient<C: FieldCtx>(ctx: &mut C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let db = b.len() - 1;
    let mut rem: Vec<C::Elem> = a.to_vec();
    if rem.len() <= db {
        return Vec::new();
    }
    let lc = b[db].clone();
    let mut quot = vec![ctx.zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if ctx.is_syntactic_zero(&rem[i]) {
            continue;
        }
        let t = rem[i].clone();
        for c in rem[..i].iter_mut().chain(quot[i - db + 1..].iter_mut()) {
            *c = ctx.mul(c, &lc);
        }
        for (j, c) in b.iter().enumerate().take(db) {
            let u = ctx.mul(&t, c);
            rem[i - db + j] = ctx.sub(&rem[i - db + j], &u);
        }
        rem[i] = ctx.zero();
        quot[i - db] = t;
    }
    trim_syntactic(ctx, &mut quot);
    remove_content(ctx, &mut quot);
    quot
}

/// A nonzero multiple of `p / gcd(p, p')`, computed without inverses.
pub fn squarefree_unnormalized<C: FieldCtx>(ctx: &mut C, p: &[C::Elem]) -> Vec<C::Elem> {
    let mut p = p.to_vec();
    trim(ctx, &mut p);
    if p.len() > 2 {
        let d = derivative(ctx, &p);
        let g = gcd_unnormalized(ctx, &p, &d);
        if g.len() > 1 {
            return pseudo_quotient(ctx, &p, &g);
        }
    }
    remove_content(ctx, &mut p);
    p
}

/// `p / gcd(p, p')`, made monic.
pub fn squarefree<C: FieldCtx>(ctx: &mut C, p: &[C::Elem]) -> Vec<C::Elem> {
    let q = squarefree_unnormalized(ctx, p);
    monic(ctx, &q)
}

/// Signed remainder sequence `p, q, −rem(p, q), …`, each remainder up to a
/// positive factor, ending at the last nonzero remainder.
pub fn sturm_chain<C: FieldCtx>(ctx: &mut C, p: &[C::Elem], q: &[C::Elem]) -> Vec<Vec<C::Elem>> {
    let mut a = p.to_vec();
    let mut b = q.to_vec();
    trim(ctx, &mut a);
    trim(ctx, &mut b);
    let mut chain = vec![a.clone()];
    while !b.is_empty() {
        chain.push(b.clone());
        let r = scaled_rem(ctx, &a, &b);
        a = b;
        b = r.iter().map(|c| ctx.neg(c)).collect();
    }
    chain
}

/// Number of sign changes after deleting zeros.
pub fn sign_variations(signs: &[Sign]) -> usize {
    let mut last: Option<Sign> = None;
    let mut count = 0;
    for &s in signs {
        if s == Sign::Zero {
            continue;
        }
        if let Some(l) = last {
            if l != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

fn chain_variations<C: FieldCtx>(ctx: &mut C, chain: &[Vec<C::Elem>], x: &Rational) -> usize {
    let signs: Vec<Sign> = chain
        .iter()
        .map(|p| {
            let v = eval_rat(ctx, p, x);
            ctx.sign(&v)
        })
        .collect();
    sign_variations(&signs)
}

/// Sturm count of distinct roots in `(a, b]` for a chain built from `(p, p')`.
pub fn count_roots<C: FieldCtx>(ctx: &mut C, chain: &[Vec<C::Elem>], a: &Rational, b: &Rational) -> usize {
    let va = chain_variations(ctx, chain, a);
    let vb = chain_variations(ctx, chain, b);
    va.saturating_sub(vb)
}

/// A power of two strictly larger than the absolute value of every root.
pub fn root_bound<C: FieldCtx>(ctx: &mut C, p: &[C::Elem]) -> Rational {
    let n = p.len() - 1;
    let (lc_lo, _) = ctx.magnitude_bounds(&p[n]);
    let mut m = Rational::zero();
    for c in &p[..n] {
        if ctx.is_syntactic_zero(c) {
            continue;
        }
        let r = ctx.magnitude_upper(c) / &lc_lo;
        if r > m {
            m = r;
        }
    }
    let target = m + Rational::one();
    let mut b = Rational::one();
    while b <= target {
        b *= int(2);
    }
    b
}

pub fn sign_at<C: FieldCtx>(ctx: &mut C, p: &[C::Elem], x: &Rational) -> Sign {
    let v = eval_rat(ctx, p, x);
    ctx.sign(&v)
}

/// Isolates the real roots of a squarefree polynomial with nonzero leading
/// coefficient. Results are sorted and pairwise disjoint.
pub fn isolate<C: FieldCtx>(ctx: &mut C, p: &[C::Elem]) -> Vec<RootLocation> {
    let mut p = p.to_vec();
    trim(ctx, &mut p);
    if p.len() <= 1 {
        return Vec::new();
    }
    let chain = sturm_chain(ctx, &p, &derivative(ctx, &p));
    let b = root_bound(ctx, &p);
    let lo = -b.clone();
    let vlo = chain_variations(ctx, &chain, &lo);
    let vhi = chain_variations(ctx, &chain, &b);
    let mut out = Vec::new();
    let mut stack = vec![(lo, vlo, b, vhi)];
    while let Some((a, va, c, vc)) = stack.pop() {
        let count = va.saturating_sub(vc);
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(RootLocation::Interval(a, c));
            continue;
        }
        let m = (&a + &c) / int(2);
        if sign_at(ctx, &p, &m) == Sign::Zero {
            out.push(RootLocation::Exact(m.clone()));
            let mut delta = (&c - &a) / int(4);
            loop {
                let l = &m - &delta;
                let r = &m + &delta;
                if sign_at(ctx, &p, &l) != Sign::Zero && sign_at(ctx, &p, &r) != Sign::Zero {
                    let vl = chain_variations(ctx, &chain, &l);
                    let vr = chain_variations(ctx, &chain, &r);
                    if vl.saturating_sub(vr) == 1 {
                        stack.push((a.clone(), va, l, vl));
                        stack.push((r, vr, c.clone(), vc));
                        break;
                    }
                }
                delta /= int(2);
            }
        } else {
            let vm = chain_variations(ctx, &chain, &m);
            stack.push((a, va, m.clone(), vm));
            stack.push((m, vm, c, vc));
        }
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    out
}

/// Halves an isolating interval of a root of the squarefree `p`. An exact
/// hit turns the location into [`RootLocation::Exact`].
pub fn refine<C: FieldCtx>(ctx: &mut C, p: &[C::Elem], loc: &mut RootLocation) {
    let RootLocation::Interval(lo, hi) = loc else {
        return;
    };
    let m = (&*lo + &*hi) / int(2);
    let sm = sign_at(ctx, p, &m);
    if sm == Sign::Zero {
        *loc = RootLocation::Exact(m);
        return;
    }
    let slo = sign_at(ctx, p, lo);
    if slo == sm {
        *lo = m;
    } else {
        *hi = m;
    }
}

/// Refines until the width is at most `w`.
pub fn refine_to<C: FieldCtx>(ctx: &mut C, p: &[C::Elem], loc: &mut RootLocation, w: &Rational) {
    while loc.width() > *w {
        refine(ctx, p, loc);
    }
}

/// Decides whether the root at `loc` (of squarefree `p`) is also a root of
/// `q`, using the gcd of the two polynomials.
pub fn is_common_root<C: FieldCtx>(ctx: &mut C, p: &[C::Elem], loc: &RootLocation, q: &[C::Elem]) -> bool {
    match loc {
        RootLocation::Exact(x) => sign_at(ctx, q, x) == Sign::Zero,
        RootLocation::Interval(lo, hi) => {
            let g = gcd_unnormalized(ctx, p, q);
            if g.len() <= 1 {
                return false;
            }
            let a = sign_at(ctx, &g, lo);
            let b = sign_at(ctx, &g, hi);
            a != b
        }
    }
}

/// Bisections tried on overlapping intervals before testing for a common root.
const CHEAP_REFINEMENTS: usize = 12;

/// Compares two roots given by squarefree defining polynomials and
/// isolating locations, refining as needed.
pub fn compare_roots<C: FieldCtx>(
    ctx: &mut C,
    p: &[C::Elem],
    a: &mut RootLocation,
    q: &[C::Elem],
    b: &mut RootLocation,
) -> Ordering {
    let mut checked_common = false;
    let mut attempts = 0;
    loop {
        match (a.exact().cloned(), b.exact().cloned()) {
            (Some(x), Some(y)) => return x.cmp(&y),
            (Some(x), None) => return cmp_exact_with(ctx, &x, q, b),
            (None, Some(y)) => return cmp_exact_with(ctx, &y, p, a).reverse(),
            (None, None) => {}
        }
        if a.hi() <= b.lo() {
            return Ordering::Less;
        }
        if b.hi() <= a.lo() {
            return Ordering::Greater;
        }
        if !checked_common && attempts < CHEAP_REFINEMENTS {
            attempts += 1;
        } else if !checked_common {
            checked_common = true;
            if is_common_root(ctx, p, a, q) {
                // `a` is some root of `q`; shrink it until it sits inside `b`'s
                // interval (then it is `b`) or leaves it.
                loop {
                    match (a.exact().cloned(), b.exact().cloned()) {
                        (Some(x), _) => return cmp_exact_with(ctx, &x, q, b),
                        (None, Some(y)) => return cmp_exact_with(ctx, &y, p, a).reverse(),
                        (None, None) => {}
                    }
                    if a.lo() >= b.lo() && a.hi() <= b.hi() {
                        return Ordering::Equal;
                    }
                    if a.hi() <= b.lo() {
                        return Ordering::Less;
                    }
                    if a.lo() >= b.hi() {
                        return Ordering::Greater;
                    }
                    refine(ctx, p, a);
                }
            }
        }
        // Distinct roots: refine the wider one.
        if a.width() >= b.width() {
            refine(ctx, p, a);
        } else {
            refine(ctx, q, b);
        }
    }
}

/// Orders the rational `x` against the root of squarefree `q` at `b`.
fn cmp_exact_with<C: FieldCtx>(ctx: &mut C, x: &Rational, q: &[C::Elem], b: &mut RootLocation) -> Ordering {
    loop {
        let (lo, hi) = match &*b {
            RootLocation::Exact(y) => return x.cmp(y),
            RootLocation::Interval(lo, hi) => (lo, hi),
        };
        if x <= lo {
            return Ordering::Less;
        }
        if x >= hi {
            return Ordering::Greater;
        }
        if sign_at(ctx, q, x) == Sign::Zero {
            return Ordering::Equal;
        }
        refine(ctx, q, b);
    }
}

/// Simplest rational strictly between `a < b` (smallest denominator, then
/// smallest absolute numerator).
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    debug_assert!(a < b);
    if a.is_negative() && b.is_positive() {
        return Rational::zero();
    }
    if !a.is_negative() {
        simplest_in_open(a, b)
    } else {
        -simplest_in_open(&-b, &-a)
    }
}

/// Stern–Brocot descent for `0 ≤ a < b`.
fn simplest_in_open(a: &Rational, b: &Rational) -> Rational {
    let fl = a.floor();
    // An integer strictly inside.
    let cand = &fl + Rational::one();
    if cand < *b {
        return cand;
    }
    // a and b share the integer part n: recurse on reciprocals of the
    // fractional parts.
    let fa = a - &fl;
    let fb = b - &fl;
    if fa.is_zero() {
        // (n, n + fb): 1/(fb) < x' where x = n + 1/x'
        let inner = simplest_above(&fb.recip());
        return fl + inner.recip();
    }
    let inner = simplest_in_open(&fb.recip(), &fa.recip());
    fl + inner.recip()
}

/// Simplest rational strictly greater than `a > 0` (an integer).
fn simplest_above(a: &Rational) -> Rational {
    a.floor() + Rational::one()
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) * rat(1, 2)
}
