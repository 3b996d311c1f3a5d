use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::project::{cad_project, normalize};
use super::tower::Tower;
use super::{Cad, CadCell, CadOptions, Coordinate, SignSet};
use crate::arith::{Rational, Sign};
use crate::error::{Error, Result};
use crate::poly::uni::{self, simplest_between, RootLocation};
use crate::poly::{FieldCtx, MultiPoly, RationalField};

/// Rewrites `f` as a tower element by substituting the sample coordinates
/// for the first variables. Variables beyond the sample must not occur.
fn embed(f: &MultiPoly, sample: &[Coordinate], tower: &Tower) -> MultiPoly {
    let cap = tower.capacity();
    let terms = f.terms().map(|(e, c)| {
        let mut exps = vec![0u32; cap];
        let mut coeff = c.clone();
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            match &sample[i] {
                Coordinate::Rational(q) => coeff *= crate::poly::pow_rat(q, k),
                Coordinate::Algebraic(l) => exps[l - 1] += k,
            }
        }
        (exps, coeff)
    });
    MultiPoly::from_terms(tower.vars().clone(), terms)
}

pub(crate) fn sign_at_sample(f: &MultiPoly, sample: &[Coordinate], tower: &mut Tower) -> Sign {
    let e = embed(f, sample, tower);
    let top = tower.depth();
    let e = tower.reduce(&e, top);
    tower.top().sign(&e)
}

/// Coefficients of `f` in variable `v` over the sample point, trimmed.
fn fiber_poly(f: &MultiPoly, v: usize, sample: &[Coordinate], tower: &mut Tower) -> Vec<MultiPoly> {
    let top = tower.depth();
    let mut c: Vec<MultiPoly> = f.coeffs_in(v).iter().map(|c| tower.reduce(&embed(c, sample, tower), top)).collect();
    uni::trim(&mut tower.top(), &mut c);
    c
}

struct Root {
    poly: Vec<MultiPoly>,
    loc: RootLocation,
    /// Indices of the source polynomials vanishing here.
    sources: Vec<usize>,
}

fn merge(tower: &mut Tower, a: Vec<Root>, b: Vec<Root>) -> Vec<Root> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        let ord = match (ia.peek_mut(), ib.peek_mut()) {
            (Some(x), Some(y)) => uni::compare_roots(&mut tower.top(), &x.poly, &mut x.loc, &y.poly, &mut y.loc),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => break,
        };
        match ord {
            Ordering::Less => out.push(ia.next().expect("peeked")),
            Ordering::Greater => out.push(ib.next().expect("peeked")),
            Ordering::Equal => {
                let x = ia.next().expect("peeked");
                let y = ib.next().expect("peeked");
                let prefer_y = y.loc.exact().is_some() || (x.loc.exact().is_none() && y.poly.len() < x.poly.len());
                let (mut keep, other) = if prefer_y { (y, x) } else { (x, y) };
                keep.sources.extend(other.sources);
                out.push(keep);
            }
        }
    }
    out
}

/// Sorted distinct real roots over the sample point of the polynomials in
/// `polys` that do not vanish identically there.
fn fiber_roots(polys: &[MultiPoly], v: usize, sample: &[Coordinate], tower: &mut Tower) -> Vec<Root> {
    let mut roots: Vec<Root> = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        let c = fiber_poly(f, v, sample, tower);
        if c.len() <= 1 {
            continue;
        }
        let sq = uni::squarefree(&mut tower.top(), &c);
        let locs = uni::isolate(&mut tower.top(), &sq);
        let rs: Vec<Root> = locs.into_iter().map(|loc| Root { poly: sq.clone(), loc, sources: vec![i] }).collect();
        roots = merge(tower, roots, rs);
    }
    // Separate neighbours so rational sector samples fit between them.
    for i in 1..roots.len() {
        let (left, right) = roots.split_at_mut(i);
        let (a, b) = (&mut left[i - 1], &mut right[0]);
        while a.loc.hi() >= b.loc.lo() {
            if a.loc.exact().is_none() && (b.loc.exact().is_some() || a.loc.width() >= b.loc.width()) {
                uni::refine(&mut tower.top(), &a.poly, &mut a.loc);
            } else {
                uni::refine(&mut tower.top(), &b.poly, &mut b.loc);
            }
        }
    }
    roots
}

#[derive(Clone)]
struct Partial {
    indices: Vec<usize>,
    dim: usize,
    sample: Vec<Coordinate>,
    signs: Vec<Sign>,
    tower: Arc<Tower>,
}

struct Plan<'a> {
    inputs: &'a [MultiPoly],
    /// Inputs whose main variable is `v`, by `v`.
    by_level: Vec<Vec<usize>>,
    /// For each input, positions in its level's projection family of its
    /// normalized factors with that main variable.
    factors: Vec<Vec<usize>>,
    projection: &'a [Vec<MultiPoly>],
    allowed: Option<&'a [SignSet]>,
}

impl Plan<'_> {
    fn admits(&self, i: usize, s: Sign) -> bool {
        self.allowed.is_none_or(|a| a[i].contains(s))
    }

    /// Exact signs at `sample` of the inputs with main variable `v`.
    fn level_signs(&self, v: usize, sample: &[Coordinate], tower: &mut Tower) -> Vec<Sign> {
        self.by_level[v].iter().map(|&i| sign_at_sample(&self.inputs[i], sample, tower)).collect()
    }

    /// Stores `signs` into `cell`; `false` if the cell violates the filter.
    fn apply(&self, v: usize, cell: &mut Partial, signs: &[Sign]) -> bool {
        for (&i, &s) in self.by_level[v].iter().zip(signs) {
            if !self.admits(i, s) {
                return false;
            }
            cell.signs[i] = s;
        }
        true
    }

    /// Signs at a section from those on the sector below it. Every root of
    /// an input is a root of the lifted family, so an input not vanishing at
    /// the section keeps the sign it has on both neighbouring sectors.
    fn section_signs(&self, v: usize, below: &[Sign], root: &Root) -> Vec<Sign> {
        self.by_level[v]
            .iter()
            .zip(below)
            .map(|(&i, &s)| {
                if s == Sign::Zero || self.factors[i].iter().any(|f| root.sources.contains(f)) {
                    Sign::Zero
                } else {
                    s
                }
            })
            .collect()
    }

    fn lift(&self, parent: &Partial, v: usize) -> Vec<Partial> {
        let mut tower = (*parent.tower).clone();
        let mut sources: &[MultiPoly] = &self.projection[v];
        let mut sections_only = false;
        let eq_factors: Vec<MultiPoly>;
        if let Some(allowed) = self.allowed {
            for &i in &self.by_level[v] {
                if allowed[i].is_zero_only() && fiber_poly(&self.inputs[i], v, &parent.sample, &mut tower).len() > 1 {
                    eq_factors = normalize(&self.inputs[i]).into_iter().filter(|g| g.main_var() == Some(v)).collect();
                    sources = &eq_factors;
                    sections_only = true;
                    break;
                }
            }
        }
        let roots = fiber_roots(sources, v, &parent.sample, &mut tower);

        let child = |idx: usize, coord: Coordinate, sector: bool| {
            let mut sample = parent.sample.clone();
            sample.push(coord);
            let mut indices = parent.indices.clone();
            indices.push(idx);
            Partial {
                indices,
                dim: parent.dim + usize::from(sector),
                sample,
                signs: parent.signs.clone(),
                tower: parent.tower.clone(),
            }
        };

        let mut out: Vec<Partial> = Vec::with_capacity(2 * roots.len() + 1);
        // Algebraic sections get their own tower; slots are filled afterwards.
        let mut algebraic: Vec<(usize, Partial, &Root, Option<Vec<Sign>>)> = Vec::new();
        let r = roots.len();
        let mut below: Vec<Sign> = Vec::new();
        for k in 0..=r {
            if !sections_only {
                let q = if r == 0 {
                    Rational::zero()
                } else if k == 0 {
                    roots[0].loc.lo().floor() - Rational::one()
                } else if k == r {
                    roots[r - 1].loc.hi().ceil() + Rational::one()
                } else {
                    simplest_between(roots[k - 1].loc.hi(), roots[k].loc.lo())
                };
                let mut c = child(2 * k + 1, Coordinate::Rational(q), true);
                below = self.level_signs(v, &c.sample, &mut tower);
                if self.apply(v, &mut c, &below) {
                    out.push(c);
                }
            }
            if k < r {
                let root = &roots[k];
                let known = (!sections_only).then(|| self.section_signs(v, &below, root));
                match root.loc.exact() {
                    Some(q) => {
                        let mut c = child(2 * k + 2, Coordinate::Rational(q.clone()), false);
                        let signs = known.unwrap_or_else(|| self.level_signs(v, &c.sample, &mut tower));
                        if self.apply(v, &mut c, &signs) {
                            out.push(c);
                        }
                    }
                    None => {
                        if let Some(signs) = &known {
                            let mut probe = parent.clone();
                            if !self.apply(v, &mut probe, signs) {
                                continue;
                            }
                        }
                        let c = child(2 * k + 2, Coordinate::Rational(Rational::zero()), false);
                        algebraic.push((out.len(), c, root, known));
                        out.push(Partial { indices: Vec::new(), ..parent.clone() });
                    }
                }
            }
        }
        let shared = Arc::new(tower.clone());
        for c in out.iter_mut() {
            if !c.indices.is_empty() {
                c.tower = shared.clone();
            }
        }
        let mut keep = vec![true; out.len()];
        for (pos, mut c, root, known) in algebraic {
            let mut t = tower.clone();
            let level = t.push(root.poly.clone(), root.loc.lo().clone(), root.loc.hi().clone());
            *c.sample.last_mut().expect("nonempty") = Coordinate::Algebraic(level);
            let signs = known.unwrap_or_else(|| self.level_signs(v, &c.sample, &mut t));
            if self.apply(v, &mut c, &signs) {
                c.tower = Arc::new(t);
                out[pos] = c;
            } else {
                keep[pos] = false;
            }
        }
        out.into_iter().zip(keep).filter(|(c, k)| *k && !c.indices.is_empty()).map(|(c, _)| c).collect()
    }
}

pub(crate) fn decompose(family: &[MultiPoly], allowed: Option<&[SignSet]>, opts: &CadOptions) -> Result<Cad> {
    let n = family.first().map_or(0, |f| f.nvars());
    if let Some(f) = family.iter().find(|f| f.nvars() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: f.nvars() });
    }
    let projection = if n == 0 { Vec::new() } else { cad_project(family, opts)? };
    let mut by_level = vec![Vec::new(); n];
    let mut signs = vec![Sign::Zero; family.len()];
    let mut root_ok = true;
    for (i, f) in family.iter().enumerate() {
        match f.main_var() {
            Some(v) => by_level[v].push(i),
            None => {
                signs[i] = Sign::of(&f.constant_value().unwrap_or_else(Rational::zero));
                root_ok &= allowed.is_none_or(|a| a[i].contains(signs[i]));
            }
        }
    }
    let factors = family
        .iter()
        .map(|f| match f.main_var() {
            Some(v) => normalize(f)
                .iter()
                .filter(|g| g.main_var() == Some(v))
                .map(|g| projection[v].iter().position(|p| p == g).expect("input factors are projected"))
                .collect(),
            None => Vec::new(),
        })
        .collect();
    let plan = Plan { inputs: family, by_level, factors, projection: &projection, allowed };
    let mut cur = Vec::new();
    if root_ok {
        cur.push(Partial {
            indices: Vec::new(),
            dim: 0,
            sample: Vec::new(),
            signs,
            tower: Arc::new(Tower::new(n)),
        });
    }
    for v in 0..n {
        let next = opts.exec.map(&cur, |p| plan.lift(p, v));
        cur = next.into_iter().flatten().collect();
        if cur.len() > opts.max_cells {
            return Err(Error::ResourceLimit { what: "cells", limit: opts.max_cells });
        }
    }
    let cells = cur
        .into_iter()
        .map(|p| CadCell { level_indices: p.indices, dim: p.dim, sample: p.sample, signs: p.signs, tower: p.tower })
        .collect();
    Ok(Cad { inputs: family.to_vec(), projection, cells, pruned: allowed.is_some() })
}

/// Level indices of the cell containing a rational point, recomputed from
/// the projection families over the point itself.
pub(crate) fn locate_indices(projection: &[Vec<MultiPoly>], point: &[Rational]) -> Vec<usize> {
    let mut out = Vec::with_capacity(point.len());
    let mut tower = Tower::new(point.len());
    let sample: Vec<Coordinate> = point.iter().cloned().map(Coordinate::Rational).collect();
    for (v, polys) in projection.iter().enumerate() {
        let roots = fiber_roots(polys, v, &sample[..v], &mut tower);
        let x = &point[v];
        let lin = vec![-x.clone(), Rational::one()];
        let mut below = 0;
        let mut idx = None;
        for root in roots {
            let mut loc = root.loc;
            let poly: Vec<Rational> =
                root.poly.iter().map(|c| c.constant_value().expect("rational fiber")).collect();
            let mut here = RootLocation::Exact(x.clone());
            match uni::compare_roots(&mut RationalField, &poly, &mut loc, &lin, &mut here) {
                Ordering::Less => below += 1,
                Ordering::Equal => {
                    idx = Some(2 * below + 2);
                    break;
                }
                Ordering::Greater => break,
            }
        }
        out.push(idx.unwrap_or(2 * below + 1));
    }
    out
}
