use super::CadOptions;
use crate::error::{Error, Result};
use crate::poly::subres::psc;
use crate::poly::{MultiPoly, UniPoly};

/// Zero-set preserving normal form: primitive, monomial content split off
/// into single variables, constants dropped.
pub(crate) fn normalize(p: &MultiPoly) -> Vec<MultiPoly> {
    if p.is_constant() {
        return Vec::new();
    }
    let m = p.monomial_content();
    let mut out: Vec<MultiPoly> =
        m.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| MultiPoly::var(p.vars().clone(), i)).collect();
    let q = p.div_monomial(&m);
    if !q.is_constant() {
        let q = if q.main_var() == Some(0) { univariate_squarefree(&q) } else { q };
        out.push(q.primitive());
    }
    out
}

fn univariate_squarefree(p: &MultiPoly) -> MultiPoly {
    let coeffs: Vec<_> = p.coeffs_in(0).iter().map(|c| c.constant_value().expect("univariate")).collect();
    let sq = UniPoly::new(coeffs).squarefree();
    let cs: Vec<MultiPoly> = sq.coeffs().iter().map(|c| MultiPoly::constant(p.vars().clone(), c.clone())).collect();
    MultiPoly::from_coeffs_in(p.vars().clone(), 0, &cs)
}

fn insert(set: &mut Vec<MultiPoly>, p: MultiPoly) {
    if !set.contains(&p) {
        set.push(p);
    }
}

/// `f, red(f), red²(f), …` while the degree in `v` is positive, stopping
/// after the first one whose leading coefficient is a nonzero constant.
fn reducta(f: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    let mut g = f.clone();
    while g.degree_in(v) > 0 {
        out.push(g.clone());
        let mut c = g.coeffs_in(v);
        let lc = c.pop().expect("positive degree");
        if lc.is_constant() {
            break;
        }
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        g = MultiPoly::from_coeffs_in(g.vars().clone(), v, &c);
    }
    out
}

fn leading_coeff(f: &MultiPoly, v: usize) -> MultiPoly {
    f.coeffs_in(v).pop().expect("nonzero")
}

fn psc_degree_bound(f: &MultiPoly, g: &MultiPoly, v: usize, j: usize) -> u32 {
    let p = f.degree_in(v) as usize;
    let q = g.degree_in(v) as usize;
    let tf = f.total_degree().unwrap_or(0);
    let tg = g.total_degree().unwrap_or(0);
    ((q - j) as u32) * tf + ((p - j) as u32) * tg
}

/// Collins projection of a family whose members all have main variable `v`.
fn collins_step(family: &[MultiPoly], v: usize, opts: &CadOptions) -> Result<Vec<MultiPoly>> {
    let reds: Vec<Vec<MultiPoly>> = family.iter().map(|f| reducta(f, v)).collect();
    let mut jobs: Vec<(MultiPoly, MultiPoly, usize)> = Vec::new();
    let mut out = Vec::new();
    for (i, rf) in reds.iter().enumerate() {
        for fs in rf {
            out.push(leading_coeff(fs, v));
            let d = fs.degree_in(v) as usize;
            if d >= 2 {
                let df = fs.derivative(v);
                for j in 0..d - 1 {
                    jobs.push((fs.clone(), df.clone(), j));
                }
            }
        }
        for rg in &reds[i + 1..] {
            for fs in rf {
                for gs in rg {
                    let m = fs.degree_in(v).min(gs.degree_in(v)) as usize;
                    for j in 0..m {
                        jobs.push((fs.clone(), gs.clone(), j));
                    }
                }
            }
        }
    }
    if jobs.len() + out.len() > opts.max_projection_polys {
        return Err(Error::ResourceLimit { what: "projection polynomials", limit: opts.max_projection_polys });
    }
    for (f, g, j) in &jobs {
        if psc_degree_bound(f, g, v, *j) > opts.max_projection_degree {
            return Err(Error::ResourceLimit {
                what: "projection degree",
                limit: opts.max_projection_degree as usize,
            });
        }
    }
    let pscs = opts.exec.map(&jobs, |(f, g, j)| psc(f, g, v, *j));
    out.extend(pscs);
    Ok(out)
}

/// `psc_0, psc_1, …` of `f` and `g` up to and including the first one that
/// is not identically zero.
fn psc_prefix(f: &MultiPoly, g: &MultiPoly, v: usize, limit: usize) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    for j in 0..limit {
        let p = psc(f, g, v, j);
        let stop = !p.is_zero();
        out.push(p);
        if stop {
            break;
        }
    }
    out
}

/// Projection onto a one-dimensional base. Over an open interval where
/// every member keeps a nonzero leading coefficient and the first
/// nonvanishing subresultant coefficients stay nonzero, root counts and
/// common-root counts are constant, so reducta and higher coefficients are
/// not needed. Points of the base are lifted exactly.
fn planar_step(family: &[MultiPoly], v: usize, opts: &CadOptions) -> Result<Vec<MultiPoly>> {
    let mut jobs: Vec<(MultiPoly, MultiPoly, usize)> = Vec::new();
    let mut out = Vec::new();
    for (i, f) in family.iter().enumerate() {
        out.push(leading_coeff(f, v));
        let d = f.degree_in(v) as usize;
        if d >= 2 {
            jobs.push((f.clone(), f.derivative(v), d - 1));
        }
        for g in &family[i + 1..] {
            jobs.push((f.clone(), g.clone(), f.degree_in(v).min(g.degree_in(v)) as usize));
        }
    }
    if jobs.len() + out.len() > opts.max_projection_polys {
        return Err(Error::ResourceLimit { what: "projection polynomials", limit: opts.max_projection_polys });
    }
    if jobs.iter().any(|(f, g, _)| psc_degree_bound(f, g, v, 0) > opts.max_projection_degree) {
        return Err(Error::ResourceLimit { what: "projection degree", limit: opts.max_projection_degree as usize });
    }
    let pscs = opts.exec.map(&jobs, |(f, g, m)| psc_prefix(f, g, v, *m));
    out.extend(pscs.into_iter().flatten());
    Ok(out)
}

/// Projection families by level: entry `i` holds the normalized polynomials
/// whose main variable is variable `i`.
pub fn cad_project(family: &[MultiPoly], opts: &CadOptions) -> Result<Vec<Vec<MultiPoly>>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let n = first.nvars();
    let mut levels: Vec<Vec<MultiPoly>> = vec![Vec::new(); n];
    for f in family {
        for g in normalize(f) {
            let v = g.main_var().expect("nonconstant");
            insert(&mut levels[v], g);
        }
    }
    for v in (1..n).rev() {
        let fam = levels[v].clone();
        let step = if v == 1 { planar_step(&fam, v, opts)? } else { collins_step(&fam, v, opts)? };
        for p in step {
            for g in normalize(&p) {
                let w = g.main_var().expect("nonconstant");
                debug_assert!(w < v);
                insert(&mut levels[w], g);
            }
        }
        let total: usize = levels.iter().map(Vec::len).sum();
        if total > opts.max_projection_polys {
            return Err(Error::ResourceLimit { what: "projection polynomials", limit: opts.max_projection_polys });
        }
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    use crate::arith::{int, Rational};
    use crate::poly::{parse_poly, var_names};

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &var_names(&["Z1", "Z2"])).unwrap()
    }

    /// Distinct real roots of the level-1 family, each checked against `expect`.
    fn level1_roots_are(levels: &[Vec<MultiPoly>], expect: &[Rational]) {
        let mut count = 0;
        let mut all = UniPoly::from_ints(&[1]);
        for q in &levels[0] {
            let c: Vec<Rational> = q.coeffs_in(0).iter().map(|c| c.constant_value().unwrap()).collect();
            all = all.mul(&UniPoly::new(c));
        }
        for r in all.squarefree().isolate_real_roots() {
            count += 1;
            assert!(expect.iter().any(|x| r.lo() <= x && x <= r.hi()));
        }
        assert_eq!(count, expect.len());
        for x in expect {
            assert!(all.eval(x).is_zero());
        }
    }

    #[test]
    fn circle_projects_to_plus_minus_one() {
        let lv = cad_project(&[p("Z1^2 + Z2^2 - 1")], &CadOptions::default()).unwrap();
        level1_roots_are(&lv, &[int(-1), int(1)]);
    }

    #[test]
    fn univariate_has_no_projection() {
        let v = var_names(&["Z1"]);
        let lv = cad_project(&[parse_poly("Z1", &v).unwrap()], &CadOptions::default()).unwrap();
        assert_eq!(lv.len(), 1);
        assert_eq!(lv[0], vec![parse_poly("Z1", &v).unwrap()]);
    }

    #[test]
    fn crossing_lines_project_to_origin() {
        let lv = cad_project(&[p("Z2 - Z1"), p("Z2 + Z1")], &CadOptions::default()).unwrap();
        level1_roots_are(&lv, &[int(0)]);
    }

    #[test]
    fn reducta_stop_at_constant_leading_coefficient() {
        let f = p("Z1*Z2^2 + Z2 + 1");
        let r = reducta(&f, 1);
        assert_eq!(r.len(), 2);
        assert_eq!(r[1], p("Z2 + 1"));
    }
}
