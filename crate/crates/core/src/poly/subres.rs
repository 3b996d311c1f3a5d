//! Principal subresultant coefficients, resultants and discriminants of
//! multivariate polynomials viewed as univariate in one variable.

use super::{MultiPoly, PolyError};

/// Determinant by fraction-free (Bareiss) elimination over `Q[vars]`.
pub fn determinant(mut m: Vec<Vec<MultiPoly>>, vars: &std::sync::Arc<[String]>) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(vars.clone());
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(vars.clone());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(vars.clone()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero(vars.clone());
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// The `j`-th principal subresultant coefficient of `a` and `b` with respect
/// to variable `v`, as the determinant of the `(p+q−2j)`-square matrix built
/// from the shifted coefficient rows of `a` (`q−j` rows) and `b` (`p−j` rows).
pub fn psc(a: &MultiPoly, b: &MultiPoly, v: usize, j: usize) -> MultiPoly {
    let ca = a.coeffs_in(v);
    let cb = b.coeffs_in(v);
    let p = ca.len() - 1;
    let q = cb.len() - 1;
    assert!(j <= p.min(q), "subresultant index out of range");
    let size = p + q - 2 * j;
    let vars = a.vars().clone();
    let zero = MultiPoly::zero(vars.clone());
    let mut rows = Vec::with_capacity(size);
    let mut push_rows = |coeffs: &[MultiPoly], deg: usize, count: usize| {
        for r in 0..count {
            let shift = count - 1 - r;
            let row: Vec<MultiPoly> = (0..size)
                .map(|c| {
                    let pow = p + q - j - 1 - c;
                    match pow.checked_sub(shift) {
                        Some(i) if i <= deg => coeffs[i].clone(),
                        _ => zero.clone(),
                    }
                })
                .collect();
            rows.push(row);
        }
    };
    push_rows(&ca, p, q - j);
    push_rows(&cb, q, p - j);
    determinant(rows, &vars)
}

/// `psc_0, …, psc_{min(deg a, deg b) − 1}`.
pub fn principal_subresultant_coeffs(a: &MultiPoly, b: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let p = a.degree_in(v) as usize;
    let q = b.degree_in(v) as usize;
    if a.is_zero() || b.is_zero() {
        return Vec::new();
    }
    (0..p.min(q)).map(|j| psc(a, b, v, j)).collect()
}

/// Sylvester resultant with respect to `v`.
pub fn resultant(a: &MultiPoly, b: &MultiPoly, v: usize) -> Result<MultiPoly, PolyError> {
    a.try_add(b)?;
    if a.is_zero() || b.is_zero() {
        return Ok(MultiPoly::zero(a.vars().clone()));
    }
    let p = a.degree_in(v) as usize;
    let q = b.degree_in(v) as usize;
    if p == 0 && q == 0 {
        return Ok(MultiPoly::one(a.vars().clone()));
    }
    if p == 0 {
        return Ok(a.pow(q as u32));
    }
    if q == 0 {
        return Ok(b.pow(p as u32));
    }
    Ok(psc(a, b, v, 0))
}

/// `(−1)^{d(d−1)/2} · res(f, ∂f/∂v) / lc(f)`.
pub fn discriminant(f: &MultiPoly, v: usize) -> Result<MultiPoly, PolyError> {
    let d = f.degree_in(v) as usize;
    if d == 0 {
        return Err(PolyError::DegreeTooLow { degree: 0, min: 1 });
    }
    if d == 1 {
        return Ok(MultiPoly::one(f.vars().clone()));
    }
    let lc = f.coeffs_in(v).pop().expect("nonzero");
    let r = resultant(f, &f.derivative(v), v)?;
    let q = r.exact_div(&lc)?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { q.neg() } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, var_names};

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &var_names(&["a", "b", "Z1", "Z2", "T"])).unwrap()
    }

    #[test]
    fn linear_resultant() {
        let r = resultant(&p("T - a"), &p("T - b"), 4).unwrap();
        assert_eq!(r, p("a - b"));
    }

    #[test]
    fn circle_discriminant() {
        let d = discriminant(&p("Z1^2 + Z2^2 - 1"), 3).unwrap();
        assert_eq!(d, p("-4*Z1^2 + 4"));
    }

    #[test]
    fn resultant_of_two_square_roots() {
        let r = resultant(&p("T^2 - Z1"), &p("T^2 - Z2"), 4).unwrap();
        assert_eq!(r, p("Z1^2 - 2*Z1*Z2 + Z2^2"));
    }

    #[test]
    fn psc_detects_common_factor_degree() {
        // gcd of (T-a)(T-b) and (T-a)(T+1) has degree 1: psc_0 = 0, psc_1 ≠ 0 generically.
        let f = &p("T - a") * &p("T - b");
        let g = &p("T - a") * &p("T + 1");
        let pscs = principal_subresultant_coeffs(&f, &g, 4);
        assert!(pscs[0].is_zero());
        assert!(!pscs[1].is_zero());
    }

    #[test]
    fn bareiss_matches_small_expansion() {
        let v = var_names(&["a", "b", "Z1", "Z2", "T"]);
        let m = vec![
            vec![p("a"), p("1"), p("0")],
            vec![p("b"), p("a"), p("1")],
            vec![p("0"), p("b"), p("a")],
        ];
        // a(a^2 - b) - 1(b a - 0) = a^3 - 2ab
        assert_eq!(determinant(m, &v), p("a^3 - 2*a*b"));
        let m2 = vec![vec![p("0"), p("1")], vec![p("1"), p("0")]];
        assert_eq!(determinant(m2, &v), p("-1"));
    }
}
