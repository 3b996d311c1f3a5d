//! Euler characteristics read directly off a single decomposition, used to
//! cross-check the pipeline. Unbounded sets are truncated by growing closed
//! balls.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::arith::{int, Rational, Sign};
use crate::cad::{
    cad_decompose_filtered, euler_sign_conditions, euler_sign_conditions_restricted, Cad, CadOptions, SignSet,
};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

#[derive(Debug, Clone)]
pub struct OracleOptions {
    /// First radius; chosen from the coefficient sizes when `None`.
    pub initial_radius: Option<Rational>,
    pub max_doublings: usize,
    pub cad: CadOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { initial_radius: None, max_doublings: 10, cad: CadOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub chi: i64,
    /// The smaller radius of the first two consecutive radii that agreed.
    pub radius_used: Rational,
    pub cells_in_set: usize,
    /// `(radius, χ)` for every radius tried.
    pub trail: Vec<(Rational, i64)>,
}

/// Smallest power of two above `1 + max |c| / min |c|` over nonzero
/// coefficients of each polynomial.
fn auto_radius(polys: &[MultiPoly]) -> Rational {
    let mut h = Rational::zero();
    for p in polys {
        let abs: Vec<Rational> = p.terms().map(|(_, c)| c.abs()).collect();
        if let (Some(mx), Some(mn)) = (abs.iter().max(), abs.iter().min()) {
            let r = mx / mn;
            if r > h {
                h = r;
            }
        }
    }
    let bound = h + Rational::one();
    let mut r = Rational::one();
    while r < bound {
        r *= int(2);
    }
    r
}

fn sum_sq_minus(vars: &Arc<[String]>, c: Rational) -> MultiPoly {
    let mut p = MultiPoly::constant(vars.clone(), -c);
    for i in 0..vars.len() {
        let x = MultiPoly::var(vars.clone(), i);
        p = &p + &(&x * &x);
    }
    p
}

/// Cells of `{P_i ≤ 0} ∩ {|x| ≤ r}`.
pub fn ball_decomposition(polys: &[MultiPoly], r: &Rational, opts: &CadOptions) -> Result<Cad> {
    let mut family = polys.to_vec();
    family.push(sum_sq_minus(polys[0].vars(), r * r));
    let allowed = vec![SignSet::NONPOS; family.len()];
    cad_decompose_filtered(&family, &allowed, opts)
}

fn cells_chi(cad: &Cad) -> i64 {
    cad.cells.iter().map(|c| if c.dim % 2 == 0 { 1 } else { -1 }).sum()
}

/// How the sets `{P_i ≤ 0}` are combined in [`chi_on_sphere`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Intersection,
    Union,
}

/// `χ` of the intersection or union of the `{P_i ≤ 0}` on the unit sphere,
/// directly from a decomposition adapted to the `P_i` and `|x|² − 1`.
pub fn chi_on_sphere(polys: &[MultiPoly], combine: Combine, opts: &CadOptions) -> Result<i64> {
    if polys.is_empty() {
        return Err(Error::Invalid("at least one polynomial is required".into()));
    }
    let sphere = sum_sq_minus(polys[0].vars(), Rational::one());
    let table = match combine {
        Combine::Intersection => {
            euler_sign_conditions_restricted(polys, &sphere, &vec![SignSet::NONPOS; polys.len()], opts)?
        }
        Combine::Union => euler_sign_conditions(polys, &sphere, opts)?,
    };
    Ok(table.entries.iter().filter(|(s, _)| s.iter().any(|&x| x != Sign::Pos)).map(|(_, v)| v).sum())
}

/// `χ({x : P_1(x) ≤ 0, …, P_ℓ(x) ≤ 0})`, taken as the common value of the
/// compact truncations at two consecutive doubled radii.
pub fn chi_direct(polys: &[MultiPoly], opts: &OracleOptions) -> Result<OracleResult> {
    if polys.is_empty() {
        return Err(Error::Invalid("oracle needs at least one polynomial".into()));
    }
    let n = polys[0].nvars();
    if let Some(p) = polys.iter().find(|p| p.nvars() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: p.nvars() });
    }
    let mut r = match &opts.initial_radius {
        Some(r) if r.is_positive() => r.clone(),
        Some(_) => return Err(Error::Invalid("radius must be positive".into())),
        None => auto_radius(polys),
    };
    let mut trail = Vec::new();
    let mut prev = cells_chi(&ball_decomposition(polys, &r, &opts.cad)?);
    trail.push((r.clone(), prev));
    for _ in 0..opts.max_doublings {
        let next_r = &r * int(2);
        let cad = ball_decomposition(polys, &next_r, &opts.cad)?;
        let (chi, cells) = (cells_chi(&cad), cad.len());
        trail.push((next_r.clone(), chi));
        if chi == prev {
            return Ok(OracleResult { chi, radius_used: r, cells_in_set: cells, trail });
        }
        prev = chi;
        r = next_r;
    }
    Err(Error::NoStabilization { attempts: opts.max_doublings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, var_names};

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &var_names(&["X1", "X2"])).unwrap()
    }

    #[test]
    fn known_sets() {
        let o = OracleOptions::default();
        assert_eq!(chi_direct(&[p("X1*X2 - 1")], &o).unwrap().chi, 1);
        assert_eq!(chi_direct(&[p("X1^2 + X2^2 - 1")], &o).unwrap().chi, 1);
        assert_eq!(chi_direct(&[p("X1^2 + X2^2 + 1")], &o).unwrap().chi, 0);
        assert_eq!(chi_direct(&[p("X1^2 + X2^2")], &o).unwrap().chi, 1);
        assert_eq!(chi_direct(&[p("X1^2 + X2^2 - 1"), p("1 - X1^2 - X2^2")], &o).unwrap().chi, 0);
        assert_eq!(chi_direct(&[p("1 - X1^2 - X2^2")], &o).unwrap().chi, 0);
        assert_eq!(chi_direct(&[p("1 - X1*X2")], &o).unwrap().chi, 2);
    }

    #[test]
    fn sphere_sets() {
        let v = var_names(&["X0", "X1", "X2"]);
        let q = |s: &str| parse_poly(s, &v).unwrap();
        let o = CadOptions::default();
        let pair = [q("X0^2 + X1^2 - X2^2"), q("X0^2 - X1^2 - X2^2")];
        assert_eq!(chi_on_sphere(&pair, Combine::Union, &o).unwrap(), 0);
        assert_eq!(chi_on_sphere(&pair, Combine::Intersection, &o).unwrap(), 2);
        assert_eq!(chi_on_sphere(&[q("-X0^2 - X1^2 - X2^2")], Combine::Union, &o).unwrap(), 2);
    }

    #[test]
    fn far_away_disk() {
        let r = chi_direct(&[p("X1^2 - 20*X1 + X2^2 + 99")], &OracleOptions::default()).unwrap();
        assert_eq!(r.chi, 1);
        assert!(r.radius_used >= int(11));
    }
}
