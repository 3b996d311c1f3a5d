//! Cylindrical algebraic decomposition and the Borel–Moore Euler
//! characteristic of realizable sign conditions.
//!
//! Each cell of a CAD is homeomorphic to an open cube of its dimension, so
//! its Borel–Moore Euler characteristic is `(−1)^dim`. Additivity turns a
//! CAD adapted to a family into the full table of `χ^BM` over sign
//! conditions.

mod algebraic;
mod lift;
mod project;
pub mod tower;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::arith::{Rational, Sign};
use crate::error::Result;
use crate::exec::Exec;
use crate::poly::MultiPoly;

pub use algebraic::AlgebraicNumber;
pub use project::cad_project;
pub use tower::Tower;

pub type SignCondition = Vec<Sign>;

/// Formats a sign condition as `-,0,+`.
pub fn format_signs(s: &[Sign]) -> String {
    s.iter().map(|x| x.symbol().to_string()).collect::<Vec<_>>().join(",")
}

/// A subset of `{−1, 0, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignSet(u8);

impl SignSet {
    pub const ANY: SignSet = SignSet(0b111);
    pub const ZERO: SignSet = SignSet(0b010);
    pub const NONPOS: SignSet = SignSet(0b011);
    pub const NEG: SignSet = SignSet(0b001);
    pub const POS: SignSet = SignSet(0b100);

    fn bit(s: Sign) -> u8 {
        match s {
            Sign::Neg => 0b001,
            Sign::Zero => 0b010,
            Sign::Pos => 0b100,
        }
    }

    pub fn of(signs: &[Sign]) -> SignSet {
        SignSet(signs.iter().fold(0, |acc, &s| acc | Self::bit(s)))
    }

    pub fn contains(self, s: Sign) -> bool {
        self.0 & Self::bit(s) != 0
    }

    pub fn is_zero_only(self) -> bool {
        self == SignSet::ZERO
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CadOptions {
    /// Cap on the number of cells at any level.
    pub max_cells: usize,
    /// Cap on the number of projection polynomials.
    pub max_projection_polys: usize,
    /// Cap on an a-priori total degree bound of each projection polynomial.
    pub max_projection_degree: u32,
    pub exec: Exec,
}

impl Default for CadOptions {
    fn default() -> Self {
        CadOptions {
            max_cells: 2_000_000,
            max_projection_polys: 2_000,
            max_projection_degree: 256,
            exec: Exec::default(),
        }
    }
}

/// One coordinate of a sample point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coordinate {
    Rational(Rational),
    /// Generator of the given level of the cell's [`Tower`].
    Algebraic(usize),
}

#[derive(Debug, Clone)]
pub struct CadCell {
    /// 1-based position in each stack: odd for sectors, even for sections.
    pub level_indices: Vec<usize>,
    pub dim: usize,
    pub sample: Vec<Coordinate>,
    /// Signs of the input family on the cell.
    pub signs: SignCondition,
    tower: Arc<Tower>,
}

impl CadCell {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn sample_approx(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.sample
            .iter()
            .map(|c| match c {
                Coordinate::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
                Coordinate::Algebraic(l) => self.tower.approx(*l),
            })
            .collect()
    }

    /// Coordinate `i` as a real algebraic number over `Q`.
    pub fn coordinate(&self, i: usize) -> AlgebraicNumber {
        match &self.sample[i] {
            Coordinate::Rational(q) => AlgebraicNumber::from_rational(q.clone()),
            Coordinate::Algebraic(l) => {
                let mut t = (*self.tower).clone();
                let (p, loc) = t.rational_defpoly(*l);
                AlgebraicNumber::new(p, loc).expect("isolating interval")
            }
        }
    }

    /// Exact sign of `p` at the sample point.
    pub fn sign_of(&self, p: &MultiPoly) -> Sign {
        let mut t = (*self.tower).clone();
        lift::sign_at_sample(p, &self.sample, &mut t)
    }

    /// The sample point with every algebraic interval refined `times` times.
    pub fn refined(&self, times: usize) -> CadCell {
        let mut t = (*self.tower).clone();
        for _ in 0..times {
            for l in 1..=t.depth() {
                t.refine(l);
            }
        }
        CadCell { tower: Arc::new(t), ..self.clone() }
    }

    /// `level_indices; dim; signs`.
    pub fn dump_line(&self) -> String {
        let idx: Vec<String> = self.level_indices.iter().map(|i| i.to_string()).collect();
        format!("{}; {}; {}", idx.join(","), self.dim, format_signs(&self.signs))
    }
}

/// A decomposition adapted to `inputs`, possibly pruned to the cells whose
/// signs lie in prescribed sets.
#[derive(Debug, Clone)]
pub struct Cad {
    pub inputs: Vec<MultiPoly>,
    pub projection: Vec<Vec<MultiPoly>>,
    pub cells: Vec<CadCell>,
    pub pruned: bool,
}

impl Cad {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// One line per cell in canonical order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for c in &self.cells {
            let _ = writeln!(s, "{}", c.dump_line());
        }
        s
    }

    /// The cell containing a rational point. Only meaningful for unpruned
    /// decompositions.
    pub fn locate(&self, point: &[Rational]) -> Option<&CadCell> {
        let idx = lift::locate_indices(&self.projection, point);
        self.cells.binary_search_by(|c| c.level_indices.cmp(&idx)).ok().map(|i| &self.cells[i])
    }
}

/// Full decomposition of `R^n` adapted to `family`.
pub fn cad_decompose(family: &[MultiPoly], opts: &CadOptions) -> Result<Cad> {
    lift::decompose(family, None, opts)
}

/// Decomposition keeping only cells where member `i` has a sign in
/// `allowed[i]`. Whole cylinders are pruned as soon as a member's sign is
/// known, and members allowed only the sign zero restrict their stack to
/// their own sections.
pub fn cad_decompose_filtered(family: &[MultiPoly], allowed: &[SignSet], opts: &CadOptions) -> Result<Cad> {
    assert_eq!(family.len(), allowed.len());
    lift::decompose(family, Some(allowed), opts)
}

/// Realizable sign conditions and their Borel–Moore Euler characteristics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChiTable {
    pub entries: BTreeMap<SignCondition, i64>,
    pub cells: usize,
}

impl ChiTable {
    pub fn total(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn get(&self, s: &[Sign]) -> Option<i64> {
        self.entries.get(s).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn cell_chi(dim: usize) -> i64 {
    if dim.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `χ^BM(R(σ, Z(Q)))` for every realizable sign condition `σ` of `p` on the
/// zero set of `q`.
pub fn euler_sign_conditions(p: &[MultiPoly], q: &MultiPoly, opts: &CadOptions) -> Result<ChiTable> {
    euler_sign_conditions_restricted(p, q, &vec![SignSet::ANY; p.len()], opts)
}

/// As [`euler_sign_conditions`], restricted to sign conditions with
/// `σ(p_i) ∈ allowed[i]`.
pub fn euler_sign_conditions_restricted(
    p: &[MultiPoly],
    q: &MultiPoly,
    allowed: &[SignSet],
    opts: &CadOptions,
) -> Result<ChiTable> {
    let mut family = p.to_vec();
    family.push(q.clone());
    let mut sets = allowed.to_vec();
    sets.push(SignSet::ZERO);
    let cad = cad_decompose_filtered(&family, &sets, opts)?;
    let mut table = ChiTable { cells: cad.len(), ..Default::default() };
    for c in &cad.cells {
        *table.entries.entry(c.signs[..p.len()].to_vec()).or_insert(0) += cell_chi(c.dim);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, var_names};
    use Sign::*;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &var_names(&["Z1", "Z2"])).unwrap()
    }

    #[test]
    fn line_has_three_cells() {
        let v = var_names(&["Z1"]);
        let cad = cad_decompose(&[parse_poly("Z1", &v).unwrap()], &CadOptions::default()).unwrap();
        assert_eq!(cad.dump(), "1; 1; -\n2; 0; 0\n3; 1; +\n");
    }

    #[test]
    fn circle_cells() {
        let cad = cad_decompose(&[p("Z1^2 + Z2^2 - 1")], &CadOptions::default()).unwrap();
        assert_eq!(cad.len(), 13);
        let zero: Vec<_> = cad.cells.iter().filter(|c| c.signs == [Zero]).collect();
        assert_eq!(zero.len(), 4);
        assert_eq!(zero.iter().map(|c| cell_chi(c.dim)).sum::<i64>(), 0);
        assert_eq!(cad.cells.iter().filter(|c| c.signs == [Neg] && c.dim == 2).count(), 1);
    }

    #[test]
    fn constant_family() {
        let cad = cad_decompose(&[p("1")], &CadOptions::default()).unwrap();
        assert_eq!(cad.len(), 1);
        assert_eq!(cad.cells[0].dim, 2);
        assert_eq!(cad.cells[0].signs, vec![Pos]);
    }

    #[test]
    fn half_circles() {
        let t = euler_sign_conditions(&[p("Z1")], &p("Z1^2 + Z2^2 - 1"), &CadOptions::default()).unwrap();
        assert_eq!(t.get(&[Neg]), Some(-1));
        assert_eq!(t.get(&[Zero]), Some(2));
        assert_eq!(t.get(&[Pos]), Some(-1));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn two_points() {
        let v = var_names(&["Z1"]);
        let q = |s: &str| parse_poly(s, &v).unwrap();
        let t = euler_sign_conditions(&[q("Z1")], &q("Z1^2 - 1"), &CadOptions::default()).unwrap();
        assert_eq!(t.entries.len(), 2);
        assert_eq!(t.get(&[Neg]), Some(1));
        assert_eq!(t.get(&[Pos]), Some(1));
    }

    #[test]
    fn locate_points() {
        let cad = cad_decompose(&[p("Z1^2 + Z2^2 - 1")], &CadOptions::default()).unwrap();
        let r = |n: i64, d: i64| crate::arith::rat(n, d);
        let c = cad.locate(&[r(3, 5), r(4, 5)]).unwrap();
        assert_eq!(c.signs, vec![Zero]);
        assert_eq!(c.dim, 1);
        let c = cad.locate(&[r(0, 1), r(0, 1)]).unwrap();
        assert_eq!(c.signs, vec![Neg]);
        let c = cad.locate(&[r(1, 1), r(0, 1)]).unwrap();
        assert_eq!(c.dim, 0);
    }
}
