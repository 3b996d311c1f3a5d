//! Euler–Poincaré characteristic of sets defined by quadratic inequalities.
//!
//! [`chi_union`] handles a union `{P_1 ≤ 0} ∪ ⋯ ∪ {P_s ≤ 0}` on the unit
//! sphere through the pencil `M(Z) = Σ Z_i M_i`: the index of `ωP` for `ω` in
//! `Ω = {|ω| = 1, ω ≤ 0}` is read off the signs of the coefficients of
//! `det(M(Z) + T·I)`, and
//!
//! `χ(A) = Σ_σ χ^BM(R(σ, Ω)) · (1 + (−1)^{k − n(σ)})`.
//!
//! [`chi_homogeneous`] combines unions by inclusion–exclusion, and
//! [`chi_general`] reduces an arbitrary system of degree-≤2 inequalities to
//! the homogeneous case by adding `ε·ΣX_j² − X_0²` and halving.

use std::collections::BTreeMap;

use num_traits::{One, Signed};

use crate::arith::{int, rat, Rational, Sign};
use crate::cad::{cad_decompose_filtered, format_signs, Cad, CadOptions, ChiTable, SignCondition, SignSet};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::oracle::{chi_direct, OracleOptions, OracleResult};
use crate::pencil::{descartes_index, form_from_poly, pencil_charpoly, PencilCharPoly, QuadraticForm};
use crate::poly::{indexed_vars, MultiPoly};

/// How `Ω` is presented to the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OmegaChart {
    /// The simplex `{z ≤ 0, Σ z_j = −1}` parametrized by `s − 1` free
    /// coordinates. Positive rescaling maps it homeomorphically onto `Ω`
    /// and preserves the signs of the homogeneous `C_i`.
    #[default]
    Simplex,
    /// The sphere `Σ Z_j² = 1` itself, in `s` variables.
    Sphere,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UnionOptions {
    pub cad: CadOptions,
    pub chart: OmegaChart,
}

/// `χ^BM(σ, Ω)` restricted from a table over `C ∪ {Z_1, …, Z_s}` whose last
/// `s` entries are the `Z_j`.
pub fn restrict_to_omega(table: &ChiTable, s: usize) -> BTreeMap<SignCondition, i64> {
    let mut out = BTreeMap::new();
    for (sig, v) in &table.entries {
        let (c, z) = sig.split_at(sig.len() - s);
        if z.iter().all(|&x| x != Sign::Pos) {
            *out.entry(c.to_vec()).or_insert(0) += v;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaEntry {
    pub signs: SignCondition,
    pub chi_bm: i64,
    pub n: usize,
    pub contribution: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaChiReport {
    pub k: usize,
    pub charpoly: PencilCharPoly,
    pub entries: Vec<OmegaEntry>,
    pub cells: usize,
}

impl OmegaChiReport {
    pub fn chi(&self) -> i64 {
        self.entries.iter().map(|e| e.contribution).sum()
    }

    /// The part of the report that depends only on the topology, used to
    /// compare runs.
    pub fn table(&self) -> Vec<(SignCondition, i64, usize)> {
        self.entries.iter().map(|e| (e.signs.clone(), e.chi_bm, e.n)).collect()
    }
}

/// The `C_i` and `Z_j` over the chosen chart, plus the constraint defining
/// the chart inside its ambient space.
fn chart_family(cp: &PencilCharPoly, chart: OmegaChart) -> (Vec<MultiPoly>, MultiPoly) {
    let s = cp.s;
    match chart {
        OmegaChart::Sphere => {
            let vars = cp.vars().clone();
            let mut fam = cp.coeffs.clone();
            let mut q = MultiPoly::constant(vars.clone(), -Rational::one());
            for j in 0..s {
                let z = MultiPoly::var(vars.clone(), j);
                q = &q + &(&z * &z);
                fam.push(z);
            }
            (fam, q)
        }
        OmegaChart::Simplex => {
            let tvars = indexed_vars("t", s - 1, 1);
            let mut zs: Vec<MultiPoly> = (0..s - 1).map(|j| MultiPoly::var(tvars.clone(), j)).collect();
            let last = zs.iter().fold(MultiPoly::constant(tvars.clone(), -Rational::one()), |acc, t| &acc - t);
            zs.push(last);
            let mut fam: Vec<MultiPoly> = cp.coeffs.iter().map(|c| compose(c, &zs, &tvars)).collect();
            fam.extend(zs);
            (fam, MultiPoly::zero(tvars))
        }
    }
}

/// `p(images[0], images[1], …)` over the variables of the images.
fn compose(p: &MultiPoly, images: &[MultiPoly], vars: &std::sync::Arc<[String]>) -> MultiPoly {
    let mut acc = MultiPoly::zero(vars.clone());
    for (e, c) in p.terms() {
        let mut t = MultiPoly::constant(vars.clone(), c.clone());
        for (img, &k) in images.iter().zip(e) {
            if k > 0 {
                t = &t * &img.pow(k);
            }
        }
        acc = &acc + &t;
    }
    acc
}

/// The decomposition behind [`chi_union`]: cells of the chart of `Ω`
/// adapted to `C_0, …, C_k` and the `Z_j`, pruned to `Z ≤ 0`.
pub fn omega_decomposition(forms: &[QuadraticForm], opts: &UnionOptions) -> Result<(PencilCharPoly, Cad)> {
    let cp = pencil_charpoly(forms)?;
    let (mut family, q) = chart_family(&cp, opts.chart);
    family.push(q);
    let mut allowed = vec![SignSet::ANY; cp.k + 1];
    allowed.extend(std::iter::repeat_n(SignSet::NONPOS, cp.s));
    allowed.push(SignSet::ZERO);
    let cad = cad_decompose_filtered(&family, &allowed, &opts.cad)?;
    Ok((cp, cad))
}

/// `χ` of `{x ∈ S^k : P_1(x) ≤ 0 ∨ ⋯ ∨ P_s(x) ≤ 0}`.
pub fn chi_union(forms: &[QuadraticForm], opts: &UnionOptions) -> Result<OmegaChiReport> {
    let (cp, cad) = omega_decomposition(forms, opts)?;
    let (s, k) = (cp.s, cp.k);
    let mut table = ChiTable { cells: cad.len(), ..Default::default() };
    for c in &cad.cells {
        let chi = if c.dim % 2 == 0 { 1 } else { -1 };
        *table.entries.entry(c.signs[..k + 1 + s].to_vec()).or_insert(0) += chi;
    }
    let omega = restrict_to_omega(&table, s);
    let mut entries = Vec::with_capacity(omega.len());
    for (signs, chi_bm) in omega {
        let n = descartes_index(&signs, k)?;
        let parity = if (k + n) % 2 == 0 { 2 } else { 0 };
        entries.push(OmegaEntry { signs, chi_bm, n, contribution: chi_bm * parity });
    }
    Ok(OmegaChiReport { k, charpoly: cp, entries, cells: table.cells })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetReport {
    /// Indices into the deduplicated form list.
    pub subset: Vec<usize>,
    pub union: OmegaChiReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousReport {
    pub chi: i64,
    pub forms: Vec<QuadraticForm>,
    pub subsets: Vec<SubsetReport>,
}

impl HomogeneousReport {
    pub fn cells(&self) -> usize {
        self.subsets.iter().map(|s| s.union.cells).sum()
    }

    fn table(&self) -> Vec<Vec<(SignCondition, i64, usize)>> {
        self.subsets.iter().map(|s| s.union.table()).collect()
    }
}

fn dedup_forms(forms: &[QuadraticForm]) -> Vec<QuadraticForm> {
    let mut out: Vec<QuadraticForm> = Vec::new();
    for f in forms {
        let n = f.dim();
        let vars = indexed_vars("X", n, 0);
        let key = f.to_poly(vars.clone()).positive_primitive();
        if !out.iter().any(|g| g.to_poly(vars.clone()).positive_primitive() == key) {
            out.push(f.clone());
        }
    }
    out
}

/// `χ` of `{x ∈ S^k : P_1(x) ≤ 0 ∧ ⋯ ∧ P_ℓ(x) ≤ 0}` by inclusion–exclusion
/// over unions.
pub fn chi_homogeneous(forms: &[QuadraticForm], opts: &UnionOptions) -> Result<HomogeneousReport> {
    if forms.is_empty() {
        return Err(Error::Invalid("at least one form is required".into()));
    }
    let forms = dedup_forms(forms);
    let l = forms.len();
    if l > 20 {
        return Err(Error::ResourceLimit { what: "constraints", limit: 20 });
    }
    let subsets: Vec<Vec<usize>> =
        (1u32..(1 << l)).map(|mask| (0..l).filter(|i| mask & (1 << i) != 0).collect()).collect();
    let unions = opts.cad.exec.try_map(&subsets, |j| {
        let fs: Vec<QuadraticForm> = j.iter().map(|&i| forms[i].clone()).collect();
        chi_union(&fs, opts)
    })?;
    let mut chi = 0;
    let mut reports = Vec::with_capacity(subsets.len());
    for (subset, union) in subsets.into_iter().zip(unions) {
        let sign = if subset.len() % 2 == 1 { 1 } else { -1 };
        chi += sign * union.chi();
        reports.push(SubsetReport { subset, union });
    }
    Ok(HomogeneousReport { chi, forms, subsets: reports })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsMode {
    SubstituteStabilize,
    Fixed(Rational),
}

#[derive(Debug, Clone)]
pub struct GeneralCaseConfig {
    pub eps_mode: EpsMode,
    pub initial_eps: Rational,
    /// Halvings allowed before giving up on stabilization.
    pub max_halvings: usize,
    pub oracle_check: bool,
    pub oracle: OracleOptions,
    pub union: UnionOptions,
}

impl Default for GeneralCaseConfig {
    fn default() -> Self {
        GeneralCaseConfig {
            eps_mode: EpsMode::SubstituteStabilize,
            initial_eps: rat(1, 64),
            max_halvings: 12,
            oracle_check: false,
            oracle: OracleOptions::default(),
            union: UnionOptions::default(),
        }
    }
}

impl GeneralCaseConfig {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.union.cad.exec = exec;
        self.oracle.cad.exec = exec;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsStep {
    pub eps: Rational,
    pub chi_homogeneous: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shortcut {
    /// No constraints remain: the set is all of `R^k`.
    WholeSpace,
    /// A positive constant constraint: the set is empty.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralReport {
    pub chi: i64,
    pub shortcut: Option<Shortcut>,
    /// Nonconstant, deduplicated constraints actually used.
    pub constraints: Vec<MultiPoly>,
    pub eps_trail: Vec<EpsStep>,
    /// The homogeneous run at the final `ε`.
    pub homogeneous: Option<HomogeneousReport>,
    pub oracle: Option<OracleResult>,
}

impl GeneralReport {
    pub fn oracle_agrees(&self) -> Option<bool> {
        self.oracle.as_ref().map(|o| o.chi == self.chi)
    }

    pub fn cells(&self) -> usize {
        self.homogeneous.as_ref().map_or(0, |h| h.cells())
    }

    pub fn final_eps(&self) -> Option<&Rational> {
        self.eps_trail.last().map(|s| &s.eps)
    }
}

/// Name for the homogenizing variable: `X0`, suffixed until it is fresh.
pub fn homogenizing_var(vars: &[String]) -> String {
    let mut name = "X0".to_string();
    while vars.contains(&name) {
        name.push('_');
    }
    name
}

/// Homogenized constraints with `ε·ΣX_j² − X_0²` appended.
pub fn homogeneous_system(polys: &[MultiPoly], eps: &Rational) -> Result<Vec<QuadraticForm>> {
    let vars = polys[0].vars().clone();
    let x0 = homogenizing_var(&vars);
    let mut forms = Vec::with_capacity(polys.len() + 1);
    let mut hvars = None;
    for p in polys {
        let h = p.homogenize_deg2(&x0)?;
        hvars.get_or_insert_with(|| h.vars().clone());
        forms.push(form_from_poly(&h)?);
    }
    let hvars = hvars.expect("nonempty");
    let n = hvars.len();
    let mut terms = vec![(
        {
            let mut e = vec![0; n];
            e[0] = 2;
            e
        },
        -Rational::one(),
    )];
    for j in 1..n {
        let mut e = vec![0; n];
        e[j] = 2;
        terms.push((e, eps.clone()));
    }
    forms.push(form_from_poly(&MultiPoly::from_terms(hvars, terms))?);
    Ok(forms)
}

fn shortcut_report(polys: &[MultiPoly]) -> std::result::Result<Vec<MultiPoly>, Shortcut> {
    let mut kept: Vec<MultiPoly> = Vec::new();
    for p in polys {
        if let Some(c) = p.constant_value() {
            if c.is_positive() {
                return Err(Shortcut::Empty);
            }
            continue;
        }
        let key = p.positive_primitive();
        if !kept.iter().any(|q| q.positive_primitive() == key) {
            kept.push(p.clone());
        }
    }
    if kept.is_empty() {
        return Err(Shortcut::WholeSpace);
    }
    Ok(kept)
}

/// `χ` of `{x ∈ R^k : P_1(x) ≤ 0 ∧ ⋯ ∧ P_ℓ(x) ≤ 0}` for polynomials of
/// degree at most two.
pub fn chi_general(polys: &[MultiPoly], cfg: &GeneralCaseConfig) -> Result<GeneralReport> {
    if !cfg.initial_eps.is_positive() {
        return Err(Error::Invalid("initial eps must be positive".into()));
    }
    for p in polys {
        if let Some(d) = p.total_degree() {
            if d > 2 {
                return Err(crate::poly::PolyError::DegreeTooHigh { degree: d, max: 2 }.into());
            }
        }
    }
    let mut report = match shortcut_report(polys) {
        Err(s) => GeneralReport {
            chi: if s == Shortcut::Empty { 0 } else { 1 },
            shortcut: Some(s),
            constraints: Vec::new(),
            eps_trail: Vec::new(),
            homogeneous: None,
            oracle: None,
        },
        Ok(kept) => run_eps(kept, cfg)?,
    };
    if cfg.oracle_check && !polys.is_empty() {
        report.oracle = Some(chi_direct(polys, &cfg.oracle)?);
    }
    Ok(report)
}

fn run_eps(kept: Vec<MultiPoly>, cfg: &GeneralCaseConfig) -> Result<GeneralReport> {
    let run = |eps: &Rational| -> Result<HomogeneousReport> {
        let forms = homogeneous_system(&kept, eps)?;
        chi_homogeneous(&forms, &cfg.union)
    };
    let finish = |h: HomogeneousReport, trail: Vec<EpsStep>| -> Result<GeneralReport> {
        if h.chi % 2 != 0 {
            return Err(Error::OddHomogeneousChi { chi: h.chi });
        }
        Ok(GeneralReport {
            chi: h.chi / 2,
            shortcut: None,
            constraints: kept.clone(),
            eps_trail: trail,
            homogeneous: Some(h),
            oracle: None,
        })
    };
    match &cfg.eps_mode {
        EpsMode::Fixed(e0) => {
            if !e0.is_positive() {
                return Err(Error::Invalid("eps must be positive".into()));
            }
            let h = run(e0)?;
            let trail = vec![EpsStep { eps: e0.clone(), chi_homogeneous: h.chi }];
            finish(h, trail)
        }
        EpsMode::SubstituteStabilize => {
            let mut eps = cfg.initial_eps.clone();
            let mut prev = run(&eps)?;
            let mut trail = vec![EpsStep { eps: eps.clone(), chi_homogeneous: prev.chi }];
            for _ in 0..cfg.max_halvings {
                eps /= int(2);
                let cur = run(&eps)?;
                trail.push(EpsStep { eps: eps.clone(), chi_homogeneous: cur.chi });
                if cur.table() == prev.table() {
                    return finish(cur, trail);
                }
                prev = cur;
            }
            Err(Error::NoStabilization { attempts: cfg.max_halvings })
        }
    }
}

/// Human-readable one-line summary of an Ω entry.
pub fn describe_entry(e: &OmegaEntry) -> String {
    format!("[{}] n={} chi_bm={} contribution={}", format_signs(&e.signs), e.n, e.chi_bm, e.contribution)
}
