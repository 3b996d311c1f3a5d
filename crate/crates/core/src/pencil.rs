//! Quadratic forms, the characteristic polynomial of a linear pencil of
//! forms, and the Descartes index of a sign condition on its coefficients.

use std::sync::Arc;

use num_traits::Zero;

use crate::arith::{int, Rational, Scalar, Sign};
use crate::error::{Error, Result};
use crate::poly::{indexed_vars, sign_variations, MultiPoly};

/// Symmetric matrix `M` with `p(x) = ⟨Mx, x⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    mat: Vec<Vec<Rational>>,
}

impl QuadraticForm {
    /// Builds a form from a symmetric matrix. Returns `None` if it is not
    /// square and symmetric.
    pub fn from_matrix(mat: Vec<Vec<Rational>>) -> Option<Self> {
        let n = mat.len();
        if mat.iter().any(|r| r.len() != n) {
            return None;
        }
        for i in 0..n {
            for j in 0..i {
                if mat[i][j] != mat[j][i] {
                    return None;
                }
            }
        }
        Some(QuadraticForm { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.mat[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.mat[i][j] == self.mat[j][i]))
    }

    /// `⟨Mx, x⟩` as a polynomial over `vars`.
    pub fn to_poly(&self, vars: Arc<[String]>) -> MultiPoly {
        let n = self.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.mat[i][j].is_zero() {
                    let mut e = vec![0u32; n];
                    e[i] += 1;
                    e[j] += 1;
                    terms.push((e, self.mat[i][j].clone()));
                }
            }
        }
        MultiPoly::from_terms(vars, terms)
    }

    /// `⟨Mx, x⟩` at a rational point.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, row) in self.mat.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                acc += m * &x[i] * &x[j];
            }
        }
        acc
    }

    /// The form of `−p`.
    pub fn negated(&self) -> Self {
        QuadraticForm { mat: self.mat.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }
}

/// Matrix of a homogeneous quadratic polynomial (or of zero) in all of its
/// variables.
pub fn form_from_poly(p: &MultiPoly) -> Result<QuadraticForm> {
    if !p.is_zero() && !p.is_homogeneous(2) {
        return Err(Error::NotHomogeneousQuadratic { poly: p.to_string() });
    }
    let n = p.nvars();
    let mut mat = vec![vec![Rational::zero(); n]; n];
    for (e, c) in p.terms() {
        let idx: Vec<usize> =
            e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            mat[i][i] = c.clone();
        } else {
            let h = c / int(2);
            mat[i][j] = h.clone();
            mat[j][i] = h;
        }
    }
    Ok(QuadraticForm { mat })
}

/// Coefficients `C_0, …, C_k` of `det(M(Z) + T·I) = T^{k+1} + Σ C_i T^i`
/// where `M(Z) = Z_1 M_1 + ⋯ + Z_s M_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilCharPoly {
    pub s: usize,
    pub k: usize,
    pub coeffs: Vec<MultiPoly>,
}

impl PencilCharPoly {
    pub fn vars(&self) -> &Arc<[String]> {
        self.coeffs[0].vars()
    }
}

/// Characteristic polynomial of an `n × n` matrix over a commutative ring of
/// characteristic zero by the Faddeev–LeVerrier recurrence. Returns
/// `c_0, …, c_{n−1}` with `det(λI − A) = λ^n + Σ c_i λ^i`.
pub fn faddeev_leverrier<S: Scalar>(a: &[Vec<S>], zero: &S) -> Vec<S> {
    let n = a.len();
    let one = zero.one_like();
    let mut c = vec![zero.clone(); n + 1];
    c[n] = one.clone();
    let mut m = vec![vec![zero.clone(); n]; n];
    for step in 1..=n {
        // M_step = A·M_{step−1} + c_{n−step+1}·I
        let mut next = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for (l, mlj) in m.iter().enumerate() {
                    if !a[i][l].is_zero_value() && !mlj[j].is_zero_value() {
                        acc = acc.add_ref(&a[i][l].mul_ref(&mlj[j]));
                    }
                }
                if i == j {
                    acc = acc.add_ref(&c[n - step + 1]);
                }
                next[i][j] = acc;
            }
        }
        m = next;
        let mut tr = zero.clone();
        for i in 0..n {
            for (l, ml) in m.iter().enumerate() {
                if !a[i][l].is_zero_value() && !ml[i].is_zero_value() {
                    tr = tr.add_ref(&a[i][l].mul_ref(&ml[i]));
                }
            }
        }
        c[n - step] = tr.neg_ref().div_int(step as i64);
    }
    c.truncate(n);
    c
}

/// Symbolic coefficients of `det(M(Z) + T·I)` in fresh variables `Z1..Zs`.
pub fn pencil_charpoly(forms: &[QuadraticForm]) -> Result<PencilCharPoly> {
    let Some(first) = forms.first() else {
        return Err(Error::Invalid("pencil needs at least one form".into()));
    };
    let n = first.dim();
    if let Some(f) = forms.iter().find(|f| f.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: f.dim() });
    }
    let s = forms.len();
    let zvars = indexed_vars("Z", s, 1);
    let zero = MultiPoly::zero(zvars.clone());
    // A = −M(Z), so det(T·I − A) = det(M(Z) + T·I).
    let a: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let terms = forms.iter().enumerate().filter(|(_, f)| !f.mat[i][j].is_zero()).map(|(v, f)| {
                        let mut e = vec![0u32; s];
                        e[v] = 1;
                        (e, -f.mat[i][j].clone())
                    });
                    MultiPoly::from_terms(zvars.clone(), terms)
                })
                .collect()
        })
        .collect();
    let coeffs = faddeev_leverrier(&a, &zero);
    Ok(PencilCharPoly { s, k: n - 1, coeffs })
}

/// Numeric matrix `M(z) = Σ z_i M_i`.
pub fn pencil_at(forms: &[QuadraticForm], z: &[Rational]) -> Vec<Vec<Rational>> {
    let n = forms.first().map_or(0, |f| f.dim());
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (f, zi) in forms.iter().zip(z) {
        for i in 0..n {
            for j in 0..n {
                m[i][j] += &f.mat[i][j] * zi;
            }
        }
    }
    m
}

/// Number of sign variations in `σ(C_0), …, σ(C_k), +1`, which equals the
/// number of negative eigenvalues of `M(z)` for any `z` realizing `σ`.
pub fn descartes_index(sigma: &[Sign], k: usize) -> Result<usize> {
    if sigma.len() != k + 1 {
        return Err(Error::LengthMismatch { expected: k + 1, got: sigma.len() });
    }
    let mut seq = sigma.to_vec();
    seq.push(Sign::Pos);
    Ok(sign_variations(&seq))
}
