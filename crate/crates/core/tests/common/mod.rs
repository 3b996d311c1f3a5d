#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quadchi::arith::int;
use quadchi::poly::{indexed_vars, Monomial, MultiPoly};

/// All exponent vectors of total degree at most two in `n` variables.
pub fn quadratic_monomials(n: usize) -> Vec<Monomial> {
    let mut out = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        out.push(e);
    }
    for i in 0..n {
        for j in i..n {
            let mut e = vec![0; n];
            e[i] += 1;
            e[j] += 1;
            out.push(e);
        }
    }
    out
}

/// A nonconstant polynomial of degree at most two with integer
/// coefficients in `[-c, c]`, each monomial present with probability
/// `density`.
pub fn random_quadratic(rng: &mut ChaCha8Rng, n: usize, c: i64, density: f64) -> MultiPoly {
    let vars = indexed_vars("X", n, 1);
    loop {
        let mut terms = Vec::new();
        for e in quadratic_monomials(n) {
            if rng.gen_bool(density) {
                terms.push((e, int(rng.gen_range(-c..=c))));
            }
        }
        let p = MultiPoly::from_terms(vars.clone(), terms);
        if !p.is_constant() {
            return p;
        }
    }
}

/// A seeded instance: `k ≤ 3` variables, `ℓ ≤ 2` constraints.
pub fn corpus_instance(seed: u64) -> Vec<MultiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=3);
    let l = rng.gen_range(1..=2);
    (0..l).map(|_| random_quadratic(&mut rng, k, 3, 0.5)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `X1² + ⋯ + X_{k−1}² − X_k² − 1`, whose sublevel set is contractible.
pub fn hyperboloid(k: usize) -> MultiPoly {
    let vars = indexed_vars("X", k, 1);
    let mut terms = vec![(vec![0; k], int(-1))];
    for i in 0..k {
        let mut e = vec![0; k];
        e[i] = 2;
        terms.push((e, int(if i + 1 == k { -1 } else { 1 })));
    }
    MultiPoly::from_terms(vars, terms)
}

/// `ΣX_i² + c` in `k` variables.
pub fn sum_of_squares_plus(k: usize, c: i64) -> MultiPoly {
    let vars = indexed_vars("X", k, 1);
    let mut terms = vec![(vec![0; k], int(c))];
    for i in 0..k {
        let mut e = vec![0; k];
        e[i] = 2;
        terms.push((e, int(1)));
    }
    MultiPoly::from_terms(vars, terms)
}
