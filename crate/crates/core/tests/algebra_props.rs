mod common;

use num_traits::Zero;
use proptest::prelude::*;

use quadchi::arith::{int, rat, EpsPoly, EpsRational, Rational, Sign};
use quadchi::poly::{indexed_vars, resultant, sign_variations, MultiPoly, UniPoly};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn eps_poly() -> impl Strategy<Value = EpsPoly> {
    prop::collection::vec(small_rational(), 0..4).prop_map(EpsPoly::new)
}

fn eps_rational() -> impl Strategy<Value = EpsRational> {
    (eps_poly(), eps_poly())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| EpsRational::new(n, d).unwrap())
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Neg), Just(Sign::Zero), Just(Sign::Pos)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn homogenization_restricts_back(seed in any::<u64>(), k in 1usize..=3, x in prop::collection::vec(small_rational(), 3)) {
        let p = common::random_quadratic(&mut common::rng(seed), k, 3, 0.6);
        let h = p.homogenize_deg2("X0").unwrap();
        prop_assert!(h.is_zero() || h.is_homogeneous(2));
        let mut hx = vec![int(1)];
        hx.extend_from_slice(&x[..k]);
        prop_assert_eq!(h.eval(&hx).unwrap(), p.eval(&x[..k]).unwrap());
        // X0² · p(x / X0) at X0 = t.
        let t = int(3);
        let scaled: Vec<Rational> = x[..k].iter().map(|v| v / &t).collect();
        let mut hx = vec![t.clone()];
        hx.extend_from_slice(&x[..k]);
        prop_assert_eq!(h.eval(&hx).unwrap(), &t * &t * p.eval(&scaled).unwrap());
    }

    #[test]
    fn isolation_matches_sturm_count(coeffs in prop::collection::vec(-9i64..=9, 1..8)) {
        let p = UniPoly::from_ints(&coeffs);
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let sq = p.squarefree();
        let roots = sq.isolate_real_roots();
        let bound = int(1000);
        prop_assert_eq!(roots.len(), sq.count_roots(&-bound.clone(), &bound));
        for w in roots.windows(2) {
            prop_assert!(w[0].hi() <= w[1].lo());
        }
        for r in &roots {
            match r.exact() {
                Some(x) => prop_assert!(sq.eval(x).is_zero()),
                None => prop_assert!(Sign::of(&sq.eval(r.lo())) != Sign::of(&sq.eval(r.hi()))),
            }
        }
    }

    #[test]
    fn sign_variations_ignore_zeros(signs in prop::collection::vec(sign(), 0..10), at in 0usize..10) {
        let base = sign_variations(&signs);
        let mut padded = signs.clone();
        padded.insert(at.min(signs.len()), Sign::Zero);
        prop_assert_eq!(sign_variations(&padded), base);
        let nonzero: Vec<Sign> = signs.iter().copied().filter(|&s| s != Sign::Zero).collect();
        prop_assert_eq!(sign_variations(&nonzero), base);
        let flipped: Vec<Sign> = signs.iter().map(|s| s.negate()).collect();
        prop_assert_eq!(sign_variations(&flipped), base);
    }

    #[test]
    fn resultant_commutes_with_evaluation(
        f in prop::collection::vec(-4i64..=4, 6),
        g in prop::collection::vec(-4i64..=4, 6),
        a in small_rational(),
    ) {
        let vars = indexed_vars("X", 2, 1);
        let poly = |c: &[i64]| {
            let exps = [[0, 0], [1, 0], [0, 1], [1, 1], [0, 2], [2, 1]];
            MultiPoly::from_terms(vars.clone(), exps.iter().zip(c).map(|(e, &v)| (e.to_vec(), int(v))))
        };
        let (f, g) = (poly(&f), poly(&g));
        prop_assume!(f.degree_in(1) > 0 && g.degree_in(1) > 0);
        let lc = |p: &MultiPoly| p.coeffs_in(1).pop().unwrap();
        prop_assume!(!lc(&f).eval(&[a.clone(), int(0)]).unwrap().is_zero());
        prop_assume!(!lc(&g).eval(&[a.clone(), int(0)]).unwrap().is_zero());
        let r = resultant(&f, &g, 1).unwrap();
        let lhs = r.eval(&[a.clone(), int(0)]).unwrap();
        let rhs = resultant(&f.substitute_value(0, &a), &g.substitute_value(0, &a), 1).unwrap();
        prop_assert_eq!(Some(lhs), rhs.constant_value().or(Some(Rational::zero())));
    }

    #[test]
    fn eps_field_axioms(a in eps_rational(), b in eps_rational(), c in eps_rational()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), EpsRational::zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), EpsRational::one());
        }
        prop_assert_eq!(a.mul(&b).sign(), a.sign().mul(b.sign()));
    }

    #[test]
    fn eps_sign_matches_small_substitution(a in eps_rational()) {
        if let Some(t) = a.sign_threshold() {
            let e0 = &t / int(2);
            prop_assert_eq!(Sign::of(&a.substitute(&e0).unwrap()), a.sign());
        }
    }
}
