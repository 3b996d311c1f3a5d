//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::Rng;

use quadchi::arith::{int, rat, Rational, Sign};
use quadchi::cad::{euler_sign_conditions, CadOptions};
use quadchi::error::Error;
use quadchi::oracle::{chi_direct, OracleOptions};
use quadchi::pencil::{form_from_poly, pencil_at, pencil_charpoly, QuadraticForm};
use quadchi::pipeline::{
    chi_general, chi_homogeneous, chi_union, homogeneous_system, GeneralCaseConfig, UnionOptions,
};
use quadchi::poly::{parse_poly, pow_rat, sign_variations, var_names, MultiPoly};

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

fn forms_of(src: &[&str], vars: &[&str]) -> Vec<QuadraticForm> {
    let v = var_names(vars);
    src.iter().map(|s| form_from_poly(&parse_poly(s, &v).unwrap()).unwrap()).collect()
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let forms = forms_of(&["X0^2 + X1^2 - X2^2", "X0^2 - X1^2 - X2^2"], &["X0", "X1", "X2"]);
    let report = match chi_union(&forms, &UnionOptions::default()) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("chi_union failed: {e}")),
    };
    let elapsed = t.elapsed();
    let z = report.charpoly.vars().clone();
    let p = |s: &str| parse_poly(s, &z).unwrap();
    let sum_sq = p("Z1 + Z2").pow(2);
    let expected = [&sum_sq * &p("Z2 - Z1"), sum_sq.neg(), p("Z1 - Z2")];
    let mut problems = Vec::new();
    for (i, want) in expected.iter().enumerate() {
        if report.charpoly.coeffs.get(i) != Some(want) {
            problems.push(format!("C_{i} mismatch"));
        }
    }
    let mut rows: Vec<(usize, i64)> = report.entries.iter().map(|e| (e.n, e.chi_bm)).collect();
    rows.sort();
    if rows != [(1, 0), (1, 1), (2, 0)] {
        problems.push(format!("sign conditions on Omega {rows:?}"));
    }
    if report.chi() != 0 {
        problems.push(format!("chi_union = {}", report.chi()));
    }
    if elapsed >= Duration::from_secs(5) {
        problems.push(format!("runtime {}", secs(elapsed)));
    }
    if problems.is_empty() {
        Outcome::new(true, format!("C_0, C_1, C_2 exact; (n, chi_BM) = {rows:?}; chi_union = 0; {}", secs(elapsed)))
    } else {
        Outcome::new(false, problems.join("; "))
    }
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for k in 1..=5usize {
        let vars: Vec<String> = (0..=k).map(|i| format!("X{i}")).collect();
        let src: String = vars.iter().map(|v| format!("- {v}^2")).collect::<Vec<_>>().join(" ");
        let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
        let forms = forms_of(&[src.as_str()], &refs);
        let t = Instant::now();
        let got = chi_union(&forms, &UnionOptions::default()).map(|r| r.chi());
        let el = t.elapsed();
        let want = 1 + (-1i64).pow(k as u32);
        let pass = got.as_ref().ok() == Some(&want) && el < Duration::from_secs(30);
        ok &= pass;
        parts.push(format!("union k={k}: {got:?} (want {want}, {})", secs(el)));
    }
    for k in 2..=3usize {
        let polys = [common::sum_of_squares_plus(k, -1), common::sum_of_squares_plus(k, -1).neg()];
        let t = Instant::now();
        let got = chi_general(&polys, &GeneralCaseConfig::default()).map(|r| r.chi);
        let el = t.elapsed();
        let want = 1 + (-1i64).pow(k as u32 - 1);
        let pass = got.as_ref().ok() == Some(&want) && el < Duration::from_secs(30);
        ok &= pass;
        parts.push(format!("sphere k={k}: {got:?} (want {want}, {})", secs(el)));
    }
    Outcome::new(ok, parts.join("; "))
}

fn criterion_3() -> Outcome {
    let v = var_names(&["X1", "X2"]);
    let cases = [("disk", "X1^2 + X2^2 - 1", 1), ("point", "X1^2 + X2^2", 1), ("empty", "X1^2 + X2^2 + 1", 0)];
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, src, want) in cases {
        let t = Instant::now();
        let r = chi_general(&[parse_poly(src, &v).unwrap()], &GeneralCaseConfig::default());
        let el = t.elapsed();
        match r {
            Ok(r) => {
                let trail: Vec<String> =
                    r.eps_trail.iter().map(|s| format!("{}:{}", s.eps, s.chi_homogeneous)).collect();
                let n = r.eps_trail.len();
                let stable = n >= 2 && r.eps_trail[n - 1].chi_homogeneous == r.eps_trail[n - 2].chi_homogeneous;
                let pass = r.chi == want && stable && el < Duration::from_secs(30);
                ok &= pass;
                parts.push(format!("{name}: {} (want {want}, trail [{}], {})", r.chi, trail.join(" "), secs(el)));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: error {e}"));
            }
        }
    }
    Outcome::new(ok, parts.join("; "))
}

const CORPUS: u64 = 30;
const CORPUS_MIN_COMPLETE: usize = 20;

fn criterion_4() -> Outcome {
    let limit = Duration::from_secs(120);
    let mut completed = 0;
    let mut excluded = Vec::new();
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for seed in 0..CORPUS {
        let polys = common::corpus_instance(seed);
        let t = Instant::now();
        let general = chi_general(&polys, &GeneralCaseConfig::default());
        let tg = t.elapsed();
        let t = Instant::now();
        let direct = chi_direct(&polys, &OracleOptions::default());
        let td = t.elapsed();
        slowest = slowest.max(tg).max(td);
        match (general, direct) {
            (Err(e @ Error::ResourceLimit { .. }), _) | (_, Err(e @ Error::ResourceLimit { .. })) => {
                excluded.push(format!("seed {seed}: {e}"));
            }
            (Ok(g), Ok(d)) => {
                if g.chi != d.chi {
                    failures.push(format!("seed {seed}: general {} direct {}", g.chi, d.chi));
                } else if tg >= limit || td >= limit {
                    failures.push(format!("seed {seed}: general {} direct {}", secs(tg), secs(td)));
                } else {
                    completed += 1;
                }
            }
            (g, d) => failures.push(format!("seed {seed}: general {:?} direct {:?}", g.map(|r| r.chi), d.map(|r| r.chi))),
        }
    }
    let mut detail = format!("{completed}/{CORPUS} agree, slowest {}", secs(slowest));
    if !excluded.is_empty() {
        detail += &format!("; excluded: {}", excluded.join(", "));
    }
    if !failures.is_empty() {
        detail += &format!("; failures: {}", failures.join(", "));
    }
    Outcome::new(failures.is_empty() && completed >= CORPUS_MIN_COMPLETE, detail)
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Runs `check` on `cases` values drawn from `strategy`, returning the first
/// failure message.
fn sample<S: Strategy>(strategy: S, cases: u32, mut check: impl FnMut(S::Value) -> Result<(), String>) -> Result<(), String> {
    let mut r = runner(cases);
    for _ in 0..cases {
        let v = strategy.new_tree(&mut r).map_err(|e| e.to_string())?.current();
        check(v)?;
    }
    Ok(())
}

fn criterion_5a() -> Result<(), String> {
    sample((1usize..=3, 1usize..=2, proptest::num::u64::ANY), 30, |(s, l, seed)| {
        let mut rng = common::rng(seed);
        let family: Vec<MultiPoly> = (0..l).map(|_| common::random_quadratic(&mut rng, s, 3, 0.5)).collect();
        let q = common::sum_of_squares_plus(s, -1);
        let table = euler_sign_conditions(&family, &q, &CadOptions::default()).map_err(|e| e.to_string())?;
        let want = 1 + (-1i64).pow(s as u32 - 1);
        if table.total() != want {
            return Err(format!("s={s}, family {family:?}: total {} want {want}", table.total()));
        }
        Ok(())
    })
}

fn criterion_5b() -> Result<(), String> {
    sample((1usize..=2, 1usize..=2, proptest::num::u64::ANY, 1i64..=16, 1i64..=64), 20, |(k, l, seed, p, q)| {
        let mut rng = common::rng(seed);
        let polys: Vec<MultiPoly> = (0..l).map(|_| common::random_quadratic(&mut rng, k, 3, 0.5)).collect();
        let eps = rat(p, q);
        let forms = homogeneous_system(&polys, &eps).map_err(|e| e.to_string())?;
        let chi = chi_homogeneous(&forms, &UnionOptions::default()).map_err(|e| e.to_string())?.chi;
        if chi % 2 != 0 {
            return Err(format!("odd chi {chi} for {polys:?} at eps {eps}"));
        }
        Ok(())
    })
}

/// Determinant by Gaussian elimination over `Q`.
fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            let f = &m[r][c] / &piv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[r][j] -= t;
            }
        }
    }
    d
}

fn random_form(rng: &mut impl Rng, n: usize) -> QuadraticForm {
    let mut mat = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rat(rng.gen_range(-6..=6), 2);
            mat[i][j] = v.clone();
            mat[j][i] = v;
        }
    }
    QuadraticForm::from_matrix(mat).unwrap()
}

fn criterion_5c() -> Result<(), String> {
    sample((1usize..=3, 1usize..=4, proptest::num::u64::ANY), 50, |(s, n, seed)| {
        let mut rng = common::rng(seed);
        let forms: Vec<QuadraticForm> = (0..s).map(|_| random_form(&mut rng, n)).collect();
        let z: Vec<Rational> = (0..s).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=7))).collect();
        let cp = pencil_charpoly(&forms).map_err(|e| e.to_string())?;
        let c: Vec<Rational> = cp.coeffs.iter().map(|p| p.eval(&z).unwrap()).collect();
        let m = pencil_at(&forms, &z);
        for t in 0..=n as i64 {
            let tq = int(t);
            let mut shifted = m.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] += &tq;
            }
            let mut poly = pow_rat(&tq, n as u32);
            for (i, ci) in c.iter().enumerate() {
                poly += ci * pow_rat(&tq, i as u32);
            }
            if det(shifted) != poly {
                return Err(format!("mismatch at z = {z:?}, T = {t}"));
            }
        }
        Ok(())
    })
}

fn criterion_5d() -> Result<(), String> {
    use Sign::*;
    let rows: [(&[Sign], usize); 3] =
        [(&[Neg, Neg, Pos, Pos], 1), (&[Zero, Neg, Zero, Pos], 1), (&[Pos, Neg, Neg, Pos], 2)];
    for (signs, want) in rows {
        let got = sign_variations(signs);
        if got != want {
            return Err(format!("{signs:?}: {got} want {want}"));
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let parts = [("a", criterion_5a()), ("b", criterion_5b()), ("c", criterion_5c()), ("d", criterion_5d())];
    let ok = parts.iter().all(|(_, r)| r.is_ok());
    let detail: Vec<String> = parts
        .iter()
        .map(|(n, r)| match r {
            Ok(()) => format!("({n}) ok"),
            Err(e) => format!("({n}) {e}"),
        })
        .collect();
    Outcome::new(ok, detail.join("; "))
}

fn criterion_6() -> Outcome {
    let mut rows = Vec::new();
    let mut times = Vec::new();
    let mut ok = true;
    let oracle =
        OracleOptions { cad: CadOptions { max_cells: 200_000, ..CadOptions::default() }, ..OracleOptions::default() };
    for k in 2..=8usize {
        let p = common::hyperboloid(k);
        let mut best = Duration::MAX;
        let mut chi = None;
        for _ in 0..3 {
            let t = Instant::now();
            let r = chi_general(std::slice::from_ref(&p), &GeneralCaseConfig::default());
            best = best.min(t.elapsed());
            chi = Some(r.map(|r| r.chi));
        }
        let chi = chi.expect("ran");
        ok &= chi.as_ref().ok() == Some(&1);
        let t = Instant::now();
        let direct = chi_direct(std::slice::from_ref(&p), &oracle);
        let td = t.elapsed();
        let direct_s = match &direct {
            Ok(d) => {
                ok &= d.chi == 1;
                format!("{} in {}", d.chi, secs(td))
            }
            Err(Error::ResourceLimit { .. }) if k >= 5 => "ResourceLimit".to_string(),
            Err(e) => {
                ok = false;
                format!("error {e}")
            }
        };
        times.push(best.as_secs_f64().max(1e-6));
        rows.push(format!("k={k}: general {:?} in {}, direct {direct_s}", chi, secs(best)));
    }
    let slopes: Vec<f64> = times.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let half = slopes.len() / 2;
    let early = slopes[..half].iter().sum::<f64>() / half as f64;
    let late = slopes[slopes.len() - half..].iter().sum::<f64>() / half as f64;
    ok &= late < early;
    Outcome::new(ok, format!("{}; mean log-slope {early:.3} -> {late:.3}", rows.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 6] =
        [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5), (6, criterion_6)];
    let mut failed = false;
    for (n, f) in criteria {
        let o = f();
        println!("{} criterion {n}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed |= !o.ok;
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
