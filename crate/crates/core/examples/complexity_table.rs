//! Timing of the pencil pipeline against a direct decomposition on the
//! one-sheeted hyperboloids `X1² + … + X_{k−1}² − X_k² − 1 ≤ 0`.
//!
//! Usage: `cargo run --release --example complexity_table [MAX_K]`.

use std::time::{Duration, Instant};

use quadchi::cad::CadOptions;
use quadchi::oracle::{chi_direct, OracleOptions};
use quadchi::pipeline::{chi_general, GeneralCaseConfig};
use quadchi::poly::{indexed_vars, parse_poly, MultiPoly};
use quadchi::Error;

fn hyperboloid(k: usize) -> MultiPoly {
    let vars = indexed_vars("X", k, 1);
    let src: String = (1..k).map(|i| format!("X{i}^2 + ")).collect::<String>() + &format!("0 - X{k}^2 - 1");
    parse_poly(&src, &vars).expect("valid polynomial")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn main() {
    let max_k: usize = std::env::args().nth(1).map_or(8, |s| s.parse().expect("MAX_K is an integer"));
    let oracle =
        OracleOptions { cad: CadOptions { max_cells: 200_000, ..CadOptions::default() }, ..OracleOptions::default() };
    println!("{:>3} {:>6} {:>12} {:>8} {:>12} {:>8}", "k", "chi", "general", "cells", "direct", "cells");
    for k in 2..=max_k {
        let p = vec![hyperboloid(k)];
        let (general, tg) = timed(|| chi_general(&p, &GeneralCaseConfig::default()).expect("general case"));
        let (direct, td) = timed(|| chi_direct(&p, &oracle));
        let (direct_t, direct_cells) = match direct {
            Ok(d) => {
                assert_eq!(d.chi, general.chi, "disagreement at k = {k}");
                (format!("{td:.2?}"), d.cells_in_set.to_string())
            }
            Err(Error::ResourceLimit { .. }) => ("limit".into(), "-".into()),
            Err(e) => panic!("direct decomposition failed at k = {k}: {e}"),
        };
        println!(
            "{k:>3} {:>6} {:>12} {:>8} {direct_t:>12} {direct_cells:>8}",
            general.chi,
            format!("{tg:.2?}"),
            general.cells()
        );
    }
}
