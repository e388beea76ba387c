//! Shared corpus and generators for the integration and acceptance suites.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use regchain::poly::{BigRat, MPoly, Vars};
use regchain::solve::SystemInput;
use regchain::sysfile;

/// Named systems exercised across the suites. All satisfy the triangular
/// shape over their base field and the radicality proxy.
pub fn corpus() -> Vec<(&'static str, SystemInput)> {
    let texts: Vec<(&'static str, &'static str)> = vec![
        (
            "paper",
            "params m=2 n=2\npoly X1 + 1 + Y1*X2\npoly X2 + Y2*X1\n",
        ),
        (
            "cubic-tail",
            "params m=1 n=2\npoly X1^2 - Y1\npoly X2 - X1^3\n",
        ),
        ("graph-line", "params m=1 n=1\npoly X1 - Y1\n"),
        ("sqrt", "params m=1 n=1\npoly X1^2 - Y1\n"),
        ("tower", "params m=1 n=2\npoly X1^2 - Y1\npoly X2 - X1\n"),
        ("const-point", "params m=0 n=1\npoly X1 - 1\n"),
        (
            "m0-tower",
            "params m=0 n=2\npoly X1^2 - 2\npoly X2^2 - X1\n",
        ),
        (
            "two-params-linear",
            "params m=2 n=2\npoly X1 + Y1 + Y2\npoly X2 - Y2*X1\n",
        ),
        (
            "three-levels",
            "params m=1 n=3\npoly X1^2 - Y1\npoly X2 - X1\npoly X3 - X2 - 1\n",
        ),
    ];
    texts
        .into_iter()
        .map(|(name, text)| (name, sysfile::parse_system(text).unwrap()))
        .collect()
}

pub fn paper_system() -> SystemInput {
    sysfile::parse_system("params m=2 n=2\npoly X1 + 1 + Y1*X2\npoly X2 + Y2*X1\n").unwrap()
}

/// Random zero-dimensional systems with n <= 3 and total degree <= 2:
/// graph-shaped generators (X_i^(d_i) plus lower terms) mixed by
/// ideal-preserving row operations, then filtered on the triangular shape
/// and the radicality proxy.
pub fn random_systems(rng: &mut ChaCha8Rng, count: usize) -> Vec<SystemInput> {
    let mut out = vec![];
    while out.len() < count {
        let m = rng.gen_range(0..=2usize);
        let n = rng.gen_range(1..=3usize);
        let vars = Vars::yx(m, n);
        let mut gens: Vec<MPoly<BigRat>> = vec![];
        let mut degree_budget = if n == 3 { 1 } else { 2 };
        for i in 0..n {
            let d_i = if rng.gen_bool(0.5) { degree_budget } else { 1 };
            if d_i == 2 {
                degree_budget = 1;
            }
            let mut e_main = vec![0u32; vars.len()];
            e_main[m + i] = d_i as u32;
            let mut terms = vec![(e_main, BigRat::from_integer(BigInt::from(1)))];
            // up to three extra terms of total degree <= 2 in the variables
            // below the main one
            let extras = rng.gen_range(1..=3);
            for _ in 0..extras {
                let c = loop {
                    let c: i64 = rng.gen_range(-3..=3);
                    if c != 0 {
                        break c;
                    }
                };
                let mut e = vec![0u32; vars.len()];
                let mut total = 0;
                let avail = m + i + 1; // Y block plus X1..X_i
                for _ in 0..2 {
                    if total >= 2 || rng.gen_bool(0.4) {
                        break;
                    }
                    let v = rng.gen_range(0..avail);
                    // keep the main variable strictly below d_i
                    if v == m + i && e[v] + 1 >= d_i as u32 {
                        continue;
                    }
                    e[v] += 1;
                    total += 1;
                }
                terms.push((e, BigRat::from_integer(BigInt::from(c))));
            }
            gens.push(MPoly::from_terms(&vars, terms));
        }
        // ideal-preserving mixing: f_i += +-f_j
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let other = gens[j].clone();
            gens[i] = if rng.gen_bool(0.5) {
                gens[i].add(&other)
            } else {
                gens[i].sub(&other)
            };
            if gens[i].is_zero() {
                gens[i] = other;
            }
        }
        if gens.iter().any(|g| g.is_zero()) {
            continue;
        }
        let sys = SystemInput::new(m, n, gens);
        match regchain::solve::triangularize(&sys) {
            Ok(t) if t.is_radical_proxy() && t.point_count() <= 8 => out.push(sys),
            _ => continue,
        }
    }
    out
}
