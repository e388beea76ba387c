//! Acceptance suite: one test per exit criterion, each printing a PASS line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use common::{corpus, paper_system, random_systems};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regchain::bounds;
use regchain::chow;
use regchain::frac::QY;
use regchain::interp;
use regchain::modular;
use regchain::poly::{BigRat, Coeff, FieldCoeff, MPoly, Vars};
use regchain::report;
use regchain::solve;
use regchain::triangular::delta_measure;
use regchain::valuation;
use std::time::Instant;

fn pass(criterion: u32, name: &str) {
    println!("acceptance criterion {criterion} ({name}): PASS");
}

/// Criterion 1: the two-equation parametric system solves to exactly
/// T1 = X1 + 1/(1 - Y1*Y2), T2 = X2 + Y2*X1, in under a second.
#[test]
fn criterion_1_paper_system_reproduction() {
    let sys = paper_system();
    let started = Instant::now();
    let t = solve::triangularize(&sys).unwrap();
    let elapsed = started.elapsed();

    let yv = Vars::new(vec!["Y1", "Y2"]);
    let xv = Vars::new(vec!["X1", "X2"]);
    let one = <QY as Coeff>::one();
    let y1 = QY::from_poly(MPoly::var(&yv, 0));
    let y2 = QY::from_poly(MPoly::var(&yv, 1));
    let x1 = MPoly::<QY>::var(&xv, 0);
    let x2 = MPoly::<QY>::var(&xv, 1);
    let t1_expected = x1.add(&MPoly::constant(&xv, one.sub(&y1.mul(&y2)).inv()));
    let t2_expected = x2.add(&x1.scale(&y2));
    assert_eq!(t.len(), 2);
    assert_eq!(*t.poly(1), t1_expected, "T1 differs");
    assert_eq!(*t.poly(2), t2_expected, "T2 differs");
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "triangularize took {elapsed:?}"
    );
    pass(1, "paper-system reproduction");
}

/// Criterion 2: a_n N_n and a_n^(G_n) ~T_n have integer polynomial
/// coefficients with Y-degrees within the Bezout bound d^n, for the paper
/// system and at least ten random systems with n <= 3, d <= 2.
#[test]
fn criterion_2_denominator_integrality() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    let mut systems = vec![paper_system()];
    systems.extend(random_systems(&mut rng, 10));
    assert!(systems.len() >= 11);
    for (idx, sys) in systems.iter().enumerate() {
        let t = solve::triangularize(sys).expect("corpus system solves");
        let chain = t.regular_chain().unwrap();
        let scaled = t.iterated_resultants();
        let monic = chow::monic_chow(&t).unwrap();
        let prim = chow::primitive_chow(&monic, sys.m);
        let d = BigInt::from(sys.max_degree().max(1));
        let deg_bound: u32 = d
            .pow(sys.n as u32)
            .try_into()
            .expect("desk-scale Bezout bound");
        let rep = chow::denominator_check(&t, &chain, &scaled, &prim.a_n, deg_bound);
        assert!(
            rep.pass(),
            "system {idx}: integrality failed: {:?}",
            rep.witnesses
        );
    }
    // the paper values: a_2 = +-(1 - Y1*Y2), a_2 N_2 = +-((1-Y1*Y2)X2 - Y2)
    let t = solve::triangularize(&systems[0]).unwrap();
    let chain = t.regular_chain().unwrap();
    let prim = chow::primitive_chow(&chow::monic_chow(&t).unwrap(), 2);
    assert_eq!(prim.a_n.to_canonical_string(), "Y1*Y2 - 1");
    let an = QY::from_poly(prim.a_n.clone());
    let cleared = chain.polys[1].scale(&an);
    assert_eq!(cleared.to_canonical_string(), "(Y1*Y2 - 1)*X2 + Y2");
    assert!(cleared.terms().iter().all(|(_, c)| c.is_poly()));
    pass(2, "denominator integrality");
}

/// Criterion 3: observed coefficient heights of N_l and T_l stay below the
/// closed-form bounds evaluated with Bezout-substituted degree and height.
#[test]
fn criterion_3_height_bound_soundness() {
    for (name, sys) in corpus() {
        let t = solve::triangularize(&sys).expect(name);
        let chain = t.regular_chain().unwrap();
        let (d, h) = report::system_data(&sys);
        let (bez_deg, bez_h) = bounds::bezout_substitution(sys.m as u64, sys.n as u64, &d, &h);
        let bez_h_rat = bez_h.hi().clone();
        for l in 1..=t.len() {
            let n_bound = bounds::theorem1_n_bound(sys.m as u64, l as u64, &bez_deg, &bez_h_rat);
            let t_bound = bounds::theorem1_t_bound(sys.m as u64, l as u64, &bez_deg, &bez_h_rat);
            let n_obs = valuation::observed_height_frac(&chain.polys[l - 1]);
            let t_obs = valuation::observed_height_frac(t.poly(l));
            assert!(
                n_obs <= n_bound.upper_f64(),
                "{name} level {l}: N height {n_obs} exceeds {}",
                n_bound.upper_f64()
            );
            assert!(
                t_obs <= t_bound.upper_f64(),
                "{name} level {l}: T height {t_obs} exceeds {}",
                t_bound.upper_f64()
            );
        }
    }
    pass(3, "height-bound soundness");
}

/// Criterion 4: `bounds --m 1 --n 12 --d 3 --h 20` reports the Bezout
/// degree 531441 exactly and a prime-range upper end of 110..140 bits,
/// in under a second.
#[test]
fn criterion_4_prime_size_anchor() {
    let started = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_regchain"))
        .args(["bounds", "--m", "1", "--n", "12", "--d", "3", "--h", "20"])
        .output()
        .expect("binary runs");
    let elapsed = started.elapsed();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entries = json.get("entries").unwrap();
    assert_eq!(
        entries["bezout_degree"]["value_exact"].as_str().unwrap(),
        "531441"
    );
    let bits: f64 = entries["prime_range_hi"]["value_bits"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(
        (110.0..=140.0).contains(&bits),
        "prime-range upper end has {bits} bits"
    );
    assert!(elapsed.as_secs_f64() < 1.0, "bounds took {elapsed:?}");
    pass(4, "124-bit prime-size anchor");
}

/// Criterion 5: interpolated coefficient logs never exceed
/// A + m L ln(M+1) + m ln L over 200 random trials per grid shape, with
/// exact round trips throughout.
#[test]
fn criterion_5_interpolation_norms() {
    let shapes: [(usize, u64, usize); 3] = [(2, 3, 1), (3, 10, 2), (5, 117, 2)];
    for (l, big_m, m) in shapes {
        let set = interp::EquiprojectableSet::build(m, big_m, l, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + l as u64);
        let card = set.card();
        for _ in 0..200 {
            // integer entries up to e^A with A = ln(10^6)
            let values: Vec<BigRat> = (0..card)
                .map(|_| {
                    BigRat::from_integer(BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)))
                })
                .collect();
            let run = interp::interpolate(&values, &set).unwrap();
            assert!(
                run.observed <= run.bound + 1e-9,
                "norm bound violated: {} > {}",
                run.observed,
                run.bound
            );
            let back = interp::evaluate_at_set(&run.poly, &set).unwrap();
            assert_eq!(back, values, "round trip failed");
        }
    }
    pass(5, "interpolation norm bounds");
}

/// Criterion 6: modular delta profiles agree with the exact ones on at
/// least 95% of non-failing runs over 50 random primes in [10^3, 10^5] per
/// corpus system, every mismatch carrying a divisibility certificate.
#[test]
fn criterion_6_modular_agreement() {
    let started = Instant::now();
    let lo = BigInt::from(1_000);
    let hi = BigInt::from(100_000);
    let mut total_ok = 0usize;
    let mut total_match = 0usize;
    for (name, sys) in corpus() {
        let primes: Vec<BigInt> = (0..50)
            .map(|k| modular::random_prime_in_range(&lo, &hi, 7_000 + k).unwrap())
            .collect();
        let report = modular::cross_check(&sys, &primes).expect(name);
        let ok = report.runs.len() - report.failures();
        assert!(
            report.all_mismatches_certified(),
            "{name}: uncertified mismatch in {:?}",
            report.runs
        );
        total_ok += ok;
        total_match += report.matches();
    }
    assert!(total_ok > 0);
    let rate = total_match as f64 / total_ok as f64;
    assert!(
        rate >= 0.95,
        "agreement rate {rate} below 95% ({total_match}/{total_ok})"
    );
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "cross-check took {elapsed:?}"
    );
    pass(6, "modular degree agreement");
}

/// Criterion 7: for the line X1 = Y1 the epsilon substitution yields a
/// lowest-order coefficient divisible by the primitive Chow form of the
/// fiber, agreeing with the finite-projection substitution up to sign; the
/// degenerate line Y1 = 0 exhibits the failure of the finiteness
/// assumption.
#[test]
fn criterion_7_chow_specialization() {
    let line = chow::MultiChow::from_text(
        "groups 2 arity 3\nU0_0*U1_1 + U0_0*U1_2 - U0_1*U1_0 - U0_2*U1_0\n",
    )
    .unwrap();
    let split = chow::substitute_epsilon(&line).unwrap();
    // primitive Chow form of the fiber X1 = Y1
    let yv = Vars::new(vec!["Y1"]);
    let xv = Vars::new(vec!["X1"]);
    let y1 = QY::from_poly(MPoly::var(&yv, 0));
    let x1 = MPoly::<QY>::var(&xv, 0);
    let t = regchain::triangular::TriangularSet::new(
        xv.clone(),
        vec![x1.sub(&MPoly::constant(&xv, y1))],
    )
    .unwrap();
    let fiber = chow::primitive_chow(&chow::monic_chow(&t).unwrap(), 1);
    let embedded = fiber.body.embed(split.c_zero.vars());
    let quotient = split.c_zero.exact_div(&embedded);
    assert!(
        quotient.is_some(),
        "primitive fiber Chow form does not divide the lowest-order coefficient"
    );
    let kps = chow::substitute_kps(&line).embed(split.c_zero.vars());
    assert!(
        kps == split.c_zero || kps == split.c_zero.neg(),
        "substitutions disagree beyond sign"
    );

    let degenerate =
        chow::MultiChow::from_text("groups 2 arity 3\nU0_0*U1_2 - U0_2*U1_0\n").unwrap();
    let out = chow::substitute_kps(&degenerate);
    assert_eq!(out.to_canonical_string(), "-1*Y1*U1");
    // no U0 power at all: not the Chow form of any zero-dimensional fiber
    let u0 = out.vars().index_of("U0").unwrap();
    assert_eq!(out.degree_in(u0), 0);
    pass(7, "Chow specialization operators");
}

/// Criterion 8: substituting U0 <- -(U1 X1 + ... + Un Xn) into the monic
/// Chow form and reducing modulo the set yields zero on every corpus
/// system.
#[test]
fn criterion_8_monic_chow_root_property() {
    for (name, sys) in corpus() {
        let t = solve::triangularize(&sys).expect(name);
        let c = chow::monic_chow(&t).expect(name);
        let n = t.len();
        let mut names: Vec<String> = (0..=n).map(|i| format!("U{i}")).collect();
        names.extend(t.vars().names().iter().cloned());
        let big = Vars::new(names);
        let cbig = c.embed(&big);
        let mut lin = MPoly::<QY>::zero(&big);
        for i in 1..=n {
            lin = lin.add(&MPoly::var(&big, i).mul(&MPoly::var(&big, n + 1 + (i - 1))));
        }
        let substituted = cbig.substitute(0, &lin.neg());
        assert!(
            t.normal_form(&substituted).is_zero(),
            "{name}: root property fails"
        );
    }
    pass(8, "monic Chow root property");
}

/// The delta profile of the paper system is stable across the exact and
/// modular routes (solution counts included).
#[test]
fn solution_counts_match_across_fields() {
    let sys = paper_system();
    let t = solve::triangularize(&sys).unwrap();
    assert_eq!(t.point_count(), 1);
    assert_eq!(delta_measure(&t), vec![2, 1]);
    for p in [5u32, 7, 11] {
        let run = modular::degree_profile(&sys, Some(&BigInt::from(p)));
        assert_eq!(
            run.outcome,
            modular::Outcome::DegreeProfile(vec![2, 1]),
            "at {p}"
        );
    }
}
