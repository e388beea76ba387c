//! JSON reports behind the command-line and C interfaces.
//!
//! Exit-code contract: 0 success, 2 parse errors, 3 assumption failures
//! (the ideal is not zero-dimensional or not in triangular shape),
//! 4 verification failures.

use crate::bounds;
use crate::chow;
use crate::frac::QY;
use crate::modular::{self, FailureReason, Outcome};
use crate::poly::{BigRat, MPoly};
use crate::solve::{self, SolveError, SystemInput};
use crate::triangular::{delta_measure, TriangularSet};
use crate::valuation;
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Parse(#[from] crate::sysfile::ParseError),
    #[error("{0}")]
    Assumption(#[from] SolveError),
    #[error("verification failed")]
    Verification(Value),
    #[error("{0}")]
    Other(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Parse(_) => 2,
            AppError::Assumption(_) => 3,
            AppError::Verification(_) => 4,
            AppError::Other(_) => 2,
        }
    }
}

fn field_tag(m: usize) -> String {
    if m == 0 {
        "Q".to_string()
    } else {
        format!("Q(Y1..Y{m})")
    }
}

fn canonical_list(polys: &[MPoly<QY>]) -> Vec<String> {
    polys.iter().map(|p| p.to_canonical_string()).collect()
}

pub fn triangularize_report(sys: &SystemInput) -> Result<Value, AppError> {
    let t = solve::triangularize(sys)?;
    Ok(json!({
        "field": field_tag(sys.m),
        "T": canonical_list(t.polys()),
        "degrees": t.degrees(),
    }))
}

pub fn chain_report(sys: &SystemInput) -> Result<Value, AppError> {
    let t = solve::triangularize(sys)?;
    let chain = t
        .regular_chain()
        .map_err(|e| AppError::Other(e.to_string()))?;
    Ok(json!({
        "field": field_tag(sys.m),
        "D": canonical_list(&chain.denoms),
        "N": canonical_list(&chain.polys),
    }))
}

pub fn delta_report(sys: &SystemInput) -> Result<Value, AppError> {
    let t = solve::triangularize(sys)?;
    Ok(json!({ "delta": delta_measure(&t) }))
}

pub fn chow_report(sys: &SystemInput) -> Result<Value, AppError> {
    let t = solve::triangularize(sys)?;
    let monic = chow::monic_chow(&t).map_err(|e| AppError::Other(e.to_string()))?;
    let prim = chow::primitive_chow(&monic, sys.m);
    Ok(json!({
        "monic": monic.to_canonical_string(),
        "primitive": prim.body.to_canonical_string(),
        "a_n": prim.a_n.to_canonical_string(),
        "u_degree": t.point_count(),
    }))
}

/// Input data (d, h) read off the generators: max total degree and a
/// rational upper bound on the coefficient heights after clearing each
/// generator's rational coefficients (ln|c| <= bits(c) * ln 2, with ln 2
/// rounded up).
pub fn system_data(sys: &SystemInput) -> (BigInt, BigRat) {
    let d = BigInt::from(sys.max_degree().max(1));
    let ln2_up = BigRat::new(BigInt::from(6_931_472u64), BigInt::from(10_000_000u64));
    let mut h_exact = BigRat::from_integer(BigInt::from(0));
    for g in &sys.gens {
        let mut lcm = BigInt::from(1);
        for (_, c) in g.terms() {
            let den = c.denom();
            let gcd = num_integer::Integer::gcd(&lcm, den);
            lcm = &lcm / &gcd * den;
        }
        for (_, c) in g.terms() {
            let cleared = (c * BigRat::from_integer(lcm.clone())).to_integer();
            if num_traits::One::is_one(cleared.magnitude()) {
                continue;
            }
            let bits = cleared.magnitude().bits();
            let ub = BigRat::from_integer(BigInt::from(bits)) * &ln2_up;
            if ub > h_exact {
                h_exact = ub;
            }
        }
    }
    (d, h_exact)
}

pub fn bounds_report(m: u64, n: u64, d: &BigInt, h: &BigRat, level: Option<u64>) -> Value {
    bounds::full_report(m, n, d, h, level).to_json()
}

pub fn prime_range_report(m: u64, n: u64, d: &BigInt, h: &BigRat) -> Value {
    let pb = bounds::modular_prime_bound(m, n, d, h);
    let (lo, hi) = bounds::prime_range_ints(&pb);
    json!({
        "H_A": pb.h_a.upper_decimal(6),
        "lo": lo.to_string(),
        "hi": hi.to_string(),
        "hi_bits": pb.range_hi_bits.upper_decimal(3),
        "bezout_degree": pb.bezout_degree.to_string(),
    })
}

fn run_to_json(prime: Option<&BigInt>, outcome: &Outcome) -> Value {
    let mut obj = serde_json::Map::new();
    if let Some(p) = prime {
        obj.insert("prime".into(), json!(p.to_string()));
    }
    match outcome {
        Outcome::DegreeProfile(d) => {
            obj.insert("delta".into(), json!(d));
        }
        Outcome::Failure(reason) => {
            obj.insert("failure".into(), json!(reason.to_string()));
        }
    }
    Value::Object(obj)
}

pub enum PrimeChoice {
    Fixed(BigInt),
    Auto { seed: u64, trials: usize },
}

pub fn modular_delta_report(sys: &SystemInput, choice: &PrimeChoice) -> Result<Value, AppError> {
    match choice {
        PrimeChoice::Fixed(p) => {
            let run = modular::degree_profile(sys, Some(p));
            if let Outcome::Failure(FailureReason::NotZeroDim | FailureReason::NotLazardShape) =
                run.outcome
            {
                // assumption failures surface through the exit code
                return Err(AppError::Assumption(SolveError::NotLazardShape(format!(
                    "modular run at {p} failed: {:?}",
                    run.outcome
                ))));
            }
            Ok(json!({ "runs": [run_to_json(Some(p), &run.outcome)] }))
        }
        PrimeChoice::Auto { seed, trials } => {
            let (d, h) = system_data(sys);
            let pb = bounds::modular_prime_bound(sys.m as u64, sys.n as u64, &d, &h);
            let (lo, hi) = bounds::prime_range_ints(&pb);
            let mut runs = vec![];
            for k in 0..*trials {
                let p = modular::random_prime_in_range(&lo, &hi, seed + k as u64)
                    .map_err(|e| AppError::Other(e.to_string()))?;
                let run = modular::degree_profile(sys, Some(&p));
                runs.push(run_to_json(Some(&p), &run.outcome));
            }
            Ok(json!({
                "prime_range": { "lo": lo.to_string(), "hi": hi.to_string() },
                "runs": runs,
            }))
        }
    }
}

/// The integrality checks and the height-bound comparisons, per level.
/// Verification failures carry the report in the error.
pub fn verify_report(sys: &SystemInput) -> Result<Value, AppError> {
    let t = solve::triangularize(sys)?;
    let chain = t
        .regular_chain()
        .map_err(|e| AppError::Other(e.to_string()))?;
    let (d, h) = system_data(sys);
    let m = sys.m as u64;
    let n = sys.n as u64;
    let (bez_deg, bez_h) = bounds::bezout_substitution(m, n, &d, &h);
    let deg_bound: u32 = (&bez_deg)
        .try_into()
        .unwrap_or(u32::MAX);

    // integrality of a_l N_l and a_l^{G_l} ~T_l for every prefix
    let mut prop_dh_pass = true;
    let mut prop_dh_details = vec![];
    for l in 1..=t.len() {
        let prefix = t.prefix(l);
        let pchain = prefix
            .regular_chain()
            .map_err(|e| AppError::Other(e.to_string()))?;
        let pscaled = prefix.iterated_resultants();
        let monic = chow::monic_chow(&prefix).map_err(|e| AppError::Other(e.to_string()))?;
        let prim = chow::primitive_chow(&monic, sys.m);
        let report = chow::denominator_check(&prefix, &pchain, &pscaled, &prim.a_n, deg_bound);
        if !report.pass() {
            prop_dh_pass = false;
        }
        prop_dh_details.push(json!({
            "level": l,
            "pass": report.pass(),
            "G": report.g_n,
            "N_deg": report.n_deg,
            "T_deg": report.t_deg,
            "witnesses": report.witnesses,
        }));
    }

    // observed heights against the closed-form bounds
    let bez_h_rat = bez_h.hi().clone();
    let mut theorem_pass = true;
    let mut theorem_details = vec![];
    for l in 1..=t.len() {
        let n_bound = bounds::theorem1_n_bound(m, l as u64, &bez_deg, &bez_h_rat);
        let t_bound = bounds::theorem1_t_bound(m, l as u64, &bez_deg, &bez_h_rat);
        let n_obs = valuation::observed_height_frac(&chain.polys[l - 1]);
        let t_obs = valuation::observed_height_frac(t.poly(l));
        let n_deg = valuation::observed_degree_frac(&chain.polys[l - 1]);
        let t_deg = valuation::observed_degree_frac(t.poly(l));
        let n_deg_bound = bez_deg.clone();
        let t_deg_bound = BigInt::from(2) * &bez_deg * &bez_deg;
        let ok = n_obs <= n_bound.upper_f64()
            && t_obs <= t_bound.upper_f64()
            && BigInt::from(n_deg) <= n_deg_bound
            && BigInt::from(t_deg) <= t_deg_bound;
        if !ok {
            theorem_pass = false;
        }
        theorem_details.push(json!({
            "level": l,
            "pass": ok,
            "N_height_observed": n_obs,
            "N_height_bound": n_bound.upper_f64(),
            "T_height_observed": t_obs,
            "T_height_bound": t_bound.upper_f64(),
        }));
    }

    let report = json!({
        "propDH": if prop_dh_pass { "pass" } else { "fail" },
        "theorem1": if theorem_pass { "pass" } else { "fail" },
        "propDH_levels": prop_dh_details,
        "theorem1_levels": theorem_details,
    });
    if prop_dh_pass && theorem_pass {
        Ok(report)
    } else {
        Err(AppError::Verification(report))
    }
}

/// Text rendering of a JSON report, one `key: value` line per top-level
/// entry.
pub fn to_text(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let mut out = String::new();
            for (k, val) in map {
                out.push_str(&format!("{k}: {val}\n"));
            }
            out
        }
        other => format!("{other}\n"),
    }
}

/// Used by tests: exact triangular set alongside the report machinery.
pub fn solve_set(sys: &SystemInput) -> Result<TriangularSet<QY>, AppError> {
    Ok(solve::triangularize(sys)?)
}
