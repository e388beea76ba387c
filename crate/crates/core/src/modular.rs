//! Modular degree detection: reduce a system mod p, solve over Fp(Y),
//! read off the delta profile, and cross-check against the exact one.
//! Prime sizes come from the closed-form recipe in `bounds`.

use crate::fp::FpElt;
use crate::frac::Frac;
use crate::poly::{gcd_mpoly, Coeff, FieldCoeff, MPoly, Vars};
use crate::solve::{self, SolveError, SystemInput};
use crate::triangular::delta_measure;
use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModularError {
    #[error("no prime found in [{0}, {1}] within the draw budget")]
    RangeTooNarrow(BigInt, BigInt),
}

/// Why a modular run produced no degree profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// A generator vanishes or degenerates to a constant modulo p.
    BadPrime,
    /// A coefficient denominator is divisible by p.
    DenominatorVanishesModP,
    NotZeroDim,
    NotLazardShape,
    /// Reserved for solvers that mirror rational arithmetic modulo p; the
    /// direct Fp(Y) solver cannot hit it.
    SPolynomialDenominatorHitsP,
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FailureReason::BadPrime => "BadPrime",
            FailureReason::DenominatorVanishesModP => "DenominatorVanishesModP",
            FailureReason::NotZeroDim => "NotZeroDim",
            FailureReason::NotLazardShape => "NotLazardShape",
            FailureReason::SPolynomialDenominatorHitsP => "SPolynomialDenominatorHitsP",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    DegreeProfile(Vec<u32>),
    Failure(FailureReason),
}

/// One modular run at a prime (or the exact run when `prime` is None).
#[derive(Debug, Clone)]
pub struct ModularRun {
    pub prime: Option<BigInt>,
    pub outcome: Outcome,
}

/// Coefficientwise reduction of the generators modulo p, rewritten over
/// Fp(Y)[X]. Errors when a generator vanishes or degenerates to a constant.
pub fn reduce_mod_p(
    sys: &SystemInput,
    p: &BigInt,
) -> Result<Vec<MPoly<Frac<FpElt>>>, FailureReason> {
    let yvars = Vars::new((1..=sys.m).map(|i| format!("Y{i}")).collect::<Vec<String>>());
    let xvars = Vars::new((1..=sys.n).map(|i| format!("X{i}")).collect::<Vec<String>>());
    let mut out = Vec::with_capacity(sys.gens.len());
    for g in &sys.gens {
        let reduced = solve::split_poly(g, sys.m, &yvars, &xvars, &|c| {
            let dm = c.denom().mod_floor(p);
            if Zero::is_zero(&dm) {
                return None;
            }
            let den = FpElt::new(c.denom().clone(), p);
            let num = FpElt::new(c.numer().clone(), p);
            Some(Frac::constant(&yvars, num.mul(&den.inv())))
        })
        .ok_or(FailureReason::DenominatorVanishesModP)?;
        if reduced.is_zero() || reduced.is_constant() {
            return Err(FailureReason::BadPrime);
        }
        out.push(reduced);
    }
    Ok(out)
}

/// Solves the system over Fp(Y) (or Q(Y) when `prime` is None) and returns
/// the per-level delta profile. Solver-side failures become Failure
/// outcomes, never a wrong profile.
pub fn degree_profile(sys: &SystemInput, prime: Option<&BigInt>) -> ModularRun {
    let outcome = match prime {
        None => match solve::triangularize(sys) {
            Ok(t) => Outcome::DegreeProfile(delta_measure(&t)),
            Err(e) => Outcome::Failure(match e {
                SolveError::NotZeroDim(_) => FailureReason::NotZeroDim,
                _ => FailureReason::NotLazardShape,
            }),
        },
        Some(p) => {
            let xvars =
                Vars::new((1..=sys.n).map(|i| format!("X{i}")).collect::<Vec<String>>());
            match reduce_mod_p(sys, p) {
                Err(reason) => Outcome::Failure(reason),
                Ok(gens) => match solve::triangularize_frac(&gens, &xvars) {
                    Ok(t) => Outcome::DegreeProfile(delta_measure(&t)),
                    Err(SolveError::NotZeroDim(_)) => Outcome::Failure(FailureReason::NotZeroDim),
                    Err(_) => Outcome::Failure(FailureReason::NotLazardShape),
                },
            }
        }
    };
    ModularRun {
        prime: prime.cloned(),
        outcome,
    }
}

/// 40-round Miller-Rabin with bases drawn from the given generator.
pub fn is_probable_prime(n: &BigInt, rounds: u32, rng: &mut ChaCha8Rng) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13] {
        let s = BigInt::from(small);
        if *n == s {
            return true;
        }
        if Zero::is_zero(&(n % &s)) {
            return false;
        }
    }
    // n - 1 = d * 2^s
    let one = BigInt::from(1);
    let n1 = n - &one;
    let mut d = n1.clone();
    let mut s = 0u64;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for _ in 0..rounds {
        let a = rng.gen_bigint_range(&BigInt::from(2), &(n - &one));
        let mut x = a.modpow(&d, n);
        if One::is_one(&x) || x == n1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&BigInt::from(2), n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniformly samples candidates in [lo, hi] until one passes 40 rounds of
/// Miller-Rabin. Deterministic for a fixed seed. The draw budget is
/// 10 ln(hi) candidates.
pub fn random_prime_in_range(
    lo: &BigInt,
    hi: &BigInt,
    seed: u64,
) -> Result<BigInt, ModularError> {
    assert!(*lo >= BigInt::from(2), "range must start at 2 or above");
    if lo > hi {
        return Err(ModularError::RangeTooNarrow(lo.clone(), hi.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = (10.0 * crate::frac::ln_abs_bigint(hi)).ceil().max(8.0) as u64;
    let upper = hi + BigInt::from(1);
    for _ in 0..budget {
        let candidate = rng.gen_bigint_range(lo, &upper);
        if is_probable_prime(&candidate, 40, &mut rng) {
            return Ok(candidate);
        }
    }
    Err(ModularError::RangeTooNarrow(lo.clone(), hi.clone()))
}

/// Outcome of the Jacobian-regularity test.
#[derive(Debug, Clone)]
pub struct JacobianReport {
    pub ok: bool,
    /// Canonical string of the Jacobian determinant.
    pub jacobian: String,
    /// A zero-divisor witness when the check fails.
    pub witness: Option<String>,
}

/// Computes J = det(df_i/dX_j) and certifies that it is invertible modulo
/// the triangular set of the system, which means J vanishes on no generic
/// solution.
pub fn jacobian_check(sys: &SystemInput) -> Result<JacobianReport, SolveError> {
    assert_eq!(sys.gens.len(), sys.n, "Jacobian check needs a square system");
    let n = sys.n;
    let mut mat: Vec<Vec<MPoly<crate::poly::BigRat>>> = Vec::with_capacity(n);
    for g in &sys.gens {
        let row = (0..n).map(|j| g.derivative(sys.m + j)).collect();
        mat.push(row);
    }
    let vars = sys.vars();
    let jac = crate::poly::bareiss_det(&mut mat, &vars);
    let jac_str = jac.to_canonical_string();
    if jac.is_zero() {
        return Ok(JacobianReport {
            ok: false,
            jacobian: jac_str,
            witness: Some("0".to_string()),
        });
    }
    let t = solve::triangularize(sys)?;
    let yvars = Vars::new((1..=sys.m).map(|i| format!("Y{i}")).collect::<Vec<String>>());
    let xvars = Vars::new((1..=sys.n).map(|i| format!("X{i}")).collect::<Vec<String>>());
    let jac_qy = solve::split_poly(&jac, sys.m, &yvars, &xvars, &|c| {
        Some(Frac::from_rat(&yvars, c))
    })
    .unwrap();
    match t.invert_modulo(&jac_qy) {
        Ok(_) => Ok(JacobianReport {
            ok: true,
            jacobian: jac_str,
            witness: None,
        }),
        Err(crate::triangular::TriangularError::ZeroDivisor { witness }) => Ok(JacobianReport {
            ok: false,
            jacobian: jac_str,
            witness: Some(witness),
        }),
        Err(_) => Ok(JacobianReport {
            ok: false,
            jacobian: jac_str,
            witness: Some("0".to_string()),
        }),
    }
}

/// How a modular run at one prime compares against the exact profile.
#[derive(Debug, Clone)]
pub enum RunComparison {
    Match,
    Mismatch {
        got: Vec<u32>,
        /// Divisibility explanations found for the disagreement.
        certificates: Vec<String>,
    },
    Failed(FailureReason),
}

#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub exact: Vec<u32>,
    pub runs: Vec<(BigInt, RunComparison)>,
}

impl CrossCheckReport {
    pub fn matches(&self) -> usize {
        self.runs
            .iter()
            .filter(|(_, c)| matches!(c, RunComparison::Match))
            .count()
    }
    pub fn failures(&self) -> usize {
        self.runs
            .iter()
            .filter(|(_, c)| matches!(c, RunComparison::Failed(_)))
            .count()
    }
    pub fn mismatches(&self) -> usize {
        self.runs
            .iter()
            .filter(|(_, c)| matches!(c, RunComparison::Mismatch { .. }))
            .count()
    }
    /// Every mismatch carries at least one divisibility certificate.
    pub fn all_mismatches_certified(&self) -> bool {
        self.runs.iter().all(|(_, c)| match c {
            RunComparison::Mismatch { certificates, .. } => !certificates.is_empty(),
            _ => true,
        })
    }
}

/// Divisibility certificates explaining why the profile can change mod p:
/// a numerator/denominator content divisible by p, a leading-coefficient
/// (degree-dropping) divisibility, or coprimality lost modulo p.
fn certify_mismatch(
    fractions: &[(String, Frac<BigInt>)],
    p: &BigInt,
) -> Vec<String> {
    let mut certs = vec![];
    for (label, f) in fractions {
        for (side, poly) in [("numerator", f.num()), ("denominator", f.den())] {
            if poly.is_zero() {
                continue;
            }
            let content = poly.scalar_content();
            if Zero::is_zero(&(&content % p)) {
                certs.push(format!("{label}: {side} content divisible by {p}"));
                continue;
            }
            let reduced = poly.map_coeffs(|c| c.mod_floor(p));
            if reduced.total_degree() < poly.total_degree() {
                certs.push(format!(
                    "{label}: {side} degree drops modulo {p} (leading coefficients divisible)"
                ));
            }
        }
        if !f.num().is_zero() && !f.den().is_constant() {
            // coprimality lost mod p: gcd over Fp[Y] becomes nonconstant
            let to_fp = |g: &MPoly<BigInt>| -> MPoly<FpElt> {
                g.map_coeffs(|c| FpElt::new(c.clone(), p))
            };
            let gn = to_fp(f.num());
            let gd = to_fp(f.den());
            if !gn.is_zero() && !gd.is_zero() {
                let g = gcd_mpoly(&gn, &gd);
                if !g.is_constant() {
                    certs.push(format!(
                        "{label}: numerator and denominator share the factor {} modulo {p}",
                        g.to_canonical_string()
                    ));
                }
            }
        }
    }
    certs
}

/// Runs the modular profile at each prime and tabulates agreement with the
/// exact profile over Q(Y). Mismatches are certified by exhibiting contents
/// or denominators divisible by p.
pub fn cross_check(sys: &SystemInput, primes: &[BigInt]) -> Result<CrossCheckReport, SolveError> {
    let t = solve::triangularize(sys)?;
    let exact = delta_measure(&t);
    // fractions to scan for certificates: every T coefficient, every
    // regular-chain polynomial coefficient, and the iterated resultants
    let mut fractions: Vec<(String, Frac<BigInt>)> = vec![];
    for (l, tp) in t.polys().iter().enumerate() {
        for (_, c) in tp.terms() {
            fractions.push((format!("T{}", l + 1), c.clone()));
        }
    }
    if let Ok(chain) = t.regular_chain() {
        for (l, np) in chain.polys.iter().enumerate() {
            for (_, c) in np.terms() {
                fractions.push((format!("N{}", l + 1), c.clone()));
            }
        }
    }
    let scaled = t.iterated_resultants();
    for (i, e) in scaled.resultants.iter().enumerate() {
        fractions.push((format!("e{}", i + 1), e.clone()));
    }
    let mut runs = vec![];
    for p in primes {
        let run = degree_profile(sys, Some(p));
        let cmp = match run.outcome {
            Outcome::DegreeProfile(got) if got == exact => RunComparison::Match,
            Outcome::DegreeProfile(got) => RunComparison::Mismatch {
                got,
                certificates: certify_mismatch(&fractions, p),
            },
            Outcome::Failure(reason) => RunComparison::Failed(reason),
        };
        runs.push((p.clone(), cmp));
    }
    Ok(CrossCheckReport { exact, runs })
}
