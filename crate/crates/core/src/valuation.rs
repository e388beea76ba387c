//! Absolute values and heights of polynomials, on the natural-log scale.
//!
//! For a nonzero polynomial f, `l_v(f) = max over nonzero coefficients of
//! log v(coefficient)`. Heights convert to bit lengths by dividing by ln 2.

use crate::frac::{ln_abs_bigint, ln_abs_rat, Frac};
use crate::poly::{gcd_mpoly, BigRat, MPoly, PolyError, Vars};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// An absolute value on Q or Q(Y).
#[derive(Clone, Debug)]
pub enum Valuation {
    /// v_p(x) = p^(-ord_p(x)), p prime.
    PAdic(BigInt),
    /// v_S(x) = e^(-deg(S) ord_S(x)), S irreducible in Z[Y] with unit content.
    SAdic(MPoly<BigInt>),
    /// v_deg(x) = e^(deg x).
    Deg,
    /// The usual absolute value on Q.
    Archimedean,
}

/// p-adic order of a nonzero integer.
pub fn ord_p(x: &BigInt, p: &BigInt) -> u64 {
    assert!(!x.is_zero());
    let mut v = x.abs();
    let mut k = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&v, p);
        if r.is_zero() {
            v = q;
            k += 1;
        } else {
            return k;
        }
    }
}

/// S-adic order: multiplicity of the irreducible S in f.
pub fn ord_s(f: &MPoly<BigInt>, s: &MPoly<BigInt>) -> u64 {
    assert!(!f.is_zero());
    let mut v = f.clone();
    let mut k = 0;
    while let Some(q) = v.exact_div(s) {
        v = q;
        k += 1;
    }
    k
}

/// Height of a nonzero integer polynomial: max ln|coefficient|.
pub fn height_zpoly(f: &MPoly<BigInt>) -> f64 {
    f.terms()
        .iter()
        .map(|(_, c)| ln_abs_bigint(c))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Height of a nonzero rational-coefficient polynomial.
pub fn height_qpoly(f: &MPoly<BigRat>) -> f64 {
    f.terms()
        .iter()
        .map(|(_, c)| ln_abs_rat(c))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// l_v for polynomials with integer coefficients. For `Deg`, the polynomial
/// is read in Z[Y][X] with `y_vars` naming the Y block: the value is the
/// maximal total Y-degree over the coefficients.
pub fn log_abs(f: &MPoly<BigInt>, v: &Valuation, y_vars: &[usize]) -> Result<f64, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    Ok(match v {
        Valuation::Archimedean => height_zpoly(f),
        Valuation::PAdic(p) => {
            let lnp = ln_abs_bigint(p);
            f.terms()
                .iter()
                .map(|(_, c)| -(ord_p(c, p) as f64) * lnp)
                .fold(f64::NEG_INFINITY, f64::max)
        }
        Valuation::Deg => f
            .terms()
            .iter()
            .map(|(e, _)| y_vars.iter().map(|&i| e[i] as u64).sum::<u64>() as f64)
            .fold(f64::NEG_INFINITY, f64::max),
        Valuation::SAdic(s) => {
            let degs = s.total_degree() as f64;
            // group into coefficients of the X-monomials
            let coeffs = coeff_polys(f, y_vars);
            coeffs
                .iter()
                .map(|c| -(ord_s(c, s) as f64) * degs)
                .fold(f64::NEG_INFINITY, f64::max)
        }
    })
}

/// The Z[Y]-coefficients of f in Z[Y][X], where `y_vars` indexes the Y block.
pub fn coeff_polys(f: &MPoly<BigInt>, y_vars: &[usize]) -> Vec<MPoly<BigInt>> {
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<(Vec<u32>, BigInt)>> =
        Default::default();
    for (e, c) in f.terms() {
        let key: Vec<u32> = (0..e.len())
            .filter(|i| !y_vars.contains(i))
            .map(|i| e[i])
            .collect();
        let mut e2 = vec![0u32; e.len()];
        for &i in y_vars {
            e2[i] = e[i];
        }
        groups.entry(key).or_default().push((e2, c.clone()));
    }
    groups
        .into_values()
        .map(|ts| MPoly::from_terms(f.vars(), ts))
        .collect()
}

/// l_v-deg for polynomials over Q(Y): max over coefficients of
/// deg(num) - deg(den).
pub fn log_abs_deg_frac(f: &MPoly<Frac<BigInt>>) -> Result<f64, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    Ok(f.terms()
        .iter()
        .map(|(_, c)| c.deg_valuation() as f64)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Height (archimedean) of a polynomial over Q(Y): max over the integer
/// coefficients of all numerators and denominators of ln|.|. This is the
/// observable compared against the closed-form bounds.
pub fn observed_height_frac(f: &MPoly<Frac<BigInt>>) -> f64 {
    let mut h = f64::NEG_INFINITY;
    for (_, c) in f.terms() {
        h = h.max(height_zpoly(c.num()));
        h = h.max(height_zpoly(c.den()));
    }
    h
}

/// Max total Y-degree over numerators and denominators of the coefficients.
pub fn observed_degree_frac(f: &MPoly<Frac<BigInt>>) -> u32 {
    let mut d = 0;
    for (_, c) in f.terms() {
        d = d.max(c.num().total_degree());
        d = d.max(c.den().total_degree());
    }
    d
}

/// Irreducible factors are not needed anywhere; contents are. The content of
/// a product being the product of contents (Gauss) is checked in tests.
pub fn content_of(f: &MPoly<BigInt>) -> BigInt {
    f.scalar_content()
}

/// gcd in Z[Y] via the generic kernel, exposed for the Gauss-lemma tests.
pub fn zpoly_gcd(f: &MPoly<BigInt>, g: &MPoly<BigInt>) -> MPoly<BigInt> {
    gcd_mpoly(f, g)
}

/// Convenience: ln on positive integers as f64.
pub fn ln_u64(x: u64) -> f64 {
    (x as f64).ln()
}

#[allow(unused)]
fn _vars_silence(_: &Vars) {}
