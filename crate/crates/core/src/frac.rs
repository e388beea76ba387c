//! The fraction field of a multivariate polynomial ring: elements of
//! Q(Y1..Ym) as reduced quotients of integer polynomials (and Fp(Y)
//! likewise, over prime-field scalars).
//!
//! Normal form: gcd(num, den) is a unit (including scalar content) and the
//! denominator has a canonical leading coefficient — positive over the
//! integers, one over a field.

use crate::poly::{gcd_mpoly, BigRat, Coeff, DomainCoeff, FieldCoeff, MPoly, Vars};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;

#[derive(Clone)]
pub struct Frac<K: DomainCoeff> {
    num: MPoly<K>,
    den: MPoly<K>,
}

impl<K: DomainCoeff> Frac<K> {
    /// Builds and normalizes `num/den`. Panics when `den` is zero.
    pub fn new(num: MPoly<K>, den: MPoly<K>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = unify_poly_vars(&num, &den);
        let mut f = Frac { num, den };
        f.reduce();
        f
    }

    pub fn from_poly(num: MPoly<K>) -> Self {
        let den = MPoly::one(num.vars());
        Frac { num, den }
    }

    pub fn constant(vars: &Vars, c: K) -> Self {
        Frac {
            num: MPoly::constant(vars, c),
            den: MPoly::one(vars),
        }
    }

    pub fn num(&self) -> &MPoly<K> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<K> {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Total degree of the numerator minus that of the denominator; the
    /// exponent of the degree valuation.
    pub fn deg_valuation(&self) -> i64 {
        if self.num.is_zero() {
            return i64::MIN;
        }
        self.num.total_degree() as i64 - self.den.total_degree() as i64
    }

    /// deg(num) + deg(den) of the reduced form; the delta measure takes the
    /// maximum of this over all coefficients.
    pub fn delta_degree(&self) -> u32 {
        if self.num.is_zero() {
            return 0;
        }
        self.num.total_degree() + self.den.total_degree()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one(self.num.vars());
            return;
        }
        let g = gcd_mpoly(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.exact_div(&g).expect("gcd divides");
            self.den = self.den.exact_div(&g).expect("gcd divides");
        }
        let u = self.den.lead_coeff().canonical_unit();
        if !Coeff::is_one(&u) {
            let ui = u.inv_unit();
            self.num = self.num.scale(&ui);
            self.den = self.den.scale(&ui);
        }
    }

    /// Asserts the reduced-fraction invariant (re-normalizes and compares).
    pub fn is_normalized(&self) -> bool {
        let mut c = self.clone();
        c.reduce();
        c.num == self.num && c.den == self.den
    }

    /// Lifts into a larger variable list.
    pub fn embed(&self, target: &Vars) -> Self {
        Frac {
            num: self.num.embed(target),
            den: self.den.embed(target),
        }
    }
}

/// Empty-variable constants unify with any variable list.
fn unify_poly_vars<K: DomainCoeff>(a: &MPoly<K>, b: &MPoly<K>) -> (MPoly<K>, MPoly<K>) {
    if a.vars() == b.vars() {
        (a.clone(), b.clone())
    } else if a.vars().is_empty() {
        (a.embed(b.vars()), b.clone())
    } else if b.vars().is_empty() {
        (a.clone(), b.embed(a.vars()))
    } else {
        panic!(
            "variable list mismatch: [{}] vs [{}]",
            a.vars().joined(),
            b.vars().joined()
        );
    }
}

fn unify<K: DomainCoeff>(a: &Frac<K>, b: &Frac<K>) -> (Frac<K>, Frac<K>) {
    if a.vars() == b.vars() {
        (a.clone(), b.clone())
    } else if a.vars().is_empty() {
        (a.embed(b.vars()), b.clone())
    } else if b.vars().is_empty() {
        (a.clone(), b.embed(a.vars()))
    } else {
        panic!(
            "variable list mismatch: [{}] vs [{}]",
            a.vars().joined(),
            b.vars().joined()
        );
    }
}

impl<K: DomainCoeff> PartialEq for Frac<K> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = unify(self, other);
        // reduced representatives are unique
        a.num == b.num && a.den == b.den
    }
}

impl<K: DomainCoeff> fmt::Debug for Frac<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_atom())
    }
}

impl<K: DomainCoeff> Coeff for Frac<K> {
    fn zero() -> Self {
        let vars = Vars::new(Vec::<String>::new());
        Frac {
            num: MPoly::zero(&vars),
            den: MPoly::one(&vars),
        }
    }
    fn one() -> Self {
        let vars = Vars::new(Vec::<String>::new());
        Frac {
            num: MPoly::one(&vars),
            den: MPoly::one(&vars),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num == self.den
    }
    fn neg(&self) -> Self {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        let (a, b) = unify(self, rhs);
        Frac::new(
            a.num.mul(&b.den).add(&b.num.mul(&a.den)),
            a.den.mul(&b.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = unify(self, rhs);
        Frac::new(a.num.mul(&b.num), a.den.mul(&b.den))
    }
    fn from_i64(v: i64) -> Self {
        let vars = Vars::new(Vec::<String>::new());
        Frac {
            num: MPoly::from_int(&vars, v),
            den: MPoly::one(&vars),
        }
    }
    fn is_display_neg(&self) -> bool {
        self.num.lead_coeff().is_display_neg()
    }
    fn display_abs(&self) -> Self {
        if self.is_display_neg() {
            self.neg()
        } else {
            self.clone()
        }
    }
    fn fmt_atom(&self) -> String {
        let num_str = if self.num.num_terms() > 1 {
            format!("({})", self.num.to_canonical_string())
        } else {
            self.num.to_canonical_string()
        };
        if self.den.is_one() {
            return num_str;
        }
        let den_str = if self.den.num_terms() > 1 || !self.den.is_constant() {
            format!("({})", self.den.to_canonical_string())
        } else {
            self.den.to_canonical_string()
        };
        format!("{num_str}/{den_str}")
    }
    fn atom_is_one(&self) -> bool {
        Coeff::is_one(self)
    }
}

impl<K: DomainCoeff> FieldCoeff for Frac<K> {
    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero");
        let mut f = Frac {
            num: self.den.clone(),
            den: self.num.clone(),
        };
        let u = f.den.lead_coeff().canonical_unit();
        if !Coeff::is_one(&u) {
            let ui = u.inv_unit();
            f.num = f.num.scale(&ui);
            f.den = f.den.scale(&ui);
        }
        f
    }
}

impl<K: DomainCoeff> DomainCoeff for Frac<K> {
    fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() && Coeff::is_zero(rhs) {
            Coeff::zero()
        } else {
            Coeff::one()
        }
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if Coeff::is_zero(rhs) {
            None
        } else {
            Some(self.mul(&rhs.inv()))
        }
    }
    fn canonical_unit(&self) -> Self {
        if self.is_zero() {
            Coeff::one()
        } else {
            self.clone()
        }
    }
    fn inv_unit(&self) -> Self {
        self.inv()
    }
}

/// Q(Y) elements.
pub type QY = Frac<BigInt>;

impl Frac<BigInt> {
    pub fn from_rat(vars: &Vars, r: &BigRat) -> Self {
        Frac::new(
            MPoly::constant(vars, r.numer().clone()),
            MPoly::constant(vars, r.denom().clone()),
        )
    }

    /// Evaluates at an integer point (in the order of the variable list).
    /// `None` when the denominator vanishes.
    pub fn eval_int(&self, point: &[BigInt]) -> Option<BigRat> {
        let n = eval_zpoly(&self.num, point);
        let d = eval_zpoly(&self.den, point);
        if num_traits::Zero::is_zero(&d) {
            None
        } else {
            Some(BigRat::new(n, d))
        }
    }
}

pub fn eval_zpoly(f: &MPoly<BigInt>, point: &[BigInt]) -> BigInt {
    assert_eq!(point.len(), f.vars().len());
    let mut acc = BigInt::from(0);
    for (e, c) in f.terms() {
        let mut t = c.clone();
        for (i, &x) in e.iter().enumerate() {
            for _ in 0..x {
                t *= &point[i];
            }
        }
        acc += t;
    }
    acc
}

/// ln|x| for a nonzero big integer, stable for very large values.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    assert!(!num_traits::Zero::is_zero(x), "ln of zero");
    let mag = x.magnitude();
    if One::is_one(mag) {
        return 0.0;
    }
    let bits = mag.bits();
    if bits <= 52 {
        let v: u64 = mag.try_into().unwrap();
        return (v as f64).ln();
    }
    let shift = bits - 52;
    let top: u64 = (mag >> shift).try_into().unwrap();
    (top as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn ln_abs_rat(x: &BigRat) -> f64 {
    assert!(!num_traits::Zero::is_zero(x));
    ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom())
}
