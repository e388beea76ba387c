//! Sparse multivariate polynomials over exact coefficient rings.
//!
//! Terms are kept in a canonical order: graded, ties broken lexicographically
//! with the *last* variable most significant. With a variable list such as
//! `[Y1, Y2, X1, X2]` this realizes the elimination order Y1 < Y2 < X1 < X2
//! used throughout, and makes string forms canonical.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Errors from the structural polynomial surface.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable lists differ: [{0}] vs [{1}]")]
    VarMismatch(String, String),
    #[error("operation undefined for the zero polynomial")]
    ZeroInput,
    #[error("resultant arguments are both constant in {0}")]
    ConstantResultant(String),
    #[error("{0}")]
    Domain(String),
}

/// Coefficient ring element.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self;
    fn from_i64(v: i64) -> Self;

    /// True when the canonical string joins this coefficient with " - ".
    fn is_display_neg(&self) -> bool;
    /// Coefficient with the display sign stripped.
    fn display_abs(&self) -> Self;
    /// Canonical text of the coefficient alone (no monomial part).
    fn fmt_atom(&self) -> String;
    /// True when the coefficient multiplier is omitted in term output.
    fn atom_is_one(&self) -> bool {
        self.is_one()
    }
}

/// Coefficients forming a field.
pub trait FieldCoeff: Coeff {
    fn inv(&self) -> Self;
    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }
}

/// Coefficients forming a gcd domain with a canonical choice of unit.
pub trait DomainCoeff: Coeff {
    /// Unit-normal gcd (nonnegative for integers, 1 for field elements).
    fn gcd(&self, rhs: &Self) -> Self;
    /// Exact division; `None` when `rhs` does not divide `self`.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
    /// The unit `u` such that `self / u` is unit-normal. Zero maps to one.
    fn canonical_unit(&self) -> Self;
    /// Inverse of a unit.
    fn inv_unit(&self) -> Self;
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_display_neg(&self) -> bool {
        self.is_negative()
    }
    fn display_abs(&self) -> Self {
        self.abs()
    }
    fn fmt_atom(&self) -> String {
        self.to_string()
    }
}

impl DomainCoeff for BigInt {
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        if Zero::is_zero(&r) {
            Some(q)
        } else {
            None
        }
    }
    fn canonical_unit(&self) -> Self {
        if self.is_negative() {
            BigInt::from(-1)
        } else {
            One::one()
        }
    }
    fn inv_unit(&self) -> Self {
        assert!(self.magnitude().is_one(), "not a unit: {self}");
        self.clone()
    }
}

pub type BigRat = num_rational::BigRational;

impl Coeff for BigRat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_i64(v: i64) -> Self {
        BigRat::from_integer(BigInt::from(v))
    }
    fn is_display_neg(&self) -> bool {
        self.is_negative()
    }
    fn display_abs(&self) -> Self {
        self.abs()
    }
    fn fmt_atom(&self) -> String {
        if One::is_one(self.denom()) {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl FieldCoeff for BigRat {
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
}

impl DomainCoeff for BigRat {
    fn gcd(&self, rhs: &Self) -> Self {
        if Zero::is_zero(self) && Zero::is_zero(rhs) {
            Coeff::zero()
        } else {
            Coeff::one()
        }
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn canonical_unit(&self) -> Self {
        if Zero::is_zero(self) {
            Coeff::one()
        } else {
            self.clone()
        }
    }
    fn inv_unit(&self) -> Self {
        FieldCoeff::inv(self)
    }
}

/// Ordered list of variable names, shared between polynomials.
#[derive(Clone, Eq)]
pub struct Vars(Arc<Vec<String>>);

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.joined())
    }
}

impl Vars {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        Vars(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    /// `Y1..Ym, X1..Xn` in elimination order.
    pub fn yx(m: usize, n: usize) -> Self {
        let mut v = Vec::with_capacity(m + n);
        for i in 1..=m {
            v.push(format!("Y{i}"));
        }
        for i in 1..=n {
            v.push(format!("X{i}"));
        }
        Vars(Arc::new(v))
    }

    /// `U0..Un`.
    pub fn u(n: usize) -> Self {
        Vars(Arc::new((0..=n).map(|i| format!("U{i}")).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn names(&self) -> &[String] {
        &self.0
    }
    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
    pub fn joined(&self) -> String {
        self.0.join(",")
    }
}

pub type Expo = Vec<u32>;

/// Canonical monomial comparison: graded, then lex with the last variable
/// most significant.
pub fn cmp_expo(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => cmp_expo_lex(a, b),
        ord => ord,
    }
}

/// Pure lex comparison with the last variable most significant (the
/// elimination order used by the solver).
pub fn cmp_expo_lex(a: &[u32], b: &[u32]) -> Ordering {
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// Sparse multivariate polynomial in canonical form.
#[derive(Clone, PartialEq)]
pub struct MPoly<C> {
    vars: Vars,
    /// Terms sorted descending in the canonical order, no zero coefficients.
    terms: Vec<(Expo, C)>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(vars: &Vars) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: vec![],
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn constant(vars: &Vars, c: C) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        MPoly {
            vars: vars.clone(),
            terms: vec![(vec![0; vars.len()], c)],
        }
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        MPoly {
            vars: vars.clone(),
            terms: vec![(e, C::one())],
        }
    }

    pub fn from_int(vars: &Vars, v: i64) -> Self {
        Self::constant(vars, C::from_i64(v))
    }

    pub fn monomial(vars: &Vars, expo: Expo, c: C) -> Self {
        assert_eq!(expo.len(), vars.len());
        if c.is_zero() {
            return Self::zero(vars);
        }
        MPoly {
            vars: vars.clone(),
            terms: vec![(expo, c)],
        }
    }

    /// Builds a polynomial from arbitrary terms: merges, drops zeros, sorts.
    pub fn from_terms(vars: &Vars, terms: Vec<(Expo, C)>) -> Self {
        let mut terms = terms;
        for (e, _) in &terms {
            assert_eq!(e.len(), vars.len(), "exponent arity mismatch");
        }
        terms.sort_by(|a, b| cmp_expo(&b.0, &a.0));
        let mut merged: Vec<(Expo, C)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc = lc.add(&c);
                }
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        MPoly {
            vars: vars.clone(),
            terms: merged,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }
    pub fn terms(&self) -> &[(Expo, C)] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    /// The constant value; `None` when the polynomial is not constant.
    pub fn constant_value(&self) -> Option<C> {
        if self.is_zero() {
            Some(C::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0) && self.terms[0].1.is_one()
    }

    /// Leading term in the canonical order.
    pub fn lead(&self) -> Option<(&Expo, &C)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn lead_coeff(&self) -> C {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0)
    }

    /// Total degree restricted to a subset of variables.
    pub fn degree_in_set(&self, set: &[usize]) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| set.iter().map(|&i| e[i]).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn check_same_vars(&self, rhs: &Self) -> Result<(), PolyError> {
        if self.vars == rhs.vars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch(self.vars.joined(), rhs.vars.joined()))
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert!(self.vars == rhs.vars, "variable list mismatch in add");
        let mut out: Vec<(Expo, C)> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match cmp_expo(&self.terms[i].0, &rhs.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&rhs.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(rhs.terms[j..].iter().cloned());
        MPoly {
            vars: self.vars.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert!(self.vars == rhs.vars, "variable list mismatch in mul");
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut acc: Vec<(Expo, C)> = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Expo = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                acc.push((e, ca.mul(cb)));
            }
        }
        Self::from_terms(&self.vars, acc)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut terms: Vec<(Expo, C)> = self
            .terms
            .iter()
            .map(|(e, t)| (e.clone(), t.mul(c)))
            .collect();
        terms.retain(|(_, c)| !c.is_zero());
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul_term(&self, expo: &[u32], c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut terms: Vec<(Expo, C)> = self
            .terms
            .iter()
            .map(|(e, t)| (e.iter().zip(expo).map(|(x, y)| x + y).collect(), t.mul(c)))
            .collect();
        terms.retain(|(_, c)| !c.is_zero());
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient polynomials with respect to one variable, index = exponent.
    /// Entry `i` is the coefficient of `var^i`, with `var` zeroed out.
    pub fn coeffs_wrt(&self, var: usize) -> Vec<MPoly<C>> {
        let d = self.degree_in(var) as usize;
        let mut out: Vec<Vec<(Expo, C)>> = vec![vec![]; d + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].push((e2, c.clone()));
        }
        out.into_iter()
            .map(|ts| Self::from_terms(&self.vars, ts))
            .collect()
    }

    /// Rebuilds from `coeffs_wrt(var)` output.
    pub fn from_coeffs_wrt(vars: &Vars, var: usize, coeffs: &[MPoly<C>]) -> Self {
        let mut acc: Vec<(Expo, C)> = vec![];
        for (k, c) in coeffs.iter().enumerate() {
            for (e, t) in &c.terms {
                let mut e2 = e.clone();
                e2[var] += k as u32;
                acc.push((e2, t.clone()));
            }
        }
        Self::from_terms(vars, acc)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut acc: Vec<(Expo, C)> = vec![];
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            acc.push((e2, c.mul(&C::from_i64(e[var] as i64))));
        }
        Self::from_terms(&self.vars, acc)
    }

    /// Substitutes `replacement` (same variable list) for `var`.
    pub fn substitute(&self, var: usize, replacement: &Self) -> Self {
        assert!(self.vars == replacement.vars);
        let coeffs = self.coeffs_wrt(var);
        let mut acc = Self::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = acc.mul(replacement).add(c);
        }
        acc
    }

    /// Substitutes a scalar for `var`.
    pub fn substitute_scalar(&self, var: usize, value: &C) -> Self {
        let coeffs = self.coeffs_wrt(var);
        let mut acc = Self::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = acc.scale(value).add(c);
        }
        acc
    }

    /// Re-expresses the polynomial over a variable list that contains every
    /// variable of the current one (matched by name).
    pub fn embed(&self, target: &Vars) -> Self {
        if self.vars == *target {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .unwrap_or_else(|| panic!("variable {n} missing from target list"))
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0u32; target.len()];
                for (i, &x) in e.iter().enumerate() {
                    e2[map[i]] = x;
                }
                (e2, c.clone())
            })
            .collect();
        Self::from_terms(target, terms)
    }

    /// Keeps only the variables `keep` (by index), renamed to `new_vars`.
    /// The dropped variables must not occur.
    pub fn restrict(&self, keep: &[usize], new_vars: &Vars) -> Self {
        assert_eq!(keep.len(), new_vars.len());
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let e2: Expo = keep.iter().map(|&i| e[i]).collect();
                debug_assert_eq!(
                    e.iter().map(|&x| x as u64).sum::<u64>(),
                    e2.iter().map(|&x| x as u64).sum::<u64>(),
                    "restrict drops an occurring variable"
                );
                (e2, c.clone())
            })
            .collect();
        Self::from_terms(new_vars, terms)
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> MPoly<D> {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect();
        MPoly::from_terms(&self.vars, terms)
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vars.len()];
        for (e, _) in &self.terms {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    seen[i] = true;
                }
            }
        }
        (0..self.vars.len()).filter(|&i| seen[i]).collect()
    }
}

impl<C: FieldCoeff> MPoly<C> {
    /// Divides by the leading coefficient (canonical order).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead_coeff().inv();
        self.scale(&inv)
    }

    /// Exact division over a field coefficient ring; `None` if not divisible.
    pub fn exact_div_field(&self, d: &Self) -> Option<Self> {
        exact_div_impl(self, d, |a, b| Some(a.div(b)))
    }
}

impl<C: DomainCoeff> MPoly<C> {
    /// Exact division in the polynomial ring; `None` if not divisible.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        exact_div_impl(self, d, |a, b| a.exact_div(b))
    }

    /// Gcd of all term coefficients, unit-normal.
    pub fn scalar_content(&self) -> C {
        let mut g = C::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
        }
        g
    }

    /// Signed scalar content: the primitive part gets a unit-normal leading
    /// coefficient (positive over the integers).
    pub fn signed_scalar_content(&self) -> C {
        let g = self.scalar_content();
        if self.is_zero() {
            return g;
        }
        g.mul(&self.lead_coeff().canonical_unit())
    }

    pub fn primitive_scalar(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.signed_scalar_content();
        self.exact_div_scalar(&g)
    }

    fn exact_div_scalar(&self, g: &C) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    e.clone(),
                    c.exact_div(g)
                        .expect("content must divide every coefficient"),
                )
            })
            .collect();
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

fn exact_div_impl<C: Coeff, F: Fn(&C, &C) -> Option<C>>(
    num: &MPoly<C>,
    den: &MPoly<C>,
    div_coeff: F,
) -> Option<MPoly<C>> {
    assert!(num.vars == den.vars);
    assert!(!den.is_zero(), "division by zero polynomial");
    let mut rem = num.clone();
    let mut q: Vec<(Expo, C)> = vec![];
    let (dlead_e, dlead_c) = {
        let (e, c) = den.lead().unwrap();
        (e.clone(), c.clone())
    };
    while !rem.is_zero() {
        let (rlead_e, rlead_c) = {
            let (e, c) = rem.lead().unwrap();
            (e.clone(), c.clone())
        };
        if rlead_e.iter().zip(&dlead_e).any(|(a, b)| a < b) {
            return None;
        }
        let qe: Expo = rlead_e.iter().zip(&dlead_e).map(|(a, b)| a - b).collect();
        let qc = div_coeff(&rlead_c, &dlead_c)?;
        rem = rem.sub(&den.mul_term(&qe, &qc));
        q.push((qe, qc));
    }
    Some(MPoly::from_terms(&num.vars, q))
}

// ---------------------------------------------------------------------------
// gcd / content via primitive polynomial remainder sequences
// ---------------------------------------------------------------------------

impl<C: DomainCoeff> MPoly<C> {
    /// Content with respect to one variable: gcd of the coefficient
    /// polynomials (lives in the subring without `var`).
    pub fn content_wrt(&self, var: usize) -> Self {
        let coeffs = self.coeffs_wrt(var);
        let mut g = Self::zero(&self.vars);
        for c in &coeffs {
            g = gcd_mpoly(&g, c);
        }
        g
    }

    pub fn primitive_wrt(&self, var: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_wrt(var);
        self.exact_div(&c).expect("content divides")
    }

    /// Unit-normalized copy: canonical leading coefficient (positive over
    /// the integers; one over fields).
    pub fn unit_normal(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let u = self.lead_coeff().canonical_unit();
        if u.is_one() {
            return self.clone();
        }
        self.scale(&u.inv_unit())
    }
}

/// Pseudo-remainder of `f` by `g` with respect to `var`:
/// `lc(g)^k * f = q*g + r` for some `k <= deg f - deg g + 1`.
pub fn pseudo_rem<C: DomainCoeff>(f: &MPoly<C>, g: &MPoly<C>, var: usize) -> MPoly<C> {
    assert!(!g.is_zero());
    let dg = g.degree_in(var);
    let glead = g.coeffs_wrt(var)[dg as usize].clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(var) >= dg {
        let d = r.degree_in(var);
        let rlead = r.coeffs_wrt(var)[d as usize].clone();
        let mut shift = vec![0u32; f.vars().len()];
        shift[var] = d - dg;
        let gshift = g.mul_term(&shift, &C::one()).mul(&rlead);
        r = r.mul(&glead).sub(&gshift);
        debug_assert!(r.is_zero() || r.degree_in(var) < d);
    }
    r
}

/// Gcd in a multivariate polynomial ring over a gcd domain, via primitive
/// remainder sequences recursing on one variable. The result is unit-normal
/// and divides both inputs exactly.
pub fn gcd_mpoly<C: DomainCoeff>(f: &MPoly<C>, g: &MPoly<C>) -> MPoly<C> {
    assert!(f.vars() == g.vars());
    if f.is_zero() {
        return g.unit_normal();
    }
    if g.is_zero() {
        return f.unit_normal();
    }
    if f.is_constant() || g.is_constant() {
        let a = f.scalar_content();
        let b = g.scalar_content();
        return MPoly::constant(f.vars(), a.gcd(&b));
    }
    let var = *f
        .support_vars()
        .iter()
        .chain(g.support_vars().iter())
        .max()
        .unwrap();
    if f.degree_in(var) == 0 {
        return gcd_mpoly(f, &g.content_wrt(var));
    }
    if g.degree_in(var) == 0 {
        return gcd_mpoly(&f.content_wrt(var), g);
    }
    let cf = f.content_wrt(var);
    let cg = g.content_wrt(var);
    let c = gcd_mpoly(&cf, &cg);
    let mut a = f.exact_div(&cf).unwrap();
    let mut b = g.exact_div(&cg).unwrap();
    if a.degree_in(var) < b.degree_in(var) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            break;
        }
        a = b;
        b = r.primitive_wrt(var);
        if b.degree_in(var) == 0 {
            break;
        }
        if a.degree_in(var) < b.degree_in(var) {
            std::mem::swap(&mut a, &mut b);
        }
    }
    if b.degree_in(var) == 0 {
        return c.unit_normal();
    }
    c.mul(&b.primitive_wrt(var)).unit_normal()
}

/// Determinant by fraction-free Gaussian elimination (Bareiss). Exact over
/// any integral domain coefficient ring.
pub fn bareiss_det<C: DomainCoeff>(mat: &mut Vec<Vec<MPoly<C>>>, vars: &Vars) -> MPoly<C> {
    let n = mat.len();
    if n == 0 {
        return MPoly::one(vars);
    }
    let mut sign = false;
    let mut prev = MPoly::one(vars);
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !mat[i][k].is_zero());
            match swap {
                Some(i) => {
                    mat.swap(k, i);
                    sign = !sign;
                }
                None => return MPoly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = mat[i][j].mul(&mat[k][k]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = t
                    .exact_div(&prev)
                    .expect("Bareiss pivot divides exactly over a domain");
            }
            mat[i][k] = MPoly::zero(vars);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Resultant of `f` and `g` with respect to `var`: the determinant of their
/// Sylvester matrix. When `deg_var(f) = 0` the convention
/// `res(f, g, var) = f^(deg_var g)` applies (and symmetrically).
pub fn resultant<C: DomainCoeff>(
    f: &MPoly<C>,
    g: &MPoly<C>,
    var: usize,
) -> Result<MPoly<C>, PolyError> {
    assert!(f.vars() == g.vars());
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let df = f.degree_in(var) as usize;
    let dg = g.degree_in(var) as usize;
    if df == 0 && dg == 0 {
        return Err(PolyError::ConstantResultant(f.vars().name(var).to_string()));
    }
    if df == 0 {
        return Ok(f.pow(dg as u32));
    }
    if dg == 0 {
        return Ok(g.pow(df as u32));
    }
    let fc = f.coeffs_wrt(var);
    let gc = g.coeffs_wrt(var);
    let n = df + dg;
    let vars = f.vars().clone();
    let zero = MPoly::zero(&vars);
    let mut mat: Vec<Vec<MPoly<C>>> = vec![vec![zero; n]; n];
    for r in 0..dg {
        for (k, c) in fc.iter().enumerate() {
            mat[r][r + df - k] = c.clone();
        }
    }
    for r in 0..df {
        for (k, c) in gc.iter().enumerate() {
            mat[dg + r][r + dg - k] = c.clone();
        }
    }
    Ok(bareiss_det(&mut mat, &vars))
}

// ---------------------------------------------------------------------------
// display
// ---------------------------------------------------------------------------

impl<C: Coeff> MPoly<C> {
    fn fmt_monomial(&self, e: &[u32]) -> String {
        let mut parts = vec![];
        for (i, &x) in e.iter().enumerate() {
            if x == 1 {
                parts.push(self.vars.name(i).to_string());
            } else if x > 1 {
                parts.push(format!("{}^{}", self.vars.name(i), x));
            }
        }
        parts.join("*")
    }

    fn fmt_term(&self, e: &[u32], c: &C) -> String {
        let mono = self.fmt_monomial(e);
        if mono.is_empty() {
            c.fmt_atom()
        } else if c.atom_is_one() {
            mono
        } else {
            format!("{}*{}", c.fmt_atom(), mono)
        }
    }

    /// Canonical string: terms in canonical descending order, joined with
    /// ` + ` / ` - ` according to the coefficient sign.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                out.push_str(&self.fmt_term(e, c));
            } else if c.is_display_neg() {
                out.push_str(" - ");
                out.push_str(&self.fmt_term(e, &c.display_abs()));
            } else {
                out.push_str(" + ");
                out.push_str(&self.fmt_term(e, c));
            }
        }
        out
    }
}

impl<C: Coeff> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl<C: Coeff> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// The validated arithmetic entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

pub fn ring_arith<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>, op: RingOp) -> Result<MPoly<C>, PolyError> {
    a.check_same_vars(b)?;
    Ok(match op {
        RingOp::Add => a.add(b),
        RingOp::Sub => a.sub(b),
        RingOp::Mul => a.mul(b),
    })
}

/// Content / primitive part of an integer polynomial (scalar content).
/// Sign convention: the primitive part has a positive leading coefficient.
pub fn content_primpart(f: &MPoly<BigInt>) -> Result<(BigInt, MPoly<BigInt>), PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let c = f.signed_scalar_content();
    let p = f.primitive_scalar();
    Ok((c, p))
}

/// Content / primitive part with respect to a set of main variables: the
/// content is the gcd of the coefficient polynomials in the remaining
/// variables. Same sign convention.
pub fn content_primpart_wrt<C: DomainCoeff>(
    f: &MPoly<C>,
    main_vars: &[usize],
) -> Result<(MPoly<C>, MPoly<C>), PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let mut content = MPoly::zero(f.vars());
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<(Expo, C)>> = Default::default();
    for (e, c) in f.terms() {
        let key: Vec<u32> = main_vars.iter().map(|&i| e[i]).collect();
        let mut e2 = e.clone();
        for &i in main_vars {
            e2[i] = 0;
        }
        groups.entry(key).or_default().push((e2, c.clone()));
    }
    for (_, ts) in groups {
        let coeff = MPoly::from_terms(f.vars(), ts);
        content = gcd_mpoly(&content, &coeff);
    }
    let prim = f.exact_div(&content).expect("content divides");
    let u = prim.lead_coeff().canonical_unit();
    if !u.is_one() {
        Ok((content.scale(&u), prim.scale(&u.inv_unit())))
    } else {
        Ok((content, prim))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(vars: &Vars, s: &[(i64, &[u32])]) -> MPoly<BigInt> {
        MPoly::from_terms(
            vars,
            s.iter()
                .map(|(c, e)| (e.to_vec(), BigInt::from(*c)))
                .collect(),
        )
    }

    #[test]
    fn canonical_string_matches_interface_example() {
        let vars = Vars::yx(2, 2);
        let p = zp(
            &vars,
            &[(-1, &[1, 1, 0, 1]), (1, &[0, 0, 0, 1]), (1, &[0, 1, 0, 0])],
        );
        assert_eq!(p.to_canonical_string(), "-1*Y1*Y2*X2 + X2 + Y2");
    }

    #[test]
    fn difference_of_squares() {
        let vars = Vars::new(vec!["Y1"]);
        let y = MPoly::<BigInt>::var(&vars, 0);
        let one = MPoly::one(&vars);
        let p = ring_arith(&y.add(&one), &y.sub(&one), RingOp::Mul).unwrap();
        assert_eq!(p, y.mul(&y).sub(&one));
        assert_eq!(p.to_canonical_string(), "Y1^2 - 1");
    }

    #[test]
    fn term_merge_example() {
        let vars = Vars::yx(2, 2);
        let y1 = MPoly::<BigInt>::var(&vars, 0);
        let y2 = MPoly::<BigInt>::var(&vars, 1);
        let x1 = MPoly::<BigInt>::var(&vars, 2);
        let x2 = MPoly::<BigInt>::var(&vars, 3);
        let one = MPoly::one(&vars);
        let a = x1.add(&one).add(&y1.mul(&x2));
        let b = x2.add(&y2.mul(&x1));
        let s = ring_arith(&a, &b, RingOp::Add).unwrap();
        let expect = MPoly::from_terms(
            &vars,
            vec![
                (vec![0, 0, 1, 0], BigInt::from(1)),
                (vec![0, 1, 1, 0], BigInt::from(1)),
                (vec![1, 0, 0, 1], BigInt::from(1)),
                (vec![0, 0, 0, 1], BigInt::from(1)),
                (vec![0, 0, 0, 0], BigInt::from(1)),
            ],
        );
        assert_eq!(s, expect);
    }

    #[test]
    fn var_mismatch_is_structural_error() {
        let a = MPoly::<BigInt>::var(&Vars::new(vec!["X1"]), 0);
        let b = MPoly::<BigInt>::var(&Vars::new(vec!["X2"]), 0);
        assert!(matches!(
            ring_arith(&a, &b, RingOp::Add),
            Err(PolyError::VarMismatch(_, _))
        ));
    }

    #[test]
    fn content_primpart_examples() {
        let vars = Vars::new(vec!["Y1"]);
        let f = zp(&vars, &[(6, &[1]), (4, &[0])]);
        let (c, p) = content_primpart(&f).unwrap();
        assert_eq!(c, BigInt::from(2));
        assert_eq!(p, zp(&vars, &[(3, &[1]), (2, &[0])]));

        let xv = Vars::new(vec!["X1"]);
        let g = zp(&xv, &[(-3, &[1])]);
        let (c, p) = content_primpart(&g).unwrap();
        assert_eq!(c, BigInt::from(-3));
        assert_eq!(p, zp(&xv, &[(1, &[1])]));

        assert_eq!(
            content_primpart(&MPoly::<BigInt>::zero(&vars)),
            Err(PolyError::ZeroInput)
        );
    }

    #[test]
    fn content_primpart_wrt_u_vars() {
        // (1 - Y1*Y2)*U0 - U1 + Y2*U2 over [Y1,Y2,U0,U1,U2], main vars = U
        let vars = Vars::new(vec!["Y1", "Y2", "U0", "U1", "U2"]);
        let f = zp(
            &vars,
            &[
                (1, &[0, 0, 1, 0, 0]),
                (-1, &[1, 1, 1, 0, 0]),
                (-1, &[0, 0, 0, 1, 0]),
                (1, &[0, 1, 0, 0, 1]),
            ],
        );
        let (c, p) = content_primpart_wrt(&f, &[2, 3, 4]).unwrap();
        // content is a unit; the sign rule flips so the primitive part leads
        // with a positive coefficient
        assert_eq!(c, MPoly::from_int(&vars, -1));
        assert_eq!(p, f.neg());
        assert_eq!(p.scalar_content(), BigInt::from(1));
    }

    #[test]
    fn gcd_examples() {
        let vars = Vars::new(vec!["Y1"]);
        let y = MPoly::<BigInt>::var(&vars, 0);
        let one = MPoly::one(&vars);
        let f = y.mul(&y).sub(&one);
        let g = y.sub(&one);
        assert_eq!(gcd_mpoly(&f, &g), g);

        let v2 = Vars::new(vec!["Y1", "Y2"]);
        let p = zp(&v2, &[(1, &[0, 0]), (-1, &[1, 1])]); // 1 - Y1*Y2
        let p2 = p.scale(&BigInt::from(2));
        let g = gcd_mpoly(&p2, &p);
        // unit-normal: positive leading coefficient => Y1*Y2 - 1
        assert_eq!(g, p.neg());
    }

    #[test]
    fn gcd_common_factor_property() {
        // gcd(f*w, g*w) equals gcd(f,g)*w up to unit, checked by exact division
        let vars = Vars::new(vec!["Y1", "Y2"]);
        let cases: Vec<(MPoly<BigInt>, MPoly<BigInt>, MPoly<BigInt>)> = vec![
            (
                zp(&vars, &[(1, &[1, 0]), (2, &[0, 0])]),
                zp(&vars, &[(1, &[0, 1]), (-1, &[0, 0])]),
                zp(&vars, &[(1, &[1, 1]), (1, &[0, 0])]),
            ),
            (
                zp(&vars, &[(2, &[2, 0]), (-2, &[0, 0])]),
                zp(&vars, &[(3, &[1, 0]), (3, &[0, 0])]),
                zp(&vars, &[(1, &[0, 2]), (5, &[1, 0])]),
            ),
            (
                zp(&vars, &[(1, &[1, 0])]),
                zp(&vars, &[(1, &[0, 1])]),
                zp(&vars, &[(-7, &[1, 2]), (1, &[0, 0])]),
            ),
        ];
        for (f, g, w) in cases {
            let gw = gcd_mpoly(&f.mul(&w), &g.mul(&w));
            let base = gcd_mpoly(&f, &g).mul(&w).unit_normal();
            assert_eq!(gw, base, "gcd(fw,gw) != gcd(f,g)*w for f={f} g={g} w={w}");
            assert!(f.mul(&w).exact_div(&gw).is_some());
            assert!(g.mul(&w).exact_div(&gw).is_some());
        }
    }

    /// Naive cofactor-expansion determinant, the independent oracle.
    fn cofactor_det(mat: &[Vec<MPoly<BigInt>>], vars: &Vars) -> MPoly<BigInt> {
        let n = mat.len();
        if n == 0 {
            return MPoly::one(vars);
        }
        if n == 1 {
            return mat[0][0].clone();
        }
        let mut acc = MPoly::zero(vars);
        for j in 0..n {
            if mat[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<MPoly<BigInt>>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&k| k != j)
                        .map(|k| mat[i][k].clone())
                        .collect()
                })
                .collect();
            let sub = cofactor_det(&minor, vars);
            let term = mat[0][j].mul(&sub);
            acc = if j % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }

    fn sylvester_oracle(f: &MPoly<BigInt>, g: &MPoly<BigInt>, var: usize) -> MPoly<BigInt> {
        let df = f.degree_in(var) as usize;
        let dg = g.degree_in(var) as usize;
        let fc = f.coeffs_wrt(var);
        let gc = g.coeffs_wrt(var);
        let n = df + dg;
        let vars = f.vars().clone();
        let mut mat = vec![vec![MPoly::zero(&vars); n]; n];
        for r in 0..dg {
            for (k, c) in fc.iter().enumerate() {
                mat[r][r + df - k] = c.clone();
            }
        }
        for r in 0..df {
            for (k, c) in gc.iter().enumerate() {
                mat[dg + r][r + dg - k] = c.clone();
            }
        }
        cofactor_det(&mat, &vars)
    }

    #[test]
    fn resultant_examples() {
        let vars = Vars::new(vec!["Y1", "X1"]);
        let f = zp(&vars, &[(1, &[0, 2]), (-1, &[1, 0])]); // X1^2 - Y1
        let g = zp(&vars, &[(2, &[0, 1])]); // 2*X1
        let x1 = vars.index_of("X1").unwrap();
        let r = resultant(&f, &g, x1).unwrap();
        assert_eq!(r, sylvester_oracle(&f, &g, x1));
        assert_eq!(r, zp(&vars, &[(-4, &[1, 0])]));

        // constant-first convention: res(1, X1 + c, X1) = 1
        let one = MPoly::one(&vars);
        let h = zp(&vars, &[(1, &[0, 1]), (5, &[0, 0])]);
        assert_eq!(resultant(&one, &h, x1).unwrap(), one);

        // linear case: res(X1 - a, X1 - b, X1) = a - b up to sign
        let va = Vars::new(vec!["a", "b", "X1"]);
        let fa = zp(&va, &[(1, &[0, 0, 1]), (-1, &[1, 0, 0])]);
        let fb = zp(&va, &[(1, &[0, 0, 1]), (-1, &[0, 1, 0])]);
        let r = resultant(&fa, &fb, 2).unwrap();
        let amb = zp(&va, &[(1, &[1, 0, 0]), (-1, &[0, 1, 0])]);
        assert!(r == amb || r == amb.neg());

        assert!(matches!(
            resultant(&one, &one, x1),
            Err(PolyError::ConstantResultant(_))
        ));
    }

    #[test]
    fn resultant_vanishes_iff_common_factor() {
        let vars = Vars::new(vec!["Y1", "X1"]);
        let x1 = 1;
        let mut seed = 9001u64;
        let mut rng = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 33) % 7) as i64 - 3
        };
        let mut rand_poly = |deg: u32| loop {
            let mut terms = vec![];
            for ex in 0..=deg {
                for ey in 0..=1u32 {
                    let c = rng();
                    if c != 0 {
                        terms.push((vec![ey, ex], BigInt::from(c)));
                    }
                }
            }
            let p = MPoly::from_terms(&vars, terms);
            if p.degree_in(x1) >= 1 {
                return p;
            }
        };
        for _ in 0..25 {
            let f = rand_poly(2);
            let g = rand_poly(2);
            let r = resultant(&f, &g, x1).unwrap();
            let oracle = sylvester_oracle(&f, &g, x1);
            assert_eq!(r, oracle);
            let gcd = gcd_mpoly(&f, &g);
            assert_eq!(
                r.is_zero(),
                gcd.degree_in(x1) > 0,
                "resultant/gcd mismatch for f={f}, g={g}"
            );
        }
    }

    #[test]
    fn exact_div_round_trip() {
        let vars = Vars::new(vec!["Y1", "Y2"]);
        let f = zp(&vars, &[(2, &[1, 0]), (3, &[0, 1]), (1, &[0, 0])]);
        let g = zp(&vars, &[(1, &[1, 1]), (-4, &[0, 0])]);
        let prod = f.mul(&g);
        assert_eq!(prod.exact_div(&f).unwrap(), g);
        assert_eq!(prod.exact_div(&g).unwrap(), f);
        let h = zp(&vars, &[(1, &[1, 0]), (1, &[0, 0])]);
        assert!(prod.exact_div(&h).is_none());
    }

    #[test]
    fn derivative_and_substitute() {
        let vars = Vars::new(vec!["Y1", "X1"]);
        let f = zp(&vars, &[(1, &[0, 2]), (-1, &[1, 0])]);
        let d = f.derivative(1);
        assert_eq!(d, zp(&vars, &[(2, &[0, 1])]));
        let y = MPoly::var(&vars, 0);
        let s = f.substitute(1, &y);
        assert_eq!(s, zp(&vars, &[(1, &[2, 0]), (-1, &[1, 0])]));
    }
}
