//! Lex Groebner bases over the fraction field K(Y), specialized to the
//! zero-dimensional triangular (Lazard) shape.
//!
//! The solver is a plain Buchberger loop with the normal selection strategy.
//! Presentation of the output follows the convention used throughout: tails
//! of the T_l are reduced only where a leading monomial *properly* divides a
//! term, so degrees in lower variables may reach d_r but never exceed it.
//! Normal forms computed against the output remain strict.

use crate::frac::{Frac, QY};
use crate::poly::{cmp_expo_lex, BigRat, Coeff, DomainCoeff, Expo, FieldCoeff, MPoly, Vars};
use crate::triangular::TriangularSet;
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("ideal is not zero-dimensional over the base field: {0}")]
    NotZeroDim(String),
    #[error("lex basis is not in triangular shape: {0}")]
    NotLazardShape(String),
    #[error("oracle limited to at most two equations in two variables")]
    OracleArity,
}

/// A parametric polynomial system: generators over Q in the variables
/// Y1..Ym, X1..Xn.
#[derive(Clone, Debug)]
pub struct SystemInput {
    pub m: usize,
    pub n: usize,
    pub gens: Vec<MPoly<BigRat>>,
}

impl SystemInput {
    pub fn new(m: usize, n: usize, gens: Vec<MPoly<BigRat>>) -> Self {
        let vars = Vars::yx(m, n);
        for g in &gens {
            assert!(g.vars() == &vars, "generators must live over Y1..Ym,X1..Xn");
            assert!(!g.is_zero(), "zero generator");
        }
        SystemInput { m, n, gens }
    }

    pub fn vars(&self) -> Vars {
        Vars::yx(self.m, self.n)
    }

    /// Max total degree over the generators.
    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.total_degree()).max().unwrap_or(0)
    }

    /// Max coefficient height (natural log) over the generators.
    pub fn max_height(&self) -> f64 {
        self.gens
            .iter()
            .map(crate::valuation::height_qpoly)
            .fold(0.0, f64::max)
    }

    /// Rewrites the generators over Q(Y)[X1..Xn].
    pub fn to_qy(&self) -> Vec<MPoly<QY>> {
        let yvars = Vars::new(
            (1..=self.m)
                .map(|i| format!("Y{i}"))
                .collect::<Vec<String>>(),
        );
        let xvars = Vars::new(
            (1..=self.n)
                .map(|i| format!("X{i}"))
                .collect::<Vec<String>>(),
        );
        self.gens
            .iter()
            .map(|g| split_to_frac(g, self.m, &yvars, &xvars))
            .collect()
    }
}

/// Splits a polynomial over [Y.., X..] with rational coefficients into a
/// polynomial in the X block whose coefficients live in the fraction field
/// of K[Y]. The closure maps a rational constant into K.
pub fn split_poly<K: DomainCoeff>(
    g: &MPoly<BigRat>,
    m: usize,
    yvars: &Vars,
    xvars: &Vars,
    to_k: &dyn Fn(&BigRat) -> Option<Frac<K>>,
) -> Option<MPoly<Frac<K>>> {
    let mut groups: std::collections::BTreeMap<Expo, Vec<(Expo, Frac<K>)>> = Default::default();
    for (e, c) in g.terms() {
        let xkey: Expo = e[m..].to_vec();
        let ye: Expo = e[..m].to_vec();
        let k = to_k(c)?;
        let ymono = Frac::from_poly(MPoly::monomial(yvars, ye, K::one()));
        groups.entry(xkey).or_default().push((vec![], k.mul(&ymono)));
    }
    let mut terms = vec![];
    for (xe, parts) in groups {
        let mut coeff = Frac::zero();
        for (_, c) in parts {
            coeff = coeff.add(&c);
        }
        if !Coeff::is_zero(&coeff) {
            terms.push((xe, coeff));
        }
    }
    Some(MPoly::from_terms(xvars, terms))
}

fn split_to_frac(g: &MPoly<BigRat>, m: usize, yvars: &Vars, xvars: &Vars) -> MPoly<QY> {
    split_poly(g, m, yvars, xvars, &|c: &BigRat| {
        Some(QY::from_rat(yvars, c))
    })
    .unwrap()
}

// ---------------------------------------------------------------------------
// lex machinery over a generic coefficient field
// ---------------------------------------------------------------------------

fn lex_lead<F: FieldCoeff>(p: &MPoly<F>) -> (Expo, F) {
    let mut best: Option<(&Expo, &F)> = None;
    for (e, c) in p.terms() {
        match best {
            None => best = Some((e, c)),
            Some((be, _)) if cmp_expo_lex(e, be) == Ordering::Greater => best = Some((e, c)),
            _ => {}
        }
    }
    let (e, c) = best.expect("lex_lead of zero polynomial");
    (e.clone(), c.clone())
}

fn monomial_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn properly_divides(a: &[u32], b: &[u32]) -> bool {
    monomial_divides(a, b) && a != b
}

fn make_lex_monic<F: FieldCoeff>(p: &MPoly<F>) -> MPoly<F> {
    let (_, c) = lex_lead(p);
    p.scale(&c.inv())
}

/// One full strict reduction of `p` modulo `basis` (leading monomials under
/// lex). Returns the normal form.
fn strict_reduce<F: FieldCoeff>(p: &MPoly<F>, basis: &[MPoly<F>]) -> MPoly<F> {
    let leads: Vec<(Expo, F)> = basis.iter().map(lex_lead).collect();
    let mut r = p.clone();
    'outer: loop {
        if r.is_zero() {
            return r;
        }
        // scan terms from the lex-largest down
        let mut terms: Vec<(Expo, F)> = r.terms().to_vec();
        terms.sort_by(|a, b| cmp_expo_lex(&b.0, &a.0));
        for (e, c) in &terms {
            for (j, (le, lc)) in leads.iter().enumerate() {
                if monomial_divides(le, e) {
                    let shift: Expo = e.iter().zip(le).map(|(x, y)| x - y).collect();
                    let factor = c.div(lc);
                    r = r.sub(&basis[j].mul_term(&shift, &factor));
                    continue 'outer;
                }
            }
        }
        return r;
    }
}

/// Tail reduction under *proper* divisibility only: the canonical
/// presentation keeps terms whose monomial equals a leading monomial.
fn proper_tail_reduce<F: FieldCoeff>(p: &MPoly<F>, others: &[MPoly<F>]) -> MPoly<F> {
    let leads: Vec<(Expo, F)> = others.iter().map(lex_lead).collect();
    let mut r = p.clone();
    'outer: loop {
        if r.is_zero() {
            return r;
        }
        let own_lead = lex_lead(&r).0;
        let mut terms: Vec<(Expo, F)> = r.terms().to_vec();
        terms.sort_by(|a, b| cmp_expo_lex(&b.0, &a.0));
        for (e, c) in &terms {
            for (j, (le, lc)) in leads.iter().enumerate() {
                let reducible = if *e == own_lead {
                    monomial_divides(le, e)
                } else {
                    properly_divides(le, e)
                };
                if reducible {
                    let shift: Expo = e.iter().zip(le).map(|(x, y)| x - y).collect();
                    let factor = c.div(lc);
                    r = r.sub(&others[j].mul_term(&shift, &factor));
                    continue 'outer;
                }
            }
        }
        return r;
    }
}

/// Buchberger with the normal strategy over a coefficient field, pure lex
/// with X1 < ... < Xn. Returns the final basis (inputs interreduced under
/// the proper-divisibility convention, plus appended S-polynomial remainders).
fn buchberger<F: FieldCoeff + DomainCoeff>(gens: &[MPoly<F>]) -> Vec<MPoly<F>> {
    let mut basis: Vec<MPoly<F>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(make_lex_monic)
        .collect();
    // interreduce the inputs (proper-divisibility tails)
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < basis.len() {
            let others: Vec<MPoly<F>> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            if others.is_empty() {
                break;
            }
            let r = proper_tail_reduce(&basis[i], &others);
            if r != basis[i] {
                changed = true;
                if r.is_zero() {
                    basis.remove(i);
                    continue;
                }
                basis[i] = make_lex_monic(&r);
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }

    let mut pairs: Vec<(usize, usize)> = vec![];
    let enqueue = |pairs: &mut Vec<(usize, usize)>, basis: &[MPoly<F>], k: usize| {
        for i in 0..k {
            pairs.push((i, k));
        }
        let lcm_of = |i: usize, j: usize| -> Expo {
            let a = lex_lead(&basis[i]).0;
            let b = lex_lead(&basis[j]).0;
            a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect()
        };
        pairs.sort_by(|p, q| {
            let lp = lcm_of(p.0, p.1);
            let lq = lcm_of(q.0, q.1);
            cmp_expo_lex(&lp, &lq).then(p.cmp(q))
        });
    };
    for k in 1..basis.len() {
        enqueue(&mut pairs, &basis, k);
    }
    while let Some((i, j)) = pairs.first().cloned() {
        pairs.remove(0);
        let (ei, ci) = lex_lead(&basis[i]);
        let (ej, cj) = lex_lead(&basis[j]);
        let lcm: Expo = ei.iter().zip(&ej).map(|(x, y)| *x.max(y)).collect();
        // coprime leading monomials: S-polynomial reduces to zero
        if ei.iter().zip(&ej).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let si: Expo = lcm.iter().zip(&ei).map(|(x, y)| x - y).collect();
        let sj: Expo = lcm.iter().zip(&ej).map(|(x, y)| x - y).collect();
        let spoly = basis[i]
            .mul_term(&si, &ci.inv())
            .sub(&basis[j].mul_term(&sj, &cj.inv()));
        let r = strict_reduce(&spoly, &basis);
        if !r.is_zero() {
            basis.push(make_lex_monic(&r));
            let k = basis.len() - 1;
            enqueue(&mut pairs, &basis, k);
        }
    }
    basis
}

/// Extracts the triangular presentation from a Buchberger basis. `xcount`
/// is the number of X variables.
fn extract_triangular<F: FieldCoeff + DomainCoeff>(
    basis: Vec<MPoly<F>>,
    xvars: &Vars,
) -> Result<TriangularSet<F>, SolveError> {
    let n = xvars.len();
    if basis.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Err(SolveError::NotLazardShape(
            "the ideal is the whole ring".to_string(),
        ));
    }
    // minimalize: drop elements whose leading monomial is divisible by
    // another kept element's (earlier elements win on equality)
    let leads: Vec<Expo> = basis.iter().map(|g| lex_lead(g).0).collect();
    let mut keep = vec![true; basis.len()];
    for j in 0..basis.len() {
        for i in 0..basis.len() {
            if i == j || !keep[i] {
                continue;
            }
            let dominated = if i < j {
                monomial_divides(&leads[i], &leads[j])
            } else {
                properly_divides(&leads[i], &leads[j])
            };
            if dominated {
                keep[j] = false;
                break;
            }
        }
    }
    let kept: Vec<MPoly<F>> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();

    // locate the pure-power element for each variable
    let mut slots: Vec<Option<MPoly<F>>> = vec![None; n];
    let mut extra = vec![];
    for g in kept {
        let (e, _) = lex_lead(&g);
        let pure = (0..n).find(|&l| e[l] > 0 && (0..n).all(|r| r == l || e[r] == 0));
        match pure {
            Some(l) if slots[l].is_none() => slots[l] = Some(g),
            _ => extra.push(g),
        }
    }
    let missing: Vec<String> = (0..n)
        .filter(|&l| slots[l].is_none())
        .map(|l| xvars.name(l).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(SolveError::NotZeroDim(format!(
            "no pure power of {} among the leading monomials",
            missing.join(", ")
        )));
    }
    if !extra.is_empty() {
        return Err(SolveError::NotLazardShape(format!(
            "{} extra basis element(s) beyond the triangular ones",
            extra.len()
        )));
    }
    let mut polys: Vec<MPoly<F>> = slots.into_iter().map(Option::unwrap).collect();
    // final presentation: tails reduced under proper divisibility against
    // the lower levels (this also removes any excess degrees)
    for l in (0..n).rev() {
        let lower: Vec<MPoly<F>> = polys[..l].to_vec();
        if lower.is_empty() {
            continue;
        }
        let r = proper_tail_reduce(&polys[l], &lower);
        polys[l] = make_lex_monic(&r);
    }
    TriangularSet::new(xvars.clone(), polys)
        .map_err(|e| SolveError::NotLazardShape(e.to_string()))
}

/// Computes the lex triangular set of a zero-dimensional ideal over a
/// coefficient field, from generators already written over K(Y)[X].
pub fn triangularize_frac<K: DomainCoeff>(
    gens: &[MPoly<Frac<K>>],
    xvars: &Vars,
) -> Result<TriangularSet<Frac<K>>, SolveError> {
    let nonzero: Vec<MPoly<Frac<K>>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(SolveError::NotZeroDim("no nonzero generators".to_string()));
    }
    let basis = buchberger(&nonzero);
    extract_triangular(basis, xvars)
}

/// The solver entry point over Q(Y) (or Q when m = 0).
pub fn triangularize(sys: &SystemInput) -> Result<TriangularSet<QY>, SolveError> {
    let gens = sys.to_qy();
    let xvars = Vars::new(
        (1..=sys.n)
            .map(|i| format!("X{i}"))
            .collect::<Vec<String>>(),
    );
    let t = triangularize_frac(&gens, &xvars)?;
    // soundness: every generator reduces to zero
    for g in &gens {
        debug_assert!(t.normal_form(g).is_zero());
    }
    Ok(t)
}

/// Independent elimination oracle for n <= 2: T1 is the monic squarefree
/// part of the resultant eliminating X2, T2 follows by a gcd computation
/// over K[X1]/(T1).
pub fn eliminate_oracle(sys: &SystemInput) -> Result<TriangularSet<QY>, SolveError> {
    if sys.n > 2 {
        return Err(SolveError::OracleArity);
    }
    let gens = sys.to_qy();
    let xvars = Vars::new(
        (1..=sys.n)
            .map(|i| format!("X{i}"))
            .collect::<Vec<String>>(),
    );
    if sys.n == 1 {
        // T1 = monic gcd of the generators
        let mut g = MPoly::zero(&xvars);
        for f in &gens {
            g = crate::poly::gcd_mpoly(&g, f);
        }
        if g.is_constant() {
            return Err(SolveError::NotZeroDim(
                "generators have no common root".to_string(),
            ));
        }
        let t1 = g.monic();
        return TriangularSet::new(xvars, vec![t1])
            .map_err(|e| SolveError::NotLazardShape(e.to_string()));
    }
    if gens.len() != 2 {
        return Err(SolveError::OracleArity);
    }
    let x2 = 1usize;
    let (f1, f2) = (&gens[0], &gens[1]);
    let r = if f1.degree_in(x2) == 0 && f2.degree_in(x2) == 0 {
        return Err(SolveError::NotZeroDim("X2 absent from both".to_string()));
    } else {
        crate::poly::resultant(f1, f2, x2)
            .map_err(|e| SolveError::NotZeroDim(e.to_string()))?
    };
    if r.is_zero() {
        return Err(SolveError::NotZeroDim(
            "resultant vanishes identically".to_string(),
        ));
    }
    if r.is_constant() {
        return Err(SolveError::NotLazardShape(
            "elimination ideal is trivial".to_string(),
        ));
    }
    // monic squarefree part in X1
    let x1 = 0usize;
    let dr = r.derivative(x1);
    let g = crate::poly::gcd_mpoly(&r, &dr);
    let sf = r.exact_div(&g).expect("gcd divides").monic();
    let t1 = TriangularSet::new(xvars.clone(), vec![sf.clone()])
        .map_err(|e| SolveError::NotLazardShape(e.to_string()))?;

    // T2 = monic gcd of f1, f2 over K[X1]/(T1), by the Euclidean algorithm
    // with inversions modulo T1
    let mut a = t1.normal_form(f1);
    let mut b = t1.normal_form(f2);
    if a.degree_in(x2) < b.degree_in(x2) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        // make b monic in X2 modulo T1
        let db = b.degree_in(x2);
        if db == 0 {
            // constant in X2 but nonzero: the system has no common solution
            return Err(SolveError::NotZeroDim(
                "generators are coprime in X2 over the fiber".to_string(),
            ));
        }
        let lead = b.coeffs_wrt(x2).pop().unwrap();
        let linv = t1
            .invert_modulo(&lead)
            .map_err(|e| SolveError::NotLazardShape(format!("leading coefficient: {e}")))?;
        b = t1.normal_form(&b.mul(&linv));
        // a mod b
        while !a.is_zero() && a.degree_in(x2) >= db {
            let da = a.degree_in(x2);
            let alead = a.coeffs_wrt(x2).pop().unwrap();
            let mut shift = vec![0u32; 2];
            shift[x2] = da - db;
            a = t1.normal_form(&a.sub(&b.mul(&alead).mul_term(&shift, &Coeff::one())));
        }
        std::mem::swap(&mut a, &mut b);
    }
    let d2 = a.degree_in(x2);
    if d2 == 0 {
        return Err(SolveError::NotZeroDim(
            "no monic elimination polynomial for X2".to_string(),
        ));
    }
    let lead = a.coeffs_wrt(x2).pop().unwrap();
    let linv = t1
        .invert_modulo(&lead)
        .map_err(|e| SolveError::NotLazardShape(format!("leading coefficient: {e}")))?;
    let t2 = t1.normal_form(&a.mul(&linv));
    TriangularSet::new(xvars, vec![sf, t2]).map_err(|e| SolveError::NotLazardShape(e.to_string()))
}
