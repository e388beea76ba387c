//! Monic triangular sets, normal-form reduction, regular chains, iterated
//! resultants and the scaled family, the delta degree profile, and
//! specialization at integer parameter points.

use crate::frac::{Frac, QY};
use crate::poly::{resultant, Coeff, DomainCoeff, FieldCoeff, MPoly, Vars};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TriangularError {
    #[error("level {level}: {detail}")]
    Invalid { level: usize, detail: String },
    #[error("product of main-variable derivatives reduces to zero at level {level}")]
    NonRadical { level: usize },
    #[error("zero divisor modulo the triangular set; witness factor {witness}")]
    ZeroDivisor { witness: String },
    #[error("element reduces to zero modulo the triangular set")]
    NotInvertible,
}

/// A monic triangular set T1..Tk with T_l in K[X1..X_l], monic in X_l and
/// reduced: deg_{X_r}(T_l) < d_r for r < l.
#[derive(Clone, PartialEq)]
pub struct TriangularSet<F: FieldCoeff + DomainCoeff> {
    vars: Vars,
    polys: Vec<MPoly<F>>,
    degrees: Vec<u32>,
}

impl<F: FieldCoeff + DomainCoeff> std::fmt::Debug for TriangularSet<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "TriangularSet {{")?;
        for (i, p) in self.polys.iter().enumerate() {
            writeln!(f, "  T{} = {}", i + 1, p)?;
        }
        write!(f, "}}")
    }
}

impl<F: FieldCoeff + DomainCoeff> TriangularSet<F> {
    /// Validates and builds a triangular set. `vars` lists X1..Xn; `polys`
    /// gives T1..Tk for some k <= n.
    pub fn new(vars: Vars, polys: Vec<MPoly<F>>) -> Result<Self, TriangularError> {
        let mut degrees = Vec::with_capacity(polys.len());
        for (l, t) in polys.iter().enumerate() {
            let level = l + 1;
            let fail = |detail: &str| TriangularError::Invalid {
                level,
                detail: detail.to_string(),
            };
            if t.vars() != &vars {
                return Err(fail("variable list mismatch"));
            }
            let d = t.degree_in(l);
            if d == 0 {
                return Err(fail("main degree is zero"));
            }
            for r in l + 1..vars.len() {
                if t.degree_in(r) > 0 {
                    return Err(fail("depends on a higher variable"));
                }
            }
            let lead = t.coeffs_wrt(l).pop().unwrap();
            if !lead.is_one() {
                return Err(fail("not monic in its main variable"));
            }
            // degrees in lower variables may reach d_r but not exceed it
            for (r, &dr) in degrees.iter().enumerate() {
                if t.degree_in(r) > dr {
                    return Err(fail("not reduced with respect to a lower level"));
                }
            }
            degrees.push(d);
        }
        Ok(TriangularSet {
            vars,
            polys,
            degrees,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }
    pub fn len(&self) -> usize {
        self.polys.len()
    }
    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
    pub fn polys(&self) -> &[MPoly<F>] {
        &self.polys
    }
    pub fn poly(&self, level: usize) -> &MPoly<F> {
        &self.polys[level - 1]
    }
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Product of the main degrees: the number of points of the zero set.
    pub fn point_count(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).product()
    }

    /// The prefix T1..Tl as a triangular set.
    pub fn prefix(&self, l: usize) -> Self {
        TriangularSet {
            vars: self.vars.clone(),
            polys: self.polys[..l].to_vec(),
            degrees: self.degrees[..l].to_vec(),
        }
    }

    /// Canonical presentation with fully reduced tails: each T_l is replaced
    /// by its normal form modulo the lower levels. Generates the same ideal.
    pub fn strict_form(&self) -> Self {
        let mut out = TriangularSet {
            vars: self.vars.clone(),
            polys: vec![],
            degrees: vec![],
        };
        for (l, t) in self.polys.iter().enumerate() {
            let r = out.normal_form(t);
            out.polys.push(r);
            out.degrees.push(self.degrees[l]);
        }
        out
    }

    /// Normal form modulo the set: successive monic division by T_k down to
    /// T_1. `a` may live over a larger variable list containing the X block.
    pub fn normal_form(&self, a: &MPoly<F>) -> MPoly<F> {
        let mut r = a.clone();
        for l in (0..self.polys.len()).rev() {
            let var = if a.vars() == &self.vars {
                l
            } else {
                a.vars()
                    .index_of(self.vars.name(l))
                    .expect("input variables must contain the set's variables")
            };
            let t = if a.vars() == &self.vars {
                self.polys[l].clone()
            } else {
                self.polys[l].embed(a.vars())
            };
            let d = self.degrees[l];
            while !r.is_zero() && r.degree_in(var) >= d {
                let top = r.degree_in(var);
                let coeff = r.coeffs_wrt(var).pop().unwrap();
                let mut shift = vec![0u32; r.vars().len()];
                shift[var] = top - d;
                r = r.sub(&t.mul(&coeff).mul_term(&shift, &F::one()));
            }
        }
        r
    }

    /// Monomial basis of the quotient algebra, as exponent vectors over the
    /// set's variable list (exponent of X_r below d_r, zero above level k).
    pub fn quotient_basis(&self) -> Vec<Vec<u32>> {
        let mut basis = vec![vec![0u32; self.vars.len()]];
        for (l, &d) in self.degrees.iter().enumerate() {
            let mut next = Vec::with_capacity(basis.len() * d as usize);
            for e in &basis {
                for k in 0..d {
                    let mut e2 = e.clone();
                    e2[l] = k;
                    next.push(e2);
                }
            }
            basis = next;
        }
        basis
    }

    /// Inverse of `f` modulo the set, by an exact linear solve on the
    /// quotient basis. Errors with a witness factor when `f` is a zero
    /// divisor, and with `NotInvertible` when `f` reduces to zero.
    pub fn invert_modulo(&self, f: &MPoly<F>) -> Result<MPoly<F>, TriangularError> {
        let nf = self.normal_form(f);
        if nf.is_zero() {
            return Err(TriangularError::NotInvertible);
        }
        for r in self.polys.len()..self.vars.len() {
            assert_eq!(
                nf.degree_in(r),
                0,
                "invert_modulo input must live over the prefix variables"
            );
        }
        let basis = self.quotient_basis();
        let dim = basis.len();
        let position: std::collections::BTreeMap<Vec<u32>, usize> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let index_of = |e: &[u32]| -> usize { position[&e.to_vec()] };
        // columns: nf(f * b_j) in basis coordinates
        let mut mat: Vec<Vec<F>> = vec![vec![F::zero(); dim]; dim];
        for (j, b) in basis.iter().enumerate() {
            let prod = self.normal_form(&nf.mul_term(b, &F::one()));
            for (e, c) in prod.terms() {
                mat[index_of(e)][j] = c.clone();
            }
        }
        // solve M x = e_0 (coordinates of the monomial 1)
        let mut rhs: Vec<F> = vec![F::zero(); dim];
        rhs[0] = F::one();
        match solve_linear(&mut mat, &mut rhs) {
            LinearOutcome::Solved(x) => {
                let terms = basis
                    .into_iter()
                    .zip(x)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, c)| (e, c))
                    .collect();
                Ok(MPoly::from_terms(&self.vars, terms))
            }
            LinearOutcome::Kernel(w) => {
                let terms = basis
                    .into_iter()
                    .zip(w)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, c)| (e, c))
                    .collect();
                let witness: MPoly<F> = MPoly::from_terms(&self.vars, terms);
                Err(TriangularError::ZeroDivisor {
                    witness: witness.to_canonical_string(),
                })
            }
        }
    }

    /// Regular chain: D_l is the reduced product of the main-variable
    /// derivatives of the lower levels, N_l the reduced product D_l * T_l.
    pub fn regular_chain(&self) -> Result<RegularChain<F>, TriangularError> {
        let mut denoms = Vec::with_capacity(self.polys.len());
        let mut polys = Vec::with_capacity(self.polys.len());
        for l in 0..self.polys.len() {
            if l == 0 {
                denoms.push(MPoly::one(&self.vars));
                polys.push(self.polys[0].clone());
                continue;
            }
            let prefix = self.prefix(l);
            let mut prod = MPoly::one(&self.vars);
            for i in 0..l {
                prod = prod.mul(&self.polys[i].derivative(i));
            }
            let d = prefix.normal_form(&prod);
            if d.is_zero() {
                return Err(TriangularError::NonRadical { level: l + 1 });
            }
            let n = prefix.normal_form(&d.mul(&self.polys[l]));
            denoms.push(d);
            polys.push(n);
        }
        Ok(RegularChain { denoms, polys })
    }

    /// Iterated resultants e_i and the scaled family ~T_l = e_1..e_{l-1} T_l.
    /// An e_i equal to zero flags a non-radical set; no error is raised.
    pub fn iterated_resultants(&self) -> ScaledSet<F> {
        let mut es: Vec<F> = Vec::with_capacity(self.polys.len());
        for i in 0..self.polys.len() {
            let mut r = self.polys[i].derivative(i);
            let mut zero = r.is_zero();
            if !zero {
                for j in (0..=i).rev() {
                    if r.is_constant() && r.is_one() {
                        // res(1, ., .) = 1: nothing changes further down
                        break;
                    }
                    if r.degree_in(j) == 0 && r.is_constant() {
                        // constant convention: res(c, T_j, X_j) = c^{d_j}
                        r = r.pow(self.degrees[j]);
                        continue;
                    }
                    match resultant(&r, &self.polys[j], j) {
                        Ok(next) => r = next,
                        Err(_) => unreachable!("T_j has positive degree in X_j"),
                    }
                    if r.is_zero() {
                        zero = true;
                        break;
                    }
                }
            }
            if zero {
                es.push(F::zero());
            } else {
                debug_assert!(r.is_constant());
                es.push(r.constant_value().unwrap());
            }
        }
        let mut polys = Vec::with_capacity(self.polys.len());
        let mut scale = F::one();
        for (l, t) in self.polys.iter().enumerate() {
            if l > 0 {
                scale = scale.mul(&es[l - 1]);
            }
            polys.push(t.scale(&scale));
        }
        ScaledSet {
            resultants: es,
            polys,
        }
    }

    /// True when every iterated resultant is nonzero (the radicality proxy).
    pub fn is_radical_proxy(&self) -> bool {
        self.iterated_resultants()
            .resultants
            .iter()
            .all(|e| !e.is_zero())
    }
}

/// The regular chain (N_1..N_k) with leading coefficients (D_1..D_k).
#[derive(Clone, Debug)]
pub struct RegularChain<F: FieldCoeff + DomainCoeff> {
    pub denoms: Vec<MPoly<F>>,
    pub polys: Vec<MPoly<F>>,
}

/// The scaled family ~T_l = e_1..e_{l-1} T_l together with the iterated
/// resultants e_i.
#[derive(Clone, Debug)]
pub struct ScaledSet<F: FieldCoeff + DomainCoeff> {
    pub resultants: Vec<F>,
    pub polys: Vec<MPoly<F>>,
}

enum LinearOutcome<F> {
    Solved(Vec<F>),
    /// A nonzero kernel vector of the matrix.
    Kernel(Vec<F>),
}

/// Exact Gaussian elimination over a field. Returns the solution of
/// `M x = rhs`, or a nonzero kernel vector when `M` is singular.
fn solve_linear<F: FieldCoeff>(mat: &mut [Vec<F>], rhs: &mut [F]) -> LinearOutcome<F> {
    let n = mat.len();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut row = 0;
    let mut pivot_cols = vec![];
    for col in 0..n {
        let piv = (row..n).find(|&i| !mat[i][col].is_zero());
        let Some(piv) = piv else { continue };
        mat.swap(row, piv);
        rhs.swap(row, piv);
        let inv = mat[row][col].inv();
        for c in 0..n {
            mat[row][c] = mat[row][c].mul(&inv);
        }
        rhs[row] = rhs[row].mul(&inv);
        for i in 0..n {
            if i != row && !mat[i][col].is_zero() {
                let factor = mat[i][col].clone();
                for c in 0..n {
                    let t = mat[row][c].mul(&factor);
                    mat[i][c] = mat[i][c].sub(&t);
                }
                let t = rhs[row].mul(&factor);
                rhs[i] = rhs[i].sub(&t);
            }
        }
        pivot_cols.push(col);
        pivot_col_of_row.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    if row == n {
        // invertible: unscramble the solution by pivot column
        let mut x = vec![F::zero(); n];
        for (r, &col) in pivot_col_of_row.iter().enumerate() {
            x[col] = rhs[r].clone();
        }
        return LinearOutcome::Solved(x);
    }
    // singular: build a kernel vector from a free column
    let free_col = (0..n).find(|c| !pivot_cols.contains(c)).unwrap();
    let mut w = vec![F::zero(); n];
    w[free_col] = F::one();
    for (r, &col) in pivot_col_of_row.iter().enumerate() {
        w[col] = mat[r][free_col].neg();
    }
    LinearOutcome::Kernel(w)
}

/// Per-level delta profile: max over reduced coefficients a/b of
/// deg(a) + deg(b), total degree in the parameters.
pub fn delta_measure<K: DomainCoeff>(t: &TriangularSet<Frac<K>>) -> Vec<u32> {
    t.polys()
        .iter()
        .map(|p| {
            p.terms()
                .iter()
                .map(|(_, c)| c.delta_degree())
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// Why a parameter point is not a good specialization.
#[derive(Clone, Debug, PartialEq)]
pub enum BadSpecialization {
    /// A coefficient denominator vanishes at the point (the witness is the
    /// offending denominator).
    DenominatorVanishes(String),
    /// Some specialized iterated resultant vanishes.
    NonRadicalFiber { level: usize },
}

impl std::fmt::Display for BadSpecialization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BadSpecialization::DenominatorVanishes(d) => {
                write!(f, "DenominatorVanishes: {d}")
            }
            BadSpecialization::NonRadicalFiber { level } => {
                write!(f, "NonRadicalFiber: e_{level} vanishes")
            }
        }
    }
}

/// Result of specializing a triangular set over Q(Y) at an integer point.
#[derive(Clone, Debug)]
pub enum Specialized {
    Good(TriangularSet<QY>),
    Bad {
        set: Option<TriangularSet<QY>>,
        reason: BadSpecialization,
    },
}

impl Specialized {
    pub fn is_good(&self) -> bool {
        matches!(self, Specialized::Good(_))
    }
    pub fn set(&self) -> Option<&TriangularSet<QY>> {
        match self {
            Specialized::Good(s) => Some(s),
            Specialized::Bad { set, .. } => set.as_ref(),
        }
    }
}

/// Substitutes Y <- y coefficientwise. Good iff no coefficient denominator
/// vanishes at y and the iterated resultants of the specialized set are all
/// nonzero (the radicality proxy; the last of them is e_n).
pub fn specialize(t: &TriangularSet<QY>, y: &[BigInt]) -> Specialized {
    let empty = Vars::new(Vec::<String>::new());
    let mut polys = Vec::with_capacity(t.len());
    for p in t.polys() {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (e, c) in p.terms() {
            // constants may carry an empty parameter list
            let point: &[BigInt] = if c.vars().is_empty() { &[] } else { y };
            assert_eq!(c.vars().len(), point.len(), "point arity mismatch");
            match c.eval_int(point) {
                Some(v) => terms.push((e.clone(), QY::from_rat(&empty, &v))),
                None => {
                    return Specialized::Bad {
                        set: None,
                        reason: BadSpecialization::DenominatorVanishes(
                            c.den().to_canonical_string(),
                        ),
                    }
                }
            }
        }
        polys.push(MPoly::from_terms(t.vars(), terms));
    }
    let set = TriangularSet::new(t.vars().clone(), polys)
        .expect("specialization preserves monic triangular shape");
    let es = set.iterated_resultants();
    if let Some(level) = es.resultants.iter().position(|e| e.is_zero()) {
        return Specialized::Bad {
            set: Some(set),
            reason: BadSpecialization::NonRadicalFiber { level: level + 1 },
        };
    }
    Specialized::Good(set)
}
