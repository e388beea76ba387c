//! Equiprojectable evaluation grids, exact Vandermonde solves, and
//! tensor-structured multivariate interpolation with norm tracking.

use crate::frac::ln_abs_rat;
use crate::poly::{BigRat, Coeff, Expo, MPoly, Vars};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpError {
    #[error("fewer than L admissible values at node ({0})")]
    GridExhausted(String),
    #[error("duplicate interpolation nodes")]
    SingularGrid,
    #[error("degree in {0} is not below L")]
    DegreeOverflow(String),
    #[error("value vector length {0} != L^m = {1}")]
    LengthMismatch(usize, usize),
}

/// An (M,L)-equiprojectable set: a nested choice tree over {1..M}^m where
/// every node carries exactly L children.
#[derive(Clone, Debug)]
pub struct EquiprojectableSet {
    pub m: usize,
    pub big_m: u64,
    pub l: usize,
    /// Children of each prefix (the root is the empty prefix).
    children: BTreeMap<Vec<i64>, Vec<i64>>,
}

impl EquiprojectableSet {
    /// Greedy construction: at every node take the L smallest values in
    /// {1..M} whose extended prefix passes the `avoid` predicate
    /// (`avoid = true` rejects the partial point).
    pub fn build(
        m: usize,
        big_m: u64,
        l: usize,
        avoid: Option<&dyn Fn(&[i64]) -> bool>,
    ) -> Result<Self, InterpError> {
        assert!(l as u64 <= big_m, "L must not exceed M");
        assert!(m >= 1);
        let mut children: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        let mut frontier: Vec<Vec<i64>> = vec![vec![]];
        for _level in 0..m {
            let mut next = vec![];
            for prefix in &frontier {
                let mut picked = vec![];
                for v in 1..=big_m as i64 {
                    let mut candidate = prefix.clone();
                    candidate.push(v);
                    let rejected = avoid.map(|f| f(&candidate)).unwrap_or(false);
                    if !rejected {
                        picked.push(v);
                        if picked.len() == l {
                            break;
                        }
                    }
                }
                if picked.len() < l {
                    return Err(InterpError::GridExhausted(format!(
                        "{:?}",
                        prefix.as_slice()
                    )));
                }
                for &v in &picked {
                    let mut child = prefix.clone();
                    child.push(v);
                    next.push(child);
                }
                children.insert(prefix.clone(), picked);
            }
            frontier = next;
        }
        Ok(EquiprojectableSet {
            m,
            big_m,
            l,
            children,
        })
    }

    /// All points in depth-first order over the choice tree (the canonical
    /// order for value vectors).
    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![];
        let mut stack = vec![vec![]];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == self.m {
                out.push(prefix);
                continue;
            }
            let kids = &self.children[&prefix];
            for &v in kids.iter().rev() {
                let mut child = prefix.clone();
                child.push(v);
                stack.push(child);
            }
        }
        out
    }

    pub fn card(&self) -> usize {
        (self.l as u64).pow(self.m as u32) as usize
    }

    fn kids(&self, prefix: &[i64]) -> &[i64] {
        &self.children[&prefix.to_vec()]
    }
}

/// Exact solve of the Vandermonde system V b = a on the given nodes
/// (V[i][j] = nodes[i]^j). Returns the coefficients, the observed max
/// log-norm of the b_i, and the bound A + L ln(M+1) + ln(L), where A is the
/// max log-norm of the input values.
pub struct VandermondeSolve {
    pub coeffs: Vec<BigRat>,
    pub observed: f64,
    pub bound: f64,
}

pub fn vandermonde_solve(
    nodes: &[i64],
    values: &[BigRat],
    big_m: u64,
) -> Result<VandermondeSolve, InterpError> {
    let l = nodes.len();
    assert_eq!(l, values.len());
    for i in 0..l {
        for j in i + 1..l {
            if nodes[i] == nodes[j] {
                return Err(InterpError::SingularGrid);
            }
        }
    }
    // exact Gaussian elimination on the Vandermonde matrix
    let mut mat: Vec<Vec<BigRat>> = (0..l)
        .map(|i| {
            let mut row = Vec::with_capacity(l);
            let x = BigRat::from_integer(BigInt::from(nodes[i]));
            let mut p = <BigRat as Coeff>::one();
            for _ in 0..l {
                row.push(p.clone());
                p = Coeff::mul(&p, &x);
            }
            row
        })
        .collect();
    let mut rhs = values.to_vec();
    for col in 0..l {
        let piv = (col..l)
            .find(|&r| !Zero::is_zero(&mat[r][col]))
            .expect("distinct nodes give a regular matrix");
        mat.swap(col, piv);
        rhs.swap(col, piv);
        let inv = mat[col][col].recip();
        for c in 0..l {
            mat[col][c] = &mat[col][c] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..l {
            if r != col && !Zero::is_zero(&mat[r][col]) {
                let f = mat[r][col].clone();
                for c in 0..l {
                    let t = &mat[col][c] * &f;
                    mat[r][c] = &mat[r][c] - &t;
                }
                let t = &rhs[col] * &f;
                rhs[r] = &rhs[r] - &t;
            }
        }
    }
    let a = values
        .iter()
        .filter(|v| !Zero::is_zero(*v))
        .map(ln_abs_rat)
        .fold(0.0f64, f64::max);
    let observed = rhs
        .iter()
        .filter(|v| !Zero::is_zero(*v))
        .map(ln_abs_rat)
        .fold(f64::NEG_INFINITY, f64::max);
    let bound = a + (l as f64) * ((big_m + 1) as f64).ln() + (l as f64).ln();
    Ok(VandermondeSolve {
        coeffs: rhs,
        observed,
        bound,
    })
}

/// Evaluates f (with per-variable degrees below L) at every point of the
/// set, in the canonical point order.
pub fn evaluate_at_set(
    f: &MPoly<BigRat>,
    set: &EquiprojectableSet,
) -> Result<Vec<BigRat>, InterpError> {
    let vars = f.vars();
    assert_eq!(vars.len(), set.m);
    for i in 0..set.m {
        if f.degree_in(i) as usize >= set.l {
            return Err(InterpError::DegreeOverflow(vars.name(i).to_string()));
        }
    }
    let out = set
        .points()
        .into_iter()
        .map(|p| eval_rat(f, &p))
        .collect();
    Ok(out)
}

fn eval_rat(f: &MPoly<BigRat>, point: &[i64]) -> BigRat {
    let mut acc = <BigRat as Coeff>::zero();
    for (e, c) in f.terms() {
        let mut t = c.clone();
        for (i, &x) in e.iter().enumerate() {
            for _ in 0..x {
                t = Coeff::mul(&t, &BigRat::from_integer(BigInt::from(point[i])));
            }
        }
        acc = Coeff::add(&acc, &t);
    }
    acc
}

/// Result of a tensor interpolation, with the observed coefficient log-norm
/// and the bound A + m L ln(M+1) + m ln(L).
pub struct Interpolation {
    pub poly: MPoly<BigRat>,
    pub observed: f64,
    pub bound: f64,
}

/// Interpolates the unique polynomial of per-variable degree below L through
/// the values indexed by the set (canonical order), level by level: the
/// evaluation matrix factors into block-diagonal Vandermonde matrices.
pub fn interpolate(
    values: &[BigRat],
    set: &EquiprojectableSet,
) -> Result<Interpolation, InterpError> {
    if values.len() != set.card() {
        return Err(InterpError::LengthMismatch(values.len(), set.card()));
    }
    let vars = Vars::new((1..=set.m).map(|i| format!("Y{i}")).collect::<Vec<String>>());
    let a = values
        .iter()
        .filter(|v| !Zero::is_zero(*v))
        .map(ln_abs_rat)
        .fold(0.0f64, f64::max);
    let poly = interp_rec(values, set, &vars, &[])?;
    let observed = poly
        .terms()
        .iter()
        .map(|(_, c)| ln_abs_rat(c))
        .fold(f64::NEG_INFINITY, f64::max);
    let m = set.m as f64;
    let l = set.l as f64;
    let bound = a + m * l * ((set.big_m + 1) as f64).ln() + m * l.ln();
    Ok(Interpolation {
        poly,
        observed,
        bound,
    })
}

fn interp_rec(
    values: &[BigRat],
    set: &EquiprojectableSet,
    vars: &Vars,
    prefix: &[i64],
) -> Result<MPoly<BigRat>, InterpError> {
    let level = prefix.len();
    let nodes = set.kids(prefix);
    if level + 1 == set.m {
        // univariate in the last variable
        let vs = vandermonde_solve(nodes, values, set.big_m)?;
        let terms = vs
            .coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !Zero::is_zero(c))
            .map(|(k, c)| {
                let mut e: Expo = vec![0; vars.len()];
                e[level] = k as u32;
                (e, c)
            })
            .collect();
        return Ok(MPoly::from_terms(vars, terms));
    }
    let stride = values.len() / set.l;
    // interpolate each branch in the remaining variables
    let mut branch_polys = Vec::with_capacity(set.l);
    for (b, &node) in nodes.iter().enumerate() {
        let slice = &values[b * stride..(b + 1) * stride];
        let mut child_prefix = prefix.to_vec();
        child_prefix.push(node);
        branch_polys.push(interp_rec(slice, set, vars, &child_prefix)?);
    }
    // for each monomial in the higher variables, solve for the coefficients
    // as a univariate polynomial in the current variable on `nodes`
    let mut monomials: BTreeMap<Expo, Vec<BigRat>> = BTreeMap::new();
    for (b, bp) in branch_polys.iter().enumerate() {
        for (e, c) in bp.terms() {
            monomials
                .entry(e.clone())
                .or_insert_with(|| vec![<BigRat as Coeff>::zero(); set.l])[b] = c.clone();
        }
    }
    let mut terms: Vec<(Expo, BigRat)> = vec![];
    for (e, vals) in monomials {
        let vs = vandermonde_solve(nodes, &vals, set.big_m)?;
        for (k, c) in vs.coeffs.into_iter().enumerate() {
            if Zero::is_zero(&c) {
                continue;
            }
            let mut e2 = e.clone();
            e2[level] = k as u32;
            terms.push((e2, c));
        }
    }
    Ok(MPoly::from_terms(vars, terms))
}
