//! Chow forms of zero-dimensional varieties, the denominator predictor a_n,
//! and the substitution operators taking a Chow form of the ambient
//! variety to (a multiple of) a Chow form of its generic fiber.

use crate::frac::{Frac, QY};
use crate::poly::{content_primpart_wrt, Coeff, DomainCoeff, Expo, MPoly, Vars};
use crate::triangular::{RegularChain, ScaledSet, TriangularSet};
use num_bigint::BigInt;
use num_traits::Signed;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChowError {
    #[error("triangular set fails the radicality proxy (an iterated resultant vanishes)")]
    NonRadical,
    #[error("structural error: {0}")]
    Structure(String),
    #[error("substituted Chow form vanished for a nonzero input")]
    ContradictsTheorem,
}

/// Monic Chow form of the zero set of a triangular set: the determinant of
/// `U0*Id + U1*M1 + ... + Un*Mn` on the quotient basis, where `M_i` is the
/// multiplication-by-X_i matrix. Homogeneous of degree d_1...d_n in U with
/// the coefficient of `U0^(d_1...d_n)` equal to 1.
pub fn monic_chow<K: DomainCoeff>(
    t: &TriangularSet<Frac<K>>,
) -> Result<MPoly<Frac<K>>, ChowError> {
    if !t.is_radical_proxy() {
        return Err(ChowError::NonRadical);
    }
    let n = t.len();
    let uvars = Vars::u(n);
    let basis = t.quotient_basis();
    let dim = basis.len();
    let position: std::collections::BTreeMap<Vec<u32>, usize> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let index_of = |e: &[u32]| -> usize { position[&e.to_vec()] };
    // entries of U0*Id + sum U_i M_i, as U-polynomials over the field
    let zero_u = MPoly::<Frac<K>>::zero(&uvars);
    let mut mat: Vec<Vec<MPoly<Frac<K>>>> = vec![vec![zero_u; dim]; dim];
    for (row, _) in basis.iter().enumerate() {
        mat[row][row] = MPoly::var(&uvars, 0);
    }
    for i in 0..n {
        for (col, b) in basis.iter().enumerate() {
            let mut xe = b.clone();
            xe[i] += 1;
            let prod = t.normal_form(&MPoly::monomial(t.vars(), xe, Frac::one()));
            for (e, c) in prod.terms() {
                let row = index_of(e);
                let u_term = MPoly::var(&uvars, i + 1).scale(c);
                mat[row][col] = mat[row][col].add(&u_term);
            }
        }
    }
    Ok(crate::poly::bareiss_det(&mut mat, &uvars))
}

/// A primitive Chow form: integer coefficients over [Y..,U..], unit content,
/// with the sign fixed so the coefficient of the top U0 power leads positive.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveChow {
    /// m parameters, n + 1 Chow variables U0..Un.
    pub m: usize,
    pub n: usize,
    /// Body over [Y1..Ym, U0..Un].
    pub body: MPoly<BigInt>,
    /// The coefficient of U0^(d_1..d_n), over [Y1..Ym]; the predicted
    /// common denominator.
    pub a_n: MPoly<BigInt>,
}

/// Clears denominators of a monic Chow form and normalizes content and sign.
pub fn primitive_chow(monic: &MPoly<QY>, m: usize) -> PrimitiveChow {
    let uvars = monic.vars().clone();
    let n = uvars.len() - 1;
    let yvars = Vars::new((1..=m).map(|i| format!("Y{i}")).collect::<Vec<String>>());
    // lcm of the coefficient denominators in Z[Y]
    let mut lcm = MPoly::<BigInt>::one(&yvars);
    for (_, c) in monic.terms() {
        let den = c.den().embed(&yvars);
        let g = crate::poly::gcd_mpoly(&lcm, &den);
        lcm = lcm.mul(&den.exact_div(&g).unwrap());
    }
    // flatten into Z[Y, U]
    let mut all = Vec::with_capacity(m + n + 1);
    all.extend(yvars.names().iter().cloned());
    all.extend(uvars.names().iter().cloned());
    let yuvars = Vars::new(all);
    let mut terms: Vec<(Expo, BigInt)> = vec![];
    for (ue, c) in monic.terms() {
        let num = c.num().embed(&yvars);
        let den = c.den().embed(&yvars);
        let scaled = num.mul(&lcm.exact_div(&den).expect("lcm clears denominators"));
        for (ye, k) in scaled.terms() {
            let mut e = vec![0u32; m + n + 1];
            e[..m].copy_from_slice(ye);
            e[m..].copy_from_slice(ue);
            terms.push((e, k.clone()));
        }
    }
    let body = MPoly::from_terms(&yuvars, terms);
    let u_idx: Vec<usize> = (m..m + n + 1).collect();
    let (_, mut body) = content_primpart_wrt(&body, &u_idx).expect("nonzero Chow form");
    // sign: the top U0-power coefficient leads positive
    let degree: u32 = monic.degree_in(0);
    let top = body
        .terms()
        .iter()
        .find(|(e, _)| e[m] == degree && e[m + 1..].iter().all(|&x| x == 0))
        .map(|(_, c)| c.clone())
        .expect("monic input has a top U0 power");
    if top.is_negative() {
        body = body.neg();
    }
    let a_n = {
        let coeffs: Vec<(Expo, BigInt)> = body
            .terms()
            .iter()
            .filter(|(e, _)| e[m] == degree && e[m + 1..].iter().all(|&x| x == 0))
            .map(|(e, c)| (e[..m].to_vec(), c.clone()))
            .collect();
        MPoly::from_terms(&yvars, coeffs)
    };
    PrimitiveChow { m, n, body, a_n }
}

/// Report of the integrality and degree checks on a_n * N_n and
/// a_n^{G_n} * ~T_n.
#[derive(Clone, Debug)]
pub struct DenomReport {
    pub g_n: u32,
    pub deg_bound: u32,
    pub n_integral: bool,
    pub n_deg: u32,
    pub n_deg_ok: bool,
    pub t_integral: bool,
    pub t_deg: u32,
    pub t_deg_ok: bool,
    pub witnesses: Vec<String>,
}

impl DenomReport {
    pub fn pass(&self) -> bool {
        self.n_integral && self.n_deg_ok && self.t_integral && self.t_deg_ok
    }
}

/// Multiplies a Q(Y)[X] polynomial coefficientwise by a Z[Y] polynomial and
/// reports whether every product lands in Z[Y]; returns the max Y-degree of
/// the cleared coefficients and failure witnesses.
fn clear_and_check(
    poly: &MPoly<QY>,
    factor: &MPoly<BigInt>,
    witnesses: &mut Vec<String>,
    label: &str,
) -> (bool, u32) {
    let mut integral = true;
    let mut max_deg = 0u32;
    for (_, c) in poly.terms() {
        let f = Frac::from_poly(factor.clone());
        let cleared = c.mul(&f);
        if !cleared.is_poly() {
            integral = false;
            witnesses.push(format!(
                "{label}: denominator {} survives clearing",
                cleared.den().to_canonical_string()
            ));
        } else {
            max_deg = max_deg.max(cleared.num().total_degree());
        }
    }
    (integral, max_deg)
}

/// Verifies the denominator prediction: a_n N_n and a_n^{G_n} ~T_n have
/// integer polynomial coefficients with Y-degrees within the supplied bound
/// (d_V itself, or a Bezout substitute d^n).
pub fn denominator_check(
    t: &TriangularSet<QY>,
    chain: &RegularChain<QY>,
    scaled: &ScaledSet<QY>,
    a_n: &MPoly<BigInt>,
    deg_bound: u32,
) -> DenomReport {
    let n = t.len();
    let degrees = t.degrees();
    let g_n: u32 = 1 + 2 * degrees[..n - 1].iter().map(|&d| d - 1).sum::<u32>();
    let mut witnesses = vec![];
    let nn = &chain.polys[n - 1];
    let (n_integral, n_deg) = clear_and_check(nn, a_n, &mut witnesses, "a_n*N_n");
    let n_deg_ok = n_integral && n_deg <= deg_bound;
    if n_integral && !n_deg_ok {
        witnesses.push(format!("a_n*N_n: Y-degree {n_deg} exceeds {deg_bound}"));
    }
    let tt = &scaled.polys[n - 1];
    let an_pow = a_n.pow(g_n);
    let (t_integral, t_deg) = clear_and_check(tt, &an_pow, &mut witnesses, "a_n^G_n*~T_n");
    let t_bound = g_n * deg_bound;
    let t_deg_ok = t_integral && t_deg <= t_bound;
    if t_integral && !t_deg_ok {
        witnesses.push(format!("a_n^G_n*~T_n: Y-degree {t_deg} exceeds {t_bound}"));
    }
    DenomReport {
        g_n,
        deg_bound,
        n_integral,
        n_deg,
        n_deg_ok,
        t_integral,
        t_deg,
        t_deg_ok,
        witnesses,
    }
}

/// A Chow form of an m-dimensional variety in coordinates (Y1..Ym, X1..Xn):
/// m+1 groups of m+n+1 variables `U<i>_<j>`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiChow {
    pub m: usize,
    pub n: usize,
    pub body: MPoly<BigInt>,
}

impl MultiChow {
    pub fn group_vars(m: usize, n: usize) -> Vars {
        let mut names = vec![];
        for i in 0..=m {
            for j in 0..=(m + n) {
                names.push(format!("U{i}_{j}"));
            }
        }
        Vars::new(names)
    }

    /// Validates multi-homogeneity: each term has the same degree in every
    /// group, one common degree across groups.
    pub fn new(m: usize, n: usize, body: MPoly<BigInt>) -> Result<Self, ChowError> {
        let vars = Self::group_vars(m, n);
        if body.vars() != &vars {
            return Err(ChowError::Structure(format!(
                "expected {} group variables U<i>_<j>",
                (m + 1) * (m + n + 1)
            )));
        }
        let arity = m + n + 1;
        let mut common: Option<u32> = None;
        for (e, _) in body.terms() {
            for i in 0..=m {
                let d: u32 = e[i * arity..(i + 1) * arity].iter().sum();
                match common {
                    None => common = Some(d),
                    Some(c) if c != d => {
                        return Err(ChowError::Structure(
                            "not multi-homogeneous of equal group degrees".to_string(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(MultiChow { m, n, body })
    }

    /// File format: `groups <m+1> arity <m+n+1>` header, then the canonical
    /// polynomial string in the variables `U<i>_<j>`.
    pub fn from_text(text: &str) -> Result<Self, ChowError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| ChowError::Structure("empty file".to_string()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let (groups, arity) = match parts.as_slice() {
            ["groups", g, "arity", a] => {
                let g: usize = g
                    .parse()
                    .map_err(|_| ChowError::Structure("bad group count".to_string()))?;
                let a: usize = a
                    .parse()
                    .map_err(|_| ChowError::Structure("bad arity".to_string()))?;
                (g, a)
            }
            _ => {
                return Err(ChowError::Structure(
                    "expected header: groups <m+1> arity <m+n+1>".to_string(),
                ))
            }
        };
        if groups == 0 || arity < groups {
            return Err(ChowError::Structure("inconsistent header".to_string()));
        }
        let m = groups - 1;
        let n = arity - m - 1;
        let body_text: String = lines
            .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .collect::<Vec<&str>>()
            .join(" ");
        let vars = Self::group_vars(m, n);
        let body = crate::sysfile::parse_polynomial_int(&body_text, &vars, 2)
            .map_err(|e| ChowError::Structure(e.to_string()))?;
        Self::new(m, n, body)
    }

    pub fn to_text(&self) -> String {
        format!(
            "groups {} arity {}\n{}\n",
            self.m + 1,
            self.m + self.n + 1,
            self.body.to_canonical_string()
        )
    }
}

enum Image {
    Zero,
    /// sign and target variable index (None = the constant 1 or -1)
    Mono(i8, Option<usize>),
}

/// Applies a monomial substitution to an integer polynomial.
fn substitute_monomials(
    body: &MPoly<BigInt>,
    target: &Vars,
    image_of: impl Fn(usize) -> Image,
) -> MPoly<BigInt> {
    let mut terms: Vec<(Expo, BigInt)> = vec![];
    'term: for (e, c) in body.terms() {
        let mut out = vec![0u32; target.len()];
        let mut coeff = c.clone();
        for (v, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            match image_of(v) {
                Image::Zero => continue 'term,
                Image::Mono(sign, var) => {
                    if sign < 0 && k % 2 == 1 {
                        coeff = -coeff;
                    }
                    if let Some(idx) = var {
                        out[idx] += k;
                    }
                }
            }
        }
        terms.push((out, coeff));
    }
    MPoly::from_terms(target, terms)
}

/// The finite-projection substitution: U_(0) <- (U0, Y1..Ym)^T, U_(Y) <- the
/// zero row over a negated identity, U_(X) <- first row (U1..Un), zero rows
/// below. The result is a Chow form of the generic fiber when the projection
/// to the parameter space is finite; it may vanish otherwise.
pub fn substitute_kps(c: &MultiChow) -> MPoly<BigInt> {
    let (m, n) = (c.m, c.n);
    let arity = m + n + 1;
    let mut names = vec![];
    for i in 1..=m {
        names.push(format!("Y{i}"));
    }
    for r in 0..=n {
        names.push(format!("U{r}"));
    }
    let target = Vars::new(names);
    substitute_monomials(&c.body, &target, |v| {
        let (i, j) = (v / arity, v % arity);
        if j == 0 {
            if i == 0 {
                Image::Mono(1, Some(m)) // U0
            } else {
                Image::Mono(1, Some(i - 1)) // Y_i
            }
        } else if j <= m {
            if i == j {
                Image::Mono(-1, None)
            } else {
                Image::Zero
            }
        } else {
            let r = j - m; // 1..=n
            if i == 0 {
                Image::Mono(1, Some(m + r)) // U_r
            } else {
                Image::Zero
            }
        }
    })
}

/// Result of the epsilon substitution.
#[derive(Clone, Debug)]
pub struct EpsilonSplit {
    /// The substituted form, over [Y.., U0..Un, U<i>_<m+1..m+n>.., eps].
    pub c_eps: MPoly<BigInt>,
    /// Coefficient of the lowest epsilon power (same variable list, eps = 0).
    pub c_zero: MPoly<BigInt>,
    /// The lowest epsilon power.
    pub valuation: u32,
}

/// The epsilon substitution: like the finite-projection one, except rows
/// 1..m of U_(X) become eps * U^i_{m+r} instead of zero. For a genuine Chow
/// form the result is nonzero, and a primitive Chow form of the generic
/// fiber divides the lowest-epsilon coefficient.
pub fn substitute_epsilon(c: &MultiChow) -> Result<EpsilonSplit, ChowError> {
    let (m, n) = (c.m, c.n);
    let arity = m + n + 1;
    let mut names = vec![];
    for i in 1..=m {
        names.push(format!("Y{i}"));
    }
    for r in 0..=n {
        names.push(format!("U{r}"));
    }
    let base = names.len();
    let mut kept = std::collections::BTreeMap::new();
    for i in 1..=m {
        for r in 1..=n {
            kept.insert((i, r), names.len());
            names.push(format!("U{i}_{}", m + r));
        }
    }
    let eps_idx = names.len();
    names.push("eps".to_string());
    let target = Vars::new(names);
    let _ = base;
    let c_eps = {
        let mut terms: Vec<(Expo, BigInt)> = vec![];
        'term: for (e, coeff0) in c.body.terms() {
            let mut out = vec![0u32; target.len()];
            let mut coeff = coeff0.clone();
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let (i, j) = (v / arity, v % arity);
                if j == 0 {
                    if i == 0 {
                        out[m] += k;
                    } else {
                        out[i - 1] += k;
                    }
                } else if j <= m {
                    if i == j {
                        if k % 2 == 1 {
                            coeff = -coeff;
                        }
                    } else {
                        continue 'term;
                    }
                } else {
                    let r = j - m;
                    if i == 0 {
                        out[m + r] += k;
                    } else {
                        out[kept[&(i, r)]] += k;
                        out[eps_idx] += k;
                    }
                }
            }
            terms.push((out, coeff));
        }
        MPoly::from_terms(&target, terms)
    };
    if c_eps.is_zero() {
        if c.body.is_zero() {
            return Ok(EpsilonSplit {
                c_eps: MPoly::zero(&target),
                c_zero: MPoly::zero(&target),
                valuation: 0,
            });
        }
        return Err(ChowError::ContradictsTheorem);
    }
    let valuation = c_eps
        .terms()
        .iter()
        .map(|(e, _)| e[eps_idx])
        .min()
        .unwrap();
    let c_zero = MPoly::from_terms(
        &target,
        c_eps
            .terms()
            .iter()
            .filter(|(e, _)| e[eps_idx] == valuation)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[eps_idx] = 0;
                (e2, c.clone())
            })
            .collect(),
    );
    Ok(EpsilonSplit {
        c_eps,
        c_zero,
        valuation,
    })
}
