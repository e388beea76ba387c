//! Closed-form height and degree estimates, evaluated exactly.
//!
//! Every formula is computed in directed-rounding rational interval
//! arithmetic (the `hi` submodule): reported values are upper bounds of the
//! true formula values, never below them, with far more than 30 significant
//! digits of slack.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use std::collections::BTreeMap;

pub use hi::Hi;
pub type Rat = num_rational::BigRational;

pub mod hi {
    //! Interval arithmetic on nonnegative rationals with a correctly
    //! rounded natural logarithm.

    use super::Rat;
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};
    use std::sync::OnceLock;

    /// Decimal places kept after each operation.
    const PREC: u32 = 80;
    /// Series length for atanh(t), t <= 1/3: 3^-(2J+1) < 1e-75.
    const SERIES_TERMS: u32 = 80;

    #[derive(Clone, Debug)]
    pub struct Hi {
        lo: Rat,
        hi: Rat,
    }

    fn pow10(k: u32) -> BigInt {
        BigInt::from(10u32).pow(k)
    }

    fn round_down(q: &Rat) -> Rat {
        let scale = pow10(PREC);
        let scaled = q * Rat::from_integer(scale.clone());
        Rat::new(scaled.floor().to_integer(), scale)
    }

    fn round_up(q: &Rat) -> Rat {
        let scale = pow10(PREC);
        let scaled = q * Rat::from_integer(scale.clone());
        Rat::new(scaled.ceil().to_integer(), scale)
    }

    impl Hi {
        pub fn exact(q: Rat) -> Self {
            Hi { lo: q.clone(), hi: q }
        }

        pub fn from_u64(v: u64) -> Self {
            Self::exact(Rat::from_integer(BigInt::from(v)))
        }

        pub fn from_bigint(v: &BigInt) -> Self {
            Self::exact(Rat::from_integer(v.clone()))
        }

        pub fn zero() -> Self {
            Self::from_u64(0)
        }

        pub fn lo(&self) -> &Rat {
            &self.lo
        }
        pub fn hi(&self) -> &Rat {
            &self.hi
        }

        fn rounded(lo: Rat, hi: Rat) -> Self {
            debug_assert!(lo <= hi);
            Hi {
                lo: round_down(&lo),
                hi: round_up(&hi),
            }
        }

        pub fn add(&self, rhs: &Self) -> Self {
            Self::rounded(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
        }

        pub fn sum(terms: &[Self]) -> Self {
            let mut acc = Self::zero();
            for t in terms {
                acc = acc.add(t);
            }
            acc
        }

        /// Product; both operands must be nonnegative.
        pub fn mul(&self, rhs: &Self) -> Self {
            assert!(!self.lo.is_negative() && !rhs.lo.is_negative());
            Self::rounded(&self.lo * &rhs.lo, &self.hi * &rhs.hi)
        }

        pub fn max(&self, rhs: &Self) -> Self {
            Hi {
                lo: self.lo.clone().max(rhs.lo.clone()),
                hi: self.hi.clone().max(rhs.hi.clone()),
            }
        }

        /// Interval width, as f64.
        pub fn width_f64(&self) -> f64 {
            rat_to_f64(&(&self.hi - &self.lo))
        }

        pub fn upper_f64(&self) -> f64 {
            rat_to_f64(&self.hi)
        }

        pub fn lower_f64(&self) -> f64 {
            rat_to_f64(&self.lo)
        }

        /// Upper endpoint as a decimal string with the given digits after
        /// the point, rounded up.
        pub fn upper_decimal(&self, digits: u32) -> String {
            decimal_of(&self.hi, digits, true)
        }

        /// ln of the interval (both endpoints must be positive).
        pub fn ln(&self) -> Self {
            let lo = ln_rat(&self.lo);
            let hi = ln_rat(&self.hi);
            Hi {
                lo: lo.lo,
                hi: hi.hi,
            }
        }

        /// Division by a positive interval.
        pub fn div(&self, rhs: &Self) -> Self {
            assert!(rhs.lo.is_positive());
            Self::rounded(&self.lo / &rhs.hi, &self.hi / &rhs.lo)
        }
    }

    pub fn rat_to_f64(q: &Rat) -> f64 {
        use num_traits::ToPrimitive;
        if q.is_zero() {
            return 0.0;
        }
        if let Some(v) = q.to_f64() {
            if v.is_finite() {
                return v;
            }
        }
        let ln = crate::frac::ln_abs_bigint(q.numer()) - crate::frac::ln_abs_bigint(q.denom());
        let v = ln.exp();
        if q.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Decimal rendering with directed rounding.
    pub fn decimal_of(q: &Rat, digits: u32, up: bool) -> String {
        let scale = pow10(digits);
        let scaled = q * Rat::from_integer(scale.clone());
        let i = if up {
            scaled.ceil().to_integer()
        } else {
            scaled.floor().to_integer()
        };
        let neg = i.is_negative();
        let mag = i.magnitude().to_string();
        let mag = if mag.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
        } else {
            mag
        };
        let split = mag.len() - digits as usize;
        let (int, frac) = mag.split_at(split);
        format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
    }

    /// atanh-series interval for ln on [1, 2).
    fn ln_mantissa(m: &Rat) -> Hi {
        debug_assert!(*m >= Rat::one() && *m < Rat::from_integer(BigInt::from(2)));
        if m.is_one() {
            return Hi::exact(Rat::zero());
        }
        let one = Rat::one();
        let t = (m - &one) / (m + &one); // in [0, 1/3)
        let t_lo = round_down(&t);
        let t_hi = round_up(&t);
        let eval = |t: &Rat, up: bool| -> Rat {
            let t2 = if up { round_up(&(t * t)) } else { round_down(&(t * t)) };
            let mut pow = t.clone();
            let mut acc = Rat::zero();
            for j in 0..SERIES_TERMS {
                let term = &pow / Rat::from_integer(BigInt::from(2 * j + 1));
                acc += term;
                pow = if up {
                    round_up(&(&pow * &t2))
                } else {
                    round_down(&(&pow * &t2))
                };
            }
            acc
        };
        let s_lo = eval(&t_lo, false);
        let mut s_hi = eval(&t_hi, true);
        // tail bound: t^(2J+1)/(2J+1) * 1/(1-t^2) <= t^(2J+1) * 9/8 / (2J+1)
        let mut tail = t_hi.clone();
        for _ in 0..SERIES_TERMS {
            tail = round_up(&(&tail * &t_hi * &t_hi));
        }
        tail = tail * Rat::new(BigInt::from(9), BigInt::from(8 * (2 * SERIES_TERMS + 1)));
        s_hi += tail;
        let two = Rat::from_integer(BigInt::from(2));
        Hi::rounded(&s_lo * &two, &s_hi * &two)
    }

    fn ln2() -> &'static Hi {
        static LN2: OnceLock<Hi> = OnceLock::new();
        LN2.get_or_init(|| {
            // ln 2 = 2 atanh(1/3): reuse the mantissa series at m with
            // t = 1/3, i.e. m such that (m-1)/(m+1) = 1/3 -> m = 2 is out of
            // range, so compute via ln(3/2) + ln(4/3):
            let a = ln_mantissa(&Rat::new(BigInt::from(3), BigInt::from(2)));
            let b = ln_mantissa(&Rat::new(BigInt::from(4), BigInt::from(3)));
            a.add(&b)
        })
    }

    /// Correctly rounded-out interval for ln(x), x > 0 rational.
    /// Integer arguments of moderate size are memoized.
    pub fn ln_rat(x: &Rat) -> Hi {
        use std::sync::Mutex;
        static CACHE: OnceLock<Mutex<std::collections::BTreeMap<BigInt, Hi>>> = OnceLock::new();
        if x.denom().is_one() && x.numer().bits() <= 256 && x.numer().is_positive() {
            let cache = CACHE.get_or_init(|| Mutex::new(Default::default()));
            if let Some(hit) = cache.lock().unwrap().get(x.numer()) {
                return hit.clone();
            }
            let computed = ln_rat_uncached(x);
            cache
                .lock()
                .unwrap()
                .insert(x.numer().clone(), computed.clone());
            return computed;
        }
        ln_rat_uncached(x)
    }

    fn ln_rat_uncached(x: &Rat) -> Hi {
        assert!(x.is_positive(), "ln of a nonpositive value");
        if x < &Rat::one() {
            let inv = ln_rat_uncached(&(Rat::one() / x));
            return Hi {
                lo: -inv.hi,
                hi: -inv.lo,
            };
        }
        // split x = 2^k * m with m in [1,2)
        let mut k: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
        let two = Rat::from_integer(BigInt::from(2));
        let pow2 = |k: i64| -> Rat {
            if k >= 0 {
                Rat::from_integer(BigInt::from(1) << (k as usize))
            } else {
                Rat::new(BigInt::one(), BigInt::from(1) << ((-k) as usize))
            }
        };
        while pow2(k) > *x {
            k -= 1;
        }
        while pow2(k + 1) <= *x {
            k += 1;
        }
        let m = x / pow2(k);
        debug_assert!(m >= Rat::one() && m < two);
        let base = ln_mantissa(&m);
        if k == 0 {
            return base;
        }
        let l2 = ln2();
        let k_rat = Hi::exact(Rat::from_integer(BigInt::from(k)));
        // k may be negative; handle by signed endpoint arithmetic
        let (klo, khi) = if k >= 0 {
            (&k_rat.lo * &l2.lo, &k_rat.hi * &l2.hi)
        } else {
            (&k_rat.lo * &l2.hi, &k_rat.hi * &l2.lo)
        };
        Hi::rounded(&base.lo + &klo, &base.hi + &khi)
    }

    pub fn ln_u64(v: u64) -> Hi {
        use std::sync::Mutex;
        static CACHE: OnceLock<Mutex<std::collections::BTreeMap<u64, Hi>>> = OnceLock::new();
        if v <= 4096 {
            let cache = CACHE.get_or_init(|| Mutex::new(Default::default()));
            let mut guard = cache.lock().unwrap();
            return guard
                .entry(v)
                .or_insert_with(|| ln_rat(&Rat::from_integer(BigInt::from(v))))
                .clone();
        }
        ln_rat(&Rat::from_integer(BigInt::from(v)))
    }

    pub fn ln_bigint(v: &BigInt) -> Hi {
        ln_rat(&Rat::from_integer(v.clone()))
    }
}

// ---------------------------------------------------------------------------
// formula evaluators
// ---------------------------------------------------------------------------

fn hi_u(v: u64) -> Hi {
    Hi::from_u64(v)
}

fn hi_b(v: &BigInt) -> Hi {
    Hi::from_bigint(v)
}

/// G_n, H_n, I_n from the main degrees, with their simplified majorants for
/// a degree bound d_V >= d_1..d_n.
#[derive(Clone, Debug)]
pub struct ConstantsReport {
    pub g_n: BigInt,
    pub h_n: Hi,
    pub i_n: Hi,
    pub g_majorant: BigInt,
    pub h_majorant: Hi,
    pub i_majorant: Hi,
}

pub fn constants(degrees: &[BigInt], d_v: &BigInt) -> ConstantsReport {
    let n = degrees.len();
    assert!(degrees.iter().all(|d| d >= &BigInt::one()));
    let g_n: BigInt = BigInt::one()
        + BigInt::from(2) * degrees[..n - 1].iter().map(|d| d - 1u32).sum::<BigInt>();
    let sum_d: BigInt = degrees.iter().sum();
    let ln_n3 = hi::ln_u64(n as u64 + 3);
    let h_n = hi_u(5).mul(&ln_n3).mul(&hi_b(&sum_d));
    let sum_dd: BigInt = degrees[..n - 1].iter().map(|d| d * (d - 1u32)).sum();
    let i_n = h_n.add(&hi_u(3).mul(&hi::ln_u64(2)).mul(&hi_b(&sum_dd)));
    let g_majorant = BigInt::from(2) * d_v;
    let h_majorant = hi_u(5).mul(&ln_n3).mul(&hi_b(&(d_v + BigInt::from(n))));
    let i_majorant = hi_u(3)
        .mul(&hi_b(d_v))
        .mul(&hi_b(d_v))
        .add(&h_majorant);
    ConstantsReport {
        g_n,
        h_n,
        i_n,
        g_majorant,
        h_majorant,
        i_majorant,
    }
}

/// Height bound for the numerator family N_l: coefficients and their lcm
/// have degree at most d and height at most this value.
pub fn theorem1_n_bound(m: u64, l: u64, d: &BigInt, h: &Rat) -> Hi {
    let d = hi_b(d);
    let ln_d1 = d.add(&hi_u(1)).ln();
    let ln_ml3 = hi::ln_u64(m + l + 3);
    hi_u(2)
        .mul(&Hi::exact(h.clone()))
        .add(
            &hi_u(4 * m + 2)
                .mul(&d)
                .add(&hi_u(4 * m))
                .mul(&ln_d1),
        )
        .add(
            &hi_u(10 * m + 16)
                .mul(&d)
                .add(&hi_u(5 * l + 2 * m))
                .mul(&ln_ml3),
        )
}

/// Height bound for the monic family T_l: coefficients have degree at most
/// 2d^2 and height at most this value.
pub fn theorem1_t_bound(m: u64, l: u64, d: &BigInt, h: &Rat) -> Hi {
    let dv = hi_b(d);
    let d2 = dv.mul(&dv);
    let ln_d1 = dv.add(&hi_u(1)).ln();
    let ln_ml3 = hi::ln_u64(m + l + 3);
    let t1 = hi_u(4).mul(&dv).mul(&Hi::exact(h.clone()));
    let t2 = hi_u(3).mul(&d2);
    let t3 = hi_u(4)
        .mul(
            &hi_u(2 * m + 1)
                .mul(&d2)
                .add(&hi_u(m).mul(&dv.add(&hi_u(1)))),
        )
        .mul(&ln_d1);
    let t4 = hi_u(20 * m + 22)
        .mul(&d2)
        .add(&hi_u(5).mul(&dv.add(&hi_u(l + m))))
        .mul(&ln_ml3);
    t1.add(&t2).add(&t3).add(&t4)
}

/// Degree and height substitutes from the input data (n equations of degree
/// at most d and height at most h): d_V <= d^n and
/// h_V <= d^n (n h + (4m+2n+3) ln(m+n+1)).
pub fn bezout_substitution(m: u64, n: u64, d: &BigInt, h: &Rat) -> (BigInt, Hi) {
    let deg = d.pow(n as u32);
    let height = hi_b(&deg).mul(
        &hi_u(n)
            .mul(&Hi::exact(h.clone()))
            .add(&hi_u(4 * m + 2 * n + 3).mul(&hi::ln_u64(m + n + 1))),
    );
    (deg, height)
}

/// Height bound for a primitive Chow form of the generic fiber:
/// h_V + 5(m+1) d_V ln(m+n+2); its Y-degree is at most d_V.
pub fn chow_height_bound(m: u64, n: u64, d_v: &BigInt, h_v: &Rat) -> Hi {
    Hi::exact(h_v.clone()).add(
        &hi_u(5 * (m + 1))
            .mul(&hi_b(d_v))
            .mul(&hi::ln_u64(m + n + 2)),
    )
}

/// Height bounds for a good specialization at an integer point of norm at
/// most M: the first value bounds a_{n,y} N_{n,y}, the second
/// a_{n,y}^{G_n} ~T_{n,y}.
pub fn specialization_bounds(
    m: u64,
    n: u64,
    d_v: &BigInt,
    h_v: &Rat,
    big_m: &BigInt,
    degrees: &[BigInt],
) -> (Hi, Hi) {
    assert!(big_m >= &BigInt::one());
    assert_eq!(degrees.len() as u64, n);
    let c = constants(degrees, d_v);
    let dv = hi_b(d_v);
    let core = hi_u(2)
        .mul(&Hi::exact(h_v.clone()))
        .add(&hi_u(6 * m + 5).mul(&dv).mul(&hi::ln_u64(m + n + 2)))
        .add(&hi_u(m + 1).mul(&dv).mul(&hi::ln_bigint(big_m)))
        .add(&hi_u(m).mul(&dv.add(&hi_u(1)).ln()));
    let n_bound = core.add(&c.h_n);
    let t_bound = hi_b(&c.g_n).mul(&core).add(&c.i_n);
    (n_bound, t_bound)
}

/// Grid sizes: L1 = d_V + 1, L2 = G_n d_V + 1,
/// M_i = (3 n d_V + n^2) d_V + L_i.
pub fn grid_sizes(n: u64, d_v: &BigInt, g_n: &BigInt) -> (BigInt, BigInt, BigInt, BigInt) {
    let l1 = d_v + BigInt::one();
    let l2 = g_n * d_v + BigInt::one();
    let m0 = (BigInt::from(3 * n) * d_v + BigInt::from(n * n)) * d_v;
    let m1 = &m0 + &l1;
    let m2 = &m0 + &l2;
    (l1, l2, m1, m2)
}

/// All components of the prime-size recipe for modular degree detection.
#[derive(Clone, Debug)]
pub struct PrimeBound {
    pub bezout_degree: BigInt,
    pub bezout_height: Hi,
    pub h_prime: Hi,
    pub d_prime: BigInt,
    pub d_second: BigInt,
    pub h_second: Hi,
    pub nu: Hi,
    pub ell: Hi,
    pub ell_prime: Hi,
    pub ell_second: Hi,
    pub delta: BigInt,
    pub eta: Hi,
    pub h_a0: Hi,
    pub h_a1: Hi,
    pub h_a2: Hi,
    pub h_a3: Hi,
    pub h_a: Hi,
    pub range_lo: Hi,
    pub range_hi: Hi,
    /// log2 of the range's upper end: the bit length of the suggested primes.
    pub range_hi_bits: Hi,
}

pub fn modular_prime_bound(m: u64, n: u64, d: &BigInt, h: &Rat) -> PrimeBound {
    assert!(n >= 1 && d >= &BigInt::one() && !h.is_negative());
    let (bez_deg, bez_height) = bezout_substitution(m, n, d, h);
    let hh = Hi::exact(h.clone());
    let nd = BigInt::from(n) * d;
    let ln_nd = hi::ln_bigint(&nd);
    let ln_n1 = hi::ln_u64(n + 1);
    let ln_n2 = hi::ln_u64(n + 2);
    let ln_mn1 = hi::ln_u64(m + n + 1);
    let ln_mn2 = hi::ln_u64(m + n + 2);

    // h' = n (h + ln(nd) + d ln(n+1))
    let h_prime = hi_u(n).mul(&hh.add(&ln_nd).add(&hi_b(d).mul(&ln_n1)));
    // d' = n d, d'' = n d^(n+1) + 1
    let d_prime = nd.clone();
    let nd_n1 = BigInt::from(n) * d.pow(n as u32 + 1);
    let d_second = &nd_n1 + BigInt::one();
    // h'' = n d^(n+1) (2nh + (4m+2n+2) ln(m+n+1) + n ln(nd) + nd ln(n+1) + 2)
    let h_second = hi_b(&nd_n1).mul(
        &hi_u(2 * n)
            .mul(&hh)
            .add(&hi_u(4 * m + 2 * n + 2).mul(&ln_mn1))
            .add(&hi_u(n).mul(&ln_nd))
            .add(&hi_b(&nd).mul(&ln_n1))
            .add(&hi_u(2)),
    );
    // nu = 2 (m+n+2) ln(d'' + 1)
    let ln_ds1 = hi::ln_bigint(&(&d_second + BigInt::one()));
    let nu = hi_u(2 * (m + n + 2)).mul(&ln_ds1);
    // heights of the partially triangulated combinations
    let ell = hh
        .add(&hi_u(3).mul(&nu))
        .add(&hi::ln_u64(6))
        .add(&ln_n2);
    let ell_prime = h_prime
        .add(&hi_u(2).mul(&nu))
        .add(&hi::ln_u64(2))
        .add(&ln_n2);
    let ell_second = h_second.add(&nu).add(&ln_n2);
    // delta <= d^n d' d''
    let delta = &bez_deg * &d_prime * &d_second;
    // eta <= d^n (d'' d' ((n+2) ell + (m+2n+3) ln(m+n+2)) + ell' d'' + ell'' d')
    let eta = hi_b(&bez_deg).mul(
        &hi_b(&d_second)
            .mul(&hi_b(&d_prime))
            .mul(
                &hi_u(n + 2)
                    .mul(&ell)
                    .add(&hi_u(m + 2 * n + 3).mul(&ln_mn2)),
            )
            .add(&ell_prime.mul(&hi_b(&d_second)))
            .add(&ell_second.mul(&hi_b(&d_prime))),
    );
    // h(A2) <= (m+n+2)^2 d'' (2 eta + (h'' + ln(n+2)) delta
    //          + 21 (m+n+2)^2 d'' delta ln(d''+1))
    let mn2_sq = hi_u((m + n + 2) * (m + n + 2));
    let h_a2 = mn2_sq.mul(&hi_b(&d_second)).mul(
        &hi_u(2)
            .mul(&eta)
            .add(&h_second.add(&ln_n2).mul(&hi_b(&delta)))
            .add(
                &hi_u(21)
                    .mul(&mn2_sq)
                    .mul(&hi_b(&d_second))
                    .mul(&hi_b(&delta))
                    .mul(&ln_ds1),
            ),
    );
    // h(A0): sum of the T-family height bounds with the substituted data
    let bez_h_rat = bez_height.hi().clone();
    let t_bounds: Vec<Hi> = (1..=n)
        .map(|l| theorem1_t_bound(m, l, &bez_deg, &bez_h_rat))
        .collect();
    let h_a0 = Hi::sum(&t_bounds);
    // h(A1) = h''
    let h_a1 = h_second.clone();
    // h(A3): per level, 2 d^(2n) m (H'_l + m ln(2 d^(2n) + 1)) + 2 H'_l
    let d2n = d.pow(2 * n as u32);
    let ln_2d2n1 = hi::ln_bigint(&(BigInt::from(2) * &d2n + BigInt::one()));
    let h_a3 = Hi::sum(
        &t_bounds
            .iter()
            .map(|hl| {
                hi_u(2 * m)
                    .mul(&hi_b(&d2n))
                    .mul(&hl.add(&hi_u(m).mul(&ln_2d2n1)))
                    .add(&hi_u(2).mul(hl))
            })
            .collect::<Vec<Hi>>(),
    );
    let h_a = h_a0.add(&h_a1).add(&h_a2).add(&h_a3);
    let range_lo = hi_u(6).mul(&h_a);
    let range_hi = hi_u(12).mul(&h_a);
    let range_hi_bits = range_hi.ln().div(&hi::ln_u64(2));
    PrimeBound {
        bezout_degree: bez_deg,
        bezout_height: bez_height,
        h_prime,
        d_prime,
        d_second,
        h_second,
        nu,
        ell,
        ell_prime,
        ell_second,
        delta,
        eta,
        h_a0,
        h_a1,
        h_a2,
        h_a3,
        h_a,
        range_lo,
        range_hi,
        range_hi_bits,
    }
}

// ---------------------------------------------------------------------------
// report assembly
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub value_ln: String,
    pub value_bits: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_exact: Option<String>,
    pub inputs: BTreeMap<String, String>,
    pub formula_ref: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub inputs: BTreeMap<String, String>,
    pub entries: BTreeMap<String, BoundEntry>,
}

const DIGITS: u32 = 40;

fn ln2_hi() -> Hi {
    hi::ln_u64(2)
}

impl BoundReport {
    pub fn new(inputs: BTreeMap<String, String>) -> Self {
        BoundReport {
            inputs,
            entries: BTreeMap::new(),
        }
    }

    /// A natural-log-scale quantity: bits = value / ln 2.
    pub fn push_height(&mut self, key: &str, value: &Hi, formula: &str) {
        let bits = value.div(&ln2_hi());
        self.entries.insert(
            key.to_string(),
            BoundEntry {
                value_ln: value.upper_decimal(DIGITS),
                value_bits: bits.upper_decimal(DIGITS),
                value_exact: None,
                inputs: self.inputs.clone(),
                formula_ref: formula.to_string(),
            },
        );
    }

    /// An exact integer quantity: value_ln = ln(value), bits = log2(value).
    pub fn push_integer(&mut self, key: &str, value: &BigInt, formula: &str) {
        let (ln, bits) = if value.is_positive() {
            let l = hi::ln_bigint(value);
            (l.upper_decimal(DIGITS), l.div(&ln2_hi()).upper_decimal(DIGITS))
        } else {
            ("0".into(), "0".into())
        };
        self.entries.insert(
            key.to_string(),
            BoundEntry {
                value_ln: ln,
                value_bits: bits,
                value_exact: Some(value.to_string()),
                inputs: self.inputs.clone(),
                formula_ref: formula.to_string(),
            },
        );
    }

    /// A positive real magnitude (not a log): value_ln = ln(value),
    /// bits = log2(value).
    pub fn push_magnitude(&mut self, key: &str, value: &Hi, formula: &str) {
        let l = value.ln();
        self.entries.insert(
            key.to_string(),
            BoundEntry {
                value_ln: l.upper_decimal(DIGITS),
                value_bits: l.div(&ln2_hi()).upper_decimal(DIGITS),
                value_exact: Some(value.upper_decimal(DIGITS)),
                inputs: self.inputs.clone(),
                formula_ref: formula.to_string(),
            },
        );
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap()
    }
}

/// The full report for input data (m, n, d, h): constants, Bezout
/// substitutes, per-level height bounds, Chow and specialization bounds,
/// grid sizes, and the prime range.
pub fn full_report(m: u64, n: u64, d: &BigInt, h: &Rat, level: Option<u64>) -> BoundReport {
    let mut inputs = BTreeMap::new();
    inputs.insert("m".into(), m.to_string());
    inputs.insert("n".into(), n.to_string());
    inputs.insert("d".into(), d.to_string());
    inputs.insert("h".into(), hi::decimal_of(h, 6, true));
    let mut report = BoundReport::new(inputs);

    let (bez_deg, bez_h) = bezout_substitution(m, n, d, h);
    report.push_integer("bezout_degree", &bez_deg, "d^n");
    report.push_height(
        "bezout_height",
        &bez_h,
        "d^n*(n*h + (4m+2n+3)*ln(m+n+1))",
    );
    let degrees: Vec<BigInt> = (0..n).map(|_| d.clone()).collect();
    let c = constants(&degrees, &bez_deg);
    report.push_integer("G_n", &c.g_n, "1 + 2*sum_{i<n}(d_i-1)");
    report.push_height("H_n", &c.h_n, "5*ln(n+3)*sum d_i");
    report.push_height("I_n", &c.i_n, "H_n + 3*ln(2)*sum_{i<n} d_i*(d_i-1)");

    let bez_h_rat = bez_h.hi().clone();
    let levels: Vec<u64> = match level {
        Some(l) => vec![l],
        None => (1..=n).collect(),
    };
    for l in levels {
        report.push_height(
            &format!("N_height_bound_level_{l}"),
            &theorem1_n_bound(m, l, &bez_deg, &bez_h_rat),
            "2h + ((4m+2)d + 4m)*ln(d+1) + ((10m+16)d + 5l + 2m)*ln(m+l+3)",
        );
        report.push_height(
            &format!("T_height_bound_level_{l}"),
            &theorem1_t_bound(m, l, &bez_deg, &bez_h_rat),
            "4dh + 3d^2 + 4((2m+1)d^2 + m(d+1))*ln(d+1) + ((20m+22)d^2 + 5(d+l+m))*ln(m+l+3)",
        );
    }

    report.push_height(
        "chow_height_bound",
        &chow_height_bound(m, n, &bez_deg, &bez_h_rat),
        "h_V + 5(m+1)*d_V*ln(m+n+2)",
    );

    let (l1, l2, m1, m2) = grid_sizes(n, &bez_deg, &c.g_n);
    report.push_integer("L1", &l1, "d_V + 1");
    report.push_integer("L2", &l2, "G_n*d_V + 1");
    report.push_integer("M1", &m1, "(3n*d_V + n^2)*d_V + L1");
    report.push_integer("M2", &m2, "(3n*d_V + n^2)*d_V + L2");

    let (spec_n, spec_t) = specialization_bounds(m, n, &bez_deg, &bez_h_rat, &m1, &degrees);
    report.push_height(
        "specialized_N_height_bound",
        &spec_n,
        "2h_V + (6m+5)d_V*ln(m+n+2) + (m+1)d_V*ln(M) + m*ln(d_V+1) + H_n",
    );
    report.push_height(
        "specialized_T_height_bound",
        &spec_t,
        "G_n*(2h_V + (6m+5)d_V*ln(m+n+2) + (m+1)d_V*ln(M) + m*ln(d_V+1)) + I_n",
    );

    let pb = modular_prime_bound(m, n, d, h);
    report.push_height("H_A", &pb.h_a, "h(A0) + h(A1) + h(A2) + h(A3)");
    report.push_height("h_A0", &pb.h_a0, "sum of T height bounds");
    report.push_height("h_A1", &pb.h_a1, "h''");
    report.push_height("h_A2", &pb.h_a2, "(m+n+2)^2 d'' (2 eta + (h''+ln(n+2)) delta + 21 (m+n+2)^2 d'' delta ln(d''+1))");
    report.push_height("h_A3", &pb.h_a3, "sum 2 d^(2n) m (H'_l + m ln(2 d^(2n)+1)) + 2 H'_l");
    report.push_magnitude("prime_range_lo", &pb.range_lo, "6*H_A");
    report.push_magnitude("prime_range_hi", &pb.range_hi, "12*H_A");
    report
}

/// The prime-range magnitudes as integers (floor of the lower end, ceiling
/// of the upper end), for driving the sampler.
pub fn prime_range_ints(pb: &PrimeBound) -> (BigInt, BigInt) {
    let lo = pb.range_lo.lo().ceil().to_integer();
    let hi = pb.range_hi.hi().floor().to_integer();
    (lo, hi)
}

/// f64 view of an interval's upper end, for tests and displays.
pub fn upper_f64(h: &Hi) -> f64 {
    h.upper_f64()
}

#[allow(unused)]
fn _silence(_: &dyn ToPrimitive) {}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat_i(v: i64) -> Rat {
        Rat::from_integer(BigInt::from(v))
    }

    fn close(h: &Hi, expect: f64, tol: f64) {
        let v = h.upper_f64();
        assert!(
            (v - expect).abs() <= tol,
            "interval {v} far from expected {expect}"
        );
        assert!(h.width_f64() < 1e-30_f64.max(expect.abs() * 1e-30));
    }

    #[test]
    fn ln_values_match_known_digits() {
        // ln 2 = 0.69314718055994530941723212145817...
        let l2 = hi::ln_u64(2);
        let up = l2.upper_decimal(30);
        let down = hi::decimal_of(l2.lo(), 30, false);
        assert_eq!(up, "0.693147180559945309417232121459", "{up}");
        assert_eq!(down, "0.693147180559945309417232121458", "{down}");
        // ln 10 = 2.30258509299404568401799145468436...
        let l10 = hi::ln_u64(10);
        assert_eq!(
            l10.upper_decimal(30),
            "2.302585092994045684017991454685"
        );
        assert_eq!(
            hi::decimal_of(l10.lo(), 30, false),
            "2.302585092994045684017991454684"
        );
        // ln(1/2) = -ln 2
        let lh = hi::ln_rat(&Rat::new(BigInt::from(1), BigInt::from(2)));
        assert!((lh.upper_f64() + 0.6931471805599453).abs() < 1e-12);
    }

    #[test]
    fn constants_examples() {
        let d11: Vec<BigInt> = vec![BigInt::from(1), BigInt::from(1)];
        let c = constants(&d11, &BigInt::from(4));
        assert_eq!(c.g_n, BigInt::from(1));
        close(&c.h_n, 10.0 * 5.0f64.ln(), 1e-9);
        close(&c.i_n, 10.0 * 5.0f64.ln(), 1e-9);

        let d22: Vec<BigInt> = vec![BigInt::from(2), BigInt::from(2)];
        let c = constants(&d22, &BigInt::from(4));
        assert_eq!(c.g_n, BigInt::from(3));
        close(&c.h_n, 20.0 * 5.0f64.ln(), 1e-9);
        close(&c.i_n, 20.0 * 5.0f64.ln() + 6.0 * 2.0f64.ln(), 1e-9);
        // majorants
        assert_eq!(c.g_majorant, BigInt::from(8));
        assert!(c.h_n.upper_f64() <= c.h_majorant.upper_f64() + 1e-12);
        assert!(c.i_n.upper_f64() <= c.i_majorant.upper_f64() + 1e-12);

        // n = 1: empty sums
        let c = constants(&[BigInt::from(7)], &BigInt::from(7));
        assert_eq!(c.g_n, BigInt::from(1));
    }

    #[test]
    fn theorem1_examples() {
        // m=2, l=1, d=2, h=1 -> 2 + 28 ln3 + 81 ln6
        let b = theorem1_n_bound(2, 1, &BigInt::from(2), &rat_i(1));
        close(&b, 2.0 + 28.0 * 3.0f64.ln() + 81.0 * 6.0f64.ln(), 1e-9);
        // m=0, l=1, d=1, h=0 -> 2 ln2 + 21 ln4
        let b = theorem1_n_bound(0, 1, &BigInt::from(1), &rat_i(0));
        close(&b, 2.0 * 2.0f64.ln() + 21.0 * 4.0f64.ln(), 1e-9);
        // h -> h+1 adds exactly 2
        let b0 = theorem1_n_bound(1, 2, &BigInt::from(3), &rat_i(5));
        let b1 = theorem1_n_bound(1, 2, &BigInt::from(3), &rat_i(6));
        assert!((b1.upper_f64() - b0.upper_f64() - 2.0).abs() < 1e-12);

        // T bound: m=0, l=1, d=2, h=1 -> 8 + 12 + 16 ln3 + 103 ln4
        let b = theorem1_t_bound(0, 1, &BigInt::from(2), &rat_i(1));
        close(&b, 8.0 + 12.0 + 16.0 * 3.0f64.ln() + 103.0 * 4.0f64.ln(), 1e-9);
        // d = 0 collapse: 5(l+m) ln(m+l+3)
        let b = theorem1_t_bound(1, 2, &BigInt::from(0), &rat_i(9));
        close(&b, 15.0 * 6.0f64.ln(), 1e-9);
        // h -> h+1 adds exactly 4d
        let b0 = theorem1_t_bound(1, 1, &BigInt::from(3), &rat_i(2));
        let b1 = theorem1_t_bound(1, 1, &BigInt::from(3), &rat_i(3));
        assert!((b1.upper_f64() - b0.upper_f64() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn bezout_examples() {
        let (deg, h) = bezout_substitution(1, 2, &BigInt::from(2), &rat_i(1));
        assert_eq!(deg, BigInt::from(4));
        close(&h, 4.0 * (2.0 + 11.0 * 4.0f64.ln()), 1e-9);

        let (deg, _) = bezout_substitution(1, 12, &BigInt::from(3), &rat_i(20));
        assert_eq!(deg, BigInt::from(531441));

        let (deg, _) = bezout_substitution(3, 5, &BigInt::from(1), &rat_i(4));
        assert_eq!(deg, BigInt::from(1));
    }

    #[test]
    fn chow_height_examples() {
        // m=0 collapse
        let b = chow_height_bound(0, 3, &BigInt::from(2), &rat_i(7));
        close(&b, 7.0 + 10.0 * 5.0f64.ln(), 1e-9);
        // m=2,n=2,d_V=4,h_V=1 -> 1 + 60 ln6
        let b = chow_height_bound(2, 2, &BigInt::from(4), &rat_i(1));
        close(&b, 1.0 + 60.0 * 6.0f64.ln(), 1e-9);
        // d_V=0 -> h_V
        let b = chow_height_bound(2, 2, &BigInt::from(0), &rat_i(5));
        close(&b, 5.0, 1e-12);
    }

    #[test]
    fn specialization_examples() {
        let d22: Vec<BigInt> = vec![BigInt::from(2), BigInt::from(2)];
        let (nb, _tb) = specialization_bounds(
            1,
            2,
            &BigInt::from(4),
            &rat_i(2),
            &BigInt::from(117),
            &d22,
        );
        let expect = 4.0
            + 11.0 * 4.0 * 5.0f64.ln()
            + 2.0 * 4.0 * 117.0f64.ln()
            + 5.0f64.ln()
            + 20.0 * 5.0f64.ln();
        close(&nb, expect, 1e-9);

        // h_V -> h_V + 1 raises the N bound by 2 and the T bound by 2 G_n
        let (nb0, tb0) =
            specialization_bounds(1, 2, &BigInt::from(4), &rat_i(2), &BigInt::from(117), &d22);
        let (nb1, tb1) =
            specialization_bounds(1, 2, &BigInt::from(4), &rat_i(3), &BigInt::from(117), &d22);
        assert!((nb1.upper_f64() - nb0.upper_f64() - 2.0).abs() < 1e-12);
        assert!((tb1.upper_f64() - tb0.upper_f64() - 6.0).abs() < 1e-12);

        // M = 1: the ln(M) term vanishes
        let (nb_m1, _) =
            specialization_bounds(1, 2, &BigInt::from(4), &rat_i(2), &BigInt::from(1), &d22);
        let expect = 4.0 + 11.0 * 4.0 * 5.0f64.ln() + 5.0f64.ln() + 20.0 * 5.0f64.ln();
        close(&nb_m1, expect, 1e-9);
    }

    #[test]
    fn grid_size_examples() {
        let (l1, l2, m1, m2) = grid_sizes(2, &BigInt::from(4), &BigInt::from(3));
        assert_eq!(
            (l1, l2, m1, m2),
            (
                BigInt::from(5),
                BigInt::from(13),
                BigInt::from(117),
                BigInt::from(125)
            )
        );
        let (l1, _, m1, _) = grid_sizes(1, &BigInt::from(0), &BigInt::from(1));
        assert_eq!((l1, m1), (BigInt::from(1), BigInt::from(1)));
        let (l1, _, m1, _) = grid_sizes(1, &BigInt::from(1), &BigInt::from(1));
        assert_eq!(l1, BigInt::from(2));
        assert_eq!(m1, BigInt::from(6));
    }

    #[test]
    fn prime_bound_anchor() {
        let pb = modular_prime_bound(1, 12, &BigInt::from(3), &rat_i(20));
        assert_eq!(pb.bezout_degree, BigInt::from(531441));
        let bits = pb.range_hi_bits.upper_f64();
        assert!(
            (110.0..=140.0).contains(&bits),
            "prime range upper end has {bits} bits"
        );
    }

    #[test]
    fn positivity_and_monotonicity() {
        // m = 0 collapse keeps H_A positive
        let pb = modular_prime_bound(0, 2, &BigInt::from(2), &rat_i(1));
        assert!(pb.h_a.lower_f64() > 0.0);
        // doubling h strictly increases H_A
        let pb2 = modular_prime_bound(0, 2, &BigInt::from(2), &rat_i(2));
        assert!(pb2.h_a.lower_f64() > pb.h_a.upper_f64() * 0.999);
        assert!(pb2.h_a.upper_f64() > pb.h_a.upper_f64());

        // monotonicity of the main bounds over a small lattice
        let mut prev_n = 0.0;
        let mut prev_t = 0.0;
        for d in 1..4i64 {
            let b = theorem1_n_bound(1, 1, &BigInt::from(d), &rat_i(3));
            assert!(b.upper_f64() >= prev_n);
            prev_n = b.upper_f64();
            let b = theorem1_t_bound(1, 1, &BigInt::from(d), &rat_i(3));
            assert!(b.upper_f64() >= prev_t);
            prev_t = b.upper_f64();
        }
        for h in 0..4i64 {
            let b = theorem1_n_bound(2, 2, &BigInt::from(2), &rat_i(h));
            let b2 = theorem1_n_bound(2, 2, &BigInt::from(2), &rat_i(h + 1));
            assert!(b2.upper_f64() > b.upper_f64());
        }
        for m in 0..4u64 {
            let b = theorem1_n_bound(m, 1, &BigInt::from(2), &rat_i(1));
            let b2 = theorem1_n_bound(m + 1, 1, &BigInt::from(2), &rat_i(1));
            assert!(b2.upper_f64() > b.upper_f64());
        }
    }

    /// Independently regrouped evaluations must agree to 30 significant
    /// digits with the direct ones.
    #[test]
    fn dual_route_thirty_digits() {
        let agree = |a: &Hi, b: &Hi| {
            let scale = a.upper_f64().abs().max(1.0);
            let diff = (a.upper_f64() - b.upper_f64()).abs();
            assert!(a.width_f64() <= scale * 1e-30);
            assert!(b.width_f64() <= scale * 1e-30);
            // interval endpoints straddle each other within rounding slack
            assert!(
                diff <= scale * 1e-30,
                "routes differ: {} vs {}",
                a.upper_decimal(35),
                b.upper_decimal(35)
            );
        };
        for (m, l, d, h) in [(2u64, 1u64, 2i64, 1i64), (1, 3, 4, 7), (0, 1, 1, 0)] {
            let dd = BigInt::from(d);
            let hh = rat_i(h);
            let direct = theorem1_n_bound(m, l, &dd, &hh);
            // regrouped: 2h + d*((4m+2)ln(d+1) + (10m+16)ln(m+l+3))
            //            + 4m*ln(d+1) + (5l+2m)*ln(m+l+3)
            let ln_d1 = hi_b(&dd).add(&hi_u(1)).ln();
            let ln_ml3 = hi::ln_u64(m + l + 3);
            let regrouped = hi_u(2)
                .mul(&Hi::exact(hh.clone()))
                .add(&hi_b(&dd).mul(
                    &hi_u(4 * m + 2)
                        .mul(&ln_d1)
                        .add(&hi_u(10 * m + 16).mul(&ln_ml3)),
                ))
                .add(&hi_u(4 * m).mul(&ln_d1))
                .add(&hi_u(5 * l + 2 * m).mul(&ln_ml3));
            agree(&direct, &regrouped);

            let direct = theorem1_t_bound(m, l, &dd, &hh);
            // regrouped: d*(4h + 3d) + ln(d+1)*(4(2m+1)d^2 + 4m(d+1))
            //            + ln(m+l+3)*((20m+22)d^2 + 5d + 5l + 5m)
            let d2 = hi_b(&dd).mul(&hi_b(&dd));
            let regrouped = hi_b(&dd)
                .mul(&hi_u(4).mul(&Hi::exact(hh.clone())).add(&hi_u(3).mul(&hi_b(&dd))))
                .add(&ln_d1.mul(
                    &hi_u(4 * (2 * m + 1))
                        .mul(&d2)
                        .add(&hi_u(4 * m).mul(&hi_b(&dd).add(&hi_u(1)))),
                ))
                .add(&ln_ml3.mul(
                    &hi_u(20 * m + 22)
                        .mul(&d2)
                        .add(&hi_u(5).mul(&hi_b(&dd)))
                        .add(&hi_u(5 * (l + m))),
                ));
            agree(&direct, &regrouped);
        }
        // the prime recipe at the anchor, re-assembled from its parts
        let pb = modular_prime_bound(1, 12, &BigInt::from(3), &rat_i(20));
        let re = pb.h_a0.add(&pb.h_a1).add(&pb.h_a2).add(&pb.h_a3);
        agree(&pb.h_a, &re);
    }

    #[test]
    fn report_is_key_sorted_json() {
        let r = full_report(1, 2, &BigInt::from(2), &rat_i(1), None);
        let json = r.to_json();
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("bezout_degree"));
        let obj = json.get("entries").unwrap().as_object().unwrap();
        let keys: Vec<&String> = obj.keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(
            obj.get("bezout_degree")
                .unwrap()
                .get("value_exact")
                .unwrap()
                .as_str()
                .unwrap(),
            "4"
        );
    }
}
