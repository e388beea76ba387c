//! Prime-field scalars with an arbitrary-precision modulus.
//!
//! The modulus travels with each element. Constants produced by the generic
//! coefficient interface (`zero`, `one`, small integers) start out *unbound*
//! (modulus 0) and adopt the modulus of the first bound operand they meet.

use crate::poly::{Coeff, DomainCoeff, FieldCoeff};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone)]
pub struct FpElt {
    v: BigInt,
    /// The prime modulus; zero means "unbound integer constant".
    p: BigInt,
}

impl FpElt {
    pub fn new(v: BigInt, p: &BigInt) -> Self {
        assert!(Signed::is_positive(p));
        FpElt {
            v: v.mod_floor(p),
            p: p.clone(),
        }
    }

    pub fn unbound(v: i64) -> Self {
        FpElt {
            v: BigInt::from(v),
            p: BigInt::from(0),
        }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.p
    }

    pub fn value(&self) -> &BigInt {
        &self.v
    }

    fn bind(&self, p: &BigInt) -> Self {
        if Zero::is_zero(&self.p) && !Zero::is_zero(p) {
            FpElt::new(self.v.clone(), p)
        } else {
            self.clone()
        }
    }

    fn unify(&self, rhs: &Self) -> (Self, Self) {
        if Zero::is_zero(&self.p) && !Zero::is_zero(&rhs.p) {
            (self.bind(&rhs.p), rhs.clone())
        } else if Zero::is_zero(&rhs.p) && !Zero::is_zero(&self.p) {
            (self.clone(), rhs.bind(&self.p))
        } else {
            assert_eq!(self.p, rhs.p, "mixed moduli");
            (self.clone(), rhs.clone())
        }
    }
}

impl PartialEq for FpElt {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.unify(other);
        a.v == b.v
    }
}

impl fmt::Debug for FpElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Coeff for FpElt {
    fn zero() -> Self {
        FpElt::unbound(0)
    }
    fn one() -> Self {
        FpElt::unbound(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.v)
    }
    fn is_one(&self) -> bool {
        One::is_one(&self.v)
    }
    fn neg(&self) -> Self {
        if Zero::is_zero(&self.p) {
            FpElt {
                v: -&self.v,
                p: self.p.clone(),
            }
        } else {
            FpElt::new(-&self.v, &self.p)
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        let (a, b) = self.unify(rhs);
        if Zero::is_zero(&a.p) {
            FpElt {
                v: a.v + b.v,
                p: a.p,
            }
        } else {
            FpElt::new(a.v + b.v, &a.p)
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = self.unify(rhs);
        if Zero::is_zero(&a.p) {
            FpElt {
                v: a.v * b.v,
                p: a.p,
            }
        } else {
            FpElt::new(a.v * b.v, &a.p)
        }
    }
    fn from_i64(v: i64) -> Self {
        FpElt::unbound(v)
    }
    fn is_display_neg(&self) -> bool {
        false
    }
    fn display_abs(&self) -> Self {
        self.clone()
    }
    fn fmt_atom(&self) -> String {
        self.v.to_string()
    }
}

impl FieldCoeff for FpElt {
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(&self.v), "inverse of zero in Fp");
        if Zero::is_zero(&self.p) {
            assert!(self.v.magnitude().is_one(), "unbound non-unit inverse");
            return self.clone();
        }
        let e = self.v.extended_gcd(&self.p);
        assert!(One::is_one(&e.gcd), "modulus is not prime");
        FpElt::new(e.x, &self.p)
    }
}

impl DomainCoeff for FpElt {
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
