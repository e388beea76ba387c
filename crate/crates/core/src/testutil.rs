//! Shared fixtures for unit tests.

use crate::frac::QY;
use crate::poly::{BigRat, Coeff, FieldCoeff, MPoly, Vars};
use crate::solve::SystemInput;
use crate::triangular::TriangularSet;
use num_bigint::BigInt;

pub fn qp(vars: &Vars, s: &[(i64, &[u32])]) -> MPoly<BigRat> {
    MPoly::from_terms(
        vars,
        s.iter()
            .map(|(c, e)| (e.to_vec(), BigRat::from_integer(BigInt::from(*c))))
            .collect(),
    )
}

/// {X1 + 1 + Y1*X2, X2 + Y2*X1} with m = n = 2.
pub fn paper_system() -> SystemInput {
    let vars = Vars::yx(2, 2);
    let f1 = qp(
        &vars,
        &[(1, &[0, 0, 1, 0]), (1, &[0, 0, 0, 0]), (1, &[1, 0, 0, 1])],
    );
    let f2 = qp(&vars, &[(1, &[0, 0, 0, 1]), (1, &[0, 1, 1, 0])]);
    SystemInput::new(2, 2, vec![f1, f2])
}

/// T1 = X1 + 1/(1 - Y1*Y2), T2 = X2 + Y2*X1 over Q(Y1,Y2).
pub fn sample_set() -> TriangularSet<QY> {
    let yv = Vars::new(vec!["Y1", "Y2"]);
    let xv = Vars::new(vec!["X1", "X2"]);
    let one = <QY as Coeff>::one();
    let y1 = QY::from_poly(MPoly::var(&yv, 0));
    let y2 = QY::from_poly(MPoly::var(&yv, 1));
    let c = one.sub(&y1.mul(&y2)).inv();
    let x1 = MPoly::<QY>::var(&xv, 0);
    let x2 = MPoly::<QY>::var(&xv, 1);
    let t1 = x1.add(&MPoly::constant(&xv, c));
    let t2 = x2.add(&x1.scale(&y2));
    TriangularSet::new(xv, vec![t1, t2]).unwrap()
}
