//! Exact computation of triangular sets and regular chains for parametric
//! polynomial systems over Q(Y1..Ym)[X1..Xn], together with the coefficient
//! bit-size machinery that surrounds them: Chow-form denominator prediction,
//! closed-form height bounds, equiprojectable interpolation grids, and a
//! modular degree-detection pipeline with its prime-size recipe.

pub mod poly;
pub mod fp;
pub mod frac;
pub mod valuation;
pub mod triangular;
pub mod solve;
pub mod sysfile;
pub mod chow;
pub mod interp;
pub mod bounds;
pub mod modular;
pub mod report;

#[cfg(test)]
pub(crate) mod testutil;
