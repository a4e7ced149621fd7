//! Computation laboratory for the Fekete–Leja transfinite diameter, Macaulay
//! multiresultants, and polynomial-dynamics capacities.
//!
//! The crate is organized around five subsystems:
//!
//! * [`poly`] — sparse multivariate polynomials over pluggable scalar domains
//!   (complex floats, exact rationals, Gaussian rationals, symbolic generic
//!   coefficients) and polynomial self-maps of `C^N`.
//! * [`resultant`] — exact and numeric multiresultants of square homogeneous
//!   systems via Macaulay's numerator/denominator determinant quotient.
//! * [`fekete`] — lower-bound estimation of the n-th diameters `d_n(E)` by
//!   greedy Leja selection and exchange optimization of generalized
//!   Vandermonde determinants over membership-oracle sets.
//! * [`dynamics`] — escape-rate functions, filled Julia set oracles, Brolin
//!   inverse-iteration sampling, and the capacity/resultant identity checks.
//! * [`padic`] — exact nonarchimedean absolute values and the ultrametric
//!   polydisc pullback identity for diagonal maps.

pub mod dynamics;
pub mod error;
pub mod fekete;
mod linalg;
pub mod padic;
pub mod poly;
pub mod resultant;

pub use error::{Error, Result};
