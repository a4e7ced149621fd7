//! Multivariate polynomial arithmetic, monomial combinatorics, and
//! polynomial-map structure shared by the other subsystems.

mod basis;
pub mod json;
mod map;
mod monomial;
mod scalar;
mod sparse;
mod sphere;

pub use basis::{count_monomials, monomials_of_degree, monomials_up_to_degree, vandermonde_degree};
pub use map::PolynomialMap;
pub use monomial::Monomial;
pub use scalar::{
    gaussian_to_c64, ln_abs_gaussian, ln_abs_rational, rational_to_f64, C64, ExactScalar,
    GaussianRational, Scalar, ScalarDomain,
};
pub use sparse::SparsePolynomial;
pub use sphere::{min_leading_norm_on_sphere, norm};
