//! Escape-rate functions, filled Julia set oracles, Brolin inverse-iteration
//! sampling, and the capacity/resultant identity checks.

mod bb;
mod brolin;
mod escape;

pub use bb::{bb_check, bb_check_with_res, BbReport};
pub use brolin::{brolin_sample, ProjPoint};
pub use escape::{
    escape_rate, filled_julia_oracle, green_homogeneous, EscapeParameters, EscapeRate,
    FilledJuliaOracle,
};

use crate::error::{Error, Result};
use crate::poly::{
    ln_abs_gaussian, ln_abs_rational, C64, GaussianRational, PolynomialMap, Scalar,
};
use num_rational::BigRational;

/// Predicted transfinite diameter of the filled Julia set:
/// `|Res(F_h)|^(-1/(N d^(N-1) (d-1)))`.
///
/// Computed from the leading part, so the prediction for `F` and for
/// `leading_part(F)` agree exactly.
pub fn julia_diam_prediction_from_log(res_log_abs: f64, dim: usize, degree: u32) -> Result<f64> {
    if degree < 2 {
        return Err(Error::Precondition(
            "filled Julia sets need degree at least 2".into(),
        ));
    }
    let exponent = (dim as f64) * (degree as f64).powi(dim as i32 - 1) * (degree as f64 - 1.0);
    Ok((-res_log_abs / exponent).exp())
}

/// Prediction from an exact Gaussian-rational map.
pub fn julia_diam_prediction_exact(map: &PolynomialMap<GaussianRational>) -> Result<f64> {
    let res = crate::resultant::resultant_exact(&map.leading_part())?;
    if Scalar::is_zero(&res) {
        return Err(Error::NonRegular("zero resultant".into()));
    }
    julia_diam_prediction_from_log(ln_abs_gaussian(&res), map.dim(), map.degree())
}

/// Prediction from an exact rational map.
pub fn julia_diam_prediction_rational(map: &PolynomialMap<BigRational>) -> Result<f64> {
    let res = crate::resultant::resultant_exact(&map.leading_part())?;
    if Scalar::is_zero(&res) {
        return Err(Error::NonRegular("zero resultant".into()));
    }
    julia_diam_prediction_from_log(ln_abs_rational(&res), map.dim(), map.degree())
}

/// Prediction from a complex-float map via the numeric resultant.
pub fn julia_diam_prediction_numeric(map: &PolynomialMap<C64>) -> Result<f64> {
    let res = crate::resultant::resultant_numeric(&map.leading_part())?;
    if res.log_abs == f64::NEG_INFINITY || res.ill_conditioned {
        return Err(Error::NonRegular(
            "numeric resultant does not certify regularity".into(),
        ));
    }
    julia_diam_prediction_from_log(res.log_abs, map.dim(), map.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SparsePolynomial;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(1))
    }

    fn qmap(components: Vec<Vec<(Vec<u32>, i64)>>) -> PolynomialMap<BigRational> {
        let n = components.len();
        PolynomialMap::new(
            components
                .into_iter()
                .map(|terms| {
                    SparsePolynomial::from_exponents(
                        n,
                        terms.into_iter().map(|(e, c)| (e, rat(c))),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn prediction_examples() {
        // (z1^2, z2^2): Res = 1 -> prediction 1
        let f = qmap(vec![vec![(vec![2, 0], 1)], vec![(vec![0, 2], 1)]]);
        assert!((julia_diam_prediction_rational(&f).unwrap() - 1.0).abs() < 1e-12);

        // F(z) = 2 z^2 (N=1): Res = 2, exponent 1*1*1 -> 1/2
        let f = qmap(vec![vec![(vec![2], 2)]]);
        assert!((julia_diam_prediction_rational(&f).unwrap() - 0.5).abs() < 1e-12);

        // (2 z1^2, z2^2): Res = 4, exponent 2*2*1 = 4 -> 4^{-1/4} = 2^{-1/2}
        let f = qmap(vec![vec![(vec![2, 0], 2)], vec![(vec![0, 2], 1)]]);
        let expect = 2f64.powf(-0.5);
        assert!((julia_diam_prediction_rational(&f).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn prediction_uses_leading_part() {
        let f = qmap(vec![
            vec![(vec![2, 0], 2), (vec![1, 0], 5), (vec![0, 0], -1)],
            vec![(vec![0, 2], 1), (vec![0, 1], 3)],
        ]);
        let fh = f.leading_part();
        assert_eq!(
            julia_diam_prediction_rational(&f).unwrap(),
            julia_diam_prediction_rational(&fh).unwrap()
        );
    }

    #[test]
    fn degree_one_is_rejected() {
        let f = qmap(vec![vec![(vec![1, 0], 1)], vec![(vec![0, 1], 1)]]);
        assert!(julia_diam_prediction_rational(&f).is_err());
    }
}
