use num_rational::BigRational;

use super::scalar::{gaussian_to_c64, rational_to_f64, C64, GaussianRational, Scalar};
use super::sparse::SparsePolynomial;
use crate::error::{Error, Result};

/// A polynomial self-map of `C^N`: `N` components in `N` variables, all of
/// the same total degree `d` (each component carries at least one degree-`d`
/// term).
#[derive(Clone, PartialEq, Debug)]
pub struct PolynomialMap<S: Scalar> {
    dim: usize,
    degree: u32,
    components: Vec<SparsePolynomial<S>>,
}

impl<S: Scalar> PolynomialMap<S> {
    pub fn new(components: Vec<SparsePolynomial<S>>) -> Result<Self> {
        let dim = components.len();
        if dim == 0 {
            return Err(Error::Invalid("map needs at least one component".into()));
        }
        for c in &components {
            if c.nvars() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.nvars(),
                });
            }
        }
        let mut degree = 0u32;
        for (i, c) in components.iter().enumerate() {
            match c.degree() {
                None => {
                    return Err(Error::Invalid(format!("component {} is zero", i + 1)));
                }
                Some(d) => {
                    if i == 0 {
                        degree = d;
                    } else if d != degree {
                        return Err(Error::Invalid(format!(
                            "component degrees differ: {} vs {}",
                            degree, d
                        )));
                    }
                }
            }
        }
        if degree == 0 {
            return Err(Error::Invalid("map degree must be positive".into()));
        }
        Ok(PolynomialMap {
            dim,
            degree,
            components,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[SparsePolynomial<S>] {
        &self.components
    }

    /// The leading homogeneous part: each component truncated to its
    /// degree-`d` terms. Idempotent by construction.
    pub fn leading_part(&self) -> PolynomialMap<S> {
        PolynomialMap {
            dim: self.dim,
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|c| c.homogeneous_part(self.degree))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.components.iter().all(|c| c.is_homogeneous())
    }

    pub fn evaluate(&self, point: &[S]) -> Result<Vec<S>> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }

    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<PolynomialMap<T>> {
        let components = self
            .components
            .iter()
            .map(|c| c.map_coefficients(&f))
            .collect();
        PolynomialMap::new(components)
    }

    /// Relabel variables and components by the same permutation; this keeps
    /// the multiresultant of a homogeneous map unchanged.
    pub fn relabel(&self, perm: &[usize]) -> PolynomialMap<S> {
        let components = perm
            .iter()
            .map(|&i| self.components[i].permute_variables(perm))
            .collect();
        PolynomialMap {
            dim: self.dim,
            degree: self.degree,
            components,
        }
    }
}

impl PolynomialMap<GaussianRational> {
    pub fn to_float(&self) -> PolynomialMap<C64> {
        self.map_coefficients(gaussian_to_c64)
            .expect("float image of a valid map is valid")
    }

    /// Drop to the plain rational domain when every coefficient is real.
    pub fn to_rational(&self) -> Option<PolynomialMap<BigRational>> {
        for c in &self.components {
            for (_, coeff) in c.terms() {
                if !num_traits::Zero::is_zero(&coeff.im) {
                    return None;
                }
            }
        }
        Some(
            self.map_coefficients(|z| z.re.clone())
                .expect("rational image of a valid map is valid"),
        )
    }
}

impl PolynomialMap<BigRational> {
    pub fn to_float(&self) -> PolynomialMap<C64> {
        self.map_coefficients(|r| C64::new(rational_to_f64(r), 0.0))
            .expect("float image of a valid map is valid")
    }

    pub fn to_gaussian(&self) -> PolynomialMap<GaussianRational> {
        self.map_coefficients(|r| GaussianRational::new(r.clone(), <BigRational as num_traits::Zero>::zero()))
            .expect("gaussian image of a valid map is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(1))
    }

    fn poly(nvars: usize, terms: Vec<(Vec<u32>, i64)>) -> SparsePolynomial<BigRational> {
        SparsePolynomial::from_exponents(nvars, terms.into_iter().map(|(e, c)| (e, rat(c))))
            .unwrap()
    }

    #[test]
    fn leading_part_examples() {
        // F = (z1^2 + z1 + 1, z2^2 - 3)  ->  (z1^2, z2^2)
        let f = PolynomialMap::new(vec![
            poly(2, vec![(vec![2, 0], 1), (vec![1, 0], 1), (vec![0, 0], 1)]),
            poly(2, vec![(vec![0, 2], 1), (vec![0, 0], -3)]),
        ])
        .unwrap();
        let fh = f.leading_part();
        assert!(fh.is_homogeneous());
        assert_eq!(
            fh.components()[0],
            poly(2, vec![(vec![2, 0], 1)])
        );
        assert_eq!(
            fh.components()[1],
            poly(2, vec![(vec![0, 2], 1)])
        );
        // idempotent
        assert_eq!(fh.leading_part(), fh);
    }

    #[test]
    fn leading_part_mixed_terms() {
        // F = (2 z1^2 + z1 z2 + z2, z1 z2 + 5) -> (2 z1^2 + z1 z2, z1 z2)
        let f = PolynomialMap::new(vec![
            poly(2, vec![(vec![2, 0], 2), (vec![1, 1], 1), (vec![0, 1], 1)]),
            poly(2, vec![(vec![1, 1], 1), (vec![0, 0], 5)]),
        ])
        .unwrap();
        let fh = f.leading_part();
        assert_eq!(
            fh.components()[0],
            poly(2, vec![(vec![2, 0], 2), (vec![1, 1], 1)])
        );
        assert_eq!(fh.components()[1], poly(2, vec![(vec![1, 1], 1)]));
    }

    #[test]
    fn homogeneous_map_is_its_own_leading_part() {
        let f = PolynomialMap::new(vec![
            poly(2, vec![(vec![2, 0], 1), (vec![0, 2], 1)]),
            poly(2, vec![(vec![1, 1], 1)]),
        ])
        .unwrap();
        assert_eq!(f.leading_part(), f);
    }

    #[test]
    fn mismatched_degrees_rejected() {
        let r = PolynomialMap::new(vec![
            poly(2, vec![(vec![2, 0], 1)]),
            poly(2, vec![(vec![0, 1], 1)]),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn leading_part_homogeneity_scaling() {
        // evaluate(leading_part(F)_i, t*z) = t^d * evaluate(..., z) exactly
        let f = PolynomialMap::new(vec![
            poly(2, vec![(vec![2, 0], 3), (vec![1, 1], -2), (vec![1, 0], 7)]),
            poly(2, vec![(vec![0, 2], 5), (vec![0, 1], 1)]),
        ])
        .unwrap();
        let fh = f.leading_part();
        let z = [rat(3), rat(-2)];
        let t = rat(5);
        let tz = [&t * &z[0], &t * &z[1]];
        for comp in fh.components() {
            let lhs = comp.evaluate(&tz).unwrap();
            let rhs = &comp.evaluate(&z).unwrap() * t.powu(f.degree());
            assert_eq!(lhs, rhs);
        }
    }
}
