use std::collections::BTreeMap;
use std::fmt;

use super::monomial::Monomial;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Sparse multivariate polynomial: a map from monomials to nonzero
/// coefficients in a fixed scalar domain.
///
/// Terms are kept in a `BTreeMap` keyed by the canonical graded-lex order,
/// so iteration (and hence evaluation order, display, and serialization) is
/// deterministic.
#[derive(Clone, PartialEq, Debug)]
pub struct SparsePolynomial<S: Scalar> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> SparsePolynomial<S> {
    /// The zero polynomial in `nvars` variables.
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: S) -> Self {
        let mut p = Self::zero(nvars);
        if !value.is_zero() {
            p.terms.insert(Monomial::constant(nvars), value);
        }
        p
    }

    /// Build from `(monomial, coefficient)` pairs; zero coefficients are
    /// dropped, repeated monomials are summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: m.nvars(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Convenience constructor from `(exponent-vector, coefficient)` pairs.
    pub fn from_exponents<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, S)>,
    {
        Self::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial::new(e), c)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (graded-lex ascending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&S> {
        self.terms.get(m)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c.mul(factor));
        }
        out
    }

    /// Multiply by a single monomial (exponent shift).
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        SparsePolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    /// The terms of exactly the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        SparsePolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Evaluate at a point.
    ///
    /// Summation runs in the canonical monomial order with Kahan
    /// compensation; in exact domains the compensation term stays zero, in
    /// the float domain it tightens the rounding error.
    pub fn evaluate(&self, point: &[S]) -> Result<S> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut sum = S::zero();
        let mut comp = S::zero();
        for (m, c) in self.terms() {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = v.mul(&point[i].powu(e));
                }
            }
            let y = v.sub(&comp);
            let t = sum.add(&y);
            comp = t.sub(&sum).sub(&y);
            sum = t;
        }
        Ok(sum)
    }

    /// Apply a coefficient conversion, re-validating zeros in the target
    /// domain.
    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparsePolynomial<T> {
        let mut out = SparsePolynomial::zero(self.nvars);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Permute the variables of every monomial.
    pub fn permute_variables(&self, perm: &[usize]) -> Self {
        SparsePolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permute(perm), c.clone()))
                .collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for SparsePolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*{}", c, m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::C64;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(1))
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let p = SparsePolynomial::from_exponents(
            2,
            vec![(vec![1, 0], rat(2)), (vec![1, 0], rat(-2)), (vec![0, 1], rat(3))],
        )
        .unwrap();
        assert_eq!(p.num_terms(), 1);
        assert!(p.terms().all(|(_, c)| !Scalar::is_zero(c)));
    }

    #[test]
    fn evaluate_examples() {
        // z1^2 + z2^2 at (1, 2) -> 5
        let p = SparsePolynomial::from_exponents(
            2,
            vec![(vec![2, 0], rat(1)), (vec![0, 2], rat(1))],
        )
        .unwrap();
        assert_eq!(p.evaluate(&[rat(1), rat(2)]).unwrap(), rat(5));

        // z1*z2 at (3, 0) -> 0
        let q = SparsePolynomial::from_exponents(2, vec![(vec![1, 1], rat(1))]).unwrap();
        assert_eq!(q.evaluate(&[rat(3), rat(0)]).unwrap(), rat(0));

        // constant 7 at any point -> 7
        let c = SparsePolynomial::constant(2, rat(7));
        assert_eq!(c.evaluate(&[rat(11), rat(-4)]).unwrap(), rat(7));
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let p = SparsePolynomial::constant(2, rat(1));
        assert!(p.evaluate(&[rat(1)]).is_err());
    }

    #[test]
    fn float_evaluation_is_linear_to_tolerance() {
        let p = SparsePolynomial::from_exponents(
            1,
            vec![(vec![3], C64::new(0.25, 0.5)), (vec![0], C64::new(1.5, 0.0))],
        )
        .unwrap();
        let q = SparsePolynomial::from_exponents(1, vec![(vec![2], C64::new(-2.0, 0.125))])
            .unwrap();
        let z = [C64::new(0.7, -0.3)];
        let lhs = p.add(&q).evaluate(&z).unwrap();
        let rhs = p.evaluate(&z).unwrap() + q.evaluate(&z).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }
}
