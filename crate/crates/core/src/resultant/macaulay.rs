use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, Monomial, PolynomialMap, Scalar};

/// Macaulay's resultant matrix for `N` homogeneous degree-`d` forms in `N`
/// variables, at the critical degree `t = N(d-1) + 1`.
///
/// Rows and columns are indexed by the degree-`t` monomials in canonical
/// order. The row for a monomial `m` holds the coefficients of
/// `(m / z_i^d) * F_i`, where `i` is the first variable whose `d`-th power
/// divides `m` (such an `i` exists by pigeonhole at the critical degree).
/// The resultant is `det(numerator) / det(denominator)`, the denominator
/// being the principal submatrix on the non-reduced monomials (those
/// divisible by `z_i^d` for at least two `i`). Indexing rows and columns by
/// the same monomial list makes the quotient independent of the monomial
/// order, and the pure-power system yields the identity matrix, which pins
/// the normalization `Res(z_1^d, ..., z_N^d) = 1`.
#[derive(Clone, Debug)]
pub struct MacaulayInstance<S: Scalar> {
    critical_degree: u32,
    monomials: Vec<Monomial>,
    assignment: Vec<usize>,
    numerator: Vec<Vec<S>>,
    denominator_indices: Vec<usize>,
}

impl<S: Scalar> MacaulayInstance<S> {
    pub fn build(map: &PolynomialMap<S>) -> Result<Self> {
        if !map.is_homogeneous() {
            return Err(Error::Precondition(
                "Macaulay construction needs a homogeneous map".into(),
            ));
        }
        let n = map.dim();
        let d = map.degree();
        let t = (n as u32) * (d - 1) + 1;
        let monomials = monomials_of_degree(n, t);
        let size = monomials.len();
        if size > 4096 {
            return Err(Error::TooLarge(format!(
                "Macaulay matrix would be {}x{}",
                size, size
            )));
        }
        let col_index: std::collections::HashMap<&Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();

        let mut numerator = vec![vec![S::zero(); size]; size];
        let mut assignment = Vec::with_capacity(size);
        let mut denominator_indices = Vec::new();

        for (row, m) in monomials.iter().enumerate() {
            let divisor_count = (0..n)
                .filter(|&i| m.exponents()[i] >= d)
                .count();
            debug_assert!(divisor_count >= 1, "critical degree guarantees a divisor");
            if divisor_count >= 2 {
                denominator_indices.push(row);
            }
            let i = (0..n)
                .find(|&i| m.exponents()[i] >= d)
                .expect("pigeonhole at the critical degree");
            assignment.push(i);
            let mut shift = m.exponents().to_vec();
            shift[i] -= d;
            let shift = Monomial::new(shift);
            for (mu, c) in map.components()[i].terms() {
                let target = mu.mul(&shift);
                let col = col_index[&target];
                numerator[row][col] = c.clone();
            }
        }

        Ok(MacaulayInstance {
            critical_degree: t,
            monomials,
            assignment,
            numerator,
            denominator_indices,
        })
    }

    pub fn critical_degree(&self) -> u32 {
        self.critical_degree
    }

    pub fn dim(&self) -> usize {
        self.numerator.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Which component each row multiplies.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn numerator(&self) -> &[Vec<S>] {
        &self.numerator
    }

    pub fn denominator_indices(&self) -> &[usize] {
        &self.denominator_indices
    }

    /// The reduced submatrix whose determinant divides the numerator's.
    pub fn denominator_matrix(&self) -> Vec<Vec<S>> {
        self.denominator_indices
            .iter()
            .map(|&r| {
                self.denominator_indices
                    .iter()
                    .map(|&c| self.numerator[r][c].clone())
                    .collect()
            })
            .collect()
    }

    /// Numerator with `s` added on the diagonal; this is the Macaulay
    /// numerator of `F + s * (z_1^d, ..., z_N^d)`, used by the perturbation
    /// fallback.
    pub fn numerator_shifted(&self, s: &S) -> Vec<Vec<S>> {
        let mut m = self.numerator.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = row[i].add(s);
        }
        m
    }

    /// Denominator submatrix with `s` added on the diagonal.
    pub fn denominator_shifted(&self, s: &S) -> Vec<Vec<S>> {
        let mut m = self.denominator_matrix();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = row[i].add(s);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SparsePolynomial;
    use num_bigint::BigInt;
    use num_rational::BigRational;

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
    fn binary_quadratic_shape() {
        // N=2, d=2: t = 3, 4 monomials, all reduced (empty denominator).
        let f = qmap(vec![
            vec![(vec![2, 0], 1), (vec![1, 1], 2), (vec![0, 2], 3)],
            vec![(vec![2, 0], 4), (vec![1, 1], 5), (vec![0, 2], 6)],
        ]);
        let inst = MacaulayInstance::build(&f).unwrap();
        assert_eq!(inst.critical_degree(), 3);
        assert_eq!(inst.dim(), 4);
        assert!(inst.denominator_indices().is_empty());
    }

    #[test]
    fn ternary_quadratic_shape() {
        // N=3, d=2: t = 4, 15 monomials, 3 non-reduced.
        let f = qmap(vec![
            vec![(vec![2, 0, 0], 1)],
            vec![(vec![0, 2, 0], 1)],
            vec![(vec![0, 0, 2], 1)],
        ]);
        let inst = MacaulayInstance::build(&f).unwrap();
        assert_eq!(inst.critical_degree(), 4);
        assert_eq!(inst.dim(), 15);
        assert_eq!(inst.denominator_indices().len(), 3);
        // Pure powers produce the identity matrix.
        for (i, row) in inst.numerator().iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expect = if i == j { rat(1) } else { rat(0) };
                assert_eq!(*v, expect);
            }
        }
    }

    #[test]
    fn entries_are_map_coefficients_or_zero() {
        let f = qmap(vec![
            vec![(vec![2, 0], 7), (vec![0, 2], -3)],
            vec![(vec![1, 1], 5)],
        ]);
        let inst = MacaulayInstance::build(&f).unwrap();
        let mut allowed: Vec<BigRational> = vec![rat(0), rat(7), rat(-3), rat(5)];
        allowed.dedup();
        for row in inst.numerator() {
            for v in row {
                assert!(allowed.contains(v), "entry {:?} is not a coefficient", v);
            }
        }
    }

    #[test]
    fn non_homogeneous_rejected() {
        let f = qmap(vec![
            vec![(vec![2, 0], 1), (vec![1, 0], 1)],
            vec![(vec![0, 2], 1)],
        ]);
        assert!(MacaulayInstance::build(&f).is_err());
    }
}
