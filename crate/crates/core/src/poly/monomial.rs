use std::cmp::Ordering;
use std::fmt;

/// A monomial in `N` variables, stored as its exponent vector.
///
/// The derived total order is graded lexicographic: lower total degree first,
/// then (within a degree) monomials with higher power of earlier variables
/// first, so the degree-2 monomials in two variables list as
/// `z1^2, z1*z2, z2^2`. Every basis enumeration and determinant in the crate
/// uses this one order, which makes logged determinants reproducible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    /// The constant monomial in `nvars` variables.
    pub fn constant(nvars: usize) -> Self {
        Monomial {
            exponents: vec![0; nvars],
        }
    }

    /// The monomial `z_i` in `nvars` variables.
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial { exponents: e }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    /// Total degree: the sum of the exponent entries.
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Product of two monomials (exponent-wise sum).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Whether `self` divides `other` exponent-wise.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    /// Exact quotient `other / self`, or `None` when not divisible.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exponents: other
                .exponents
                .iter()
                .zip(&self.exponents)
                .map(|(b, a)| b - a)
                .collect(),
        })
    }

    /// Permute variables: entry `i` of the result is the exponent of
    /// variable `perm[i]` in `self`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        Monomial {
            exponents: perm.iter().map(|&j| self.exponents[j]).collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {
                // Same degree: earlier-variable-dominant monomials come
                // first, which is the reverse of plain lex on exponents.
                self.exponents.cmp(&other.exponents).reverse()
            }
            ord => ord,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "z{}", i + 1)?;
            } else {
                write!(f, "z{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}
