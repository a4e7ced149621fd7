//! Fully expanded resultant of three generic ternary quadratics.
//!
//! The 18 coefficients of the system are formal symbols; the resultant is an
//! integer polynomial in them, computed as the exact quotient of the 15x15
//! Macaulay numerator determinant by its 3x3 reduced minor. The numerator
//! determinant is expanded by a minor dynamic program over column subsets
//! (each matrix entry is a single symbol, so every transition is a cheap
//! monomial shift), and the quotient is a term-ordered exact division.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::poly::{
    monomials_of_degree, PolynomialMap, Scalar, ScalarDomain, SparsePolynomial,
};
use crate::resultant::MacaulayInstance;

/// Hard cap on live terms in the minor DP; exceeded means the instance is
/// out of the desk-scale envelope and we abort with partial statistics.
const TERM_BUDGET: usize = 64_000_000;

const NIBBLES: usize = 32;

#[inline]
fn pack_shift(symbol: usize) -> u32 {
    debug_assert!(symbol < NIBBLES);
    (4 * (NIBBLES - 1 - symbol)) as u32
}

fn unpack(key: u128, nsyms: usize) -> Vec<u8> {
    (0..nsyms)
        .map(|s| ((key >> pack_shift(s)) & 0xF) as u8)
        .collect()
}

/// Integer polynomial in up to 32 formal symbols with per-symbol degree
/// below 16; exponents are nibble-packed into a `u128` so that the numeric
/// order of keys is lex order with symbol 0 most significant.
///
/// Terms are kept sorted by key, which makes equality, hashing of output,
/// and term-ordered division straightforward.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymbolicPolynomial {
    terms: Vec<(u128, i64)>,
}

impl SymbolicPolynomial {
    pub fn sym_zero() -> Self {
        SymbolicPolynomial { terms: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        if c == 0 {
            Self::sym_zero()
        } else {
            SymbolicPolynomial { terms: vec![(0, c)] }
        }
    }

    pub fn symbol(index: usize) -> Self {
        SymbolicPolynomial {
            terms: vec![(1u128 << pack_shift(index), 1)],
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Total degree (max over terms of the exponent sum); zero polynomial
    /// reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(k, _)| nibble_sum(*k))
            .max()
            .unwrap_or(0)
    }

    /// Minimum over terms of the exponent sum restricted to a symbol range;
    /// with `max` instead this doubles as the per-block degree. Returns
    /// `(min, max)` of the block degree across terms.
    pub fn block_degree_range(&self, symbols: std::ops::Range<usize>) -> (u32, u32) {
        let mut lo = u32::MAX;
        let mut hi = 0u32;
        for (k, _) in &self.terms {
            let d: u32 = symbols
                .clone()
                .map(|s| ((k >> pack_shift(s)) & 0xF) as u32)
                .sum();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if self.terms.is_empty() {
            (0, 0)
        } else {
            (lo, hi)
        }
    }

    fn add_assign_term(map: &mut BTreeMap<u128, i64>, key: u128, coeff: i64) -> Result<()> {
        let entry = map.entry(key).or_insert(0);
        *entry = entry
            .checked_add(coeff)
            .ok_or_else(|| Error::TooLarge("symbolic coefficient overflow".into()))?;
        if *entry == 0 {
            map.remove(&key);
        }
        Ok(())
    }

    fn from_map(map: BTreeMap<u128, i64>) -> Self {
        SymbolicPolynomial {
            terms: map.into_iter().collect(),
        }
    }

    fn plus(&self, other: &Self) -> Result<Self> {
        // Sorted-merge addition.
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ka, ca) = self.terms[i];
            let (kb, cb) = other.terms[j];
            if ka < kb {
                out.push((ka, ca));
                i += 1;
            } else if kb < ka {
                out.push((kb, cb));
                j += 1;
            } else {
                let c = ca
                    .checked_add(cb)
                    .ok_or_else(|| Error::TooLarge("symbolic coefficient overflow".into()))?;
                if c != 0 {
                    out.push((ka, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(SymbolicPolynomial { terms: out })
    }

    /// Multiply by a single term; key addition has no nibble carries within
    /// the tracked degree bounds, so sorted order is preserved.
    fn times_term(&self, key: u128, coeff: i64) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            let nc = c
                .checked_mul(coeff)
                .ok_or_else(|| Error::TooLarge("symbolic coefficient overflow".into()))?;
            out.push((k + key, nc));
        }
        Ok(SymbolicPolynomial { terms: out })
    }

    fn times(&self, other: &Self) -> Result<Self> {
        let mut acc = BTreeMap::new();
        for (k, c) in &self.terms {
            for (k2, c2) in &other.terms {
                let nc = c
                    .checked_mul(*c2)
                    .ok_or_else(|| Error::TooLarge("symbolic coefficient overflow".into()))?;
                Self::add_assign_term(&mut acc, k + k2, nc)?;
            }
        }
        Ok(Self::from_map(acc))
    }

    /// Exact division; `None` when the division does not come out exact.
    pub fn divide_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.terms.is_empty() {
            return None;
        }
        let (dk, dc) = *divisor.terms.last().unwrap();
        let mut rem: BTreeMap<u128, i64> = self.terms.iter().copied().collect();
        let mut quotient: BTreeMap<u128, i64> = BTreeMap::new();
        while let Some((&rk, &rc)) = rem.iter().next_back() {
            if rc % dc != 0 {
                return None;
            }
            let qc = rc / dc;
            let qk = rk.checked_sub(dk)?;
            // Nibble-wise divisibility: no borrow may have occurred.
            if !nibble_le(dk, rk) {
                return None;
            }
            Self::add_assign_term(&mut quotient, qk, qc).ok()?;
            for (k, c) in &divisor.terms {
                Self::add_assign_term(&mut rem, k + qk, -(c.checked_mul(qc)?)).ok()?;
            }
        }
        Some(Self::from_map(quotient))
    }

    /// Evaluate at an integer assignment (one value per symbol).
    pub fn evaluate_i128(&self, values: &[i128], nsyms: usize) -> i128 {
        let mut acc: i128 = 0;
        for (k, c) in &self.terms {
            let mut v: i128 = *c as i128;
            for s in 0..nsyms {
                let e = ((k >> pack_shift(s)) & 0xF) as u32;
                for _ in 0..e {
                    v *= values[s];
                }
            }
            acc += v;
        }
        acc
    }

    /// Terms as `(exponent-vector, coefficient)` sorted leading-first.
    pub fn sorted_terms(&self, nsyms: usize) -> Vec<(Vec<u8>, i64)> {
        self.terms
            .iter()
            .rev()
            .map(|(k, c)| (unpack(*k, nsyms), *c))
            .collect()
    }

    /// One line per term, `coeff e1 e2 ... e_nsyms`, leading term first;
    /// suitable for diffing.
    pub fn to_term_lines(&self, nsyms: usize) -> String {
        let mut out = String::new();
        for (exps, c) in self.sorted_terms(nsyms) {
            out.push_str(&c.to_string());
            for e in exps {
                out.push(' ');
                out.push_str(&e.to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn nibble_sum(mut key: u128) -> u32 {
    let mut s = 0u32;
    while key != 0 {
        s += (key & 0xF) as u32;
        key >>= 4;
    }
    s
}

/// Whether every nibble of `a` is <= the matching nibble of `b`.
fn nibble_le(a: u128, b: u128) -> bool {
    let mut a = a;
    let mut b = b;
    while a != 0 {
        if (a & 0xF) > (b & 0xF) {
            return false;
        }
        a >>= 4;
        b >>= 4;
    }
    true
}

impl Scalar for SymbolicPolynomial {
    fn domain() -> ScalarDomain {
        ScalarDomain::SymbolicGeneric
    }
    fn zero() -> Self {
        Self::sym_zero()
    }
    fn one() -> Self {
        Self::constant(1)
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(n)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.plus(other).expect("symbolic add overflow")
    }
    fn sub(&self, other: &Self) -> Self {
        self.plus(&other.neg()).expect("symbolic sub overflow")
    }
    fn mul(&self, other: &Self) -> Self {
        self.times(other).expect("symbolic mul overflow")
    }
    fn neg(&self) -> Self {
        SymbolicPolynomial {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

/// Determinant of a sparse matrix with symbolic-polynomial entries, by a
/// dynamic program over column subsets: processing rows in order, the state
/// maps each used-column mask to the corresponding minor.
fn det_minor_dp(rows: &[Vec<(usize, SymbolicPolynomial)>], ncols: usize) -> Result<SymbolicPolynomial> {
    if ncols > 31 {
        return Err(Error::TooLarge("minor DP supports up to 31 columns".into()));
    }
    let mut state: HashMap<u32, SymbolicPolynomial> = HashMap::new();
    state.insert(0, SymbolicPolynomial::constant(1));
    for (k, row) in rows.iter().enumerate() {
        let mut next: HashMap<u32, SymbolicPolynomial> = HashMap::new();
        let mut live_terms = 0usize;
        for (mask, minor) in &state {
            for (col, entry) in row {
                let bit = 1u32 << col;
                if mask & bit != 0 {
                    continue;
                }
                let below = (mask & (bit - 1)).count_ones() as usize;
                let negate = (k + below) % 2 == 1;
                let mut contrib = if entry.term_count() == 1 {
                    let (ek, ec) = entry.terms[0];
                    minor.times_term(ek, ec)?
                } else {
                    minor.times(entry)?
                };
                if negate {
                    contrib = contrib.neg();
                }
                let slot = next.entry(mask | bit).or_default();
                let before = slot.term_count();
                *slot = slot.plus(&contrib)?;
                live_terms += slot.term_count().saturating_sub(before);
                if live_terms > TERM_BUDGET {
                    return Err(Error::MemoryBudget(format!(
                        "minor DP exceeded {} live terms at row {} of {}",
                        TERM_BUDGET,
                        k + 1,
                        rows.len()
                    )));
                }
            }
        }
        next.retain(|_, p| !Scalar::is_zero(p));
        state = next;
        if state.is_empty() {
            return Ok(SymbolicPolynomial::sym_zero());
        }
    }
    let full: u32 = if ncols == 0 { 0 } else { (1u32 << ncols) - 1 };
    Ok(state.remove(&full).unwrap_or_default())
}

/// Number of formal symbols in the generic ternary-quadratic system: three
/// components times six degree-2 monomials in three variables.
pub const GENERIC_TERNARY_SYMBOLS: usize = 18;

/// Fully expanded multiresultant of three generic ternary quadratic forms.
#[derive(Clone, Debug)]
pub struct GenericResultant {
    pub poly: SymbolicPolynomial,
    pub term_count: usize,
    pub total_degree: u32,
}

impl GenericResultant {
    /// Specialize the symbolic coefficients to integers and evaluate.
    pub fn specialize(&self, values: &[i128]) -> i128 {
        self.poly.evaluate_i128(values, GENERIC_TERNARY_SYMBOLS)
    }

    /// The assignment representing the pure-power system
    /// `(z1^2, z2^2, z3^2)`.
    pub fn pure_power_assignment() -> Vec<i128> {
        let mons = monomials_of_degree(3, 2);
        let mut values = vec![0i128; GENERIC_TERNARY_SYMBOLS];
        for i in 0..3 {
            let j = mons
                .iter()
                .position(|m| {
                    let mut want = vec![0u32; 3];
                    want[i] = 2;
                    m.exponents() == want.as_slice()
                })
                .expect("pure power monomial present");
            values[6 * i + j] = 1;
        }
        values
    }
}

/// Build the generic system, expand `det(Macaulay numerator)`, divide by the
/// reduced 3x3 minor, and return the exact integer resultant polynomial.
pub fn resultant_generic_quadratic_ternary() -> Result<GenericResultant> {
    let mons = monomials_of_degree(3, 2);
    debug_assert_eq!(mons.len(), 6);
    let components: Vec<SparsePolynomial<SymbolicPolynomial>> = (0..3)
        .map(|i| {
            SparsePolynomial::from_terms(
                3,
                mons.iter()
                    .enumerate()
                    .map(|(j, m)| (m.clone(), SymbolicPolynomial::symbol(6 * i + j))),
            )
            .expect("generic component is well-formed")
        })
        .collect();
    let map = PolynomialMap::new(components)?;
    let inst = MacaulayInstance::build(&map)?;

    let size = inst.dim();
    let rows: Vec<Vec<(usize, SymbolicPolynomial)>> = inst
        .numerator()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, e)| !Scalar::is_zero(*e))
                .map(|(j, e)| (j, e.clone()))
                .collect()
        })
        .collect();
    let det_num = det_minor_dp(&rows, size)?;

    let den = inst.denominator_matrix();
    let den_rows: Vec<Vec<(usize, SymbolicPolynomial)>> = den
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, e)| !Scalar::is_zero(*e))
                .map(|(j, e)| (j, e.clone()))
                .collect()
        })
        .collect();
    let det_den = det_minor_dp(&den_rows, den.len())?;

    let poly = det_num
        .divide_exact(&det_den)
        .ok_or_else(|| Error::Numerical("Macaulay quotient not exact".into()))?;
    let term_count = poly.term_count();
    let total_degree = poly.total_degree();
    Ok(GenericResultant {
        poly,
        term_count,
        total_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dp_matches_small_determinants() {
        // [[s0, s1], [s2, s3]] -> s0 s3 - s1 s2
        let rows = vec![
            vec![(0, SymbolicPolynomial::symbol(0)), (1, SymbolicPolynomial::symbol(1))],
            vec![(0, SymbolicPolynomial::symbol(2)), (1, SymbolicPolynomial::symbol(3))],
        ];
        let det = det_minor_dp(&rows, 2).unwrap();
        let expect = SymbolicPolynomial::symbol(0)
            .mul(&SymbolicPolynomial::symbol(3))
            .sub(&SymbolicPolynomial::symbol(1).mul(&SymbolicPolynomial::symbol(2)));
        assert_eq!(det, expect);
    }

    #[test]
    fn dp_detects_singular_pattern() {
        // A column that no row touches gives determinant zero.
        let rows = vec![
            vec![(0, SymbolicPolynomial::symbol(0))],
            vec![(0, SymbolicPolynomial::symbol(1))],
        ];
        assert!(Scalar::is_zero(&det_minor_dp(&rows, 2).unwrap()));
    }

    #[test]
    fn division_is_exact_inverse_of_multiplication() {
        let a = SymbolicPolynomial::symbol(0)
            .mul(&SymbolicPolynomial::symbol(1))
            .add(&SymbolicPolynomial::constant(3).mul(&SymbolicPolynomial::symbol(2)));
        let b = SymbolicPolynomial::symbol(3).add(&SymbolicPolynomial::constant(-2));
        let prod = a.mul(&b);
        assert_eq!(prod.divide_exact(&b).unwrap(), a);
        assert_eq!(prod.divide_exact(&a).unwrap(), b);
        let not_divisible = prod.add(&SymbolicPolynomial::constant(1));
        assert!(not_divisible.divide_exact(&b).is_none());
    }

    #[test]
    fn evaluate_specialization() {
        let p = SymbolicPolynomial::symbol(0)
            .mul(&SymbolicPolynomial::symbol(0))
            .add(&SymbolicPolynomial::symbol(5).neg());
        let mut vals = vec![0i128; 6];
        vals[0] = 3;
        vals[5] = 4;
        assert_eq!(p.evaluate_i128(&vals, 6), 5);
    }
}
