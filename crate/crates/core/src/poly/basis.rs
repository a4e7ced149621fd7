use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Checked binomial coefficient `C(n, k)` as `u64`.
fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::TooLarge(format!("binomial({}, {})", n, k)))?;
        acc /= (i + 1) as u128;
    }
    u64::try_from(acc).map_err(|_| Error::TooLarge(format!("binomial({}, {})", n, k)))
}

/// `M(n)`: the number of monomials in `nvars` variables of total degree at
/// most `n`, which is `C(nvars + n, nvars)`.
pub fn count_monomials(nvars: usize, n: u32) -> Result<u64> {
    binomial(nvars as u64 + n as u64, nvars as u64)
}

/// `D(n)`: the total degree of the generalized Vandermonde determinant on
/// the degree-`<= n` monomial basis, which is `nvars * C(nvars + n, nvars + 1)`
/// and equals the sum of degrees over `monomials_up_to_degree`.
pub fn vandermonde_degree(nvars: usize, n: u32) -> Result<u64> {
    let b = binomial(nvars as u64 + n as u64, nvars as u64 + 1)?;
    b.checked_mul(nvars as u64)
        .ok_or_else(|| Error::TooLarge(format!("vandermonde_degree({}, {})", nvars, n)))
}

/// All monomials in `nvars` variables of total degree `<= n`, in the
/// canonical graded-lex order.
pub fn monomials_up_to_degree(nvars: usize, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=n {
        append_of_degree(nvars, d, &mut out);
    }
    out
}

/// All monomials of total degree exactly `n`, in the canonical order.
pub fn monomials_of_degree(nvars: usize, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    append_of_degree(nvars, n, &mut out);
    out
}

fn append_of_degree(nvars: usize, degree: u32, out: &mut Vec<Monomial>) {
    let mut exps = vec![0u32; nvars];
    descend(&mut exps, 0, degree, out);
}

// Enumerate exponent vectors summing to `remaining` with the first variable
// taking the largest exponent first; this produces graded-lex order directly.
fn descend(exps: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == exps.len() {
        exps[pos] = remaining;
        out.push(Monomial::new(exps.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        exps[pos] = e;
        descend(exps, pos + 1, remaining - e, out);
    }
    exps[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_examples() {
        assert_eq!(count_monomials(2, 2).unwrap(), 6);
        assert_eq!(count_monomials(1, 5).unwrap(), 6);
        assert_eq!(count_monomials(3, 1).unwrap(), 4);
    }

    #[test]
    fn count_overflow_is_an_error() {
        assert!(count_monomials(64, u32::MAX).is_err());
    }

    #[test]
    fn vandermonde_degree_examples() {
        assert_eq!(vandermonde_degree(2, 2).unwrap(), 8);
        assert_eq!(vandermonde_degree(1, 3).unwrap(), 6);
        assert_eq!(vandermonde_degree(3, 1).unwrap(), 3);
    }

    #[test]
    fn enumeration_matches_count_and_order() {
        // N=1, n=2 -> [1, z, z^2]
        let m1 = monomials_up_to_degree(1, 2);
        assert_eq!(
            m1,
            vec![
                Monomial::new(vec![0]),
                Monomial::new(vec![1]),
                Monomial::new(vec![2])
            ]
        );
        // N=2, n=1 -> [1, z1, z2]
        let m2 = monomials_up_to_degree(2, 1);
        assert_eq!(
            m2,
            vec![
                Monomial::new(vec![0, 0]),
                Monomial::new(vec![1, 0]),
                Monomial::new(vec![0, 1])
            ]
        );
        assert_eq!(monomials_up_to_degree(2, 2).len(), 6);
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        for nvars in 1..=4 {
            for n in 0..=6 {
                let mons = monomials_up_to_degree(nvars, n);
                assert_eq!(mons.len() as u64, count_monomials(nvars, n).unwrap());
                for w in mons.windows(2) {
                    assert!(w[0] < w[1]);
                }
            }
        }
    }

    #[test]
    fn degree_sum_matches_vandermonde_degree() {
        for nvars in 1..=4 {
            for n in 0..=12 {
                let sum: u64 = monomials_up_to_degree(nvars, n)
                    .iter()
                    .map(|m| m.degree() as u64)
                    .sum();
                assert_eq!(sum, vandermonde_degree(nvars, n).unwrap());
            }
        }
    }
}
