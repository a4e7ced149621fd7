//! Exact and numeric multiresultants of square homogeneous systems.
//!
//! The construction is Macaulay's numerator/denominator determinant quotient
//! at the critical degree. When the denominator minor vanishes identically
//! for the standard variable priority, the variables and components are
//! relabeled by a permutation (which leaves the resultant unchanged); if
//! every priority fails, a perturbation limit along the pure-power direction
//! finishes the job exactly.

pub mod generic;
mod macaulay;

pub use generic::{resultant_generic_quadratic_ternary, GenericResultant, SymbolicPolynomial};
pub use macaulay::MacaulayInstance;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, det_lu, CMatrix};
use crate::padic::{padic_abs, UltrametricValue};
use crate::poly::{C64, ExactScalar, PolynomialMap, Scalar};

/// Exact multiresultant of a homogeneous map over an exact scalar domain,
/// normalized so that `Res(z_1^d, ..., z_N^d) = 1`.
///
/// Returns zero exactly when the map has a nonzero common root, so a
/// nonzero value is a regularity certificate.
pub fn resultant_exact<S: ExactScalar>(map: &PolynomialMap<S>) -> Result<S> {
    if !map.is_homogeneous() {
        return Err(Error::Precondition(
            "resultant needs the homogeneous leading part".into(),
        ));
    }
    let n = map.dim();

    // Try every variable priority: relabeling variables and components by
    // the same permutation preserves the resultant, and usually some
    // priority gives a nonvanishing denominator minor.
    for perm in permutations(n) {
        let relabeled = map.relabel(&perm);
        let inst = MacaulayInstance::build(&relabeled)?;
        let den = det_bareiss(&inst.denominator_matrix());
        if !den.is_zero() {
            let num = det_bareiss(inst.numerator());
            return num
                .exact_div(&den)
                .ok_or_else(|| Error::Numerical("Macaulay quotient not exact".into()));
        }
    }

    // Perturbation fallback: with G = (z_1^d, ..., z_N^d) the numerator of
    // F + sG is M + sI, so both determinants are monic polynomials in s.
    // Res(F) is the trailing-order ratio of det(M + sI) / det(M' + sI)
    // at s = 0.
    let inst = MacaulayInstance::build(map)?;
    let num_poly = char_style_poly(&inst, true)?;
    let den_poly = char_style_poly(&inst, false)?;
    let (num_ord, num_coeff) = trailing_term(&num_poly)
        .ok_or_else(|| Error::Numerical("perturbed numerator vanished identically".into()))?;
    let (den_ord, den_coeff) = trailing_term(&den_poly)
        .ok_or_else(|| Error::Numerical("perturbed denominator vanished identically".into()))?;
    if num_ord > den_ord {
        return Ok(S::zero());
    }
    if num_ord < den_ord {
        return Err(Error::Numerical(
            "perturbation orders inconsistent with a polynomial resultant".into(),
        ));
    }
    num_coeff
        .exact_div(&den_coeff)
        .ok_or_else(|| Error::Numerical("trailing-order ratio not exact".into()))
}

/// Coefficients (ascending in `s`) of `det(M + sI)` (`numerator = true`) or
/// `det(M' + sI)`, via exact evaluation at integer nodes and Newton
/// interpolation.
fn char_style_poly<S: ExactScalar>(
    inst: &MacaulayInstance<S>,
    numerator: bool,
) -> Result<Vec<S>> {
    let dim = if numerator {
        inst.dim()
    } else {
        inst.denominator_indices().len()
    };
    let nodes: Vec<S> = (0..=dim as i64).map(S::from_i64).collect();
    let values: Vec<S> = nodes
        .iter()
        .map(|s| {
            let m = if numerator {
                inst.numerator_shifted(s)
            } else {
                inst.denominator_shifted(s)
            };
            det_bareiss(&m)
        })
        .collect();
    newton_interpolate(&nodes, &values)
}

/// Exact polynomial interpolation through `(nodes[i], values[i])`, returning
/// monomial coefficients in ascending order.
fn newton_interpolate<S: ExactScalar>(nodes: &[S], values: &[S]) -> Result<Vec<S>> {
    let k = nodes.len();
    let mut dd = values.to_vec();
    // Divided differences in place: dd[i] becomes f[x_0..x_i].
    for level in 1..k {
        for i in (level..k).rev() {
            let num = dd[i].sub(&dd[i - 1]);
            let den = nodes[i].sub(&nodes[i - level]);
            dd[i] = num
                .exact_div(&den)
                .ok_or_else(|| Error::Numerical("interpolation nodes collide".into()))?;
        }
    }
    // Expand the Newton form into monomial coefficients.
    let mut coeffs = vec![S::zero(); k];
    let mut basis = vec![S::one()];
    for (i, c) in dd.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            coeffs[j] = coeffs[j].add(&c.mul(b));
        }
        if i + 1 < k {
            // basis *= (x - nodes[i])
            let mut next = vec![S::zero(); basis.len() + 1];
            for (j, b) in basis.iter().enumerate() {
                next[j + 1] = next[j + 1].add(b);
                next[j] = next[j].sub(&b.mul(&nodes[i]));
            }
            basis = next;
        }
    }
    Ok(coeffs)
}

fn trailing_term<S: Scalar>(coeffs: &[S]) -> Option<(usize, S)> {
    coeffs
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permutations(&mut current, n, &mut out);
    out
}

fn heap_permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Numeric multiresultant of a complex-float homogeneous map.
#[derive(Clone, Debug, Serialize)]
pub struct NumericResultant {
    #[serde(serialize_with = "serialize_c64")]
    pub value: C64,
    pub log_abs: f64,
    /// Pivot-growth conditioning figure (max/min pivot magnitude over both
    /// determinants); large values flag an untrustworthy result.
    pub condition: f64,
    pub ill_conditioned: bool,
}

fn serialize_c64<Ser: serde::Serializer>(v: &C64, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &v.re)?;
    st.serialize_field("im", &v.im)?;
    st.end()
}

const CONDITION_LIMIT: f64 = 1e12;

pub fn resultant_numeric(map: &PolynomialMap<C64>) -> Result<NumericResultant> {
    if !map.is_homogeneous() {
        return Err(Error::Precondition(
            "resultant needs the homogeneous leading part".into(),
        ));
    }
    let n = map.dim();
    let mut last_err = None;
    for perm in permutations(n) {
        let relabeled = map.relabel(&perm);
        let inst = MacaulayInstance::build(&relabeled)?;
        let den_rows = inst.denominator_indices().len();
        let den = if den_rows == 0 {
            None
        } else {
            Some(det_lu(&to_cmatrix(&inst.denominator_matrix())))
        };
        let den_log = den.as_ref().map_or(0.0, |d| d.log_abs);
        if !den_log.is_finite() {
            last_err = Some(Error::Numerical(
                "denominator minor numerically singular".into(),
            ));
            continue;
        }
        let num = det_lu(&to_cmatrix(inst.numerator()));
        let den_phase = den.as_ref().map_or(C64::new(1.0, 0.0), |d| d.phase);
        let den_cond = den.as_ref().map_or(1.0, |d| d.condition);
        let log_abs = num.log_abs - den_log;
        let phase = num.phase * den_phase.conj();
        let condition = num.condition.max(den_cond);
        let value = if log_abs == f64::NEG_INFINITY {
            C64::new(0.0, 0.0)
        } else {
            phase * log_abs.exp()
        };
        return Ok(NumericResultant {
            value,
            log_abs,
            condition,
            ill_conditioned: !condition.is_finite() || condition > CONDITION_LIMIT,
        });
    }
    Err(last_err.unwrap_or_else(|| Error::Numerical("no usable Macaulay partition".into())))
}

fn to_cmatrix(m: &[Vec<C64>]) -> CMatrix {
    let n = m.len();
    let mut out = CMatrix::zeros(n);
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out.set(i, j, *v);
        }
    }
    out
}

/// `|Res(F_h)|_p` as an exact ultrametric value. Errors on a zero resultant
/// (non-regular map).
pub fn padic_abs_resultant(map: &PolynomialMap<BigRational>, p: u64) -> Result<UltrametricValue> {
    let res = resultant_exact(map)?;
    if Scalar::is_zero(&res) {
        return Err(Error::NonRegular(
            "zero resultant has no p-adic absolute value".into(),
        ));
    }
    padic_abs(&res, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SparsePolynomial;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(1))
    }

    pub(crate) fn qmap(components: Vec<Vec<(Vec<u32>, i64)>>) -> PolynomialMap<BigRational> {
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
    fn pure_powers_normalize_to_one() {
        for n in 1..=3usize {
            for d in 1..=3u32 {
                let comps: Vec<Vec<(Vec<u32>, i64)>> = (0..n)
                    .map(|i| {
                        let mut e = vec![0u32; n];
                        e[i] = d;
                        vec![(e, 1)]
                    })
                    .collect();
                let f = qmap(comps);
                assert_eq!(resultant_exact(&f).unwrap(), rat(1), "N={} d={}", n, d);
            }
        }
    }

    #[test]
    fn linear_resultant_is_determinant() {
        // ((a,b),(c,d)) -> ad - bc
        let f = qmap(vec![
            vec![(vec![1, 0], 1), (vec![0, 1], 2)],
            vec![(vec![1, 0], 3), (vec![0, 1], 4)],
        ]);
        assert_eq!(resultant_exact(&f).unwrap(), rat(-2));
    }

    #[test]
    fn quadratic_formula_instance() {
        // F1 = z1^2 + z2^2, F2 = z1 z2: only the a1 b2^2 c1 term survives -> 1
        let f = qmap(vec![
            vec![(vec![2, 0], 1), (vec![0, 2], 1)],
            vec![(vec![1, 1], 1)],
        ]);
        assert_eq!(resultant_exact(&f).unwrap(), rat(1));
    }

    #[test]
    fn diagonal_quadratic() {
        // (c1 z1^2, c2 z2^2) -> c1^2 c2^2
        let f = qmap(vec![vec![(vec![2, 0], 3)], vec![(vec![0, 2], -5)]]);
        assert_eq!(resultant_exact(&f).unwrap(), rat(9 * 25));
    }

    #[test]
    fn diagonal_cubic_three_vars() {
        // (c1 z1^3, c2 z2^3, c3 z3^3) -> (c1 c2 c3)^(3^2)
        let f = qmap(vec![
            vec![(vec![3, 0, 0], 2)],
            vec![(vec![0, 3, 0], 1)],
            vec![(vec![0, 0, 3], 1)],
        ]);
        assert_eq!(resultant_exact(&f).unwrap(), rat(512));
    }

    #[test]
    fn singular_map_has_zero_resultant() {
        // (z1^2, z1 z2) has the common root (0, 1).
        let f = qmap(vec![vec![(vec![2, 0], 1)], vec![(vec![1, 1], 1)]]);
        assert_eq!(resultant_exact(&f).unwrap(), rat(0));
    }

    #[test]
    fn n1_convention_leading_coefficient() {
        let f = qmap(vec![vec![(vec![3], 7)]]);
        assert_eq!(resultant_exact(&f).unwrap(), rat(7));
    }

    #[test]
    fn numeric_matches_exact() {
        let f = qmap(vec![
            vec![(vec![2, 0], 2), (vec![1, 1], -1), (vec![0, 2], 3)],
            vec![(vec![2, 0], 1), (vec![1, 1], 4), (vec![0, 2], 1)],
        ]);
        let exact = resultant_exact(&f).unwrap();
        let numeric = resultant_numeric(&f.to_float()).unwrap();
        let exact_f = crate::poly::rational_to_f64(&exact);
        assert!(!numeric.ill_conditioned);
        assert!(
            (numeric.value.re - exact_f).abs() <= 1e-8 * exact_f.abs().max(1.0),
            "numeric {} exact {}",
            numeric.value,
            exact_f
        );
        assert!(numeric.value.im.abs() <= 1e-8 * exact_f.abs().max(1.0));
    }

    #[test]
    fn padic_abs_resultant_examples() {
        use crate::padic::p_power;
        // (p z1^2, z2^2) -> Res = p^2 -> |Res|_p = p^{-2}
        let p = 3u64;
        let f = qmap(vec![vec![(vec![2, 0], 3)], vec![(vec![0, 2], 1)]]);
        assert_eq!(padic_abs_resultant(&f, p).unwrap(), p_power(p, -2, 1));
        // (z1^2, z2^2) -> 1
        let f = qmap(vec![vec![(vec![2, 0], 1)], vec![(vec![0, 2], 1)]]);
        assert!(padic_abs_resultant(&f, 7).unwrap().is_one());
        // linear ((p,0),(0,1)) -> det = p -> p^{-1}
        let f = qmap(vec![
            vec![(vec![1, 0], 5)],
            vec![(vec![0, 1], 1)],
        ]);
        assert_eq!(padic_abs_resultant(&f, 5).unwrap(), p_power(5, -1, 1));
        // zero resultant errors
        let f = qmap(vec![vec![(vec![2, 0], 1)], vec![(vec![1, 1], 1)]]);
        assert!(padic_abs_resultant(&f, 5).is_err());
    }
}
