//! Exact nonarchimedean arithmetic: p-adic absolute values with rational
//! exponents, ultrametric polydiscs, and the exactly computable diagonal-map
//! pullback identity.

mod ultrametric;

pub use ultrametric::{
    is_prime, padic_abs, padic_valuation_int, Exp, UltrametricValue,
};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, PolynomialMap, SparsePolynomial};

/// Polydisc in `C_p^N` with polyradii in the value group `p^Q`.
///
/// Radii are stored by their base-p logarithms, which keeps every
/// computation exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UltrametricPolydisc {
    prime: u64,
    radii_log_p: Vec<Exp>,
}

impl UltrametricPolydisc {
    pub fn new(prime: u64, radii_log_p: Vec<Exp>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Invalid(format!("{} is not prime", prime)));
        }
        if radii_log_p.is_empty() {
            return Err(Error::Invalid("polydisc needs at least one radius".into()));
        }
        Ok(UltrametricPolydisc { prime, radii_log_p })
    }

    pub fn unit(prime: u64, dim: usize) -> Result<Self> {
        Self::new(prime, vec![Exp::zero(); dim])
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.radii_log_p.len()
    }

    pub fn radii_log_p(&self) -> &[Exp] {
        &self.radii_log_p
    }

    pub fn radius(&self, i: usize) -> UltrametricValue {
        UltrametricValue::from_log_p(self.prime, self.radii_log_p[i])
    }
}

/// Transfinite diameter of an ultrametric polydisc: the geometric mean of
/// its radii, `(prod r_j)^(1/N)`, with exact exponent arithmetic.
///
/// The ultrametric Hadamard bound gives `|det|_p <= prod_i sup_D |e_i|_p`,
/// and the bound is attained by points whose coordinates are radius-scaled
/// units with suitably distinct residues (the residue field of `C_p` is
/// infinite); summing monomial degrees coordinate-wise yields the exponent
/// `D(n)/N` per coordinate, hence the geometric mean in the limit (already
/// exact at each finite n).
pub fn polydisc_diam_p(disc: &UltrametricPolydisc) -> UltrametricValue {
    let sum: Exp = disc.radii_log_p.iter().sum();
    let n = Exp::new(disc.dim() as i128, 1);
    UltrametricValue::from_log_p(disc.prime, sum / n)
}

/// Diagonal polynomial map `(c_1 z_1^d, ..., c_N z_N^d)` over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalMap {
    coeffs: Vec<BigRational>,
    degree: u32,
}

impl DiagonalMap {
    pub fn new(coeffs: Vec<BigRational>, degree: u32) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("diagonal map needs coefficients".into()));
        }
        if degree == 0 {
            return Err(Error::Invalid("diagonal map degree must be positive".into()));
        }
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(Error::NonRegular(
                "diagonal map has a zero coefficient".into(),
            ));
        }
        Ok(DiagonalMap { coeffs, degree })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn identity(dim: usize) -> Self {
        DiagonalMap {
            coeffs: vec![BigRational::one(); dim],
            degree: 1,
        }
    }

    /// View as a general polynomial map (for the resultant engine).
    pub fn to_polynomial_map(&self) -> PolynomialMap<BigRational> {
        let n = self.dim();
        let comps = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = vec![0u32; n];
                e[i] = self.degree;
                SparsePolynomial::from_terms(n, [(Monomial::new(e), c.clone())])
                    .expect("diagonal component is well-formed")
            })
            .collect();
        PolynomialMap::new(comps).expect("diagonal map is well-formed")
    }
}

/// Exact preimage of an ultrametric polydisc under a diagonal map: the
/// coordinate condition `|c_i z_i^d|_p <= r_i` solves to radius
/// `(r_i / |c_i|_p)^(1/d)`.
pub fn diagonal_preimage(
    map: &DiagonalMap,
    disc: &UltrametricPolydisc,
) -> Result<UltrametricPolydisc> {
    if map.dim() != disc.dim() {
        return Err(Error::DimensionMismatch {
            expected: disc.dim(),
            got: map.dim(),
        });
    }
    let d = Exp::new(map.degree as i128, 1);
    let mut radii = Vec::with_capacity(disc.dim());
    for (c, r) in map.coeffs.iter().zip(disc.radii_log_p()) {
        let abs_c = padic_abs(c, disc.prime())?;
        let log_c = abs_c
            .log_p()
            .ok_or_else(|| Error::NonRegular("zero coefficient".into()))?;
        radii.push((*r - log_c) / d);
    }
    UltrametricPolydisc::new(disc.prime(), radii)
}

/// Report of the nonarchimedean pullback identity on a diagonal instance.
#[derive(Clone, Debug, Serialize)]
pub struct PadicPullbackReport {
    pub prime: u64,
    pub dim: usize,
    pub degree: u32,
    /// `d_inf(F^{-1}D)_p` as an exact base-p exponent string.
    pub lhs_log_p: String,
    /// `|Res(F_h)|_p^{-1/(N d^N)} d_inf(D)_p^{1/d}` as an exact exponent string.
    pub rhs_log_p: String,
    pub res_abs_log_p: String,
    pub equal: bool,
}

/// Verify the nonarchimedean pullback identity exactly on a diagonal map and
/// ultrametric polydisc. The left side goes through the exact preimage
/// polydisc; the right side goes through the Macaulay resultant engine.
pub fn pullback_check_p(
    map: &DiagonalMap,
    disc: &UltrametricPolydisc,
) -> Result<(UltrametricValue, UltrametricValue, bool)> {
    let lhs = polydisc_diam_p(&diagonal_preimage(map, disc)?);

    let p = disc.prime();
    let poly_map = map.to_polynomial_map();
    let res_abs = crate::resultant::padic_abs_resultant(&poly_map, p)?;
    let n = map.dim() as i128;
    let d = map.degree as i128;
    let dn = d
        .checked_pow(map.dim() as u32)
        .ok_or_else(|| Error::TooLarge("d^N".into()))?;
    let exponent = Exp::new(-1, n * dn);
    let rhs = res_abs
        .pow(exponent)?
        .mul(&polydisc_diam_p(disc).pow(Exp::new(1, d))?)?;
    let equal = lhs == rhs;
    Ok((lhs, rhs, equal))
}

pub fn pullback_report_p(
    map: &DiagonalMap,
    disc: &UltrametricPolydisc,
) -> Result<PadicPullbackReport> {
    let (lhs, rhs, equal) = pullback_check_p(map, disc)?;
    let res_abs =
        crate::resultant::padic_abs_resultant(&map.to_polynomial_map(), disc.prime())?;
    Ok(PadicPullbackReport {
        prime: disc.prime(),
        dim: map.dim(),
        degree: map.degree(),
        lhs_log_p: lhs.log_p_string(),
        rhs_log_p: rhs.log_p_string(),
        res_abs_log_p: res_abs.log_p_string(),
        equal,
    })
}

/// Result of the unit-polydisc invariance check for maps with p-integral
/// coefficients and unit resultant.
#[derive(Clone, Debug, Serialize)]
pub struct UnimodularReport {
    pub holds: bool,
    /// True when the map belongs to the diagonal/monomial family and set
    /// equality was verified exactly; false when only the sampled inclusion
    /// `F(D) ⊆ D` was checked and the converse rests on the unit-resultant
    /// residue argument.
    pub exact_family: bool,
    pub sampled_points: usize,
}

/// Check invariance of the unit polydisc under a map with p-integral
/// coefficients and `|Res(F_h)|_p = 1`.
///
/// Hypothesis violations (non-integral coefficients, non-unit resultant)
/// are reported as precondition failures, not as falsifications.
pub fn unimodular_invariance_check(
    map: &PolynomialMap<BigRational>,
    p: u64,
    trials: usize,
    seed: u64,
) -> Result<UnimodularReport> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{} is not prime", p)));
    }
    for comp in map.components() {
        for (_, c) in comp.terms() {
            let v = padic_abs(c, p)?;
            if !v.le_one() {
                return Err(Error::Precondition(format!(
                    "coefficient {} is not p-integral at p = {}",
                    c, p
                )));
            }
        }
    }
    let res_abs = crate::resultant::padic_abs_resultant(&map.leading_part(), p)?;
    if !res_abs.is_one() {
        return Err(Error::Precondition(format!(
            "|Res(F_h)|_p = {} is not 1",
            res_abs
        )));
    }

    if let Some(diag) = as_diagonal(map) {
        let unit = UltrametricPolydisc::unit(p, map.dim())?;
        let pre = diagonal_preimage(&diag, &unit)?;
        return Ok(UnimodularReport {
            holds: pre == unit,
            exact_family: true,
            sampled_points: 0,
        });
    }

    // Sampled inclusion direction: p-integral points stay p-integral.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x756e_696d_6f64);
    let mut checked = 0usize;
    for _ in 0..trials {
        let z: Vec<BigRational> = (0..map.dim())
            .map(|_| random_p_integral(&mut rng, p))
            .collect();
        let image = map.evaluate(&z)?;
        for w in &image {
            if !padic_abs(w, p)?.le_one() {
                return Ok(UnimodularReport {
                    holds: false,
                    exact_family: false,
                    sampled_points: checked,
                });
            }
        }
        checked += 1;
    }
    Ok(UnimodularReport {
        holds: true,
        exact_family: false,
        sampled_points: checked,
    })
}

fn as_diagonal(map: &PolynomialMap<BigRational>) -> Option<DiagonalMap> {
    let n = map.dim();
    let d = map.degree();
    let mut coeffs = Vec::with_capacity(n);
    for (i, comp) in map.components().iter().enumerate() {
        if comp.num_terms() != 1 {
            return None;
        }
        let (m, c) = comp.terms().next().unwrap();
        let mut want = vec![0u32; n];
        want[i] = d;
        if m.exponents() != want.as_slice() {
            return None;
        }
        coeffs.push(c.clone());
    }
    DiagonalMap::new(coeffs, d).ok()
}

/// Random rational with `|x|_p <= 1`: numerator free, denominator coprime
/// to p.
fn random_p_integral(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    let num = BigInt::from(rng.random_range(-1000i64..=1000));
    let den = loop {
        let d = rng.random_range(1i64..=1000);
        if d as u64 % p != 0 {
            break BigInt::from(d);
        }
    };
    BigRational::new(num, den)
}

/// JSON descriptor for an ultrametric polydisc: exponents of the radii in
/// base p, as exact rational strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolydiscJson {
    pub prime: u64,
    pub radii_log_p: Vec<String>,
}

impl PolydiscJson {
    pub fn parse(&self) -> Result<UltrametricPolydisc> {
        let radii = self
            .radii_log_p
            .iter()
            .map(|s| parse_exp(s))
            .collect::<Result<Vec<_>>>()?;
        UltrametricPolydisc::new(self.prime, radii)
    }

    pub fn from_disc(disc: &UltrametricPolydisc) -> Self {
        PolydiscJson {
            prime: disc.prime(),
            radii_log_p: disc.radii_log_p().iter().map(exp_string).collect(),
        }
    }
}

pub fn parse_exp(s: &str) -> Result<Exp> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: i128 = n
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad exponent {:?}", s)))?;
        let den: i128 = d
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad exponent {:?}", s)))?;
        if den == 0 {
            return Err(Error::Invalid(format!("zero denominator in {:?}", s)));
        }
        Ok(Exp::new(num, den))
    } else {
        let v: i128 = s
            .parse()
            .map_err(|_| Error::Invalid(format!("bad exponent {:?}", s)))?;
        Ok(Exp::from_integer(v))
    }
}

pub fn exp_string(e: &Exp) -> String {
    if e.denom() == &1 {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// Convenience constructor used throughout tests: `p^(num/den)`.
pub fn p_power(prime: u64, num: i128, den: i128) -> UltrametricValue {
    UltrametricValue::from_log_p(prime, Ratio::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn unit_polydisc_has_diameter_one() {
        for n in 1..=3 {
            let disc = UltrametricPolydisc::unit(5, n).unwrap();
            assert!(polydisc_diam_p(&disc).is_one());
        }
    }

    #[test]
    fn geometric_mean_examples() {
        // radii (p^{1/2}, 1) -> p^{1/4}
        let disc = UltrametricPolydisc::new(7, vec![Exp::new(1, 2), Exp::zero()]).unwrap();
        assert_eq!(polydisc_diam_p(&disc), p_power(7, 1, 4));
        // N = 1, radius p^{-3} -> p^{-3}
        let disc = UltrametricPolydisc::new(3, vec![Exp::from_integer(-3)]).unwrap();
        assert_eq!(polydisc_diam_p(&disc), p_power(3, -3, 1));
    }

    #[test]
    fn diam_is_permutation_invariant() {
        let disc =
            UltrametricPolydisc::new(5, vec![Exp::new(1, 2), Exp::new(-2, 3), Exp::zero()])
                .unwrap();
        let perm =
            UltrametricPolydisc::new(5, vec![Exp::zero(), Exp::new(1, 2), Exp::new(-2, 3)])
                .unwrap();
        assert_eq!(polydisc_diam_p(&disc), polydisc_diam_p(&perm));
    }

    #[test]
    fn diagonal_preimage_examples() {
        // F = (p z1^2, z2^2), unit polydisc -> radii (p^{1/2}, 1)
        let p = 5u64;
        let map = DiagonalMap::new(vec![rat(5, 1), rat(1, 1)], 2).unwrap();
        let unit = UltrametricPolydisc::unit(p, 2).unwrap();
        let pre = diagonal_preimage(&map, &unit).unwrap();
        assert_eq!(pre.radii_log_p(), &[Exp::new(1, 2), Exp::zero()]);

        // identity leaves the polydisc unchanged
        let disc =
            UltrametricPolydisc::new(p, vec![Exp::new(2, 3), Exp::new(-1, 1)]).unwrap();
        let id = DiagonalMap::identity(2);
        assert_eq!(diagonal_preimage(&id, &disc).unwrap(), disc);

        // F = (z1^3, p^2 z2^3), radii (1,1) -> (1, p^{2/3}): the factor p^2
        // shrinks points p-adically, so the preimage disc grows.
        let map = DiagonalMap::new(vec![rat(1, 1), rat(25, 1)], 3).unwrap();
        let pre = diagonal_preimage(&map, &unit).unwrap();
        assert_eq!(pre.radii_log_p(), &[Exp::zero(), Exp::new(2, 3)]);
    }

    #[test]
    fn preimage_radius_sign_convention() {
        // |z/3|_3 = 3 |z|_3 <= 1 iff |z|_3 <= 1/3: a unit-denominator
        // coefficient shrinks the preimage disc.
        let p = 3u64;
        let map = DiagonalMap::new(vec![rat(1, 3)], 1).unwrap();
        let unit = UltrametricPolydisc::unit(p, 1).unwrap();
        let pre = diagonal_preimage(&map, &unit).unwrap();
        assert_eq!(pre.radii_log_p(), &[Exp::from_integer(-1)]);
    }
}
