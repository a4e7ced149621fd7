use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Tag identifying the coefficient domain of a polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScalarDomain {
    /// Double-precision complex floats.
    ComplexFloat,
    /// Arbitrary-precision rationals.
    Rational,
    /// Complex numbers with rational real and imaginary parts.
    GaussianRational,
    /// Integer polynomials in formal coefficient symbols.
    SymbolicGeneric,
}

/// Ring operations shared by all coefficient domains.
///
/// Kept deliberately small: the polynomial layer needs a commutative ring
/// with equality, nothing more. Division lives in [`ExactScalar`].
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn domain() -> ScalarDomain;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Image of a small integer in the ring.
    fn from_i64(n: i64) -> Self;

    /// `self^e` by binary powering in the ring.
    fn powu(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Exact domains supporting the division used by fraction-free elimination.
pub trait ExactScalar: Scalar {
    /// Exact quotient `self / other`; `None` when `other` is zero or the
    /// division does not come out exact in the ring.
    fn exact_div(&self, other: &Self) -> Option<Self>;
}

/// Complex double-precision scalar.
pub type C64 = Complex64;

/// Complex scalar with exact rational real and imaginary parts.
pub type GaussianRational = num_complex::Complex<BigRational>;

impl Scalar for C64 {
    fn domain() -> ScalarDomain {
        ScalarDomain::ComplexFloat
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Scalar for BigRational {
    fn domain() -> ScalarDomain {
        ScalarDomain::Rational
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl ExactScalar for BigRational {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
}

impl Scalar for GaussianRational {
    fn domain() -> ScalarDomain {
        ScalarDomain::GaussianRational
    }
    fn from_i64(n: i64) -> Self {
        GaussianRational::new(
            BigRational::from_integer(BigInt::from(n)),
            <BigRational as Zero>::zero(),
        )
    }
    fn zero() -> Self {
        GaussianRational::new(<BigRational as Zero>::zero(), <BigRational as Zero>::zero())
    }
    fn one() -> Self {
        GaussianRational::new(<BigRational as One>::one(), <BigRational as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

impl ExactScalar for GaussianRational {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Scalar::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
}

/// Natural log of `|r|` for a rational of arbitrary size.
///
/// Goes through bit lengths rather than `to_f64`, so resultants far outside
/// the f64 range still produce a finite log.
pub fn ln_abs_rational(r: &BigRational) -> f64 {
    if Zero::is_zero(r) {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

fn ln_abs_bigint(n: &BigInt) -> f64 {
    let n = n.abs();
    if let Some(v) = n.to_f64() {
        if v.is_finite() && v > 0.0 {
            return v.ln();
        }
    }
    // Too large for f64: split off the high 64 bits.
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let head = (n >> shift).to_f64().unwrap_or(f64::MAX);
    head.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural log of the modulus of a Gaussian rational.
pub fn ln_abs_gaussian(z: &GaussianRational) -> f64 {
    let norm_sq = &z.re * &z.re + &z.im * &z.im;
    0.5 * ln_abs_rational(&norm_sq)
}

/// Rational-to-float conversion that stays finite for large values.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let s = if r.is_negative() { -1.0 } else { 1.0 };
    s * ln_abs_rational(r).exp()
}

/// Gaussian-rational-to-complex-float conversion.
pub fn gaussian_to_c64(z: &GaussianRational) -> C64 {
    C64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn powu_matches_repeated_mul() {
        let x = BigRational::new(BigInt::from(3), BigInt::from(2));
        let mut acc = <BigRational as One>::one();
        for _ in 0..7 {
            acc = &acc * &x;
        }
        assert_eq!(x.powu(7), acc);
        assert_eq!(x.powu(0), <BigRational as One>::one());
    }

    #[test]
    fn gaussian_division_is_exact() {
        let a = GaussianRational::new(
            BigRational::new(BigInt::from(1), BigInt::from(1)),
            BigRational::new(BigInt::from(1), BigInt::from(1)),
        );
        let b = GaussianRational::new(
            BigRational::new(BigInt::from(2), BigInt::from(1)),
            BigRational::new(BigInt::from(-1), BigInt::from(1)),
        );
        let q = a.mul(&b).exact_div(&b).unwrap();
        assert_eq!(q, a);
    }

    #[test]
    fn ln_abs_handles_huge_values() {
        let big = BigInt::from(2).pow(5000);
        let r = BigRational::new(big, BigInt::from(1));
        let expect = 5000.0 * std::f64::consts::LN_2;
        assert!((ln_abs_rational(&r) - expect).abs() < 1e-6);
    }
}
