use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational exponent type for base-p logarithms of absolute values.
pub type Exp = Ratio<i128>;

/// A nonarchimedean absolute value represented exactly as `p^e` with `e` a
/// rational number (or the distinguished zero value `|0|_p = 0`).
///
/// Multiplication adds exponents, rational powers scale them, and
/// comparisons compare them; none of these ever rounds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct UltrametricValue {
    prime: u64,
    /// `None` encodes the value 0.
    log_p: Option<Exp>,
}

impl UltrametricValue {
    pub fn from_log_p(prime: u64, log_p: Exp) -> Self {
        UltrametricValue {
            prime,
            log_p: Some(log_p.reduced()),
        }
    }

    pub fn one(prime: u64) -> Self {
        Self::from_log_p(prime, Exp::zero())
    }

    pub fn zero(prime: u64) -> Self {
        UltrametricValue {
            prime,
            log_p: None,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Base-p logarithm; `None` for the zero value.
    pub fn log_p(&self) -> Option<Exp> {
        self.log_p
    }

    pub fn is_zero_value(&self) -> bool {
        self.log_p.is_none()
    }

    pub fn is_one(&self) -> bool {
        self.log_p == Some(Exp::zero())
    }

    /// `|x|_p <= 1`.
    pub fn le_one(&self) -> bool {
        match self.log_p {
            None => true,
            Some(e) => e <= Exp::zero(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        Ok(match (self.log_p, other.log_p) {
            (Some(a), Some(b)) => Self::from_log_p(self.prime, a + b),
            _ => Self::zero(self.prime),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        match (self.log_p, other.log_p) {
            (_, None) => Err(Error::Invalid("division by the zero value".into())),
            (None, Some(_)) => Ok(Self::zero(self.prime)),
            (Some(a), Some(b)) => Ok(Self::from_log_p(self.prime, a - b)),
        }
    }

    /// Raise to an exact rational power.
    pub fn pow(&self, e: Exp) -> Result<Self> {
        match self.log_p {
            None => {
                if e > Exp::zero() {
                    Ok(*self)
                } else {
                    Err(Error::Invalid(
                        "zero value to a non-positive power".into(),
                    ))
                }
            }
            Some(a) => Ok(Self::from_log_p(self.prime, a * e)),
        }
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        Ok(match self.partial_cmp(other) {
            Some(Ordering::Less) => *other,
            _ => *self,
        })
    }

    /// Approximate real value `p^e` (for display and numeric consumers).
    pub fn to_f64(&self) -> f64 {
        match self.log_p {
            None => 0.0,
            Some(e) => {
                let ef = e.numer().to_f64().unwrap_or(0.0) / e.denom().to_f64().unwrap_or(1.0);
                (self.prime as f64).powf(ef)
            }
        }
    }

    /// Exact exponent rendered as a rational string (`"0"`, `"1/4"`, ...);
    /// the zero value renders as `"-inf"`.
    pub fn log_p_string(&self) -> String {
        match self.log_p {
            None => "-inf".to_string(),
            Some(e) => {
                if e.denom() == &1 {
                    e.numer().to_string()
                } else {
                    format!("{}/{}", e.numer(), e.denom())
                }
            }
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::Invalid(format!(
                "mixed primes {} and {}",
                self.prime, other.prime
            )));
        }
        Ok(())
    }
}

impl PartialOrd for UltrametricValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.prime != other.prime {
            return None;
        }
        Some(match (self.log_p, other.log_p) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b),
        })
    }
}

impl fmt::Display for UltrametricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log_p {
            None => write!(f, "0"),
            Some(e) => {
                if e.is_zero() {
                    write!(f, "1")
                } else if e.denom() == &1 {
                    write!(f, "{}^{}", self.prime, e.numer())
                } else {
                    write!(f, "{}^({}/{})", self.prime, e.numer(), e.denom())
                }
            }
        }
    }
}

/// Deterministic trial-division primality for the small primes used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// p-adic valuation of a nonzero integer: the exact power of p dividing it.
/// Uses repeated squaring of the divisor so the cost is logarithmic in the
/// valuation.
pub fn padic_valuation_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p_big = BigInt::from(p);
    let mut current = n.abs();
    let mut valuation: i64 = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&current, &p_big);
        if !r.is_zero() {
            break;
        }
        valuation += 1;
        current = q;
        // Fast doubling while divisibility persists.
        let mut power = &p_big * &p_big;
        let mut step: i64 = 2;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&current, &power);
            if !r.is_zero() {
                break;
            }
            current = q;
            valuation += step;
            power = &power * &power;
            step *= 2;
        }
    }
    Some(valuation)
}

/// `|x|_p` for an exact rational, normalized so that `|p|_p = 1/p`.
/// Zero maps to the distinguished zero value.
pub fn padic_abs(x: &BigRational, p: u64) -> Result<UltrametricValue> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{} is not prime", p)));
    }
    if x.is_zero() {
        return Ok(UltrametricValue::zero(p));
    }
    let vn = padic_valuation_int(x.numer(), p).expect("nonzero numerator");
    let vd = padic_valuation_int(x.denom(), p).expect("nonzero denominator");
    let v = vn - vd;
    Ok(UltrametricValue::from_log_p(p, Exp::from_integer(-v as i128)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn abs_examples() {
        // |12|_2 = 2^{-2}
        assert_eq!(
            padic_abs(&rat(12, 1), 2).unwrap(),
            UltrametricValue::from_log_p(2, Exp::from_integer(-2))
        );
        // |1/p|_p = p
        assert_eq!(
            padic_abs(&rat(1, 7), 7).unwrap(),
            UltrametricValue::from_log_p(7, Exp::from_integer(1))
        );
        // |7|_5 = 1
        assert!(padic_abs(&rat(7, 1), 5).unwrap().is_one());
        // |0|_p = 0
        assert!(padic_abs(&rat(0, 1), 3).unwrap().is_zero_value());
    }

    #[test]
    fn non_prime_rejected() {
        assert!(padic_abs(&rat(3, 1), 6).is_err());
        assert!(padic_abs(&rat(3, 1), 1).is_err());
    }

    #[test]
    fn multiplication_adds_exponents() {
        let a = UltrametricValue::from_log_p(3, Exp::new(1, 2));
        let b = UltrametricValue::from_log_p(3, Exp::new(-1, 3));
        assert_eq!(
            a.mul(&b).unwrap(),
            UltrametricValue::from_log_p(3, Exp::new(1, 6))
        );
        let z = UltrametricValue::zero(3);
        assert!(a.mul(&z).unwrap().is_zero_value());
    }

    #[test]
    fn rational_powers_are_exact() {
        let v = UltrametricValue::from_log_p(2, Exp::from_integer(-2));
        assert_eq!(
            v.pow(Exp::new(-1, 8)).unwrap(),
            UltrametricValue::from_log_p(2, Exp::new(1, 4))
        );
    }

    #[test]
    fn large_valuations() {
        let big = BigInt::from(3).pow(1000) * BigInt::from(7);
        assert_eq!(padic_valuation_int(&big, 3), Some(1000));
        assert_eq!(padic_valuation_int(&big, 7), Some(1));
        assert_eq!(padic_valuation_int(&big, 5), Some(0));
    }

    #[test]
    fn ultrametric_inequality_on_rationals() {
        let p = 5u64;
        let pairs = [
            (rat(25, 3), rat(10, 7)),
            (rat(1, 25), rat(2, 5)),
            (rat(7, 11), rat(3, 13)),
            (rat(-5, 1), rat(5, 1)),
        ];
        for (x, y) in pairs {
            let ax = padic_abs(&x, p).unwrap();
            let ay = padic_abs(&y, p).unwrap();
            let sum = padic_abs(&(&x + &y), p).unwrap();
            let bound = ax.max(&ay).unwrap();
            assert!(sum <= bound, "|{}+{}| > max at p={}", x, y, p);
        }
    }
}
