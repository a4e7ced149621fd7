use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::map::PolynomialMap;
use super::scalar::{C64, GaussianRational};
use super::sparse::SparsePolynomial;
use crate::error::{Error, Result};

/// JSON form of a polynomial map.
///
/// Coefficient strings are either exact rationals (`"3/4"`, `"-2"`) or
/// decimals (`"0.25"`, `"1e-3"`). A map containing decimal coefficients is
/// routed to the complex-float domain unless `exact` is set, in which case
/// decimals are converted digit-exactly to rationals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    pub components: Vec<Vec<TermJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoeffJson {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

/// A parsed map in whichever domain the descriptor selected.
#[derive(Clone, Debug)]
pub enum ParsedMap {
    Exact(PolynomialMap<GaussianRational>),
    Float(PolynomialMap<C64>),
}

impl ParsedMap {
    pub fn dim(&self) -> usize {
        match self {
            ParsedMap::Exact(m) => m.dim(),
            ParsedMap::Float(m) => m.dim(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            ParsedMap::Exact(m) => m.degree(),
            ParsedMap::Float(m) => m.degree(),
        }
    }

    /// Complex-float view, converting when the map is exact.
    pub fn to_float(&self) -> PolynomialMap<C64> {
        match self {
            ParsedMap::Exact(m) => m.to_float(),
            ParsedMap::Float(m) => m.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&PolynomialMap<GaussianRational>> {
        match self {
            ParsedMap::Exact(m) => Some(m),
            ParsedMap::Float(_) => None,
        }
    }
}

/// Parse `"a/b"`, an integer, or a decimal (with optional exponent) into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Invalid("empty coefficient string".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rational numerator in {:?}", s)))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rational denominator in {:?}", s)))?;
        if d.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in {:?}", s)));
        }
        return Ok(BigRational::new(n, d));
    }
    // [sign] digits [. digits] [e [sign] digits]
    let (mantissa, exp10) = match s.to_ascii_lowercase().split_once('e') {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent in {:?}", s)))?;
            (m.to_string(), exp)
        }
        None => (s.to_string(), 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i.to_string(), f.to_string()),
        None => (mantissa.clone(), String::new()),
    };
    let digits = format!(
        "{}{}",
        if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{}0", int_part)
        } else {
            int_part
        },
        frac_part
    );
    let unscaled: BigInt = digits
        .parse()
        .map_err(|_| Error::Invalid(format!("bad coefficient {:?}", s)))?;
    let shift = frac_part.len() as i64 - exp10;
    let ten = BigInt::from(10);
    let mut rat = BigRational::from_integer(unscaled);
    if shift > 0 {
        rat /= BigRational::from_integer(ten.pow(shift as u32));
    } else if shift < 0 {
        rat *= BigRational::from_integer(ten.pow((-shift) as u32));
    }
    Ok(rat)
}

fn is_decimal_form(s: &str) -> bool {
    let s = s.trim();
    s.contains('.') || s.to_ascii_lowercase().contains('e')
}

/// Render a rational as a coefficient string (`"a"` or `"a/b"`).
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_map_value(value: &serde_json::Value) -> Result<ParsedMap> {
    let json: MapJson = serde_json::from_value(value.clone())
        .map_err(|e| Error::Invalid(format!("bad map descriptor: {}", e)))?;
    parse_map(&json)
}

pub fn parse_map_str(text: &str) -> Result<ParsedMap> {
    let json: MapJson = serde_json::from_str(text)
        .map_err(|e| Error::Invalid(format!("bad map descriptor: {}", e)))?;
    parse_map(&json)
}

pub fn parse_map(json: &MapJson) -> Result<ParsedMap> {
    if json.components.len() != json.n {
        return Err(Error::Invalid(format!(
            "expected {} components, found {}",
            json.n,
            json.components.len()
        )));
    }
    let any_decimal = json.components.iter().flatten().any(|t| {
        is_decimal_form(&t.coeff.re) || is_decimal_form(&t.coeff.im)
    });
    let float_domain = any_decimal && !json.exact.unwrap_or(false);

    if float_domain {
        let mut comps = Vec::with_capacity(json.n);
        for terms in &json.components {
            let poly = SparsePolynomial::from_exponents(
                json.n,
                terms
                    .iter()
                    .map(|t| -> Result<(Vec<u32>, C64)> {
                        let re: f64 = parse_f64(&t.coeff.re)?;
                        let im: f64 = parse_f64(&t.coeff.im)?;
                        Ok((t.exponents.clone(), C64::new(re, im)))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?;
            comps.push(poly);
        }
        let map = PolynomialMap::new(comps)?;
        check_degree(map.degree(), json.degree)?;
        Ok(ParsedMap::Float(map))
    } else {
        let mut comps = Vec::with_capacity(json.n);
        for terms in &json.components {
            let poly = SparsePolynomial::from_exponents(
                json.n,
                terms
                    .iter()
                    .map(|t| -> Result<(Vec<u32>, GaussianRational)> {
                        let re = parse_rational(&t.coeff.re)?;
                        let im = parse_rational(&t.coeff.im)?;
                        Ok((t.exponents.clone(), GaussianRational::new(re, im)))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?;
            comps.push(poly);
        }
        let map = PolynomialMap::new(comps)?;
        check_degree(map.degree(), json.degree)?;
        Ok(ParsedMap::Exact(map))
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    if s.contains('/') {
        let r = parse_rational(s)?;
        return Ok(super::scalar::rational_to_f64(&r));
    }
    s.trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("bad float coefficient {:?}", s)))
}

fn check_degree(actual: u32, declared: u32) -> Result<()> {
    if actual != declared {
        return Err(Error::Invalid(format!(
            "declared degree {} but components have degree {}",
            declared, actual
        )));
    }
    Ok(())
}

/// Serialize an exact map back into the JSON schema.
pub fn exact_map_json(map: &PolynomialMap<GaussianRational>) -> MapJson {
    MapJson {
        n: map.dim(),
        degree: map.degree(),
        exact: Some(true),
        components: map
            .components()
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, z)| TermJson {
                        exponents: m.exponents().to_vec(),
                        coeff: CoeffJson {
                            re: rational_string(&z.re),
                            im: rational_string(&z.im),
                        },
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Serialize a float map back into the JSON schema.
pub fn float_map_json(map: &PolynomialMap<C64>) -> MapJson {
    MapJson {
        n: map.dim(),
        degree: map.degree(),
        exact: None,
        components: map
            .components()
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, z)| TermJson {
                        exponents: m.exponents().to_vec(),
                        coeff: CoeffJson {
                            re: format!("{:?}", z.re),
                            im: format!("{:?}", z.im),
                        },
                    })
                    .collect()
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_rationals() {
        let m = parse_map_str(
            r#"{"N":2,"degree":2,"components":[
                [{"exponents":[2,0],"coeff":{"re":"1","im":"0"}}],
                [{"exponents":[0,2],"coeff":{"re":"3/4","im":"-1/2"}}]
            ]}"#,
        )
        .unwrap();
        match m {
            ParsedMap::Exact(map) => {
                assert_eq!(map.dim(), 2);
                assert_eq!(map.degree(), 2);
            }
            _ => panic!("expected exact domain"),
        }
    }

    #[test]
    fn decimals_route_to_float_unless_exact() {
        let text = r#"{"N":1,"degree":2,"components":[
            [{"exponents":[2],"coeff":{"re":"0.5","im":"0"}}]
        ]}"#;
        match parse_map_str(text).unwrap() {
            ParsedMap::Float(_) => {}
            _ => panic!("expected float domain"),
        }
        let exact_text = r#"{"N":1,"degree":2,"exact":true,"components":[
            [{"exponents":[2],"coeff":{"re":"0.5","im":"0"}}]
        ]}"#;
        match parse_map_str(exact_text).unwrap() {
            ParsedMap::Exact(m) => {
                let c = m.components()[0]
                    .coefficient(&crate::poly::Monomial::new(vec![2]))
                    .unwrap()
                    .clone();
                assert_eq!(c.re, parse_rational("1/2").unwrap());
            }
            _ => panic!("expected exact domain"),
        }
    }

    #[test]
    fn decimal_parsing_is_digit_exact() {
        assert_eq!(parse_rational("0.125").unwrap(), parse_rational("1/8").unwrap());
        assert_eq!(parse_rational("-2.5e-1").unwrap(), parse_rational("-1/4").unwrap());
        assert_eq!(parse_rational("3e2").unwrap(), parse_rational("300").unwrap());
    }

    #[test]
    fn bad_descriptors_are_rejected() {
        assert!(parse_map_str("{").is_err());
        // degree mismatch
        assert!(parse_map_str(
            r#"{"N":1,"degree":3,"components":[[{"exponents":[2],"coeff":{"re":"1","im":"0"}}]]}"#
        )
        .is_err());
        // component count mismatch
        assert!(parse_map_str(
            r#"{"N":2,"degree":1,"components":[[{"exponents":[1,0],"coeff":{"re":"1","im":"0"}}]]}"#
        )
        .is_err());
    }

    #[test]
    fn exact_roundtrip() {
        let text = r#"{"N":2,"degree":2,"components":[
            [{"exponents":[2,0],"coeff":{"re":"1","im":"0"}},
             {"exponents":[0,2],"coeff":{"re":"1","im":"0"}}],
            [{"exponents":[1,1],"coeff":{"re":"-7/3","im":"2"}}]
        ]}"#;
        let parsed = parse_map_str(text).unwrap();
        let exact = parsed.as_exact().unwrap();
        let json = exact_map_json(exact);
        let reparsed = parse_map(&json).unwrap();
        assert_eq!(reparsed.as_exact().unwrap(), exact);
    }
}
