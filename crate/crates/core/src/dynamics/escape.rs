use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fekete::SetOracle;
use crate::poly::json::float_map_json;
use crate::poly::{min_leading_norm_on_sphere, norm, C64, PolynomialMap};

/// Escape-test parameters: radius, iteration cap, and series tolerance.
///
/// The radius is derived so that `||z|| > R` implies `||F(z)|| >= 2 ||z||`
/// (coefficient bound plus the advisory sphere minimum of the leading part,
/// with a safety factor because the sampled minimum overestimates the true
/// one). Any radius with the doubling property gives the same filled Julia
/// set in the limit; the cap controls how tight the finite-time superset is.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EscapeParameters {
    pub escape_radius: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl EscapeParameters {
    pub fn derive(map: &PolynomialMap<C64>, sphere_samples: usize, seed: u64) -> Result<Self> {
        let leading = map.leading_part();
        let m = min_leading_norm_on_sphere(&leading, sphere_samples.max(256), seed)?;
        if !(m > 1e-9) {
            return Err(Error::NonRegular(
                "sphere minimum of the leading part is not positive".into(),
            ));
        }
        let c: f64 = map
            .components()
            .iter()
            .map(|comp| {
                comp.terms()
                    .filter(|(mon, _)| mon.degree() < map.degree())
                    .map(|(_, coeff)| coeff.norm())
                    .sum::<f64>()
            })
            .sum();
        // ||F(z)|| >= m r^d - C r^{d-1} - C >= 2r once r >= 1 and
        // m r - 2C >= 2; factor 2 covers the sampled-minimum optimism.
        let escape_radius = 1f64.max(2.0 * (2.0 * c + 2.0) / m);
        Ok(EscapeParameters {
            escape_radius,
            max_iterations: 64,
            tolerance: 1e-12,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.max_iterations = cap;
        self
    }
}

/// Escape-rate value for one starting point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EscapeRate {
    /// The Green's function value; 0 when the orbit stayed bounded within
    /// the iteration cap (see `escaped`).
    pub value: f64,
    pub escaped: bool,
    pub iterations: usize,
}

/// Homogeneous Green's function `g(z) = lim (1/d^n) log ||F_h^n(z)||`
/// (no positive-part truncation, so values are negative inside the unit
/// levels). Exact telescoping on normalized iterates; converges
/// geometrically at rate `1/d`.
pub fn green_homogeneous(map: &PolynomialMap<C64>, z: &[C64], tol: f64, cap: usize) -> f64 {
    let d = map.degree() as f64;
    let r0 = norm(z);
    if r0 == 0.0 {
        return f64::NEG_INFINITY;
    }
    let mut w: Vec<C64> = z.iter().map(|c| c / r0).collect();
    let mut acc = r0.ln();
    let mut weight = 1.0 / d;
    for _ in 0..cap {
        let image = map.evaluate(&w).expect("dimension fixed");
        let r = norm(&image);
        if r == 0.0 || !r.is_finite() {
            return f64::NEG_INFINITY;
        }
        acc += weight * r.ln();
        w = image.iter().map(|c| c / r).collect();
        weight /= d;
        if weight * r.ln().abs().max(1.0) < tol {
            break;
        }
    }
    acc
}

/// Escape-rate function `G(z) = lim (1/d^n) log+ ||F^n(z)||` for a general
/// regular map of degree `d >= 2`.
///
/// Iterates until the orbit leaves the escape radius, telescopes the exact
/// correction terms while magnitudes remain representable, then switches to
/// the normalized leading-part iteration (the inhomogeneous corrections are
/// below machine precision once `||z||` is astronomically large). Points
/// that stay inside the radius for the whole cap report value 0 with
/// `escaped = false`.
pub fn escape_rate(map: &PolynomialMap<C64>, z: &[C64], params: &EscapeParameters) -> Result<EscapeRate> {
    if map.degree() < 2 {
        return Err(Error::Precondition("escape rate needs degree >= 2".into()));
    }
    if z.len() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            got: z.len(),
        });
    }
    let d = map.degree() as f64;
    let mut current = z.to_vec();
    let mut iterations = 0usize;

    // Phase 1: detect escape.
    while norm(&current) <= params.escape_radius {
        if iterations >= params.max_iterations {
            return Ok(EscapeRate {
                value: 0.0,
                escaped: false,
                iterations,
            });
        }
        current = map.evaluate(&current)?;
        iterations += 1;
    }

    // Phase 2: exact telescoping while magnitudes stay comfortably inside
    // the f64 range: G = (1/d^k) log r_k + sum_{j>=k} (1/d^{j+1}) (log r_{j+1} - d log r_j).
    let mut k = iterations as i32;
    let mut log_r = norm(&current).ln();
    let mut value = log_r / d.powi(k);
    const SWITCH: f64 = 1e40;
    while norm(&current) < SWITCH && iterations < params.max_iterations + 200 {
        let next = map.evaluate(&current)?;
        let next_log_r = norm(&next).ln();
        if !next_log_r.is_finite() {
            break;
        }
        k += 1;
        value += (next_log_r - d * log_r) / d.powi(k);
        current = next;
        log_r = next_log_r;
        iterations += 1;
    }

    // Phase 3: leading-part tail on the direction vector.
    let leading = map.leading_part();
    let r = norm(&current);
    let w: Vec<C64> = current.iter().map(|c| c / r).collect();
    let tail = green_homogeneous_tail(&leading, &w, params.tolerance, 400);
    value += tail / d.powi(k);

    Ok(EscapeRate {
        value,
        escaped: true,
        iterations,
    })
}

/// `sum_{i>=0} log ||F_h(w_i)|| / d^{i+1}` on normalized iterates: the
/// direction part of the homogeneous Green's function.
fn green_homogeneous_tail(map: &PolynomialMap<C64>, w: &[C64], tol: f64, cap: usize) -> f64 {
    let d = map.degree() as f64;
    let mut w = w.to_vec();
    let mut acc = 0.0;
    let mut weight = 1.0 / d;
    for _ in 0..cap {
        let image = map.evaluate(&w).expect("dimension fixed");
        let r = norm(&image);
        if r == 0.0 || !r.is_finite() {
            break;
        }
        acc += weight * r.ln();
        w = image.iter().map(|c| c / r).collect();
        weight /= d;
        if weight * r.ln().abs().max(1.0) < tol {
            break;
        }
    }
    acc
}

/// Filled Julia set membership oracle: the orbit must stay inside the escape
/// radius for the full iteration cap. This is a superset approximation of
/// `K_F` that shrinks as the cap grows; boundary membership is undecidable
/// by finite iteration, so consumers exclude a boundary shell.
pub struct FilledJuliaOracle {
    map: PolynomialMap<C64>,
    params: EscapeParameters,
    rejection_cap: usize,
}

impl FilledJuliaOracle {
    pub fn map(&self) -> &PolynomialMap<C64> {
        &self.map
    }

    pub fn params(&self) -> &EscapeParameters {
        &self.params
    }

    /// Membership at an explicit iteration cap (used by the invariance
    /// property: a member at cap k maps to a member at cap k-1).
    pub fn contains_at_cap(&self, z: &[C64], cap: usize) -> bool {
        let mut current = z.to_vec();
        if norm(&current) > self.params.escape_radius {
            return false;
        }
        for _ in 0..cap {
            current = match self.map.evaluate(&current) {
                Ok(v) => v,
                Err(_) => return false,
            };
            if norm(&current) > self.params.escape_radius {
                return false;
            }
        }
        true
    }
}

/// Build the filled-Julia oracle for a regular map of degree at least 2.
pub fn filled_julia_oracle(map: PolynomialMap<C64>, params: EscapeParameters) -> Result<FilledJuliaOracle> {
    if map.degree() < 2 {
        return Err(Error::Precondition(
            "filled Julia sets need degree at least 2".into(),
        ));
    }
    let res = crate::resultant::resultant_numeric(&map.leading_part())?;
    if res.log_abs == f64::NEG_INFINITY || res.ill_conditioned {
        return Err(Error::NonRegular(
            "numeric resultant does not certify regularity".into(),
        ));
    }
    Ok(FilledJuliaOracle {
        map,
        params,
        rejection_cap: 512,
    })
}

impl SetOracle for FilledJuliaOracle {
    fn dim(&self) -> usize {
        self.map.dim()
    }
    fn contains(&self, z: &[C64]) -> bool {
        z.len() == self.map.dim() && self.contains_at_cap(z, self.params.max_iterations)
    }
    fn radius(&self) -> f64 {
        self.params.escape_radius
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
        use rand::Rng;
        let r_max = self.params.escape_radius;
        for _ in 0..self.rejection_cap {
            let z: Vec<C64> = (0..self.dim())
                .map(|_| {
                    let r = r_max * rng.random::<f64>().sqrt();
                    let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                    C64::from_polar(r, theta)
                })
                .collect();
            if self.contains(&z) {
                return Some(z);
            }
        }
        None
    }
    fn describe(&self) -> serde_json::Value {
        json!({
            "kind": "filled_julia",
            "map": serde_json::to_value(float_map_json(&self.map)).unwrap_or(json!(null)),
            "params": serde_json::to_value(self.params).unwrap_or(json!(null)),
        })
    }
}
