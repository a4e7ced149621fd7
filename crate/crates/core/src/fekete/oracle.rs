use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::poly::{norm, C64};

/// A bounded subset of `C^N` given by a membership predicate, a bounding
/// radius, and a seeded sampler.
///
/// Implementations must keep two promises: every sampled point satisfies
/// `contains`, and every point accepted by `contains` has Euclidean norm at
/// most `radius()`.
pub trait SetOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn contains(&self, z: &[C64]) -> bool;

    /// Euclidean bounding radius.
    fn radius(&self) -> f64;

    /// Per-coordinate bounding radii (a polydisc hull); defaults to the
    /// Euclidean radius in every coordinate. Used for determinant scaling.
    fn polyradii(&self) -> Vec<f64> {
        vec![self.radius(); self.dim()]
    }

    /// One point of the set, or `None` when the sampler's internal retry
    /// budget is exhausted.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<Vec<C64>>;

    /// A membership-respecting local move of `z` at scale `sigma`.
    ///
    /// The default proposes complex Gaussian steps and keeps the first one
    /// that lands in the set; lower-dimensional sets override this with
    /// structure-aware moves.
    fn perturb(&self, z: &[C64], sigma: f64, rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
        for _ in 0..8 {
            let candidate: Vec<C64> = z
                .iter()
                .map(|c| {
                    c + Complex64::new(
                        sigma * gaussian(rng),
                        sigma * gaussian(rng),
                    )
                })
                .collect();
            if self.contains(&candidate) {
                return Some(candidate);
            }
        }
        None
    }

    /// JSON descriptor for provenance embedding.
    fn describe(&self) -> serde_json::Value;
}

pub(crate) fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn uniform_disc(radius: f64, rng: &mut ChaCha8Rng) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    Complex64::from_polar(r, theta)
}

/// Polydisc `{ |z_k| <= r_k }`.
pub struct PolydiscOracle {
    radii: Vec<f64>,
}

impl PolydiscOracle {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::Invalid("polydisc radii must be positive".into()));
        }
        Ok(PolydiscOracle { radii })
    }

    pub fn unit(dim: usize) -> Self {
        PolydiscOracle {
            radii: vec![1.0; dim],
        }
    }
}

impl SetOracle for PolydiscOracle {
    fn dim(&self) -> usize {
        self.radii.len()
    }
    fn contains(&self, z: &[C64]) -> bool {
        z.len() == self.radii.len()
            && z.iter().zip(&self.radii).all(|(c, r)| c.norm() <= *r)
    }
    fn radius(&self) -> f64 {
        self.radii.iter().map(|r| r * r).sum::<f64>().sqrt()
    }
    fn polyradii(&self) -> Vec<f64> {
        self.radii.clone()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
        Some(self.radii.iter().map(|r| uniform_disc(*r, rng)).collect())
    }
    fn describe(&self) -> serde_json::Value {
        json!({"kind": "polydisc", "radii": self.radii})
    }
}

/// Euclidean ball `{ ||z|| <= R }`.
pub struct BallOracle {
    dim: usize,
    radius: f64,
}

impl BallOracle {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 || !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Invalid("ball needs positive dimension and radius".into()));
        }
        Ok(BallOracle { dim, radius })
    }

    pub fn unit(dim: usize) -> Self {
        BallOracle { dim, radius: 1.0 }
    }
}

impl SetOracle for BallOracle {
    fn dim(&self) -> usize {
        self.dim
    }
    fn contains(&self, z: &[C64]) -> bool {
        z.len() == self.dim && norm(z) <= self.radius
    }
    fn radius(&self) -> f64 {
        self.radius
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
        // Gaussian direction, radius by the 2N-dimensional volume law.
        let mut v: Vec<C64> = (0..self.dim)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        let r = norm(&v);
        if r < 1e-12 {
            return Some(vec![Complex64::new(0.0, 0.0); self.dim]);
        }
        let u: f64 = rng.random::<f64>();
        let scale = self.radius * u.powf(1.0 / (2.0 * self.dim as f64)) / r;
        for c in v.iter_mut() {
            *c *= scale;
        }
        Some(v)
    }
    fn describe(&self) -> serde_json::Value {
        json!({"kind": "ball", "dim": self.dim, "radius": self.radius})
    }
}

/// Real segment `[a, b]` inside `C^1`. Measure-zero in the plane, so both
/// the sampler and the perturbation move along the real line only.
pub struct IntervalOracle {
    a: f64,
    b: f64,
}

impl IntervalOracle {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Invalid("interval needs a < b".into()));
        }
        Ok(IntervalOracle { a, b })
    }
}

impl SetOracle for IntervalOracle {
    fn dim(&self) -> usize {
        1
    }
    fn contains(&self, z: &[C64]) -> bool {
        z.len() == 1 && z[0].im == 0.0 && z[0].re >= self.a && z[0].re <= self.b
    }
    fn radius(&self) -> f64 {
        self.a.abs().max(self.b.abs())
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
        // Jittered 1-D grid.
        const GRID: u32 = 4096;
        let cell = rng.random_range(0..GRID) as f64;
        let jitter: f64 = rng.random();
        let x = self.a + (self.b - self.a) * (cell + jitter) / GRID as f64;
        Some(vec![Complex64::new(x, 0.0)])
    }
    fn perturb(&self, z: &[C64], sigma: f64, rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
        for _ in 0..8 {
            let x = z[0].re + sigma * (self.b - self.a) * gaussian(rng);
            if x >= self.a && x <= self.b {
                return Some(vec![Complex64::new(x, 0.0)]);
            }
        }
        // Clamp as a final fallback so boundary points stay reachable.
        let x = (z[0].re + sigma * (self.b - self.a) * gaussian(rng)).clamp(self.a, self.b);
        Some(vec![Complex64::new(x, 0.0)])
    }
    fn describe(&self) -> serde_json::Value {
        json!({"kind": "interval", "a": self.a, "b": self.b})
    }
}

/// Finite point set (used for degenerate-oracle handling and tests).
pub struct PointSetOracle {
    dim: usize,
    points: Vec<Vec<C64>>,
}

impl PointSetOracle {
    pub fn new(points: Vec<Vec<C64>>) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).unwrap_or(0);
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::Invalid("point set needs uniform positive dimension".into()));
        }
        Ok(PointSetOracle { dim, points })
    }
}

impl SetOracle for PointSetOracle {
    fn dim(&self) -> usize {
        self.dim
    }
    fn contains(&self, z: &[C64]) -> bool {
        self.points.iter().any(|p| {
            p.iter()
                .zip(z)
                .all(|(a, b)| a.re == b.re && a.im == b.im)
        })
    }
    fn radius(&self) -> f64 {
        self.points
            .iter()
            .map(|p| norm(p))
            .fold(0.0f64, f64::max)
            .max(1e-300)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
        let i = rng.random_range(0..self.points.len());
        Some(self.points[i].clone())
    }
    fn perturb(&self, _z: &[C64], _sigma: f64, rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
        self.sample(rng)
    }
    fn describe(&self) -> serde_json::Value {
        json!({
            "kind": "points",
            "points": self
                .points
                .iter()
                .map(|p| p.iter().map(|c| json!({"re": c.re, "im": c.im})).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
    }
}

/// Parse the self-contained set descriptors (`polydisc`, `ball`, `interval`,
/// `points`). Compound kinds (`preimage`, `filled_julia`) carry a map and are
/// assembled by their owning modules.
pub fn parse_basic_set(value: &serde_json::Value) -> Result<std::sync::Arc<dyn SetOracle>> {
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::Invalid("set descriptor needs a \"kind\"".into()))?;
    match kind {
        "polydisc" => {
            let radii: Vec<f64> = serde_json::from_value(
                value
                    .get("radii")
                    .cloned()
                    .ok_or_else(|| Error::Invalid("polydisc needs \"radii\"".into()))?,
            )
            .map_err(|e| Error::Invalid(format!("bad radii: {}", e)))?;
            Ok(std::sync::Arc::new(PolydiscOracle::new(radii)?))
        }
        "ball" => {
            let dim = value
                .get("dim")
                .and_then(|v| v.as_u64())
                .ok_or_else(|| Error::Invalid("ball needs \"dim\"".into()))?;
            let radius = value
                .get("radius")
                .and_then(|v| v.as_f64())
                .unwrap_or(1.0);
            Ok(std::sync::Arc::new(BallOracle::new(dim as usize, radius)?))
        }
        "interval" => {
            let a = value
                .get("a")
                .and_then(|v| v.as_f64())
                .ok_or_else(|| Error::Invalid("interval needs \"a\"".into()))?;
            let b = value
                .get("b")
                .and_then(|v| v.as_f64())
                .ok_or_else(|| Error::Invalid("interval needs \"b\"".into()))?;
            Ok(std::sync::Arc::new(IntervalOracle::new(a, b)?))
        }
        "points" => {
            let pts = value
                .get("points")
                .and_then(|v| v.as_array())
                .ok_or_else(|| Error::Invalid("points needs \"points\"".into()))?;
            let points: Vec<Vec<C64>> = pts
                .iter()
                .map(|p| -> Result<Vec<C64>> {
                    let coords = p
                        .as_array()
                        .ok_or_else(|| Error::Invalid("bad point".into()))?;
                    coords
                        .iter()
                        .map(|c| -> Result<C64> {
                            let re = c.get("re").and_then(|v| v.as_f64()).unwrap_or(0.0);
                            let im = c.get("im").and_then(|v| v.as_f64()).unwrap_or(0.0);
                            Ok(Complex64::new(re, im))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            Ok(std::sync::Arc::new(PointSetOracle::new(points)?))
        }
        other => Err(Error::Invalid(format!("unknown basic set kind {:?}", other))),
    }
}
