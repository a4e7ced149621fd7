use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::map::PolynomialMap;
use super::scalar::C64;
use crate::error::{Error, Result};

/// Euclidean norm of a complex vector.
pub fn norm(z: &[C64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| {
                Complex64::new(
                    gaussian_sample(rng),
                    gaussian_sample(rng),
                )
            })
            .collect();
        let r = norm(&v);
        if r > 1e-12 {
            return v.iter().map(|c| c / r).collect();
        }
    }
}

/// Box-Muller standard normal; keeps us off distribution crates.
fn gaussian_sample(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Minimum of `||F_h(z)||` over the unit sphere, estimated from seeded
/// samples followed by a local descent polish.
///
/// Strictly positive output is necessary (not sufficient) evidence of
/// regularity; the authoritative regularity certificate is a nonzero
/// resultant. The value is used to derive bounding radii and escape radii.
pub fn min_leading_norm_on_sphere(
    map: &PolynomialMap<C64>,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if !map.is_homogeneous() {
        return Err(Error::Precondition(
            "min_leading_norm_on_sphere needs a homogeneous map".into(),
        ));
    }
    let dim = map.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d69_6e5f_7370_6872);
    let eval_norm = |z: &[C64]| -> f64 {
        let image = map.evaluate(z).expect("dimension fixed by construction");
        norm(&image)
    };

    let mut best_point = random_unit_vector(dim, &mut rng);
    let mut best = eval_norm(&best_point);
    for _ in 1..samples.max(1) {
        let z = random_unit_vector(dim, &mut rng);
        let v = eval_norm(&z);
        if v < best {
            best = v;
            best_point = z;
        }
    }

    // Descent polish: perturb on the sphere with a shrinking step.
    let mut sigma = 0.3f64;
    let mut stall = 0usize;
    for _ in 0..2048 {
        let mut z: Vec<C64> = best_point
            .iter()
            .map(|c| {
                c + Complex64::new(
                    sigma * gaussian_sample(&mut rng),
                    sigma * gaussian_sample(&mut rng),
                )
            })
            .collect();
        let r = norm(&z);
        if r < 1e-12 {
            continue;
        }
        for c in z.iter_mut() {
            *c /= r;
        }
        let v = eval_norm(&z);
        if v < best {
            best = v;
            best_point = z;
            stall = 0;
        } else {
            stall += 1;
            if stall >= 24 {
                sigma *= 0.5;
                stall = 0;
                if sigma < 1e-9 {
                    break;
                }
            }
        }
    }
    Ok(best)
}
