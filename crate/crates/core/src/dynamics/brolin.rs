use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{C64, PolynomialMap};

/// Point of the projective line in an affine-or-infinity representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjPoint {
    Finite(C64),
    Infinity,
}

impl ProjPoint {
    /// Unit-sphere representative in `C^2`.
    pub fn lift_to_sphere(&self) -> [C64; 2] {
        match self {
            ProjPoint::Infinity => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            ProjPoint::Finite(w) => {
                let scale = (1.0 + w.norm_sqr()).sqrt();
                [w / scale, Complex64::new(1.0 / scale, 0.0)]
            }
        }
    }

    pub fn abs(&self) -> f64 {
        match self {
            ProjPoint::Infinity => f64::INFINITY,
            ProjPoint::Finite(w) => w.norm(),
        }
    }
}

/// Homogeneous binary-form coefficients of a degree-d component:
/// `coeffs[k]` multiplies `v1^k v2^(d-k)`.
fn binary_form_coeffs(map: &PolynomialMap<C64>, component: usize) -> Vec<C64> {
    let d = map.degree() as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    for (mon, c) in map.components()[component].terms() {
        let k = mon.exponents()[0] as usize;
        coeffs[k] += c;
    }
    coeffs
}

/// Roots in `P^1` of the binary form `sum_k c_k v1^k v2^(d-k)`, with
/// multiplicity: vanished leading coefficients contribute roots at infinity,
/// the rest comes from Durand-Kerner on the dehomogenized polynomial.
fn binary_form_roots(coeffs: &[C64]) -> Result<Vec<ProjPoint>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Err(Error::Numerical("zero binary form".into()));
    }
    let tol = scale * 1e-12;
    let mut top = coeffs.len() - 1;
    let mut roots = Vec::new();
    while top > 0 && coeffs[top].norm() <= tol {
        roots.push(ProjPoint::Infinity);
        top -= 1;
    }
    if top == 0 {
        // Constant in v1 after stripping: remaining roots are all at infinity
        // only if the constant vanishes, which the scale check excludes.
        return if roots.is_empty() {
            Err(Error::Numerical("binary form has no roots".into()))
        } else {
            Ok(roots)
        };
    }
    let poly: Vec<C64> = coeffs[..=top].to_vec();
    let finite = durand_kerner(&poly)?;
    roots.extend(finite.into_iter().map(ProjPoint::Finite));
    Ok(roots)
}

/// Durand-Kerner simultaneous root iteration for `sum_k a_k v^k`,
/// `a_deg != 0`. Deterministic initialization; converges in a handful of
/// iterations at the small degrees used here.
fn durand_kerner(coeffs: &[C64]) -> Result<Vec<C64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |v: C64| -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..=deg).rev() {
            acc = acc * v + monic[k];
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..256 {
        let mut delta_max = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-280 {
                return Err(Error::Numerical("Durand-Kerner denominators collapsed".into()));
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta_max = delta_max.max(step.norm());
        }
        if delta_max < 1e-13 {
            return Ok(roots);
        }
    }
    Err(Error::Numerical("Durand-Kerner did not converge".into()))
}

/// Inverse-iteration sampler for the Green current of the map induced on
/// `P^1` by a regular homogeneous `F: C^2 -> C^2`.
///
/// Starting from a generic point, each step solves the degree-d preimage
/// equation and picks one preimage uniformly at random; the first `depth`
/// points are discarded as burn-in, the next `count` are returned. The
/// empirical measure of the returned points approximates the
/// maximal-entropy measure of the induced map.
pub fn brolin_sample(
    map: &PolynomialMap<C64>,
    depth: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<ProjPoint>> {
    if map.dim() != 2 {
        return Err(Error::Precondition("Brolin sampling needs N = 2".into()));
    }
    if !map.is_homogeneous() {
        return Err(Error::Precondition(
            "Brolin sampling needs a homogeneous map".into(),
        ));
    }
    let f1 = binary_form_coeffs(map, 0);
    let f2 = binary_form_coeffs(map, 1);
    let d = map.degree() as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x62_726f_6c69_6e);
    'attempt: for _ in 0..8 {
        let jitter = Complex64::new(
            0.5 + 0.2 * (rng.random::<f64>() - 0.5),
            0.3 + 0.2 * (rng.random::<f64>() - 0.5),
        );
        // Path point after i pullbacks has index i; the seed is index 0.
        let mut current = ProjPoint::Finite(jitter);
        let mut out = Vec::with_capacity(count);
        for index in 0..depth + count {
            if index >= depth {
                out.push(current);
            }
            if out.len() == count {
                break;
            }
            // Solve F1(v) t2 - F2(v) t1 = 0 for the preimages of `current`.
            let (t1, t2) = match current {
                ProjPoint::Finite(w) => (w, Complex64::new(1.0, 0.0)),
                ProjPoint::Infinity => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            };
            let form: Vec<C64> = (0..=d).map(|k| f1[k] * t2 - f2[k] * t1).collect();
            let roots = match binary_form_roots(&form) {
                Ok(r) if !r.is_empty() => r,
                _ => continue 'attempt,
            };
            let pick = rng.random_range(0..roots.len());
            current = roots[pick];
        }
        if out.len() == count {
            return Ok(out);
        }
    }
    Err(Error::Numerical(
        "Brolin sampling failed from every seed point".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SparsePolynomial;

    fn cmap(components: Vec<Vec<(Vec<u32>, f64)>>) -> PolynomialMap<C64> {
        let n = components.len();
        PolynomialMap::new(
            components
                .into_iter()
                .map(|terms| {
                    SparsePolynomial::from_exponents(
                        n,
                        terms.into_iter().map(|(e, c)| (e, Complex64::new(c, 0.0))),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    fn squares() -> PolynomialMap<C64> {
        cmap(vec![vec![(vec![2, 0], 1.0)], vec![(vec![0, 2], 1.0)]])
    }

    #[test]
    fn depth_zero_returns_seed_point() {
        let pts = brolin_sample(&squares(), 0, 1, 9).unwrap();
        assert_eq!(pts.len(), 1);
        match pts[0] {
            ProjPoint::Finite(w) => assert!(w.norm() < 2.0),
            _ => panic!("seed point should be finite"),
        }
    }

    #[test]
    fn squares_equidistribute_on_unit_circle() {
        // Induced map is w -> w^2; its equilibrium measure is uniform on
        // |w| = 1, so mean log|w| -> 0.
        let pts = brolin_sample(&squares(), 20, 10_000, 3).unwrap();
        let mean_log: f64 = pts
            .iter()
            .map(|p| match p {
                ProjPoint::Finite(w) => w.norm().max(1e-300).ln(),
                ProjPoint::Infinity => 0.0,
            })
            .sum::<f64>()
            / pts.len() as f64;
        assert!(mean_log.abs() < 0.02, "mean log |w| = {}", mean_log);
    }

    #[test]
    fn different_seeds_agree_statistically() {
        let a = brolin_sample(&squares(), 20, 5000, 101).unwrap();
        let b = brolin_sample(&squares(), 20, 5000, 202).unwrap();
        let stat = |pts: &[ProjPoint]| -> f64 {
            pts.iter()
                .map(|p| match p {
                    ProjPoint::Finite(w) => w.norm(),
                    ProjPoint::Infinity => 1.0,
                })
                .sum::<f64>()
                / pts.len() as f64
        };
        assert!((stat(&a) - stat(&b)).abs() < 0.05);
    }

    #[test]
    fn roots_of_shifted_square() {
        // v^2 - 1 as a binary form: roots +-1.
        let coeffs = vec![
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let mut roots: Vec<f64> = binary_form_roots(&coeffs)
            .unwrap()
            .iter()
            .map(|p| match p {
                ProjPoint::Finite(w) => w.re,
                _ => panic!("finite roots expected"),
            })
            .collect();
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] + 1.0).abs() < 1e-10);
        assert!((roots[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn leading_degeneration_gives_infinity_root() {
        // v1 v2: roots are 0 and infinity.
        let coeffs = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let roots = binary_form_roots(&coeffs).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&ProjPoint::Infinity));
    }
}
