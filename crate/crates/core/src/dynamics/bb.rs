use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::brolin::brolin_sample;
use super::escape::green_homogeneous;
use crate::error::{Error, Result};
use crate::fekete::oracle_gaussian;
use crate::poly::{C64, PolynomialMap};
use crate::resultant::resultant_numeric;

/// Monte-Carlo verification report for the potential-theoretic resultant
/// identity on `C^2`: the sum of the Green-function averages against the
/// Fubini-Study measure and the equilibrium measure of the induced map
/// equals `log|Res(F)| / (d(d-1)) - 1/2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BbReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    pub res_abs: f64,
    pub fs_mean: f64,
    pub brolin_mean: f64,
}

const CHUNK: usize = 4096;
const GREEN_TOL: f64 = 1e-12;
const GREEN_CAP: usize = 256;

/// Run the check with `|Res|` taken from the numeric resultant engine.
pub fn bb_check(
    map: &PolynomialMap<C64>,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<BbReport> {
    let res = resultant_numeric(&map.leading_part())?;
    if res.log_abs == f64::NEG_INFINITY || res.ill_conditioned {
        return Err(Error::NonRegular(
            "numeric resultant does not certify regularity".into(),
        ));
    }
    bb_check_with_res(map, res.log_abs, samples, depth, seed)
}

/// Run the check with `log|Res(F)|` supplied by the caller (e.g. from the
/// exact resultant of a rational map).
pub fn bb_check_with_res(
    map: &PolynomialMap<C64>,
    res_log_abs: f64,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<BbReport> {
    if map.dim() != 2 {
        return Err(Error::Precondition("the identity is checked for N = 2".into()));
    }
    if !map.is_homogeneous() {
        return Err(Error::Precondition("the map must be homogeneous".into()));
    }
    let d = map.degree();
    if d < 2 {
        return Err(Error::Precondition("degree must be at least 2".into()));
    }

    // Fubini-Study side: uniform points on the unit sphere of C^2, averaged
    // in fixed chunk order so the result is thread-count independent.
    let chunks: Vec<(usize, usize)> = split_chunks(samples);
    let fs_sums: Vec<f64> = chunks
        .par_iter()
        .map(|&(index, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 0xf5_0000 + index as u64));
            let mut acc = 0.0;
            for _ in 0..len {
                let z = random_sphere_point(&mut rng);
                acc += green_homogeneous(map, &z, GREEN_TOL, GREEN_CAP);
            }
            acc
        })
        .collect();
    let fs_mean = fs_sums.iter().sum::<f64>() / samples.max(1) as f64;

    // Equilibrium-measure side: inverse-iteration samples lifted to the
    // sphere. The path is sequential; the Green evaluations parallelize.
    let points = brolin_sample(map, depth, samples, seed)?;
    let brolin_sums: Vec<f64> = points
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|p| {
                    let z = p.lift_to_sphere();
                    green_homogeneous(map, &z, GREEN_TOL, GREEN_CAP)
                })
                .sum::<f64>()
        })
        .collect();
    let brolin_mean = brolin_sums.iter().sum::<f64>() / points.len().max(1) as f64;

    let lhs = fs_mean + brolin_mean;
    let rhs = res_log_abs / (d as f64 * (d as f64 - 1.0)) - 0.5;
    Ok(BbReport {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        samples,
        depth,
        seed,
        res_abs: res_log_abs.exp(),
        fs_mean,
        brolin_mean,
    })
}

fn split_chunks(total: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut produced = 0;
    let mut index = 0;
    while produced < total {
        let len = CHUNK.min(total - produced);
        out.push((index, len));
        produced += len;
        index += 1;
    }
    out
}

fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z ^ (z >> 27)
}

fn random_sphere_point(rng: &mut ChaCha8Rng) -> [C64; 2] {
    loop {
        let z = [
            Complex64::new(oracle_gaussian(rng), oracle_gaussian(rng)),
            Complex64::new(oracle_gaussian(rng), oracle_gaussian(rng)),
        ];
        let r = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        if r > 1e-12 {
            return [z[0] / r, z[1] / r];
        }
    }
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

    #[test]
    fn squares_identity_holds() {
        // (z1^2, z2^2): rhs = -1/2, g decomposes as log max coordinate.
        let f = cmap(vec![vec![(vec![2, 0], 1.0)], vec![(vec![0, 2], 1.0)]]);
        let report = bb_check(&f, 20_000, 12, 7).unwrap();
        assert!((report.rhs + 0.5).abs() < 1e-12, "rhs = {}", report.rhs);
        assert!(report.gap < 0.05, "gap = {}", report.gap);
    }

    #[test]
    fn identity_is_scale_consistent() {
        // (2 z1^2, 2 z2^2): Res = 16, rhs = 2 log 2 - 1/2, and g shifts by
        // log 2, so both sides move together.
        let f = cmap(vec![vec![(vec![2, 0], 2.0)], vec![(vec![0, 2], 2.0)]]);
        let report = bb_check(&f, 20_000, 12, 7).unwrap();
        let expect = 2.0 * 2f64.ln() - 0.5;
        assert!((report.rhs - expect).abs() < 1e-9, "rhs = {}", report.rhs);
        assert!(report.gap < 0.05, "gap = {}", report.gap);
    }

    #[test]
    fn gap_shrinks_with_samples() {
        let f = cmap(vec![vec![(vec![2, 0], 1.0)], vec![(vec![0, 2], 1.0)]]);
        let coarse = bb_check(&f, 1000, 12, 11).unwrap();
        let fine = bb_check(&f, 50_000, 12, 11).unwrap();
        assert!(fine.gap <= coarse.gap + 0.02);
    }

    #[test]
    fn wrong_dimension_rejected() {
        let f = cmap(vec![vec![(vec![2], 1.0)]]);
        assert!(bb_check(&f, 100, 4, 1).is_err());
    }
}
