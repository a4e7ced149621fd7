use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::SetOracle;
use super::vandermonde::{scaled_monomial_matrix, scaled_monomial_value, vandermonde_logabsdet_scaled};
use crate::error::{Error, Result};
use crate::linalg::invert;
use crate::poly::{count_monomials, monomials_up_to_degree, vandermonde_degree, C64, Monomial};

/// Search budget for the determinant maximization.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Budget {
    /// Size of the greedy candidate pool (must be at least `M(n)`).
    pub candidate_count: usize,
    /// Exchange proposals per restart; zero means greedy only.
    pub rounds: usize,
    /// Independent exchange chains, reduced by best determinant.
    pub restarts: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            candidate_count: 2048,
            rounds: 800,
            restarts: 4,
        }
    }
}

/// `M(n)` points together with the log-magnitude of the generalized
/// Vandermonde determinant they achieve and the derived `d_n` value.
///
/// Every point satisfies the originating oracle's membership predicate, and
/// `dn_value = exp(log_abs_det / D(n))` whenever the determinant is finite
/// (with the convention `d_0 = 1` since `D(0) = 0` and the 1x1 determinant
/// of the constant monomial is 1).
#[derive(Clone, Debug)]
pub struct FeketeConfiguration {
    pub n: u32,
    pub dim: usize,
    pub points: Vec<Vec<C64>>,
    pub log_abs_det: f64,
    pub dn_value: f64,
}

impl FeketeConfiguration {
    fn from_points(points: Vec<Vec<C64>>, dim: usize, n: u32, polyradii: &[f64]) -> Result<Self> {
        let log_abs_det = vandermonde_logabsdet_scaled(&points, dim, n, polyradii)?;
        Ok(FeketeConfiguration {
            n,
            dim,
            points,
            log_abs_det,
            dn_value: dn_from_logdet(log_abs_det, dim, n)?,
        })
    }
}

pub(crate) fn dn_from_logdet(log_abs_det: f64, dim: usize, n: u32) -> Result<f64> {
    let d = vandermonde_degree(dim, n)? as f64;
    Ok(if d == 0.0 {
        1.0
    } else if log_abs_det == f64::NEG_INFINITY {
        0.0
    } else {
        (log_abs_det / d).exp()
    })
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 round
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn sample_pool(
    oracle: &dyn SetOracle,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<C64>>> {
    let mut pool = Vec::with_capacity(count);
    let mut failures = 0usize;
    while pool.len() < count {
        match oracle.sample(rng) {
            Some(z) => {
                debug_assert!(oracle.contains(&z));
                pool.push(z);
            }
            None => {
                failures += 1;
                if failures > 10 * count + 100 {
                    return Err(Error::DegenerateOracle(
                        "sampler retry budget exhausted".into(),
                    ));
                }
            }
        }
    }
    Ok(pool)
}

/// Pick `M(n)` points from a sampled candidate pool, one at a time, each
/// maximizing the incremental determinant growth (column-pivoted
/// elimination on the monomial-evaluation matrix).
pub fn greedy_leja(
    oracle: &dyn SetOracle,
    n: u32,
    candidate_count: usize,
    seed: u64,
) -> Result<FeketeConfiguration> {
    let dim = oracle.dim();
    let m = count_monomials(dim, n)? as usize;
    if candidate_count < m {
        return Err(Error::Precondition(format!(
            "candidate_count {} below M(n) = {}",
            candidate_count, m
        )));
    }
    let monomials = monomials_up_to_degree(dim, n);
    let polyradii = oracle.polyradii();
    let scale_logs: Vec<f64> = monomials
        .iter()
        .map(|mon| {
            mon.exponents()
                .iter()
                .zip(&polyradii)
                .map(|(&e, &r)| e as f64 * r.max(1e-300).ln())
                .sum()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0x6c65_6a61));
    for _attempt in 0..3 {
        let mut pool = sample_pool(oracle, candidate_count, &mut rng)?;
        // Descending-norm order so that pivot-magnitude ties (notably the
        // constant-monomial row) resolve to the outermost candidate, the
        // classical Leja starting convention.
        pool.sort_by(|a, b| {
            crate::poly::norm(b)
                .partial_cmp(&crate::poly::norm(a))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        if let Some(points) = greedy_select(&pool, &monomials, &scale_logs, m) {
            let config = FeketeConfiguration::from_points(points, dim, n, &polyradii)?;
            if config.log_abs_det.is_finite() {
                return Ok(config);
            }
        }
    }
    Err(Error::DegenerateOracle(
        "no nondegenerate configuration found in the candidate pool".into(),
    ))
}

fn greedy_select(
    pool: &[Vec<C64>],
    monomials: &[Monomial],
    scale_logs: &[f64],
    m: usize,
) -> Option<Vec<Vec<C64>>> {
    let k = pool.len();
    // b[i][j] = scaled e_i(pool[j]), row-major m x k.
    let mut b: Vec<C64> = Vec::with_capacity(m * k);
    for (i, mon) in monomials.iter().enumerate() {
        for z in pool {
            b.push(scaled_monomial_value(mon, z, scale_logs[i]));
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut used = vec![false; k];
    for r in 0..m {
        let mut best = usize::MAX;
        let mut best_mag = 0.0f64;
        for j in 0..k {
            if used[j] {
                continue;
            }
            let mag = b[r * k + j].norm();
            if mag > best_mag {
                best_mag = mag;
                best = j;
            }
        }
        if best == usize::MAX || best_mag < 1e-250 {
            return None;
        }
        used[best] = true;
        chosen.push(best);
        let pivot = b[r * k + best];
        for j in 0..k {
            if used[j] || b[r * k + j].norm() == 0.0 {
                continue;
            }
            let factor = b[r * k + j] / pivot;
            for i in r..m {
                let v = b[i * k + best];
                b[i * k + j] -= factor * v;
            }
        }
    }
    Some(chosen.into_iter().map(|j| pool[j].clone()).collect())
}

/// Repeated single-point exchange: propose replacements from the sampler and
/// from local perturbations, accepting only strict determinant growth.
/// Runs `restarts` independent chains from the given configuration and
/// returns the best outcome (never worse than the input).
pub fn exchange_optimize(
    config: &FeketeConfiguration,
    oracle: &dyn SetOracle,
    rounds: usize,
    restarts: usize,
    seed: u64,
) -> Result<FeketeConfiguration> {
    if rounds == 0 || restarts == 0 {
        return Ok(config.clone());
    }
    if !config.log_abs_det.is_finite() {
        return Ok(config.clone());
    }
    let streams = restart_seeds(seed, restarts);
    let results: Vec<(usize, FeketeConfiguration)> = streams
        .into_par_iter()
        .enumerate()
        .map(|(r, stream)| {
            let rng = ChaCha8Rng::seed_from_u64(stream);
            let out = exchange_chain(config, oracle, rounds, rng);
            (r, out)
        })
        .collect();
    let mut best = config.clone();
    for (_, cand) in results.into_iter() {
        if cand.log_abs_det > best.log_abs_det {
            best = cand;
        }
    }
    Ok(best)
}

/// The per-restart RNG stream seeds derived from a base seed, as used by
/// `exchange_optimize`; exposed so reports can log them for forensic replay.
pub fn restart_seeds(seed: u64, restarts: usize) -> Vec<u64> {
    (0..restarts)
        .map(|r| mix_seed(seed, 0xe8c4 ^ (r as u64)))
        .collect()
}

const SIGMA_SCHEDULE: [f64; 5] = [0.3, 0.1, 0.03, 0.01, 0.003];

fn exchange_chain(
    config: &FeketeConfiguration,
    oracle: &dyn SetOracle,
    rounds: usize,
    mut rng: ChaCha8Rng,
) -> FeketeConfiguration {
    let dim = config.dim;
    let n = config.n;
    let monomials = monomials_up_to_degree(dim, n);
    let polyradii = oracle.polyradii();
    let scale_logs: Vec<f64> = monomials
        .iter()
        .map(|mon| {
            mon.exponents()
                .iter()
                .zip(&polyradii)
                .map(|(&e, &r)| e as f64 * r.max(1e-300).ln())
                .sum()
        })
        .collect();
    let m = monomials.len();
    let radius = oracle.radius();

    let mut points = config.points.clone();
    let (mut b, _corr) = scaled_monomial_matrix(&points, &monomials, &polyradii);
    let mut b_inv = match invert(&b) {
        Some(inv) => inv,
        None => return config.clone(),
    };
    let mut accepts_since_refresh = 0usize;

    let column_of = |z: &Vec<C64>| -> Vec<C64> {
        monomials
            .iter()
            .enumerate()
            .map(|(i, mon)| scaled_monomial_value(mon, z, scale_logs[i]))
            .collect()
    };

    for round in 0..rounds {
        let j = rng.random_range(0..m);
        let sigma_a = radius * SIGMA_SCHEDULE[round % SIGMA_SCHEDULE.len()];
        let sigma_b = radius * SIGMA_SCHEDULE[(round / 7 + 2) % SIGMA_SCHEDULE.len()];
        let mut proposals: Vec<Vec<C64>> = Vec::with_capacity(4);
        for _ in 0..2 {
            if let Some(z) = oracle.sample(&mut rng) {
                proposals.push(z);
            }
        }
        if let Some(z) = oracle.perturb(&points[j], sigma_a, &mut rng) {
            proposals.push(z);
        }
        if let Some(z) = oracle.perturb(&points[j], sigma_b, &mut rng) {
            proposals.push(z);
        }

        let mut best_ratio = 1.0 + 1e-12;
        let mut best: Option<(Vec<C64>, Vec<C64>, Vec<C64>)> = None;
        for z in proposals {
            let v = column_of(&z);
            // Replacing column j changes |det| by |(B^{-1} v)_j|.
            let u = b_inv.matvec(&v);
            let ratio = u[j].norm();
            if ratio > best_ratio && ratio.is_finite() {
                best_ratio = ratio;
                best = Some((z, v, u));
            }
        }

        if let Some((z, v, u)) = best {
            points[j] = z;
            b.set_column(j, &v);
            // Sherman-Morrison column replacement on the inverse.
            let row_j: Vec<C64> = (0..m).map(|t| b_inv.at(j, t)).collect();
            let uj = u[j];
            for i in 0..m {
                let coeff = if i == j {
                    (u[i] - C64::new(1.0, 0.0)) / uj
                } else {
                    u[i] / uj
                };
                if coeff.norm() == 0.0 {
                    continue;
                }
                for t in 0..m {
                    let val = b_inv.at(i, t) - coeff * row_j[t];
                    b_inv.set(i, t, val);
                }
            }
            accepts_since_refresh += 1;
            if accepts_since_refresh >= 64 {
                accepts_since_refresh = 0;
                if let Some(fresh) = invert(&b) {
                    b_inv = fresh;
                }
            }
        }
    }

    match FeketeConfiguration::from_points(points, dim, n, &polyradii) {
        Ok(out) if out.log_abs_det >= config.log_abs_det => out,
        _ => config.clone(),
    }
}

/// Greedy initialization followed by exchange optimization under the budget.
/// The reported `d_n` is a certified lower bound on the true `d_n(E)`: any
/// feasible configuration under-approximates the supremum.
pub fn dn_estimate(
    oracle: &dyn SetOracle,
    n: u32,
    budget: &Budget,
    seed: u64,
) -> Result<FeketeConfiguration> {
    let greedy = greedy_leja(oracle, n, budget.candidate_count, seed)?;
    exchange_optimize(&greedy, oracle, budget.rounds, budget.restarts, seed)
}

/// One row of the diameter table.
#[derive(Clone, Debug, Serialize)]
pub struct DiamRow {
    pub n: u32,
    pub m_points: u64,
    pub d_degree: u64,
    pub log_abs_det: f64,
    pub d_n: f64,
}

/// The `d_n` table for `n = 1..=n_max`, with the final value as the
/// d-infinity proxy and the spread of the last three values as a
/// convergence indicator (reported, not asserted).
#[derive(Clone, Debug, Serialize)]
pub struct DiamSequence {
    pub rows: Vec<DiamRow>,
    pub d_infinity_proxy: f64,
    pub convergence_spread: f64,
}

impl DiamSequence {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,M,D,log_abs_det,d_n\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.n, r.m_points, r.d_degree, r.log_abs_det, r.d_n
            ));
        }
        out
    }
}

pub fn diam_sequence(
    oracle: &dyn SetOracle,
    n_max: u32,
    budget: &Budget,
    seed: u64,
) -> Result<DiamSequence> {
    if n_max < 1 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let config = dn_estimate(oracle, n, budget, mix_seed(seed, n as u64))?;
        rows.push(DiamRow {
            n,
            m_points: count_monomials(oracle.dim(), n)?,
            d_degree: vandermonde_degree(oracle.dim(), n)?,
            log_abs_det: config.log_abs_det,
            d_n: config.dn_value,
        });
    }
    let last = rows.last().expect("n_max >= 1");
    let tail: Vec<f64> = rows.iter().rev().take(3).map(|r| r.d_n).collect();
    let spread = tail.iter().cloned().fold(f64::MIN, f64::max)
        - tail.iter().cloned().fold(f64::MAX, f64::min);
    Ok(DiamSequence {
        d_infinity_proxy: last.d_n,
        convergence_spread: spread,
        rows,
    })
}

/// Hadamard-type upper bound for the unit polydisc: monomial values are
/// bounded by 1, so |det| <= M! and `d_n <= (M!)^(1/D)`.
pub fn polydisc_hadamard_bound(dim: usize, n: u32) -> Result<f64> {
    let m = count_monomials(dim, n)?;
    let d = vandermonde_degree(dim, n)? as f64;
    if d == 0.0 {
        return Ok(1.0);
    }
    let ln_fact: f64 = (1..=m).map(|k| (k as f64).ln()).sum();
    Ok((ln_fact / d).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fekete::oracle::{BallOracle, IntervalOracle, PointSetOracle, PolydiscOracle};
    use num_complex::Complex64;

    #[test]
    fn greedy_disc_n1_spreads_points() {
        // Two points in the unit disc at distance >= 1.9 from a 256 pool.
        let oracle = BallOracle::unit(1);
        let config = greedy_leja(&oracle, 1, 256, 42).unwrap();
        let d = (config.points[0][0] - config.points[1][0]).norm();
        assert!(d >= 1.9, "distance {}", d);
    }

    #[test]
    fn singleton_oracle_is_degenerate() {
        let oracle =
            PointSetOracle::new(vec![vec![Complex64::new(0.25, 0.0)]]).unwrap();
        match greedy_leja(&oracle, 1, 64, 1) {
            Err(Error::DegenerateOracle(_)) => {}
            other => panic!("expected degenerate oracle, got {:?}", other.map(|c| c.log_abs_det)),
        }
    }

    #[test]
    fn polydisc_n0_single_point() {
        let oracle = PolydiscOracle::unit(2);
        let config = greedy_leja(&oracle, 0, 8, 3).unwrap();
        assert_eq!(config.points.len(), 1);
        assert!(config.log_abs_det.abs() < 1e-12);
        assert_eq!(config.dn_value, 1.0);
    }

    #[test]
    fn zero_rounds_returns_input() {
        let oracle = BallOracle::unit(1);
        let config = greedy_leja(&oracle, 2, 128, 7).unwrap();
        let out = exchange_optimize(&config, &oracle, 0, 4, 7).unwrap();
        assert_eq!(out.log_abs_det, config.log_abs_det);
        assert_eq!(out.points, config.points);
    }

    #[test]
    fn exchange_never_decreases() {
        let oracle = BallOracle::unit(1);
        let config = greedy_leja(&oracle, 3, 64, 11).unwrap();
        let out = exchange_optimize(&config, &oracle, 200, 2, 11).unwrap();
        assert!(out.log_abs_det >= config.log_abs_det);
        for p in &out.points {
            assert!(oracle.contains(p));
        }
    }

    #[test]
    fn disc_optimum_n1_and_n2() {
        // d_1 -> 2 (antipodal pair), d_2 -> sqrt(3) (equilateral on circle).
        let oracle = BallOracle::unit(1);
        let c1 = dn_estimate(
            &oracle,
            1,
            &Budget { candidate_count: 512, rounds: 400, restarts: 2 },
            5,
        )
        .unwrap();
        assert!(c1.dn_value >= 0.99 * 2.0, "d_1 = {}", c1.dn_value);
        assert!(c1.dn_value <= 2.0 + 1e-9);
        let c2 = dn_estimate(
            &oracle,
            2,
            &Budget { candidate_count: 512, rounds: 600, restarts: 2 },
            5,
        )
        .unwrap();
        let target = 3f64.sqrt();
        assert!(c2.dn_value >= 0.99 * target, "d_2 = {}", c2.dn_value);
        assert!(c2.dn_value <= target + 1e-9);
    }

    #[test]
    fn interval_configurations_stay_real() {
        let oracle = IntervalOracle::new(-1.0, 1.0).unwrap();
        let config = dn_estimate(
            &oracle,
            4,
            &Budget { candidate_count: 256, rounds: 200, restarts: 2 },
            13,
        )
        .unwrap();
        for p in &config.points {
            assert_eq!(p[0].im, 0.0);
        }
        assert!(config.log_abs_det.is_finite());
    }

    #[test]
    fn diam_sequence_has_full_table() {
        let oracle = BallOracle::unit(1);
        let seq = diam_sequence(
            &oracle,
            4,
            &Budget { candidate_count: 128, rounds: 60, restarts: 1 },
            3,
        )
        .unwrap();
        assert_eq!(seq.rows.len(), 4);
        assert_eq!(seq.d_infinity_proxy, seq.rows[3].d_n);
        let csv = seq.to_csv();
        assert!(csv.starts_with("n,M,D,log_abs_det,d_n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn greedy_only_budget_is_finite() {
        let oracle = PolydiscOracle::unit(2);
        let config = dn_estimate(
            &oracle,
            2,
            &Budget { candidate_count: 64, rounds: 0, restarts: 0 },
            9,
        )
        .unwrap();
        assert!(config.log_abs_det.is_finite());
    }
}
