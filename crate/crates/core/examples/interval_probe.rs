use tdiam::fekete::{dn_estimate, Budget, IntervalOracle};

// Brute-force Fekete points of [-1,1] by cyclic coordinate ascent on a fine
// grid: maximize prod |x_i - x_j| over 17 points.
fn oracle_d16() -> f64 {
    let m = 17usize;
    let grid: Vec<f64> = (0..=4000).map(|k| -1.0 + 2.0 * k as f64 / 4000.0).collect();
    let mut pts: Vec<f64> = (0..m).map(|i| -1.0 + 2.0 * i as f64 / (m - 1) as f64).collect();
    let logv = |pts: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..pts.len() {
            for j in 0..i {
                s += (pts[i] - pts[j]).abs().max(1e-300).ln();
            }
        }
        s
    };
    let mut best = logv(&pts);
    loop {
        let mut improved = false;
        for i in 0..m {
            let mut local_best = best;
            let mut local_x = pts[i];
            let old = pts[i];
            for &x in &grid {
                pts[i] = x;
                let v = logv(&pts);
                if v > local_best {
                    local_best = v;
                    local_x = x;
                }
            }
            pts[i] = local_x;
            if local_best > best + 1e-12 {
                best = local_best;
                improved = true;
            } else {
                pts[i] = if local_best >= best { local_x } else { old };
            }
        }
        if !improved {
            break;
        }
    }
    let d_deg = 16.0 * 17.0 / 2.0;
    (best / d_deg).exp()
}

fn main() {
    let oracle_value = oracle_d16();
    println!("interval oracle d_16 = {:.6}", oracle_value);
    let oracle = IntervalOracle::new(-1.0, 1.0).unwrap();
    let est = dn_estimate(&oracle, 16, &Budget { candidate_count: 2048, rounds: 1500, restarts: 4 }, 9).unwrap();
    println!("estimator d_16 = {:.6} ratio {:.4}", est.dn_value, est.dn_value / oracle_value);
}
