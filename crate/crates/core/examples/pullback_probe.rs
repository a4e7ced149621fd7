use std::sync::Arc;
use num_complex::Complex64;
use tdiam::dynamics::{filled_julia_oracle, EscapeParameters};
use tdiam::fekete::{diam_sequence, pullback_check, Budget, PolydiscOracle, SetOracle};
use tdiam::poly::{PolynomialMap, SparsePolynomial, C64};

fn cmap(components: Vec<Vec<(Vec<u32>, f64)>>) -> PolynomialMap<C64> {
    let n = components.len();
    PolynomialMap::new(components.into_iter().map(|terms| {
        SparsePolynomial::from_exponents(n, terms.into_iter().map(|(e, c)| (e, Complex64::new(c, 0.0)))).unwrap()
    }).collect()).unwrap()
}

fn main() {
    let t0 = std::time::Instant::now();
    let budget = Budget { candidate_count: 2048, rounds: 800, restarts: 4 };
    let e: Arc<dyn SetOracle> = Arc::new(PolydiscOracle::unit(2));

    // Criterion 5 instance 1: F = (z1^2 + z2^2, z1 z2), Res = 1.
    let f1 = cmap(vec![vec![(vec![2,0],1.0),(vec![0,2],1.0)], vec![(vec![1,1],1.0)]]);
    let r = pullback_check(&f1, Some(0.0), e.clone(), 8, &budget, 31).unwrap();
    println!("inst1: lhs={:.4} rhs={:.4} gap_log={:.4} lhs<=rhs+eps: {} ({:?})",
        r.lhs, r.rhs, r.gap_log, r.lhs <= r.rhs + 1e-6, t0.elapsed());

    // Criterion 5 instance 2: F = (2 z1^2, z2^2), Res = 4, true preimage polydisc (2^-1/2, 1).
    let f2 = cmap(vec![vec![(vec![2,0],2.0)], vec![(vec![0,2],1.0)]]);
    let r2 = pullback_check(&f2, Some(4f64.ln()), e.clone(), 8, &budget, 32).unwrap();
    println!("inst2: lhs={:.4} (target 0.8409) rhs={:.4} gap_log={:.4} |log(lhs/0.8409)|={:.4}",
        r2.lhs, r2.rhs, r2.gap_log, (r2.lhs / 0.8409f64).ln().abs());

    // Criterion 6: F = (z1^2+z2^2+z1+1, z1 z2 - 3) vs its leading part.
    let f3 = cmap(vec![
        vec![(vec![2,0],1.0),(vec![0,2],1.0),(vec![1,0],1.0),(vec![0,0],1.0)],
        vec![(vec![1,1],1.0),(vec![0,0],-3.0)]]);
    let r3 = pullback_check(&f3, Some(0.0), e.clone(), 8, &budget, 33).unwrap();
    println!("inst3 (leading-part): lhs={:.4} lhs_leading={:.4} leading_gap_log={:.4}", r3.lhs, r3.lhs_leading, r3.leading_gap_log);

    // Criterion 7 N=1: F(z) = 2z^2 filled julia, n_max = 14.
    let f4 = cmap(vec![vec![(vec![2], 2.0)]]);
    let params = EscapeParameters::derive(&f4, 1024, 3).unwrap();
    println!("escape radius for 2z^2: {}", params.escape_radius);
    let oracle = filled_julia_oracle(f4, params).unwrap();
    let seq = diam_sequence(&oracle, 14, &Budget{candidate_count: 2048, rounds: 800, restarts: 4}, 35).unwrap();
    println!("julia N=1 d_14={:.4} (prediction 0.5, true K=disc(1/2) d_14=0.6067)", seq.d_infinity_proxy);

    // Criterion 7 N=2: F = (z1^2, z2^2), n=6.
    let f5 = cmap(vec![vec![(vec![2,0],1.0)], vec![(vec![0,2],1.0)]]);
    let params5 = EscapeParameters::derive(&f5, 1024, 3).unwrap();
    let oracle5 = filled_julia_oracle(f5, params5).unwrap();
    let seq5 = diam_sequence(&oracle5, 6, &Budget{candidate_count: 2048, rounds: 800, restarts: 4}, 36).unwrap();
    println!("julia N=2 d_6={:.4} (prediction 1)", seq5.d_infinity_proxy);
    println!("total {:?}", t0.elapsed());
}
