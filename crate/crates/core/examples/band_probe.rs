use tdiam::fekete::{dn_estimate, greedy_leja, Budget, PolydiscOracle, BallOracle};

fn main() {
    let poly = PolydiscOracle::unit(2);
    // greedy only, various pools
    for k in [256usize, 1024, 4096] {
        let c = greedy_leja(&poly, 6, k, 11).unwrap();
        println!("polydisc n=6 greedy-only pool={} d_6={:.4}", k, c.dn_value);
    }
    let c = greedy_leja(&poly, 1, 4096, 11).unwrap();
    println!("polydisc n=1 greedy-only d_1={:.4} (DFT certificate: 2.2795)", c.dn_value);
    let c = dn_estimate(&poly, 1, &Budget{candidate_count: 4096, rounds: 2000, restarts: 4}, 11).unwrap();
    println!("polydisc n=1 optimized d_1={:.4}", c.dn_value);

    let ball = BallOracle::unit(2);
    let c = greedy_leja(&ball, 10, 4096, 2024).unwrap();
    println!("ball n=10 greedy-only d_10={:.4}", c.dn_value);

    // polydisc n=8 (criterion 5 scale)
    let c = dn_estimate(&poly, 8, &Budget{candidate_count: 2048, rounds: 1200, restarts: 4}, 5).unwrap();
    println!("polydisc n=8 optimized d_8={:.4}", c.dn_value);
}
