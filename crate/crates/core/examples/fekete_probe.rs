use std::time::Instant;
use tdiam::fekete::{diam_sequence, dn_estimate, BallOracle, Budget, PolydiscOracle};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    if which == "disc" || which == "all" {
        // Unit disc in C^1: true d_n = (n+1)^{1/n}.
        let oracle = BallOracle::unit(1);
        let budget = Budget { candidate_count: 1024, rounds: 600, restarts: 4 };
        let t0 = Instant::now();
        for n in 1..=8 {
            let c = dn_estimate(&oracle, n, &budget, 42).unwrap();
            let truth = ((n + 1) as f64).powf(1.0 / n as f64);
            println!("disc n={} d_n={:.6} truth={:.6} ratio={:.4}", n, c.dn_value, truth, c.dn_value / truth);
        }
        println!("disc elapsed {:?}", t0.elapsed());
    }

    if which == "poly6" || which == "all" {
        // Unit polydisc N=2 at n=6: spec band wants [0.93..0.95, 1.0].
        for (rounds, restarts) in [(400usize, 4usize), (1000, 4), (2000, 8)] {
            let oracle = PolydiscOracle::unit(2);
            let budget = Budget { candidate_count: 2048, rounds, restarts };
            let t0 = Instant::now();
            for n in [4u32, 6] {
                let c = dn_estimate(&oracle, n, &budget, 7).unwrap();
                println!("polydisc n={} rounds={} restarts={} d_n={:.6} ({:?})", n, rounds, restarts, c.dn_value, t0.elapsed());
            }
        }
    }

    if which == "ball10" || which == "all" {
        // B^2 at n=10 with the pinned budget: band [0.74, 0.7789].
        let oracle = BallOracle::unit(2);
        let budget = Budget { candidate_count: 4096, rounds: 2000, restarts: 8 };
        let t0 = Instant::now();
        let c = dn_estimate(&oracle, 10, &budget, 2024).unwrap();
        println!("ball n=10 d_n={:.6} target exp(-1/4)={:.6} elapsed {:?}", c.dn_value, (-0.25f64).exp(), t0.elapsed());
    }

    if which == "seq" {
        let oracle = PolydiscOracle::unit(2);
        let budget = Budget { candidate_count: 2048, rounds: 800, restarts: 4 };
        let seq = diam_sequence(&oracle, 6, &budget, 3).unwrap();
        print!("{}", seq.to_csv());
    }
}
