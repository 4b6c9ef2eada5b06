//! Quantum minimum finding over random values: success rate and query use
//! against the budget `22.5 √p + 1.4 log2(p)²`.

use quantum_tikhonov::search::{durr_hoyer_budget, durr_hoyer_min};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!(
        "{:>5} {:>8} {:>10} {:>12}",
        "p", "budget", "success", "mean queries"
    );
    for p in [4, 16, 64, 256, 1024] {
        let runs = 200;
        let (mut hits, mut queries) = (0, 0u64);
        for _ in 0..runs {
            let values: Vec<f64> = (0..p).map(|_| rng.random()).collect();
            let truth = (0..p)
                .min_by(|&i, &j| values[i].total_cmp(&values[j]))
                .unwrap();
            let found = durr_hoyer_min(&values, &mut rng);
            hits += usize::from(found.index == truth);
            queries += found.queries_used;
        }
        println!(
            "{p:>5} {:>8.1} {:>9.1}% {:>12.1}",
            durr_hoyer_budget(p),
            100.0 * hits as f64 / runs as f64,
            queries as f64 / runs as f64
        );
    }
    let values = [3.0, 1.0, 2.0];
    let found = durr_hoyer_min(&values, &mut rng);
    println!(
        "\n(3, 1, 2): index {} after thresholds {:?}",
        found.index, found.threshold_history
    );
}
