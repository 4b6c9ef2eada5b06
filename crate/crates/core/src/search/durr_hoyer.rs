use std::cmp::Ordering;

use rand::Rng;
use serde::Serialize;

/// Result of one Dürr–Høyer run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimumSearch {
    pub index: usize,
    pub queries_used: u64,
    /// Every threshold held, starting with the random initial one.
    pub threshold_history: Vec<usize>,
}

/// Query budget `22.5 sqrt(p) + 1.4 log2(p)^2`.
pub fn durr_hoyer_budget(p: usize) -> f64 {
    let p = p as f64;
    22.5 * p.sqrt() + 1.4 * p.log2().powi(2)
}

/// Growth factor of the unknown-count Grover search.
const LAMBDA: f64 = 6.0 / 5.0;

/// `(value, index)` order: ties go to the lower index.
fn below(values: &[f64], j: usize, y: usize) -> bool {
    match values[j].total_cmp(&values[y]) {
        Ordering::Less => true,
        Ordering::Equal => j < y,
        Ordering::Greater => false,
    }
}

/// Measurement after `k` Grover iterations on the uniform superposition
/// over `p` items with `marked` of them marked: an item is marked with
/// probability `sin²((2k+1)θ)`, `sin²θ = marked/p`, uniform within each class.
fn grover_sample<R: Rng + ?Sized>(
    marked: &[usize],
    unmarked: &[usize],
    k: u64,
    rng: &mut R,
) -> usize {
    let p = (marked.len() + unmarked.len()) as f64;
    let theta = (marked.len() as f64 / p).sqrt().asin();
    let success = ((2 * k + 1) as f64 * theta).sin().powi(2);
    let pick_marked = !marked.is_empty() && (unmarked.is_empty() || rng.random::<f64>() < success);
    let class = if pick_marked { marked } else { unmarked };
    class[rng.random_range(0..class.len())]
}

/// Quantum minimum finding over `values`, simulated exactly.
///
/// Starting from a uniformly random threshold, each round runs the
/// exponential Grover search for an item below the threshold. An attempt
/// with `k` iterations costs `k + 1` queries (the iterations plus checking
/// the measured item). The loop stops before the total would pass
/// [`durr_hoyer_budget`], so the budget is never exceeded.
pub fn durr_hoyer_min<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> MinimumSearch {
    let p = values.len();
    assert!(p > 0, "minimum finding needs at least one value");
    if p == 1 {
        return MinimumSearch {
            index: 0,
            queries_used: 0,
            threshold_history: vec![0],
        };
    }
    let budget = durr_hoyer_budget(p);
    let mut y = rng.random_range(0..p);
    let mut history = vec![y];
    let mut used = 0u64;
    'rounds: loop {
        let (marked, unmarked): (Vec<usize>, Vec<usize>) =
            (0..p).partition(|&j| below(values, j, y));
        let mut m = 1.0f64;
        loop {
            let k = rng.random_range(0..m.ceil() as u64);
            if (used + k + 1) as f64 > budget {
                break 'rounds;
            }
            used += k + 1;
            let j = grover_sample(&marked, &unmarked, k, rng);
            if below(values, j, y) {
                y = j;
                history.push(j);
                continue 'rounds;
            }
            m = (LAMBDA * m).min((p as f64).sqrt());
        }
    }
    debug_assert!(used as f64 <= budget);
    MinimumSearch {
        index: y,
        queries_used: used,
        threshold_history: history,
    }
}
