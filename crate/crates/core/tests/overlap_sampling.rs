//! Exact overlap probabilities against the empirical rate of random clause
//! pairs.

use densesat_core::combinatorics::to_f64;
use densesat_core::{intersect, p_overlap, random_instance, ClauseWidth, GenSpec, OverlapQuery};

fn empirical_rate(n: u32, k: u32, pairs: usize, seed: u64) -> f64 {
    let f = random_instance(&GenSpec {
        num_vars: n,
        num_clauses: 2 * pairs,
        width: ClauseWidth::Literals(k),
        seed,
    })
    .unwrap();
    let hits = f
        .clauses()
        .chunks(2)
        .filter(|p| intersect(&p[0], &p[1]).is_some())
        .count();
    hits as f64 / pairs as f64
}

#[test]
fn sampled_rate_matches_exact_probability() {
    let pairs = 1_000_000;
    for (n, k, seed) in [(10u32, 9u32, 1u64), (40, 12, 2), (200, 50, 3)] {
        let p = to_f64(&p_overlap(&OverlapQuery::new(n, k, k)).unwrap());
        let rate = empirical_rate(n, k, pairs, seed);
        let sigma = (p * (1.0 - p) / pairs as f64).sqrt();
        assert!(
            (rate - p).abs() <= 5.0 * sigma + 1e-12,
            "n={n} k={k}: sampled {rate}, exact {p}"
        );
    }
}
