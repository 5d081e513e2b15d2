use num_bigint::BigUint;
use proptest::prelude::*;

use densesat_core::engine::intersect_counted;
use densesat_core::{
    brute_force_count, count_models, filter_clauses, intersect, Clause, EngineConfig, Formula, Lit,
    OracleLimit,
};

/// A clause over `1..=n` as a sign per variable: None, Some(false), Some(true).
fn clause_strategy(n: u32) -> impl Strategy<Value = Clause> {
    proptest::collection::vec(proptest::option::of(any::<bool>()), n as usize).prop_map(|signs| {
        Clause::new(
            signs
                .into_iter()
                .enumerate()
                .filter_map(|(i, s)| s.map(|p| Lit::from_var(i as u32 + 1, p))),
        )
        .unwrap()
    })
}

fn formula_strategy(max_n: u32, max_m: usize) -> impl Strategy<Value = Formula> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(clause_strategy(n), 0..=max_m)
            .prop_map(move |clauses| Formula::new(n, clauses).unwrap())
    })
}

fn count(f: &Formula) -> BigUint {
    count_models(f, &EngineConfig::default()).unwrap().solutions
}

fn oracle(f: &Formula) -> BigUint {
    brute_force_count(f, OracleLimit::default()).unwrap()
}

/// Literals examined by a sorted merge, from set arithmetic: one step per
/// distinct variable of the union up to the first clashing variable, or up
/// to the point where either clause runs out.
fn expected_scan(c: &Clause, d: &Clause) -> (bool, u64) {
    use std::collections::BTreeSet;
    let clash = c.iter().filter(|l| d.contains(-**l)).map(|l| l.var()).min();
    let stop = match clash {
        Some(v) => v,
        None => c.max_var().min(d.max_var()),
    };
    let union: BTreeSet<u32> = c.iter().chain(d.iter()).map(|l| l.var()).collect();
    let steps = if c.is_empty() || d.is_empty() {
        0
    } else {
        union.range(..=stop).count() as u64
    };
    (clash.is_some(), steps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn engine_matches_truth_table(f in formula_strategy(10, 14)) {
        prop_assert_eq!(count(&f), oracle(&f));
    }

    #[test]
    fn clause_order_does_not_matter(f in formula_strategy(8, 10), seed in any::<u64>()) {
        let mut clauses = f.clauses().to_vec();
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..clauses.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            clauses.swap(i, (s >> 33) as usize % (i + 1));
        }
        let g = Formula::new(f.num_vars(), clauses).unwrap();
        prop_assert_eq!(count(&f), count(&g));
    }

    #[test]
    fn adding_a_clause_never_adds_models(
        (f, c) in (1u32..=9).prop_flat_map(|n| (
            proptest::collection::vec(clause_strategy(n), 0..8)
                .prop_map(move |cl| Formula::new(n, cl).unwrap()),
            clause_strategy(n),
        ))
    ) {
        let g = f.with_clause(c).unwrap();
        prop_assert!(count(&g) <= count(&f));
    }

    /// Models of K split into those satisfying an extra clause c and those
    /// satisfying the unit clauses of not-c.
    #[test]
    fn complement_split(
        (f, c) in (1u32..=9).prop_flat_map(|n| (
            proptest::collection::vec(clause_strategy(n), 0..8)
                .prop_map(move |cl| Formula::new(n, cl).unwrap()),
            clause_strategy(n),
        ))
    ) {
        let with_c = f.with_clause(c.clone()).unwrap();
        let mut negated = f.clone();
        for &lit in &c {
            negated = negated.with_clause(Clause::new([-lit]).unwrap()).unwrap();
        }
        prop_assert_eq!(count(&f), count(&with_c) + count(&negated));
    }

    #[test]
    fn duplicated_clauses_are_harmless(f in formula_strategy(8, 8)) {
        let mut clauses = f.clauses().to_vec();
        clauses.extend(f.clauses().iter().cloned());
        let g = Formula::new(f.num_vars(), clauses).unwrap();
        prop_assert_eq!(count(&f), count(&g));
    }

    /// Fixing a variable both ways partitions the models.
    #[test]
    fn residual_counts_partition(f in formula_strategy(9, 10), pick in any::<u32>()) {
        let n = f.num_vars();
        let var = pick % n + 1;
        let half = |positive: bool| match filter_clauses(&f, Lit::from_var(var, positive)) {
            Some(r) => densesat_core::count_clauses(r.clauses(), n - 1, &EngineConfig::default())
                .unwrap()
                .solutions,
            None => BigUint::from(0u8),
        };
        prop_assert_eq!(half(false) + half(true), count(&f));
    }

    /// An assignment falsifies both clauses iff it falsifies their intersection.
    #[test]
    fn intersection_is_pattern_conjunction(
        (c, d, bits) in (1u32..=8).prop_flat_map(|n| (
            clause_strategy(n), clause_strategy(n), proptest::collection::vec(any::<bool>(), n as usize)
        ))
    ) {
        let falsified = |p: &Clause| !p.is_satisfied_by(&bits);
        let both = falsified(&c) && falsified(&d);
        match intersect(&c, &d) {
            Some(p) => prop_assert_eq!(falsified(&p), both),
            None => prop_assert!(!both),
        }
        prop_assert_eq!(intersect(&c, &d), intersect(&d, &c));
        prop_assert_eq!(intersect(&c, &c), Some(c.clone()));
    }

    #[test]
    fn merge_stops_at_first_clash(
        (c, d) in (1u32..=30).prop_flat_map(|n| (clause_strategy(n), clause_strategy(n)))
    ) {
        let merge = intersect_counted(&c, &d);
        let (clash, steps) = expected_scan(&c, &d);
        prop_assert_eq!(merge.pattern.is_none(), clash);
        prop_assert_eq!(merge.scans, steps);
    }
}

#[test]
fn store_cap_matches_unbounded_run() {
    let f = Formula::from_dimacs(4, &[&[1, 2], &[2, 3], &[3, 4], &[-1, 4]]).unwrap();
    let full = count_models(&f, &EngineConfig::default().with_stats()).unwrap();
    let size = full.stats.unwrap().pattern_store_size;
    let capped = count_models(&f, &EngineConfig::default().with_max_patterns(size)).unwrap();
    assert_eq!(capped.solutions, full.solutions);
    assert!(count_models(&f, &EngineConfig::default().with_max_patterns(size - 1)).is_err());
}
