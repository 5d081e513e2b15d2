//! Exact model counting by inclusion-exclusion over unsatisfiability patterns.
//!
//! Each clause `k` with `j` literals over `n` variables is falsified by exactly
//! `2^(n-j)` assignments. The number of assignments falsifying at least one
//! clause is the size of the union of those sets, computed here with the
//! inclusion-exclusion principle. Intersections of patterns are sorted merges
//! that come back empty as soon as a variable appears with opposite signs, and
//! an empty intersection is never extended further. For dense clauses almost
//! every intersection is empty, which keeps the pattern store close to `m`.
//!
//! Clauses are processed in input order. Clause `i` is intersected with every
//! signed pattern stored while processing clauses `1..i`; the clause itself is
//! stored with sign `-` and every non-empty intersection with the contrary of
//! its partner's sign. Once a clause is fully processed, reaching `2^n`
//! unsatisfied variations ends the run with zero models.

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{
    Clause, Formula, Lit, ModelCount, Pattern, RunStats, Sign, SignedPattern, Verdict,
};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineConfig {
    /// Upper bound on the number of stored signed patterns. `None` is unbounded.
    pub max_pattern_store: Option<usize>,
    /// Attach [`RunStats`] to the result.
    pub collect_stats: bool,
}

impl EngineConfig {
    pub fn with_stats(mut self) -> Self {
        self.collect_stats = true;
        self
    }

    pub fn with_max_patterns(mut self, limit: usize) -> Self {
        self.max_pattern_store = Some(limit);
        self
    }
}

/// Outcome of one merge of two sorted patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merge {
    /// `None` when the patterns contain complementary literals.
    pub pattern: Option<Pattern>,
    /// Merge steps taken before the result was known.
    pub scans: u64,
}

/// Walks both patterns in variable order, stopping at the first variable
/// with opposite signs. Returns whether such a variable was found together
/// with the number of steps taken, counting the conflicting step.
#[inline]
fn scan_for_conflict(c: &[Lit], d: &[Lit]) -> (bool, u64) {
    let (mut i, mut j, mut steps) = (0usize, 0usize, 0u64);
    while i < c.len() && j < d.len() {
        steps += 1;
        let (a, b) = (c[i], d[j]);
        let (va, vb) = (a.var(), b.var());
        if va == vb {
            if a != b {
                return (true, steps);
            }
            i += 1;
            j += 1;
        } else if va < vb {
            i += 1;
        } else {
            j += 1;
        }
    }
    (false, steps)
}

/// Sorted union of two patterns known to be free of complementary pairs.
fn merge_compatible(c: &[Lit], d: &[Lit]) -> Vec<Lit> {
    let mut out = Vec::with_capacity(c.len() + d.len());
    let (mut i, mut j) = (0, 0);
    while i < c.len() && j < d.len() {
        let (a, b) = (c[i], d[j]);
        match a.var().cmp(&b.var()) {
            std::cmp::Ordering::Equal => {
                out.push(a);
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                out.push(a);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b);
                j += 1;
            }
        }
    }
    out.extend_from_slice(&c[i..]);
    out.extend_from_slice(&d[j..]);
    out
}

/// Intersection of two patterns, with the number of merge steps it took.
pub fn intersect_counted(c: &Pattern, d: &Pattern) -> Merge {
    let (conflict, scans) = scan_for_conflict(c.lits(), d.lits());
    let pattern = if conflict {
        None
    } else {
        Some(Clause::from_sorted_unchecked(merge_compatible(
            c.lits(),
            d.lits(),
        )))
    };
    Merge { pattern, scans }
}

/// Intersection of the assignment sets described by two patterns: the sorted
/// union of their literals, or `None` if some variable has opposite signs.
pub fn intersect(c: &Pattern, d: &Pattern) -> Option<Pattern> {
    intersect_counted(c, d).pattern
}

/// Number of assignments over `num_vars` variables matching `pattern`: `2^(n - |p|)`.
pub fn cardinality(pattern: &Pattern, num_vars: u32) -> Result<BigUint> {
    if pattern.len() > num_vars as usize {
        return Err(Error::PatternTooLong {
            len: pattern.len(),
            num_vars,
        });
    }
    Ok(BigUint::one() << (num_vars as usize - pattern.len()))
}

#[inline]
fn pow2(exp: usize) -> BigInt {
    BigInt::from_biguint(BigSign::Plus, BigUint::one() << exp)
}

/// Running inclusion-exclusion state: the unsatisfied-variation counter and
/// the append-only store of signed patterns.
#[derive(Debug, Clone)]
pub struct CountAccumulator {
    num_vars: u32,
    all_variations: BigInt,
    unsat: BigInt,
    store: Vec<SignedPattern>,
    limit: Option<usize>,
    stats: RunStats,
}

impl CountAccumulator {
    pub fn new(num_vars: u32, max_pattern_store: Option<usize>) -> CountAccumulator {
        CountAccumulator {
            num_vars,
            all_variations: pow2(num_vars as usize),
            unsat: BigInt::zero(),
            store: Vec::new(),
            limit: max_pattern_store,
            stats: RunStats::default(),
        }
    }

    /// Processes one more clause. Returns `true` when every variation is now
    /// unsatisfied, i.e. the clauses seen so far are unsatisfiable.
    pub fn add_clause(&mut self, clause: &Clause) -> Result<bool> {
        let n = self.num_vars as usize;
        if clause.len() > n {
            return Err(Error::PatternTooLong {
                len: clause.len(),
                num_vars: self.num_vars,
            });
        }
        let clause_index = self.stats.clauses_processed + 1;
        let limit = self.limit.unwrap_or(usize::MAX);

        self.unsat += pow2(n - clause.len());
        let mut fresh = vec![SignedPattern {
            sign: Sign::Minus,
            pattern: clause.clone(),
        }];
        if self.store.len() + fresh.len() > limit {
            return Err(Error::PatternStoreExceeded {
                clause_index,
                limit,
            });
        }

        let stats = &mut self.stats;
        for stored in &self.store {
            let (conflict, scans) = scan_for_conflict(clause.lits(), stored.pattern.lits());
            stats.merges_attempted += 1;
            stats.merge_literal_scans += scans;
            if conflict {
                stats.disjoint_merges += 1;
                stats.disjoint_merge_scans += scans;
                continue;
            }
            let merged = Clause::from_sorted_unchecked(merge_compatible(
                clause.lits(),
                stored.pattern.lits(),
            ));
            let size = pow2(n - merged.len());
            match stored.sign {
                Sign::Plus => self.unsat += size,
                Sign::Minus => self.unsat -= size,
            }
            fresh.push(SignedPattern {
                sign: stored.sign.contrary(),
                pattern: merged,
            });
            if self.store.len() + fresh.len() > limit {
                return Err(Error::PatternStoreExceeded {
                    clause_index,
                    limit,
                });
            }
        }

        self.store.append(&mut fresh);
        self.stats.clauses_processed = clause_index;
        self.stats.pattern_store_size = self.store.len();
        self.stats.overlap_count = self.store.len() - clause_index;
        Ok(self.is_exhausted())
    }

    /// All `2^n` variations are unsatisfied.
    pub fn is_exhausted(&self) -> bool {
        self.unsat == self.all_variations
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Current value of the unsatisfied-variation counter.
    pub fn unsat_variations(&self) -> BigInt {
        self.unsat.clone()
    }

    /// `2^n` minus the current counter.
    pub fn solutions(&self) -> BigInt {
        &self.all_variations - &self.unsat
    }

    pub fn store(&self) -> &[SignedPattern] {
        &self.store
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }
}

/// Counts models of `clauses` over a universe of `num_vars` free variables.
///
/// Only the number of variables matters: variable indices may exceed
/// `num_vars` (residual formulas keep their original numbering) as long as
/// the clauses mention no more than `num_vars` distinct variables.
pub fn count_clauses(
    clauses: &[Clause],
    num_vars: u32,
    config: &EngineConfig,
) -> Result<ModelCount> {
    if let Some(limit) = config.max_pattern_store {
        if limit < clauses.len() {
            return Err(Error::InvalidConfig(format!(
                "max_pattern_store {limit} is smaller than the {} clauses",
                clauses.len()
            )));
        }
    }
    let mut acc = CountAccumulator::new(num_vars, config.max_pattern_store);
    for clause in clauses {
        if acc.add_clause(clause)? {
            acc.stats.early_terminated = true;
            acc.stats.terminated_at_clause = Some(acc.stats.clauses_processed);
            break;
        }
    }
    let solutions = acc.solutions();
    let unsat = acc.unsat_variations();
    let to_unsigned = |v: BigInt| {
        v.to_biguint()
            .expect("inclusion-exclusion total is within [0, 2^n]")
    };
    let solutions = if acc.stats.early_terminated {
        BigUint::zero()
    } else {
        to_unsigned(solutions)
    };
    Ok(ModelCount {
        verdict: Verdict::from_count(&solutions),
        solutions,
        unsat_variations: to_unsigned(unsat),
        stats: config.collect_stats.then_some(acc.stats),
    })
}

/// Exact number of models of `formula`.
pub fn count_models(formula: &Formula, config: &EngineConfig) -> Result<ModelCount> {
    count_clauses(formula.clauses(), formula.num_vars(), config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[i32]) -> Clause {
        Clause::from_dimacs(v).unwrap()
    }

    fn k1() -> Formula {
        Formula::from_dimacs(3, &[&[-1, 2], &[2, 3], &[-2, -3], &[1, -2, 3]]).unwrap()
    }

    fn k2() -> Formula {
        let mut clauses: Vec<&[i32]> = vec![&[-1, 2], &[2, 3], &[-2, -3], &[1, -2, 3]];
        clauses.push(&[1, 2]);
        clauses.push(&[-1, -2]);
        Formula::from_dimacs(3, &clauses).unwrap()
    }

    #[test]
    fn intersect_overlapping() {
        assert_eq!(intersect(&c(&[-1, 2]), &c(&[2, 3])), Some(c(&[-1, 2, 3])));
    }

    #[test]
    fn intersect_disjoint() {
        assert_eq!(intersect(&c(&[-1, 2]), &c(&[-2, -3])), None);
    }

    #[test]
    fn intersect_idempotent_and_empty() {
        let p = c(&[-4, 5, 9]);
        assert_eq!(intersect(&p, &p), Some(p.clone()));
        assert_eq!(intersect(&p, &Clause::empty()), Some(p.clone()));
    }

    #[test]
    fn intersect_stops_at_first_conflict() {
        // conflict on variable 1 is found on the first step
        let m = intersect_counted(&c(&[1, 2, 3, 4]), &c(&[-1, 2, 3, 4]));
        assert_eq!(
            m,
            Merge {
                pattern: None,
                scans: 1
            }
        );
        let m = intersect_counted(&c(&[1, 3, 5]), &c(&[2, -3, 4]));
        assert_eq!(m.scans, 3);
    }

    #[test]
    fn cardinality_values() {
        assert_eq!(cardinality(&c(&[-1, 2]), 3).unwrap(), BigUint::from(2u8));
        assert_eq!(cardinality(&c(&[-1, 2, 3]), 3).unwrap(), BigUint::from(1u8));
        assert_eq!(
            cardinality(&Clause::empty(), 5).unwrap(),
            BigUint::from(32u8)
        );
        assert_eq!(
            cardinality(&c(&[1, 2, 3]), 2),
            Err(Error::PatternTooLong {
                len: 3,
                num_vars: 2
            })
        );
    }

    #[test]
    fn worked_example_counts() {
        let cfg = EngineConfig::default().with_stats();
        let r1 = count_models(&k1(), &cfg).unwrap();
        assert_eq!(r1.solutions, BigUint::from(2u8));
        assert_eq!(r1.verdict, Verdict::Sat);
        assert_eq!(r1.unsat_variations, BigUint::from(6u8));
        let s1 = r1.stats.unwrap();
        // P12 is the only overlap among k1..k4
        assert_eq!(s1.overlap_count, 1);
        assert!(!s1.early_terminated);

        let r2 = count_models(&k2(), &cfg).unwrap();
        assert_eq!(r2.solutions, BigUint::zero());
        assert_eq!(r2.verdict, Verdict::Unsat);
        assert_eq!(r2.unsat_variations, BigUint::from(8u8));
        let s2 = r2.stats.unwrap();
        assert!(s2.early_terminated);
        assert_eq!(s2.terminated_at_clause, Some(6));
        // P12, P25 and P36
        assert_eq!(s2.overlap_count, 3);
    }

    #[test]
    fn accumulator_tracks_worked_example_partial_sums() {
        let mut acc = CountAccumulator::new(3, None);
        let expected = [2, 3, 5, 6, 7, 8];
        for (clause, want) in k2().clauses().iter().zip(expected) {
            acc.add_clause(clause).unwrap();
            assert_eq!(acc.unsat_variations(), BigInt::from(want));
        }
        assert!(acc.is_exhausted());
    }

    #[test]
    fn empty_formula_and_empty_clause() {
        let cfg = EngineConfig::default();
        let r = count_models(&Formula::empty(4), &cfg).unwrap();
        assert_eq!(r.solutions, BigUint::from(16u8));
        assert_eq!(r.verdict, Verdict::Sat);

        let r = count_models(&Formula::empty(0), &cfg).unwrap();
        assert_eq!(r.solutions, BigUint::one());
        assert_eq!(r.verdict, Verdict::Unique);

        let f = Formula::new(3, vec![c(&[1]), Clause::empty(), c(&[2])]).unwrap();
        let r = count_models(&f, &cfg.clone().with_stats()).unwrap();
        assert_eq!(r.verdict, Verdict::Unsat);
        assert_eq!(r.stats.unwrap().terminated_at_clause, Some(2));
    }

    #[test]
    fn duplicate_clause_does_not_change_count() {
        let cfg = EngineConfig::default();
        let f = k1();
        let g = f.with_clause(c(&[2, 3])).unwrap();
        assert_eq!(
            count_models(&f, &cfg).unwrap().solutions,
            count_models(&g, &cfg).unwrap().solutions
        );
    }

    #[test]
    fn pattern_store_limit() {
        let f = Formula::from_dimacs(4, &[&[1], &[2], &[3]]).unwrap();
        // full store: 3 clauses + 3 pairs + 1 triple
        let r = count_models(&f, &EngineConfig::default().with_stats()).unwrap();
        assert_eq!(r.stats.unwrap().pattern_store_size, 7);
        let err = count_models(&f, &EngineConfig::default().with_max_patterns(6)).unwrap_err();
        assert_eq!(
            err,
            Error::PatternStoreExceeded {
                clause_index: 3,
                limit: 6
            }
        );
        let err = count_models(&f, &EngineConfig::default().with_max_patterns(2)).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn huge_variable_counts_stay_exact() {
        let f = Formula::from_dimacs(20_000, &[&[1, 2], &[-1, 3]]).unwrap();
        let r = count_models(&f, &EngineConfig::default()).unwrap();
        // 2^n - 2^(n-2) - 2^(n-2)
        let expected = (BigUint::one() << 20_000usize) - (BigUint::one() << 19_999usize);
        assert_eq!(r.solutions, expected);
    }
}
