//! Core domain types: literals, clauses (which double as unsatisfiability
//! patterns), formulas, assignments and model counts.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A signed literal in DIMACS encoding: `v > 0` asserts variable `v`,
/// `v < 0` asserts its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct Lit(i32);

impl Lit {
    pub fn new(value: i32) -> Result<Lit> {
        if value == 0 || value == i32::MIN {
            return Err(Error::InvalidLiteral(value));
        }
        Ok(Lit(value))
    }

    /// Literal of `var` with the given polarity. `var` must be in `1..=i32::MAX`.
    pub fn from_var(var: u32, positive: bool) -> Lit {
        assert!(
            var >= 1 && var <= i32::MAX as u32,
            "variable index out of range"
        );
        let v = var as i32;
        Lit(if positive { v } else { -v })
    }

    #[inline]
    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    #[inline]
    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    /// Whether the literal is true under `value` for its variable.
    #[inline]
    pub fn satisfied_by(self, value: bool) -> bool {
        self.is_positive() == value
    }
}

impl std::ops::Neg for Lit {
    type Output = Lit;

    #[inline]
    fn neg(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A disjunctive clause: literals strictly increasing by variable index,
/// no variable repeated.
///
/// The same value also serves as the clause's unsatisfiability pattern. The
/// pattern of `x̄1 ∨ x2` is the set of assignments with `x1 = 1, x2 = 0`;
/// cardinality and intersection behave identically whether computed on the
/// clause or on its complement, so no conversion is performed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

/// Unsatisfiability pattern of a clause. See [`Clause`].
pub type Pattern = Clause;

impl Clause {
    /// Builds a clause from an arbitrary literal multiset. Identical literals
    /// are merged; complementary literals are rejected.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<Clause> {
        Clause::normalize(lits).map(|(clause, _)| clause)
    }

    /// Like [`Clause::new`], also returning how many duplicate literals were dropped.
    pub fn normalize(lits: impl IntoIterator<Item = Lit>) -> Result<(Clause, usize)> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable_by_key(|l| (l.var(), l.to_dimacs()));
        let before = lits.len();
        lits.dedup();
        let removed = before - lits.len();
        if let Some(w) = lits.windows(2).find(|w| w[0].var() == w[1].var()) {
            return Err(Error::ComplementaryLiterals(w[0].var()));
        }
        Ok((Clause { lits }, removed))
    }

    /// Convenience constructor from DIMACS integers.
    pub fn from_dimacs(values: &[i32]) -> Result<Clause> {
        let lits = values
            .iter()
            .map(|&v| Lit::new(v))
            .collect::<Result<Vec<_>>>()?;
        Clause::new(lits)
    }

    /// Wraps literals the caller guarantees are strictly increasing by variable.
    pub(crate) fn from_sorted_unchecked(lits: Vec<Lit>) -> Clause {
        debug_assert!(lits.windows(2).all(|w| w[0].var() < w[1].var()));
        Clause { lits }
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    #[inline]
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.lits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.lits.last().map_or(0, |l| l.var())
    }

    /// Polarity of `var` in this clause, if it occurs.
    pub fn polarity(&self, var: u32) -> Option<bool> {
        self.lits
            .binary_search_by_key(&var, |l| l.var())
            .ok()
            .map(|i| self.lits[i].is_positive())
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.polarity(lit.var()) == Some(lit.is_positive())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Lit> {
        self.lits.iter()
    }

    /// True iff some literal is satisfied by `assignment` (index 0 is variable 1).
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.lits
            .iter()
            .any(|l| l.satisfied_by(assignment[l.var() as usize - 1]))
    }
}

impl<'a> IntoIterator for &'a Clause {
    type Item = &'a Lit;
    type IntoIter = std::slice::Iter<'a, Lit>;

    fn into_iter(self) -> Self::IntoIter {
        self.lits.iter()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{lit}")?;
        }
        f.write_str("]")
    }
}

/// Inclusion-exclusion sign attached to a stored pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn contrary(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPattern {
    pub sign: Sign,
    pub pattern: Pattern,
}

/// A CNF formula over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Formula> {
        for clause in &clauses {
            if let Some(lit) = clause.lits().iter().find(|l| l.var() > num_vars) {
                return Err(Error::VariableOutOfRange {
                    literal: lit.to_dimacs(),
                    num_vars,
                });
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    pub fn empty(num_vars: u32) -> Formula {
        Formula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    /// Builds a formula from DIMACS-encoded clauses.
    pub fn from_dimacs(num_vars: u32, clauses: &[&[i32]]) -> Result<Formula> {
        let clauses = clauses
            .iter()
            .map(|c| Clause::from_dimacs(c))
            .collect::<Result<Vec<_>>>()?;
        Formula::new(num_vars, clauses)
    }

    #[inline]
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of clauses.
    #[inline]
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// A copy of this formula with `clause` appended.
    pub fn with_clause(&self, clause: Clause) -> Result<Formula> {
        let mut clauses = self.clauses.clone();
        clauses.push(clause);
        Formula::new(self.num_vars, clauses)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {{", self.num_vars)?;
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{clause}")?;
        }
        f.write_str("}")
    }
}

/// True iff every clause has a literal satisfied by `assignment`.
/// `assignment[i]` is the value of variable `i + 1`.
pub fn evaluate(formula: &Formula, assignment: &[bool]) -> Result<bool> {
    if assignment.len() != formula.num_vars() as usize {
        return Err(Error::AssignmentLength {
            expected: formula.num_vars() as usize,
            actual: assignment.len(),
        });
    }
    Ok(formula
        .clauses()
        .iter()
        .all(|c| c.is_satisfied_by(assignment)))
}

/// A total assignment; index 0 holds variable 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Assignment {
        Assignment(values)
    }

    /// Builds an assignment from one literal per variable of `1..=num_vars`.
    pub fn from_literals(num_vars: u32, lits: &[Lit]) -> Result<Assignment> {
        let mut values = vec![None; num_vars as usize];
        for &lit in lits {
            let var = lit.var();
            if var > num_vars {
                return Err(Error::VariableOutOfRange {
                    literal: lit.to_dimacs(),
                    num_vars,
                });
            }
            values[var as usize - 1] = Some(lit.is_positive());
        }
        let values = values
            .into_iter()
            .map(|v| {
                v.ok_or(Error::AssignmentLength {
                    expected: num_vars as usize,
                    actual: lits.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Assignment(values))
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn value(&self, var: u32) -> bool {
        self.0[var as usize - 1]
    }

    /// One literal per variable, in variable order.
    pub fn literals(&self) -> Vec<Lit> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &v)| Lit::from_var(i as u32 + 1, v))
            .collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, &v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if v { "1" } else { "0" })?;
        }
        f.write_str(">")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Unsat,
    Sat,
    Unique,
}

impl Verdict {
    pub fn from_count(solutions: &BigUint) -> Verdict {
        if solutions.is_zero() {
            Verdict::Unsat
        } else if solutions.is_one() {
            Verdict::Unique
        } else {
            Verdict::Sat
        }
    }

    pub fn is_satisfiable(self) -> bool {
        self != Verdict::Unsat
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Unsat => "UNSAT",
            Verdict::Sat => "SAT",
            Verdict::Unique => "UNIQUE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Instrumentation collected while counting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    pub clauses_processed: usize,
    /// Non-empty intersections stored (store size minus processed clauses).
    pub overlap_count: usize,
    pub pattern_store_size: usize,
    pub merges_attempted: u64,
    /// Merge steps over all intersections, overlapping or not.
    pub merge_literal_scans: u64,
    /// Intersections that came back empty.
    pub disjoint_merges: u64,
    /// Merge steps spent in intersections that came back empty.
    pub disjoint_merge_scans: u64,
    /// The all-variations-unsatisfied exit fired.
    pub early_terminated: bool,
    /// 1-based index of the clause after which the run stopped early.
    pub terminated_at_clause: Option<usize>,
}

impl RunStats {
    /// Mean merge steps per empty intersection; 0 when there were none.
    pub fn mean_merge_scan(&self) -> f64 {
        if self.disjoint_merges == 0 {
            0.0
        } else {
            self.disjoint_merge_scans as f64 / self.disjoint_merges as f64
        }
    }

    /// `overlap_count / m` for a formula with `m` clauses.
    pub fn overlap_ratio(&self, m: usize) -> f64 {
        if m == 0 {
            0.0
        } else {
            self.overlap_count as f64 / m as f64
        }
    }
}

/// Result of a model count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCount {
    pub solutions: BigUint,
    pub verdict: Verdict,
    /// Final value of the unsatisfied-variation counter (`2^n - solutions`).
    pub unsat_variations: BigUint,
    pub stats: Option<RunStats>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k1() -> Formula {
        Formula::from_dimacs(3, &[&[-1, 2], &[2, 3], &[-2, -3], &[1, -2, 3]]).unwrap()
    }

    #[test]
    fn clause_sorts_and_dedups() {
        let (c, removed) =
            Clause::normalize([3, -1, 2, 3, 2].iter().map(|&v| Lit::new(v).unwrap())).unwrap();
        assert_eq!(c, Clause::from_dimacs(&[-1, 2, 3]).unwrap());
        assert_eq!(removed, 2);
        assert!(c.lits().windows(2).all(|w| w[0].var() < w[1].var()));
    }

    #[test]
    fn clause_rejects_tautology() {
        assert_eq!(
            Clause::from_dimacs(&[1, 2, -1]),
            Err(Error::ComplementaryLiterals(1))
        );
        assert_eq!(Lit::new(0), Err(Error::InvalidLiteral(0)));
    }

    #[test]
    fn formula_rejects_out_of_range() {
        let err = Formula::from_dimacs(2, &[&[1, 3]]).unwrap_err();
        assert!(matches!(err, Error::VariableOutOfRange { literal: 3, .. }));
    }

    #[test]
    fn evaluate_truth_table_rows() {
        let k1 = k1();
        assert!(evaluate(&k1, &[false, false, true]).unwrap());
        assert!(!evaluate(&k1, &[false, false, false]).unwrap());
        assert!(evaluate(&k1, &[true, true, false]).unwrap());
    }

    #[test]
    fn evaluate_empty_formula() {
        let f = Formula::empty(2);
        for a in [[false, false], [true, false], [true, true]] {
            assert!(evaluate(&f, &a).unwrap());
        }
        assert!(evaluate(&Formula::empty(0), &[]).unwrap());
    }

    #[test]
    fn evaluate_length_mismatch() {
        assert_eq!(
            evaluate(&k1(), &[true]),
            Err(Error::AssignmentLength {
                expected: 3,
                actual: 1
            })
        );
    }

    #[test]
    fn assignment_literals_round_trip() {
        let a = Assignment::new(vec![true, false, true]);
        let lits = a.literals();
        assert_eq!(
            lits.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>(),
            [1, -2, 3]
        );
        assert_eq!(Assignment::from_literals(3, &lits).unwrap(), a);
        assert_eq!(a.to_string(), "<1,0,1>");
    }

    #[test]
    fn verdict_from_count() {
        assert_eq!(Verdict::from_count(&BigUint::from(0u8)), Verdict::Unsat);
        assert_eq!(Verdict::from_count(&BigUint::from(1u8)), Verdict::Unique);
        assert_eq!(Verdict::from_count(&BigUint::from(7u8)), Verdict::Sat);
    }
}
