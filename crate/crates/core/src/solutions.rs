//! Satisfying assignments and per-literal model counts built on top of the
//! counting engine.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::engine::{count_clauses, EngineConfig};
use crate::error::{Error, Result};
use crate::generator::SplitMix64;
use crate::model::{Assignment, Clause, Formula, Lit};

/// Residual formula after asserting `lit`: clauses containing `lit` are
/// dropped and `-lit` is removed from the rest. Returns `None` (conflict) if
/// a clause ends up empty. The variable count is kept unchanged.
pub fn filter_clauses(formula: &Formula, lit: Lit) -> Option<Formula> {
    let mut kept = Vec::with_capacity(formula.len());
    for clause in formula.clauses() {
        match clause.polarity(lit.var()) {
            Some(p) if p == lit.is_positive() => continue,
            Some(_) => {
                let rest: Vec<Lit> = clause.iter().copied().filter(|&l| l != -lit).collect();
                if rest.is_empty() {
                    return None;
                }
                kept.push(Clause::from_sorted_unchecked(rest));
            }
            None => {
                if clause.is_empty() {
                    return None;
                }
                kept.push(clause.clone());
            }
        }
    }
    Some(
        Formula::new(formula.num_vars(), kept)
            .expect("residual uses a subset of the original variables"),
    )
}

/// Order and polarity in which variables are tried: one literal per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralPriority(Vec<Lit>);

impl LiteralPriority {
    pub fn new(num_vars: u32, lits: Vec<Lit>) -> Result<LiteralPriority> {
        let mut seen = vec![false; num_vars as usize];
        for lit in &lits {
            let var = lit.var();
            if var > num_vars {
                return Err(Error::InvalidPriority(format!(
                    "literal {lit} is outside 1..={num_vars}"
                )));
            }
            if std::mem::replace(&mut seen[var as usize - 1], true) {
                return Err(Error::InvalidPriority(format!(
                    "variable {var} listed twice"
                )));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPriority(format!(
                "variable {} is missing",
                missing + 1
            )));
        }
        Ok(LiteralPriority(lits))
    }

    /// `x1, x2, ..., xn`.
    pub fn positive_first(num_vars: u32) -> LiteralPriority {
        LiteralPriority((1..=num_vars).map(|v| Lit::from_var(v, true)).collect())
    }

    /// Variables in index order, each with a pseudorandom polarity drawn from
    /// the top bit of successive SplitMix64 outputs.
    pub fn seeded(num_vars: u32, seed: u64) -> LiteralPriority {
        let mut rng = SplitMix64::new(seed);
        LiteralPriority(
            (1..=num_vars)
                .map(|v| Lit::from_var(v, rng.coin()))
                .collect(),
        )
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }
}

/// A satisfying assignment and how many engine runs it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignment: Assignment,
    pub count_calls: usize,
}

/// Finds a satisfying assignment by fixing one literal at a time and keeping
/// it only if the residual formula still has models.
///
/// Variables left untouched once every clause is satisfied take their
/// priority polarity. Returns [`Error::Unsatisfiable`] if the formula has no
/// model.
pub fn find_solution(
    formula: &Formula,
    priority: &LiteralPriority,
    config: &EngineConfig,
) -> Result<Solution> {
    let n = formula.num_vars();
    if priority.lits().len() != n as usize {
        return Err(Error::InvalidPriority(format!(
            "expected {n} literals, got {}",
            priority.lits().len()
        )));
    }
    let config = EngineConfig {
        collect_stats: false,
        ..config.clone()
    };
    let mut values: Vec<Option<bool>> = vec![None; n as usize];
    let mut current = formula.clone();
    let mut remaining = n;
    let mut count_calls = 0;

    for &lit in priority.lits() {
        if current.is_empty() {
            break;
        }
        remaining -= 1;
        let keep = match filter_clauses(&current, lit) {
            Some(residual) => {
                count_calls += 1;
                let count = count_clauses(residual.clauses(), remaining, &config)?;
                (!count.solutions.is_zero()).then_some((lit, residual))
            }
            None => None,
        };
        let (chosen, residual) = match keep {
            Some(pair) => pair,
            None => {
                let residual = filter_clauses(&current, -lit).ok_or(Error::Unsatisfiable)?;
                (-lit, residual)
            }
        };
        values[chosen.var() as usize - 1] = Some(chosen.is_positive());
        current = residual;
    }
    if !current.is_empty() {
        return Err(Error::Unsatisfiable);
    }

    let mut assignment = vec![false; n as usize];
    for lit in priority.lits() {
        let idx = lit.var() as usize - 1;
        assignment[idx] = values[idx].unwrap_or(lit.is_positive());
    }
    Ok(Solution {
        assignment: Assignment::new(assignment),
        count_calls,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralCount {
    pub lit: Lit,
    pub solutions: BigUint,
}

/// Models in which each literal is true, listed `x̄1, x1, ..., x̄n, xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralCountReport {
    pub entries: Vec<LiteralCount>,
}

impl LiteralCountReport {
    pub fn count(&self, lit: Lit) -> Option<&BigUint> {
        let var = lit.var() as usize;
        let idx = 2 * (var - 1) + usize::from(lit.is_positive());
        self.entries.get(idx).map(|e| &e.solutions)
    }
}

/// Per-literal model counts. Each entry is the model count of the residual
/// formula over the other `n - 1` variables; a conflicting residual counts 0.
/// Unsatisfiable input yields all zeros.
pub fn per_literal_counts(formula: &Formula, config: &EngineConfig) -> Result<LiteralCountReport> {
    let n = formula.num_vars();
    let config = EngineConfig {
        collect_stats: false,
        ..config.clone()
    };
    let mut entries = Vec::with_capacity(2 * n as usize);
    for var in 1..=n {
        for positive in [false, true] {
            let lit = Lit::from_var(var, positive);
            let solutions = match filter_clauses(formula, lit) {
                Some(residual) => count_clauses(residual.clauses(), n - 1, &config)?.solutions,
                None => BigUint::zero(),
            };
            entries.push(LiteralCount { lit, solutions });
        }
    }
    Ok(LiteralCountReport { entries })
}
