//! Truth-table ground truth for small formulas.
//!
//! Assignments are enumerated as integers with variable 1 in the most
//! significant bit, so models come out in the same order as the rows of a
//! textbook truth table.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::model::{Assignment, Formula};

/// Largest variable count the oracle can ever be asked to enumerate.
pub const HARD_MAX_N: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_n: u32,
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit { max_n: 24 }
    }
}

impl OracleLimit {
    pub fn new(max_n: u32) -> Result<OracleLimit> {
        if max_n > HARD_MAX_N {
            return Err(Error::InvalidQuery(format!(
                "oracle limit {max_n} is above the hard maximum {HARD_MAX_N}"
            )));
        }
        Ok(OracleLimit { max_n })
    }
}

/// Clause as a pair of bitmasks: bit `n - v` is set for variable `v`.
struct MaskClause {
    positive: u64,
    negative: u64,
}

fn compile(formula: &Formula, limit: OracleLimit) -> Result<Vec<MaskClause>> {
    let n = formula.num_vars();
    if n > limit.max_n.min(HARD_MAX_N) {
        return Err(Error::OracleLimit {
            num_vars: n,
            max_n: limit.max_n,
        });
    }
    Ok(formula
        .clauses()
        .iter()
        .map(|clause| {
            let mut mc = MaskClause {
                positive: 0,
                negative: 0,
            };
            for lit in clause {
                let bit = 1u64 << (n - lit.var());
                if lit.is_positive() {
                    mc.positive |= bit;
                } else {
                    mc.negative |= bit;
                }
            }
            mc
        })
        .collect())
}

fn for_each_model(formula: &Formula, limit: OracleLimit, mut f: impl FnMut(u64)) -> Result<()> {
    let clauses = compile(formula, limit)?;
    let n = formula.num_vars();
    for bits in 0..(1u64 << n) {
        if clauses
            .iter()
            .all(|c| bits & c.positive != 0 || !bits & c.negative != 0)
        {
            f(bits);
        }
    }
    Ok(())
}

/// Number of satisfying assignments, by enumeration.
pub fn brute_force_count(formula: &Formula, limit: OracleLimit) -> Result<BigUint> {
    let mut count = 0u64;
    for_each_model(formula, limit, |_| count += 1)?;
    Ok(BigUint::from(count))
}

/// All satisfying assignments in lexicographic order.
pub fn brute_force_models(formula: &Formula, limit: OracleLimit) -> Result<Vec<Assignment>> {
    let n = formula.num_vars();
    let mut models = Vec::new();
    for_each_model(formula, limit, |bits| {
        let values = (1..=n).map(|v| bits >> (n - v) & 1 == 1).collect();
        models.push(Assignment::new(values));
    })?;
    Ok(models)
}
