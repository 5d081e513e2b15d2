//! Seeded random k-SAT instances plus the deterministic best- and worst-case
//! families for the counting engine.
//!
//! # Reproducibility
//!
//! All randomness comes from SplitMix64 (Steele, Lea & Flood, 2014) seeded
//! directly with the 64-bit seed: `state += 0x9E3779B97F4A7C15`, then the
//! output is `z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
//! z = (z ^ z>>27) * 0x94D049BB133111EB; z ^ z>>31` (wrapping arithmetic).
//! Derived draws, in the order they are consumed:
//!
//! * `below(b)`: `(next * b) >> 64` computed in 128 bits.
//! * `coin()`: the top bit of `next` (1 = positive literal).
//!
//! A random clause of width `k` over `n` variables is a partial Fisher-Yates
//! shuffle of an array that starts as `[1, 2, ..., n]` and is *not* reset
//! between clauses: for `j` in `0..k`, swap slot `j` with slot
//! `j + below(n - j)`. Slots `0..k` then hold the clause's variables; one
//! `coin()` per slot, in slot order, fixes the polarities. The literals are
//! finally sorted by variable. The same procedure reimplemented in another
//! language yields identical instances.

use std::fmt;
use std::str::FromStr;

use num_integer::Roots;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::model::{Clause, Formula, Lit};

/// SplitMix64 stream with the two derived draws used by the generators.
#[derive(Debug, Clone)]
pub struct SplitMix64(rand_xoshiro::SplitMix64);

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64(rand_xoshiro::SplitMix64::seed_from_u64(seed))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Value in `0..bound`; `bound` must be nonzero.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

/// Mixes several words into one seed, for deriving per-run seeds.
pub fn derive_seed(words: &[u64]) -> u64 {
    let mut acc = 0u64;
    for &w in words {
        acc = SplitMix64::new(acc ^ w).next_u64();
    }
    acc
}

/// Named clause-width families: `0.9N` gives `k = ⌊0.9 n⌋`, `xRootN` gives
/// `k = ⌊x √n⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DensityType {
    NinetyPercent,
    RootN(u32),
}

impl DensityType {
    /// The six families used in the experiments, densest first.
    pub const STANDARD: [DensityType; 6] = [
        DensityType::NinetyPercent,
        DensityType::RootN(7),
        DensityType::RootN(6),
        DensityType::RootN(5),
        DensityType::RootN(4),
        DensityType::RootN(3),
    ];

    /// Clause width for `n` variables, computed in exact integer arithmetic.
    pub fn width(self, n: u32) -> u32 {
        match self {
            DensityType::NinetyPercent => (9 * n as u64 / 10) as u32,
            DensityType::RootN(x) => {
                let x = x as u64;
                (x * x * n as u64).sqrt() as u32
            }
        }
    }

    /// Stable numeric code used when deriving seeds.
    pub fn code(self) -> u64 {
        match self {
            DensityType::NinetyPercent => 0,
            DensityType::RootN(x) => x as u64,
        }
    }
}

impl fmt::Display for DensityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityType::NinetyPercent => f.write_str("0.9N"),
            DensityType::RootN(x) => write!(f, "{x}RootN"),
        }
    }
}

impl FromStr for DensityType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("0.9N") {
            return Ok(DensityType::NinetyPercent);
        }
        let lower = t.to_ascii_lowercase();
        lower
            .strip_suffix("rootn")
            .and_then(|x| x.parse::<u32>().ok())
            .filter(|&x| x > 0)
            .map(DensityType::RootN)
            .ok_or_else(|| Error::InvalidGenSpec(format!("unknown density type {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseWidth {
    Literals(u32),
    Density(DensityType),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub num_vars: u32,
    pub num_clauses: usize,
    pub width: ClauseWidth,
    pub seed: u64,
}

impl GenSpec {
    /// Resolved clause width, checked against `1..=n`.
    pub fn k(&self) -> Result<u32> {
        let k = match self.width {
            ClauseWidth::Literals(k) => k,
            ClauseWidth::Density(dt) => dt.width(self.num_vars),
        };
        if k == 0 || k > self.num_vars {
            return Err(Error::InvalidGenSpec(format!(
                "clause width {k} is outside 1..={}",
                self.num_vars
            )));
        }
        Ok(k)
    }
}

/// `m` clauses of exactly `k` distinct variables with fair-coin polarities.
pub fn random_instance(spec: &GenSpec) -> Result<Formula> {
    let k = spec.k()? as usize;
    let n = spec.num_vars;
    let mut rng = SplitMix64::new(spec.seed);
    let mut slots: Vec<u32> = (1..=n).collect();
    let clauses = (0..spec.num_clauses)
        .map(|_| random_clause(&mut rng, &mut slots, k))
        .collect();
    Formula::new(n, clauses)
}

fn random_clause(rng: &mut SplitMix64, slots: &mut [u32], k: usize) -> Clause {
    partial_shuffle(rng, slots, k);
    let mut lits: Vec<Lit> = slots[..k]
        .iter()
        .map(|&v| Lit::from_var(v, rng.coin()))
        .collect();
    lits.sort_unstable_by_key(|l| l.var());
    Clause::from_sorted_unchecked(lits)
}

fn partial_shuffle(rng: &mut SplitMix64, slots: &mut [u32], k: usize) {
    let len = slots.len();
    for j in 0..k {
        let r = j + rng.below((len - j) as u64) as usize;
        slots.swap(j, r);
    }
}

/// Clauses that are pairwise disjoint as early as possible: clause `i` is
/// `x̄1 ∨ … ∨ x̄(i-1) ∨ xi` followed by `k - i` random literals on variables
/// above `i`, so clauses `i < j` clash on variable `i`.
pub fn best_case_instance(n: u32, k: u32, m: usize, seed: u64) -> Result<Formula> {
    if k == 0 || k > n {
        return Err(Error::InvalidGenSpec(format!(
            "clause width {k} is outside 1..={n}"
        )));
    }
    if m > k as usize {
        return Err(Error::InvalidGenSpec(format!(
            "best case needs m <= k, got m = {m}, k = {k}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut clauses = Vec::with_capacity(m);
    for i in 1..=m as u32 {
        let mut lits: Vec<Lit> = (1..i).map(|v| Lit::from_var(v, false)).collect();
        lits.push(Lit::from_var(i, true));
        let mut tail: Vec<u32> = (i + 1..=n).collect();
        let extra = (k - i) as usize;
        partial_shuffle(&mut rng, &mut tail, extra);
        let mut chosen: Vec<Lit> = tail[..extra]
            .iter()
            .map(|&v| Lit::from_var(v, rng.coin()))
            .collect();
        chosen.sort_unstable_by_key(|l| l.var());
        lits.extend(chosen);
        clauses.push(Clause::from_sorted_unchecked(lits));
    }
    Formula::new(n, clauses)
}

/// `n - k + 1` all-positive clauses sharing `x1 … x(k-1)` and differing in
/// one tail variable. Every subset of clauses has a non-empty intersection.
pub fn worst_case_instance(n: u32, k: u32) -> Result<Formula> {
    if k == 0 || k > n {
        return Err(Error::InvalidGenSpec(format!(
            "clause width {k} is outside 1..={n}"
        )));
    }
    let clauses = (k..=n)
        .map(|tail| {
            let lits = (1..k).chain(std::iter::once(tail));
            Clause::from_sorted_unchecked(lits.map(|v| Lit::from_var(v, true)).collect())
        })
        .collect();
    Formula::new(n, clauses)
}
