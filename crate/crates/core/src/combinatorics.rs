//! Exact overlap probabilities between random clauses, expected overlap
//! counts and density classification.
//!
//! A clause `d` with `k_d` literals fails to clash with a fixed clause `c` of
//! `k_c` literals when each of its literals either sits on a variable `c`
//! does not mention (any polarity) or repeats a literal of `c` exactly:
//!
//! ```text
//!             Σ_{i=0..k_d} C(n-k_c, k_d-i) · 2^(k_d-i) · C(k_c, i)
//! P_overlap = ----------------------------------------------------
//!                          C(n, k_d) · 2^(k_d)
//! ```
//!
//! Binomials with out-of-range arguments are zero, so infeasible terms vanish.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapQuery {
    pub n: u32,
    pub k_c: u32,
    pub k_d: u32,
    /// Clause count, needed only for expectations.
    pub m: Option<u64>,
}

impl OverlapQuery {
    pub fn new(n: u32, k_c: u32, k_d: u32) -> OverlapQuery {
        OverlapQuery {
            n,
            k_c,
            k_d,
            m: None,
        }
    }

    pub fn with_m(mut self, m: u64) -> OverlapQuery {
        self.m = Some(m);
        self
    }
}

/// `C(a, b)` for `b` in `0..=len-1`, computed by the multiplicative recurrence.
/// Entries with `b > a` are zero.
fn binomial_row(a: u64, len: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(len);
    let mut cur = BigUint::one();
    for b in 0..len as u64 {
        if b > a {
            row.push(BigUint::zero());
            continue;
        }
        if b > 0 {
            cur = cur * (a - b + 1) / b;
        }
        row.push(cur.clone());
    }
    row
}

/// Exact binomial coefficient; zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    (0..b).fold(BigUint::one(), |acc, i| acc * (a - i) / (i + 1))
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Probability that a random `k_d`-clause shares no complementary pair with a
/// fixed `k_c`-clause over `n` variables.
pub fn p_overlap(q: &OverlapQuery) -> Result<BigRational> {
    if q.k_c > q.n || q.k_d > q.n {
        return Err(Error::InvalidQuery(format!(
            "clause widths k_c = {}, k_d = {} must not exceed n = {}",
            q.k_c, q.k_d, q.n
        )));
    }
    let (n, kc, kd) = (q.n as u64, q.k_c as u64, q.k_d as u64);
    let free = binomial_row(n - kc, kd as usize + 1);
    let shared = binomial_row(kc, kd as usize + 1);
    let mut numerator = BigUint::zero();
    for i in 0..=kd as usize {
        let (a, b) = (&free[kd as usize - i], &shared[i]);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        numerator += (a * b) << (kd as usize - i);
    }
    let denominator = binomial(n, kd) << kd as usize;
    Ok(ratio(numerator, denominator))
}

/// How the expected number of overlapping clause triples is modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TripleModel {
    /// `C(m,3) · P_overlap(k, k)²`: a triple overlaps when two independent
    /// pairwise checks pass.
    #[default]
    PairwiseSquared,
    /// `C(m,3) · P_overlap(k, ⌊1.5k⌋)`: the third clause meets a pairwise
    /// intersection that is half again as wide as a clause.
    WiderIntersection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleSize {
    Pair,
    Triple(TripleModel),
}

impl TupleSize {
    pub fn arity(self) -> u64 {
        match self {
            TupleSize::Pair => 2,
            TupleSize::Triple(_) => 3,
        }
    }
}

/// Expected number of overlapping pairs or triples among `m` clauses of
/// width `k_c` (`k_d` is ignored for triples, which derive it from `k_c`).
pub fn expected_overlaps(q: &OverlapQuery, tuple: TupleSize) -> Result<BigRational> {
    let m =
        q.m.ok_or_else(|| Error::InvalidQuery("expected overlaps need a clause count m".into()))?;
    let arity = tuple.arity();
    if m < arity {
        return Err(Error::InvalidQuery(format!(
            "m = {m} is smaller than the tuple size {arity}"
        )));
    }
    let tuples = BigRational::from_integer(BigInt::from(binomial(m, arity)));
    let p = match tuple {
        TupleSize::Pair => p_overlap(q)?,
        TupleSize::Triple(TripleModel::PairwiseSquared) => {
            let p = p_overlap(&OverlapQuery::new(q.n, q.k_c, q.k_c))?;
            &p * &p
        }
        TupleSize::Triple(TripleModel::WiderIntersection) => {
            let wide = q.k_c + q.k_c / 2;
            p_overlap(&OverlapQuery::new(q.n, q.k_c, wide))?
        }
    };
    Ok(tuples * p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    /// `k² / 2n`.
    pub ratio: BigRational,
    /// `ratio >= 25`.
    pub dense: bool,
    /// `k / n`.
    pub density: BigRational,
    /// `k >= 7√n`, reported alongside the ratio rule; the two differ near the
    /// boundary (`k = 7√n` gives a ratio of 24.5).
    pub seven_root_rule: bool,
}

pub fn classify_density(n: u32, k: u32) -> Result<DensityReport> {
    if k == 0 || k > n {
        return Err(Error::InvalidQuery(format!(
            "clause width {k} is outside 1..={n}"
        )));
    }
    let (n, k) = (n as u64, k as u64);
    let ratio = BigRational::new(BigInt::from(k * k), BigInt::from(2 * n));
    let dense = ratio >= BigRational::from_integer(BigInt::from(25));
    Ok(DensityReport {
        ratio,
        dense,
        density: BigRational::new(BigInt::from(k), BigInt::from(n)),
        seven_root_rule: k * k >= 49 * n,
    })
}

/// Geometric-model estimate `2n/k` of the merge steps before a clash.
pub fn expected_merge_scan(n: u32, k: u32) -> Result<BigRational> {
    if k == 0 || k > n {
        return Err(Error::InvalidQuery(format!(
            "clause width {k} is outside 1..={n}"
        )));
    }
    Ok(BigRational::new(
        BigInt::from(2 * n as u64),
        BigInt::from(k),
    ))
}

/// Decimal rendering with `places` digits after the point, rounding half up.
pub fn to_fixed(value: &BigRational, places: usize) -> String {
    let negative = value.is_negative();
    let scale = BigInt::from(10u8).pow(places as u32);
    let scaled = value.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2u8)))
        .floor()
        .to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if negative && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = places
    )
}

/// Scientific rendering with `digits` significant digits, e.g. `4.90e-25`.
pub fn to_scientific(value: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if value.is_zero() {
        return format!("{}e0", to_fixed(value, digits - 1));
    }
    let negative = value.is_negative();
    let v = value.abs();
    // decimal exponent e with 10^e <= v < 10^(e+1)
    let mut exp = estimate_exponent(&v);
    while pow10(exp) > v {
        exp -= 1;
    }
    while pow10(exp + 1) <= v {
        exp += 1;
    }
    let shift = digits as i64 - 1 - exp;
    let scaled = &v * pow10(shift);
    let half = BigRational::new(BigInt::one(), BigInt::from(2u8));
    let mut mantissa = (scaled + half).floor().to_integer();
    if mantissa >= BigInt::from(10u8).pow(digits as u32) {
        mantissa /= 10;
        exp += 1;
    }
    let text = mantissa.to_string();
    let (lead, rest) = text.split_at(1);
    let sign = if negative { "-" } else { "" };
    if rest.is_empty() {
        format!("{sign}{lead}e{exp}")
    } else {
        format!("{sign}{lead}.{rest}e{exp}")
    }
}

fn pow10(exp: i64) -> BigRational {
    let p = BigInt::from(10u8).pow(exp.unsigned_abs() as u32);
    if exp >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn estimate_exponent(v: &BigRational) -> i64 {
    let bits = v.numer().bits() as i64 - v.denom().bits() as i64;
    (bits as f64 * std::f64::consts::LOG10_2).floor() as i64
}

/// Nearest `f64`, for presentation and tolerance checks.
pub fn to_f64(value: &BigRational) -> f64 {
    if let Some(f) = value.to_f64() {
        if f.is_finite() && (f != 0.0 || value.is_zero()) {
            return f;
        }
    }
    // scale into range before converting
    let exp = estimate_exponent(value);
    let scaled = value * pow10(-exp);
    scaled.to_f64().unwrap_or(0.0) * 10f64.powi(exp as i32)
}
