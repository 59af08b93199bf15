//! Exact bound arithmetic for `mu_5(n)` and the limit constant `c_5`.
//!
//! Everything returns integers or rationals; decimal output is left to the
//! caller.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::combin::binomial_big;
use crate::constructions::conjectured_mu5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("parameters must satisfy k <= m <= n (got k = {k}, m = {m}, n = {n})")]
    Ordering { k: u64, m: u64, n: u64 },
    #[error("the odd-even step needs h > 5, got {0}")]
    SmallH(u64),
    #[error("hypothesis fails: mu_5({odd}) claimed {claimed}, but the step needs {required}")]
    HypothesisMismatch { odd: u64, claimed: BigUint, required: BigUint },
    #[error("c_5 ratios need n >= 5, got {0}")]
    SmallN(u64),
}

/// Exact values of `mu_5(n)` for `5 <= n <= 16`.
pub fn known_values() -> BTreeMap<u64, u64> {
    let mut table: BTreeMap<u64, u64> = (5..=8).map(|n| (n, 0)).collect();
    table.extend([(9, 1), (10, 2), (11, 7), (12, 12), (13, 27), (14, 42), (15, 77), (16, 112)]);
    table
}

/// `mu_5(n)` when it is known, including the trivial zero for `n < 5`.
pub fn known_mu5(n: u64) -> Option<u64> {
    if n < 5 {
        return Some(0);
    }
    known_values().get(&n).copied()
}

fn ceil_div(num: &BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

/// `ceil(r * C(n,k) / C(m,k))`, a lower bound on `mu_k(n)` whenever
/// `mu_k(m) >= r`.
pub fn folklore_lower_bound(k: u64, m: u64, r: &BigUint, n: u64) -> Result<BigUint, BoundsError> {
    if !(k <= m && m <= n) {
        return Err(BoundsError::Ordering { k, m, n });
    }
    Ok(ceil_div(&(r * binomial_big(n, k)), &binomial_big(m, k)))
}

/// If `mu_5(2h - 1)` equals the conjectured value, `mu_5(2h) = 2 C(h,5)`.
pub fn odd_even_step(h: u64, mu_odd: &BigUint) -> Result<BigUint, BoundsError> {
    if h <= 5 {
        return Err(BoundsError::SmallH(h));
    }
    let required = binomial_big(h, 5) + binomial_big(h - 1, 5);
    if *mu_odd != required {
        return Err(BoundsError::HypothesisMismatch { odd: 2 * h - 1, claimed: mu_odd.clone(), required });
    }
    Ok(binomial_big(h, 5) * 2u32)
}

/// `mu / C(n,5)`; a lower bound on `c_5` when `mu <= mu_5(n)`.
pub fn c5_ratio(n: u64, mu: &BigUint) -> Result<BigRational, BoundsError> {
    if n < 5 {
        return Err(BoundsError::SmallN(n));
    }
    Ok(BigRational::new(BigInt::from(mu.clone()), BigInt::from(binomial_big(n, 5))))
}

/// Ratio of the conjectured value to `C(n,5)`.
pub fn conjectured_ratio(n: u64) -> Result<BigRational, BoundsError> {
    c5_ratio(n, &BigUint::from(conjectured_mu5(n)))
}

/// `lim 2 C(h,5) / C(2h,5) = 1/16`.
pub fn conjecture_limit() -> BigRational {
    BigRational::new(1.into(), 16.into())
}

/// Decimal rendering rounded half-up to `places` digits.
pub fn to_decimal(r: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = r * BigRational::from_integer(scale.clone());
    let twice = &scaled * BigRational::from_integer(2.into());
    let rounded = (twice.floor() + BigRational::from_integer(1.into())) / BigRational::from_integer(2.into());
    let v = rounded.floor().to_integer();
    let negative = v < BigInt::zero();
    let digits = v.magnitude().to_string();
    let digits = format!("{:0>width$}", digits, width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Derivation {
    /// Exact value from the table of solved instances.
    KnownValue { n: u64, value: u64 },
    /// Averaging over `m`-subsets.
    Folklore { m: u64, r: String, bound: String },
    /// Upper bound from the constructions.
    Construction { bound: String },
    /// Odd-to-even step from the value at `2h - 1`; `value` is the exact
    /// value it gives at `2h`.
    OddEven { odd: u64, value: String },
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::KnownValue { n, value } => write!(f, "solved mu5({n})={value}"),
            Derivation::Folklore { m, r, bound } => write!(f, "averaging from mu5({m})>={r} gives >={bound}"),
            Derivation::Construction { bound } => write!(f, "constructions give <={bound}"),
            Derivation::OddEven { odd, value } => write!(f, "odd-even step from mu5({odd}) gives exactly {value}"),
        }
    }
}

/// Lower and upper bounds on `mu_5(n)` with the derivation steps used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub n: u64,
    #[serde(serialize_with = "as_string")]
    pub lower: BigUint,
    #[serde(serialize_with = "as_string")]
    pub upper: BigUint,
    pub provenance: Vec<Derivation>,
}

fn as_string<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl BoundRecord {
    pub fn csv_header() -> &'static str {
        "n,lower,upper,provenance"
    }

    pub fn csv_row(&self) -> String {
        let prov: Vec<String> = self.provenance.iter().map(|d| d.to_string()).collect();
        format!("{},{},{},\"{}\"", self.n, self.lower, self.upper, prov.join("; "))
    }
}

/// Best bounds on `mu_5(n)` from solved instances, the constructions, the folklore
/// averaging step applied to the largest known smaller instance, an optional extra
/// premise `mu_5(m) >= r`, and the odd-even step.
pub fn derive_bounds(n: u64, premise: Option<(u64, BigUint)>) -> Result<BoundRecord, BoundsError> {
    let mut provenance = Vec::new();
    let upper_value = BigUint::from(conjectured_mu5(n));
    let mut lower = BigUint::zero();
    let mut upper = upper_value.clone();
    provenance.push(Derivation::Construction { bound: upper_value.to_string() });

    if let Some(v) = known_mu5(n).filter(|_| n >= 5) {
        lower = BigUint::from(v);
        upper = BigUint::from(v);
        provenance.push(Derivation::KnownValue { n, value: v });
    }

    let mut premises: Vec<(u64, BigUint)> = Vec::new();
    if let Some((&m, &r)) = known_values().range(5..n.max(5)).next_back() {
        premises.push((m, BigUint::from(r)));
    }
    if let Some(p) = premise {
        if !premises.contains(&p) {
            premises.push(p);
        }
    }
    for (m, r) in premises {
        if n >= 5 && m >= 5 {
            let bound = folklore_lower_bound(5, m, &r, n)?;
            if bound > lower {
                lower = bound.clone();
            }
            provenance.push(Derivation::Folklore { m, r: r.to_string(), bound: bound.to_string() });
        }
    }

    if n.is_multiple_of(2) && n > 10 {
        let h = n / 2;
        if let Some(v) = known_mu5(2 * h - 1) {
            if let Ok(value) = odd_even_step(h, &BigUint::from(v)) {
                lower = lower.max(value.clone());
                provenance.push(Derivation::OddEven { odd: 2 * h - 1, value: value.to_string() });
            }
        }
    }
    if lower > upper {
        upper = lower.clone();
    }
    Ok(BoundRecord { n, lower, upper, provenance })
}

/// `f64` view of a rational for display purposes.
pub fn approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
