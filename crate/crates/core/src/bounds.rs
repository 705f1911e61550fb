//! Exact constants and bound formulas.
//!
//! The additive constant for `k` coefficients is built recursively from the
//! constants of the `k` leave-one-out sub-tuples:
//!
//! ```text
//! C'    = sum_i g_i * C_sub(i)
//! C''   = P * (sum_i C_sub(i) + 1) / (k - 1)
//! C     = C'' * P^(S^2)
//! ```
//!
//! with `P = |l_1 ... l_k|`, `S = |l_1| + ... + |l_k|` and `C = 0` for
//! `k = 1`. By default `C_sub(i)` is evaluated on the sub-tuple divided by
//! its gcd `g_i`, which keeps the recursion inside coprime tuples;
//! [`SubTupleMode::Raw`] evaluates the undivided sub-tuple instead.
//! Everything here is exact: `BigInt` and `BigRational`, no floats.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dilates::DilateTuple;
use crate::error::{Error, Result};
use crate::num_str;

/// Exponents above this are refused rather than materialized.
pub const MAX_EXPONENT: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightProfile {
    /// `S = sum |l_i|`.
    pub total: u64,
    /// `s_i = S - |l_i|`.
    pub leave_one_out: Vec<u64>,
}

pub fn weight_sum(lambdas: &DilateTuple) -> WeightProfile {
    weights_of(lambdas.coeffs())
}

fn weights_of(coeffs: &[i64]) -> WeightProfile {
    let total: u64 = coeffs.iter().map(|c| c.unsigned_abs()).sum();
    WeightProfile {
        total,
        leave_one_out: coeffs.iter().map(|c| total - c.unsigned_abs()).collect(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubTupleMode {
    #[default]
    Normalized,
    Raw,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantLedger {
    pub tuple: Vec<i64>,
    pub mode: SubTupleMode,
    pub weights: WeightProfile,
    pub cofactors: Vec<u64>,
    #[serde(serialize_with = "num_str::bigint")]
    pub product: BigInt,
    #[serde(serialize_with = "num_str::rational")]
    pub c_prime: BigRational,
    #[serde(serialize_with = "num_str::rational")]
    pub c_double_prime: BigRational,
    #[serde(serialize_with = "num_str::rational")]
    pub c_final: BigRational,
    /// Closed-form constant; only defined for `k >= 2`.
    #[serde(serialize_with = "num_str::opt_rational")]
    pub c_closed: Option<BigRational>,
    pub derivation: Vec<Derivation>,
}

/// One leave-one-out step of the recursion.
#[derive(Clone, Debug, Serialize)]
pub struct Derivation {
    pub omitted: usize,
    pub cofactor: u64,
    pub raw: Vec<i64>,
    pub evaluated: Vec<i64>,
    pub ledger: Arc<ConstantLedger>,
}

fn pow(base: &BigInt, exp: u64) -> Result<BigInt> {
    if exp > MAX_EXPONENT {
        return Err(Error::Overflow(format!("exponent {exp} exceeds {MAX_EXPONENT}")));
    }
    Ok(num_traits::pow(base.clone(), exp as usize))
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

impl ConstantLedger {
    pub fn k(&self) -> usize {
        self.tuple.len()
    }

    /// `C_u = P^u`.
    pub fn cu(&self, u: u64) -> Result<BigInt> {
        pow(&self.product, u)
    }

    /// `C'' * P^u`, the constant in the level-`u` lower bound.
    pub fn level_constant(&self, u: u64) -> Result<BigRational> {
        Ok(&self.c_double_prime * int(self.cu(u)?))
    }

    /// `C' + P`, the constant in the stated FD lemma.
    pub fn fd_constant(&self) -> BigRational {
        &self.c_prime + int(self.product.clone())
    }

    /// `S * n - C`.
    pub fn theorem_bound(&self, n: usize) -> BigRational {
        int(BigInt::from(self.weights.total) * BigInt::from(n)) - &self.c_final
    }

    /// `(u / S) * n - C'' * P^u` for `S <= u <= S^2`.
    pub fn prop_lower_bound(&self, n: u64, u: u64) -> Result<PropBound> {
        let s = self.weights.total;
        let hi = s.checked_mul(s).ok_or_else(|| Error::Overflow("S^2".into()))?;
        if u < s || u > hi {
            return Err(Error::URange { u, lo: s, hi });
        }
        let value = BigRational::new(BigInt::from(u) * BigInt::from(n), BigInt::from(s))
            - self.level_constant(u)?;
        let vacuous = value < int(n);
        Ok(PropBound { value, vacuous })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropBound {
    #[serde(serialize_with = "num_str::rational")]
    pub value: BigRational,
    pub vacuous: bool,
}

fn cofactors_of(coeffs: &[i64]) -> Vec<u64> {
    (0..coeffs.len())
        .map(|i| {
            coeffs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(0u64, |g, (_, c)| g.gcd(&c.unsigned_abs()))
        })
        .collect()
}

fn closed_form_of(coeffs: &[i64], product: &BigInt) -> Result<BigRational> {
    let k = coeffs.len() as u64;
    let s = weights_of(coeffs).total;
    let exp = (k - 1)
        .checked_mul(s.checked_mul(s).ok_or_else(|| Error::Overflow("S^2".into()))?)
        .and_then(|e| e.checked_add(k - 1))
        .ok_or_else(|| Error::Overflow("closed-form exponent".into()))?;
    let binom = BigInt::from(k * (k + 1) / 2);
    Ok(BigRational::new(binom, BigInt::from(3)) * int(pow(product, exp)?))
}

struct Builder {
    mode: SubTupleMode,
    memo: HashMap<Vec<i64>, Arc<ConstantLedger>>,
}

impl Builder {
    fn ledger(&mut self, coeffs: &[i64]) -> Result<Arc<ConstantLedger>> {
        if let Some(hit) = self.memo.get(coeffs) {
            return Ok(hit.clone());
        }
        let k = coeffs.len();
        let weights = weights_of(coeffs);
        let product: BigInt = coeffs.iter().map(|c| BigInt::from(c.unsigned_abs())).product();
        let cofactors = cofactors_of(coeffs);
        let ledger = if k == 1 {
            ConstantLedger {
                tuple: coeffs.to_vec(),
                mode: self.mode,
                weights,
                cofactors,
                product,
                c_prime: BigRational::zero(),
                c_double_prime: BigRational::zero(),
                c_final: BigRational::zero(),
                c_closed: None,
                derivation: Vec::new(),
            }
        } else {
            let mut derivation = Vec::with_capacity(k);
            let mut c_prime = BigRational::zero();
            let mut sub_sum = BigRational::zero();
            for (i, &g) in cofactors.iter().enumerate() {
                let raw: Vec<i64> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &c)| c)
                    .collect();
                let evaluated = match self.mode {
                    SubTupleMode::Normalized => raw.iter().map(|&c| c / g as i64).collect(),
                    SubTupleMode::Raw => raw.clone(),
                };
                let sub = self.ledger(&evaluated)?;
                c_prime += int(g) * &sub.c_final;
                sub_sum += &sub.c_final;
                derivation.push(Derivation {
                    omitted: i,
                    cofactor: g,
                    raw,
                    evaluated,
                    ledger: sub,
                });
            }
            let c_double_prime = int(product.clone()) * (sub_sum + BigRational::one())
                / int(k as u64 - 1);
            let s = weights.total;
            let s2 = s.checked_mul(s).ok_or_else(|| Error::Overflow("S^2".into()))?;
            let c_final = &c_double_prime * int(pow(&product, s2)?);
            let c_closed = Some(closed_form_of(coeffs, &product)?);
            ConstantLedger {
                tuple: coeffs.to_vec(),
                mode: self.mode,
                weights,
                cofactors,
                product,
                c_prime,
                c_double_prime,
                c_final,
                c_closed,
                derivation,
            }
        };
        let ledger = Arc::new(ledger);
        self.memo.insert(coeffs.to_vec(), ledger.clone());
        Ok(ledger)
    }
}

/// Constant ledger with normalized sub-tuples.
pub fn recursive_constants(lambdas: &DilateTuple) -> Result<Arc<ConstantLedger>> {
    recursive_constants_with(lambdas, SubTupleMode::Normalized)
}

pub fn recursive_constants_with(
    lambdas: &DilateTuple,
    mode: SubTupleMode,
) -> Result<Arc<ConstantLedger>> {
    Builder {
        mode,
        memo: HashMap::new(),
    }
    .ledger(lambdas.coeffs())
}

/// `(1/3) * binom(k+1, 2) * P^((k-1) S^2 + k - 1)`, for `k >= 2`.
pub fn closed_form_constant(lambdas: &DilateTuple) -> Result<BigRational> {
    if lambdas.k() < 2 {
        return Err(Error::InvalidTuple(
            "closed-form constant needs at least two coefficients".into(),
        ));
    }
    closed_form_of(lambdas.coeffs(), &lambdas.product_abs())
}

pub fn prop_lower_bound(lambdas: &DilateTuple, n: u64, u: u64) -> Result<PropBound> {
    recursive_constants(lambdas)?.prop_lower_bound(n, u)
}

/// `S * n - (S - 1)`, the size of the dilate sum of `{0, ..., n-1}` at most.
pub fn interval_upper_bound(lambdas: &DilateTuple, n: u64) -> BigInt {
    let s = BigInt::from(lambdas.weight());
    &s * BigInt::from(n) - (&s - 1)
}

/// `(sum sizes - 1) / (k - 1)` for the leave-one-out sumset sizes.
pub fn gmr_bound(sizes: &[usize]) -> Result<BigRational> {
    if sizes.len() < 2 {
        return Err(Error::KTooSmall(sizes.len()));
    }
    if sizes.contains(&0) {
        return Err(Error::EmptyOperand);
    }
    let total: BigInt = sizes.iter().map(|&s| BigInt::from(s)).sum();
    Ok(BigRational::new(total - 1, BigInt::from(sizes.len() - 1)))
}
