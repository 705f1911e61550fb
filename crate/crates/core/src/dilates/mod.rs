//! Sums of dilates `l_1*A + ... + l_k*A`.
//!
//! [`dilate_sum`] is the reference route (a fold of pairwise sumsets);
//! [`dilate_sum_fast`] and [`dilate_sum_size`] run the bitset kernel in
//! [`kernel`]. The two routes are checked against each other in tests.

pub mod kernel;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intset::Set;
use crate::scalar::Element;

pub use kernel::{dilate_sum_fast, dilate_sum_fast_with, dilate_sum_size, dilate_sum_size_with, KernelConfig};

/// Coefficients `(l_1, ..., l_k)`: nonempty, all nonzero, overall gcd 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DilateTuple {
    coeffs: Vec<i64>,
}

impl DilateTuple {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidTuple("no coefficients".into()));
        }
        if coeffs.contains(&0) {
            return Err(Error::InvalidTuple(format!("zero coefficient in {coeffs:?}")));
        }
        if coeffs.contains(&i64::MIN) {
            return Err(Error::InvalidTuple("coefficient magnitude exceeds i64".into()));
        }
        let g = coeffs.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g != 1 {
            return Err(Error::InvalidTuple(format!(
                "coefficients {coeffs:?} share the factor {g}"
            )));
        }
        Ok(DilateTuple { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    /// `S = |l_1| + ... + |l_k|`.
    pub fn weight(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn max_abs(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// `|l_1 * ... * l_k|`.
    pub fn product_abs(&self) -> BigInt {
        self.coeffs.iter().map(|&c| BigInt::from(c.unsigned_abs())).product()
    }

    /// Sum of the negative coefficients.
    pub fn negative_sum(&self) -> i64 {
        self.coeffs.iter().filter(|&&c| c < 0).sum()
    }

    /// Order-independent name used for result files, e.g. `l_1_2`,
    /// `l_m2_1` for `(1,-2)`.
    pub fn canonical_name(&self) -> String {
        let mut sorted = self.coeffs.clone();
        sorted.sort_unstable();
        let mut name = String::from("l");
        for c in sorted {
            if c < 0 {
                name.push_str(&format!("_m{}", c.unsigned_abs()));
            } else {
                name.push_str(&format!("_{c}"));
            }
        }
        name
    }

    /// The same coefficients sorted ascending; dilate sums do not depend on
    /// the order of the summands.
    pub fn sorted(&self) -> DilateTuple {
        let mut coeffs = self.coeffs.clone();
        coeffs.sort_unstable();
        DilateTuple { coeffs }
    }

    /// Rejects sets whose scaled elements would leave the element type:
    /// `max|a| * max|l| * k` must fit.
    pub fn check_fits<T: Element>(&self, set: &Set<T>) -> Result<()> {
        let Some((lo, hi)) = set.min_elem().zip(set.max_elem()) else {
            return Ok(());
        };
        let mag = lo.widen().unsigned_abs().max(hi.widen().unsigned_abs());
        let limit = mag
            .checked_mul(self.max_abs() as u128)
            .and_then(|v| v.checked_mul(self.k() as u128));
        match limit {
            Some(v) if v <= i128::MAX as u128 && T::narrow(v as i128).is_some() => Ok(()),
            _ => Err(Error::Overflow(format!(
                "elements up to {mag} scaled by {} over {} summands",
                self.max_abs(),
                self.k()
            ))),
        }
    }
}

impl fmt::Display for DilateTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for DilateTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for DilateTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut body = s.trim();
        if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            body = inner;
        }
        let coeffs = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DilateTuple::new(coeffs)
    }
}

impl Serialize for DilateTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DilateTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn coeff<T: Element>(c: i64) -> Result<T> {
    T::narrow(c as i128).ok_or_else(|| Error::Overflow(format!("coefficient {c}")))
}

/// Reference dilate sum: the k-fold sumset of the dilates `l_i * A`.
pub fn dilate_sum<T: Element>(lambdas: &DilateTuple, a: &Set<T>) -> Result<Set<T>> {
    if a.is_empty() {
        return Err(Error::EmptyOperand);
    }
    lambdas.check_fits(a)?;
    let mut acc = a.affine_map(coeff(lambdas.coeffs[0])?, T::zero())?;
    for &c in &lambdas.coeffs[1..] {
        acc = acc.sumset(&a.affine_map(coeff(c)?, T::zero())?)?;
    }
    Ok(acc)
}

/// Reference sum `l_1*A_1 + ... + l_k*A_k` of dilates of distinct sets.
pub fn mixed_dilate_sum<T: Element>(lambdas: &[i64], sets: &[&Set<T>]) -> Result<Set<T>> {
    if lambdas.len() != sets.len() || lambdas.is_empty() {
        return Err(Error::InvalidTuple(format!(
            "{} coefficients for {} sets",
            lambdas.len(),
            sets.len()
        )));
    }
    let mut acc = sets[0].affine_map(coeff(lambdas[0])?, T::zero())?;
    for (&c, s) in lambdas[1..].iter().zip(&sets[1..]) {
        acc = acc.sumset(&s.affine_map(coeff(c)?, T::zero())?)?;
    }
    Ok(acc)
}
