//! Canonical finite integer sets.
//!
//! A [`Set`] is a strictly increasing sequence of elements. Construction
//! always canonicalizes, so two sets are equal exactly when they hold the
//! same elements. The text literal format is a comma-separated list with
//! inclusive `a..b` range sugar, e.g. `0..4,9`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Element;

/// Upper bound on the number of elements a literal may expand to.
pub const MAX_LITERAL_ELEMENTS: u64 = 1 << 26;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Set<T> {
    elems: Vec<T>,
}

/// Affine map `x -> scale * x + shift` carrying a reduced set back to the
/// set it was reduced from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AffineWitness<T> {
    pub scale: T,
    pub shift: T,
}

impl<T: Element> Set<T> {
    pub fn empty() -> Self {
        Set { elems: Vec::new() }
    }

    /// Sorts and deduplicates `raw`.
    pub fn canonicalize<I: IntoIterator<Item = T>>(raw: I) -> Self {
        let mut elems: Vec<T> = raw.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        Set { elems }
    }

    /// Wraps an already strictly increasing vector.
    pub(crate) fn from_sorted(elems: Vec<T>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Set { elems }
    }

    /// `{start, start+1, ..., start+len-1}`.
    pub fn interval(start: T, len: usize) -> Result<Self> {
        let mut elems = Vec::with_capacity(len);
        let mut x = start;
        for i in 0..len {
            elems.push(x);
            if i + 1 < len {
                x = x
                    .checked_add(&T::one())
                    .ok_or_else(|| Error::Overflow("interval end".into()))?;
            }
        }
        Ok(Set { elems })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.elems.iter()
    }

    pub fn min_elem(&self) -> Option<T> {
        self.elems.first().copied()
    }

    pub fn max_elem(&self) -> Option<T> {
        self.elems.last().copied()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.elems.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &Self) -> Self {
        Set::canonicalize(self.elems.iter().chain(other.elems.iter()).copied())
    }

    pub fn difference(&self, other: &Self) -> Self {
        Set::from_sorted(
            self.elems
                .iter()
                .copied()
                .filter(|x| !other.contains(x))
                .collect(),
        )
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.elems.iter().all(|x| !large.contains(x))
    }

    fn nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyOperand)
        } else {
            Ok(())
        }
    }

    /// `{c*a + x : a in A}`.
    pub fn affine_map(&self, c: T, x: T) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut elems = self
            .elems
            .iter()
            .map(|&a| {
                c.checked_mul(&a)
                    .and_then(|ca| ca.checked_add(&x))
                    .ok_or_else(|| Error::Overflow(format!("{c}*{a}+{x}")))
            })
            .collect::<Result<Vec<T>>>()?;
        if c < T::zero() {
            elems.reverse();
        }
        Ok(Set::from_sorted(elems))
    }

    /// `{-a : a in A}`.
    pub fn negate(&self) -> Result<Self> {
        self.affine_map(-T::one(), T::zero())
    }

    /// Reflection anchored at the extremes: `{min + max - a}`.
    pub fn reflect(&self) -> Result<Self> {
        match (self.min_elem(), self.max_elem()) {
            (Some(lo), Some(hi)) => {
                let s = lo
                    .checked_add(&hi)
                    .ok_or_else(|| Error::Overflow("reflection".into()))?;
                self.affine_map(-T::one(), s)
            }
            _ => Ok(Set::empty()),
        }
    }

    /// Reference sumset by exhaustive pairing.
    pub fn sumset(&self, other: &Self) -> Result<Self> {
        self.nonempty()?;
        other.nonempty()?;
        let mut out = Vec::with_capacity(self.len() * other.len());
        for &a in &self.elems {
            for &b in &other.elems {
                out.push(
                    a.checked_add(&b)
                        .ok_or_else(|| Error::Overflow(format!("{a}+{b}")))?,
                );
            }
        }
        Ok(Set::canonicalize(out))
    }

    /// gcd of `a - min(A)` over the set; zero for singletons.
    pub fn difference_gcd(&self) -> Result<T> {
        self.nonempty()?;
        let lo = self.elems[0];
        let mut g = T::zero();
        for &a in &self.elems[1..] {
            let d = a
                .checked_sub(&lo)
                .ok_or_else(|| Error::Overflow("element difference".into()))?;
            g = g.gcd(&d);
        }
        Ok(g)
    }

    /// Normal form: minimum 0 and element gcd 1; singletons reduce to `{0}`.
    pub fn reduce(&self) -> Result<(Self, AffineWitness<T>)> {
        let g = self.difference_gcd()?;
        let shift = self.elems[0];
        let scale = if g.is_zero() { T::one() } else { g };
        let elems = self
            .elems
            .iter()
            .map(|&a| (a - shift) / scale)
            .collect::<Vec<T>>();
        Ok((Set::from_sorted(elems), AffineWitness { scale, shift }))
    }

    pub fn is_reduced(&self) -> Result<bool> {
        self.nonempty()?;
        if !self.elems[0].is_zero() {
            return Ok(false);
        }
        if self.len() == 1 {
            return Ok(true);
        }
        Ok(self.difference_gcd()?.is_one())
    }
}

impl<T: Element> AffineWitness<T> {
    pub fn apply(&self, set: &Set<T>) -> Result<Set<T>> {
        set.affine_map(self.scale, self.shift)
    }
}

impl<T: Element> FromIterator<T> for Set<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Set::canonicalize(iter)
    }
}

impl<'a, T> IntoIterator for &'a Set<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

impl<T: Element> fmt::Display for Set<T> {
    /// Literal form; runs of three or more consecutive integers print as
    /// `a..b`, the empty set as `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elems.is_empty() {
            return f.write_str("{}");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.elems.len() {
            let mut j = i;
            while j + 1 < self.elems.len()
                && self.elems[j].checked_add(&T::one()) == Some(self.elems[j + 1])
            {
                j += 1;
            }
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if j - i >= 2 {
                write!(f, "{}..{}", self.elems[i], self.elems[j])?;
                i = j + 1;
            } else {
                write!(f, "{}", self.elems[i])?;
                i += 1;
            }
        }
        Ok(())
    }
}

impl<T: Element> fmt::Debug for Set<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

fn parse_elem<T: Element>(tok: &str) -> Result<T> {
    tok.trim()
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("bad integer {tok:?}")))
}

impl<T: Element> FromStr for Set<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut body = s.trim();
        if let Some(inner) = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
            body = inner.trim();
        }
        if body.is_empty() {
            return Ok(Set::empty());
        }
        let mut elems = Vec::new();
        for tok in body.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(Error::Parse(format!("empty item in {s:?}")));
            }
            match tok.split_once("..") {
                Some((lo, hi)) => {
                    let lo: T = parse_elem(lo)?;
                    let hi: T = parse_elem(hi)?;
                    if lo > hi {
                        return Err(Error::Parse(format!("descending range {tok:?}")));
                    }
                    let count = (hi.widen() - lo.widen()) as u128 + 1;
                    if count + elems.len() as u128 > MAX_LITERAL_ELEMENTS as u128 {
                        return Err(Error::Parse(format!("range {tok:?} is too long")));
                    }
                    let mut x = lo;
                    loop {
                        elems.push(x);
                        if x == hi {
                            break;
                        }
                        x = x + T::one();
                    }
                }
                None => elems.push(parse_elem(tok)?),
            }
            if elems.len() as u64 > MAX_LITERAL_ELEMENTS {
                return Err(Error::Parse("literal is too long".into()));
            }
        }
        Ok(Set::canonicalize(elems))
    }
}

impl<T: Element> Serialize for Set<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, T: Element> Deserialize<'de> for Set<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
