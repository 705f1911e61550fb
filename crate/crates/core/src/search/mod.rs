//! Exhaustive search for the smallest dilate sums among sets of a given
//! size inside a window `{0, ..., W-1}`.
//!
//! Dilate-sum size is invariant under translation, dilation and reflection,
//! so only canonical sets are visited: minimum 0, element gcd 1, and not
//! lexicographically larger than the reflection `x -> max - x`.

mod store;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use store::{ResultsStore, WindowPolicy};

use crate::dilates::{dilate_sum_size, DilateTuple};
use crate::error::{Error, Result};
use crate::num_str;
use crate::IntSet;

pub const DEFAULT_BUDGET: u128 = 50_000_000;
pub const WITNESS_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest number of candidate sets (containing 0) a search may visit.
    pub budget: u128,
    pub witness_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            witness_cap: WITNESS_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub lambdas: DilateTuple,
    #[serde(serialize_with = "num_str::display", deserialize_with = "num_str::parse")]
    pub k: usize,
    #[serde(serialize_with = "num_str::display", deserialize_with = "num_str::parse")]
    pub n: usize,
    /// Exclusive upper end of the ground range `{0, ..., W-1}`.
    #[serde(serialize_with = "num_str::display", deserialize_with = "num_str::parse")]
    pub window: u64,
    #[serde(serialize_with = "num_str::display", deserialize_with = "num_str::parse")]
    pub min_size: usize,
    /// `S n - min_size`.
    #[serde(serialize_with = "num_str::display", deserialize_with = "num_str::parse")]
    pub empirical_constant: i128,
    /// Canonical minimizers in lexicographic order, at most `witness_cap`.
    pub witnesses: Vec<IntSet>,
    #[serde(serialize_with = "num_str::display", deserialize_with = "num_str::parse")]
    pub witness_count: u64,
    #[serde(serialize_with = "num_str::display", deserialize_with = "num_str::parse")]
    pub witness_cap: usize,
    #[serde(serialize_with = "num_str::display", deserialize_with = "num_str::parse")]
    pub candidates: u64,
    pub exhaustive: bool,
}

fn check_shape(n: usize, window: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::SetTooSmall(n));
    }
    if (n as u64) > window {
        return Err(Error::WindowTooSmall { n, window });
    }
    Ok(())
}

/// `C(n, r)`, `None` on overflow.
fn binomial(n: u64, r: u64) -> Option<u128> {
    let r = r.min(n - r);
    (0..r).try_fold(1u128, |acc, i| Some(acc.checked_mul((n - i) as u128)? / (i as u128 + 1)))
}

/// Number of size-`n` subsets of `{0, ..., W-1}` containing 0.
pub fn candidate_count(n: usize, window: u64) -> Result<u128> {
    check_shape(n, window)?;
    binomial(window - 1, n as u64 - 1).ok_or_else(|| Error::Overflow("candidate count".into()))
}

fn is_canonical(elems: &[i64]) -> bool {
    if elems.iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
        return false;
    }
    let max = elems[elems.len() - 1];
    let reflected = elems.iter().rev().map(|&x| max - x);
    // lexicographic comparison against the reflection
    for (a, b) in elems.iter().zip(reflected) {
        if *a != b {
            return *a < b;
        }
    }
    true
}

/// Canonical sets `{0, second, ...}` with a fixed second element.
fn with_prefix(n: usize, window: u64, second: i64) -> impl Iterator<Item = Vec<i64>> {
    let tail = n - 2;
    let lo = second + 1;
    let hi = window as i64;
    let mut idx: Vec<i64> = (lo..lo + tail as i64).collect();
    let mut done = lo + tail as i64 > hi;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let mut elems = Vec::with_capacity(n);
        elems.push(0);
        elems.push(second);
        elems.extend(&idx);
        // advance to the next combination of `tail` values from [lo, hi)
        let mut p = tail;
        loop {
            if p == 0 {
                done = true;
                break;
            }
            p -= 1;
            if idx[p] < hi - (tail - p) as i64 {
                idx[p] += 1;
                for q in p + 1..tail {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
        if is_canonical(&elems) {
            return Some(elems);
        }
    })
}

fn prefixes(n: usize, window: u64) -> std::ops::RangeInclusive<i64> {
    1..=(window as i64 - n as i64 + 1)
}

/// Canonical reduced sets of size `n` inside `{0, ..., W-1}`, in
/// lexicographic order.
pub fn enumerate_reduced(n: usize, window: u64) -> Result<impl Iterator<Item = IntSet>> {
    check_shape(n, window)?;
    Ok(prefixes(n, window)
        .flat_map(move |s| with_prefix(n, window, s))
        .map(IntSet::canonicalize))
}

struct Partial {
    min: usize,
    witnesses: Vec<IntSet>,
    count: u64,
    visited: u64,
}

impl Partial {
    fn merge(mut self, other: Partial, cap: usize) -> Partial {
        if other.min < self.min {
            return Partial {
                visited: self.visited + other.visited,
                ..other
            };
        }
        if other.min == self.min {
            self.count += other.count;
            let room = cap.saturating_sub(self.witnesses.len());
            self.witnesses.extend(other.witnesses.into_iter().take(room));
        }
        self.visited += other.visited;
        self
    }
}

fn scan(lambdas: &DilateTuple, n: usize, window: u64, second: i64, cap: usize) -> Result<Partial> {
    let mut acc = Partial {
        min: usize::MAX,
        witnesses: Vec::new(),
        count: 0,
        visited: 0,
    };
    for elems in with_prefix(n, window, second) {
        let set = IntSet::canonicalize(elems);
        let size = dilate_sum_size(lambdas, &set)?;
        acc.visited += 1;
        if size < acc.min {
            acc.min = size;
            acc.count = 0;
            acc.witnesses.clear();
        }
        if size == acc.min {
            acc.count += 1;
            if acc.witnesses.len() < cap {
                acc.witnesses.push(set);
            }
        }
    }
    Ok(acc)
}

/// Minimum of `|l_1*A + ... + l_k*A|` over canonical `A` of size `n` in
/// `{0, ..., W-1}`, with the default budget.
pub fn min_dilate_sum(lambdas: &DilateTuple, n: usize, window: u64) -> Result<SearchRecord> {
    min_dilate_sum_with(lambdas, n, window, &SearchConfig::default())
}

pub fn min_dilate_sum_with(lambdas: &DilateTuple, n: usize, window: u64, config: &SearchConfig) -> Result<SearchRecord> {
    let needed = candidate_count(n, window)?;
    if needed > config.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: config.budget,
        });
    }
    let lambdas = lambdas.sorted();
    let cap = config.witness_cap;
    // prefix items are merged in order, so the result is schedule-independent
    let parts = prefixes(n, window)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| scan(&lambdas, n, window, s, cap))
        .collect::<Result<Vec<_>>>()?;
    let best = parts
        .into_iter()
        .reduce(|a, b| a.merge(b, cap))
        .expect("at least one prefix");
    let s = lambdas.weight() as i128;
    Ok(SearchRecord {
        k: lambdas.k(),
        n,
        window,
        min_size: best.min,
        empirical_constant: s * n as i128 - best.min as i128,
        witnesses: best.witnesses,
        witness_count: best.count,
        witness_cap: cap,
        candidates: best.visited,
        exhaustive: true,
        lambdas,
    })
}

/// One record per `n` in `n_from..=n_to`, reusing and extending `store`.
/// `progress` sees each record and whether it came from the store.
pub fn constant_table(
    lambdas: &DilateTuple,
    n_from: usize,
    n_to: usize,
    policy: WindowPolicy,
    store: &ResultsStore,
    config: &SearchConfig,
    mut progress: impl FnMut(&SearchRecord, bool),
) -> Result<Vec<SearchRecord>> {
    if n_from < 2 {
        return Err(Error::SetTooSmall(n_from));
    }
    if n_to < n_from {
        return Err(Error::IndexRange(format!("empty size range {n_from}..{n_to}")));
    }
    let lambdas = lambdas.sorted();
    let mut cached = store.load(&lambdas)?;
    let mut out = Vec::new();
    for n in n_from..=n_to {
        let window = policy.window(n);
        if let Some(rec) = cached.iter().find(|r| r.n == n && r.window == window) {
            progress(rec, true);
            out.push(rec.clone());
            continue;
        }
        let rec = min_dilate_sum_with(&lambdas, n, window, config)?;
        progress(&rec, false);
        cached.push(rec.clone());
        store.save(&lambdas, &cached)?;
        out.push(rec);
    }
    Ok(out)
}
