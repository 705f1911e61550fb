//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's sum routines.

#![allow(dead_code)]

use std::collections::BTreeSet;

use dilate_core::{DilateTuple, IntSet};

pub const FAMILY: [&[i64]; 7] = [&[1, 1], &[1, 2], &[1, 3], &[2, 3], &[1, -2], &[3, 5], &[1, 2, 3]];

pub fn tuple(v: &[i64]) -> DilateTuple {
    DilateTuple::new(v.to_vec()).unwrap()
}

pub fn family() -> Vec<DilateTuple> {
    FAMILY.iter().map(|c| tuple(c)).collect()
}

pub fn set(v: &[i64]) -> IntSet {
    IntSet::canonicalize(v.iter().copied())
}

/// `{l_1 a_1 + ... + l_k a_k}` over every k-tuple of elements, by an
/// explicit odometer over indices.
pub fn oracle_sum(lambdas: &[i64], a: &[i64]) -> BTreeSet<i64> {
    oracle_mixed(lambdas, &vec![a; lambdas.len()])
}

/// `l_1 * A_1 + ... + l_k * A_k` by the same odometer.
pub fn oracle_mixed(lambdas: &[i64], sets: &[&[i64]]) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    if sets.iter().any(|s| s.is_empty()) {
        return out;
    }
    let mut idx = vec![0usize; sets.len()];
    loop {
        out.insert(idx.iter().zip(sets).zip(lambdas).map(|((&i, s), &l)| l * s[i]).sum());
        let mut p = 0;
        while p < idx.len() {
            idx[p] += 1;
            if idx[p] < sets[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == idx.len() {
            return out;
        }
    }
}

/// Every subset of `{lo, ..., hi}` as a sorted vector, via bit masks.
pub fn subsets(lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    let width = (hi - lo + 1) as u32;
    (0u64..1 << width).map(move |mask| (0..width).filter(|b| mask >> b & 1 == 1).map(|b| lo + b as i64).collect())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Contains 0 and the elements have gcd 1.
pub fn is_reduced(a: &[i64]) -> bool {
    a.first() == Some(&0) && a.iter().fold(0, |g, &x| gcd(g, x)) == 1
}

/// Reduced subsets of `{0, ..., hi}` with `min_len <= |A| <= max_len`.
pub fn reduced_subsets(hi: i64, min_len: usize, max_len: usize) -> Vec<Vec<i64>> {
    subsets(0, hi)
        .filter(|a| (min_len..=max_len).contains(&a.len()) && is_reduced(a))
        .collect()
}

/// Size-`n` subsets of `{0, ..., w-1}` as sorted vectors, by recursion.
pub fn combinations(w: i64, n: usize) -> Vec<Vec<i64>> {
    fn go(start: i64, w: i64, n: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in start..w {
            if w - x < (n - cur.len()) as i64 {
                break;
            }
            cur.push(x);
            go(x + 1, w, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, w, n, &mut Vec::new(), &mut out);
    out
}

/// Minimum dilate-sum size over every size-`n` subset of `{0, ..., w-1}`
/// containing 0, together with the subsets attaining it.
pub fn oracle_min(lambdas: &[i64], n: usize, w: i64) -> (usize, Vec<Vec<i64>>) {
    let mut best = usize::MAX;
    let mut hits = Vec::new();
    for rest in combinations(w - 1, n - 1) {
        let mut a = vec![0];
        a.extend(rest.iter().map(|x| x + 1));
        let size = oracle_sum(lambdas, &a).len();
        if size < best {
            best = size;
            hits.clear();
        }
        if size == best {
            hits.push(a);
        }
    }
    (best, hits)
}
