//! Bitset shift-or kernel for sums of dilates.
//!
//! The set is translated to start at 0 and each dilate `l*A` becomes
//! `|l| * B` with `B` the translated set, or its reflection when `l < 0`;
//! the translation of the sum is recorded once as `base`. Dilates are
//! folded in decreasing `|l|`: the first seeds the accumulator, each later
//! one is a shift-or pass `out |= acc << d` over its elements `d`.
//!
//! Output words that are already all ones are dropped from the active
//! list every few shifts, so dense sums stop paying for saturated regions.

use crate::dilates::DilateTuple;
use crate::error::{Error, Result};
use crate::intset::Set;
use crate::scalar::Element;

/// Kernel limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelConfig {
    /// Largest output span, in bits, the kernel will allocate.
    pub bit_budget: u64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig { bit_budget: 1 << 26 }
    }
}

const COMPACT_EVERY: usize = 16;

#[derive(Clone, Debug)]
struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// The 64 bits starting at `pos`, zero-filled outside `[0, len)`.
    #[inline]
    fn window(&self, pos: i64) -> u64 {
        if pos <= -64 || pos >= self.len as i64 {
            return 0;
        }
        if pos < 0 {
            return self.words[0] << (-pos) as u32;
        }
        let pos = pos as usize;
        let (w, b) = (pos / 64, pos % 64);
        let lo = self.words[w] >> b;
        if b == 0 || w + 1 == self.words.len() {
            lo
        } else {
            lo | (self.words[w + 1] << (64 - b))
        }
    }

    fn full_word(&self, w: usize) -> u64 {
        let rem = self.len - w * 64;
        if rem >= 64 {
            u64::MAX
        } else {
            (1u64 << rem) - 1
        }
    }

    fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// `OR over d in shifts of (self << d)`, truncated to `out_len` bits.
    fn shift_or(&self, shifts: &[usize], out_len: usize) -> Bits {
        let mut out = Bits::zeros(out_len);
        if self.len == 0 {
            return out;
        }
        let mut active: Vec<usize> = (0..out.words.len()).collect();
        for (n, &d) in shifts.iter().enumerate() {
            let lo = d / 64;
            let hi = ((d + self.len - 1) / 64).min(out.words.len() - 1);
            let start = active.partition_point(|&w| w < lo);
            for &w in &active[start..] {
                if w > hi {
                    break;
                }
                out.words[w] |= self.window(w as i64 * 64 - d as i64);
            }
            if (n + 1) % COMPACT_EVERY == 0 {
                active.retain(|&w| out.words[w] != out.full_word(w));
                if active.is_empty() {
                    break;
                }
            }
        }
        out
    }
}

/// Positions of `|l| * B` for one dilate, ascending.
fn scaled_positions(offsets: &[u64], reflected: &[u64], c: i64) -> Vec<usize> {
    let scale = c.unsigned_abs() as usize;
    let src = if c > 0 { offsets } else { reflected };
    src.iter().map(|&o| o as usize * scale).collect()
}

fn run<T: Element>(lambdas: &DilateTuple, a: &Set<T>, config: &KernelConfig) -> Result<(Bits, i128)> {
    let (Some(lo), Some(hi)) = (a.min_elem(), a.max_elem()) else {
        return Err(Error::EmptyOperand);
    };
    lambdas.check_fits(a)?;
    let (lo, hi) = (lo.widen(), hi.widen());
    let range = (hi - lo) as u128;
    let needed = lambdas.weight() as u128 * range + 1;
    if needed > config.bit_budget as u128 {
        return Err(Error::WindowOverflow {
            needed,
            budget: config.bit_budget,
        });
    }
    let base: i128 = lambdas
        .coeffs()
        .iter()
        .map(|&c| c as i128 * if c > 0 { lo } else { hi })
        .sum();

    let offsets: Vec<u64> = a.iter().map(|x| (x.widen() - lo) as u64).collect();
    let reflected: Vec<u64> = a.iter().rev().map(|x| (hi - x.widen()) as u64).collect();

    let mut order: Vec<i64> = lambdas.coeffs().to_vec();
    order.sort_by_key(|c| std::cmp::Reverse(c.unsigned_abs()));

    let first = order[0];
    let mut span = first.unsigned_abs() as usize * range as usize;
    let mut acc = Bits::zeros(span + 1);
    for p in scaled_positions(&offsets, &reflected, first) {
        acc.set(p);
    }
    for &c in &order[1..] {
        let shifts = scaled_positions(&offsets, &reflected, c);
        span += c.unsigned_abs() as usize * range as usize;
        acc = acc.shift_or(&shifts, span + 1);
    }
    Ok((acc, base))
}

/// Bitset-kernel dilate sum with the default bit budget.
pub fn dilate_sum_fast<T: Element>(lambdas: &DilateTuple, a: &Set<T>) -> Result<Set<T>> {
    dilate_sum_fast_with(lambdas, a, &KernelConfig::default())
}

pub fn dilate_sum_fast_with<T: Element>(
    lambdas: &DilateTuple,
    a: &Set<T>,
    config: &KernelConfig,
) -> Result<Set<T>> {
    let (bits, base) = run(lambdas, a, config)?;
    let elems = bits
        .ones()
        .map(|i| {
            T::narrow(base + i as i128).ok_or_else(|| Error::Overflow("dilate-sum element".into()))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(Set::from_sorted(elems))
}

/// `|l_1*A + ... + l_k*A|` without materializing the elements.
pub fn dilate_sum_size<T: Element>(lambdas: &DilateTuple, a: &Set<T>) -> Result<usize> {
    dilate_sum_size_with(lambdas, a, &KernelConfig::default())
}

pub fn dilate_sum_size_with<T: Element>(
    lambdas: &DilateTuple,
    a: &Set<T>,
    config: &KernelConfig,
) -> Result<usize> {
    Ok(run(lambdas, a, config)?.0.count_ones())
}
