//! Exact sums of dilates of finite integer sets.
//!
//! For coprime coefficients `l_1, ..., l_k` and a finite `A` of integers,
//! `|l_1*A + ... + l_k*A| >= (|l_1| + ... + |l_k|)|A| - C` with `C` depending
//! only on the coefficients. This crate computes the dilate sums (a
//! reference route and a bitset kernel), evaluates every constant and bound
//! in exact arithmetic, replays the lemmas behind the inequality on concrete
//! sets, and searches exhaustively for the smallest dilate sums.
//!
//! Set algebra is generic over the element type ([`Element`]); the aliases
//! below fix the common widths.

pub mod bounds;
pub mod dilates;
pub mod error;
pub mod intset;
mod num_str;
pub mod residue;
pub mod scalar;
pub mod search;
pub mod verify;

pub use bounds::{ConstantLedger, SubTupleMode, WeightProfile};
pub use dilates::{DilateTuple, KernelConfig};
pub use error::{Error, Result};
pub use intset::{AffineWitness, Set};
pub use scalar::Element;

/// The default set type: 64-bit elements.
pub type IntSet = Set<i64>;
pub type IntSet32 = Set<i32>;
pub type IntSet128 = Set<i128>;
pub type ResiduePartition = residue::ResiduePartition<i64>;
pub type FinePartition = residue::FinePartition<i64>;
