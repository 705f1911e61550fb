//! Element types for integer sets.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{PrimInt, Signed};

/// A signed primitive integer usable as a set element.
///
/// All arithmetic on elements goes through the checked operations of
/// [`PrimInt`], so the element type doubles as the overflow window.
pub trait Element:
    PrimInt + Signed + Integer + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
    /// Widens to `i128`; every implementor fits.
    fn widen(self) -> i128 {
        self.to_i128().expect("signed primitive fits in i128")
    }

    /// Narrows from `i128`, `None` when out of range.
    fn narrow(v: i128) -> Option<Self> {
        Self::from(v)
    }
}

impl<T> Element for T where
    T: PrimInt + Signed + Integer + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
}
