//! Coefficient rings for the Magnus algebra.
//!
//! The series arithmetic only needs a commutative ring with unit, so it is
//! written against [`Coefficient`]. Anything that extracts Milnor numbers
//! (gcds, residues) additionally needs exact integers, see [`IntCoefficient`].

use std::fmt::{Debug, Display};
use std::ops::{Neg, Sub};

use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// A commutative ring element usable as a series coefficient.
pub trait Coefficient:
    Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Send + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Send
        + Sync
{
}

/// Exact signed integers (`i64`, `i128`, `BigInt`).
pub trait IntCoefficient:
    Coefficient + Integer + Signed + Display + ToPrimitive + FromPrimitive
{
}

impl<T> IntCoefficient for T where
    T: Coefficient + Integer + Signed + Display + ToPrimitive + FromPrimitive
{
}
